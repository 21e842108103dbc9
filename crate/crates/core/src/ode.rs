//! Adaptive Dormand–Prince 5(4) integrator for small fixed-size systems.

use crate::error::{Error, Result};

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// b - b* (fifth minus embedded fourth order weights)
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// Step-size control settings.
#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            rtol: 1e-10,
            atol: 1e-20,
            max_steps: 1_000_000,
        }
    }
}

/// Integration state that can be advanced repeatedly; the step size carries over between calls.
pub struct Dopri5<const N: usize> {
    pub t: f64,
    pub y: [f64; N],
    h: f64,
    tol: Tolerances,
    steps: usize,
}

fn axpy<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for (c, k) in terms {
        for i in 0..N {
            out[i] += h * c * k[i];
        }
    }
    out
}

impl<const N: usize> Dopri5<N> {
    pub fn new(t0: f64, y0: [f64; N], initial_step: f64, tol: Tolerances) -> Self {
        Self {
            t: t0,
            y: y0,
            h: initial_step,
            tol,
            steps: 0,
        }
    }

    /// Advances to `t_end`, calling `on_step(t, y)` after every accepted step.
    pub fn advance_to<F, O>(&mut self, t_end: f64, mut f: F, mut on_step: O) -> Result<()>
    where
        F: FnMut(f64, &[f64; N]) -> [f64; N],
        O: FnMut(f64, &[f64; N]),
    {
        let dir = (t_end - self.t).signum();
        if dir == 0.0 {
            return Ok(());
        }
        self.h = self.h.abs() * dir;
        let mut k1 = f(self.t, &self.y);
        loop {
            let remaining = t_end - self.t;
            if remaining * dir <= 0.0 {
                return Ok(());
            }
            let last = self.h.abs() >= remaining.abs();
            let h = if last { remaining } else { self.h };

            let t = self.t;
            let y = &self.y;
            let k2 = f(t + C2 * h, &axpy(y, h, &[(A21, &k1)]));
            let k3 = f(t + C3 * h, &axpy(y, h, &[(A31, &k1), (A32, &k2)]));
            let k4 = f(
                t + C4 * h,
                &axpy(y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]),
            );
            let k5 = f(
                t + C5 * h,
                &axpy(y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
            );
            let k6 = f(
                t + h,
                &axpy(
                    y,
                    h,
                    &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
                ),
            );
            let y_new = axpy(
                y,
                h,
                &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)],
            );
            let k7 = f(t + h, &y_new);

            let mut err = 0.0;
            for i in 0..N {
                let e = h
                    * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
                let sc = self.tol.atol + self.tol.rtol * y[i].abs().max(y_new[i].abs());
                err += (e / sc).powi(2);
            }
            let err = (err / N as f64).sqrt();
            if !err.is_finite() {
                return Err(Error::Evaluation(format!(
                    "non-finite ODE state near t = {t}"
                )));
            }

            self.steps += 1;
            if self.steps > self.tol.max_steps {
                return Err(Error::convergence("ODE integration (step cap)", t, t_end));
            }

            let factor = if err == 0.0 {
                5.0
            } else {
                (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
            };
            if err <= 1.0 {
                self.t = if last { t_end } else { t + h };
                self.y = y_new;
                k1 = k7;
                on_step(self.t, &self.y);
                if !last {
                    self.h = h * factor;
                }
            } else {
                self.h = h * factor.min(1.0);
                if self.h.abs() < 1e-15 * t.abs().max(1e-300) {
                    return Err(Error::convergence(
                        "ODE integration (step underflow)",
                        t,
                        t_end,
                    ));
                }
            }
        }
    }
}
