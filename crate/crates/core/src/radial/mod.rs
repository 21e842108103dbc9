//! Ball-reduced eigenproblems.
//!
//! On a ball `B(R)` in `R^m` the weighted Robin problem separates into radial ODEs
//!
//! ```text
//! w'' + ((m-1)/r + h'(r)) w' + (lambda - l(m-1)/r^2) w = 0,   w'(R) + alpha w(R) = 0,
//! ```
//!
//! with angular mode `l = 0` (`w'(0) = 0`) or `l = 1` (`w(0) = 0`). The second ball eigenvalue is
//! the smaller of the first mode-1 eigenvalue `mu_1` and the second mode-0 eigenvalue `tau_2`.
//! Eigenvalues are located by shooting ([`solve_radial`]) and cross-checked against an
//! independent finite-difference discretization ([`solve_radial_fd_oracle`]).

mod energy;
mod fd;
mod shooting;

pub use energy::{extend_g, f_profile, write_radial_csv, FSamples};
pub use fd::{solve_radial_fd_oracle, solve_radial_fd_oracle_lowest};
pub use shooting::{lambda1_ball, lambda2_ball, solve_radial, steklov_ball, Lambda2Ball};

use crate::error::{Error, Result};
use crate::quadrature::{GL4_NODES, GL4_WEIGHTS};
use crate::weights::{sphere_area, WeightProfile};

/// Default number of uniform output samples on `(0, R]`.
pub const DEFAULT_GRID_POINTS: usize = 1024;
/// Series start of the shooting integration, relative to `R`.
pub const START_FRACTION: f64 = 1e-6;
/// Absolute eigenvalue tolerance factor: eigenvalues are located to `TOL_EIG * max(1, |lambda|)`.
pub const TOL_EIG: f64 = 1e-9;
/// Boundary-condition residual tolerance, relative to `max(|g(R)|, 1)`.
pub const TOL_BC: f64 = 1e-7;
/// Three-point-stencil ODE residual tolerance.
pub const TOL_ODE: f64 = 1e-5;
/// Relative tolerance on positive increments of `F`.
pub const TOL_MONO: f64 = 1e-8;

/// Angular mode of a separated ball eigenfunction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AngularMode {
    /// Radial functions, `w'(0) = 0`.
    Radial,
    /// Functions `w(r) x_i / r`, `w(0) = 0`.
    First,
}

impl AngularMode {
    pub fn index(self) -> usize {
        match self {
            AngularMode::Radial => 0,
            AngularMode::First => 1,
        }
    }

    pub fn from_index(l: usize) -> Result<Self> {
        match l {
            0 => Ok(AngularMode::Radial),
            1 => Ok(AngularMode::First),
            _ => Err(Error::Parameter(format!(
                "angular mode must be 0 or 1, got {l}"
            ))),
        }
    }
}

/// A radial Robin eigenproblem on `B(R)` in `R^m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialProblem {
    pub profile: WeightProfile,
    pub m: usize,
    pub radius: f64,
    pub alpha: f64,
    pub angular_mode: AngularMode,
}

impl RadialProblem {
    pub fn new(
        profile: WeightProfile,
        m: usize,
        radius: f64,
        alpha: f64,
        angular_mode: AngularMode,
    ) -> Result<Self> {
        let p = Self {
            profile,
            m,
            radius,
            alpha,
            angular_mode,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.m < 2 {
            return Err(Error::Parameter(format!(
                "dimension m must be >= 2, got {}",
                self.m
            )));
        }
        if !(self.radius > 0.0 && self.radius.is_finite()) {
            return Err(Error::Parameter(format!(
                "radius must be positive, got {}",
                self.radius
            )));
        }
        if !self.alpha.is_finite() {
            return Err(Error::Parameter(format!(
                "alpha must be finite, got {}",
                self.alpha
            )));
        }
        Ok(())
    }

    fn ell(&self) -> f64 {
        self.angular_mode.index() as f64
    }

    /// `g''` from the ODE, given `g` and `g'` at `r > 0`.
    pub(crate) fn second_derivative(&self, lambda: f64, r: f64, g: f64, gp: f64) -> f64 {
        let mm1 = (self.m - 1) as f64;
        -(mm1 / r + self.profile.h_prime(r)) * gp - (lambda - self.ell() * mm1 / (r * r)) * g
    }

    /// Truncated power series of the normalized solution near the origin.
    pub(crate) fn series(&self, lambda: f64, r: f64) -> (f64, f64) {
        let m = self.m as f64;
        match self.angular_mode {
            AngularMode::Radial => (1.0 - lambda * r * r / (2.0 * m), -lambda * r / m),
            AngularMode::First => {
                let b = -self.profile.h_prime(0.0) / (m + 1.0);
                (r + b * r * r, 1.0 + 2.0 * b * r)
            }
        }
    }
}

/// Nodal data of the computed eigenfunction on `[eps, R]`, used for interpolation.
#[derive(Debug, Clone, PartialEq)]
struct Interior {
    r: Vec<f64>,
    g: Vec<f64>,
    gp: Vec<f64>,
}

/// An eigenvalue with its eigenfunction sampled on a radial grid.
///
/// `g` is normalized by `g'(0) = 1` in mode 1 and `g(0) = 1` in mode 0. Beyond `R` the function is
/// continued by `g(R) e^{-alpha (r - R)}`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialSolution {
    pub eigenvalue: f64,
    /// 1-based position of the eigenvalue within its angular mode.
    pub index: usize,
    pub grid: Vec<f64>,
    pub g_values: Vec<f64>,
    pub g_prime_values: Vec<f64>,
    pub problem: RadialProblem,
    interior: Interior,
}

impl RadialSolution {
    fn from_interior(
        eigenvalue: f64,
        index: usize,
        problem: RadialProblem,
        interior: Interior,
    ) -> Self {
        let grid = interior.r[1..].to_vec();
        let g_values = interior.g[1..].to_vec();
        let g_prime_values = interior.gp[1..].to_vec();
        Self {
            eigenvalue,
            index,
            grid,
            g_values,
            g_prime_values,
            problem,
            interior,
        }
    }

    pub fn radius(&self) -> f64 {
        self.problem.radius
    }

    /// `g(R)` and `g'(R)`.
    pub fn boundary_values(&self) -> (f64, f64) {
        let n = self.interior.r.len() - 1;
        (self.interior.g[n], self.interior.gp[n])
    }

    /// `|g'(R) + alpha g(R)|`.
    pub fn boundary_residual(&self) -> f64 {
        let (g, gp) = self.boundary_values();
        (gp + self.problem.alpha * g).abs()
    }

    /// Evaluates `(g(r), g'(r))` for any `r >= 0`.
    ///
    /// Between nodes `g` is the cubic Hermite interpolant and `g'` the Hermite interpolant of
    /// `(g', g'')` with `g''` taken from the ODE. Below the series start the series is used, above
    /// `R` the exponential continuation.
    pub fn eval(&self, r: f64) -> (f64, f64) {
        let p = &self.problem;
        let rr = &self.interior.r;
        let n = rr.len() - 1;
        if r > p.radius {
            let (g_r, _) = self.boundary_values();
            let g = g_r * (-p.alpha * (r - p.radius)).exp();
            return (g, -p.alpha * g);
        }
        if r <= rr[0] {
            let (g0, _) = p.series(self.eigenvalue, rr[0]);
            let (g, gp) = p.series(self.eigenvalue, r);
            // rescale so the series joins the integrated data continuously
            let s = self.interior.g[0] / g0;
            return (s * g, s * gp);
        }
        let j = match rr.binary_search_by(|x| x.partial_cmp(&r).unwrap()) {
            Ok(j) => return (self.interior.g[j], self.interior.gp[j]),
            Err(j) => (j - 1).min(n - 1),
        };
        let (a, b) = (rr[j], rr[j + 1]);
        let d = b - a;
        let t = (r - a) / d;
        let (ga, gb) = (self.interior.g[j], self.interior.g[j + 1]);
        let (pa, pb) = (self.interior.gp[j], self.interior.gp[j + 1]);
        let qa = p.second_derivative(self.eigenvalue, a, ga, pa);
        let qb = p.second_derivative(self.eigenvalue, b, gb, pb);
        (hermite(t, d, ga, gb, pa, pb), hermite(t, d, pa, pb, qa, qb))
    }

    /// `F(r) = g'^2 + (m-1) g^2/r^2 + 2 alpha g g' + alpha ((m-1)/r + h'(r)) g^2`.
    pub fn energy_density(&self, r: f64) -> f64 {
        let (g, gp) = self.eval(r);
        energy_density_at(&self.problem, r, g, gp)
    }

    /// `int_{B(r_max)} f(r, g, g') e^{h} dx` by composite four-point Gauss over the nodes.
    pub fn ball_integral<F>(&self, r_max: f64, f: F) -> f64
    where
        F: Fn(f64, f64, f64) -> f64,
    {
        let p = &self.problem;
        let mm1 = (p.m - 1) as i32;
        let mut breaks = Vec::with_capacity(self.interior.r.len() + 2);
        breaks.push(0.0);
        breaks.extend(self.interior.r.iter().copied().filter(|&x| x < r_max));
        if r_max > p.radius {
            let h = p.radius / (self.interior.r.len() - 1) as f64;
            let k = ((r_max - p.radius) / h).ceil().max(1.0) as usize;
            breaks.extend((1..k).map(|i| p.radius + (r_max - p.radius) * i as f64 / k as f64));
        }
        breaks.push(r_max);
        let mut total = 0.0;
        for w in breaks.windows(2) {
            let (a, b) = (w[0], w[1]);
            if b <= a {
                continue;
            }
            let half = 0.5 * (b - a);
            let mid = 0.5 * (a + b);
            for (x, wt) in GL4_NODES.iter().zip(GL4_WEIGHTS.iter()) {
                let r = mid + half * x;
                let (g, gp) = self.eval(r);
                total += wt * half * f(r, g, gp) * p.profile.density(r) * r.powi(mm1);
            }
        }
        sphere_area(p.m) * total
    }

    /// Largest ODE residual over interior grid points, with `g''` from the three-point stencil
    /// on the sampled `g'`, relative to the largest magnitude of the terms of the equation on the
    /// grid (at least `max|g|/R^2`).
    pub fn max_ode_residual(&self) -> f64 {
        let p = &self.problem;
        let mm1 = (p.m - 1) as f64;
        let (g, gp) = (&self.g_values, &self.g_prime_values);
        let mut samples = Vec::with_capacity(self.grid.len());
        for i in 1..self.grid.len().saturating_sub(1) {
            let (r0, r, r1) = (self.grid[i - 1], self.grid[i], self.grid[i + 1]);
            if r1 > p.radius {
                break;
            }
            let (h0, h1) = (r - r0, r1 - r);
            let d2 = (h0 * h0 * gp[i + 1] + (h1 * h1 - h0 * h0) * gp[i] - h1 * h1 * gp[i - 1])
                / (h0 * h1 * (h0 + h1));
            let drift = (mm1 / r + p.profile.h_prime(r)) * gp[i];
            let reaction = (self.eigenvalue - p.ell() * mm1 / (r * r)) * g[i];
            samples.push((
                (d2 + drift + reaction).abs(),
                d2.abs() + drift.abs() + reaction.abs(),
            ));
        }
        let g_max = g.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        let scale = samples
            .iter()
            .fold(g_max / (p.radius * p.radius), |a, s| a.max(s.1));
        samples.iter().fold(0.0f64, |a, s| a.max(s.0)) / scale
    }

    /// Number of sign changes of `g` on the sample grid.
    pub fn sign_changes(&self) -> usize {
        count_sign_changes(&self.g_values)
    }
}

pub(crate) fn energy_density_at(p: &RadialProblem, r: f64, g: f64, gp: f64) -> f64 {
    let mm1 = (p.m - 1) as f64;
    let a = p.alpha;
    gp * gp
        + mm1 * g * g / (r * r)
        + 2.0 * a * g * gp
        + a * (mm1 / r + p.profile.h_prime(r)) * g * g
}

pub(crate) fn count_sign_changes(values: &[f64]) -> usize {
    let mut last = 0.0f64;
    let mut changes = 0;
    for &v in values {
        if v != 0.0 {
            if last != 0.0 && v.signum() != last.signum() {
                changes += 1;
            }
            last = v;
        }
    }
    changes
}

fn hermite(t: f64, d: f64, ya: f64, yb: f64, da: f64, db: f64) -> f64 {
    let t2 = t * t;
    let t3 = t2 * t;
    let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    let h10 = t3 - 2.0 * t2 + t;
    let h01 = -2.0 * t3 + 3.0 * t2;
    let h11 = t3 - t2;
    h00 * ya + h10 * d * da + h01 * yb + h11 * d * db
}
