//! Finite-difference style oracle for the radial problems, independent of the shooting solver.
//!
//! The self-adjoint form `-(p w')' = lambda p w` with `p = r^{m-1} e^h` is discretized on a
//! uniform grid of `[0, R]` by two-node elements whose shape functions are `p`-harmonic (exact
//! for the flux), with a mass matrix averaged between its consistent and row-lumped forms. Mode 1
//! is treated through `w = r v`, which turns it into a regular problem for `v` with weight
//! `r^{m+1} e^h`, potential `-h'/r` and Robin parameter `alpha + 1/R`.

use super::{AngularMode, RadialProblem};
use crate::error::{Error, Result};
use crate::quadrature::{GL8_NODES, GL8_WEIGHTS};

const MIN_ELEMENTS: usize = 50;
const BISECTION_CAP: usize = 400;

/// Symmetric tridiagonal pencil `(K, M)`.
struct Pencil {
    kd: Vec<f64>,
    ko: Vec<f64>,
    md: Vec<f64>,
    mo: Vec<f64>,
}

impl Pencil {
    /// Number of eigenvalues below `lambda`: negative pivots of `K - lambda M`.
    fn count_below(&self, lambda: f64) -> usize {
        let mut count = 0;
        let mut u = 1.0;
        for i in 0..self.kd.len() {
            let d = self.kd[i] - lambda * self.md[i];
            u = if i == 0 {
                d
            } else {
                let e = self.ko[i - 1] - lambda * self.mo[i - 1];
                d - e * e / u
            };
            if u == 0.0 {
                u = -f64::EPSILON * d.abs().max(f64::MIN_POSITIVE);
            }
            if u < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn dim(&self) -> usize {
        self.kd.len()
    }

    /// The `j`-th (0-based) eigenvalue by Sturm bisection.
    fn eigenvalue(&self, j: usize) -> Result<f64> {
        let mut lo = -1.0f64;
        let mut it = 0;
        while self.count_below(lo) > j {
            lo = 2.0 * lo - 1.0;
            it += 1;
            if it > BISECTION_CAP || !lo.is_finite() {
                return Err(Error::convergence("oracle lower bound", lo, f64::NAN));
            }
        }
        let mut hi = 1.0f64;
        it = 0;
        while self.count_below(hi) <= j {
            hi = 2.0 * hi + 1.0;
            it += 1;
            if it > BISECTION_CAP || !hi.is_finite() {
                return Err(Error::convergence("oracle upper bound", lo, hi));
            }
        }
        for _ in 0..BISECTION_CAP {
            let mid = 0.5 * (lo + hi);
            if hi - lo <= 1e-14 * mid.abs().max(1.0) || mid == lo || mid == hi {
                return Ok(mid);
            }
            if self.count_below(mid) > j {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }
}

fn build(problem: &RadialProblem, n: usize) -> Result<Pencil> {
    problem.validate()?;
    if n < MIN_ELEMENTS {
        return Err(Error::Parameter(format!(
            "oracle needs at least {MIN_ELEMENTS} points, got {n}"
        )));
    }
    let prof = problem.profile;
    let radius = problem.radius;
    let (dim, robin) = match problem.angular_mode {
        AngularMode::Radial => (problem.m, problem.alpha),
        AngularMode::First => (problem.m + 2, problem.alpha + 1.0 / radius),
    };
    let p = |r: f64| r.powi(dim as i32 - 1) * prof.density(r);
    let potential = problem.angular_mode == AngularMode::First;

    let mut pen = Pencil {
        kd: vec![0.0; n + 1],
        ko: vec![0.0; n],
        md: vec![0.0; n + 1],
        mo: vec![0.0; n],
    };
    let d = radius / n as f64;
    let half = 0.5 * d;
    for e in 0..n {
        let a = radius * e as f64 / n as f64;
        let mut q = [0.0; 8];
        let mut w = [0.0; 8];
        let mut f1 = [0.0; 8];
        for j in 0..8 {
            q[j] = a + half * (GL8_NODES[j] + 1.0);
            w[j] = half * GL8_WEIGHTS[j];
        }
        let k = if e == 0 {
            // 1/p is not integrable at the origin: linear shape functions on the first element
            for j in 0..8 {
                f1[j] = (q[j] - a) / d;
            }
            (0..8).map(|j| w[j] * p(q[j])).sum::<f64>() / (d * d)
        } else {
            let g: f64 = (0..8).map(|j| w[j] / p(q[j])).sum();
            for j in 0..8 {
                let s = 0.5 * (q[j] - a);
                let phi: f64 = (0..8)
                    .map(|i| GL8_WEIGHTS[i] * s / p(a + s * (GL8_NODES[i] + 1.0)))
                    .sum();
                f1[j] = phi / g;
            }
            1.0 / g
        };
        let mixed = |weight: &dyn Fn(f64) -> f64| {
            let (mut m00, mut m01, mut m11) = (0.0, 0.0, 0.0);
            for j in 0..8 {
                let c = w[j] * weight(q[j]);
                let f0 = 1.0 - f1[j];
                m00 += c * f0 * f0;
                m01 += c * f0 * f1[j];
                m11 += c * f1[j] * f1[j];
            }
            // average of consistent and row-lumped element matrices
            (0.5 * (m00 + m01 + m00), 0.5 * m01, 0.5 * (m01 + m11 + m11))
        };
        let (m00, m01, m11) = mixed(&p);
        let (mut k00, mut k01, mut k11) = (k, -k, k);
        if potential {
            let (v00, v01, v11) = mixed(&|r: f64| -prof.h_prime(r) / r * p(r));
            k00 += v00;
            k01 += v01;
            k11 += v11;
        }
        pen.kd[e] += k00;
        pen.kd[e + 1] += k11;
        pen.ko[e] = k01;
        pen.md[e] += m00;
        pen.md[e + 1] += m11;
        pen.mo[e] = m01;
    }
    let p_r = p(radius);
    pen.kd[n] += robin * p_r;
    // boundary mass correction matching the second-order Robin flux
    pen.md[n] += robin * p_r * d * d / 12.0;
    Ok(pen)
}

/// All eigenvalues of the oracle pencil on `n_points` uniform elements, sorted.
pub fn solve_radial_fd_oracle(problem: &RadialProblem, n_points: usize) -> Result<Vec<f64>> {
    let pen = build(problem, n_points)?;
    (0..pen.dim()).map(|j| pen.eigenvalue(j)).collect()
}

/// The `count` smallest eigenvalues of the oracle pencil, sorted.
pub fn solve_radial_fd_oracle_lowest(
    problem: &RadialProblem,
    n_points: usize,
    count: usize,
) -> Result<Vec<f64>> {
    let pen = build(problem, n_points)?;
    (0..count.min(pen.dim()))
        .map(|j| pen.eigenvalue(j))
        .collect()
}
