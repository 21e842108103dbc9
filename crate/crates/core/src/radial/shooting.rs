use std::f64::consts::PI;

use super::{
    AngularMode, Interior, RadialProblem, RadialSolution, DEFAULT_GRID_POINTS, START_FRACTION,
};
use crate::error::{Error, Result};
use crate::ode::{Dopri5, Tolerances};
use crate::weights::WeightProfile;

const SHOOT_SEGMENTS: usize = 32;
const BRACKET_CAP: usize = 200;
const ROOT_CAP: usize = 300;
const ROOT_REL_TOL: f64 = 1e-12;
const RESCALE_AT: f64 = 1e100;

/// End state of one shot from the series start to `R`.
struct Shot {
    zeros: usize,
    w: f64,
    wp: f64,
}

struct Sampled {
    shot: Shot,
    interior: Interior,
}

fn tolerances() -> Tolerances {
    Tolerances::default()
}

/// Integrates from the series start to `R`, stopping at every point of `nodes` (increasing, ending
/// at `R`). Returns the zero count and, if `record` is set, the nodal values.
fn integrate(p: &RadialProblem, lambda: f64, nodes: &[f64], record: bool) -> Result<Sampled> {
    let eps = START_FRACTION * p.radius;
    let (w0, wp0) = p.series(lambda, eps);
    let mut solver = Dopri5::new(eps, [w0, wp0], 0.1 * eps, tolerances());
    let rhs = |r: f64, y: &[f64; 2]| [y[1], p.second_derivative(lambda, r, y[0], y[1])];

    let mut zeros = 0usize;
    let mut last_sign = 1.0f64;
    let mut scale = 1.0f64;
    let mut interior = Interior {
        r: vec![eps],
        g: vec![w0],
        gp: vec![wp0],
    };
    for &node in nodes {
        solver.advance_to(node, rhs, |_, y| {
            if y[0] != 0.0 && y[0].signum() != last_sign {
                zeros += 1;
                last_sign = y[0].signum();
            }
        })?;
        if record {
            interior.r.push(node);
            interior.g.push(solver.y[0] * scale);
            interior.gp.push(solver.y[1] * scale);
        }
        let size = solver.y[0].abs().max(solver.y[1].abs());
        if size > RESCALE_AT {
            solver.y = [solver.y[0] / RESCALE_AT, solver.y[1] / RESCALE_AT];
            scale *= RESCALE_AT;
        }
    }
    // an exact zero at R is not an interior zero
    let shot = Shot {
        zeros,
        w: solver.y[0],
        wp: solver.y[1],
    };
    Ok(Sampled { shot, interior })
}

fn uniform_nodes(radius: f64, n: usize) -> Vec<f64> {
    (1..=n)
        .map(|i| {
            if i == n {
                radius
            } else {
                radius * i as f64 / n as f64
            }
        })
        .collect()
}

/// Continuous, increasing counting function: the Pruefer angle at `R` minus the boundary angle.
/// The k-th eigenvalue is the root of `counting(lambda) = (k-1) pi`.
fn counting(p: &RadialProblem, lambda: f64, nodes: &[f64]) -> Result<f64> {
    let s = integrate(p, lambda, nodes, false)?.shot;
    let sign = if s.w < 0.0 { -1.0 } else { 1.0 };
    let phi = s.w.abs().atan2(sign * s.wp);
    let beta = 1f64.atan2(-p.alpha);
    Ok(s.zeros as f64 * PI + phi - beta)
}

/// Locates the k-th (1-based) eigenvalue of the problem.
fn locate(p: &RadialProblem, k: usize, nodes: &[f64], floor: f64) -> Result<f64> {
    let target = (k - 1) as f64 * PI;
    let f = |lambda: f64| counting(p, lambda, nodes).map(|c| c - target);

    let mut lo = floor.min(-1.0);
    let mut f_lo = f(lo)?;
    let mut it = 0;
    while f_lo >= 0.0 {
        it += 1;
        if it > BRACKET_CAP {
            return Err(Error::convergence("eigenvalue lower bracket", lo, f64::NAN));
        }
        lo = 2.0 * lo - 1.0;
        f_lo = f(lo)?;
    }
    let mut hi = floor.max(1.0);
    let mut f_hi = f(hi)?;
    it = 0;
    while f_hi <= 0.0 {
        it += 1;
        if it > BRACKET_CAP {
            return Err(Error::convergence("eigenvalue upper bracket", lo, hi));
        }
        lo = hi;
        f_lo = f_hi;
        hi = 2.0 * hi + 1.0;
        f_hi = f(hi)?;
    }

    // Illinois regula falsi with a bisection safeguard
    let mut side = 0i8;
    for _ in 0..ROOT_CAP {
        let width = hi - lo;
        if width <= ROOT_REL_TOL * lo.abs().max(hi.abs()).max(1.0) {
            return Ok(0.5 * (lo + hi));
        }
        let mut x = (lo * f_hi - hi * f_lo) / (f_hi - f_lo);
        if !(x > lo + 1e-3 * width && x < hi - 1e-3 * width) {
            x = 0.5 * (lo + hi);
        }
        let fx = f(x)?;
        if fx == 0.0 {
            return Ok(x);
        }
        if fx < 0.0 {
            lo = x;
            f_lo = fx;
            if side == -1 {
                f_hi *= 0.5;
            }
            side = -1;
        } else {
            hi = x;
            f_hi = fx;
            if side == 1 {
                f_lo *= 0.5;
            }
            side = 1;
        }
    }
    Err(Error::convergence("eigenvalue root", lo, hi))
}

/// The `count` smallest eigenvalues of the radial problem, strictly increasing, each with its
/// eigenfunction sampled on the default uniform grid of `(0, R]`.
pub fn solve_radial(problem: &RadialProblem, count: usize) -> Result<Vec<RadialSolution>> {
    solve_radial_with_grid(problem, count, DEFAULT_GRID_POINTS)
}

/// As [`solve_radial`] with `grid_points` uniform samples.
pub fn solve_radial_with_grid(
    problem: &RadialProblem,
    count: usize,
    grid_points: usize,
) -> Result<Vec<RadialSolution>> {
    problem.validate()?;
    if count == 0 {
        return Err(Error::Parameter("count must be >= 1".into()));
    }
    if grid_points < 2 {
        return Err(Error::Parameter("grid must have at least 2 points".into()));
    }
    let shoot_nodes = uniform_nodes(problem.radius, SHOOT_SEGMENTS);
    let grid = uniform_nodes(problem.radius, grid_points);
    let mut out: Vec<RadialSolution> = Vec::with_capacity(count);
    let mut floor = -1.0;
    for k in 1..=count {
        let lambda = locate(problem, k, &shoot_nodes, floor)?;
        floor = lambda;
        let sampled = integrate(problem, lambda, &grid, true)?;
        out.push(RadialSolution::from_interior(
            lambda,
            k,
            *problem,
            sampled.interior,
        ));
    }
    Ok(out)
}

/// The second Robin eigenvalue of a ball with both candidates recorded.
#[derive(Debug, Clone)]
pub struct Lambda2Ball {
    /// `min(mu_1, tau_2)`.
    pub lambda2: f64,
    /// First eigenvalue of angular mode 1.
    pub mu1: f64,
    /// Second eigenvalue of angular mode 0.
    pub tau2: f64,
    /// The eigenfunction realizing `lambda2`.
    pub solution: RadialSolution,
    /// First mode-1 eigenfunction, kept even when `tau_2 < mu_1`.
    pub mode1: RadialSolution,
}

/// `lambda_2` of the weighted Robin problem on `B(R)` in `R^m`.
pub fn lambda2_ball(
    profile: &WeightProfile,
    m: usize,
    radius: f64,
    alpha: f64,
) -> Result<Lambda2Ball> {
    if alpha > 0.0 {
        return Err(Error::Parameter(format!(
            "lambda2_ball requires alpha <= 0, got {alpha}"
        )));
    }
    let p1 = RadialProblem::new(*profile, m, radius, alpha, AngularMode::First)?;
    let p0 = RadialProblem {
        angular_mode: AngularMode::Radial,
        ..p1
    };
    let mode1 = solve_radial(&p1, 1)?.remove(0);
    let mut radial = solve_radial(&p0, 2)?;
    let tau2_sol = radial.remove(1);
    let mu1 = mode1.eigenvalue;
    let tau2 = tau2_sol.eigenvalue;
    let solution = if mu1 <= tau2 { mode1.clone() } else { tau2_sol };
    Ok(Lambda2Ball {
        lambda2: mu1.min(tau2),
        mu1,
        tau2,
        solution,
        mode1,
    })
}

/// `lambda_1` of the weighted Robin problem on `B(R)`: the first radial eigenvalue.
pub fn lambda1_ball(profile: &WeightProfile, m: usize, radius: f64, alpha: f64) -> Result<f64> {
    let p = RadialProblem::new(*profile, m, radius, alpha, AngularMode::Radial)?;
    Ok(solve_radial(&p, 1)?[0].eigenvalue)
}

/// First nonzero weighted Steklov eigenvalue of `B(R)`: `w'(R)/w(R)` for the mode-1 solution of
/// the `lambda = 0` equation.
pub fn steklov_ball(profile: &WeightProfile, m: usize, radius: f64) -> Result<f64> {
    let p = RadialProblem::new(*profile, m, radius, 0.0, AngularMode::First)?;
    let s = integrate(&p, 0.0, &uniform_nodes(radius, SHOOT_SEGMENTS), false)?.shot;
    if !(s.w > 0.0) || s.zeros > 0 {
        return Err(Error::convergence(
            "Steklov shooting (w(R) not positive)",
            0.0,
            radius,
        ));
    }
    Ok(s.wp / s.w)
}
