use std::io::Write;

use super::{energy_density_at, AngularMode, RadialSolution, TOL_MONO};
use crate::error::{Error, Result};

/// Samples of the energy density `F` on a radial grid.
#[derive(Debug, Clone, PartialEq)]
pub struct FSamples {
    pub grid: Vec<f64>,
    pub f_values: Vec<f64>,
    pub alpha: f64,
    pub m: usize,
    pub radius: f64,
    /// `max_i max(F(r_{i+1}) - F(r_i), 0)`.
    pub max_increment: f64,
}

impl FSamples {
    pub fn max_abs(&self) -> f64 {
        self.f_values.iter().fold(0.0f64, |a, v| a.max(v.abs()))
    }

    /// Whether `F` is non-increasing up to `TOL_MONO * max|F|`.
    pub fn is_monotone(&self) -> bool {
        self.max_increment <= TOL_MONO * self.max_abs()
    }
}

/// Continues `g` past `R` by `g(R) e^{-alpha (r - R)}` and resamples it on the same number of
/// uniform points of `(0, r_max]`.
pub fn extend_g(solution: &RadialSolution, r_max: f64) -> Result<RadialSolution> {
    if solution.problem.angular_mode != AngularMode::First {
        return Err(Error::Parameter(
            "extend_g expects a mode-1 eigenfunction".into(),
        ));
    }
    if !(r_max >= solution.radius()) {
        return Err(Error::Parameter(format!(
            "r_max = {r_max} is below the ball radius {}",
            solution.radius()
        )));
    }
    let n = solution.grid.len();
    let mut out = solution.clone();
    out.grid = (1..=n)
        .map(|i| {
            if i == n {
                r_max
            } else {
                r_max * i as f64 / n as f64
            }
        })
        .collect();
    let (g, gp): (Vec<f64>, Vec<f64>) = out.grid.iter().map(|&r| solution.eval(r)).unzip();
    out.g_values = g;
    out.g_prime_values = gp;
    Ok(out)
}

/// Evaluates `F` on the grid of `solution` for the given `alpha`.
pub fn f_profile(solution: &RadialSolution, alpha: f64) -> Result<FSamples> {
    if solution.grid.iter().any(|&r| r <= 0.0) {
        return Err(Error::Domain("F is singular at r = 0".into()));
    }
    let mut problem = solution.problem;
    problem.alpha = alpha;
    let radius = problem.radius;
    let mm1 = (problem.m - 1) as f64;
    let f_values: Vec<f64> = solution
        .grid
        .iter()
        .zip(solution.g_values.iter().zip(&solution.g_prime_values))
        .map(|(&r, (&g, &gp))| {
            if r > radius {
                let h1 = problem.profile.h_prime(r);
                (-alpha * alpha + mm1 / (r * r) + alpha * mm1 / r + alpha * h1) * g * g
            } else {
                energy_density_at(&problem, r, g, gp)
            }
        })
        .collect();
    let max_increment = f_values
        .windows(2)
        .fold(0.0f64, |acc, w| acc.max(w[1] - w[0]));
    Ok(FSamples {
        grid: solution.grid.clone(),
        f_values,
        alpha,
        m: problem.m,
        radius,
        max_increment,
    })
}

/// Writes `r, g, g_prime, F` rows with 17 significant digits.
pub fn write_radial_csv<W: Write>(
    out: &mut W,
    solution: &RadialSolution,
    f: &FSamples,
) -> Result<()> {
    if f.grid.len() != solution.grid.len() {
        return Err(Error::Parameter(
            "F samples and solution use different grids".into(),
        ));
    }
    writeln!(out, "r,g,g_prime,F")?;
    for i in 0..solution.grid.len() {
        writeln!(
            out,
            "{:.16e},{:.16e},{:.16e},{:.16e}",
            solution.grid[i], solution.g_values[i], solution.g_prime_values[i], f.f_values[i]
        )?;
    }
    Ok(())
}
