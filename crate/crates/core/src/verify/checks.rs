use std::collections::BTreeMap;

use super::report::{params_of, CheckResult};
use crate::error::{Error, Result};
use crate::fem2d::{
    integrate_over_domain, integrate_over_domain_with, solve_robin, solve_steklov, triangulate,
    Mesh, StarDomain, TriangleRule,
};
use crate::radial::{
    energy_density_at, extend_g, f_profile, lambda2_ball, steklov_ball, DEFAULT_GRID_POINTS,
    TOL_MONO,
};
use crate::richardson::{fit_tail, RichardsonFit};
use crate::weights::{radius_for_volume, WeightProfile};

/// Mesh size ratio between consecutive refinement levels.
const LEVEL_RATIO: f64 = 2.0;
/// Floor of the discretization tolerance.
const MIN_TOL: f64 = 1e-6;
/// Multiple of the Richardson error estimate used as tolerance.
const TOL_FACTOR: f64 = 3.0;
const TOL_STEKLOV_BOUND: f64 = 1e-8;
const TOL_ROBIN_SLOPE: f64 = 1e-8;
const TOL_LAMBDA2_SIGN: f64 = 1e-9;
const TOL_RATIO: f64 = 1e-6;
/// Robin parameters for the monotonicity of `F`, as fractions of `-sigma_1(B)`.
const F_MONOTONE_FRACTIONS: [f64; 3] = [0.0, 0.5, 1.0];

/// A named radial test function.
pub type RadialFn = (&'static str, fn(f64) -> f64);

/// Decreasing radial functions for the rearrangement inequality.
pub const DECREASING_TEST_FUNCTIONS: [RadialFn; 3] = [
    ("exp(-r)", |r| (-r).exp()),
    ("1/(1+r^2)", |r| 1.0 / (1.0 + r * r)),
    ("exp(-r^2)", |r| (-r * r).exp()),
];

/// Robin parameters of a run.
#[derive(Debug, Clone, PartialEq)]
pub enum AlphaSpec {
    /// `alpha = -t sigma_1(B)` for each `t`, with `B` the comparison ball.
    Fractions(Vec<f64>),
    Explicit(Vec<f64>),
}

impl AlphaSpec {
    /// `(alpha, fraction)` pairs for a ball with first Steklov eigenvalue `sigma1`.
    pub fn resolve(&self, sigma1: f64) -> Vec<(f64, Option<f64>)> {
        match self {
            AlphaSpec::Fractions(ts) => ts
                .iter()
                .map(|&t| (if t == 0.0 { 0.0 } else { -t * sigma1 }, Some(t)))
                .collect(),
            AlphaSpec::Explicit(a) => a.iter().map(|&a| (a, None)).collect(),
        }
    }

    pub fn describe(&self) -> Vec<String> {
        match self {
            AlphaSpec::Fractions(ts) => ts.iter().map(|t| format!("-{t}*sigma1(B)")).collect(),
            AlphaSpec::Explicit(a) => a.iter().map(|a| a.to_string()).collect(),
        }
    }
}

/// Three refinement levels of one domain, each with its volume-matched ball.
#[derive(Debug, Clone)]
pub struct DomainLevels {
    pub domain: StarDomain,
    pub meshes: Vec<Mesh>,
    /// Weighted mesh volumes under the assembly quadrature.
    pub volumes: Vec<f64>,
    /// Radii of the balls matching `volumes`.
    pub radii: Vec<f64>,
    /// Radial Steklov eigenvalue of the ball matched to the finest mesh.
    pub sigma1_ball: f64,
}

impl DomainLevels {
    /// Levels `refinement - 2 ..= refinement`.
    pub fn build(domain: &StarDomain, profile: &WeightProfile, refinement: usize) -> Result<Self> {
        if refinement < 3 {
            return Err(Error::Parameter(format!(
                "error estimates need refinement >= 3, got {refinement}"
            )));
        }
        let mut meshes = Vec::with_capacity(3);
        let mut volumes = Vec::with_capacity(3);
        let mut radii = Vec::with_capacity(3);
        for level in refinement - 2..=refinement {
            let mesh = triangulate(domain, level)?;
            let v = integrate_over_domain(&mesh, profile, |_| 1.0)?;
            radii.push(radius_for_volume(profile, 2, v)?);
            volumes.push(v);
            meshes.push(mesh);
        }
        let sigma1_ball = steklov_ball(profile, 2, radii[2])?;
        Ok(Self {
            domain: *domain,
            meshes,
            volumes,
            radii,
            sigma1_ball,
        })
    }

    pub fn finest(&self) -> &Mesh {
        &self.meshes[2]
    }

    pub fn ball_radius(&self) -> f64 {
        self.radii[2]
    }

    /// Largest node radius of the finest mesh.
    pub fn max_node_radius(&self) -> f64 {
        self.finest()
            .nodes
            .iter()
            .fold(0.0f64, |a, p| a.max(p[0].hypot(p[1])))
    }

    fn strict_applies(&self, profile: &WeightProfile) -> bool {
        !self.domain.is_disk()
            && profile.strictly_increasing_on(self.max_node_radius().max(self.ball_radius()))
    }
}

fn fmt_num(x: f64) -> String {
    format!("{x}")
}

fn alpha_params(
    base: &BTreeMap<String, String>,
    alpha: f64,
    fraction: Option<f64>,
) -> BTreeMap<String, String> {
    let mut p = base.clone();
    p.insert("alpha".into(), fmt_num(alpha));
    if let Some(t) = fraction {
        p.insert("alpha_fraction".into(), fmt_num(t));
    }
    p
}

fn push_or_error(
    out: &mut Vec<CheckResult>,
    id: &str,
    params: &BTreeMap<String, String>,
    r: Result<Vec<CheckResult>>,
) {
    match r {
        Ok(v) => out.extend(v),
        Err(e) => out.push(CheckResult::from_error(id, params.clone(), &e)),
    }
}

fn tolerance_of(fit: &RichardsonFit) -> f64 {
    MIN_TOL.max(TOL_FACTOR * fit.error)
}

fn flag_equality(c: &mut CheckResult) {
    if c.is_equality_candidate() {
        c.add_note("equality-candidate");
    }
}

/// Adds `<id>.strict`: margin beyond the tolerance, required for non-ball domains with `h' > 0`.
fn strict_variant(c: &CheckResult) -> CheckResult {
    let mut s = CheckResult::new(
        &format!("{}.strict", c.check_id),
        c.params.clone(),
        c.lhs,
        c.rhs,
        c.margin - c.tolerance,
        0.0,
    );
    s.add_note("non-ball domain with h' > 0 requires margin > tol");
    s
}

fn out_of_range(alpha: f64, sigma1: f64, c: &mut CheckResult) {
    if alpha < -sigma1 || alpha > 0.0 {
        c.asserted = false;
        c.add_note("alpha outside [-sigma1(B), 0], not asserted");
    }
}

/// Compares the FEM `lambda_2` of the domain with the radial `lambda_2` of the volume-matched ball
/// for each Robin parameter.
pub fn check_robin_inequality(
    profile: &WeightProfile,
    levels: &DomainLevels,
    alphas: &AlphaSpec,
) -> Vec<CheckResult> {
    let base = params_of(profile, Some(&levels.domain));
    let mut out = Vec::new();
    for (alpha, fraction) in alphas.resolve(levels.sigma1_ball) {
        let params = alpha_params(&base, alpha, fraction);
        let r = (|| -> Result<Vec<CheckResult>> {
            let values = levels
                .meshes
                .iter()
                .map(|mesh| Ok(solve_robin(mesh, profile, alpha, 3)?.eigenvalues[1]))
                .collect::<Result<Vec<f64>>>()?;
            let fit = fit_tail(&values, LEVEL_RATIO)?;
            let ball = lambda2_ball(profile, 2, levels.ball_radius(), alpha)?.lambda2;
            let omega = values[2];
            let mut c = CheckResult::new(
                "robin_inequality",
                params.clone(),
                omega,
                ball,
                ball - omega,
                tolerance_of(&fit),
            );
            c.add_note(&format!("fitted order {:.3}", fit.order));
            flag_equality(&mut c);
            out_of_range(alpha, levels.sigma1_ball, &mut c);
            let mut v = vec![c];
            if levels.strict_applies(profile) {
                let mut s = strict_variant(&v[0]);
                s.asserted = v[0].asserted;
                v.push(s);
            } else if !levels.domain.is_disk() {
                v[0].add_note("h' > 0 not satisfied, strictness not asserted");
            }
            Ok(v)
        })();
        push_or_error(&mut out, "robin_inequality", &params, r);
    }
    out
}

/// Compares the FEM Steklov `sigma_1` of the domain with the radial value of the matched ball.
pub fn check_steklov_inequality(
    profile: &WeightProfile,
    levels: &DomainLevels,
) -> Vec<CheckResult> {
    let params = params_of(profile, Some(&levels.domain));
    let r = (|| -> Result<Vec<CheckResult>> {
        let values = levels
            .meshes
            .iter()
            .map(|mesh| Ok(solve_steklov(mesh, profile, 2)?.eigenvalues[1]))
            .collect::<Result<Vec<f64>>>()?;
        let fit = fit_tail(&values, LEVEL_RATIO)?;
        let ball = levels.sigma1_ball;
        let omega = values[2];
        let mut c = CheckResult::new(
            "steklov_inequality",
            params.clone(),
            omega,
            ball,
            ball - omega,
            tolerance_of(&fit),
        );
        c.add_note(&format!("fitted order {:.3}", fit.order));
        flag_equality(&mut c);
        let mut v = vec![c];
        if levels.strict_applies(profile) {
            v.push(strict_variant(&v[0]));
        }
        Ok(v)
    })();
    let mut out = Vec::new();
    push_or_error(&mut out, "steklov_inequality", &params, r);
    out
}

/// Ball-side statements for `B(R)` in `R^m`: the Steklov bound `sigma_1 <= 1/R` once, then for
/// each `alpha = -t sigma_1` the monotonicity of the mode-1 eigenfunction, `mu_1 < tau_2` and
/// `lambda_2 >= 0`, and finally the monotonicity of `F` at three Robin parameters.
pub fn check_ball_properties(
    profile: &WeightProfile,
    m: usize,
    radius: f64,
    fractions: &[f64],
) -> Vec<CheckResult> {
    let mut base = params_of(profile, None);
    base.insert("m".into(), m.to_string());
    base.insert("R".into(), fmt_num(radius));
    let mut out = Vec::new();
    let sigma1 = match steklov_ball(profile, m, radius) {
        Ok(s) => s,
        Err(e) => {
            out.push(CheckResult::from_error("steklov_ball_bound", base, &e));
            return out;
        }
    };
    out.push(CheckResult::new(
        "steklov_ball_bound",
        base.clone(),
        sigma1,
        1.0 / radius,
        1.0 / radius - sigma1,
        TOL_STEKLOV_BOUND,
    ));
    let monotone_h = profile.strictly_increasing_on(radius);

    for &t in fractions {
        let alpha = if t == 0.0 { 0.0 } else { -t * sigma1 };
        let params = alpha_params(&base, alpha, Some(t));
        let r = (|| -> Result<Vec<CheckResult>> {
            let l2 = lambda2_ball(profile, m, radius, alpha)?;
            let g = &l2.mode1;
            let mut v = Vec::new();

            let interior = g
                .grid
                .iter()
                .zip(&g.g_prime_values)
                .filter(|(r, _)| **r < radius);
            let min_gp = interior.map(|(_, gp)| *gp).fold(f64::INFINITY, f64::min);
            v.push(CheckResult::new(
                "g_increasing",
                params.clone(),
                min_gp,
                0.0,
                min_gp,
                0.0,
            ));

            let min_robin = g
                .g_values
                .iter()
                .zip(&g.g_prime_values)
                .map(|(gv, gp)| gp + alpha * gv)
                .fold(f64::INFINITY, f64::min);
            let mut c = CheckResult::new(
                "g_robin_slope",
                params.clone(),
                min_robin,
                0.0,
                min_robin,
                TOL_ROBIN_SLOPE,
            );
            if alpha < -2.0 / radius {
                c.asserted = false;
                c.add_note("alpha < -2/R, outside the hypothesis");
            }
            v.push(c);

            let mut c = CheckResult::new(
                "mode1_below_radial",
                params.clone(),
                l2.mu1,
                l2.tau2,
                l2.tau2 - l2.mu1,
                0.0,
            );
            if !monotone_h {
                c.add_note("h' > 0 not satisfied, checked anyway");
            }
            v.push(c);

            v.push(CheckResult::new(
                "lambda2_nonnegative",
                params.clone(),
                0.0,
                l2.lambda2,
                l2.lambda2,
                TOL_LAMBDA2_SIGN,
            ));
            Ok(v)
        })();
        push_or_error(&mut out, "ball_properties", &params, r);
    }

    for t in F_MONOTONE_FRACTIONS {
        let alpha = if t == 0.0 { 0.0 } else { -t * sigma1 };
        let params = alpha_params(&base, alpha, Some(t));
        let r = (|| -> Result<Vec<CheckResult>> {
            let l2 = lambda2_ball(profile, m, radius, alpha)?;
            Ok(vec![f_monotonicity(
                "f_decreasing",
                &params,
                &l2.mode1,
                2.0 * radius,
            )?])
        })();
        push_or_error(&mut out, "f_decreasing", &params, r);
    }
    out
}

/// `-max positive increment of F` on a uniform grid of `(0, r_max]`, tolerance `TOL_MONO max|F|`.
fn f_monotonicity(
    id: &str,
    params: &BTreeMap<String, String>,
    mode1: &crate::radial::RadialSolution,
    r_max: f64,
) -> Result<CheckResult> {
    let ext = extend_g(mode1, r_max)?;
    debug_assert_eq!(ext.grid.len(), DEFAULT_GRID_POINTS);
    let f = f_profile(&ext, mode1.problem.alpha)?;
    let mut p = params.clone();
    p.insert("r_max".into(), fmt_num(r_max));
    Ok(CheckResult::new(
        id,
        p,
        f.max_increment,
        0.0,
        0.0 - f.max_increment,
        TOL_MONO * f.max_abs(),
    ))
}

/// `int_Omega f dgamma` under both triangle rules together with a quadrature tolerance for
/// comparisons against the matched ball.
struct DomainIntegral {
    value: f64,
    tolerance: f64,
}

fn domain_integral<F: Fn(f64) -> f64>(
    mesh: &Mesh,
    profile: &WeightProfile,
    volumes: (f64, f64),
    radius: f64,
    f: F,
) -> Result<DomainIntegral> {
    let mid = integrate_over_domain(mesh, profile, &f)?;
    let seven = integrate_over_domain_with(mesh, profile, &f, TriangleRule::SevenPoint)?;
    let tolerance =
        TOL_FACTOR * ((mid - seven).abs() + f(radius).abs() * (volumes.0 - volumes.1).abs());
    Ok(DomainIntegral {
        value: mid,
        tolerance,
    })
}

/// Steps of the comparison argument for the ball matched to the finest mesh: the Rayleigh
/// quotient identity on `B`, the rearrangement inequalities for `g^2` and `F`, the rearrangement
/// lemma for fixed decreasing functions and the monotonicity of `F` and `g` up to the outermost
/// node.
pub fn check_weinberger_chain(
    profile: &WeightProfile,
    domain: &StarDomain,
    alphas: &AlphaSpec,
    refinement: usize,
) -> Vec<CheckResult> {
    let base = params_of(profile, Some(domain));
    let levels = match DomainLevels::build(domain, profile, refinement) {
        Ok(l) => l,
        Err(e) => return vec![CheckResult::from_error("chain.setup", base, &e)],
    };
    let mesh = levels.finest();
    let radius = levels.ball_radius();
    let r_union = levels.max_node_radius().max(radius);
    let mut out = Vec::new();

    let seven_volume =
        match integrate_over_domain_with(mesh, profile, |_| 1.0, TriangleRule::SevenPoint) {
            Ok(v) => v,
            Err(e) => return vec![CheckResult::from_error("chain.setup", base, &e)],
        };
    let volumes = (levels.volumes[2], seven_volume);

    for (alpha, fraction) in alphas.resolve(levels.sigma1_ball) {
        let params = alpha_params(&base, alpha, fraction);
        let r = (|| -> Result<Vec<CheckResult>> {
            let l2 = lambda2_ball(profile, 2, radius, alpha)?;
            let g = &l2.mode1;
            let problem = g.problem;
            let mut v = Vec::new();

            let energy = |r: f64, gv: f64, gp: f64| energy_density_at(&problem, r, gv, gp);
            let ball_f = g.ball_integral(radius, energy);
            let ball_g2 = g.ball_integral(radius, |_, gv, _| gv * gv);
            let ratio = ball_f / ball_g2;
            let tol = TOL_RATIO * l2.lambda2.abs().max(1.0);
            v.push(CheckResult::new(
                "rayleigh_identity",
                params.clone(),
                ratio,
                l2.lambda2,
                -(ratio - l2.lambda2).abs(),
                tol,
            ));

            let omega_g2 =
                domain_integral(mesh, profile, volumes, radius, |r| g.eval(r).0.powi(2))?;
            let mut c = CheckResult::new(
                "g2_rearrangement",
                params.clone(),
                ball_g2,
                omega_g2.value,
                omega_g2.value - ball_g2,
                omega_g2.tolerance,
            );
            flag_equality(&mut c);
            v.push(c);

            let omega_f = domain_integral(mesh, profile, volumes, radius, |r| g.energy_density(r))?;
            let mut c = CheckResult::new(
                "f_rearrangement",
                params.clone(),
                omega_f.value,
                ball_f,
                ball_f - omega_f.value,
                omega_f.tolerance,
            );
            flag_equality(&mut c);
            v.push(c);

            v.push(f_monotonicity("chain.f_monotone", &params, g, r_union)?);

            let ext = extend_g(g, r_union)?;
            let min_step = ext
                .g_values
                .windows(2)
                .map(|w| w[1] - w[0])
                .fold(f64::INFINITY, f64::min);
            let mut p = params.clone();
            p.insert("r_max".into(), fmt_num(r_union));
            v.push(CheckResult::new(
                "chain.g_monotone",
                p,
                min_step,
                0.0,
                min_step,
                0.0,
            ));

            for c in v.iter_mut() {
                out_of_range(alpha, levels.sigma1_ball, c);
            }
            Ok(v)
        })();
        push_or_error(&mut out, "chain", &params, r);
    }

    for (name, f) in DECREASING_TEST_FUNCTIONS {
        let mut params = base.clone();
        params.insert("f".into(), name.to_string());
        let r = (|| -> Result<Vec<CheckResult>> {
            let omega = domain_integral(mesh, profile, volumes, radius, f)?;
            // any ball solution carries the right radius, weight and dimension
            let ball = lambda2_ball(profile, 2, radius, 0.0)?
                .mode1
                .ball_integral(radius, |r, _, _| f(r));
            let mut c = CheckResult::new(
                "decreasing_rearrangement",
                params.clone(),
                omega.value,
                ball,
                ball - omega.value,
                omega.tolerance,
            );
            flag_equality(&mut c);
            Ok(vec![c])
        })();
        push_or_error(&mut out, "decreasing_rearrangement", &params, r);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn domain(s: &str) -> StarDomain {
        StarDomain::parse(s).unwrap()
    }

    fn find<'a>(checks: &'a [CheckResult], id: &str) -> Vec<&'a CheckResult> {
        checks.iter().filter(|c| c.check_id == id).collect()
    }

    #[test]
    fn alpha_fractions_resolve_against_sigma1() {
        let spec = AlphaSpec::Fractions(vec![0.0, 0.5, 1.0]);
        let r = spec.resolve(0.8);
        assert_eq!(
            r,
            vec![(0.0, Some(0.0)), (-0.4, Some(0.5)), (-0.8, Some(1.0))]
        );
        assert_eq!(
            AlphaSpec::Explicit(vec![-0.2]).resolve(0.8),
            vec![(-0.2, None)]
        );
    }

    #[test]
    fn levels_match_volume_and_need_three_levels() {
        let p = WeightProfile::quadratic(1.0);
        assert!(DomainLevels::build(&domain("disk:1"), &p, 2).is_err());
        let l = DomainLevels::build(&domain("disk:1"), &p, 3).unwrap();
        assert_eq!(l.meshes.len(), 3);
        // inscribed polygons grow towards the disk
        assert!(l.radii[0] < l.radii[1] && l.radii[1] < l.radii[2] && l.radii[2] < 1.0);
        assert!(l.sigma1_ball > 0.0 && l.sigma1_ball <= 1.0 / l.radii[2]);
    }

    #[test]
    fn ball_checks_pass_for_the_plain_disk() {
        let checks = check_ball_properties(&WeightProfile::zero(), 2, 1.0, &[0.0, 0.5, 1.0]);
        assert_eq!(checks.len(), 1 + 3 * 4 + 3);
        for c in &checks {
            assert!(c.passed, "{c:?}");
        }
        let s = find(&checks, "steklov_ball_bound")[0];
        assert!((s.lhs - 1.0).abs() < 1e-8);
    }

    #[test]
    fn lambda2_is_tight_at_minus_sigma1() {
        let checks = check_ball_properties(&WeightProfile::quadratic(1.0), 2, 1.0, &[1.0]);
        let c = find(&checks, "lambda2_nonnegative")[0];
        assert!(c.passed && c.rhs.abs() < 1e-8, "{c:?}");
    }

    #[test]
    fn robin_margin_on_the_disk_is_within_tolerance() {
        let p = WeightProfile::linear(1.0);
        let levels = DomainLevels::build(&domain("disk:1"), &p, 3).unwrap();
        let checks = check_robin_inequality(&p, &levels, &AlphaSpec::Fractions(vec![0.0, 1.0]));
        assert_eq!(checks.len(), 2);
        for c in &checks {
            assert!(c.passed, "{c:?}");
            assert!(c.notes.contains("equality-candidate"), "{c:?}");
        }
    }

    #[test]
    fn disk_margin_shrinks_under_refinement() {
        let p = WeightProfile::zero();
        let margins: Vec<f64> = (3..=4)
            .map(|r| {
                let levels = DomainLevels::build(&domain("disk:1"), &p, r).unwrap();
                check_robin_inequality(&p, &levels, &AlphaSpec::Fractions(vec![0.0]))[0]
                    .margin
                    .abs()
            })
            .collect();
        assert!(margins[1] < margins[0] / 2.5, "{margins:?}");
    }

    #[test]
    fn ellipse_beats_ball_at_neumann() {
        let p = WeightProfile::zero();
        let levels = DomainLevels::build(&domain("ellipse:1.5,0.8"), &p, 3).unwrap();
        let c = &check_robin_inequality(&p, &levels, &AlphaSpec::Fractions(vec![0.0]))[0];
        assert!(c.passed && c.margin > c.tolerance, "{c:?}");
    }

    #[test]
    fn strict_variant_for_increasing_weight() {
        let p = WeightProfile::quadratic(1.0);
        let levels = DomainLevels::build(&domain("rectangle:1.2,0.8"), &p, 3).unwrap();
        let checks = check_robin_inequality(&p, &levels, &AlphaSpec::Fractions(vec![0.5]));
        assert_eq!(checks.len(), 2);
        assert_eq!(checks[1].check_id, "robin_inequality.strict");
        assert!(checks.iter().all(|c| c.passed), "{checks:?}");
    }

    #[test]
    fn steklov_on_ellipse_and_disk() {
        let p = WeightProfile::zero();
        let e = DomainLevels::build(&domain("ellipse:1.5,0.8"), &p, 3).unwrap();
        let c = &check_steklov_inequality(&p, &e)[0];
        assert!(c.passed && c.margin > c.tolerance, "{c:?}");
        let d = DomainLevels::build(&domain("disk:1"), &p, 3).unwrap();
        let c = &check_steklov_inequality(&p, &d)[0];
        assert!(c.passed && c.notes.contains("equality-candidate"), "{c:?}");
    }

    #[test]
    fn chain_holds_on_ellipse() {
        let p = WeightProfile::quadratic(1.0);
        let checks = check_weinberger_chain(
            &p,
            &domain("ellipse:1.5,0.8"),
            &AlphaSpec::Explicit(vec![-0.2]),
            3,
        );
        assert_eq!(checks.len(), 5 + 3);
        for c in &checks {
            assert!(c.passed, "{c:?}");
        }
        let ratio = find(&checks, "rayleigh_identity")[0];
        assert!((ratio.lhs - ratio.rhs).abs() <= 1e-6 * ratio.rhs.abs().max(1.0));
    }

    #[test]
    fn rearrangement_is_strict_off_the_ball() {
        let p = WeightProfile::linear(1.0);
        let checks = check_weinberger_chain(
            &p,
            &domain("stadium:0.6,0.6"),
            &AlphaSpec::Fractions(vec![0.0]),
            3,
        );
        for c in find(&checks, "decreasing_rearrangement") {
            assert!(c.margin > c.tolerance, "{c:?}");
        }
    }

    #[test]
    fn setup_errors_become_failed_checks() {
        let p = WeightProfile::zero();
        let checks =
            check_weinberger_chain(&p, &domain("disk:1"), &AlphaSpec::Fractions(vec![0.0]), 2);
        assert_eq!(checks.len(), 1);
        assert!(!checks[0].passed && checks[0].notes.contains("refinement"));
    }
}
