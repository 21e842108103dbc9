//! Acceptance criteria. Each test writes one `criterion N: PASS|FAIL ...` line to stderr
//! (bypassing the test harness capture) and then asserts.

use std::io::Write;
use std::process::Command;
use std::time::{Duration, Instant};

use weighted_robin::fem2d::{solve_robin, triangulate, StarDomain};
use weighted_robin::radial::{
    lambda2_ball, solve_radial, solve_radial_fd_oracle_lowest, steklov_ball, AngularMode,
    RadialProblem,
};
use weighted_robin::richardson::fit_tail;
use weighted_robin::verify::{check_ball_properties, run_suite, CheckResult, Suite, SuiteConfig};
use weighted_robin::weights::{built_in_profiles, WeightProfile};

fn report(n: u32, ok: bool, detail: &str) {
    let status = if ok { "PASS" } else { "FAIL" };
    let _ = writeln!(std::io::stderr(), "criterion {n}: {status} {detail}");
    assert!(ok, "criterion {n} failed: {detail}");
}

fn failures<'a>(checks: impl IntoIterator<Item = &'a CheckResult>) -> Vec<String> {
    checks
        .into_iter()
        .filter(|c| !c.passed)
        .map(|c| {
            format!(
                "{}[{}] margin {:e} tol {:e} {}",
                c.check_id,
                c.params_string(),
                c.margin,
                c.tolerance,
                c.notes
            )
        })
        .collect()
}

// Independent oracle: J_n' from its power series, roots by bisection.
fn bessel_j_prime(n: i32, x: f64) -> f64 {
    let mut sum = 0.0;
    let mut term_den = 1.0; // k! (n + k)!
    for i in 1..=n {
        term_den *= i as f64;
    }
    for k in 0..60i32 {
        if k > 0 {
            term_den *= k as f64 * (n + k) as f64;
        }
        let e = 2 * k + n;
        if e == 0 {
            continue;
        }
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * e as f64 * (x / 2.0).powi(e - 1) / (2.0 * term_den);
    }
    sum
}

fn bessel_prime_root(n: i32, mut lo: f64, mut hi: f64) -> f64 {
    let lo_sign = bessel_j_prime(n, lo) > 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (bessel_j_prime(n, mid) > 0.0) == lo_sign {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn criterion_01_steklov_exactness() {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for (m, r) in [(2, 1.0), (2, 2.0), (3, 1.0), (3, 2.0)] {
        let s = steklov_ball(&WeightProfile::zero(), m, r).unwrap();
        worst = worst.max((s * r - 1.0).abs());
    }
    let elapsed = start.elapsed();
    report(
        1,
        worst <= 1e-8 && elapsed < Duration::from_secs(1),
        &format!(
            "max relative error {worst:.2e}, {:.3} s",
            elapsed.as_secs_f64()
        ),
    );
}

#[test]
fn criterion_02_steklov_bound() {
    let mut worst = f64::NEG_INFINITY;
    for p in built_in_profiles() {
        for m in [2, 3] {
            for r in [0.5, 1.0, 2.0] {
                let s = steklov_ball(&p, m, r).unwrap();
                worst = worst.max(s - 1.0 / r);
            }
        }
    }
    report(2, worst <= 1e-8, &format!("max sigma1 - 1/R = {worst:.3e}"));
}

#[test]
fn criterion_03_disk_neumann_benchmark() {
    let start = Instant::now();
    let j = bessel_prime_root(1, 1.0, 2.5);
    let exact = j * j;
    let radial = lambda2_ball(&WeightProfile::zero(), 2, 1.0, 0.0)
        .unwrap()
        .lambda2;
    let radial_err = (radial - exact).abs() / exact;
    let disk = StarDomain::parse("disk:1").unwrap();
    let values: Vec<f64> = (2..=4)
        .map(|l| {
            solve_robin(
                &triangulate(&disk, l).unwrap(),
                &WeightProfile::zero(),
                0.0,
                3,
            )
            .unwrap()
            .eigenvalues[1]
        })
        .collect();
    let fit = fit_tail(&values, 2.0).unwrap();
    let fem_err = (fit.extrapolated - exact).abs() / exact;
    let elapsed = start.elapsed();
    let ok = radial_err <= 1e-7
        && (fit.order - 2.0).abs() <= 0.3
        && fem_err < 1e-3
        && elapsed < Duration::from_secs(60);
    report(
        3,
        ok,
        &format!(
            "oracle {exact:.10}, radial rel err {radial_err:.2e}, FEM order {:.3}, extrapolated rel err {fem_err:.2e}, {:.1} s",
            fit.order,
            elapsed.as_secs_f64()
        ),
    );
}

#[test]
fn criterion_04_critical_alpha_tightness() {
    let mut worst = 0.0f64;
    for p in built_in_profiles() {
        for m in [2, 3] {
            for r in [0.5, 1.0, 2.0] {
                let s = steklov_ball(&p, m, r).unwrap();
                let l2 = lambda2_ball(&p, m, r, -s).unwrap().lambda2;
                worst = worst.max(l2.abs());
            }
        }
    }
    report(
        4,
        worst <= 1e-6,
        &format!("max |lambda2(-sigma1)| = {worst:.3e}"),
    );
}

#[test]
fn criterion_05_ball_properties() {
    let fractions: Vec<f64> = (0..11).map(|i| i as f64 / 10.0).collect();
    let mut checks = Vec::new();
    for p in built_in_profiles() {
        for m in [2, 3] {
            checks.extend(check_ball_properties(&p, m, 1.0, &fractions));
        }
    }
    let relevant: Vec<&CheckResult> = checks
        .iter()
        .filter(|c| {
            [
                "g_increasing",
                "g_robin_slope",
                "mode1_below_radial",
                "lambda2_nonnegative",
                "ball_properties",
            ]
            .contains(&c.check_id.as_str())
        })
        .collect();
    let per_kind = |id: &str| relevant.iter().filter(|c| c.check_id == id).count();
    let counts = [
        per_kind("g_increasing"),
        per_kind("g_robin_slope"),
        per_kind("mode1_below_radial"),
        per_kind("lambda2_nonnegative"),
    ];
    let positive = relevant
        .iter()
        .filter(|c| c.check_id == "mode1_below_radial")
        .all(|c| c.margin > 0.0);
    let fails = failures(relevant.iter().copied());
    let ok = fails.is_empty() && counts.iter().all(|&n| n == 88) && positive;
    report(
        5,
        ok,
        &format!(
            "{} checks, counts {counts:?}, failures {fails:?}",
            relevant.len()
        ),
    );
}

#[test]
fn criterion_06_f_monotone() {
    let mut checks = Vec::new();
    for p in built_in_profiles() {
        for m in [2, 3] {
            for r in [0.5, 1.0, 2.0] {
                checks.extend(
                    check_ball_properties(&p, m, r, &[])
                        .into_iter()
                        .filter(|c| c.check_id.starts_with("f_decreasing")),
                );
            }
        }
    }
    let worst = checks
        .iter()
        .map(|c| c.lhs / c.tolerance * 1e-8)
        .fold(0.0f64, f64::max);
    let fails = failures(&checks);
    report(
        6,
        fails.is_empty() && checks.len() == 4 * 2 * 3 * 3,
        &format!(
            "{} cases, max increment / max|F| = {worst:.2e}, failures {fails:?}",
            checks.len()
        ),
    );
}

#[test]
fn criterion_07_robin_inequality_at_desk_scale() {
    let start = Instant::now();
    let cfg = SuiteConfig {
        suite: Suite::Robin,
        refinement: 3,
        ..SuiteConfig::default()
    };
    let rep = run_suite(&cfg).unwrap();
    let elapsed = start.elapsed();
    let main = rep
        .checks
        .iter()
        .filter(|c| c.check_id == "robin_inequality")
        .count();
    let strict = rep
        .checks
        .iter()
        .filter(|c| c.check_id == "robin_inequality.strict")
        .count();
    let min_margin = rep
        .checks
        .iter()
        .filter(|c| c.check_id == "robin_inequality.strict")
        .map(|c| c.margin)
        .fold(f64::INFINITY, f64::min);
    let fails = failures(&rep.checks);
    let ok = fails.is_empty()
        && main == 4 * 4 * 3
        && strict == 3 * 4 * 3
        && elapsed < Duration::from_secs(600);
    report(
        7,
        ok,
        &format!(
            "{main} inequality + {strict} strict checks, min strict margin {min_margin:.3e}, {:.1} s, failures {fails:?}",
            elapsed.as_secs_f64()
        ),
    );
}

#[test]
fn criterion_08_weinberger_chain() {
    let cfg = SuiteConfig {
        suite: Suite::Chain,
        ..SuiteConfig::default()
    };
    let rep = run_suite(&cfg).unwrap();
    let count = |id: &str| rep.checks.iter().filter(|c| c.check_id == id).count();
    let counts = [
        count("rayleigh_identity"),
        count("g2_rearrangement"),
        count("f_rearrangement"),
        count("decreasing_rearrangement"),
    ];
    let worst_ratio = rep
        .checks
        .iter()
        .filter(|c| c.check_id == "rayleigh_identity")
        .map(|c| (c.lhs - c.rhs).abs() / c.rhs.abs().max(1.0))
        .fold(0.0f64, f64::max);
    let fails = failures(&rep.checks);
    let ok = fails.is_empty() && counts == [48, 48, 48, 48];
    report(
        8,
        ok,
        &format!("counts {counts:?}, max ratio deviation {worst_ratio:.2e}, failures {fails:?}"),
    );
}

#[test]
fn criterion_09_oracle_equivalence() {
    let mut profiles = built_in_profiles();
    profiles.push(WeightProfile::gauss(1.0));
    let mut worst = 0.0f64;
    let mut bad = Vec::new();
    for p in profiles {
        for mode in [AngularMode::Radial, AngularMode::First] {
            for (m, alpha) in [(2, 0.0), (2, -0.5), (3, -0.5)] {
                let problem = RadialProblem::new(p, m, 1.0, alpha, mode).unwrap();
                let exact: Vec<f64> = solve_radial(&problem, 3)
                    .unwrap()
                    .iter()
                    .map(|s| s.eigenvalue)
                    .collect();
                for n in [250usize, 500, 1000, 2000] {
                    let fd = solve_radial_fd_oracle_lowest(&problem, n, 3).unwrap();
                    for (k, (a, b)) in fd.iter().zip(&exact).enumerate() {
                        let scaled = (a - b).abs() * (n * n) as f64;
                        worst = worst.max(scaled);
                        if scaled > 5.0 {
                            bad.push(format!(
                                "{p} {mode:?} m={m} alpha={alpha} n={n} k={}: {scaled:.2}",
                                k + 1
                            ));
                        }
                    }
                }
            }
        }
    }
    report(
        9,
        bad.is_empty(),
        &format!("max n^2 |fd - shooting| = {worst:.3}, violations {bad:?}"),
    );
}

#[test]
fn criterion_10_determinism() {
    let exe = env!("CARGO_BIN_EXE_wrobin");
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    let mut bodies = Vec::new();
    for d in &dirs {
        let status = Command::new(exe)
            .args(["verify", "--default", "--out"])
            .arg(d.path())
            .output()
            .unwrap();
        assert_eq!(
            status.status.code(),
            Some(0),
            "{}",
            String::from_utf8_lossy(&status.stdout)
        );
        bodies.push(std::fs::read(d.path().join("report.csv")).unwrap());
    }
    report(
        10,
        bodies[0] == bodies[1] && !bodies[0].is_empty(),
        &format!("two runs, {} CSV bytes each", bodies[0].len()),
    );
}
