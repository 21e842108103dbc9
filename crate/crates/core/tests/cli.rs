use std::path::Path;
use std::process::{Command, Output};

fn wrobin(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wrobin"))
        .args(args)
        .current_dir(dir)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn value(out: &str, key: &str) -> f64 {
    out.lines()
        .find_map(|l| {
            l.strip_prefix(key)
                .map(|v| v.trim().parse::<f64>().unwrap())
        })
        .unwrap_or_else(|| panic!("no {key} in {out}"))
}

#[test]
fn ball_prints_disk_values() {
    let dir = tempfile::tempdir().unwrap();
    let o = wrobin(
        &[
            "ball",
            "--profile",
            "zero",
            "--m",
            "2",
            "--R",
            "1",
            "--alpha",
            "0",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!((value(&s, "lambda2") - 3.3899577).abs() < 1e-6);
    assert!((value(&s, "sigma1(B)") - 1.0).abs() < 1e-10);

    let o = wrobin(
        &["ball", "--profile", "zero", "--m", "3", "--R", "2"],
        dir.path(),
    );
    assert!((value(&stdout(&o), "sigma1(B)") - 0.5).abs() < 1e-10);
}

#[test]
fn ball_without_radius_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = wrobin(&["ball", "--profile", "zero", "--m", "2"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("Usage"));
}

#[test]
fn ball_csv_defaults_under_out() {
    let dir = tempfile::tempdir().unwrap();
    let o = wrobin(
        &[
            "ball",
            "--profile",
            "quadratic:1",
            "--R",
            "1",
            "--alpha",
            "-0.3",
            "--csv",
        ],
        dir.path(),
    );
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let text = std::fs::read_to_string(dir.path().join("out/radial.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("r,g,g_prime,F"));
    assert_eq!(lines.count(), 1024);
}

#[test]
fn domain_commands() {
    let dir = tempfile::tempdir().unwrap();
    let o = wrobin(
        &[
            "domain",
            "--kind",
            "disk:1",
            "--profile",
            "zero",
            "--alpha",
            "0",
            "--refine",
            "3",
            "--estimate",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    let l2 = value(&s, "lambda2");
    let line = s.lines().find(|l| l.contains("extrapolated")).unwrap();
    let err: f64 = line
        .split("+-")
        .nth(1)
        .unwrap()
        .split_whitespace()
        .next()
        .unwrap()
        .parse()
        .unwrap();
    assert!((l2 - 3.3899577).abs() <= 3.0 * err + 1e-6, "{s}");

    let o = wrobin(&["domain", "--kind", "perturbed_disk:1,0.1,3"], dir.path());
    assert_eq!(o.status.code(), Some(2));

    let o = wrobin(
        &[
            "domain",
            "--kind",
            "ellipse:1.5,0.8",
            "--steklov",
            "--spectrum-out",
            "--mesh-out",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    let s = value(&stdout(&o), "sigma1");
    assert!(s > 0.0 && s < 1.0);
    assert!(dir.path().join("out/spectrum.csv").exists());
    assert!(dir.path().join("out/mesh.txt").exists());
}

#[test]
fn verify_with_bad_config_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.cfg"), "alpha_fractions = 0; half; 1\n").unwrap();
    let o = wrobin(&["verify", "--config", "bad.cfg"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(!dir.path().join("out/report.csv").exists());
}

#[test]
fn verify_chain_writes_reports() {
    let dir = tempfile::tempdir().unwrap();
    let o = wrobin(
        &[
            "verify",
            "--suite",
            "chain",
            "--domain",
            "ellipse:1.5,0.8",
            "--profile",
            "quadratic:1",
            "--alpha",
            "-0.2",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let csv = std::fs::read_to_string(dir.path().join("out/report.csv")).unwrap();
    assert!(csv.starts_with("check_id,params,lhs,rhs,margin,tol,passed,asserted\n"));
    for id in [
        "g2_rearrangement",
        "f_rearrangement",
        "rayleigh_identity",
        "decreasing_rearrangement",
    ] {
        assert!(csv.lines().any(|l| l.starts_with(id)), "{id} missing");
    }
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("out/report.json")).unwrap())
            .unwrap();
    assert_eq!(json["suite"], "chain");
    assert_eq!(
        json["summary"]["total"].as_u64(),
        Some(csv.lines().count() as u64 - 1)
    );
}

#[test]
fn alpha_outside_hypothesis_is_reported_unasserted() {
    let dir = tempfile::tempdir().unwrap();
    let o = wrobin(
        &[
            "verify",
            "--suite",
            "robin",
            "--domain",
            "ellipse:1.5,0.8",
            "--profile",
            "zero",
            "--alpha",
            "-5",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let csv = std::fs::read_to_string(dir.path().join("out/report.csv")).unwrap();
    assert!(csv.lines().skip(1).all(|l| l.ends_with(",false")));
}
