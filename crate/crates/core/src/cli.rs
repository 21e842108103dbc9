//! Command-line front end: `ball`, `domain` and `verify` subcommands.
//!
//! Exit codes: 0 success, 1 a failed asserted check, 2 argument or configuration error,
//! 3 solver convergence failure.

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::error::{Error, Result};
use crate::fem2d::{solve_robin, solve_steklov, triangulate, EigenResult, StarDomain};
use crate::radial::{
    extend_g, f_profile, lambda1_ball, lambda2_ball, steklov_ball, write_radial_csv,
};
use crate::richardson::fit_tail;
use crate::verify::{run_suite, Suite, SuiteConfig, VerificationReport};
use crate::weights::WeightProfile;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CONVERGENCE: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "wrobin",
    version,
    about = "Robin and Steklov eigenvalues of radially weighted Laplacians"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Radial eigenvalues of a ball in R^m.
    Ball(BallArgs),
    /// FEM eigenvalues of a symmetric planar domain.
    Domain(DomainArgs),
    /// Run the verification suite and write JSON and CSV reports.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct BallArgs {
    /// Weight profile: zero, linear:c, quadratic:c, quadlin:a,b or gauss:c.
    #[arg(long, default_value = "zero")]
    pub profile: String,
    /// Dimension.
    #[arg(long, default_value_t = 2)]
    pub m: usize,
    /// Ball radius.
    #[arg(long = "R", value_name = "R")]
    pub radius: f64,
    /// Robin parameter (must be <= 0 for lambda_2).
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub alpha: f64,
    /// Write r, g, g', F of the mode-1 eigenfunction, continued to `--r-max`.
    #[arg(long, value_name = "PATH", num_args = 0..=1, default_missing_value = "out/radial.csv")]
    pub csv: Option<PathBuf>,
    /// Outer radius of the CSV samples (default 2R).
    #[arg(long)]
    pub r_max: Option<f64>,
}

#[derive(Debug, Args)]
pub struct DomainArgs {
    /// Domain: disk:r, ellipse:a,b, rectangle:a,b, stadium:a,r or perturbed_disk:r,eps,k.
    #[arg(long)]
    pub kind: String,
    #[arg(long, default_value = "zero")]
    pub profile: String,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub alpha: f64,
    /// Mesh refinement level.
    #[arg(long, default_value_t = 3)]
    pub refine: usize,
    /// Solve the Steklov problem instead of the Robin problem.
    #[arg(long)]
    pub steklov: bool,
    /// Number of eigenvalues to print.
    #[arg(long, default_value_t = 6)]
    pub count: usize,
    /// Also solve the two coarser levels and print a Richardson estimate of the second eigenvalue.
    #[arg(long)]
    pub estimate: bool,
    #[arg(long, value_name = "PATH", num_args = 0..=1, default_missing_value = "out/mesh.txt")]
    pub mesh_out: Option<PathBuf>,
    #[arg(long, value_name = "PATH", num_args = 0..=1, default_missing_value = "out/spectrum.csv")]
    pub spectrum_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Use the default configuration (also the fallback without `--config`).
    #[arg(long, conflicts_with = "config")]
    pub default: bool,
    /// Flat key = value configuration file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// all, robin, steklov, ball or chain.
    #[arg(long)]
    pub suite: Option<String>,
    /// Replace the domain list (repeatable).
    #[arg(long = "domain")]
    pub domains: Vec<String>,
    /// Replace the asserted profile list (repeatable).
    #[arg(long = "profile")]
    pub profiles: Vec<String>,
    /// Add an exploratory (unasserted) profile (repeatable).
    #[arg(long = "exploratory")]
    pub exploratory: Vec<String>,
    /// Explicit Robin parameters instead of fractions of sigma_1(B) (repeatable).
    #[arg(long = "alpha", allow_negative_numbers = true)]
    pub alphas: Vec<f64>,
    #[arg(long)]
    pub refine: Option<usize>,
    /// Directory receiving report.json and report.csv.
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

/// Parses `args` (including the program name), runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let result = match cli.command {
        Command::Ball(a) => cmd_ball(&a),
        Command::Domain(a) => cmd_domain(&a),
        Command::Verify(a) => cmd_verify(&a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}

pub fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::Convergence { .. } | Error::UnboundedSearch { .. } => EXIT_CONVERGENCE,
        _ => EXIT_USAGE,
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    Ok(BufWriter::new(File::create(path)?))
}

pub fn cmd_ball(args: &BallArgs) -> Result<i32> {
    let profile = WeightProfile::parse(&args.profile)?;
    let l1 = lambda1_ball(&profile, args.m, args.radius, args.alpha)?;
    let l2 = lambda2_ball(&profile, args.m, args.radius, args.alpha)?;
    let sigma1 = steklov_ball(&profile, args.m, args.radius)?;
    println!("profile    {}", profile);
    println!("m          {}", args.m);
    println!("R          {}", args.radius);
    println!("alpha      {}", args.alpha);
    println!("lambda1    {:.12}", l1);
    println!("lambda2    {:.12}", l2.lambda2);
    println!("  mu1      {:.12}", l2.mu1);
    println!("  tau2     {:.12}", l2.tau2);
    println!("sigma1(B)  {:.12}", sigma1);
    if let Some(path) = &args.csv {
        let r_max = args.r_max.unwrap_or(2.0 * args.radius);
        let ext = extend_g(&l2.mode1, r_max)?;
        let f = f_profile(&ext, args.alpha)?;
        let mut out = create(path)?;
        write_radial_csv(&mut out, &ext, &f)?;
        out.flush()?;
        println!("wrote {}", path.display());
    }
    Ok(EXIT_OK)
}

fn solve_domain(
    args: &DomainArgs,
    domain: &StarDomain,
    profile: &WeightProfile,
    level: usize,
) -> Result<EigenResult> {
    let mesh = triangulate(domain, level)?;
    if args.steklov {
        solve_steklov(&mesh, profile, args.count)
    } else {
        solve_robin(&mesh, profile, args.alpha, args.count)
    }
}

pub fn cmd_domain(args: &DomainArgs) -> Result<i32> {
    let domain = StarDomain::parse(&args.kind)?;
    let profile = WeightProfile::parse(&args.profile)?;
    let mesh = triangulate(&domain, args.refine)?;
    let result = solve_domain(args, &domain, &profile, args.refine)?;
    let label = if args.steklov { "sigma" } else { "lambda" };
    println!(
        "domain     {} (refinement {}, {} nodes)",
        domain,
        args.refine,
        mesh.nodes.len()
    );
    println!("profile    {}", profile);
    if args.steklov {
        println!("problem    steklov");
        println!("sigma1     {:.12}", result.eigenvalues[1]);
    } else {
        println!("problem    robin, alpha = {}", args.alpha);
    }
    // Steklov values are listed from sigma_0 = 0, Robin values from lambda_1.
    let offset = usize::from(!args.steklov);
    for (i, v) in result.eigenvalues.iter().enumerate() {
        println!("{label}{:<8} {:.12}", i + offset, v);
    }
    if args.estimate {
        if args.refine < 3 {
            return Err(Error::Parameter("--estimate needs --refine >= 3".into()));
        }
        let values = (args.refine - 2..=args.refine)
            .map(|l| Ok(solve_domain(args, &domain, &profile, l)?.eigenvalues[1]))
            .collect::<Result<Vec<f64>>>()?;
        let fit = fit_tail(&values, 2.0)?;
        println!(
            "{label}{} extrapolated {:.12} +- {:.3e} (observed order {:.3})",
            1 + offset,
            fit.extrapolated,
            fit.error,
            fit.order
        );
    }
    if let Some(path) = &args.mesh_out {
        let mut out = create(path)?;
        mesh.write_text(&mut out)?;
        out.flush()?;
        println!("wrote {}", path.display());
    }
    if let Some(path) = &args.spectrum_out {
        let mut out = create(path)?;
        result.write_csv(&mut out)?;
        out.flush()?;
        println!("wrote {}", path.display());
    }
    Ok(EXIT_OK)
}

/// Builds the suite configuration from the file or defaults plus command-line overrides.
pub fn verify_config(args: &VerifyArgs) -> Result<SuiteConfig> {
    let mut cfg = match &args.config {
        Some(path) => SuiteConfig::from_file(path)?,
        None => SuiteConfig::default(),
    };
    if let Some(s) = &args.suite {
        cfg.suite = s.parse::<Suite>()?;
    }
    if !args.domains.is_empty() {
        cfg.domains = args
            .domains
            .iter()
            .map(|s| StarDomain::parse(s))
            .collect::<Result<_>>()?;
    }
    let parse_profiles = |list: &[String]| -> Result<Vec<WeightProfile>> {
        list.iter()
            .map(|s| {
                WeightProfile::parse(s)
                    .map_err(|e| Error::Config(format!("invalid profile '{s}': {e}")))
            })
            .collect()
    };
    if !args.profiles.is_empty() {
        cfg.profiles = parse_profiles(&args.profiles)?;
    }
    if !args.exploratory.is_empty() {
        cfg.exploratory = parse_profiles(&args.exploratory)?;
    }
    if !args.alphas.is_empty() {
        cfg.alphas = Some(args.alphas.clone());
    }
    if let Some(r) = args.refine {
        cfg.refinement = r;
    }
    cfg.validate()?;
    Ok(cfg)
}

pub fn write_report(report: &VerificationReport, dir: &Path) -> Result<(PathBuf, PathBuf)> {
    let json = dir.join("report.json");
    let csv = dir.join("report.csv");
    let mut out = create(&json)?;
    report.write_json(&mut out)?;
    out.flush()?;
    let mut out = create(&csv)?;
    report.write_csv(&mut out)?;
    out.flush()?;
    Ok((json, csv))
}

pub fn cmd_verify(args: &VerifyArgs) -> Result<i32> {
    let cfg = verify_config(args)?;
    let report = run_suite(&cfg)?;
    let (json, csv) = write_report(&report, &args.out)?;
    let s = report.summary;
    println!("suite      {}", report.suite);
    println!(
        "checks     {} total, {} passed, {} failed ({} asserted), {} exploratory",
        s.total, s.passed, s.failed, s.asserted_failed, s.exploratory
    );
    println!("equality candidates {}", s.equality_candidates);
    for c in report.checks.iter().filter(|c| !c.passed) {
        let tag = if c.asserted {
            "FAIL"
        } else {
            "fail (exploratory)"
        };
        println!(
            "{tag} {} [{}] margin {:.3e} tol {:.3e} {}",
            c.check_id,
            c.params_string(),
            c.margin,
            c.tolerance,
            c.notes
        );
    }
    println!("wrote {} and {}", json.display(), csv.display());
    Ok(verify_exit_code(&report))
}

/// 3 if an asserted check hit a solver failure, else 1 if an asserted check failed, else 0.
pub fn verify_exit_code(report: &VerificationReport) -> i32 {
    if report.has_solver_errors() {
        EXIT_CONVERGENCE
    } else if report.all_passed() {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn code(args: &[&str]) -> i32 {
        run(std::iter::once("wrobin").chain(args.iter().copied()))
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(code(&["ball", "--profile", "zero", "--m", "2"]), EXIT_USAGE);
        assert_eq!(
            code(&["ball", "--R", "1", "--profile", "cubic:1"]),
            EXIT_USAGE
        );
        assert_eq!(
            code(&["domain", "--kind", "perturbed_disk:1,0.1,3"]),
            EXIT_USAGE
        );
        assert_eq!(code(&["frobnicate"]), EXIT_USAGE);
        assert_eq!(code(&["ball", "--R", "1", "--alpha", "0.5"]), EXIT_USAGE);
    }

    #[test]
    fn negative_alpha_is_accepted() {
        let cli = Cli::try_parse_from(["wrobin", "ball", "--R", "1", "--alpha", "-0.5"]).unwrap();
        match cli.command {
            Command::Ball(a) => assert_eq!(a.alpha, -0.5),
            _ => unreachable!(),
        }
    }

    #[test]
    fn verify_overrides_apply() {
        let cli = Cli::try_parse_from([
            "wrobin",
            "verify",
            "--suite",
            "chain",
            "--domain",
            "ellipse:1.5,0.8",
            "--profile",
            "quadratic:1",
            "--alpha",
            "-0.2",
        ])
        .unwrap();
        let Command::Verify(a) = cli.command else {
            unreachable!()
        };
        let cfg = verify_config(&a).unwrap();
        assert_eq!(cfg.suite, Suite::Chain);
        assert_eq!(cfg.domains.len(), 1);
        assert_eq!(cfg.profiles, vec![WeightProfile::quadratic(1.0)]);
        assert_eq!(cfg.alphas, Some(vec![-0.2]));
    }

    #[test]
    fn verify_exit_codes() {
        use crate::verify::CheckResult;
        use std::collections::BTreeMap;
        let cfg = SuiteConfig::default();
        let ok = CheckResult::new("a", BTreeMap::new(), 0.0, 0.0, 1.0, 0.0);
        let bad = CheckResult::new("b", BTreeMap::new(), 0.0, 0.0, -1.0, 0.0);
        let mut unasserted = bad.clone();
        unasserted.asserted = false;
        let err =
            CheckResult::from_error("c", BTreeMap::new(), &Error::convergence("root", 0.0, 1.0));
        let code =
            |checks: Vec<CheckResult>| verify_exit_code(&VerificationReport::new(&cfg, checks));
        assert_eq!(code(vec![ok.clone(), unasserted]), EXIT_OK);
        assert_eq!(code(vec![ok.clone(), bad.clone()]), EXIT_CHECK_FAILED);
        assert_eq!(code(vec![ok, bad, err]), EXIT_CONVERGENCE);
    }

    #[test]
    fn convergence_errors_map_to_three() {
        assert_eq!(
            exit_code_for(&Error::Convergence {
                what: "x".into(),
                lo: 0.0,
                hi: 1.0
            }),
            EXIT_CONVERGENCE
        );
        assert_eq!(exit_code_for(&Error::Config("x".into())), EXIT_USAGE);
    }
}
