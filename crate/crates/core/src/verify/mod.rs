//! Verification harness: runs every check over grids of profiles, domains and Robin parameters
//! and collects the outcomes in a [`VerificationReport`].

mod checks;
mod config;
mod report;

pub use checks::{
    check_ball_properties, check_robin_inequality, check_steklov_inequality,
    check_weinberger_chain, AlphaSpec, DomainLevels, DECREASING_TEST_FUNCTIONS,
};
pub use config::{Suite, SuiteConfig};
pub use report::{CheckResult, SolverSettings, Summary, VerificationReport};

use rayon::prelude::*;

use crate::error::Result;
use crate::fem2d::StarDomain;
use crate::weights::WeightProfile;

/// Runs the configured suite. Configuration problems are reported before any solve.
pub fn run_suite(config: &SuiteConfig) -> Result<VerificationReport> {
    config.validate()?;
    let profiles: Vec<(WeightProfile, bool)> = config
        .profiles
        .iter()
        .map(|p| (*p, true))
        .chain(config.exploratory.iter().map(|p| (*p, false)))
        .collect();
    let suite = config.suite;

    let mut checks = Vec::new();

    if suite.includes(Suite::Ball) {
        let jobs: Vec<(WeightProfile, bool, usize)> = profiles
            .iter()
            .flat_map(|&(p, a)| config.dims.iter().map(move |&m| (p, a, m)))
            .collect();
        let results: Vec<Vec<CheckResult>> = jobs
            .par_iter()
            .map(|&(p, asserted, m)| {
                let fractions = config.ball_fractions();
                mark(
                    check_ball_properties(&p, m, config.prop_radius, &fractions),
                    asserted,
                )
            })
            .collect();
        checks.extend(results.into_iter().flatten());
    }

    let domain_jobs: Vec<(WeightProfile, bool, StarDomain)> = profiles
        .iter()
        .flat_map(|&(p, a)| config.domains.iter().map(move |d| (p, a, *d)))
        .collect();
    let alphas = config.alpha_spec();

    if suite.includes(Suite::Robin) || suite.includes(Suite::Steklov) {
        let results: Vec<Vec<CheckResult>> = domain_jobs
            .par_iter()
            .map(|&(p, asserted, d)| {
                let mut out = Vec::new();
                match DomainLevels::build(&d, &p, config.refinement) {
                    Ok(levels) => {
                        if suite.includes(Suite::Robin) {
                            out.extend(check_robin_inequality(&p, &levels, &alphas));
                        }
                        if suite.includes(Suite::Steklov) {
                            out.extend(check_steklov_inequality(&p, &levels));
                        }
                    }
                    Err(e) => out.push(CheckResult::from_error(
                        "setup",
                        report::params_of(&p, Some(&d)),
                        &e,
                    )),
                }
                mark(out, asserted)
            })
            .collect();
        checks.extend(results.into_iter().flatten());
    }

    if suite.includes(Suite::Chain) {
        let results: Vec<Vec<CheckResult>> = domain_jobs
            .par_iter()
            .map(|&(p, asserted, d)| {
                mark(
                    check_weinberger_chain(&p, &d, &alphas, config.refinement),
                    asserted,
                )
            })
            .collect();
        checks.extend(results.into_iter().flatten());
    }

    Ok(VerificationReport::new(config, checks))
}

fn mark(mut checks: Vec<CheckResult>, asserted: bool) -> Vec<CheckResult> {
    if !asserted {
        for c in checks.iter_mut() {
            c.asserted = false;
            c.add_note("exploratory profile, not asserted");
        }
    }
    checks
}
