use std::collections::BTreeMap;
use std::io::Write;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::config::SuiteConfig;
use crate::error::{Error, Result};
use crate::fem2d::{StarDomain, DENSE_LIMIT};
use crate::linalg::SUBSPACE_SEED;
use crate::ode::Tolerances;
use crate::radial::{DEFAULT_GRID_POINTS, START_FRACTION, TOL_EIG};
use crate::weights::WeightProfile;

/// Margins within this many tolerances of zero are flagged as equality candidates.
pub const EQUALITY_FACTOR: f64 = 5.0;

/// Outcome of one numerical check: `passed` iff `margin >= -tolerance`.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub check_id: String,
    pub params: BTreeMap<String, String>,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub notes: String,
    /// Exploratory results are reported but never counted as failures.
    pub asserted: bool,
    /// Set when the check could not be evaluated because a solver failed.
    pub solver_error: bool,
}

impl CheckResult {
    pub fn new(
        check_id: &str,
        params: BTreeMap<String, String>,
        lhs: f64,
        rhs: f64,
        margin: f64,
        tolerance: f64,
    ) -> Self {
        let mut c = Self {
            check_id: check_id.to_string(),
            params,
            lhs,
            rhs,
            margin,
            tolerance,
            passed: false,
            notes: String::new(),
            asserted: true,
            solver_error: false,
        };
        if !(margin.is_finite() && tolerance.is_finite()) {
            c.margin = if margin.is_finite() { margin } else { -1.0 };
            c.tolerance = if tolerance.is_finite() {
                tolerance
            } else {
                0.0
            };
            c.add_note("non-finite margin or tolerance");
            c.passed = false;
            return c;
        }
        c.passed = c.recompute_passed();
        c
    }

    /// Failed record for a check whose solve raised an error.
    pub fn from_error(check_id: &str, params: BTreeMap<String, String>, err: &Error) -> Self {
        let mut c = Self::new(check_id, params, 0.0, 0.0, -1.0, 0.0);
        c.solver_error = matches!(
            err,
            Error::Convergence { .. } | Error::UnboundedSearch { .. }
        );
        c.add_note(&format!("error: {err}"));
        c
    }

    pub fn recompute_passed(&self) -> bool {
        self.margin.is_finite() && self.tolerance.is_finite() && self.margin >= -self.tolerance
    }

    pub fn is_equality_candidate(&self) -> bool {
        self.margin.abs() <= EQUALITY_FACTOR * self.tolerance
    }

    pub fn add_note(&mut self, note: &str) {
        if !self.notes.is_empty() {
            self.notes.push_str("; ");
        }
        self.notes.push_str(note);
    }

    /// The parameters as `k=v;k=v` in key order.
    pub fn params_string(&self) -> String {
        self.params
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(";")
    }
}

impl Serialize for CheckResult {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("CheckResult", 10)?;
        st.serialize_field("check_id", &self.check_id)?;
        st.serialize_field("params", &self.params)?;
        st.serialize_field("lhs", &self.lhs)?;
        st.serialize_field("rhs", &self.rhs)?;
        st.serialize_field("margin", &self.margin)?;
        st.serialize_field("tolerance", &self.tolerance)?;
        st.serialize_field("passed", &self.recompute_passed())?;
        st.serialize_field("notes", &self.notes)?;
        st.serialize_field("asserted", &self.asserted)?;
        st.serialize_field("solver_error", &self.solver_error)?;
        st.end()
    }
}

pub(crate) fn params_of(
    profile: &WeightProfile,
    domain: Option<&StarDomain>,
) -> BTreeMap<String, String> {
    let mut p = BTreeMap::new();
    p.insert("profile".to_string(), profile.name());
    if let Some(d) = domain {
        p.insert("domain".to_string(), d.name());
    }
    p
}

/// Tallies over the checks of a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    /// Failed checks that count against the run.
    pub asserted_failed: usize,
    pub exploratory: usize,
    pub equality_candidates: usize,
    pub solver_errors: usize,
}

impl Summary {
    pub fn tally(checks: &[CheckResult]) -> Self {
        let passed = checks.iter().filter(|c| c.recompute_passed()).count();
        Self {
            total: checks.len(),
            passed,
            failed: checks.len() - passed,
            asserted_failed: checks
                .iter()
                .filter(|c| c.asserted && !c.recompute_passed())
                .count(),
            exploratory: checks.iter().filter(|c| !c.asserted).count(),
            equality_candidates: checks
                .iter()
                .filter(|c| c.notes.contains("equality-candidate"))
                .count(),
            solver_errors: checks.iter().filter(|c| c.solver_error).count(),
        }
    }
}

/// Numerical settings in force for a run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolverSettings {
    pub refinement: usize,
    pub richardson_levels: Vec<usize>,
    pub radial_grid_points: usize,
    pub radial_start_fraction: f64,
    pub ode_rtol: f64,
    pub ode_atol: f64,
    pub eigenvalue_tolerance: f64,
    pub dense_limit: usize,
    pub subspace_seed: u64,
}

impl SolverSettings {
    fn from_config(config: &SuiteConfig) -> Self {
        let t = Tolerances::default();
        let r = config.refinement;
        Self {
            refinement: r,
            richardson_levels: (r.saturating_sub(2)..=r).collect(),
            radial_grid_points: DEFAULT_GRID_POINTS,
            radial_start_fraction: START_FRACTION,
            ode_rtol: t.rtol,
            ode_atol: t.atol,
            eigenvalue_tolerance: TOL_EIG,
            dense_limit: DENSE_LIMIT,
            subspace_seed: SUBSPACE_SEED,
        }
    }
}

/// All checks of one run with the grids that produced them.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub suite: String,
    pub profiles: Vec<String>,
    pub exploratory_profiles: Vec<String>,
    pub domains: Vec<String>,
    pub dims: Vec<usize>,
    pub alpha_grid: Vec<String>,
    pub checks: Vec<CheckResult>,
    pub summary: Summary,
    pub settings: SolverSettings,
}

impl VerificationReport {
    pub fn new(config: &SuiteConfig, checks: Vec<CheckResult>) -> Self {
        let summary = Summary::tally(&checks);
        Self {
            suite: config.suite.name().to_string(),
            profiles: config.profiles.iter().map(|p| p.name()).collect(),
            exploratory_profiles: config.exploratory.iter().map(|p| p.name()).collect(),
            domains: config.domains.iter().map(|d| d.name()).collect(),
            dims: config.dims.clone(),
            alpha_grid: config.alpha_spec().describe(),
            checks,
            summary,
            settings: SolverSettings::from_config(config),
        }
    }

    /// Whether every asserted check passed.
    pub fn all_passed(&self) -> bool {
        Summary::tally(&self.checks).asserted_failed == 0
    }

    pub fn has_solver_errors(&self) -> bool {
        self.checks.iter().any(|c| c.asserted && c.solver_error)
    }

    pub fn write_json<W: Write>(&self, out: &mut W) -> Result<()> {
        let mut copy = self.clone();
        copy.summary = Summary::tally(&copy.checks);
        serde_json::to_writer_pretty(&mut *out, &copy).map_err(|e| Error::Io(e.into()))?;
        writeln!(out)?;
        Ok(())
    }

    /// Flat CSV: `check_id,params,lhs,rhs,margin,tol,passed,asserted`.
    pub fn write_csv<W: Write>(&self, out: &mut W) -> Result<()> {
        writeln!(out, "check_id,params,lhs,rhs,margin,tol,passed,asserted")?;
        for c in &self.checks {
            writeln!(
                out,
                "{},\"{}\",{:.16e},{:.16e},{:.16e},{:.16e},{},{}",
                c.check_id,
                c.params_string(),
                c.lhs,
                c.rhs,
                c.margin,
                c.tolerance,
                c.recompute_passed(),
                c.asserted
            )?;
        }
        Ok(())
    }
}
