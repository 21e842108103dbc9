use std::fmt;
use std::path::Path;
use std::str::FromStr;

use super::checks::AlphaSpec;
use crate::error::{Error, Result};
use crate::fem2d::StarDomain;
use crate::weights::{built_in_profiles, WeightProfile};

/// Which groups of checks a run executes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Suite {
    #[default]
    All,
    Robin,
    Steklov,
    Ball,
    Chain,
}

impl Suite {
    pub fn includes(self, part: Suite) -> bool {
        self == Suite::All || self == part
    }

    pub fn name(self) -> &'static str {
        match self {
            Suite::All => "all",
            Suite::Robin => "robin",
            Suite::Steklov => "steklov",
            Suite::Ball => "ball",
            Suite::Chain => "chain",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "all" | "default" => Ok(Suite::All),
            "robin" => Ok(Suite::Robin),
            "steklov" => Ok(Suite::Steklov),
            "ball" => Ok(Suite::Ball),
            "chain" => Ok(Suite::Chain),
            other => Err(Error::Config(format!(
                "unknown suite '{other}' (expected all, robin, steklov, ball or chain)"
            ))),
        }
    }
}

/// Domains of the default run, each later matched to a ball of equal weighted volume.
pub const DEFAULT_DOMAINS: [&str; 4] = [
    "ellipse:1.5,0.8",
    "rectangle:1.2,0.8",
    "stadium:0.6,0.6",
    "perturbed_disk:1,0.15,2",
];

/// Default Robin parameters as fractions `t` of `alpha = -t sigma_1(B)`.
pub const DEFAULT_ALPHA_FRACTIONS: [f64; 3] = [0.0, 0.5, 1.0];

/// Everything a verification run needs.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub suite: Suite,
    /// Profiles whose checks are asserted.
    pub profiles: Vec<WeightProfile>,
    /// Profiles reported but never asserted.
    pub exploratory: Vec<WeightProfile>,
    pub domains: Vec<StarDomain>,
    pub alpha_fractions: Vec<f64>,
    /// Explicit Robin parameters; when present they replace `alpha_fractions`.
    pub alphas: Option<Vec<f64>>,
    /// Finest mesh level; the two coarser levels feed the error estimate.
    pub refinement: usize,
    pub dims: Vec<usize>,
    pub prop_radius: f64,
    pub prop_alpha_points: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            suite: Suite::All,
            profiles: built_in_profiles(),
            exploratory: Vec::new(),
            domains: DEFAULT_DOMAINS
                .iter()
                .map(|d| StarDomain::parse(d).expect("default domain"))
                .collect(),
            alpha_fractions: DEFAULT_ALPHA_FRACTIONS.to_vec(),
            alphas: None,
            refinement: 3,
            dims: vec![2, 3],
            prop_radius: 1.0,
            prop_alpha_points: 11,
        }
    }
}

impl SuiteConfig {
    /// Checks everything that can be checked without solving.
    pub fn validate(&self) -> Result<()> {
        let mut problems = Vec::new();
        for p in &self.profiles {
            if !p.is_valid() {
                problems.push(format!(
                    "profile '{}' violates h' >= 0, h'' >= 0; list it under exploratory to run it unasserted",
                    p.name()
                ));
            }
        }
        if self.profiles.is_empty() && self.exploratory.is_empty() {
            problems.push("no profiles given".to_string());
        }
        let needs_domains = self.suite != Suite::Ball && !self.domains.is_empty();
        if needs_domains && self.refinement < 3 {
            problems.push(format!(
                "refinement must be at least 3 for mesh checks, got {}",
                self.refinement
            ));
        }
        if self.refinement > 8 {
            problems.push(format!(
                "refinement {} is beyond the supported range 3..=8",
                self.refinement
            ));
        }
        for &t in &self.alpha_fractions {
            if !(0.0..=1.0).contains(&t) {
                problems.push(format!("alpha fraction {t} is outside [0, 1]"));
            }
        }
        if let Some(alphas) = &self.alphas {
            if alphas.is_empty() {
                problems.push("explicit alpha list is empty".to_string());
            }
            for &a in alphas {
                if !(a.is_finite() && a <= 0.0) {
                    problems.push(format!("alpha {a} must be finite and <= 0"));
                }
            }
        } else if self.alpha_fractions.is_empty() && needs_domains {
            problems.push("alpha grid is empty".to_string());
        }
        for &m in &self.dims {
            if m < 2 {
                problems.push(format!("dimension {m} must be at least 2"));
            }
        }
        if !(self.prop_radius.is_finite() && self.prop_radius > 0.0) {
            problems.push(format!("ball radius {} must be positive", self.prop_radius));
        }
        if self.prop_alpha_points < 2 {
            problems.push(format!(
                "prop_alpha_points must be at least 2, got {}",
                self.prop_alpha_points
            ));
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(problems.join("; ")))
        }
    }

    /// Uniform fractions `0, 1/(n-1), ..., 1` for the ball-side checks.
    pub fn ball_fractions(&self) -> Vec<f64> {
        let n = self.prop_alpha_points.max(2);
        (0..n).map(|i| i as f64 / (n - 1) as f64).collect()
    }

    pub fn alpha_spec(&self) -> AlphaSpec {
        match &self.alphas {
            Some(a) => AlphaSpec::Explicit(a.clone()),
            None => AlphaSpec::Fractions(self.alpha_fractions.clone()),
        }
    }

    /// Reads a flat `key = value` file. Lists are separated by `;`, `#` starts a comment.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        text.parse()
    }
}

fn list(value: &str) -> impl Iterator<Item = &str> {
    value.split(';').map(str::trim).filter(|s| !s.is_empty())
}

fn numbers(key: &str, value: &str) -> Result<Vec<f64>> {
    list(value)
        .map(|s| {
            s.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::Config(format!("{key}: '{s}' is not a number")))
        })
        .collect()
}

fn integer(key: &str, value: &str) -> Result<usize> {
    value.trim().parse().map_err(|_| {
        Error::Config(format!(
            "{key}: '{}' is not a non-negative integer",
            value.trim()
        ))
    })
}

fn profiles(key: &str, value: &str) -> Result<Vec<WeightProfile>> {
    list(value)
        .map(|s| {
            WeightProfile::parse(s)
                .map_err(|e| Error::Config(format!("{key}: invalid profile '{s}': {e}")))
        })
        .collect()
}

impl FromStr for SuiteConfig {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut cfg = SuiteConfig::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: expected key = value", lineno + 1))
            })?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "suite" => cfg.suite = value.parse()?,
                "profiles" => cfg.profiles = profiles(key, value)?,
                "exploratory" => cfg.exploratory = profiles(key, value)?,
                "domains" => {
                    cfg.domains = list(value)
                        .map(|s| {
                            StarDomain::parse(s).map_err(|e| {
                                Error::Config(format!("domains: invalid domain '{s}': {e}"))
                            })
                        })
                        .collect::<Result<_>>()?
                }
                "alpha_fractions" => cfg.alpha_fractions = numbers(key, value)?,
                "alphas" => cfg.alphas = Some(numbers(key, value)?),
                "refinement" => cfg.refinement = integer(key, value)?,
                "dims" => {
                    cfg.dims = list(value)
                        .map(|s| integer(key, s))
                        .collect::<Result<_>>()?;
                }
                "prop_radius" => {
                    cfg.prop_radius = *numbers(key, value)?
                        .first()
                        .ok_or_else(|| Error::Config("prop_radius: missing value".into()))?
                }
                "prop_alpha_points" => cfg.prop_alpha_points = integer(key, value)?,
                other => {
                    return Err(Error::Config(format!(
                        "line {}: unknown key '{other}'",
                        lineno + 1
                    )))
                }
            }
        }
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_config_is_valid() {
        let c = SuiteConfig::default();
        c.validate().unwrap();
        assert_eq!(c.profiles.len(), 4);
        assert_eq!(c.domains.len(), 4);
        assert_eq!(c.ball_fractions().len(), 11);
    }

    #[test]
    fn parses_flat_files() {
        let c: SuiteConfig = "# sweep\nsuite = chain\nprofiles = quadratic:1; linear:0.5\ndomains = \nalphas = -0.2;-0.1\n\
                              refinement = 4\ndims = 2\n"
            .parse()
            .unwrap();
        assert_eq!(c.suite, Suite::Chain);
        assert_eq!(c.profiles.len(), 2);
        assert!(c.domains.is_empty());
        assert_eq!(c.alpha_spec(), AlphaSpec::Explicit(vec![-0.2, -0.1]));
        assert_eq!((c.refinement, c.dims.clone()), (4, vec![2]));
    }

    #[test]
    fn malformed_alpha_grid_is_rejected() {
        let e = "alphas = -0.2; abc".parse::<SuiteConfig>().unwrap_err();
        assert!(matches!(e, Error::Config(ref s) if s.contains("abc")));
        let c: SuiteConfig = "alpha_fractions = 0; 1.5".parse().unwrap();
        assert!(c.validate().is_err());
        let c: SuiteConfig = "alphas = 0.3".parse().unwrap();
        assert!(c.validate().is_err());
    }

    #[test]
    fn invalid_profile_is_named() {
        let c: SuiteConfig = "profiles = zero; gauss:1".parse().unwrap();
        let e = c.validate().unwrap_err().to_string();
        assert!(e.contains("gauss:1"), "{e}");
        let e = "profiles = cubic:2"
            .parse::<SuiteConfig>()
            .unwrap_err()
            .to_string();
        assert!(e.contains("cubic:2"), "{e}");
        let c: SuiteConfig = "exploratory = gauss:1".parse().unwrap();
        c.validate().unwrap();
    }

    #[test]
    fn low_refinement_needs_no_domains() {
        let mut c = SuiteConfig {
            refinement: 2,
            ..SuiteConfig::default()
        };
        assert!(c.validate().is_err());
        c.domains.clear();
        c.validate().unwrap();
    }

    #[test]
    fn unknown_keys_and_suites_fail() {
        assert!("colour = red".parse::<SuiteConfig>().is_err());
        assert!("suite = everything".parse::<SuiteConfig>().is_err());
        assert!("just text".parse::<SuiteConfig>().is_err());
    }
}
