//! Radial weights `h(|x|)`, the weighted measure `e^{h(|x|)} dx` on balls, and the
//! prescribed-volume radius that defines the comparison ball.

use std::f64::consts::PI;
use std::fmt;

use crate::error::{Error, Result};
use crate::quadrature;

/// Sampling tolerance used when flagging `h' >= 0` and `h'' >= 0`.
pub const TOL_VALID: f64 = 1e-12;
/// Radius range over which validity is sampled.
pub const VALIDITY_RADIUS: f64 = 10.0;
const VALIDITY_SAMPLES: usize = 2001;

const VOLUME_REL_TOL: f64 = 1e-12;
/// Upper cap on the radius explored by [`radius_for_volume`].
pub const RADIUS_SEARCH_CAP: f64 = 1e3;

/// The analytic families a [`WeightProfile`] can be built from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProfileFamily {
    /// `h = 0`.
    Zero,
    /// `h = c r`.
    Linear { c: f64 },
    /// `h = c r^2 / 2`.
    Quadratic { c: f64 },
    /// `h = a r^2 + b r`.
    QuadLin { a: f64, b: f64 },
    /// `h = -c r^2 / 2`; violates `h'' >= 0` for `c > 0`, kept for exploratory runs.
    Gauss { c: f64 },
}

/// A radial weight `h` together with its analytic first and second derivatives.
///
/// Profiles are plain values; every evaluation is pure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightProfile {
    family: ProfileFamily,
}

impl WeightProfile {
    pub fn new(family: ProfileFamily) -> Self {
        Self { family }
    }

    pub fn zero() -> Self {
        Self::new(ProfileFamily::Zero)
    }

    pub fn linear(c: f64) -> Self {
        Self::new(ProfileFamily::Linear { c })
    }

    pub fn quadratic(c: f64) -> Self {
        Self::new(ProfileFamily::Quadratic { c })
    }

    pub fn quadlin(a: f64, b: f64) -> Self {
        Self::new(ProfileFamily::QuadLin { a, b })
    }

    pub fn gauss(c: f64) -> Self {
        Self::new(ProfileFamily::Gauss { c })
    }

    pub fn family(&self) -> ProfileFamily {
        self.family
    }

    /// Identifier in the same `name:params` syntax accepted by [`WeightProfile::parse`].
    pub fn name(&self) -> String {
        self.to_string()
    }

    pub fn family_params(&self) -> Vec<f64> {
        match self.family {
            ProfileFamily::Zero => vec![],
            ProfileFamily::Linear { c }
            | ProfileFamily::Quadratic { c }
            | ProfileFamily::Gauss { c } => vec![c],
            ProfileFamily::QuadLin { a, b } => vec![a, b],
        }
    }

    pub fn h(&self, r: f64) -> f64 {
        match self.family {
            ProfileFamily::Zero => 0.0,
            ProfileFamily::Linear { c } => c * r,
            ProfileFamily::Quadratic { c } => 0.5 * c * r * r,
            ProfileFamily::QuadLin { a, b } => (a * r + b) * r,
            ProfileFamily::Gauss { c } => -0.5 * c * r * r,
        }
    }

    pub fn h_prime(&self, r: f64) -> f64 {
        match self.family {
            ProfileFamily::Zero => 0.0,
            ProfileFamily::Linear { c } => c,
            ProfileFamily::Quadratic { c } => c * r,
            ProfileFamily::QuadLin { a, b } => 2.0 * a * r + b,
            ProfileFamily::Gauss { c } => -c * r,
        }
    }

    pub fn h_double_prime(&self, _r: f64) -> f64 {
        match self.family {
            ProfileFamily::Zero | ProfileFamily::Linear { .. } => 0.0,
            ProfileFamily::Quadratic { c } => c,
            ProfileFamily::QuadLin { a, .. } => 2.0 * a,
            ProfileFamily::Gauss { c } => -c,
        }
    }

    /// The density `e^{h(r)}` of the weighted measure.
    pub fn density(&self, r: f64) -> f64 {
        self.h(r).exp()
    }

    /// Checks `h' >= -tol` and `h'' >= -tol` on a dense grid of `[0, r_max]`.
    pub fn is_valid_on(&self, r_max: f64) -> bool {
        (0..VALIDITY_SAMPLES).all(|i| {
            let r = r_max * i as f64 / (VALIDITY_SAMPLES - 1) as f64;
            self.h_prime(r) >= -TOL_VALID && self.h_double_prime(r) >= -TOL_VALID
        })
    }

    /// Validity flag used to admit a profile into asserted checks.
    pub fn is_valid(&self) -> bool {
        self.is_valid_on(VALIDITY_RADIUS)
    }

    /// Whether `h'(r) > 0` on `(0, r_max]`, the strict hypothesis behind the `mu_1 < tau_2` ordering.
    pub fn strictly_increasing_on(&self, r_max: f64) -> bool {
        (1..VALIDITY_SAMPLES).all(|i| {
            let r = r_max * i as f64 / (VALIDITY_SAMPLES - 1) as f64;
            self.h_prime(r) > 0.0
        })
    }

    /// Parses `zero`, `linear:c`, `quadratic:c`, `quadlin:a,b` or `gauss:c`.
    pub fn parse(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        let (kind, args) = match spec.split_once(':') {
            Some((k, a)) => (k.trim(), a.trim()),
            None => (spec, ""),
        };
        let params =
            parse_params(args).map_err(|e| Error::Parameter(format!("profile '{spec}': {e}")))?;
        let want = |n: usize| -> Result<()> {
            if params.len() == n {
                Ok(())
            } else {
                Err(Error::Parameter(format!(
                    "profile '{spec}' expects {n} parameter(s), got {}",
                    params.len()
                )))
            }
        };
        let profile = match kind {
            "zero" => {
                want(0)?;
                Self::zero()
            }
            "linear" => {
                want(1)?;
                Self::linear(params[0])
            }
            "quadratic" => {
                want(1)?;
                Self::quadratic(params[0])
            }
            "quadlin" => {
                want(2)?;
                Self::quadlin(params[0], params[1])
            }
            "gauss" => {
                want(1)?;
                Self::gauss(params[0])
            }
            other => {
                return Err(Error::Parameter(format!("unknown profile kind '{other}'")));
            }
        };
        Ok(profile)
    }
}

impl fmt::Display for WeightProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            ProfileFamily::Zero => write!(f, "zero"),
            ProfileFamily::Linear { c } => write!(f, "linear:{c}"),
            ProfileFamily::Quadratic { c } => write!(f, "quadratic:{c}"),
            ProfileFamily::QuadLin { a, b } => write!(f, "quadlin:{a},{b}"),
            ProfileFamily::Gauss { c } => write!(f, "gauss:{c}"),
        }
    }
}

/// Parses a comma-separated list of finite decimals (empty input gives an empty list).
pub(crate) fn parse_params(args: &str) -> std::result::Result<Vec<f64>, String> {
    if args.trim().is_empty() {
        return Ok(Vec::new());
    }
    args.split(',')
        .map(|s| {
            let s = s.trim();
            s.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| format!("'{s}' is not a finite number"))
        })
        .collect()
}

/// The profiles used by default throughout the harness; all satisfy `h' >= 0`, `h'' >= 0`.
pub fn built_in_profiles() -> Vec<WeightProfile> {
    vec![
        WeightProfile::zero(),
        WeightProfile::linear(1.0),
        WeightProfile::quadratic(1.0),
        WeightProfile::quadlin(0.5, 0.5),
    ]
}

/// Origin-centred ball `B(R)` in `R^m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BallSpec {
    pub m: usize,
    pub radius: f64,
}

impl BallSpec {
    pub fn new(m: usize, radius: f64) -> Result<Self> {
        if m < 2 {
            return Err(Error::Parameter(format!("dimension m = {m} must be >= 2")));
        }
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::Parameter(format!(
                "radius {radius} must be positive"
            )));
        }
        Ok(Self { m, radius })
    }

    /// Surface area of the unit sphere `S^{m-1}`.
    pub fn sphere_area(&self) -> f64 {
        sphere_area(self.m)
    }
}

/// `omega_{m-1}`, the area of the unit sphere in `R^m`, via `omega_k = 2 pi omega_{k-2} / (k - 1)`.
pub fn sphere_area(m: usize) -> f64 {
    // omega_{-1}... indexing by k = m - 1: omega_0 = 2, omega_1 = 2 pi.
    let k = m - 1;
    let mut w = if k.is_multiple_of(2) { 2.0 } else { 2.0 * PI };
    let mut j = if k.is_multiple_of(2) { 0 } else { 1 };
    while j < k {
        j += 2;
        w *= 2.0 * PI / (j - 1) as f64;
    }
    w
}

/// `gamma_h` volume of `B(R)`, i.e. `omega_{m-1} int_0^R e^{h(r)} r^{m-1} dr`.
pub fn ball_gamma_volume(profile: &WeightProfile, ball: BallSpec) -> Result<f64> {
    let m = ball.m as i32;
    let radial = quadrature::integrate(
        |r| profile.density(r) * r.powi(m - 1),
        0.0,
        ball.radius,
        VOLUME_REL_TOL,
    )?;
    Ok(ball.sphere_area() * radial)
}

/// Radius of the origin-centred ball whose `gamma_h` volume equals `target_volume`.
pub fn radius_for_volume(profile: &WeightProfile, m: usize, target_volume: f64) -> Result<f64> {
    if !(target_volume > 0.0 && target_volume.is_finite()) {
        return Err(Error::Parameter(format!(
            "target volume {target_volume} must be positive"
        )));
    }
    let volume = |r: f64| ball_gamma_volume(profile, BallSpec::new(m, r)?);
    let (mut lo, mut v_lo) = (0.0, 0.0);
    let mut hi = 1.0;
    let mut v_hi = volume(hi)?;
    while v_hi < target_volume {
        (lo, v_lo) = (hi, v_hi);
        hi *= 2.0;
        if hi > RADIUS_SEARCH_CAP {
            return Err(Error::UnboundedSearch {
                what: format!("radius for gamma volume {target_volume}"),
                cap: RADIUS_SEARCH_CAP,
            });
        }
        v_hi = volume(hi)?;
    }
    // Regula falsi (Illinois variant) on the strictly increasing volume map.
    let (mut f_lo, mut f_hi) = (v_lo - target_volume, v_hi - target_volume);
    let mut side = 0i8;
    for _ in 0..200 {
        let r = (lo * f_hi - hi * f_lo) / (f_hi - f_lo);
        let f = volume(r)? - target_volume;
        if f.abs() <= 1e-12 * target_volume || hi - lo <= 1e-15 * hi {
            return Ok(r);
        }
        if f < 0.0 {
            lo = r;
            f_lo = f;
            if side == -1 {
                f_hi *= 0.5;
            }
            side = -1;
        } else {
            hi = r;
            f_hi = f;
            if side == 1 {
                f_lo *= 0.5;
            }
            side = 1;
        }
    }
    Err(Error::convergence("radius_for_volume", lo, hi))
}
