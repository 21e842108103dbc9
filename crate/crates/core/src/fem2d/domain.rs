use std::f64::consts::PI;
use std::fmt;

use crate::error::{Error, Result};
use crate::weights::parse_params;

/// Origin-symmetric planar domain families, described by their boundary radius `rho(theta)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DomainKind {
    Disk {
        r: f64,
    },
    /// Semi-axes `a` (along x) and `b`.
    Ellipse {
        a: f64,
        b: f64,
    },
    /// `[-a, a] x [-b, b]`.
    Rectangle {
        a: f64,
        b: f64,
    },
    /// `[-a, a] x [-r, r]` capped by half-disks of radius `r` centred at `(+-a, 0)`.
    Stadium {
        a: f64,
        r: f64,
    },
    /// `rho = r (1 + eps cos(k theta))` with even `k`.
    PerturbedDisk {
        r: f64,
        eps: f64,
        k: u32,
    },
}

/// A star-shaped domain symmetric under `x -> -x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StarDomain {
    kind: DomainKind,
}

/// Builds a domain from a family name and its parameters.
pub fn make_domain(kind: &str, params: &[f64]) -> Result<StarDomain> {
    let need = |n: usize| {
        if params.len() == n {
            Ok(())
        } else {
            Err(Error::Parameter(format!(
                "{kind} takes {n} parameter(s), got {}",
                params.len()
            )))
        }
    };
    let positive = |name: &str, v: f64| {
        if v > 0.0 && v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Parameter(format!(
                "{kind}: {name} must be positive, got {v}"
            )))
        }
    };
    let kind = match kind {
        "disk" => {
            need(1)?;
            DomainKind::Disk {
                r: positive("radius", params[0])?,
            }
        }
        "ellipse" => {
            need(2)?;
            DomainKind::Ellipse {
                a: positive("a", params[0])?,
                b: positive("b", params[1])?,
            }
        }
        "rectangle" => {
            need(2)?;
            DomainKind::Rectangle {
                a: positive("a", params[0])?,
                b: positive("b", params[1])?,
            }
        }
        "stadium" => {
            need(2)?;
            DomainKind::Stadium {
                a: positive("a", params[0])?,
                r: positive("r", params[1])?,
            }
        }
        "perturbed_disk" => {
            need(3)?;
            let r = positive("radius", params[0])?;
            let eps = params[1];
            if !(eps.abs() < 1.0) {
                return Err(Error::Parameter(format!(
                    "perturbed_disk: |eps| must be < 1, got {eps}"
                )));
            }
            let k = params[2];
            if k < 0.0 || k.fract() != 0.0 || k > 1e6 {
                return Err(Error::Parameter(format!(
                    "perturbed_disk: k must be a non-negative integer, got {k}"
                )));
            }
            let k = k as u32;
            if !k.is_multiple_of(2) {
                return Err(Error::Parameter(format!(
                    "perturbed_disk: odd k = {k} breaks central symmetry"
                )));
            }
            DomainKind::PerturbedDisk { r, eps, k }
        }
        other => return Err(Error::Parameter(format!("unknown domain kind '{other}'"))),
    };
    Ok(StarDomain { kind })
}

impl StarDomain {
    pub fn kind(&self) -> DomainKind {
        self.kind
    }

    /// Parses `"kind:p1,p2,..."`, e.g. `"ellipse:1.5,0.8"`.
    pub fn parse(spec: &str) -> Result<Self> {
        let (kind, args) = spec.split_once(':').unwrap_or((spec, ""));
        let params =
            parse_params(args).map_err(|e| Error::Parameter(format!("domain '{spec}': {e}")))?;
        make_domain(kind.trim(), &params)
    }

    pub fn family(&self) -> &'static str {
        match self.kind {
            DomainKind::Disk { .. } => "disk",
            DomainKind::Ellipse { .. } => "ellipse",
            DomainKind::Rectangle { .. } => "rectangle",
            DomainKind::Stadium { .. } => "stadium",
            DomainKind::PerturbedDisk { .. } => "perturbed_disk",
        }
    }

    pub fn params(&self) -> Vec<f64> {
        match self.kind {
            DomainKind::Disk { r } => vec![r],
            DomainKind::Ellipse { a, b } | DomainKind::Rectangle { a, b } => vec![a, b],
            DomainKind::Stadium { a, r } => vec![a, r],
            DomainKind::PerturbedDisk { r, eps, k } => vec![r, eps, k as f64],
        }
    }

    pub fn name(&self) -> String {
        self.to_string()
    }

    pub fn is_disk(&self) -> bool {
        match self.kind {
            DomainKind::Disk { .. } => true,
            DomainKind::PerturbedDisk { eps, k, .. } => eps == 0.0 || k == 0,
            DomainKind::Ellipse { a, b } => a == b,
            _ => false,
        }
    }

    /// Boundary radius in direction `theta`.
    pub fn rho(&self, theta: f64) -> f64 {
        let (s, c) = theta.sin_cos();
        match self.kind {
            DomainKind::Disk { r } => r,
            DomainKind::Ellipse { a, b } => a * b / ((b * c).powi(2) + (a * s).powi(2)).sqrt(),
            DomainKind::Rectangle { a, b } => {
                let x = if c == 0.0 { f64::INFINITY } else { a / c.abs() };
                let y = if s == 0.0 { f64::INFINITY } else { b / s.abs() };
                x.min(y)
            }
            DomainKind::Stadium { a, r } => {
                if r * c.abs() <= a * s.abs() {
                    r / s.abs()
                } else {
                    a * c.abs() + (r * r - (a * s).powi(2)).max(0.0).sqrt()
                }
            }
            DomainKind::PerturbedDisk { r, eps, k } => r * (1.0 + eps * (k as f64 * theta).cos()),
        }
    }

    /// Angles in `[0, pi)` where `rho` is not smooth; mesh nodes are placed on these rays.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self.kind {
            DomainKind::Rectangle { a, b } => {
                let t = b.atan2(a);
                vec![t, PI - t]
            }
            DomainKind::Stadium { a, r } => {
                let t = r.atan2(a);
                vec![t, PI - t]
            }
            _ => vec![],
        }
    }

    /// Maximum of `|rho(theta + pi) - rho(theta)|` over `samples` angles.
    pub fn symmetry_defect(&self, samples: usize) -> f64 {
        (0..samples)
            .map(|i| {
                let t = 2.0 * PI * i as f64 / samples as f64;
                (self.rho(t + PI) - self.rho(t)).abs()
            })
            .fold(0.0, f64::max)
    }

    /// Lebesgue area, in closed form.
    pub fn area(&self) -> f64 {
        match self.kind {
            DomainKind::Disk { r } => PI * r * r,
            DomainKind::Ellipse { a, b } => PI * a * b,
            DomainKind::Rectangle { a, b } => 4.0 * a * b,
            DomainKind::Stadium { a, r } => 4.0 * a * r + PI * r * r,
            DomainKind::PerturbedDisk { r, eps, k } => {
                let extra = if k == 0 {
                    2.0 * eps + eps * eps
                } else {
                    0.5 * eps * eps
                };
                PI * r * r * (1.0 + extra)
            }
        }
    }
}

impl fmt::Display for StarDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let params: Vec<String> = self.params().iter().map(|p| p.to_string()).collect();
        write!(f, "{}:{}", self.family(), params.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let d = make_domain("disk", &[1.0]).unwrap();
        assert!((0..16).all(|i| d.rho(i as f64 * 0.4) == 1.0));
        let e = make_domain("ellipse", &[2.0, 1.0]).unwrap();
        assert!((e.rho(0.0) - 2.0).abs() < 1e-15);
        assert!((e.rho(PI / 2.0) - 1.0).abs() < 1e-15);
        assert!(matches!(
            make_domain("perturbed_disk", &[1.0, 0.1, 3.0]),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn parameter_errors() {
        assert!(make_domain("disk", &[0.0]).is_err());
        assert!(make_domain("disk", &[1.0, 2.0]).is_err());
        assert!(make_domain("ellipse", &[1.0, -1.0]).is_err());
        assert!(make_domain("hexagon", &[1.0]).is_err());
        assert!(make_domain("perturbed_disk", &[1.0, 1.5, 2.0]).is_err());
        assert!(make_domain("perturbed_disk", &[1.0, 0.1, 2.5]).is_err());
        assert!(StarDomain::parse("ellipse:1.5,x").is_err());
    }

    #[test]
    fn parse_round_trip() {
        for spec in [
            "disk:1",
            "ellipse:1.5,0.8",
            "rectangle:1.2,0.8",
            "stadium:0.6,0.6",
            "perturbed_disk:1,0.15,2",
        ] {
            let d = StarDomain::parse(spec).unwrap();
            assert_eq!(d.to_string(), spec);
        }
    }

    #[test]
    fn boundary_points_lie_on_the_shapes() {
        let rect = make_domain("rectangle", &[1.2, 0.8]).unwrap();
        let st = make_domain("stadium", &[0.6, 0.5]).unwrap();
        for i in 0..720 {
            let t = 2.0 * PI * (i as f64 + 0.37) / 720.0;
            let (x, y) = (rect.rho(t) * t.cos(), rect.rho(t) * t.sin());
            let on_rect = ((x.abs() - 1.2).abs() < 1e-12 && y.abs() <= 0.8 + 1e-12)
                || ((y.abs() - 0.8).abs() < 1e-12 && x.abs() <= 1.2 + 1e-12);
            assert!(on_rect, "{x} {y}");
            let (x, y) = (st.rho(t) * t.cos(), st.rho(t) * t.sin());
            let on_flat = (y.abs() - 0.5).abs() < 1e-12 && x.abs() <= 0.6 + 1e-12;
            let on_cap = ((x.abs() - 0.6).hypot(y) - 0.5).abs() < 1e-12 && x.abs() >= 0.6 - 1e-12;
            assert!(on_flat || on_cap, "{x} {y}");
        }
    }

    #[test]
    fn central_symmetry() {
        for spec in [
            "ellipse:1.5,0.8",
            "rectangle:1.2,0.8",
            "stadium:0.6,0.6",
            "perturbed_disk:1,0.15,2",
        ] {
            assert!(
                StarDomain::parse(spec).unwrap().symmetry_defect(1000) <= 1e-12,
                "{spec}"
            );
        }
    }
}
