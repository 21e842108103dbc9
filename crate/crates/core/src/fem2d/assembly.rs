use super::mesh::Mesh;
use crate::error::{Error, Result};
use crate::linalg::BandedSym;
use crate::weights::WeightProfile;

const GAUSS2: [f64; 2] = [0.211_324_865_405_187_1, 0.788_675_134_594_812_9];

fn radius(p: [f64; 2]) -> f64 {
    p[0].hypot(p[1])
}

fn midpoints(mesh: &Mesh, t: &[usize; 3]) -> [[f64; 2]; 3] {
    let mut out = [[0.0; 2]; 3];
    for k in 0..3 {
        let (a, b) = (mesh.nodes[t[k]], mesh.nodes[t[(k + 1) % 3]]);
        out[k] = [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])];
    }
    out
}

/// Weighted stiffness plus `alpha` times the weighted boundary mass (`K`) and the weighted mass
/// (`M`). Triangle integrals use the edge-midpoint rule, boundary integrals two-point Gauss.
pub fn assemble(
    mesh: &Mesh,
    profile: &WeightProfile,
    alpha: f64,
) -> Result<(BandedSym, BandedSym)> {
    let n = mesh.nodes.len();
    let bw = mesh.bandwidth();
    let mut k = BandedSym::zeros(n, bw);
    let mut m = BandedSym::zeros(n, bw);
    for (ti, t) in mesh.triangles.iter().enumerate() {
        let area = mesh.triangle_area(ti);
        let p = [mesh.nodes[t[0]], mesh.nodes[t[1]], mesh.nodes[t[2]]];
        // gradients of the barycentric coordinates, times 2 * area
        let mut grad = [[0.0; 2]; 3];
        for a in 0..3 {
            let (b, c) = (p[(a + 1) % 3], p[(a + 2) % 3]);
            grad[a] = [b[1] - c[1], c[0] - b[0]];
        }
        let mids = midpoints(mesh, t);
        let w: Vec<f64> = mids.iter().map(|q| profile.density(radius(*q))).collect();
        if w.iter().any(|v| !v.is_finite()) {
            return Err(Error::Evaluation(format!(
                "weight not finite on triangle {ti}"
            )));
        }
        let w_avg = (w[0] + w[1] + w[2]) / 3.0;
        for a in 0..3 {
            for b in 0..=a {
                let g = grad[a][0] * grad[b][0] + grad[a][1] * grad[b][1];
                k.add(t[a], t[b], w_avg * g / (4.0 * area));
                // midpoint k lies on edge (k, k+1): basis a is 1/2 there iff a is an endpoint
                let mut mass = 0.0;
                for (q, wq) in w.iter().enumerate() {
                    let on = |x: usize| x == q || x == (q + 1) % 3;
                    if on(a) && on(b) {
                        mass += wq * 0.25;
                    }
                }
                m.add(t[a], t[b], mass * area / 3.0);
            }
        }
    }
    if alpha != 0.0 {
        add_boundary_mass(mesh, profile, alpha, &mut k)?;
    }
    Ok((k, m))
}

/// `scale * int_{boundary} e^h phi_i phi_j ds` added into `target`.
fn add_boundary_mass(
    mesh: &Mesh,
    profile: &WeightProfile,
    scale: f64,
    target: &mut BandedSym,
) -> Result<()> {
    for e in &mesh.boundary_edges {
        let (a, b) = (mesh.nodes[e[0]], mesh.nodes[e[1]]);
        let len = (b[0] - a[0]).hypot(b[1] - a[1]);
        let (mut m00, mut m01, mut m11) = (0.0, 0.0, 0.0);
        for s in GAUSS2 {
            let x = [a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1])];
            let w = profile.density(radius(x));
            if !w.is_finite() {
                return Err(Error::Evaluation(
                    "weight not finite on the boundary".into(),
                ));
            }
            let c = 0.5 * len * w;
            m00 += c * (1.0 - s) * (1.0 - s);
            m01 += c * (1.0 - s) * s;
            m11 += c * s * s;
        }
        target.add(e[0], e[0], scale * m00);
        target.add(e[1], e[0], scale * m01);
        target.add(e[1], e[1], scale * m11);
    }
    Ok(())
}

/// Weighted boundary mass matrix over all nodes.
pub fn assemble_boundary_mass(mesh: &Mesh, profile: &WeightProfile) -> Result<BandedSym> {
    let mut b = BandedSym::zeros(mesh.nodes.len(), mesh.bandwidth());
    add_boundary_mass(mesh, profile, 1.0, &mut b)?;
    Ok(b)
}

/// Quadrature rule used by [`integrate_over_domain_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TriangleRule {
    /// Three edge midpoints, the rule used for assembly (degree 2).
    EdgeMidpoint,
    /// Seven-point rule of degree 5, used to estimate the error of the former.
    SevenPoint,
}

const SEVEN_POINT: [(f64, f64, f64); 7] = [
    (1.0 / 3.0, 1.0 / 3.0, 0.225),
    (
        0.059_715_871_789_769_8,
        0.470_142_064_105_115_1,
        0.132_394_152_788_506_2,
    ),
    (
        0.470_142_064_105_115_1,
        0.059_715_871_789_769_8,
        0.132_394_152_788_506_2,
    ),
    (
        0.470_142_064_105_115_1,
        0.470_142_064_105_115_1,
        0.132_394_152_788_506_2,
    ),
    (
        0.797_426_985_353_087_3,
        0.101_286_507_323_456_3,
        0.125_939_180_544_827_1,
    ),
    (
        0.101_286_507_323_456_3,
        0.797_426_985_353_087_3,
        0.125_939_180_544_827_1,
    ),
    (
        0.101_286_507_323_456_3,
        0.101_286_507_323_456_3,
        0.125_939_180_544_827_1,
    ),
];

/// `int_mesh f(|x|) e^{h(|x|)} dx` with the assembly (edge-midpoint) rule.
pub fn integrate_over_domain<F: Fn(f64) -> f64>(
    mesh: &Mesh,
    profile: &WeightProfile,
    f: F,
) -> Result<f64> {
    integrate_over_domain_with(mesh, profile, f, TriangleRule::EdgeMidpoint)
}

pub fn integrate_over_domain_with<F: Fn(f64) -> f64>(
    mesh: &Mesh,
    profile: &WeightProfile,
    f: F,
    rule: TriangleRule,
) -> Result<f64> {
    let mut total = 0.0;
    for (ti, t) in mesh.triangles.iter().enumerate() {
        let area = mesh.triangle_area(ti);
        let p = [mesh.nodes[t[0]], mesh.nodes[t[1]], mesh.nodes[t[2]]];
        let mut local = 0.0;
        let mut eval = |x: [f64; 2], w: f64| -> Result<()> {
            let r = radius(x);
            let v = f(r) * profile.density(r);
            if !v.is_finite() {
                return Err(Error::Evaluation(format!(
                    "integrand not finite at r = {r}"
                )));
            }
            local += w * v;
            Ok(())
        };
        match rule {
            TriangleRule::EdgeMidpoint => {
                for q in midpoints(mesh, t) {
                    eval(q, 1.0 / 3.0)?;
                }
            }
            TriangleRule::SevenPoint => {
                for (l1, l2, w) in SEVEN_POINT {
                    let l0 = 1.0 - l1 - l2;
                    let x = [
                        l0 * p[0][0] + l1 * p[1][0] + l2 * p[2][0],
                        l0 * p[0][1] + l1 * p[1][1] + l2 * p[2][1],
                    ];
                    eval(x, w)?;
                }
            }
        }
        total += area * local;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fem2d::{triangulate, StarDomain};
    use crate::weights::{ball_gamma_volume, BallSpec};
    use std::f64::consts::PI;

    fn disk_mesh(level: usize) -> Mesh {
        triangulate(&StarDomain::parse("disk:1").unwrap(), level).unwrap()
    }

    #[test]
    fn unit_weight_reduces_to_classical_p1_stiffness() {
        // single reference triangle
        let dom = StarDomain::parse("disk:1").unwrap();
        let mesh = Mesh {
            nodes: vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]],
            triangles: vec![[0, 1, 2]],
            boundary_edges: vec![[0, 1], [1, 2], [2, 0]],
            symmetry_map: vec![0, 1, 2],
            refinement: 1,
            domain: dom,
        };
        let (k, m) = assemble(&mesh, &WeightProfile::zero(), 0.0).unwrap();
        let expected = [[1.0, -0.5, -0.5], [-0.5, 0.5, 0.0], [-0.5, 0.0, 0.5]];
        for (i, row) in expected.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                assert!((k.get(i, j) - e).abs() < 1e-15);
                let mass = if i == j { 1.0 / 12.0 } else { 1.0 / 24.0 };
                assert!((m.get(i, j) - mass).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn neumann_row_sums_vanish_and_matrices_are_symmetric() {
        let mesh = triangulate(&StarDomain::parse("stadium:0.6,0.6").unwrap(), 2).unwrap();
        let (k, m) = assemble(&mesh, &WeightProfile::quadlin(0.5, 0.5), 0.0).unwrap();
        let ones = vec![1.0; mesh.nodes.len()];
        assert!(k.mul_vec(&ones).iter().all(|v| v.abs() <= 1e-12));
        let d = m.to_dense();
        assert_eq!(d.clone(), d.transpose());
    }

    #[test]
    fn total_mass_matches_ball_volume() {
        let q = WeightProfile::quadratic(1.0);
        let exact = ball_gamma_volume(&q, BallSpec::new(2, 1.0).unwrap()).unwrap();
        let mut prev = f64::INFINITY;
        for level in 1..=4 {
            let mesh = disk_mesh(level);
            let (_, m) = assemble(&mesh, &q, 0.0).unwrap();
            let ones = vec![1.0; mesh.nodes.len()];
            let total: f64 = m.mul_vec(&ones).iter().sum();
            let via_quad = integrate_over_domain(&mesh, &q, |_| 1.0).unwrap();
            assert!((total - via_quad).abs() < 1e-12 * total);
            let err = (total - exact).abs();
            assert!(err < prev / 3.0, "level {level}: {err}");
            prev = err;
        }
        assert!(prev < 5e-3);
    }

    #[test]
    fn boundary_mass_totals_perimeter() {
        let mesh = disk_mesh(3);
        let b = assemble_boundary_mass(&mesh, &WeightProfile::zero()).unwrap();
        let ones = vec![1.0; mesh.nodes.len()];
        let total: f64 = b.mul_vec(&ones).iter().sum();
        let n = mesh.boundary_edges.len() as f64;
        assert!((total - 2.0 * n * (PI / n).sin()).abs() < 1e-12);
    }

    #[test]
    fn seven_point_rule_is_exact_for_quartics() {
        let mut mesh = disk_mesh(1);
        mesh.nodes = vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]];
        mesh.triangles = vec![[0, 1, 2]];
        // int_T (x^2 + y^2)^2 over the reference triangle
        let v = integrate_over_domain_with(
            &mesh,
            &WeightProfile::zero(),
            |r| r.powi(4),
            TriangleRule::SevenPoint,
        )
        .unwrap();
        assert!((v - 7.0 / 90.0).abs() < 1e-15);
        let m = integrate_over_domain(&mesh, &WeightProfile::zero(), |r| r * r).unwrap();
        assert!((m - 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn integrand_failure_propagates() {
        let mesh = disk_mesh(1);
        assert!(integrate_over_domain(&mesh, &WeightProfile::zero(), |r| 1.0 / (r - r)).is_err());
    }
}
