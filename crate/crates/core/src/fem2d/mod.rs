//! P1 finite elements for the weighted Robin and Steklov problems on origin-symmetric,
//! star-shaped planar domains.

mod assembly;
mod domain;
mod mesh;

pub use assembly::{
    assemble, assemble_boundary_mass, integrate_over_domain, integrate_over_domain_with,
    TriangleRule,
};
pub use domain::{make_domain, DomainKind, StarDomain};
pub use mesh::{triangulate, Mesh, BASE_RINGS};

use std::io::Write;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg::{
    dense_generalized_eigen, normalize_signs, subspace_iteration, BandedSym, GeneralizedEigen,
};
use crate::weights::WeightProfile;

/// Problems with at most this many unknowns go to the dense solver under [`EigenMethod::Auto`].
pub const DENSE_LIMIT: usize = 700;

/// Eigensolver selection for [`solve_robin_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EigenMethod {
    #[default]
    Auto,
    Dense,
    Subspace,
}

/// Which pencil an [`EigenResult`] belongs to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProblemKind {
    Robin { alpha: f64 },
    Steklov,
}

/// Smallest eigenvalues of a discrete pencil `K v = lambda B v` with nodal eigenvectors.
#[derive(Debug, Clone)]
pub struct EigenResult {
    pub eigenvalues: Vec<f64>,
    /// `B`-orthonormal nodal vectors, one per eigenvalue.
    pub eigenvectors: Vec<Vec<f64>>,
    pub kind: ProblemKind,
    pub profile: WeightProfile,
    pub mesh_id: String,
}

impl EigenResult {
    fn from_generalized(
        g: GeneralizedEigen,
        count: usize,
        kind: ProblemKind,
        profile: &WeightProfile,
        mesh: &Mesh,
    ) -> Self {
        let count = count.min(g.values.len());
        Self {
            eigenvalues: g.values[..count].to_vec(),
            eigenvectors: (0..count)
                .map(|j| g.vectors.column(j).iter().copied().collect())
                .collect(),
            kind,
            profile: *profile,
            mesh_id: mesh.id(),
        }
    }

    /// `index,eigenvalue` rows.
    pub fn write_csv<W: Write>(&self, out: &mut W) -> Result<()> {
        writeln!(out, "index,eigenvalue")?;
        for (i, v) in self.eigenvalues.iter().enumerate() {
            writeln!(out, "{},{:.16e}", i + 1, v)?;
        }
        Ok(())
    }
}

/// `||K v - lambda B v|| / ||v||` for each pair.
pub fn residuals(k: &BandedSym, b: &BandedSym, result: &EigenResult) -> Vec<f64> {
    result
        .eigenvalues
        .iter()
        .zip(&result.eigenvectors)
        .map(|(l, v)| {
            let kv = k.mul_vec(v);
            let bv = b.mul_vec(v);
            let r: f64 = kv
                .iter()
                .zip(&bv)
                .map(|(x, y)| (x - l * y).powi(2))
                .sum::<f64>()
                .sqrt();
            r / v.iter().map(|x| x * x).sum::<f64>().sqrt()
        })
        .collect()
}

/// The `count` smallest Robin eigenvalues of the weighted Laplacian on the mesh.
pub fn solve_robin(
    mesh: &Mesh,
    profile: &WeightProfile,
    alpha: f64,
    count: usize,
) -> Result<EigenResult> {
    solve_robin_with(mesh, profile, alpha, count, EigenMethod::Auto)
}

pub fn solve_robin_with(
    mesh: &Mesh,
    profile: &WeightProfile,
    alpha: f64,
    count: usize,
    method: EigenMethod,
) -> Result<EigenResult> {
    if count < 2 {
        return Err(Error::Parameter(format!(
            "Robin solve needs count >= 2, got {count}"
        )));
    }
    let (k, m) = assemble(mesh, profile, alpha)?;
    let n = k.dim();
    let dense = match method {
        EigenMethod::Auto => n <= DENSE_LIMIT,
        EigenMethod::Dense => true,
        EigenMethod::Subspace => false,
    };
    let g = if dense {
        dense_generalized_eigen(&k.to_dense(), &m.to_dense())?
    } else {
        subspace_iteration(&k, &m, count)?
    };
    Ok(EigenResult::from_generalized(
        g,
        count,
        ProblemKind::Robin { alpha },
        profile,
        mesh,
    ))
}

/// The `count` smallest weighted Steklov eigenvalues (the first is 0, constants).
///
/// Interior unknowns are eliminated by static condensation; the resulting Schur complement on the
/// boundary nodes is paired with the weighted boundary mass, which is positive definite there.
pub fn solve_steklov(mesh: &Mesh, profile: &WeightProfile, count: usize) -> Result<EigenResult> {
    if count < 2 {
        return Err(Error::Parameter(format!(
            "Steklov solve needs count >= 2, got {count}"
        )));
    }
    let (k, _) = assemble(mesh, profile, 0.0)?;
    let n = k.dim();
    let mut is_boundary = vec![false; n];
    for e in &mesh.boundary_edges {
        is_boundary[e[0]] = true;
        is_boundary[e[1]] = true;
    }
    let interior: Vec<usize> = (0..n).filter(|&i| !is_boundary[i]).collect();
    let boundary: Vec<usize> = (0..n).filter(|&i| is_boundary[i]).collect();
    let n_b = boundary.len();
    if count > n_b {
        return Err(Error::Parameter(format!(
            "mesh has only {n_b} boundary nodes"
        )));
    }

    let k_ii = k.submatrix(&interior);
    let factor = k_ii.cholesky_shifted(None, 0.0)?;
    // X = K_ii^{-1} K_ib, column per boundary node
    let mut x = DMatrix::zeros(interior.len(), n_b);
    let bw = k.bandwidth();
    for (c, &b) in boundary.iter().enumerate() {
        let mut col: Vec<f64> = interior
            .iter()
            .map(|&i| {
                if i.abs_diff(b) <= bw {
                    k.get(i, b)
                } else {
                    0.0
                }
            })
            .collect();
        factor.solve_in_place(&mut col);
        x.set_column(c, &DVector::from_vec(col));
    }
    let mut s = DMatrix::zeros(n_b, n_b);
    for (a, &i) in boundary.iter().enumerate() {
        for (c, &j) in boundary.iter().enumerate() {
            s[(a, c)] = k.get(i, j);
        }
    }
    for (r, &i) in interior.iter().enumerate() {
        for (a, &b) in boundary.iter().enumerate() {
            if i.abs_diff(b) > bw {
                continue;
            }
            let kib = k.get(i, b);
            if kib == 0.0 {
                continue;
            }
            for c in 0..n_b {
                s[(a, c)] -= kib * x[(r, c)];
            }
        }
    }
    let s = (&s + s.transpose()) * 0.5;
    let bm_full = assemble_boundary_mass(mesh, profile)?;
    let mut bm = DMatrix::zeros(n_b, n_b);
    for (a, &i) in boundary.iter().enumerate() {
        for (c, &j) in boundary.iter().enumerate() {
            bm[(a, c)] = bm_full.get(i, j);
        }
    }
    let g = dense_generalized_eigen(&s, &bm)?;

    // lift boundary vectors to the interior: u_i = -X u_b
    let mut vectors = DMatrix::zeros(n, n_b);
    let lifted = -(&x * &g.vectors);
    for (a, &i) in boundary.iter().enumerate() {
        vectors.set_row(i, &g.vectors.row(a));
    }
    for (r, &i) in interior.iter().enumerate() {
        vectors.set_row(i, &lifted.row(r));
    }
    normalize_signs(&mut vectors);
    let full = GeneralizedEigen {
        values: g.values,
        vectors,
    };
    Ok(EigenResult::from_generalized(
        full,
        count,
        ProblemKind::Steklov,
        profile,
        mesh,
    ))
}
