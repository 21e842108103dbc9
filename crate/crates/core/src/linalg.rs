//! Symmetric banded matrices and generalized symmetric-definite eigensolvers.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Seed of the start block used by [`subspace_iteration`].
pub const SUBSPACE_SEED: u64 = 0x5eed_2024;
const SUBSPACE_MAX_ITERS: usize = 1000;
/// Relative residual at which a Ritz pair is accepted.
pub const TOL_RES: f64 = 1e-9;

/// Symmetric matrix with half-bandwidth `bw`, lower band stored row by row.
#[derive(Debug, Clone, PartialEq)]
pub struct BandedSym {
    n: usize,
    bw: usize,
    data: Vec<f64>,
}

impl BandedSym {
    pub fn zeros(n: usize, bw: usize) -> Self {
        Self {
            n,
            bw,
            data: vec![0.0; n * (bw + 1)],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn bandwidth(&self) -> usize {
        self.bw
    }

    fn idx(&self, i: usize, j: usize) -> usize {
        debug_assert!(j <= i && i - j <= self.bw);
        i * (self.bw + 1) + (j + self.bw - i)
    }

    /// `A[i][j] += v` (and its mirror); `|i - j|` must not exceed the bandwidth.
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let (i, j) = if j > i { (j, i) } else { (i, j) };
        assert!(
            i - j <= self.bw,
            "entry ({i}, {j}) outside bandwidth {}",
            self.bw
        );
        let k = self.idx(i, j);
        self.data[k] += v;
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (i, j) = if j > i { (j, i) } else { (i, j) };
        if i - j > self.bw {
            0.0
        } else {
            self.data[self.idx(i, j)]
        }
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.data[self.idx(i, i)]).collect()
    }

    /// `y = A x`.
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        for i in 0..self.n {
            let lo = i.saturating_sub(self.bw);
            let row = &self.data[i * (self.bw + 1)..(i + 1) * (self.bw + 1)];
            let mut acc = 0.0;
            for j in lo..i {
                let a = row[j + self.bw - i];
                acc += a * x[j];
                y[j] += a * x[i];
            }
            acc += row[self.bw] * x[i];
            y[i] += acc;
        }
        y
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        let ones = vec![1.0; self.n];
        let abs = Self {
            n: self.n,
            bw: self.bw,
            data: self.data.iter().map(|v| v.abs()).collect(),
        };
        abs.mul_vec(&ones).into_iter().fold(0.0, f64::max)
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut d = DMatrix::zeros(self.n, self.n);
        for i in 0..self.n {
            for j in i.saturating_sub(self.bw)..=i {
                let v = self.get(i, j);
                d[(i, j)] = v;
                d[(j, i)] = v;
            }
        }
        d
    }

    /// Entries with row and column in `rows`, as a banded matrix over the renumbered set.
    /// `rows` must be increasing.
    pub fn submatrix(&self, rows: &[usize]) -> BandedSym {
        let mut bw = 0;
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in rows[..a].iter().enumerate().rev() {
                if i - j > self.bw {
                    break;
                }
                if self.get(i, j) != 0.0 {
                    bw = bw.max(a - b);
                }
            }
        }
        let mut out = BandedSym::zeros(rows.len(), bw);
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in rows[..=a].iter().enumerate().rev() {
                if i - j > self.bw || a - b > bw {
                    break;
                }
                let v = self.get(i, j);
                if v != 0.0 {
                    out.add(a, b, v);
                }
            }
        }
        out
    }

    /// Cholesky factor of `self - sigma * other`; fails if that matrix is not positive definite.
    pub fn cholesky_shifted(
        &self,
        other: Option<&BandedSym>,
        sigma: f64,
    ) -> Result<BandedCholesky> {
        let bw = match other {
            Some(o) => {
                if o.n != self.n {
                    return Err(Error::Assembly(
                        "shifted factorization of mismatched matrices".into(),
                    ));
                }
                self.bw.max(o.bw)
            }
            None => self.bw,
        };
        let mut l = BandedSym::zeros(self.n, bw);
        for i in 0..self.n {
            for j in i.saturating_sub(bw)..=i {
                let mut v = self.get(i, j);
                if let Some(o) = other {
                    v -= sigma * o.get(i, j);
                }
                let k = l.idx(i, j);
                l.data[k] = v;
            }
        }
        let w = bw + 1;
        for j in 0..self.n {
            let row_j = j * w;
            let lo = j.saturating_sub(bw);
            let mut d = l.data[row_j + bw];
            for k in lo..j {
                let v = l.data[row_j + k + bw - j];
                d -= v * v;
            }
            if !(d > 0.0) || !d.is_finite() {
                return Err(Error::Assembly(format!(
                    "matrix not positive definite at row {j}"
                )));
            }
            let d = d.sqrt();
            l.data[row_j + bw] = d;
            for i in j + 1..(j + bw + 1).min(self.n) {
                let row_i = i * w;
                let lo_i = i.saturating_sub(bw).max(lo);
                let mut v = l.data[row_i + j + bw - i];
                for k in lo_i..j {
                    v -= l.data[row_i + k + bw - i] * l.data[row_j + k + bw - j];
                }
                l.data[row_i + j + bw - i] = v / d;
            }
        }
        Ok(BandedCholesky { l })
    }
}

/// Lower-triangular banded Cholesky factor `L` with `A = L L^T`.
#[derive(Debug, Clone)]
pub struct BandedCholesky {
    l: BandedSym,
}

impl BandedCholesky {
    /// Solves `A x = b` in place.
    pub fn solve_in_place(&self, b: &mut [f64]) {
        let n = self.l.n;
        let bw = self.l.bw;
        let w = bw + 1;
        let data = &self.l.data;
        for i in 0..n {
            let row = i * w;
            let mut v = b[i];
            for k in i.saturating_sub(bw)..i {
                v -= data[row + k + bw - i] * b[k];
            }
            b[i] = v / data[row + bw];
        }
        for i in (0..n).rev() {
            let v = b[i] / data[i * w + bw];
            b[i] = v;
            for k in i.saturating_sub(bw)..i {
                b[k] -= data[i * w + k + bw - i] * v;
            }
        }
    }
}

/// Sorted eigenvalues and `M`-orthonormal eigenvectors (columns) of a generalized problem.
#[derive(Debug, Clone)]
pub struct GeneralizedEigen {
    pub values: Vec<f64>,
    pub vectors: DMatrix<f64>,
}

/// All eigenpairs of `K x = lambda M x` for dense symmetric `K` and positive definite `M`.
pub fn dense_generalized_eigen(k: &DMatrix<f64>, m: &DMatrix<f64>) -> Result<GeneralizedEigen> {
    let n = k.nrows();
    let chol = m
        .clone()
        .cholesky()
        .ok_or_else(|| Error::Assembly("mass matrix is not positive definite".into()))?;
    let l = chol.l();
    // C = L^{-1} K L^{-T}
    let linv_k = l
        .solve_lower_triangular(k)
        .ok_or_else(|| Error::Assembly("singular Cholesky factor".into()))?;
    let c = l
        .solve_lower_triangular(&linv_k.transpose())
        .ok_or_else(|| Error::Assembly("singular Cholesky factor".into()))?;
    let c = (&c + c.transpose()) * 0.5;
    let eig = SymmetricEigen::new(c);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut y = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        y.set_column(dst, &eig.eigenvectors.column(src));
    }
    let vectors = l
        .transpose()
        .solve_upper_triangular(&y)
        .ok_or_else(|| Error::Assembly("singular Cholesky factor".into()))?;
    let mut out = GeneralizedEigen { values, vectors };
    normalize_signs(&mut out.vectors);
    Ok(out)
}

/// Makes the entry of largest magnitude in every column positive.
pub fn normalize_signs(v: &mut DMatrix<f64>) {
    for mut col in v.column_iter_mut() {
        let mut best = 0.0f64;
        for x in col.iter() {
            if x.abs() > best.abs() * (1.0 + 1e-12) {
                best = *x;
            }
        }
        if best < 0.0 {
            col.neg_mut();
        }
    }
}

/// The `count` smallest eigenpairs of `K x = lambda M x` by block inverse iteration with a
/// shift below the spectrum and Rayleigh-Ritz projection.
///
/// The start block is pseudo-random with a fixed seed, so results are reproducible.
pub fn subspace_iteration(k: &BandedSym, m: &BandedSym, count: usize) -> Result<GeneralizedEigen> {
    let n = k.dim();
    if count == 0 || count > n {
        return Err(Error::Parameter(format!(
            "cannot compute {count} eigenpairs of a size-{n} problem"
        )));
    }
    let block = (2 * count).max(count + 8).min(n);

    let mut sigma = -1.0;
    let factor = loop {
        match k.cholesky_shifted(Some(m), sigma) {
            Ok(f) => break f,
            Err(_) if sigma > -1e12 => sigma = 4.0 * sigma - 1.0,
            Err(e) => return Err(e),
        }
    };

    let mut rng = ChaCha8Rng::seed_from_u64(SUBSPACE_SEED);
    let mut x = DMatrix::from_fn(n, block, |_, _| rng.gen::<f64>() - 0.5);
    let k_norm = k.norm_inf();
    let m_norm = m.norm_inf();
    let mut values = vec![0.0; block];
    for _ in 0..SUBSPACE_MAX_ITERS {
        let mut y = DMatrix::zeros(n, block);
        for j in 0..block {
            let mut col = m.mul_vec(x.column(j).as_slice());
            factor.solve_in_place(&mut col);
            y.set_column(j, &DVector::from_vec(col));
        }
        let ky = apply_columns(k, &y);
        let my = apply_columns(m, &y);
        let kr = y.transpose() * &ky;
        let mr = y.transpose() * &my;
        let kr = (&kr + kr.transpose()) * 0.5;
        let mr = (&mr + mr.transpose()) * 0.5;
        let ritz = dense_generalized_eigen(&kr, &mr)?;
        x = &y * &ritz.vectors;
        let kx = &ky * &ritz.vectors;
        let mx = &my * &ritz.vectors;
        values = ritz.values;
        let converged = (0..count).all(|i| {
            let r = kx.column(i) - mx.column(i) * values[i];
            r.norm() <= TOL_RES * (k_norm + values[i].abs() * m_norm) * x.column(i).norm()
        });
        if converged {
            let mut vectors = x.columns(0, count).into_owned();
            normalize_signs(&mut vectors);
            return Ok(GeneralizedEigen {
                values: values[..count].to_vec(),
                vectors,
            });
        }
    }
    Err(Error::convergence(
        "subspace iteration",
        values.first().copied().unwrap_or(f64::NAN),
        values.get(count - 1).copied().unwrap_or(f64::NAN),
    ))
}

fn apply_columns(a: &BandedSym, x: &DMatrix<f64>) -> DMatrix<f64> {
    let mut out = DMatrix::zeros(x.nrows(), x.ncols());
    for j in 0..x.ncols() {
        out.set_column(j, &DVector::from_vec(a.mul_vec(x.column(j).as_slice())));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn laplacian_1d(n: usize) -> (BandedSym, BandedSym) {
        // P1 Dirichlet Laplacian on (0, 1) with consistent mass
        let h = 1.0 / (n + 1) as f64;
        let mut k = BandedSym::zeros(n, 1);
        let mut m = BandedSym::zeros(n, 1);
        for i in 0..n {
            k.add(i, i, 2.0 / h);
            m.add(i, i, 4.0 * h / 6.0);
            if i > 0 {
                k.add(i, i - 1, -1.0 / h);
                m.add(i, i - 1, h / 6.0);
            }
        }
        (k, m)
    }

    fn exact_1d(n: usize, j: usize) -> f64 {
        let h = 1.0 / (n + 1) as f64;
        let t = (j as f64 * std::f64::consts::PI * h / 2.0).sin().powi(2);
        6.0 / (h * h) * t * 2.0 / (3.0 - 2.0 * t)
    }

    #[test]
    fn banded_matvec_and_dense_agree() {
        let mut a = BandedSym::zeros(5, 2);
        for i in 0..5 {
            a.add(i, i, 4.0 + i as f64);
            if i >= 2 {
                a.add(i, i - 2, -1.0);
            }
            if i >= 1 {
                a.add(i - 1, i, 0.5);
            }
        }
        let x = [1.0, -2.0, 0.5, 3.0, -1.0];
        let y = a.mul_vec(&x);
        let yd = a.to_dense() * DVector::from_row_slice(&x);
        for i in 0..5 {
            assert!((y[i] - yd[i]).abs() < 1e-14);
        }
    }

    #[test]
    fn banded_cholesky_solves() {
        let (k, m) = laplacian_1d(40);
        let f = k.cholesky_shifted(Some(&m), -2.0).unwrap();
        let b: Vec<f64> = (0..40).map(|i| (i as f64).sin()).collect();
        let mut x = b.clone();
        f.solve_in_place(&mut x);
        let kx = k.mul_vec(&x);
        let mx = m.mul_vec(&x);
        for i in 0..40 {
            assert!((kx[i] + 2.0 * mx[i] - b[i]).abs() < 1e-10);
        }
        assert!(k.cholesky_shifted(Some(&m), 1e6).is_err());
    }

    #[test]
    fn dense_generalized_matches_closed_form() {
        let (k, m) = laplacian_1d(30);
        let e = dense_generalized_eigen(&k.to_dense(), &m.to_dense()).unwrap();
        for j in 0..30 {
            assert!((e.values[j] - exact_1d(30, j + 1)).abs() < 1e-9 * e.values[j]);
        }
        let mv = m.to_dense() * &e.vectors;
        let gram = e.vectors.transpose() * mv;
        assert!((gram - DMatrix::identity(30, 30)).abs().max() < 1e-10);
    }

    #[test]
    fn subspace_iteration_matches_dense() {
        let (k, m) = laplacian_1d(200);
        let s = subspace_iteration(&k, &m, 4).unwrap();
        for j in 0..4 {
            assert!((s.values[j] - exact_1d(200, j + 1)).abs() < 1e-9 * s.values[j]);
        }
        assert!(subspace_iteration(&k, &m, 0).is_err());
    }

    #[test]
    fn subspace_iteration_handles_negative_spectrum_and_clusters() {
        // diagonal pencil with a double eigenvalue and negative entries
        let d = [
            -30.0, 2.0, 2.0, 5.0, 7.0, 11.0, 13.0, 17.0, 19.0, 23.0, 29.0, 31.0, 37.0, 41.0,
        ];
        let mut k = BandedSym::zeros(d.len(), 0);
        let mut m = BandedSym::zeros(d.len(), 0);
        for (i, v) in d.iter().enumerate() {
            k.add(i, i, *v);
            m.add(i, i, 1.0);
        }
        let s = subspace_iteration(&k, &m, 3).unwrap();
        assert!((s.values[0] + 30.0).abs() < 1e-9);
        assert!((s.values[1] - 2.0).abs() < 1e-9 && (s.values[2] - 2.0).abs() < 1e-9);
    }

    #[test]
    fn submatrix_renumbers() {
        let (k, _) = laplacian_1d(6);
        let s = k.submatrix(&[0, 1, 3, 4]);
        assert_eq!(s.dim(), 4);
        assert_eq!(s.get(0, 1), k.get(0, 1));
        assert_eq!(s.get(1, 2), 0.0);
        assert_eq!(s.get(2, 3), k.get(3, 4));
    }
}
