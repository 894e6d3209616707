//! Small dense linear algebra: Jacobi SVD, symmetric eigendecomposition,
//! Moore–Penrose pseudoinverse and minimum-norm least squares.
//!
//! Matrices here are tiny (a few hundred rows, rarely more than sixty
//! columns), so everything is written for accuracy and determinism rather
//! than blocking or cache tricks.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::float::{hypot, sqrt};

/// Singular values below this fraction of the largest one are exact zeros.
pub const RANK_EPS: f64 = 1e-12;

const MAX_SWEEPS: usize = 80;
const JACOBI_TOL: f64 = 1e-15;
const SYMMETRY_TOL: f64 = 1e-9;

/// Dense row-major matrix of `f64`.
#[derive(Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        write!(f, "]")
    }
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                actual: data.len(),
            });
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_diag(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Builds a matrix from equally sized rows.
    pub fn from_rows(rows: &[&[f64]]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    actual: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        Ok(Matrix {
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns<V: AsRef<[f64]>>(rows: usize, columns: &[V]) -> Result<Self> {
        let cols = columns.len();
        let mut m = Self::zeros(rows, cols);
        for (j, col) in columns.iter().enumerate() {
            let col = col.as_ref();
            if col.len() != rows {
                return Err(Error::DimensionMismatch {
                    expected: rows,
                    actual: col.len(),
                });
            }
            for (i, &v) in col.iter().enumerate() {
                m.data[i * cols + j] = v;
            }
        }
        Ok(m)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<f64> {
        (0..self.rows).map(|r| self.data[r * self.cols + c]).collect()
    }

    pub fn set_column(&mut self, c: usize, values: &[f64]) {
        debug_assert_eq!(values.len(), self.rows);
        for (r, &v) in values.iter().enumerate() {
            self.data[r * self.cols + c] = v;
        }
    }

    /// Columns as separate vectors.
    pub fn columns(&self) -> Vec<Vec<f64>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    /// First `k` columns.
    pub fn leading_columns(&self, k: usize) -> Matrix {
        let k = k.min(self.cols);
        Matrix::from_fn(self.rows, k, |r, c| self[(r, c)])
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |r, c| self[(c, r)])
    }

    pub fn matmul(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                actual: rhs.rows,
            });
        }
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == 0.0 {
                    continue;
                }
                let rhs_row = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                for (o, &b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    /// `self · x`
    pub fn mul_vec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                actual: x.len(),
            });
        }
        Ok((0..self.rows).map(|r| dot(self.row(r), x)).collect())
    }

    /// `selfᵀ · x`
    pub fn tr_mul_vec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                actual: x.len(),
            });
        }
        let mut out = vec![0.0; self.cols];
        for (r, &xr) in x.iter().enumerate() {
            if xr == 0.0 {
                continue;
            }
            for (o, &a) in out.iter_mut().zip(self.row(r)) {
                *o += a * xr;
            }
        }
        Ok(out)
    }

    /// `selfᵀ · self`
    pub fn gram(&self) -> Matrix {
        let n = self.cols;
        let mut g = Matrix::zeros(n, n);
        for r in 0..self.rows {
            let row = self.row(r);
            for i in 0..n {
                let ri = row[i];
                if ri == 0.0 {
                    continue;
                }
                for (j, &rj) in row.iter().enumerate().skip(i) {
                    g.data[i * n + j] += ri * rj;
                }
            }
        }
        for i in 0..n {
            for j in 0..i {
                g.data[i * n + j] = g.data[j * n + i];
            }
        }
        g
    }

    pub fn sub(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows * self.cols,
                actual: rhs.rows * rhs.cols,
            });
        }
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect();
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn scale(&self, s: f64) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        norm(&self.data)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;

    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &f64 {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut f64 {
        &mut self.data[r * self.cols + c]
    }
}

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub fn norm(a: &[f64]) -> f64 {
    // Scaled accumulation would be safer against overflow, but descriptor
    // entries are bounded by a few thousand.
    sqrt(dot(a, a))
}

/// Thin singular value decomposition `w = u · diag(sigma) · qᵀ`.
#[derive(Debug, Clone)]
pub struct SvdResult {
    /// Left singular vectors, `rows × k` with orthonormal columns.
    pub u: Matrix,
    /// Non-increasing singular values, length `k = min(rows, cols)`.
    pub sigma: Vec<f64>,
    /// Right singular vectors, `cols × k` with orthonormal columns.
    pub q: Matrix,
}

impl SvdResult {
    /// Numerical rank: count of non-zero singular values.
    pub fn rank(&self) -> usize {
        self.sigma.iter().take_while(|&&s| s > 0.0).count()
    }
}

/// Thin SVD by one-sided (Hestenes) Jacobi rotations on the smaller side.
///
/// Each left singular vector is signed so that its largest-magnitude entry is
/// positive. Singular values below `RANK_EPS · σ_max` are returned as exact
/// zeros and their left vectors are completed to an orthonormal set.
pub fn svd(w: &Matrix) -> Result<SvdResult> {
    if w.rows == 0 || w.cols == 0 {
        return Err(Error::invalid("svd of an empty matrix"));
    }
    if !w.is_finite() {
        return Err(Error::invalid("svd input has non-finite entries"));
    }
    let (mut u, sigma, mut q) = if w.rows >= w.cols {
        hestenes(w)?
    } else {
        // w = (wᵀ)ᵀ = (U Σ Qᵀ)ᵀ = Q Σ Uᵀ
        let (ut, s, qt) = hestenes(&w.transpose())?;
        (qt, s, ut)
    };
    for j in 0..sigma.len() {
        let col = u.column(j);
        if largest_entry_sign(&col) < 0.0 {
            for r in 0..u.rows {
                u[(r, j)] = -u[(r, j)];
            }
            for r in 0..q.rows {
                q[(r, j)] = -q[(r, j)];
            }
        }
    }
    Ok(SvdResult { u, sigma, q })
}

fn largest_entry_sign(v: &[f64]) -> f64 {
    let mut best = 0.0f64;
    for &x in v {
        if x.abs() > best.abs() {
            best = x;
        }
    }
    if best < 0.0 {
        -1.0
    } else {
        1.0
    }
}

/// One-sided Jacobi for `rows >= cols`. Returns `(u, sigma, q)` unsigned.
fn hestenes(w: &Matrix) -> Result<(Matrix, Vec<f64>, Matrix)> {
    let m = w.rows;
    let n = w.cols;
    // Column-major working copies.
    let mut a: Vec<Vec<f64>> = w.columns();
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|j| {
            let mut e = vec![0.0; n];
            e[j] = 1.0;
            e
        })
        .collect();

    // Columns this small are numerically zero; rotating them against the
    // rest only shuffles rounding noise and can stall convergence.
    let negligible = 1e-28 * a.iter().map(|c| dot(c, c)).sum::<f64>();
    let mut converged = n == 1;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for r in (p + 1)..n {
                let alpha = dot(&a[p], &a[p]);
                let beta = dot(&a[r], &a[r]);
                let gamma = dot(&a[p], &a[r]);
                if gamma == 0.0
                    || alpha <= negligible
                    || beta <= negligible
                    || gamma.abs() <= JACOBI_TOL * sqrt(alpha * beta)
                {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = if zeta >= 0.0 {
                    1.0 / (zeta + hypot(1.0, zeta))
                } else {
                    -1.0 / (-zeta + hypot(1.0, zeta))
                };
                let c = 1.0 / hypot(1.0, t);
                let s = c * t;
                let (lo, hi) = a.split_at_mut(r);
                rotate(&mut lo[p], &mut hi[0], c, s);
                let (lo, hi) = v.split_at_mut(r);
                rotate(&mut lo[p], &mut hi[0], c, s);
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NumericalFailure("Jacobi SVD did not converge".into()));
    }

    let mut order: Vec<(f64, usize)> = a.iter().enumerate().map(|(j, col)| (norm(col), j)).collect();
    // Stable sort keeps ties in column order, which keeps results deterministic.
    order.sort_by(|x, y| y.0.partial_cmp(&x.0).unwrap_or(core::cmp::Ordering::Equal));
    let smax = order[0].0;
    let cutoff = RANK_EPS * smax;

    let mut sigma = Vec::with_capacity(n);
    let mut ucols: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut qcols: Vec<Vec<f64>> = Vec::with_capacity(n);
    for &(s, j) in &order {
        if s > cutoff && s > 0.0 {
            sigma.push(s);
            ucols.push(a[j].iter().map(|x| x / s).collect());
        } else {
            sigma.push(0.0);
        }
        qcols.push(v[j].clone());
    }
    complete_orthonormal(&mut ucols, m, n);
    debug_assert_eq!(ucols.len(), n);
    Ok((
        Matrix::from_columns(m, &ucols)?,
        sigma,
        Matrix::from_columns(n, &qcols)?,
    ))
}

#[inline]
fn rotate(x: &mut [f64], y: &mut [f64], c: f64, s: f64) {
    for (xi, yi) in x.iter_mut().zip(y.iter_mut()) {
        let a = *xi;
        let b = *yi;
        *xi = c * a - s * b;
        *yi = s * a + c * b;
    }
}

/// Extends `cols` (orthonormal vectors of length `dim`) to `target` vectors
/// using standard basis candidates and two passes of Gram–Schmidt.
pub(crate) fn complete_orthonormal(cols: &mut Vec<Vec<f64>>, dim: usize, target: usize) {
    let mut k = 0;
    while cols.len() < target && k < dim {
        let mut cand = vec![0.0; dim];
        cand[k] = 1.0;
        k += 1;
        for _ in 0..2 {
            for c in cols.iter() {
                let p = dot(c, &cand);
                for (x, ci) in cand.iter_mut().zip(c) {
                    *x -= p * ci;
                }
            }
        }
        let nrm = norm(&cand);
        if nrm > 1e-6 {
            cand.iter_mut().for_each(|x| *x /= nrm);
            cols.push(cand);
        }
    }
}

/// Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
///
/// Eigenvalues are returned non-increasing; eigenvectors are the columns of
/// the returned matrix, each signed so its largest-magnitude entry is positive.
pub fn eig_sym(s: &Matrix) -> Result<(Vec<f64>, Matrix)> {
    let n = s.rows;
    if n == 0 || s.cols != n {
        return Err(Error::invalid("eig_sym needs a non-empty square matrix"));
    }
    if !s.is_finite() {
        return Err(Error::invalid("eig_sym input has non-finite entries"));
    }
    let scale = s.max_abs().max(1.0);
    for i in 0..n {
        for j in 0..i {
            if (s[(i, j)] - s[(j, i)]).abs() > SYMMETRY_TOL * scale {
                return Err(Error::invalid("eig_sym input is not symmetric"));
            }
        }
    }
    let mut a = Matrix::from_fn(n, n, |i, j| 0.5 * (s[(i, j)] + s[(j, i)]));
    let mut v = Matrix::identity(n);

    let mut converged = n == 1;
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)] * a[(i, j)])
            .sum();
        let diag: f64 = (0..n).map(|i| a[(i, i)] * a[(i, i)]).sum();
        if off <= JACOBI_TOL * JACOBI_TOL * diag || off == 0.0 {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let app = a[(p, p)];
                let aqq = a[(q, q)];
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + hypot(1.0, theta))
                } else {
                    -1.0 / (-theta + hypot(1.0, theta))
                };
                let c = 1.0 / hypot(1.0, t);
                let sn = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - sn * akq;
                    a[(k, q)] = sn * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - sn * aqk;
                    a[(q, k)] = sn * apk + c * aqk;
                }
                a[(p, q)] = 0.0;
                a[(q, p)] = 0.0;
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - sn * vkq;
                    v[(k, q)] = sn * vkp + c * vkq;
                }
            }
        }
    }
    if !converged {
        return Err(Error::NumericalFailure("Jacobi eigensolver did not converge".into()));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| {
        a[(y, y)]
            .partial_cmp(&a[(x, x)])
            .unwrap_or(core::cmp::Ordering::Equal)
    });
    let values: Vec<f64> = order.iter().map(|&i| a[(i, i)]).collect();
    let mut vectors = Matrix::zeros(n, n);
    for (j, &src) in order.iter().enumerate() {
        let mut col = v.column(src);
        if largest_entry_sign(&col) < 0.0 {
            col.iter_mut().for_each(|x| *x = -*x);
        }
        vectors.set_column(j, &col);
    }
    Ok((values, vectors))
}

/// Moore–Penrose pseudoinverse. Reciprocals of singular values `<= tol` are
/// zeroed; `None` selects `1e-10 · σ_max`.
pub fn pinv(a: &Matrix, tol: Option<f64>) -> Result<Matrix> {
    if let Some(t) = tol {
        if !(t >= 0.0) {
            return Err(Error::invalid("pinv tolerance must be non-negative"));
        }
    }
    let svd = svd(a)?;
    let smax = svd.sigma.first().copied().unwrap_or(0.0);
    let tol = tol.unwrap_or(1e-10 * smax);
    let mut out = Matrix::zeros(a.cols, a.rows);
    for (j, &s) in svd.sigma.iter().enumerate() {
        if s <= tol || s == 0.0 {
            continue;
        }
        let inv = 1.0 / s;
        for r in 0..a.cols {
            let qr = svd.q[(r, j)] * inv;
            if qr == 0.0 {
                continue;
            }
            for c in 0..a.rows {
                out[(r, c)] += qr * svd.u[(c, j)];
            }
        }
    }
    Ok(out)
}

/// Minimum-norm least-squares solution of `coeffs · X = rhs`.
pub fn lstsq(coeffs: &Matrix, rhs: &Matrix) -> Result<Matrix> {
    if coeffs.rows != rhs.rows {
        return Err(Error::DimensionMismatch {
            expected: coeffs.rows,
            actual: rhs.rows,
        });
    }
    pinv(coeffs, None)?.matmul(rhs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lcg(seed: &mut u64) -> f64 {
        *seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((*seed >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
    }

    fn random(rows: usize, cols: usize, seed: &mut u64) -> Matrix {
        Matrix::from_fn(rows, cols, |_, _| lcg(seed))
    }

    fn reconstruct(s: &SvdResult) -> Matrix {
        let us = Matrix::from_fn(s.u.rows(), s.sigma.len(), |r, c| s.u[(r, c)] * s.sigma[c]);
        us.matmul(&s.q.transpose()).unwrap()
    }

    fn orthonormality_error(m: &Matrix) -> f64 {
        m.gram().sub(&Matrix::identity(m.cols())).unwrap().max_abs()
    }

    #[test]
    fn svd_identity() {
        let s = svd(&Matrix::identity(2)).unwrap();
        assert_eq!(s.sigma, vec![1.0, 1.0]);
        assert_eq!(s.u, Matrix::identity(2));
        assert_eq!(s.q, Matrix::identity(2));
    }

    #[test]
    fn svd_diagonal() {
        let s = svd(&Matrix::from_diag(&[3.0, 2.0])).unwrap();
        assert_eq!(s.sigma, vec![3.0, 2.0]);
        let s = svd(&Matrix::from_diag(&[2.0, 3.0])).unwrap();
        assert_eq!(s.sigma, vec![3.0, 2.0]);
        assert!((s.u[(1, 0)].abs() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn svd_random_tall_and_wide() {
        let mut seed = 7;
        for &(r, c) in &[(6, 4), (4, 6), (1, 5), (5, 1), (40, 10)] {
            let w = random(r, c, &mut seed);
            let s = svd(&w).unwrap();
            let err = reconstruct(&s).sub(&w).unwrap().frobenius_norm() / w.frobenius_norm();
            assert!(err < 1e-10, "{r}x{c}: {err}");
            assert!(orthonormality_error(&s.u) < 1e-10);
            assert!(orthonormality_error(&s.q) < 1e-10);
            assert!(s.sigma.windows(2).all(|p| p[0] >= p[1]));
        }
    }

    #[test]
    fn svd_rank_deficient_completes_basis() {
        let w = Matrix::from_columns(4, &vec![vec![1.0, 2.0, 0.0, 1.0]; 3]).unwrap();
        let s = svd(&w).unwrap();
        assert_eq!(s.rank(), 1);
        assert_eq!(s.sigma[1], 0.0);
        assert!(orthonormality_error(&s.u) < 1e-12);
        let z = svd(&Matrix::zeros(3, 2)).unwrap();
        assert_eq!(z.sigma, vec![0.0, 0.0]);
        assert!(orthonormality_error(&z.u) < 1e-12);
    }

    #[test]
    fn svd_rejects_non_finite() {
        let m = Matrix::new(1, 2, vec![1.0, f64::NAN]).unwrap();
        assert!(matches!(svd(&m), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn svd_sign_convention() {
        let w = Matrix::from_rows(&[&[-3.0, 0.0], &[0.0, -2.0]]).unwrap();
        let s = svd(&w).unwrap();
        for j in 0..2 {
            assert!(largest_entry_sign(&s.u.column(j)) > 0.0);
        }
        assert!(reconstruct(&s).sub(&w).unwrap().max_abs() < 1e-15);
    }

    #[test]
    fn eig_sym_cases() {
        let (vals, vecs) = eig_sym(&Matrix::from_diag(&[5.0, 1.0])).unwrap();
        assert_eq!(vals, vec![5.0, 1.0]);
        assert_eq!(vecs, Matrix::identity(2));
        let (vals, _) = eig_sym(&Matrix::from_diag(&[1.0, 5.0])).unwrap();
        assert_eq!(vals, vec![5.0, 1.0]);
        let (vals, vecs) = eig_sym(&Matrix::new(1, 1, vec![7.0]).unwrap()).unwrap();
        assert_eq!(vals, vec![7.0]);
        assert_eq!(vecs[(0, 0)], 1.0);
    }

    #[test]
    fn eig_sym_residual() {
        let mut seed = 3;
        let b = random(4, 4, &mut seed);
        let s = Matrix::from_fn(4, 4, |i, j| b[(i, j)] + b[(j, i)]);
        let (vals, vecs) = eig_sym(&s).unwrap();
        for (j, &lj) in vals.iter().enumerate() {
            let v = vecs.column(j);
            let sv = s.mul_vec(&v).unwrap();
            for k in 0..4 {
                assert!((sv[k] - lj * v[k]).abs() < 1e-9);
            }
        }
        assert!(orthonormality_error(&vecs) < 1e-12);
    }

    #[test]
    fn eig_sym_rejects_asymmetric() {
        let m = Matrix::from_rows(&[&[1.0, 2.0], &[0.0, 1.0]]).unwrap();
        assert!(matches!(eig_sym(&m), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn pinv_cases() {
        let p = pinv(&Matrix::from_diag(&[2.0, 0.0]), None).unwrap();
        assert_eq!(p, Matrix::from_diag(&[0.5, 0.0]));
        let a = Matrix::from_rows(&[&[4.0, 7.0], &[2.0, 6.0]]).unwrap();
        let inv = Matrix::from_rows(&[&[0.6, -0.7], &[-0.2, 0.4]]).unwrap();
        assert!(pinv(&a, None).unwrap().sub(&inv).unwrap().max_abs() < 1e-10);
        assert!(pinv(&a, Some(-1.0)).is_err());
    }

    #[test]
    fn pinv_zero_matrix() {
        let p = pinv(&Matrix::zeros(2, 3), None).unwrap();
        assert_eq!(p, Matrix::zeros(3, 2));
    }

    #[test]
    fn lstsq_identity_and_mismatch() {
        let rhs = Matrix::from_rows(&[&[1.0, 2.0], &[3.0, 4.0]]).unwrap();
        let x = lstsq(&Matrix::identity(2), &rhs).unwrap();
        assert!(x.sub(&rhs).unwrap().max_abs() < 1e-15);
        assert!(lstsq(&Matrix::identity(3), &rhs).is_err());
    }

    #[test]
    fn lstsq_overdetermined_consistent() {
        let mut seed = 11;
        let coeffs = random(9, 3, &mut seed);
        let truth = random(3, 2, &mut seed);
        let rhs = coeffs.matmul(&truth).unwrap();
        let x = lstsq(&coeffs, &rhs).unwrap();
        assert!(x.sub(&truth).unwrap().max_abs() < 1e-10);
    }
}
