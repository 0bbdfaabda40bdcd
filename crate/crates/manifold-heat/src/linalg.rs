//! Dense linear algebra: a row-major matrix type, a cyclic Jacobi
//! eigensolver for symmetric matrices, and a one-sided Jacobi SVD for the
//! small square systems that show up in Procrustes alignment.
//!
//! Everything here is deterministic: identical inputs produce bitwise
//! identical outputs, which the fixture tests rely on.

use crate::error::{Error, Result};

/// Dense row-major matrix of `f64`.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    /// Build from nested rows; every row must have the same length.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::ShapeMismatch("matrix needs at least one row".into()));
        }
        let cols = rows[0].len();
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::ShapeMismatch("ragged rows".into()));
        }
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            data.extend_from_slice(r);
        }
        Ok(Matrix {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn n_rows(&self) -> usize {
        self.rows
    }

    pub fn n_cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn matmul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn matvec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.cols {
            return Err(Error::ShapeMismatch("matvec length mismatch".into()));
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn scale(&self, c: f64) -> Matrix {
        let mut m = self.clone();
        for v in &mut m.data {
            *v *= c;
        }
        m
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::ShapeMismatch("subtraction shape mismatch".into()));
        }
        let mut m = self.clone();
        for (a, b) in m.data.iter_mut().zip(&other.data) {
            *a -= b;
        }
        Ok(m)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// Infinity norm: maximum absolute row sum.
    pub fn inf_norm(&self) -> f64 {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0_f64, f64::max)
    }

    /// Largest absolute asymmetry `|a_ij - a_ji|`.
    pub fn asymmetry(&self) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..self.rows {
            for j in (i + 1)..self.cols.min(self.rows) {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        worst
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }
}

/// Result of a symmetric eigendecomposition: ascending eigenvalues with the
/// matching eigenvectors stored as columns.
#[derive(Clone, Debug)]
pub struct SymEigen {
    pub values: Vec<f64>,
    pub vectors: Matrix,
}

/// Cyclic Jacobi eigensolver for a symmetric matrix.
///
/// Sweeps rotate away every off-diagonal entry in row order until the
/// off-diagonal Frobenius norm drops below `1e-14` times the Frobenius norm
/// of the input. Eigenvalues come back ascending; each eigenvector is
/// sign-fixed so its entry of largest magnitude (first such index on ties)
/// is positive, making the output deterministic.
pub fn jacobi_eigen(m: &Matrix, max_sweeps: usize) -> Result<SymEigen> {
    if !m.is_square() {
        return Err(Error::Domain(
            "eigendecomposition needs a square matrix".into(),
        ));
    }
    let scale = m.max_abs();
    if scale > 0.0 && m.asymmetry() > 1e-12 * scale {
        return Err(Error::Domain(format!(
            "matrix is not symmetric: asymmetry {:.3e} exceeds 1e-12 relative",
            m.asymmetry() / scale
        )));
    }
    let n = m.n_rows();
    let mut a = m.clone();
    // Symmetrize exactly so rotation updates stay consistent.
    for i in 0..n {
        for j in (i + 1)..n {
            let v = 0.5 * (a.get(i, j) + a.get(j, i));
            a.set(i, j, v);
            a.set(j, i, v);
        }
    }
    let mut v = Matrix::identity(n);
    let target = 1e-14 * m.frobenius_norm();

    let off_norm = |a: &Matrix| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                s += 2.0 * a.get(i, j) * a.get(i, j);
            }
        }
        s.sqrt()
    };

    // The accumulated rotations are kept transposed (eigenvectors as rows)
    // so every update touches contiguous memory.
    let mut vt = v.clone();
    let mut row_p = vec![0.0; n];
    let mut row_q = vec![0.0; n];

    let mut converged = off_norm(&a) <= target;
    let mut sweeps = 0;
    while !converged {
        if sweeps >= max_sweeps {
            return Err(Error::Numeric {
                what: format!("Jacobi sweeps did not converge in {max_sweeps}"),
                residual: off_norm(&a),
            });
        }
        // Entries below this leave the off-diagonal norm under the target
        // even if every one of them is skipped.
        let skip = target / (2.0 * n as f64);
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a.get(p, q);
                if apq.abs() <= skip {
                    continue;
                }
                let app = a.get(p, p);
                let aqq = a.get(q, q);
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta.abs() > 1e150 {
                    1.0 / (2.0 * theta)
                } else {
                    let sign = if theta >= 0.0 { 1.0 } else { -1.0 };
                    sign / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // By symmetry rows p and q also hold columns p and q;
                // rotate them as contiguous slices, then mirror.
                row_p.copy_from_slice(a.row(p));
                row_q.copy_from_slice(a.row(q));
                for k in 0..n {
                    let akp = row_p[k];
                    let akq = row_q[k];
                    row_p[k] = c * akp - s * akq;
                    row_q[k] = s * akp + c * akq;
                }
                row_p[p] = app - t * apq;
                row_q[q] = aqq + t * apq;
                row_p[q] = 0.0;
                row_q[p] = 0.0;
                for k in 0..n {
                    a.set(p, k, row_p[k]);
                    a.set(q, k, row_q[k]);
                    a.set(k, p, row_p[k]);
                    a.set(k, q, row_q[k]);
                }
                // Accumulate the rotation on the transposed basis rows.
                let (vp, vq) = rows_pair_mut(&mut vt, p, q);
                for k in 0..n {
                    let vkp = vp[k];
                    let vkq = vq[k];
                    vp[k] = c * vkp - s * vkq;
                    vq[k] = s * vkp + c * vkq;
                }
            }
        }
        sweeps += 1;
        converged = off_norm(&a) <= target;
    }
    v = vt.transpose();

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        a.get(i, i)
            .partial_cmp(&a.get(j, j))
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(i.cmp(&j))
    });
    let values: Vec<f64> = order.iter().map(|&i| a.get(i, i)).collect();
    let mut vectors = Matrix::zeros(n, n);
    for (out_col, &in_col) in order.iter().enumerate() {
        let mut col: Vec<f64> = (0..n).map(|r| v.get(r, in_col)).collect();
        fix_sign(&mut col);
        for (r, &val) in col.iter().enumerate() {
            vectors.set(r, out_col, val);
        }
    }
    Ok(SymEigen { values, vectors })
}

/// Mutable references to two distinct rows of a matrix.
fn rows_pair_mut(m: &mut Matrix, p: usize, q: usize) -> (&mut [f64], &mut [f64]) {
    debug_assert!(p < q);
    let cols = m.cols;
    let (head, tail) = m.data.split_at_mut(q * cols);
    (&mut head[p * cols..(p + 1) * cols], &mut tail[..cols])
}

/// Flip a vector so its entry of largest magnitude is positive.
pub fn fix_sign(v: &mut [f64]) {
    let mut best = 0usize;
    for (i, x) in v.iter().enumerate() {
        if x.abs() > v[best].abs() {
            best = i;
        }
    }
    if v[best] < 0.0 {
        for x in v.iter_mut() {
            *x = -*x;
        }
    }
}

/// Thin SVD of a square matrix by one-sided Jacobi: `m = u * diag(s) * vt`.
///
/// Intended for the small blocks that arise in orthogonal alignment; zero
/// singular directions are completed to an orthonormal basis so `u` is
/// always orthogonal.
pub fn svd_square(m: &Matrix) -> Result<(Matrix, Vec<f64>, Matrix)> {
    if !m.is_square() {
        return Err(Error::Domain("svd_square needs a square matrix".into()));
    }
    let n = m.n_rows();
    let mut a = m.clone();
    let mut v = Matrix::identity(n);
    let tol = 1e-15;
    for _ in 0..60 {
        let mut rotated = false;
        for i in 0..n {
            for j in (i + 1)..n {
                let mut aii = 0.0;
                let mut ajj = 0.0;
                let mut aij = 0.0;
                for k in 0..n {
                    let x = a.get(k, i);
                    let y = a.get(k, j);
                    aii += x * x;
                    ajj += y * y;
                    aij += x * y;
                }
                if aij.abs() <= tol * (aii * ajj).sqrt() {
                    continue;
                }
                rotated = true;
                let tau = (ajj - aii) / (2.0 * aij);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for k in 0..n {
                    let x = a.get(k, i);
                    let y = a.get(k, j);
                    a.set(k, i, c * x - s * y);
                    a.set(k, j, s * x + c * y);
                    let vx = v.get(k, i);
                    let vy = v.get(k, j);
                    v.set(k, i, c * vx - s * vy);
                    v.set(k, j, s * vx + c * vy);
                }
            }
        }
        if !rotated {
            break;
        }
    }
    // Column norms are the singular values.
    let mut sigma = vec![0.0; n];
    let mut u = Matrix::zeros(n, n);
    for (j, slot) in sigma.iter_mut().enumerate() {
        let norm: f64 = (0..n)
            .map(|k| a.get(k, j) * a.get(k, j))
            .sum::<f64>()
            .sqrt();
        *slot = norm;
        if norm > 1e-300 {
            for k in 0..n {
                u.set(k, j, a.get(k, j) / norm);
            }
        }
    }
    // Complete zero columns of U to an orthonormal basis.
    for j in 0..n {
        if sigma[j] > 1e-300 {
            continue;
        }
        for cand in 0..n {
            let mut col = vec![0.0; n];
            col[cand] = 1.0;
            for jj in 0..n {
                if jj == j {
                    continue;
                }
                let dot: f64 = (0..n).map(|k| u.get(k, jj) * col[k]).sum();
                for (k, c) in col.iter_mut().enumerate() {
                    *c -= dot * u.get(k, jj);
                }
            }
            let norm: f64 = col.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > 1e-8 {
                for (k, c) in col.iter().enumerate() {
                    u.set(k, j, c / norm);
                }
                break;
            }
        }
    }
    Ok((u, sigma, v.transpose()))
}

/// Determinant by LU factorization with partial pivoting.
pub fn determinant(m: &Matrix) -> Result<f64> {
    if !m.is_square() {
        return Err(Error::Domain("determinant needs a square matrix".into()));
    }
    let n = m.n_rows();
    let mut a = m.clone();
    let mut det = 1.0;
    for col in 0..n {
        let mut pivot = col;
        for r in (col + 1)..n {
            if a.get(r, col).abs() > a.get(pivot, col).abs() {
                pivot = r;
            }
        }
        if a.get(pivot, col) == 0.0 {
            return Ok(0.0);
        }
        if pivot != col {
            for j in 0..n {
                let tmp = a.get(col, j);
                a.set(col, j, a.get(pivot, j));
                a.set(pivot, j, tmp);
            }
            det = -det;
        }
        let d = a.get(col, col);
        det *= d;
        for r in (col + 1)..n {
            let f = a.get(r, col) / d;
            if f == 0.0 {
                continue;
            }
            for j in col..n {
                let v = a.get(r, j) - f * a.get(col, j);
                a.set(r, j, v);
            }
        }
    }
    Ok(det)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_by_two_textbook() {
        let m = Matrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let e = jacobi_eigen(&m, 100).unwrap();
        assert!((e.values[0] - 1.0).abs() < 1e-14);
        assert!((e.values[1] - 3.0).abs() < 1e-14);
        let inv_sqrt2 = 0.5_f64.sqrt();
        // (1, -1)/sqrt(2) with the sign convention putting the first entry positive.
        assert!((e.vectors.get(0, 0) - inv_sqrt2).abs() < 1e-14);
        assert!((e.vectors.get(1, 0) + inv_sqrt2).abs() < 1e-14);
        assert!((e.vectors.get(0, 1) - inv_sqrt2).abs() < 1e-14);
        assert!((e.vectors.get(1, 1) - inv_sqrt2).abs() < 1e-14);
    }

    #[test]
    fn identity_matrix_eigen() {
        let m = Matrix::identity(6);
        let e = jacobi_eigen(&m, 100).unwrap();
        for (j, &val) in e.values.iter().enumerate() {
            assert_eq!(val, 1.0);
            for i in 0..6 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert_eq!(e.vectors.get(i, j), expect);
            }
        }
    }

    #[test]
    fn rejects_asymmetric_input() {
        let m = Matrix::from_rows(&[vec![1.0, 2.0], vec![0.5, 1.0]]).unwrap();
        assert!(matches!(jacobi_eigen(&m, 100), Err(Error::Domain(_))));
    }

    #[test]
    fn residuals_meet_contract() {
        // Deterministic shaped matrix, no RNG needed.
        let n = 8;
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let v = ((i * 7 + j * 3) % 11) as f64 / 11.0 + if i == j { 2.0 } else { 0.0 };
                m.set(i, j, v);
            }
        }
        // Symmetrize.
        let mt = m.transpose();
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, 0.5 * (m.get(i, j) + mt.get(i, j)));
            }
        }
        let e = jacobi_eigen(&m, 100).unwrap();
        let scale = m.inf_norm();
        for j in 0..n {
            let col = e.vectors.column(j);
            let mv = m.matvec(&col).unwrap();
            for i in 0..n {
                assert!((mv[i] - e.values[j] * col[i]).abs() <= 1e-10 * scale);
            }
            for j2 in 0..n {
                let dot: f64 = e
                    .vectors
                    .column(j2)
                    .iter()
                    .zip(&col)
                    .map(|(a, b)| a * b)
                    .sum();
                let expect = if j == j2 { 1.0 } else { 0.0 };
                assert!((dot - expect).abs() <= 1e-10);
            }
        }
    }

    #[test]
    fn svd_recovers_rotation() {
        let c = 0.6_f64;
        let s = 0.8_f64;
        let m = Matrix::from_rows(&[vec![c, -s], vec![s, c]]).unwrap();
        let (u, sigma, vt) = svd_square(&m).unwrap();
        for &x in &sigma {
            assert!((x - 1.0).abs() < 1e-12);
        }
        let q = u.matmul(&vt).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!((q.get(i, j) - m.get(i, j)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn determinant_matches_eigenvalue_product() {
        let m = Matrix::from_rows(&[
            vec![4.0, 1.0, 0.5],
            vec![1.0, 3.0, 0.25],
            vec![0.5, 0.25, 2.0],
        ])
        .unwrap();
        let e = jacobi_eigen(&m, 100).unwrap();
        let prod: f64 = e.values.iter().product();
        assert!((determinant(&m).unwrap() - prod).abs() < 1e-10);
    }
}
