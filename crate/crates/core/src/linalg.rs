//! Small dense linear algebra: row-major matrices, Householder QR for least
//! squares, Cholesky for symmetric positive definite systems, and a
//! row-appending QR used for recursive residuals.

use std::ops::{Index, IndexMut};

/// Relative tolerance on `|R_jj| / ‖x_j‖` below which column `j` is treated
/// as a linear combination of the columns before it.
pub const RANK_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), rows * cols, "shape mismatch");
        Matrix { rows, cols, data }
    }

    /// Builds a matrix whose columns are the given slices.
    pub fn from_columns(rows: usize, columns: &[&[f64]]) -> Self {
        let cols = columns.len();
        let mut m = Self::zeros(rows, cols);
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length mismatch");
            for (i, v) in c.iter().enumerate() {
                m.data[i * cols + j] = *v;
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.data[i * self.cols + j]).collect()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        t
    }

    pub fn matmul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == 0.0 {
                    continue;
                }
                let orow = other.row(k);
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, b) in dst.iter_mut().zip(orow) {
                    *d += a * b;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(self.cols, v.len(), "shape mismatch");
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    /// `selfᵀ · self`.
    pub fn gram(&self) -> Matrix {
        let k = self.cols;
        let mut g = Matrix::zeros(k, k);
        for i in 0..self.rows {
            let r = self.row(i);
            for a in 0..k {
                let ra = r[a];
                if ra == 0.0 {
                    continue;
                }
                for b in a..k {
                    g.data[a * k + b] += ra * r[b];
                }
            }
        }
        for a in 0..k {
            for b in 0..a {
                g.data[a * k + b] = g.data[b * k + a];
            }
        }
        g
    }

    /// Principal submatrix on the given indices.
    pub fn submatrix(&self, idx: &[usize]) -> Matrix {
        let n = idx.len();
        let mut m = Matrix::zeros(n, n);
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                m[(a, b)] = self[(i, j)];
            }
        }
        m
    }

    pub fn scale(&mut self, s: f64) {
        self.data.iter_mut().for_each(|v| *v *= s);
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| (self[(i, j)] - self[(j, i)]).abs() <= tol))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Householder QR of a tall matrix, stored compactly (LINPACK layout).
#[derive(Debug, Clone)]
pub struct Qr {
    m: usize,
    n: usize,
    /// Column-major; Householder vectors on and below the diagonal.
    qr: Vec<f64>,
    rdiag: Vec<f64>,
    col_norms: Vec<f64>,
}

impl Qr {
    pub fn new(x: &Matrix) -> Qr {
        let (m, n) = (x.rows, x.cols);
        assert!(m >= n, "QR needs at least as many rows as columns");
        let mut qr = vec![0.0; m * n];
        for i in 0..m {
            for j in 0..n {
                qr[j * m + i] = x[(i, j)];
            }
        }
        let col_norms: Vec<f64> = (0..n).map(|j| norm(&qr[j * m..(j + 1) * m])).collect();
        let mut rdiag = vec![0.0; n];
        for k in 0..n {
            let (head, tail) = qr.split_at_mut((k + 1) * m);
            let colk = &mut head[k * m..];
            let mut nrm = norm(&colk[k..]);
            if nrm != 0.0 {
                if colk[k] < 0.0 {
                    nrm = -nrm;
                }
                colk[k..].iter_mut().for_each(|v| *v /= nrm);
                colk[k] += 1.0;
                for j in 0..(n - k - 1) {
                    let colj = &mut tail[j * m..(j + 1) * m];
                    let s = -dot(&colk[k..], &colj[k..]) / colk[k];
                    for (cj, ck) in colj[k..].iter_mut().zip(&colk[k..]) {
                        *cj += s * ck;
                    }
                }
            }
            rdiag[k] = -nrm;
        }
        Qr { m, n, qr, rdiag, col_norms }
    }

    /// First column whose diagonal element is negligible relative to the
    /// column's norm, i.e. a column in the span of its predecessors.
    pub fn first_deficient_column(&self) -> Option<usize> {
        (0..self.n).find(|&j| self.col_norms[j] == 0.0 || self.rdiag[j].abs() <= RANK_TOL * self.col_norms[j])
    }

    /// `Qᵀ y`.
    pub fn qt_mul(&self, y: &[f64]) -> Vec<f64> {
        assert_eq!(y.len(), self.m);
        let mut v = y.to_vec();
        for k in 0..self.n {
            let colk = &self.qr[k * self.m..(k + 1) * self.m];
            if colk[k] == 0.0 {
                continue;
            }
            let s = -dot(&colk[k..], &v[k..]) / colk[k];
            for (vi, ck) in v[k..].iter_mut().zip(&colk[k..]) {
                *vi += s * ck;
            }
        }
        v
    }

    fn r(&self, i: usize, j: usize) -> f64 {
        if i == j {
            self.rdiag[i]
        } else {
            self.qr[j * self.m + i]
        }
    }

    /// Least-squares coefficients `argmin ‖y − Xb‖`. The caller must check rank first.
    pub fn solve(&self, y: &[f64]) -> Vec<f64> {
        let qty = self.qt_mul(y);
        let mut b = qty[..self.n].to_vec();
        for i in (0..self.n).rev() {
            for j in (i + 1)..self.n {
                b[i] -= self.r(i, j) * b[j];
            }
            b[i] /= self.rdiag[i];
        }
        b
    }

    /// `R⁻¹` (upper triangular).
    pub fn r_inverse(&self) -> Matrix {
        let n = self.n;
        let mut inv = Matrix::zeros(n, n);
        for c in 0..n {
            inv[(c, c)] = 1.0 / self.rdiag[c];
            for i in (0..c).rev() {
                let mut s = 0.0;
                for j in (i + 1)..=c {
                    s += self.r(i, j) * inv[(j, c)];
                }
                inv[(i, c)] = -s / self.rdiag[i];
            }
        }
        inv
    }

    /// `(XᵀX)⁻¹ = R⁻¹ R⁻ᵀ`.
    pub fn xtx_inverse(&self) -> Matrix {
        let ri = self.r_inverse();
        let n = self.n;
        let mut out = Matrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let s: f64 = (j..n).map(|k| ri[(i, k)] * ri[(j, k)]).sum();
                out[(i, j)] = s;
                out[(j, i)] = s;
            }
        }
        out
    }
}

fn norm(v: &[f64]) -> f64 {
    // Scaled to avoid overflow for large-magnitude level series.
    let scale = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if scale == 0.0 {
        return 0.0;
    }
    scale * v.iter().map(|x| (x / scale).powi(2)).sum::<f64>().sqrt()
}

/// Lower Cholesky factor of a symmetric positive definite matrix, or `None`
/// if a pivot is not positive relative to the matrix scale.
pub fn cholesky(a: &Matrix) -> Option<Matrix> {
    let n = a.rows;
    assert_eq!(n, a.cols);
    let scale = a.diagonal().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut l = Matrix::zeros(n, n);
    for j in 0..n {
        let mut d = a[(j, j)];
        for k in 0..j {
            d -= l[(j, k)] * l[(j, k)];
        }
        if !(d > 1e-14 * scale) || !d.is_finite() {
            return None;
        }
        let d = d.sqrt();
        l[(j, j)] = d;
        for i in (j + 1)..n {
            let mut s = a[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = s / d;
        }
    }
    Some(l)
}

/// Solves `L Lᵀ x = b` given the Cholesky factor.
pub fn cholesky_solve(l: &Matrix, b: &[f64]) -> Vec<f64> {
    let n = l.rows;
    let mut z = b.to_vec();
    for i in 0..n {
        for k in 0..i {
            z[i] -= l[(i, k)] * z[k];
        }
        z[i] /= l[(i, i)];
    }
    for i in (0..n).rev() {
        for k in (i + 1)..n {
            z[i] -= l[(k, i)] * z[k];
        }
        z[i] /= l[(i, i)];
    }
    z
}

/// `log det A` from its Cholesky factor.
pub fn cholesky_log_det(l: &Matrix) -> f64 {
    2.0 * (0..l.rows).map(|i| l[(i, i)].ln()).sum::<f64>()
}

/// QR factor that grows one observation at a time (Givens rotations).
///
/// Used for recursive residuals: before each new row is absorbed, the
/// one-step-ahead prediction error and its variance factor are available.
#[derive(Debug, Clone)]
pub struct RowUpdatingQr {
    k: usize,
    /// Upper triangular, row-major k×k.
    r: Vec<f64>,
    qty: Vec<f64>,
    col_ss: Vec<f64>,
    rows: usize,
}

impl RowUpdatingQr {
    pub fn new(k: usize) -> Self {
        RowUpdatingQr { k, r: vec![0.0; k * k], qty: vec![0.0; k], col_ss: vec![0.0; k], rows: 0 }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    /// First column that is (numerically) dependent on earlier ones.
    pub fn first_deficient_column(&self) -> Option<usize> {
        (0..self.k).find(|&j| {
            let cn = self.col_ss[j].sqrt();
            cn == 0.0 || self.r[j * self.k + j].abs() <= RANK_TOL * cn
        })
    }

    pub fn push(&mut self, x: &[f64], y: f64) {
        let k = self.k;
        let mut x = x.to_vec();
        let mut y = y;
        for (j, v) in x.iter().enumerate() {
            self.col_ss[j] += v * v;
        }
        for i in 0..k {
            let rii = self.r[i * k + i];
            let xi = x[i];
            if xi == 0.0 {
                continue;
            }
            let h = rii.hypot(xi);
            let (c, s) = (rii / h, xi / h);
            for j in i..k {
                let a = self.r[i * k + j];
                let b = x[j];
                self.r[i * k + j] = c * a + s * b;
                x[j] = -s * a + c * b;
            }
            let a = self.qty[i];
            self.qty[i] = c * a + s * y;
            y = -s * a + c * y;
        }
        self.rows += 1;
    }

    /// Current coefficients; requires full rank.
    pub fn coefficients(&self) -> Vec<f64> {
        let k = self.k;
        let mut b = self.qty.clone();
        for i in (0..k).rev() {
            for j in (i + 1)..k {
                b[i] -= self.r[i * k + j] * b[j];
            }
            b[i] /= self.r[i * k + i];
        }
        b
    }

    /// Standardized one-step prediction error for a new observation:
    /// `(y − xᵀb) / √(1 + xᵀ(XᵀX)⁻¹x)`. Requires full rank.
    pub fn recursive_residual(&self, x: &[f64], y: f64) -> f64 {
        let k = self.k;
        let b = self.coefficients();
        // Solve Rᵀ v = x.
        let mut v = x.to_vec();
        for i in 0..k {
            for j in 0..i {
                v[i] -= self.r[j * k + i] * v[j];
            }
            v[i] /= self.r[i * k + i];
        }
        (y - dot(x, &b)) / (1.0 + dot(&v, &v)).sqrt()
    }
}
