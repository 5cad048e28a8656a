//! Small dense linear algebra kernels: column-major matrices, Householder QR
//! with column pivoting, Cholesky and a Jacobi symmetric eigen-solver.
//!
//! The regression problems here are tall and thin (thousands of rows, a few
//! dozen columns), so everything is written for clarity over blocking.

use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Column-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    /// Builds a matrix from equal-length columns.
    pub fn from_columns(rows: usize, columns: &[Vec<T>]) -> Self {
        let mut data = Vec::with_capacity(rows * columns.len());
        for c in columns {
            assert_eq!(c.len(), rows, "column length mismatch");
            data.extend_from_slice(c);
        }
        Self {
            rows,
            cols: columns.len(),
            data,
        }
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "row length mismatch");
            for (j, &v) in row.iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, j: usize) -> &[T] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn column_mut(&mut self, j: usize) -> &mut [T] {
        &mut self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn columns(&self) -> impl Iterator<Item = &[T]> {
        (0..self.cols).map(move |j| self.column(j))
    }

    /// Keeps the listed columns, in the given order.
    pub fn select_columns(&self, idx: &[usize]) -> Self {
        let mut data = Vec::with_capacity(self.rows * idx.len());
        for &j in idx {
            data.extend_from_slice(self.column(j));
        }
        Self {
            rows: self.rows,
            cols: idx.len(),
            data,
        }
    }

    /// Keeps the listed rows, in the given order.
    pub fn select_rows(&self, idx: &[usize]) -> Self {
        let mut out = Self::zeros(idx.len(), self.cols);
        for j in 0..self.cols {
            let src = self.column(j);
            let dst = out.column_mut(j);
            for (d, &i) in dst.iter_mut().zip(idx) {
                *d = src[i];
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for j in 0..self.cols {
            for i in 0..self.rows {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn matmul(&self, other: &Matrix<T>) -> Self {
        assert_eq!(self.cols, other.rows, "matmul dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for j in 0..other.cols {
            let oc = other.column(j);
            let dst = &mut out.data[j * self.rows..(j + 1) * self.rows];
            for (k, &b) in oc.iter().enumerate() {
                if b == T::zero() {
                    continue;
                }
                for (d, &a) in dst.iter_mut().zip(self.column(k)) {
                    *d = *d + a * b;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len());
        let mut out = vec![T::zero(); self.rows];
        for (j, &b) in v.iter().enumerate() {
            for (d, &a) in out.iter_mut().zip(self.column(j)) {
                *d = *d + a * b;
            }
        }
        out
    }

    /// `selfᵀ self`, exploiting symmetry.
    pub fn gram(&self) -> Self {
        let mut g = Self::zeros(self.cols, self.cols);
        for a in 0..self.cols {
            for b in a..self.cols {
                let v = dot(self.column(a), self.column(b));
                g[(a, b)] = v;
                g[(b, a)] = v;
            }
        }
        g
    }

    pub fn scale(&self, c: T) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&v| v * c).collect(),
        }
    }

    pub fn trace(&self) -> T {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Largest absolute entry of `self - other`.
    pub fn max_abs_diff(&self, other: &Matrix<T>) -> T {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .fold(T::zero(), |m, (&a, &b)| m.max((a - b).abs()))
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)]).collect())
            .collect()
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[j * self.rows + i]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[j * self.rows + i]
    }
}

pub fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |s, (&x, &y)| s + x * y)
}

/// Householder QR factorization with column pivoting, `A P = Q R`.
#[derive(Debug, Clone)]
pub struct PivotedQr<T> {
    /// R in the upper triangle, Householder vectors below the diagonal.
    packed: Matrix<T>,
    tau: Vec<T>,
    /// `perm[k]` is the original index of the k-th pivoted column.
    perm: Vec<usize>,
    rank: usize,
}

impl<T: Scalar> PivotedQr<T> {
    /// Factorizes `a`, declaring column k of the pivoted factor negligible when
    /// `|R_kk| <= rel_tol * |R_00|`.
    pub fn new(a: &Matrix<T>, rel_tol: T) -> Self {
        let m = a.nrows();
        let n = a.ncols();
        let steps = m.min(n);
        let mut qr = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut tau = vec![T::zero(); steps];

        for k in 0..steps {
            // exact trailing norms each step; cheap at these widths and
            // avoids the downdating drift of the classical scheme
            let mut best = k;
            let mut best_norm = T::neg_infinity();
            for j in k..n {
                let col = &qr.column(j)[k..];
                let nrm = dot(col, col);
                if nrm > best_norm {
                    best = j;
                    best_norm = nrm;
                }
            }
            if best != k {
                for i in 0..m {
                    let tmp = qr[(i, k)];
                    qr[(i, k)] = qr[(i, best)];
                    qr[(i, best)] = tmp;
                }
                perm.swap(k, best);
            }

            let (beta, t) = householder(&mut qr.column_mut(k)[k..]);
            tau[k] = t;
            if t != T::zero() {
                let v: Vec<T> = std::iter::once(T::one())
                    .chain(qr.column(k)[k + 1..].iter().copied())
                    .collect();
                for j in k + 1..n {
                    let col = &mut qr.column_mut(j)[k..];
                    let s = dot(&v, col) * t;
                    for (c, &vi) in col.iter_mut().zip(&v) {
                        *c = *c - s * vi;
                    }
                }
            }
            qr[(k, k)] = beta;
        }

        let lead = if steps > 0 { qr[(0, 0)].abs() } else { T::zero() };
        let rank = if lead == T::zero() || !lead.is_finite() {
            0
        } else {
            (0..steps)
                .take_while(|&k| qr[(k, k)].abs() > rel_tol * lead)
                .count()
        };

        Self {
            packed: qr,
            tau,
            perm,
            rank,
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn permutation(&self) -> &[usize] {
        &self.perm
    }

    /// Original indices of the columns kept (first `rank` pivots).
    pub fn retained(&self) -> &[usize] {
        &self.perm[..self.rank]
    }

    pub fn r_diag(&self, k: usize) -> T {
        self.packed[(k, k)]
    }

    /// Computes `Qᵀ y`.
    pub fn qt_mul(&self, y: &[T]) -> Vec<T> {
        let m = self.packed.nrows();
        assert_eq!(y.len(), m);
        let mut out = y.to_vec();
        for (k, &t) in self.tau.iter().enumerate() {
            if t == T::zero() {
                continue;
            }
            let below = &self.packed.column(k)[k + 1..];
            let mut s = out[k];
            for (&v, &o) in below.iter().zip(&out[k + 1..]) {
                s = s + v * o;
            }
            s = s * t;
            out[k] = out[k] - s;
            for (o, &v) in out[k + 1..].iter_mut().zip(below) {
                *o = *o - s * v;
            }
        }
        out
    }

    /// Least-squares coefficients for the retained columns, in pivot order.
    pub fn solve_retained(&self, y: &[T]) -> Vec<T> {
        let qty = self.qt_mul(y);
        let r = self.rank;
        let mut x = qty[..r].to_vec();
        for i in (0..r).rev() {
            let mut s = x[i];
            for j in i + 1..r {
                s = s - self.packed[(i, j)] * x[j];
            }
            x[i] = s / self.packed[(i, i)];
        }
        x
    }

    /// `(R₁₁ᵀ R₁₁)⁻¹` for the leading `rank` block, in pivot order. This is
    /// `(X₁ᵀ X₁)⁻¹` for the retained columns.
    pub fn gram_inverse_retained(&self) -> Matrix<T> {
        let r = self.rank;
        // invert the upper-triangular block column by column
        let mut rinv = Matrix::zeros(r, r);
        for j in 0..r {
            rinv[(j, j)] = T::one() / self.packed[(j, j)];
            for i in (0..j).rev() {
                let mut s = T::zero();
                for k in i + 1..=j {
                    s = s + self.packed[(i, k)] * rinv[(k, j)];
                }
                rinv[(i, j)] = -s / self.packed[(i, i)];
            }
        }
        let mut out = Matrix::zeros(r, r);
        for a in 0..r {
            for b in a..r {
                let mut s = T::zero();
                for k in b..r {
                    s = s + rinv[(a, k)] * rinv[(b, k)];
                }
                out[(a, b)] = s;
                out[(b, a)] = s;
            }
        }
        out
    }
}

/// Overwrites `x` with the Householder vector (unit first entry implicit) and
/// returns `(beta, tau)` so that `(I - tau v vᵀ) x = beta e₁`.
fn householder<T: Scalar>(x: &mut [T]) -> (T, T) {
    let alpha = x[0];
    let tail: T = x[1..].iter().map(|&v| v * v).sum();
    if tail == T::zero() {
        return (alpha, T::zero());
    }
    let norm = (alpha * alpha + tail).sqrt();
    let beta = if alpha >= T::zero() { -norm } else { norm };
    let tau = (beta - alpha) / beta;
    let scale = T::one() / (alpha - beta);
    for v in x[1..].iter_mut() {
        *v = *v * scale;
    }
    (beta, tau)
}

/// Lower Cholesky factor of a symmetric positive definite matrix. Pivots
/// within a few ulps of zero relative to the diagonal count as singular.
pub fn cholesky<T: Scalar>(a: &Matrix<T>) -> Result<Matrix<T>> {
    let n = a.nrows();
    if n != a.ncols() {
        return Err(Error::DegenerateCovariance("cholesky of non-square matrix".into()));
    }
    let mut l = Matrix::zeros(n, n);
    for j in 0..n {
        let mut d = a[(j, j)];
        for k in 0..j {
            d = d - l[(j, k)] * l[(j, k)];
        }
        if !(d > T::epsilon() * T::lit(64.0) * a[(j, j)].abs()) {
            return Err(Error::DegenerateCovariance(format!(
                "matrix not positive definite (pivot {j} = {d})"
            )));
        }
        let d = d.sqrt();
        l[(j, j)] = d;
        for i in j + 1..n {
            let mut s = a[(i, j)];
            for k in 0..j {
                s = s - l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = s / d;
        }
    }
    Ok(l)
}

/// Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.
/// Returns eigenvalues in descending order with matching unit eigenvectors
/// as columns.
pub fn symmetric_eigen<T: Scalar>(a: &Matrix<T>) -> (Vec<T>, Matrix<T>) {
    let n = a.nrows();
    assert_eq!(n, a.ncols());
    let mut m = a.clone();
    let mut v = Matrix::identity(n);
    let eps = T::epsilon();

    for _sweep in 0..100 {
        let mut off = T::zero();
        let mut scale = T::zero();
        for i in 0..n {
            scale = scale + m[(i, i)] * m[(i, i)];
            for j in 0..n {
                if i != j {
                    off = off + m[(i, j)] * m[(i, j)];
                }
            }
        }
        if off <= eps * eps * scale || off == T::zero() {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[(p, q)];
                if apq == T::zero() {
                    continue;
                }
                let app = m[(p, p)];
                let aqq = m[(q, q)];
                let theta = (aqq - app) / (T::lit(2.0) * apq);
                let sign = if theta >= T::zero() { T::one() } else { -T::one() };
                let t = sign / (theta.abs() + (theta * theta + T::one()).sqrt());
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = c * mkp - s * mkq;
                    m[(k, q)] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = c * mpk - s * mqk;
                    m[(q, k)] = s * mpk + c * mqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        m[(b, b)]
            .partial_cmp(&m[(a, a)])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });
    let values = order.iter().map(|&i| m[(i, i)]).collect();
    (values, v.select_columns(&order))
}

/// Inverse of a 2×2 matrix.
pub fn inverse_2x2<T: Scalar>(a: &Matrix<T>) -> Result<Matrix<T>> {
    let det = a[(0, 0)] * a[(1, 1)] - a[(0, 1)] * a[(1, 0)];
    if det == T::zero() || !det.is_finite() {
        return Err(Error::DegenerateCovariance("singular 2x2 matrix".into()));
    }
    Ok(Matrix::from_rows(&[
        vec![a[(1, 1)] / det, -a[(0, 1)] / det],
        vec![-a[(1, 0)] / det, a[(0, 0)] / det],
    ]))
}
