//! Dense row-major matrices and Householder least squares.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

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

    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "{} values for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from equally long rows.
    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::ShapeMismatch("ragged rows".into()));
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data: rows.concat(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [T] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<T> {
        self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> T {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: T) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_mut(&mut self, r: usize) -> &mut [T] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.data[c * self.rows + r] = self.data[r * self.cols + c];
            }
        }
        out
    }

    /// `self * other`.
    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matmul shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == T::zero() {
                    continue;
                }
                let b_row = &other.data[k * other.cols..(k + 1) * other.cols];
                for (o, &b) in out_row.iter_mut().zip(b_row) {
                    *o += a * b;
                }
            }
        }
        out
    }
}

/// Outcome of an ordinary least squares solve.
#[derive(Debug, Clone, PartialEq)]
pub struct LeastSquares<T> {
    pub coefficients: Vec<T>,
    pub residuals: Vec<T>,
    /// Residual sum of squares.
    pub rss: T,
}

/// Minimizes `||X b - y||` by Householder QR.
///
/// Returns [`Error::ShapeMismatch`] when the system is underdetermined and
/// [`Error::InvalidArgument`] when `X` is numerically rank deficient.
pub fn least_squares<T: Scalar>(x: &Matrix<T>, y: &[T]) -> Result<LeastSquares<T>> {
    let (m, n) = (x.rows(), x.cols());
    if y.len() != m {
        return Err(Error::ShapeMismatch(format!("{m} design rows, {} targets", y.len())));
    }
    if m < n || n == 0 {
        return Err(Error::ShapeMismatch(format!("{m} observations for {n} regressors")));
    }
    // column-major working copy
    let mut a: Vec<Vec<T>> = (0..n).map(|c| (0..m).map(|r| x.get(r, c)).collect()).collect();
    let mut qty = y.to_vec();
    let mut diag = vec![T::zero(); n];
    let col_norms: Vec<T> = a.iter().map(|c| c.iter().map(|&v| v * v).sum::<T>().sqrt()).collect();

    for k in 0..n {
        let norm = a[k][k..].iter().map(|&v| v * v).sum::<T>().sqrt();
        let scale = col_norms[k].max(T::min_positive_value());
        if norm <= T::lit(1e-10) * scale || norm == T::zero() {
            return Err(Error::InvalidArgument(format!("design matrix is rank deficient at column {k}")));
        }
        let alpha = if a[k][k] > T::zero() { -norm } else { norm };
        let mut v: Vec<T> = a[k][k..].to_vec();
        v[0] -= alpha;
        let vnorm2 = v.iter().map(|&t| t * t).sum::<T>();
        diag[k] = alpha;
        if vnorm2 == T::zero() {
            continue;
        }
        let two = T::lit(2.0);
        for col in a.iter_mut().skip(k + 1) {
            let dot = v.iter().zip(&col[k..]).map(|(&p, &q)| p * q).sum::<T>();
            let f = two * dot / vnorm2;
            for (c, &vi) in col[k..].iter_mut().zip(&v) {
                *c -= f * vi;
            }
        }
        let dot = v.iter().zip(&qty[k..]).map(|(&p, &q)| p * q).sum::<T>();
        let f = two * dot / vnorm2;
        for (c, &vi) in qty[k..].iter_mut().zip(&v) {
            *c -= f * vi;
        }
    }

    // back substitution: R b = Q^T y
    let mut b = vec![T::zero(); n];
    for k in (0..n).rev() {
        let mut s = qty[k];
        for (j, bj) in b.iter().enumerate().skip(k + 1) {
            s -= a[j][k] * *bj;
        }
        b[k] = s / diag[k];
    }

    let residuals: Vec<T> = (0..m)
        .map(|r| y[r] - x.row(r).iter().zip(&b).map(|(&p, &q)| p * q).sum::<T>())
        .collect();
    let rss = residuals.iter().map(|&e| e * e).sum();
    Ok(LeastSquares {
        coefficients: b,
        residuals,
        rss,
    })
}
