use super::RegressionProblem;
use crate::error::{Error, Result};
use crate::linalg::{Matrix, PivotedQr};
use crate::scalar::Scalar;

/// Pivots below this fraction of the leading pivot mark a column as collinear.
pub const COLLINEARITY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct OlsSolution<T> {
    /// Original indices of retained columns, ascending.
    pub retained: Vec<usize>,
    /// Original indices of dropped columns, ascending.
    pub dropped: Vec<usize>,
    /// Coefficients aligned with `retained`.
    pub coefficients: Vec<T>,
    pub residuals: Vec<T>,
    /// `(X₁ᵀX₁)⁻¹` over the retained columns, aligned with `retained`.
    pub xtx_inv: Matrix<T>,
}

/// Least squares via Householder QR with column pivoting. Collinear columns
/// are dropped and receive no coefficient.
pub fn solve_ols<T: Scalar>(prob: &RegressionProblem<T>) -> Result<OlsSolution<T>> {
    let qr = PivotedQr::new(&prob.x, T::lit(COLLINEARITY_TOL));
    let rank = qr.rank();
    if rank == 0 {
        return Err(Error::DegenerateDesign("every column is collinear or zero".into()));
    }
    let n = prob.n();
    if n < rank + 1 {
        return Err(Error::DegenerateDesign(format!(
            "{n} rows cannot identify {rank} coefficients"
        )));
    }

    let beta_piv = qr.solve_retained(&prob.y);
    let gram_inv_piv = qr.gram_inverse_retained();

    // reorder from pivot order to ascending original order
    let mut order: Vec<usize> = (0..rank).collect();
    order.sort_by_key(|&k| qr.retained()[k]);
    let retained: Vec<usize> = order.iter().map(|&k| qr.retained()[k]).collect();
    let coefficients: Vec<T> = order.iter().map(|&k| beta_piv[k]).collect();
    let mut xtx_inv = Matrix::zeros(rank, rank);
    for (a, &ka) in order.iter().enumerate() {
        for (b, &kb) in order.iter().enumerate() {
            xtx_inv[(a, b)] = gram_inv_piv[(ka, kb)];
        }
    }
    let mut dropped: Vec<usize> = qr.permutation()[rank..].to_vec();
    dropped.sort_unstable();

    let mut residuals = prob.y.clone();
    for (&j, &b) in retained.iter().zip(&coefficients) {
        for (r, &x) in residuals.iter_mut().zip(prob.x.column(j)) {
            *r = *r - x * b;
        }
    }

    Ok(OlsSolution {
        retained,
        dropped,
        coefficients,
        residuals,
        xtx_inv,
    })
}
