use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

/// Two-sided band at coverage `level`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Band<T> {
    pub level: f64,
    pub lo: T,
    pub hi: T,
}

/// Standard normal quantile.
pub fn normal_quantile(p: f64) -> f64 {
    Normal::standard().inverse_cdf(p)
}

/// Standard error of `wᵀβ` and normal bands `est ± z_{(1+p)/2} · se`.
///
/// Quadratic forms in `[−1e−8, 0)` are rounding noise and clamp to zero;
/// anything more negative means the covariance is not PSD.
pub fn delta_bands<T: Scalar>(
    estimate: T,
    weights: &[T],
    cov: &Matrix<T>,
    levels: &[f64],
) -> Result<(T, Vec<Band<T>>)> {
    if weights.len() != cov.nrows() || cov.nrows() != cov.ncols() {
        return Err(Error::Covariance(format!(
            "weight length {} does not match {}x{} covariance",
            weights.len(),
            cov.nrows(),
            cov.ncols()
        )));
    }
    let q = crate::linalg::dot(weights, &cov.mul_vec(weights));
    let var = if q >= T::zero() {
        q
    } else if q >= T::lit(-1e-8) {
        T::zero()
    } else {
        return Err(Error::Covariance(format!("negative variance {q}")));
    };
    let se = var.sqrt();
    let bands = levels
        .iter()
        .map(|&p| {
            let z = T::lit(normal_quantile((1.0 + p) / 2.0));
            Band {
                level: p,
                lo: estimate - z * se,
                hi: estimate + z * se,
            }
        })
        .collect();
    Ok((se, bands))
}
