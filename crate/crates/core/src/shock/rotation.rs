//! Sign-restricted rotation of the (rate factor, stock) covariance.
//!
//! With `Σ = C Cᵀ` and `Q(θ)` the planar rotation, every `B(θ) = C Q(θ)`
//! reproduces `Σ`. A policy shock must raise rates and lower stocks (first
//! column `(+, −)`); an information shock raises both (second column
//! `(+, +)`). The admissible angles form one arc of the circle and the
//! reported rotation is its median angle.

use std::f64::consts::PI;

use super::{first_principal_component, EventSurprise};
use crate::error::{Error, Result};
use crate::linalg::{cholesky, inverse_2x2, Matrix};
use crate::scalar::Scalar;

/// Default scan resolution: a tenth of a degree.
pub const DEFAULT_GRID_STEP: f64 = PI / 1800.0;

/// Contiguous admissible arc on the angle grid.
#[derive(Debug, Clone, PartialEq)]
pub struct AdmissibleArc<T> {
    /// Admissible grid angles in arc order, each in `[0, 2π)`.
    pub angles: Vec<T>,
    pub median: T,
    /// `angles.len() × step`.
    pub width: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RotationResult<T> {
    pub theta_star: T,
    pub admissible: Vec<T>,
    pub arc_width: T,
    pub grid_step: T,
    /// `B(θ*)`; columns are the policy and information impacts.
    pub impact: Matrix<T>,
    /// Sample covariance of (factor, stock).
    pub covariance: Matrix<T>,
    /// Unit-variance structural shocks `B(θ*)⁻¹ (factor, stock)ᵀ` per event.
    pub structural: Vec<[T; 2]>,
    /// Per-event `(mp, info)` contributions to the rate factor, i.e. the
    /// structural shocks scaled by the first row of `B(θ*)`. They add up to
    /// the factor score.
    pub shocks: Vec<(T, T)>,
    pub factor: Vec<T>,
}

fn rotation<T: Scalar>(theta: T) -> Matrix<T> {
    let (s, c) = theta.sin_cos();
    Matrix::from_rows(&[vec![c, -s], vec![s, c]])
}

fn admissible<T: Scalar>(b: &Matrix<T>) -> bool {
    let zero = T::zero();
    b[(0, 0)] > zero && b[(1, 0)] < zero && b[(0, 1)] > zero && b[(1, 1)] > zero
}

/// Scans `[0, 2π)` and returns the admissible arc for covariance `cov`.
pub fn identify_rotation_from_covariance<T: Scalar>(
    cov: &Matrix<T>,
    grid_step: T,
) -> Result<(AdmissibleArc<T>, Matrix<T>)> {
    let max_step = T::lit(PI / 180.0);
    if !(grid_step > T::zero()) || grid_step > max_step * T::lit(1.0 + 1e-12) {
        return Err(Error::Config(format!(
            "grid step {grid_step} outside (0, π/180]"
        )));
    }
    let chol = cholesky(cov)?;
    let two_pi = T::lit(2.0 * PI);

    let mut flags = Vec::new();
    let mut k = 0usize;
    loop {
        let theta = T::from_usize_lossy(k) * grid_step;
        if theta >= two_pi {
            break;
        }
        flags.push(admissible(&chol.matmul(&rotation(theta))));
        k += 1;
    }
    let n = flags.len();

    // runs of admissible indices; a run touching both ends wraps around
    let mut runs: Vec<(usize, usize)> = Vec::new();
    let mut i = 0;
    while i < n {
        if flags[i] {
            let start = i;
            while i < n && flags[i] {
                i += 1;
            }
            runs.push((start, i - start));
        } else {
            i += 1;
        }
    }
    if runs.len() > 1 && flags[0] && flags[n - 1] {
        let (_, head_len) = runs.remove(0);
        let last = runs.last_mut().expect("at least one run left");
        last.1 += head_len;
    }
    let (start, len) = match runs.as_slice() {
        [] => {
            return Err(Error::IdentificationFailure(
                "no rotation satisfies the sign restrictions".into(),
            ))
        }
        [one] => *one,
        _ => {
            return Err(Error::IdentificationFailure(format!(
                "admissible set splits into {} arcs",
                runs.len()
            )))
        }
    };

    // unwrapped angles: indices past the end continue above 2π
    let unwrapped: Vec<T> = (start..start + len)
        .map(|idx| {
            if idx < n {
                T::from_usize_lossy(idx) * grid_step
            } else {
                T::from_usize_lossy(idx - n) * grid_step + two_pi
            }
        })
        .collect();
    let median = if len % 2 == 1 {
        unwrapped[len / 2]
    } else {
        (unwrapped[len / 2 - 1] + unwrapped[len / 2]) / T::lit(2.0)
    };
    let wrap = |a: T| if a >= two_pi { a - two_pi } else { a };
    let arc = AdmissibleArc {
        angles: unwrapped.iter().map(|&a| wrap(a)).collect(),
        median: wrap(median),
        width: T::from_usize_lossy(len) * grid_step,
    };
    Ok((arc, chol))
}

fn sample_covariance<T: Scalar>(a: &[T], b: &[T]) -> Matrix<T> {
    let n = T::from_usize_lossy(a.len());
    let ma = a.iter().copied().sum::<T>() / n;
    let mb = b.iter().copied().sum::<T>() / n;
    let (mut saa, mut sab, mut sbb) = (T::zero(), T::zero(), T::zero());
    for (&x, &y) in a.iter().zip(b) {
        let (dx, dy) = (x - ma, y - mb);
        saa = saa + dx * dx;
        sab = sab + dx * dy;
        sbb = sbb + dy * dy;
    }
    let d = n - T::one();
    Matrix::from_rows(&[vec![saa / d, sab / d], vec![sab / d, sbb / d]])
}

/// Median-rotation identification from per-event rate factor and stock
/// surprises.
pub fn identify_rotation_pairs<T: Scalar>(
    rate: &[T],
    stock: &[T],
    grid_step: T,
) -> Result<RotationResult<T>> {
    if rate.len() != stock.len() {
        return Err(Error::DegenerateInput("rate and stock lengths differ".into()));
    }
    if rate.len() < 3 {
        return Err(Error::DegenerateInput(format!(
            "need at least 3 events, got {}",
            rate.len()
        )));
    }
    let cov = sample_covariance(rate, stock);
    let (arc, chol) = identify_rotation_from_covariance(&cov, grid_step)?;
    let impact = chol.matmul(&rotation(arc.median));
    let inv = inverse_2x2(&impact)?;

    let mut structural = Vec::with_capacity(rate.len());
    let mut shocks = Vec::with_capacity(rate.len());
    for (&f, &s) in rate.iter().zip(stock) {
        let u = inv.mul_vec(&[f, s]);
        structural.push([u[0], u[1]]);
        shocks.push((impact[(0, 0)] * u[0], impact[(0, 1)] * u[1]));
    }

    Ok(RotationResult {
        theta_star: arc.median,
        admissible: arc.angles,
        arc_width: arc.width,
        grid_step,
        impact,
        covariance: cov,
        structural,
        shocks,
        factor: rate.to_vec(),
    })
}

/// Full pipeline: first principal component of the rate surprises, then the
/// median admissible rotation against the stock surprise.
pub fn identify_rotation<T: Scalar>(
    events: &[EventSurprise<T>],
    grid_step: T,
) -> Result<RotationResult<T>> {
    let pc = first_principal_component(events)?;
    let stock: Vec<T> = events.iter().map(|e| e.stock_surprise).collect();
    identify_rotation_pairs(&pc.scores, &stock, grid_step)
}
