use super::EventSurprise;
use crate::error::{Error, Result};
use crate::linalg::{symmetric_eigen, Matrix};
use crate::scalar::Scalar;

/// Leading principal component of the rate-surprise matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct PrincipalComponent<T> {
    /// Unit-norm loading, one entry per maturity, mean entry positive.
    pub loading: Vec<T>,
    /// Per-event factor scores, `centered data × loading`.
    pub scores: Vec<T>,
    pub eigenvalue: T,
    pub column_means: Vec<T>,
}

/// Extracts the first principal component of the (demeaned, unscaled) rate
/// surprises.
pub fn first_principal_component<T: Scalar>(
    events: &[EventSurprise<T>],
) -> Result<PrincipalComponent<T>> {
    let n = events.len();
    if n < 2 {
        return Err(Error::DegenerateInput(format!("need at least 2 events, got {n}")));
    }
    let k = events[0].rate_surprises.len();
    if k == 0 {
        return Err(Error::DegenerateInput("no maturity columns".into()));
    }
    if events.iter().any(|e| e.rate_surprises.len() != k) {
        return Err(Error::DegenerateInput("events disagree on maturity count".into()));
    }

    let nf = T::from_usize_lossy(n);
    let means: Vec<T> = (0..k)
        .map(|j| events.iter().map(|e| e.rate_surprises[j]).sum::<T>() / nf)
        .collect();
    let centered: Vec<Vec<T>> = (0..k)
        .map(|j| events.iter().map(|e| e.rate_surprises[j] - means[j]).collect())
        .collect();
    let data = Matrix::from_columns(n, &centered);
    let cov = data.gram().scale(T::one() / T::from_usize_lossy(n - 1));

    let (values, vectors) = symmetric_eigen(&cov);
    let lead = values[0];
    let scale = cov.trace();
    if !(lead > T::zero()) || !(scale > T::zero()) {
        return Err(Error::DegenerateInput("rate surprises have zero variance".into()));
    }

    let mut loading = vectors.column(0).to_vec();
    let norm = loading.iter().map(|&v| v * v).sum::<T>().sqrt();
    for v in &mut loading {
        *v = *v / norm;
    }
    let total: T = loading.iter().copied().sum();
    let flip = if total != T::zero() {
        total < T::zero()
    } else {
        loading.iter().find(|v| **v != T::zero()).is_some_and(|v| *v < T::zero())
    };
    if flip {
        for v in &mut loading {
            *v = -*v;
        }
    }

    let scores = data.mul_vec(&loading);
    Ok(PrincipalComponent {
        loading,
        scores,
        eigenvalue: lead,
        column_means: means,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use chrono::NaiveDate;

    fn ev(rates: &[f64]) -> EventSurprise<f64> {
        EventSurprise::new(NaiveDate::from_ymd_opt(2010, 1, 1).unwrap(), rates.to_vec(), 0.0).unwrap()
    }

    #[test]
    fn identical_columns_load_equally() {
        let events: Vec<_> = [0.1, -0.3, 0.25, 0.05].iter().map(|&r| ev(&[r, r])).collect();
        let pc = first_principal_component(&events).unwrap();
        let h = 0.5f64.sqrt();
        assert!((pc.loading[0] - h).abs() < 1e-12);
        assert!((pc.loading[1] - h).abs() < 1e-12);
    }

    #[test]
    fn single_column_scores_are_centered_column() {
        let raw = [0.1, -0.3, 0.25, 0.05];
        let events: Vec<_> = raw.iter().map(|&r| ev(&[r])).collect();
        let pc = first_principal_component(&events).unwrap();
        assert_eq!(pc.loading, vec![1.0]);
        let mean = raw.iter().sum::<f64>() / 4.0;
        for (s, r) in pc.scores.iter().zip(raw) {
            assert!((s - (r - mean)).abs() < 1e-15);
        }
    }

    #[test]
    fn three_by_two_matches_closed_form() {
        // closed-form leading eigenvector of [[a, b], [b, c]]:
        // λ = (a+c)/2 + sqrt(((a-c)/2)² + b²), v ∝ (b, λ - a)
        let rows = [[1.0, 0.0], [0.0, 1.0], [-1.0, -1.0]];
        let events: Vec<_> = rows.iter().map(|r| ev(r)).collect();
        let pc = first_principal_component(&events).unwrap();

        // columns already have zero mean
        let (mut a, mut b, mut c) = (0.0, 0.0, 0.0);
        for r in &rows {
            a += r[0] * r[0];
            b += r[0] * r[1];
            c += r[1] * r[1];
        }
        let (a, b, c) = (a / 2.0, b / 2.0, c / 2.0);
        let lam = (a + c) / 2.0 + (((a - c) / 2.0).powi(2) + b * b).sqrt();
        let (v0, v1) = (b, lam - a);
        let nv = (v0 * v0 + v1 * v1).sqrt();
        let (v0, v1) = if v0 + v1 < 0.0 { (-v0 / nv, -v1 / nv) } else { (v0 / nv, v1 / nv) };

        assert!((pc.eigenvalue - lam).abs() < 1e-12);
        assert!((pc.loading[0] - v0).abs() < 1e-12);
        assert!((pc.loading[1] - v1).abs() < 1e-12);
        for (s, r) in pc.scores.iter().zip(&rows) {
            assert!((s - (r[0] * v0 + r[1] * v1)).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_variance_is_degenerate() {
        let events: Vec<_> = (0..4).map(|_| ev(&[0.2, 0.1])).collect();
        assert!(matches!(
            first_principal_component(&events),
            Err(Error::DegenerateInput(_))
        ));
        assert!(first_principal_component(&events[..1]).is_err());
    }
}
