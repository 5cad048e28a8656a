use serde::Serialize;

use super::{first_principal_component, EventSurprise};
use crate::error::Result;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    /// Rate and stock moved in opposite directions.
    Policy,
    /// Rate and stock moved in the same direction.
    Information,
    /// One of the surprises is exactly zero.
    Zero,
}

/// Classifies one event by the sign of `rate × stock`, returning the
/// `(mp, info)` split of the rate surprise.
pub fn classify_pair<T: Scalar>(rate: T, stock: T) -> (Classification, T, T) {
    let prod = rate * stock;
    if prod < T::zero() {
        (Classification::Policy, rate, T::zero())
    } else if prod > T::zero() {
        (Classification::Information, T::zero(), rate)
    } else {
        (Classification::Zero, T::zero(), T::zero())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PoorManResult<T> {
    pub mp: Vec<T>,
    pub info: Vec<T>,
    pub classes: Vec<Classification>,
    /// Scalar rate surprise used per event.
    pub rate: Vec<T>,
}

impl<T> PoorManResult<T> {
    pub fn count(&self, class: Classification) -> usize {
        self.classes.iter().filter(|&&c| c == class).count()
    }
}

/// Event-level sign classification. The scalar rate surprise is the single
/// maturity when only one is present, otherwise the first principal
/// component score.
pub fn poor_mans_classify<T: Scalar>(events: &[EventSurprise<T>]) -> Result<PoorManResult<T>> {
    let single = events.iter().all(|e| e.rate_surprises.len() == 1);
    let rate: Vec<T> = if single {
        events.iter().map(|e| e.rate_surprises[0]).collect()
    } else {
        first_principal_component(events)?.scores
    };
    let mut out = PoorManResult {
        mp: Vec::with_capacity(events.len()),
        info: Vec::with_capacity(events.len()),
        classes: Vec::with_capacity(events.len()),
        rate: rate.clone(),
    };
    for (r, e) in rate.iter().zip(events) {
        let (c, mp, info) = classify_pair(*r, e.stock_surprise);
        out.mp.push(mp);
        out.info.push(info);
        out.classes.push(c);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use chrono::NaiveDate;

    #[test]
    fn opposite_signs_are_policy() {
        assert_eq!(classify_pair(0.05, -0.30), (Classification::Policy, 0.05, 0.0));
    }

    #[test]
    fn same_signs_are_information() {
        assert_eq!(classify_pair(0.05, 0.30), (Classification::Information, 0.0, 0.05));
        assert_eq!(classify_pair(-0.05, -0.30), (Classification::Information, 0.0, -0.05));
    }

    #[test]
    fn zero_surprise_is_zero() {
        assert_eq!(classify_pair(0.0, -0.3), (Classification::Zero, 0.0, 0.0));
        assert_eq!(classify_pair(0.1, 0.0), (Classification::Zero, 0.0, 0.0));
    }

    #[test]
    fn counts_sum_to_events() {
        let d = NaiveDate::from_ymd_opt(2010, 1, 5).unwrap();
        let events = vec![
            EventSurprise::new(d, vec![0.05], -0.3).unwrap(),
            EventSurprise::new(d, vec![0.05], 0.3).unwrap(),
            EventSurprise::new(d, vec![0.0], 0.3).unwrap(),
        ];
        let r = poor_mans_classify(&events).unwrap();
        let total = r.count(Classification::Policy)
            + r.count(Classification::Information)
            + r.count(Classification::Zero);
        assert_eq!(total, 3);
        assert_eq!(r.mp, vec![0.05, 0.0, 0.0]);
        assert_eq!(r.info, vec![0.0, 0.05, 0.0]);
    }
}
