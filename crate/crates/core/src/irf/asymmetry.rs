use statrs::distribution::{ContinuousCDF, Normal};

use crate::engine::HorizonFit;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymmetryTest {
    pub h: usize,
    pub estimate: f64,
    pub se: f64,
    pub z: f64,
    pub p_value: f64,
}

impl AsymmetryTest {
    pub fn from_estimate(h: usize, estimate: f64, se: f64) -> Result<Self> {
        if !(se > 0.0) {
            return Err(Error::DegenerateTest(format!(
                "standard error of |shock| coefficient is {se} at h={h}"
            )));
        }
        let z = estimate / se;
        let p_value = 2.0 * Normal::standard().sf(z.abs());
        Ok(Self {
            h,
            estimate,
            se,
            z,
            p_value: p_value.min(1.0),
        })
    }

    pub fn rejects(&self, alpha: f64) -> bool {
        self.p_value < alpha
    }
}

/// Wald z-test of `H₀: β_abs = 0` on an abs-sign fit.
pub fn test_asymmetry<T: Scalar>(fit: &HorizonFit<T>) -> Result<AsymmetryTest> {
    let est = fit.coefficient("abs_shock").ok_or_else(|| Error::MissingCoefficient {
        name: "abs_shock".into(),
        reason: "asymmetry test needs an abs-sign fit".into(),
    })?;
    let se = fit.std_error("abs_shock").expect("coefficient present");
    AsymmetryTest::from_estimate(fit.h, est.as_f64(), se.as_f64())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_estimate() {
        let t = AsymmetryTest::from_estimate(0, 0.0, 0.5).unwrap();
        assert_eq!(t.z, 0.0);
        assert!((t.p_value - 1.0).abs() < 1e-15);
    }

    #[test]
    fn at_critical_value() {
        let t = AsymmetryTest::from_estimate(3, 1.96 * 0.2, 0.2).unwrap();
        assert!((t.p_value - 0.05).abs() < 1e-3);
    }

    #[test]
    fn zero_se_is_degenerate() {
        assert!(matches!(
            AsymmetryTest::from_estimate(0, 1.0, 0.0),
            Err(Error::DegenerateTest(_))
        ));
    }
}
