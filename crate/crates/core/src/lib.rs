//! Sign-dependent local projections for panel data.
//!
//! The crate covers the full pipeline: loading an unbalanced country × month
//! panel, identifying monetary policy shocks from announcement surprises,
//! estimating horizon-by-horizon regressions with fixed effects and
//! date-clustered inference, mapping coefficients to tightening and easing
//! responses, and simulating panels with known responses for validation.
//!
//! Numerical kernels are generic over [`Scalar`] (`f32` or `f64`); the
//! aliases below fix the usual `f64` instantiation.

pub mod calendar;
pub mod engine;
pub mod error;
pub mod irf;
pub mod linalg;
pub mod panel;
pub mod scalar;
pub mod shock;
pub mod sim;

pub use calendar::{Month, MonthRange};
pub use error::{Error, ErrorKind, Result};
pub use scalar::Scalar;

pub type Matrix64 = linalg::Matrix<f64>;
pub type HorizonFit64 = engine::HorizonFit<f64>;
pub type RegressionProblem64 = engine::RegressionProblem<f64>;
pub type IrfSet64 = irf::IrfSet<f64>;
pub type RotationResult64 = shock::RotationResult<f64>;
pub type EventSurprise64 = shock::EventSurprise<f64>;
