//! Per-horizon panel regressions: fixed-effect absorption, rank-revealing
//! least squares and date-clustered sandwich covariance.

mod cluster;
mod fe;
mod ols;
mod projection;

use std::collections::BTreeSet;

use serde::Serialize;

use crate::calendar::Month;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

pub use cluster::{cluster_covariance, ClusterCovariance};
pub use fe::{absorb_fixed_effects, demean_within_groups, AbsorbSummary};
pub use ols::{solve_ols, OlsSolution, COLLINEARITY_TOL};
pub use projection::{run_horizon, LocalProjection};

/// Provenance of one regression row: country index, shock date and horizon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct RowId {
    pub country: u32,
    pub t: Month,
    pub h: usize,
}

/// One stacked least-squares problem.
#[derive(Debug, Clone, PartialEq)]
pub struct RegressionProblem<T> {
    pub y: Vec<T>,
    pub x: Matrix<T>,
    pub names: Vec<String>,
    /// Time cluster per row (month index of the shock date).
    pub cluster_ids: Vec<i64>,
    /// Country × calendar-month group per row.
    pub fe_groups: Vec<u64>,
    pub rows: Vec<RowId>,
}

impl<T: Scalar> RegressionProblem<T> {
    pub fn new(
        y: Vec<T>,
        x: Matrix<T>,
        names: Vec<String>,
        cluster_ids: Vec<i64>,
        fe_groups: Vec<u64>,
        rows: Vec<RowId>,
    ) -> Result<Self> {
        let n = y.len();
        if n == 0 {
            return Err(Error::DegenerateDesign("empty regression".into()));
        }
        if x.nrows() != n || cluster_ids.len() != n || fe_groups.len() != n || rows.len() != n {
            return Err(Error::DegenerateDesign("regression inputs differ in length".into()));
        }
        if names.len() != x.ncols() {
            return Err(Error::DegenerateDesign("column name count mismatch".into()));
        }
        let unique: BTreeSet<&str> = names.iter().map(String::as_str).collect();
        if unique.len() != names.len() {
            return Err(Error::DegenerateDesign("duplicate column names".into()));
        }
        Ok(Self {
            y,
            x,
            names,
            cluster_ids,
            fe_groups,
            rows,
        })
    }

    pub fn n(&self) -> usize {
        self.y.len()
    }

    /// Keeps the listed rows in order.
    pub fn select_rows(&self, idx: &[usize]) -> Self {
        Self {
            y: idx.iter().map(|&i| self.y[i]).collect(),
            x: self.x.select_rows(idx),
            names: self.names.clone(),
            cluster_ids: idx.iter().map(|&i| self.cluster_ids[i]).collect(),
            fe_groups: idx.iter().map(|&i| self.fe_groups[i]).collect(),
            rows: idx.iter().map(|&i| self.rows[i]).collect(),
        }
    }
}

/// Estimates for one horizon.
#[derive(Debug, Clone, PartialEq)]
pub struct HorizonFit<T> {
    pub h: usize,
    /// Names of retained columns, in design order.
    pub names: Vec<String>,
    pub coefficients: Vec<T>,
    /// Cluster-robust covariance, ordered like `coefficients`.
    pub covariance: Matrix<T>,
    pub n_obs: usize,
    pub n_clusters: usize,
    pub dropped_columns: Vec<String>,
    /// Absorbed fixed-effect groups (0 when absorption is off).
    pub n_fe_groups: usize,
    pub n_singletons_dropped: usize,
    pub fitted: Vec<T>,
}

impl<T: Scalar> HorizonFit<T> {
    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn coefficient(&self, name: &str) -> Option<T> {
        self.index_of(name).map(|i| self.coefficients[i])
    }

    pub fn std_error(&self, name: &str) -> Option<T> {
        self.index_of(name)
            .map(|i| self.covariance[(i, i)].max(T::zero()).sqrt())
    }

    /// JSON-ready view with `f64` numbers.
    pub fn export(&self) -> FitExport {
        FitExport {
            h: self.h,
            coefficients: self
                .names
                .iter()
                .zip(&self.coefficients)
                .map(|(n, &v)| NamedValue {
                    name: n.clone(),
                    estimate: v.as_f64(),
                })
                .collect(),
            covariance: self
                .covariance
                .to_rows()
                .into_iter()
                .map(|r| r.into_iter().map(Scalar::as_f64).collect())
                .collect(),
            n_obs: self.n_obs,
            n_clusters: self.n_clusters,
            dropped_columns: self.dropped_columns.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NamedValue {
    pub name: String,
    pub estimate: f64,
}

/// Per-fit JSON record.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitExport {
    pub h: usize,
    pub coefficients: Vec<NamedValue>,
    pub covariance: Vec<Vec<f64>>,
    pub n_obs: usize,
    pub n_clusters: usize,
    pub dropped_columns: Vec<String>,
}

/// Estimates an already assembled problem: optional absorption, OLS and the
/// clustered covariance.
pub fn fit_problem<T: Scalar>(prob: &RegressionProblem<T>, h: usize, absorb: bool) -> Result<HorizonFit<T>> {
    let (prob, summary) = if absorb {
        let (p, s) = absorb_fixed_effects(prob);
        (p, s)
    } else {
        (prob.clone(), AbsorbSummary::default())
    };
    let k = prob.x.ncols();
    if prob.n() < k + 1 {
        return Err(Error::InsufficientSample {
            h,
            rows: prob.n(),
            columns: k,
        });
    }
    let sol = solve_ols(&prob)?;
    let retained_x = prob.x.select_columns(&sol.retained);
    let cov = cluster_covariance(&retained_x, &sol.residuals, &sol.xtx_inv, &prob.cluster_ids)?;
    let fitted = prob.y.iter().zip(&sol.residuals).map(|(&y, &e)| y - e).collect();
    Ok(HorizonFit {
        h,
        names: sol.retained.iter().map(|&j| prob.names[j].clone()).collect(),
        coefficients: sol.coefficients,
        covariance: cov.matrix,
        n_obs: prob.n(),
        n_clusters: cov.n_clusters,
        dropped_columns: sol.dropped.iter().map(|&j| prob.names[j].clone()).collect(),
        n_fe_groups: summary.groups,
        n_singletons_dropped: summary.singletons_dropped,
        fitted,
    })
}
