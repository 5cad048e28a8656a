use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct ClusterCovariance<T> {
    pub matrix: Matrix<T>,
    pub n_clusters: usize,
    /// Small-sample factor `G/(G−1) · (n−1)/(n−K)`.
    pub correction: T,
}

/// Cluster-robust sandwich
/// `V = c · (XᵀX)⁻¹ (Σ_g X_gᵀ u_g u_gᵀ X_g) (XᵀX)⁻¹`
/// with `c = G/(G−1) · (n−1)/(n−K)` and `K = X.ncols()`.
///
/// Clusters are visited in ascending id order so the result does not depend
/// on hash state.
pub fn cluster_covariance<T: Scalar>(
    x: &Matrix<T>,
    residuals: &[T],
    xtx_inv: &Matrix<T>,
    cluster_ids: &[i64],
) -> Result<ClusterCovariance<T>> {
    let n = x.nrows();
    let k = x.ncols();
    assert_eq!(residuals.len(), n);
    assert_eq!(cluster_ids.len(), n);
    assert_eq!((xtx_inv.nrows(), xtx_inv.ncols()), (k, k));

    let mut dense: BTreeMap<i64, usize> = BTreeMap::new();
    for &c in cluster_ids {
        dense.entry(c).or_insert(0);
    }
    for (i, v) in dense.values_mut().enumerate() {
        *v = i;
    }
    let g = dense.len();
    if g < 2 {
        return Err(Error::Inference(format!(
            "clustered covariance needs at least 2 clusters, got {g}"
        )));
    }
    if n <= k {
        return Err(Error::Inference(format!("{n} rows for {k} columns")));
    }
    let idx: Vec<usize> = cluster_ids.iter().map(|c| dense[c]).collect();

    // per-cluster scores s_g = X_gᵀ u_g, stored cluster-major
    let mut scores = vec![T::zero(); g * k];
    for j in 0..k {
        let col = x.column(j);
        for i in 0..n {
            let s = &mut scores[idx[i] * k + j];
            *s = *s + col[i] * residuals[i];
        }
    }
    let mut meat = Matrix::zeros(k, k);
    for s in scores.chunks_exact(k) {
        for a in 0..k {
            for b in a..k {
                meat[(a, b)] = meat[(a, b)] + s[a] * s[b];
            }
        }
    }
    for a in 0..k {
        for b in 0..a {
            meat[(a, b)] = meat[(b, a)];
        }
    }

    let gf = T::from_usize_lossy(g);
    let nf = T::from_usize_lossy(n);
    let kf = T::from_usize_lossy(k);
    let correction = gf / (gf - T::one()) * ((nf - T::one()) / (nf - kf));
    let v = xtx_inv.matmul(&meat).matmul(xtx_inv).scale(correction);
    let mut sym = v.clone();
    for a in 0..k {
        for b in 0..k {
            sym[(a, b)] = (v[(a, b)] + v[(b, a)]) / T::lit(2.0);
        }
    }
    Ok(ClusterCovariance {
        matrix: sym,
        n_clusters: g,
        correction,
    })
}
