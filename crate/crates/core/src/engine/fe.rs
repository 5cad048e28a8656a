use std::collections::BTreeMap;

use super::RegressionProblem;
use crate::linalg::Matrix;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct AbsorbSummary {
    /// Groups with at least two rows.
    pub groups: usize,
    /// Rows removed because their group had a single member.
    pub singletons_dropped: usize,
}

/// Dense group index per row plus group sizes, with groups numbered in
/// ascending id order.
fn index_groups(groups: &[u64]) -> (Vec<usize>, Vec<usize>) {
    let mut ids: BTreeMap<u64, usize> = BTreeMap::new();
    for &g in groups {
        ids.entry(g).or_insert(0);
    }
    for (dense, slot) in ids.values_mut().enumerate() {
        *slot = dense;
    }
    let mut sizes = vec![0usize; ids.len()];
    let idx: Vec<usize> = groups
        .iter()
        .map(|g| {
            let d = ids[g];
            sizes[d] += 1;
            d
        })
        .collect();
    (idx, sizes)
}

fn demean_indexed<T: Scalar>(values: &[T], idx: &[usize], sizes: &[usize]) -> Vec<T> {
    let mut sums = vec![T::zero(); sizes.len()];
    for (&v, &g) in values.iter().zip(idx) {
        sums[g] = sums[g] + v;
    }
    let means: Vec<T> = sums
        .iter()
        .zip(sizes)
        .map(|(&s, &n)| s / T::from_usize_lossy(n))
        .collect();
    values
        .iter()
        .zip(idx)
        .map(|(&v, &g)| if sizes[g] == 1 { T::zero() } else { v - means[g] })
        .collect()
}

/// Deviations from group means. Members of singleton groups map to zero.
pub fn demean_within_groups<T: Scalar>(values: &[T], groups: &[u64]) -> Vec<T> {
    let (idx, sizes) = index_groups(groups);
    demean_indexed(values, &idx, &sizes)
}

/// Within transformation of `y` and every column of `X` over the
/// fixed-effect groups. Singleton groups carry no identifying variation and
/// their rows are removed.
pub fn absorb_fixed_effects<T: Scalar>(prob: &RegressionProblem<T>) -> (RegressionProblem<T>, AbsorbSummary) {
    let (idx, sizes) = index_groups(&prob.fe_groups);
    let keep: Vec<usize> = (0..prob.n()).filter(|&i| sizes[idx[i]] > 1).collect();
    let summary = AbsorbSummary {
        groups: sizes.iter().filter(|&&s| s > 1).count(),
        singletons_dropped: prob.n() - keep.len(),
    };

    let y = demean_indexed(&prob.y, &idx, &sizes);
    let cols: Vec<Vec<T>> = prob
        .x
        .columns()
        .map(|c| demean_indexed(c, &idx, &sizes))
        .collect();
    let demeaned = RegressionProblem {
        y,
        x: Matrix::from_columns(prob.n(), &cols),
        names: prob.names.clone(),
        cluster_ids: prob.cluster_ids.clone(),
        fe_groups: prob.fe_groups.clone(),
        rows: prob.rows.clone(),
    };
    let out = if summary.singletons_dropped == 0 {
        demeaned
    } else {
        demeaned.select_rows(&keep)
    };
    (out, summary)
}
