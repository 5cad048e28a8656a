#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use signlp::engine::{RegressionProblem, RowId};
use signlp::linalg::Matrix;
use signlp::Month;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn normal(rng: &mut ChaCha8Rng) -> f64 {
    StandardNormal.sample(rng)
}

/// Gauss–Jordan inverse with partial pivoting on a dense row-major matrix.
pub fn invert(a: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { 1.0 } else { 0.0 }));
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n)
            .max_by(|&i, &j| m[i][c].abs().partial_cmp(&m[j][c].abs()).unwrap())
            .unwrap();
        m.swap(c, p);
        let d = m[c][c];
        assert!(d.abs() > 1e-300, "singular matrix in oracle");
        for v in m[c].iter_mut() {
            *v /= d;
        }
        for r in 0..n {
            if r != c {
                let f = m[r][c];
                if f != 0.0 {
                    for j in 0..2 * n {
                        m[r][j] -= f * m[c][j];
                    }
                }
            }
        }
    }
    m.into_iter().map(|r| r[n..].to_vec()).collect()
}

pub fn xtx(rows: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let k = rows[0].len();
    let mut out = vec![vec![0.0; k]; k];
    for r in rows {
        for a in 0..k {
            for b in 0..k {
                out[a][b] += r[a] * r[b];
            }
        }
    }
    out
}

pub fn matvec(a: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    a.iter().map(|r| r.iter().zip(v).map(|(x, y)| x * y).sum()).collect()
}

pub fn matmul(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let (n, m, p) = (a.len(), b.len(), b[0].len());
    let mut out = vec![vec![0.0; p]; n];
    for i in 0..n {
        for k in 0..m {
            for j in 0..p {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

/// `(XᵀX)⁻¹Xᵀy` by the normal equations.
pub fn normal_equations(rows: &[Vec<f64>], y: &[f64]) -> Vec<f64> {
    let k = rows[0].len();
    let mut xty = vec![0.0; k];
    for (r, &yi) in rows.iter().zip(y) {
        for j in 0..k {
            xty[j] += r[j] * yi;
        }
    }
    matvec(&invert(&xtx(rows)), &xty)
}

/// Clustered sandwich written directly from its definition.
pub fn direct_sandwich(rows: &[Vec<f64>], resid: &[f64], clusters: &[i64]) -> Vec<Vec<f64>> {
    let n = rows.len();
    let k = rows[0].len();
    let bread = invert(&xtx(rows));
    let mut ids: Vec<i64> = clusters.to_vec();
    ids.sort_unstable();
    ids.dedup();
    let g = ids.len();
    let mut meat = vec![vec![0.0; k]; k];
    for id in &ids {
        let mut s = vec![0.0; k];
        for i in 0..n {
            if clusters[i] == *id {
                for j in 0..k {
                    s[j] += rows[i][j] * resid[i];
                }
            }
        }
        for a in 0..k {
            for b in 0..k {
                meat[a][b] += s[a] * s[b];
            }
        }
    }
    let c = (g as f64 / (g as f64 - 1.0)) * ((n as f64 - 1.0) / (n as f64 - k as f64));
    let v = matmul(&matmul(&bread, &meat), &bread);
    v.into_iter().map(|r| r.into_iter().map(|x| c * x).collect()).collect()
}

pub struct Instance {
    pub rows: Vec<Vec<f64>>,
    pub y: Vec<f64>,
    pub clusters: Vec<i64>,
    pub groups: Vec<u64>,
}

/// Random regression with `k` regressors, `n_groups` fixed-effect groups and
/// `n_clusters` clusters.
pub fn random_instance(seed: u64, n: usize, k: usize, n_groups: u64, n_clusters: i64) -> Instance {
    let mut r = rng(seed);
    let effects: Vec<f64> = (0..n_groups).map(|_| 3.0 * normal(&mut r)).collect();
    let beta: Vec<f64> = (0..k).map(|_| normal(&mut r)).collect();
    let mut rows = Vec::with_capacity(n);
    let mut y = Vec::with_capacity(n);
    let mut clusters = Vec::with_capacity(n);
    let mut groups = Vec::with_capacity(n);
    for i in 0..n {
        let g = if (i as u64) < n_groups { i as u64 } else { r.random_range(0..n_groups) };
        let x: Vec<f64> = (0..k).map(|_| normal(&mut r) + 0.5 * effects[g as usize]).collect();
        let yi = effects[g as usize] + x.iter().zip(&beta).map(|(a, b)| a * b).sum::<f64>() + normal(&mut r);
        rows.push(x);
        y.push(yi);
        clusters.push(r.random_range(0..n_clusters));
        groups.push(g);
    }
    Instance {
        rows,
        y,
        clusters,
        groups,
    }
}

impl Instance {
    pub fn problem(&self) -> RegressionProblem<f64> {
        let n = self.y.len();
        let k = self.rows[0].len();
        let cols: Vec<Vec<f64>> = (0..k).map(|j| self.rows.iter().map(|r| r[j]).collect()).collect();
        let month = Month::new(2000, 1).unwrap();
        RegressionProblem::new(
            self.y.clone(),
            Matrix::from_columns(n, &cols),
            (0..k).map(|j| format!("x{j}")).collect(),
            self.clusters.clone(),
            self.groups.clone(),
            (0..n)
                .map(|i| RowId {
                    country: 0,
                    t: month.offset(i as i32),
                    h: 0,
                })
                .collect(),
        )
        .unwrap()
    }
}

pub fn max_abs(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

pub fn max_abs_mat(a: &Matrix<f64>, b: &[Vec<f64>]) -> f64 {
    let mut m: f64 = 0.0;
    for (i, row) in b.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            m = m.max((a[(i, j)] - v).abs());
        }
    }
    m
}
