mod common;

use common::*;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use signlp::engine::{fit_problem, solve_ols};
use signlp::linalg::{symmetric_eigen, Matrix};

#[test]
fn within_transformation_matches_dummy_regression() {
    for seed in 0..100u64 {
        let mut r = rng(1000 + seed);
        use rand::Rng;
        let k = r.random_range(1..=4);
        let groups = r.random_range(2..=10u64);
        let n = r.random_range((k + groups as usize + 5).max(20)..=200);
        let inst = random_instance(seed, n, k, groups, 15);
        let fit = fit_problem(&inst.problem(), 0, true).unwrap();

        let dummies: Vec<Vec<f64>> = inst
            .rows
            .iter()
            .zip(&inst.groups)
            .map(|(x, &g)| {
                let mut row = x.clone();
                row.extend((0..groups).map(|j| if j == g { 1.0 } else { 0.0 }));
                row
            })
            .collect();
        let full = normal_equations(&dummies, &inst.y);
        let d = max_abs(&fit.coefficients, &full[..k]);
        assert!(d <= 1e-8, "seed {seed}: deviation {d:e}");
    }
}

#[test]
fn qr_matches_normal_equations() {
    let inst = random_instance(7, 50, 4, 1, 10);
    let sol = solve_ols(&inst.problem()).unwrap();
    let ne = normal_equations(&inst.rows, &inst.y);
    assert!(max_abs(&sol.coefficients, &ne) <= 1e-8);
}

#[test]
fn cluster_sandwich_matches_direct_formula() {
    for seed in 0..50u64 {
        let mut r = rng(5000 + seed);
        use rand::Rng;
        let k = r.random_range(1..=4);
        let g = r.random_range(2..=20i64);
        let n = r.random_range(30..=150);
        let inst = random_instance(seed, n, k, 1, g);
        let ids: std::collections::BTreeSet<i64> = inst.clusters.iter().copied().collect();
        if ids.len() < 2 {
            continue;
        }
        let fit = fit_problem(&inst.problem(), 0, false).unwrap();
        let beta = normal_equations(&inst.rows, &inst.y);
        let resid: Vec<f64> = inst
            .rows
            .iter()
            .zip(&inst.y)
            .map(|(x, y)| y - x.iter().zip(&beta).map(|(a, b)| a * b).sum::<f64>())
            .collect();
        let direct = direct_sandwich(&inst.rows, &resid, &inst.clusters);
        let d = max_abs_mat(&fit.covariance, &direct);
        assert!(d <= 1e-10, "seed {seed}: deviation {d:e}");
        assert_eq!(fit.n_clusters, ids.len());
    }
}

#[test]
fn twelve_rows_three_clusters() {
    let mut inst = random_instance(42, 12, 2, 1, 3);
    inst.clusters = (0..12).map(|i| i / 4).collect();
    let fit = fit_problem(&inst.problem(), 0, false).unwrap();
    let beta = normal_equations(&inst.rows, &inst.y);
    let resid: Vec<f64> = inst
        .rows
        .iter()
        .zip(&inst.y)
        .map(|(x, y)| y - x.iter().zip(&beta).map(|(a, b)| a * b).sum::<f64>())
        .collect();
    assert!(max_abs_mat(&fit.covariance, &direct_sandwich(&inst.rows, &resid, &inst.clusters)) <= 1e-12);
}

#[test]
fn singleton_clusters_equal_hc1() {
    let mut inst = random_instance(3, 80, 3, 1, 1);
    inst.clusters = (0..80).collect();
    let fit = fit_problem(&inst.problem(), 0, false).unwrap();
    let (n, k) = (80.0, 3.0);
    let beta = normal_equations(&inst.rows, &inst.y);
    let bread = invert(&xtx(&inst.rows));
    let mut meat = vec![vec![0.0; 3]; 3];
    for (x, y) in inst.rows.iter().zip(&inst.y) {
        let e = y - x.iter().zip(&beta).map(|(a, b)| a * b).sum::<f64>();
        for a in 0..3 {
            for b in 0..3 {
                meat[a][b] += x[a] * x[b] * e * e;
            }
        }
    }
    let hc1: Vec<Vec<f64>> = matmul(&matmul(&bread, &meat), &bread)
        .into_iter()
        .map(|r| r.into_iter().map(|v| v * n / (n - k)).collect())
        .collect();
    assert!(max_abs_mat(&fit.covariance, &hc1) <= 1e-10);
}

#[test]
fn duplicated_clusters_rescale_covariance() {
    let inst = random_instance(11, 60, 2, 1, 6);
    let base = fit_problem(&inst.problem(), 0, false).unwrap();
    let mut dup = random_instance(11, 60, 2, 1, 6);
    dup.rows.extend(inst.rows.iter().cloned());
    dup.y.extend(inst.y.iter().copied());
    dup.clusters.extend(inst.clusters.iter().map(|c| c + 1000));
    dup.groups.extend(inst.groups.iter().copied());
    let twice = fit_problem(&dup.problem(), 0, false).unwrap();

    assert!(max_abs(&base.coefficients, &twice.coefficients) <= 1e-12);
    let (g, n, k) = (base.n_clusters as f64, 60.0, 2.0);
    let c1 = g / (g - 1.0) * (n - 1.0) / (n - k);
    let c2 = 2.0 * g / (2.0 * g - 1.0) * (2.0 * n - 1.0) / (2.0 * n - k);
    // bread halves, meat doubles
    let predicted = base.covariance.scale(c2 / c1 / 2.0);
    assert!(twice.covariance.max_abs_diff(&predicted) <= 1e-12);
}

#[test]
fn f32_instantiation_tracks_f64() {
    let inst = random_instance(21, 120, 3, 6, 12);
    let p64 = inst.problem();
    let p32 = signlp::engine::RegressionProblem::new(
        p64.y.iter().map(|&v| v as f32).collect(),
        p64.x.map(|v| v as f32),
        p64.names.clone(),
        p64.cluster_ids.clone(),
        p64.fe_groups.clone(),
        p64.rows.clone(),
    )
    .unwrap();
    let a = fit_problem(&p64, 0, true).unwrap();
    let b = fit_problem(&p32, 0, true).unwrap();
    for (x, y) in a.coefficients.iter().zip(&b.coefficients) {
        assert!((x - *y as f64).abs() < 1e-3);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn covariance_symmetric_psd(seed in any::<u64>(), k in 1usize..5, fe in any::<bool>()) {
        let inst = random_instance(seed, 90, k, 6, 12);
        let fit = fit_problem(&inst.problem(), 0, fe).unwrap();
        let v = &fit.covariance;
        prop_assert!(v.max_abs_diff(&v.transpose()) <= 1e-12);
        let (vals, _) = symmetric_eigen(v);
        let floor = -1e-8 * v.trace();
        prop_assert!(vals.iter().all(|&e| e >= floor));
    }

    #[test]
    fn row_permutation_invariance(seed in any::<u64>(), fe in any::<bool>()) {
        let inst = random_instance(seed, 80, 3, 5, 10);
        let prob = inst.problem();
        let mut idx: Vec<usize> = (0..prob.n()).collect();
        idx.shuffle(&mut rng(seed ^ 0x5eed));
        let a = fit_problem(&prob, 0, fe).unwrap();
        let b = fit_problem(&prob.select_rows(&idx), 0, fe).unwrap();
        prop_assert!(max_abs(&a.coefficients, &b.coefficients) <= 1e-10);
        prop_assert!(a.covariance.max_abs_diff(&b.covariance) <= 1e-10);
    }

    #[test]
    fn column_scaling_equivariance(seed in any::<u64>(), j in 0usize..3, c in prop_oneof![0.01f64..0.5, 2.0f64..50.0]) {
        let inst = random_instance(seed, 80, 3, 5, 10);
        let prob = inst.problem();
        let mut scaled = prob.clone();
        for v in scaled.x.column_mut(j) {
            *v *= c;
        }
        let a = fit_problem(&prob, 0, true).unwrap();
        let b = fit_problem(&scaled, 0, true).unwrap();
        for i in 0..3 {
            let expect = if i == j { a.coefficients[i] / c } else { a.coefficients[i] };
            prop_assert!((b.coefficients[i] - expect).abs() <= 1e-10 * (1.0 + expect.abs()));
        }
        let vjj = a.covariance[(j, j)] / (c * c);
        prop_assert!((b.covariance[(j, j)] - vjj).abs() <= 1e-10 * (1.0 + vjj));
        prop_assert!(max_abs(&a.fitted, &b.fitted) <= 1e-10);
    }
}

#[test]
fn degenerate_design_fails_softly() {
    let mut inst = random_instance(2, 40, 2, 1, 5);
    for r in &mut inst.rows {
        r[1] = 2.0 * r[0];
    }
    let fit = fit_problem(&inst.problem(), 0, false).unwrap();
    assert_eq!(fit.dropped_columns.len(), 1);
    assert_eq!(fit.coefficients.len(), 1);
    let zero = Matrix::<f64>::zeros(40, 1);
    let mut p = random_instance(2, 40, 1, 1, 5).problem();
    p.x = zero;
    assert!(fit_problem(&p, 0, false).is_err());
}
