use proptest::prelude::*;
use signlp::panel::{
    build_lagged_controls, read_panel, write_panel_csv, Observation, PanelDataset, Role, SeriesKey, Transform,
    VariableDecl, GLOBAL_COUNTRY,
};
use signlp::Month;

fn schema() -> Vec<VariableDecl> {
    vec![
        VariableDecl::new("ip", Transform::LogTimes100, Role::Outcome),
        VariableDecl::new("rate", Transform::DiffLevel, Role::Control),
        VariableDecl::new("vix", Transform::Level, Role::GlobalControl),
    ]
}

/// `(country index, variable index, month offset, value)` cells; duplicates
/// keep the first draw.
fn cells() -> impl Strategy<Value = Vec<(usize, usize, i32, f64)>> {
    proptest::collection::vec((0usize..4, 0usize..3, 0i32..40, 0.001f64..1e6), 1..150)
}

fn build(cells: &[(usize, usize, i32, f64)]) -> PanelDataset {
    let decls = schema();
    let mut ds = PanelDataset::new(decls.clone()).unwrap();
    let start = Month::new(1999, 11).unwrap();
    for &(c, v, t, x) in cells {
        let var = &decls[v];
        let country = if var.role == Role::GlobalControl {
            GLOBAL_COUNTRY.to_string()
        } else {
            format!("K{c}")
        };
        let obs = Observation {
            key: SeriesKey::new(country, var.name.clone()).unwrap(),
            date: start.offset(t),
            value: x,
        };
        let _ = ds.insert(obs);
    }
    ds
}

fn snapshot(ds: &PanelDataset) -> Vec<(SeriesKey, Month, u64)> {
    ds.observations().map(|o| (o.key, o.date, o.value.to_bits())).collect()
}

proptest! {
    #[test]
    fn csv_roundtrip_is_bit_exact(cells in cells()) {
        let ds = build(&cells);
        let mut first = Vec::new();
        write_panel_csv(&ds, &mut first).unwrap();
        let (back, report) = read_panel(first.as_slice(), schema()).unwrap();
        prop_assert_eq!(report.rows_dropped, 0);
        prop_assert_eq!(snapshot(&ds), snapshot(&back));
        let mut second = Vec::new();
        write_panel_csv(&back, &mut second).unwrap();
        prop_assert_eq!(first, second);
    }

    #[test]
    fn log_transform_inverts(cells in cells()) {
        let ds = build(&cells);
        let logged = ds.apply_transform("ip").unwrap();
        for o in ds.observations().filter(|o| o.key.variable == "ip") {
            let v = logged.get(&o.key.country, "ip", o.date).unwrap();
            let rel = ((v / 100.0).exp() - o.value).abs() / o.value;
            prop_assert!(rel <= 1e-12, "{} vs {}", v, o.value);
        }
    }

    #[test]
    fn transforms_preserve_counts_except_differencing(cells in cells()) {
        let ds = build(&cells);
        let all = ds.apply_all_transforms().unwrap();
        let count = |d: &PanelDataset, var: &str| {
            let mut m = std::collections::BTreeMap::new();
            for o in d.observations().filter(|o| o.key.variable == var) {
                *m.entry(o.key.country).or_insert(0usize) += 1;
            }
            m
        };
        prop_assert_eq!(count(&ds, "ip"), count(&all, "ip"));
        prop_assert_eq!(count(&ds, "vix"), count(&all, "vix"));
        let before = count(&ds, "rate");
        let after = count(&all, "rate");
        for (c, n) in before {
            prop_assert_eq!(after.get(&c).copied().unwrap_or(0), n - 1);
        }
    }

    #[test]
    fn lag_rows_ignore_current_and_future_values(cells in cells(), pick in 0usize..150, bump in 1.0f64..100.0) {
        let ds = build(&cells);
        let vars = vec!["ip".to_string(), "rate".to_string(), "vix".to_string()];
        let block = build_lagged_controls(&ds, &vars, 3).unwrap();
        let obs: Vec<Observation> = ds.observations().collect();
        let target = &obs[pick % obs.len()];

        let mut shifted = PanelDataset::new(schema()).unwrap();
        for o in &obs {
            let mut o = o.clone();
            if o.key == target.key && o.date == target.date {
                o.value += bump;
            }
            shifted.insert(o).unwrap();
        }
        let moved = build_lagged_controls(&shifted, &vars, 3).unwrap();
        for country in block.countries() {
            if target.key.country != GLOBAL_COUNTRY && &target.key.country != country {
                continue;
            }
            for t in block.range().iter().filter(|&t| t <= target.date) {
                prop_assert_eq!(block.row(country, t), moved.row(country, t));
            }
        }
    }
}

#[test]
fn lag_row_layout() {
    let mut ds = PanelDataset::new(schema()).unwrap();
    let m = Month::new(2001, 1).unwrap();
    for k in 0..5 {
        ds.insert(Observation {
            key: SeriesKey::new("K0", "ip").unwrap(),
            date: m.offset(k),
            value: 10.0 + k as f64,
        })
        .unwrap();
        ds.insert(Observation {
            key: SeriesKey::new(GLOBAL_COUNTRY, "vix").unwrap(),
            date: m.offset(k),
            value: 100.0 + k as f64,
        })
        .unwrap();
    }
    let block = build_lagged_controls(&ds, &["ip".into(), "vix".into()], 2).unwrap();
    assert_eq!(block.names(), ["ip_l1", "ip_l2", "vix_l1", "vix_l2"]);
    assert_eq!(block.row("K0", m.offset(3)).unwrap(), [12.0, 11.0, 102.0, 101.0]);
    assert!(block.row("K0", m.offset(1)).is_none());
}
