use modelgb::harness::{
    csv_string, parse_csv, plotdata_string, point_seed, run_sweep, run_trials, summarize,
    ExperimentConfig, Measures, SummaryRow, CSV_HEADER,
};
use modelgb::Params;
use proptest::prelude::*;

fn config(trials: u64, seed: u64) -> ExperimentConfig {
    ExperimentConfig {
        n: 8,
        d: 3,
        k: 2,
        q: 2,
        t_grid: vec![4, 8, 16],
        r_grid: vec![],
        trials,
        master_seed: seed,
        measures: Measures {
            nodes: true,
            sat: true,
            uc: true,
        },
        out: None,
    }
}

#[test]
fn split_trial_ranges_give_the_same_records() {
    let params = Params::new(8, 3, 2, 8, 2).validate().unwrap();
    let all = Measures {
        nodes: true,
        sat: true,
        uc: true,
    };
    let seed = point_seed(5, 8);
    let whole = run_trials(&params, seed, 0..300, all).unwrap();
    let mut parts = run_trials(&params, seed, 0..120, all).unwrap();
    parts.extend(run_trials(&params, seed, 120..300, all).unwrap());
    assert_eq!(whole, parts);
    assert_eq!(summarize(&params, &whole), summarize(&params, &parts));
}

#[test]
fn sweep_is_reproducible_and_seed_sensitive() {
    let a = csv_string(&run_sweep(&config(200, 1)).unwrap().rows).unwrap();
    let b = csv_string(&run_sweep(&config(200, 1)).unwrap().rows).unwrap();
    let c = csv_string(&run_sweep(&config(200, 2)).unwrap().rows).unwrap();
    assert_eq!(a, b);
    assert_ne!(a, c);
    assert!(a.starts_with(CSV_HEADER));
    assert_eq!(a.lines().count(), 4);
}

#[test]
fn sweep_rows_follow_the_grid() {
    let report = run_sweep(&config(50, 3)).unwrap();
    assert!(report.failures.is_empty());
    let ts: Vec<u64> = report.rows.iter().map(|r| r.t).collect();
    assert_eq!(ts, vec![4, 8, 16]);
    for row in &report.rows {
        assert_eq!(row.trials, 50);
        assert!(row.mean_nodes.unwrap() >= 1.0);
        assert!((row.r - row.t as f64 / 8.0).abs() < 1e-15);
    }
    let plot = plotdata_string(&report.rows).unwrap();
    assert!(plot.starts_with('#'));
    assert_eq!(plot.lines().count(), 4);
}

fn opt() -> impl Strategy<Value = Option<f64>> {
    prop_oneof![Just(None), (-1e12f64..1e12).prop_map(Some)]
}

fn row() -> impl Strategy<Value = SummaryRow> {
    (
        0u64..100_000,
        0.0f64..100.0,
        1u64..1_000_000,
        (opt(), opt(), opt(), opt()),
        (opt(), opt(), opt()),
    )
        .prop_map(|(t, r, trials, (a, b, c, d), (e, f, g))| SummaryRow {
            t,
            r,
            trials,
            mean_nodes: a,
            stderr_nodes: b,
            sat_fraction: c,
            uc_success: d,
            log_t_exact: e,
            log_t_asym: f,
            z_score: g,
        })
}

proptest! {
    #[test]
    fn csv_round_trips(rows in prop::collection::vec(row(), 1..8)) {
        let text = csv_string(&rows).unwrap();
        prop_assert_eq!(parse_csv(&text).unwrap(), rows);
    }
}

#[test]
fn mean_nodes_fall_as_constraints_grow() {
    let cfg = ExperimentConfig {
        n: 10,
        d: 3,
        k: 2,
        q: 2,
        t_grid: vec![5, 10, 15, 20],
        r_grid: vec![],
        trials: 20_000,
        master_seed: 77,
        measures: Measures::default(),
        out: None,
    };
    let rows = run_sweep(&cfg).unwrap().rows;
    let means: Vec<f64> = rows.iter().map(|r| r.mean_nodes.unwrap()).collect();
    assert!(means.windows(2).all(|w| w[1] < w[0]), "{means:?}");
    for row in &rows {
        assert!(row.z_score.unwrap().abs() <= 3.0, "{row:?}");
    }
}
