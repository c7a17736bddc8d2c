//! Seeded Monte Carlo sweeps over the constraint count.
//!
//! Grid point `t` draws its instances from master seed
//! `mix_seed(master_seed, t)`, trial `i` from stream `i` of that seed. Trials
//! run in parallel; per-trial records are collected in trial order and folded
//! sequentially, so a fixed config reproduces every row bit for bit.

use std::fmt::Write as _;
use std::ops::Range;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytics::{self, log_exact_expected_nodes};
use crate::backtrack::solve_all;
use crate::error::{Error, Result};
use crate::generator::sample_instance;
use crate::model::{Params, ValidParams};
use crate::rng::{mix_seed, SeedSpec};
use crate::uc::checked_uc;

/// Column order of the summary CSV.
pub const CSV_HEADER: &str =
    "t,r,trials,mean_nodes,stderr_nodes,sat_fraction,uc_success,log_T_exact,log_T_asym,z_score";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Measures {
    pub nodes: bool,
    pub sat: bool,
    pub uc: bool,
}

impl Default for Measures {
    fn default() -> Self {
        Measures {
            nodes: true,
            sat: true,
            uc: false,
        }
    }
}

impl Measures {
    /// Parses a comma list such as `nodes,sat,uc`.
    pub fn parse(list: &str) -> Result<Self> {
        let mut m = Measures {
            nodes: false,
            sat: false,
            uc: false,
        };
        for item in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            match item {
                "nodes" => m.nodes = true,
                "sat" => m.sat = true,
                "uc" => m.uc = true,
                other => return Err(Error::Config(format!("unknown measure `{other}`"))),
            }
        }
        Ok(m)
    }

    fn needs_search(&self) -> bool {
        self.nodes || self.sat
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub n: usize,
    pub d: u32,
    pub k: u32,
    pub q: u64,
    #[serde(default)]
    pub t_grid: Vec<u64>,
    /// Densities, each rounded to the nearest integer `t = r n`.
    #[serde(default)]
    pub r_grid: Vec<f64>,
    pub trials: u64,
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default)]
    pub measures: Measures,
    #[serde(default)]
    pub out: Option<PathBuf>,
}

impl ExperimentConfig {
    /// `t_grid` followed by the rounded `r_grid`, in the order given.
    pub fn grid(&self) -> Vec<u64> {
        let mut grid = self.t_grid.clone();
        grid.extend(
            self.r_grid
                .iter()
                .map(|r| (r * self.n as f64).round().max(0.0) as u64),
        );
        grid
    }

    pub fn params_at(&self, t: u64) -> Result<ValidParams> {
        Params::new(self.n, self.d, self.k, t, self.q).validate()
    }

    fn check(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        if self.grid().is_empty() {
            return Err(Error::Config("empty t/r grid".into()));
        }
        if !(self.measures.nodes || self.measures.sat || self.measures.uc) {
            return Err(Error::Config("no measures selected".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrialRecord {
    pub trial: u64,
    pub nodes: Option<u64>,
    pub satisfiable: Option<bool>,
    pub uc_success: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub t: u64,
    pub r: f64,
    pub trials: u64,
    pub mean_nodes: Option<f64>,
    pub stderr_nodes: Option<f64>,
    pub sat_fraction: Option<f64>,
    pub uc_success: Option<f64>,
    #[serde(rename = "log_T_exact")]
    pub log_t_exact: Option<f64>,
    #[serde(rename = "log_T_asym")]
    pub log_t_asym: Option<f64>,
    pub z_score: Option<f64>,
}

#[derive(Debug)]
pub struct SweepReport {
    pub rows: Vec<SummaryRow>,
    /// Grid points that could not run, with the reason.
    pub failures: Vec<(u64, Error)>,
}

/// Runs trials `range` of one grid point.
pub fn run_trials(
    params: &ValidParams,
    point_seed: u64,
    range: Range<u64>,
    measures: Measures,
) -> Result<Vec<TrialRecord>> {
    range
        .into_par_iter()
        .map(|trial| {
            let seed = SeedSpec::new(point_seed, trial);
            let inst = sample_instance(params, seed);
            let stats = if measures.needs_search() {
                Some(solve_all(&inst, false)?)
            } else {
                None
            };
            let uc_success = if measures.uc {
                Some(checked_uc(&inst, seed)?)
            } else {
                None
            };
            Ok(TrialRecord {
                trial,
                nodes: stats.as_ref().filter(|_| measures.nodes).map(|s| s.nodes),
                satisfiable: stats.filter(|_| measures.sat).map(|s| s.is_satisfiable()),
                uc_success,
            })
        })
        .collect()
}

pub fn point_seed(master_seed: u64, t: u64) -> u64 {
    mix_seed(master_seed, t)
}

fn fraction(flags: impl Iterator<Item = bool>, total: usize) -> f64 {
    flags.filter(|&b| b).count() as f64 / total as f64
}

/// Folds per-trial records (in trial order) into one row.
pub fn summarize(params: &ValidParams, records: &[TrialRecord]) -> SummaryRow {
    let count = records.len();
    let nodes: Vec<f64> = records
        .iter()
        .filter_map(|r| r.nodes.map(|x| x as f64))
        .collect();
    let (mean, stderr) = if nodes.is_empty() {
        (None, None)
    } else {
        let m = nodes.iter().sum::<f64>() / nodes.len() as f64;
        let se = if nodes.len() > 1 {
            let var =
                nodes.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (nodes.len() - 1) as f64;
            (var / nodes.len() as f64).sqrt()
        } else {
            0.0
        };
        (Some(m), Some(se))
    };
    let sat = records
        .first()
        .and_then(|r| r.satisfiable)
        .map(|_| fraction(records.iter().filter_map(|r| r.satisfiable), count));
    let uc = records
        .first()
        .and_then(|r| r.uc_success)
        .map(|_| fraction(records.iter().filter_map(|r| r.uc_success), count));

    let log_t_exact = log_exact_expected_nodes::<f64>(params).ok();
    let log_t_asym = analytics::predict(params, analytics::DEFAULT_TOL)
        .ok()
        .map(|p| p.log_t_asym);
    let z_score = match (mean, stderr, log_t_exact) {
        (Some(m), Some(se), Some(lt)) => {
            let expected = lt.exp();
            if se > 0.0 {
                Some((m - expected) / se)
            } else if (m - expected).abs() <= 1e-9 * expected {
                Some(0.0)
            } else {
                Some(f64::INFINITY.copysign(m - expected))
            }
        }
        _ => None,
    };
    SummaryRow {
        t: params.t(),
        r: params.r(),
        trials: count as u64,
        mean_nodes: mean,
        stderr_nodes: stderr,
        sat_fraction: sat,
        uc_success: uc,
        log_t_exact,
        log_t_asym,
        z_score,
    }
}

pub fn run_point(config: &ExperimentConfig, t: u64) -> Result<SummaryRow> {
    let params = config.params_at(t)?;
    params.require_strict()?;
    let records = run_trials(
        &params,
        point_seed(config.master_seed, t),
        0..config.trials,
        config.measures,
    )?;
    Ok(summarize(&params, &records))
}

pub fn run_sweep(config: &ExperimentConfig) -> Result<SweepReport> {
    config.check()?;
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for t in config.grid() {
        match run_point(config, t) {
            Ok(row) => {
                log::info!("t={t}: {} trials, mean nodes {:?}", row.trials, row.mean_nodes);
                rows.push(row);
            }
            Err(e) => {
                log::warn!("grid point t={t} skipped: {e}");
                failures.push((t, e));
            }
        }
    }
    Ok(SweepReport { rows, failures })
}

pub fn csv_string(rows: &[SummaryRow]) -> Result<String> {
    if rows.is_empty() {
        return Err(Error::Config("no rows to write".into()));
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Config(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn parse_csv(text: &str) -> Result<Vec<SummaryRow>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    r.deserialize()
        .map(|row| row.map_err(Error::from))
        .collect()
}

pub fn emit_csv(rows: &[SummaryRow], path: &Path) -> Result<()> {
    std::fs::write(path, csv_string(rows)?).map_err(|e| Error::io(path, e))
}

fn plot_field(x: Option<f64>) -> String {
    x.map_or_else(|| "NaN".to_string(), |v| v.to_string())
}

/// Whitespace-separated columns under a `#` header; missing values are `NaN`.
/// `ln_mean_nodes` is included for plotting against `n F(r)`.
pub fn plotdata_string(rows: &[SummaryRow]) -> Result<String> {
    if rows.is_empty() {
        return Err(Error::Config("no rows to write".into()));
    }
    let mut s = String::from(
        "# t r trials mean_nodes stderr_nodes ln_mean_nodes log_T_exact log_T_asym sat_fraction uc_success\n",
    );
    for row in rows {
        let fields = [
            row.t.to_string(),
            row.r.to_string(),
            row.trials.to_string(),
            plot_field(row.mean_nodes),
            plot_field(row.stderr_nodes),
            plot_field(row.mean_nodes.map(f64::ln)),
            plot_field(row.log_t_exact),
            plot_field(row.log_t_asym),
            plot_field(row.sat_fraction),
            plot_field(row.uc_success),
        ];
        writeln!(s, "{}", fields.join(" ")).expect("string write");
    }
    Ok(s)
}

pub fn emit_plotdata(rows: &[SummaryRow], path: &Path) -> Result<()> {
    std::fs::write(path, plotdata_string(rows)?).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(t_grid: Vec<u64>, trials: u64) -> ExperimentConfig {
        ExperimentConfig {
            n: 3,
            d: 2,
            k: 2,
            q: 1,
            t_grid,
            r_grid: vec![],
            trials,
            master_seed: 1,
            measures: Measures::default(),
            out: None,
        }
    }

    fn sample_row() -> SummaryRow {
        SummaryRow {
            t: 4,
            r: 0.5,
            trials: 10,
            mean_nodes: Some(12.5),
            stderr_nodes: Some(0.25),
            sat_fraction: Some(0.9),
            uc_success: None,
            log_t_exact: Some(2.5),
            log_t_asym: Some(2.4),
            z_score: Some(-1.5),
        }
    }

    #[test]
    fn unconstrained_point_is_deterministic() {
        let report = run_sweep(&config(vec![0], 5)).unwrap();
        let row = &report.rows[0];
        assert_eq!(row.mean_nodes, Some(15.0));
        assert_eq!(row.stderr_nodes, Some(0.0));
        assert_eq!(row.sat_fraction, Some(1.0));
        assert_eq!(row.z_score, Some(0.0));
        assert_eq!(row.log_t_asym, None);
    }

    #[test]
    fn bad_points_are_reported_and_skipped() {
        let mut cfg = config(vec![0, 2], 3);
        cfg.q = 3; // q >= d: not strict
        let report = run_sweep(&cfg).unwrap();
        assert!(report.rows.is_empty());
        assert_eq!(report.failures.len(), 2);
        assert!(run_sweep(&config(vec![], 3)).is_err());
        assert!(run_sweep(&config(vec![1], 0)).is_err());
    }

    #[test]
    fn r_grid_rounds_to_integer_t() {
        let mut cfg = config(vec![], 1);
        cfg.n = 30;
        cfg.r_grid = vec![0.5, 1.01, 2.0];
        assert_eq!(cfg.grid(), vec![15, 30, 60]);
        cfg.t_grid = vec![7];
        let report = run_sweep(&cfg).unwrap();
        assert_eq!(report.rows[2].r, 1.0);
    }

    #[test]
    fn csv_golden() {
        let text = csv_string(&[sample_row()]).unwrap();
        assert_eq!(
            text,
            format!("{CSV_HEADER}\n4,0.5,10,12.5,0.25,0.9,,2.5,2.4,-1.5\n")
        );
        assert_eq!(parse_csv(&text).unwrap(), vec![sample_row()]);
        assert!(csv_string(&[]).is_err());
    }

    #[test]
    fn plotdata_marks_missing_values() {
        let text = plotdata_string(&[sample_row()]).unwrap();
        let mut lines = text.lines();
        assert!(lines.next().unwrap().starts_with("# t r trials"));
        let cols: Vec<&str> = lines.next().unwrap().split_whitespace().collect();
        assert_eq!(cols.len(), 10);
        assert_eq!(cols[9], "NaN");
        assert_eq!(cols[5].parse::<f64>().unwrap(), 12.5f64.ln());
    }

    #[test]
    fn emit_reports_path_on_failure() {
        let err = emit_csv(&[sample_row()], Path::new("/nonexistent/dir/out.csv")).unwrap_err();
        assert!(err.to_string().contains("/nonexistent/dir/out.csv"));
    }

    #[test]
    fn measures_parse() {
        assert_eq!(
            Measures::parse("nodes, uc").unwrap(),
            Measures {
                nodes: true,
                sat: false,
                uc: true
            }
        );
        assert!(Measures::parse("nodes,bogus").is_err());
    }
}
