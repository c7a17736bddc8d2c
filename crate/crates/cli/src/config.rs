use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use modelgb::harness::{ExperimentConfig, Measures};
use serde::Deserialize;

/// Sweep settings as read from a config file; every field may be missing and
/// filled in from flags.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartialConfig {
    pub n: Option<usize>,
    pub d: Option<u32>,
    pub k: Option<u32>,
    pub q: Option<u64>,
    pub t_grid: Option<Vec<u64>>,
    pub r_grid: Option<Vec<f64>>,
    pub trials: Option<u64>,
    pub master_seed: Option<u64>,
    pub measures: Option<Measures>,
    pub out: Option<PathBuf>,
}

impl PartialConfig {
    pub fn read(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }

    /// Values in `over` replace values in `self`.
    pub fn merge(self, over: PartialConfig) -> PartialConfig {
        PartialConfig {
            n: over.n.or(self.n),
            d: over.d.or(self.d),
            k: over.k.or(self.k),
            q: over.q.or(self.q),
            t_grid: over.t_grid.or(self.t_grid),
            r_grid: over.r_grid.or(self.r_grid),
            trials: over.trials.or(self.trials),
            master_seed: over.master_seed.or(self.master_seed),
            measures: over.measures.or(self.measures),
            out: over.out.or(self.out),
        }
    }

    pub fn finish(self) -> Result<ExperimentConfig> {
        fn need<T>(v: Option<T>, name: &str) -> Result<T> {
            match v {
                Some(v) => Ok(v),
                None => bail!("missing `{name}` (set it in the config file or with --{name})"),
            }
        }
        let t_grid = self.t_grid.unwrap_or_default();
        let r_grid = self.r_grid.unwrap_or_default();
        if t_grid.is_empty() && r_grid.is_empty() {
            bail!("missing grid (set `t_grid` or `r_grid`, or pass --t-grid / --r-grid)");
        }
        Ok(ExperimentConfig {
            n: need(self.n, "n")?,
            d: need(self.d, "d")?,
            k: need(self.k, "k")?,
            q: need(self.q, "q")?,
            t_grid,
            r_grid,
            trials: need(self.trials, "trials")?,
            master_seed: self.master_seed.unwrap_or(0),
            measures: self.measures.unwrap_or_default(),
            out: self.out,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file() {
        let file: PartialConfig = toml::from_str(
            "n = 10\nd = 3\nk = 2\nq = 2\nt_grid = [5, 10]\ntrials = 100\nmaster_seed = 4\n\
             [measures]\nnodes = true\nsat = false\nuc = true\n",
        )
        .unwrap();
        let flags = PartialConfig {
            trials: Some(7),
            t_grid: Some(vec![3]),
            ..Default::default()
        };
        let cfg = file.merge(flags).finish().unwrap();
        assert_eq!(cfg.trials, 7);
        assert_eq!(cfg.t_grid, vec![3]);
        assert_eq!(cfg.master_seed, 4);
        assert!(cfg.measures.uc && !cfg.measures.sat);
    }

    #[test]
    fn missing_fields_are_named() {
        let err = PartialConfig {
            n: Some(4),
            t_grid: Some(vec![1]),
            ..Default::default()
        }
        .finish()
        .unwrap_err();
        assert!(err.to_string().contains("`d`"));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(toml::from_str::<PartialConfig>("n = 3\nbogus = 1\n").is_err());
    }
}
