use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use efsphere::experiments::ExperimentConfig;
use efsphere::spectra::DEFAULT_SLACK;
use serde::Deserialize;

use crate::args::{Cli, Format};

pub const DEFAULT_CACHE_DIR: &str = "cache";
pub const DEFAULT_MIXING_TRIALS: usize = 200;

/// Optional TOML defaults.
#[derive(Deserialize, Default, Debug, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub cache_dir: Option<PathBuf>,
    pub format: Option<Format>,
    pub slack: Option<f64>,
    pub min_delta_ratio: Option<f64>,
    pub min_relation_fraction: Option<f64>,
    pub c_mult: Option<f64>,
    pub experiment_trials: Option<usize>,
    pub mixing_trials: Option<usize>,
    pub verbosity: Option<u8>,
}

impl FileConfig {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }
}

/// Settings after merging flags, environment and config file.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub cache_dir: Option<PathBuf>,
    pub format: Format,
    pub slack: f64,
    pub min_delta_ratio: f64,
    pub min_relation_fraction: f64,
    pub c_mult: f64,
    pub experiment_trials: usize,
    pub mixing_trials: usize,
    pub verbosity: u8,
}

impl RunConfig {
    pub fn resolve(cli: &Cli) -> anyhow::Result<Self> {
        let file = match &cli.config {
            Some(p) => FileConfig::load(p)?,
            None => FileConfig::default(),
        };
        let cache_dir = if cli.no_cache {
            None
        } else {
            Some(
                cli.cache_dir
                    .clone()
                    .or(file.cache_dir)
                    .unwrap_or_else(|| DEFAULT_CACHE_DIR.into()),
            )
        };
        let cfg = RunConfig {
            cache_dir,
            format: cli.format.or(file.format).unwrap_or_default(),
            slack: file.slack.unwrap_or(DEFAULT_SLACK),
            min_delta_ratio: file.min_delta_ratio.unwrap_or(ExperimentConfig::DEFAULT_THRESHOLD),
            min_relation_fraction: file
                .min_relation_fraction
                .unwrap_or(ExperimentConfig::DEFAULT_THRESHOLD),
            c_mult: file.c_mult.unwrap_or(ExperimentConfig::DEFAULT_C),
            experiment_trials: file.experiment_trials.unwrap_or(ExperimentConfig::DEFAULT_TRIALS),
            mixing_trials: file.mixing_trials.unwrap_or(DEFAULT_MIXING_TRIALS),
            verbosity: cli.verbose.max(file.verbosity.unwrap_or(0)),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        for (name, v) in [
            ("slack", self.slack),
            ("min_delta_ratio", self.min_delta_ratio),
            ("min_relation_fraction", self.min_relation_fraction),
            ("c_mult", self.c_mult),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                bail!("{name} must be positive, got {v}");
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_partial_file() {
        let f: FileConfig = toml::from_str("slack = 2.5\nformat = \"csv\"").unwrap();
        assert_eq!(f.slack, Some(2.5));
        assert_eq!(f.format, Some(Format::Csv));
        assert!(toml::from_str::<FileConfig>("bogus = 1").is_err());
    }
}
