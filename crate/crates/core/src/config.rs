//! Experiment configuration in a `key = value` text format.
//!
//! ```text
//! # comments and blank lines are ignored
//! notions = K,Kinf,CardN
//! max_len = 12
//! budget = 10000
//! n_min = 0
//! n_max = 30
//! oracle = registry
//! ```

use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use crate::estimator::{Notion, OracleMode};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExperimentConfig {
    pub notions: Vec<Notion>,
    pub max_len: usize,
    pub budget: u64,
    /// Step budget of the budgeted halting oracle.
    pub oracle_budget: u64,
    pub n_min: u64,
    pub n_max: u64,
    pub oracle: OracleMode,
    /// Fixture directory supplying the registry; `None` means the default.
    pub fixtures: Option<PathBuf>,
    pub output_dir: PathBuf,
    /// Seed for the extra Church probes.
    pub seed: u64,
    pub probes_extra: usize,
    pub workers: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            notions: Notion::ALL.to_vec(),
            max_len: 12,
            budget: 10_000,
            oracle_budget: 10_000,
            n_min: 0,
            n_max: 30,
            oracle: OracleMode::Registry,
            fixtures: None,
            output_dir: PathBuf::from("out"),
            seed: 0,
            probes_extra: 4,
            workers: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConfigError {
    #[error("line {0}: expected `key = value`")]
    Syntax(usize),
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: bad value `{value}` for `{key}`")]
    BadValue {
        line: usize,
        key: String,
        value: String,
    },
    #[error("n_min {0} exceeds n_max {1}")]
    EmptyRange(u64, u64),
}

fn parse_value<T: FromStr>(line: usize, key: &str, value: &str) -> Result<T, ConfigError> {
    value.parse().map_err(|_| ConfigError::BadValue {
        line,
        key: key.to_string(),
        value: value.to_string(),
    })
}

impl FromStr for ExperimentConfig {
    type Err = ConfigError;

    fn from_str(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = ExperimentConfig::default();
        let mut oracle_budget = None;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content.split_once('=').ok_or(ConfigError::Syntax(line))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "notions" => {
                    cfg.notions = value
                        .split(',')
                        .map(|s| parse_value(line, key, s.trim()))
                        .collect::<Result<_, _>>()?;
                }
                "max_len" => cfg.max_len = parse_value(line, key, value)?,
                "budget" => cfg.budget = parse_value(line, key, value)?,
                "oracle_budget" => oracle_budget = Some(parse_value(line, key, value)?),
                "n_min" => cfg.n_min = parse_value(line, key, value)?,
                "n_max" => cfg.n_max = parse_value(line, key, value)?,
                "oracle" => cfg.oracle = parse_value(line, key, value)?,
                "fixtures" | "registry" => cfg.fixtures = Some(PathBuf::from(value)),
                "output_dir" => cfg.output_dir = PathBuf::from(value),
                "seed" => cfg.seed = parse_value(line, key, value)?,
                "probes_extra" => cfg.probes_extra = parse_value(line, key, value)?,
                "workers" => cfg.workers = parse_value(line, key, value)?,
                _ => {
                    return Err(ConfigError::UnknownKey {
                        line,
                        key: key.to_string(),
                    })
                }
            }
        }
        cfg.oracle_budget = oracle_budget.unwrap_or(cfg.budget);
        if cfg.n_min > cfg.n_max {
            return Err(ConfigError::EmptyRange(cfg.n_min, cfg.n_max));
        }
        Ok(cfg)
    }
}

impl ExperimentConfig {
    /// Canonical text form; parses back to the same config.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let notions: Vec<&str> = self.notions.iter().map(|n| n.name()).collect();
        let _ = writeln!(s, "notions = {}", notions.join(","));
        let _ = writeln!(s, "max_len = {}", self.max_len);
        let _ = writeln!(s, "budget = {}", self.budget);
        let _ = writeln!(s, "oracle_budget = {}", self.oracle_budget);
        let _ = writeln!(s, "n_min = {}", self.n_min);
        let _ = writeln!(s, "n_max = {}", self.n_max);
        let _ = writeln!(s, "oracle = {}", self.oracle);
        if let Some(dir) = &self.fixtures {
            let _ = writeln!(s, "fixtures = {}", dir.display());
        }
        let _ = writeln!(s, "output_dir = {}", self.output_dir.display());
        let _ = writeln!(s, "seed = {}", self.seed);
        let _ = writeln!(s, "probes_extra = {}", self.probes_extra);
        let _ = writeln!(s, "workers = {}", self.workers);
        s
    }
}
