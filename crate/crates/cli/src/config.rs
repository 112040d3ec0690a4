//! Run configuration: command-line flags merged over an optional config file.
//!
//! The config file is either flat TOML (`key = value`, same names as the long
//! flags with underscores) or a single JSON object such as a `solve --format
//! jsonl` record. Flags win on conflict.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, ValueEnum};
use deterrence_core::{GridSpec, Market, ModelParams};
use serde::Deserialize;

use crate::CliError;

/// `LO:HI:STEP`, inclusive of `LO` and of `HI` when it lies on the lattice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RangeSpec {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
}

impl RangeSpec {
    pub fn points(&self) -> Vec<f64> {
        let n = ((self.hi - self.lo) / self.step + 1e-9).floor() as usize;
        (0..=n).map(|k| self.lo + k as f64 * self.step).collect()
    }
}

impl FromStr for RangeSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let [lo, hi, step] = parts.as_slice() else {
            return Err(format!("range `{s}` must be LO:HI:STEP"));
        };
        let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("range `{s}`: {e}"));
        let (lo, hi, step) = (num(lo)?, num(hi)?, num(step)?);
        if !(lo.is_finite() && hi.is_finite() && step.is_finite()) {
            return Err(format!("range `{s}` must be finite"));
        }
        if step <= 0.0 {
            return Err(format!("range `{s}`: step must be positive"));
        }
        if hi < lo {
            return Err(format!("range `{s}` is empty"));
        }
        Ok(Self { lo, hi, step })
    }
}

impl fmt::Display for RangeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.lo, self.hi, self.step)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    #[value(alias = "json-lines")]
    #[serde(alias = "json-lines")]
    Jsonl,
}

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub theta: Option<f64>,
    #[arg(long)]
    pub phi: Option<f64>,
    /// Marginal cost c.
    #[arg(long)]
    pub cost: Option<f64>,
    /// Entry cost R.
    #[arg(long, conflicts_with = "entry_cost_range")]
    pub entry_cost: Option<f64>,
    /// Entry-cost grid LO:HI:STEP.
    #[arg(long, value_name = "LO:HI:STEP")]
    pub entry_cost_range: Option<RangeSpec>,
    /// Second sweep axis over cross-resistance.
    #[arg(long, value_name = "LO:HI:STEP", conflicts_with = "sweep_theta")]
    pub sweep_phi: Option<RangeSpec>,
    /// Second sweep axis over own-resistance.
    #[arg(long, value_name = "LO:HI:STEP")]
    pub sweep_theta: Option<RangeSpec>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Output file (directory for `figure`).
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub price_step: Option<f64>,
    #[arg(long)]
    pub output_step: Option<f64>,
    /// TOML key-value file or a JSON record.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    alpha: Option<f64>,
    beta: Option<f64>,
    theta: Option<f64>,
    phi: Option<f64>,
    #[serde(alias = "c")]
    cost: Option<f64>,
    #[serde(alias = "R")]
    entry_cost: Option<f64>,
    entry_cost_range: Option<String>,
    sweep_phi: Option<String>,
    sweep_theta: Option<String>,
    format: Option<Format>,
    out: Option<PathBuf>,
    price_step: Option<f64>,
    output_step: Option<f64>,
}

/// Input fields of a JSON record; everything else in it is output and ignored.
#[derive(Debug, Deserialize)]
struct RecordInput {
    alpha: f64,
    beta: f64,
    theta: f64,
    phi: f64,
    c: f64,
    #[serde(rename = "R")]
    entry_cost: f64,
}

fn read_file_config(path: &Path) -> Result<FileConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("reading config {}: {e}", path.display())))?;
    let bad = |e: &dyn fmt::Display| CliError::Usage(format!("config {}: {e}", path.display()));
    if text.trim_start().starts_with('{') {
        let line = text.lines().find(|l| !l.trim().is_empty()).unwrap_or_default();
        let r: RecordInput = serde_json::from_str(line).map_err(|e| bad(&e))?;
        Ok(FileConfig {
            alpha: Some(r.alpha),
            beta: Some(r.beta),
            theta: Some(r.theta),
            phi: Some(r.phi),
            cost: Some(r.c),
            entry_cost: Some(r.entry_cost),
            ..FileConfig::default()
        })
    } else {
        toml::from_str(&text).map_err(|e| bad(&e))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EntryCosts {
    Single(f64),
    Range(RangeSpec),
}

impl EntryCosts {
    pub fn points(&self) -> Vec<f64> {
        match self {
            EntryCosts::Single(r) => vec![*r],
            EntryCosts::Range(range) => range.points(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Phi,
    Theta,
}

/// Fully resolved configuration for one command.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: ModelParams,
    pub entry_cost: Option<EntryCosts>,
    pub sweep_axis: Option<(Axis, RangeSpec)>,
    pub output_path: Option<PathBuf>,
    pub output_format: Option<Format>,
    pub price_step: Option<f64>,
    pub output_step: Option<f64>,
}

impl RunConfig {
    /// Missing market parameters default to the reference market.
    pub fn resolve(flags: &Flags) -> Result<Self, CliError> {
        let file = match &flags.config {
            Some(path) => read_file_config(path)?,
            None => FileConfig::default(),
        };
        let parse_range = |s: &Option<String>| -> Result<Option<RangeSpec>, CliError> {
            s.as_deref()
                .map(RangeSpec::from_str)
                .transpose()
                .map_err(CliError::Usage)
        };
        let reference = ModelParams::reference();
        let params = ModelParams {
            alpha: flags.alpha.or(file.alpha).unwrap_or(reference.alpha),
            beta: flags.beta.or(file.beta).unwrap_or(reference.beta),
            theta: flags.theta.or(file.theta).unwrap_or(reference.theta),
            phi: flags.phi.or(file.phi).unwrap_or(reference.phi),
            c: flags.cost.or(file.cost).unwrap_or(reference.c),
        };

        let entry_cost = match (flags.entry_cost, flags.entry_cost_range) {
            (Some(r), _) => Some(EntryCosts::Single(r)),
            (None, Some(range)) => Some(EntryCosts::Range(range)),
            (None, None) => match (file.entry_cost, parse_range(&file.entry_cost_range)?) {
                (Some(r), _) => Some(EntryCosts::Single(r)),
                (None, Some(range)) => Some(EntryCosts::Range(range)),
                (None, None) => None,
            },
        };

        let sweep_axis = match (flags.sweep_phi, flags.sweep_theta) {
            (Some(r), _) => Some((Axis::Phi, r)),
            (None, Some(r)) => Some((Axis::Theta, r)),
            (None, None) => match (parse_range(&file.sweep_phi)?, parse_range(&file.sweep_theta)?) {
                (Some(_), Some(_)) => {
                    return Err(CliError::Usage(
                        "config sets both sweep_phi and sweep_theta".into(),
                    ))
                }
                (Some(r), None) => Some((Axis::Phi, r)),
                (None, Some(r)) => Some((Axis::Theta, r)),
                (None, None) => None,
            },
        };

        let cfg = Self {
            params,
            entry_cost,
            sweep_axis,
            output_path: flags.out.clone().or(file.out),
            output_format: flags.format.or(file.format),
            price_step: flags.price_step.or(file.price_step),
            output_step: flags.output_step.or(file.output_step),
        };
        for (name, step) in [("price_step", cfg.price_step), ("output_step", cfg.output_step)] {
            if let Some(s) = step {
                if !(s > 0.0 && s.is_finite()) {
                    return Err(CliError::Usage(format!("{name} must be positive, got {s}")));
                }
            }
        }
        if let Some(EntryCosts::Single(r)) = cfg.entry_cost {
            if !(r >= 0.0 && r.is_finite()) {
                return Err(CliError::Usage(format!(
                    "entry cost must be nonnegative, got {r}"
                )));
            }
        }
        Ok(cfg)
    }

    pub fn market(&self) -> Result<Market, CliError> {
        Ok(Market::new(self.params)?)
    }

    pub fn grid(&self, market: &Market) -> GridSpec {
        let mut grid = GridSpec::for_market(market);
        if let Some(s) = self.price_step {
            grid.price_step = s;
        }
        if let Some(s) = self.output_step {
            grid.output_step = s;
        }
        grid
    }
}
