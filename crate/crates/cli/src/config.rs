use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use relthue::relthue::{parse_rational, SearchConfig};
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Json,
    Csv,
    #[value(name = "text-table", alias = "text")]
    TextTable,
}

/// Flags shared by every subcommand.
#[derive(Args, Clone, Debug)]
pub struct GlobalArgs {
    /// Working precision in bits.
    #[arg(long, global = true, env = "RELTHUE_PRECISION", default_value_t = relthue::numerics::DEFAULT_PRECISION)]
    pub precision: u32,
    /// Solutions are sought below 10^N.
    #[arg(long = "bound-log10", global = true, default_value_t = 250)]
    pub bound_log10: u32,
    /// LLL parameter, as p/q or a decimal.
    #[arg(long, global = true, default_value = "99/100")]
    pub delta: String,
    /// Largest coordinate box scanned point by point.
    #[arg(long = "enum-cap", global = true, default_value_t = 1000)]
    pub enum_cap: u64,
    /// Worker threads; 0 uses one per core.
    #[arg(long, global = true, default_value_t = 0)]
    pub workers: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

/// Everything that determines a run's output, embedded in every report.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub precision: u32,
    pub bound_log10: u32,
    /// Bound reported for generator coordinates, which are quadratic in the pair.
    pub generator_bound_log10: u32,
    pub lll_delta: String,
    pub enum_cap: u64,
    pub workers: usize,
    pub out: Option<PathBuf>,
    pub format: Format,
}

impl RunConfig {
    pub fn from_args(g: &GlobalArgs) -> Result<Self> {
        let delta = parse_rational(&g.delta).with_context(|| format!("--delta {}", g.delta))?;
        if g.precision == 0 || g.bound_log10 == 0 || g.enum_cap == 0 {
            bail!("--precision, --bound-log10 and --enum-cap must be positive");
        }
        let cfg = RunConfig {
            precision: g.precision,
            bound_log10: g.bound_log10,
            generator_bound_log10: 2 * g.bound_log10,
            lll_delta: delta.to_string(),
            enum_cap: g.enum_cap,
            workers: g.workers,
            out: g.out.clone(),
            format: g.format,
        };
        cfg.search()?.validate()?;
        Ok(cfg)
    }

    pub fn search(&self) -> Result<SearchConfig> {
        Ok(SearchConfig {
            size_bound_log10: self.bound_log10,
            lll_delta: parse_rational(&self.lll_delta)?,
            enum_cap: self.enum_cap,
            precision: self.precision,
            workers: self.workers,
            ..SearchConfig::default()
        })
    }
}
