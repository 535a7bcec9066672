use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, ValueEnum};
use wst_core::pipeline::{load_config, HybridConfig, Variant};
use wst_core::sarima::SarimaSpec;
use wst_core::series::{load_monthly_csv, ColumnSpec};
use wst_core::{TimeSeries, WaveletFamily};

/// `auto` or a positive decomposition level.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    Auto,
    Fixed(usize),
}

impl FromStr for Level {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(Level::Auto);
        }
        match s.parse::<usize>() {
            Ok(0) | Err(_) => Err(format!("expected 'auto' or a positive integer, found '{s}'")),
            Ok(j) => Ok(Level::Fixed(j)),
        }
    }
}

impl Level {
    pub fn get(self) -> Option<usize> {
        match self {
            Level::Auto => None,
            Level::Fixed(j) => Some(j),
        }
    }
}

/// `auto` or explicit `p,d,q,P,D,Q,s` orders.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    Auto,
    Fixed(SarimaSpec),
}

impl FromStr for Order {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s.eq_ignore_ascii_case("auto") {
            Ok(Order::Auto)
        } else {
            s.parse().map(Order::Fixed).map_err(|e: wst_core::Error| e.to_string())
        }
    }
}

impl Order {
    pub fn get(self) -> Option<SarimaSpec> {
        match self {
            Order::Auto => None,
            Order::Fixed(spec) => Some(spec),
        }
    }
}

fn family(s: &str) -> Result<WaveletFamily, String> {
    s.parse().map_err(|e: wst_core::Error| e.to_string())
}

pub fn variant(s: &str) -> Result<Variant, String> {
    s.parse().map_err(|e: wst_core::Error| e.to_string())
}

fn filter(s: &str) -> Result<(String, String), String> {
    match s.split_once('=') {
        Some((k, v)) if !k.trim().is_empty() => Ok((k.trim().to_string(), v.trim().to_string())),
        _ => Err(format!("expected COLUMN=VALUE, found '{s}'")),
    }
}

/// Input series.
#[derive(Debug, Clone, Args)]
pub struct SeriesArgs {
    /// Monthly series CSV, long (`date,value` with YYYY-MM dates) or wide
    /// (`Year,Jan,...,Dec`)
    #[arg(long, value_name = "CSV")]
    pub data: PathBuf,
    /// Value column of the long layout
    #[arg(long, value_name = "NAME", default_value = "value")]
    pub column: String,
    /// Keep only rows whose COLUMN equals VALUE
    #[arg(long, value_name = "COLUMN=VALUE", value_parser = filter)]
    pub filter: Option<(String, String)>,
}

impl SeriesArgs {
    pub fn load(&self) -> wst_core::Result<TimeSeries> {
        let columns = ColumnSpec {
            value: self.column.clone(),
            filter: self.filter.clone(),
            ..ColumnSpec::default()
        };
        load_monthly_csv(&self.data, &columns)
    }
}

/// Run configuration: a config file, then flag overrides.
#[derive(Debug, Clone, Default, Args)]
pub struct ConfigArgs {
    /// Configuration file with [wavelet], [run], [sarima] and [transformer]
    /// sections
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Wavelet family
    #[arg(long, value_name = "haar|db4|sym4|coif3", value_parser = family)]
    pub family: Option<WaveletFamily>,
    /// Decomposition level, clamped to the admissible maximum
    #[arg(long, value_name = "auto|J")]
    pub level: Option<Level>,
    /// Training share of the chronological split
    #[arg(long, value_name = "R")]
    pub ratio: Option<f64>,
    /// Months forecast past the end of the series
    #[arg(long, value_name = "H")]
    pub horizon: Option<usize>,
    /// Seed of every random choice
    #[arg(long, value_name = "N")]
    pub seed: Option<u64>,
    /// SARIMA orders for linear components
    #[arg(long, value_name = "auto|p,d,q,P,D,Q,s")]
    pub order: Option<Order>,
}

impl ConfigArgs {
    pub fn resolve(&self) -> wst_core::Result<HybridConfig> {
        let mut cfg = match &self.config {
            Some(path) => load_config(path)?,
            None => HybridConfig::default(),
        };
        if let Some(f) = self.family {
            cfg.family = f;
        }
        if let Some(l) = self.level {
            cfg.level = l.get();
        }
        if let Some(r) = self.ratio {
            cfg.split_ratio = r;
        }
        if let Some(h) = self.horizon {
            cfg.horizon = h;
        }
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if let Some(o) = self.order {
            cfg.order = o.get();
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TestKind {
    LjungBox,
    Tsay,
}
