//! The hybrid forecasting procedure end to end.
//!
//! The series is split chronologically, the training part is decomposed into
//! additive scale components, each component is routed by the Tsay test to a
//! seasonal ARIMA model or a transformer, and the component forecasts are
//! summed back into a forecast of the series. The same machinery runs the
//! single-model and two-stage variants used for comparison.

mod compare;
mod config;
mod run;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sarima::{SarimaGrid, SarimaSpec};
use crate::transformer::TransformerConfig;
use crate::wavelet::WaveletFamily;

pub use compare::{compare, variant_matrix, ComparisonTable, METRIC_ROWS};
pub use config::{load_config, parse_config};
pub use run::{
    run_hybrid, run_variant, ComponentModelKind, ComponentResult, EvaluationReport, ForecastPoint, HybridResult,
    LevelReport, TransformerSummary,
};

/// Level used when the configuration asks for `auto`.
pub const DEFAULT_LEVEL: usize = 8;

/// Components whose variance falls below this share of the training
/// variance are forecast by their mean.
pub const VARIANCE_FLOOR: f64 = 1e-10;

/// Settings of one pipeline run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HybridConfig {
    pub family: WaveletFamily,
    /// Decomposition depth; `None` means `min(8, admissible maximum)`.
    /// Explicit levels are clamped to the admissible maximum as well.
    pub level: Option<usize>,
    pub split_ratio: f64,
    /// Significance level of the routing test and the residual test.
    pub alpha: f64,
    /// Fixed SARIMA orders for every linear component; `None` selects them
    /// by AIC over `grid`.
    pub order: Option<SarimaSpec>,
    pub grid: SarimaGrid,
    pub period: usize,
    pub transformer: TransformerConfig,
    pub horizon: usize,
    pub seed: u64,
    pub ljung_box_lags: usize,
    /// Clip emitted future forecasts at zero from below.
    pub clip_negative: bool,
}

impl Default for HybridConfig {
    fn default() -> Self {
        HybridConfig {
            family: WaveletFamily::Haar,
            level: None,
            split_ratio: 0.8,
            alpha: 0.05,
            order: None,
            grid: SarimaGrid::default(),
            period: 12,
            transformer: TransformerConfig::tuned(),
            horizon: 24,
            seed: 42,
            ljung_box_lags: 12,
            clip_negative: true,
        }
    }
}

impl HybridConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.split_ratio > 0.0 && self.split_ratio < 1.0) {
            return Err(Error::InvalidRatio(self.split_ratio));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::InvalidArgument(format!("alpha must lie in (0, 1), got {}", self.alpha)));
        }
        if self.level == Some(0) {
            return Err(Error::InvalidArgument("decomposition level must be at least 1".into()));
        }
        if self.period == 0 || self.horizon == 0 || self.ljung_box_lags == 0 {
            return Err(Error::InvalidArgument(
                "period, horizon and ljung_box_lags must be at least 1".into(),
            ));
        }
        if let Some(spec) = self.order {
            spec.validate()?;
        }
        self.transformer.validate()
    }
}

/// Model configurations compared in the accuracy table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    Sarima,
    Transformer,
    WaveletSarima,
    WaveletTransformer,
    WaveletSarimaTransformer,
}

impl Variant {
    pub const ALL: [Variant; 5] = [
        Variant::Sarima,
        Variant::Transformer,
        Variant::WaveletSarima,
        Variant::WaveletTransformer,
        Variant::WaveletSarimaTransformer,
    ];

    pub fn uses_wavelet(self) -> bool {
        !matches!(self, Variant::Sarima | Variant::Transformer)
    }

    /// Column label, e.g. `SARIMA` or `W(H)-ST`.
    pub fn label(self, family: WaveletFamily) -> String {
        match self {
            Variant::Sarima => "SARIMA".into(),
            Variant::Transformer => "Transformer".into(),
            Variant::WaveletSarima => format!("W({})-S", family.tag()),
            Variant::WaveletTransformer => format!("W({})-T", family.tag()),
            Variant::WaveletSarimaTransformer => format!("W({})-ST", family.tag()),
        }
    }

    fn name(self) -> &'static str {
        match self {
            Variant::Sarima => "sarima",
            Variant::Transformer => "transformer",
            Variant::WaveletSarima => "wavelet-sarima",
            Variant::WaveletTransformer => "wavelet-transformer",
            Variant::WaveletSarimaTransformer => "wavelet-sarima-transformer",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase();
        Variant::ALL.into_iter().find(|v| v.name() == key).ok_or_else(|| {
            Error::InvalidArgument(format!(
                "unknown variant '{s}' (expected sarima, transformer, wavelet-sarima, wavelet-transformer or wavelet-sarima-transformer)"
            ))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn variant_names_round_trip() {
        for v in Variant::ALL {
            assert_eq!(v.to_string().parse::<Variant>().unwrap(), v);
        }
        assert!("hybrid".parse::<Variant>().is_err());
        assert_eq!(Variant::WaveletSarimaTransformer.label(WaveletFamily::Haar), "W(H)-ST");
        assert_eq!(Variant::WaveletSarima.label(WaveletFamily::Coiflet3), "W(C)-S");
    }

    #[test]
    fn default_config_is_valid() {
        HybridConfig::default().validate().unwrap();
        let bad = HybridConfig {
            split_ratio: 1.0,
            ..HybridConfig::default()
        };
        assert!(bad.validate().is_err());
        let bad = HybridConfig {
            level: Some(0),
            ..HybridConfig::default()
        };
        assert!(bad.validate().is_err());
    }
}
