//! Hybrid wavelet / SARIMA / transformer forecasting for monthly series.
//!
//! A series is split into additive scale components with the maximal overlap
//! discrete wavelet transform, each component is tested for nonlinearity and
//! routed to either a seasonal ARIMA model or a small transformer encoder, and
//! the component forecasts are summed back into a forecast of the original
//! series. The crate also carries the verification metrics and residual
//! diagnostics used to compare model variants.
//!
//! The numeric kernels are generic over [`Scalar`] (`f32` or `f64`); the
//! aliases at the crate root fix them to `f64`, which is what the pipeline
//! and the command-line driver use.

pub mod diagnostics;
mod error;
pub mod linalg;
pub mod metrics;
pub mod pipeline;
pub mod sarima;
mod scalar;
pub mod series;
pub mod special;
pub mod transformer;
pub mod wavelet;

pub use error::{Error, ErrorKind, Result};
pub use scalar::Scalar;
pub use series::YearMonth;
pub use wavelet::WaveletFamily;

pub type TimeSeries = series::TimeSeries<f64>;
pub type TimeSeries32 = series::TimeSeries<f32>;
pub type DescriptiveStats = series::DescriptiveStats<f64>;
pub type SplitPair = series::SplitPair<f64>;
pub type WaveletFilterBank = wavelet::WaveletFilterBank<f64>;
pub type ModwtCoefficients = wavelet::ModwtCoefficients<f64>;
pub type MultiresolutionDecomposition = wavelet::MultiresolutionDecomposition<f64>;
pub type SarimaFit = sarima::SarimaFit<f64>;
pub type TransformerModel = transformer::TransformerModel<f64>;
pub type MetricReport = metrics::MetricReport<f64>;
pub type TaylorStats = metrics::TaylorStats<f64>;
