use rayon::prelude::*;
use serde::Serialize;

use crate::diagnostics::{classify_components, component_ids, ComponentId, ComponentRoute, LjungBox, Route, TestResult};
use crate::error::{Error, Result};
use crate::metrics::{compute_metrics, taylor_stats, MetricReport, TaylorStats};
use crate::sarima::{auto_fit, fit, SarimaFit, SarimaSummary};
use crate::series::{split_train_test, TimeSeries, YearMonth};
use crate::transformer::{train, TransformerModel};
use crate::wavelet::{admissible_level, causal_mra, equivalent_filter_length, MultiresolutionDecomposition};

use super::{HybridConfig, Variant, DEFAULT_LEVEL, VARIANCE_FLOOR};

/// How the decomposition depth was settled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LevelReport {
    pub requested: usize,
    pub used: usize,
    /// Deepest level admissible for the training length.
    pub max: usize,
    pub clamped: bool,
    /// Observations before the first component value: the length of the
    /// level's equivalent filter minus one.
    pub warm_up: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ComponentModelKind {
    Sarima,
    Transformer,
    /// Near-constant component forecast by its mean.
    Constant,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransformerSummary {
    pub parameter_count: usize,
    pub epochs: usize,
    pub best_epoch: usize,
    pub stopped_early: bool,
    pub final_train_loss: f64,
    pub best_validation_loss: Option<f64>,
}

/// Audit record of one component.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComponentResult {
    pub component: ComponentId,
    pub model: ComponentModelKind,
    /// Sample variance of the training component.
    pub variance: f64,
    pub sarima: Option<SarimaSummary>,
    pub transformer: Option<TransformerSummary>,
    pub test_predictions: Vec<f64>,
    pub future_forecasts: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvaluationReport {
    pub metrics: MetricReport<f64>,
    /// `None` when the prediction has no variance.
    pub taylor: Option<TaylorStats<f64>>,
    /// Ljung-Box test of the one-step-ahead test residuals.
    pub ljung_box: TestResult,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ForecastPoint {
    pub month: YearMonth,
    /// Emitted value (clipped at zero when configured).
    pub value: f64,
    /// Unclipped reconstruction.
    pub raw: f64,
}

#[derive(Debug, Clone)]
enum Fitted {
    Constant(f64),
    Sarima(Box<SarimaFit<f64>>),
    Transformer(Box<TransformerModel<f64>>),
}

impl Fitted {
    fn kind(&self) -> ComponentModelKind {
        match self {
            Fitted::Constant(_) => ComponentModelKind::Constant,
            Fitted::Sarima(_) => ComponentModelKind::Sarima,
            Fitted::Transformer(_) => ComponentModelKind::Transformer,
        }
    }

    /// Forecasts `h` steps past the end of `history`, the component's values
    /// up to the forecast origin.
    fn forecast(&self, history: &[f64], h: usize) -> Result<Vec<f64>> {
        match self {
            Fitted::Constant(m) => Ok(vec![*m; h]),
            Fitted::Sarima(f) => f.condition_on(history)?.forecast(h),
            Fitted::Transformer(m) => m.forecast_recursive(history, h),
        }
    }
}

/// Model of one component with the component of the complete series, kept
/// for extending the forecast.
#[derive(Debug, Clone)]
struct FutureState {
    model: Fitted,
    history: Vec<f64>,
}

/// Everything a run produces. Serializes to the JSON run report.
#[derive(Debug, Clone, Serialize)]
pub struct HybridResult {
    pub variant: Variant,
    pub label: String,
    pub config: HybridConfig,
    pub n_train: usize,
    pub n_test: usize,
    pub test_start: YearMonth,
    pub level: Option<LevelReport>,
    /// Tsay-test routing; empty for variants that do not route.
    pub routing: Vec<ComponentRoute>,
    pub components: Vec<ComponentResult>,
    pub test_observed: Vec<f64>,
    /// Dynamic multi-step predictions of the test window from the training
    /// end, summed over components.
    pub test_predictions: Vec<f64>,
    /// Rolling one-step-ahead predictions of the test window.
    pub one_step_predictions: Vec<f64>,
    /// Largest gap between a reconstructed prediction and the sum of its
    /// component predictions.
    pub additivity_error: f64,
    pub evaluation: EvaluationReport,
    pub forecasts: Vec<ForecastPoint>,
    #[serde(skip)]
    future: Vec<FutureState>,
    #[serde(skip)]
    first_future: Option<YearMonth>,
}

impl HybridResult {
    /// Reconstructed forecasts `h` months past the last observation.
    pub fn forecast_future(&self, h: usize) -> Result<Vec<ForecastPoint>> {
        if h == 0 {
            return Err(Error::InvalidArgument("forecast horizon must be at least 1".into()));
        }
        let first = self
            .first_future
            .ok_or_else(|| Error::InvalidArgument("result carries no fitted models".into()))?;
        let parts = self
            .future
            .iter()
            .map(|s| s.model.forecast(&s.history, h))
            .collect::<Result<Vec<_>>>()?;
        Ok(points(&sum_components(&parts, h), first, self.config.clip_negative))
    }
}

fn points(raw: &[f64], first: YearMonth, clip: bool) -> Vec<ForecastPoint> {
    raw.iter()
        .enumerate()
        .map(|(i, &r)| ForecastPoint {
            month: first.advance(i),
            value: if clip { r.max(0.0) } else { r },
            raw: r,
        })
        .collect()
}

fn sum_components(parts: &[Vec<f64>], len: usize) -> Vec<f64> {
    let mut out = vec![0.0; len];
    for p in parts {
        for (o, v) in out.iter_mut().zip(p) {
            *o += v;
        }
    }
    out
}

fn sample_variance(x: &[f64]) -> f64 {
    let n = x.len() as f64;
    let m = x.iter().sum::<f64>() / n;
    x.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (n - 1.0).max(1.0)
}

/// Additive components of `values` and the index of the observation their
/// first value belongs to: the causal MRA at `level`, or the series itself.
fn components(values: &[f64], config: &HybridConfig, level: Option<usize>) -> Result<(usize, Vec<Vec<f64>>)> {
    match level {
        Some(j) => {
            let d = causal_mra(values, config.family, j)?;
            Ok((equivalent_filter_length(config.family, j) - 1, d.components().map(<[f64]>::to_vec).collect()))
        }
        None => Ok((0, vec![values.to_vec()])),
    }
}

fn fit_component(x: &[f64], route: Route, config: &HybridConfig, index: usize, floor: f64) -> Result<Fitted> {
    if sample_variance(x) < floor {
        return Ok(Fitted::Constant(x.iter().sum::<f64>() / x.len() as f64));
    }
    match route {
        Route::Sarima => {
            let f = match config.order {
                Some(spec) => fit(x, spec)?,
                None => auto_fit(x, config.period, &config.grid)?,
            };
            Ok(Fitted::Sarima(Box::new(f)))
        }
        Route::Transformer => {
            let mut cfg = config.transformer.clone();
            cfg.seed = config.seed.wrapping_add(index as u64);
            Ok(Fitted::Transformer(Box::new(train(x, &cfg)?)))
        }
    }
}

fn summarize(model: &Fitted) -> (Option<SarimaSummary>, Option<TransformerSummary>) {
    match model {
        Fitted::Constant(_) => (None, None),
        Fitted::Sarima(f) => (Some(f.summary()), None),
        Fitted::Transformer(m) => {
            let h = m.history();
            (
                None,
                Some(TransformerSummary {
                    parameter_count: m.parameter_count(),
                    epochs: h.train_loss.len(),
                    best_epoch: h.best_epoch,
                    stopped_early: h.stopped_early,
                    final_train_loss: h.train_loss.last().copied().unwrap_or(f64::NAN),
                    best_validation_loss: h.validation_loss.get(h.best_epoch).copied(),
                }),
            )
        }
    }
}

/// Runs the three-stage wavelet, SARIMA and transformer hybrid.
pub fn run_hybrid(series: &TimeSeries<f64>, config: &HybridConfig) -> Result<HybridResult> {
    run_variant(series, config, Variant::WaveletSarimaTransformer)
}

/// Runs one model variant.
///
/// 1. The series is split chronologically by `config.split_ratio`.
/// 2. Wavelet variants decompose the training part only, at the configured
///    level clamped to the admissible maximum. Every component value is
///    computed from the observations up to its own time, starting once a
///    full filter width of data is available.
/// 3. The hybrid routes each component by the Tsay test; two-stage variants
///    send every component to one model family.
/// 4. Each component is fitted independently (components with negligible
///    variance keep their mean).
/// 5. The test window is predicted dynamically from the end of the training
///    data and the component predictions are summed.
/// 6. Rolling one-step predictions over the test window, each made from a
///    decomposition of the data observed so far, give the residuals for the
///    Ljung-Box test.
/// 7. The complete series is decomposed the same way, every model is conditioned on
///    its full component and the forecasts are extended `config.horizon`
///    months past the end.
///
/// Any component failure aborts the run with the component named.
pub fn run_variant(series: &TimeSeries<f64>, config: &HybridConfig, variant: Variant) -> Result<HybridResult> {
    config.validate()?;
    let n = series.len();
    let needed = 10 * config.period;
    if n < needed {
        return Err(Error::SeriesTooShort { needed, got: n });
    }
    let split = split_train_test(series, config.split_ratio)?;
    let train_x = split.train.values();
    let test_x = split.test.values();
    let (n_train, n_test) = (train_x.len(), test_x.len());

    let level = if variant.uses_wavelet() {
        let max = admissible_level(n_train, config.family)?;
        let requested = config.level.unwrap_or(DEFAULT_LEVEL);
        let used = requested.min(max);
        Some(LevelReport {
            requested,
            used,
            max,
            clamped: used < requested,
            warm_up: equivalent_filter_length(config.family, used) - 1,
        })
    } else {
        None
    };
    let used = level.map(|l| l.used);
    let ids = match used {
        Some(j) => component_ids(j),
        None => vec![ComponentId::Raw],
    };
    let (offset, full_parts) = components(series.values(), config, used)?;
    let n_fit = n_train.checked_sub(offset).filter(|&k| k > 0).ok_or(Error::SeriesTooShort {
        needed: offset + 1,
        got: n_train,
    })?;
    let train_parts: Vec<Vec<f64>> = full_parts.iter().map(|c| c[..n_fit].to_vec()).collect();

    let (routing, routes) = match variant {
        Variant::WaveletSarimaTransformer => {
            let decomposition = MultiresolutionDecomposition {
                family: config.family,
                details: train_parts[..train_parts.len() - 1].to_vec(),
                smooth: train_parts[train_parts.len() - 1].clone(),
            };
            let routing = classify_components(&decomposition, config.alpha)?;
            let routes = routing.iter().map(|r| r.route).collect();
            (routing, routes)
        }
        Variant::Sarima | Variant::WaveletSarima => (Vec::new(), vec![Route::Sarima; ids.len()]),
        Variant::Transformer | Variant::WaveletTransformer => (Vec::new(), vec![Route::Transformer; ids.len()]),
    };

    let floor = VARIANCE_FLOOR * sample_variance(train_x);
    let models: Vec<Fitted> = (0..ids.len())
        .into_par_iter()
        .map(|i| {
            fit_component(&train_parts[i], routes[i], config, i, floor).map_err(|e| e.in_component(ids[i].to_string()))
        })
        .collect::<Result<_>>()?;

    let test_parts: Vec<Vec<f64>> = models
        .par_iter()
        .zip(&train_parts)
        .zip(&ids)
        .map(|((m, x), id)| m.forecast(x, n_test).map_err(|e| e.in_component(id.to_string())))
        .collect::<Result<_>>()?;
    let test_predictions = sum_components(&test_parts, n_test);
    let additivity_error = test_predictions
        .iter()
        .enumerate()
        .map(|(i, &p)| (p - test_parts.iter().map(|c| c[i]).sum::<f64>()).abs())
        .fold(0.0, f64::max);

    let one_step_predictions: Vec<f64> = (n_train..n)
        .into_par_iter()
        .map(|t| {
            let mut total = 0.0;
            for ((m, x), id) in models.iter().zip(&full_parts).zip(&ids) {
                total += m.forecast(&x[..t - offset], 1).map_err(|e| e.in_component(id.to_string()))?[0];
            }
            Ok(total)
        })
        .collect::<Result<_>>()?;
    let residuals: Vec<f64> = test_x.iter().zip(&one_step_predictions).map(|(y, p)| y - p).collect();
    let fitted_params = match (variant, models.first()) {
        (Variant::Sarima, Some(Fitted::Sarima(f))) => f.spec.arma_params(),
        _ => 0,
    };
    let ljung_box = LjungBox {
        lags: config.ljung_box_lags,
        fitted_params,
        alpha: config.alpha,
    }
    .test(&residuals)?;

    let metrics = compute_metrics(test_x, &test_predictions, None)?;
    let taylor = taylor_stats(test_x, &test_predictions).ok();

    let summaries: Vec<_> = models.iter().map(|m| (m.kind(), summarize(m))).collect();
    let future: Vec<FutureState> = models
        .into_iter()
        .zip(full_parts)
        .map(|(model, history)| FutureState { model, history })
        .collect();
    let future_parts: Vec<Vec<f64>> = future
        .par_iter()
        .zip(&ids)
        .map(|(s, id)| {
            s.model
                .forecast(&s.history, config.horizon)
                .map_err(|e| e.in_component(id.to_string()))
        })
        .collect::<Result<_>>()?;
    let forecasts = points(&sum_components(&future_parts, config.horizon), series.end(), config.clip_negative);
    if forecasts.iter().any(|p| !p.raw.is_finite()) || test_predictions.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("reconstructed forecast".into()));
    }

    let components = ids
        .iter()
        .zip(summaries)
        .zip(train_parts.iter().zip(test_parts).zip(future_parts))
        .map(|((&component, (model, (sarima, transformer))), ((train_part, test_predictions), future_forecasts))| {
            ComponentResult {
                component,
                model,
                variance: sample_variance(train_part),
                sarima,
                transformer,
                test_predictions,
                future_forecasts,
            }
        })
        .collect();

    Ok(HybridResult {
        variant,
        label: variant.label(config.family),
        config: config.clone(),
        n_train,
        n_test,
        test_start: split.test.start(),
        level,
        routing,
        components,
        test_observed: test_x.to_vec(),
        test_predictions,
        one_step_predictions,
        additivity_error,
        evaluation: EvaluationReport {
            metrics,
            taylor,
            ljung_box,
        },
        forecasts,
        future,
        first_future: Some(series.end()),
    })
}
