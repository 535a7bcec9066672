use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use wst_core::diagnostics::{tsay_test, ArOrder, LjungBox};
use wst_core::metrics::{compute_metrics, taylor_stats};
use wst_core::pipeline::{self, load_config, run_variant, ForecastPoint, HybridConfig, Variant, DEFAULT_LEVEL};
use wst_core::sarima::{auto_fit, fit};
use wst_core::series::read_numeric_columns;
use wst_core::transformer::train;
use wst_core::wavelet::{admissible_level, mra};
use wst_core::{ErrorKind, MetricReport, TaylorStats, TransformerModel, WaveletFamily};

use crate::args::{ConfigArgs, Level, Order, SeriesArgs, TestKind};

#[derive(Debug)]
pub enum CliError {
    Core(wst_core::Error),
    Output { path: PathBuf, source: std::io::Error },
}

impl From<wst_core::Error> for CliError {
    fn from(e: wst_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Output { .. } => 3,
            CliError::Core(e) => match e.kind() {
                ErrorKind::Data => 3,
                ErrorKind::Model => 4,
            },
        }
    }

    /// `error[<kind>]: <message>` on a single line.
    pub fn line(&self) -> String {
        let (kind, message) = match self {
            CliError::Output { path, source } => ("data", format!("cannot write {}: {source}", path.display())),
            CliError::Core(e) => match e.kind() {
                ErrorKind::Data => ("data", e.to_string()),
                ErrorKind::Model => ("model", e.to_string()),
            },
        };
        format!("error[{kind}]: {}", message.replace(['\n', '\r'], " "))
    }
}

type Result<T> = std::result::Result<T, CliError>;

/// Writes `text` to `out`, or to standard output.
fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => {
            std::fs::write(path, text).map_err(|source| CliError::Output {
                path: path.to_path_buf(),
                source,
            })?;
            eprintln!("wrote {}", path.display());
            Ok(())
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|()| stdout.flush())
                .map_err(|source| CliError::Output {
                    path: PathBuf::from("<stdout>"),
                    source,
                })
        }
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn csv_text(header: &[String], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory csv");
    for row in rows {
        w.write_record(&row).expect("in-memory csv");
    }
    String::from_utf8(w.into_inner().expect("in-memory csv")).expect("csv output is utf-8")
}

fn forecast_csv(points: &[ForecastPoint]) -> String {
    csv_text(
        &["month".into(), "value".into()],
        points.iter().map(|p| vec![p.month.to_string(), p.value.to_string()]),
    )
}

fn column<'a>(cols: &'a [(String, Vec<f64>)], name: &str, path: &Path) -> Result<&'a [f64]> {
    cols.iter()
        .find(|(n, _)| n.eq_ignore_ascii_case(name))
        .map(|(_, v)| v.as_slice())
        .ok_or_else(|| {
            CliError::Core(wst_core::Error::InvalidArgument(format!(
                "{} has no column '{name}'",
                path.display()
            )))
        })
}

fn config_or_default(path: Option<&Path>) -> Result<HybridConfig> {
    Ok(match path {
        Some(p) => load_config(p)?,
        None => HybridConfig::default(),
    })
}

pub fn decompose(series: &SeriesArgs, family: WaveletFamily, level: Level, out: Option<&Path>) -> Result<()> {
    let s = series.load()?;
    let max = admissible_level(s.len(), family)?;
    let j = match level {
        Level::Auto => DEFAULT_LEVEL.min(max),
        Level::Fixed(j) if j > max => return Err(wst_core::Error::LevelTooHigh { requested: j, max }.into()),
        Level::Fixed(j) => j,
    };
    let d = mra(s.values(), family, j)?;
    let total = d.reconstruct();
    let mut header = vec!["t".to_string()];
    header.extend((1..=j).map(|k| format!("D{k}")));
    header.push(format!("S{j}"));
    header.push("reconstruction_error".into());
    let rows = (0..s.len()).map(|t| {
        let mut row = vec![s.time_of(t).to_string()];
        row.extend(d.components().map(|c| c[t].to_string()));
        row.push((s.values()[t] - total[t]).to_string());
        row
    });
    emit(out, &csv_text(&header, rows))
}

pub fn fit_sarima(series: &SeriesArgs, config: Option<&Path>, order: Option<Order>, out: Option<&Path>) -> Result<()> {
    let s = series.load()?;
    let cfg = config_or_default(config)?;
    let spec = match order {
        Some(o) => o.get(),
        None => cfg.order,
    };
    let f = match spec {
        Some(spec) => fit(s.values(), spec)?,
        None => auto_fit(s.values(), cfg.period, &cfg.grid)?,
    };
    emit(out, &json(&f.summary()))
}

pub fn fit_transformer(series: &SeriesArgs, config: Option<&Path>, seed: Option<u64>, out: &Path) -> Result<()> {
    let s = series.load()?;
    let cfg = config_or_default(config)?;
    let mut tc = cfg.transformer;
    tc.seed = seed.unwrap_or(cfg.seed);
    let model = train(s.values(), &tc)?;
    model.save(out)?;
    let h = model.history();
    eprintln!(
        "trained {} parameters for {} epochs (best {}), wrote {}",
        model.parameter_count(),
        h.train_loss.len(),
        h.best_epoch + 1,
        out.display()
    );
    Ok(())
}

pub fn predict(series: &SeriesArgs, model: &Path, horizon: usize, out: Option<&Path>) -> Result<()> {
    let s = series.load()?;
    let m = TransformerModel::load(model)?;
    let values = m.forecast_recursive(s.values(), horizon)?;
    let rows = values
        .iter()
        .enumerate()
        .map(|(i, v)| vec![s.end().advance(i).to_string(), v.to_string()]);
    emit(out, &csv_text(&["month".into(), "value".into()], rows))
}

pub fn diagnose(
    data: &Path,
    column_name: Option<&str>,
    test: TestKind,
    lags: usize,
    fitted_params: usize,
    alpha: f64,
    out: Option<&Path>,
) -> Result<()> {
    let cols = read_numeric_columns(data)?;
    let x = match column_name {
        Some(name) => column(&cols, name, data)?,
        None => cols.first().map(|(_, v)| v.as_slice()).ok_or_else(|| {
            CliError::Core(wst_core::Error::InvalidArgument(format!("{} has no columns", data.display())))
        })?,
    };
    let result = match test {
        TestKind::LjungBox => LjungBox {
            lags,
            fitted_params,
            alpha,
        }
        .test(x)?,
        TestKind::Tsay => tsay_test(x, ArOrder::default(), alpha)?,
    };
    emit(out, &json(&result))
}

#[derive(Serialize)]
struct Evaluation {
    metrics: MetricReport,
    taylor: Option<TaylorStats>,
}

pub fn evaluate(data: &Path, observed: &str, predicted: &str, out: Option<&Path>) -> Result<()> {
    let cols = read_numeric_columns(data)?;
    let obs = column(&cols, observed, data)?;
    let pred = column(&cols, predicted, data)?;
    let report = Evaluation {
        metrics: compute_metrics(obs, pred, None)?,
        taylor: taylor_stats(obs, pred).ok(),
    };
    emit(out, &json(&report))
}

pub fn run(series: &SeriesArgs, config: &ConfigArgs, variant: Variant, out: &Path) -> Result<()> {
    let s = series.load()?;
    let cfg = config.resolve()?;
    let result = run_variant(&s, &cfg, variant)?;
    emit(Some(out), &json(&result))?;
    emit(Some(&out.with_file_name("forecasts.csv")), &forecast_csv(&result.forecasts))
}

pub fn compare(series: &SeriesArgs, config: &ConfigArgs, out: &Path, taylor_out: Option<&Path>) -> Result<()> {
    let s = series.load()?;
    let cfg = config.resolve()?;
    let table = pipeline::compare(&s, &cfg)?;
    emit(Some(out), &table.to_csv()?)?;
    if let Some(path) = taylor_out {
        emit(Some(path), &table.taylor_csv()?)?;
    }
    Ok(())
}

pub fn forecast(series: &SeriesArgs, config: &ConfigArgs, variant: Variant, out: Option<&Path>) -> Result<()> {
    let s = series.load()?;
    let cfg = config.resolve()?;
    let result = run_variant(&s, &cfg, variant)?;
    emit(out, &forecast_csv(&result.forecasts))
}

pub fn taylor_export(data: &Path, observed: &str, out: Option<&Path>) -> Result<()> {
    let cols = read_numeric_columns(data)?;
    let obs = column(&cols, observed, data)?;
    let mut rows = Vec::new();
    for (name, pred) in cols.iter().filter(|(n, _)| !n.eq_ignore_ascii_case(observed)) {
        let t = taylor_stats(obs, pred)?;
        rows.push(vec![
            name.clone(),
            t.correlation.to_string(),
            t.std_obs.to_string(),
            t.std_pred.to_string(),
            t.centered_rmse.to_string(),
        ]);
    }
    if rows.is_empty() {
        return Err(wst_core::Error::InvalidArgument(format!("{} has no prediction columns", data.display())).into());
    }
    let header = ["model", "r", "std_obs", "std_pred", "centered_rmse"].map(String::from);
    emit(out, &csv_text(&header, rows))
}
