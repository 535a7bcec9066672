use serde::Serialize;

use crate::error::{Error, Result};
use crate::metrics::MetricReport;
use crate::series::TimeSeries;
use crate::wavelet::WaveletFamily;

use super::run::{run_variant, HybridResult};
use super::{HybridConfig, Variant};

/// Row labels of the accuracy table.
pub const METRIC_ROWS: [&str; 8] = [
    "RMSE",
    "MAE",
    "SMAPE(%)",
    "Willmott's d",
    "Skill Score",
    "Abs. Bias(%)",
    "Expl. Var.",
    "Legates-McCabe E1",
];

fn metric_column(m: &MetricReport<f64>) -> [Option<f64>; 8] {
    [
        Some(m.rmse),
        Some(m.mae),
        Some(m.smape),
        m.willmott_d,
        m.skill_score,
        m.pbias.map(f64::abs),
        m.explained_variance,
        m.legates_mccabe_e1,
    ]
}

/// The fourteen columns: the two single models, then the wavelet-SARIMA,
/// wavelet-transformer and three-stage hybrids, each for every family.
pub fn variant_matrix() -> Vec<(Variant, WaveletFamily)> {
    let mut out = vec![
        (Variant::Sarima, WaveletFamily::Haar),
        (Variant::Transformer, WaveletFamily::Haar),
    ];
    for v in [
        Variant::WaveletSarima,
        Variant::WaveletTransformer,
        Variant::WaveletSarimaTransformer,
    ] {
        out.extend(WaveletFamily::ALL.iter().map(|&f| (v, f)));
    }
    out
}

/// Results of every model of the comparison, in column order.
#[derive(Debug, Clone, Serialize)]
pub struct ComparisonTable {
    pub results: Vec<HybridResult>,
}

impl ComparisonTable {
    pub fn columns(&self) -> Vec<&str> {
        self.results.iter().map(|r| r.label.as_str()).collect()
    }

    /// One row per accuracy measure; undefined values are `None`.
    pub fn rows(&self) -> Vec<(&'static str, Vec<Option<f64>>)> {
        let cols: Vec<[Option<f64>; 8]> = self
            .results
            .iter()
            .map(|r| metric_column(&r.evaluation.metrics))
            .collect();
        METRIC_ROWS
            .iter()
            .enumerate()
            .map(|(i, &name)| (name, cols.iter().map(|c| c[i]).collect()))
            .collect()
    }

    /// `measure,<model>...` with one row per accuracy measure; undefined
    /// values are left empty.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::InvalidArgument(format!("csv output: {e}"));
        let mut header = vec!["measure"];
        header.extend(self.columns());
        w.write_record(&header).map_err(io)?;
        for (name, values) in self.rows() {
            let mut rec = vec![name.to_string()];
            rec.extend(values.iter().map(|v| v.map_or(String::new(), |x| x.to_string())));
            w.write_record(&rec).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::InvalidArgument(format!("csv output: {e}")))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    /// `model,r,std_obs,std_pred,centered_rmse`, one row per model with
    /// defined Taylor statistics.
    pub fn taylor_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::InvalidArgument(format!("csv output: {e}"));
        w.write_record(["model", "r", "std_obs", "std_pred", "centered_rmse"]).map_err(io)?;
        for r in &self.results {
            if let Some(t) = &r.evaluation.taylor {
                w.write_record([
                    r.label.clone(),
                    t.correlation.to_string(),
                    t.std_obs.to_string(),
                    t.std_pred.to_string(),
                    t.centered_rmse.to_string(),
                ])
                .map_err(io)?;
            }
        }
        let bytes = w.into_inner().map_err(|e| Error::InvalidArgument(format!("csv output: {e}")))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

/// Runs all fourteen models of [`variant_matrix`] on the same split.
pub fn compare(series: &TimeSeries<f64>, config: &HybridConfig) -> Result<ComparisonTable> {
    let results = variant_matrix()
        .into_iter()
        .map(|(variant, family)| {
            let cfg = HybridConfig {
                family,
                ..config.clone()
            };
            run_variant(series, &cfg, variant)
        })
        .collect::<Result<_>>()?;
    Ok(ComparisonTable { results })
}
