//! `wst`: command-line driver for wavelet decomposition, SARIMA and
//! transformer fitting, residual diagnostics, evaluation and the hybrid
//! forecasting pipeline.
//!
//! Exit codes: 0 success, 2 bad flags, 3 data errors, 4 model failures.
//! Failures print one `error[<kind>]: <message>` line on standard error.

mod args;
mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use wst_core::pipeline::Variant;
use wst_core::WaveletFamily;

use args::{ConfigArgs, Level, Order, SeriesArgs, TestKind};
use commands::CliError;

#[derive(Debug, Parser)]
#[command(name = "wst", version, about = "Hybrid wavelet, SARIMA and transformer forecasting of monthly series")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write the MODWT multiresolution analysis as CSV: t, D1..DJ, SJ, reconstruction_error
    Decompose {
        #[command(flatten)]
        series: SeriesArgs,
        /// Wavelet family
        #[arg(long, value_name = "haar|db4|sym4|coif3", default_value = "haar", value_parser = |s: &str| s.parse::<WaveletFamily>().map_err(|e| e.to_string()))]
        family: WaveletFamily,
        /// Decomposition level; auto is min(8, admissible maximum)
        #[arg(long, value_name = "auto|J", default_value = "auto")]
        level: Level,
        /// Output CSV (standard output when omitted)
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Fit a seasonal ARIMA model to the series and print it as JSON
    FitSarima {
        #[command(flatten)]
        series: SeriesArgs,
        /// Configuration file; its [sarima] section and run.period apply
        #[arg(long, value_name = "FILE")]
        config: Option<PathBuf>,
        /// Orders to fit, or auto for the AIC grid search
        #[arg(long, value_name = "auto|p,d,q,P,D,Q,s")]
        order: Option<Order>,
        /// Output JSON (standard output when omitted)
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Train a transformer on the series and write a checkpoint
    FitTransformer {
        #[command(flatten)]
        series: SeriesArgs,
        /// Configuration file; its [transformer] section and run.seed apply
        #[arg(long, value_name = "FILE")]
        config: Option<PathBuf>,
        /// Training seed
        #[arg(long, value_name = "N")]
        seed: Option<u64>,
        /// Checkpoint file to write
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
    },
    /// Forecast a series recursively with a transformer checkpoint
    Predict {
        #[command(flatten)]
        series: SeriesArgs,
        /// Checkpoint written by fit-transformer
        #[arg(long, value_name = "FILE")]
        model: PathBuf,
        /// Months to forecast
        #[arg(long, value_name = "H", default_value_t = 24)]
        horizon: usize,
        /// Output CSV month,value (standard output when omitted)
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Test a residual column for autocorrelation (Ljung-Box) or nonlinearity (Tsay)
    Diagnose {
        /// Headed numeric CSV
        #[arg(long, value_name = "CSV")]
        data: PathBuf,
        /// Column to test (the first column when omitted)
        #[arg(long, value_name = "NAME")]
        column: Option<String>,
        /// Test to run
        #[arg(long, value_enum, default_value_t = TestKind::LjungBox)]
        test: TestKind,
        /// Ljung-Box lags
        #[arg(long, value_name = "M", default_value_t = 12)]
        lags: usize,
        /// ARMA parameters estimated before the residuals, subtracted from the degrees of freedom
        #[arg(long, value_name = "K", default_value_t = 0)]
        fitted_params: usize,
        /// Significance level
        #[arg(long, value_name = "A", default_value_t = 0.05)]
        alpha: f64,
        /// Output JSON (standard output when omitted)
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Score predictions against observations: accuracy measures and Taylor statistics as JSON
    Evaluate {
        /// CSV with observation and prediction columns
        #[arg(long, value_name = "CSV")]
        data: PathBuf,
        /// Observation column
        #[arg(long, value_name = "NAME", default_value = "observed")]
        observed: String,
        /// Prediction column
        #[arg(long, value_name = "NAME", default_value = "predicted")]
        predicted: String,
        /// Output JSON (standard output when omitted)
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Run one model variant end to end; writes the JSON report and forecasts.csv beside it
    Run {
        #[command(flatten)]
        series: SeriesArgs,
        #[command(flatten)]
        config: ConfigArgs,
        /// Model variant
        #[arg(long, value_name = "NAME", default_value = "wavelet-sarima-transformer", value_parser = args::variant)]
        variant: Variant,
        /// Report file; forecasts.csv is written to the same directory
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
    },
    /// Run all fourteen model variants and write the accuracy table as CSV
    Compare {
        #[command(flatten)]
        series: SeriesArgs,
        #[command(flatten)]
        config: ConfigArgs,
        /// Accuracy table: one row per measure, one column per model
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
        /// Also write the Taylor statistics of every model
        #[arg(long, value_name = "FILE")]
        taylor_out: Option<PathBuf>,
    },
    /// Run one model variant and write its forecasts past the end of the series as CSV month,value
    Forecast {
        #[command(flatten)]
        series: SeriesArgs,
        #[command(flatten)]
        config: ConfigArgs,
        /// Model variant
        #[arg(long, value_name = "NAME", default_value = "wavelet-sarima-transformer", value_parser = args::variant)]
        variant: Variant,
        /// Output CSV (standard output when omitted)
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Write Taylor statistics (model, r, std_obs, std_pred, centered_rmse) for every prediction column
    TaylorExport {
        /// CSV with an observation column and one column per model
        #[arg(long, value_name = "CSV")]
        data: PathBuf,
        /// Observation column
        #[arg(long, value_name = "NAME", default_value = "observed")]
        observed: String,
        /// Output CSV (standard output when omitted)
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
}

fn dispatch(command: Command) -> Result<(), CliError> {
    match command {
        Command::Decompose {
            series,
            family,
            level,
            out,
        } => commands::decompose(&series, family, level, out.as_deref()),
        Command::FitSarima {
            series,
            config,
            order,
            out,
        } => commands::fit_sarima(&series, config.as_deref(), order, out.as_deref()),
        Command::FitTransformer {
            series,
            config,
            seed,
            out,
        } => commands::fit_transformer(&series, config.as_deref(), seed, &out),
        Command::Predict {
            series,
            model,
            horizon,
            out,
        } => commands::predict(&series, &model, horizon, out.as_deref()),
        Command::Diagnose {
            data,
            column,
            test,
            lags,
            fitted_params,
            alpha,
            out,
        } => commands::diagnose(&data, column.as_deref(), test, lags, fitted_params, alpha, out.as_deref()),
        Command::Evaluate {
            data,
            observed,
            predicted,
            out,
        } => commands::evaluate(&data, &observed, &predicted, out.as_deref()),
        Command::Run {
            series,
            config,
            variant,
            out,
        } => commands::run(&series, &config, variant, &out),
        Command::Compare {
            series,
            config,
            out,
            taylor_out,
        } => commands::compare(&series, &config, &out, taylor_out.as_deref()),
        Command::Forecast {
            series,
            config,
            variant,
            out,
        } => commands::forecast(&series, &config, variant, out.as_deref()),
        Command::TaylorExport { data, observed, out } => commands::taylor_export(&data, &observed, out.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.line());
            ExitCode::from(e.exit_code())
        }
    }
}
