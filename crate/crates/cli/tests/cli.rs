use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const QUICK_CONFIG: &str = "\
[wavelet]
family = haar
level = 2

[run]
horizon = 6
seed = 7

[sarima]
max_p = 1
max_q = 1
max_seasonal_p = 1
max_seasonal_q = 1

[transformer]
preset = compact
max_epochs = 5
";

fn wst(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wst")).args(args).output().unwrap()
}

fn ok(args: &[&str]) -> String {
    let out = wst(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn failure(args: &[&str]) -> (i32, String) {
    let out = wst(args);
    let stderr = String::from_utf8(out.stderr).unwrap();
    (out.status.code().unwrap(), stderr)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn noise(n: usize, seed: u64) -> Vec<f64> {
    let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    (0..n)
        .map(|_| {
            let mut u = [0.0; 2];
            for v in &mut u {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                *v = ((state >> 11) as f64 + 0.5) / (1u64 << 53) as f64;
            }
            (-2.0 * u[0].ln()).sqrt() * (2.0 * std::f64::consts::PI * u[1]).cos()
        })
        .collect()
}

struct Workspace {
    dir: TempDir,
}

impl Workspace {
    fn new() -> Self {
        let w = Workspace {
            dir: TempDir::new().unwrap(),
        };
        let e = noise(240, 3);
        let mut csv = String::from("date,value\n");
        for (t, e) in e.iter().enumerate() {
            let v = 50.0 + 10.0 * (2.0 * std::f64::consts::PI * t as f64 / 12.0).sin() + e;
            csv.push_str(&format!("{}-{:02},{v}\n", 1990 + t / 12, t % 12 + 1));
        }
        w.write("series.csv", &csv);
        w.write("run.cfg", QUICK_CONFIG);
        w
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn write(&self, name: &str, text: &str) -> PathBuf {
        let p = self.path(name);
        std::fs::write(&p, text).unwrap();
        p
    }

    fn read(&self, name: &str) -> String {
        std::fs::read_to_string(self.path(name)).unwrap()
    }
}

fn rows(text: &str) -> Vec<Vec<String>> {
    text.lines().map(|l| l.split(',').map(String::from).collect()).collect()
}

#[test]
fn help_lists_every_flag() {
    let expected: &[(&str, &[&str])] = &[
        ("decompose", &["--data", "--column", "--filter", "--family", "--level", "--out"]),
        ("fit-sarima", &["--data", "--config", "--order", "--out"]),
        ("fit-transformer", &["--data", "--config", "--seed", "--out"]),
        ("predict", &["--data", "--model", "--horizon", "--out"]),
        ("diagnose", &["--data", "--column", "--test", "--lags", "--fitted-params", "--alpha", "--out"]),
        ("evaluate", &["--data", "--observed", "--predicted", "--out"]),
        (
            "run",
            &["--data", "--config", "--family", "--level", "--ratio", "--horizon", "--seed", "--order", "--variant", "--out"],
        ),
        (
            "compare",
            &["--data", "--config", "--family", "--level", "--ratio", "--horizon", "--seed", "--order", "--out", "--taylor-out"],
        ),
        (
            "forecast",
            &["--data", "--config", "--family", "--level", "--ratio", "--horizon", "--seed", "--order", "--variant", "--out"],
        ),
        ("taylor-export", &["--data", "--observed", "--out"]),
    ];
    let top = ok(&["--help"]);
    for (command, flags) in expected {
        assert!(top.contains(command), "{command} missing from top-level help");
        let help = ok(&[command, "--help"]);
        for flag in *flags {
            assert!(help.contains(flag), "{command} --help lacks {flag}");
        }
    }
}

#[test]
fn decompose_reconstructs_the_series() {
    let w = Workspace::new();
    let data = w.path("series.csv");
    for family in ["haar", "db4", "sym4", "coif3"] {
        let text = ok(&["decompose", "--family", family, "--level", "3", "--data", s(&data)]);
        let table = rows(&text);
        assert_eq!(table[0], ["t", "D1", "D2", "D3", "S3", "reconstruction_error"]);
        assert_eq!(table.len(), 241);
        assert_eq!(table[1][0], "1990-01");
        let worst = table[1..]
            .iter()
            .map(|r| r[5].parse::<f64>().unwrap().abs())
            .fold(0.0, f64::max);
        assert!(worst <= 1e-8, "{family}: {worst}");
    }
    let auto = rows(&ok(&["decompose", "--data", s(&data)]));
    assert_eq!(auto[0].len(), 1 + 7 + 2);
}

#[test]
fn run_writes_the_report_and_forecasts() {
    let w = Workspace::new();
    let report = w.path("report.json");
    ok(&["run", "--config", s(&w.path("run.cfg")), "--data", s(&w.path("series.csv")), "--out", s(&report)]);
    let json: Value = serde_json::from_str(&w.read("report.json")).unwrap();
    for key in ["config", "routing", "components", "evaluation", "forecasts"] {
        assert!(json.get(key).is_some(), "report lacks {key}");
    }
    assert_eq!(json["routing"].as_array().unwrap().len(), 3);
    assert!(json["evaluation"]["ljung_box"]["p_value"].is_f64());
    let forecasts = rows(&w.read("forecasts.csv"));
    assert_eq!(forecasts[0], ["month", "value"]);
    assert_eq!(forecasts.len(), 7);
    assert_eq!(forecasts[1][0], "2010-01");
    assert_eq!(forecasts[6][0], "2010-06");
}

#[test]
fn flags_override_the_config_file() {
    let w = Workspace::new();
    let report = w.path("report.json");
    ok(&[
        "run",
        "--config",
        s(&w.path("run.cfg")),
        "--data",
        s(&w.path("series.csv")),
        "--variant",
        "wavelet-sarima",
        "--family",
        "db4",
        "--level",
        "1",
        "--horizon",
        "3",
        "--out",
        s(&report),
    ]);
    let json: Value = serde_json::from_str(&w.read("report.json")).unwrap();
    assert_eq!(json["level"]["used"], 1);
    assert_eq!(json["components"].as_array().unwrap().len(), 2);
    assert_eq!(json["forecasts"].as_array().unwrap().len(), 3);
    assert_eq!(rows(&w.read("forecasts.csv")).len(), 4);
}

#[test]
fn compare_writes_the_accuracy_table() {
    let w = Workspace::new();
    let (table, taylor) = (w.path("table.csv"), w.path("taylor.csv"));
    ok(&[
        "compare",
        "--config",
        s(&w.path("run.cfg")),
        "--data",
        s(&w.path("series.csv")),
        "--out",
        s(&table),
        "--taylor-out",
        s(&taylor),
    ]);
    let text = w.read("table.csv");
    let t = rows(&text);
    assert_eq!(t.len(), 9);
    assert!(t.iter().all(|r| r.len() == 15));
    assert_eq!(t[0][0], "measure");
    assert!(!text.contains("NaN") && !text.contains("inf"));
    let tay = rows(&w.read("taylor.csv"));
    assert_eq!(tay[0], ["model", "r", "std_obs", "std_pred", "centered_rmse"]);
    assert_eq!(tay.len(), 15);
}

#[test]
fn commands_are_idempotent() {
    let w = Workspace::new();
    let (cfg, data) = (w.path("run.cfg"), w.path("series.csv"));
    let mut reports = Vec::new();
    for name in ["a.json", "b.json"] {
        ok(&["run", "--config", s(&cfg), "--data", s(&data), "--out", s(&w.path(name))]);
        reports.push((w.read(name), w.read("forecasts.csv")));
    }
    assert_eq!(reports[0], reports[1]);
    let forecast = |seed: &str| ok(&["forecast", "--config", s(&cfg), "--data", s(&data), "--seed", seed]);
    assert_eq!(forecast("11"), forecast("11"));
    let decompose = || ok(&["decompose", "--family", "sym4", "--level", "4", "--data", s(&data)]);
    assert_eq!(decompose(), decompose());
    let fit = || ok(&["fit-sarima", "--order", "auto", "--config", s(&cfg), "--data", s(&data)]);
    assert_eq!(fit(), fit());
}

#[test]
fn fit_sarima_prints_the_model() {
    let w = Workspace::new();
    let text = ok(&["fit-sarima", "--order", "1,0,0,0,1,1,12", "--data", s(&w.path("series.csv"))]);
    let json: Value = serde_json::from_str(&text).unwrap();
    for key in ["spec", "phi", "theta", "seasonal_phi", "seasonal_theta", "sigma2", "loglik", "aic", "bic"] {
        assert!(json.get(key).is_some(), "summary lacks {key}");
    }
    assert_eq!(json["phi"].as_array().unwrap().len(), 1);
    assert_eq!(json["seasonal_theta"].as_array().unwrap().len(), 1);
    let auto: Value = serde_json::from_str(&ok(&[
        "fit-sarima",
        "--order",
        "auto",
        "--config",
        s(&w.path("run.cfg")),
        "--data",
        s(&w.path("series.csv")),
    ]))
    .unwrap();
    assert!(auto["aic"].as_f64().unwrap().is_finite());
}

#[test]
fn transformer_checkpoints_round_trip() {
    let w = Workspace::new();
    let (cfg, data, model) = (w.path("run.cfg"), w.path("series.csv"), w.path("model.json"));
    ok(&["fit-transformer", "--config", s(&cfg), "--data", s(&data), "--seed", "3", "--out", s(&model)]);
    let first = ok(&["predict", "--data", s(&data), "--model", s(&model), "--horizon", "5"]);
    let t = rows(&first);
    assert_eq!(t[0], ["month", "value"]);
    assert_eq!(t.len(), 6);
    assert_eq!(t[1][0], "2010-01");
    assert!(t[1..].iter().all(|r| r[1].parse::<f64>().unwrap().is_finite()));
    assert_eq!(first, ok(&["predict", "--data", s(&data), "--model", s(&model), "--horizon", "5"]));
}

#[test]
fn diagnose_reports_both_tests() {
    let w = Workspace::new();
    let mut csv = String::from("residual\n");
    for v in noise(300, 9) {
        csv.push_str(&format!("{v}\n"));
    }
    let data = w.write("residuals.csv", &csv);
    let lb: Value = serde_json::from_str(&ok(&["diagnose", "--data", s(&data)])).unwrap();
    assert_eq!(lb["df"], 12);
    let p = lb["p_value"].as_f64().unwrap();
    assert!((0.0..=1.0).contains(&p));
    let adjusted: Value = serde_json::from_str(&ok(&[
        "diagnose",
        "--data",
        s(&data),
        "--column",
        "residual",
        "--lags",
        "10",
        "--fitted-params",
        "2",
    ]))
    .unwrap();
    assert_eq!(adjusted["df"], 8);
    let tsay: Value = serde_json::from_str(&ok(&["diagnose", "--data", s(&data), "--test", "tsay"])).unwrap();
    assert_eq!(tsay["df"].as_array().unwrap().len(), 2);
}

#[test]
fn evaluate_and_taylor_export_score_predictions() {
    let w = Workspace::new();
    let obs = noise(60, 1);
    let pred = noise(60, 2);
    let mut csv = String::from("observed,predicted,perfect\n");
    for i in 0..60 {
        csv.push_str(&format!("{},{},{}\n", obs[i] + 10.0, pred[i] + 10.0, obs[i] + 10.0));
    }
    let data = w.write("scores.csv", &csv);
    let perfect: Value = serde_json::from_str(&ok(&["evaluate", "--data", s(&data), "--predicted", "perfect"])).unwrap();
    assert_eq!(perfect["metrics"]["rmse"], 0.0);
    assert_eq!(perfect["taylor"]["correlation"].as_f64().unwrap(), 1.0);
    let noisy: Value = serde_json::from_str(&ok(&["evaluate", "--data", s(&data)])).unwrap();
    let t = &noisy["taylor"];
    let (r, so, sp, e) = (
        t["correlation"].as_f64().unwrap(),
        t["std_obs"].as_f64().unwrap(),
        t["std_pred"].as_f64().unwrap(),
        t["centered_rmse"].as_f64().unwrap(),
    );
    assert!((e * e - (so * so + sp * sp - 2.0 * so * sp * r)).abs() <= 1e-9 * e * e);
    let table = rows(&ok(&["taylor-export", "--data", s(&data)]));
    assert_eq!(table[0], ["model", "r", "std_obs", "std_pred", "centered_rmse"]);
    assert_eq!(table.len(), 3);
    assert_eq!((table[1][0].as_str(), table[2][0].as_str()), ("predicted", "perfect"));
}

#[test]
fn failures_use_the_exit_code_taxonomy() {
    let w = Workspace::new();
    let data = w.path("series.csv");
    let single_line = |stderr: &str, kind: &str| {
        let line = stderr.trim_end();
        assert!(!line.contains('\n'), "{stderr}");
        assert!(line.starts_with(&format!("error[{kind}]: ")), "{stderr}");
    };

    for args in [
        vec!["decompose", "--data", s(&data), "--bogus"],
        vec!["decompose", "--data", s(&data), "--family", "db9"],
        vec!["run", "--data", s(&data), "--out", "x.json", "--variant", "nope"],
        vec!["fit-sarima", "--data", s(&data), "--order", "1,0,0"],
        vec!["frobnicate"],
        vec!["run", "--data", s(&data)],
    ] {
        assert_eq!(failure(&args).0, 2, "{args:?}");
    }

    let missing = w.path("missing.csv");
    let (code, stderr) = failure(&["decompose", "--data", s(&missing)]);
    assert_eq!(code, 3);
    single_line(&stderr, "data");

    let (code, stderr) = failure(&["decompose", "--data", s(&data), "--level", "30"]);
    assert_eq!(code, 3);
    single_line(&stderr, "data");

    let bad_cfg = w.write("bad.cfg", "[run]\nratio = 0.8\nbogus = 1\n");
    let (code, stderr) = failure(&["run", "--config", s(&bad_cfg), "--data", s(&data), "--out", s(&w.path("r.json"))]);
    assert_eq!(code, 3);
    single_line(&stderr, "data");
    assert!(stderr.contains("line 3"), "{stderr}");
    assert!(!w.path("r.json").exists());

    let (code, _) = failure(&["run", "--data", s(&data), "--ratio", "1.5", "--out", s(&w.path("r.json"))]);
    assert_eq!(code, 3);

    let diverge = w.write(
        "diverge.cfg",
        "[transformer]\npreset = compact\nlearning_rate = 1e300\nmax_epochs = 3\n",
    );
    let (code, stderr) = failure(&["fit-transformer", "--config", s(&diverge), "--data", s(&data), "--out", s(&w.path("m.json"))]);
    assert_eq!(code, 4);
    single_line(&stderr, "model");
}
