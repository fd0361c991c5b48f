use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use safeforecast::audit::validate_log;
use safeforecast::{Frequency, TimeSeries, Timestamp};

const CLOCK: &str = "2026-04-26T16:31:44Z";

fn bin(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_safeforecast"))
        .current_dir(dir)
        .args([
            "--fixed-clock",
            CLOCK,
            "--output-dir",
            "out",
            "--log-dir",
            "logs",
        ])
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write_config(dir: &Path, json: &str) {
    fs::write(dir.join("config.json"), json).unwrap();
}

/// 224 hourly points starting 2025-03-03 with a daily cycle and a small wobble.
fn write_fixture(dir: &Path) -> String {
    let values: Vec<f64> = (0..224)
        .map(|i| {
            let t = i as f64;
            30.0 + 4.0 * (t * std::f64::consts::TAU / 24.0).sin() + 0.7 * (t * 0.37).cos()
        })
        .collect();
    let s = TimeSeries::new(
        "load",
        Timestamp::ymd_hms(2025, 3, 3, 0, 0, 0),
        Frequency::hours(1),
        values,
    )
    .unwrap();
    let csv = safeforecast::series::series_to_csv(&s);
    fs::write(dir.join("load.csv"), &csv).unwrap();
    csv
}

fn single_log(dir: &Path) -> std::path::PathBuf {
    let logs: Vec<_> = fs::read_dir(dir.join("logs"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    assert_eq!(logs.len(), 1, "{logs:?}");
    logs.into_iter().next().unwrap()
}

#[test]
fn demo_writes_all_artefacts() {
    let dir = tempfile::tempdir().unwrap();
    write_config(dir.path(), r#"{"console_level":"WARNING","n_boot":100}"#);
    let o = bin(dir.path(), &["--config", "config.json", "demo"]);
    assert!(o.status.success(), "{}", stderr(&o));

    let log = dir.path().join("logs/demo_20260426_163144.log");
    let report = validate_log(&log).unwrap();
    assert!(report.is_clean(), "{:?}", report.violations);
    assert!(report.lines >= 5);

    let forecast = fs::read_to_string(dir.path().join("out/forecast.csv")).unwrap();
    let mut lines = forecast.lines();
    assert_eq!(lines.next(), Some("timestamp,point,lower,upper"));
    assert_eq!(lines.count(), 24);

    let metrics = fs::read_to_string(dir.path().join("out/metrics.csv")).unwrap();
    assert!(metrics.starts_with("fold,mae,mse,rmse,mape\n"));
    assert!(safeforecast::load_model(dir.path().join("out/model.json")).is_ok());
}

#[test]
fn backtest_on_csv_yields_one_row_per_fold() {
    let dir = tempfile::tempdir().unwrap();
    write_fixture(dir.path());
    write_config(
        dir.path(),
        r#"{"input":"load.csv","lags":24,"console_level":"ERROR",
            "plan":{"initial_train_size":80,"steps":24,"horizon":24}}"#,
    );
    let o = bin(dir.path(), &["--config", "config.json", "backtest"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let metrics = fs::read_to_string(dir.path().join("out/metrics.csv")).unwrap();
    let rows: Vec<&str> = metrics.lines().collect();
    assert_eq!(rows.len(), 1 + 6, "{metrics}");
    for (k, row) in rows[1..].iter().enumerate() {
        assert!(row.starts_with(&format!("{k},")));
    }
    assert!(validate_log(single_log(dir.path())).unwrap().is_clean());
}

#[test]
fn fit_then_predict_leaves_inputs_untouched() {
    let dir = tempfile::tempdir().unwrap();
    let csv = write_fixture(dir.path());
    let config =
        r#"{"input":"load.csv","lags":[1,2,24],"horizon":12,"n_boot":50,"console_level":"ERROR"}"#;
    write_config(dir.path(), config);

    let o = bin(dir.path(), &["--config", "config.json", "fit"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let model_path = dir.path().join("out/model.json");
    let model = fs::read(&model_path).unwrap();

    let o = bin(
        dir.path(),
        &[
            "--config",
            "config.json",
            "predict",
            "--model",
            "out/model.json",
        ],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let forecast = fs::read_to_string(dir.path().join("out/forecast.csv")).unwrap();
    assert_eq!(forecast.lines().count(), 1 + 12);
    assert!(forecast
        .lines()
        .nth(1)
        .unwrap()
        .starts_with("2025-03-12T08:00:00"));

    let o = bin(
        dir.path(),
        &[
            "--config",
            "config.json",
            "predict",
            "--model",
            "out/model.json",
            "--steps",
            "3",
        ],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let short = fs::read_to_string(dir.path().join("out/forecast.csv")).unwrap();
    assert_eq!(short.lines().count(), 1 + 3);

    assert_eq!(
        fs::read_to_string(dir.path().join("load.csv")).unwrap(),
        csv
    );
    assert_eq!(
        fs::read_to_string(dir.path().join("config.json")).unwrap(),
        config
    );
    assert_eq!(fs::read(&model_path).unwrap(), model);
}

#[test]
fn predict_rejects_a_tampered_model() {
    let dir = tempfile::tempdir().unwrap();
    write_fixture(dir.path());
    write_config(
        dir.path(),
        r#"{"input":"load.csv","lags":3,"console_level":"CRITICAL"}"#,
    );
    assert!(bin(dir.path(), &["--config", "config.json", "fit"])
        .status
        .success());

    let path = dir.path().join("out/model.json");
    let text = fs::read_to_string(&path).unwrap();
    let at = text.find("\"intercept\":").unwrap() + "\"intercept\":".len();
    let mut bytes = text.into_bytes();
    let digit = (at..bytes.len())
        .find(|&i| bytes[i].is_ascii_digit())
        .unwrap();
    bytes[digit] = if bytes[digit] == b'9' {
        b'8'
    } else {
        bytes[digit] + 1
    };
    fs::write(&path, &bytes).unwrap();
    fs::remove_dir_all(dir.path().join("logs")).unwrap();

    let o = bin(
        dir.path(),
        &[
            "--config",
            "config.json",
            "predict",
            "--model",
            "out/model.json",
        ],
    );
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("HashMismatch:"), "{}", stderr(&o));
    assert!(!dir.path().join("out/forecast.csv").exists());

    let log = fs::read_to_string(single_log(dir.path())).unwrap();
    let last: serde_json::Value = serde_json::from_str(log.lines().last().unwrap()).unwrap();
    assert_eq!(last["event"], "run_failed");
    assert_eq!(last["level"], "ERROR");
    assert!(last["exception"]
        .as_str()
        .unwrap()
        .starts_with("HashMismatch"));
}

#[test]
fn validate_log_reports_line_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let good = r#"{"schema_version":"1.0.0","timestamp_utc":"2026-04-26T16:31:44.000000Z","logger":"x","level":"INFO","event":"e","message":"m"}"#;
    fs::write(dir.path().join("good.log"), format!("{good}\n")).unwrap();
    fs::write(
        dir.path().join("bad.log"),
        format!("{good}\n{}\n", good.replace(r#","message":"m""#, "")),
    )
    .unwrap();

    let o = bin(dir.path(), &["validate-log", "good.log"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "1 records, 0 violations");

    let o = bin(dir.path(), &["validate-log", "bad.log"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("line:2 "), "{}", stdout(&o));
    assert!(stdout(&o).contains("message"));
    assert!(!dir.path().join("logs").exists());

    let o = bin(dir.path(), &["validate-log", "missing.log"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn cpe_prints_identifier() {
    let dir = tempfile::tempdir().unwrap();
    let o = bin(
        dir.path(),
        &[
            "cpe",
            "--vendor",
            "acme",
            "--product",
            "load forecaster",
            "--version",
            "2.1",
            "--target-sw",
            "rust",
        ],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(
        stdout(&o).trim(),
        r"cpe:2.3:a:acme:load\ forecaster:2.1:*:*:*:*:rust:*:*"
    );

    let o = bin(
        dir.path(),
        &["cpe", "--vendor", "a:b", "--product", "p", "--version", "1"],
    );
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("InvalidComponent:"));
}

#[test]
fn usage_and_config_errors_have_distinct_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(bin(dir.path(), &["frobnicate"]).status.code(), Some(2));
    assert_eq!(bin(dir.path(), &["predict"]).status.code(), Some(2));

    write_config(dir.path(), r#"{"horizon":0}"#);
    let o = bin(dir.path(), &["--config", "config.json", "fit"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("InvalidArgument:"), "{}", stderr(&o));
}
