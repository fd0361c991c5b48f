//! Command-line front end. The binary only forwards `std::env::args` to
//! [`main_with`]; all behaviour lives here so it can be tested in-process.
//!
//! Configuration is one JSON document ([`RunConfig`]); a handful of flags
//! override paths and the clock. Exit codes: 0 success, 1 contract or
//! validation error (the error name is printed to stderr), 2 usage error.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use chrono::NaiveDate;
use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::audit::{self, AuditRecord, AuditSink, Level};
use crate::clock::{Clock, FixedClock, SystemClock};
use crate::cpe::cpe_for;
use crate::error::{Error, Result};
use crate::forecast::{
    fit_forecaster, predict_interval, synth_load, FittedForecaster, IntervalForecast, LagSet,
    SynthParams,
};
use crate::preprocess::{build_exog, interpolate_linear, CalendarField, MissingMode, Period};
use crate::provenance::{load_model, save_model, sha256_hex, ProvenanceRecord};
use crate::regress::RegressorSpec;
use crate::select::{backtest, metric, FoldPlan, MetricName};
use crate::series::{read_csv, series_to_csv, ExogMatrix, IndexRange, TimeSeries, Timestamp};

const LOGGER: &str = "safeforecast.cli";

pub const FORECAST_FILE: &str = "forecast.csv";
pub const METRICS_FILE: &str = "metrics.csv";
pub const MODEL_FILE: &str = "model.json";

/// Either `N` (lags `1..=N`) or an explicit list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LagsConfig {
    UpTo(usize),
    List(Vec<usize>),
}

impl LagsConfig {
    pub fn to_lag_set(&self) -> Result<LagSet> {
        match self {
            LagsConfig::UpTo(n) => LagSet::range(*n),
            LagsConfig::List(v) => LagSet::new(v.clone()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum RegressorConfig {
    Ols,
    Ridge { lambda: f64 },
}

impl RegressorConfig {
    pub fn to_spec(self, seed: u64) -> Result<RegressorSpec> {
        match self {
            RegressorConfig::Ols => Ok(RegressorSpec::ols(seed)),
            RegressorConfig::Ridge { lambda } => RegressorSpec::ridge(lambda, seed),
        }
    }
}

/// Parameters of a run. Every field has a default, so `{}` is a complete
/// configuration; unknown keys are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// CSV with a `timestamp` column; the first value column is the target.
    /// Absent means synthetic load data.
    pub input: Option<PathBuf>,
    pub lags: LagsConfig,
    pub periods: Vec<Period>,
    pub holidays: Vec<NaiveDate>,
    /// Monday = 0.
    pub weekend_days: Vec<u32>,
    pub regressor: RegressorConfig,
    pub horizon: usize,
    pub coverage: f64,
    pub n_boot: usize,
    pub plan: FoldPlan,
    pub metrics: Vec<MetricName>,
    pub on_missing: MissingMode,
    /// Seed of the forecaster (bootstrap streams).
    pub seed: u64,
    /// Seed and length of the synthetic series.
    pub data_seed: u64,
    pub n_points: usize,
    pub task: String,
    pub console_level: Level,
    pub log_dir: PathBuf,
    pub output_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            input: None,
            lags: LagsConfig::UpTo(168),
            periods: default_periods(),
            holidays: default_holidays(),
            weekend_days: vec![5, 6],
            regressor: RegressorConfig::Ridge { lambda: 1e-3 },
            horizon: 24,
            coverage: 0.9,
            n_boot: 500,
            plan: FoldPlan::new(1440, 24, 24),
            metrics: vec![
                MetricName::Mae,
                MetricName::Mse,
                MetricName::Rmse,
                MetricName::Mape,
            ],
            on_missing: MissingMode::Raise,
            seed: 123_456_789,
            data_seed: 2026,
            n_points: 2160,
            task: "demo".into(),
            console_level: Level::Info,
            log_dir: PathBuf::from("logs"),
            output_dir: PathBuf::from("output"),
        }
    }
}

/// German nationwide public holidays of 2025.
pub fn default_holidays() -> Vec<NaiveDate> {
    [
        (1, 1),
        (4, 18),
        (4, 21),
        (5, 1),
        (5, 29),
        (6, 9),
        (10, 3),
        (12, 25),
        (12, 26),
    ]
    .into_iter()
    .map(|(m, d)| NaiveDate::from_ymd_opt(2025, m, d).expect("valid date"))
    .collect()
}

/// Hour of day with 6 kernels and day of week with 4.
pub fn default_periods() -> Vec<Period> {
    vec![
        Period::new("hour", 6, CalendarField::Hour, (0, 23)).expect("valid period"),
        Period::new("dayofweek", 4, CalendarField::DayOfWeek, (0, 6)).expect("valid period"),
    ]
}

impl RunConfig {
    pub fn from_json(bytes: &[u8]) -> Result<RunConfig> {
        let cfg: RunConfig =
            serde_json::from_slice(bytes).map_err(|e| Error::ParseError(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<RunConfig> {
        let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
        RunConfig::from_json(&bytes)
    }

    pub fn validate(&self) -> Result<()> {
        self.lags.to_lag_set()?;
        for p in &self.periods {
            p.validate()?;
        }
        self.regressor.to_spec(self.seed)?;
        self.plan.validate()?;
        if self.horizon == 0 || self.n_boot == 0 || self.n_points == 0 {
            return Err(Error::InvalidArgument(
                "horizon, n_boot and n_points must be >= 1".into(),
            ));
        }
        if !(self.coverage > 0.0 && self.coverage < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "coverage must lie in (0, 1), got {}",
                self.coverage
            )));
        }
        if self.metrics.is_empty() {
            return Err(Error::InvalidArgument("metrics must not be empty".into()));
        }
        if self.task.is_empty() || self.task.contains(['/', '\\']) {
            return Err(Error::InvalidArgument(format!(
                "invalid task name {:?}",
                self.task
            )));
        }
        Ok(())
    }

    fn sha256(&self) -> String {
        sha256_hex(&serde_json::to_vec(self).expect("config serializes"))
    }

    fn spec(&self) -> Result<RegressorSpec> {
        self.regressor.to_spec(self.seed)
    }

    /// Calendar features over `range`.
    pub fn exog(&self, range: IndexRange) -> Result<ExogMatrix> {
        let holidays: BTreeSet<NaiveDate> = self.holidays.iter().copied().collect();
        let weekend: BTreeSet<u32> = self.weekend_days.iter().copied().collect();
        build_exog(range, &self.periods, &holidays, &weekend)
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "safeforecast",
    version,
    about = "Deterministic recursive time-series forecasting"
)]
pub struct Cli {
    /// JSON run configuration.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Input CSV; overrides the configuration.
    #[arg(long, global = true, value_name = "CSV")]
    pub input: Option<PathBuf>,
    /// Directory for forecast, metrics and model files; overrides the configuration.
    #[arg(long, global = true, value_name = "DIR")]
    pub output_dir: Option<PathBuf>,
    /// Directory for audit logs; overrides the configuration.
    #[arg(long, global = true, value_name = "DIR")]
    pub log_dir: Option<PathBuf>,
    /// Pin the clock to this RFC 3339 UTC instant (for reproducible logs).
    #[arg(long, global = true, value_name = "TIMESTAMP")]
    pub fixed_clock: Option<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// End-to-end pipeline on the configured (default: synthetic) data.
    Demo,
    /// Fit on the full series and write the model file.
    Fit,
    /// Load a model file and write an interval forecast.
    Predict {
        /// Model file written by `fit` or `demo`.
        #[arg(long, value_name = "FILE")]
        model: PathBuf,
        /// Forecast horizon; defaults to the configured horizon.
        #[arg(long)]
        steps: Option<usize>,
    },
    /// Growing-window backtest; writes per-fold metrics.
    Backtest,
    /// Check an audit log against the record schema.
    ValidateLog { path: PathBuf },
    /// Print a CPE 2.3 identifier.
    Cpe {
        #[arg(long)]
        vendor: String,
        #[arg(long)]
        product: String,
        /// Release version, or `*` for any.
        #[arg(long = "version", value_name = "VERSION")]
        release: String,
        /// Target software; omitted means any.
        #[arg(long)]
        target_sw: Option<String>,
    },
}

/// Parses `args` (including the program name), runs, and returns the exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let stdout = std::io::stdout();
    match run(&cli, &mut stdout.lock()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("{}: {e}", e.name());
            1
        }
    }
}

/// Executes a parsed command, writing human-readable output to `out`.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    match &cli.command {
        Command::ValidateLog { path } => return validate_log_cmd(path, out),
        Command::Cpe {
            vendor,
            product,
            release,
            target_sw,
        } => {
            let mut id = cpe_for(vendor, product, release)?;
            if let Some(t) = target_sw {
                id = id.with_target_sw(t)?;
            }
            writeln!(out, "{id}").map_err(stdout_err)?;
            return Ok(0);
        }
        _ => {}
    }

    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    // flag overrides are excluded so the hash identifies the config document
    let config_sha256 = cfg.sha256();
    if let Some(p) = &cli.input {
        cfg.input = Some(p.clone());
    }
    if let Some(p) = &cli.output_dir {
        cfg.output_dir = p.clone();
    }
    if let Some(p) = &cli.log_dir {
        cfg.log_dir = p.clone();
    }
    let clock: Arc<dyn Clock> = match &cli.fixed_clock {
        Some(s) => Arc::new(FixedClock(Timestamp::parse(s)?)),
        None => Arc::new(SystemClock),
    };
    let task = match cli.command {
        Command::Demo => cfg.task.clone(),
        Command::Fit => "fit".into(),
        Command::Predict { .. } => "predict".into(),
        _ => "backtest".into(),
    };
    fs::create_dir_all(&cfg.output_dir).map_err(|e| Error::io(&cfg.output_dir, e))?;
    let sink = AuditSink::open(&task, &cfg.log_dir, cfg.console_level, clock.clone())?;
    let guard = audit::activate(sink);
    audit::emit_active(
        AuditRecord::new(clock.now(), LOGGER, Level::Info, "run_start", "run started")
            .with_context("command", task.as_str())
            .with_context("config_sha256", config_sha256),
    )?;
    let result = match &cli.command {
        Command::Demo => demo(&cfg, clock.as_ref(), out),
        Command::Fit => fit_cmd(&cfg, clock.as_ref(), out),
        Command::Predict { model, steps } => predict_cmd(&cfg, model, *steps, out),
        Command::Backtest => backtest_cmd(&cfg, clock.as_ref(), out),
        Command::ValidateLog { .. } | Command::Cpe { .. } => unreachable!("handled above"),
    };
    let closing = match &result {
        Ok(_) => AuditRecord::new(
            clock.now(),
            LOGGER,
            Level::Info,
            "run_complete",
            "run finished",
        ),
        Err(e) => AuditRecord::new(
            clock.now(),
            LOGGER,
            Level::Error,
            "run_failed",
            "run aborted",
        )
        .with_exception(format!("{}: {e}", e.name())),
    };
    audit::emit_active(closing)?;
    drop(guard.finish());
    result.map(|()| 0)
}

fn stdout_err(e: std::io::Error) -> Error {
    Error::io("<stdout>", e)
}

fn validate_log_cmd(path: &Path, out: &mut dyn Write) -> Result<i32> {
    let report = audit::validate_log(path)?;
    for v in &report.violations {
        writeln!(out, "{v}").map_err(stdout_err)?;
    }
    if report.is_clean() {
        writeln!(out, "{} records, 0 violations", report.lines).map_err(stdout_err)?;
        Ok(0)
    } else {
        Ok(1)
    }
}

/// Target series and its provenance, after gap handling.
fn load_data(cfg: &RunConfig, clock: &dyn Clock) -> Result<(TimeSeries, ProvenanceRecord)> {
    let (raw, prov) = match &cfg.input {
        Some(path) => {
            let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
            let y = read_csv(path, None)?.first_series()?;
            let prov = ProvenanceRecord::from_bytes(path.to_string_lossy(), clock.now(), &bytes);
            (y, prov)
        }
        None => {
            let y = synth_load(cfg.n_points, cfg.data_seed, &SynthParams::default())?;
            let url = format!(
                "synthetic://synth_load?seed={}&n={}",
                cfg.data_seed, cfg.n_points
            );
            let prov = ProvenanceRecord::from_bytes(url, clock.now(), series_to_csv(&y).as_bytes());
            (y, prov)
        }
    };
    audit::emit_active(
        AuditRecord::new(
            clock.now(),
            LOGGER,
            Level::Info,
            "data_loaded",
            "target series loaded",
        )
        .with_context("points", raw.len())
        .with_context("start", raw.start().to_string())
        .with_context("end", raw.end().to_string())
        .with_context("source_url", prov.source_url.as_str())
        .with_context("content_hash", prov.content_hash.as_str()),
    )?;
    let y = interpolate_linear(&raw, cfg.on_missing)?;
    Ok((y, prov))
}

fn forecast_csv(start: Timestamp, f: &FittedForecaster, iv: &IntervalForecast) -> String {
    let mut s = String::from("timestamp,point,lower,upper\n");
    for k in 0..iv.point.len() {
        s.push_str(&format!(
            "{},{},{},{}\n",
            start.add_steps(f.freq(), k as i64),
            iv.point[k],
            iv.lower[k],
            iv.upper[k]
        ));
    }
    s
}

fn write(dir: &Path, name: &str, bytes: &[u8]) -> Result<PathBuf> {
    let path = dir.join(name);
    fs::write(&path, bytes).map_err(|e| Error::io(&path, e))?;
    Ok(path)
}

fn future_exog(cfg: &RunConfig, f: &FittedForecaster, steps: usize) -> Result<Option<ExogMatrix>> {
    if f.exog_columns().is_empty() {
        return Ok(None);
    }
    let range = IndexRange::with_len(f.forecast_start(), f.freq(), steps)?;
    cfg.exog(range).map(Some)
}

fn demo(cfg: &RunConfig, clock: &dyn Clock, out: &mut dyn Write) -> Result<()> {
    let lags = cfg.lags.to_lag_set()?;
    let (y, prov) = load_data(cfg, clock)?;

    let t0 = cfg.plan.initial_train_size;
    if y.len() <= t0 {
        return Err(Error::TooShort(format!(
            "{} points leave nothing to evaluate after {t0} training points",
            y.len()
        )));
    }
    let train = y.slice(0..t0)?;
    audit::emit_active(
        AuditRecord::new(
            clock.now(),
            LOGGER,
            Level::Info,
            "split",
            "chronological split",
        )
        .with_context("train_points", train.len())
        .with_context("eval_points", y.len() - t0)
        .with_context("train_end", train.end().to_string()),
    )?;

    let exog = cfg.exog(y.range())?;
    audit::emit_active(
        AuditRecord::new(
            clock.now(),
            LOGGER,
            Level::Info,
            "exog_built",
            "calendar features built",
        )
        .with_context("rows", exog.len())
        .with_context("columns", exog.ncols()),
    )?;

    let model = fit_forecaster(&train, &lags, Some(&exog), &cfg.spec()?, prov)?;
    let h = cfg.horizon;
    let fx = future_exog(cfg, &model, h)?;
    let iv = predict_interval(&model, h, fx.as_ref(), cfg.coverage, cfg.n_boot)?;
    write(
        &cfg.output_dir,
        FORECAST_FILE,
        forecast_csv(model.forecast_start(), &model, &iv).as_bytes(),
    )?;
    audit::emit_active(
        AuditRecord::new(
            clock.now(),
            LOGGER,
            Level::Info,
            "predict",
            "interval forecast written",
        )
        .with_context("steps", h)
        .with_context("coverage", cfg.coverage)
        .with_context("n_boot", cfg.n_boot),
    )?;

    let w = |e: std::io::Error| stdout_err(e);
    writeln!(
        out,
        "Forecast: {h} steps from {} ({:.0}% intervals)",
        model.forecast_start(),
        cfg.coverage * 100.0
    )
    .map_err(w)?;
    let available = (y.len() - t0).min(h);
    let actual = &y.values()[t0..t0 + available];
    let mut rec = AuditRecord::new(
        clock.now(),
        LOGGER,
        Level::Info,
        "evaluate",
        "holdout metrics",
    );
    for m in &cfg.metrics {
        let v = metric(*m, actual, &iv.point[..available], Some(train.values()))?;
        writeln!(out, "  {:<6} {v:.6}", m.to_string().to_uppercase()).map_err(w)?;
        rec = rec.with_context(m.to_string(), v);
    }
    audit::emit_active(rec)?;

    let bt = backtest(
        &y,
        Some(&exog),
        &lags,
        &cfg.spec()?,
        &cfg.plan,
        &cfg.metrics,
    )?;
    write(&cfg.output_dir, METRICS_FILE, bt.to_csv().as_bytes())?;
    writeln!(out, "Backtest: {} folds", bt.folds.len()).map_err(w)?;
    for m in &cfg.metrics {
        if let Some(v) = bt.mean_metric(*m) {
            writeln!(out, "  mean {:<6} {v:.6}", m.to_string().to_uppercase()).map_err(w)?;
        }
    }

    save_model(&model, cfg.output_dir.join(MODEL_FILE))?;
    let (start, end) = model.training_range();
    let p = model.provenance();
    writeln!(out, "Model").map_err(w)?;
    writeln!(out, "  estimator        {}", model.estimator()).map_err(w)?;
    writeln!(
        out,
        "  lags             {} (max {})",
        model.lags().len(),
        model.lags().max()
    )
    .map_err(w)?;
    writeln!(out, "  exog columns     {}", model.exog_columns().len()).map_err(w)?;
    writeln!(out, "  training range   {start} .. {end}").map_err(w)?;
    writeln!(out, "  seed             {}", model.seed()).map_err(w)?;
    writeln!(out, "  source           {}", p.source_url).map_err(w)?;
    writeln!(out, "  retrieved at     {}", p.retrieved_at).map_err(w)?;
    writeln!(out, "  content sha256   {}", p.content_hash).map_err(w)?;
    Ok(())
}

fn fit_cmd(cfg: &RunConfig, clock: &dyn Clock, out: &mut dyn Write) -> Result<()> {
    let lags = cfg.lags.to_lag_set()?;
    let (y, prov) = load_data(cfg, clock)?;
    let exog = cfg.exog(y.range())?;
    let model = fit_forecaster(&y, &lags, Some(&exog), &cfg.spec()?, prov)?;
    save_model(&model, cfg.output_dir.join(MODEL_FILE))?;
    writeln!(out, "wrote {MODEL_FILE}").map_err(stdout_err)?;
    Ok(())
}

fn predict_cmd(
    cfg: &RunConfig,
    model: &Path,
    steps: Option<usize>,
    out: &mut dyn Write,
) -> Result<()> {
    let f = load_model(model)?;
    let h = steps.unwrap_or(cfg.horizon);
    let fx = future_exog(cfg, &f, h)?;
    let iv = predict_interval(&f, h, fx.as_ref(), cfg.coverage, cfg.n_boot)?;
    write(
        &cfg.output_dir,
        FORECAST_FILE,
        forecast_csv(f.forecast_start(), &f, &iv).as_bytes(),
    )?;
    audit::emit_active(
        AuditRecord::new(
            f.window_end(),
            LOGGER,
            Level::Info,
            "predict",
            "interval forecast written",
        )
        .with_context("steps", h)
        .with_context("data_sha256", f.provenance().content_hash.as_str()),
    )?;
    writeln!(out, "wrote {FORECAST_FILE} ({h} rows)").map_err(stdout_err)?;
    Ok(())
}

fn backtest_cmd(cfg: &RunConfig, clock: &dyn Clock, out: &mut dyn Write) -> Result<()> {
    let lags = cfg.lags.to_lag_set()?;
    let (y, _) = load_data(cfg, clock)?;
    let exog = cfg.exog(y.range())?;
    let bt = backtest(
        &y,
        Some(&exog),
        &lags,
        &cfg.spec()?,
        &cfg.plan,
        &cfg.metrics,
    )?;
    write(&cfg.output_dir, METRICS_FILE, bt.to_csv().as_bytes())?;
    writeln!(out, "wrote {METRICS_FILE} ({} folds)", bt.folds.len()).map_err(stdout_err)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_config_is_the_default() {
        assert_eq!(RunConfig::from_json(b"{}").unwrap(), RunConfig::default());
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(matches!(
            RunConfig::from_json(br#"{"horizn": 24}"#),
            Err(Error::ParseError(_))
        ));
        assert!(matches!(
            RunConfig::from_json(
                br#"{"plan": {"initial_train_size": 10, "steps": 1, "horizon": 1, "extra": 1}}"#
            ),
            Err(Error::ParseError(_))
        ));
    }

    #[test]
    fn config_variants_parse() {
        let cfg = RunConfig::from_json(
            br#"{"lags": [1, 24, 168], "regressor": {"kind": "ridge", "lambda": 0.5},
                "metrics": ["mae", "mase:24"], "on_missing": "ffill_bfill"}"#,
        )
        .unwrap();
        assert_eq!(cfg.lags.to_lag_set().unwrap().as_slice(), &[1, 24, 168]);
        assert_eq!(cfg.regressor, RegressorConfig::Ridge { lambda: 0.5 });
        assert_eq!(cfg.metrics, vec![MetricName::Mae, MetricName::Mase(24)]);
        assert_eq!(cfg.on_missing, MissingMode::FfillBfill);
    }

    #[test]
    fn invalid_values_are_rejected() {
        for bad in [
            r#"{"coverage": 1.0}"#,
            r#"{"lags": [2, 1]}"#,
            r#"{"regressor": {"kind": "ridge", "lambda": -1}}"#,
            r#"{"metrics": ["smape"]}"#,
            r#"{"metrics": []}"#,
            r#"{"task": "../x"}"#,
        ] {
            assert!(RunConfig::from_json(bad.as_bytes()).is_err(), "{bad}");
        }
    }

    #[test]
    fn default_exog_has_twelve_columns() {
        let cfg = RunConfig::default();
        let r = IndexRange::with_len(
            Timestamp::ymd_hms(2025, 1, 1, 0, 0, 0),
            crate::series::Frequency::hours(1),
            48,
        )
        .unwrap();
        assert_eq!(cfg.exog(r).unwrap().ncols(), 12);
    }

    #[test]
    fn cpe_subcommand() {
        let cli = Cli::try_parse_from([
            "safeforecast",
            "cpe",
            "--vendor",
            "bartzbeielstein",
            "--product",
            "spotforecast2-safe",
            "--version",
            "1.0.0",
            "--target-sw",
            "python",
        ])
        .unwrap();
        let mut out = Vec::new();
        assert_eq!(run(&cli, &mut out).unwrap(), 0);
        assert_eq!(
            String::from_utf8(out).unwrap(),
            "cpe:2.3:a:bartzbeielstein:spotforecast2-safe:1.0.0:*:*:*:*:python:*:*\n"
        );
    }

    #[test]
    fn usage_errors_are_reported_on_stderr() {
        for args in [
            &["safeforecast", "frobnicate"][..],
            &["safeforecast", "cpe", "--vendor", "v"],
        ] {
            let e = Cli::try_parse_from(args).unwrap_err();
            assert!(e.use_stderr(), "{args:?}");
        }
        assert!(!Cli::try_parse_from(["safeforecast", "--help"])
            .unwrap_err()
            .use_stderr());
    }
}
