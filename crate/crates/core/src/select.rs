//! Growing-window splitters, the backtest driver, and forecast metrics.

use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::audit::{self, AuditRecord, Level};
use crate::error::{Error, Result};
use crate::forecast::{fit_forecaster, predict_recursive, FittedForecaster, LagSet};
use crate::provenance::ProvenanceRecord;
use crate::regress::RegressorSpec;
use crate::series::{align, ExogMatrix, TimeSeries};
use crate::stats::mean;

const LOGGER: &str = "safeforecast.select";

fn one() -> usize {
    1
}

/// Parameters of the growing-window protocol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FoldPlan {
    pub initial_train_size: usize,
    pub steps: usize,
    pub horizon: usize,
    #[serde(default)]
    pub refit: bool,
    /// Emit every `fold_stride`-th fold.
    #[serde(default = "one")]
    pub fold_stride: usize,
    /// Keep a final fold whose test window runs past the series end, truncated.
    #[serde(default)]
    pub allow_incomplete_final: bool,
}

impl FoldPlan {
    pub fn new(initial_train_size: usize, steps: usize, horizon: usize) -> Self {
        FoldPlan {
            initial_train_size,
            steps,
            horizon,
            refit: false,
            fold_stride: 1,
            allow_incomplete_final: false,
        }
    }

    pub fn with_refit(mut self, refit: bool) -> Self {
        self.refit = refit;
        self
    }

    pub fn with_fold_stride(mut self, stride: usize) -> Self {
        self.fold_stride = stride;
        self
    }

    pub fn with_incomplete_final(mut self, allow: bool) -> Self {
        self.allow_incomplete_final = allow;
        self
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("initial_train_size", self.initial_train_size),
            ("steps", self.steps),
            ("horizon", self.horizon),
            ("fold_stride", self.fold_stride),
        ] {
            if v == 0 {
                return Err(Error::InvalidArgument(format!("{name} must be >= 1")));
            }
        }
        Ok(())
    }
}

/// Train and test index intervals; `train.end == test.start`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Fold {
    pub train: Range<usize>,
    pub test: Range<usize>,
}

pub fn time_series_folds(n: usize, plan: &FoldPlan) -> Result<Vec<Fold>> {
    plan.validate()?;
    let t0 = plan.initial_train_size;
    if n <= t0 {
        return Err(Error::TooShort(format!(
            "series of length {n} leaves no test data after {t0} training points"
        )));
    }
    let mut folds = Vec::new();
    let mut k = 0usize;
    loop {
        let a = t0 + k * plan.steps;
        if a >= n {
            break;
        }
        let b = a + plan.horizon;
        if b > n {
            if plan.allow_incomplete_final {
                folds.push(Fold {
                    train: 0..a,
                    test: a..n,
                });
            }
            break;
        }
        folds.push(Fold {
            train: 0..a,
            test: a..b,
        });
        k += plan.fold_stride;
    }
    if folds.is_empty() {
        return Err(Error::TooShort(format!(
            "no complete fold of horizon {} fits in {n} points",
            plan.horizon
        )));
    }
    Ok(folds)
}

/// Every one-step-ahead fold after the first `t0` points.
pub fn one_step_folds(n: usize, t0: usize) -> Result<Vec<Fold>> {
    time_series_folds(n, &FoldPlan::new(t0, 1, 1))
}

/// Metric identifier. Parses from `mae`, `mse`, `rmse`, `mape`, `mase` and
/// `mase:<m>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MetricName {
    Mae,
    Mse,
    Rmse,
    Mape,
    /// Seasonal period of the naive benchmark.
    Mase(usize),
}

impl FromStr for MetricName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        match lower.as_str() {
            "mae" => Ok(MetricName::Mae),
            "mse" => Ok(MetricName::Mse),
            "rmse" => Ok(MetricName::Rmse),
            "mape" => Ok(MetricName::Mape),
            "mase" => Ok(MetricName::Mase(1)),
            other => match other.strip_prefix("mase:").map(str::parse::<usize>) {
                Some(Ok(m)) if m >= 1 => Ok(MetricName::Mase(m)),
                _ => Err(Error::MetricUnknown(s.to_string())),
            },
        }
    }
}

impl fmt::Display for MetricName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MetricName::Mae => f.write_str("mae"),
            MetricName::Mse => f.write_str("mse"),
            MetricName::Rmse => f.write_str("rmse"),
            MetricName::Mape => f.write_str("mape"),
            MetricName::Mase(1) => f.write_str("mase"),
            MetricName::Mase(m) => write!(f, "mase:{m}"),
        }
    }
}

impl Serialize for MetricName {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for MetricName {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Scores `predicted` against `actual`. `train` is required for MASE only.
pub fn metric(
    name: MetricName,
    actual: &[f64],
    predicted: &[f64],
    train: Option<&[f64]>,
) -> Result<f64> {
    if actual.len() != predicted.len() {
        return Err(Error::LengthMismatch {
            left: actual.len(),
            right: predicted.len(),
        });
    }
    if actual.is_empty() {
        return Err(Error::InvalidArgument(
            "metrics need at least one point".into(),
        ));
    }
    let errors = || actual.iter().zip(predicted).map(|(a, p)| a - p);
    let mae = || mean(&errors().map(f64::abs).collect::<Vec<_>>());
    let mse = || mean(&errors().map(|e| e * e).collect::<Vec<_>>());
    match name {
        MetricName::Mae => Ok(mae()),
        MetricName::Mse => Ok(mse()),
        MetricName::Rmse => Ok(mse().sqrt()),
        MetricName::Mape => {
            if actual.contains(&0.0) {
                return Err(Error::ZeroDenominator(
                    "MAPE is undefined on zero actuals".into(),
                ));
            }
            let ratios: Vec<f64> = errors().zip(actual).map(|(e, a)| (e / a).abs()).collect();
            Ok(mean(&ratios))
        }
        MetricName::Mase(m) => {
            let train = train.ok_or_else(|| {
                Error::InvalidArgument("MASE requires the training series".into())
            })?;
            if train.len() <= m {
                return Err(Error::TooShort(format!(
                    "MASE with m={m} needs more than {m} training points, got {}",
                    train.len()
                )));
            }
            let naive: Vec<f64> = train[m..]
                .iter()
                .zip(train)
                .map(|(now, before)| (now - before).abs())
                .collect();
            let scale = mean(&naive);
            if scale == 0.0 {
                return Err(Error::ZeroDenominator(
                    "MASE scale is zero on a seasonally constant training series".into(),
                ));
            }
            Ok(mae() / scale)
        }
    }
}

/// Scores of one fold, in the order of [`BacktestResult::metrics`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FoldScore {
    pub fold: usize,
    pub train: Range<usize>,
    pub test: Range<usize>,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BacktestResult {
    pub metrics: Vec<MetricName>,
    pub folds: Vec<FoldScore>,
    /// Concatenated fold forecasts.
    pub predictions: Vec<f64>,
    /// Series index of each entry in `predictions`.
    pub prediction_index: Vec<usize>,
}

impl BacktestResult {
    /// Mean of one metric across folds.
    pub fn mean_metric(&self, name: MetricName) -> Option<f64> {
        let j = self.metrics.iter().position(|m| *m == name)?;
        Some(mean(
            &self.folds.iter().map(|f| f.values[j]).collect::<Vec<_>>(),
        ))
    }

    /// `fold,<metric>...` with one row per fold.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("fold");
        for m in &self.metrics {
            out.push(',');
            out.push_str(&m.to_string());
        }
        out.push('\n');
        for f in &self.folds {
            out.push_str(&f.fold.to_string());
            for v in &f.values {
                out.push(',');
                out.push_str(&v.to_string());
            }
            out.push('\n');
        }
        out
    }
}

pub fn backtest(
    y: &TimeSeries,
    exog: Option<&ExogMatrix>,
    lags: &LagSet,
    spec: &RegressorSpec,
    plan: &FoldPlan,
    metrics: &[MetricName],
) -> Result<BacktestResult> {
    if metrics.is_empty() {
        return Err(Error::InvalidArgument(
            "at least one metric is required".into(),
        ));
    }
    let folds = time_series_folds(y.len(), plan)?;
    let exog_offset = match exog {
        None => 0,
        Some(x) => align(y, x)?.offset,
    };
    let provenance = ProvenanceRecord::for_series(y);
    let fit_on = |train: &Range<usize>| -> Result<FittedForecaster> {
        fit_forecaster(
            &y.slice(train.clone())?,
            lags,
            exog,
            spec,
            provenance.clone(),
        )
    };
    let mut once = None;
    let mut result = BacktestResult {
        metrics: metrics.to_vec(),
        folds: Vec::with_capacity(folds.len()),
        predictions: Vec::new(),
        prediction_index: Vec::new(),
    };
    for (i, fold) in folds.iter().enumerate() {
        let history = y.slice(fold.train.clone())?;
        let model = if plan.refit {
            fit_on(&fold.train)?
        } else {
            if once.is_none() {
                once = Some(fit_on(&fold.train)?);
            }
            once.as_ref()
                .expect("fitted above")
                .with_history(&history)?
        };
        let future = exog
            .map(|x| x.slice_rows(exog_offset + fold.test.start..exog_offset + fold.test.end))
            .transpose()?;
        let pred = predict_recursive(&model, fold.test.len(), future.as_ref())?;
        let actual = &y.values()[fold.test.clone()];
        let values = metrics
            .iter()
            .map(|&m| metric(m, actual, &pred, Some(history.values())))
            .collect::<Result<Vec<_>>>()?;
        result.folds.push(FoldScore {
            fold: i,
            train: fold.train.clone(),
            test: fold.test.clone(),
            values,
        });
        result.prediction_index.extend(fold.test.clone());
        result.predictions.extend(pred);
    }
    let mut rec = AuditRecord::new(
        y.end(),
        LOGGER,
        Level::Info,
        "backtest",
        "backtest finished",
    )
    .with_context("folds", result.folds.len())
    .with_context("refit", plan.refit);
    for m in metrics {
        if let Some(v) = result.mean_metric(*m) {
            rec = rec.with_context(format!("mean_{m}"), v);
        }
    }
    audit::emit_active(rec)?;
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{Frequency, Timestamp};
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn six_folds_of_twenty_four() {
        let folds = time_series_folds(224, &FoldPlan::new(80, 24, 24)).unwrap();
        assert_eq!(folds.len(), 6);
        for (k, f) in folds.iter().enumerate() {
            assert_eq!(f.train, 0..80 + 24 * k);
            assert_eq!(f.test, 80 + 24 * k..104 + 24 * k);
        }
    }

    #[test]
    fn incomplete_final_fold() {
        let plan = FoldPlan::new(80, 24, 24);
        let folds = time_series_folds(105, &plan).unwrap();
        assert_eq!(
            folds,
            vec![Fold {
                train: 0..80,
                test: 80..104
            }]
        );
        let folds = time_series_folds(105, &plan.with_incomplete_final(true)).unwrap();
        assert_eq!(folds.len(), 2);
        assert_eq!(folds[1].test, 104..105);
    }

    #[test]
    fn stride_keeps_every_other_fold() {
        let folds = time_series_folds(224, &FoldPlan::new(80, 24, 24).with_fold_stride(2)).unwrap();
        let starts: Vec<usize> = folds.iter().map(|f| f.test.start).collect();
        assert_eq!(starts, vec![80, 128, 176]);
    }

    #[test]
    fn one_step() {
        assert_eq!(
            one_step_folds(5, 3).unwrap(),
            vec![
                Fold {
                    train: 0..3,
                    test: 3..4
                },
                Fold {
                    train: 0..4,
                    test: 4..5
                }
            ]
        );
        assert_eq!(one_step_folds(11, 10).unwrap().len(), 1);
        assert!(matches!(one_step_folds(10, 10), Err(Error::TooShort(_))));
    }

    #[test]
    fn horizon_longer_than_remaining_data() {
        assert!(matches!(
            time_series_folds(90, &FoldPlan::new(80, 24, 24)),
            Err(Error::TooShort(_))
        ));
    }

    #[test]
    fn metric_arithmetic() {
        let a = [1.0, 3.0];
        let p = [0.0, 0.0];
        assert_eq!(metric(MetricName::Mae, &a, &p, None).unwrap(), 2.0);
        assert_eq!(metric(MetricName::Mse, &a, &p, None).unwrap(), 5.0);
        assert_eq!(metric(MetricName::Rmse, &a, &p, None).unwrap(), 5f64.sqrt());
        assert_eq!(metric(MetricName::Mape, &a, &p, None).unwrap(), 1.0);
        assert_eq!(metric(MetricName::Mae, &a, &a, None).unwrap(), 0.0);
        assert_eq!(metric(MetricName::Mse, &a, &a, None).unwrap(), 0.0);
    }

    #[test]
    fn metric_errors() {
        assert!(matches!(
            metric(MetricName::Mae, &[1.0], &[1.0, 2.0], None),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(matches!(
            metric(MetricName::Mape, &[0.0, 1.0], &[1.0, 1.0], None),
            Err(Error::ZeroDenominator(_))
        ));
        assert!(matches!(
            metric(MetricName::Mase(1), &[1.0], &[2.0], Some(&[3.0, 3.0, 3.0])),
            Err(Error::ZeroDenominator(_))
        ));
    }

    #[test]
    fn metric_names_round_trip() {
        for s in ["mae", "mse", "rmse", "mape", "mase", "mase:24"] {
            assert_eq!(s.parse::<MetricName>().unwrap().to_string(), s);
        }
        assert_eq!("MASE:1".parse::<MetricName>().unwrap(), MetricName::Mase(1));
        assert!(matches!(
            "smape".parse::<MetricName>(),
            Err(Error::MetricUnknown(_))
        ));
        assert!("mase:0".parse::<MetricName>().is_err());
    }

    #[test]
    fn seasonal_naive_mase_is_one() {
        let m = 4;
        let train: Vec<f64> = (0..20)
            .map(|i| ((i * 7) % 5) as f64 + i as f64 * 0.1)
            .collect();
        // the naive forecast of train[m..] is train[..n-m], so its MAE equals the scale
        let actual = &train[m..];
        let pred = &train[..train.len() - m];
        let v = metric(MetricName::Mase(m), actual, pred, Some(&train)).unwrap();
        assert!((v - 1.0).abs() < 1e-9);
    }

    fn ts(v: Vec<f64>) -> TimeSeries {
        TimeSeries::new(
            "y",
            Timestamp::ymd_hms(2025, 1, 1, 0, 0, 0),
            Frequency::hours(1),
            v,
        )
        .unwrap()
    }

    #[test]
    fn linear_series_backtest_is_exact() {
        let y = ts((0..224).map(|i| 3.0 + 0.5 * i as f64).collect());
        for refit in [false, true] {
            let r = backtest(
                &y,
                None,
                &LagSet::new(vec![1]).unwrap(),
                &RegressorSpec::ols(0),
                &FoldPlan::new(80, 24, 24).with_refit(refit),
                &[MetricName::Mae],
            )
            .unwrap();
            assert_eq!(r.folds.len(), 6);
            assert!(r.folds.iter().all(|f| f.values[0] < 1e-6), "{r:?}");
            assert_eq!(r.predictions.len(), 144);
            assert_eq!(r.prediction_index[0], 80);
        }
    }

    #[test]
    fn refit_makes_no_difference_on_constant_series() {
        let y = ts(vec![7.0; 200]);
        let spec = RegressorSpec::ridge(0.5, 0).unwrap();
        let lags = LagSet::new(vec![1, 2]).unwrap();
        let plan = FoldPlan::new(80, 24, 24);
        let metrics = [MetricName::Mae, MetricName::Rmse];
        let a = backtest(&y, None, &lags, &spec, &plan, &metrics).unwrap();
        let b = backtest(&y, None, &lags, &spec, &plan.with_refit(true), &metrics).unwrap();
        for (fa, fb) in a.folds.iter().zip(&b.folds) {
            for (va, vb) in fa.values.iter().zip(&fb.values) {
                assert!((va - vb).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn metrics_csv_layout() {
        // a pure sinusoid obeys an exact lag-2 recurrence, so add noise to keep OLS well posed
        let mut rng = crate::rng::SplitMix64::new(5);
        let y = ts((0..224)
            .map(|i| (i as f64 * 0.3).sin() + 2.0 + 0.1 * rng.next_gaussian())
            .collect());
        let r = backtest(
            &y,
            None,
            &LagSet::range(3).unwrap(),
            &RegressorSpec::ols(0),
            &FoldPlan::new(80, 24, 24),
            &[MetricName::Mae, MetricName::Mase(1)],
        )
        .unwrap();
        let csv = r.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "fold,mae,mase");
        assert_eq!(lines.len(), 7);
        assert!(lines[6].starts_with("5,"));
    }

    #[test]
    fn backtest_requires_metrics() {
        let y = ts(vec![1.0; 200]);
        assert!(backtest(
            &y,
            None,
            &LagSet::range(1).unwrap(),
            &RegressorSpec::ols(0),
            &FoldPlan::new(80, 24, 24),
            &[]
        )
        .is_err());
    }

    proptest! {
        #[test]
        fn folds_never_leak(
            n in 2usize..400,
            t0 in 1usize..200,
            s in 1usize..40,
            h in 1usize..40,
            stride in 1usize..4,
            incomplete in any::<bool>(),
        ) {
            let plan = FoldPlan::new(t0, s, h).with_fold_stride(stride).with_incomplete_final(incomplete);
            if let Ok(folds) = time_series_folds(n, &plan) {
                for f in &folds {
                    prop_assert!(f.train.start == 0 && f.train.end >= 1);
                    prop_assert!(f.test.start == f.train.end);
                    prop_assert!(f.test.end > f.test.start && f.test.end <= n);
                }
                for w in folds.windows(2) {
                    prop_assert!(w[0].train.end < w[1].train.end);
                }
            } else {
                prop_assert!(n <= t0 || t0 + h > n);
            }
        }

        #[test]
        fn rmse_squared_is_mse(
            pairs in proptest::collection::vec((-1e3f64..1e3, -1e3f64..1e3), 1..50)
        ) {
            let (a, p): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
            let mse = metric(MetricName::Mse, &a, &p, None).unwrap();
            let rmse = metric(MetricName::Rmse, &a, &p, None).unwrap();
            if mse > 0.0 {
                assert_relative_eq!(rmse * rmse, mse, max_relative = 1e-12);
            }
        }
    }
}
