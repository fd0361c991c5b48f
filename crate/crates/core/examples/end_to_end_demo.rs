// Full workflow on three months of synthetic hourly load: calendar
// features, a lag model with bootstrap intervals, a holdout score and a
// rolling-origin backtest.
//
// Run with `cargo run --example end_to_end_demo`.

use safeforecast::preprocess::{CalendarField, ExogBuilder, Period};
use safeforecast::{
    backtest, fit_forecaster, metric, predict_interval, synth_load, FoldPlan, LagSet, MetricName,
    ProvenanceRecord, RegressorSpec, SynthParams,
};

fn main() -> safeforecast::Result<()> {
    let y = synth_load(2160, 2026, &SynthParams::default())?;
    let exog = ExogBuilder::new(vec![
        Period::new("hour", 6, CalendarField::Hour, (0, 23))?,
        Period::new("dayofweek", 4, CalendarField::DayOfWeek, (0, 6))?,
    ])
    .build(y.range())?;
    println!("{} points from {} to {}", y.len(), y.start(), y.end());
    println!("exog columns: {}", exog.column_names().join(", "));

    let split = 1440;
    let train = y.slice(0..split)?;
    let lags = LagSet::range(168)?;
    let spec = RegressorSpec::ridge(1e-3, 123_456_789)?;
    let model = fit_forecaster(
        &train,
        &lags,
        Some(&exog.slice_rows(0..split)?),
        &spec,
        ProvenanceRecord::for_series(&train),
    )?;

    let horizon = 24;
    let future = exog.slice_rows(split..split + horizon)?;
    let iv = predict_interval(&model, horizon, Some(&future), 0.9, 500)?;
    let actual = &y.values()[split..split + horizon];
    println!("\nfirst six hours after {}:", model.window_end());
    for (h, a) in actual.iter().enumerate().take(6) {
        println!(
            "  +{:>2}h  actual {:6.2}  point {:6.2}  90% [{:6.2}, {:6.2}]",
            h + 1,
            a,
            iv.point[h],
            iv.lower[h],
            iv.upper[h]
        );
    }
    println!(
        "holdout MAE {:.3}, MAPE {:.2}%",
        metric(MetricName::Mae, actual, &iv.point, None)?,
        100.0 * metric(MetricName::Mape, actual, &iv.point, None)?
    );

    let plan = FoldPlan::new(1440, 24, 24);
    let result = backtest(
        &y,
        Some(&exog),
        &lags,
        &spec,
        &plan,
        &[MetricName::Mae, MetricName::Rmse],
    )?;
    println!(
        "\nbacktest over {} folds: mean MAE {:.3}, mean RMSE {:.3}",
        result.folds.len(),
        result.mean_metric(MetricName::Mae).unwrap_or(f64::NAN),
        result.mean_metric(MetricName::Rmse).unwrap_or(f64::NAN)
    );
    Ok(())
}
