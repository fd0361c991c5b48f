// Growing-window fold layouts and rolling-origin evaluation.
//
// Run with `cargo run --example backtesting`.

use safeforecast::{
    backtest, metric, one_step_folds, synth_load, time_series_folds, FoldPlan, LagSet, MetricName,
    RegressorSpec, SynthParams,
};

fn main() -> safeforecast::Result<()> {
    let plan = FoldPlan::new(200, 24, 24);
    println!("n = 300, T0 = 200, steps = horizon = 24:");
    for (k, f) in time_series_folds(300, &plan)?.iter().enumerate() {
        println!("  fold {k}: train {:?} test {:?}", f.train, f.test);
    }
    let partial = plan.with_incomplete_final(true);
    let last = time_series_folds(300, &partial)?.pop().unwrap();
    println!(
        "with a truncated final fold, the last test range is {:?}",
        last.test
    );
    println!(
        "one-step folds for n = 10, T0 = 7: {:?}",
        one_step_folds(10, 7)?
    );

    let y = synth_load(24 * 42, 11, &SynthParams::default())?;
    let lags = LagSet::new(vec![1, 2, 24, 168])?;
    let metrics: Vec<MetricName> = ["mae", "rmse", "mape", "mase:24"]
        .iter()
        .map(|m| m.parse())
        .collect::<safeforecast::Result<_>>()?;
    let spec = RegressorSpec::ols(1);
    let plan = FoldPlan::new(24 * 35, 24, 24);

    let once = backtest(&y, None, &lags, &spec, &plan, &metrics)?;
    let refit = backtest(&y, None, &lags, &spec, &plan.with_refit(true), &metrics)?;
    print!("\n{}", once.to_csv());
    for m in &metrics {
        println!(
            "{m:>8}: fit once {:.4}, refit every fold {:.4}",
            once.mean_metric(*m).unwrap_or(f64::NAN),
            refit.mean_metric(*m).unwrap_or(f64::NAN)
        );
    }

    // Seasonal persistence as a reference point.
    let naive: Vec<f64> = once
        .prediction_index
        .iter()
        .map(|&t| y.values()[t - 24])
        .collect();
    let actual: Vec<f64> = once
        .prediction_index
        .iter()
        .map(|&t| y.values()[t])
        .collect();
    println!(
        "\nMAE model {:.4} vs same-hour-yesterday {:.4}",
        metric(MetricName::Mae, &actual, &once.predictions, None)?,
        metric(MetricName::Mae, &actual, &naive, None)?
    );
    Ok(())
}
