// Prediction intervals from resampled in-sample residuals.
//
// Each bootstrap path draws residuals from its own seeded stream, so the
// intervals are reproducible and a wider coverage always contains a
// narrower one.
//
// Run with `cargo run --example bootstrap_intervals`.

use safeforecast::{
    fit_forecaster, predict_interval, synth_load, LagSet, ProvenanceRecord, RegressorSpec,
    SynthParams,
};

fn main() -> safeforecast::Result<()> {
    let y = synth_load(24 * 28, 7, &SynthParams::default())?;
    let lags = LagSet::new(vec![1, 2, 3, 24, 168])?;
    let model = fit_forecaster(
        &y,
        &lags,
        None,
        &RegressorSpec::ols(42),
        ProvenanceRecord::for_series(&y),
    )?;
    println!(
        "{} residuals available for resampling",
        model.residuals().len()
    );

    let steps = 12;
    let p50 = predict_interval(&model, steps, None, 0.5, 1000)?;
    let p95 = predict_interval(&model, steps, None, 0.95, 1000)?;
    println!("step   point     50% band            95% band");
    for h in 0..steps {
        println!(
            "{:>4}  {:6.2}  [{:6.2}, {:6.2}]  [{:6.2}, {:6.2}]",
            h + 1,
            p50.point[h],
            p50.lower[h],
            p50.upper[h],
            p95.lower[h],
            p95.upper[h]
        );
    }

    let again = predict_interval(&model, steps, None, 0.95, 1000)?;
    println!("\nrepeat run identical: {}", again == p95);
    Ok(())
}
