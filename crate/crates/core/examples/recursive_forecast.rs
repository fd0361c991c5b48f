// Multi-step forecasting by feeding each prediction back into the lag
// window.
//
// Run with `cargo run --example recursive_forecast`.

use safeforecast::{
    build_lag_matrix, fit_forecaster, predict_recursive, Error, Frequency, LagSet,
    ProvenanceRecord, RegressorSpec, TimeSeries, Timestamp,
};

fn main() -> safeforecast::Result<()> {
    let start = Timestamp::ymd_hms(2025, 1, 1, 0, 0, 0);

    // A ramp is an exact AR(1) with intercept one.
    let ramp = TimeSeries::new(
        "ramp",
        start,
        Frequency::hours(1),
        (0..100).map(f64::from).collect(),
    )?;
    let lags = LagSet::new(vec![1])?;
    let model = fit_forecaster(
        &ramp,
        &lags,
        None,
        &RegressorSpec::ols(0),
        ProvenanceRecord::for_series(&ramp),
    )?;
    println!(
        "ramp: coefficient {:.6}, intercept {:.6}",
        model.regressor().coefficients()[0],
        model.regressor().intercept()
    );
    println!("next five: {:?}", predict_recursive(&model, 5, None)?);

    // With lags {1, 2} the two columns of the ramp are collinear and OLS
    // refuses to pick one of infinitely many solutions.
    let both = LagSet::new(vec![1, 2])?;
    match fit_forecaster(
        &ramp,
        &both,
        None,
        &RegressorSpec::ols(0),
        ProvenanceRecord::for_series(&ramp),
    ) {
        Err(e @ Error::SingularSystem { .. }) => println!("lags [1, 2] on a ramp: {e}"),
        other => println!("unexpected: {other:?}"),
    }

    // A damped oscillation is an exact AR(2); the forecast continues it.
    let (a1, a2) = (1.6, -0.9);
    let mut v = vec![1.0, 0.5];
    while v.len() < 84 {
        let k = v.len();
        v.push(a1 * v[k - 1] + a2 * v[k - 2]);
    }
    let y = TimeSeries::new("ar2", start, Frequency::hours(1), v[..60].to_vec())?;
    let design = build_lag_matrix(&y, &both, None)?;
    println!(
        "\nar2: design {} x {}, first target at index {}",
        design.x.rows(),
        design.x.cols(),
        design.first_target
    );
    let model = fit_forecaster(
        &y,
        &both,
        None,
        &RegressorSpec::ols(0),
        ProvenanceRecord::for_series(&y),
    )?;
    let pred = predict_recursive(&model, 24, None)?;
    let worst = pred
        .iter()
        .zip(&v[60..])
        .map(|(p, t)| (p - t).abs())
        .fold(0.0, f64::max);
    println!("24-step max abs error: {worst:.2e}");
    Ok(())
}
