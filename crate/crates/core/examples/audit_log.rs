// Structured JSON-lines audit logging.
//
// While a sink is active on the current thread, library calls report
// their progress and any rejected input to it. The resulting file is then
// checked against the record schema.
//
// Run with `cargo run --example audit_log`.

use std::sync::Arc;

use safeforecast::audit::{self, AuditRecord, AuditSink, Level};
use safeforecast::{
    fit_forecaster, FixedClock, Frequency, LagSet, ProvenanceRecord, RegressorSpec, TimeSeries,
    Timestamp,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = tempfile::tempdir()?;
    let clock = Arc::new(FixedClock(Timestamp::ymd_hms(2026, 4, 26, 16, 31, 44)));
    let sink = AuditSink::open("example", dir.path(), Level::Critical, clock.clone())?;
    let path = sink.path().to_path_buf();
    let guard = audit::activate(sink);

    audit::emit_active(
        AuditRecord::new(
            clock.0,
            "example",
            Level::Info,
            "start",
            "audit example started",
        )
        .with_context("attempt", 1usize),
    )?;

    let start = Timestamp::ymd_hms(2025, 1, 1, 0, 0, 0);
    let good = TimeSeries::new(
        "y",
        start,
        Frequency::hours(1),
        (0..48).map(|i| (i % 7) as f64).collect(),
    )?;
    let lags = LagSet::range(3)?;
    fit_forecaster(
        &good,
        &lags,
        None,
        &RegressorSpec::ols(0),
        ProvenanceRecord::for_series(&good),
    )?;

    let mut values = good.values().to_vec();
    values[10] = f64::NAN;
    let bad = good.with_values(values)?;
    let err = fit_forecaster(
        &bad,
        &lags,
        None,
        &RegressorSpec::ols(0),
        ProvenanceRecord::for_series(&bad),
    )
    .expect_err("NaN input is rejected");
    println!("rejected: {}: {err}", err.name());

    drop(guard.finish());
    let text = std::fs::read_to_string(&path)?;
    println!(
        "\n{}:",
        path.file_name().unwrap_or_default().to_string_lossy()
    );
    for line in text.lines() {
        println!("  {line}");
    }
    let report = audit::validate_log(&path)?;
    println!(
        "\n{} records, {} violations",
        report.lines,
        report.violations.len()
    );
    Ok(())
}
