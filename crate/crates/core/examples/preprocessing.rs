// Gap handling, validation and differencing of raw series.
//
// Run with `cargo run --example preprocessing`.

use safeforecast::preprocess::{difference, interpolate_linear, undifference, MissingMode};
use safeforecast::series::{parse_csv, slice_by_time, validate_series, MissingPolicy};
use safeforecast::Timestamp;

const RAW: &str = "\
timestamp,load
2025-01-06T00:00:00Z,
2025-01-06T01:00:00Z,41.5
2025-01-06T02:00:00Z,40.0
2025-01-06T03:00:00Z,
2025-01-06T04:00:00Z,
2025-01-06T05:00:00Z,43.0
2025-01-06T06:00:00Z,47.5
2025-01-06T07:00:00Z,
";

fn main() -> safeforecast::Result<()> {
    let raw = parse_csv(RAW.as_bytes(), None)?.series("load")?;
    let report = validate_series(&raw, MissingPolicy::Tolerant)?;
    println!("missing at {:?}", report.missing);
    if let Err(e) = validate_series(&raw, MissingPolicy::Strict) {
        println!("strict validation: {}: {e}", e.name());
    }

    if let Err(e) = interpolate_linear(&raw, MissingMode::Raise) {
        println!("interpolate (raise): {}: {e}", e.name());
    }
    let interior = interpolate_linear(&raw, MissingMode::Passthrough)?;
    println!("interior gaps filled: {:?}", interior.values());
    let filled = interpolate_linear(&raw, MissingMode::FfillBfill)?;
    println!("edges filled too:     {:?}", filled.values());

    let window = slice_by_time(
        &filled,
        Timestamp::ymd_hms(2025, 1, 6, 2, 0, 0),
        Timestamp::ymd_hms(2025, 1, 6, 5, 0, 0),
    )?;
    println!("02:00..=05:00: {:?}", window.values());

    for order in 0..3 {
        let (d, state) = difference(&filled, order)?;
        let back = undifference(&d, &state)?;
        println!(
            "order {order}: {:?}, restored exactly: {}",
            d.values(),
            back.values() == filled.values()
        );
    }
    Ok(())
}
