// Cyclical calendar encodings, holiday and weekend indicators, and
// equal-frequency binning.
//
// Run with `cargo run --example calendar_features`.

use chrono::NaiveDate;
use safeforecast::preprocess::{
    quantile_bin_fit, quantile_bin_transform, rbf_encode, CalendarField, ExogBuilder, Period,
};
use safeforecast::{synth_load, Frequency, IndexRange, SynthParams, Timestamp};

fn main() -> safeforecast::Result<()> {
    let hour = Period::new("hour", 6, CalendarField::Hour, (0, 23))?;
    let day = IndexRange::with_len(
        Timestamp::ymd_hms(2025, 1, 6, 0, 0, 0),
        Frequency::hours(1),
        24,
    )?;
    let enc = rbf_encode(day, &hour)?;
    println!("hour  {}", enc.column_names().join("  "));
    for row in (0..24).step_by(2) {
        let cells: Vec<String> = (0..enc.ncols())
            .map(|c| format!("{:.3} ", enc.value(row, c)))
            .collect();
        println!("{row:>4}  {}", cells.join("  "));
    }

    let builder = ExogBuilder::new(vec![
        hour,
        Period::new("dayofweek", 4, CalendarField::DayOfWeek, (0, 6))?,
    ])
    .with_holidays([NaiveDate::from_ymd_opt(2025, 1, 1).expect("valid date")]);
    let q1 = IndexRange::new(
        Timestamp::ymd_hms(2025, 1, 1, 0, 0, 0),
        Timestamp::ymd_hms(2025, 3, 31, 23, 0, 0),
        Frequency::hours(1),
    )?;
    let x = builder.build(q1)?;
    let sum = |name: &str| x.column(name).map_or(0.0, |c| c.iter().sum::<f64>());
    println!(
        "\nQ1 2025: {} rows x {} columns; {} holiday hours, {} weekend hours",
        x.len(),
        x.ncols(),
        sum("holidays"),
        sum("is_weekend")
    );

    let load = synth_load(24 * 7, 3, &SynthParams::default())?;
    let binner = quantile_bin_fit(load.values(), 4)?;
    let bins = quantile_bin_transform(&binner, load.values())?;
    let mut counts = [0usize; 4];
    for b in bins {
        counts[b] += 1;
    }
    println!(
        "\nload quartile edges {:?}, occupancy {:?}",
        binner
            .edges()
            .iter()
            .map(|e| (e * 100.0).round() / 100.0)
            .collect::<Vec<_>>(),
        counts
    );
    Ok(())
}
