// Saving and loading models in the canonical, self-hashing JSON format,
// and quarantining unusable cache files.
//
// Run with `cargo run --example model_persistence`.

use safeforecast::provenance::{model_bytes, parse_model, read_cache};
use safeforecast::{
    fit_forecaster, load_model, predict_recursive, save_model, synth_load, Error, FixedClock,
    LagSet, ProvenanceRecord, RegressorSpec, SynthParams, Timestamp,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = tempfile::tempdir()?;
    let y = synth_load(24 * 10, 5, &SynthParams::default())?;
    let prov = ProvenanceRecord::from_bytes(
        "memory://example",
        Timestamp::ymd_hms(2026, 1, 1, 0, 0, 0),
        b"raw bytes the series was parsed from",
    );
    let model = fit_forecaster(
        &y,
        &LagSet::new(vec![1, 24])?,
        None,
        &RegressorSpec::ridge(0.1, 9)?,
        prov,
    )?;

    let path = dir.path().join("model.json");
    save_model(&model, &path)?;
    let bytes = std::fs::read(&path)?;
    println!("model.json: {} bytes", bytes.len());
    println!(
        "re-rendering is byte-identical: {}",
        model_bytes(&model)? == bytes
    );

    let loaded = load_model(&path)?;
    println!(
        "loaded model forecasts identically: {}",
        predict_recursive(&loaded, 6, None)? == predict_recursive(&model, 6, None)?
    );

    let text = String::from_utf8(bytes)?;
    let tampered = text.replacen(
        "\"estimator\":\"ridge(0.1)\"",
        "\"estimator\":\"ridge(0.2)\"",
        1,
    );
    match parse_model(tampered.as_bytes()) {
        Err(e @ Error::HashMismatch { .. }) => println!("edited file: {}", e.name()),
        other => println!("unexpected: {other:?}"),
    }
    let version = text.replacen("\"format_version\":\"1\"", "\"format_version\":\"9\"", 1);
    if let Err(e) = parse_model(version.as_bytes()) {
        println!("future format: {}: {e}", e.name());
    }

    let clock = FixedClock(Timestamp::ymd_hms(2026, 4, 26, 0, 0, 0));
    let cache = dir.path().join("features.json");
    std::fs::write(&cache, b"{\"rows\": 3")?;
    println!("\ncorrupt cache read: {:?}", read_cache(&cache, &clock)?);
    let mut moved: Vec<String> = std::fs::read_dir(dir.path())?
        .filter_map(|e| e.ok())
        .map(|e| e.file_name().to_string_lossy().into_owned())
        .collect();
    moved.sort();
    println!("directory now holds {moved:?}");
    Ok(())
}
