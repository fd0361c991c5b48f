//! Data provenance, canonical model files, and cache quarantine.
//!
//! A model file is a single JSON object in canonical form: keys sorted
//! lexicographically at every level, floats in shortest round-trip notation,
//! no whitespace, one trailing newline. `self_hash` is the SHA-256 of the
//! canonical rendering of the object *without* the `self_hash` key.
//!
//! Loading checks, in order: the format version, the self-hash, and finally
//! that the file bytes are exactly the canonical rendering of what was
//! parsed. The last check rejects edits that leave the parsed value unchanged
//! (e.g. `2.5e+20` rewritten as `2.5E+20`).

use std::fs;
use std::io::ErrorKind;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

use crate::audit::{self, AuditRecord, Level};
use crate::clock::Clock;
use crate::error::{Error, Result};
use crate::forecast::{FittedForecaster, LagSet};
use crate::regress::FittedRegressor;
use crate::series::{Frequency, TimeSeries, Timestamp};

const LOGGER: &str = "safeforecast.provenance";

pub const MODEL_FORMAT_VERSION: &str = "1";

/// Lowercase hex SHA-256.
pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Where the training data came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProvenanceRecord {
    pub source_url: String,
    pub retrieved_at: Timestamp,
    /// Lowercase hex SHA-256 of the raw source bytes.
    pub content_hash: String,
}

impl ProvenanceRecord {
    pub fn new(
        source_url: impl Into<String>,
        retrieved_at: Timestamp,
        content_hash: impl Into<String>,
    ) -> Result<Self> {
        let content_hash = content_hash.into();
        let ok = content_hash.len() == 64
            && content_hash
                .bytes()
                .all(|b| b.is_ascii_digit() || (b'a'..=b'f').contains(&b));
        if !ok {
            return Err(Error::InvalidArgument(format!(
                "content hash must be 64 lowercase hex characters, got {content_hash:?}"
            )));
        }
        Ok(ProvenanceRecord {
            source_url: source_url.into(),
            retrieved_at,
            content_hash,
        })
    }

    /// Record for `bytes` read from `source_url`.
    pub fn from_bytes(
        source_url: impl Into<String>,
        retrieved_at: Timestamp,
        bytes: &[u8],
    ) -> Self {
        ProvenanceRecord {
            source_url: source_url.into(),
            retrieved_at,
            content_hash: sha256_hex(bytes),
        }
    }

    /// Record for an in-memory series: hashes its little-endian value bytes.
    pub fn for_series(y: &TimeSeries) -> Self {
        let bytes: Vec<u8> = y.values().iter().flat_map(|v| v.to_le_bytes()).collect();
        Self::from_bytes(format!("memory://{}", y.name()), y.end(), &bytes)
    }
}

fn float_value(v: f64) -> Result<Value> {
    serde_json::Number::from_f64(v)
        .map(Value::Number)
        .ok_or(Error::NonFiniteValue {
            position: 0,
            value: v,
        })
}

fn float_array(values: &[f64]) -> Result<Value> {
    values
        .iter()
        .enumerate()
        .map(|(position, &v)| {
            float_value(v).map_err(|_| Error::NonFiniteValue { position, value: v })
        })
        .collect::<Result<Vec<_>>>()
        .map(Value::Array)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Payload {
    lags: Vec<usize>,
    estimator: String,
    exog_columns: Vec<String>,
    coefficients: Vec<f64>,
    intercept: f64,
    residuals: Vec<f64>,
    training_start: Timestamp,
    training_end: Timestamp,
    freq_micros: i64,
    last_window: Vec<f64>,
    window_end: Timestamp,
    seed: u64,
}

fn payload(f: &FittedForecaster) -> Result<Value> {
    let mut m = Map::new();
    m.insert(
        "lags".into(),
        serde_json::to_value(f.lags.as_slice()).expect("integers"),
    );
    m.insert("estimator".into(), Value::from(f.estimator.clone()));
    m.insert("exog_columns".into(), Value::from(f.exog_columns.clone()));
    m.insert(
        "coefficients".into(),
        float_array(f.regressor.coefficients())?,
    );
    m.insert("intercept".into(), float_value(f.regressor.intercept())?);
    m.insert("residuals".into(), float_array(&f.residuals)?);
    m.insert(
        "training_start".into(),
        Value::from(f.training_range.0.to_string()),
    );
    m.insert(
        "training_end".into(),
        Value::from(f.training_range.1.to_string()),
    );
    m.insert("freq_micros".into(), Value::from(f.freq.micros()));
    m.insert("last_window".into(), float_array(&f.last_window)?);
    m.insert("window_end".into(), Value::from(f.window_end.to_string()));
    m.insert("seed".into(), Value::from(f.seed));
    Ok(Value::Object(m))
}

/// `serde_json` without `preserve_order` keeps object keys in a `BTreeMap`,
/// so compact serialization is already key-sorted.
fn canonical(v: &Value) -> Vec<u8> {
    serde_json::to_vec(v).expect("Value serialization is infallible")
}

/// Canonical model file bytes for `f`.
pub fn model_bytes(f: &FittedForecaster) -> Result<Vec<u8>> {
    render(f).map(|(bytes, _)| bytes)
}

/// File bytes and self-hash.
fn render(f: &FittedForecaster) -> Result<(Vec<u8>, String)> {
    let mut doc = Map::new();
    doc.insert("format_version".into(), Value::from(MODEL_FORMAT_VERSION));
    doc.insert("model".into(), payload(f)?);
    doc.insert(
        "provenance".into(),
        serde_json::to_value(&f.provenance).map_err(|e| Error::ParseError(e.to_string()))?,
    );
    let mut doc = Value::Object(doc);
    let hash = sha256_hex(&canonical(&doc));
    doc.as_object_mut()
        .expect("object")
        .insert("self_hash".into(), Value::from(hash.clone()));
    let mut out = canonical(&doc);
    out.push(b'\n');
    Ok((out, hash))
}

pub fn save_model(f: &FittedForecaster, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let (bytes, hash) = render(f)?;
    fs::write(path, &bytes).map_err(|e| Error::io(path, e))?;
    audit::emit_active(
        AuditRecord::new(
            f.window_end,
            LOGGER,
            Level::Info,
            "save_model",
            "model file written",
        )
        .with_context("self_hash", hash)
        .with_context("bytes", bytes.len()),
    )
}

pub fn load_model(path: impl AsRef<Path>) -> Result<FittedForecaster> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    parse_model(&bytes)
}

/// Inverse of [`model_bytes`].
pub fn parse_model(bytes: &[u8]) -> Result<FittedForecaster> {
    let parse_err = |msg: String| Error::ParseError(msg);
    let doc: Value = serde_json::from_slice(bytes).map_err(|e| parse_err(e.to_string()))?;
    let Value::Object(mut obj) = doc else {
        return Err(parse_err("model file is not a JSON object".into()));
    };
    match obj.get("format_version") {
        Some(Value::String(v)) if v == MODEL_FORMAT_VERSION => {}
        Some(Value::String(v)) => return Err(Error::UnsupportedVersion(v.clone())),
        Some(other) => return Err(Error::UnsupportedVersion(other.to_string())),
        None => return Err(parse_err("missing format_version".into())),
    }
    let stored = match obj.remove("self_hash") {
        Some(Value::String(h)) => h,
        _ => return Err(parse_err("missing or malformed self_hash".into())),
    };
    let body = Value::Object(obj);
    let computed = sha256_hex(&canonical(&body));
    if stored != computed {
        return Err(Error::HashMismatch { stored, computed });
    }
    let Value::Object(mut obj) = body else {
        unreachable!()
    };
    obj.insert("self_hash".into(), Value::from(stored));
    let mut expect = canonical(&Value::Object(obj.clone()));
    expect.push(b'\n');
    if expect != bytes {
        return Err(parse_err("model file is not in canonical form".into()));
    }
    let extra: Vec<&String> = obj
        .keys()
        .filter(|k| !["format_version", "model", "provenance", "self_hash"].contains(&k.as_str()))
        .collect();
    if !extra.is_empty() {
        return Err(parse_err(format!("unknown top-level keys {extra:?}")));
    }
    let take = |obj: &mut Map<String, Value>, key: &str| {
        obj.remove(key)
            .ok_or_else(|| parse_err(format!("missing {key}")))
    };
    let p: Payload =
        serde_json::from_value(take(&mut obj, "model")?).map_err(|e| parse_err(e.to_string()))?;
    let prov: ProvenanceRecord = serde_json::from_value(take(&mut obj, "provenance")?)
        .map_err(|e| parse_err(e.to_string()))?;
    let provenance = ProvenanceRecord::new(prov.source_url, prov.retrieved_at, prov.content_hash)?;

    let lags = LagSet::new(p.lags)?;
    let regressor = FittedRegressor::new(p.coefficients, p.intercept)?;
    if regressor.feature_count() != lags.len() + p.exog_columns.len() {
        return Err(Error::DimensionMismatch {
            expected: lags.len() + p.exog_columns.len(),
            actual: regressor.feature_count(),
        });
    }
    if p.last_window.len() != lags.max() {
        return Err(Error::DimensionMismatch {
            expected: lags.max(),
            actual: p.last_window.len(),
        });
    }
    Ok(FittedForecaster {
        lags,
        regressor,
        estimator: p.estimator,
        exog_columns: p.exog_columns,
        residuals: p.residuals,
        training_range: (p.training_start, p.training_end),
        freq: Frequency::from_micros(p.freq_micros)?,
        last_window: p.last_window,
        window_end: p.window_end,
        seed: p.seed,
        provenance,
    })
}

/// `<path>.corrupt-<epoch_seconds>`
pub fn quarantine_path(path: &Path, epoch_seconds: i64) -> PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(format!(".corrupt-{epoch_seconds}"));
    PathBuf::from(name)
}

/// Reads a JSON cache file. See [`read_cache_with`].
pub fn read_cache(path: impl AsRef<Path>, clock: &dyn Clock) -> Result<Option<Vec<u8>>> {
    read_cache_with(path, clock, |b| serde_json::from_slice::<Value>(b).is_ok())
}

/// Returns the bytes of `path` if they are readable and pass `is_valid`.
///
/// A missing file yields `None` without logging. An unreadable or invalid
/// file is renamed to [`quarantine_path`] (stamped with `clock`), a WARNING
/// audit record is emitted, and `None` is returned. The original bytes are
/// preserved under the new name.
pub fn read_cache_with(
    path: impl AsRef<Path>,
    clock: &dyn Clock,
    is_valid: impl Fn(&[u8]) -> bool,
) -> Result<Option<Vec<u8>>> {
    let path = path.as_ref();
    let reason = match fs::read(path) {
        Ok(bytes) if is_valid(&bytes) => return Ok(Some(bytes)),
        Ok(_) => "content failed validation".to_string(),
        Err(e) if e.kind() == ErrorKind::NotFound => return Ok(None),
        Err(e) => e.to_string(),
    };
    let target = quarantine_path(path, clock.now().unix_seconds());
    fs::rename(path, &target).map_err(|e| Error::io(path, e))?;
    let file_name = |p: &Path| {
        p.file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default()
    };
    audit::warn(
        LOGGER,
        "cache_quarantine",
        &format!(
            "cache {} unusable ({reason}); moved to {}",
            file_name(path),
            file_name(&target)
        ),
    );
    Ok(None)
}
