//! Regular, UTC-indexed time series and aligned exogenous matrices.
//!
//! The index of a [`TimeSeries`] is never stored: element `i` sits at
//! `start + i * step`. Gaps in the index are therefore unrepresentable and the
//! only failure class left is a missing *value*, encoded as NaN.

use std::fmt;
use std::io::Read;
use std::ops::Range;
use std::path::Path;

use chrono::{DateTime, NaiveDate, SecondsFormat, TimeZone, Utc};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::audit;
use crate::error::{Error, Result};

const LOGGER: &str = "safeforecast.series";

/// A UTC instant with microsecond precision.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Timestamp(DateTime<Utc>);

impl Timestamp {
    /// Wraps a chrono instant, truncating sub-microsecond digits.
    pub fn from_datetime(dt: DateTime<Utc>) -> Self {
        let micros = dt.timestamp_micros();
        Timestamp(Utc.timestamp_micros(micros).single().expect("in range"))
    }

    /// `Timestamp::ymd_hms(2025, 1, 1, 0, 0, 0)`. Panics on an invalid date.
    pub fn ymd_hms(year: i32, month: u32, day: u32, hour: u32, min: u32, sec: u32) -> Self {
        Timestamp(
            Utc.with_ymd_and_hms(year, month, day, hour, min, sec)
                .single()
                .expect("valid calendar date"),
        )
    }

    pub fn from_unix_micros(micros: i64) -> Self {
        Timestamp(Utc.timestamp_micros(micros).single().expect("in range"))
    }

    /// Parses RFC 3339 / ISO 8601. Only a zero UTC offset is accepted.
    pub fn parse(s: &str) -> Result<Self> {
        let dt = DateTime::parse_from_rfc3339(s.trim())
            .map_err(|e| Error::ParseError(format!("timestamp '{s}': {e}")))?;
        if dt.offset().local_minus_utc() != 0 {
            return Err(Error::ParseError(format!(
                "timestamp '{s}' is not UTC; local times are not accepted"
            )));
        }
        Ok(Self::from_datetime(dt.with_timezone(&Utc)))
    }

    pub fn as_datetime(&self) -> DateTime<Utc> {
        self.0
    }

    pub fn unix_micros(&self) -> i64 {
        self.0.timestamp_micros()
    }

    pub fn unix_seconds(&self) -> i64 {
        self.0.timestamp()
    }

    pub fn date(&self) -> NaiveDate {
        self.0.date_naive()
    }

    pub fn add_steps(&self, freq: Frequency, steps: i64) -> Timestamp {
        Timestamp::from_unix_micros(self.unix_micros() + freq.micros() * steps)
    }
}

impl fmt::Display for Timestamp {
    /// ISO 8601 with microseconds and a trailing `Z`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.to_rfc3339_opts(SecondsFormat::Micros, true))
    }
}

impl Serialize for Timestamp {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Timestamp {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Timestamp::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// Sampling step of a regular series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "i64", into = "i64")]
pub struct Frequency(i64);

impl Frequency {
    pub fn from_micros(micros: i64) -> Result<Self> {
        if micros <= 0 {
            return Err(Error::InvalidArgument(format!(
                "frequency step must be positive, got {micros}us"
            )));
        }
        Ok(Frequency(micros))
    }

    pub fn hours(h: i64) -> Self {
        Frequency::from_micros(h * 3_600_000_000).expect("positive hour count")
    }

    pub fn days(d: i64) -> Self {
        Frequency::hours(24 * d)
    }

    pub fn micros(&self) -> i64 {
        self.0
    }
}

impl TryFrom<i64> for Frequency {
    type Error = Error;
    fn try_from(v: i64) -> Result<Self> {
        Frequency::from_micros(v)
    }
}

impl From<Frequency> for i64 {
    fn from(f: Frequency) -> i64 {
        f.0
    }
}

impl fmt::Display for Frequency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let us = self.0;
        if us % 3_600_000_000 == 0 {
            write!(f, "{}h", us / 3_600_000_000)
        } else if us % 60_000_000 == 0 {
            write!(f, "{}min", us / 60_000_000)
        } else if us % 1_000_000 == 0 {
            write!(f, "{}s", us / 1_000_000)
        } else {
            write!(f, "{us}us")
        }
    }
}

/// Inclusive `[start, end]` range on a regular grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IndexRange {
    pub start: Timestamp,
    pub end: Timestamp,
    pub freq: Frequency,
}

impl IndexRange {
    pub fn new(start: Timestamp, end: Timestamp, freq: Frequency) -> Result<Self> {
        if end < start {
            return Err(Error::InvalidArgument(format!(
                "range end {end} precedes start {start}"
            )));
        }
        if (end.unix_micros() - start.unix_micros()) % freq.micros() != 0 {
            return Err(Error::OffGridTimestamp(end.to_string()));
        }
        Ok(IndexRange { start, end, freq })
    }

    /// Range of `len` consecutive points starting at `start`.
    pub fn with_len(start: Timestamp, freq: Frequency, len: usize) -> Result<Self> {
        if len == 0 {
            return Err(Error::InvalidArgument(
                "range length must be positive".into(),
            ));
        }
        Ok(IndexRange {
            start,
            end: start.add_steps(freq, len as i64 - 1),
            freq,
        })
    }

    pub fn len(&self) -> usize {
        ((self.end.unix_micros() - self.start.unix_micros()) / self.freq.micros()) as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn timestamps(&self) -> impl Iterator<Item = Timestamp> + '_ {
        (0..self.len()).map(move |i| self.start.add_steps(self.freq, i as i64))
    }
}

/// Univariate regular series. NaN marks a missing value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimeSeries {
    name: String,
    start: Timestamp,
    freq: Frequency,
    values: Vec<f64>,
}

impl TimeSeries {
    pub fn new(
        name: impl Into<String>,
        start: Timestamp,
        freq: Frequency,
        values: Vec<f64>,
    ) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::TooShort("a series needs at least one value".into()));
        }
        Ok(TimeSeries {
            name: name.into(),
            start,
            freq,
            values,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn start(&self) -> Timestamp {
        self.start
    }

    pub fn end(&self) -> Timestamp {
        self.timestamp(self.len() - 1)
    }

    pub fn freq(&self) -> Frequency {
        self.freq
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn timestamp(&self, i: usize) -> Timestamp {
        self.start.add_steps(self.freq, i as i64)
    }

    pub fn range(&self) -> IndexRange {
        IndexRange {
            start: self.start,
            end: self.end(),
            freq: self.freq,
        }
    }

    /// Position of `ts` on this series' grid, which may lie outside `0..len`.
    pub fn grid_offset(&self, ts: Timestamp) -> Result<i64> {
        grid_offset(self.start, self.freq, ts)
    }

    /// Sub-series over an index range.
    pub fn slice(&self, range: Range<usize>) -> Result<TimeSeries> {
        if range.start >= range.end || range.end > self.len() {
            return Err(Error::InvalidArgument(format!(
                "slice {range:?} out of bounds for length {}",
                self.len()
            )));
        }
        Ok(TimeSeries {
            name: self.name.clone(),
            start: self.timestamp(range.start),
            freq: self.freq,
            values: self.values[range].to_vec(),
        })
    }

    /// Same index, new values.
    pub fn with_values(&self, values: Vec<f64>) -> Result<TimeSeries> {
        TimeSeries::new(self.name.clone(), self.start, self.freq, values)
    }
}

fn grid_offset(start: Timestamp, freq: Frequency, ts: Timestamp) -> Result<i64> {
    let delta = ts.unix_micros() - start.unix_micros();
    if delta % freq.micros() != 0 {
        return Err(Error::OffGridTimestamp(ts.to_string()));
    }
    Ok(delta / freq.micros())
}

/// Column-named feature matrix on a regular grid. Column order is significant.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExogMatrix {
    start: Timestamp,
    freq: Frequency,
    len: usize,
    columns: Vec<(String, Vec<f64>)>,
}

impl ExogMatrix {
    /// Builds a matrix; rejects duplicate names, ragged columns and any
    /// non-finite value.
    pub fn new(
        start: Timestamp,
        freq: Frequency,
        columns: Vec<(String, Vec<f64>)>,
    ) -> Result<Self> {
        let Some((_, first)) = columns.first() else {
            return Err(Error::InvalidArgument(
                "an exogenous matrix needs at least one column".into(),
            ));
        };
        let len = first.len();
        if len == 0 {
            return Err(Error::TooShort("exogenous columns are empty".into()));
        }
        for (i, (name, col)) in columns.iter().enumerate() {
            if columns[..i].iter().any(|(n, _)| n == name) {
                return Err(Error::DuplicateColumn(name.clone()));
            }
            if col.len() != len {
                return Err(Error::LengthMismatch {
                    left: len,
                    right: col.len(),
                });
            }
        }
        let flat: Vec<(usize, f64)> = columns
            .iter()
            .flat_map(|(_, c)| c.iter().copied().enumerate())
            .collect();
        if let Some(&(row, value)) = flat.iter().find(|(_, v)| !v.is_finite()) {
            return Err(audit::risk(
                LOGGER,
                "exog_invalid",
                Error::NonFiniteValue {
                    position: row,
                    value,
                },
            ));
        }
        Ok(ExogMatrix {
            start,
            freq,
            len,
            columns,
        })
    }

    pub fn start(&self) -> Timestamp {
        self.start
    }

    pub fn end(&self) -> Timestamp {
        self.start.add_steps(self.freq, self.len as i64 - 1)
    }

    pub fn freq(&self) -> Frequency {
        self.freq
    }

    /// Number of rows.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn ncols(&self) -> usize {
        self.columns.len()
    }

    pub fn column_names(&self) -> Vec<String> {
        self.columns.iter().map(|(n, _)| n.clone()).collect()
    }

    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.columns
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, c)| c.as_slice())
    }

    pub fn columns(&self) -> &[(String, Vec<f64>)] {
        &self.columns
    }

    pub fn value(&self, row: usize, col: usize) -> f64 {
        self.columns[col].1[row]
    }

    /// Appends row `row` to `out`, in column order.
    pub fn extend_row(&self, row: usize, out: &mut Vec<f64>) {
        out.extend(self.columns.iter().map(|(_, c)| c[row]));
    }

    pub fn range(&self) -> IndexRange {
        IndexRange {
            start: self.start,
            end: self.end(),
            freq: self.freq,
        }
    }

    pub fn slice_rows(&self, rows: Range<usize>) -> Result<ExogMatrix> {
        if rows.start >= rows.end || rows.end > self.len {
            return Err(Error::InvalidArgument(format!(
                "row slice {rows:?} out of bounds for {} rows",
                self.len
            )));
        }
        Ok(ExogMatrix {
            start: self.start.add_steps(self.freq, rows.start as i64),
            freq: self.freq,
            len: rows.len(),
            columns: self
                .columns
                .iter()
                .map(|(n, c)| (n.clone(), c[rows.clone()].to_vec()))
                .collect(),
        })
    }

    /// Rows covering exactly `range`.
    pub fn slice_range(&self, range: IndexRange) -> Result<ExogMatrix> {
        if range.freq != self.freq {
            return Err(Error::FrequencyMismatch {
                left: range.freq.to_string(),
                right: self.freq.to_string(),
            });
        }
        let first = grid_offset(self.start, self.freq, range.start)?;
        let last = first + range.len() as i64 - 1;
        if first < 0 || last >= self.len as i64 {
            return Err(Error::CoverageError(format!(
                "exog [{}, {}] does not contain [{}, {}]",
                self.start,
                self.end(),
                range.start,
                range.end
            )));
        }
        self.slice_rows(first as usize..last as usize + 1)
    }

    /// Horizontal concatenation; both operands must share the same index.
    pub fn hstack(mut self, other: ExogMatrix) -> Result<ExogMatrix> {
        if self.start != other.start || self.freq != other.freq || self.len != other.len {
            return Err(Error::AlignmentError(
                "hstack operands have different indices".into(),
            ));
        }
        for (name, col) in other.columns {
            if self.columns.iter().any(|(n, _)| *n == name) {
                return Err(Error::DuplicateColumn(name));
            }
            self.columns.push((name, col));
        }
        Ok(self)
    }
}

/// How [`validate_series`] treats missing or non-finite values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MissingPolicy {
    /// Any NaN or ±Inf is an error.
    #[default]
    Strict,
    /// Enumerate offending positions instead of failing.
    Tolerant,
}

/// Outcome of [`validate_series`].
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    /// Positions holding NaN.
    pub missing: Vec<usize>,
    /// Positions holding ±Inf.
    pub infinite: Vec<usize>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.missing.is_empty() && self.infinite.is_empty()
    }

    pub fn missing_count(&self) -> usize {
        self.missing.len()
    }
}

pub fn validate_series(s: &TimeSeries, policy: MissingPolicy) -> Result<ValidationReport> {
    if policy == MissingPolicy::Strict {
        check_finite(s.values(), LOGGER, "validate")?;
        return Ok(ValidationReport::default());
    }
    let mut report = ValidationReport::default();
    for (i, v) in s.values().iter().enumerate() {
        if v.is_nan() {
            report.missing.push(i);
        } else if v.is_infinite() {
            report.infinite.push(i);
        }
    }
    Ok(report)
}

/// Fails with `NonFiniteValue` at the first NaN/±Inf, emitting an ERROR audit
/// record through the active sink.
pub(crate) fn check_finite(values: &[f64], logger: &str, event: &str) -> Result<()> {
    match values.iter().position(|v| !v.is_finite()) {
        None => Ok(()),
        Some(position) => Err(audit::risk(
            logger,
            event,
            Error::NonFiniteValue {
                position,
                value: values[position],
            },
        )),
    }
}

/// Row-aligned pairing of a series with an exogenous matrix.
///
/// Alignment is pure index arithmetic: series row `i` corresponds to exog row
/// `offset + i`.
#[derive(Debug, Clone, Copy)]
pub struct AlignedView<'a> {
    pub series: &'a TimeSeries,
    pub exog: &'a ExogMatrix,
    pub offset: usize,
}

impl AlignedView<'_> {
    pub fn len(&self) -> usize {
        self.series.len()
    }

    pub fn is_empty(&self) -> bool {
        self.series.is_empty()
    }

    /// Exog row index matching series row `i`.
    pub fn exog_row(&self, i: usize) -> usize {
        self.offset + i
    }
}

pub fn align<'a>(s: &'a TimeSeries, x: &'a ExogMatrix) -> Result<AlignedView<'a>> {
    if s.freq() != x.freq() {
        return Err(Error::FrequencyMismatch {
            left: s.freq().to_string(),
            right: x.freq().to_string(),
        });
    }
    let offset = grid_offset(x.start(), x.freq(), s.start())?;
    if offset < 0 || offset as usize + s.len() > x.len() {
        return Err(Error::CoverageError(format!(
            "exog [{}, {}] does not contain series [{}, {}]",
            x.start(),
            x.end(),
            s.start(),
            s.end()
        )));
    }
    Ok(AlignedView {
        series: s,
        exog: x,
        offset: offset as usize,
    })
}

/// Inclusive-endpoint slice by timestamp.
pub fn slice_by_time(s: &TimeSeries, from: Timestamp, to: Timestamp) -> Result<TimeSeries> {
    if from > to {
        return Err(Error::InvalidArgument(format!(
            "slice start {from} after end {to}"
        )));
    }
    let a = s.grid_offset(from)?;
    let b = s.grid_offset(to)?;
    if a < 0 || b >= s.len() as i64 {
        return Err(Error::CoverageError(format!(
            "[{from}, {to}] is outside series [{}, {}]",
            s.start(),
            s.end()
        )));
    }
    s.slice(a as usize..b as usize + 1)
}

/// Columns loaded from a CSV file on a verified regular grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    pub start: Timestamp,
    pub freq: Frequency,
    pub columns: Vec<(String, Vec<f64>)>,
}

impl Frame {
    pub fn len(&self) -> usize {
        self.columns.first().map_or(0, |(_, c)| c.len())
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn series(&self, name: &str) -> Result<TimeSeries> {
        let (n, v) = self
            .columns
            .iter()
            .find(|(n, _)| n == name)
            .ok_or_else(|| Error::InvalidArgument(format!("no column '{name}'")))?;
        TimeSeries::new(n.clone(), self.start, self.freq, v.clone())
    }

    /// The first value column, conventionally the forecast target.
    pub fn first_series(&self) -> Result<TimeSeries> {
        let name = self
            .columns
            .first()
            .map(|(n, _)| n.clone())
            .ok_or_else(|| Error::ParseError("CSV has no value column".into()))?;
        self.series(&name)
    }
}

/// Reads a CSV file: header row, first column `timestamp` (ISO 8601 UTC),
/// numeric value columns, empty cell = missing.
///
/// The step is inferred from the first two rows unless `freq` is given; every
/// later row must sit exactly one step after its predecessor.
pub fn read_csv(path: impl AsRef<Path>, freq: Option<Frequency>) -> Result<Frame> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    parse_csv(file, freq)
}

/// Renders `timestamp,<name>` rows; missing values become empty cells.
/// Inverse of [`parse_csv`] for finite and NaN values.
pub fn series_to_csv(s: &TimeSeries) -> String {
    let mut out = format!("timestamp,{}\n", s.name());
    for (i, v) in s.values().iter().enumerate() {
        if v.is_nan() {
            out.push_str(&format!("{},\n", s.timestamp(i)));
        } else {
            out.push_str(&format!("{},{v}\n", s.timestamp(i)));
        }
    }
    out
}

pub fn parse_csv<R: Read>(reader: R, freq: Option<Frequency>) -> Result<Frame> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(reader);
    let headers = rdr
        .headers()
        .map_err(|e| Error::ParseError(e.to_string()))?
        .clone();
    if headers.get(0).map(str::trim) != Some("timestamp") {
        return Err(Error::ParseError(
            "first CSV column must be named 'timestamp'".into(),
        ));
    }
    let names: Vec<String> = headers
        .iter()
        .skip(1)
        .map(|h| h.trim().to_string())
        .collect();
    for (i, n) in names.iter().enumerate() {
        if names[..i].contains(n) {
            return Err(Error::DuplicateColumn(n.clone()));
        }
    }
    let mut stamps: Vec<Timestamp> = Vec::new();
    let mut cols: Vec<Vec<f64>> = vec![Vec::new(); names.len()];
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| Error::ParseError(e.to_string()))?;
        if rec.len() != names.len() + 1 {
            return Err(Error::ParseError(format!(
                "row {} has {} fields, expected {}",
                line + 2,
                rec.len(),
                names.len() + 1
            )));
        }
        stamps.push(Timestamp::parse(&rec[0])?);
        for (j, cell) in rec.iter().skip(1).enumerate() {
            let cell = cell.trim();
            let v = if cell.is_empty() {
                f64::NAN
            } else {
                cell.parse::<f64>().map_err(|_| {
                    Error::ParseError(format!("row {}: '{cell}' is not a number", line + 2))
                })?
            };
            cols[j].push(v);
        }
    }
    let Some(&start) = stamps.first() else {
        return Err(Error::TooShort("CSV has no data rows".into()));
    };
    let freq = match freq {
        Some(f) => f,
        None if stamps.len() >= 2 => {
            let d = stamps[1].unix_micros() - stamps[0].unix_micros();
            if d == 0 {
                return Err(Error::DuplicateTimestamp(stamps[1].to_string()));
            }
            Frequency::from_micros(d).map_err(|_| Error::OffGridTimestamp(stamps[1].to_string()))?
        }
        None => {
            return Err(Error::InvalidArgument(
                "cannot infer the frequency of a single-row CSV".into(),
            ))
        }
    };
    for w in stamps.windows(2) {
        let d = w[1].unix_micros() - w[0].unix_micros();
        if d == 0 {
            return Err(Error::DuplicateTimestamp(w[1].to_string()));
        }
        if d != freq.micros() {
            return Err(Error::OffGridTimestamp(w[1].to_string()));
        }
    }
    Ok(Frame {
        start,
        freq,
        columns: names.into_iter().zip(cols).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hourly(values: Vec<f64>) -> TimeSeries {
        TimeSeries::new(
            "y",
            Timestamp::ymd_hms(2025, 1, 1, 0, 0, 0),
            Frequency::hours(1),
            values,
        )
        .unwrap()
    }

    fn q1_2025() -> TimeSeries {
        hourly(vec![0.0; 2160])
    }

    #[test]
    fn timestamp_renders_micros_and_z() {
        let t = Timestamp::ymd_hms(2026, 4, 26, 16, 31, 44);
        assert_eq!(t.to_string(), "2026-04-26T16:31:44.000000Z");
        assert_eq!(Timestamp::parse(&t.to_string()).unwrap(), t);
    }

    #[test]
    fn non_utc_offsets_are_rejected() {
        assert!(Timestamp::parse("2025-01-01T01:00:00+01:00").is_err());
        assert!(Timestamp::parse("2025-01-01T00:00:00+00:00").is_ok());
    }

    #[test]
    fn strict_validation_of_clean_series() {
        let r = validate_series(&hourly(vec![1.0, 2.0, 3.0]), MissingPolicy::Strict).unwrap();
        assert_eq!(r.missing_count(), 0);
    }

    #[test]
    fn strict_validation_reports_first_nan() {
        let err =
            validate_series(&hourly(vec![1.0, f64::NAN, 3.0]), MissingPolicy::Strict).unwrap_err();
        assert!(matches!(err, Error::NonFiniteValue { position: 1, .. }));
    }

    #[test]
    fn tolerant_validation_enumerates() {
        let r = validate_series(
            &hourly(vec![1.0, f64::NAN, f64::INFINITY]),
            MissingPolicy::Tolerant,
        )
        .unwrap();
        assert_eq!(r.missing, vec![1]);
        assert_eq!(r.infinite, vec![2]);
    }

    #[test]
    fn align_contained_range() {
        let s = hourly(vec![0.0; 48]);
        let x = ExogMatrix::new(
            Timestamp::ymd_hms(2025, 1, 1, 0, 0, 0),
            Frequency::hours(1),
            vec![("a".into(), vec![0.0; 31 * 24])],
        )
        .unwrap();
        let v = align(&s, &x).unwrap();
        assert_eq!(v.len(), 48);
        assert_eq!(v.offset, 0);
    }

    #[test]
    fn align_rejects_daily_exog() {
        let s = hourly(vec![0.0; 48]);
        let x = ExogMatrix::new(
            Timestamp::ymd_hms(2025, 1, 1, 0, 0, 0),
            Frequency::days(1),
            vec![("a".into(), vec![0.0; 31])],
        )
        .unwrap();
        assert!(matches!(
            align(&s, &x),
            Err(Error::FrequencyMismatch { .. })
        ));
    }

    #[test]
    fn align_detects_short_exog() {
        let s = TimeSeries::new(
            "y",
            Timestamp::ymd_hms(2025, 3, 1, 0, 0, 0),
            Frequency::hours(1),
            vec![0.0; 31 * 24],
        )
        .unwrap();
        let x = ExogMatrix::new(
            Timestamp::ymd_hms(2025, 3, 1, 0, 0, 0),
            Frequency::hours(1),
            vec![("a".into(), vec![0.0; 30 * 24])],
        )
        .unwrap();
        assert!(matches!(align(&s, &x), Err(Error::CoverageError(_))));
    }

    #[test]
    fn chronological_split_counts() {
        let y = q1_2025();
        let train = slice_by_time(
            &y,
            Timestamp::ymd_hms(2025, 1, 1, 0, 0, 0),
            Timestamp::ymd_hms(2025, 3, 1, 23, 0, 0),
        )
        .unwrap();
        let eval = slice_by_time(
            &y,
            Timestamp::ymd_hms(2025, 3, 2, 0, 0, 0),
            Timestamp::ymd_hms(2025, 3, 31, 23, 0, 0),
        )
        .unwrap();
        assert_eq!(train.len(), 1440);
        assert_eq!(eval.len(), 720);
        let t = Timestamp::ymd_hms(2025, 2, 1, 5, 0, 0);
        assert_eq!(slice_by_time(&y, t, t).unwrap().len(), 1);
    }

    #[test]
    fn slicing_off_grid_fails() {
        let y = q1_2025();
        let err = slice_by_time(
            &y,
            Timestamp::ymd_hms(2025, 1, 1, 0, 30, 0),
            Timestamp::ymd_hms(2025, 1, 2, 0, 0, 0),
        )
        .unwrap_err();
        assert!(matches!(err, Error::OffGridTimestamp(_)));
    }

    #[test]
    fn identity_slice() {
        let y = hourly((0..50).map(f64::from).collect());
        assert_eq!(slice_by_time(&y, y.start(), y.end()).unwrap(), y);
    }

    #[test]
    fn exog_rejects_nan_and_duplicates() {
        let t = Timestamp::ymd_hms(2025, 1, 1, 0, 0, 0);
        let f = Frequency::hours(1);
        assert!(matches!(
            ExogMatrix::new(t, f, vec![("a".into(), vec![1.0, f64::NAN])]),
            Err(Error::NonFiniteValue { position: 1, .. })
        ));
        assert!(matches!(
            ExogMatrix::new(t, f, vec![("a".into(), vec![1.0]), ("a".into(), vec![2.0])]),
            Err(Error::DuplicateColumn(_))
        ));
    }

    #[test]
    fn csv_round_trip_with_missing_cell() {
        let text = "timestamp,load,temp\n\
                    2025-01-01T00:00:00Z,1.5,3\n\
                    2025-01-01T01:00:00Z,,4\n\
                    2025-01-01T02:00:00.000000Z,2.5,5\n";
        let frame = parse_csv(text.as_bytes(), None).unwrap();
        assert_eq!(frame.freq, Frequency::hours(1));
        let y = frame.first_series().unwrap();
        assert_eq!(y.name(), "load");
        assert!(y.values()[1].is_nan());
        assert_eq!(frame.series("temp").unwrap().values(), &[3.0, 4.0, 5.0]);
    }

    #[test]
    fn csv_rejects_duplicate_and_off_grid_rows() {
        let dup =
            "timestamp,y\n2025-01-01T00:00:00Z,1\n2025-01-01T01:00:00Z,2\n2025-01-01T01:00:00Z,3\n";
        assert!(matches!(
            parse_csv(dup.as_bytes(), None),
            Err(Error::DuplicateTimestamp(_))
        ));
        let gap =
            "timestamp,y\n2025-01-01T00:00:00Z,1\n2025-01-01T01:00:00Z,2\n2025-01-01T03:00:00Z,3\n";
        assert!(matches!(
            parse_csv(gap.as_bytes(), None),
            Err(Error::OffGridTimestamp(_))
        ));
    }
}
