//! Calendar features: repeating radial-basis encodings of periodic calendar
//! fields, plus holiday and weekend indicator columns.

use std::collections::BTreeSet;

use chrono::{Datelike, NaiveDate, Timelike};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{ExogMatrix, IndexRange, Timestamp};

/// Calendar field a [`Period`] reads from each UTC timestamp.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CalendarField {
    /// 0–23.
    Hour,
    /// Monday = 0 … Sunday = 6.
    DayOfWeek,
    /// 1–366.
    DayOfYear,
}

impl CalendarField {
    pub fn value(&self, t: Timestamp) -> i64 {
        let dt = t.as_datetime();
        match self {
            CalendarField::Hour => dt.hour() as i64,
            CalendarField::DayOfWeek => dt.weekday().num_days_from_monday() as i64,
            CalendarField::DayOfYear => dt.ordinal() as i64,
        }
    }
}

/// One cyclical encoding block: `n_periods` Gaussian bumps evenly spaced on
/// the unit circle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Period {
    pub name: String,
    pub n_periods: usize,
    pub column: CalendarField,
    /// Inclusive bounds of the calendar field.
    pub input_range: (i64, i64),
}

impl Period {
    pub fn new(
        name: impl Into<String>,
        n_periods: usize,
        column: CalendarField,
        input_range: (i64, i64),
    ) -> Result<Self> {
        let p = Period {
            name: name.into(),
            n_periods,
            column,
            input_range,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.name.is_empty() {
            return Err(Error::InvalidArgument(
                "period name must not be empty".into(),
            ));
        }
        if self.n_periods == 0 {
            return Err(Error::InvalidArgument(format!(
                "period '{}' needs n_periods >= 1",
                self.name
            )));
        }
        if self.input_range.0 >= self.input_range.1 {
            return Err(Error::InvalidArgument(format!(
                "period '{}' has empty input range {:?}",
                self.name, self.input_range
            )));
        }
        Ok(())
    }

    pub fn column_names(&self) -> Vec<String> {
        (0..self.n_periods)
            .map(|j| format!("{}_{j}", self.name))
            .collect()
    }

    /// Activations of all basis functions for a raw calendar value.
    ///
    /// The value is mapped to `u = (v - lo) / (hi - lo + 1)` on the unit
    /// circle, so `hi` and `lo` are neighbours. Basis `j` is centred at `j/n`
    /// with width `1/n` and evaluates `exp(-(d / w)^2)` for the wrap-around
    /// distance `d`.
    pub fn encode(&self, v: i64) -> Vec<f64> {
        let (lo, hi) = self.input_range;
        let u = ((v - lo) as f64 / (hi - lo + 1) as f64).rem_euclid(1.0);
        let n = self.n_periods as f64;
        (0..self.n_periods)
            .map(|j| {
                let d = (u - j as f64 / n).abs();
                let d = d.min(1.0 - d);
                let z = d * n;
                (-(z * z)).exp()
            })
            .collect()
    }
}

/// Encodes one period over every timestamp of `range`. Columns are named
/// `{name}_0 … {name}_{n-1}`.
pub fn rbf_encode(range: IndexRange, p: &Period) -> Result<ExogMatrix> {
    p.validate()?;
    let mut cols = vec![Vec::with_capacity(range.len()); p.n_periods];
    for t in range.timestamps() {
        for (col, v) in cols.iter_mut().zip(p.encode(p.column.value(t))) {
            col.push(v);
        }
    }
    ExogMatrix::new(
        range.start,
        range.freq,
        p.column_names().into_iter().zip(cols).collect(),
    )
}

/// Assembles the calendar feature matrix: RBF blocks in `periods` order, then
/// `holidays` and `is_weekend` indicator columns.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ExogBuilder {
    pub periods: Vec<Period>,
    pub holidays: BTreeSet<NaiveDate>,
    /// Monday = 0.
    pub weekend_days: BTreeSet<u32>,
}

impl ExogBuilder {
    pub fn new(periods: Vec<Period>) -> Self {
        ExogBuilder {
            periods,
            holidays: BTreeSet::new(),
            weekend_days: [5, 6].into_iter().collect(),
        }
    }

    pub fn with_holidays(mut self, holidays: impl IntoIterator<Item = NaiveDate>) -> Self {
        self.holidays = holidays.into_iter().collect();
        self
    }

    pub fn with_weekend_days(mut self, days: impl IntoIterator<Item = u32>) -> Self {
        self.weekend_days = days.into_iter().collect();
        self
    }

    pub fn column_names(&self) -> Vec<String> {
        self.periods
            .iter()
            .flat_map(Period::column_names)
            .chain(["holidays".to_string(), "is_weekend".to_string()])
            .collect()
    }

    pub fn build(&self, range: IndexRange) -> Result<ExogMatrix> {
        build_exog(range, &self.periods, &self.holidays, &self.weekend_days)
    }
}

pub fn build_exog(
    range: IndexRange,
    periods: &[Period],
    holidays: &BTreeSet<NaiveDate>,
    weekend_days: &BTreeSet<u32>,
) -> Result<ExogMatrix> {
    let mut seen = BTreeSet::new();
    for name in periods
        .iter()
        .flat_map(Period::column_names)
        .chain(["holidays".to_string(), "is_weekend".to_string()])
    {
        if !seen.insert(name.clone()) {
            return Err(Error::DuplicateColumn(name));
        }
    }
    if let Some(d) = weekend_days.iter().find(|&&d| d > 6) {
        return Err(Error::InvalidArgument(format!(
            "weekday number {d} outside 0..=6"
        )));
    }

    let mut columns = Vec::new();
    for p in periods {
        let block = rbf_encode(range, p)?;
        columns.extend(block.columns().iter().cloned());
    }
    let (hol, wkd): (Vec<f64>, Vec<f64>) = range
        .timestamps()
        .map(|t| {
            let h = if holidays.contains(&t.date()) {
                1.0
            } else {
                0.0
            };
            let dow = t.as_datetime().weekday().num_days_from_monday();
            let w = if weekend_days.contains(&dow) {
                1.0
            } else {
                0.0
            };
            (h, w)
        })
        .unzip();
    columns.push(("holidays".to_string(), hol));
    columns.push(("is_weekend".to_string(), wkd));
    ExogMatrix::new(range.start, range.freq, columns)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::Frequency;

    fn hour_period() -> Period {
        Period::new("hour", 6, CalendarField::Hour, (0, 23)).unwrap()
    }

    fn dow_period() -> Period {
        Period::new("dayofweek", 4, CalendarField::DayOfWeek, (0, 6)).unwrap()
    }

    fn q1() -> IndexRange {
        IndexRange::new(
            Timestamp::ymd_hms(2025, 1, 1, 0, 0, 0),
            Timestamp::ymd_hms(2025, 3, 31, 23, 0, 0),
            Frequency::hours(1),
        )
        .unwrap()
    }

    #[test]
    fn activation_is_one_at_centre() {
        let range = IndexRange::with_len(
            Timestamp::ymd_hms(2025, 1, 1, 0, 0, 0),
            Frequency::hours(1),
            1,
        )
        .unwrap();
        let m = rbf_encode(range, &hour_period()).unwrap();
        assert_eq!(m.column("hour_0").unwrap()[0], 1.0);
    }

    #[test]
    fn all_hours_in_unit_interval() {
        let p = hour_period();
        for h in 0..24 {
            for v in p.encode(h) {
                assert!(v > 0.0 && v <= 1.0, "hour {h} -> {v}");
            }
        }
    }

    #[test]
    fn next_midnight_repeats() {
        let range = IndexRange::with_len(
            Timestamp::ymd_hms(2025, 1, 1, 0, 0, 0),
            Frequency::hours(1),
            25,
        )
        .unwrap();
        let m = rbf_encode(range, &hour_period()).unwrap();
        for (_, col) in m.columns() {
            assert_eq!(col[0].to_bits(), col[24].to_bits());
        }
    }

    #[test]
    fn late_evening_and_early_morning_are_neighbours() {
        let p = hour_period();
        let dist = |a: i64, b: i64| -> f64 {
            p.encode(a)
                .iter()
                .zip(p.encode(b))
                .map(|(x, y)| (x - y).powi(2))
                .sum::<f64>()
        };
        assert!(dist(22, 2) < dist(22, 12));
    }

    #[test]
    fn reference_exog_shape() {
        let m = build_exog(
            q1(),
            &[hour_period(), dow_period()],
            &BTreeSet::new(),
            &[5, 6].into(),
        )
        .unwrap();
        assert_eq!(m.len(), 2160);
        assert_eq!(
            m.column_names(),
            [
                "hour_0",
                "hour_1",
                "hour_2",
                "hour_3",
                "hour_4",
                "hour_5",
                "dayofweek_0",
                "dayofweek_1",
                "dayofweek_2",
                "dayofweek_3",
                "holidays",
                "is_weekend"
            ]
        );
    }

    #[test]
    fn minimal_build_has_two_columns() {
        let m = build_exog(q1(), &[], &BTreeSet::new(), &BTreeSet::new()).unwrap();
        assert_eq!(m.column_names(), ["holidays", "is_weekend"]);
        assert!(m.column("holidays").unwrap().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn new_year_holiday_rows() {
        let hol: BTreeSet<_> = [NaiveDate::from_ymd_opt(2025, 1, 1).unwrap()].into();
        let m = build_exog(q1(), &[], &hol, &BTreeSet::new()).unwrap();
        let col = m.column("holidays").unwrap();
        assert_eq!(col.iter().filter(|&&v| v == 1.0).count(), 24);
        assert!(col[..24].iter().all(|&v| v == 1.0));
    }

    #[test]
    fn weekend_flags_follow_monday_zero() {
        // 2025-01-04 is a Saturday
        let range = IndexRange::with_len(
            Timestamp::ymd_hms(2025, 1, 3, 0, 0, 0),
            Frequency::days(1),
            4,
        )
        .unwrap();
        let m = build_exog(range, &[], &BTreeSet::new(), &[5, 6].into()).unwrap();
        assert_eq!(m.column("is_weekend").unwrap(), &[0.0, 1.0, 1.0, 0.0]);
    }

    #[test]
    fn duplicate_names_rejected() {
        let err = build_exog(
            q1(),
            &[hour_period(), hour_period()],
            &BTreeSet::new(),
            &BTreeSet::new(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::DuplicateColumn(_)));
        let clash = Period::new("holidays_x", 1, CalendarField::Hour, (0, 23)).unwrap();
        assert!(build_exog(q1(), &[clash], &BTreeSet::new(), &BTreeSet::new()).is_ok());
    }

    #[test]
    fn block_order_follows_period_order() {
        let a = build_exog(
            q1(),
            &[hour_period(), dow_period()],
            &BTreeSet::new(),
            &BTreeSet::new(),
        )
        .unwrap();
        let b = build_exog(
            q1(),
            &[dow_period(), hour_period()],
            &BTreeSet::new(),
            &BTreeSet::new(),
        )
        .unwrap();
        let names_b = b.column_names();
        assert_eq!(&names_b[..4], &a.column_names()[6..10]);
        assert_eq!(b.column("hour_3"), a.column("hour_3"));
    }

    #[test]
    fn invalid_periods_rejected() {
        assert!(Period::new("h", 0, CalendarField::Hour, (0, 23)).is_err());
        assert!(Period::new("h", 3, CalendarField::Hour, (5, 5)).is_err());
    }
}
