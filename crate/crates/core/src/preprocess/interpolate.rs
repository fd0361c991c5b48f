use serde::{Deserialize, Serialize};

use super::LOGGER;
use crate::audit;
use crate::error::{Error, Result};
use crate::series::TimeSeries;

/// What to do with NaNs that interpolation cannot reach (leading and
/// trailing runs). There is deliberately no implicit choice: `Raise` is the
/// default.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MissingMode {
    #[default]
    Raise,
    FfillBfill,
    Passthrough,
}

/// Fills interior NaN runs by linear interpolation between the nearest finite
/// neighbours, then applies `mode` to whatever remains at the edges.
///
/// ±Inf is never treated as a fillable gap and always fails.
pub fn interpolate_linear(s: &TimeSeries, mode: MissingMode) -> Result<TimeSeries> {
    let values = s.values();
    if let Some(pos) = values.iter().position(|v| v.is_infinite()) {
        return Err(audit::risk(
            LOGGER,
            "interpolate",
            Error::NonFiniteValue {
                position: pos,
                value: values[pos],
            },
        ));
    }
    let finite: Vec<usize> = (0..values.len()).filter(|&i| !values[i].is_nan()).collect();
    let (Some(&first), Some(&last)) = (finite.first(), finite.last()) else {
        return Err(audit::risk(LOGGER, "interpolate", Error::AllMissing));
    };

    let mut out = values.to_vec();
    for pair in finite.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        if b - a < 2 {
            continue;
        }
        let (ya, yb) = (values[a], values[b]);
        let span = (b - a) as f64;
        for (i, slot) in out.iter_mut().enumerate().take(b).skip(a + 1) {
            let w = (i - a) as f64 / span;
            *slot = ya + w * (yb - ya);
        }
    }

    let residual: Vec<usize> = (0..first).chain(last + 1..out.len()).collect();
    if !residual.is_empty() {
        match mode {
            MissingMode::Raise => {
                return Err(audit::risk(
                    LOGGER,
                    "interpolate",
                    Error::ResidualMissing {
                        positions: residual,
                    },
                ));
            }
            MissingMode::FfillBfill => {
                let (head, tail) = (values[first], values[last]);
                out[..first].fill(head);
                out[last + 1..].fill(tail);
            }
            MissingMode::Passthrough => {}
        }
    }
    s.with_values(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{Frequency, Timestamp};

    fn ts(v: Vec<f64>) -> TimeSeries {
        TimeSeries::new(
            "y",
            Timestamp::ymd_hms(2025, 1, 1, 0, 0, 0),
            Frequency::hours(1),
            v,
        )
        .unwrap()
    }

    const NAN: f64 = f64::NAN;

    #[test]
    fn midpoint_fill() {
        let out = interpolate_linear(&ts(vec![1.0, NAN, 3.0]), MissingMode::Raise).unwrap();
        assert_eq!(out.values(), &[1.0, 2.0, 3.0]);
    }

    #[test]
    fn edge_nans_raise() {
        let err = interpolate_linear(&ts(vec![NAN, 2.0, NAN]), MissingMode::Raise).unwrap_err();
        match err {
            Error::ResidualMissing { positions } => assert_eq!(positions, vec![0, 2]),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn edge_nans_filled_on_request() {
        let out = interpolate_linear(&ts(vec![NAN, 2.0, NAN]), MissingMode::FfillBfill).unwrap();
        assert_eq!(out.values(), &[2.0, 2.0, 2.0]);
    }

    #[test]
    fn passthrough_keeps_edges() {
        let out = interpolate_linear(&ts(vec![NAN, 1.0, NAN, 3.0, NAN]), MissingMode::Passthrough)
            .unwrap();
        let v = out.values();
        assert!(v[0].is_nan() && v[4].is_nan());
        assert_eq!(&v[1..4], &[1.0, 2.0, 3.0]);
    }

    #[test]
    fn all_missing_fails_under_every_mode() {
        for mode in [
            MissingMode::Raise,
            MissingMode::FfillBfill,
            MissingMode::Passthrough,
        ] {
            assert!(matches!(
                interpolate_linear(&ts(vec![NAN, NAN]), mode),
                Err(Error::AllMissing)
            ));
        }
    }

    #[test]
    fn long_gap_is_a_straight_line() {
        let out =
            interpolate_linear(&ts(vec![0.0, NAN, NAN, NAN, 8.0]), MissingMode::Raise).unwrap();
        assert_eq!(out.values(), &[0.0, 2.0, 4.0, 6.0, 8.0]);
    }

    #[test]
    fn infinity_is_not_a_gap() {
        assert!(matches!(
            interpolate_linear(&ts(vec![1.0, f64::INFINITY, 3.0]), MissingMode::FfillBfill),
            Err(Error::NonFiniteValue { position: 1, .. })
        ));
    }
}
