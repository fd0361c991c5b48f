use serde::{Deserialize, Serialize};

use super::LOGGER;
use crate::error::{Error, Result};
use crate::series::{check_finite, TimeSeries};

/// What [`undifference`] needs to invert [`difference`]: the leading value
/// dropped by each differencing pass, in pass order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiffState {
    order: usize,
    initial_values: Vec<f64>,
}

impl DiffState {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn initial_values(&self) -> &[f64] {
        &self.initial_values
    }
}

/// Applies the first-difference operator `order` times. The result starts
/// `order` steps after `s`.
pub fn difference(s: &TimeSeries, order: usize) -> Result<(TimeSeries, DiffState)> {
    if s.len() <= order {
        return Err(Error::TooShort(format!(
            "differencing of order {order} needs more than {order} values, got {}",
            s.len()
        )));
    }
    check_finite(s.values(), LOGGER, "difference")?;
    let mut cur = s.values().to_vec();
    let mut initial_values = Vec::with_capacity(order);
    for _ in 0..order {
        initial_values.push(cur[0]);
        cur = cur.windows(2).map(|w| w[1] - w[0]).collect();
    }
    let out = TimeSeries::new(s.name(), s.timestamp(order), s.freq(), cur)?;
    Ok((
        out,
        DiffState {
            order,
            initial_values,
        },
    ))
}

/// Cumulative reconstruction, undoing the passes in reverse order.
pub fn undifference(diffed: &TimeSeries, state: &DiffState) -> Result<TimeSeries> {
    if state.initial_values.len() != state.order {
        return Err(Error::StateMismatch(format!(
            "order {} but {} initial values",
            state.order,
            state.initial_values.len()
        )));
    }
    check_finite(diffed.values(), LOGGER, "undifference")?;
    let mut cur = diffed.values().to_vec();
    for &x0 in state.initial_values.iter().rev() {
        let mut next = Vec::with_capacity(cur.len() + 1);
        let mut acc = x0;
        next.push(acc);
        for d in &cur {
            acc += d;
            next.push(acc);
        }
        cur = next;
    }
    let start = diffed
        .start()
        .add_steps(diffed.freq(), -(state.order as i64));
    TimeSeries::new(diffed.name(), start, diffed.freq(), cur)
}
