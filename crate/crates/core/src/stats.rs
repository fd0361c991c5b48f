//! Small numeric helpers shared by several modules.

/// Linear-interpolation quantile of an ascending-sorted, non-empty slice.
///
/// Position `h = (n - 1) q`; the result interpolates between the order
/// statistics at `floor(h)` and `floor(h) + 1`.
pub fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    debug_assert!(!sorted.is_empty());
    debug_assert!((0.0..=1.0).contains(&q));
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let h = (n - 1) as f64 * q;
    let lo = h.floor() as usize;
    interpolate(sorted, lo, h - lo as f64)
}

/// [`quantile_sorted`] at the rational level `num / den`, with the position
/// `(n - 1) num / den` split into whole and fractional parts in integer
/// arithmetic. Integral positions land exactly on an order statistic.
pub fn quantile_sorted_ratio(sorted: &[f64], num: usize, den: usize) -> f64 {
    debug_assert!(!sorted.is_empty());
    debug_assert!(den > 0 && num <= den);
    let scaled = (sorted.len() - 1) * num;
    interpolate(sorted, scaled / den, (scaled % den) as f64 / den as f64)
}

fn interpolate(sorted: &[f64], lo: usize, frac: f64) -> f64 {
    let n = sorted.len();
    if lo + 1 >= n {
        return sorted[n - 1];
    }
    let (a, b) = (sorted[lo], sorted[lo + 1]);
    if frac == 0.0 || a == b {
        a
    } else {
        a + frac * (b - a)
    }
}

/// Sorts a copy of `values` ascending under IEEE total order.
pub fn sorted(values: &[f64]) -> Vec<f64> {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    v
}

/// Left-to-right sum; the reduction order is part of the determinism contract.
#[inline]
pub fn sum(values: &[f64]) -> f64 {
    values.iter().fold(0.0, |acc, v| acc + v)
}

#[inline]
pub fn mean(values: &[f64]) -> f64 {
    sum(values) / values.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn median_of_four_interpolates() {
        assert_eq!(quantile_sorted(&[1.0, 2.0, 3.0, 4.0], 0.5), 2.5);
    }

    #[test]
    fn extremes_are_min_and_max() {
        let v = [-3.0, 0.0, 7.5];
        assert_eq!(quantile_sorted(&v, 0.0), -3.0);
        assert_eq!(quantile_sorted(&v, 1.0), 7.5);
    }

    #[test]
    fn matches_numpy_linear_definition() {
        // numpy.quantile([1, 2, 4, 8, 16], [0.1, 0.35, 0.9]) == [1.4, 2.8, 12.8]
        let v = [1.0, 2.0, 4.0, 8.0, 16.0];
        assert!((quantile_sorted(&v, 0.1) - 1.4).abs() < 1e-12);
        assert!((quantile_sorted(&v, 0.35) - 2.8).abs() < 1e-12);
        assert!((quantile_sorted(&v, 0.9) - 12.8).abs() < 1e-12);
    }

    #[test]
    fn integral_ratio_rank_is_an_order_statistic() {
        // 209 * fl(3 / 11) rounds to just below 57
        let v: Vec<f64> = (0..210).map(f64::from).collect();
        assert!(quantile_sorted(&v, 3.0 / 11.0) < 57.0);
        assert_eq!(quantile_sorted_ratio(&v, 3, 11), 57.0);
        assert_eq!(quantile_sorted_ratio(&[1.0, 2.0, 3.0, 4.0], 1, 2), 2.5);
        assert_eq!(quantile_sorted_ratio(&[1.0, 2.0, 3.0, 4.0], 2, 2), 4.0);
    }
}
