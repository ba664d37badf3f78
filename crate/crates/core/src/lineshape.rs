//! Grid helpers for locating and measuring transmission valleys.

use std::ops::Range;

/// `n` evenly spaced points from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let step = (hi - lo) / (n - 1) as f64;
            (0..n)
                .map(|i| if i + 1 == n { hi } else { lo + step * i as f64 })
                .collect()
        }
    }
}

/// Index of the smallest value within `range`.
pub fn argmin(values: &[f64], range: Range<usize>) -> Option<usize> {
    range.min_by(|&a, &b| values[a].total_cmp(&values[b]))
}

/// Index of the largest value within `range`.
pub fn argmax(values: &[f64], range: Range<usize>) -> Option<usize> {
    range.max_by(|&a, &b| values[a].total_cmp(&values[b]))
}

/// Full width of the valley at `index`, measured where the curve recovers to
/// `(min + 1) / 2`. Crossings are linearly interpolated; `None` if the curve
/// does not recover on both sides within the grid.
pub fn half_depth_width(xs: &[f64], ys: &[f64], index: usize) -> Option<f64> {
    let level = 0.5 * (ys[index] + 1.0);
    let crossing = |a: usize, b: usize| xs[a] + (level - ys[a]) * (xs[b] - xs[a]) / (ys[b] - ys[a]);

    let left = (0..index).rev().find(|&i| ys[i] >= level)?;
    let right = (index + 1..ys.len()).find(|&i| ys[i] >= level)?;
    Some(crossing(right - 1, right) - crossing(left, left + 1))
}
