//! Σ((a_i) : α), the sum of the ⌊α⌋ largest entries.

use std::cmp::Ordering;
use std::iter::Sum;

use crate::error::{Error, Result};

/// Sum of the `⌊alpha⌋` largest entries of `values`; the full sum once
/// `⌊alpha⌋ >= values.len()`.
///
/// ```
/// use omega_core::criteria::sum_largest;
/// assert_eq!(sum_largest(&[3, 1, 2], 2.0).unwrap(), 5);
/// assert_eq!(sum_largest(&[3, 1, 2], 0.9).unwrap(), 0);
/// assert_eq!(sum_largest(&[3, 1, 2], 7.0).unwrap(), 6);
/// ```
pub fn sum_largest<T>(values: &[T], alpha: f64) -> Result<T>
where
    T: Copy + PartialOrd + Sum<T>,
{
    if alpha.is_nan() || alpha < 0.0 {
        return Err(Error::domain(format!("alpha = {alpha} must be nonnegative")));
    }
    if values.iter().any(|v| v.partial_cmp(v).is_none()) {
        return Err(Error::domain("values must be comparable (no NaN)"));
    }
    let n = values.len();
    let m = if alpha >= n as f64 { n } else { alpha.floor() as usize };
    if m == n {
        return Ok(values.iter().copied().sum());
    }
    if m == 0 {
        return Ok(values[..0].iter().copied().sum());
    }
    let mut v = values.to_vec();
    v.select_nth_unstable_by(m - 1, |a, b| b.partial_cmp(a).unwrap_or(Ordering::Equal));
    Ok(v[..m].iter().copied().sum())
}
