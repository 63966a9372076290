//! Least-squares slope used by every growth heuristic.

/// Slope of the least-squares line through `(xs[i], ys[i])`.
///
/// `None` with fewer than two points or when every `x` coincides.
pub fn least_squares_slope(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let n = xs.len().min(ys.len());
    if n < 2 {
        return None;
    }
    let mx = xs[..n].iter().sum::<f64>() / n as f64;
    let my = ys[..n].iter().sum::<f64>() / n as f64;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (x, y) in xs.iter().zip(ys).take(n) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    (sxx > 0.0).then(|| sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line() {
        let xs = [0.0, 1.0, 2.0, 3.0];
        let ys = [1.0, 3.0, 5.0, 7.0];
        assert!((least_squares_slope(&xs, &ys).unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn degenerate() {
        assert_eq!(least_squares_slope(&[1.0], &[2.0]), None);
        assert_eq!(least_squares_slope(&[1.0, 1.0], &[2.0, 3.0]), None);
    }
}
