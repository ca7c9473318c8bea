//! Small statistics helpers for report summaries.

use num_complex::Complex64;

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Unbiased sample variance (n - 1 denominator).
pub fn sample_variance(xs: &[f64]) -> f64 {
    let m = mean(xs);
    let ss: f64 = xs.iter().map(|x| (x - m) * (x - m)).sum();
    ss / (xs.len() as f64 - 1.0)
}

pub fn complex_mean(xs: &[Complex64]) -> Complex64 {
    xs.iter().sum::<Complex64>() / xs.len() as f64
}

/// Least-squares slope of y against x.
pub fn slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for &(x, y) in points {
        num += (x - mx) * (y - my);
        den += (x - mx) * (x - mx);
    }
    num / den
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_exact_line() {
        let pts: Vec<(f64, f64)> = (1..6).map(|i| (i as f64, 3.0 - 2.0 * i as f64)).collect();
        assert!((slope(&pts) + 2.0).abs() < 1e-14);
    }

    #[test]
    fn variance_of_constant_is_zero() {
        assert_eq!(sample_variance(&[4.0, 4.0, 4.0]), 0.0);
    }

    #[test]
    fn variance_matches_naive_two_pass() {
        let xs = [1.0, 2.0, 4.0, 8.0];
        let m = mean(&xs);
        let naive: f64 = xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / 3.0;
        assert!((sample_variance(&xs) - naive).abs() < 1e-15);
    }
}
