//! Least-squares slope fitting for convergence-rate estimates.

use crate::error::{Error, Result};
use crate::num::Real;
use crate::num::of_usize;

/// Ordinary least-squares line through `points`; returns (slope, intercept).
pub fn linear_fit<S: Real>(points: &[(S, S)]) -> Result<(S, S)> {
    if points.len() < 2 {
        return Err(Error::Precondition(format!(
            "need at least two points for a line fit, got {}",
            points.len()
        )));
    }
    let n: S = of_usize(points.len());
    let mut mean_x = S::zero();
    let mut mean_y = S::zero();
    for &(x, y) in points {
        mean_x = mean_x + x;
        mean_y = mean_y + y;
    }
    mean_x = mean_x / n;
    mean_y = mean_y / n;

    let mut sxx = S::zero();
    let mut sxy = S::zero();
    for &(x, y) in points {
        let dx = x - mean_x;
        sxx = sxx + dx * dx;
        sxy = sxy + dx * (y - mean_y);
    }
    if sxx == S::zero() {
        return Err(Error::Domain("degenerate fit: all abscissae coincide".into()));
    }
    let slope = sxy / sxx;
    Ok((slope, mean_y - slope * mean_x))
}

/// Slope of log(y) against log(x); the power-law exponent of y ~ C x^gamma.
pub fn log_log_slope<S: Real>(points: &[(S, S)]) -> Result<S> {
    let mut logged = Vec::with_capacity(points.len());
    for &(x, y) in points {
        if x <= S::zero() || y <= S::zero() {
            return Err(Error::Domain(format!(
                "log-log fit needs positive data, got ({x}, {y})"
            )));
        }
        logged.push((x.ln(), y.ln()));
    }
    linear_fit(&logged).map(|(slope, _)| slope)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_power_law() {
        let pts: Vec<(f64, f64)> = (1..=6)
            .map(|i| {
                let x = 2f64.powi(-i);
                (x, 3.0 * x.sqrt())
            })
            .collect();
        let gamma = log_log_slope(&pts).unwrap();
        assert!((gamma - 0.5).abs() < 1e-12);
    }

    #[test]
    fn exact_line() {
        let pts = [(0.0f64, 1.0), (1.0, 3.0), (2.0, 5.0)];
        let (slope, intercept) = linear_fit(&pts).unwrap();
        assert!((slope - 2.0).abs() < 1e-14);
        assert!((intercept - 1.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_nonpositive_data() {
        assert!(matches!(
            log_log_slope(&[(1.0f64, -1.0), (2.0, 1.0)]),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn rejects_single_point() {
        assert!(matches!(
            linear_fit(&[(1.0f64, 1.0)]),
            Err(Error::Precondition(_))
        ));
    }
}
