//! Adaptive explicit Runge-Kutta stepping (Dormand-Prince 5(4)) for the
//! scalar comparison equations. Solutions are reported on caller-supplied
//! output grids; step size is controlled by the embedded error estimate.

use crate::error::{Error, Result};
use crate::num::Real;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// Difference between the 5th- and 4th-order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const MAX_STEPS: usize = 2_000_000;

/// Integrates y' = f(t, y) from `t0`, reporting y at each point of `t_out`.
/// `t_out` must be non-decreasing and start at or after `t0`.
pub fn solve_scalar<S: Real, F: Fn(S, S) -> S>(
    f: F,
    t0: S,
    y0: S,
    t_out: &[S],
    rel_tol: S,
    abs_tol: S,
) -> Result<Vec<S>> {
    let mut out = Vec::with_capacity(t_out.len());
    let Some(&t_end) = t_out.last() else {
        return Ok(out);
    };
    if t_end < t0 {
        return Err(Error::Domain("output grid precedes the initial time".into()));
    }

    let mut t = t0;
    let mut y = y0;
    let mut k1 = f(t, y);
    let mut h = ((t_end - t0) * S::of(1e-3)).max(S::of(1e-12));
    let mut next = 0usize;

    while next < t_out.len() && t_out[next] <= t {
        out.push(y);
        next += 1;
    }

    for _ in 0..MAX_STEPS {
        if next >= t_out.len() {
            return Ok(out);
        }
        let target = t_out[next];
        if h > target - t {
            h = target - t;
        }
        if h <= S::epsilon() * (S::one() + t.abs()) {
            // Step underflow against the grid point: accept the value here.
            out.push(y);
            next += 1;
            h = ((t_end - t) * S::of(1e-3)).max(S::of(1e-12));
            continue;
        }

        let k2 = f(t + S::of(A21) * h, y + h * S::of(A21) * k1);
        let k3 = f(t + S::of(0.3) * h, y + h * (S::of(A31) * k1 + S::of(A32) * k2));
        let k4 = f(
            t + S::of(0.8) * h,
            y + h * (S::of(A41) * k1 + S::of(A42) * k2 + S::of(A43) * k3),
        );
        let k5 = f(
            t + S::of(8.0 / 9.0) * h,
            y + h * (S::of(A51) * k1 + S::of(A52) * k2 + S::of(A53) * k3 + S::of(A54) * k4),
        );
        let k6 = f(
            t + h,
            y + h * (S::of(A61) * k1 + S::of(A62) * k2 + S::of(A63) * k3 + S::of(A64) * k4 + S::of(A65) * k5),
        );
        let y_new = y
            + h * (S::of(B1) * k1 + S::of(B3) * k3 + S::of(B4) * k4 + S::of(B5) * k5 + S::of(B6) * k6);
        let k7 = f(t + h, y_new);

        let err_raw = h
            * (S::of(E1) * k1 + S::of(E3) * k3 + S::of(E4) * k4 + S::of(E5) * k5 + S::of(E6) * k6
                + S::of(E7) * k7);
        let scale = abs_tol + rel_tol * y.abs().max(y_new.abs());
        let err = (err_raw / scale).abs();

        if err <= S::one() {
            t = t + h;
            y = y_new;
            k1 = k7;
            while next < t_out.len() && t_out[next] <= t + S::epsilon() * (S::one() + t.abs()) {
                out.push(y);
                next += 1;
            }
        }

        let factor = if err > S::zero() {
            (S::of(0.9) * err.powf(S::of(-0.2))).min(S::of(5.0)).max(S::of(0.2))
        } else {
            S::of(5.0)
        };
        h = h * factor;
    }
    Err(Error::Convergence(
        "step budget exhausted before reaching the end of the output grid".into(),
    ))
}
