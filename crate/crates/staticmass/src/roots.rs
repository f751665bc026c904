//! Bracketed root finding by bisection.

use crate::error::{Error, Result};
use crate::num::Real;

const MAX_ITER: usize = 200;

/// Root of `f` in [lo, hi], assuming a sign change across the bracket.
/// Iterates until the bracket width falls below `x_tol`.
pub fn bisect<S: Real, F: Fn(S) -> S>(f: F, lo: S, hi: S, x_tol: S) -> Result<S> {
    if !(lo < hi) {
        return Err(Error::Domain(format!("invalid bracket [{lo}, {hi}]")));
    }
    let mut a = lo;
    let mut b = hi;
    let mut fa = f(a);
    let fb = f(b);
    if fa == S::zero() {
        return Ok(a);
    }
    if fb == S::zero() {
        return Ok(b);
    }
    if (fa > S::zero()) == (fb > S::zero()) {
        return Err(Error::Domain(format!(
            "no sign change on [{lo}, {hi}]: f runs {fa} to {fb}"
        )));
    }
    let half = S::of(0.5);
    for _ in 0..MAX_ITER {
        let mid = half * (a + b);
        if b - a <= x_tol || mid <= a || mid >= b {
            return Ok(mid);
        }
        let fm = f(mid);
        if fm == S::zero() {
            return Ok(mid);
        }
        if (fm > S::zero()) == (fa > S::zero()) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    Err(Error::Convergence(format!(
        "bisection on [{lo}, {hi}] did not reach width {x_tol}"
    )))
}

/// Expands `hi` geometrically until `f` changes sign relative to `f(lo)`,
/// then bisects. Used when only a lower bound for the root is known.
pub fn bisect_expanding<S: Real, F: Fn(S) -> S>(f: F, lo: S, hi0: S, x_tol: S) -> Result<S> {
    let f_lo = f(lo);
    if f_lo == S::zero() {
        return Ok(lo);
    }
    let mut hi = hi0;
    let two = S::of(2.0);
    for _ in 0..120 {
        let f_hi = f(hi);
        if (f_hi > S::zero()) != (f_lo > S::zero()) || f_hi == S::zero() {
            return bisect(f, lo, hi, x_tol);
        }
        hi = hi * two;
    }
    Err(Error::Convergence(format!(
        "no sign change found expanding from [{lo}, {hi0}]"
    )))
}
