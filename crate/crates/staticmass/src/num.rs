//! Scalar abstraction shared by every numerical routine in the crate.
//!
//! All geometry code is written against [`Real`] so the same formulas run in
//! `f32` or `f64`. The concrete aliases exported from the crate root pin the
//! double-precision instantiation that the command-line tool and the
//! published tolerances assume.

use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating-point scalar with the conversions the solvers need.
pub trait Real: Float + FloatConst + FromPrimitive + std::fmt::Debug + std::fmt::Display + 'static {
    /// Shorthand for lossy conversion from an `f64` literal.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    /// Conversion to `f64` for reporting and formatting.
    fn to_f64(self) -> f64;
}

impl Real for f32 {
    fn to_f64(self) -> f64 {
        self as f64
    }
}

impl Real for f64 {
    fn to_f64(self) -> f64 {
        self
    }
}

/// Integer-to-scalar helper; `n` values in the formulas are small.
pub fn of_usize<S: Real>(n: usize) -> S {
    S::from_usize(n).expect("small integer representable in scalar type")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn literal_roundtrip() {
        let x: f64 = Real::of(0.5);
        assert_eq!(x, 0.5);
        let y: f32 = Real::of(0.25);
        assert_eq!(y, 0.25f32);
    }

    #[test]
    fn usize_conversion() {
        let three: f64 = of_usize(3);
        assert_eq!(three, 3.0);
    }
}
