//! Quasi-local energy and stability diagnostics for radial graphs over
//! static reference annuli.
//!
//! The reference spaces are the warped products
//!
//! ```text
//! b = V(r)^-2 dr^2 + r^2 h,      V(r) = sqrt(r^2 + eps),   eps in {1, 0, -1},
//! ```
//!
//! over a compact Einstein cross-section (h, fiber constant eps (n-2)).
//! They solve the static vacuum equations with negative cosmological
//! constant, and the Kottler-Schwarzschild family embeds into them as
//! radial graphs. The crate computes, for any radial graph with slope
//! profile s(r) = V |Df|:
//!
//! * a quasi-local mass along level sets together with its algebraic lower
//!   bound and the horizon-area (Penrose) comparison,
//! * a weighted Minkowski-type boundary functional and the divergence
//!   identity it derives from,
//! * height and volume stability estimates that quantify how close a graph
//!   of small mass is to a reference slice.
//!
//! Everything is generic over the floating-point scalar via [`Real`];
//! `Reference64` and `Graph64` fix f64 for the common case.

pub mod energy;
pub mod error;
pub mod fit;
pub mod graph;
pub mod num;
pub mod ode;
pub mod quad;
pub mod reference;
pub mod roots;
pub mod stability;
pub mod verify;

pub use energy::{
    brown_york_energy, divergence_identity_residual, energy_lower_bound, energy_report,
    minkowski_check, penrose_gap, DivergenceIdentity, EnergyReport, MinkowskiCheck, PenroseGap,
};
pub use error::{Error, Result};
pub use graph::{horizon_radius, GraphManifold, LevelSetData, SlopeProfile, SlopeTable};
pub use num::Real;
pub use quad::Tolerance;
pub use reference::{CurvatureSample, ReferenceSpace, StaticResidual};
pub use stability::{
    comparison_profile, convergence_experiment, critical_height, flat_distance_decomposition,
    height_bound_check, stability_constants, stability_report, volume_estimate_check,
    volume_growth_residual, ComparisonProfile, FlatDecomposition, HeightBound, Measure,
    StabilityConstants, StabilityReport, SweepResult, SweepRow, VolumeEstimate,
};

/// f64 reference space.
pub type Reference64 = ReferenceSpace<f64>;
/// f64 radial graph.
pub type Graph64 = GraphManifold<f64>;
/// f32 reference space.
pub type Reference32 = ReferenceSpace<f32>;
/// f32 radial graph.
pub type Graph32 = GraphManifold<f32>;
