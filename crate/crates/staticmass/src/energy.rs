//! Quasi-local energy of radial graphs: the static Brown-York mass of a
//! level set, its slope lower bound, the flux identity certifying both, and
//! the horizon-area inequality.
//!
//! The mass is normalised by the cross-section volume, so for the
//! Kottler-Schwarzschild family it converges to the family parameter as the
//! evaluation radius grows.

use crate::error::{Error, Result};
use crate::graph::GraphManifold;
use crate::num::{of_usize, Real};
use crate::quad::{integrate, Tolerance};
use crate::reference::ReferenceSpace;

/// 1 - 1/sqrt(1+x) evaluated without cancellation for small x >= 0.
fn one_minus_q<S: Real>(x: S) -> S {
    let root = (S::one() + x).sqrt();
    x / (root * (S::one() + root))
}

/// Static Brown-York mass of the level set over radius `r`: the integral of
/// V (H_ref - H) over the slice, divided by (n-1) times the cross-section
/// volume. For a radial graph this reduces to
///
///   r^(n-2) V^2 (1 - 1/sqrt(1 + s^2)).
pub fn brown_york_energy<S: Real>(graph: &GraphManifold<S>, r: S) -> Result<S> {
    let x = graph.slope_sq(r)?;
    let v = graph.space().static_potential(r)?;
    let n2 = graph.space().dim() as i32 - 2;
    Ok(r.powi(n2) * v * v * one_minus_q(x))
}

/// Slope lower bound for the mass at radius `r`:
///
///   r^(n-2) V^2 s^2 / (2 (1 + s^2)),
///
/// the weighted integral of H_ref s^2 / (1 + s^2) over the slice with the
/// same normalisation as [`brown_york_energy`]. The mass exceeds this bound
/// by exactly r^(n-2) V^2 (1 - 1/sqrt(1+s^2))^2 / 2, so it is never larger
/// than the mass and vanishes only where the graph is flat.
pub fn energy_lower_bound<S: Real>(graph: &GraphManifold<S>, r: S) -> Result<S> {
    let x = graph.slope_sq(r)?;
    let v = graph.space().static_potential(r)?;
    let n2 = graph.space().dim() as i32 - 2;
    Ok(r.powi(n2) * v * v * x / (S::of(2.0) * (S::one() + x)))
}

/// Both sides of the flux identity between two level sets, together with
/// their absolute difference.
#[derive(Debug, Clone, Copy)]
pub struct DivergenceIdentity<S> {
    /// Bulk side: the weighted scalar-curvature excess integrated over the
    /// region between the two level sets.
    pub bulk: S,
    /// Boundary side: the difference of the flux F(r) = (n-1) A r^(n-2) V^2
    /// s^2 / (1+s^2) across the two level sets.
    pub flux: S,
    pub residual: S,
}

/// Evaluates the identity
///
///   integral of V (R_g + n(n-1)) / sqrt(1+s^2) over the graph between the
///   level sets at h1 < h2  =  F(h2) - F(h1),
///
/// with both sides computed independently: the left by adaptive quadrature
/// of the induced scalar curvature, the right from the slopes at the two
/// boundary radii alone.
pub fn divergence_identity_residual<S: Real>(
    graph: &GraphManifold<S>,
    h1: S,
    h2: S,
) -> Result<DivergenceIdentity<S>> {
    if !(h1 < h2) {
        return Err(Error::Domain(format!(
            "level heights out of order: {h1} is not below {h2}"
        )));
    }
    let r1 = graph.radius_at_height(h1)?;
    let r2 = graph.radius_at_height(h2)?;
    let space = graph.space();
    let amp = space.cross_section_volume();
    let n = space.dim();
    let n1 = n as i32 - 1;
    let nn1 = of_usize::<S>(n as usize) * of_usize::<S>(n as usize - 1);

    let excess = |r: S| -> Result<S> { Ok(graph.scalar_curvature(r)? + nn1) };
    // Quadrature nodes are interior, so the closure can unwrap safely after
    // one probe evaluation at each end of the window.
    excess(r1 * S::of(0.999) + r2 * S::of(0.001))?;
    excess(r1 * S::of(0.001) + r2 * S::of(0.999))?;
    let bulk = amp
        * integrate(
            |r| excess(r).unwrap_or(S::nan()) * r.powi(n1),
            r1,
            r2,
            Tolerance::default(),
        )?;

    let flux_at = |r: S| -> Result<S> {
        let x = graph.slope_sq(r)?;
        let v = space.static_potential(r)?;
        Ok(of_usize::<S>(n as usize - 1) * amp * r.powi(n as i32 - 2) * v * v * x / (S::one() + x))
    };
    let flux = flux_at(r2)? - flux_at(r1)?;
    Ok(DivergenceIdentity {
        bulk,
        flux,
        residual: (bulk - flux).abs(),
    })
}

/// The weighted Minkowski functional of a radius-r slice of the reference
/// space and the area bound it saturates.
#[derive(Debug, Clone, Copy)]
pub struct MinkowskiCheck<S> {
    /// Integral of V H_ref over the slice.
    pub functional: S,
    /// (n-1) A (sigma^(n/(n-1)) + eps sigma^((n-2)/(n-1))) with
    /// sigma = |slice| / A; slices attain this with equality.
    pub weighted_bound: S,
    /// Integral of H_ref alone over the slice.
    pub unweighted_lhs: S,
    /// (n-1) |slice|, the comparison value for the unweighted integral.
    pub unweighted_rhs: S,
    /// Whether the unweighted integral strictly exceeds (n-1) |slice|; this
    /// holds for every slice of the spherical reference, where the margin is
    /// V/r - 1 > 0, and fails for the flat and hyperbolic ones.
    pub unweighted_strict: bool,
}

/// Evaluates the weighted Minkowski identity and the unweighted comparison
/// on the radius-r slice of the reference space.
pub fn minkowski_check<S: Real>(space: &ReferenceSpace<S>, r: S) -> Result<MinkowskiCheck<S>> {
    let v = space.static_potential(r)?;
    let amp = space.cross_section_volume();
    let n = space.dim() as usize;
    let n1 = of_usize::<S>(n - 1);
    let eps = S::of(space.epsilon() as f64);

    let functional = n1 * amp * r.powi(n as i32 - 2) * v * v;
    let sigma = r.powi(n as i32 - 1);
    let expo_hi = S::of(n as f64) / of_usize::<S>(n - 1);
    let expo_lo = S::of(n as f64 - 2.0) / of_usize::<S>(n - 1);
    let weighted_bound = n1 * amp * (sigma.powf(expo_hi) + eps * sigma.powf(expo_lo));

    let unweighted_lhs = n1 * amp * r.powi(n as i32 - 2) * v;
    let unweighted_rhs = n1 * amp * sigma;
    Ok(MinkowskiCheck {
        functional,
        weighted_bound,
        unweighted_lhs,
        unweighted_rhs,
        unweighted_strict: unweighted_lhs > unweighted_rhs,
    })
}

/// Exponent and constant of the horizon-area inequality
/// m >= (c/2) (|inner slice| / A)^q, as functions of the curvature sign and
/// the horizon radius. Returns (c, q).
pub fn penrose_constants<S: Real>(space: &ReferenceSpace<S>, horizon: S) -> Result<(S, S)> {
    let n = space.dim() as usize;
    let half = S::of(0.5);
    match space.epsilon() {
        1 => Ok((
            S::one(),
            of_usize::<S>(n - 2) / of_usize::<S>(n - 1),
        )),
        0 => Ok((horizon.powf(S::of((n as f64 + 1.0) / 2.0)), half)),
        -1 => {
            if !(horizon > S::one()) {
                return Err(Error::Domain(format!(
                    "hyperbolic horizon radius must exceed 1, got {horizon}"
                )));
            }
            let c = (horizon * horizon - S::one()).sqrt()
                * horizon.powf(S::of((n as f64 - 3.0) / 2.0));
            Ok((c, half))
        }
        other => Err(Error::Domain(format!("invalid curvature sign {other}"))),
    }
}

/// Outcome of the horizon-area inequality on a graph with minimal inner
/// boundary.
#[derive(Debug, Clone, Copy)]
pub struct PenroseGap<S> {
    /// Mass of the outer boundary slice.
    pub mass: S,
    /// (c/2) (|inner slice| / A)^q.
    pub rhs: S,
    /// mass - rhs; non-negative when the inequality holds.
    pub gap: S,
    pub c_eps: S,
    pub n_eps: S,
}

/// Evaluates the horizon-area inequality for the graph: outer-boundary mass
/// against the power of the inner (horizon) area.
pub fn penrose_gap<S: Real>(graph: &GraphManifold<S>) -> Result<PenroseGap<S>> {
    if !graph.satisfies_definition() {
        return Err(Error::Precondition(
            "horizon-area inequality needs a minimal inner boundary and mean-convex, \
             area-monotone level sets"
                .into(),
        ));
    }
    let space = graph.space();
    let r0 = graph.r_inner();
    let (c_eps, n_eps) = penrose_constants(space, r0)?;
    let mass = brown_york_energy(graph, graph.r_outer())?;
    let n1 = space.dim() as usize - 1;
    let rhs = S::of(0.5) * c_eps * r0.powf(of_usize::<S>(n1) * n_eps);
    Ok(PenroseGap {
        mass,
        rhs,
        gap: mass - rhs,
        c_eps,
        n_eps,
    })
}

/// Energy summary of a graph: outer-boundary mass and lower bound, the
/// Minkowski functional there, the horizon-area comparison, and the flux
/// identity residual between the quartile level sets.
#[derive(Debug, Clone, Copy)]
pub struct EnergyReport<S> {
    pub mass: S,
    pub lower_bound: S,
    pub minkowski_functional: S,
    pub penrose_rhs: S,
    pub divergence_residual: S,
    pub c_eps: S,
    pub n_eps: S,
}

/// Assembles the energy report of a graph with minimal inner boundary.
pub fn energy_report<S: Real>(graph: &GraphManifold<S>) -> Result<EnergyReport<S>> {
    let penrose = penrose_gap(graph)?;
    let r_out = graph.r_outer();
    let lower_bound = energy_lower_bound(graph, r_out)?;
    let minkowski = minkowski_check(graph.space(), r_out)?;
    let lo = graph.min_height();
    let span = graph.max_height() - lo;
    let divergence = divergence_identity_residual(
        graph,
        lo + S::of(0.25) * span,
        lo + S::of(0.75) * span,
    )?;
    Ok(EnergyReport {
        mass: penrose.mass,
        lower_bound,
        minkowski_functional: minkowski.functional,
        penrose_rhs: penrose.rhs,
        divergence_residual: divergence.residual,
        c_eps: penrose.c_eps,
        n_eps: penrose.n_eps,
    })
}
