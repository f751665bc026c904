//! Stability estimates for small-mass graphs: the critical height at which
//! level-set areas cross a mass-controlled threshold, the growth bound those
//! areas obey above it, the height and volume estimates that follow, and the
//! flat-distance decomposition quantifying how close the graph is to a
//! static slice of the reference space.
//!
//! Throughout, `c` and `q` are the constant and exponent of the horizon-area
//! inequality (see [`crate::energy::penrose_constants`]); the threshold area
//! is T = 2 (1+xi)^(1/q) A (2m/c)^(1/q) with A the cross-section volume.

use crate::energy::{brown_york_energy, penrose_constants};
use crate::error::{Error, Result};
use crate::fit::log_log_slope;
use crate::graph::GraphManifold;
use crate::num::{of_usize, Real};
use crate::ode::solve_scalar;
use crate::quad::{integrate, Tolerance};
use crate::reference::ReferenceSpace;

/// Relative tolerance of the comparison-envelope integration.
const ENVELOPE_REL_TOL: f64 = 1e-8;

/// Time measure for the flat-distance decomposition: the product measure dt
/// on the cylinder, or the static measure V dt.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Measure {
    Product,
    Static,
}

/// Constants entering the stability bounds, assembled once per graph.
#[derive(Debug, Clone, Copy)]
pub struct StabilityConstants<S> {
    /// Threshold slack parameter (> 0).
    pub xi: S,
    /// Horizon-area constant c.
    pub c_eps: S,
    /// Horizon-area exponent q.
    pub n_eps: S,
    /// Height comparison coefficient 3 sqrt3 2^((1-q)/q) / (2 (n-1) q c^(1/q)).
    pub d_ne: S,
    /// Height bound coefficient 4 c d_ne / (4 A)^(1/4) for the q = 1/2 branch.
    pub c_ne: S,
    /// Symmetric isoperimetric ratio sup_r vol([r0, r]) / (|inner| + area(r))^(n/(n-1)).
    pub c_iso: S,
    /// Largest potential value below the critical height, V at its radius.
    pub v_max: S,
}

fn admissible<S: Real>(graph: &GraphManifold<S>) -> Result<()> {
    if !graph.satisfies_definition() {
        return Err(Error::Precondition(
            "stability estimates need a minimal inner boundary and mean-convex, \
             area-monotone level sets"
                .into(),
        ));
    }
    Ok(())
}

fn positive_mass<S: Real>(mass: S) -> Result<()> {
    if !(mass > S::zero() && mass.is_finite()) {
        return Err(Error::Precondition(format!(
            "stability estimates need positive mass, got {mass}"
        )));
    }
    Ok(())
}

fn positive_slack<S: Real>(xi: S) -> Result<()> {
    if !(xi > S::zero() && xi.is_finite()) {
        return Err(Error::Domain(format!(
            "threshold slack must be positive, got {xi}"
        )));
    }
    Ok(())
}

/// Threshold area T = 2 (1+xi)^(1/q) A (2m/c)^(1/q).
fn threshold_area<S: Real>(space: &ReferenceSpace<S>, c: S, q: S, mass: S, xi: S) -> S {
    let amp = space.cross_section_volume();
    S::of(2.0)
        * (S::one() + xi).powf(S::one() / q)
        * amp
        * (S::of(2.0) * mass / c).powf(S::one() / q)
}

/// Largest height whose level set stays at or below the threshold area
/// T = 2 (1+xi)^(1/q) A (2m/c)^(1/q).
///
/// Level-set areas grow monotonically with height, so the threshold is
/// inverted through the radius: the cut radius is (T/A)^(1/(n-1)). When even
/// the inner boundary exceeds the threshold the critical height is the
/// minimum height; when no level set reaches it, the maximum.
pub fn critical_height<S: Real>(graph: &GraphManifold<S>, mass: S, xi: S) -> Result<S> {
    admissible(graph)?;
    positive_mass(mass)?;
    positive_slack(xi)?;
    let space = graph.space();
    let (c, q) = penrose_constants(space, graph.r_inner())?;
    let t = threshold_area(space, c, q, mass, xi);
    let n1 = of_usize::<S>(space.dim() as usize - 1);
    let r_cut = (t / space.cross_section_volume()).powf(S::one() / n1);
    if r_cut < graph.r_inner() {
        return Ok(graph.min_height());
    }
    if r_cut >= graph.r_outer() {
        return Ok(graph.max_height());
    }
    graph.height(r_cut)
}

/// Derivative of the level-set area in height minus its guaranteed lower
/// bound
///
///   (4 (n-1) A m / (3 sqrt3)) ((c/2m) (area/A)^q - 1)^(3/2),
///
/// at the regular height `h`. Positive when the growth bound holds there.
/// The height must lie above the threshold where the bracket is positive.
pub fn volume_growth_residual<S: Real>(graph: &GraphManifold<S>, mass: S, h: S) -> Result<S> {
    admissible(graph)?;
    positive_mass(mass)?;
    let space = graph.space();
    let (c, q) = penrose_constants(space, graph.r_inner())?;
    let r = graph.radius_at_height(h)?;
    let amp = space.cross_section_volume();
    let n = space.dim() as usize;
    let n1 = of_usize::<S>(n - 1);

    let bracket = c / (S::of(2.0) * mass) * r.powf(n1 * q) - S::one();
    if !(bracket > S::zero()) {
        return Err(Error::Precondition(format!(
            "level set at h = {h} sits below the growth threshold"
        )));
    }
    let s = graph.slope(r)?;
    if !(s > S::zero()) {
        return Err(Error::Singular(format!(
            "height {h} is not a regular value: the slope vanishes there"
        )));
    }
    let v_sq = r * r + S::of(space.epsilon() as f64);
    let area_deriv = n1 * amp * r.powi(n as i32 - 2) * v_sq / s;
    let coeff = S::of(4.0) * n1 * amp * mass / (S::of(3.0) * S::of(3.0).sqrt());
    Ok(area_deriv - coeff * bracket.powf(S::of(1.5)))
}

/// The comparison envelope: the solution of
///
///   Y' = (4 (n-1) A m / (3 sqrt3)) ((c/2m) (Y/A)^q - 1)^(3/2),  Y(h_o) = T,
///
/// which the level-set areas dominate pointwise above the critical height.
#[derive(Debug, Clone)]
pub struct ComparisonProfile<S> {
    pub h_o: S,
    /// Sample heights from the critical height to the top of the graph.
    pub heights: Vec<S>,
    /// Envelope values Y at the sample heights.
    pub envelope: Vec<S>,
    /// Actual level-set areas at the sample heights.
    pub areas: Vec<S>,
    /// Normalised excess p = (c/2m) (Y/A)^q - 1.
    pub excess: Vec<S>,
    /// Whether every sampled area dominates the envelope (relative slack 1e-8).
    pub dominated: bool,
}

/// Integrates the comparison envelope on `samples` uniformly spaced heights
/// between the critical height and the top of the graph. A graph whose
/// critical height already sits at the top yields the single-sample trivial
/// profile.
pub fn comparison_profile<S: Real>(
    graph: &GraphManifold<S>,
    mass: S,
    xi: S,
    samples: usize,
) -> Result<ComparisonProfile<S>> {
    if samples < 1 {
        return Err(Error::Domain("need at least one envelope sample".into()));
    }
    let h_o = critical_height(graph, mass, xi)?;
    let space = graph.space();
    let (c, q) = penrose_constants(space, graph.r_inner())?;
    let t = threshold_area(space, c, q, mass, xi);
    let amp = space.cross_section_volume();
    let top = graph.max_height();

    let excess_of = |y: S| c / (S::of(2.0) * mass) * (y / amp).powf(q) - S::one();

    let span = top - h_o;
    let tiny = S::of(1e-12) * (S::one() + top.abs());
    if span <= tiny || samples == 1 {
        let area = graph.area_at_height(h_o.min(top))?;
        // No level set lies strictly above the critical height, so the
        // domination claim is vacuous; a lone interior sample still has to
        // meet the threshold it starts from.
        let dominated = span <= tiny || area >= t - S::of(1e-8) * t.abs().max(S::one());
        return Ok(ComparisonProfile {
            h_o,
            heights: vec![h_o],
            envelope: vec![t],
            areas: vec![area],
            excess: vec![excess_of(t)],
            dominated,
        });
    }

    let den = of_usize::<S>(samples - 1);
    let heights: Vec<S> = (0..samples)
        .map(|k| {
            if k + 1 == samples {
                top
            } else {
                h_o + span * of_usize::<S>(k) / den
            }
        })
        .collect();
    let n1 = of_usize::<S>(space.dim() as usize - 1);
    let coeff = S::of(4.0) * n1 * amp * mass / (S::of(3.0) * S::of(3.0).sqrt());
    let rhs = |_h: S, y: S| coeff * excess_of(y).max(S::zero()).powf(S::of(1.5));
    let envelope = solve_scalar(
        rhs,
        h_o,
        t,
        &heights,
        S::of(ENVELOPE_REL_TOL),
        S::of(1e-14) * t,
    )?;

    let mut areas = Vec::with_capacity(samples);
    for &h in &heights {
        areas.push(graph.area_at_height(h)?);
    }
    let excess: Vec<S> = envelope.iter().map(|&y| excess_of(y)).collect();
    let dominated = areas
        .iter()
        .zip(&envelope)
        .all(|(&a, &y)| a >= y - S::of(1e-8) * y.abs().max(S::one()));
    Ok(ComparisonProfile {
        h_o,
        heights,
        envelope,
        areas,
        excess,
        dominated,
    })
}

/// Assembles the constants of the stability bounds for one graph.
pub fn stability_constants<S: Real>(graph: &GraphManifold<S>, xi: S) -> Result<StabilityConstants<S>> {
    admissible(graph)?;
    positive_slack(xi)?;
    let space = graph.space();
    let (c, q) = penrose_constants(space, graph.r_inner())?;
    let n1 = of_usize::<S>(space.dim() as usize - 1);
    let amp = space.cross_section_volume();

    let d_ne = S::of(3.0) * S::of(3.0).sqrt() * S::of(2.0).powf((S::one() - q) / q)
        / (S::of(2.0) * n1 * q * c.powf(S::one() / q));
    let c_ne = S::of(4.0) * c * d_ne / (S::of(4.0) * amp).powf(S::of(0.25));
    let c_iso = isoperimetric_ratio(graph)?;

    let mass = brown_york_energy(graph, graph.r_outer())?;
    let h_o = critical_height(graph, mass, xi)?;
    let r_at_h_o = if h_o >= graph.max_height() {
        graph.r_outer()
    } else if h_o <= graph.min_height() {
        graph.r_inner()
    } else {
        graph.radius_at_height(h_o)?
    };
    let v_max = space.static_potential(r_at_h_o)?;

    Ok(StabilityConstants {
        xi,
        c_eps: c,
        n_eps: q,
        d_ne,
        c_ne,
        c_iso,
        v_max,
    })
}

/// sup over r of vol([r_inner, r]) / (|inner slice| + area(r))^(n/(n-1)),
/// the isoperimetric ratio of the sublevel regions in the reference metric.
fn isoperimetric_ratio<S: Real>(graph: &GraphManifold<S>) -> Result<S> {
    let space = graph.space();
    let n = space.dim() as usize;
    let expo = S::of(n as f64) / of_usize::<S>(n - 1);
    let inner_area = space.slice_area(graph.r_inner())?;

    let ratio_of = |vol: S, r: S| -> Result<S> {
        let den = (inner_area + space.slice_area(r)?).powf(expo);
        Ok(vol / den)
    };

    // Coarse cumulative sweep, then a ternary refinement around the best
    // sample (the ratio is smooth in r and the bracket isolates one peak).
    let segments = 256usize;
    let r_lo = graph.r_inner();
    let step = (graph.r_outer() - r_lo) / of_usize::<S>(segments);
    let mut cum = S::zero();
    let mut cums = Vec::with_capacity(segments + 1);
    cums.push(S::zero());
    for k in 1..=segments {
        let a = r_lo + step * of_usize::<S>(k - 1);
        let b = r_lo + step * of_usize::<S>(k);
        cum = cum + space.annulus_volume(a, b)?;
        cums.push(cum);
    }
    let mut best_k = 0usize;
    let mut best = S::zero();
    for k in 0..=segments {
        let r = r_lo + step * of_usize::<S>(k);
        let ratio = ratio_of(cums[k], r)?;
        if ratio > best {
            best = ratio;
            best_k = k;
        }
    }

    let lo_k = best_k.saturating_sub(1);
    let hi_k = (best_k + 1).min(segments);
    let base_r = r_lo + step * of_usize::<S>(lo_k);
    let base_vol = cums[lo_k];
    let value_at = |r: S| -> Result<S> {
        let vol = base_vol + space.annulus_volume(base_r, r)?;
        ratio_of(vol, r)
    };
    let mut a = base_r;
    let mut b = r_lo + step * of_usize::<S>(hi_k);
    for _ in 0..90 {
        let third = (b - a) / S::of(3.0);
        let m1 = a + third;
        let m2 = b - third;
        if value_at(m1)? < value_at(m2)? {
            a = m1;
        } else {
            b = m2;
        }
        if b - a <= S::of(1e-12) * (S::one() + b.abs()) {
            break;
        }
    }
    let refined = value_at((a + b) * S::of(0.5))?;
    Ok(best.max(refined))
}

/// Height gap of the graph against its guaranteed bound.
#[derive(Debug, Clone, Copy)]
pub struct HeightBound<S> {
    /// max f - h_o.
    pub gap: S,
    /// The bound: c_ne sqrt(m) |outer slice|^(1/4) when q = 1/2, and
    /// d_ne m^((1-q)/q) 6 log(1 + p(max f)) for the spherical sign in
    /// dimension at least four.
    pub rhs: S,
    pub holds: bool,
}

/// Checks the height bound for the graph.
pub fn height_bound_check<S: Real>(
    graph: &GraphManifold<S>,
    mass: S,
    constants: &StabilityConstants<S>,
) -> Result<HeightBound<S>> {
    let h_o = critical_height(graph, mass, constants.xi)?;
    let gap = graph.max_height() - h_o;
    let rhs = height_bound_rhs(graph, mass, constants)?;
    let slack = S::of(1e-10) * (S::one() + rhs.abs());
    Ok(HeightBound {
        gap,
        rhs,
        holds: gap <= rhs + slack,
    })
}

fn height_bound_rhs<S: Real>(
    graph: &GraphManifold<S>,
    mass: S,
    constants: &StabilityConstants<S>,
) -> Result<S> {
    positive_mass(mass)?;
    let space = graph.space();
    let q = constants.n_eps;
    let half_branch = (q - S::of(0.5)).abs() < S::of(1e-12);
    if half_branch {
        let outer_area = space.slice_area(graph.r_outer())?;
        Ok(constants.c_ne * mass.sqrt() * outer_area.powf(S::of(0.25)))
    } else {
        let profile = comparison_profile(graph, mass, constants.xi, 17)?;
        let p_top = *profile.excess.last().expect("profile is never empty");
        Ok(constants.d_ne
            * mass.powf((S::one() - q) / q)
            * S::of(6.0)
            * p_top.ln_1p())
    }
}

/// Volume excess of the graph over its reference annulus against the
/// guaranteed bound.
#[derive(Debug, Clone, Copy)]
pub struct VolumeEstimate<S> {
    /// Volume of the graph.
    pub vol_graph: S,
    /// Volume of the reference annulus underneath it.
    pub vol_base: S,
    /// Bound on vol_graph - vol_base: an isoperimetric term, a slab term
    /// V_max (h_o - min f) T, and the cap |outer slice| (max f - h_o).
    pub rhs: S,
    pub holds: bool,
}

/// The shared isoperimetric block 2 c_iso (2T)^(n/(n-1)), written out in the
/// threshold parameters.
fn iso_block<S: Real>(
    space: &ReferenceSpace<S>,
    constants: &StabilityConstants<S>,
    mass: S,
) -> S {
    let n = space.dim() as usize;
    let expo_a = S::of(n as f64) / of_usize::<S>(n - 1);
    let expo_m = expo_a / constants.n_eps;
    let amp = space.cross_section_volume();
    S::of(2.0)
        * constants.c_iso
        * S::of(4.0).powf(expo_a)
        * (S::one() + constants.xi).powf(expo_m)
        * amp.powf(expo_a)
        * (S::of(2.0) * mass / constants.c_eps).powf(expo_m)
}

/// Checks the volume estimate for the graph.
pub fn volume_estimate_check<S: Real>(
    graph: &GraphManifold<S>,
    mass: S,
    constants: &StabilityConstants<S>,
) -> Result<VolumeEstimate<S>> {
    let space = graph.space();
    let h_o = critical_height(graph, mass, constants.xi)?;
    let (c, q) = (constants.c_eps, constants.n_eps);
    let t = threshold_area(space, c, q, mass, constants.xi);

    let vol_graph = graph.volume()?;
    let vol_base = graph.base_volume()?;
    let outer_area = space.slice_area(graph.r_outer())?;
    let rhs = iso_block(space, constants, mass)
        + constants.v_max * (h_o - graph.min_height()) * t
        + outer_area * (graph.max_height() - h_o);
    let lhs = vol_graph - vol_base;
    let slack = S::of(1e-10) * (S::one() + rhs.abs());
    Ok(VolumeEstimate {
        vol_graph,
        vol_base,
        rhs,
        holds: lhs <= rhs + slack,
    })
}

/// The flat-distance decomposition of the graph against the slice at the
/// critical height: exact filling masses, their proof-level bounds, and the
/// mass exponent of the assembled estimate.
#[derive(Debug, Clone, Copy)]
pub struct FlatDecomposition<S> {
    pub h_o: S,
    /// Wall over the outer boundary, (max f - h_o) |outer slice|.
    pub mass_a_plus: S,
    /// Wall over the inner boundary, (h_o - min f) |inner slice|.
    pub mass_a_minus: S,
    /// Filling volume above the slice.
    pub mass_b_plus: S,
    /// Filling volume below the slice.
    pub mass_b_minus: S,
    /// Sum of the four masses: the flat-distance upper bound.
    pub flat_distance_bound: S,
    pub bound_a_plus: S,
    pub bound_a_minus: S,
    pub bound_b_plus: S,
    pub bound_b_minus: S,
    /// Sum of the four proof-level bounds.
    pub proof_bound: S,
    /// Mass exponent of the assembled estimate.
    pub gamma: S,
}

/// Computes the flat-distance decomposition under the chosen time measure.
pub fn flat_distance_decomposition<S: Real>(
    graph: &GraphManifold<S>,
    mass: S,
    constants: &StabilityConstants<S>,
    measure: Measure,
) -> Result<FlatDecomposition<S>> {
    let space = graph.space();
    let h_o = critical_height(graph, mass, constants.xi)?;
    let r_cut = if h_o >= graph.max_height() {
        graph.r_outer()
    } else if h_o <= graph.min_height() {
        graph.r_inner()
    } else {
        graph.radius_at_height(h_o)?
    };

    let n1 = space.dim() as i32 - 1;
    let eps = S::of(space.epsilon() as f64);
    let amp = space.cross_section_volume();
    let weight = move |r: S| {
        let v = (r * r + eps).sqrt();
        match measure {
            Measure::Product => r.powi(n1) / v,
            Measure::Static => r.powi(n1),
        }
    };

    let tol = Tolerance::default();
    let mass_b_minus = if r_cut > graph.r_inner() {
        amp * integrate(
            |r| (h_o - graph.height(r).unwrap_or(S::nan())).max(S::zero()) * weight(r),
            graph.r_inner(),
            r_cut,
            tol,
        )?
    } else {
        S::zero()
    };
    let mass_b_plus = if r_cut < graph.r_outer() {
        amp * integrate(
            |r| (graph.height(r).unwrap_or(S::nan()) - h_o).max(S::zero()) * weight(r),
            r_cut,
            graph.r_outer(),
            tol,
        )?
    } else {
        S::zero()
    };

    let v_inner = space.static_potential(graph.r_inner())?;
    let v_outer = space.static_potential(graph.r_outer())?;
    let (wall_in, wall_out) = match measure {
        Measure::Product => (S::one(), S::one()),
        Measure::Static => (v_inner, v_outer),
    };
    let mass_a_minus =
        (h_o - graph.min_height()) * space.slice_area(graph.r_inner())? * wall_in;
    let mass_a_plus =
        (graph.max_height() - h_o) * space.slice_area(graph.r_outer())? * wall_out;
    let flat_distance_bound = mass_a_plus + mass_a_minus + mass_b_plus + mass_b_minus;

    // Proof-level counterparts. Under the static measure each piece picks up
    // the largest potential value on its region.
    let (c, q) = (constants.c_eps, constants.n_eps);
    let height_rhs = height_bound_rhs(graph, mass, constants)?;
    let depth = h_o - graph.min_height();
    let (scale_minus, scale_plus) = match measure {
        Measure::Product => (S::one(), S::one()),
        Measure::Static => (constants.v_max, v_outer),
    };
    let bound_a_minus =
        depth * amp * (S::of(2.0) * mass / c).powf(S::one() / q) * scale_minus;
    let bound_b_minus = depth * iso_block(space, constants, mass) * scale_minus;
    let bound_a_plus = height_rhs * space.slice_area(graph.r_outer())? * scale_plus;
    let bound_b_plus = height_rhs * graph.base_volume()? * scale_plus;
    let proof_bound = bound_a_plus + bound_a_minus + bound_b_plus + bound_b_minus;

    // Mass exponents of the pieces: the height bound carries 1/2, the inner
    // wall 1/q, the inner filling n/(q(n-1)); the slowest one wins.
    let n = space.dim() as usize;
    let expo_m = S::of(n as f64) / (of_usize::<S>(n - 1) * q);
    let gamma = S::of(0.5).min(S::one() / q).min(expo_m);

    Ok(FlatDecomposition {
        h_o,
        mass_a_plus,
        mass_a_minus,
        mass_b_plus,
        mass_b_minus,
        flat_distance_bound,
        bound_a_plus,
        bound_a_minus,
        bound_b_plus,
        bound_b_minus,
        proof_bound,
        gamma,
    })
}

/// One-stop stability summary of a graph.
#[derive(Debug, Clone, Copy)]
pub struct StabilityReport<S> {
    pub h_o: S,
    pub height_gap: S,
    pub height_bound_rhs: S,
    pub vol_graph: S,
    pub vol_base: S,
    pub vol_estimate_rhs: S,
    pub mass_a_plus: S,
    pub mass_a_minus: S,
    pub mass_b_plus: S,
    pub mass_b_minus: S,
    pub flat_distance_bound: S,
    pub gamma: S,
}

/// Runs the full stability suite on one graph.
pub fn stability_report<S: Real>(
    graph: &GraphManifold<S>,
    xi: S,
    measure: Measure,
) -> Result<StabilityReport<S>> {
    let mass = brown_york_energy(graph, graph.r_outer())?;
    let constants = stability_constants(graph, xi)?;
    let height = height_bound_check(graph, mass, &constants)?;
    let volume = volume_estimate_check(graph, mass, &constants)?;
    let flat = flat_distance_decomposition(graph, mass, &constants, measure)?;
    Ok(StabilityReport {
        h_o: flat.h_o,
        height_gap: height.gap,
        height_bound_rhs: height.rhs,
        vol_graph: volume.vol_graph,
        vol_base: volume.vol_base,
        vol_estimate_rhs: volume.rhs,
        mass_a_plus: flat.mass_a_plus,
        mass_a_minus: flat.mass_a_minus,
        mass_b_plus: flat.mass_b_plus,
        mass_b_minus: flat.mass_b_minus,
        flat_distance_bound: flat.flat_distance_bound,
        gamma: flat.gamma,
    })
}

/// One row of the shrinking-parameter experiment.
#[derive(Debug, Clone, Copy)]
pub struct SweepRow<S> {
    pub index: u32,
    pub mu: S,
    pub mass: S,
    pub h_o: S,
    pub height_gap: S,
    /// Graph volume minus the volume of its own reference annulus.
    pub vol_gap: S,
    pub mass_a_plus: S,
    pub mass_a_minus: S,
    pub mass_b_plus: S,
    pub mass_b_minus: S,
    pub flat_bound: S,
    /// Graph volume minus the volume of the limiting annulus (the one cut at
    /// the smallest horizon of the sweep), the fixed-domain comparison.
    pub vol_gap_fixed: S,
}

/// Result of the shrinking-parameter experiment: per-step rows and the
/// fitted mass exponent of the flat-distance bound over the last five steps.
#[derive(Debug, Clone)]
pub struct SweepResult<S> {
    pub rows: Vec<SweepRow<S>>,
    pub gamma_fit: S,
}

/// Runs the family mu_i = 2^-i for i = 1..=steps at fixed outer radius,
/// recording masses, critical heights, volume gaps, and the flat-distance
/// decomposition, then fits the mass exponent over the last five steps.
pub fn convergence_experiment<S: Real>(
    space: &ReferenceSpace<S>,
    r_outer: S,
    steps: u32,
    xi: S,
    measure: Measure,
) -> Result<SweepResult<S>> {
    if steps < 2 {
        return Err(Error::Domain(format!(
            "the experiment needs at least two steps, got {steps}"
        )));
    }
    let mu_last = S::of(2.0).powi(-(steps as i32));
    let r0_last = crate::graph::horizon_radius(space, mu_last)?;

    let mut rows = Vec::with_capacity(steps as usize);
    for i in 1..=steps {
        let mu = S::of(2.0).powi(-(i as i32));
        let graph = GraphManifold::kottler_schwarzschild(space, mu, r_outer)?;
        let mass = brown_york_energy(&graph, r_outer)?;
        let constants = stability_constants(&graph, xi)?;
        let flat = flat_distance_decomposition(&graph, mass, &constants, measure)?;
        let vol = graph.volume()?;
        let vol_gap = vol - graph.base_volume()?;
        let vol_gap_fixed = vol - space.annulus_volume(r0_last, r_outer)?;
        rows.push(SweepRow {
            index: i,
            mu,
            mass,
            h_o: flat.h_o,
            height_gap: graph.max_height() - flat.h_o,
            vol_gap,
            mass_a_plus: flat.mass_a_plus,
            mass_a_minus: flat.mass_a_minus,
            mass_b_plus: flat.mass_b_plus,
            mass_b_minus: flat.mass_b_minus,
            flat_bound: flat.flat_distance_bound,
            vol_gap_fixed,
        });
    }

    let tail = rows.len().min(5);
    let pts: Vec<(S, S)> = rows[rows.len() - tail..]
        .iter()
        .map(|row| (row.mass, row.flat_bound))
        .collect();
    let gamma_fit = log_log_slope(&pts)?;
    Ok(SweepResult { rows, gamma_fit })
}
