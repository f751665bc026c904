//! The check registry: named verification routines over one configured
//! graph, each returning a pass/fail outcome with its worst residual.

use staticmass::verify::fd_graph_mean_curvature;
use staticmass::{
    brown_york_energy, comparison_profile, divergence_identity_residual, energy_lower_bound,
    flat_distance_decomposition, height_bound_check, minkowski_check, penrose_gap,
    stability_constants, volume_estimate_check, volume_growth_residual, GraphManifold, Measure,
    ReferenceSpace,
};

/// Outcome of one named check.
#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    /// Worst residual the check measured, when it measures one.
    pub residual: Option<f64>,
    pub detail: String,
}

pub struct CheckContext<'a> {
    pub space: &'a ReferenceSpace<f64>,
    pub graph: &'a GraphManifold<f64>,
    pub xi: f64,
    pub measure: Measure,
    /// Residual gate for the static-equation and scalar-curvature checks.
    pub tolerance: f64,
    pub seed: u64,
}

type Runner = fn(&CheckContext) -> CheckOutcome;

/// Canonical names, one-line descriptions, and runners, alphabetized.
pub const REGISTRY: &[(&str, &str, Runner)] = &[
    (
        "comparison_profile",
        "level-set areas dominate the growth envelope above the critical height",
        check_comparison_profile,
    ),
    (
        "eq4_divergence",
        "scalar-curvature excess integral balances the boundary flux",
        check_eq4_divergence,
    ),
    (
        "eq6_mean_curvature",
        "level-set mean curvature matches a finite-difference embedding oracle",
        check_eq6_mean_curvature,
    ),
    (
        "lemma21_lower_bound",
        "quasilocal energy dominates its nonnegative slope bound",
        check_lemma21_lower_bound,
    ),
    (
        "lemma22_penrose",
        "quasilocal energy dominates the horizon-area term",
        check_lemma22_penrose,
    ),
    (
        "lemma32_height_bound",
        "height spread above the critical slice is mass-controlled",
        check_lemma32_height_bound,
    ),
    (
        "lemma33_volume_estimate",
        "volume excess over the reference annulus is mass-controlled",
        check_lemma33_volume_estimate,
    ),
    (
        "minkowski_remark",
        "weighted mean-curvature integral meets its bound on slices",
        check_minkowski_remark,
    ),
    (
        "scalar_curvature",
        "graph and reference scalar curvatures sit at the space-form value",
        check_scalar_curvature,
    ),
    (
        "static_equation",
        "reference potential solves the static vacuum system",
        check_static_equation,
    ),
    (
        "theorem42_flat_bound",
        "flat-distance decomposition masses stay within their proof bounds",
        check_theorem42_flat_bound,
    ),
    (
        "volume_growth",
        "area growth in height beats the comparison rate",
        check_volume_growth,
    ),
];

const ALIASES: &[(&str, &str)] = &[
    ("eq4", "eq4_divergence"),
    ("eq6", "eq6_mean_curvature"),
    ("lemma21", "lemma21_lower_bound"),
    ("lemma22", "lemma22_penrose"),
    ("lemma32", "lemma32_height_bound"),
    ("lemma33", "lemma33_volume_estimate"),
    ("static_eq", "static_equation"),
    ("theorem42", "theorem42_flat_bound"),
];

/// Resolves a requested name (canonical or alias) to its registry entry.
pub fn resolve(name: &str) -> Option<(&'static str, Runner)> {
    let canonical = ALIASES
        .iter()
        .find(|(alias, _)| *alias == name)
        .map_or(name, |(_, c)| *c);
    REGISTRY
        .iter()
        .find(|(n, _, _)| *n == canonical)
        .map(|(n, _, runner)| (*n, *runner))
}

/// Tiny deterministic generator for sample draws; splitmix64 steps.
pub struct SampleRng {
    state: u64,
}

impl SampleRng {
    pub fn new(seed: u64) -> Self {
        SampleRng { state: seed }
    }

    fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z ^ (z >> 31)
    }

    /// Uniform draw in [0, 1).
    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }
}

fn pass(name: &'static str, residual: Option<f64>, detail: String) -> CheckOutcome {
    CheckOutcome {
        name,
        passed: true,
        residual,
        detail,
    }
}

fn fail(name: &'static str, residual: Option<f64>, detail: String) -> CheckOutcome {
    CheckOutcome {
        name,
        passed: false,
        residual,
        detail,
    }
}

fn radial_grid(space: &ReferenceSpace<f64>, count: usize) -> Vec<f64> {
    let lo = space.r_min().max(0.05);
    let hi = 10.0f64.max(lo * 2.0);
    (0..count)
        .map(|k| lo + (hi - lo) * (k as f64 + 0.5) / count as f64)
        .collect()
}

fn check_static_equation(ctx: &CheckContext) -> CheckOutcome {
    let mut worst = 0.0f64;
    for r in radial_grid(ctx.space, 100) {
        match ctx.space.static_equation_residual(r) {
            Ok(res) => worst = worst.max(res.tensor).max(res.lapse),
            Err(e) => {
                return fail(
                    "static_equation",
                    None,
                    format!("residual failed at r = {r}: {e}"),
                )
            }
        }
    }
    let detail = format!("worst residual {worst:.3e} over 100 radii (gate {:.1e})", ctx.tolerance);
    if worst <= ctx.tolerance {
        pass("static_equation", Some(worst), detail)
    } else {
        fail("static_equation", Some(worst), detail)
    }
}

fn check_scalar_curvature(ctx: &CheckContext) -> CheckOutcome {
    let n = ctx.space.dim() as f64;
    let target = -n * (n - 1.0);
    let mut worst_ref = 0.0f64;
    for r in radial_grid(ctx.space, 100) {
        match ctx.space.curvature(r) {
            Ok(c) => worst_ref = worst_ref.max((c.scalar - target).abs()),
            Err(e) => {
                return fail(
                    "scalar_curvature",
                    None,
                    format!("curvature failed at r = {r}: {e}"),
                )
            }
        }
    }
    // The built-in graph family keeps the same scalar curvature; sample it
    // away from the singular inner boundary, where the slope derivative is
    // computed rather than exact.
    let g = ctx.graph;
    let mut worst_graph = 0.0f64;
    let lo = g.r_inner() + 0.02 * (g.r_outer() - g.r_inner());
    for k in 0..20 {
        let r = lo + (g.r_outer() - lo) * (k as f64 + 0.5) / 20.0;
        match g.scalar_curvature(r) {
            Ok(rg) => worst_graph = worst_graph.max((rg - target).abs()),
            Err(e) => {
                return fail(
                    "scalar_curvature",
                    None,
                    format!("graph curvature failed at r = {r}: {e}"),
                )
            }
        }
    }
    let detail = format!(
        "reference deviation {worst_ref:.3e}, graph deviation {worst_graph:.3e} from {target}"
    );
    if worst_ref <= ctx.tolerance && worst_graph <= 1e-6 {
        pass("scalar_curvature", Some(worst_ref.max(worst_graph)), detail)
    } else {
        fail("scalar_curvature", Some(worst_ref.max(worst_graph)), detail)
    }
}

fn check_eq6_mean_curvature(ctx: &CheckContext) -> CheckOutcome {
    let g = ctx.graph;
    if g.is_constant() {
        return pass(
            "eq6_mean_curvature",
            None,
            "constant graph: slices coincide with reference slices".into(),
        );
    }
    let mut rng = SampleRng::new(ctx.seed ^ 0x6d65616e);
    let span = g.r_outer() - g.r_inner();
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let r = g.r_inner() + span * (0.05 + 0.9 * rng.unit());
        let closed = match g.level_set(g.height(r).unwrap_or(f64::NAN)) {
            Ok(data) => data.graph_mean_curvature,
            Err(e) => {
                return fail(
                    "eq6_mean_curvature",
                    None,
                    format!("level set failed at r = {r}: {e}"),
                )
            }
        };
        match fd_graph_mean_curvature(g, r, 1e-5) {
            Ok(fd) => worst = worst.max((closed - fd).abs()),
            Err(e) => {
                return fail(
                    "eq6_mean_curvature",
                    None,
                    format!("difference oracle failed at r = {r}: {e}"),
                )
            }
        }
    }
    let detail = format!("worst closed-vs-differenced gap {worst:.3e} over 50 samples");
    if worst <= 1e-5 {
        pass("eq6_mean_curvature", Some(worst), detail)
    } else {
        fail("eq6_mean_curvature", Some(worst), detail)
    }
}

fn check_eq4_divergence(ctx: &CheckContext) -> CheckOutcome {
    let g = ctx.graph;
    if g.is_constant() {
        return pass(
            "eq4_divergence",
            Some(0.0),
            "constant graph: both sides vanish identically".into(),
        );
    }
    let mut rng = SampleRng::new(ctx.seed ^ 0x64697665);
    let lo = g.min_height();
    let span = g.max_height() - lo;
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let a = lo + span * (0.02 + 0.5 * rng.unit());
        let b = a + (lo + span - a) * (0.1 + 0.85 * rng.unit());
        match divergence_identity_residual(g, a, b) {
            Ok(id) => worst = worst.max(id.residual / (1.0 + id.bulk.abs())),
            Err(e) => {
                return fail(
                    "eq4_divergence",
                    None,
                    format!("identity failed on [{a}, {b}]: {e}"),
                )
            }
        }
    }
    let detail = format!("worst relative imbalance {worst:.3e} over 20 height pairs");
    if worst <= 1e-6 {
        pass("eq4_divergence", Some(worst), detail)
    } else {
        fail("eq4_divergence", Some(worst), detail)
    }
}

fn check_lemma21_lower_bound(ctx: &CheckContext) -> CheckOutcome {
    let g = ctx.graph;
    let r = g.r_outer();
    let (mass, lower) = match (brown_york_energy(g, r), energy_lower_bound(g, r)) {
        (Ok(m), Ok(l)) => (m, l),
        (Err(e), _) | (_, Err(e)) => {
            return fail("lemma21_lower_bound", None, format!("energy failed: {e}"))
        }
    };
    let detail = format!("mass {mass:.6e}, lower bound {lower:.6e}");
    if mass >= lower && lower >= 0.0 {
        pass("lemma21_lower_bound", Some((lower - mass).max(0.0)), detail)
    } else {
        fail("lemma21_lower_bound", Some(lower - mass), detail)
    }
}

fn check_lemma22_penrose(ctx: &CheckContext) -> CheckOutcome {
    match penrose_gap(ctx.graph) {
        Ok(gap) => {
            let detail = format!("mass {:.6e} vs horizon term {:.6e}", gap.mass, gap.rhs);
            if gap.gap >= -1e-9 {
                pass("lemma22_penrose", Some((-gap.gap).max(0.0)), detail)
            } else {
                fail("lemma22_penrose", Some(-gap.gap), detail)
            }
        }
        Err(e) => fail("lemma22_penrose", None, format!("gap failed: {e}")),
    }
}

fn check_minkowski_remark(ctx: &CheckContext) -> CheckOutcome {
    let g = ctx.graph;
    let mut worst = 0.0f64;
    let lo = g.r_inner();
    for k in 0..20 {
        let r = lo + (g.r_outer() - lo) * (k as f64 + 0.5) / 20.0;
        match minkowski_check(ctx.space, r) {
            Ok(mk) => {
                worst = worst.max((mk.functional - mk.weighted_bound).abs() / mk.functional);
                if ctx.space.epsilon() == 1 && !mk.unweighted_strict {
                    return fail(
                        "minkowski_remark",
                        None,
                        format!("unweighted bound not strict at r = {r}"),
                    );
                }
            }
            Err(e) => {
                return fail(
                    "minkowski_remark",
                    None,
                    format!("check failed at r = {r}: {e}"),
                )
            }
        }
    }
    let detail = format!("weighted bound met with relative slack {worst:.3e}");
    if worst <= 1e-9 {
        pass("minkowski_remark", Some(worst), detail)
    } else {
        fail("minkowski_remark", Some(worst), detail)
    }
}

fn mass_of(ctx: &CheckContext) -> Result<f64, String> {
    brown_york_energy(ctx.graph, ctx.graph.r_outer()).map_err(|e| format!("energy failed: {e}"))
}

fn check_volume_growth(ctx: &CheckContext) -> CheckOutcome {
    let g = ctx.graph;
    let mass = match mass_of(ctx) {
        Ok(m) => m,
        Err(e) => return fail("volume_growth", None, e),
    };
    let constants = match stability_constants(g, ctx.xi) {
        Ok(c) => c,
        Err(e) => return fail("volume_growth", None, format!("constants failed: {e}")),
    };
    // Heights above the growth threshold, where the comparison applies.
    let n1q = (ctx.space.dim() as f64 - 1.0) * constants.n_eps;
    let r_thr = (2.0 * mass / constants.c_eps).powf(1.0 / n1q);
    if r_thr >= g.r_outer() {
        return pass(
            "volume_growth",
            None,
            "no level sets above the growth threshold for this family".into(),
        );
    }
    let lo = r_thr.max(g.r_inner());
    let mut min_residual = f64::INFINITY;
    for k in 1..=10 {
        let r = lo + (g.r_outer() - lo) * k as f64 / 11.0;
        let h = match g.height(r) {
            Ok(h) => h,
            Err(e) => return fail("volume_growth", None, format!("height failed: {e}")),
        };
        match volume_growth_residual(g, mass, h) {
            Ok(res) => min_residual = min_residual.min(res),
            Err(e) => {
                return fail(
                    "volume_growth",
                    None,
                    format!("residual failed at h = {h}: {e}"),
                )
            }
        }
    }
    let detail = format!("smallest growth margin {min_residual:.3e} over 10 heights");
    if min_residual > 0.0 {
        pass("volume_growth", Some((-min_residual).max(0.0)), detail)
    } else {
        fail("volume_growth", Some(-min_residual), detail)
    }
}

fn check_comparison_profile(ctx: &CheckContext) -> CheckOutcome {
    let mass = match mass_of(ctx) {
        Ok(m) => m,
        Err(e) => return fail("comparison_profile", None, e),
    };
    match comparison_profile(ctx.graph, mass, ctx.xi, 33) {
        Ok(profile) => {
            let worst = profile
                .areas
                .iter()
                .zip(&profile.envelope)
                .map(|(&a, &y)| (y - a) / (1.0 + y.abs()))
                .fold(f64::NEG_INFINITY, f64::max);
            let detail = format!(
                "{} samples above h_o = {:.6e}, worst envelope excess {worst:.3e}",
                profile.heights.len(),
                profile.h_o
            );
            if profile.dominated {
                pass("comparison_profile", Some(worst.max(0.0)), detail)
            } else {
                fail("comparison_profile", Some(worst), detail)
            }
        }
        Err(e) => fail("comparison_profile", None, format!("profile failed: {e}")),
    }
}

fn check_lemma32_height_bound(ctx: &CheckContext) -> CheckOutcome {
    let mass = match mass_of(ctx) {
        Ok(m) => m,
        Err(e) => return fail("lemma32_height_bound", None, e),
    };
    let constants = match stability_constants(ctx.graph, ctx.xi) {
        Ok(c) => c,
        Err(e) => return fail("lemma32_height_bound", None, format!("constants failed: {e}")),
    };
    match height_bound_check(ctx.graph, mass, &constants) {
        Ok(hb) => {
            let detail = format!("gap {:.6e} vs bound {:.6e}", hb.gap, hb.rhs);
            if hb.holds {
                pass("lemma32_height_bound", Some((hb.gap - hb.rhs).max(0.0)), detail)
            } else {
                fail("lemma32_height_bound", Some(hb.gap - hb.rhs), detail)
            }
        }
        Err(e) => fail("lemma32_height_bound", None, format!("bound failed: {e}")),
    }
}

fn check_lemma33_volume_estimate(ctx: &CheckContext) -> CheckOutcome {
    let mass = match mass_of(ctx) {
        Ok(m) => m,
        Err(e) => return fail("lemma33_volume_estimate", None, e),
    };
    let constants = match stability_constants(ctx.graph, ctx.xi) {
        Ok(c) => c,
        Err(e) => {
            return fail(
                "lemma33_volume_estimate",
                None,
                format!("constants failed: {e}"),
            )
        }
    };
    match volume_estimate_check(ctx.graph, mass, &constants) {
        Ok(ve) => {
            let lhs = ve.vol_graph - ve.vol_base;
            let detail = format!("volume excess {lhs:.6e} vs bound {:.6e}", ve.rhs);
            if ve.holds {
                pass("lemma33_volume_estimate", Some((lhs - ve.rhs).max(0.0)), detail)
            } else {
                fail("lemma33_volume_estimate", Some(lhs - ve.rhs), detail)
            }
        }
        Err(e) => fail("lemma33_volume_estimate", None, format!("estimate failed: {e}")),
    }
}

fn check_theorem42_flat_bound(ctx: &CheckContext) -> CheckOutcome {
    let mass = match mass_of(ctx) {
        Ok(m) => m,
        Err(e) => return fail("theorem42_flat_bound", None, e),
    };
    let constants = match stability_constants(ctx.graph, ctx.xi) {
        Ok(c) => c,
        Err(e) => return fail("theorem42_flat_bound", None, format!("constants failed: {e}")),
    };
    match flat_distance_decomposition(ctx.graph, mass, &constants, ctx.measure) {
        Ok(flat) => {
            let pieces = [
                flat.mass_a_plus,
                flat.mass_a_minus,
                flat.mass_b_plus,
                flat.mass_b_minus,
            ];
            let nonnegative = pieces.iter().all(|&p| p >= 0.0);
            let bounded = flat.flat_distance_bound <= flat.proof_bound * (1.0 + 1e-12);
            let detail = format!(
                "flat bound {:.6e} vs assembled proof bound {:.6e} (gamma {})",
                flat.flat_distance_bound, flat.proof_bound, flat.gamma
            );
            let residual = (flat.flat_distance_bound - flat.proof_bound).max(0.0);
            if nonnegative && bounded {
                pass("theorem42_flat_bound", Some(residual), detail)
            } else {
                fail("theorem42_flat_bound", Some(residual), detail)
            }
        }
        Err(e) => fail("theorem42_flat_bound", None, format!("decomposition failed: {e}")),
    }
}
