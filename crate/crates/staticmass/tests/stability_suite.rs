//! Stability estimates exercised across parameter draws: critical heights,
//! the growth comparison, the height and volume bounds, and the sweep.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use staticmass::{
    brown_york_energy, comparison_profile, convergence_experiment, critical_height,
    flat_distance_decomposition, height_bound_check, stability_constants, volume_estimate_check,
    volume_growth_residual, GraphManifold, Measure, ReferenceSpace,
};

const XI: f64 = 1.0;

/// Parameter ranges keeping every draw admissible: positive mass, a horizon
/// above the degenerate radius for the hyperbolic sign, and an outer radius
/// clear of the horizon.
fn draw(space: &ReferenceSpace<f64>, rng: &mut StdRng) -> (f64, f64) {
    let mu = match space.epsilon() {
        -1 => rng.gen_range(1.2..2.5),
        _ => rng.gen_range(0.05..1.5),
    };
    let r0 = staticmass::horizon_radius(space, mu).unwrap();
    let r_outer = r0 * rng.gen_range(1.6..3.5) + 0.5;
    (mu, r_outer)
}

#[test]
fn critical_height_meets_the_threshold_radius() {
    // Where the critical height is interior, the level set through it has
    // radius (T/A)^(1/(n-1)) = sqrt32 m for this sign and dimension.
    let space = ReferenceSpace::<f64>::new(1, 3, None).unwrap();
    let graph = GraphManifold::kottler_schwarzschild(&space, 1.0 / 16.0, 2.0).unwrap();
    let mass = brown_york_energy(&graph, 2.0).unwrap();
    let h_o = critical_height(&graph, mass, XI).unwrap();
    let r = graph.radius_at_height(h_o).unwrap();
    assert!((r - 32f64.sqrt() * mass).abs() < 1e-10 * r, "r = {r}");
}

#[test]
fn growth_residual_positive_across_draws() {
    let mut rng = StdRng::seed_from_u64(41);
    let space = ReferenceSpace::<f64>::new(1, 3, None).unwrap();
    for _ in 0..10 {
        let (mu, r_outer) = draw(&space, &mut rng);
        let graph = GraphManifold::kottler_schwarzschild(&space, mu, r_outer).unwrap();
        let mass = brown_york_energy(&graph, r_outer).unwrap();
        let r_thr = 2.0 * mass;
        if r_thr >= graph.r_outer() {
            continue;
        }
        let lo = r_thr.max(graph.r_inner());
        for k in 1..=10 {
            let r = lo + (graph.r_outer() - lo) * k as f64 / 11.0;
            let h = graph.height(r).unwrap();
            let res = volume_growth_residual(&graph, mass, h).unwrap();
            assert!(res > 0.0, "mu {mu} r {r}: residual {res}");
        }
    }
}

#[test]
fn envelope_stays_below_the_areas() {
    let mut rng = StdRng::seed_from_u64(42);
    for eps in [1, 0, -1] {
        let amp = if eps == -1 { Some(3.0) } else { None };
        let space = ReferenceSpace::<f64>::new(eps, 3, amp).unwrap();
        for _ in 0..5 {
            let (mu, r_outer) = draw(&space, &mut rng);
            let graph = GraphManifold::kottler_schwarzschild(&space, mu, r_outer).unwrap();
            let mass = brown_york_energy(&graph, r_outer).unwrap();
            let profile = comparison_profile(&graph, mass, XI, 25).unwrap();
            assert!(profile.dominated, "eps {eps} mu {mu} R {r_outer}");
        }
    }
}

#[test]
fn bounds_hold_across_draws_and_dimensions() {
    let mut rng = StdRng::seed_from_u64(43);
    for eps in [1, 0, -1] {
        for n in [3u32, 4] {
            let amp = if eps == -1 { Some(1.0) } else { None };
            let space = ReferenceSpace::<f64>::new(eps, n, amp).unwrap();
            for _ in 0..8 {
                let (mu, r_outer) = draw(&space, &mut rng);
                let graph = GraphManifold::kottler_schwarzschild(&space, mu, r_outer).unwrap();
                let mass = brown_york_energy(&graph, r_outer).unwrap();
                let constants = stability_constants(&graph, XI).unwrap();
                let hb = height_bound_check(&graph, mass, &constants).unwrap();
                assert!(
                    hb.holds,
                    "height: eps {eps} n {n} mu {mu} R {r_outer}: gap {} rhs {}",
                    hb.gap, hb.rhs
                );
                let ve = volume_estimate_check(&graph, mass, &constants).unwrap();
                assert!(
                    ve.holds,
                    "volume: eps {eps} n {n} mu {mu} R {r_outer}: lhs {} rhs {}",
                    ve.vol_graph - ve.vol_base,
                    ve.rhs
                );
            }
        }
    }
}

#[test]
fn decomposition_brackets_the_region_between_graph_and_slice() {
    let space = ReferenceSpace::<f64>::new(1, 3, None).unwrap();
    let graph = GraphManifold::kottler_schwarzschild(&space, 0.125, 2.0).unwrap();
    let mass = brown_york_energy(&graph, 2.0).unwrap();
    let constants = stability_constants(&graph, XI).unwrap();
    for measure in [Measure::Product, Measure::Static] {
        let flat = flat_distance_decomposition(&graph, mass, &constants, measure).unwrap();
        assert!(flat.mass_a_plus >= 0.0 && flat.mass_a_minus >= 0.0);
        assert!(flat.mass_b_plus >= 0.0 && flat.mass_b_minus >= 0.0);
        assert!(flat.proof_bound >= flat.flat_distance_bound);
        assert!((flat.gamma - 0.5).abs() < 1e-15);
    }
}

#[test]
fn twelve_step_sweep_reaches_the_asymptotic_regime() {
    let space = ReferenceSpace::<f64>::new(1, 3, None).unwrap();
    let result = convergence_experiment(&space, 2.0, 12, XI, Measure::Product).unwrap();
    assert_eq!(result.rows.len(), 12);
    for w in result.rows.windows(2) {
        assert!(w[1].mass < w[0].mass);
        assert!(w[1].vol_gap < w[0].vol_gap);
    }
    let last = result.rows.last().unwrap();
    assert!(last.mass < 1e-3, "mass {}", last.mass);
    assert!(last.vol_gap < 1e-2, "vol gap {}", last.vol_gap);
    // The fit window sits past the flat-bound peak, on the decay branch.
    let flats: Vec<f64> = result.rows.iter().map(|r| r.flat_bound).collect();
    for w in flats[7..].windows(2) {
        assert!(w[1] < w[0], "{flats:?}");
    }
    assert!(
        result.gamma_fit > 0.40 && result.gamma_fit < 0.60,
        "gamma {}",
        result.gamma_fit
    );
}
