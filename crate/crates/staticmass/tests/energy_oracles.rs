//! Quasilocal energy, its lower bound, the horizon-area inequality, and the
//! divergence identity, checked against hand-derived closed forms.

use staticmass::{
    brown_york_energy, divergence_identity_residual, energy_lower_bound, energy_report,
    minkowski_check, penrose_gap, GraphManifold, ReferenceSpace,
};

#[test]
fn spherical_flagship_values() {
    // eps = 1, n = 3, mu = 1, R = 2: the horizon sits exactly at r = 1 and
    //   mass        = 2 sqrt5 (sqrt5 - sqrt(5 - 1)) = 10 - 4 sqrt5,
    //   lower bound = 2 * 5 * (1/2) * s^2/(1+s^2)   = 1   (s^2 = 1/4 there),
    //   horizon rhs = r0 / 2                        = 1/2.
    let space = ReferenceSpace::<f64>::new(1, 3, None).unwrap();
    let graph = GraphManifold::kottler_schwarzschild(&space, 1.0, 2.0).unwrap();
    let mass = brown_york_energy(&graph, 2.0).unwrap();
    assert!((mass - (10.0 - 4.0 * 5f64.sqrt())).abs() < 1e-8, "{mass}");
    let lower = energy_lower_bound(&graph, 2.0).unwrap();
    assert!((lower - 1.0).abs() < 1e-8, "{lower}");
    let gap = penrose_gap(&graph).unwrap();
    assert!((gap.rhs - 0.5).abs() < 1e-12);
    assert!((gap.gap - (9.5 - 4.0 * 5f64.sqrt())).abs() < 1e-8);
}

#[test]
fn flat_reference_energy_is_exact() {
    // With a linear potential, mass = R (V^2 - V V_mu) has closed form
    // 4 (2 - sqrt(3.5)) at mu = 1/2, R = 2.
    let space = ReferenceSpace::<f64>::new(0, 3, None).unwrap();
    let graph = GraphManifold::kottler_schwarzschild(&space, 0.5, 2.0).unwrap();
    let mass = brown_york_energy(&graph, 2.0).unwrap();
    assert!((mass - 4.0 * (2.0 - 3.5f64.sqrt())).abs() < 1e-12, "{mass}");

    // The horizon-area bound is saturated in the limit: rhs = mu exactly,
    // and the mass exceeds mu by mu^2/(2 R^3) + O(higher).
    for mu in [0.1, 0.5, 1.0, 2.0] {
        let graph = GraphManifold::kottler_schwarzschild(&space, mu, 50.0).unwrap();
        let gap = penrose_gap(&graph).unwrap();
        assert!((gap.rhs - mu).abs() < 1e-12 * mu, "rhs {} mu {mu}", gap.rhs);
        assert!(gap.gap > 0.0);
        let correction = mu * mu / (2.0 * 50f64.powi(3));
        assert!(
            (gap.gap - correction).abs() < 0.1 * correction,
            "gap {} vs {correction}",
            gap.gap
        );
    }
}

#[test]
fn mass_dominates_its_lower_bound_on_every_family() {
    for (eps, n, mu, r) in [
        (1, 3, 0.7, 2.0),
        (1, 4, 0.3, 1.8),
        (0, 3, 1.0, 3.0),
        (0, 5, 0.4, 1.5),
        (-1, 3, 1.5, 2.5),
        (-1, 4, 1.3, 2.2),
    ] {
        let amp = if eps == -1 { Some(2.0) } else { None };
        let space = ReferenceSpace::<f64>::new(eps, n, amp).unwrap();
        let graph = GraphManifold::kottler_schwarzschild(&space, mu, r).unwrap();
        let mass = brown_york_energy(&graph, r).unwrap();
        let lower = energy_lower_bound(&graph, r).unwrap();
        assert!(
            mass >= lower && lower >= 0.0,
            "eps {eps} n {n}: mass {mass} lower {lower}"
        );
    }
}

#[test]
fn divergence_identity_balances_off_family() {
    // A profile that is not scalar-flat: both sides of the identity must
    // still agree, they just stop vanishing.
    let space = ReferenceSpace::<f64>::new(1, 3, None).unwrap();
    let profile = staticmass::SlopeProfile::analytic("shallow ramp", |r: f64| 0.2 * r);
    let graph = GraphManifold::from_profile(&space, profile, 0.5, 2.0).unwrap();
    let lo = graph.min_height();
    let hi = graph.max_height();
    let id = divergence_identity_residual(&graph, lo + 0.2 * (hi - lo), lo + 0.8 * (hi - lo))
        .unwrap();
    assert!(id.bulk.abs() > 1e-3, "test should exercise a nonzero flux");
    assert!(
        id.residual < 1e-6 * (1.0 + id.bulk.abs()),
        "bulk {} flux {}",
        id.bulk,
        id.flux
    );
}

#[test]
fn minkowski_bound_is_equality_on_slices_and_strict_unweighted() {
    let space = ReferenceSpace::<f64>::new(1, 3, None).unwrap();
    for r in [0.5, 1.0, 2.0, 5.0] {
        let mk = minkowski_check(&space, r).unwrap();
        assert!(
            (mk.functional - mk.weighted_bound).abs() < 1e-9 * mk.functional,
            "weighted bound not tight at r = {r}"
        );
        assert!(mk.unweighted_strict);
    }
    // At r = 1 the strict margin is sqrt2 - 1, about forty percent.
    let mk = minkowski_check(&space, 1.0).unwrap();
    let margin = mk.unweighted_lhs / mk.unweighted_rhs - 1.0;
    assert!((margin - (2f64.sqrt() - 1.0)).abs() < 1e-12, "{margin}");
}

#[test]
fn report_collects_the_pieces() {
    let space = ReferenceSpace::<f64>::new(1, 3, None).unwrap();
    let graph = GraphManifold::kottler_schwarzschild(&space, 1.0, 2.0).unwrap();
    let report = energy_report(&graph).unwrap();
    assert!((report.mass - (10.0 - 4.0 * 5f64.sqrt())).abs() < 1e-8);
    assert!((report.lower_bound - 1.0).abs() < 1e-8);
    assert!(report.divergence_residual < 1e-7);
    assert!((report.c_eps - 1.0).abs() < 1e-15);
    assert!((report.n_eps - 0.5).abs() < 1e-15);
}
