//! Graph construction, horizon solving, level-set data, and scalar
//! curvature across the built-in families.

use staticmass::verify::fd_graph_mean_curvature;
use staticmass::{horizon_radius, GraphManifold, ReferenceSpace, SlopeProfile};

#[test]
fn horizon_solves_its_defining_equation() {
    // Spherical sign, n = 3, mu = 1: r^3 + r = 2 has the exact root 1.
    let sphere = ReferenceSpace::<f64>::new(1, 3, None).unwrap();
    let r0 = horizon_radius(&sphere, 1.0).unwrap();
    assert!((r0 - 1.0).abs() < 1e-12, "r0 = {r0}");

    // With a linear potential the defining equation collapses to r^n = 2 mu.
    for n in [3u32, 4, 5] {
        let flat = ReferenceSpace::<f64>::new(0, n, None).unwrap();
        for mu in [0.3, 1.0, 2.5] {
            let r0 = horizon_radius(&flat, mu).unwrap();
            let oracle = (2.0 * mu).powf(1.0 / n as f64);
            assert!((r0 - oracle).abs() < 1e-10 * oracle);
        }
    }

    let hyper = ReferenceSpace::<f64>::new(-1, 3, Some(1.0)).unwrap();
    let r0 = horizon_radius(&hyper, 1.0).unwrap();
    assert!((r0.powi(3) - r0 - 2.0).abs() < 1e-10, "r0 = {r0}");
}

#[test]
fn built_in_family_has_constant_scalar_curvature() {
    for (eps, n, mu) in [(1, 3, 0.5), (0, 4, 1.0), (-1, 3, 1.4), (1, 5, 0.2)] {
        let amp = if eps == -1 { Some(1.0) } else { None };
        let space = ReferenceSpace::<f64>::new(eps, n, amp).unwrap();
        let graph = GraphManifold::kottler_schwarzschild(&space, mu, 4.0).unwrap();
        let target = -(n as f64) * (n as f64 - 1.0);
        for k in 1..20 {
            let r = graph.r_inner() + (4.0 - graph.r_inner()) * k as f64 / 20.0;
            let rg = graph.scalar_curvature(r).unwrap();
            assert!(
                (rg - target).abs() < 1e-7,
                "eps {eps} n {n} r {r}: R = {rg}"
            );
        }
    }
}

#[test]
fn level_set_mean_curvature_agrees_with_differenced_embedding() {
    let space = ReferenceSpace::<f64>::new(1, 3, None).unwrap();
    let graph = GraphManifold::kottler_schwarzschild(&space, 0.5, 3.0).unwrap();
    for k in 1..10 {
        let r = graph.r_inner() + (3.0 - graph.r_inner()) * k as f64 / 10.0;
        let data = graph.level_set(graph.height(r).unwrap()).unwrap();
        let fd = fd_graph_mean_curvature(&graph, r, 1e-5).unwrap();
        assert!(
            (data.graph_mean_curvature - fd).abs() < 1e-5 * (1.0 + fd.abs()),
            "r {r}: {} vs {fd}",
            data.graph_mean_curvature
        );
        // The graph flattens the slice: H drops by the slope factor.
        let expected = data.ambient_mean_curvature / (1.0 + data.slope * data.slope).sqrt();
        assert!((data.graph_mean_curvature - expected).abs() < 1e-12 * (1.0 + expected.abs()));
    }
}

#[test]
fn heights_and_radii_round_trip() {
    let space = ReferenceSpace::<f64>::new(1, 3, None).unwrap();
    let graph = GraphManifold::kottler_schwarzschild(&space, 0.25, 2.5).unwrap();
    assert!(graph.satisfies_definition());
    assert!(graph.inner_boundary_minimal());
    for k in 1..=15 {
        let h = graph.min_height()
            + (graph.max_height() - graph.min_height()) * k as f64 / 16.0;
        let r = graph.radius_at_height(h).unwrap();
        let back = graph.height(r).unwrap();
        assert!((back - h).abs() < 1e-10 * (1.0 + h.abs()));
    }
}

#[test]
fn areas_grow_with_height() {
    let space = ReferenceSpace::<f64>::new(0, 3, None).unwrap();
    let graph = GraphManifold::kottler_schwarzschild(&space, 1.0, 6.0).unwrap();
    let mut last = 0.0;
    for k in 0..=20 {
        let h = graph.min_height()
            + (graph.max_height() - graph.min_height()) * k as f64 / 20.0;
        let a = graph.area_at_height(h).unwrap();
        assert!(a > last, "area not monotone at h = {h}");
        last = a;
    }
}

#[test]
fn constant_graphs_copy_the_reference_annulus() {
    let space = ReferenceSpace::<f64>::new(1, 4, None).unwrap();
    let graph = GraphManifold::constant(&space, 1.0, 3.0, 0.7).unwrap();
    assert!(graph.is_constant());
    assert_eq!(graph.min_height(), graph.max_height());
    let vol = graph.volume().unwrap();
    let base = graph.base_volume().unwrap();
    assert!((vol - base).abs() < 1e-12 * base);
    assert!(graph.slope(2.0).unwrap() == 0.0);
}

#[test]
fn tabulated_profiles_reproduce_their_generator() {
    // Sample the built-in family into a table and compare slopes.
    let space = ReferenceSpace::<f64>::new(1, 3, None).unwrap();
    let exact = GraphManifold::kottler_schwarzschild(&space, 0.5, 3.0).unwrap();
    let r_lo = exact.r_inner() + 0.05;
    let radii: Vec<f64> = (0..=400)
        .map(|k| r_lo + (3.0 - r_lo) * k as f64 / 400.0)
        .collect();
    let slopes: Vec<f64> = radii.iter().map(|&r| exact.slope(r).unwrap()).collect();
    let table = staticmass::SlopeTable::new(radii, slopes).unwrap();
    let graph =
        GraphManifold::from_profile(&space, SlopeProfile::Table(table), r_lo, 3.0).unwrap();
    for r in [1.2, 1.8, 2.4, 2.9] {
        let a = exact.slope(r).unwrap();
        let b = graph.slope(r).unwrap();
        assert!((a - b).abs() < 1e-4 * (1.0 + a.abs()), "{a} vs {b} at {r}");
    }
}
