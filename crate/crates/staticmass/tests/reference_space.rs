//! End-to-end checks of the reference geometry against closed forms and
//! finite differences.

use staticmass::verify::{fd_mean_curvature, fd_static_residual};
use staticmass::{Error, ReferenceSpace};

const FD_STEP: f64 = 1e-4;

fn all_spaces() -> Vec<ReferenceSpace<f64>> {
    let mut spaces = Vec::new();
    for eps in [1, 0, -1] {
        for n in [3u32, 4, 5] {
            let amp = if eps == -1 { Some(1.0) } else { None };
            spaces.push(ReferenceSpace::new(eps, n, amp).unwrap());
        }
    }
    spaces
}

fn radii(space: &ReferenceSpace<f64>, count: usize) -> Vec<f64> {
    let lo = space.r_min().max(0.05);
    let hi = 10.0;
    (0..count)
        .map(|k| lo + (hi - lo) * (k as f64 + 0.5) / count as f64)
        .collect()
}

#[test]
fn static_system_solves_across_the_grid() {
    for space in all_spaces() {
        for r in radii(&space, 100) {
            let res = space.static_equation_residual(r).unwrap();
            assert!(
                res.tensor <= 1e-8 && res.lapse <= 1e-8,
                "eps {} n {} r {r}: tensor {} lapse {}",
                space.epsilon(),
                space.dim(),
                res.tensor,
                res.lapse
            );
            let curv = space.curvature(r).unwrap();
            let n = space.dim() as f64;
            assert!(
                (curv.scalar + n * (n - 1.0)).abs() <= 1e-8,
                "scalar curvature off at eps {} n {} r {r}",
                space.epsilon(),
                space.dim()
            );
        }
    }
}

#[test]
fn finite_differences_agree_with_the_closed_residuals() {
    for space in all_spaces() {
        for r in [0.7, 1.6, 4.0] {
            if r <= space.r_min() {
                continue;
            }
            let (tensor, lapse) = fd_static_residual(&space, r, FD_STEP).unwrap();
            let scale = 1.0 + r * r;
            assert!(
                tensor < 1e-6 * scale && lapse < 1e-6 * scale,
                "eps {} n {} r {r}: fd tensor {tensor} lapse {lapse}",
                space.epsilon(),
                space.dim()
            );
        }
    }
}

#[test]
fn slice_mean_curvature_matches_area_variation() {
    for space in all_spaces() {
        let area = |r: f64| space.slice_area(r).unwrap();
        let g_rr = |r: f64| space.static_potential(r).unwrap().powi(-2);
        for r in [1.1, 2.3, 5.5] {
            let closed = space.mean_curvature(r).unwrap();
            let fd = fd_mean_curvature(&area, &g_rr, r, FD_STEP);
            assert!(
                (closed - fd).abs() < 1e-7 * (1.0 + closed.abs()),
                "eps {} n {}: {closed} vs {fd}",
                space.epsilon(),
                space.dim()
            );
        }
    }
}

#[test]
fn annulus_volume_closed_forms() {
    // With a linear potential the volume element is r^(n-2).
    let flat = ReferenceSpace::<f64>::new(0, 4, None).unwrap();
    let vol = flat.annulus_volume(1.0, 3.0).unwrap();
    assert!((vol - (27.0 - 1.0) / 3.0).abs() < 1e-12);

    // Spherical sign, three dimensions:
    //   int r^2 / sqrt(1 + r^2) dr = (r/2) sqrt(1+r^2) - (1/2) asinh r.
    let sphere = ReferenceSpace::<f64>::new(1, 3, None).unwrap();
    let anti = |r: f64| 0.5 * r * (1.0 + r * r).sqrt() - 0.5 * r.asinh();
    let vol = sphere.annulus_volume(1.0, 2.0).unwrap();
    let oracle = sphere.cross_section_volume() * (anti(2.0) - anti(1.0));
    assert!((vol - oracle).abs() < 1e-10 * oracle, "{vol} vs {oracle}");
}

#[test]
fn spherical_cross_section_is_pinned() {
    assert!((ReferenceSpace::<f64>::new(1, 3, None).unwrap().cross_section_volume()
        - 4.0 * std::f64::consts::PI)
        .abs()
        < 1e-14);
    assert!((ReferenceSpace::<f64>::new(1, 4, None).unwrap().cross_section_volume()
        - 2.0 * std::f64::consts::PI.powi(2))
    .abs()
        < 1e-13);
    assert!(matches!(
        ReferenceSpace::<f64>::new(1, 3, Some(7.0)),
        Err(Error::Constraint(_))
    ));
    assert!(matches!(
        ReferenceSpace::<f64>::new(-1, 3, None),
        Err(Error::Constraint(_))
    ));
}

#[test]
fn hyperbolic_space_keeps_its_potential_real() {
    let space = ReferenceSpace::<f64>::new(-1, 3, Some(2.0)).unwrap();
    assert!(space.static_potential(1.0 + 1e-5).is_ok());
    assert!(space.static_potential(0.5).is_err());
}
