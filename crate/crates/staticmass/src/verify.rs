//! Independent finite-difference verification of the closed-form geometry.
//!
//! Everything here treats metric data as black-box functions of the radius
//! and differentiates numerically, so it shares no derivative formulas with
//! the implementations it cross-checks. Used by the check runner and the
//! test suites; never by the geometry code itself.

use crate::error::Result;
use crate::graph::GraphManifold;
use crate::num::{of_usize, Real};
use crate::reference::ReferenceSpace;

/// Central first difference.
pub fn d1<S: Real, F: Fn(S) -> S>(f: F, x: S, h: S) -> S {
    (f(x + h) - f(x - h)) / (S::of(2.0) * h)
}

/// Central second difference.
pub fn d2<S: Real, F: Fn(S) -> S>(f: F, x: S, h: S) -> S {
    (f(x + h) - S::of(2.0) * f(x) + f(x - h)) / (h * h)
}

/// Ricci eigenvalues of A(r) dr^2 + B(r) h assembled from Christoffel
/// symbols, with every radial derivative taken by finite differences.
/// `kappa` is the Einstein constant of the fiber, Ric(h) = kappa h.
/// Returns (radial eigenvalue, tangential eigenvalue, scalar curvature).
pub fn fd_ricci<S: Real>(
    a: &dyn Fn(S) -> S,
    b: &dyn Fn(S) -> S,
    kappa: S,
    dim: u32,
    r: S,
    h: S,
) -> (S, S, S) {
    let n1: S = of_usize(dim as usize - 1);
    let n3: S = of_usize::<S>(dim as usize) - S::of(3.0);
    let av = a(r);
    let bv = b(r);
    let ap = d1(a, r, h);
    let bp = d1(b, r, h);
    let bpp = d2(b, r, h);

    let two = S::of(2.0);
    let four = S::of(4.0);
    let r_rr = -n1 * (bpp / (two * bv) - bp * bp / (four * bv * bv) - ap * bp / (four * av * bv));
    let r_tan_coeff = kappa - bpp / (two * av) + ap * bp / (four * av * av) - n3 * bp * bp / (four * av * bv);

    let rad = r_rr / av;
    let tan = r_tan_coeff / bv;
    (rad, tan, rad + n1 * tan)
}

/// Static-equation residuals recomputed with finite differences: the
/// potential is sampled as a black box, the Ricci term comes from
/// [`fd_ricci`] on the metric components.
pub fn fd_static_residual<S: Real>(space: &ReferenceSpace<S>, r: S, h: S) -> Result<(S, S)> {
    let dim = space.dim();
    let n1: S = of_usize(dim as usize - 1);
    let v_of = |x: S| space.static_potential(x).expect("radius interior to the domain");
    let a_of = |x: S| {
        let v = v_of(x);
        (v * v).recip()
    };
    let b_of = |x: S| x * x;

    let v = v_of(r);
    let vp = d1(&v_of, r, h);
    let vpp = d2(&v_of, r, h);
    let av = a_of(r);
    let ap = d1(&a_of, r, h);
    let bv = b_of(r);
    let bp = d1(&b_of, r, h);

    let two = S::of(2.0);
    let hess_rad = (vpp - ap / (two * av) * vp) / av;
    let hess_tan = vp * bp / (two * av * bv);
    let lap = hess_rad + n1 * hess_tan;

    let (ric_rad, ric_tan, _) = fd_ricci(&a_of, &b_of, space.fiber_einstein_constant(), dim, r, h);
    let res_rad = lap - hess_rad + v * ric_rad;
    let res_tan = lap - hess_tan + v * ric_tan;
    let lapse = lap + space.cosmological_constant() * v;
    Ok((res_rad.abs().max(res_tan.abs()), lapse.abs()))
}

/// Mean curvature of the radius-r slice from the area-variation identity
/// H = (dA/dr) / (A sqrt(g_rr)), with the area derivative taken by finite
/// differences. `g_rr` is the radial metric component of the space the slice
/// sits in (ambient reference: V^(-2)).
pub fn fd_mean_curvature<S: Real>(
    area: &dyn Fn(S) -> S,
    g_rr: &dyn Fn(S) -> S,
    r: S,
    h: S,
) -> S {
    let da = d1(area, r, h);
    da / (area(r) * g_rr(r).sqrt())
}

/// Mean curvature of the level set through radius `r`, recomputed from the
/// graph embedding: the height function is differenced to rebuild the
/// induced radial metric V^2 f'^2 + V^(-2), then the slice curvature is
/// (n-1) / (r sqrt(g_rr)). Exercises the recovered height, not the slope.
pub fn fd_graph_mean_curvature<S: Real>(graph: &GraphManifold<S>, r: S, h: S) -> Result<S> {
    let space = graph.space();
    let fp = d1(|x| graph.height(x).expect("radius interior to the annulus"), r, h);
    let v = space.static_potential(r)?;
    let g_rr = v * v * fp * fp + (v * v).recip();
    let n1: S = of_usize(space.dim() as usize - 1);
    Ok(n1 / (r * g_rr.sqrt()))
}
