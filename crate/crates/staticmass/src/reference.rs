//! The static reference annulus: a one-parameter family of warped-product
//! spaces indexed by the cross-section curvature sign.
//!
//! The metric is V^(-2) dr^2 + r^2 h, where V(r) = sqrt(r^2 + eps) and h is a
//! compact (n-1)-dimensional Einstein space with Ric(h) = eps (n-2) h. The
//! cross-section is never meshed: it enters only through its total volume and
//! that Einstein constant, so every computation in the crate stays radial.

use crate::error::{Error, Result};
use crate::num::{of_usize, Real};

/// Curvature eigenvalues of the ambient metric at one radius.
///
/// `ricci_radial` and `ricci_tangential` are eigenvalues with respect to the
/// metric (orthonormal-frame components); the scalar curvature is their
/// weighted sum `ricci_radial + (n-1) ricci_tangential`.
#[derive(Debug, Clone, Copy)]
pub struct CurvatureSample<S> {
    pub r: S,
    pub ricci_radial: S,
    pub ricci_tangential: S,
    pub scalar: S,
}

/// Residuals of the static vacuum system at one radius: the largest
/// eigenvalue deviation of (Lap V) b - Hess V + V Ric(b) from zero, and the
/// lapse equation deviation |Lap V - n V|.
#[derive(Debug, Clone, Copy)]
pub struct StaticResidual<S> {
    pub tensor: S,
    pub lapse: S,
}

/// Volume of the unit round (n-1)-sphere, 2 pi^(n/2) / Gamma(n/2).
pub fn round_sphere_volume<S: Real>(dim: u32) -> S {
    // Gamma at integer or half-integer arguments by the recurrence.
    let mut x = S::of(dim as f64) * S::of(0.5);
    let gamma = if dim % 2 == 0 {
        x = x - S::one();
        let mut g = S::one();
        while x > S::of(0.5) {
            g = g * x;
            x = x - S::one();
        }
        g
    } else {
        x = x - S::one();
        let mut g = S::PI().sqrt();
        while x > S::zero() {
            g = g * x;
            x = x - S::one();
        }
        g
    };
    let two = S::of(2.0);
    two * S::PI().powf(S::of(dim as f64) * S::of(0.5)) / gamma
}

/// Static reference annulus of dimension `dim` with curvature sign `epsilon`.
#[derive(Debug, Clone)]
pub struct ReferenceSpace<S> {
    epsilon: i32,
    dim: u32,
    cross_section_volume: S,
    r_min: S,
}

impl<S: Real> ReferenceSpace<S> {
    /// Builds a reference space.
    ///
    /// For `epsilon = +1` the cross-section volume is the round-sphere value
    /// and may be omitted (a supplied value must agree with it). For
    /// `epsilon = 0` it defaults to 1 (unit flat cross-section). For
    /// `epsilon = -1` the cross-section is a choice of compact hyperbolic
    /// quotient, so its volume must be supplied.
    pub fn new(epsilon: i32, dim: u32, cross_section_volume: Option<S>) -> Result<Self> {
        if !(-1..=1).contains(&epsilon) {
            return Err(Error::Domain(format!(
                "curvature sign must be -1, 0 or +1, got {epsilon}"
            )));
        }
        if dim < 3 {
            return Err(Error::Domain(format!("dimension must be at least 3, got {dim}")));
        }
        let volume = match (epsilon, cross_section_volume) {
            (1, None) => round_sphere_volume(dim),
            (1, Some(v)) => {
                let round: S = round_sphere_volume(dim);
                if ((v - round) / round).abs() > S::of(1e-9) {
                    return Err(Error::Constraint(format!(
                        "spherical cross-section volume must be the round value {round}, got {v}"
                    )));
                }
                round
            }
            (0, None) => S::one(),
            (-1, None) => {
                return Err(Error::Constraint(
                    "hyperbolic cross-sections need an explicit volume (e.g. 4 pi for genus two)"
                        .into(),
                ))
            }
            (_, Some(v)) => {
                if v <= S::zero() {
                    return Err(Error::Domain(format!(
                        "cross-section volume must be positive, got {v}"
                    )));
                }
                v
            }
            (_, None) => unreachable!("curvature sign was range-checked above"),
        };
        let r_min = if epsilon == -1 {
            S::one() + S::of(1e-6)
        } else {
            S::of(1e-6)
        };
        Ok(Self {
            epsilon,
            dim,
            cross_section_volume: volume,
            r_min,
        })
    }

    /// Overrides the inner evaluation guard radius.
    pub fn with_r_min(mut self, r_min: S) -> Result<Self> {
        let floor = if self.epsilon == -1 { S::one() } else { S::zero() };
        if r_min <= floor {
            return Err(Error::Domain(format!(
                "guard radius must exceed {floor} for this curvature sign, got {r_min}"
            )));
        }
        self.r_min = r_min;
        Ok(self)
    }

    pub fn epsilon(&self) -> i32 {
        self.epsilon
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn cross_section_volume(&self) -> S {
        self.cross_section_volume
    }

    pub fn r_min(&self) -> S {
        self.r_min
    }

    /// Einstein constant of the cross-section: Ric(h) = eps (n-2) h.
    pub fn fiber_einstein_constant(&self) -> S {
        self.eps_s() * (of_usize::<S>(self.dim as usize - 2))
    }

    /// The cosmological constant forced by the lapse equation, -n.
    pub fn cosmological_constant(&self) -> S {
        -of_usize::<S>(self.dim as usize)
    }

    fn eps_s(&self) -> S {
        S::of(self.epsilon as f64)
    }

    fn n1(&self) -> S {
        of_usize(self.dim as usize - 1)
    }

    pub(crate) fn check_radius(&self, r: S) -> Result<()> {
        if !r.is_finite() || r < self.r_min {
            return Err(Error::Domain(format!(
                "radius {r} outside the admissible range (> {})",
                self.r_min
            )));
        }
        Ok(())
    }

    /// Static potential V(r) = sqrt(r^2 + eps).
    pub fn static_potential(&self, r: S) -> Result<S> {
        self.check_radius(r)?;
        let v_sq = r * r + self.eps_s();
        if v_sq <= S::zero() {
            return Err(Error::Domain(format!("potential vanishes at r = {r}")));
        }
        Ok(v_sq.sqrt())
    }

    /// Coordinate derivative V'(r) = r / V(r).
    pub fn potential_deriv(&self, r: S) -> Result<S> {
        Ok(r / self.static_potential(r)?)
    }

    /// Second coordinate derivative V''(r) = eps / V(r)^3.
    pub fn potential_second_deriv(&self, r: S) -> Result<S> {
        let v = self.static_potential(r)?;
        Ok(self.eps_s() / (v * v * v))
    }

    /// Ricci eigenvalues and scalar curvature at radius `r`, from the
    /// warped-product curvature of V^(-2) dr^2 + r^2 h.
    pub fn curvature(&self, r: S) -> Result<CurvatureSample<S>> {
        let v = self.static_potential(r)?;
        let vp = self.potential_deriv(r)?;
        let v_sq = v * v;
        Ok(ricci_from_effective_potential_sq(
            self.dim,
            self.eps_s(),
            r,
            v_sq,
            S::of(2.0) * v * vp,
        ))
    }

    /// Residuals of the static vacuum equations at radius `r`, evaluated from
    /// the closed-form potential derivatives. Both vanish identically for
    /// this family; the returned values are the floating-point defect.
    pub fn static_equation_residual(&self, r: S) -> Result<StaticResidual<S>> {
        let v = self.static_potential(r)?;
        let vp = self.potential_deriv(r)?;
        let vpp = self.potential_second_deriv(r)?;
        let curv = self.curvature(r)?;

        // Hessian eigenvalues of a radial function on A dr^2 + B h with
        // A = V^(-2), B = r^2: radial (u'' - A'/(2A) u')/A, tangential
        // u' B'/(2AB).
        let v_sq = v * v;
        let a_log_half = -r / v_sq; // A'/(2A)
        let hess_rad = (vpp - a_log_half * vp) * v_sq;
        let hess_tan = vp * v_sq / r;
        let lap = hess_rad + self.n1() * hess_tan;

        let res_rad = lap - hess_rad + v * curv.ricci_radial;
        let res_tan = lap - hess_tan + v * curv.ricci_tangential;
        let lapse = lap + self.cosmological_constant() * v;
        Ok(StaticResidual {
            tensor: res_rad.abs().max(res_tan.abs()),
            lapse: lapse.abs(),
        })
    }

    /// Mean curvature of the radius-r slice in the reference space, with
    /// respect to the outward normal: (n-1) V / r.
    pub fn mean_curvature(&self, r: S) -> Result<S> {
        let v = self.static_potential(r)?;
        Ok(self.n1() * v / r)
    }

    /// Area of the radius-r slice: r^(n-1) times the cross-section volume.
    pub fn slice_area(&self, r: S) -> Result<S> {
        self.check_radius(r)?;
        Ok(self.cross_section_volume * r.powi(self.dim as i32 - 1))
    }

    /// Volume of the annulus [r_lo, r_hi]: the cross-section volume times
    /// the integral of r^(n-1) / V.
    pub fn annulus_volume(&self, r_lo: S, r_hi: S) -> Result<S> {
        self.check_radius(r_lo)?;
        self.check_radius(r_hi)?;
        if !(r_hi >= r_lo) {
            return Err(Error::Domain(format!(
                "annulus out of order: {r_lo} > {r_hi}"
            )));
        }
        let n1 = self.dim as i32 - 1;
        let eps = self.eps_s();
        let f = |r: S| r.powi(n1) / (r * r + eps).sqrt();
        Ok(self.cross_section_volume
            * crate::quad::integrate(f, r_lo, r_hi, crate::quad::Tolerance::default())?)
    }
}

/// Ricci eigenvalues of W(r)^(-2) dr^2 + r^2 h from the warped-product
/// formulas, parametrised by W^2 and its radial derivative so that callers
/// never divide by W (which vanishes at horizons). Shared by the ambient
/// metric (W = V) and induced graph metrics (W^2 = V^2 / (1 + s^2)).
pub(crate) fn ricci_from_effective_potential_sq<S: Real>(
    dim: u32,
    eps: S,
    r: S,
    w_sq: S,
    w_sq_deriv: S,
) -> CurvatureSample<S> {
    let n1: S = of_usize(dim as usize - 1);
    let n2: S = of_usize(dim as usize - 2);
    // With proper-distance parametrisation, psi = r has psi' = W and
    // psi'' = W W' = (W^2)' / 2.
    let wwp = S::of(0.5) * w_sq_deriv;
    let ricci_radial = -n1 * wwp / r;
    let ricci_tangential = (-r * wwp - n2 * w_sq + eps * n2) / (r * r);
    CurvatureSample {
        r,
        ricci_radial,
        ricci_tangential,
        scalar: ricci_radial + n1 * ricci_tangential,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space(eps: i32, n: u32) -> ReferenceSpace<f64> {
        let vol = if eps == -1 { Some(4.0 * std::f64::consts::PI) } else { None };
        ReferenceSpace::new(eps, n, vol).unwrap()
    }

    #[test]
    fn round_sphere_volumes() {
        assert!((round_sphere_volume::<f64>(3) - 4.0 * std::f64::consts::PI).abs() < 1e-12);
        assert!((round_sphere_volume::<f64>(4) - 2.0 * std::f64::consts::PI.powi(2)).abs() < 1e-12);
        assert!(
            (round_sphere_volume::<f64>(5) - 8.0 * std::f64::consts::PI.powi(2) / 3.0).abs() < 1e-12
        );
    }

    #[test]
    fn potential_values() {
        assert!((space(1, 3).static_potential(1.0).unwrap() - 2f64.sqrt()).abs() < 1e-15);
        assert!((space(0, 3).static_potential(5.0).unwrap() - 5.0).abs() < 1e-15);
        assert!((space(-1, 3).static_potential(2.0).unwrap() - 3f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn hyperbolic_potential_rejects_degenerate_radius() {
        // V vanishes at r = 1 when eps = -1; the guard radius excludes it.
        assert!(matches!(
            space(-1, 3).static_potential(1.0),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn hyperbolic_volume_required() {
        assert!(matches!(
            ReferenceSpace::<f64>::new(-1, 3, None),
            Err(Error::Constraint(_))
        ));
    }

    #[test]
    fn spherical_volume_must_be_round() {
        assert!(matches!(
            ReferenceSpace::<f64>::new(1, 3, Some(5.0)),
            Err(Error::Constraint(_))
        ));
        assert!(ReferenceSpace::<f64>::new(1, 3, Some(4.0 * std::f64::consts::PI)).is_ok());
    }

    #[test]
    fn space_form_curvature() {
        for eps in [-1, 0, 1] {
            for n in [3u32, 4, 5] {
                let sp = space(eps, n);
                let c = sp.curvature(1.7).unwrap();
                let expect = -((n * (n - 1)) as f64);
                assert!((c.scalar - expect).abs() < 1e-12, "eps={eps} n={n}");
                assert!((c.ricci_radial + (n as f64 - 1.0)).abs() < 1e-12);
                assert!((c.ricci_tangential + (n as f64 - 1.0)).abs() < 1e-12);
                // Consistency of the eigenvalue decomposition.
                let recomposed = c.ricci_radial + (n as f64 - 1.0) * c.ricci_tangential;
                assert!((c.scalar - recomposed).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn static_residuals_vanish() {
        for eps in [-1, 0, 1] {
            let sp = space(eps, 4);
            let res = sp.static_equation_residual(2.3).unwrap();
            assert!(res.tensor < 1e-12);
            assert!(res.lapse < 1e-12);
        }
    }

    #[test]
    fn mean_curvature_examples() {
        assert!((space(1, 3).mean_curvature(1.0).unwrap() - 2.0 * 2f64.sqrt()).abs() < 1e-14);
        assert!((space(0, 3).mean_curvature(5.0).unwrap() - 2.0).abs() < 1e-14);
        assert!((space(-1, 3).mean_curvature(2.0).unwrap() - 3f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn slice_area_scaling() {
        let sp = space(0, 4);
        assert!((sp.slice_area(2.0).unwrap() - 8.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_small_radius() {
        assert!(matches!(space(1, 3).static_potential(0.0), Err(Error::Domain(_))));
        assert!(matches!(space(1, 3).slice_area(-1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(ReferenceSpace::<f64>::new(2, 3, None), Err(Error::Domain(_))));
        assert!(matches!(ReferenceSpace::<f64>::new(1, 2, None), Err(Error::Domain(_))));
        assert!(matches!(
            ReferenceSpace::<f64>::new(0, 3, Some(-2.0)),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn f32_potential() {
        let sp = ReferenceSpace::<f32>::new(1, 3, None).unwrap();
        let v = sp.static_potential(1.0f32).unwrap();
        assert!((v - 2f32.sqrt()).abs() < 1e-6);
    }
}
