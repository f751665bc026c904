//! Radial graphs over the reference annulus, parametrised by their slope
//! profile s(r) = V |Df|.
//!
//! The height function is recovered by integrating f' = s / V^2, so a graph
//! is fully described by (reference space, profile, radial annulus). Slope
//! profiles with an inverse-square-root blow-up at the inner radius describe
//! graphs whose inner boundary is a minimal surface (horizon); the
//! substitution u = sqrt(r - r_inner) used throughout keeps those integrals
//! regular.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::num::{of_usize, Real};
use crate::quad::{integrate, integrate_inner_singular_offset, Tolerance};
use crate::reference::{ricci_from_effective_potential_sq, ReferenceSpace};
use crate::roots::{bisect, bisect_expanding};

/// Number of cells in the tabulated height grid.
pub const HEIGHT_GRID: usize = 2048;

/// Tabulated slope samples with linear interpolation, the file-backed form
/// of custom profiles.
#[derive(Debug, Clone)]
pub struct SlopeTable<S> {
    radii: Vec<S>,
    slopes: Vec<S>,
}

impl<S: Real> SlopeTable<S> {
    pub fn new(radii: Vec<S>, slopes: Vec<S>) -> Result<Self> {
        if radii.len() != slopes.len() || radii.len() < 2 {
            return Err(Error::Domain(format!(
                "slope table needs at least two matched samples, got {} radii and {} slopes",
                radii.len(),
                slopes.len()
            )));
        }
        for pair in radii.windows(2) {
            if !(pair[0] < pair[1]) {
                return Err(Error::Domain(format!(
                    "table radii must increase strictly, got {} then {}",
                    pair[0], pair[1]
                )));
            }
        }
        for &s in &slopes {
            if !s.is_finite() || s < S::zero() {
                return Err(Error::Domain(format!(
                    "table slopes must be finite and non-negative, got {s}"
                )));
            }
        }
        Ok(Self { radii, slopes })
    }

    /// Parses a two-column whitespace-separated text table (r, s). Blank
    /// lines and lines starting with '#' are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut radii = Vec::new();
        let mut slopes = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut cols = line.split_whitespace();
            let (Some(a), Some(b)) = (cols.next(), cols.next()) else {
                return Err(Error::Domain(format!("line {}: expected two columns", idx + 1)));
            };
            if cols.next().is_some() {
                return Err(Error::Domain(format!("line {}: expected two columns", idx + 1)));
            }
            let r: f64 = a
                .parse()
                .map_err(|_| Error::Domain(format!("line {}: bad radius {a:?}", idx + 1)))?;
            let s: f64 = b
                .parse()
                .map_err(|_| Error::Domain(format!("line {}: bad slope {b:?}", idx + 1)))?;
            radii.push(S::of(r));
            slopes.push(S::of(s));
        }
        Self::new(radii, slopes)
    }

    fn covers(&self, lo: S, hi: S) -> bool {
        *self.radii.first().unwrap() <= lo && *self.radii.last().unwrap() >= hi
    }

    fn eval(&self, r: S) -> S {
        let n = self.radii.len();
        if r <= self.radii[0] {
            return self.slopes[0];
        }
        if r >= self.radii[n - 1] {
            return self.slopes[n - 1];
        }
        let mut lo = 0usize;
        let mut hi = n - 1;
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if self.radii[mid] <= r {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let t = (r - self.radii[lo]) / (self.radii[hi] - self.radii[lo]);
        self.slopes[lo] + t * (self.slopes[hi] - self.slopes[lo])
    }

    fn segment_slope(&self, r: S) -> S {
        let n = self.radii.len();
        let mut lo = 0usize;
        let mut hi = n - 1;
        if r <= self.radii[0] || r >= self.radii[n - 1] {
            return S::zero();
        }
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if self.radii[mid] <= r {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        (self.slopes[hi] - self.slopes[lo]) / (self.radii[hi] - self.radii[lo])
    }
}

/// Programmatic slope profile.
#[derive(Clone)]
pub struct AnalyticProfile<S> {
    pub name: String,
    pub f: Arc<dyn Fn(S) -> S + Send + Sync>,
}

impl<S> std::fmt::Debug for AnalyticProfile<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "AnalyticProfile({})", self.name)
    }
}

/// Slope profile s(r) = V |Df| of a radial graph.
#[derive(Debug, Clone)]
pub enum SlopeProfile<S> {
    /// s = 0: the graph is the horizontal slice t = offset.
    Constant { offset: S },
    /// s^2 = 2 mu r^(2-n) / (V^2 - 2 mu r^(2-n)); minimal inner boundary at
    /// the horizon radius.
    KottlerSchwarzschild { mu: S },
    /// Piecewise-linear tabulated slopes (the file-backed custom form).
    Table(SlopeTable<S>),
    /// Closure-backed custom profile.
    Analytic(AnalyticProfile<S>),
}

impl<S: Real> SlopeProfile<S> {
    pub fn analytic(name: impl Into<String>, f: impl Fn(S) -> S + Send + Sync + 'static) -> Self {
        SlopeProfile::Analytic(AnalyticProfile {
            name: name.into(),
            f: Arc::new(f),
        })
    }
}

/// Kottler-Schwarzschild helper: 2 mu r^(2-n).
fn ks_p<S: Real>(mu: S, dim: u32, r: S) -> S {
    S::of(2.0) * mu * r.powi(2 - dim as i32)
}

/// V_mu^2 evaluated as a forward difference from the horizon:
/// V_mu^2(r0 + d) = d (2 r0 + d) - 2 mu r0^(2-n) ((1 + d/r0)^(2-n) - 1).
/// Both terms are positive for d > 0, so the value stays accurate (and
/// positive) arbitrarily close to the horizon, where the naive difference
/// V^2 - P cancels catastrophically.
fn ks_v_mu_sq_from_horizon<S: Real>(mu: S, dim: u32, r0: S, d: S) -> S {
    let two = S::of(2.0);
    let alpha = S::of(2.0 - dim as f64);
    let quadratic = d * (two * r0 + d);
    let pow_term = two * mu * r0.powi(2 - dim as i32) * (alpha * (d / r0).ln_1p()).exp_m1();
    quadratic - pow_term
}

/// Data of one level set of the graph.
#[derive(Debug, Clone, Copy)]
pub struct LevelSetData<S> {
    pub height: S,
    pub radius: S,
    pub area: S,
    pub slope: S,
    /// Mean curvature of the same radius slice in the reference space.
    pub ambient_mean_curvature: S,
    /// Mean curvature of the level set inside the graph.
    pub graph_mean_curvature: S,
}

/// A radial graph over an annulus of the reference space.
#[derive(Debug, Clone)]
pub struct GraphManifold<S> {
    space: ReferenceSpace<S>,
    profile: SlopeProfile<S>,
    r_inner: S,
    r_outer: S,
    u_step: S,
    radii: Vec<S>,
    heights: Vec<S>,
    inner_minimal: bool,
    satisfies_definition: bool,
    scalar_bound_ok: bool,
}

fn cell_tol<S: Real>() -> Tolerance<S> {
    let eps = S::epsilon();
    Tolerance::new(S::of(1e-13).max(eps * S::of(4.0)), S::of(1e-10).max(eps * S::of(16.0)))
}

impl<S: Real> GraphManifold<S> {
    /// The constant graph t = offset over [r_inner, r_outer].
    pub fn constant(space: &ReferenceSpace<S>, r_inner: S, r_outer: S, offset: S) -> Result<Self> {
        Self::from_profile(space, SlopeProfile::Constant { offset }, r_inner, r_outer)
    }

    /// The Kottler-Schwarzschild graph of parameter `mu`, from its horizon
    /// out to `r_outer`.
    pub fn kottler_schwarzschild(space: &ReferenceSpace<S>, mu: S, r_outer: S) -> Result<Self> {
        if !(mu > S::zero()) {
            return Err(Error::Domain(format!("family parameter must be positive, got {mu}")));
        }
        let r0 = horizon_radius(space, mu)?;
        if r0 <= space.r_min() {
            return Err(Error::Constraint(format!(
                "horizon radius {r0} does not clear the guard radius {}",
                space.r_min()
            )));
        }
        if !(r_outer > r0) {
            return Err(Error::Constraint(format!(
                "outer radius {r_outer} must exceed the horizon radius {r0}"
            )));
        }
        Self::from_profile(space, SlopeProfile::KottlerSchwarzschild { mu }, r0, r_outer)
    }

    /// A graph with an arbitrary slope profile on [r_inner, r_outer].
    pub fn from_profile(
        space: &ReferenceSpace<S>,
        profile: SlopeProfile<S>,
        r_inner: S,
        r_outer: S,
    ) -> Result<Self> {
        space.check_radius(r_inner)?;
        space.check_radius(r_outer)?;
        if !(r_outer > r_inner) {
            return Err(Error::Domain(format!(
                "outer radius {r_outer} must exceed inner radius {r_inner}"
            )));
        }
        if let SlopeProfile::Table(table) = &profile {
            if !table.covers(r_inner, r_outer) {
                return Err(Error::Domain(
                    "slope table does not cover the requested annulus".into(),
                ));
            }
        }

        let mut graph = GraphManifold {
            space: space.clone(),
            profile,
            r_inner,
            r_outer,
            u_step: S::zero(),
            radii: Vec::new(),
            heights: Vec::new(),
            inner_minimal: false,
            satisfies_definition: false,
            scalar_bound_ok: false,
        };
        graph.validate_slopes()?;
        graph.build_height_table()?;
        graph.inner_minimal = graph.detect_inner_minimal();
        // Mean convexity of the level sets and monotone level-set areas are
        // automatic for radial graphs (H = H_ambient / sqrt(1+s^2) > 0 and
        // the area is a power of the radius); certify anyway.
        let mean_convex_and_monotone = graph.heights.windows(2).all(|w| w[1] >= w[0]);
        graph.satisfies_definition = graph.inner_minimal && mean_convex_and_monotone;
        graph.scalar_bound_ok = graph.sample_scalar_bound();
        Ok(graph)
    }

    fn validate_slopes(&self) -> Result<()> {
        if matches!(self.profile, SlopeProfile::Constant { .. } | SlopeProfile::KottlerSchwarzschild { .. }) {
            return Ok(());
        }
        // Sample the custom profile across the annulus; reject negatives.
        let samples = 512usize;
        let span = self.r_outer - self.r_inner;
        for k in 1..=samples {
            let r = self.r_inner + span * of_usize::<S>(k) / of_usize::<S>(samples);
            let s = self.raw_slope(r);
            if !s.is_finite() || s < S::zero() {
                return Err(Error::Domain(format!(
                    "slope profile must be finite and non-negative on the annulus, got {s} at r = {r}"
                )));
            }
        }
        Ok(())
    }

    /// Profile value without domain checks; used internally on [r_in, r_out].
    fn raw_slope(&self, r: S) -> S {
        match &self.profile {
            SlopeProfile::Constant { .. } => S::zero(),
            SlopeProfile::KottlerSchwarzschild { .. } => self.raw_slope_sq(r).max(S::zero()).sqrt(),
            SlopeProfile::Table(t) => t.eval(r),
            SlopeProfile::Analytic(a) => (a.f)(r),
        }
    }

    fn raw_slope_sq(&self, r: S) -> S {
        match &self.profile {
            SlopeProfile::Constant { .. } => S::zero(),
            SlopeProfile::KottlerSchwarzschild { mu } => {
                let d = r - self.r_inner;
                let v_mu_sq = ks_v_mu_sq_from_horizon(*mu, self.space.dim(), self.r_inner, d);
                ks_p(*mu, self.space.dim(), r) / v_mu_sq
            }
            SlopeProfile::Table(t) => {
                let s = t.eval(r);
                s * s
            }
            SlopeProfile::Analytic(a) => {
                let s = (a.f)(r);
                s * s
            }
        }
    }

    /// d(s^2)/dr, closed form for the built-in families and a finite
    /// difference (with a stencil clipped to the annulus) for custom ones.
    fn slope_sq_deriv(&self, r: S) -> Result<S> {
        match &self.profile {
            SlopeProfile::Constant { .. } => Ok(S::zero()),
            SlopeProfile::KottlerSchwarzschild { mu } => {
                let dim = self.space.dim();
                let p = ks_p(*mu, dim, r);
                let p_prime = S::of(2.0 - dim as f64) * p / r;
                let d = r - self.r_inner;
                if !(d > S::zero()) {
                    return Err(Error::Singular(format!(
                        "slope derivative undefined at the horizon r = {r}"
                    )));
                }
                let v_mu_sq = ks_v_mu_sq_from_horizon(*mu, dim, self.r_inner, d);
                let v_sq = self.space.static_potential(r)?.powi(2);
                // (s^2)' = (P' V^2 - 2 r P) / V_mu^4.
                Ok((p_prime * v_sq - S::of(2.0) * r * p) / (v_mu_sq * v_mu_sq))
            }
            SlopeProfile::Table(t) => {
                let s = t.eval(r);
                Ok(S::of(2.0) * s * t.segment_slope(r))
            }
            SlopeProfile::Analytic(a) => {
                let scale = S::of(1e-6) * (S::one() + r.abs());
                let room = (r - self.r_inner).min(self.r_outer - r);
                let h = scale.min(room * S::of(0.5));
                if !(h > S::zero()) {
                    return Err(Error::Domain(format!(
                        "cannot take a slope derivative at the annulus boundary r = {r}"
                    )));
                }
                let sp = (a.f)(r + h);
                let sm = (a.f)(r - h);
                let s = (a.f)(r);
                let ds = (sp - sm) / (S::of(2.0) * h);
                let _ = s;
                Ok(S::of(2.0) * (a.f)(r) * ds)
            }
        }
    }

    fn check_annulus(&self, r: S) -> Result<()> {
        let slack = S::of(1e-12) * (S::one() + self.r_outer.abs());
        if !(r >= self.r_inner - slack && r <= self.r_outer + slack) {
            return Err(Error::Domain(format!(
                "radius {r} outside the annulus [{}, {}]",
                self.r_inner, self.r_outer
            )));
        }
        Ok(())
    }

    /// Slope s(r) on the annulus. Singular at a minimal inner boundary.
    pub fn slope(&self, r: S) -> Result<S> {
        self.check_annulus(r)?;
        let r = r.max(self.r_inner).min(self.r_outer);
        if matches!(self.profile, SlopeProfile::KottlerSchwarzschild { .. }) && !(r > self.r_inner) {
            return Err(Error::Singular(format!(
                "slope blows up at the minimal inner boundary r = {r}"
            )));
        }
        Ok(self.raw_slope(r))
    }

    /// Squared slope s(r)^2.
    pub fn slope_sq(&self, r: S) -> Result<S> {
        self.check_annulus(r)?;
        let r = r.max(self.r_inner).min(self.r_outer);
        if matches!(self.profile, SlopeProfile::KottlerSchwarzschild { .. }) && !(r > self.r_inner) {
            return Err(Error::Singular(format!(
                "slope blows up at the minimal inner boundary r = {r}"
            )));
        }
        Ok(self.raw_slope_sq(r))
    }

    /// Slope squared as a function of the exact offset d = r - r_inner, the
    /// numerically stable form near a minimal inner boundary.
    fn slope_sq_at_offset(&self, d: S) -> S {
        match &self.profile {
            SlopeProfile::KottlerSchwarzschild { mu } => {
                let dim = self.space.dim();
                let r = self.r_inner + d;
                ks_p(*mu, dim, r) / ks_v_mu_sq_from_horizon(*mu, dim, self.r_inner, d)
            }
            _ => self.raw_slope_sq(self.r_inner + d),
        }
    }

    /// Evaluation floor for offset integrands: zero for the closed-form
    /// family (exact in d), the rounding scale of r_inner otherwise.
    fn offset_floor(&self, width: S) -> S {
        if matches!(self.profile, SlopeProfile::KottlerSchwarzschild { .. })
            || self.r_inner == S::zero()
        {
            return S::zero();
        }
        let noise = S::epsilon() * self.r_inner.abs();
        (noise * width * width)
            .powf(S::of(1.0 / 3.0))
            .min(width * S::of(1e-3))
    }

    fn height_integrand(&self) -> impl Fn(S) -> S + '_ {
        move |d: S| {
            let r = self.r_inner + d;
            let v_sq = r * r + S::of(self.space.epsilon() as f64);
            self.slope_sq_at_offset(d).max(S::zero()).sqrt() / v_sq
        }
    }

    fn build_height_table(&mut self) -> Result<()> {
        let n = HEIGHT_GRID;
        let u_max = (self.r_outer - self.r_inner).sqrt();
        self.u_step = u_max / of_usize::<S>(n);
        self.radii = (0..=n)
            .map(|k| {
                let u = self.u_step * of_usize::<S>(k);
                self.r_inner + u * u
            })
            .collect();
        self.radii[n] = self.r_outer;

        if let SlopeProfile::Constant { offset } = self.profile {
            self.heights = vec![offset; n + 1];
            return Ok(());
        }

        let tol = cell_tol::<S>();
        let heights = {
            let integrand = self.height_integrand();
            let mut heights = Vec::with_capacity(n + 1);
            heights.push(S::zero());
            let first_width = self.radii[1] - self.r_inner;
            let mut acc = integrate_inner_singular_offset(
                &integrand,
                first_width,
                self.offset_floor(first_width),
                tol,
            )
            .map_err(|e| match e {
                Error::Divergence(_) => Error::Divergence(
                    "height integral diverges at the inner boundary; the graph has no finite height"
                        .into(),
                ),
                other => other,
            })?;
            heights.push(acc);
            let two = S::of(2.0);
            let g = |u: S| two * u * integrand(u * u);
            for k in 1..n {
                let u_lo = self.u_step * of_usize::<S>(k);
                let u_hi = if k + 1 == n { u_max } else { self.u_step * of_usize::<S>(k + 1) };
                acc = acc + integrate(&g, u_lo, u_hi, tol)?;
                heights.push(acc);
            }
            heights
        };
        self.heights = heights;
        Ok(())
    }

    fn detect_inner_minimal(&self) -> bool {
        match &self.profile {
            SlopeProfile::Constant { .. } => false,
            SlopeProfile::KottlerSchwarzschild { .. } => true,
            SlopeProfile::Table(_) => false,
            SlopeProfile::Analytic(_) => {
                let span = self.r_outer - self.r_inner;
                let s_near = self.raw_slope(self.r_inner + span * S::of(1e-8));
                let s_nearer = self.raw_slope(self.r_inner + span * S::of(1e-10));
                s_near > S::of(1e3) && s_nearer > s_near
            }
        }
    }

    fn sample_scalar_bound(&self) -> bool {
        let n = self.space.dim();
        let floor = -of_usize::<S>((n * (n - 1)) as usize);
        let slack = S::of(1e-8) * (S::one() + floor.abs());
        let span = self.r_outer - self.r_inner;
        let lo = self.r_inner + span * S::of(1e-3);
        let samples = 256usize;
        for k in 0..=samples {
            let r = lo + (self.r_outer - lo) * of_usize::<S>(k) / of_usize::<S>(samples);
            match self.scalar_curvature(r) {
                Ok(scalar) => {
                    if scalar < floor - slack {
                        return false;
                    }
                }
                Err(_) => return false,
            }
        }
        true
    }

    pub fn space(&self) -> &ReferenceSpace<S> {
        &self.space
    }

    pub fn profile(&self) -> &SlopeProfile<S> {
        &self.profile
    }

    pub fn r_inner(&self) -> S {
        self.r_inner
    }

    pub fn r_outer(&self) -> S {
        self.r_outer
    }

    /// Whether the inner boundary is minimal (slope blows up there).
    pub fn inner_boundary_minimal(&self) -> bool {
        self.inner_minimal
    }

    /// Whether the graph satisfies the standing hypotheses: minimal inner
    /// boundary, finite height range, monotone mean-convex level sets.
    pub fn satisfies_definition(&self) -> bool {
        self.satisfies_definition
    }

    /// Whether R(g) >= -n(n-1) held at every sampled interior radius.
    pub fn scalar_bound_ok(&self) -> bool {
        self.scalar_bound_ok
    }

    pub fn is_constant(&self) -> bool {
        matches!(self.profile, SlopeProfile::Constant { .. })
    }

    pub fn min_height(&self) -> S {
        self.heights[0]
    }

    pub fn max_height(&self) -> S {
        *self.heights.last().unwrap()
    }

    /// Height f(r) of the graph above the reference slice t = 0.
    pub fn height(&self, r: S) -> Result<S> {
        self.check_annulus(r)?;
        let r = r.max(self.r_inner).min(self.r_outer);
        if let SlopeProfile::Constant { offset } = self.profile {
            return Ok(offset);
        }
        let u = (r - self.r_inner).max(S::zero()).sqrt();
        let idx = (u / self.u_step)
            .floor()
            .to_f64()
            .min((HEIGHT_GRID - 1) as f64) as usize;
        let tol = cell_tol::<S>();
        let integrand = self.height_integrand();
        if idx == 0 {
            let width = r - self.r_inner;
            let partial = if width > S::zero() {
                integrate_inner_singular_offset(&integrand, width, self.offset_floor(width), tol)?
            } else {
                S::zero()
            };
            return Ok(self.heights[0] + partial);
        }
        let u_lo = self.u_step * of_usize::<S>(idx);
        if u <= u_lo {
            // Rounding can land u a hair below its own grid anchor.
            return Ok(self.heights[idx]);
        }
        let two = S::of(2.0);
        let g = |x: S| two * x * integrand(x * x);
        Ok(self.heights[idx] + integrate(g, u_lo, u, tol)?)
    }

    /// Inverts the height function by bisection on the radius.
    pub fn radius_at_height(&self, h: S) -> Result<S> {
        if self.is_constant() {
            let offset = self.min_height();
            if (h - offset).abs() <= S::of(1e-12) * (S::one() + offset.abs()) {
                return Ok(self.r_outer);
            }
            return Err(Error::Domain(format!(
                "height {h} not attained by the constant graph at {offset}"
            )));
        }
        let slack = S::of(1e-12) * (S::one() + self.max_height().abs());
        if h < self.min_height() - slack || h > self.max_height() + slack {
            return Err(Error::Domain(format!(
                "height {h} outside the range [{}, {}]",
                self.min_height(),
                self.max_height()
            )));
        }
        let h = h.max(self.min_height()).min(self.max_height());
        if h <= self.min_height() {
            return Ok(self.r_inner);
        }
        if h >= self.max_height() {
            return Ok(self.r_outer);
        }
        // Bracket on the precomputed grid, then bisect within the cell.
        let idx = match self
            .heights
            .binary_search_by(|probe| probe.partial_cmp(&h).expect("heights are ordered"))
        {
            Ok(k) => return Ok(self.radii[k]),
            Err(k) => k,
        };
        let lo = self.radii[idx - 1];
        let hi = self.radii[idx.min(HEIGHT_GRID)];
        let x_tol = S::of(1e-12) * S::one().max(self.r_outer.abs());
        bisect(
            |r| self.height(r).expect("radius stays inside the annulus") - h,
            lo,
            hi,
            x_tol,
        )
    }

    /// Level-set data at height `h`.
    pub fn level_set(&self, h: S) -> Result<LevelSetData<S>> {
        if self.is_constant() {
            let offset = self.min_height();
            if (h - offset).abs() > S::of(1e-12) * (S::one() + offset.abs()) {
                return Err(Error::Domain(format!(
                    "height {h} not attained by the constant graph at {offset}"
                )));
            }
            return self.level_set_at_radius(self.r_outer, offset);
        }
        let slack = S::of(1e-12) * (S::one() + self.max_height().abs());
        if h < self.min_height() - slack || h > self.max_height() + slack {
            return Err(Error::Domain(format!(
                "height {h} outside the range [{}, {}]",
                self.min_height(),
                self.max_height()
            )));
        }
        let h = h.max(self.min_height()).min(self.max_height());
        if h <= self.min_height() && self.inner_minimal {
            return Err(Error::Singular(format!(
                "level set at the minimal inner boundary (h = {h}) has unbounded slope"
            )));
        }
        let r = self.radius_at_height(h)?;
        self.level_set_at_radius(r, h)
    }

    fn level_set_at_radius(&self, r: S, h: S) -> Result<LevelSetData<S>> {
        let slope = self.slope(r)?;
        let ambient = self.space.mean_curvature(r)?;
        Ok(LevelSetData {
            height: h,
            radius: r,
            area: self.space.slice_area(r)?,
            slope,
            ambient_mean_curvature: ambient,
            graph_mean_curvature: ambient / (S::one() + slope * slope).sqrt(),
        })
    }

    /// Area of the level set at height `h`.
    pub fn area_at_height(&self, h: S) -> Result<S> {
        if self.is_constant() {
            return self.space.slice_area(self.r_outer);
        }
        let r = self.radius_at_height(h)?;
        self.space.slice_area(r)
    }

    /// Scalar curvature of the induced graph metric at radius `r`, from the
    /// effective potential W^2 = V^2 / (1 + s^2).
    pub fn scalar_curvature(&self, r: S) -> Result<S> {
        self.check_annulus(r)?;
        let r = r.max(self.r_inner).min(self.r_outer);
        let eps = S::of(self.space.epsilon() as f64);
        let v_sq = r * r + eps;
        let s_sq = self.slope_sq(r)?;
        let s_sq_deriv = self.slope_sq_deriv(r)?;
        let denom = S::one() + s_sq;
        let w_sq = v_sq / denom;
        let w_sq_deriv = (S::of(2.0) * r * denom - v_sq * s_sq_deriv) / (denom * denom);
        Ok(ricci_from_effective_potential_sq(self.space.dim(), eps, r, w_sq, w_sq_deriv).scalar)
    }

    /// Volume of the graph over the radial window [r_lo, r_hi] (graph
    /// measure sqrt(1+s^2) r^(n-1) / V).
    pub fn volume_between(&self, r_lo: S, r_hi: S) -> Result<S> {
        self.check_annulus(r_lo)?;
        self.check_annulus(r_hi)?;
        if !(r_hi >= r_lo) {
            return Err(Error::Domain(format!("volume window out of order: {r_lo} > {r_hi}")));
        }
        let n1 = self.space.dim() as i32 - 1;
        let eps = S::of(self.space.epsilon() as f64);
        let amp = self.space.cross_section_volume();
        let tol = Tolerance::default();
        let value = if r_lo <= self.r_inner && self.may_blow_up_at_inner() {
            let f = |d: S| {
                let r = self.r_inner + d;
                let v = (r * r + eps).sqrt();
                (S::one() + self.slope_sq_at_offset(d)).sqrt() * r.powi(n1) / v
            };
            let width = r_hi - self.r_inner;
            integrate_inner_singular_offset(f, width, self.offset_floor(width), tol)?
        } else {
            let f = |r: S| {
                let v = (r * r + eps).sqrt();
                (S::one() + self.raw_slope_sq(r)).sqrt() * r.powi(n1) / v
            };
            integrate(f, r_lo.max(self.r_inner), r_hi, tol)?
        };
        Ok(amp * value)
    }

    /// Total volume of the graph.
    pub fn volume(&self) -> Result<S> {
        self.volume_between(self.r_inner, self.r_outer)
    }

    /// Volume of the reference annulus window [r_lo, r_hi] (base measure
    /// r^(n-1) / V).
    pub fn base_volume_between(&self, r_lo: S, r_hi: S) -> Result<S> {
        self.check_annulus(r_lo)?;
        self.check_annulus(r_hi)?;
        if !(r_hi >= r_lo) {
            return Err(Error::Domain(format!("volume window out of order: {r_lo} > {r_hi}")));
        }
        let lo = r_lo.max(self.r_inner).min(self.r_outer);
        let hi = r_hi.max(self.r_inner).min(self.r_outer);
        self.space.annulus_volume(lo, hi)
    }

    /// Volume of the full reference annulus.
    pub fn base_volume(&self) -> Result<S> {
        self.base_volume_between(self.r_inner, self.r_outer)
    }

    fn may_blow_up_at_inner(&self) -> bool {
        matches!(
            self.profile,
            SlopeProfile::KottlerSchwarzschild { .. } | SlopeProfile::Analytic(_)
        )
    }
}

/// Horizon radius of the Kottler-Schwarzschild family: the positive root of
/// r^n + eps r^(n-2) = 2 mu (with r > 1 when eps = -1).
pub fn horizon_radius<S: Real>(space: &ReferenceSpace<S>, mu: S) -> Result<S> {
    if !(mu > S::zero()) {
        return Err(Error::Domain(format!("family parameter must be positive, got {mu}")));
    }
    let n = space.dim() as i32;
    let eps = S::of(space.epsilon() as f64);
    let two_mu = S::of(2.0) * mu;
    let phi = |r: S| r.powi(n) + eps * r.powi(n - 2) - two_mu;
    let lo = if space.epsilon() == -1 { S::one() } else { S::of(1e-12) };
    let hi0 = S::one().max(two_mu.powf((S::one()) / S::of(n as f64))) * S::of(2.0);
    let guess = two_mu.powf(S::one() / S::of(n as f64)).max(lo + S::of(1e-9));
    let x_tol = S::of(1e-13) * S::one().max(guess);
    let mut root = bisect_expanding(phi, lo, hi0, x_tol)?;
    // Newton polish to the floating-point floor.
    for _ in 0..3 {
        let f = phi(root);
        let df = S::of(n as f64) * root.powi(n - 1) + eps * S::of((n - 2) as f64) * root.powi(n - 3);
        if df != S::zero() {
            root = root - f / df;
        }
    }
    Ok(root)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sphere3() -> ReferenceSpace<f64> {
        ReferenceSpace::new(1, 3, None).unwrap()
    }

    fn flat3() -> ReferenceSpace<f64> {
        ReferenceSpace::new(0, 3, None).unwrap()
    }

    #[test]
    fn horizon_closed_forms() {
        // eps = 1, n = 3, mu = 1: r^3 + r - 2 = 0 at r = 1.
        let r0 = horizon_radius(&sphere3(), 1.0).unwrap();
        assert!((r0 - 1.0).abs() < 1e-12);
        // eps = 0, n = 3, mu = 1/2: r^3 = 1.
        let r0 = horizon_radius(&flat3(), 0.5).unwrap();
        assert!((r0 - 1.0).abs() < 1e-12);
        // eps = -1 horizons always clear r = 1.
        let hyp = ReferenceSpace::new(-1, 3, Some(4.0 * std::f64::consts::PI)).unwrap();
        let r0 = horizon_radius(&hyp, 0.2).unwrap();
        assert!(r0 > 1.0);
        let phi = r0.powi(3) - r0 - 0.4;
        assert!(phi.abs() < 1e-12);
    }

    #[test]
    fn ks_slope_value() {
        // eps = 1, n = 3, mu = 1 at r = 2: s^2 = 1/4.
        let g = GraphManifold::kottler_schwarzschild(&sphere3(), 1.0, 2.0).unwrap();
        assert!((g.slope(2.0).unwrap() - 0.5).abs() < 1e-12);
        assert!((g.slope_sq(2.0).unwrap() - 0.25).abs() < 1e-12);
    }

    #[test]
    fn ks_slope_singular_at_horizon() {
        let g = GraphManifold::kottler_schwarzschild(&sphere3(), 1.0, 2.0).unwrap();
        assert!(matches!(g.slope(1.0), Err(Error::Singular(_))));
        // Just above the horizon the stabilised evaluation stays positive
        // and follows the inverse-square-root profile.
        let s_sq = g.slope_sq(1.0 + 1e-12).unwrap();
        assert!(s_sq > 1e10 && s_sq.is_finite());
    }

    #[test]
    fn ks_outer_radius_must_clear_horizon() {
        assert!(matches!(
            GraphManifold::kottler_schwarzschild(&sphere3(), 1.0, 0.9),
            Err(Error::Constraint(_))
        ));
    }

    #[test]
    fn constant_graph_is_flat_slice() {
        let g = GraphManifold::constant(&flat3(), 1.0, 2.0, 3.0).unwrap();
        assert_eq!(g.min_height(), 3.0);
        assert_eq!(g.max_height(), 3.0);
        assert!((g.height(1.5).unwrap() - 3.0).abs() < 1e-15);
        assert!(!g.satisfies_definition());
        let data = g.level_set(3.0).unwrap();
        assert!((data.graph_mean_curvature - data.ambient_mean_curvature).abs() < 1e-14);
    }

    #[test]
    fn height_is_monotone_and_invertible() {
        let g = GraphManifold::kottler_schwarzschild(&sphere3(), 1.0, 2.0).unwrap();
        let f_15 = g.height(1.5).unwrap();
        let f_20 = g.height(2.0).unwrap();
        assert!(0.0 < f_15 && f_15 < f_20);
        assert!((f_20 - g.max_height()).abs() < 1e-12);
        let h = 0.5 * (f_15 + f_20);
        let r = g.radius_at_height(h).unwrap();
        assert!((g.height(r).unwrap() - h).abs() < 1e-10);
        assert!(r > 1.5 && r < 2.0);
    }

    #[test]
    fn divergent_profile_rejected() {
        // s ~ (r - r_inner)^(-1) has a divergent height integral.
        let profile = SlopeProfile::analytic("inverse-distance", |r: f64| 0.1 / (r - 1.0));
        let err = GraphManifold::from_profile(&flat3(), profile, 1.0, 2.0);
        assert!(matches!(err, Err(Error::Divergence(_))), "{err:?}");
    }

    #[test]
    fn integrable_singular_custom_profile() {
        // s ~ (r-1)^(-1/2) integrates; the graph reads as minimal-boundary.
        let profile = SlopeProfile::analytic("inverse-sqrt", |r: f64| (r - 1.0).powf(-0.5));
        let g = GraphManifold::from_profile(&flat3(), profile, 1.0, 2.0).unwrap();
        assert!(g.inner_boundary_minimal());
        // f(r) = int_1^r  rho^(-2) (rho-1)^(-1/2) drho, known at r = 2:
        // substitution x = sqrt(r-1) gives 2 int_0^1 dx/(1+x^2)^2 = pi/4 + 1/2.
        let expect = std::f64::consts::PI / 4.0 + 0.5;
        assert!((g.max_height() - expect).abs() < 1e-9, "{}", g.max_height());
    }

    #[test]
    fn table_profile_roundtrip() {
        let text = "# radius slope\n1.0 0.0\n1.5 0.05\n2.0 0.10\n";
        let table = SlopeTable::<f64>::parse(text).unwrap();
        let profile = SlopeProfile::Table(table);
        let g = GraphManifold::from_profile(&flat3(), profile, 1.0, 2.0).unwrap();
        assert!((g.slope(1.75).unwrap() - 0.075).abs() < 1e-12);
        assert!(!g.inner_boundary_minimal());
        assert!(g.max_height() > 0.0);
    }

    #[test]
    fn table_requires_increasing_radii() {
        assert!(matches!(
            SlopeTable::<f64>::parse("1.0 0.0\n1.0 0.1\n"),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            SlopeTable::<f64>::parse("1.0 0.0\n0.5 0.1\n"),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn table_must_cover_annulus() {
        let table = SlopeTable::<f64>::new(vec![1.2, 2.0], vec![0.0, 0.1]).unwrap();
        assert!(matches!(
            GraphManifold::from_profile(&flat3(), SlopeProfile::Table(table), 1.0, 2.0),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn negative_slope_rejected() {
        let profile = SlopeProfile::analytic("negative", |_r: f64| -0.1);
        assert!(matches!(
            GraphManifold::from_profile(&flat3(), profile, 1.0, 2.0),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn ks_graph_has_constant_scalar_curvature() {
        for (eps, vol, mu) in [(1, None, 1.0), (0, None, 0.5), (-1, Some(12.0), 0.3)] {
            let sp = ReferenceSpace::new(eps, 3, vol).unwrap();
            let g = GraphManifold::kottler_schwarzschild(&sp, mu, 2.5).unwrap();
            let r0 = g.r_inner();
            for k in 0..=40 {
                let r = (r0 + 1e-3) + (2.5 - r0 - 1e-3) * (k as f64) / 40.0;
                let scalar = g.scalar_curvature(r).unwrap();
                assert!(
                    (scalar + 6.0).abs() < 1e-6,
                    "eps={eps} r={r} scalar={scalar}"
                );
            }
            assert!(g.scalar_bound_ok(), "eps={eps}");
            assert!(g.satisfies_definition(), "eps={eps}");
        }
    }

    #[test]
    fn level_set_fields_are_consistent() {
        let g = GraphManifold::kottler_schwarzschild(&sphere3(), 1.0, 2.0).unwrap();
        let data = g.level_set(g.max_height()).unwrap();
        assert!((data.radius - 2.0).abs() < 1e-10);
        // Mean-curvature relation between graph and ambient slices.
        let expect = data.ambient_mean_curvature / (1.0 + data.slope * data.slope).sqrt();
        assert!((data.graph_mean_curvature - expect).abs() < 1e-14);
        assert!(data.graph_mean_curvature <= data.ambient_mean_curvature);
        // Minimal boundary level set is singular.
        assert!(matches!(g.level_set(0.0), Err(Error::Singular(_))));
        // Outside the height range: domain error.
        assert!(matches!(g.level_set(1e3), Err(Error::Domain(_))));
    }

    #[test]
    fn flat_ks_volume_matches_quadrature() {
        // eps = 0, n = 3, mu = 1/2, R = 2: integrand r^2 / sqrt(r^2 - 1/r),
        // with r^2 - 1/r factored as d (r^2 + r + 1) / r to stay exact near
        // the horizon r = 1.
        let g = GraphManifold::kottler_schwarzschild(&flat3(), 0.5, 2.0).unwrap();
        let direct = crate::quad::integrate_inner_singular_offset(
            |d: f64| {
                let r = 1.0 + d;
                r * r / (d * (r * r + r + 1.0) / r).sqrt()
            },
            1.0,
            0.0,
            Tolerance::default(),
        )
        .unwrap();
        assert!(
            (g.volume().unwrap() - direct).abs() < 1e-8,
            "{} vs {direct}",
            g.volume().unwrap()
        );
    }

    #[test]
    fn constant_graph_volumes() {
        // eps = 0: base volume over [1,2] with A = 1 is int r^2/r = 3/2, and
        // the constant graph adds nothing.
        let g = GraphManifold::constant(&flat3(), 1.0, 2.0, 0.0).unwrap();
        assert!((g.base_volume().unwrap() - 1.5).abs() < 1e-12);
        assert!((g.volume().unwrap() - 1.5).abs() < 1e-12);
    }
}
