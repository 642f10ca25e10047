//! Semigroups with closed-form Koenigs maps, normalized so that the
//! Denjoy–Wolff point is `τ = 1`.
//!
//! Each model is written as `h = F ∘ C` with `C` the Cayley transform onto the
//! right half-plane and `F: ℍ → Ω` an explicit conformal map. The conjugate
//! semigroup on `ℍ` is `ψ_t(w) = F⁻¹(F(w) + it)`, and every orbit-derived
//! quantity (speeds, steps, gaps) is computed there: the hyperbolic metric is
//! invariant under `C`, and half-plane coordinates keep their precision where
//! the disc point would already have rounded onto the unit circle.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::domains::{contains, DomainSpec};
use crate::hypgeom::{
    cayley, cayley_inverse, halfplane_distance_raw, BoundaryPoint, DiscPoint, GeomError, HalfPlanePoint,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("point {re} + {im}i is outside the Koenigs domain")]
    OutOfDomain { re: f64, im: f64 },
    #[error("power map argument {arg} left the principal sector of half-width {limit}")]
    BranchViolation { arg: f64, limit: f64 },
    #[error("the Koenigs domain contains no real half-line")]
    RayNotContained,
    #[error("the Koenigs domain is not contained in the right half-plane")]
    OmegaNotInHalfPlane,
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error(transparent)]
    Geometry(#[from] GeomError),
}

/// A semigroup given by its Koenigs map.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ModelSemigroup {
    /// `Ω = ℍ`, `h = C`, `ψ_t(w) = w + it`.
    HalfPlaneTranslation,
    /// `h(z) = p + i e^{−iα/2} C(z)^{α/π}` onto the sector
    /// `p + {π/2 − α < arg ζ < π/2}`.
    VerticalSectorModel { vertex: Complex64, aperture: f64 },
    /// `h(z) = i C(z)²` onto `ℂ ∖ {iy : y ≤ 0}`.
    SlitPlaneModel,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SemigroupKind {
    ParabolicPositiveStep,
    ParabolicZeroStep,
    Hyperbolic { lambda: f64 },
}

/// The smallest domain of the form `⋃_t (Ω − it)`, up to translation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum OmegaPrime {
    HalfPlane,
    WholePlane,
    Strip { width: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SemigroupClass {
    pub kind: SemigroupKind,
    pub omega_prime: OmegaPrime,
}

impl SemigroupClass {
    /// Whether `kind` and `omega_prime` match the trichotomy.
    pub fn is_consistent(&self) -> bool {
        matches!(
            (self.kind, self.omega_prime),
            (SemigroupKind::ParabolicPositiveStep, OmegaPrime::HalfPlane)
                | (SemigroupKind::ParabolicZeroStep, OmegaPrime::WholePlane)
                | (SemigroupKind::Hyperbolic { .. }, OmegaPrime::Strip { .. })
        )
    }
}

/// Speeds of the orbit of `0` at time `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpeedSample {
    pub t: f64,
    /// `k_𝔻(0, φ_t(0))`
    pub v: f64,
    /// Distance from `0` to the projection of `φ_t(0)` on the diameter.
    #[serde(rename = "vO")]
    pub v_o: f64,
    /// Distance from `φ_t(0)` to its projection on the diameter.
    #[serde(rename = "vT")]
    pub v_t: f64,
    /// `|ψ_t(1)|`
    pub rho: f64,
    /// `arg ψ_t(1)`
    pub theta: f64,
}

impl SpeedSample {
    /// `½ log(1/cos θ)`, which agrees with `vT` up to a bounded error.
    pub fn tangential_proxy(&self) -> f64 {
        -0.5 * self.theta.cos().ln()
    }
}

/// Tail estimate of the 1-hyperbolic step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepEstimate {
    /// `k_𝔻(φ_t(z), φ_{t+1}(z))` at the last grid time.
    pub value: f64,
    /// The values along the grid.
    pub values: Vec<f64>,
    /// Whether the values are nonincreasing along the grid.
    pub nonincreasing: bool,
    /// Whether the grid is strictly increasing.
    pub strict_grid: bool,
}

/// Tail estimate of `k_𝔻(0, w) − k_𝔻(0, C⁻¹(h(w)))` along a radius.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DilationEstimate {
    /// Last value on the grid, or `+∞` once it exceeds [`DILATION_CAP`].
    pub value: f64,
    pub values: Vec<f64>,
    pub warnings: Vec<String>,
}

pub const DILATION_CAP: f64 = 1e3;

/// Radial grids whose largest radius stays below this get a warning.
pub const DILATION_MIN_REACH: f64 = 0.99;

const TAU: BoundaryPoint = BoundaryPoint { angle: 0.0 };

fn c1() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

impl ModelSemigroup {
    pub fn vertical_sector(vertex: Complex64, aperture: f64) -> Result<Self, ModelError> {
        if !(aperture > 0.0 && aperture < FRAC_PI_2) {
            return Err(ModelError::InvalidModel(format!("aperture {aperture} must lie in (0, π/2)")));
        }
        if !(vertex.re.is_finite() && vertex.im.is_finite()) {
            return Err(ModelError::InvalidModel("vertex must be finite".into()));
        }
        Ok(ModelSemigroup::VerticalSectorModel { vertex, aperture })
    }

    /// The Koenigs domain `Ω = h(𝔻)`.
    pub fn omega(&self) -> DomainSpec {
        match *self {
            ModelSemigroup::HalfPlaneTranslation => DomainSpec::HalfPlane,
            ModelSemigroup::VerticalSectorModel { vertex, aperture } => DomainSpec::VerticalSector { vertex, aperture },
            ModelSemigroup::SlitPlaneModel => DomainSpec::SlitPlane,
        }
    }

    /// The sector model's `Ω′` is the half-plane `Re ζ > Re p`; it becomes
    /// `ℍ` after translating by `−Re p`.
    pub fn class(&self) -> SemigroupClass {
        match self {
            ModelSemigroup::HalfPlaneTranslation | ModelSemigroup::VerticalSectorModel { .. } => {
                SemigroupClass { kind: SemigroupKind::ParabolicPositiveStep, omega_prime: OmegaPrime::HalfPlane }
            }
            ModelSemigroup::SlitPlaneModel => {
                SemigroupClass { kind: SemigroupKind::ParabolicZeroStep, omega_prime: OmegaPrime::WholePlane }
            }
        }
    }

    /// `F: ℍ → Ω`.
    pub fn forward(&self, w: Complex64) -> Result<Complex64, ModelError> {
        match *self {
            ModelSemigroup::HalfPlaneTranslation => Ok(w),
            ModelSemigroup::VerticalSectorModel { vertex, aperture } => {
                let arg = w.arg();
                check_branch(arg, FRAC_PI_2)?;
                let rotation = Complex64::i() * Complex64::from_polar(1.0, -aperture / 2.0);
                Ok(vertex + rotation * w.powf(aperture / PI))
            }
            ModelSemigroup::SlitPlaneModel => {
                check_branch(w.arg(), FRAC_PI_2)?;
                Ok(Complex64::i() * w * w)
            }
        }
    }

    /// `F⁻¹: Ω → ℍ`.
    pub fn backward(&self, u: Complex64) -> Result<Complex64, ModelError> {
        if !contains(&self.omega(), u) {
            return Err(ModelError::OutOfDomain { re: u.re, im: u.im });
        }
        match *self {
            ModelSemigroup::HalfPlaneTranslation => Ok(u),
            ModelSemigroup::VerticalSectorModel { vertex, aperture } => {
                let rotation = Complex64::i() * Complex64::from_polar(1.0, -aperture / 2.0);
                let base = (u - vertex) / rotation;
                check_branch(base.arg(), aperture / 2.0)?;
                Ok(base.powf(PI / aperture))
            }
            ModelSemigroup::SlitPlaneModel => {
                let base = -Complex64::i() * u;
                check_branch(base.arg(), PI)?;
                Ok(base.sqrt())
            }
        }
    }

    /// `ψ_t(w) = F⁻¹(F(w) + it)` on the half-plane.
    pub fn halfplane_orbit(&self, w: Complex64, t: f64) -> Result<Complex64, ModelError> {
        if t == 0.0 {
            return Ok(w);
        }
        match self {
            ModelSemigroup::HalfPlaneTranslation => Ok(w + Complex64::new(0.0, t)),
            _ => self.backward(self.forward(w)? + Complex64::new(0.0, t)),
        }
    }
}

fn check_branch(arg: f64, limit: f64) -> Result<(), ModelError> {
    if arg.abs() < limit {
        Ok(())
    } else {
        Err(ModelError::BranchViolation { arg, limit })
    }
}

fn check_time(t: f64) -> Result<(), ModelError> {
    if t.is_finite() && t >= 0.0 {
        Ok(())
    } else {
        Err(ModelError::InvalidGrid(format!("time {t} must be finite and nonnegative")))
    }
}

/// The Koenigs map `h(z)`.
pub fn koenigs(m: &ModelSemigroup, z: DiscPoint) -> Result<Complex64, ModelError> {
    m.forward(cayley(TAU, z).w())
}

/// `h⁻¹(u)` for `u ∈ Ω`.
pub fn koenigs_inverse(m: &ModelSemigroup, u: Complex64) -> Result<DiscPoint, ModelError> {
    let w = m.backward(u)?;
    Ok(cayley_inverse(TAU, HalfPlanePoint::from_complex(w)?)?)
}

/// `φ_t(z) = h⁻¹(h(z) + it)`.
pub fn orbit(m: &ModelSemigroup, z: DiscPoint, t: f64) -> Result<DiscPoint, ModelError> {
    check_time(t)?;
    if t == 0.0 {
        return Ok(z);
    }
    let w = m.halfplane_orbit(cayley(TAU, z).w(), t)?;
    Ok(cayley_inverse(TAU, HalfPlanePoint::from_complex(w)?)?)
}

/// Speeds of `t ↦ φ_t(0)`, evaluated on `ψ_t(1)`.
pub fn speeds(m: &ModelSemigroup, t: f64) -> Result<SpeedSample, ModelError> {
    check_time(t)?;
    let one = c1();
    let w = m.halfplane_orbit(one, t)?;
    let rho = w.norm();
    let projection = Complex64::new(rho, 0.0);
    Ok(SpeedSample {
        t,
        v: halfplane_distance_raw(one, w),
        v_o: 0.5 * rho.ln().abs(),
        v_t: halfplane_distance_raw(w, projection),
        rho,
        theta: w.arg(),
    })
}

fn check_grid(grid: &[f64]) -> Result<(), ModelError> {
    if grid.is_empty() {
        return Err(ModelError::InvalidGrid("empty grid".into()));
    }
    grid.iter().try_for_each(|&t| check_time(t))
}

/// `sup_t |vO(t) − ½ log t| + |vT(t) − ½ log t|` over a grid in `[1, ∞)`.
pub fn speed_gap(m: &ModelSemigroup, t_grid: &[f64]) -> Result<f64, ModelError> {
    check_grid(t_grid)?;
    if t_grid.iter().any(|&t| t < 1.0) || t_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(ModelError::InvalidGrid("times must be increasing and at least 1".into()));
    }
    t_grid.iter().try_fold(0.0f64, |acc, &t| {
        let s = speeds(m, t)?;
        let half_log = 0.5 * t.ln();
        Ok(acc.max((s.v_o - half_log).abs() + (s.v_t - half_log).abs()))
    })
}

/// `k_Ω(r, h((r − 1)/(r + 1)))`, i.e. the distance between `h⁻¹(r)` and the
/// diameter point `(r − 1)/(r + 1)`.
pub fn geodesic_gap(m: &ModelSemigroup, r: f64) -> Result<f64, ModelError> {
    if crate::domains::real_ray_start(&m.omega()).is_none() {
        return Err(ModelError::RayNotContained);
    }
    let u = Complex64::new(r, 0.0);
    let w = m.backward(u)?;
    if !(r > 0.0) {
        return Err(ModelError::OutOfDomain { re: r, im: 0.0 });
    }
    Ok(halfplane_distance_raw(w, u))
}

/// 1-hyperbolic step `k(φ_t(z), φ_{t+1}(z))` along the grid.
pub fn hyperbolic_step(m: &ModelSemigroup, z: DiscPoint, t_grid: &[f64]) -> Result<StepEstimate, ModelError> {
    check_grid(t_grid)?;
    let w0 = cayley(TAU, z).w();
    let values = t_grid
        .iter()
        .map(|&t| {
            let a = m.halfplane_orbit(w0, t)?;
            let b = m.halfplane_orbit(w0, t + 1.0)?;
            Ok(halfplane_distance_raw(a, b))
        })
        .collect::<Result<Vec<_>, ModelError>>()?;
    let slack = 1e-12;
    let nonincreasing = values.windows(2).all(|v| v[1] <= v[0] + slack * (1.0 + v[0]));
    let strict_grid = t_grid.windows(2).all(|w| w[0] < w[1]);
    Ok(StepEstimate { value: *values.last().unwrap(), values, nonincreasing, strict_grid })
}

/// Radial dilation defect `k_ℍ(1, s) − k_ℍ(1, F(s))` with `s = (1 + r)/(1 − r)`.
pub fn dilation_estimate(m: &ModelSemigroup, radial_grid: &[f64]) -> Result<DilationEstimate, ModelError> {
    if !m.omega().within_right_half_plane() {
        return Err(ModelError::OmegaNotInHalfPlane);
    }
    if radial_grid.is_empty() || radial_grid.iter().any(|&r| !(r > 0.0 && r < 1.0)) {
        return Err(ModelError::InvalidGrid("radii must lie in (0, 1)".into()));
    }
    let one = c1();
    let values = radial_grid
        .iter()
        .map(|&r| {
            let s = Complex64::new((1.0 + r) / (1.0 - r), 0.0);
            Ok(halfplane_distance_raw(one, s) - halfplane_distance_raw(one, m.forward(s)?))
        })
        .collect::<Result<Vec<_>, ModelError>>()?;
    let mut warnings = Vec::new();
    let reach = radial_grid.iter().cloned().fold(0.0, f64::max);
    if reach < DILATION_MIN_REACH {
        warnings.push(format!("largest radius {reach} is far from the boundary point"));
    }
    let last = *values.last().unwrap();
    let value = if last > DILATION_CAP { f64::INFINITY } else { last };
    Ok(DilationEstimate { value, values, warnings })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypgeom::disc_distance;
    use crate::numerics::log_space;

    fn sector() -> ModelSemigroup {
        ModelSemigroup::vertical_sector(Complex64::new(1.0, 0.0), PI / 6.0).unwrap()
    }

    fn all() -> [ModelSemigroup; 3] {
        [ModelSemigroup::HalfPlaneTranslation, sector(), ModelSemigroup::SlitPlaneModel]
    }

    #[test]
    fn koenigs_examples() {
        let h = koenigs(&ModelSemigroup::HalfPlaneTranslation, DiscPoint::origin()).unwrap();
        assert_eq!(h, Complex64::new(1.0, 0.0));
        let s = koenigs(&ModelSemigroup::SlitPlaneModel, DiscPoint::origin()).unwrap();
        assert_eq!(s, Complex64::new(0.0, 1.0));
        let u = koenigs(&sector(), DiscPoint::origin()).unwrap();
        assert!(contains(&sector().omega(), u));
        assert!(matches!(koenigs_inverse(&sector(), Complex64::new(5.0, 0.0)), Err(ModelError::OutOfDomain { .. })));
    }

    #[test]
    fn classes() {
        for m in all() {
            assert!(m.class().is_consistent());
        }
        assert_eq!(ModelSemigroup::SlitPlaneModel.class().kind, SemigroupKind::ParabolicZeroStep);
        assert!(ModelSemigroup::vertical_sector(Complex64::new(1.0, 0.0), PI / 2.0).is_err());
    }

    #[test]
    fn orbit_examples() {
        let z = DiscPoint::new(0.3, -0.2).unwrap();
        for m in all() {
            assert_eq!(orbit(&m, z, 0.0).unwrap(), z);
        }
        let o = orbit(&ModelSemigroup::HalfPlaneTranslation, DiscPoint::origin(), 1.0).unwrap();
        let expected = cayley_inverse(TAU, HalfPlanePoint::new(1.0, 1.0).unwrap()).unwrap();
        assert!((o.z() - expected.z()).norm() < 1e-15);
        assert!(orbit(&sector(), z, -1.0).is_err());
    }

    #[test]
    fn speed_examples() {
        for m in all() {
            let s = speeds(&m, 0.0).unwrap();
            assert_eq!((s.v, s.v_o, s.v_t), (0.0, 0.0, 0.0));
        }
        let s = speeds(&ModelSemigroup::HalfPlaneTranslation, 1.0).unwrap();
        assert!((s.rho - 2f64.sqrt()).abs() < 1e-15);
        assert!((s.theta - PI / 4.0).abs() < 1e-15);
        assert!((s.v_o - 0.25 * 2f64.ln()).abs() < 1e-15);
        let t8 = (PI / 8.0).tan();
        assert!((s.v_t - 0.5 * ((1.0 + t8) / (1.0 - t8)).ln()).abs() < 1e-14);
        for t in log_space(1.0, 1e4, 50) {
            let s = speeds(&ModelSemigroup::HalfPlaneTranslation, t).unwrap();
            let excess = s.v_o - 0.5 * t.ln();
            assert!((excess - 0.25 * (1.0 + 1.0 / (t * t)).ln()).abs() < 1e-12);
            assert!(excess > 0.0 && excess <= 0.25 * 2f64.ln() + 1e-15);
        }
    }

    #[test]
    fn slit_speeds_are_radial() {
        let s = speeds(&ModelSemigroup::SlitPlaneModel, 99.0).unwrap();
        assert!((s.rho - 10.0).abs() < 1e-12);
        assert_eq!(s.theta, 0.0);
        assert_eq!(s.v_t, 0.0);
        assert!((s.v - s.v_o).abs() < 1e-12);
    }

    #[test]
    fn speeds_match_disc_distance() {
        let m = sector();
        for t in [0.5, 1.0, 3.0] {
            let s = speeds(&m, t).unwrap();
            let p = orbit(&m, DiscPoint::origin(), t).unwrap();
            assert!((s.v - disc_distance(DiscPoint::origin(), p)).abs() < 1e-10);
        }
    }

    #[test]
    fn speed_gap_examples() {
        let grid = log_space(1.0, 1e4, 100);
        assert!(speed_gap(&ModelSemigroup::HalfPlaneTranslation, &grid).unwrap() <= 1.0);
        let m = sector();
        let at10 = speed_gap(&m, &log_space(1.0, 10.0, 20)).unwrap();
        let at_end = speed_gap(&m, &grid).unwrap();
        assert!(at_end > 2.0 * at10);
        let s = speeds(&m, 1.0).unwrap();
        assert_eq!(speed_gap(&m, &[1.0]).unwrap(), s.v_o.abs() + s.v_t.abs());
        assert!(speed_gap(&m, &[0.5]).is_err());
    }

    #[test]
    fn geodesic_gap_examples() {
        for r in [0.5, 2.0, 7.0, 1000.0] {
            assert_eq!(geodesic_gap(&ModelSemigroup::HalfPlaneTranslation, r).unwrap(), 0.0);
        }
        assert_eq!(geodesic_gap(&sector(), 5.0), Err(ModelError::RayNotContained));
        assert!(geodesic_gap(&ModelSemigroup::HalfPlaneTranslation, -1.0).is_err());
        assert!(geodesic_gap(&ModelSemigroup::SlitPlaneModel, 4.0).unwrap() > 0.0);
    }

    #[test]
    fn hyperbolic_step_examples() {
        let golden = ((1.0 + 5f64.sqrt()) / 2.0).ln();
        let m = ModelSemigroup::HalfPlaneTranslation;
        for t in [1.0, 10.0, 1e3] {
            let s = hyperbolic_step(&m, DiscPoint::origin(), &[t]).unwrap();
            assert!((s.value - golden).abs() < 1e-12);
        }
        let slit =
            hyperbolic_step(&ModelSemigroup::SlitPlaneModel, DiscPoint::origin(), &log_space(1.0, 1e4, 30)).unwrap();
        assert!(slit.value <= 1e-3);
        assert!(slit.nonincreasing && slit.strict_grid);
        let dup = hyperbolic_step(&m, DiscPoint::origin(), &[1e3, 1e3]).unwrap();
        assert_eq!(dup.values[0], dup.values[1]);
        assert!(!dup.strict_grid);
    }

    #[test]
    fn dilation_examples() {
        let grid: Vec<f64> = (1..=15).map(|n| 1.0 - 10f64.powi(-n)).collect();
        let h = dilation_estimate(&ModelSemigroup::HalfPlaneTranslation, &grid).unwrap();
        assert!(h.values.iter().all(|&v| v == 0.0));
        assert!(h.warnings.is_empty());
        let s = dilation_estimate(&sector(), &grid).unwrap();
        // grows like (5/12) log s along the radius
        assert!(s.values.windows(2).all(|w| w[1] > w[0]));
        assert!(s.values[14] - s.values[4] > 0.4 * 10.0 * 10f64.ln());
        assert_eq!(dilation_estimate(&ModelSemigroup::SlitPlaneModel, &grid), Err(ModelError::OmegaNotInHalfPlane));
        let short = dilation_estimate(&ModelSemigroup::HalfPlaneTranslation, &[0.1, 0.5]).unwrap();
        assert_eq!(short.warnings.len(), 1);
        assert_eq!(short.value, 0.0);
    }

    #[test]
    fn finite_shift_half_plane_criterion() {
        let grid = log_space(1.0, 1e4, 40);
        let hp: Vec<f64> =
            grid.iter().map(|&t| ModelSemigroup::HalfPlaneTranslation.halfplane_orbit(c1(), t).unwrap().re).collect();
        assert!(hp.iter().all(|&x| x == 1.0));
        let sec: Vec<f64> = grid.iter().map(|&t| sector().halfplane_orbit(c1(), t).unwrap().re).collect();
        assert!(sec.windows(2).all(|w| w[1] > w[0]));
        assert!(*sec.last().unwrap() > 1e20);
    }
}
