//! Closed-form hyperbolic geometry on the unit disc, the right half-plane and
//! symmetric sectors.
//!
//! Points are stored as [`Complex64`] behind newtypes that enforce the
//! interior conditions. Distances use the logarithmic form
//! `½ log((1+p)/(1−p))` with the pseudo-hyperbolic quantity `p`; the
//! denominator `1 − p²` is always evaluated from a product formula so that
//! points far out towards the boundary keep full relative precision.

use std::f64::consts::{FRAC_PI_2, LN_2, PI};

use num_complex::Complex64;
use thiserror::Error;

/// Below this value `1 − p²` is treated as zero and distances are `+∞`.
pub const BOUNDARY_UNDERFLOW: f64 = 1e-300;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    #[error("point {re} + {im}i is not interior to the model domain")]
    NonInterior { re: f64, im: f64 },
    #[error("Cayley transform is singular at z = tau")]
    Singular,
    #[error("horocycle radius must be positive, got {0}")]
    NonPositiveRadius(f64),
    #[error("Stolz amplitude must exceed 1, got {0}")]
    AmplitudeTooSmall(f64),
    #[error("point {s} is not inside the sector with vertex {vertex}")]
    OutOfSector { s: f64, vertex: f64 },
    #[error("angle {0} is outside the admissible range")]
    BadAngle(f64),
}

fn non_interior(z: Complex64) -> GeomError {
    GeomError::NonInterior { re: z.re, im: z.im }
}

/// A point of the open unit disc.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscPoint(Complex64);

impl DiscPoint {
    pub fn new(re: f64, im: f64) -> Result<Self, GeomError> {
        Self::from_complex(Complex64::new(re, im))
    }

    pub fn from_complex(z: Complex64) -> Result<Self, GeomError> {
        if z.re.is_finite() && z.im.is_finite() && z.norm_sqr() < 1.0 {
            Ok(DiscPoint(z))
        } else {
            Err(non_interior(z))
        }
    }

    pub fn origin() -> Self {
        DiscPoint(Complex64::new(0.0, 0.0))
    }

    pub fn z(self) -> Complex64 {
        self.0
    }

    pub fn re(self) -> f64 {
        self.0.re
    }

    pub fn im(self) -> f64 {
        self.0.im
    }
}

/// A point of the right half-plane `Re w > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfPlanePoint(Complex64);

impl HalfPlanePoint {
    pub fn new(re: f64, im: f64) -> Result<Self, GeomError> {
        Self::from_complex(Complex64::new(re, im))
    }

    pub fn from_complex(w: Complex64) -> Result<Self, GeomError> {
        if w.re.is_finite() && w.im.is_finite() && w.re > 0.0 {
            Ok(HalfPlanePoint(w))
        } else {
            Err(non_interior(w))
        }
    }

    pub fn w(self) -> Complex64 {
        self.0
    }

    pub fn re(self) -> f64 {
        self.0.re
    }

    pub fn im(self) -> f64 {
        self.0.im
    }
}

/// A point `e^{iθ}` of the unit circle. The canonical choice is `θ = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryPoint {
    pub angle: f64,
}

impl BoundaryPoint {
    pub fn new(angle: f64) -> Self {
        BoundaryPoint { angle }
    }

    /// τ = 1.
    pub fn one() -> Self {
        BoundaryPoint { angle: 0.0 }
    }

    pub fn tau(self) -> Complex64 {
        if self.angle == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::from_polar(1.0, self.angle)
        }
    }
}

impl Default for BoundaryPoint {
    fn default() -> Self {
        Self::one()
    }
}

/// The sector `r₀ + {|arg ζ| < β₀}`.
///
/// The half-plane itself (`β₀ = π/2`, `r₀ = 0`) is admitted as the limiting
/// case so that sector distances can be checked against half-plane ones.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectorParams {
    half_angle: f64,
    vertex: f64,
}

impl SectorParams {
    pub fn new(half_angle: f64, vertex: f64) -> Result<Self, GeomError> {
        if !(half_angle > 0.0 && half_angle <= FRAC_PI_2) {
            return Err(GeomError::BadAngle(half_angle));
        }
        if !(vertex >= 0.0 && vertex.is_finite()) {
            return Err(GeomError::OutOfSector { s: vertex, vertex });
        }
        Ok(SectorParams { half_angle, vertex })
    }

    pub fn half_angle(&self) -> f64 {
        self.half_angle
    }

    pub fn vertex(&self) -> f64 {
        self.vertex
    }
}

/// `½ log((1+p)/(1−p))` given `p` and an accurately computed `1 − p²`.
fn distance_from_pseudo(p: f64, one_minus_p2: f64) -> f64 {
    if one_minus_p2 < BOUNDARY_UNDERFLOW {
        return f64::INFINITY;
    }
    // (1+p)/(1−p) = (1+p)² / (1−p²)
    if p < 0.5 {
        p.ln_1p() - 0.5 * (-(p * p)).ln_1p()
    } else {
        p.ln_1p() - 0.5 * one_minus_p2.ln()
    }
}

/// Poincaré distance `k_𝔻(z, w)`.
pub fn disc_distance(z: DiscPoint, w: DiscPoint) -> f64 {
    let (z, w) = (z.0, w.0);
    let denom = Complex64::new(1.0, 0.0) - w.conj() * z;
    let denom2 = denom.norm_sqr();
    let p = ((w - z).norm_sqr() / denom2).sqrt().min(1.0);
    let one_minus_p2 = (1.0 - z.norm_sqr()) * (1.0 - w.norm_sqr()) / denom2;
    distance_from_pseudo(p, one_minus_p2)
}

/// Hyperbolic distance `k_ℍ(z, w)` in the right half-plane.
pub fn halfplane_distance(z: HalfPlanePoint, w: HalfPlanePoint) -> f64 {
    halfplane_distance_raw(z.0, w.0)
}

pub(crate) fn halfplane_distance_raw(z: Complex64, w: Complex64) -> f64 {
    let denom2 = (z + w.conj()).norm_sqr();
    let rho = ((z - w).norm_sqr() / denom2).sqrt().min(1.0);
    let one_minus_rho2 = 4.0 * z.re * w.re / denom2;
    distance_from_pseudo(rho, one_minus_rho2)
}

/// `C_τ(z) = (τ + z)/(τ − z)` for an interior point.
pub fn cayley(tau: BoundaryPoint, z: DiscPoint) -> HalfPlanePoint {
    let t = tau.tau();
    HalfPlanePoint((t + z.0) / (t - z.0))
}

/// `C_τ` on an arbitrary complex number, validating the image.
pub fn cayley_complex(tau: BoundaryPoint, z: Complex64) -> Result<HalfPlanePoint, GeomError> {
    let t = tau.tau();
    if z == t {
        return Err(GeomError::Singular);
    }
    HalfPlanePoint::from_complex((t + z) / (t - z))
}

/// `C_τ⁻¹(w) = τ (w − 1)/(w + 1)`.
pub fn cayley_inverse(tau: BoundaryPoint, w: HalfPlanePoint) -> Result<DiscPoint, GeomError> {
    let one = Complex64::new(1.0, 0.0);
    DiscPoint::from_complex(tau.tau() * (w.0 - one) / (w.0 + one))
}

/// Membership in the horocycle `E(τ, R) = {|τ − z|² < R (1 − |z|²)}`.
pub fn horocycle_contains(tau: BoundaryPoint, radius: f64, z: DiscPoint) -> Result<bool, GeomError> {
    if !(radius > 0.0) {
        return Err(GeomError::NonPositiveRadius(radius));
    }
    let lhs = (tau.tau() - z.0).norm_sqr();
    Ok(lhs < radius * (1.0 - z.0.norm_sqr()))
}

/// Membership in the Stolz region `S(τ, R) = {|τ − z| < R (1 − |z|)}`.
pub fn stolz_contains(tau: BoundaryPoint, amplitude: f64, z: DiscPoint) -> Result<bool, GeomError> {
    if !(amplitude > 1.0) {
        return Err(GeomError::AmplitudeTooSmall(amplitude));
    }
    Ok((tau.tau() - z.0).norm() < amplitude * (1.0 - z.0.norm()))
}

/// Distance between two real points of the translated sector `r₀ + W₀`.
///
/// The sector is mapped to the half-plane by `w ↦ w^{π/(2β₀)}`, so on the
/// symmetry axis the distance is `(π/(4β₀)) log((s₂ − r₀)/(s₁ − r₀))`.
pub fn sector_distance(params: SectorParams, s1: f64, s2: f64) -> Result<f64, GeomError> {
    let r0 = params.vertex;
    for s in [s1, s2] {
        if !(s > r0) {
            return Err(GeomError::OutOfSector { s, vertex: r0 });
        }
    }
    let coeff = PI / (4.0 * params.half_angle);
    Ok(coeff * ((s2 - r0) / (s1 - r0)).ln().abs())
}

/// Quasi-geodesic constants `(A, B)` of the real half-line inside a domain
/// containing a translated sector of half-aperture `β₀`.
pub fn quasi_geodesic_constants(half_angle: f64) -> Result<(f64, f64), GeomError> {
    if !(half_angle > 0.0 && half_angle < FRAC_PI_2) {
        return Err(GeomError::BadAngle(half_angle));
    }
    let a = PI / (2.0 * half_angle);
    let b = (PI / (4.0 * half_angle)) * LN_2;
    Ok((a, b))
}

/// Hyperbolic projection of `w` onto the geodesic `(0, +∞)`: the point `|w|`.
pub fn diameter_projection(w: HalfPlanePoint) -> f64 {
    w.0.norm()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hp(re: f64, im: f64) -> HalfPlanePoint {
        HalfPlanePoint::new(re, im).unwrap()
    }

    fn dp(re: f64, im: f64) -> DiscPoint {
        DiscPoint::new(re, im).unwrap()
    }

    #[test]
    fn disc_distance_examples() {
        assert_eq!(disc_distance(dp(0.0, 0.0), dp(0.0, 0.0)), 0.0);
        let d = disc_distance(dp(0.0, 0.0), dp(0.5, 0.0));
        assert!((d - 0.5 * 3f64.ln()).abs() < 1e-15);
        assert!((d - 0.549_306_1).abs() < 1e-7);
        let a = disc_distance(dp(0.3, 0.0), dp(0.0, 0.3));
        let b = disc_distance(dp(0.0, 0.3), dp(0.3, 0.0));
        assert_eq!(a, b);
    }

    #[test]
    fn non_interior_rejected() {
        assert!(matches!(DiscPoint::new(1.0, 0.0), Err(GeomError::NonInterior { .. })));
        assert!(matches!(DiscPoint::new(0.8, 0.8), Err(GeomError::NonInterior { .. })));
        assert!(matches!(HalfPlanePoint::new(0.0, 1.0), Err(GeomError::NonInterior { .. })));
        assert!(HalfPlanePoint::new(-1.0, 0.0).is_err());
    }

    #[test]
    fn halfplane_distance_examples() {
        let e2 = std::f64::consts::E.powi(2);
        assert!((halfplane_distance(hp(1.0, 0.0), hp(e2, 0.0)) - 1.0).abs() < 1e-15);
        let w = hp(2.0, -3.5);
        assert_eq!(halfplane_distance(w, w), 0.0);
        let golden = ((1.0 + 5f64.sqrt()) / 2.0).ln();
        let d = halfplane_distance(hp(1.0, 0.0), hp(1.0, 1.0));
        assert!((d - golden).abs() < 1e-15);
        assert!((d - 0.481_211_8).abs() < 1e-7);
        // same pair through the disc
        let tau = BoundaryPoint::one();
        let z = cayley_inverse(tau, hp(1.0, 0.0)).unwrap();
        let w = cayley_inverse(tau, hp(1.0, 1.0)).unwrap();
        assert!((disc_distance(z, w) - golden).abs() < 1e-15);
    }

    #[test]
    fn cayley_examples() {
        let tau = BoundaryPoint::one();
        assert_eq!(cayley(tau, DiscPoint::origin()).w(), Complex64::new(1.0, 0.0));
        // i lies on the circle and its image on the imaginary axis
        assert!(DiscPoint::new(0.0, 1.0).is_err());
        assert!(matches!(cayley_complex(tau, Complex64::new(0.0, 1.0)), Err(GeomError::NonInterior { .. })));
        assert_eq!(cayley_complex(tau, Complex64::new(1.0, 0.0)), Err(GeomError::Singular));
        let w = hp(2.0, 3.0);
        let back = cayley(tau, cayley_inverse(tau, w).unwrap());
        assert!((back.w() - w.w()).norm() < 1e-14);
        // C_τ(0) = 1 for every τ
        for angle in [0.3, -2.0, 3.0] {
            let c = cayley(BoundaryPoint::new(angle), DiscPoint::origin()).w();
            assert!((c - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn horocycle_and_stolz_examples() {
        let tau = BoundaryPoint::one();
        assert!(horocycle_contains(tau, 2.0, dp(0.0, 0.0)).unwrap());
        assert!(!horocycle_contains(tau, 0.5, dp(0.0, 0.0)).unwrap());
        assert!(horocycle_contains(tau, 0.4, dp(0.5, 0.0)).unwrap());
        assert_eq!(horocycle_contains(tau, 0.0, dp(0.0, 0.0)), Err(GeomError::NonPositiveRadius(0.0)));

        assert!(stolz_contains(tau, 2.0, dp(0.0, 0.0)).unwrap());
        assert!(!stolz_contains(tau, 2.0, dp(0.0, 0.9)).unwrap());
        assert!(stolz_contains(tau, 2.0, dp(0.5, 0.0)).unwrap());
        assert_eq!(stolz_contains(tau, 1.0, dp(0.0, 0.0)), Err(GeomError::AmplitudeTooSmall(1.0)));
    }

    #[test]
    fn sector_distance_examples() {
        let e = std::f64::consts::E;
        let half = SectorParams::new(FRAC_PI_2, 0.0).unwrap();
        assert!((sector_distance(half, 1.0, e * e).unwrap() - 1.0).abs() < 1e-15);
        let quarter = SectorParams::new(PI / 4.0, 0.0).unwrap();
        assert!((sector_distance(quarter, 1.0, e).unwrap() - 1.0).abs() < 1e-15);
        let shifted = SectorParams::new(PI / 4.0, 1.0).unwrap();
        assert!((sector_distance(shifted, 2.0, 3.0).unwrap() - LN_2).abs() < 1e-15);
        assert!(matches!(sector_distance(shifted, 1.0, 3.0), Err(GeomError::OutOfSector { .. })));
        assert!(SectorParams::new(2.0, 0.0).is_err());
    }

    #[test]
    fn quasi_geodesic_constant_examples() {
        assert_eq!(quasi_geodesic_constants(PI / 4.0).unwrap(), (2.0, LN_2));
        let (a, b) = quasi_geodesic_constants(PI / 6.0).unwrap();
        assert!((a - 3.0).abs() < 1e-15);
        assert!((b - 1.5 * LN_2).abs() < 1e-15);
        let (a, b) = quasi_geodesic_constants(FRAC_PI_2 - 1e-9).unwrap();
        assert!(a > 1.0 && a - 1.0 < 1e-8);
        assert!(b > LN_2 / 2.0 && b - LN_2 / 2.0 < 1e-8);
        assert!(quasi_geodesic_constants(FRAC_PI_2).is_err());
        assert!(quasi_geodesic_constants(0.0).is_err());
    }

    /// Golden-section minimisation of `s ↦ k_ℍ(w, s)`, independent of the
    /// closed form `|w|`.
    fn golden_min(w: HalfPlanePoint, lo: f64, hi: f64) -> f64 {
        let f = |s: f64| halfplane_distance(w, hp(s, 0.0));
        let g = (5f64.sqrt() - 1.0) / 2.0;
        let (mut a, mut b) = (lo, hi);
        let mut c = b - g * (b - a);
        let mut d = a + g * (b - a);
        for _ in 0..200 {
            if f(c) < f(d) {
                b = d;
            } else {
                a = c;
            }
            c = b - g * (b - a);
            d = a + g * (b - a);
        }
        0.5 * (a + b)
    }

    #[test]
    fn diameter_projection_examples() {
        assert_eq!(diameter_projection(hp(1.0, 0.0)), 1.0);
        let w = hp(1.0, 1.0);
        assert!((diameter_projection(w) - 2f64.sqrt()).abs() < 1e-15);
        assert!((golden_min(w, 1e-6, 10.0) - 2f64.sqrt()).abs() < 1e-6);
        let w = hp(3.0, 4.0);
        assert_eq!(diameter_projection(w), 5.0);
        assert!((golden_min(w, 1e-6, 10.0) - 5.0).abs() < 1e-6);
    }

    #[test]
    fn far_points_keep_precision() {
        // 1 − |z| ≈ 1e-20 is not representable in the disc but the half-plane
        // formula still resolves it.
        let far = hp(1e20, 0.0);
        let d = halfplane_distance(hp(1.0, 0.0), far);
        assert!((d - 0.5 * 1e20f64.ln()).abs() < 1e-12);
        let very_far = Complex64::new(1e-160, 1e160);
        assert_eq!(halfplane_distance_raw(Complex64::new(1.0, 0.0), very_far), f64::INFINITY);
    }
}
