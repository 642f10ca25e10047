//! Koenigs domains that are starlike at infinity in the `+i` direction.
//!
//! Every domain here lies over the right half-plane as a subgraph
//! `{x + iy : x > 0, y > −depth(x)}` (step and graph domains), or is one of
//! the closed-form shapes used by the model semigroups (half-plane, vertical
//! sector, slit plane). Boundaries are excluded from the domain.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numerics::{bisect_predicate, golden_section_min};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DomainError {
    #[error("invalid step domain: {0}")]
    InvalidStep(String),
    #[error("invalid graph domain: {0}")]
    InvalidGraph(String),
    #[error("invalid sector: {0}")]
    InvalidSector(String),
    #[error("the real point {0} is not in the domain")]
    RayNotContained(f64),
    #[error("point {re} + {im}i is not in the domain")]
    PointNotInDomain { re: f64, im: f64 },
    #[error("no inner-tangent radius up to {search_max} certifies the cone of half-angle {beta}")]
    NotFound { beta: f64, search_max: f64 },
    #[error("cone half-angle {0} is outside (0, π/2)")]
    BadAngle(f64),
    #[error("radius {r} is below the first step radius c₁ = {c1}")]
    RadiusTooSmall { r: f64, c1: f64 },
    #[error("iteration budget exhausted: {0}")]
    BudgetExceeded(String),
}

fn not_in_domain(z: Complex64) -> DomainError {
    DomainError::PointNotInDomain { re: z.re, im: z.im }
}

/// Anything with a membership predicate. Boundary points are outside.
pub trait Region {
    fn contains(&self, z: Complex64) -> bool;
}

impl<F: Fn(Complex64) -> bool> Region for F {
    fn contains(&self, z: Complex64) -> bool {
        self(z)
    }
}

/// The step domain `Σ(aₖ, bₖ) = ℍ ∖ ⋃ Sₖ` with
/// `Sₖ = {aₖ₋₁ ≤ Re z ≤ aₖ, Im z ≤ −bₖ}` for `k = 1..K`.
///
/// `a` holds `a₀ = 0, a₁, …, a_K` and `b` holds `b₁, …, b_K`. No obstacle is
/// placed to the right of `a_K`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepDomain {
    a: Vec<f64>,
    b: Vec<f64>,
}

impl StepDomain {
    pub fn new(a: Vec<f64>, b: Vec<f64>) -> Result<Self, DomainError> {
        let bad = |m: &str| Err(DomainError::InvalidStep(m.to_string()));
        if b.is_empty() {
            return bad("at least one step is required");
        }
        if a.len() != b.len() + 1 {
            return Err(DomainError::InvalidStep(format!(
                "expected {} abscissae for {} depths, got {}",
                b.len() + 1,
                b.len(),
                a.len()
            )));
        }
        if a.iter().chain(b.iter()).any(|v| !v.is_finite()) {
            return bad("all entries must be finite");
        }
        if a[0] != 0.0 {
            return bad("a must start at 0");
        }
        if a.windows(2).any(|w| w[0] >= w[1]) {
            return bad("a must be strictly increasing");
        }
        if b.iter().any(|&v| v <= 0.0) {
            return bad("b must be positive");
        }
        if b.windows(2).any(|w| w[0] > w[1]) {
            return bad("b must be nondecreasing");
        }
        Ok(StepDomain { a, b })
    }

    pub fn a(&self) -> &[f64] {
        &self.a
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    /// Number of steps `K`.
    pub fn steps(&self) -> usize {
        self.b.len()
    }

    /// Indices `k` (1-based) where `aₖ/bₖ` fails to decrease.
    pub fn warnings(&self) -> Vec<String> {
        (1..self.steps())
            .filter(|&i| self.a[i + 1] / self.b[i] > self.a[i] / self.b[i - 1])
            .map(|i| format!("a_k/b_k increases at k = {}", i + 1))
            .collect()
    }

    /// Depth of the obstacle below abscissa `x ≥ 0`; `+∞` past `a_K`.
    pub fn depth_at(&self, x: f64) -> f64 {
        // first step whose right end is ≥ x; at a shared end the shallower
        // (earlier) step wins
        let k = self.a[1..].partition_point(|&ak| ak < x);
        if k < self.b.len() {
            self.b[k]
        } else {
            f64::INFINITY
        }
    }

    fn contains(&self, z: Complex64) -> bool {
        z.re > 0.0 && z.im > -self.depth_at(z.re)
    }
}

/// Boundary height families for graph domains `{x > 0, y > −g(x)}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum GraphFamily {
    /// `g(x) = x |log x|^{1+ε}`
    XLogEps { eps: f64 },
    /// `g(x) = c x^p`
    Power { p: f64, c: f64 },
    /// Piecewise linear through the knots, constant to the left of the
    /// first knot, and extended with `slope` to the right of the last.
    Table { knots: Vec<(f64, f64)>, slope: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphDomain {
    family: GraphFamily,
}

impl GraphDomain {
    pub fn new(family: GraphFamily) -> Result<Self, DomainError> {
        let bad = |m: &str| Err(DomainError::InvalidGraph(m.to_string()));
        match &family {
            GraphFamily::XLogEps { eps } => {
                if !(eps.is_finite() && *eps >= 0.0) {
                    return bad("eps must be finite and nonnegative");
                }
            }
            GraphFamily::Power { p, c } => {
                if !(p.is_finite() && *p > 0.0 && c.is_finite() && *c > 0.0) {
                    return bad("power family needs p > 0 and c > 0");
                }
            }
            GraphFamily::Table { knots, slope } => {
                if knots.is_empty() {
                    return bad("table needs at least one knot");
                }
                if !slope.is_finite() || knots.iter().any(|(x, g)| !x.is_finite() || !g.is_finite()) {
                    return bad("table entries must be finite");
                }
                if knots[0].0 <= 0.0 {
                    return bad("table knots must have x > 0");
                }
                if knots.windows(2).any(|w| w[0].0 >= w[1].0) {
                    return bad("table knots must be strictly increasing in x");
                }
            }
        }
        Ok(GraphDomain { family })
    }

    pub fn xlog(eps: f64) -> Result<Self, DomainError> {
        Self::new(GraphFamily::XLogEps { eps })
    }

    pub fn family(&self) -> &GraphFamily {
        &self.family
    }

    /// Boundary depth `g(x)` for `x > 0`.
    pub fn g(&self, x: f64) -> f64 {
        match &self.family {
            GraphFamily::XLogEps { eps } => x * x.ln().abs().powf(1.0 + eps),
            GraphFamily::Power { p, c } => c * x.powf(*p),
            GraphFamily::Table { knots, slope } => {
                let first = knots[0];
                let last = knots[knots.len() - 1];
                if x <= first.0 {
                    first.1
                } else if x >= last.0 {
                    last.1 + slope * (x - last.0)
                } else {
                    let i = knots.partition_point(|k| k.0 <= x) - 1;
                    let (x0, g0) = knots[i];
                    let (x1, g1) = knots[i + 1];
                    g0 + (g1 - g0) * (x - x0) / (x1 - x0)
                }
            }
        }
    }

    /// `lim_{x→0⁺} g(x)`.
    fn g_at_zero(&self) -> f64 {
        match &self.family {
            GraphFamily::XLogEps { .. } | GraphFamily::Power { .. } => 0.0,
            GraphFamily::Table { knots, .. } => knots[0].1,
        }
    }

    fn contains(&self, z: Complex64) -> bool {
        z.re > 0.0 && z.im > -self.g(z.re)
    }
}

/// A Koenigs domain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum DomainSpec {
    Step(StepDomain),
    Graph(GraphDomain),
    /// The right half-plane `ℍ`.
    HalfPlane,
    /// `vertex + {π/2 − aperture < arg ζ < π/2}`.
    VerticalSector {
        vertex: Complex64,
        aperture: f64,
    },
    /// `ℂ ∖ {iy : y ≤ 0}`.
    SlitPlane,
}

impl DomainSpec {
    pub fn vertical_sector(vertex: Complex64, aperture: f64) -> Result<Self, DomainError> {
        if !(aperture > 0.0 && aperture < PI) || !vertex.re.is_finite() || !vertex.im.is_finite() {
            return Err(DomainError::InvalidSector(format!(
                "aperture {aperture} must lie in (0, π) with a finite vertex"
            )));
        }
        Ok(DomainSpec::VerticalSector { vertex, aperture })
    }

    /// Whether the domain lies inside the right half-plane.
    pub fn within_right_half_plane(&self) -> bool {
        match self {
            DomainSpec::Step(_) | DomainSpec::Graph(_) | DomainSpec::HalfPlane => true,
            DomainSpec::VerticalSector { vertex, .. } => vertex.re >= 0.0,
            DomainSpec::SlitPlane => false,
        }
    }
}

impl Region for DomainSpec {
    fn contains(&self, z: Complex64) -> bool {
        contains(self, z)
    }
}

/// Membership test.
pub fn contains(d: &DomainSpec, z: Complex64) -> bool {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return false;
    }
    match d {
        DomainSpec::Step(s) => s.contains(z),
        DomainSpec::Graph(g) => g.contains(z),
        DomainSpec::HalfPlane => z.re > 0.0,
        DomainSpec::VerticalSector { vertex, aperture } => {
            let rel = z - vertex;
            if rel.re == 0.0 && rel.im == 0.0 {
                return false;
            }
            let arg = rel.im.atan2(rel.re);
            arg > FRAC_PI_2 - aperture && arg < FRAC_PI_2
        }
        DomainSpec::SlitPlane => !(z.re == 0.0 && z.im <= 0.0),
    }
}

/// Start of the real half-line inside the domain: `(x, ∞) ⊂ Ω`, with `x`
/// itself excluded. `None` when no real half-line is contained.
pub fn real_ray_start(d: &DomainSpec) -> Option<f64> {
    match d {
        DomainSpec::HalfPlane | DomainSpec::SlitPlane | DomainSpec::Step(_) => Some(0.0),
        DomainSpec::Graph(g) => match g.family() {
            GraphFamily::XLogEps { .. } => Some(1.0),
            GraphFamily::Power { .. } => Some(0.0),
            GraphFamily::Table { knots, slope } => table_ray_start(knots, *slope),
        },
        DomainSpec::VerticalSector { vertex, aperture } => {
            // real points x with arg(x − p) in the opening; the half-line exists
            // only when the direction 0 is admitted
            let open_at_zero = *aperture > FRAC_PI_2 || (*aperture == FRAC_PI_2 && vertex.im < 0.0);
            if !open_at_zero {
                return None;
            }
            if vertex.im <= 0.0 {
                Some(vertex.re)
            } else {
                Some(vertex.re + vertex.im * (PI - aperture).tan())
            }
        }
    }
}

fn table_ray_start(knots: &[(f64, f64)], slope: f64) -> Option<f64> {
    let (xn, gn) = knots[knots.len() - 1];
    if slope < 0.0 || (slope == 0.0 && gn <= 0.0) {
        return None;
    }
    if gn <= 0.0 {
        return Some(xn - gn / slope);
    }
    for i in (0..knots.len() - 1).rev() {
        let (x0, g0) = knots[i];
        let (x1, g1) = knots[i + 1];
        if g0 <= 0.0 {
            // g1 > 0 here
            return Some(x0 + (0.0 - g0) * (x1 - x0) / (g1 - g0));
        }
    }
    if knots[0].1 <= 0.0 {
        Some(knots[0].0)
    } else {
        Some(0.0)
    }
}

/// Boundary depth `b(x) = inf{y > 0 : x − iy ∉ Ω_*}` of the starlike-ification
/// `Ω_* = {z ∈ Ω : z + t ∈ Ω for all t ≥ 0}`.
///
/// For subgraph domains this is the running infimum `inf_{x′ ≥ x} g(x′)`
/// clipped at zero.
pub fn bstar_height(d: &DomainSpec, x: f64) -> Result<f64, DomainError> {
    if !contains(d, Complex64::new(x, 0.0)) {
        return Err(DomainError::RayNotContained(x));
    }
    let h = match d {
        DomainSpec::HalfPlane | DomainSpec::SlitPlane => f64::INFINITY,
        DomainSpec::Step(s) => s.depth_at(x),
        DomainSpec::Graph(g) => match g.family() {
            // g increases on [1, ∞) and vanishes at 1
            GraphFamily::XLogEps { .. } => {
                if x >= 1.0 {
                    g.g(x)
                } else {
                    0.0
                }
            }
            GraphFamily::Power { .. } => g.g(x),
            GraphFamily::Table { knots, slope } => {
                if *slope < 0.0 {
                    0.0
                } else {
                    knots.iter().filter(|k| k.0 >= x).map(|k| k.1).fold(g.g(x), f64::min)
                }
            }
        },
        DomainSpec::VerticalSector { vertex, aperture } => {
            if *aperture >= FRAC_PI_2 {
                // the lower edge descends (or stays level) to the right
                -(vertex.im + (x - vertex.re) * (FRAC_PI_2 - aperture).tan())
            } else {
                0.0
            }
        }
    };
    Ok(h.max(0.0))
}

/// Outcome of the inner-tangent search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TangentCertificate {
    pub beta: f64,
    pub radius: f64,
    /// Whether a closed-form comparison of the boundary with the cone backs
    /// the sampled check.
    pub analytic: bool,
}

const TANGENT_GRID: usize = 1024;
const CONE_ANGLES: usize = 64;
const CONE_RADII: usize = 256;

/// Smallest `r` such that the cone boundary comparison holds: `Some(None)`
/// when the comparison shows no radius works, `None` when the variant has no
/// closed form.
fn analytic_tangent_radius(d: &DomainSpec, beta: f64) -> Option<Option<f64>> {
    let tan_b = beta.tan();
    let cos_b = beta.cos();
    match d {
        DomainSpec::HalfPlane | DomainSpec::SlitPlane => Some(Some(0.0)),
        DomainSpec::Step(s) => {
            let last_bad = (1..=s.steps()).filter(|&k| s.a[k] * tan_b > s.b[k - 1]).map(|k| s.a[k]).fold(0.0, f64::max);
            Some(Some(last_bad / cos_b))
        }
        DomainSpec::Graph(g) => match g.family() {
            GraphFamily::XLogEps { eps } => {
                let level = tan_b.powf(1.0 / (1.0 + eps));
                Some(Some(level.exp() / cos_b))
            }
            GraphFamily::Power { p, c } => {
                if *p > 1.0 {
                    let x = (tan_b / c).powf(1.0 / (p - 1.0));
                    Some(Some(x / cos_b))
                } else if *p == 1.0 && *c >= tan_b {
                    Some(Some(0.0))
                } else {
                    Some(None)
                }
            }
            GraphFamily::Table { .. } => None,
        },
        DomainSpec::VerticalSector { aperture, .. } => {
            if *aperture <= FRAC_PI_2 + beta {
                Some(None)
            } else {
                None
            }
        }
    }
}

fn cone_sample_contained(d: &DomainSpec, beta: f64, r: f64, outer: f64) -> bool {
    let inner = r * (1.0 + 1e-9) + f64::MIN_POSITIVE;
    let radii = crate::numerics::log_space(inner.max(1e-12), outer.max(inner * 2.0), CONE_RADII);
    (0..CONE_ANGLES).all(|j| {
        let phi = -beta + 2.0 * beta * j as f64 / (CONE_ANGLES - 1) as f64;
        let dir = Complex64::from_polar(1.0, phi);
        radii.iter().all(|&rho| contains(d, dir * rho))
    })
}

/// Certifies that the cone `Γ(β, r) = {Re z > 0, |arg z| < β, |z| > r}` lies in
/// the domain, returning the smallest certified radius on the grid
/// `search_max · i / 1024`.
pub fn inner_tangent_radius(d: &DomainSpec, beta: f64, search_max: f64) -> Result<TangentCertificate, DomainError> {
    if !(beta > 0.0 && beta < FRAC_PI_2) {
        return Err(DomainError::BadAngle(beta));
    }
    let not_found = DomainError::NotFound { beta, search_max };
    let grid = |i: usize| search_max * i as f64 / TANGENT_GRID as f64;
    let outer = 10.0 * search_max;
    match analytic_tangent_radius(d, beta) {
        Some(None) => Err(not_found),
        Some(Some(r_exact)) => {
            if r_exact > search_max {
                return Err(not_found);
            }
            let start = (1..=TANGENT_GRID).find(|&i| grid(i) >= r_exact).ok_or_else(|| not_found.clone())?;
            (start..=TANGENT_GRID)
                .find(|&i| cone_sample_contained(d, beta, grid(i), outer))
                .map(|i| TangentCertificate { beta, radius: grid(i), analytic: true })
                .ok_or(not_found)
        }
        None => {
            if !cone_sample_contained(d, beta, grid(TANGENT_GRID), outer) {
                return Err(not_found);
            }
            // the cones shrink as r grows, so the sampled predicate is monotone
            let (mut lo, mut hi) = (0usize, TANGENT_GRID);
            while hi - lo > 1 {
                let mid = (lo + hi) / 2;
                if cone_sample_contained(d, beta, grid(mid), outer) {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            let i = if lo >= 1 && cone_sample_contained(d, beta, grid(lo), outer) { lo } else { hi };
            Ok(TangentCertificate { beta, radius: grid(i), analytic: false })
        }
    }
}

/// Angular march step for [`eta`].
pub const ETA_MARCH_STEP: f64 = PI / 256.0;

fn sweep<R: Region + ?Sized>(region: &R, r: f64, sign: f64, limit: f64, tol: f64) -> Result<f64, DomainError> {
    let point = |phi: f64| Complex64::from_polar(r, sign * phi);
    let mut inside = 0.0;
    while inside < limit {
        let next = (inside + ETA_MARCH_STEP).min(limit);
        if !region.contains(point(next)) {
            return bisect_predicate(|phi| region.contains(point(phi)), inside, next, tol, 200)
                .ok_or_else(|| DomainError::BudgetExceeded(format!("angular bisection at r = {r}")));
        }
        inside = next;
    }
    Ok(limit)
}

/// Angular measure of the arc of `Ω ∩ {|z| = r}` through the point `r`,
/// i.e. its Euclidean length divided by `r`.
pub fn eta_region<R: Region + ?Sized>(region: &R, r: f64, tol: f64) -> Result<f64, DomainError> {
    let start = Complex64::new(r, 0.0);
    if !(r > 0.0) || !region.contains(start) {
        return Err(not_in_domain(start));
    }
    let up = sweep(region, r, 1.0, TAU, tol)?;
    if up >= TAU {
        return Ok(TAU);
    }
    let down = sweep(region, r, -1.0, TAU - up, tol)?;
    Ok(up + down)
}

pub fn eta(d: &DomainSpec, r: f64, tol: f64) -> Result<f64, DomainError> {
    eta_region(d, r, tol)
}

/// Sampled map `r ↦ η_Ω(r)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EtaProfile {
    pub radii: Vec<f64>,
    pub eta: Vec<f64>,
    pub tolerance: f64,
}

pub fn eta_profile(d: &DomainSpec, radii: &[f64], tol: f64) -> Result<EtaProfile, DomainError> {
    let eta = radii.iter().map(|&r| eta(d, r, tol)).collect::<Result<Vec<_>, _>>()?;
    Ok(EtaProfile { radii: radii.to_vec(), eta, tolerance: tol })
}

/// `cₖ = |aₖ₋₁ − i bₖ|` and `dₖ = |aₖ − i bₖ|` for `k = 1..K`.
pub fn cd_sequences(s: &StepDomain) -> (Vec<f64>, Vec<f64>) {
    let c = (0..s.steps()).map(|i| s.a[i].hypot(s.b[i])).collect();
    let d = (0..s.steps()).map(|i| s.a[i + 1].hypot(s.b[i])).collect();
    (c, d)
}

/// Closed form of `η_Σ(r)` on a step domain, valid for `r ≥ c₁`.
///
/// On `[cₖ, dₖ]` the arc ends on the floor of `Sₖ`, so
/// `π − η = arctan(√(r² − bₖ²)/bₖ)`; on `[dₖ, cₖ₊₁]` it ends on the right wall
/// `Re z = aₖ`, so `π − η = arctan(aₖ/√(r² − aₖ²))`.
pub fn eta_step_closed_form(s: &StepDomain, r: f64) -> Result<f64, DomainError> {
    let (c, d) = cd_sequences(s);
    if !(r >= c[0]) {
        return Err(DomainError::RadiusTooSmall { r, c1: c[0] });
    }
    // last k with c_k ≤ r
    let k = c.partition_point(|&ck| ck <= r) - 1;
    let deficit = if r <= d[k] {
        let b = s.b[k];
        (((r - b) * (r + b)).max(0.0).sqrt() / b).atan()
    } else {
        let a = s.a[k + 1];
        (a / ((r - a) * (r + a)).sqrt()).atan()
    };
    Ok(PI - deficit)
}

/// Boundary distances of `p + it` to the right and to the left of
/// `Re ζ = Re p`, each clipped by `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeltaSample {
    pub t: f64,
    pub delta_plus: f64,
    pub delta_minus: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Side {
    Right(f64),
    Left(f64),
}

impl Side {
    fn admits(self, x: f64) -> bool {
        match self {
            Side::Right(c) => x >= c,
            Side::Left(c) => x <= c,
        }
    }
}

#[derive(Debug, Clone)]
enum BoundaryPiece {
    /// `origin + s·dir` for `s ∈ [0, len]`, `dir` a unit vector.
    Line { origin: Complex64, dir: Complex64, len: f64 },
    /// `x − i g(x)` for `x > 0`.
    Curve,
}

fn segment(p0: Complex64, p1: Complex64) -> BoundaryPiece {
    let v = p1 - p0;
    let len = v.norm();
    BoundaryPiece::Line { origin: p0, dir: v / len, len }
}

fn ray(origin: Complex64, dir: Complex64) -> BoundaryPiece {
    BoundaryPiece::Line { origin, dir: dir / dir.norm(), len: f64::INFINITY }
}

fn boundary_pieces(d: &DomainSpec) -> Vec<BoundaryPiece> {
    let i = Complex64::i();
    let c = |re: f64, im: f64| Complex64::new(re, im);
    match d {
        DomainSpec::HalfPlane => vec![ray(c(0.0, 0.0), i), ray(c(0.0, 0.0), -i)],
        DomainSpec::SlitPlane => vec![ray(c(0.0, 0.0), -i)],
        DomainSpec::VerticalSector { vertex, aperture } => {
            vec![ray(*vertex, i), ray(*vertex, Complex64::from_polar(1.0, FRAC_PI_2 - aperture))]
        }
        DomainSpec::Step(s) => {
            let mut out = vec![ray(c(0.0, -s.b[0]), i)];
            for k in 0..s.steps() {
                out.push(segment(c(s.a[k], -s.b[k]), c(s.a[k + 1], -s.b[k])));
                if k + 1 < s.steps() {
                    if s.b[k + 1] > s.b[k] {
                        out.push(segment(c(s.a[k + 1], -s.b[k]), c(s.a[k + 1], -s.b[k + 1])));
                    }
                } else {
                    out.push(ray(c(s.a[k + 1], -s.b[k]), -i));
                }
            }
            out
        }
        DomainSpec::Graph(g) => {
            let g0 = g.g_at_zero();
            let mut out = vec![ray(c(0.0, -g0), i)];
            match g.family() {
                GraphFamily::Table { knots, slope } => {
                    let (x0, y0) = knots[0];
                    out.push(segment(c(0.0, -y0), c(x0, -y0)));
                    for w in knots.windows(2) {
                        out.push(segment(c(w[0].0, -w[0].1), c(w[1].0, -w[1].1)));
                    }
                    let (xn, yn) = knots[knots.len() - 1];
                    out.push(ray(c(xn, -yn), c(1.0, -slope)));
                }
                _ => out.push(BoundaryPiece::Curve),
            }
            out
        }
    }
}

fn line_distance(q: Complex64, origin: Complex64, dir: Complex64, len: f64, side: Side) -> f64 {
    // parameter range where the side constraint holds
    let (mut lo, mut hi) = (0.0f64, len);
    let (c, right) = match side {
        Side::Right(c) => (c, true),
        Side::Left(c) => (c, false),
    };
    if dir.re == 0.0 {
        if !side.admits(origin.re) {
            return f64::INFINITY;
        }
    } else {
        let s_c = (c - origin.re) / dir.re;
        // Re(origin + s·dir) ≥ c  ⇔  s ≥ s_c when dir.re > 0
        if (dir.re > 0.0) == right {
            lo = lo.max(s_c);
        } else {
            hi = hi.min(s_c);
        }
    }
    if lo > hi {
        return f64::INFINITY;
    }
    let v = q - origin;
    let s = (v.re * dir.re + v.im * dir.im).clamp(lo, hi);
    (q - (origin + dir * s)).norm()
}

const CURVE_SAMPLES: usize = 2048;

fn curve_distance(q: Complex64, g: &GraphDomain, side: Side, bound: f64) -> f64 {
    let dist = |x: f64| (q - Complex64::new(x, -g.g(x))).norm();
    let mut lo = (q.re - bound).max(0.0);
    let mut hi = q.re + bound;
    match side {
        Side::Right(c) => lo = lo.max(c),
        Side::Left(c) => hi = hi.min(c),
    }
    if !(hi > lo) {
        return if hi == lo && lo > 0.0 { dist(lo) } else { f64::INFINITY };
    }
    let lo_eff = if lo == 0.0 { hi * 1e-12 } else { lo };
    let xs = crate::numerics::lin_space(lo_eff, hi, CURVE_SAMPLES);
    let (best_i, best) =
        xs.iter()
            .map(|&x| dist(x))
            .enumerate()
            .fold((0, f64::INFINITY), |acc, (i, v)| if v < acc.1 { (i, v) } else { acc });
    let a = xs[best_i.saturating_sub(1)];
    let b = xs[(best_i + 1).min(xs.len() - 1)];
    let (_, refined) = golden_section_min(dist, a, b, 1e-12 * (1.0 + hi));
    refined.min(best)
}

fn side_distance(d: &DomainSpec, pieces: &[BoundaryPiece], q: Complex64, side: Side) -> f64 {
    let mut best = pieces
        .iter()
        .filter_map(|piece| match piece {
            BoundaryPiece::Line { origin, dir, len } => Some(line_distance(q, *origin, *dir, *len, side)),
            BoundaryPiece::Curve => None,
        })
        .fold(f64::INFINITY, f64::min);
    if let DomainSpec::Graph(g) = d {
        if pieces.iter().any(|p| matches!(p, BoundaryPiece::Curve)) {
            // the boundary point straight below q bounds the search window
            if side.admits(q.re) && q.re > 0.0 {
                best = best.min(q.im + g.g(q.re));
            }
            if best.is_finite() {
                best = best.min(curve_distance(q, g, side, best));
            }
        }
    }
    best
}

/// `δ±_p(t) = min{δ̃±_p(t), t}`.
pub fn delta_pm(d: &DomainSpec, p: Complex64, t: f64) -> Result<DeltaSample, DomainError> {
    if !contains(d, p) {
        return Err(not_in_domain(p));
    }
    let t = t.max(0.0);
    if t == 0.0 {
        return Ok(DeltaSample { t, delta_plus: 0.0, delta_minus: 0.0 });
    }
    let q = p + Complex64::new(0.0, t);
    let pieces = boundary_pieces(d);
    let plus = side_distance(d, &pieces, q, Side::Right(p.re));
    let minus = side_distance(d, &pieces, q, Side::Left(p.re));
    Ok(DeltaSample { t, delta_plus: plus.min(t), delta_minus: minus.min(t) })
}

/// How orbits approach the Denjoy–Wolff point, read off from `δ⁺/δ⁻`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConvergenceMode {
    NonTangential,
    /// `δ⁺/δ⁻ → ∞`, slope `−π/2`.
    TangentialMinus,
    /// `δ⁺/δ⁻ → 0`, slope `π/2`.
    TangentialPlus,
    Undetermined,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeThresholds {
    pub upper: f64,
    pub lower: f64,
}

impl Default for ModeThresholds {
    fn default() -> Self {
        ModeThresholds { upper: 1e3, lower: 1e-3 }
    }
}

/// Classifies the approach mode from the tail (last half) of `δ⁺/δ⁻` on the
/// grid.
pub fn classify_convergence_mode(
    d: &DomainSpec,
    p: Complex64,
    t_grid: &[f64],
    thresholds: ModeThresholds,
) -> Result<ConvergenceMode, DomainError> {
    if !contains(d, p) {
        return Err(not_in_domain(p));
    }
    let mut ratios = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let s = delta_pm(d, p, t)?;
        if s.delta_plus > 0.0 && s.delta_minus > 0.0 {
            ratios.push(s.delta_plus / s.delta_minus);
        }
    }
    if ratios.len() < 2 {
        return Ok(ConvergenceMode::Undetermined);
    }
    let tail = &ratios[ratios.len() / 2..];
    let last = *tail.last().unwrap();
    let slack = 1e-12;
    let nondecreasing = tail.windows(2).all(|w| w[1] >= w[0] * (1.0 - slack));
    let nonincreasing = tail.windows(2).all(|w| w[1] <= w[0] * (1.0 + slack));
    let mode = if last > thresholds.upper && nondecreasing {
        ConvergenceMode::TangentialMinus
    } else if last < thresholds.lower && nonincreasing {
        ConvergenceMode::TangentialPlus
    } else if tail.iter().all(|&r| r >= thresholds.lower && r <= thresholds.upper) {
        ConvergenceMode::NonTangential
    } else {
        ConvergenceMode::Undetermined
    };
    Ok(mode)
}
