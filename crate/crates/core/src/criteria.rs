//! Finite-shift decisions.
//!
//! A parabolic semigroup of positive hyperbolic step has finite shift exactly
//! when its Koenigs domain is fat enough below the real axis. Three numerical
//! witnesses of this are provided: the boundary-height series
//! `∑ 1/b(j)`, the arc integral `∫ (1/η(r) − 1/π) dr/r`, and for step domains
//! the series `∑ (aₖ − aₖ₋₁)/bₖ`. Finite data never decides convergence by
//! itself, so each witness combines its partial value with a declared
//! [`TailModel`]; only tails that are consistent with the data certify a
//! verdict.

use std::f64::consts::{FRAC_PI_4, PI};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::domains::{
    bstar_height, cd_sequences, eta, eta_step_closed_form, inner_tangent_radius, real_ray_start, DomainError,
    DomainSpec, GraphFamily, StepDomain, TangentCertificate,
};
use crate::numerics::{adaptive_simpson, lin_space, log_space};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CriteriaError {
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("boundary height vanishes at j = {j}")]
    ZeroHeight { j: u64 },
    #[error("η = {0} is outside (π/2, π]")]
    EtaOutOfRange(f64),
    #[error("step index {k} is outside 1..={steps}")]
    IndexOutOfRange { k: usize, steps: usize },
    #[error("at least two steps are required")]
    TooFewSteps,
    #[error("partition satisfies neither gap hypothesis: {0}")]
    BadPartition(String),
    #[error("quadrature budget exhausted after {panels} panels")]
    BudgetExceeded { panels: usize },
    #[error("invalid tail model: {0}")]
    InvalidTail(String),
    #[error(transparent)]
    Domain(#[from] DomainError),
}

/// Behavior of `1/b(x)` beyond the data, as a density in `x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ClosedFormTail {
    /// `1/(x (log x)^{1+ε})`
    XLogEps { eps: f64 },
    /// `1/(x^p (log x)^q)`
    PowerLog { p: f64, q: f64 },
    /// `ratioˣ`
    Geometric { ratio: f64 },
    /// No further obstacles: the terms are zero.
    Vanishing,
}

impl ClosedFormTail {
    fn validate(&self) -> Result<(), CriteriaError> {
        let ok = match *self {
            ClosedFormTail::XLogEps { eps } => eps.is_finite() && eps >= 0.0,
            ClosedFormTail::PowerLog { p, q } => p.is_finite() && p > 0.0 && q.is_finite(),
            ClosedFormTail::Geometric { ratio } => ratio.is_finite() && ratio > 0.0,
            ClosedFormTail::Vanishing => true,
        };
        if ok {
            Ok(())
        } else {
            Err(CriteriaError::InvalidTail(format!("{self:?}")))
        }
    }

    /// Model value of `1/b(x)`, up to a constant factor.
    fn density(&self, x: f64) -> f64 {
        match *self {
            ClosedFormTail::XLogEps { eps } => 1.0 / (x * x.ln().powf(1.0 + eps)),
            ClosedFormTail::PowerLog { p, q } => 1.0 / (x.powf(p) * x.ln().powf(q)),
            ClosedFormTail::Geometric { ratio } => ratio.powf(x),
            ClosedFormTail::Vanishing => 0.0,
        }
    }

    /// Exponents `(κ, q)` such that, in `u = log x` (for the series) or
    /// `u = log r` (for the arc integral), the tail integrand behaves like
    /// `e^{−κu} u^{−q}`.
    fn series_exponents(&self) -> (f64, f64) {
        match *self {
            ClosedFormTail::XLogEps { eps } => (0.0, 1.0 + eps),
            ClosedFormTail::PowerLog { p, q } => (p - 1.0, q),
            ClosedFormTail::Geometric { ratio } => {
                if ratio < 1.0 {
                    (f64::INFINITY, 0.0)
                } else {
                    (-1.0, 0.0)
                }
            }
            ClosedFormTail::Vanishing => (f64::INFINITY, 0.0),
        }
    }

    /// The arc deficit `π − η(r)` is about `x(r)/r` where `x(r)` inverts the
    /// boundary depth `b`; for `b(x) = x^p (log x)^q` this is
    /// `e^{(1/p − 1)u} u^{−q/p}` up to constants.
    fn integral_exponents(&self) -> (f64, f64) {
        match *self {
            ClosedFormTail::XLogEps { eps } => (0.0, 1.0 + eps),
            ClosedFormTail::PowerLog { p, q } => (1.0 - 1.0 / p, q / p),
            ClosedFormTail::Geometric { ratio } => {
                if ratio < 1.0 {
                    (1.0, -1.0)
                } else {
                    (0.0, 0.0)
                }
            }
            ClosedFormTail::Vanishing => (1.0, 0.0),
        }
    }
}

/// Declared extrapolation beyond the computed range.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum TailModel {
    ClosedForm(ClosedFormTail),
    /// Fit `b(x) ≈ C x^p (log x)^q` on the last `window` data points.
    PowerLogFit {
        window: usize,
    },
    None,
}

impl TailModel {
    pub fn validate(&self) -> Result<(), CriteriaError> {
        match self {
            TailModel::ClosedForm(cf) => cf.validate(),
            TailModel::PowerLogFit { window } if *window < MIN_FIT_WINDOW => {
                Err(CriteriaError::InvalidTail(format!("fit window {window} is below {MIN_FIT_WINDOW}")))
            }
            _ => Ok(()),
        }
    }
}

/// The tail assumed when none is given: the closed forms the graph families
/// carry, nothing for tabulated data.
pub fn default_tail(d: &DomainSpec) -> TailModel {
    match d {
        DomainSpec::Graph(g) => match g.family() {
            GraphFamily::XLogEps { eps } => TailModel::ClosedForm(ClosedFormTail::XLogEps { eps: *eps }),
            GraphFamily::Power { p, .. } => TailModel::ClosedForm(ClosedFormTail::PowerLog { p: *p, q: 0.0 }),
            GraphFamily::Table { .. } => TailModel::None,
        },
        DomainSpec::HalfPlane => TailModel::ClosedForm(ClosedFormTail::Vanishing),
        DomainSpec::VerticalSector { aperture, .. } if *aperture > std::f64::consts::FRAC_PI_2 => {
            TailModel::ClosedForm(ClosedFormTail::PowerLog { p: 1.0, q: 0.0 })
        }
        _ => TailModel::None,
    }
}

pub const MIN_FIT_WINDOW: usize = 8;
/// Largest ratio spread tolerated between data and a closed-form series tail,
/// over the upper half of the data in log scale.
pub const SERIES_CONSISTENCY: f64 = 1.5;
/// Largest ratio spread tolerated between integral increments and the model.
pub const INTEGRAL_CONSISTENCY: f64 = 8.0;
/// Points used for the series consistency check.
pub const CONSISTENCY_WINDOW: usize = 16;
/// Fits with a larger RMS residual in log coordinates certify nothing.
pub const FIT_RESIDUAL: f64 = 1e-3;
/// Fitted exponents within this distance of a convergence boundary are not
/// decided.
pub const FIT_MARGIN: f64 = 0.05;
/// Fitted leading exponents within this distance of the boundary are read as
/// lying on it, and the logarithmic exponent decides.
pub const FIT_ON_BOUNDARY: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TailVerdict {
    Convergent,
    Divergent,
    Unknown,
}

/// Integral test on `∫^∞ e^{−κu} u^{−q} du`.
fn integral_test(kappa: f64, q: f64) -> TailVerdict {
    if kappa > 0.0 || (kappa == 0.0 && q > 1.0) {
        TailVerdict::Convergent
    } else {
        TailVerdict::Divergent
    }
}

/// Same test on fitted exponents, leaving a band around the boundary open.
fn fitted_integral_test(kappa: f64, q: f64) -> TailVerdict {
    if kappa > FIT_MARGIN {
        TailVerdict::Convergent
    } else if kappa < -FIT_MARGIN {
        TailVerdict::Divergent
    } else if kappa.abs() <= FIT_ON_BOUNDARY {
        if q > 1.0 + FIT_MARGIN {
            TailVerdict::Convergent
        } else if q < 1.0 - FIT_MARGIN {
            TailVerdict::Divergent
        } else {
            TailVerdict::Unknown
        }
    } else {
        TailVerdict::Unknown
    }
}

/// Least squares for `y ≈ c₀ + c₁ f₁ + c₂ f₂`, returning the coefficients and
/// the RMS residual.
fn fit3(f1: &[f64], f2: &[f64], y: &[f64]) -> Option<([f64; 3], f64)> {
    let n = y.len();
    let rows: Vec<[f64; 3]> = (0..n).map(|i| [1.0, f1[i], f2[i]]).collect();
    let mut m = [[0.0; 4]; 3];
    for (row, &yi) in rows.iter().zip(y) {
        for r in 0..3 {
            for c in 0..3 {
                m[r][c] += row[r] * row[c];
            }
            m[r][3] += row[r] * yi;
        }
    }
    // Gaussian elimination with partial pivoting
    for col in 0..3 {
        let pivot = (col..3).max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))?;
        if m[pivot][col].abs() < 1e-300 {
            return None;
        }
        m.swap(col, pivot);
        for r in 0..3 {
            if r != col {
                let factor = m[r][col] / m[col][col];
                let pivot_row = m[col];
                for (x, p) in m[r].iter_mut().zip(pivot_row).skip(col) {
                    *x -= factor * p;
                }
            }
        }
    }
    let coef = [m[0][3] / m[0][0], m[1][3] / m[1][1], m[2][3] / m[2][2]];
    if coef.iter().any(|c| !c.is_finite()) {
        return None;
    }
    let sse: f64 =
        rows.iter().zip(y).map(|(row, &yi)| (yi - coef[0] - coef[1] * row[1] - coef[2] * row[2]).powi(2)).sum();
    Some((coef, (sse / n as f64).sqrt()))
}

/// A data point of a series: abscissa, boundary height, and summand weight.
#[derive(Debug, Clone, Copy)]
struct Datum {
    x: f64,
    height: f64,
    weight: f64,
}

/// Decides the tail of `∑ weight/height` past the data.
fn series_tail(data: &[Datum], tail: &TailModel) -> (TailVerdict, String) {
    let finite: Vec<Datum> = data.iter().copied().filter(|d| d.height.is_finite()).collect();
    match tail {
        TailModel::None => (TailVerdict::Unknown, "no tail model declared".into()),
        TailModel::ClosedForm(ClosedFormTail::Vanishing) => {
            let window = &data[data.len().saturating_sub(CONSISTENCY_WINDOW)..];
            if window.iter().all(|d| d.height.is_infinite()) {
                (TailVerdict::Convergent, "terms vanish past the data, the series is a finite sum".into())
            } else {
                (TailVerdict::Unknown, "a vanishing tail was declared but the last terms are nonzero".into())
            }
        }
        TailModel::ClosedForm(cf) => {
            let comparable: Vec<Datum> = finite
                .iter()
                .copied()
                .filter(|d| {
                    let model = cf.density(d.x);
                    model.is_finite() && model > 0.0 && (1.0 / (d.height * model)).is_normal()
                })
                .collect();
            // the weights cancel: Σ w/b is compared with Σ w·density
            let ratios: Vec<f64> = pick_log_spaced(&comparable, CONSISTENCY_WINDOW)
                .iter()
                .map(|d| 1.0 / (d.height * cf.density(d.x)))
                .collect();
            if ratios.len() < 4 {
                return (TailVerdict::Unknown, format!("too few data points to check the {cf:?} tail"));
            }
            let spread =
                ratios.iter().cloned().fold(0.0, f64::max) / ratios.iter().cloned().fold(f64::INFINITY, f64::min);
            if spread > SERIES_CONSISTENCY {
                return (
                    TailVerdict::Unknown,
                    format!("declared {cf:?} tail disagrees with the data (ratio spread {spread:.3e})"),
                );
            }
            let (kappa, q) = cf.series_exponents();
            (integral_test(kappa, q), format!("closed-form {cf:?} tail, integral test on (κ, q) = ({kappa}, {q})"))
        }
        TailModel::PowerLogFit { window } => {
            let usable: Vec<Datum> = finite.into_iter().filter(|d| d.x > 1.0 && d.height > 0.0).collect();
            let picked = pick_log_spaced(&usable, *window);
            if picked.len() < MIN_FIT_WINDOW {
                return (TailVerdict::Unknown, format!("only {} usable points for the fit", picked.len()));
            }
            let lx: Vec<f64> = picked.iter().map(|d| d.x.ln()).collect();
            let llx: Vec<f64> = lx.iter().map(|v| v.ln()).collect();
            let y: Vec<f64> = picked.iter().map(|d| d.height.ln()).collect();
            match fit3(&lx, &llx, &y) {
                Some((c, rms)) if rms < FIT_RESIDUAL => {
                    let (p, q) = (c[1], c[2]);
                    (fitted_integral_test(p - 1.0, q), format!("fit b ≈ C x^{p:.6} (log x)^{q:.6}, rms {rms:.3e}"))
                }
                Some((_, rms)) => (TailVerdict::Unknown, format!("fit residual {rms:.3e} too large")),
                None => (TailVerdict::Unknown, "singular fit".into()),
            }
        }
    }
}

/// Up to `n` points of the upper half (in log scale) of the data, spread
/// evenly in `log x`.
fn pick_log_spaced(data: &[Datum], n: usize) -> Vec<Datum> {
    let (Some(first), Some(last)) = (data.first(), data.last()) else {
        return Vec::new();
    };
    let lo = (first.x * last.x).sqrt();
    let tail: Vec<Datum> = data.iter().copied().filter(|d| d.x >= lo).collect();
    if tail.len() <= n {
        return tail;
    }
    let mut out: Vec<Datum> = Vec::with_capacity(n);
    for target in log_space(tail[0].x, tail[tail.len() - 1].x, n) {
        let i = tail.partition_point(|d| d.x < target).min(tail.len() - 1);
        if out.last().is_none_or(|d: &Datum| d.x < tail[i].x) {
            out.push(tail[i]);
        }
    }
    out
}

/// Partial sums of a boundary-height series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesReport {
    pub j0: u64,
    /// `(J, S_J)` at `J − j0 + 1 ∈ {1, 10, 100, …}` and at the last index.
    pub partial_sums: Vec<(u64, f64)>,
    pub tail_verdict: TailVerdict,
    pub tail_rationale: String,
}

impl SeriesReport {
    pub fn total(&self) -> f64 {
        self.partial_sums.last().map_or(0.0, |p| p.1)
    }
}

fn accumulate(j0: u64, terms: impl Iterator<Item = f64>) -> Vec<(u64, f64)> {
    let mut sums = Vec::new();
    let mut total = 0.0;
    let mut next_mark = 1u64;
    let mut count = 0u64;
    for term in terms {
        total += term;
        count += 1;
        if count == next_mark {
            sums.push((j0 + count - 1, total));
            next_mark = next_mark.saturating_mul(10);
        }
    }
    if count > 0 && sums.last().map(|s| s.0) != Some(j0 + count - 1) {
        sums.push((j0 + count - 1, total));
    }
    sums
}

/// The cone half-angles at which the inner tangent is certified.
pub const CONE_WITNESSES: [f64; 2] = [FRAC_PI_4, 3.0 * PI / 8.0];
/// Default search bound for the inner-tangent radius.
pub const DEFAULT_SEARCH_MAX: f64 = 1e3;

/// Smallest admissible starting index: the first integer `j ≥ 1` with
/// `[j, ∞)` inside the domain.
pub fn default_j0(d: &DomainSpec) -> Option<u64> {
    real_ray_start(d).map(|x| if x < 1.0 { 1 } else { x.floor() as u64 + 1 })
}

fn certify_cone(d: &DomainSpec, beta: f64, search_max: f64) -> Result<TangentCertificate, CriteriaError> {
    inner_tangent_radius(d, beta, search_max)
        .map_err(|e| CriteriaError::PreconditionFailed(format!("inner tangent at β = {beta}: {e}")))
}

/// `∑_{j ≥ j0} 1/b(j)` up to `jmax`, with the tail decided by `tail`.
pub fn series_criterion(d: &DomainSpec, j0: u64, jmax: u64, tail: &TailModel) -> Result<SeriesReport, CriteriaError> {
    series_criterion_with(d, j0, jmax, tail, DEFAULT_SEARCH_MAX)
}

pub fn series_criterion_with(
    d: &DomainSpec,
    j0: u64,
    jmax: u64,
    tail: &TailModel,
    search_max: f64,
) -> Result<SeriesReport, CriteriaError> {
    tail.validate()?;
    certify_cone(d, FRAC_PI_4, search_max)?;
    let min_j0 =
        default_j0(d).ok_or_else(|| CriteriaError::PreconditionFailed("no real half-line in the domain".into()))?;
    if j0 < min_j0 {
        return Err(CriteriaError::PreconditionFailed(format!(
            "j0 = {j0} is below the first admissible index {min_j0}"
        )));
    }
    if jmax < j0 + 100 {
        return Err(CriteriaError::PreconditionFailed(format!("jmax = {jmax} must be at least j0 + 100")));
    }
    let mut data = Vec::with_capacity((jmax - j0 + 1) as usize);
    for j in j0..=jmax {
        let height = bstar_height(d, j as f64)?;
        if height == 0.0 {
            return Err(CriteriaError::ZeroHeight { j });
        }
        data.push(Datum { x: j as f64, height, weight: 1.0 });
    }
    let partial_sums = accumulate(j0, data.iter().map(|p| 1.0 / p.height));
    let (tail_verdict, tail_rationale) = series_tail(&data, tail);
    Ok(SeriesReport { j0, partial_sums, tail_verdict, tail_rationale })
}

/// `∑ (aₖ − aₖ₋₁)/bₖ` over the given steps.
pub fn step_series(s: &StepDomain, tail: &TailModel) -> Result<SeriesReport, CriteriaError> {
    tail.validate()?;
    let (a, b) = (s.a(), s.b());
    let data: Vec<Datum> =
        (1..=s.steps()).map(|k| Datum { x: a[k], height: b[k - 1], weight: a[k] - a[k - 1] }).collect();
    let partial_sums = accumulate(1, data.iter().map(|p| p.weight / p.height));
    let (tail_verdict, tail_rationale) = match tail {
        // the step list is all there is
        TailModel::ClosedForm(ClosedFormTail::Vanishing) => {
            (TailVerdict::Convergent, "no steps past the data, the series is a finite sum".to_string())
        }
        _ => series_tail(&data, tail),
    };
    Ok(SeriesReport { j0: 1, partial_sums, tail_verdict, tail_rationale })
}

/// Bounds `(π − η)/π² ≤ 1/η − 1/π ≤ 2(π − η)/π²` for `η ∈ (π/2, π]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegrandBracket {
    pub lower: f64,
    /// `1/η − 1/π`, evaluated as `(π − η)/(πη)`.
    pub value: f64,
    pub upper: f64,
}

pub fn integrand_bracket(eta: f64) -> Result<IntegrandBracket, CriteriaError> {
    let half = 0.5 * PI;
    if !(eta > half && eta <= PI) {
        return Err(CriteriaError::EtaOutOfRange(eta));
    }
    let deficit = PI - eta;
    let pi2 = PI * PI;
    Ok(IntegrandBracket { lower: deficit / pi2, value: deficit / (PI * eta), upper: deficit / (pi2 * 0.5) })
}

/// Truncated arc integral with a bracket for the remainder.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntegralReport {
    pub r0: f64,
    pub r_max: f64,
    /// `∫_{r0}^{Rmax} (1/η(r) − 1/π) dr/r`
    pub partial_integral: f64,
    pub lower_tail: f64,
    pub upper_tail: f64,
    /// Verdict on the remainder from the declared tail.
    pub trend_verdict: TailVerdict,
    pub trend_rationale: String,
    pub panels: usize,
}

pub const QUADRATURE_BUDGET: usize = 1_000_000;
const TREND_PIECES: usize = 8;

fn step_eta(s: &StepDomain, c1: f64, r: f64) -> f64 {
    if r < c1 {
        PI
    } else {
        eta_step_closed_form(s, r).unwrap_or(PI)
    }
}

/// `∫ (1/η(e^u) − 1/π) du` on `[u_lo, u_hi]`.
fn arc_integral(d: &DomainSpec, u_lo: f64, u_hi: f64, tol: f64) -> Result<(f64, usize), CriteriaError> {
    let eta_tol = (tol * 1e-2).clamp(1e-13, 1e-10);
    let mut failure = None;
    let integrand = |u: f64| {
        let r = u.exp();
        let e = match d {
            DomainSpec::Step(s) => Ok(step_eta(s, s.b()[0], r)),
            DomainSpec::HalfPlane => Ok(PI),
            _ => eta(d, r, eta_tol),
        };
        match e {
            Ok(e) => (PI - e) / (PI * e),
            Err(err) => {
                failure.get_or_insert(err);
                0.0
            }
        }
    };
    let q = adaptive_simpson(integrand, u_lo, u_hi, tol, 64, QUADRATURE_BUDGET)
        .map_err(|b| CriteriaError::BudgetExceeded { panels: b.panels })?;
    if let Some(err) = failure {
        return Err(err.into());
    }
    Ok((q.value, q.panels))
}

fn model_increment(kappa: f64, q: f64, u_lo: f64, u_hi: f64) -> f64 {
    adaptive_simpson(|u: f64| (-kappa * u).exp() * u.powf(-q), u_lo, u_hi, 1e-14, 16, 100_000)
        .map(|r| r.value)
        .unwrap_or(f64::NAN)
}

fn remainder_bracket(d: &DomainSpec, r_max: f64, tail: &TailModel) -> (f64, f64) {
    match (d, tail) {
        (DomainSpec::HalfPlane, _) => (0.0, 0.0),
        (DomainSpec::Step(s), TailModel::ClosedForm(ClosedFormTail::Vanishing)) => {
            let (_, dk) = cd_sequences(s);
            if r_max >= dk[dk.len() - 1] {
                // past the last corner π − η = arcsin(a_K/r)
                let a_last = s.a()[s.steps()];
                (a_last / (PI * PI * r_max), a_last / (PI * r_max))
            } else {
                (0.0, f64::INFINITY)
            }
        }
        _ => (0.0, f64::INFINITY),
    }
}

/// Arc integral from `r0` to `Rmax` in `u = log r`, plus a verdict on its
/// remainder from the declared tail.
pub fn karamanlis_integral(
    d: &DomainSpec,
    r0: f64,
    r_max: f64,
    tol: f64,
    tail: &TailModel,
) -> Result<IntegralReport, CriteriaError> {
    karamanlis_integral_with(d, r0, r_max, tol, tail, DEFAULT_SEARCH_MAX)
}

pub fn karamanlis_integral_with(
    d: &DomainSpec,
    r0: f64,
    r_max: f64,
    tol: f64,
    tail: &TailModel,
    search_max: f64,
) -> Result<IntegralReport, CriteriaError> {
    tail.validate()?;
    match d {
        DomainSpec::SlitPlane => {
            return Err(CriteriaError::PreconditionFailed("the domain is not contained in the right half-plane".into()))
        }
        DomainSpec::VerticalSector { vertex, .. } if vertex.re != 0.0 => {
            return Err(CriteriaError::PreconditionFailed(
                "the smallest vertical half-plane containing the domain must be the right half-plane".into(),
            ))
        }
        _ => {}
    }
    certify_cone(d, FRAC_PI_4, search_max)?;
    let start =
        real_ray_start(d).ok_or_else(|| CriteriaError::PreconditionFailed("no real half-line in the domain".into()))?;
    if !(r0 > start) {
        return Err(CriteriaError::PreconditionFailed(format!("r0 = {r0} must exceed the ray start {start}")));
    }
    if !(r_max > 10.0 * r0) || !r_max.is_finite() {
        return Err(CriteriaError::PreconditionFailed(format!("Rmax = {r_max} must exceed 10·r0")));
    }
    if !(tol > 0.0) {
        return Err(CriteriaError::PreconditionFailed(format!("tolerance {tol} must be positive")));
    }
    let (u0, u_max) = (r0.ln(), r_max.ln());
    let u_mid = (0.5 * u_max).max(u0 + 0.5 * (u_max - u0));
    let pieces = lin_space(u_mid, u_max, TREND_PIECES + 1);
    let piece_tol = tol / (TREND_PIECES + 1) as f64;
    let (head, mut panels) = arc_integral(d, u0, u_mid, piece_tol)?;
    let mut increments = Vec::with_capacity(TREND_PIECES);
    for w in pieces.windows(2) {
        let (v, p) = arc_integral(d, w[0], w[1], piece_tol)?;
        increments.push(v);
        panels += p;
    }
    let partial_integral = head + increments.iter().sum::<f64>();
    let (lower_tail, upper_tail) = remainder_bracket(d, r_max, tail);
    let (trend_verdict, trend_rationale) = integral_trend(tail, &pieces, &increments, upper_tail);
    Ok(IntegralReport { r0, r_max, partial_integral, lower_tail, upper_tail, trend_verdict, trend_rationale, panels })
}

fn integral_trend(tail: &TailModel, pieces: &[f64], increments: &[f64], upper_tail: f64) -> (TailVerdict, String) {
    match tail {
        TailModel::None => (TailVerdict::Unknown, "no tail model declared".into()),
        TailModel::ClosedForm(ClosedFormTail::Vanishing) => {
            if upper_tail.is_finite() {
                (TailVerdict::Convergent, format!("remainder bounded by {upper_tail:.6e}"))
            } else {
                (TailVerdict::Unknown, "a vanishing tail needs Rmax past the last step corner".into())
            }
        }
        TailModel::ClosedForm(cf) => {
            let (kappa, q) = cf.integral_exponents();
            let ratios: Vec<f64> = pieces
                .windows(2)
                .zip(increments)
                .map(|(w, &inc)| inc / model_increment(kappa, q, w[0], w[1]))
                .collect();
            let valid = ratios.iter().all(|r| r.is_finite() && *r > 0.0);
            let spread = if valid {
                ratios.iter().cloned().fold(0.0, f64::max) / ratios.iter().cloned().fold(f64::INFINITY, f64::min)
            } else {
                f64::INFINITY
            };
            if spread > INTEGRAL_CONSISTENCY {
                return (
                    TailVerdict::Unknown,
                    format!("declared {cf:?} tail disagrees with the increments (ratio spread {spread:.3e})"),
                );
            }
            (
                integral_test(kappa, q),
                format!("closed-form {cf:?} tail, increments follow e^(-{kappa}u) u^(-{q}) within {spread:.3}"),
            )
        }
        TailModel::PowerLogFit { .. } => {
            // fit the mean integrand on each piece: log f ≈ c − κu − q log u
            let mids: Vec<f64> = pieces.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
            let y: Vec<f64> = pieces.windows(2).zip(increments).map(|(w, &inc)| (inc / (w[1] - w[0])).ln()).collect();
            if y.iter().any(|v| !v.is_finite()) {
                return (TailVerdict::Unknown, "vanishing increments cannot be fitted".into());
            }
            let logs: Vec<f64> = mids.iter().map(|u| u.ln()).collect();
            match fit3(&mids, &logs, &y) {
                Some((c, rms)) if rms < FIT_RESIDUAL => {
                    let (kappa, q) = (-c[1], -c[2]);
                    (fitted_integral_test(kappa, q), format!("fit e^(-{kappa:.6}u) u^(-{q:.6}), rms {rms:.3e}"))
                }
                Some((_, rms)) => (TailVerdict::Unknown, format!("fit residual {rms:.3e} too large")),
                None => (TailVerdict::Unknown, "singular fit".into()),
            }
        }
    }
}

/// `∫_{lo}^{hi} (π − η(r)) dr/r` on a step domain, in `u = log r`.
pub fn deficit_integral(s: &StepDomain, lo: f64, hi: f64, tol: f64) -> Result<f64, CriteriaError> {
    let c1 = s.b()[0];
    let q = adaptive_simpson(|u: f64| PI - step_eta(s, c1, u.exp()), lo.ln(), hi.ln(), tol, 16, QUADRATURE_BUDGET)
        .map_err(|b| CriteriaError::BudgetExceeded { panels: b.panels })?;
    Ok(q.value)
}

/// Bounds for `∫ (π − η)/r dr` over `[cₖ, dₖ]` and `[dₖ, cₖ₊₁]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SandwichBracket {
    pub k: usize,
    pub first: (f64, f64),
    pub second: (f64, f64),
    pub lower: f64,
    pub upper: f64,
    /// `bₖ ≥ √3 aₖ` and `2bₖ > cₖ`; outside this range the bracket is only
    /// indicative.
    pub conditions_met: bool,
}

/// Bracket for step `k` (1-based) over `[cₖ, cₖ₊₁]`, with `cₖ₊₁ = ∞` for the
/// last step.
pub fn step_integral_sandwich(s: &StepDomain, k: usize) -> Result<SandwichBracket, CriteriaError> {
    let steps = s.steps();
    if k == 0 || k > steps {
        return Err(CriteriaError::IndexOutOfRange { k, steps });
    }
    let (c, d) = cd_sequences(s);
    let (a, b) = (s.a(), s.b());
    let (ck, dk) = (c[k - 1], d[k - 1]);
    let inv_next = if k < steps { 1.0 / c[k] } else { 0.0 };
    let w1 = 1.0 / ck - 1.0 / dk;
    let w2 = 1.0 / dk - inv_next;
    let first = (FRAC_PI_4 * w1 * a[k - 1], 2.0 * w1 * a[k]);
    let second = (FRAC_PI_4 * w2 * a[k], 2.0 * w2 * a[k]);
    let conditions_met = b[k - 1] >= 3f64.sqrt() * a[k] && 2.0 * b[k - 1] > ck;
    Ok(SandwichBracket { k, first, second, lower: first.0 + second.0, upper: first.1 + second.1, conditions_met })
}

/// `Σ′ = Σ(a′ₖ, b′ₖ)` with `a′ = (0, a₂, …, a_K)` and `b′ = (b₁, …, b_{K−1})`.
pub fn sigma_prime(s: &StepDomain) -> Result<StepDomain, CriteriaError> {
    if s.steps() < 2 {
        return Err(CriteriaError::TooFewSteps);
    }
    let mut a = vec![0.0];
    a.extend_from_slice(&s.a()[2..]);
    let b = s.b()[..s.steps() - 1].to_vec();
    Ok(StepDomain::new(a, b)?)
}

/// Largest gap ratio accepted by either partition hypothesis.
pub const PARTITION_BOUND: f64 = 1e3;

/// Series over an arbitrary partition `x₀ < x₁ < …` of the real half-line:
/// `∑ 1/b(xₖ)` when the gaps are comparable to each other, otherwise
/// `∑ (xₖ − xₖ₋₁)/b(xₖ)` when consecutive gaps grow boundedly.
pub fn generalized_partition_series(
    d: &DomainSpec,
    partition: &[f64],
    tail: &TailModel,
) -> Result<SeriesReport, CriteriaError> {
    tail.validate()?;
    if partition.len() < 3 || partition.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(CriteriaError::BadPartition("need at least three strictly increasing points".into()));
    }
    let gaps: Vec<f64> = partition.windows(2).map(|w| w[1] - w[0]).collect();
    let (gmin, gmax) = gaps.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &g| (lo.min(g), hi.max(g)));
    let bounded_gaps = gmax / gmin <= PARTITION_BOUND;
    let growth = gaps.windows(2).map(|w| w[1] / w[0]).fold(0.0, f64::max);
    let tame_growth = growth <= PARTITION_BOUND;
    if !bounded_gaps && !tame_growth {
        return Err(CriteriaError::BadPartition(format!(
            "gap spread {:.3e} and consecutive gap ratio {growth:.3e} both exceed {PARTITION_BOUND:e}",
            gmax / gmin
        )));
    }
    let mut data = Vec::with_capacity(partition.len());
    for (i, &x) in partition.iter().enumerate() {
        let height = bstar_height(d, x)?;
        if height == 0.0 {
            return Err(CriteriaError::ZeroHeight { j: i as u64 });
        }
        let weight = if bounded_gaps || i == 0 { 1.0 } else { gaps[i - 1] };
        data.push(Datum { x, height, weight });
    }
    // the first weighted term has no left gap; it is dropped
    let data = if bounded_gaps { data } else { data[1..].to_vec() };
    let partial_sums = accumulate(0, data.iter().map(|p| p.weight / p.height));
    let (tail_verdict, tail_rationale) = series_tail(&data, tail);
    Ok(SeriesReport { j0: 0, partial_sums, tail_verdict, tail_rationale })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Decision {
    FiniteShift,
    InfiniteShift,
    Inconclusive,
}

/// One criterion's contribution to a verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evidence {
    pub criterion: String,
    pub partial_value: f64,
    pub tail_bracket: (f64, f64),
    pub verdict: TailVerdict,
    pub rationale: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShiftVerdict {
    pub decision: Decision,
    pub evidence: Vec<Evidence>,
    pub preconditions_met: bool,
    pub diagnostics: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifyOptions {
    /// Declared tail; the domain's default when absent.
    pub tail: Option<TailModel>,
    pub j0: Option<u64>,
    pub jmax: u64,
    pub r0: Option<f64>,
    pub r_max: f64,
    pub tol: f64,
    pub search_max: f64,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            tail: None,
            j0: None,
            jmax: 100_000,
            r0: None,
            r_max: 1e4,
            tol: 1e-8,
            search_max: DEFAULT_SEARCH_MAX,
        }
    }
}

fn evidence_from_error(criterion: &str, err: &CriteriaError) -> Evidence {
    Evidence {
        criterion: criterion.into(),
        partial_value: f64::NAN,
        tail_bracket: (0.0, f64::INFINITY),
        verdict: TailVerdict::Unknown,
        rationale: err.to_string(),
    }
}

fn series_evidence(criterion: &str, result: Result<SeriesReport, CriteriaError>) -> Evidence {
    match result {
        Ok(r) => Evidence {
            criterion: criterion.into(),
            partial_value: r.total(),
            tail_bracket: (0.0, f64::INFINITY),
            verdict: r.tail_verdict,
            rationale: r.tail_rationale,
        },
        Err(CriteriaError::ZeroHeight { j }) => Evidence {
            criterion: criterion.into(),
            partial_value: f64::INFINITY,
            tail_bracket: (0.0, 0.0),
            verdict: TailVerdict::Divergent,
            rationale: format!("boundary height vanishes at {j}, the term is infinite"),
        },
        Err(e) => evidence_from_error(criterion, &e),
    }
}

/// Runs every applicable criterion and reconciles the results.
pub fn classify_shift(d: &DomainSpec, opts: &ClassifyOptions) -> ShiftVerdict {
    let mut evidence = Vec::new();
    let mut diagnostics = Vec::new();
    if let DomainSpec::SlitPlane = d {
        evidence.push(Evidence {
            criterion: "hyperbolic step".into(),
            partial_value: 0.0,
            tail_bracket: (0.0, 0.0),
            verdict: TailVerdict::Divergent,
            rationale: "the vertical translates of the domain cover the plane: zero hyperbolic step".into(),
        });
        return ShiftVerdict { decision: Decision::InfiniteShift, evidence, preconditions_met: false, diagnostics };
    }
    let mut cone_radius: f64 = 0.0;
    for beta in CONE_WITNESSES {
        match certify_cone(d, beta, opts.search_max) {
            Ok(c) => cone_radius = cone_radius.max(c.radius),
            Err(e) => {
                evidence.push(Evidence {
                    criterion: "inner tangent".into(),
                    partial_value: f64::NAN,
                    tail_bracket: (0.0, 0.0),
                    verdict: TailVerdict::Divergent,
                    rationale: format!("{e}; the domain contains no vertical semi-sector"),
                });
                return ShiftVerdict {
                    decision: Decision::InfiniteShift,
                    evidence,
                    preconditions_met: false,
                    diagnostics,
                };
            }
        }
    }
    diagnostics.push(format!(
        "inner tangent certified at half-angles π/4 and 3π/8 up to radius {cone_radius}; wider cones are not checked"
    ));
    let tail = opts.tail.unwrap_or_else(|| default_tail(d));

    let j0 = opts.j0.or_else(|| default_j0(d)).unwrap_or(1);
    let jmax = opts.jmax.max(j0 + 100);
    evidence
        .push(series_evidence("boundary-height series", series_criterion_with(d, j0, jmax, &tail, opts.search_max)));

    let r0 = opts.r0.unwrap_or_else(|| {
        let start = real_ray_start(d).unwrap_or(0.0);
        cone_radius.max(start + 1.0)
    });
    match karamanlis_integral_with(d, r0, opts.r_max, opts.tol, &tail, opts.search_max) {
        Ok(r) => evidence.push(Evidence {
            criterion: "arc integral".into(),
            partial_value: r.partial_integral,
            tail_bracket: (r.lower_tail, r.upper_tail),
            verdict: r.trend_verdict,
            rationale: r.trend_rationale,
        }),
        Err(e) => evidence.push(evidence_from_error("arc integral", &e)),
    }

    if let DomainSpec::Step(s) = d {
        evidence.push(series_evidence("step series", step_series(s, &tail)));
    }

    let certified: Vec<TailVerdict> =
        evidence.iter().map(|e| e.verdict).filter(|v| *v != TailVerdict::Unknown).collect();
    let decision = if certified.is_empty() {
        Decision::Inconclusive
    } else if certified.iter().all(|v| *v == TailVerdict::Convergent) {
        Decision::FiniteShift
    } else if certified.iter().all(|v| *v == TailVerdict::Divergent) {
        Decision::InfiniteShift
    } else {
        diagnostics.push("criteria disagree; this indicates a numerical failure".into());
        Decision::Inconclusive
    };
    ShiftVerdict { decision, evidence, preconditions_met: true, diagnostics }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domains::GraphDomain;
    use num_complex::Complex64;

    fn step(a: &[f64], b: &[f64]) -> StepDomain {
        StepDomain::new(a.to_vec(), b.to_vec()).unwrap()
    }

    fn xlog(eps: f64) -> DomainSpec {
        DomainSpec::Graph(GraphDomain::xlog(eps).unwrap())
    }

    fn log_family(k_max: usize, s: f64) -> StepDomain {
        let a: Vec<f64> = (0..=k_max).map(|k| k as f64).collect();
        let b: Vec<f64> = (1..=k_max).map(|k| k as f64 * ((k + 1) as f64).ln().powf(s)).collect();
        step(&a, &b)
    }

    #[test]
    fn series_examples() {
        let tail0 = default_tail(&xlog(0.0));
        let r = series_criterion(&xlog(0.0), 2, 10_000, &tail0).unwrap();
        assert_eq!(r.tail_verdict, TailVerdict::Divergent);
        assert_eq!(r.j0, 2);
        let r = series_criterion(&xlog(0.5), 2, 10_000, &default_tail(&xlog(0.5))).unwrap();
        assert_eq!(r.tail_verdict, TailVerdict::Convergent);
        assert!(r.partial_sums.windows(2).all(|w| w[1].1 >= w[0].1 && w[1].0 > w[0].0));
        assert_eq!(r.partial_sums[0].0, 2);
        assert_eq!(r.partial_sums.last().unwrap().0, 10_000);
    }

    #[test]
    fn geometric_step_series() {
        let k = 40;
        let a: Vec<f64> = (0..=k).map(|i| i as f64).collect();
        let b: Vec<f64> = (1..=k).map(|i| 2f64.powi(i)).collect();
        let d = DomainSpec::Step(step(&a, &b));
        let tail = TailModel::ClosedForm(ClosedFormTail::Geometric { ratio: 0.5 });
        let r = series_criterion(&d, 1, 200, &tail).unwrap();
        assert_eq!(r.tail_verdict, TailVerdict::Convergent);
        assert!((r.total() - 1.0).abs() < 1e-11);
    }

    #[test]
    fn series_preconditions() {
        let tail = TailModel::None;
        assert!(matches!(series_criterion(&xlog(0.0), 1, 1000, &tail), Err(CriteriaError::PreconditionFailed(_))));
        assert!(matches!(series_criterion(&xlog(0.0), 2, 50, &tail), Err(CriteriaError::PreconditionFailed(_))));
        let sector = DomainSpec::vertical_sector(Complex64::new(1.0, 0.0), PI / 6.0).unwrap();
        assert!(matches!(series_criterion(&sector, 2, 500, &tail), Err(CriteriaError::PreconditionFailed(_))));
        assert!(TailModel::PowerLogFit { window: 4 }.validate().is_err());
    }

    #[test]
    fn zero_height() {
        // b vanishes on (0, 1) where the boundary climbs back to the axis at 1
        let d = xlog(0.0);
        match generalized_partition_series(&d, &[0.5, 0.6, 0.7], &TailModel::None) {
            Err(CriteriaError::ZeroHeight { j }) => assert_eq!(j, 0),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn step_series_examples() {
        let tail2 = TailModel::ClosedForm(ClosedFormTail::PowerLog { p: 1.0, q: 2.0 });
        let r = step_series(&log_family(2000, 2.0), &tail2).unwrap();
        assert_eq!(r.tail_verdict, TailVerdict::Convergent);
        let tail1 = TailModel::ClosedForm(ClosedFormTail::PowerLog { p: 1.0, q: 1.0 });
        let r = step_series(&log_family(2000, 1.0), &tail1).unwrap();
        assert_eq!(r.tail_verdict, TailVerdict::Divergent);
        let r = step_series(&step(&[0.0, 1.0], &[1.0]), &TailModel::None).unwrap();
        assert_eq!(r.partial_sums, vec![(1, 1.0)]);
        assert_eq!(r.tail_verdict, TailVerdict::Unknown);
        // a declared tail that contradicts the data is not trusted
        let r = step_series(&log_family(2000, 1.0), &tail2).unwrap();
        assert_eq!(r.tail_verdict, TailVerdict::Unknown);
    }

    #[test]
    fn power_log_fit() {
        let fit = TailModel::PowerLogFit { window: 16 };
        let r = series_criterion(&xlog(1.0), 2, 20_000, &fit).unwrap();
        assert_eq!(r.tail_verdict, TailVerdict::Convergent, "{}", r.tail_rationale);
        let r = series_criterion(&xlog(0.0), 2, 20_000, &fit).unwrap();
        assert_eq!(r.tail_verdict, TailVerdict::Unknown, "{}", r.tail_rationale);
        let p = DomainSpec::Graph(GraphDomain::new(GraphFamily::Power { p: 1.5, c: 2.0 }).unwrap());
        let r = series_criterion(&p, 1, 5_000, &fit).unwrap();
        assert_eq!(r.tail_verdict, TailVerdict::Convergent, "{}", r.tail_rationale);
    }

    #[test]
    fn fit3_recovers_coefficients() {
        let xs: Vec<f64> = (1..20).map(|i| i as f64).collect();
        let f1: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
        let f2: Vec<f64> = xs.iter().map(|x| x.sqrt()).collect();
        let y: Vec<f64> = (0..xs.len()).map(|i| 0.5 + 2.0 * f1[i] - 3.0 * f2[i]).collect();
        let (c, rms) = fit3(&f1, &f2, &y).unwrap();
        assert!((c[0] - 0.5).abs() < 1e-9 && (c[1] - 2.0).abs() < 1e-9 && (c[2] + 3.0).abs() < 1e-9);
        assert!(rms < 1e-12);
    }

    #[test]
    fn bracket_examples() {
        let b = integrand_bracket(PI).unwrap();
        assert_eq!((b.lower, b.value, b.upper), (0.0, 0.0, 0.0));
        let b = integrand_bracket(0.5 * PI + 1e-12).unwrap();
        assert!((b.lower - 1.0 / (2.0 * PI)).abs() < 1e-11);
        assert!((b.upper - 1.0 / PI).abs() < 1e-11);
        assert!(b.lower <= b.value && b.value <= b.upper);
        let b = integrand_bracket(0.75 * PI).unwrap();
        assert!((b.value - 1.0 / (3.0 * PI)).abs() < 1e-15);
        assert!((b.lower - 1.0 / (4.0 * PI)).abs() < 1e-15);
        assert!((b.upper - 1.0 / (2.0 * PI)).abs() < 1e-15);
        assert!(integrand_bracket(0.5 * PI).is_err());
        assert!(integrand_bracket(3.2).is_err());
    }

    #[test]
    fn integral_examples() {
        let hp =
            karamanlis_integral(&DomainSpec::HalfPlane, 1.0, 1e4, 1e-8, &default_tail(&DomainSpec::HalfPlane)).unwrap();
        assert_eq!(hp.partial_integral, 0.0);
        assert_eq!((hp.lower_tail, hp.upper_tail), (0.0, 0.0));
        assert_eq!(hp.trend_verdict, TailVerdict::Convergent);

        let s = step(&[0.0, 1.0], &[1.0]);
        let r = karamanlis_integral(&DomainSpec::Step(s.clone()), 1.0, 1e3, 1e-10, &TailModel::None).unwrap();
        assert!(r.partial_integral > 0.0 && r.partial_integral.is_finite());
        // the integrand is squeezed between (π − η)/π² and 2(π − η)/π²
        let deficit = deficit_integral(&s, 1.0, 1e3, 1e-12).unwrap();
        assert!(r.partial_integral >= deficit / (PI * PI) - 1e-9);
        assert!(r.partial_integral <= 2.0 * deficit / (PI * PI) + 1e-9);
        let sw = step_integral_sandwich(&s, 1).unwrap();
        assert!(deficit <= sw.upper + 1e-6);

        let d = xlog(0.0);
        let tail = default_tail(&d);
        let partials: Vec<IntegralReport> =
            [1e2, 1e3, 1e4].iter().map(|&rm| karamanlis_integral(&d, 2.0, rm, 1e-8, &tail).unwrap()).collect();
        assert!(partials.windows(2).all(|w| w[1].partial_integral > w[0].partial_integral));
        assert!(partials.iter().all(|p| p.upper_tail.is_infinite()));
        assert_eq!(partials[2].trend_verdict, TailVerdict::Divergent, "{}", partials[2].trend_rationale);
    }

    #[test]
    fn integral_preconditions() {
        let t = TailModel::None;
        assert!(karamanlis_integral(&DomainSpec::SlitPlane, 1.0, 1e3, 1e-8, &t).is_err());
        assert!(karamanlis_integral(&xlog(0.0), 1.0, 1e3, 1e-8, &t).is_err());
        assert!(karamanlis_integral(&xlog(0.0), 2.0, 15.0, 1e-8, &t).is_err());
    }

    #[test]
    fn sandwich_examples() {
        let s = step(&[0.0, 3.0], &[4.0]);
        let b = step_integral_sandwich(&s, 1).unwrap();
        assert!((b.first.1 - 0.3).abs() < 1e-15);
        assert_eq!(b.first.0, 0.0);
        let s = step(&[0.0, 1.0, 2.0], &[4.0, 8.0]);
        let b = step_integral_sandwich(&s, 1).unwrap();
        let expected = FRAC_PI_4 * (1.0 / 17f64.sqrt() - 1.0 / 65f64.sqrt());
        assert!((b.second.0 - expected).abs() < 1e-15);
        assert!(b.conditions_met);
        assert!(matches!(step_integral_sandwich(&s, 3), Err(CriteriaError::IndexOutOfRange { .. })));
        assert!(matches!(step_integral_sandwich(&s, 0), Err(CriteriaError::IndexOutOfRange { .. })));
    }

    #[test]
    fn sigma_prime_examples() {
        let sp = sigma_prime(&step(&[0.0, 1.0, 2.0, 3.0], &[1.0, 2.0, 3.0])).unwrap();
        assert_eq!((sp.a(), sp.b()), (&[0.0, 2.0, 3.0][..], &[1.0, 2.0][..]));
        let sp = sigma_prime(&step(&[0.0, 1.0, 2.0], &[1.0, 2.0])).unwrap();
        assert_eq!((sp.a(), sp.b()), (&[0.0, 2.0][..], &[1.0][..]));
        assert_eq!(sigma_prime(&step(&[0.0, 1.0], &[1.0])), Err(CriteriaError::TooFewSteps));
    }

    #[test]
    fn classify_examples() {
        let opts = ClassifyOptions::default();
        assert_eq!(classify_shift(&xlog(0.0), &opts).decision, Decision::InfiniteShift);
        assert_eq!(classify_shift(&xlog(1.0), &opts).decision, Decision::FiniteShift);
        let sector = DomainSpec::vertical_sector(Complex64::new(1.0, 0.0), PI / 6.0).unwrap();
        let v = classify_shift(&sector, &opts);
        assert_eq!(v.decision, Decision::InfiniteShift);
        assert!(!v.preconditions_met);
        assert_eq!(classify_shift(&DomainSpec::SlitPlane, &opts).decision, Decision::InfiniteShift);
        assert_eq!(classify_shift(&DomainSpec::HalfPlane, &opts).decision, Decision::FiniteShift);
        let s = DomainSpec::Step(step(&[0.0, 1.0], &[1.0]));
        assert_eq!(classify_shift(&s, &opts).decision, Decision::Inconclusive);
    }

    #[test]
    fn partition_examples() {
        let d = xlog(0.0);
        let tail = default_tail(&d);
        let unit: Vec<f64> = (2..=5000).map(|j| j as f64).collect();
        let p = generalized_partition_series(&d, &unit, &tail).unwrap();
        let s = series_criterion(&d, 2, 5000, &tail).unwrap();
        assert_eq!(p.total(), s.total());
        assert_eq!(p.tail_verdict, s.tail_verdict);

        let d1 = xlog(1.0);
        let geometric: Vec<f64> = (1..=40).map(|k| 2f64.powi(k)).collect();
        let p = generalized_partition_series(&d1, &geometric, &default_tail(&d1)).unwrap();
        assert_eq!(p.tail_verdict, TailVerdict::Convergent, "{}", p.tail_rationale);

        let bad = [2.0, 3.0, 4.0, 4.0 + 1e6, 4.0 + 2e6];
        assert!(matches!(generalized_partition_series(&d, &bad, &tail), Err(CriteriaError::BadPartition(_))));
    }
}
