//! Command-line front end.
//!
//! A run is described by a JSON config; results are written as canonical JSON
//! (sorted keys, `%.17g` numbers, non-finite numbers as the strings `"inf"`,
//! `"-inf"`, `"nan"`) or as CSV for the table-shaped commands.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, ValueEnum};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::criteria::{
    classify_shift, default_j0, default_tail, karamanlis_integral_with, series_criterion_with, ClassifyOptions,
    ClosedFormTail, CriteriaError, Decision, Evidence, IntegralReport, SeriesReport, ShiftVerdict, TailModel,
    TailVerdict, DEFAULT_SEARCH_MAX,
};
use crate::domains::{
    classify_convergence_mode, delta_pm, eta_profile, inner_tangent_radius, real_ray_start, ConvergenceMode,
    DomainError, DomainSpec, GraphDomain, GraphFamily, ModeThresholds, StepDomain,
};
use crate::hypgeom::{cayley, BoundaryPoint, DiscPoint};
use crate::models::{speeds, ModelError, ModelSemigroup};
use crate::numerics::{lin_space, log_space};

pub const DEFAULT_TOL: f64 = 1e-8;
pub const DEFAULT_JMAX: u64 = 100_000;
pub const DEFAULT_RMAX: f64 = 1e4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Classify,
    Eta,
    Series,
    Integral,
    Orbit,
    Speeds,
    Delta,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Classify => "classify",
            Command::Eta => "eta",
            Command::Series => "series",
            Command::Integral => "integral",
            Command::Orbit => "orbit",
            Command::Speeds => "speeds",
            Command::Delta => "delta",
        }
    }

    fn uses_model(self) -> bool {
        matches!(self, Command::Orbit | Command::Speeds)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CliError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("invalid value for `{key}`: {message}")]
    Validation { key: String, message: String },
    #[error("{0}")]
    Criteria(#[from] CriteriaError),
    #[error("{0}")]
    Domain(#[from] DomainError),
    #[error("{0}")]
    Model(#[from] ModelError),
    #[error("{0}")]
    Usage(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    fn kind(&self) -> &'static str {
        match self {
            CliError::Parse { .. } => "ParseError",
            CliError::Validation { .. } => "ValidationError",
            CliError::Criteria(_) => "CriteriaError",
            CliError::Domain(_) => "DomainError",
            CliError::Model(_) => "ModelError",
            CliError::Usage(_) => "UsageError",
            CliError::Io(_) => "IoError",
        }
    }

    /// Machine-readable error payload.
    pub fn to_json(&self) -> Value {
        let mut body = Map::new();
        body.insert("kind".into(), json!(self.kind()));
        body.insert("message".into(), json!(self.to_string()));
        match self {
            CliError::Parse { line, column, .. } => {
                body.insert("line".into(), json!(line));
                body.insert("column".into(), json!(column));
            }
            CliError::Validation { key, .. } => {
                body.insert("key".into(), json!(key));
            }
            _ => {}
        }
        json!({ "error": Value::Object(body) })
    }
}

fn invalid(key: &str, message: impl Into<String>) -> CliError {
    CliError::Validation { key: key.into(), message: message.into() }
}

/// A number or a `[re, im]` pair; `p` is an exponent for power graphs and a
/// vertex for sectors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Number(f64),
    Pair([f64; 2]),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainConfig {
    #[serde(rename = "type")]
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<Scalar>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub knots: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slope: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    #[serde(rename = "type")]
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TailConfig {
    #[serde(rename = "type")]
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ratio: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<usize>,
}

/// Either explicit `values` or `n` points from `start` to `end`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub end: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    /// `log` (default) or `linear`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spacing: Option<String>,
}

impl GridConfig {
    pub fn log(start: f64, end: f64, n: usize) -> Self {
        GridConfig { values: None, start: Some(start), end: Some(end), n: Some(n), spacing: Some("log".into()) }
    }

    fn points(&self, key: &str) -> Result<Vec<f64>, CliError> {
        let pts = match (&self.values, self.start, self.end, self.n) {
            (Some(v), None, None, None) if self.spacing.is_none() => v.clone(),
            (None, Some(start), Some(end), Some(n)) => {
                if n == 0 {
                    return Err(invalid(&format!("{key}.n"), "must be at least 1"));
                }
                match self.spacing.as_deref().unwrap_or("log") {
                    "log" => {
                        if !(start > 0.0) {
                            return Err(invalid(&format!("{key}.start"), "log spacing needs a positive start"));
                        }
                        log_space(start, end, n)
                    }
                    "linear" => lin_space(start, end, n),
                    other => return Err(invalid(&format!("{key}.spacing"), format!("unknown spacing `{other}`"))),
                }
            }
            _ => return Err(invalid(key, "give either `values` or all of `start`, `end`, `n`")),
        };
        if pts.is_empty() || pts.iter().any(|x| !x.is_finite()) {
            return Err(invalid(key, "grid must be nonempty and finite"));
        }
        if pts.windows(2).any(|w| w[0] > w[1]) {
            return Err(invalid(key, "grid must be nondecreasing"));
        }
        Ok(pts)
    }
}

fn default_tol() -> f64 {
    DEFAULT_TOL
}
fn default_jmax() -> u64 {
    DEFAULT_JMAX
}
fn default_rmax() -> f64 {
    DEFAULT_RMAX
}
fn default_search_max() -> f64 {
    DEFAULT_SEARCH_MAX
}

/// A validated run description. Serializing it gives the config echo.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<DomainConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail: Option<TailConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j0: Option<u64>,
    #[serde(default = "default_jmax")]
    pub jmax: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r0: Option<f64>,
    #[serde(default = "default_rmax")]
    pub rmax: f64,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_search_max")]
    pub search_max: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_grid: Option<GridConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radii: Option<GridConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point: Option<[f64; 2]>,
}

fn parse_error(e: serde_json::Error) -> CliError {
    let message = e.to_string();
    // serde reports unknown keys as "unknown field `name`, expected ..."
    if let Some(rest) = message.strip_prefix("unknown field `") {
        if let Some(end) = rest.find('`') {
            return invalid(&rest[..end], format!("unknown key ({message})"));
        }
    }
    CliError::Parse { line: e.line(), column: e.column(), message }
}

/// Parses and validates a JSON config.
pub fn parse_config(text: &[u8]) -> Result<RunConfig, CliError> {
    let cfg: RunConfig = serde_json::from_slice(text).map_err(parse_error)?;
    cfg.validate()?;
    Ok(cfg)
}

fn forbid<T>(value: &Option<T>, key: &str, context: &str) -> Result<(), CliError> {
    if value.is_some() {
        Err(invalid(key, format!("not allowed {context}")))
    } else {
        Ok(())
    }
}

fn need<T: Clone>(value: &Option<T>, key: &str) -> Result<T, CliError> {
    value.clone().ok_or_else(|| invalid(key, "required"))
}

fn finite(x: f64, key: &str) -> Result<f64, CliError> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(invalid(key, "must be finite"))
    }
}

impl DomainConfig {
    pub fn to_spec(&self) -> Result<DomainSpec, CliError> {
        let ctx = format!("for domain type `{}`", self.kind);
        let only = |allowed: &[&str]| -> Result<(), CliError> {
            let present = [
                ("a", self.a.is_some()),
                ("b", self.b.is_some()),
                ("family", self.family.is_some()),
                ("eps", self.eps.is_some()),
                ("p", self.p.is_some()),
                ("c", self.c.is_some()),
                ("knots", self.knots.is_some()),
                ("slope", self.slope.is_some()),
                ("alpha", self.alpha.is_some()),
            ];
            match present.iter().find(|(k, set)| *set && !allowed.contains(k)) {
                Some((k, _)) => Err(invalid(&format!("domain.{k}"), format!("not allowed {ctx}"))),
                None => Ok(()),
            }
        };
        match self.kind.as_str() {
            "step" => {
                only(&["a", "b"])?;
                let a = need(&self.a, "domain.a")?;
                let b = need(&self.b, "domain.b")?;
                let s = StepDomain::new(a, b).map_err(|e| {
                    let key = if e.to_string().contains(" b ") { "domain.b" } else { "domain.a" };
                    invalid(key, e.to_string())
                })?;
                Ok(DomainSpec::Step(s))
            }
            "graph" => {
                let family = need(&self.family, "domain.family")?;
                let g = match family.as_str() {
                    "xlog" => {
                        only(&["family", "eps"])?;
                        GraphFamily::XLogEps { eps: need(&self.eps, "domain.eps")? }
                    }
                    "power" => {
                        only(&["family", "p", "c"])?;
                        let p = match need(&self.p, "domain.p")? {
                            Scalar::Number(p) => p,
                            Scalar::Pair(_) => return Err(invalid("domain.p", "power exponent must be a number")),
                        };
                        GraphFamily::Power { p, c: self.c.unwrap_or(1.0) }
                    }
                    "table" => {
                        only(&["family", "knots", "slope"])?;
                        let knots = need(&self.knots, "domain.knots")?.into_iter().map(|k| (k[0], k[1])).collect();
                        GraphFamily::Table { knots, slope: need(&self.slope, "domain.slope")? }
                    }
                    other => return Err(invalid("domain.family", format!("unknown graph family `{other}`"))),
                };
                let key = match family.as_str() {
                    "xlog" => "domain.eps",
                    "power" => "domain.p",
                    _ => "domain.knots",
                };
                Ok(DomainSpec::Graph(GraphDomain::new(g).map_err(|e| invalid(key, e.to_string()))?))
            }
            "halfplane" => {
                only(&[])?;
                Ok(DomainSpec::HalfPlane)
            }
            "slitplane" => {
                only(&[])?;
                Ok(DomainSpec::SlitPlane)
            }
            "sector" => {
                only(&["p", "alpha"])?;
                let p = match need(&self.p, "domain.p")? {
                    Scalar::Pair(p) => Complex64::new(p[0], p[1]),
                    Scalar::Number(_) => return Err(invalid("domain.p", "sector vertex must be [re, im]")),
                };
                let alpha = need(&self.alpha, "domain.alpha")?;
                DomainSpec::vertical_sector(p, alpha).map_err(|e| invalid("domain.alpha", e.to_string()))
            }
            other => Err(invalid("domain.type", format!("unknown domain type `{other}`"))),
        }
    }
}

impl ModelConfig {
    pub fn to_model(&self) -> Result<ModelSemigroup, CliError> {
        let ctx = format!("for model type `{}`", self.kind);
        match self.kind.as_str() {
            "halfplane" | "slitplane" => {
                forbid(&self.p, "model.p", &ctx)?;
                forbid(&self.alpha, "model.alpha", &ctx)?;
                Ok(if self.kind == "halfplane" {
                    ModelSemigroup::HalfPlaneTranslation
                } else {
                    ModelSemigroup::SlitPlaneModel
                })
            }
            "sector" => {
                let p = need(&self.p, "model.p")?;
                let alpha = need(&self.alpha, "model.alpha")?;
                ModelSemigroup::vertical_sector(Complex64::new(p[0], p[1]), alpha)
                    .map_err(|e| invalid("model.alpha", e.to_string()))
            }
            other => Err(invalid("model.type", format!("unknown model type `{other}`"))),
        }
    }
}

impl TailConfig {
    pub fn to_tail(&self) -> Result<TailModel, CliError> {
        let ctx = format!("for tail type `{}`", self.kind);
        let tail = match self.kind.as_str() {
            "none" => {
                forbid(&self.family, "tail.family", &ctx)?;
                forbid(&self.window, "tail.window", &ctx)?;
                TailModel::None
            }
            "powerlogfit" => {
                forbid(&self.family, "tail.family", &ctx)?;
                TailModel::PowerLogFit { window: self.window.unwrap_or(16) }
            }
            "closedform" => {
                forbid(&self.window, "tail.window", &ctx)?;
                let family = need(&self.family, "tail.family")?;
                let cf = match family.as_str() {
                    "xlog" => ClosedFormTail::XLogEps { eps: need(&self.eps, "tail.eps")? },
                    "powerlog" => ClosedFormTail::PowerLog { p: need(&self.p, "tail.p")?, q: self.q.unwrap_or(0.0) },
                    "geometric" => ClosedFormTail::Geometric { ratio: need(&self.ratio, "tail.ratio")? },
                    "vanishing" => ClosedFormTail::Vanishing,
                    other => return Err(invalid("tail.family", format!("unknown tail family `{other}`"))),
                };
                TailModel::ClosedForm(cf)
            }
            other => return Err(invalid("tail.type", format!("unknown tail type `{other}`"))),
        };
        tail.validate().map_err(|e| invalid("tail", e.to_string()))?;
        Ok(tail)
    }
}

impl RunConfig {
    /// Checks the cross-field rules serde cannot express.
    pub fn validate(&self) -> Result<(), CliError> {
        let ctx = format!("for command `{}`", self.command.name());
        if self.command.uses_model() {
            forbid(&self.domain, "domain", &ctx)?;
            forbid(&self.tail, "tail", &ctx)?;
            need(&self.model, "model")?.to_model()?;
        } else {
            forbid(&self.model, "model", &ctx)?;
            need(&self.domain, "domain")?.to_spec()?;
        }
        if let Some(t) = &self.tail {
            t.to_tail()?;
        }
        if !(finite(self.tol, "tol")? > 0.0) {
            return Err(invalid("tol", "must be positive"));
        }
        if !(finite(self.rmax, "rmax")? > 0.0) {
            return Err(invalid("rmax", "must be positive"));
        }
        if !(finite(self.search_max, "search_max")? > 0.0) {
            return Err(invalid("search_max", "must be positive"));
        }
        if let Some(r0) = self.r0 {
            if !(finite(r0, "r0")? > 0.0) {
                return Err(invalid("r0", "must be positive"));
            }
        }
        if self.j0 == Some(0) {
            return Err(invalid("j0", "must be at least 1"));
        }
        if let Some(g) = &self.t_grid {
            let pts = g.points("t_grid")?;
            if pts.iter().any(|&t| t < 0.0) {
                return Err(invalid("t_grid", "times must be nonnegative"));
            }
        }
        if let Some(g) = &self.radii {
            g.points("radii")?;
        }
        if let Some(p) = self.point {
            finite(p[0], "point")?;
            finite(p[1], "point")?;
        }
        match self.command {
            Command::Eta => {
                need(&self.radii, "radii")?;
            }
            Command::Delta => {
                need(&self.point, "point")?;
            }
            _ => {}
        }
        if !matches!(self.command, Command::Eta) {
            forbid(&self.radii, "radii", &ctx)?;
        }
        if !matches!(self.command, Command::Orbit | Command::Speeds | Command::Delta) {
            forbid(&self.t_grid, "t_grid", &ctx)?;
        }
        if matches!(self.command, Command::Speeds) {
            forbid(&self.point, "point", &ctx)?;
        }
        Ok(())
    }

    pub fn domain_spec(&self) -> Result<DomainSpec, CliError> {
        need(&self.domain, "domain")?.to_spec()
    }

    pub fn model(&self) -> Result<ModelSemigroup, CliError> {
        need(&self.model, "model")?.to_model()
    }

    /// The declared tail, or the domain's default.
    pub fn tail_model(&self, d: &DomainSpec) -> Result<TailModel, CliError> {
        match &self.tail {
            Some(t) => t.to_tail(),
            None => Ok(default_tail(d)),
        }
    }

    fn times(&self) -> Result<Vec<f64>, CliError> {
        match &self.t_grid {
            Some(g) => g.points("t_grid"),
            None => Ok(log_space(1.0, 1e4, 100)),
        }
    }
}

/// A table with named columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|&x| format_number(x)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    fn to_json(&self) -> Value {
        json!({
            "columns": self.columns,
            "rows": self.rows.iter().map(|r| Value::Array(r.iter().map(|&x| num(x)).collect())).collect::<Vec<_>>(),
        })
    }
}

/// Result of a run before rendering.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub report: Value,
    pub table: Option<Table>,
    pub exit_code: i32,
}

/// `%.17g`: 17 significant digits, trailing zeros removed, exponent form
/// outside `[1e-4, 1e17)`. Non-finite values print as `inf`, `-inf`, `nan`.
pub fn format_number(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{:.16e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    let strip = |s: &str| -> String {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s.to_string()
        }
    };
    if (-4..17).contains(&exp) {
        let decimals = (16 - exp) as usize;
        strip(&format!("{:.*}", decimals, x))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{}{:02}", strip(mantissa), sign, exp.abs())
    }
}

fn num(x: f64) -> Value {
    if x.is_finite() {
        serde_json::Number::from_f64(x).map(Value::Number).unwrap_or(Value::Null)
    } else {
        Value::String(format_number(x))
    }
}

fn write_value(v: &Value, out: &mut String) {
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if let Some(i) = n.as_u64() {
                let _ = write!(out, "{i}");
            } else if let Some(i) = n.as_i64() {
                let _ = write!(out, "{i}");
            } else {
                out.push_str(&format_number(n.as_f64().unwrap_or(f64::NAN)));
            }
        }
        Value::String(s) => out.push_str(&Value::String(s.clone()).to_string()),
        Value::Array(items) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_value(item, out);
            }
            out.push(']');
        }
        Value::Object(map) => {
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            out.push('{');
            for (i, k) in keys.into_iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&Value::String(k.clone()).to_string());
                out.push(':');
                write_value(&map[k], out);
            }
            out.push('}');
        }
    }
}

/// Canonical single-line JSON with a trailing newline.
pub fn to_canonical_json(v: &Value) -> String {
    let mut out = String::new();
    write_value(v, &mut out);
    out.push('\n');
    out
}

fn verdict_name(v: TailVerdict) -> &'static str {
    match v {
        TailVerdict::Convergent => "Convergent",
        TailVerdict::Divergent => "Divergent",
        TailVerdict::Unknown => "Unknown",
    }
}

fn decision_name(d: Decision) -> &'static str {
    match d {
        Decision::FiniteShift => "FiniteShift",
        Decision::InfiniteShift => "InfiniteShift",
        Decision::Inconclusive => "Inconclusive",
    }
}

fn mode_name(m: ConvergenceMode) -> &'static str {
    match m {
        ConvergenceMode::NonTangential => "NonTangential",
        ConvergenceMode::TangentialMinus => "TangentialMinus",
        ConvergenceMode::TangentialPlus => "TangentialPlus",
        ConvergenceMode::Undetermined => "Undetermined",
    }
}

fn evidence_json(e: &Evidence) -> Value {
    json!({
        "criterion": e.criterion,
        "partialValue": num(e.partial_value),
        "tailBracket": [num(e.tail_bracket.0), num(e.tail_bracket.1)],
        "verdict": verdict_name(e.verdict),
        "rationale": e.rationale,
    })
}

pub fn verdict_json(v: &ShiftVerdict) -> Value {
    json!({
        "decision": decision_name(v.decision),
        "evidence": v.evidence.iter().map(evidence_json).collect::<Vec<_>>(),
        "preconditionsMet": v.preconditions_met,
        "diagnostics": v.diagnostics,
    })
}

pub fn series_json(r: &SeriesReport) -> Value {
    json!({
        "j0": r.j0,
        "partialSums": r.partial_sums.iter().map(|(j, s)| json!([j, num(*s)])).collect::<Vec<_>>(),
        "tailVerdict": verdict_name(r.tail_verdict),
        "tailRationale": r.tail_rationale,
    })
}

pub fn integral_json(r: &IntegralReport) -> Value {
    json!({
        "r0": num(r.r0),
        "Rmax": num(r.r_max),
        "partialIntegral": num(r.partial_integral),
        "lowerTail": num(r.lower_tail),
        "upperTail": num(r.upper_tail),
        "trendVerdict": verdict_name(r.trend_verdict),
        "trendRationale": r.trend_rationale,
        "panels": r.panels,
    })
}

fn default_r0(d: &DomainSpec, search_max: f64) -> Result<f64, CliError> {
    let start = real_ray_start(d).unwrap_or(0.0);
    let cone = inner_tangent_radius(d, std::f64::consts::FRAC_PI_4, search_max).map(|c| c.radius).unwrap_or(0.0);
    Ok(cone.max(start + 1.0))
}

/// Executes a validated config.
pub fn run(cfg: &RunConfig) -> Result<RunOutput, CliError> {
    cfg.validate()?;
    let mut exit_code = 0;
    let mut table = None;
    let mut warnings: Vec<String> = Vec::new();
    let result = match cfg.command {
        Command::Classify => {
            let d = cfg.domain_spec()?;
            if let DomainSpec::Step(s) = &d {
                warnings.extend(s.warnings());
            }
            let opts = ClassifyOptions {
                tail: cfg.tail.as_ref().map(|t| t.to_tail()).transpose()?,
                j0: cfg.j0,
                jmax: cfg.jmax,
                r0: cfg.r0,
                r_max: cfg.rmax,
                tol: cfg.tol,
                search_max: cfg.search_max,
            };
            let v = classify_shift(&d, &opts);
            if v.decision == Decision::Inconclusive {
                exit_code = 2;
            }
            verdict_json(&v)
        }
        Command::Series => {
            let d = cfg.domain_spec()?;
            let tail = cfg.tail_model(&d)?;
            let j0 = match cfg.j0 {
                Some(j) => j,
                None => default_j0(&d).ok_or_else(|| invalid("j0", "the domain contains no real half-line"))?,
            };
            let r = series_criterion_with(&d, j0, cfg.jmax, &tail, cfg.search_max)?;
            table = Some(Table {
                columns: vec!["j", "partial_sum"],
                rows: r.partial_sums.iter().map(|(j, s)| vec![*j as f64, *s]).collect(),
            });
            series_json(&r)
        }
        Command::Integral => {
            let d = cfg.domain_spec()?;
            let tail = cfg.tail_model(&d)?;
            let r0 = match cfg.r0 {
                Some(r) => r,
                None => default_r0(&d, cfg.search_max)?,
            };
            let r = karamanlis_integral_with(&d, r0, cfg.rmax, cfg.tol, &tail, cfg.search_max)?;
            integral_json(&r)
        }
        Command::Eta => {
            let d = cfg.domain_spec()?;
            let radii = need(&cfg.radii, "radii")?.points("radii")?;
            let profile = eta_profile(&d, &radii, cfg.tol)?;
            let t = Table {
                columns: vec!["r", "eta"],
                rows: profile.radii.iter().zip(&profile.eta).map(|(&r, &e)| vec![r, e]).collect(),
            };
            let v = json!({ "tolerance": num(profile.tolerance), "table": t.to_json() });
            table = Some(t);
            v
        }
        Command::Delta => {
            let d = cfg.domain_spec()?;
            let p = need(&cfg.point, "point")?;
            let p = Complex64::new(p[0], p[1]);
            let times = cfg.times()?;
            let rows = times
                .iter()
                .map(|&t| delta_pm(&d, p, t).map(|s| vec![s.t, s.delta_plus, s.delta_minus]))
                .collect::<Result<Vec<_>, _>>()?;
            let mode = classify_convergence_mode(&d, p, &times, ModeThresholds::default())?;
            let t = Table { columns: vec!["t", "delta_plus", "delta_minus"], rows };
            let v = json!({ "mode": mode_name(mode), "table": t.to_json() });
            table = Some(t);
            v
        }
        Command::Orbit | Command::Speeds => {
            let m = cfg.model()?;
            let z = match cfg.point {
                Some(p) => DiscPoint::new(p[0], p[1]).map_err(|e| invalid("point", e.to_string()))?,
                None => DiscPoint::origin(),
            };
            let w0 = cayley(BoundaryPoint::one(), z).w();
            let one = Complex64::new(1.0, 0.0);
            let mut rows = Vec::new();
            for t in cfg.times()? {
                let w = m.halfplane_orbit(w0, t)?;
                // far along the orbit the disc point is only representable
                // as a rounded value; it is reported unvalidated
                let disc = (w - one) / (w + one);
                let s = speeds(&m, t)?;
                rows.push(vec![t, disc.re, disc.im, s.v, s.v_o, s.v_t, s.rho, s.theta]);
            }
            let t = Table { columns: vec!["t", "re", "im", "v", "vO", "vT", "rho", "theta"], rows };
            let v = json!({ "table": t.to_json() });
            table = Some(t);
            v
        }
    };
    let mut report = Map::new();
    report.insert("command".into(), json!(cfg.command.name()));
    report.insert("config".into(), config_echo(cfg));
    report.insert("result".into(), result);
    report.insert("toolVersion".into(), json!(env!("CARGO_PKG_VERSION")));
    if !warnings.is_empty() {
        report.insert("warnings".into(), json!(warnings));
    }
    Ok(RunOutput { report: Value::Object(report), table, exit_code })
}

/// The config with defaults filled in, in the input schema.
pub fn config_echo(cfg: &RunConfig) -> Value {
    serde_json::to_value(cfg).expect("config is serializable")
}

/// Writes `contents` to `path` through a temporary file in the same
/// directory and a rename.
pub fn write_atomic(path: &Path, contents: &[u8]) -> std::io::Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_else(|| "out".into());
    let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    let result = (|| {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(contents)?;
        f.sync_all()?;
        std::fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = std::fs::remove_file(&tmp);
    }
    result
}

#[derive(Debug, Parser)]
#[command(name = "koenigs-shift", version, about = "Finite-shift classification and model semigroup tables")]
pub struct Args {
    /// What to compute; must match the `command` field of the config.
    #[arg(value_enum)]
    pub command: Command,
    /// JSON config file.
    #[arg(long)]
    pub config: PathBuf,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Record the elapsed time in the report (makes output nondeterministic).
    #[arg(long)]
    pub timing: bool,
}

/// Renders a run in the requested format.
pub fn render(output: &RunOutput, format: Format) -> Result<String, CliError> {
    match format {
        Format::Json => Ok(to_canonical_json(&output.report)),
        Format::Csv => output
            .table
            .as_ref()
            .map(Table::to_csv)
            .ok_or_else(|| CliError::Usage("csv output is only available for table commands".into())),
    }
}

fn execute(args: &Args) -> Result<(String, i32), CliError> {
    let started = Instant::now();
    let text = std::fs::read(&args.config).map_err(|e| CliError::Io(format!("{}: {e}", args.config.display())))?;
    let cfg = parse_config(&text)?;
    if cfg.command != args.command {
        return Err(invalid(
            "command",
            format!("config says `{}` but `{}` was requested", cfg.command.name(), args.command.name()),
        ));
    }
    let mut output = run(&cfg)?;
    if args.timing {
        if let Value::Object(map) = &mut output.report {
            map.insert("wallTime".into(), num(started.elapsed().as_secs_f64()));
        }
    }
    Ok((render(&output, args.format)?, output.exit_code))
}

/// Entry point shared by the binary: returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let outcome = execute(&args).and_then(|(text, code)| {
        match &args.out {
            Some(path) => {
                write_atomic(path, text.as_bytes()).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?
            }
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout.write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string()))?;
            }
        }
        Ok(code)
    });
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprint!("{}", to_canonical_json(&e.to_json()));
            1
        }
    }
}
