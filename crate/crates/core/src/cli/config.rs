//! JSON run configuration.
//!
//! ```json
//! {
//!   "name": "second_order_cubic",
//!   "curve": { "family": "polynomial", "params": [0, 1, 0, 0.3333333333333333], "range": [0, 2] },
//!   "descriptor": { "alpha": -2, "beta": -2 },
//!   "excitation": { "amplitude": 1, "omega": 1, "offset": 1 },
//!   "grid_n": 4096,
//!   "tolerances": { "witness_tol": 1e-8 },
//!   "output_dir": "out",
//!   "formats": ["csv", "svg", "json"]
//! }
//! ```
//!
//! Curve families and their `params`:
//! `polynomial` (ascending coefficients), `tanh` (`[a, b]` for `a * tanh(b x)`,
//! default `[1, 1]`), `logistic` (none), `piecewise_linear` (flat knot list
//! `x0, y0, x1, y1, ...`) and `two_branch` (no params; `branches` holds the
//! outgoing and returning curve specs).

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::constitutive::{ConstitutiveCurve, OperatingRange};
use crate::error::Error;
use crate::excitation::{Excitation, DEFAULT_GRID, MIN_GRID};
use crate::taxonomy::{ElementDescriptor, ToleranceSet};
use crate::transform::Provenance;

/// A configuration problem, reported as a single line naming the field.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub field: String,
    pub reason: String,
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let reason = self.reason.replace('\n', " ");
        write!(f, "config error: field `{}`: {}", self.field, reason)
    }
}

impl ConfigError {
    pub fn new(field: impl Into<String>, reason: impl Into<String>) -> Self {
        ConfigError {
            field: field.into(),
            reason: reason.into(),
        }
    }

    fn from_lib(field: &str, err: Error) -> Self {
        match err {
            Error::Config { field, reason } => ConfigError::new(field, reason),
            other => ConfigError::new(field, other.to_string()),
        }
    }
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct CurveSpec {
    pub family: String,
    #[serde(default)]
    pub params: Vec<f64>,
    #[serde(default)]
    pub range: Option<[f64; 2]>,
    #[serde(default)]
    pub branches: Option<Vec<CurveSpec>>,
    #[serde(default)]
    pub max_derivative_order: Option<usize>,
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct DescriptorSpec {
    pub alpha: i32,
    pub beta: i32,
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct ExcitationSpec {
    pub amplitude: f64,
    pub omega: f64,
    pub offset: f64,
}

impl Default for ExcitationSpec {
    fn default() -> Self {
        let e = Excitation::default();
        ExcitationSpec {
            amplitude: e.amplitude,
            omega: e.omega,
            offset: e.offset,
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Eq, Hash)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Svg,
    Json,
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Eq, Default)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    #[default]
    Analytic,
    Numeric,
}

/// One swept coefficient: `curve.params[param]` takes each of `values`.
#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SweepAxis {
    pub param: usize,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "default_name")]
    pub name: String,
    pub curve: CurveSpec,
    pub descriptor: DescriptorSpec,
    #[serde(default)]
    pub excitation: ExcitationSpec,
    #[serde(default = "default_grid")]
    pub grid_n: usize,
    #[serde(default)]
    pub tolerances: Option<serde_json::Value>,
    #[serde(default)]
    pub route: Route,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    #[serde(default = "default_formats")]
    pub formats: Vec<Format>,
    /// Only read by `sweep`; the cartesian product of all axes is run.
    #[serde(default)]
    pub sweep: Option<Vec<SweepAxis>>,
}

fn default_name() -> String {
    "run".to_string()
}

fn default_grid() -> usize {
    DEFAULT_GRID
}

fn default_output_dir() -> PathBuf {
    PathBuf::from(".")
}

fn default_formats() -> Vec<Format> {
    vec![Format::Csv, Format::Svg, Format::Json]
}

/// Everything `analyze` needs, validated.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub name: String,
    pub curve: ConstitutiveCurve,
    pub descriptor: ElementDescriptor,
    pub excitation: Excitation,
    pub grid_n: usize,
    pub tolerances: ToleranceSet,
    pub route: Provenance,
    pub output_dir: PathBuf,
    pub formats: Vec<Format>,
}

pub fn parse_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T, ConfigError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let field = if path == "." { "<root>".to_string() } else { path };
        ConfigError::new(field, e.into_inner().to_string())
    })
}

pub fn load_file<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError::new("<file>", format!("cannot read {}: {e}", path.display())))?;
    parse_json(&text)
}

fn tolerances_from(base: ToleranceSet, overrides: Option<&serde_json::Value>) -> Result<ToleranceSet, ConfigError> {
    let Some(overrides) = overrides else {
        return Ok(base);
    };
    let serde_json::Value::Object(map) = overrides else {
        return Err(ConfigError::new("tolerances", "expected an object"));
    };
    let mut merged = serde_json::to_value(base).expect("tolerances serialize");
    let target = merged.as_object_mut().expect("object");
    for (k, v) in map {
        if !target.contains_key(k) {
            return Err(ConfigError::new(format!("tolerances.{k}"), "unknown tolerance"));
        }
        target.insert(k.clone(), v.clone());
    }
    let tol: ToleranceSet = serde_json::from_value(merged)
        .map_err(|e| ConfigError::new("tolerances", e.to_string()))?;
    tol.validate().map_err(|e| ConfigError::from_lib("tolerances", e))?;
    Ok(tol)
}

/// Tolerances for `route`, with any overrides applied.
pub fn resolve_tolerances(overrides: Option<&serde_json::Value>, route: Provenance) -> Result<ToleranceSet, ConfigError> {
    tolerances_from(ToleranceSet::for_provenance(route), overrides)
}

pub fn build_curve(spec: &CurveSpec, field: &str) -> Result<ConstitutiveCurve, ConfigError> {
    let range = match spec.range {
        Some([lo, hi]) => OperatingRange::new(lo, hi).map_err(|e| ConfigError::from_lib(&format!("{field}.range"), e))?,
        None => OperatingRange::default(),
    };
    let params_field = format!("{field}.params");
    let curve = match spec.family.as_str() {
        "polynomial" => ConstitutiveCurve::polynomial(spec.params.clone(), range),
        "tanh" => match spec.params.as_slice() {
            [] => ConstitutiveCurve::tanh_scaled(1.0, 1.0, range),
            [a, b] => ConstitutiveCurve::tanh_scaled(*a, *b, range),
            _ => return Err(ConfigError::new(params_field, "tanh takes [a, b]")),
        },
        "logistic" => {
            if !spec.params.is_empty() {
                return Err(ConfigError::new(params_field, "logistic takes no parameters"));
            }
            Ok(ConstitutiveCurve::logistic(range))
        }
        "piecewise_linear" => {
            if spec.params.len() < 4 || !spec.params.len().is_multiple_of(2) {
                return Err(ConfigError::new(params_field, "expected x0, y0, x1, y1, ... with at least two knots"));
            }
            let knots = spec.params.chunks(2).map(|c| (c[0], c[1])).collect();
            ConstitutiveCurve::piecewise_linear(knots)
        }
        "two_branch" => {
            let branches_field = format!("{field}.branches");
            let branches = spec
                .branches
                .as_ref()
                .ok_or_else(|| ConfigError::new(branches_field.clone(), "two_branch needs [outgoing, returning]"))?;
            if branches.len() != 2 {
                return Err(ConfigError::new(branches_field, "expected exactly two branches"));
            }
            let out = build_curve(&branches[0], &format!("{field}.branches[0]"))?;
            let ret = build_curve(&branches[1], &format!("{field}.branches[1]"))?;
            ConstitutiveCurve::two_branch(out, ret)
        }
        other => {
            return Err(ConfigError::new(
                format!("{field}.family"),
                format!("unknown family `{other}` (polynomial, tanh, logistic, piecewise_linear, two_branch)"),
            ))
        }
    }
    .map_err(|e| ConfigError::from_lib(field, e))?;
    match spec.max_derivative_order {
        Some(k) => curve
            .with_max_order(k)
            .map_err(|e| ConfigError::from_lib(&format!("{field}.max_derivative_order"), e)),
        None => Ok(curve),
    }
}

pub fn build_excitation(spec: &ExcitationSpec) -> Result<Excitation, ConfigError> {
    Excitation::new(spec.amplitude, spec.omega, spec.offset).map_err(|e| ConfigError::from_lib("excitation", e))
}

pub fn check_grid(n: usize) -> Result<usize, ConfigError> {
    if n < MIN_GRID {
        return Err(ConfigError::new("grid_n", format!("{n} is below the minimum of {MIN_GRID}")));
    }
    Ok(n)
}

impl RunConfig {
    pub fn resolve(&self) -> Result<Resolved, ConfigError> {
        if self.name.is_empty() || self.name.contains(['/', '\\']) {
            return Err(ConfigError::new("name", "must be a non-empty file stem"));
        }
        let descriptor = ElementDescriptor::new(self.descriptor.alpha, self.descriptor.beta)
            .map_err(|e| ConfigError::from_lib("descriptor", e))?;
        let curve = build_curve(&self.curve, "curve")?;
        let excitation = build_excitation(&self.excitation)?;
        let (lo, hi) = excitation.span();
        let range = curve.range();
        if !(range.contains(lo) && range.contains(hi)) {
            return Err(ConfigError::new(
                "excitation",
                format!("swept interval [{lo}, {hi}] leaves the curve range [{}, {}]", range.min, range.max),
            ));
        }
        let grid_n = check_grid(self.grid_n)?;
        let route = match self.route {
            Route::Analytic => Provenance::Analytic,
            Route::Numeric => Provenance::Numeric,
        };
        let tolerances = resolve_tolerances(self.tolerances.as_ref(), route)?;
        if self.formats.is_empty() {
            return Err(ConfigError::new("formats", "choose at least one of csv, svg, json"));
        }
        Ok(Resolved {
            name: self.name.clone(),
            curve,
            descriptor,
            excitation,
            grid_n,
            tolerances,
            route,
            output_dir: self.output_dir.clone(),
            formats: self.formats.clone(),
        })
    }
}

/// Creates the output directory and checks that it accepts files.
pub fn prepare_output_dir(dir: &Path) -> Result<(), ConfigError> {
    std::fs::create_dir_all(dir)
        .map_err(|e| ConfigError::new("output_dir", format!("cannot create {}: {e}", dir.display())))?;
    let meta = std::fs::metadata(dir).map_err(|e| ConfigError::new("output_dir", e.to_string()))?;
    if meta.permissions().readonly() {
        return Err(ConfigError::new("output_dir", format!("{} is not writable", dir.display())));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const CUBIC: &str = r#"{
        "name": "cubic",
        "curve": {"family": "polynomial", "params": [0, 1, 0, 0.3333333333333333]},
        "descriptor": {"alpha": -2, "beta": -2}
    }"#;

    #[test]
    fn minimal_config_resolves_with_defaults() {
        let cfg: RunConfig = parse_json(CUBIC).unwrap();
        let r = cfg.resolve().unwrap();
        assert_eq!(r.grid_n, DEFAULT_GRID);
        assert_eq!(r.descriptor, ElementDescriptor::SECOND_ORDER_MEMRISTOR);
        assert_eq!(r.formats.len(), 3);
        assert_eq!(r.tolerances, ToleranceSet::default());
    }

    #[test]
    fn type_errors_name_the_field() {
        let text = CUBIC.replace("[0, 1, 0, 0.3333333333333333]", r#"[0, "one"]"#);
        let err = parse_json::<RunConfig>(&text).unwrap_err();
        assert_eq!(err.field, "curve.params[1]");
    }

    #[test]
    fn unknown_fields_rejected() {
        let text = CUBIC.replace("\"name\"", "\"colour\": 1, \"name\"");
        let err = parse_json::<RunConfig>(&text).unwrap_err();
        assert!(err.reason.contains("colour"), "{err}");
    }

    #[test]
    fn positive_alpha_is_a_descriptor_error() {
        let text = CUBIC.replace("\"alpha\": -2", "\"alpha\": 1");
        let err = parse_json::<RunConfig>(&text).unwrap().resolve().unwrap_err();
        assert_eq!(err.field, "descriptor");
    }

    #[test]
    fn small_grid_and_bad_tolerance() {
        let mut cfg: RunConfig = parse_json(CUBIC).unwrap();
        cfg.grid_n = 10;
        assert_eq!(cfg.resolve().unwrap_err().field, "grid_n");
        cfg.grid_n = 128;
        cfg.tolerances = Some(serde_json::json!({"witness_tol": -1.0}));
        assert_eq!(cfg.resolve().unwrap_err().field, "tolerances.witness_tol");
        cfg.tolerances = Some(serde_json::json!({"witness": 1.0}));
        assert_eq!(cfg.resolve().unwrap_err().field, "tolerances.witness");
    }

    #[test]
    fn diagnostic_is_one_line() {
        let err = ConfigError::new("curve", "a\nb");
        assert!(!err.to_string().contains('\n'));
    }

    #[test]
    fn two_branch_spec() {
        let spec: CurveSpec = parse_json(
            r#"{"family": "two_branch", "branches": [
                {"family": "piecewise_linear", "params": [0, 0, 1, 0.5, 2, 2]},
                {"family": "piecewise_linear", "params": [0, 0, 1, 1.5, 2, 2]}
            ]}"#,
        )
        .unwrap();
        assert!(build_curve(&spec, "curve").unwrap().is_two_branch());
    }
}
