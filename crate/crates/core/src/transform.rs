//! Conformal differential transformation.
//!
//! Differentiating both coordinates of a plane with respect to time maps a
//! locus onto the next plane of the chain; the tangent slope at a source point
//! becomes the origin-chord slope of its image. Two routes are provided: an
//! exact chain-rule bank on the closed-form excitation ([`analytic_locus`])
//! and periodic central differences on samples ([`numeric_transform`]), the
//! latter serving as an independent oracle for the former.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::constitutive::{Branch, ConstitutiveCurve};
use crate::error::{Error, Result};
use crate::excitation::{Excitation, SampleGrid};

/// Deepest chain handled by the closed-form bank. Deeper requests fall back
/// to numeric differentiation of the depth-4 locus.
pub const MAX_ANALYTIC_DEPTH: usize = 4;

/// Minimum number of samples in a locus.
pub const MIN_LOCUS_SAMPLES: usize = 65;

/// Below this magnitude both coordinates of a projected point are treated as
/// zero and its chord angle is undefined.
pub const PROJECTION_PINCH_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Analytic,
    Numeric,
}

/// A parametric curve `(u(t), w(t))` known in closed form.
pub trait Trajectory: Send + Sync + fmt::Debug {
    /// The `order`-th time derivative of `(u, w)` at `t`, or `None` when
    /// that order is beyond what the trajectory can produce exactly.
    fn at(&self, t: f64, order: usize) -> Option<(f64, f64)>;
}

/// The constitutive curve driven by the excitation, seen `depth` planes down
/// the chain.
#[derive(Debug, Clone)]
pub struct ChainTrajectory {
    curve: ConstitutiveCurve,
    exc: Excitation,
    depth: usize,
}

impl ChainTrajectory {
    pub fn new(curve: ConstitutiveCurve, exc: Excitation, depth: usize) -> Result<Self> {
        check_chain_inputs(&curve, &exc, depth)?;
        Ok(ChainTrajectory { curve, exc, depth })
    }

    pub fn depth(&self) -> usize {
        self.depth
    }
}

impl Trajectory for ChainTrajectory {
    fn at(&self, t: f64, order: usize) -> Option<(f64, f64)> {
        let d = self.depth + order;
        if d > MAX_ANALYTIC_DEPTH || d > self.curve.max_derivative_order() {
            return None;
        }
        let u = self.exc.excite(t, d);
        let w = chain_derivative(&self.curve, &self.exc, t, d).unwrap_or(f64::NAN);
        Some((u, w))
    }
}

fn check_chain_inputs(curve: &ConstitutiveCurve, exc: &Excitation, depth: usize) -> Result<()> {
    if depth > curve.max_derivative_order() {
        return Err(Error::Capability {
            requested: depth,
            available: curve.max_derivative_order(),
        });
    }
    let (lo, hi) = exc.span();
    let range = curve.range();
    for x in [lo, hi] {
        if !range.contains(x) {
            return Err(Error::Domain {
                x,
                min: range.min,
                max: range.max,
            });
        }
    }
    Ok(())
}

/// Branch traversed at time `t`: outgoing on the first half of each period.
pub fn branch_at(exc: &Excitation, t: f64) -> Branch {
    let phase = (exc.omega * t).rem_euclid(std::f64::consts::TAU);
    if phase <= std::f64::consts::PI {
        Branch::Outgoing
    } else {
        Branch::Returning
    }
}

/// `d^depth/dt^depth f(x(t))` by the chain rule (Faà di Bruno), for
/// `depth <= MAX_ANALYTIC_DEPTH`.
pub fn chain_derivative(
    curve: &ConstitutiveCurve,
    exc: &Excitation,
    t: f64,
    depth: usize,
) -> Result<f64> {
    if depth > MAX_ANALYTIC_DEPTH {
        return Err(Error::Capability {
            requested: depth,
            available: MAX_ANALYTIC_DEPTH,
        });
    }
    let f = curve.branch(branch_at(exc, t));
    let x0 = clamp_into(f, exc.excite(t, 0));
    let x: Vec<f64> = (1..=depth).map(|k| exc.excite(t, k)).collect();
    let df = |k: usize| f.derivative(x0, k);
    Ok(match depth {
        0 => df(0)?,
        1 => df(1)? * x[0],
        2 => df(2)? * x[0] * x[0] + df(1)? * x[1],
        3 => df(3)? * x[0].powi(3) + 3.0 * df(2)? * x[0] * x[1] + df(1)? * x[2],
        _ => {
            df(4)? * x[0].powi(4)
                + 6.0 * df(3)? * x[0] * x[0] * x[1]
                + df(2)? * (3.0 * x[1] * x[1] + 4.0 * x[0] * x[2])
                + df(1)? * x[3]
        }
    })
}

// the level-0 signal can overshoot the range by an ulp
fn clamp_into(curve: &ConstitutiveCurve, x: f64) -> f64 {
    let r = curve.range();
    x.clamp(r.min, r.max)
}

/// A sampled parametric curve in one plane of the transformation chain.
#[derive(Debug, Clone)]
pub struct ParametricLocus {
    t: Vec<f64>,
    u: Vec<f64>,
    w: Vec<f64>,
    depth: usize,
    labels: (String, String),
    provenance: Provenance,
    trajectory: Option<Arc<dyn Trajectory>>,
}

impl ParametricLocus {
    /// Locus from raw samples; provenance is numeric.
    pub fn from_samples(
        t: Vec<f64>,
        u: Vec<f64>,
        w: Vec<f64>,
        depth: usize,
        labels: (String, String),
    ) -> Result<Self> {
        if t.len() != u.len() || t.len() != w.len() {
            return Err(Error::Numerical(format!(
                "locus arrays differ in length ({}, {}, {})",
                t.len(),
                u.len(),
                w.len()
            )));
        }
        if t.len() < MIN_LOCUS_SAMPLES {
            return Err(Error::Numerical(format!(
                "locus needs at least {MIN_LOCUS_SAMPLES} samples, got {}",
                t.len()
            )));
        }
        if t.windows(2).any(|p| !(p[1] > p[0])) {
            return Err(Error::Numerical("locus t values must be strictly increasing".into()));
        }
        Ok(ParametricLocus {
            t,
            u,
            w,
            depth,
            labels,
            provenance: Provenance::Numeric,
            trajectory: None,
        })
    }

    /// Samples a closed-form trajectory on `grid`; provenance is analytic.
    pub fn from_trajectory(
        trajectory: Arc<dyn Trajectory>,
        grid: &SampleGrid,
        depth: usize,
        labels: (String, String),
    ) -> Result<Self> {
        let t = grid.t_values().to_vec();
        let mut u = Vec::with_capacity(t.len());
        let mut w = Vec::with_capacity(t.len());
        for &ti in &t {
            let (ui, wi) = trajectory.at(ti, 0).ok_or(Error::Capability {
                requested: depth,
                available: MAX_ANALYTIC_DEPTH,
            })?;
            u.push(ui);
            w.push(wi);
        }
        let mut locus = Self::from_samples(t, u, w, depth, labels)?;
        locus.provenance = Provenance::Analytic;
        locus.trajectory = Some(trajectory);
        Ok(locus)
    }

    pub fn t_values(&self) -> &[f64] {
        &self.t
    }

    pub fn u_values(&self) -> &[f64] {
        &self.u
    }

    pub fn w_values(&self) -> &[f64] {
        &self.w
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn labels(&self) -> (&str, &str) {
        (&self.labels.0, &self.labels.1)
    }

    pub fn with_labels(mut self, abscissa: impl Into<String>, ordinate: impl Into<String>) -> Self {
        self.labels = (abscissa.into(), ordinate.into());
        self
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn trajectory(&self) -> Option<&Arc<dyn Trajectory>> {
        self.trajectory.as_ref()
    }

    pub fn period(&self) -> f64 {
        self.t[self.t.len() - 1] - self.t[0]
    }

    pub fn spacing(&self) -> f64 {
        self.period() / (self.t.len() - 1) as f64
    }

    /// True when the trajectory yields exact first time derivatives.
    pub fn has_exact_tangents(&self) -> bool {
        self.trajectory
            .as_ref()
            .is_some_and(|tr| tr.at(self.t[0], 1).is_some())
    }

    /// `(u, w)` at an arbitrary parameter: exact when a trajectory is
    /// attached, linear interpolation otherwise.
    pub fn value_at(&self, t: f64) -> (f64, f64) {
        if let Some((u, w)) = self.trajectory.as_ref().and_then(|tr| tr.at(t, 0)) {
            return (u, w);
        }
        (interpolate(&self.t, &self.u, t), interpolate(&self.t, &self.w, t))
    }

    /// Time derivatives `(du/dt, dw/dt)` at every sample.
    pub fn tangents(&self) -> (Vec<f64>, Vec<f64>) {
        if self.has_exact_tangents() {
            let tr = self.trajectory.as_ref().expect("checked above");
            self.t
                .iter()
                .map(|&t| tr.at(t, 1).expect("checked above"))
                .unzip()
        } else {
            (periodic_central_diff(&self.u, self.spacing()), periodic_central_diff(&self.w, self.spacing()))
        }
    }

    /// `(du/dt, dw/dt)` at an arbitrary parameter.
    pub fn tangent_at(&self, t: f64) -> (f64, f64) {
        if let Some(d) = self.trajectory.as_ref().and_then(|tr| tr.at(t, 1)) {
            return d;
        }
        let (du, dw) = self.tangents();
        (interpolate(&self.t, &du, t), interpolate(&self.t, &dw, t))
    }
}

fn interpolate(ts: &[f64], vs: &[f64], t: f64) -> f64 {
    let n = ts.len();
    if t <= ts[0] {
        return vs[0];
    }
    if t >= ts[n - 1] {
        return vs[n - 1];
    }
    let i = ts.partition_point(|&x| x <= t) - 1;
    let frac = (t - ts[i]) / (ts[i + 1] - ts[i]);
    vs[i] + frac * (vs[i + 1] - vs[i])
}

/// Central differences on a closed period: the last sample duplicates the
/// first, so neighbours wrap across `t = 0`.
fn periodic_central_diff(values: &[f64], h: f64) -> Vec<f64> {
    let n = values.len() - 1;
    let mut out: Vec<f64> = (0..n)
        .map(|i| (values[(i + 1) % n] - values[(i + n - 1) % n]) / (2.0 * h))
        .collect();
    out.push(out[0]);
    out
}

/// Generic plane labels: `x`/`y` with one prime per transformation.
pub fn generic_labels(depth: usize) -> (String, String) {
    let primes = "'".repeat(depth);
    (format!("x{primes}"), format!("y{primes}"))
}

/// Exact locus of `curve` driven by `exc`, `depth` transformations down.
pub fn analytic_locus(
    curve: &ConstitutiveCurve,
    exc: &Excitation,
    depth: usize,
    grid: &SampleGrid,
) -> Result<ParametricLocus> {
    check_chain_inputs(curve, exc, depth)?;
    let rel = (grid.period() - exc.period()).abs() / exc.period();
    if rel > 1e-12 {
        return Err(Error::config(
            "grid",
            format!("grid period {} differs from excitation period {}", grid.period(), exc.period()),
        ));
    }
    if depth > MAX_ANALYTIC_DEPTH {
        log::warn!(
            "depth {depth} exceeds the closed-form bank ({MAX_ANALYTIC_DEPTH}); \
             continuing with finite differences"
        );
        let mut locus = analytic_locus(curve, exc, MAX_ANALYTIC_DEPTH, grid)?;
        for _ in MAX_ANALYTIC_DEPTH..depth {
            locus = numeric_transform(&locus)?;
        }
        let (a, o) = generic_labels(depth);
        return Ok(locus.with_labels(a, o));
    }
    let trajectory = Arc::new(ChainTrajectory::new(curve.clone(), *exc, depth)?);
    ParametricLocus::from_trajectory(trajectory, grid, depth, generic_labels(depth))
}

/// Differentiates a one-period locus by periodic central differences.
pub fn numeric_transform(locus: &ParametricLocus) -> Result<ParametricLocus> {
    let h = locus.spacing();
    let uneven = locus
        .t
        .windows(2)
        .map(|p| ((p[1] - p[0]) - h).abs())
        .fold(0.0, f64::max);
    if uneven > 1e-9 * h {
        return Err(Error::Numerical(format!(
            "finite differences need a uniform grid (spacing deviates by {uneven:e})"
        )));
    }
    let scale = |v: &[f64]| v.iter().fold(0.0f64, |m, x| m.max(x.abs())).max(1.0);
    let n = locus.len() - 1;
    for (name, v) in [("u", &locus.u), ("w", &locus.w)] {
        if (v[n] - v[0]).abs() > 1e-6 * scale(v) {
            return Err(Error::Numerical(format!(
                "locus is not periodic in {name} ({} vs {}); it must cover exactly one period",
                v[0], v[n]
            )));
        }
    }
    let du = periodic_central_diff(&locus.u, h);
    let dw = periodic_central_diff(&locus.w, h);
    let labels = (format!("d{}/dt", locus.labels.0), format!("d{}/dt", locus.labels.1));
    ParametricLocus::from_samples(locus.t.clone(), du, dw, locus.depth + 1, labels)
}

/// One point projected `depth` planes down, with the slopes that the
/// conformal map equates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProjectedPoint {
    pub t: f64,
    pub u: f64,
    pub w: f64,
    /// Angle of the origin chord, `None` at a pinch.
    pub chord_angle: Option<f64>,
    /// `w / u`, `None` when `u` vanishes.
    pub chord_slope: Option<f64>,
    /// Tangent slope of the source curve at the same parameter, `None` for a
    /// vertical tangent.
    pub tangent_slope: Option<f64>,
    /// `atan` of the tangent slope, `pi/2` when vertical.
    pub tangent_angle: f64,
    pub pinch: bool,
}

/// Projects the source point at `t0` through `depth` transformations.
pub fn project_point(
    curve: &ConstitutiveCurve,
    exc: &Excitation,
    t0: f64,
    depth: usize,
) -> Result<ProjectedPoint> {
    if depth == 0 {
        return Err(Error::config("depth", "projection needs at least one transformation"));
    }
    if depth > MAX_ANALYTIC_DEPTH {
        return Err(Error::Capability {
            requested: depth,
            available: MAX_ANALYTIC_DEPTH,
        });
    }
    if !(0.0..=exc.period()).contains(&t0) {
        return Err(Error::Domain {
            x: t0,
            min: 0.0,
            max: exc.period(),
        });
    }
    check_chain_inputs(curve, exc, depth)?;
    let u = exc.excite(t0, depth);
    let w = chain_derivative(curve, exc, t0, depth)?;
    let pinch = u.abs() < PROJECTION_PINCH_TOL && w.abs() < PROJECTION_PINCH_TOL;

    // tangent of the source plane at t0
    let tangent_slope = if depth == 1 {
        let f = curve.branch(branch_at(exc, t0));
        Some(f.derivative(clamp_into(f, exc.excite(t0, 0)), 1)?)
    } else {
        let source = ChainTrajectory::new(curve.clone(), *exc, depth - 1)?;
        let (du, dw) = source.at(t0, 1).ok_or(Error::Capability {
            requested: depth,
            available: MAX_ANALYTIC_DEPTH,
        })?;
        (du != 0.0).then(|| dw / du)
    };
    Ok(ProjectedPoint {
        t: t0,
        u,
        w,
        chord_angle: (!pinch).then(|| w.atan2(u)),
        chord_slope: (u != 0.0).then(|| w / u),
        tangent_slope,
        tangent_angle: tangent_slope.map_or(std::f64::consts::FRAC_PI_2, f64::atan),
        pinch,
    })
}
