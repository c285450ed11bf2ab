//! Constitutive curves `y = f(x)` and their ideality checks.
//!
//! A curve is a time-invariant relation between two constitutive attributes
//! (flux and charge for a first-order memristor, ρ and σ for a second-order
//! one). Closed-form families carry exact derivatives of any order up to the
//! configured capability; piecewise-linear curves are defined piecewise and
//! flag their kinks.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::roots;
use crate::taxonomy::ToleranceSet;

/// Number of abscissa samples used by the grid-based ideality checks.
pub const IDEALITY_SAMPLES: usize = 4097;

/// Default derivative capability of a freshly built curve.
pub const DEFAULT_MAX_ORDER: usize = 6;

/// Fraction of samples that must have a clearly positive slope for a curve
/// with isolated flat points to still count as strictly increasing.
const MIN_RISING_FRACTION: f64 = 0.99;

const RANGE_SLACK: f64 = 1e-12;

/// Which branch of a two-branch curve is being traversed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    Outgoing,
    Returning,
}

/// Closed interval of admissible abscissae.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OperatingRange {
    pub min: f64,
    pub max: f64,
}

impl OperatingRange {
    pub fn new(min: f64, max: f64) -> Result<Self> {
        if !(min.is_finite() && max.is_finite()) || min >= max {
            return Err(Error::InvalidCurve(format!(
                "operating range [{min}, {max}] must satisfy min < max"
            )));
        }
        Ok(OperatingRange { min, max })
    }

    pub fn width(&self) -> f64 {
        self.max - self.min
    }

    pub fn contains(&self, x: f64) -> bool {
        let slack = RANGE_SLACK * self.width().max(1.0);
        x >= self.min - slack && x <= self.max + slack
    }

    /// `n` uniform samples, endpoints included.
    pub fn samples(&self, n: usize) -> Vec<f64> {
        let last = (n - 1) as f64;
        (0..n)
            .map(|i| self.min + self.width() * i as f64 / last)
            .collect()
    }
}

impl Default for OperatingRange {
    fn default() -> Self {
        OperatingRange { min: 0.0, max: 2.0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CurveFamily {
    /// Ascending-power coefficients `c0 + c1 x + ... + cn x^n`.
    Polynomial { coefficients: Vec<f64> },
    /// `a * tanh(b * x)`.
    TanhScaled { a: f64, b: f64 },
    /// Standard logistic `1 / (1 + e^-x)`.
    Logistic,
    /// Linear interpolation through knots with strictly increasing `x`.
    PiecewiseLinear { knots: Vec<(f64, f64)> },
    /// Distinct outgoing and returning paths sharing their endpoints.
    TwoBranch {
        outgoing: Box<ConstitutiveCurve>,
        returning: Box<ConstitutiveCurve>,
    },
}

/// A k-th derivative together with whether it was taken at a kink, where
/// only a one-sided value exists.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivativeValue {
    pub value: f64,
    pub at_kink: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConstitutiveCurve {
    family: CurveFamily,
    range: OperatingRange,
    max_order: usize,
    // d^k/du^k of the saturating shape, as polynomials in the shape value
    // itself (tanh and logistic both close under differentiation).
    shape_polys: Vec<Vec<f64>>,
}

impl ConstitutiveCurve {
    pub fn polynomial(coefficients: Vec<f64>, range: OperatingRange) -> Result<Self> {
        if coefficients.is_empty() || coefficients.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidCurve(
                "polynomial needs at least one finite coefficient".into(),
            ));
        }
        Ok(Self::build(CurveFamily::Polynomial { coefficients }, range))
    }

    pub fn tanh_scaled(a: f64, b: f64, range: OperatingRange) -> Result<Self> {
        if !(a.is_finite() && b.is_finite()) || a == 0.0 || b == 0.0 {
            return Err(Error::InvalidCurve(format!(
                "tanh scales must be finite and nonzero (a = {a}, b = {b})"
            )));
        }
        Ok(Self::build(CurveFamily::TanhScaled { a, b }, range))
    }

    pub fn logistic(range: OperatingRange) -> Self {
        Self::build(CurveFamily::Logistic, range)
    }

    pub fn piecewise_linear(knots: Vec<(f64, f64)>) -> Result<Self> {
        if knots.len() < 2 {
            return Err(Error::InvalidCurve(
                "piecewise-linear curve needs at least two knots".into(),
            ));
        }
        if knots.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
            return Err(Error::InvalidCurve("non-finite knot".into()));
        }
        if knots.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(Error::InvalidCurve(
                "piecewise-linear knots must be strictly increasing in x".into(),
            ));
        }
        let range = OperatingRange::new(knots[0].0, knots[knots.len() - 1].0)?;
        Ok(Self::build(CurveFamily::PiecewiseLinear { knots }, range))
    }

    /// Two branches over the same operating range. They must agree at both
    /// range endpoints so the traversed loop closes.
    pub fn two_branch(outgoing: ConstitutiveCurve, returning: ConstitutiveCurve) -> Result<Self> {
        if outgoing.is_two_branch() || returning.is_two_branch() {
            return Err(Error::InvalidCurve("branches cannot be nested".into()));
        }
        if outgoing.range != returning.range {
            return Err(Error::InvalidCurve(
                "branches must share one operating range".into(),
            ));
        }
        let range = outgoing.range;
        for x in [range.min, range.max] {
            let (a, b) = (outgoing.eval(x)?, returning.eval(x)?);
            if (a - b).abs() > 1e-9 * a.abs().max(b.abs()).max(1.0) {
                return Err(Error::InvalidCurve(format!(
                    "branches disagree at range endpoint x = {x} ({a} vs {b})"
                )));
            }
        }
        let max_order = outgoing.max_order.min(returning.max_order);
        let mut curve = Self::build(
            CurveFamily::TwoBranch {
                outgoing: Box::new(outgoing),
                returning: Box::new(returning),
            },
            range,
        );
        curve.max_order = max_order;
        Ok(curve)
    }

    /// Sets the derivative capability. Must be at least 1.
    pub fn with_max_order(mut self, max_order: usize) -> Result<Self> {
        if max_order == 0 {
            return Err(Error::InvalidCurve("max derivative order must be positive".into()));
        }
        self.max_order = max_order;
        self.shape_polys = shape_polys(&self.family, max_order);
        if let CurveFamily::TwoBranch { outgoing, returning } = &mut self.family {
            for branch in [outgoing, returning] {
                let inner = (**branch).clone().with_max_order(max_order)?;
                **branch = inner;
            }
        }
        Ok(self)
    }

    fn build(family: CurveFamily, range: OperatingRange) -> Self {
        let shape_polys = shape_polys(&family, DEFAULT_MAX_ORDER);
        ConstitutiveCurve {
            family,
            range,
            max_order: DEFAULT_MAX_ORDER,
            shape_polys,
        }
    }

    pub fn family(&self) -> &CurveFamily {
        &self.family
    }

    pub fn range(&self) -> OperatingRange {
        self.range
    }

    pub fn max_derivative_order(&self) -> usize {
        self.max_order
    }

    pub fn is_two_branch(&self) -> bool {
        matches!(self.family, CurveFamily::TwoBranch { .. })
    }

    /// The curve traversed on `branch`. Single-branch curves return themselves.
    pub fn branch(&self, branch: Branch) -> &ConstitutiveCurve {
        match (&self.family, branch) {
            (CurveFamily::TwoBranch { outgoing, .. }, Branch::Outgoing) => outgoing,
            (CurveFamily::TwoBranch { returning, .. }, Branch::Returning) => returning,
            _ => self,
        }
    }

    /// Short human-readable family name.
    pub fn family_name(&self) -> &'static str {
        match self.family {
            CurveFamily::Polynomial { .. } => "polynomial",
            CurveFamily::TanhScaled { .. } => "tanh_scaled",
            CurveFamily::Logistic => "logistic",
            CurveFamily::PiecewiseLinear { .. } => "piecewise_linear",
            CurveFamily::TwoBranch { .. } => "two_branch",
        }
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        self.derivative(x, 0)
    }

    pub fn eval_branch(&self, x: f64, branch: Branch) -> Result<f64> {
        self.branch(branch).eval(x)
    }

    /// Exact k-th derivative (k = 0 is the value). Piecewise-linear curves
    /// return the one-sided slope at kinks; use [`Self::derivative_checked`]
    /// to see the kink flag.
    pub fn derivative(&self, x: f64, k: usize) -> Result<f64> {
        self.derivative_checked(x, k).map(|d| d.value)
    }

    pub fn derivative_on(&self, branch: Branch, x: f64, k: usize) -> Result<f64> {
        self.branch(branch).derivative(x, k)
    }

    pub fn derivative_checked(&self, x: f64, k: usize) -> Result<DerivativeValue> {
        if k > self.max_order {
            return Err(Error::Capability {
                requested: k,
                available: self.max_order,
            });
        }
        if !x.is_finite() || !self.range.contains(x) {
            return Err(Error::Domain {
                x,
                min: self.range.min,
                max: self.range.max,
            });
        }
        let smooth = |value| {
            Ok(DerivativeValue {
                value,
                at_kink: false,
            })
        };
        match &self.family {
            CurveFamily::Polynomial { coefficients } => smooth(poly_derivative_at(coefficients, k, x)),
            CurveFamily::TanhScaled { a, b } => {
                let shape = (b * x).tanh();
                smooth(a * b.powi(k as i32) * poly_eval(&self.shape_polys[k], shape))
            }
            CurveFamily::Logistic => {
                let shape = 1.0 / (1.0 + (-x).exp());
                smooth(poly_eval(&self.shape_polys[k], shape))
            }
            CurveFamily::PiecewiseLinear { knots } => Ok(pwl_derivative(knots, x, k)),
            CurveFamily::TwoBranch { .. } => Err(Error::BranchRequired),
        }
    }

    /// `f(0) = 0` whenever 0 lies in the operating range (checked per branch).
    pub fn is_origin_crossing(&self) -> bool {
        if let CurveFamily::TwoBranch { outgoing, returning } = &self.family {
            return outgoing.is_origin_crossing() && returning.is_origin_crossing();
        }
        if !self.range.contains(0.0) {
            return true;
        }
        self.eval(0.0_f64.clamp(self.range.min, self.range.max))
            .map(|y| y.abs() <= 1e-12)
            .unwrap_or(false)
    }

    /// Interior knots where the slope changes, with the jump size.
    pub fn kinks(&self) -> Vec<(f64, f64)> {
        match &self.family {
            CurveFamily::PiecewiseLinear { knots } => knots
                .windows(3)
                .filter_map(|w| {
                    let left = (w[1].1 - w[0].1) / (w[1].0 - w[0].0);
                    let right = (w[2].1 - w[1].1) / (w[2].0 - w[1].0);
                    (left != right).then_some((w[1].0, (right - left).abs()))
                })
                .collect(),
            CurveFamily::TwoBranch { outgoing, returning } => {
                let mut all = outgoing.kinks();
                all.extend(returning.kinks());
                all
            }
            _ => Vec::new(),
        }
    }
}

fn shape_polys(family: &CurveFamily, max_order: usize) -> Vec<Vec<f64>> {
    // d/du of the shape s(u), expressed in s
    let chain = match family {
        CurveFamily::TanhScaled { .. } => vec![1.0, 0.0, -1.0],
        CurveFamily::Logistic => vec![0.0, 1.0, -1.0],
        _ => return Vec::new(),
    };
    let mut polys = vec![vec![0.0, 1.0]];
    for k in 0..max_order {
        let next = poly_mul(&poly_diff(&polys[k]), &chain);
        polys.push(next);
    }
    polys
}

pub(crate) fn poly_eval(coefficients: &[f64], x: f64) -> f64 {
    coefficients.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

fn poly_diff(coefficients: &[f64]) -> Vec<f64> {
    if coefficients.len() <= 1 {
        return vec![0.0];
    }
    coefficients
        .iter()
        .enumerate()
        .skip(1)
        .map(|(j, c)| c * j as f64)
        .collect()
}

fn poly_mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_derivative_at(coefficients: &[f64], k: usize, x: f64) -> f64 {
    let mut c = coefficients.to_vec();
    for _ in 0..k {
        c = poly_diff(&c);
    }
    poly_eval(&c, x)
}

fn pwl_derivative(knots: &[(f64, f64)], x: f64, k: usize) -> DerivativeValue {
    let last = knots.len() - 1;
    let x = x.clamp(knots[0].0, knots[last].0);
    // segment index, right-sided except at the final knot
    let seg = match knots.iter().position(|&(kx, _)| kx > x) {
        Some(0) => 0,
        Some(i) => i - 1,
        None => last - 1,
    };
    let (x0, y0) = knots[seg];
    let (x1, y1) = knots[seg + 1];
    let slope = (y1 - y0) / (x1 - x0);
    let at_kink = k >= 1
        && knots[1..last].iter().enumerate().any(|(i, &(kx, _))| {
            let i = i + 1;
            let left = (knots[i].1 - knots[i - 1].1) / (knots[i].0 - knots[i - 1].0);
            let right = (knots[i + 1].1 - knots[i].1) / (knots[i + 1].0 - knots[i].0);
            kx == x && left != right
        });
    let value = match k {
        0 => y0 + slope * (x - x0),
        1 => slope,
        _ => 0.0,
    };
    DerivativeValue { value, at_kink }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SingleValuedCheck {
    pub holds: bool,
    pub violating_abscissa: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NonlinearCheck {
    pub holds: bool,
    pub max_secant_deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SmoothnessCheck {
    pub holds: bool,
    /// Location and size of the largest slope jump, if any.
    pub worst_slope_jump: Option<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonotoneCheck {
    pub holds: bool,
    pub violating_interval: Option<(f64, f64)>,
    pub isolated_zero_derivative: Vec<f64>,
}

/// Outcome of the four ideality criteria.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdealityReport {
    pub single_valued: SingleValuedCheck,
    pub nonlinear: NonlinearCheck,
    pub continuously_differentiable: SmoothnessCheck,
    pub strictly_monotone_increasing: MonotoneCheck,
    pub ideal: bool,
}

impl IdealityReport {
    /// Short descriptions of the failed criteria, in criterion order.
    pub fn failures(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if !self.single_valued.holds {
            out.push("multi-valued");
        }
        if !self.nonlinear.holds {
            out.push("linear");
        }
        if !self.continuously_differentiable.holds {
            out.push("not continuously differentiable");
        }
        if !self.strictly_monotone_increasing.holds {
            out.push("not strictly monotone increasing");
        }
        out
    }
}

/// Evaluates the four ideality criteria on a uniform abscissa grid.
pub fn check_ideality(curve: &ConstitutiveCurve, tol: &ToleranceSet) -> IdealityReport {
    let xs = curve.range.samples(IDEALITY_SAMPLES);
    let branches: Vec<&ConstitutiveCurve> = match &curve.family {
        CurveFamily::TwoBranch { outgoing, returning } => vec![outgoing, returning],
        _ => vec![curve],
    };

    let single_valued = match &curve.family {
        CurveFamily::TwoBranch { outgoing, returning } => {
            let (gap, at) = xs
                .iter()
                .map(|&x| {
                    let a = outgoing.eval(x).unwrap_or(f64::NAN);
                    let b = returning.eval(x).unwrap_or(f64::NAN);
                    ((a - b).abs(), x)
                })
                .fold((0.0, xs[0]), |best, cur| if cur.0 > best.0 { cur } else { best });
            let holds = gap <= tol.valuedness_tol;
            SingleValuedCheck {
                holds,
                violating_abscissa: (!holds).then_some(at),
            }
        }
        _ => SingleValuedCheck {
            holds: true,
            violating_abscissa: None,
        },
    };

    let nonlinear = branches
        .iter()
        .map(|b| nonlinear_check(b, &xs, tol))
        .min_by(|a, b| a.max_secant_deviation.total_cmp(&b.max_secant_deviation))
        .expect("at least one branch");

    let kinks = curve.kinks();
    let worst = kinks
        .iter()
        .copied()
        .max_by(|a, b| a.1.total_cmp(&b.1));
    let continuously_differentiable = SmoothnessCheck {
        holds: worst.is_none_or(|(_, jump)| jump <= tol.slope_tol),
        worst_slope_jump: worst,
    };

    let mut monotone = MonotoneCheck {
        holds: true,
        violating_interval: None,
        isolated_zero_derivative: Vec::new(),
    };
    for b in &branches {
        let m = monotone_check(b, &xs, tol);
        monotone.holds &= m.holds;
        if monotone.violating_interval.is_none() {
            monotone.violating_interval = m.violating_interval;
        }
        for x in m.isolated_zero_derivative {
            if !monotone.isolated_zero_derivative.contains(&x) {
                monotone.isolated_zero_derivative.push(x);
            }
        }
    }
    monotone
        .isolated_zero_derivative
        .sort_by(f64::total_cmp);

    let ideal = single_valued.holds
        && nonlinear.holds
        && continuously_differentiable.holds
        && monotone.holds;
    IdealityReport {
        single_valued,
        nonlinear,
        continuously_differentiable,
        strictly_monotone_increasing: monotone,
        ideal,
    }
}

fn nonlinear_check(curve: &ConstitutiveCurve, xs: &[f64], tol: &ToleranceSet) -> NonlinearCheck {
    let r = curve.range;
    let (ya, yb) = (
        curve.eval(r.min).unwrap_or(0.0),
        curve.eval(r.max).unwrap_or(0.0),
    );
    let slope = (yb - ya) / r.width();
    let deviation = xs
        .iter()
        .map(|&x| (curve.eval(x).unwrap_or(f64::NAN) - (ya + slope * (x - r.min))).abs())
        .fold(0.0, f64::max);
    let span = (yb - ya).abs();
    let threshold = tol.nonlin_tol * if span > 0.0 { span } else { 1.0 };
    NonlinearCheck {
        holds: deviation > threshold,
        max_secant_deviation: deviation,
    }
}

fn monotone_check(curve: &ConstitutiveCurve, xs: &[f64], tol: &ToleranceSet) -> MonotoneCheck {
    let slopes: Vec<f64> = xs
        .iter()
        .map(|&x| curve.derivative(x, 1).unwrap_or(f64::NAN))
        .collect();
    let mut violating_interval = None;
    let mut i = 0;
    while i < slopes.len() {
        if slopes[i] < -tol.slope_tol || slopes[i].is_nan() {
            let start = i;
            while i + 1 < slopes.len() && (slopes[i + 1] < -tol.slope_tol) {
                i += 1;
            }
            violating_interval = Some((xs[start], xs[i]));
            break;
        }
        i += 1;
    }
    let rising = slopes.iter().filter(|&&s| s > tol.slope_tol).count();
    let rising_fraction = rising as f64 / slopes.len() as f64;

    // one representative abscissa per run of flat samples
    let mut flats = Vec::new();
    let mut run: Vec<f64> = Vec::new();
    for (&x, &s) in xs.iter().zip(&slopes) {
        if s.abs() <= tol.slope_tol {
            run.push(x);
        } else if !run.is_empty() {
            flats.push(run[run.len() / 2]);
            run.clear();
        }
    }
    if !run.is_empty() {
        flats.push(run[run.len() / 2]);
    }
    MonotoneCheck {
        holds: violating_interval.is_none() && rising_fraction >= MIN_RISING_FRACTION,
        violating_interval,
        isolated_zero_derivative: flats,
    }
}

/// A point `c` in `(a, b)` where the tangent is parallel to the secant over
/// `[a, b]`. When every point qualifies (affine curves) the midpoint is
/// returned.
pub fn mvt_point(curve: &ConstitutiveCurve, a: f64, b: f64) -> Result<f64> {
    if curve.is_two_branch() {
        return Err(Error::BranchRequired);
    }
    mvt_point_on(curve, a, b)
}

/// [`mvt_point`] on one branch of a (possibly two-branch) curve.
pub fn mvt_point_on_branch(curve: &ConstitutiveCurve, branch: Branch, a: f64, b: f64) -> Result<f64> {
    mvt_point_on(curve.branch(branch), a, b)
}

fn mvt_point_on(curve: &ConstitutiveCurve, a: f64, b: f64) -> Result<f64> {
    if !(a < b) {
        return Err(Error::Numerical(format!("mvt interval [{a}, {b}] is empty")));
    }
    let secant = (curve.eval(b)? - curve.eval(a)?) / (b - a);
    curve.derivative(a, 1)?;
    let residual = |c: f64| curve.derivative(c, 1).unwrap_or(f64::NAN) - secant;
    let n = IDEALITY_SAMPLES - 1;
    let ts: Vec<f64> = (0..=n).map(|i| a + (b - a) * i as f64 / n as f64).collect();
    let scale = secant.abs().max(1.0);
    let flat_eps = 1e-12 * scale;
    if ts.iter().all(|&c| residual(c).abs() <= flat_eps) {
        return Ok(0.5 * (a + b));
    }
    let interior = &ts[1..n];
    roots::find_roots(residual, interior, 1e-15 * (b - a).max(1.0), flat_eps)
        .into_iter()
        .find(|&c| c > a && c < b)
        .ok_or_else(|| {
            Error::Numerical(format!(
                "no sign change of f'(c) - {secant} bracketed in ({a}, {b}); \
                 residual at endpoints {} / {}",
                residual(a),
                residual(b)
            ))
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r02() -> OperatingRange {
        OperatingRange::default()
    }

    fn cubic() -> ConstitutiveCurve {
        ConstitutiveCurve::polynomial(vec![0.0, 1.0, 0.0, 1.0 / 3.0], r02()).unwrap()
    }

    fn degenerate_cubic() -> ConstitutiveCurve {
        ConstitutiveCurve::polynomial(vec![0.0, 0.0, 0.5, -1.0 / 6.0], r02()).unwrap()
    }

    fn tanh() -> ConstitutiveCurve {
        ConstitutiveCurve::tanh_scaled(1.0, 1.0, r02()).unwrap()
    }

    fn linear() -> ConstitutiveCurve {
        ConstitutiveCurve::polynomial(vec![0.0, 1.0], r02()).unwrap()
    }

    #[test]
    fn eval_examples() {
        assert!((cubic().eval(1.0).unwrap() - 4.0 / 3.0).abs() < 1e-15);
        assert_eq!(tanh().eval(0.0).unwrap(), 0.0);
        assert!((degenerate_cubic().eval(2.0).unwrap() - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn eval_outside_range_is_domain_error() {
        assert!(matches!(cubic().eval(2.5), Err(Error::Domain { .. })));
        assert!(matches!(cubic().eval(-0.1), Err(Error::Domain { .. })));
    }

    #[test]
    fn derivative_examples() {
        assert!((cubic().derivative(1.0, 2).unwrap() - 2.0).abs() < 1e-15);
        assert!((tanh().derivative(0.0, 1).unwrap() - 1.0).abs() < 1e-15);
        assert!(degenerate_cubic().derivative(1.0, 2).unwrap().abs() < 1e-15);
    }

    #[test]
    fn derivative_beyond_capability() {
        let c = cubic().with_max_order(2).unwrap();
        assert_eq!(
            c.derivative(1.0, 3),
            Err(Error::Capability {
                requested: 3,
                available: 2
            })
        );
    }

    #[test]
    fn tanh_second_derivative_closed_form() {
        let x: f64 = 0.7;
        let sech2 = 1.0 / x.cosh().powi(2);
        let want = -2.0 * sech2 * x.tanh();
        assert!((tanh().derivative(x, 2).unwrap() - want).abs() < 1e-14);
    }

    #[test]
    fn scaled_tanh_chain_factor() {
        let c = ConstitutiveCurve::tanh_scaled(2.0, 0.5, r02()).unwrap();
        let x: f64 = 1.2;
        let want = 2.0 * 0.5 / (0.5 * x).cosh().powi(2);
        assert!((c.derivative(x, 1).unwrap() - want).abs() < 1e-14);
    }

    #[test]
    fn logistic_derivative() {
        let c = ConstitutiveCurve::logistic(OperatingRange::new(-2.0, 2.0).unwrap());
        let s = 1.0 / (1.0 + (-0.3f64).exp());
        assert!((c.derivative(0.3, 1).unwrap() - s * (1.0 - s)).abs() < 1e-15);
        assert!(!c.is_origin_crossing());
    }

    #[test]
    fn piecewise_linear_interpolates_and_flags_kinks() {
        let c = ConstitutiveCurve::piecewise_linear(vec![(0.0, 0.0), (1.0, 1.0), (2.0, 3.0)]).unwrap();
        assert!((c.eval(1.5).unwrap() - 2.0).abs() < 1e-15);
        let at_kink = c.derivative_checked(1.0, 1).unwrap();
        assert!(at_kink.at_kink);
        assert_eq!(at_kink.value, 2.0);
        assert!(!c.derivative_checked(0.5, 1).unwrap().at_kink);
        assert_eq!(c.derivative(0.5, 2).unwrap(), 0.0);
        let report = check_ideality(&c, &ToleranceSet::default());
        assert!(!report.continuously_differentiable.holds);
        assert_eq!(report.continuously_differentiable.worst_slope_jump, Some((1.0, 1.0)));
        assert!(!report.ideal);
    }

    #[test]
    fn piecewise_linear_rejects_unordered_knots() {
        let err = ConstitutiveCurve::piecewise_linear(vec![(0.0, 0.0), (1.0, 1.0), (1.0, 2.0)]);
        assert!(matches!(err, Err(Error::InvalidCurve(_))));
    }

    #[test]
    fn empty_range_rejected() {
        assert!(OperatingRange::new(1.0, 1.0).is_err());
        assert!(OperatingRange::new(2.0, 0.0).is_err());
    }

    #[test]
    fn ideality_examples() {
        let tol = ToleranceSet::default();
        assert!(check_ideality(&cubic(), &tol).ideal);
        assert!(check_ideality(&tanh(), &tol).ideal);
        let lin = check_ideality(&linear(), &tol);
        assert!(!lin.nonlinear.holds);
        assert!(!lin.ideal);
        assert_eq!(lin.failures(), vec!["linear"]);
    }

    #[test]
    fn isolated_flat_points_still_monotone() {
        let report = check_ideality(&degenerate_cubic(), &ToleranceSet::default());
        assert!(report.strictly_monotone_increasing.holds);
        assert_eq!(report.strictly_monotone_increasing.isolated_zero_derivative, vec![0.0, 2.0]);
        assert!(report.ideal);
    }

    #[test]
    fn decreasing_curve_reports_interval() {
        let c = ConstitutiveCurve::polynomial(vec![0.0, 1.0, -1.0], r02()).unwrap();
        let report = check_ideality(&c, &ToleranceSet::default());
        let (lo, hi) = report.strictly_monotone_increasing.violating_interval.unwrap();
        assert!(lo > 0.5 && lo < 0.501);
        assert_eq!(hi, 2.0);
    }

    #[test]
    fn two_branch_is_not_single_valued() {
        let ret = ConstitutiveCurve::polynomial(vec![0.0, 1.0 / 3.0, 1.0], r02()).unwrap();
        let c = ConstitutiveCurve::two_branch(cubic(), ret).unwrap();
        let report = check_ideality(&c, &ToleranceSet::default());
        assert!(!report.single_valued.holds);
        assert!(report.single_valued.violating_abscissa.is_some());
        assert!(report.strictly_monotone_increasing.holds);
        assert!(matches!(c.eval(1.0), Err(Error::BranchRequired)));
        assert!((c.eval_branch(1.0, Branch::Outgoing).unwrap() - 4.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn two_branch_endpoints_must_meet() {
        let ret = ConstitutiveCurve::polynomial(vec![0.0, 1.0, 1.0], r02()).unwrap();
        assert!(ConstitutiveCurve::two_branch(cubic(), ret).is_err());
    }

    #[test]
    fn mvt_examples() {
        let sq = ConstitutiveCurve::polynomial(vec![0.0, 0.0, 1.0], r02()).unwrap();
        assert!((mvt_point(&sq, 0.0, 2.0).unwrap() - 1.0).abs() < 1e-12);
        let c = mvt_point(&cubic(), 0.0, 2.0).unwrap();
        assert!((c - 2.0 / 3f64.sqrt()).abs() < 1e-12);
        assert_eq!(mvt_point(&linear(), 0.0, 2.0).unwrap(), 1.0);
    }

    #[test]
    fn mvt_rejects_bad_interval() {
        assert!(mvt_point(&cubic(), 1.0, 1.0).is_err());
        assert!(mvt_point(&cubic(), 0.0, 3.0).is_err());
    }
}
