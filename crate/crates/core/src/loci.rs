//! Fingerprint analysis of a single locus: pinches, valuedness, odd
//! symmetry, tangent points, negative-slope arcs and phase lag/advance.
//!
//! Loci carrying a closed-form trajectory are analysed exactly (roots refined
//! by bisection in `t`); sampled loci fall back to finite-difference
//! tangents and linear interpolation between samples.

use serde::Serialize;

use crate::constitutive::ConstitutiveCurve;
use crate::error::{Error, Result};
use crate::excitation::Excitation;
use crate::roots;
use crate::taxonomy::ToleranceSet;
use crate::transform::{ChainTrajectory, ParametricLocus, Trajectory};

/// Relative level under which a sampled channel value counts as touching zero.
const TOUCH_REL: f64 = 1e-12;

/// A tangent is degenerate when the other derivative is below this fraction
/// of its channel scale (analytic) ...
const DEGENERATE_REL_ANALYTIC: f64 = 1e-7;
/// ... or this fraction for finite-difference tangents.
const DEGENERATE_REL_NUMERIC: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PointKind {
    Pinch,
    ZeroTangent,
    VerticalTangent,
    ActivityWitness,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpecialPoint {
    pub t: f64,
    pub u: f64,
    pub w: f64,
    pub kind: PointKind,
    /// `atan2(w, u)`; `None` at the origin.
    pub chord_angle: Option<f64>,
}

impl SpecialPoint {
    pub fn new(t: f64, u: f64, w: f64, kind: PointKind, pinch_tol: f64) -> Self {
        let at_origin = u.abs() < pinch_tol && w.abs() < pinch_tol;
        SpecialPoint {
            t,
            u,
            w,
            kind,
            chord_angle: (!at_origin).then(|| w.atan2(u)),
        }
    }
}

/// Maximal parameter interval on which the locus slope is negative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ArcInterval {
    pub t_start: f64,
    pub t_end: f64,
    pub slope_sign: i8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PhaseClass {
    Lag,
    Advance,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhaseReport {
    pub t_peak_ordinate: f64,
    pub t_peak_abscissa: f64,
    pub shift: f64,
    pub classification: PhaseClass,
}

/// Ordinate found where the abscissa vanishes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AbscissaZero {
    pub t: f64,
    pub w: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OriginCrossing {
    pub crosses_origin: bool,
    pub pinches: Vec<SpecialPoint>,
    pub abscissa_zeros: Vec<AbscissaZero>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Valuedness {
    Single,
    Double,
}

/// Two parameters sharing one abscissa, with their ordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WitnessPair {
    pub t_a: f64,
    pub t_b: f64,
    pub u: f64,
    pub w_a: f64,
    pub w_b: f64,
}

impl WitnessPair {
    pub fn gap(&self) -> f64 {
        (self.w_a - self.w_b).abs()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValuednessReport {
    pub valuedness: Valuedness,
    pub max_gap: f64,
    /// Number of sample pairs whose ordinates differ by more than the tolerance.
    pub violating_pairs: usize,
    /// The widest-separated pair, when one exists.
    pub witnesses: Vec<WitnessPair>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SymmetryReport {
    pub symmetric: bool,
    pub max_violation: f64,
}

#[derive(Clone, Copy)]
enum Channel {
    U,
    DU,
    DW,
}

fn scale_of(values: &[f64]) -> f64 {
    values.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE)
}

fn channel_roots(locus: &ParametricLocus, channel: Channel, tol: &ToleranceSet) -> Vec<f64> {
    let ts = locus.t_values();
    let (order, pick): (usize, fn((f64, f64)) -> f64) = match channel {
        Channel::U => (0, |p| p.0),
        Channel::DU => (1, |p| p.0),
        Channel::DW => (1, |p| p.1),
    };
    let exact = locus
        .trajectory()
        .filter(|tr| tr.at(ts[0], order).is_some());
    match exact {
        Some(tr) => {
            let g = |t: f64| tr.at(t, order).map_or(f64::NAN, pick);
            let samples: Vec<f64> = ts.iter().map(|&t| g(t)).collect();
            let eps = TOUCH_REL * scale_of(&samples);
            roots::find_roots(g, ts, tol.root_tol, eps)
        }
        None => {
            let samples: Vec<f64> = match channel {
                Channel::U => locus.u_values().to_vec(),
                Channel::DU => locus.tangents().0,
                Channel::DW => locus.tangents().1,
            };
            let eps = TOUCH_REL * scale_of(&samples);
            roots::find_sampled_roots(ts, &samples, eps)
        }
    }
}

fn degenerate_floor(locus: &ParametricLocus, values: &[f64]) -> f64 {
    let rel = if locus.has_exact_tangents() {
        DEGENERATE_REL_ANALYTIC
    } else {
        DEGENERATE_REL_NUMERIC
    };
    rel * scale_of(values)
}

/// Pinch points and the ordinate at every zero of the abscissa.
pub fn origin_crossing(locus: &ParametricLocus, tol: &ToleranceSet) -> OriginCrossing {
    let mut pinches = Vec::new();
    let mut abscissa_zeros = Vec::new();
    for t in channel_roots(locus, Channel::U, tol) {
        let (u, w) = locus.value_at(t);
        abscissa_zeros.push(AbscissaZero { t, w });
        if u.abs() < tol.pinch_tol && w.abs() < tol.pinch_tol {
            pinches.push(SpecialPoint::new(t, u, w, PointKind::Pinch, tol.pinch_tol));
        }
    }
    OriginCrossing {
        crosses_origin: !pinches.is_empty(),
        pinches,
        abscissa_zeros,
    }
}

/// Parameter sharing the abscissa of `t` under the raised-cosine stack:
/// `t -> half_period - t` on odd depths, `t -> period - t` on even ones.
pub fn partner_parameter(locus: &ParametricLocus, t: f64) -> f64 {
    let period = locus.period();
    let t0 = locus.t_values()[0];
    let local = t - t0;
    let partner = if locus.depth() % 2 == 1 {
        (0.5 * period - local).rem_euclid(period)
    } else {
        period - local
    };
    t0 + partner
}

/// The pair `(t, partner(t))` with its ordinates.
pub fn pair_ordinates(locus: &ParametricLocus, t: f64) -> WitnessPair {
    let tb = partner_parameter(locus, t);
    let (u, w_a) = locus.value_at(t);
    let (_, w_b) = locus.value_at(tb);
    WitnessPair {
        t_a: t,
        t_b: tb,
        u,
        w_a,
        w_b,
    }
}

fn partner_index(locus: &ParametricLocus, i: usize) -> Option<usize> {
    let n = locus.len() - 1;
    if locus.depth().is_multiple_of(2) {
        Some(n - i)
    } else if n.is_multiple_of(2) {
        Some((n / 2 + n - i % n) % n)
    } else {
        None
    }
}

/// Single- or double-valuedness via the closed-form abscissa pairings.
pub fn valuedness(locus: &ParametricLocus, tol: &ToleranceSet) -> ValuednessReport {
    let exact = locus.trajectory().is_some();
    let ts = locus.t_values();
    let mut worst: Option<WitnessPair> = None;
    let mut violating_pairs = 0;
    for (i, &t) in ts.iter().enumerate() {
        let pair = match (exact, partner_index(locus, i)) {
            (false, Some(j)) => WitnessPair {
                t_a: t,
                t_b: ts[j],
                u: locus.u_values()[i],
                w_a: locus.w_values()[i],
                w_b: locus.w_values()[j],
            },
            _ => pair_ordinates(locus, t),
        };
        if (pair.t_b - pair.t_a).abs() < 1e-12 || pair.t_b < pair.t_a {
            continue;
        }
        if pair.gap() > tol.valuedness_tol {
            violating_pairs += 1;
        }
        if worst.is_none_or(|w| pair.gap() > w.gap()) {
            worst = Some(pair);
        }
    }
    let max_gap = worst.map_or(0.0, |w| w.gap());
    ValuednessReport {
        valuedness: if violating_pairs > 0 {
            Valuedness::Double
        } else {
            Valuedness::Single
        },
        max_gap,
        violating_pairs,
        witnesses: worst.into_iter().collect(),
    }
}

/// Point symmetry about the origin: `u(T - t) = -u(t)`, `w(T - t) = -w(t)`.
pub fn odd_symmetry(locus: &ParametricLocus, tol: &ToleranceSet) -> SymmetryReport {
    let n = locus.len() - 1;
    let ts = locus.t_values();
    let exact = locus.trajectory().is_some();
    let max_violation = (0..=n)
        .map(|i| {
            let (ua, wa) = (locus.u_values()[i], locus.w_values()[i]);
            let (ub, wb) = if exact {
                locus.value_at(ts[0] + locus.period() - (ts[i] - ts[0]))
            } else {
                (locus.u_values()[n - i], locus.w_values()[n - i])
            };
            (ua + ub).abs().max((wa + wb).abs())
        })
        .fold(0.0, f64::max);
    SymmetryReport {
        symmetric: max_violation <= tol.valuedness_tol,
        max_violation,
    }
}

/// Points where `dw/dt = 0` while `du/dt` stays clear of zero.
pub fn zero_tangent_points(locus: &ParametricLocus, tol: &ToleranceSet) -> Vec<SpecialPoint> {
    tangent_points(locus, tol, PointKind::ZeroTangent)
}

/// Points where `du/dt = 0` while `dw/dt` stays clear of zero.
pub fn vertical_tangent_points(locus: &ParametricLocus, tol: &ToleranceSet) -> Vec<SpecialPoint> {
    tangent_points(locus, tol, PointKind::VerticalTangent)
}

fn tangent_points(locus: &ParametricLocus, tol: &ToleranceSet, kind: PointKind) -> Vec<SpecialPoint> {
    let (du, dw) = locus.tangents();
    let (root_channel, other_values, pick): (Channel, &[f64], fn((f64, f64)) -> f64) = match kind {
        PointKind::ZeroTangent => (Channel::DW, &du, |d| d.0),
        _ => (Channel::DU, &dw, |d| d.1),
    };
    let floor = degenerate_floor(locus, other_values);
    channel_roots(locus, root_channel, tol)
        .into_iter()
        .filter(|&t| pick(locus.tangent_at(t)).abs() > floor)
        .map(|t| {
            let (u, w) = locus.value_at(t);
            SpecialPoint::new(t, u, w, kind, tol.pinch_tol)
        })
        .collect()
}

/// Maximal intervals where `(dw/dt) / (du/dt) < 0`. Breakpoints are the
/// zeros of either tangent component, so every arc ends at a tangent point
/// or a pinch.
pub fn negative_slope_arcs(locus: &ParametricLocus, tol: &ToleranceSet) -> Vec<ArcInterval> {
    let ts = locus.t_values();
    let (t_first, t_last) = (ts[0], ts[ts.len() - 1]);
    let mut breaks = vec![t_first, t_last];
    breaks.extend(channel_roots(locus, Channel::DU, tol));
    breaks.extend(channel_roots(locus, Channel::DW, tol));
    breaks.sort_by(f64::total_cmp);
    breaks.dedup_by(|a, b| (*a - *b).abs() < 10.0 * tol.root_tol);

    let mut arcs: Vec<ArcInterval> = Vec::new();
    for pair in breaks.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        if b - a <= 10.0 * tol.root_tol {
            continue;
        }
        let (du, dw) = locus.tangent_at(0.5 * (a + b));
        if du * dw < 0.0 {
            match arcs.last_mut() {
                Some(last) if (last.t_end - a).abs() <= 10.0 * tol.root_tol => last.t_end = b,
                _ => arcs.push(ArcInterval {
                    t_start: a,
                    t_end: b,
                    slope_sign: -1,
                }),
            }
        }
    }
    arcs
}

/// Peak timing of the first-transformed ordinate against its abscissa.
pub fn phase_shift(curve: &ConstitutiveCurve, exc: &Excitation, tol: &ToleranceSet) -> Result<PhaseReport> {
    let traj = ChainTrajectory::new(curve.clone(), *exc, 1)?;
    let half = 0.5 * exc.period();
    let grid = exc.grid(crate::excitation::DEFAULT_GRID)?;
    let ts: Vec<f64> = grid
        .t_values()
        .iter()
        .copied()
        .filter(|&t| t > 0.0 && t < half)
        .collect();
    let first_peak = |pick: fn((f64, f64)) -> f64| -> Option<f64> {
        let slope = |t: f64| traj.at(t, 1).map_or(f64::NAN, pick);
        let samples: Vec<f64> = ts.iter().map(|&t| slope(t)).collect();
        let eps = TOUCH_REL * scale_of(&samples);
        let step = grid.spacing() * 0.5;
        roots::find_roots(slope, &ts, tol.root_tol, eps)
            .into_iter()
            .find(|&t| slope(t - step) > 0.0 && slope(t + step) < 0.0)
    };
    let t_w = first_peak(|d| d.1)
        .ok_or_else(|| Error::Numerical("ordinate has no peak in the first half period".into()))?;
    let t_u = first_peak(|d| d.0)
        .ok_or_else(|| Error::Numerical("abscissa has no peak in the first half period".into()))?;
    let shift = t_w - t_u;
    let classification = if shift > tol.phase_tol {
        PhaseClass::Lag
    } else if shift < -tol.phase_tol {
        PhaseClass::Advance
    } else {
        PhaseClass::None
    };
    Ok(PhaseReport {
        t_peak_ordinate: t_w,
        t_peak_abscissa: t_u,
        shift,
        classification,
    })
}

/// Per-plane fingerprint.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Fingerprint {
    pub pinched: bool,
    pub valuedness: Valuedness,
    pub odd_symmetric: bool,
    pub negative_slope_arcs: Vec<ArcInterval>,
}

/// Everything the analyses report for one plane of the chain.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlaneAnalysis {
    pub depth: usize,
    pub labels: (String, String),
    pub fingerprint: Fingerprint,
    pub origin: OriginCrossing,
    pub valuedness: ValuednessReport,
    pub symmetry: SymmetryReport,
    pub special_points: Vec<SpecialPoint>,
}

pub fn analyze_plane(locus: &ParametricLocus, tol: &ToleranceSet) -> PlaneAnalysis {
    let origin = origin_crossing(locus, tol);
    let valued = valuedness(locus, tol);
    let symmetry = odd_symmetry(locus, tol);
    let arcs = negative_slope_arcs(locus, tol);
    let mut special_points = origin.pinches.clone();
    special_points.extend(zero_tangent_points(locus, tol));
    special_points.extend(vertical_tangent_points(locus, tol));
    special_points.sort_by(|a, b| a.t.total_cmp(&b.t));
    let (a, o) = locus.labels();
    PlaneAnalysis {
        depth: locus.depth(),
        labels: (a.to_string(), o.to_string()),
        fingerprint: Fingerprint {
            pinched: origin.crosses_origin,
            valuedness: valued.valuedness,
            odd_symmetric: symmetry.symmetric,
            negative_slope_arcs: arcs,
        },
        origin,
        valuedness: valued,
        symmetry,
        special_points,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constitutive::OperatingRange;
    use crate::transform::{analytic_locus, generic_labels};
    use std::f64::consts::PI;
    use std::sync::Arc;

    fn tol() -> ToleranceSet {
        ToleranceSet::default()
    }

    fn cubic() -> ConstitutiveCurve {
        ConstitutiveCurve::polynomial(vec![0.0, 1.0, 0.0, 1.0 / 3.0], OperatingRange::default()).unwrap()
    }

    fn tanh() -> ConstitutiveCurve {
        ConstitutiveCurve::tanh_scaled(1.0, 1.0, OperatingRange::default()).unwrap()
    }

    fn linear() -> ConstitutiveCurve {
        ConstitutiveCurve::polynomial(vec![0.0, 1.0], OperatingRange::default()).unwrap()
    }

    fn locus(curve: &ConstitutiveCurve, depth: usize) -> ParametricLocus {
        let exc = Excitation::default();
        analytic_locus(curve, &exc, depth, &exc.grid(4096).unwrap()).unwrap()
    }

    #[derive(Debug)]
    struct Circle;
    impl Trajectory for Circle {
        fn at(&self, t: f64, order: usize) -> Option<(f64, f64)> {
            Some(match order % 4 {
                0 => (t.sin(), t.cos()),
                1 => (t.cos(), -t.sin()),
                2 => (-t.sin(), -t.cos()),
                _ => (-t.cos(), t.sin()),
            })
        }
    }

    fn circle() -> ParametricLocus {
        let grid = Excitation::default().grid(1024).unwrap();
        ParametricLocus::from_trajectory(Arc::new(Circle), &grid, 1, generic_labels(1)).unwrap()
    }

    #[test]
    fn first_order_locus_pinches_at_half_periods() {
        let oc = origin_crossing(&locus(&cubic(), 1), &tol());
        assert!(oc.crosses_origin);
        let ts: Vec<f64> = oc.pinches.iter().map(|p| p.t).collect();
        assert_eq!(ts.len(), 3);
        for (t, want) in ts.iter().zip([0.0, PI, 2.0 * PI]) {
            assert!((t - want).abs() < 1e-10);
        }
        assert!(oc.pinches.iter().all(|p| p.chord_angle.is_none()));
    }

    #[test]
    fn second_order_locus_avoids_origin() {
        let oc = origin_crossing(&locus(&cubic(), 2), &tol());
        assert!(!oc.crosses_origin);
        assert_eq!(oc.abscissa_zeros.len(), 2);
        for (z, want) in oc.abscissa_zeros.iter().zip([PI / 2.0, 1.5 * PI]) {
            assert!((z.t - want).abs() < 1e-10);
            assert!((z.w - 2.0).abs() < 1e-9);
        }
    }

    #[test]
    fn sampled_diagonal_crosses_origin() {
        let grid = Excitation::default().grid(256).unwrap();
        let t = grid.t_values().to_vec();
        let u: Vec<f64> = t.iter().map(|t| 1.0 - t.cos()).collect();
        let l = ParametricLocus::from_samples(t, u.clone(), u, 0, generic_labels(0)).unwrap();
        assert!(origin_crossing(&l, &ToleranceSet::numeric()).crosses_origin);
    }

    #[test]
    fn valuedness_examples() {
        let l1 = locus(&cubic(), 1);
        let pair = pair_ordinates(&l1, PI / 4.0);
        assert!((pair.t_b - 0.75 * PI).abs() < 1e-15);
        assert!((pair.w_a - 0.767_766_952_966_368_8).abs() < 1e-12);
        assert!((pair.w_b - 2.767_766_952_966_369).abs() < 1e-12);
        assert_eq!(valuedness(&l1, &tol()).valuedness, Valuedness::Double);
        assert_eq!(valuedness(&locus(&cubic(), 2), &tol()).valuedness, Valuedness::Single);
        assert_eq!(valuedness(&locus(&cubic(), 0), &tol()).valuedness, Valuedness::Single);
    }

    #[test]
    fn valuedness_sampled_matches_exact() {
        let exact = locus(&tanh(), 1);
        let sampled = ParametricLocus::from_samples(
            exact.t_values().to_vec(),
            exact.u_values().to_vec(),
            exact.w_values().to_vec(),
            1,
            generic_labels(1),
        )
        .unwrap();
        let a = valuedness(&exact, &tol());
        let b = valuedness(&sampled, &tol());
        assert_eq!(a.valuedness, b.valuedness);
        assert!((a.max_gap - b.max_gap).abs() < 1e-9);
    }

    #[test]
    fn odd_symmetry_examples() {
        let l1 = locus(&cubic(), 1);
        assert!(odd_symmetry(&l1, &tol()).symmetric);
        let (_, w) = l1.value_at(PI / 2.0);
        let (_, w2) = l1.value_at(1.5 * PI);
        assert!((w - 2.0).abs() < 1e-14 && (w2 + 2.0).abs() < 1e-14);
        assert!(odd_symmetry(&locus(&linear(), 1), &tol()).symmetric);
        assert!(!odd_symmetry(&locus(&cubic(), 2), &tol()).symmetric);
    }

    #[test]
    fn zero_tangent_examples() {
        let zt = zero_tangent_points(&locus(&cubic(), 1), &tol());
        assert_eq!(zt.len(), 2);
        assert!((zt[0].t - 2.200_508_153_854_722).abs() < 1e-6);
        assert!((zt[0].t.cos() + 0.588_911_881_820_317).abs() < 1e-6);
        let zt = zero_tangent_points(&locus(&tanh(), 1), &tol());
        assert!((zt[0].t - 0.973_314_098_768_248_6).abs() < 1e-6);
        assert!(zero_tangent_points(&locus(&linear(), 0), &tol()).is_empty());
    }

    #[test]
    fn vertical_tangent_examples() {
        let vt = vertical_tangent_points(&locus(&cubic(), 1), &tol());
        let ts: Vec<f64> = vt.iter().map(|p| p.t).collect();
        assert_eq!(ts.len(), 2);
        assert!((ts[0] - PI / 2.0).abs() < 1e-10 && (ts[1] - 1.5 * PI).abs() < 1e-10);
        assert!(vertical_tangent_points(&locus(&cubic(), 0), &tol()).is_empty());
        let vt = vertical_tangent_points(&circle(), &tol());
        assert_eq!(vt.len(), 2);
        assert!((vt[0].t - PI / 2.0).abs() < 1e-10);
    }

    #[test]
    fn negative_slope_arc_examples() {
        let arcs = negative_slope_arcs(&locus(&cubic(), 1), &tol());
        let first = arcs[0];
        assert!((first.t_start - PI / 2.0).abs() < 1e-9);
        assert!((first.t_end - 2.200_508_153_854_722).abs() < 1e-6);
        assert_eq!(first.slope_sign, -1);

        let arcs = negative_slope_arcs(&locus(&tanh(), 1), &tol());
        assert!((arcs[0].t_start - 0.973_314_098_768_248_6).abs() < 1e-6);
        assert!((arcs[0].t_end - PI / 2.0).abs() < 1e-9);

        assert!(negative_slope_arcs(&locus(&cubic(), 0), &tol()).is_empty());
    }

    #[test]
    fn phase_examples() {
        let exc = Excitation::default();
        let p = phase_shift(&cubic(), &exc, &tol()).unwrap();
        assert_eq!(p.classification, PhaseClass::Lag);
        assert!((p.shift - (2.200_508_153_854_722 - PI / 2.0)).abs() < 1e-6);
        let p = phase_shift(&tanh(), &exc, &tol()).unwrap();
        assert_eq!(p.classification, PhaseClass::Advance);
        assert!((p.shift - (0.973_314_098_768_248_6 - PI / 2.0)).abs() < 1e-6);
        let p = phase_shift(&linear(), &exc, &tol()).unwrap();
        assert_eq!(p.classification, PhaseClass::None);
    }
}
