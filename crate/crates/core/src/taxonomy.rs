//! Element descriptors, local passivity/activity verdicts and the theorem
//! property suites.
//!
//! An element of order `(alpha, beta)` is defined by a constitutive curve in
//! the plane of its `|alpha|`-fold voltage integral against its `|beta|`-fold
//! current integral. `-max(alpha, beta)` transformations bring that curve
//! down to the verdict plane, where the operational test applies: a locus
//! whose ordinate vanishes wherever its abscissa does is passive, and a
//! point parked on an axis away from the origin witnesses an internal source.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constitutive::{check_ideality, ConstitutiveCurve, IdealityReport};
use crate::error::{Error, Result};
use crate::excitation::{Excitation, DEFAULT_GRID};
use crate::loci::{self, PhaseReport, PlaneAnalysis, PointKind, SpecialPoint, Valuedness};
use crate::transform::{analytic_locus, numeric_transform, ParametricLocus, Provenance};

/// Numerical thresholds shared by every analysis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ToleranceSet {
    pub pinch_tol: f64,
    pub valuedness_tol: f64,
    /// Bisection width in `t`.
    pub root_tol: f64,
    pub slope_tol: f64,
    /// Relative to the ordinate span of the curve.
    pub nonlin_tol: f64,
    pub phase_tol: f64,
    pub witness_tol: f64,
}

impl Default for ToleranceSet {
    fn default() -> Self {
        Self::analytic()
    }
}

impl ToleranceSet {
    /// Thresholds for closed-form loci.
    pub fn analytic() -> Self {
        ToleranceSet {
            pinch_tol: 1e-9,
            valuedness_tol: 1e-9,
            root_tol: 1e-10,
            slope_tol: 1e-9,
            nonlin_tol: 1e-9,
            phase_tol: 1e-6,
            witness_tol: 1e-8,
        }
    }

    /// Thresholds for finite-difference loci, matched to the oracle error.
    pub fn numeric() -> Self {
        ToleranceSet {
            pinch_tol: 1e-4,
            valuedness_tol: 1e-4,
            witness_tol: 1e-3,
            ..Self::analytic()
        }
    }

    pub fn for_provenance(provenance: Provenance) -> Self {
        match provenance {
            Provenance::Analytic => Self::analytic(),
            Provenance::Numeric => Self::numeric(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("pinch_tol", self.pinch_tol),
            ("valuedness_tol", self.valuedness_tol),
            ("root_tol", self.root_tol),
            ("slope_tol", self.slope_tol),
            ("nonlin_tol", self.nonlin_tol),
            ("phase_tol", self.phase_tol),
            ("witness_tol", self.witness_tol),
        ];
        for (name, v) in fields {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::config(format!("tolerances.{name}"), "must be finite and > 0"));
            }
        }
        Ok(())
    }
}

/// Periodic-table coordinates: the number of time integrals (negated) on
/// the voltage side and on the current side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ElementDescriptor {
    pub alpha: i32,
    pub beta: i32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ElementFamily {
    /// `alpha = beta`: resistor, memristor and its higher orders.
    Memristive,
    /// `alpha = beta - 1`: inductor, mem-inductor and its higher orders.
    Inductive,
    /// `beta = alpha - 1`: capacitor, mem-capacitor and its higher orders.
    Capacitive,
    Unnamed,
}

impl ElementDescriptor {
    pub const RESISTOR: Self = Self::new_unchecked(0, 0);
    pub const MEMRISTOR: Self = Self::new_unchecked(-1, -1);
    pub const SECOND_ORDER_MEMRISTOR: Self = Self::new_unchecked(-2, -2);
    pub const SECOND_ORDER_MEMINDUCTOR: Self = Self::new_unchecked(-3, -2);
    pub const SECOND_ORDER_MEMCAPACITOR: Self = Self::new_unchecked(-2, -3);

    const fn new_unchecked(alpha: i32, beta: i32) -> Self {
        ElementDescriptor { alpha, beta }
    }

    /// Differentiating elements (positive exponents) are not modelled.
    pub fn new(alpha: i32, beta: i32) -> Result<Self> {
        if alpha > 0 || beta > 0 {
            return Err(Error::OutOfScope(format!(
                "({alpha}, {beta}): positive exponents describe differentiating elements"
            )));
        }
        Ok(ElementDescriptor { alpha, beta })
    }

    pub fn transforms_to_verdict_plane(&self) -> usize {
        (-self.alpha.max(self.beta)) as usize
    }

    pub fn family(&self) -> ElementFamily {
        if self.alpha == self.beta {
            ElementFamily::Memristive
        } else if self.alpha == self.beta - 1 {
            ElementFamily::Inductive
        } else if self.beta == self.alpha - 1 {
            ElementFamily::Capacitive
        } else {
            ElementFamily::Unnamed
        }
    }

    /// 0 for R/L/C, 1 for the first-order memory elements, and so on.
    pub fn order(&self) -> usize {
        match self.family() {
            ElementFamily::Memristive | ElementFamily::Capacitive => (-self.alpha) as usize,
            ElementFamily::Inductive | ElementFamily::Unnamed => (-self.beta) as usize,
        }
    }

    /// `(abscissa, ordinate)` names of the plane `depth` transformations
    /// below the constitutive plane.
    pub fn plane_labels(&self, depth: usize) -> (String, String) {
        let d = depth as i32;
        (current_attribute(self.beta + d), voltage_attribute(self.alpha + d))
    }
}

fn voltage_attribute(exponent: i32) -> String {
    match exponent {
        0 => "v".into(),
        -1 => "φ".into(),
        -2 => "ρ".into(),
        -3 => "∫ρ".into(),
        e if e < 0 => format!("∫^{}ρ", -e - 2),
        e => format!("d^{e}v"),
    }
}

fn current_attribute(exponent: i32) -> String {
    match exponent {
        0 => "i".into(),
        -1 => "q".into(),
        -2 => "σ".into(),
        -3 => "∫σ".into(),
        e if e < 0 => format!("∫^{}σ", -e - 2),
        e => format!("d^{e}i"),
    }
}

/// Position of an element in the periodic table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableEntry {
    pub name: String,
    pub family: ElementFamily,
    pub order: usize,
    pub in_six_pointed_star: bool,
    /// `(abscissa, ordinate)` of the constitutive plane.
    pub plane_labels: (String, String),
}

pub fn table_position(descriptor: ElementDescriptor) -> Result<TableEntry> {
    let descriptor = ElementDescriptor::new(descriptor.alpha, descriptor.beta)?;
    let family = descriptor.family();
    let order = descriptor.order();
    let base = match family {
        ElementFamily::Memristive => ["resistor", "memristor"],
        ElementFamily::Inductive => ["inductor", "mem-inductor"],
        ElementFamily::Capacitive => ["capacitor", "mem-capacitor"],
        ElementFamily::Unnamed => ["", ""],
    };
    let name = match (family, order) {
        (ElementFamily::Unnamed, _) => "unnamed higher-order element".to_string(),
        (_, 0) => base[0].to_string(),
        (_, 1) => base[1].to_string(),
        (_, _) => format!("higher-order {}", base[1]),
    };
    Ok(TableEntry {
        name,
        family,
        order,
        in_six_pointed_star: family != ElementFamily::Unnamed && order <= 1,
        plane_labels: descriptor.plane_labels(0),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    LocallyPassive,
    LocallyActive,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Degeneration {
    None,
    NegativeNonlinearResistor,
    NegativeNonlinearInductor,
    NegativeNonlinearCapacitor,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InternalSource {
    None,
    CurrentSource,
    VoltageSource,
}

/// How a witness was found.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessSource {
    /// Verdict-plane ordinate where the abscissa vanishes.
    AbscissaZeroOrdinate,
    /// Zero-tangent point of the previous plane, projected.
    ZeroTangentProjection,
    /// Vertical-tangent point of the previous plane, projected.
    VerticalTangentProjection,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    Abscissa,
    Ordinate,
}

/// A verdict-plane point that sits on an axis away from the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Witness {
    pub point: SpecialPoint,
    pub source: WitnessSource,
    pub axis: Axis,
}

impl Witness {
    /// Distance from the origin along the witness axis.
    pub fn magnitude(&self) -> f64 {
        match self.axis {
            Axis::Abscissa => self.point.u.abs(),
            Axis::Ordinate => self.point.w.abs(),
        }
    }

    /// The coordinate that should vanish.
    pub fn off_axis(&self) -> f64 {
        match self.axis {
            Axis::Abscissa => self.point.w,
            Axis::Ordinate => self.point.u,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassificationReport {
    pub descriptor: ElementDescriptor,
    pub element: TableEntry,
    pub curve_family: String,
    pub route: Provenance,
    pub grid_n: usize,
    pub ideality: IdealityReport,
    pub verdict_plane_depth: usize,
    pub per_plane: Vec<PlaneAnalysis>,
    pub verdict: Verdict,
    /// Abscissa-zero witnesses lead for memristive elements, the family's
    /// tangent projection for the others.
    pub witnesses: Vec<Witness>,
    /// Largest magnitude among candidate witnesses, above tolerance or not.
    pub candidate_witness_magnitude: f64,
    /// Whether the abscissa-zero and tangent-projection tests agree.
    pub witness_agreement: bool,
    pub degeneration: Degeneration,
    pub internal_source: InternalSource,
    pub phase: Option<PhaseReport>,
    pub caveats: Vec<String>,
}

/// How the transformation chain is built.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassifyOptions {
    pub grid_n: usize,
    pub route: Provenance,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            grid_n: DEFAULT_GRID,
            route: Provenance::Analytic,
        }
    }
}

/// Builds loci for depths `0..=max_depth`, labelled for `descriptor`.
pub fn build_chain(
    descriptor: ElementDescriptor,
    curve: &ConstitutiveCurve,
    exc: &Excitation,
    max_depth: usize,
    options: ClassifyOptions,
) -> Result<Vec<ParametricLocus>> {
    let grid = exc.grid(options.grid_n)?;
    let mut chain = Vec::with_capacity(max_depth + 1);
    match options.route {
        Provenance::Analytic => {
            for depth in 0..=max_depth {
                chain.push(analytic_locus(curve, exc, depth, &grid)?);
            }
        }
        Provenance::Numeric => {
            let exact = analytic_locus(curve, exc, 0, &grid)?;
            let mut locus = ParametricLocus::from_samples(
                exact.t_values().to_vec(),
                exact.u_values().to_vec(),
                exact.w_values().to_vec(),
                0,
                descriptor.plane_labels(0),
            )?;
            chain.push(locus.clone());
            for _ in 0..max_depth {
                locus = numeric_transform(&locus)?;
                chain.push(locus.clone());
            }
        }
    }
    Ok(chain
        .into_iter()
        .enumerate()
        .map(|(depth, locus)| {
            let (a, o) = descriptor.plane_labels(depth);
            locus.with_labels(a, o)
        })
        .collect())
}

/// Runs the full pipeline with the default analytic route.
pub fn classify(
    descriptor: ElementDescriptor,
    curve: &ConstitutiveCurve,
    exc: &Excitation,
    tol: &ToleranceSet,
) -> Result<ClassificationReport> {
    classify_with(descriptor, curve, exc, tol, ClassifyOptions::default())
}

pub fn classify_with(
    descriptor: ElementDescriptor,
    curve: &ConstitutiveCurve,
    exc: &Excitation,
    tol: &ToleranceSet,
    options: ClassifyOptions,
) -> Result<ClassificationReport> {
    let descriptor = ElementDescriptor::new(descriptor.alpha, descriptor.beta)?;
    tol.validate()?;
    let element = table_position(descriptor)?;
    let v = descriptor.transforms_to_verdict_plane();
    if curve.max_derivative_order() < v {
        return Err(Error::Capability {
            requested: v,
            available: curve.max_derivative_order(),
        });
    }

    let ideality = check_ideality(curve, tol);
    let mut caveats = Vec::new();
    if !ideality.ideal {
        caveats.push(format!("non-ideal: {}", ideality.failures().join(", ")));
    }
    if !curve.is_origin_crossing() {
        caveats.push("constitutive curve does not cross the origin".to_string());
    }

    let chain = build_chain(descriptor, curve, exc, v, options)?;
    let per_plane: Vec<PlaneAnalysis> = chain.iter().map(|l| loci::analyze_plane(l, tol)).collect();
    let verdict_locus = &chain[v];
    let verdict_plane = &per_plane[v];

    // abscissa-zero test on the verdict plane
    let mut candidate = 0.0f64;
    let mut eq_witnesses = Vec::new();
    for z in &verdict_plane.origin.abscissa_zeros {
        candidate = candidate.max(z.w.abs());
        if z.w.abs() > tol.witness_tol {
            let (u, w) = verdict_locus.value_at(z.t);
            eq_witnesses.push(Witness {
                point: SpecialPoint::new(z.t, u, w, PointKind::ActivityWitness, tol.pinch_tol),
                source: WitnessSource::AbscissaZeroOrdinate,
                axis: Axis::Ordinate,
            });
        }
    }

    // tangent points of the previous plane that sit off its origin, projected
    let mut zt_witnesses = Vec::new();
    let mut vt_witnesses = Vec::new();
    if v >= 1 {
        for p in &per_plane[v - 1].special_points {
            if p.chord_angle.is_none() {
                continue;
            }
            let (u, w) = verdict_locus.value_at(p.t);
            let (source, axis, bucket) = match p.kind {
                PointKind::ZeroTangent => (WitnessSource::ZeroTangentProjection, Axis::Abscissa, &mut zt_witnesses),
                PointKind::VerticalTangent => {
                    (WitnessSource::VerticalTangentProjection, Axis::Ordinate, &mut vt_witnesses)
                }
                _ => continue,
            };
            let witness = Witness {
                point: SpecialPoint::new(p.t, u, w, PointKind::ActivityWitness, tol.pinch_tol),
                source,
                axis,
            };
            candidate = candidate.max(witness.magnitude());
            if witness.magnitude() > tol.witness_tol {
                bucket.push(witness);
            }
        }
    }

    let eq_active = !eq_witnesses.is_empty();
    let graph_active = !zt_witnesses.is_empty() || !vt_witnesses.is_empty();
    if eq_active && !graph_active && v >= 2 {
        return Err(Error::Inconsistent(format!(
            "abscissa-zero witness at t = {} has no tangent-projection counterpart",
            eq_witnesses[0].point.t
        )));
    }
    let witness_agreement = eq_active == graph_active;
    if !witness_agreement {
        caveats.push("only the tangent-projection test found a witness".to_string());
    }

    let origin_ok = verdict_plane.origin.crosses_origin
        && verdict_plane
            .origin
            .abscissa_zeros
            .iter()
            .all(|z| z.w.abs() <= tol.witness_tol);
    let verdict = if eq_active || graph_active {
        Verdict::LocallyActive
    } else if v <= 1 && origin_ok {
        Verdict::LocallyPassive
    } else {
        Verdict::Inconclusive
    };

    // the family's own tangent projection names the internal source
    let characteristic = match descriptor.family() {
        ElementFamily::Capacitive => vt_witnesses.first(),
        ElementFamily::Memristive | ElementFamily::Inductive => zt_witnesses.first(),
        ElementFamily::Unnamed => None,
    }
    .or(eq_witnesses.first())
    .or(zt_witnesses.first())
    .or(vt_witnesses.first())
    .copied();
    let internal_source = match (verdict, characteristic) {
        (Verdict::LocallyActive, Some(w)) => match w.axis {
            Axis::Abscissa => InternalSource::CurrentSource,
            Axis::Ordinate => InternalSource::VoltageSource,
        },
        _ => InternalSource::None,
    };

    let witnesses = match verdict {
        Verdict::LocallyActive => {
            let groups = match descriptor.family() {
                ElementFamily::Capacitive => [vt_witnesses, zt_witnesses, eq_witnesses],
                ElementFamily::Inductive => [zt_witnesses, vt_witnesses, eq_witnesses],
                ElementFamily::Memristive | ElementFamily::Unnamed => [eq_witnesses, zt_witnesses, vt_witnesses],
            };
            groups.into_iter().flatten().collect()
        }
        Verdict::LocallyPassive => verdict_plane
            .origin
            .pinches
            .iter()
            .map(|p| Witness {
                point: *p,
                source: WitnessSource::AbscissaZeroOrdinate,
                axis: Axis::Ordinate,
            })
            .collect(),
        Verdict::Inconclusive => Vec::new(),
    };

    let degeneration = match (verdict, descriptor.family()) {
        (Verdict::LocallyActive, family) if descriptor.order() >= 2 => match family {
            ElementFamily::Memristive => Degeneration::NegativeNonlinearResistor,
            ElementFamily::Inductive => Degeneration::NegativeNonlinearInductor,
            ElementFamily::Capacitive => Degeneration::NegativeNonlinearCapacitor,
            ElementFamily::Unnamed => Degeneration::None,
        },
        _ => Degeneration::None,
    };

    let phase = if options.route == Provenance::Analytic && curve.max_derivative_order() >= 2 {
        loci::phase_shift(curve, exc, tol).ok()
    } else {
        None
    };

    Ok(ClassificationReport {
        descriptor,
        element,
        curve_family: curve.family_name().to_string(),
        route: options.route,
        grid_n: options.grid_n,
        ideality,
        verdict_plane_depth: v,
        per_plane,
        verdict,
        witnesses,
        candidate_witness_magnitude: candidate,
        witness_agreement,
        degeneration,
        internal_source,
        phase,
        caveats,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Theorem {
    #[serde(rename = "T-I")]
    LocalPassivity,
    #[serde(rename = "T-II")]
    SingleValue,
    #[serde(rename = "T-III")]
    MemristorActivity,
    #[serde(rename = "T-IV")]
    MemInductorActivity,
    #[serde(rename = "T-V")]
    MemCapacitorActivity,
}

impl Theorem {
    pub const ALL: [Theorem; 5] = [
        Theorem::LocalPassivity,
        Theorem::SingleValue,
        Theorem::MemristorActivity,
        Theorem::MemInductorActivity,
        Theorem::MemCapacitorActivity,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            Theorem::LocalPassivity => "T-I",
            Theorem::SingleValue => "T-II",
            Theorem::MemristorActivity => "T-III",
            Theorem::MemInductorActivity => "T-IV",
            Theorem::MemCapacitorActivity => "T-V",
        }
    }

    /// Universal claims need every instance to pass; the activity claims
    /// are certified by a single active instance.
    fn is_existential(&self) -> bool {
        matches!(
            self,
            Theorem::MemristorActivity | Theorem::MemInductorActivity | Theorem::MemCapacitorActivity
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Pass,
    Fail,
    Inconclusive,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoremResult {
    pub theorem: Theorem,
    pub outcome: Outcome,
    pub detail: String,
    pub counterexample: Option<SpecialPoint>,
}

/// One named curve to run the suite on.
#[derive(Debug, Clone)]
pub struct SuiteInstance {
    pub id: String,
    pub curve: ConstitutiveCurve,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InstanceReport {
    pub id: String,
    pub family: String,
    pub ideal: bool,
    pub results: Vec<TheoremResult>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoremSummary {
    pub theorem: Theorem,
    pub outcome: Outcome,
    pub passes: usize,
    pub fails: usize,
    pub inconclusive: usize,
    pub skipped: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub instances: Vec<InstanceReport>,
    pub summary: Vec<TheoremSummary>,
    pub all_passed: bool,
}

impl SuiteReport {
    pub fn summary_for(&self, theorem: Theorem) -> &TheoremSummary {
        self.summary
            .iter()
            .find(|s| s.theorem == theorem)
            .expect("every theorem is summarised")
    }
}

/// Runs the five theorem checks on every instance (in parallel) and
/// aggregates them per theorem.
pub fn theorem_suite(
    instances: &[SuiteInstance],
    exc: &Excitation,
    tol: &ToleranceSet,
    grid_n: usize,
) -> Result<SuiteReport> {
    tol.validate()?;
    exc.grid(grid_n)?;
    let mut reports: Vec<InstanceReport> = instances
        .par_iter()
        .map(|inst| run_instance(inst, exc, tol, grid_n))
        .collect();
    reports.sort_by(|a, b| a.id.cmp(&b.id));

    let summary: Vec<TheoremSummary> = Theorem::ALL
        .iter()
        .map(|&theorem| {
            let outcomes: Vec<Outcome> = reports
                .iter()
                .flat_map(|r| r.results.iter())
                .filter(|r| r.theorem == theorem)
                .map(|r| r.outcome)
                .collect();
            let count = |o: Outcome| outcomes.iter().filter(|&&x| x == o).count();
            let (passes, fails, inconclusive, skipped) = (
                count(Outcome::Pass),
                count(Outcome::Fail),
                count(Outcome::Inconclusive),
                count(Outcome::Skipped),
            );
            let outcome = if fails > 0 {
                Outcome::Fail
            } else if passes > 0 && (theorem.is_existential() || inconclusive == 0) {
                Outcome::Pass
            } else if inconclusive > 0 {
                Outcome::Inconclusive
            } else {
                Outcome::Skipped
            };
            TheoremSummary {
                theorem,
                outcome,
                passes,
                fails,
                inconclusive,
                skipped,
            }
        })
        .collect();
    let all_passed = summary.iter().all(|s| s.outcome != Outcome::Fail);
    Ok(SuiteReport {
        instances: reports,
        summary,
        all_passed,
    })
}

fn run_instance(inst: &SuiteInstance, exc: &Excitation, tol: &ToleranceSet, grid_n: usize) -> InstanceReport {
    let ideality = check_ideality(&inst.curve, tol);
    let results = if !ideality.ideal {
        let reason = format!("non-ideal: {}", ideality.failures().join(", "));
        Theorem::ALL
            .iter()
            .map(|&theorem| TheoremResult {
                theorem,
                outcome: Outcome::Skipped,
                detail: reason.clone(),
                counterexample: None,
            })
            .collect()
    } else {
        let options = ClassifyOptions {
            grid_n,
            route: Provenance::Analytic,
        };
        vec![
            check_passivity(&inst.curve, exc, tol, options),
            check_single_value(&inst.curve, exc, tol, grid_n),
            check_activity(Theorem::MemristorActivity, &inst.curve, exc, tol, options),
            check_activity(Theorem::MemInductorActivity, &inst.curve, exc, tol, options),
            check_activity(Theorem::MemCapacitorActivity, &inst.curve, exc, tol, options),
        ]
    };
    InstanceReport {
        id: inst.id.clone(),
        family: inst.curve.family_name().to_string(),
        ideal: ideality.ideal,
        results,
    }
}

fn failed(theorem: Theorem, detail: impl Into<String>, counterexample: Option<SpecialPoint>) -> TheoremResult {
    TheoremResult {
        theorem,
        outcome: Outcome::Fail,
        detail: detail.into(),
        counterexample,
    }
}

fn passed(theorem: Theorem, detail: impl Into<String>) -> TheoremResult {
    TheoremResult {
        theorem,
        outcome: Outcome::Pass,
        detail: detail.into(),
        counterexample: None,
    }
}

fn check_passivity(
    curve: &ConstitutiveCurve,
    exc: &Excitation,
    tol: &ToleranceSet,
    options: ClassifyOptions,
) -> TheoremResult {
    let theorem = Theorem::LocalPassivity;
    let report = match classify_with(ElementDescriptor::MEMRISTOR, curve, exc, tol, options) {
        Ok(r) => r,
        Err(e) => return failed(theorem, e.to_string(), None),
    };
    if report.verdict != Verdict::LocallyPassive {
        return failed(
            theorem,
            format!("verdict {:?}", report.verdict),
            report.witnesses.first().map(|w| w.point),
        );
    }
    // pinches must sit exactly at the zeros of the excitation current
    let half = 0.5 * exc.period();
    let expected: Vec<f64> = (0..=2).map(|k| k as f64 * half).collect();
    let pinches: Vec<f64> = report.per_plane[1].origin.pinches.iter().map(|p| p.t).collect();
    let matches = pinches.len() == expected.len()
        && pinches
            .iter()
            .zip(&expected)
            .all(|(a, b)| (a - b).abs() <= tol.root_tol);
    if matches {
        passed(theorem, "pinched at every zero of the excitation")
    } else {
        failed(theorem, format!("pinch set {pinches:?} differs from {expected:?}"), None)
    }
}

fn check_single_value(curve: &ConstitutiveCurve, exc: &Excitation, tol: &ToleranceSet, grid_n: usize) -> TheoremResult {
    let theorem = Theorem::SingleValue;
    let locus = match exc.grid(grid_n).and_then(|g| analytic_locus(curve, exc, 2, &g)) {
        Ok(l) => l,
        Err(e) => return failed(theorem, e.to_string(), None),
    };
    let report = loci::valuedness(&locus, tol);
    match report.valuedness {
        Valuedness::Single => passed(theorem, format!("max ordinate gap {:e}", report.max_gap)),
        Valuedness::Double => {
            let pair = report.witnesses[0];
            failed(
                theorem,
                format!("ordinates {} and {} at t = {} / {}", pair.w_a, pair.w_b, pair.t_a, pair.t_b),
                Some(SpecialPoint::new(pair.t_a, pair.u, pair.w_a, PointKind::ActivityWitness, tol.pinch_tol)),
            )
        }
    }
}

fn check_activity(
    theorem: Theorem,
    curve: &ConstitutiveCurve,
    exc: &Excitation,
    tol: &ToleranceSet,
    options: ClassifyOptions,
) -> TheoremResult {
    let (descriptor, source) = match theorem {
        Theorem::MemInductorActivity => (ElementDescriptor::SECOND_ORDER_MEMINDUCTOR, Some(InternalSource::CurrentSource)),
        Theorem::MemCapacitorActivity => (ElementDescriptor::SECOND_ORDER_MEMCAPACITOR, Some(InternalSource::VoltageSource)),
        _ => (ElementDescriptor::SECOND_ORDER_MEMRISTOR, None),
    };
    let report = match classify_with(descriptor, curve, exc, tol, options) {
        Ok(r) => r,
        Err(e) => return failed(theorem, e.to_string(), None),
    };
    match report.verdict {
        Verdict::LocallyActive => {
            if source.is_some_and(|s| s != report.internal_source) {
                return failed(
                    theorem,
                    format!("internal source {:?}, expected {:?}", report.internal_source, source.unwrap()),
                    report.witnesses.first().map(|w| w.point),
                );
            }
            let w = report.witnesses[0];
            passed(
                theorem,
                format!("witness ({}, {}) at t = {}", w.point.u, w.point.w, w.point.t),
            )
        }
        Verdict::Inconclusive => TheoremResult {
            theorem,
            outcome: Outcome::Inconclusive,
            detail: format!(
                "candidate witness magnitude {:e} below tolerance: second derivative vanishes at the range midpoint",
                report.candidate_witness_magnitude
            ),
            counterexample: None,
        },
        Verdict::LocallyPassive => failed(
            theorem,
            "ideal higher-order element classified passive",
            report.per_plane[report.verdict_plane_depth].origin.pinches.first().copied(),
        ),
    }
}
