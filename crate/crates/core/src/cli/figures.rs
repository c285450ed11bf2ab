//! Reference figures: loci of the cubic and tanh curves, their waveforms,
//! and the derivative structure of the degenerate curve.

use crate::constitutive::{ConstitutiveCurve, OperatingRange};
use crate::error::{Error, Result};
use crate::excitation::Excitation;
use crate::loci::{analyze_plane, phase_shift};
use crate::taxonomy::{build_chain, ClassifyOptions, ElementDescriptor, ToleranceSet};

use super::output::{columns_csv, locus_csv, locus_plot, Marker, Plot, Series};

pub const FIGURE_IDS: [&str; 6] = ["fig2", "fig4", "fig6", "fig7", "fig8", "fig10"];

/// A file name and its contents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Artifact {
    pub file: String,
    pub contents: String,
}

fn cubic() -> ConstitutiveCurve {
    ConstitutiveCurve::polynomial(vec![0.0, 1.0, 0.0, 1.0 / 3.0], OperatingRange::default()).expect("valid cubic")
}

fn tanh() -> ConstitutiveCurve {
    ConstitutiveCurve::tanh_scaled(1.0, 1.0, OperatingRange::default()).expect("valid tanh")
}

fn degenerate() -> ConstitutiveCurve {
    ConstitutiveCurve::polynomial(vec![0.0, 0.0, 0.5, -1.0 / 6.0], OperatingRange::default()).expect("valid cubic")
}

pub fn render(id: &str, grid_n: usize) -> Result<Vec<Artifact>> {
    match id {
        "fig2" => loci_figure(id, ElementDescriptor::MEMRISTOR, &cubic(), grid_n),
        "fig4" => loci_figure(id, ElementDescriptor::SECOND_ORDER_MEMRISTOR, &cubic(), grid_n),
        "fig7" => loci_figure(id, ElementDescriptor::SECOND_ORDER_MEMRISTOR, &tanh(), grid_n),
        "fig6" => waveform_figure(id, &cubic(), grid_n),
        "fig8" => waveform_figure(id, &tanh(), grid_n),
        "fig10" => derivative_figure(id, &degenerate()),
        other => Err(Error::config(
            "figure",
            format!("unknown figure `{other}` (one of {})", FIGURE_IDS.join(", ")),
        )),
    }
}

/// Every plane from the constitutive curve down to the verdict plane.
fn loci_figure(
    id: &str,
    descriptor: ElementDescriptor,
    curve: &ConstitutiveCurve,
    grid_n: usize,
) -> Result<Vec<Artifact>> {
    let exc = Excitation::default();
    let tol = ToleranceSet::default();
    let depth = descriptor.transforms_to_verdict_plane();
    let options = ClassifyOptions {
        grid_n,
        ..ClassifyOptions::default()
    };
    let chain = build_chain(descriptor, curve, &exc, depth, options)?;
    let mut out = Vec::new();
    for locus in &chain {
        let d = locus.depth();
        let analysis = analyze_plane(locus, &tol);
        let (a, o) = locus.labels();
        let title = format!("{id} plane {d}: {o}-{a}");
        out.push(Artifact {
            file: format!("{id}.{d}.csv"),
            contents: locus_csv(locus)?,
        });
        out.push(Artifact {
            file: format!("{id}.{d}.svg"),
            contents: locus_plot(locus, &title, &analysis.special_points).render(),
        });
    }
    Ok(out)
}

/// First-transformed ordinate and abscissa against time, the abscissa
/// scaled to the same peak height so the peak shift is visible.
fn waveform_figure(id: &str, curve: &ConstitutiveCurve, grid_n: usize) -> Result<Vec<Artifact>> {
    let exc = Excitation::default();
    let tol = ToleranceSet::default();
    let chain = build_chain(
        ElementDescriptor::SECOND_ORDER_MEMRISTOR,
        curve,
        &exc,
        1,
        ClassifyOptions {
            grid_n,
            ..ClassifyOptions::default()
        },
    )?;
    let locus = &chain[1];
    let t = locus.t_values();
    let phi = locus.w_values();
    let q = locus.u_values();
    let peak = |v: &[f64]| v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let scale = peak(phi) / peak(q);
    let q_scaled: Vec<f64> = q.iter().map(|v| v * scale).collect();

    let phase = phase_shift(curve, &exc, &tol)?;
    let phi_at = |t: f64| locus.value_at(t).1;
    let plot = Plot {
        title: format!("{id}: peak shift {:.3} ({:?})", phase.shift, phase.classification),
        x_label: "t".into(),
        y_label: "φ(t), scaled q(t)".into(),
        series: vec![
            Series {
                label: "φ(t)".into(),
                xs: t.to_vec(),
                ys: phi.to_vec(),
                dashed: false,
            },
            Series {
                label: "q(t) scaled".into(),
                xs: t.to_vec(),
                ys: q_scaled.clone(),
                dashed: true,
            },
        ],
        markers: vec![
            Marker {
                x: phase.t_peak_ordinate,
                y: phi_at(phase.t_peak_ordinate),
                label: format!("φ peak t={:.3}", phase.t_peak_ordinate),
            },
            Marker {
                x: phase.t_peak_abscissa,
                y: locus.value_at(phase.t_peak_abscissa).0 * scale,
                label: format!("q peak t={:.3}", phase.t_peak_abscissa),
            },
        ],
    };
    Ok(vec![
        Artifact {
            file: format!("{id}.csv"),
            contents: columns_csv(&["t", "phi", "q_scaled"], &[t, phi, &q_scaled])?,
        },
        Artifact {
            file: format!("{id}.svg"),
            contents: plot.render(),
        },
    ])
}

/// The curve with its first two derivatives; the second vanishes mid-range.
fn derivative_figure(id: &str, curve: &ConstitutiveCurve) -> Result<Vec<Artifact>> {
    let range = curve.range();
    let xs = range.samples(401);
    let eval = |k: usize| -> Result<Vec<f64>> { xs.iter().map(|&x| curve.derivative(x, k)).collect() };
    let (f, df, d2f) = (eval(0)?, eval(1)?, eval(2)?);
    let mid = 0.5 * (range.min + range.max);
    let plot = Plot {
        title: format!("{id}: f, f', f''"),
        x_label: "x".into(),
        y_label: "y".into(),
        series: vec![
            Series {
                label: "f".into(),
                xs: xs.clone(),
                ys: f.clone(),
                dashed: false,
            },
            Series {
                label: "f'".into(),
                xs: xs.clone(),
                ys: df.clone(),
                dashed: false,
            },
            Series {
                label: "f''".into(),
                xs: xs.clone(),
                ys: d2f.clone(),
                dashed: true,
            },
        ],
        markers: vec![Marker {
            x: mid,
            y: curve.derivative(mid, 2)?,
            label: format!("f''({mid}) = {}", curve.derivative(mid, 2)?),
        }],
    };
    Ok(vec![
        Artifact {
            file: format!("{id}.csv"),
            contents: columns_csv(&["x", "f", "df", "d2f"], &[&xs, &f, &df, &d2f])?,
        },
        Artifact {
            file: format!("{id}.svg"),
            contents: plot.render(),
        },
    ])
}
