//! CSV and SVG artifact writers.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::loci::{PointKind, SpecialPoint};
use crate::transform::ParametricLocus;

/// Serializes columns under `header`; `f64` Display is the shortest
/// representation that parses back to the same value.
pub fn columns_csv(header: &[&str], columns: &[&[f64]]) -> Result<String> {
    let rows = columns.first().map_or(0, |c| c.len());
    if columns.len() != header.len() || columns.iter().any(|c| c.len() != rows) {
        return Err(Error::Numerical("ragged CSV columns".into()));
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Numerical(format!("csv: {e}"));
    w.write_record(header).map_err(io)?;
    for i in 0..rows {
        w.write_record(columns.iter().map(|c| c[i].to_string())).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Numerical(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// `t,u,w` rows of a locus.
pub fn locus_csv(locus: &ParametricLocus) -> Result<String> {
    columns_csv(&["t", "u", "w"], &[locus.t_values(), locus.u_values(), locus.w_values()])
}

/// Reads a numeric CSV back into its header and columns.
pub fn read_columns(text: &str) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = r
        .headers()
        .map_err(|e| Error::Numerical(format!("csv: {e}")))?
        .iter()
        .map(str::to_string)
        .collect();
    let mut columns = vec![Vec::new(); header.len()];
    for record in r.records() {
        let record = record.map_err(|e| Error::Numerical(format!("csv: {e}")))?;
        for (col, field) in columns.iter_mut().zip(record.iter()) {
            col.push(
                field
                    .parse::<f64>()
                    .map_err(|e| Error::Numerical(format!("csv value `{field}`: {e}")))?,
            );
        }
    }
    Ok((header, columns))
}

/// Reads a `t,u,w` file written by [`locus_csv`].
pub fn read_locus_csv(path: &Path) -> Result<(Vec<f64>, Vec<f64>, Vec<f64>)> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Numerical(format!("{}: {e}", path.display())))?;
    let (header, mut cols) = read_columns(&text)?;
    if header != ["t", "u", "w"] {
        return Err(Error::Numerical(format!("unexpected header {header:?}")));
    }
    let w = cols.pop().unwrap();
    let u = cols.pop().unwrap();
    let t = cols.pop().unwrap();
    Ok((t, u, w))
}

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 600.0;
const MARGIN: f64 = 60.0;
const PALETTE: [&str; 4] = ["#1f4e9c", "#c0392b", "#2e8b57", "#7d3c98"];

#[derive(Debug, Clone)]
pub struct Series {
    pub label: String,
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    pub dashed: bool,
}

#[derive(Debug, Clone)]
pub struct Marker {
    pub x: f64,
    pub y: f64,
    pub label: String,
}

impl Marker {
    pub fn from_point(p: &SpecialPoint) -> Self {
        let tag = match p.kind {
            PointKind::Pinch => "pinch",
            PointKind::ZeroTangent => "C",
            PointKind::VerticalTangent => "Q",
            PointKind::ActivityWitness => "witness",
        };
        Marker {
            x: p.u,
            y: p.w,
            label: format!("{tag} t={:.3}", p.t),
        }
    }
}

/// A single-panel line chart.
#[derive(Debug, Clone, Default)]
pub struct Plot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
    pub markers: Vec<Marker>,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

impl Plot {
    fn bounds(&self) -> (f64, f64, f64, f64) {
        let xs = self.series.iter().flat_map(|s| s.xs.iter().copied()).chain(self.markers.iter().map(|m| m.x));
        let ys = self.series.iter().flat_map(|s| s.ys.iter().copied()).chain(self.markers.iter().map(|m| m.y));
        let span = |it: &mut dyn Iterator<Item = f64>| {
            let (lo, hi) = it
                .filter(|v| v.is_finite())
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
            if lo > hi {
                return (-1.0, 1.0);
            }
            let pad = if hi - lo > 0.0 { 0.05 * (hi - lo) } else { 1.0 };
            (lo - pad, hi + pad)
        };
        let (x0, x1) = span(&mut xs.into_iter());
        let (y0, y1) = span(&mut ys.into_iter());
        (x0, x1, y0, y1)
    }

    pub fn render(&self) -> String {
        let (x0, x1, y0, y1) = self.bounds();
        let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
        let sy = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);
        let mut out = String::new();
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {WIDTH} {HEIGHT}" width="{WIDTH}" height="{HEIGHT}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(out, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
        let _ = writeln!(
            out,
            r#"<text x="{:.3}" y="24" text-anchor="middle" font-size="16">{}</text>"#,
            WIDTH / 2.0,
            escape(&self.title)
        );

        // axes through the origin when it is in view, otherwise along the frame
        let ax = if (x0..=x1).contains(&0.0) { sx(0.0) } else { MARGIN };
        let ay = if (y0..=y1).contains(&0.0) { sy(0.0) } else { HEIGHT - MARGIN };
        let _ = writeln!(
            out,
            r##"<line x1="{:.3}" y1="{ay:.3}" x2="{:.3}" y2="{ay:.3}" stroke="#444"/>"##,
            MARGIN,
            WIDTH - MARGIN
        );
        let _ = writeln!(
            out,
            r##"<line x1="{ax:.3}" y1="{:.3}" x2="{ax:.3}" y2="{:.3}" stroke="#444"/>"##,
            MARGIN,
            HEIGHT - MARGIN
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.3}" y="{:.3}" text-anchor="end">{}</text>"#,
            WIDTH - MARGIN,
            HEIGHT - MARGIN / 3.0,
            escape(&self.x_label)
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.3}" y="{:.3}">{}</text>"#,
            MARGIN / 4.0,
            MARGIN - 10.0,
            escape(&self.y_label)
        );
        for (v, label) in [(x0, "left"), (x1, "right")] {
            let anchor = if label == "left" { "start" } else { "end" };
            let _ = writeln!(
                out,
                r##"<text x="{:.3}" y="{:.3}" text-anchor="{anchor}" fill="#666">{:.3}</text>"##,
                sx(v),
                HEIGHT - MARGIN + 16.0,
                v
            );
        }
        for v in [y0, y1] {
            let _ = writeln!(
                out,
                r##"<text x="{:.3}" y="{:.3}" text-anchor="end" fill="#666">{:.3}</text>"##,
                MARGIN - 4.0,
                sy(v) + 4.0,
                v
            );
        }

        for (i, s) in self.series.iter().enumerate() {
            let colour = PALETTE[i % PALETTE.len()];
            let mut pts = String::new();
            for (&x, &y) in s.xs.iter().zip(&s.ys) {
                if x.is_finite() && y.is_finite() {
                    let _ = write!(pts, "{:.3},{:.3} ", sx(x), sy(y));
                }
            }
            let dash = if s.dashed { r#" stroke-dasharray="6 4""# } else { "" };
            let _ = writeln!(
                out,
                r#"<polyline fill="none" stroke="{colour}" stroke-width="1.5"{dash} points="{}"/>"#,
                pts.trim_end()
            );
            let _ = writeln!(
                out,
                r#"<text x="{:.3}" y="{:.3}" fill="{colour}">{}</text>"#,
                WIDTH - MARGIN - 150.0,
                MARGIN + 16.0 * i as f64,
                escape(&s.label)
            );
        }
        for m in &self.markers {
            if !(m.x.is_finite() && m.y.is_finite()) {
                continue;
            }
            let _ = writeln!(
                out,
                r#"<circle cx="{:.3}" cy="{:.3}" r="4" fill="none" stroke="black"/>"#,
                sx(m.x),
                sy(m.y)
            );
            let _ = writeln!(
                out,
                r#"<text x="{:.3}" y="{:.3}" font-size="10">{}</text>"#,
                sx(m.x) + 6.0,
                sy(m.y) - 6.0,
                escape(&m.label)
            );
        }
        out.push_str("</svg>\n");
        out
    }
}

/// Plot of a locus with its special points marked.
pub fn locus_plot(locus: &ParametricLocus, title: &str, points: &[SpecialPoint]) -> Plot {
    let (a, o) = locus.labels();
    Plot {
        title: title.to_string(),
        x_label: a.to_string(),
        y_label: o.to_string(),
        series: vec![Series {
            label: format!("{o} vs {a}"),
            xs: locus.u_values().to_vec(),
            ys: locus.w_values().to_vec(),
            dashed: false,
        }],
        markers: points.iter().map(Marker::from_point).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip_is_exact() {
        let t = [0.0, 0.1, 1.0 / 3.0];
        let u = [1e-300, -2.5, std::f64::consts::PI];
        let w = [f64::MIN_POSITIVE, 7.0, -0.0];
        let text = columns_csv(&["t", "u", "w"], &[&t, &u, &w]).unwrap();
        assert!(text.starts_with("t,u,w\n"));
        let (header, cols) = read_columns(&text).unwrap();
        assert_eq!(header, ["t", "u", "w"]);
        assert_eq!(cols[0], t);
        assert_eq!(cols[1], u);
        assert_eq!(cols[2].iter().map(|v| v.to_bits()).collect::<Vec<_>>(), w.map(f64::to_bits));
    }

    #[test]
    fn ragged_columns_rejected() {
        assert!(columns_csv(&["a", "b"], &[&[1.0], &[]]).is_err());
    }

    #[test]
    fn svg_has_fixed_viewbox_and_series() {
        let plot = Plot {
            title: "a < b".into(),
            series: vec![Series {
                label: "s".into(),
                xs: vec![0.0, 1.0],
                ys: vec![0.0, 1.0],
                dashed: true,
            }],
            markers: vec![Marker {
                x: 0.5,
                y: 0.5,
                label: "m".into(),
            }],
            ..Plot::default()
        };
        let svg = plot.render();
        assert!(svg.contains(r#"viewBox="0 0 800 600""#));
        assert!(svg.contains("<polyline"));
        assert!(svg.contains("<circle"));
        assert!(svg.contains("a &lt; b"));
        assert_eq!(svg, plot.render());
    }
}
