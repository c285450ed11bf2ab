//! Command-line front end.
//!
//! Exit codes: 0 success, 1 analysis-level failure, 2 configuration or
//! usage error (one diagnostic line on stderr naming the field).

pub mod config;
pub mod figures;
pub mod output;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use rayon::prelude::*;
use serde::Deserialize;

use crate::error::Error;
use crate::excitation::DEFAULT_GRID;
use crate::taxonomy::{
    build_chain, classify_with, theorem_suite, ClassificationReport, ClassifyOptions, Outcome, SuiteInstance,
};
use crate::transform::Provenance;

use config::{ConfigError, CurveSpec, ExcitationSpec, Format, RunConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ANALYSIS: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "memchain", version, about = "Constitutive-curve transformations and local-activity verdicts")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Classify one element and write its loci and report.
    Analyze {
        #[arg(long)]
        config: PathBuf,
    },
    /// Regenerate a reference figure (fig2, fig4, fig6, fig7, fig8, fig10).
    Figure {
        id: String,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[arg(long, default_value_t = DEFAULT_GRID)]
        grid: usize,
    },
    /// Run the theorem property suites over a list of curves.
    Suite {
        #[arg(long)]
        families: PathBuf,
        /// Write the JSON report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Exit 1 when any theorem check fails.
        #[arg(long)]
        strict: bool,
    },
    /// Classify a grid of curve parameters into a verdict table.
    Sweep {
        #[arg(long)]
        config: PathBuf,
    },
}

/// Failure of a subcommand, mapped onto an exit code.
#[derive(Debug)]
enum Failure {
    Config(ConfigError),
    Analysis(String),
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e)
    }
}

impl Failure {
    /// Library errors that stem from the inputs count as configuration errors.
    fn from_lib(field: &str, e: Error) -> Self {
        match e {
            Error::Config { field, reason } => Failure::Config(ConfigError::new(field, reason)),
            Error::Domain { .. } | Error::Capability { .. } | Error::OutOfScope(_) | Error::BranchRequired | Error::InvalidCurve(_) => {
                Failure::Config(ConfigError::new(field, e.to_string()))
            }
            Error::Numerical(_) | Error::Inconsistent(_) => Failure::Analysis(e.to_string()),
        }
    }
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let result = match cli.command {
        Command::Analyze { config } => analyze(&config),
        Command::Figure { id, out, grid } => figure(&id, &out, grid),
        Command::Suite { families, out, strict } => suite(&families, out.as_deref(), strict),
        Command::Sweep { config } => sweep(&config),
    };
    match result {
        Ok(code) => code,
        Err(Failure::Config(e)) => {
            eprintln!("{e}");
            EXIT_CONFIG
        }
        Err(Failure::Analysis(msg)) => {
            eprintln!("analysis error: {}", msg.replace('\n', " "));
            EXIT_ANALYSIS
        }
    }
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, Failure> {
    let path = dir.join(name);
    std::fs::write(&path, contents)
        .map_err(|e| Failure::Config(ConfigError::new("output_dir", format!("cannot write {}: {e}", path.display()))))?;
    Ok(path)
}

fn report_json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn analyze(path: &Path) -> Result<i32, Failure> {
    let cfg: RunConfig = config::load_file(path)?;
    let run = cfg.resolve()?;
    config::prepare_output_dir(&run.output_dir)?;
    let options = ClassifyOptions {
        grid_n: run.grid_n,
        route: run.route,
    };
    let report = classify_with(run.descriptor, &run.curve, &run.excitation, &run.tolerances, options)
        .map_err(|e| Failure::from_lib("curve", e))?;

    let chain = build_chain(run.descriptor, &run.curve, &run.excitation, report.verdict_plane_depth, options)
        .map_err(|e| Failure::from_lib("curve", e))?;
    for locus in &chain {
        let d = locus.depth();
        if run.formats.contains(&Format::Csv) {
            let csv = output::locus_csv(locus).map_err(|e| Failure::Analysis(e.to_string()))?;
            write_file(&run.output_dir, &format!("{}.{d}.csv", run.name), &csv)?;
        }
        if run.formats.contains(&Format::Svg) {
            let points = &report.per_plane[d].special_points;
            let (a, o) = locus.labels();
            let plot = output::locus_plot(locus, &format!("{} plane {d}: {o}-{a}", run.name), points);
            write_file(&run.output_dir, &format!("{}.{d}.svg", run.name), &plot.render())?;
        }
    }
    if run.formats.contains(&Format::Json) {
        write_file(&run.output_dir, &format!("{}.report.json", run.name), &report_json(&report))?;
    }
    println!("{}", summary_line(&run.name, &report));
    Ok(EXIT_OK)
}

fn summary_line(name: &str, r: &ClassificationReport) -> String {
    let witness = r
        .witnesses
        .first()
        .map(|w| format!(" witness=({}, {}) at t={}", w.point.u, w.point.w, w.point.t))
        .unwrap_or_default();
    format!(
        "{name}: {} ({}, {}) verdict={:?} source={:?} degeneration={:?}{witness}",
        r.element.name, r.descriptor.alpha, r.descriptor.beta, r.verdict, r.internal_source, r.degeneration
    )
}

fn figure(id: &str, out: &Path, grid: usize) -> Result<i32, Failure> {
    config::check_grid(grid)?;
    let artifacts = figures::render(id, grid).map_err(|e| Failure::from_lib("figure", e))?;
    config::prepare_output_dir(out)?;
    for a in &artifacts {
        let path = write_file(out, &a.file, &a.contents)?;
        println!("{}", path.display());
    }
    Ok(EXIT_OK)
}

/// Family list consumed by `suite`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FamiliesFile {
    #[serde(default)]
    excitation: ExcitationSpec,
    #[serde(default = "default_grid")]
    grid_n: usize,
    #[serde(default)]
    tolerances: Option<serde_json::Value>,
    instances: Vec<InstanceSpec>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceSpec {
    id: String,
    curve: CurveSpec,
}

fn default_grid() -> usize {
    DEFAULT_GRID
}

fn suite(path: &Path, out: Option<&Path>, strict: bool) -> Result<i32, Failure> {
    let file: FamiliesFile = config::load_file(path)?;
    let exc = config::build_excitation(&file.excitation)?;
    let grid_n = config::check_grid(file.grid_n)?;
    let tol = config::resolve_tolerances(file.tolerances.as_ref(), Provenance::Analytic)?;
    if file.instances.is_empty() {
        return Err(ConfigError::new("instances", "at least one instance is required").into());
    }
    let mut instances = Vec::with_capacity(file.instances.len());
    for (i, spec) in file.instances.iter().enumerate() {
        let curve = config::build_curve(&spec.curve, &format!("instances[{i}].curve"))?;
        instances.push(SuiteInstance {
            id: spec.id.clone(),
            curve,
        });
    }
    let report = theorem_suite(&instances, &exc, &tol, grid_n).map_err(|e| Failure::from_lib("instances", e))?;
    let json = report_json(&report);
    match out {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                config::prepare_output_dir(dir)?;
            }
            std::fs::write(p, &json)
                .map_err(|e| Failure::Config(ConfigError::new("out", format!("cannot write {}: {e}", p.display()))))?;
        }
        None => print!("{json}"),
    }
    for s in &report.summary {
        eprintln!(
            "{}: {:?} (pass {}, fail {}, inconclusive {}, skipped {})",
            s.theorem.label(),
            s.outcome,
            s.passes,
            s.fails,
            s.inconclusive,
            s.skipped
        );
    }
    let failed = report.summary.iter().any(|s| s.outcome == Outcome::Fail);
    Ok(if strict && failed { EXIT_ANALYSIS } else { EXIT_OK })
}

fn sweep(path: &Path) -> Result<i32, Failure> {
    let cfg: RunConfig = config::load_file(path)?;
    let axes = cfg
        .sweep
        .clone()
        .ok_or_else(|| ConfigError::new("sweep", "missing; expected a list of {param, values}"))?;
    if axes.is_empty() {
        return Err(ConfigError::new("sweep", "at least one axis is required").into());
    }
    for (i, axis) in axes.iter().enumerate() {
        if axis.param >= cfg.curve.params.len() {
            return Err(ConfigError::new(
                format!("sweep[{i}].param"),
                format!("curve has {} params", cfg.curve.params.len()),
            )
            .into());
        }
        if axis.values.is_empty() {
            return Err(ConfigError::new(format!("sweep[{i}].values"), "empty").into());
        }
    }
    // validate the base configuration once
    let base = cfg.resolve()?;
    config::prepare_output_dir(&base.output_dir)?;

    let mut combos: Vec<Vec<f64>> = vec![Vec::new()];
    for axis in &axes {
        combos = combos
            .into_iter()
            .flat_map(|prefix| {
                axis.values.iter().map(move |&v| {
                    let mut next = prefix.clone();
                    next.push(v);
                    next
                })
            })
            .collect();
    }

    let options = ClassifyOptions {
        grid_n: base.grid_n,
        route: base.route,
    };
    let rows: Vec<String> = combos
        .par_iter()
        .enumerate()
        .map(|(index, values)| {
            let mut spec = cfg.curve.clone();
            for (axis, &v) in axes.iter().zip(values) {
                spec.params[axis.param] = v;
            }
            let values_col = values.iter().map(f64::to_string).collect::<Vec<_>>().join(",");
            let result = config::build_curve(&spec, "curve").map_err(|e| e.to_string()).and_then(|curve| {
                classify_with(base.descriptor, &curve, &base.excitation, &base.tolerances, options)
                    .map_err(|e| e.to_string())
            });
            match result {
                Ok(r) => {
                    let (t, u, w) = r.witnesses.first().map_or((f64::NAN, f64::NAN, f64::NAN), |w| {
                        (w.point.t, w.point.u, w.point.w)
                    });
                    format!(
                        "{index},{values_col},{},{},{},{:?},{:?},{t},{u},{w},",
                        r.ideality.ideal,
                        serde_json::to_value(r.verdict).unwrap().as_str().unwrap(),
                        r.candidate_witness_magnitude,
                        r.internal_source,
                        r.degeneration
                    )
                }
                Err(msg) => format!(
                    "{index},{values_col},,error,,,,,,,\"{}\"",
                    msg.replace('"', "'")
                ),
            }
        })
        .collect();

    let mut text = String::from("index,");
    for axis in &axes {
        text.push_str(&format!("p{},", axis.param));
    }
    text.push_str("ideal,verdict,candidate_witness,internal_source,degeneration,witness_t,witness_u,witness_w,error\n");
    for row in rows {
        text.push_str(&row);
        text.push('\n');
    }
    let path = write_file(&base.output_dir, &format!("{}.sweep.csv", base.name), &text)?;
    println!("{}", path.display());
    Ok(EXIT_OK)
}
