//! Constitutive curves of memory circuit elements, the chain of
//! time-derivative transformations that relates neighbouring planes of the
//! periodic table, and the local passivity/activity verdicts read off the
//! transformed loci.

pub mod cli;
pub mod constitutive;
pub mod error;
pub mod excitation;
pub mod loci;
mod roots;
pub mod taxonomy;
pub mod transform;

pub use constitutive::{check_ideality, mvt_point, Branch, ConstitutiveCurve, IdealityReport, OperatingRange};
pub use error::{Error, Result};
pub use excitation::{Excitation, SampleGrid};
pub use loci::{analyze_plane, PlaneAnalysis, PointKind, SpecialPoint};
pub use taxonomy::{
    classify, classify_with, table_position, theorem_suite, ClassificationReport, ClassifyOptions,
    ElementDescriptor, ToleranceSet, Verdict,
};
pub use transform::{analytic_locus, numeric_transform, ParametricLocus, Provenance};
