//! Ontology model, Turtle and SWRL parsing, alignment evaluation against a
//! gold standard, and structural linting.

mod error;

pub mod align;
pub mod diagnostics;
pub mod lint;
pub mod metrics;
pub mod ontology;
pub mod swrl;
pub mod turtle;

pub use error::{AlignError, MetricsError, OntologyError, ReviewError};
