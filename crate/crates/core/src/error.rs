use thiserror::Error;

use crate::ontology::Iri;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OntologyError {
    #[error("invalid IRI {0:?}: expected an absolute IRI with a scheme separator")]
    InvalidIri(String),
    #[error("name is empty after trimming")]
    EmptyName,
    #[error("prefix {prefix:?} maps to both <{left}> and <{right}>")]
    PrefixConflict { prefix: String, left: String, right: String },
    #[error("subClassOf endpoint {0} is neither declared nor imported")]
    DanglingEdge(Iri),
    #[error("unknown entity kind {0:?} (expected class or objprop)")]
    UnknownKind(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricsError {
    #[error("gold count must be at least 1, got {0}")]
    NegativeGold(i64),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AlignError {
    #[error("similarity threshold {0} is outside [0, 1]")]
    InvalidThreshold(f64),
    #[error("brute-force alignment is limited to {limit} entities per side, got {generated}x{gold}")]
    TooLarge { generated: usize, gold: usize, limit: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReviewError {
    #[error("{0} is not a false positive in the current report")]
    NotAFalsePositive(Iri),
    #[error("{0}")]
    Metrics(#[from] MetricsError),
}
