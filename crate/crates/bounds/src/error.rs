use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BoundsError {
    /// The enclosures are too wide to decide; retry at higher precision.
    #[error("inconclusive at current precision: {what}")]
    Inconclusive { what: String },
    /// An input violates the stated hypotheses.
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// A quantity is undefined for the given inputs (e.g. a log of a
    /// non-positive number).
    #[error("outside the domain: {0}")]
    Domain(String),
}
