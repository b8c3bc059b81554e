use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{what} = {value} is outside its domain {domain}")]
    Domain {
        what: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("invalid tolerance: {0}")]
    InvalidTolerance(String),

    #[error("row {row} is not a probability vector: {reason}")]
    NotStochastic { row: usize, reason: String },

    #[error("rows admit no output involution making the channel symmetric (output {output} has no partner)")]
    NotSymmetric { output: usize },

    #[error("invalid channel: {0}")]
    InvalidChannel(String),

    #[error("capacities differ: {first} vs {second} (allowed gap {allowed})")]
    CapacityMismatch {
        first: f64,
        second: f64,
        allowed: f64,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("equivalence predicates disagree: {0}")]
    EquivalenceViolation(String),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
