use thiserror::Error;

use crate::partition::Partition;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("variable count mismatch: {left} vs {right}")]
    VarCountMismatch { left: usize, right: usize },

    #[error("polynomial is not exactly divisible")]
    NotDivisible,

    #[error("division by the zero polynomial")]
    DivisionByZero,

    #[error("polynomial is not symmetric")]
    NotSymmetric,

    #[error("partition {partition} has more than {nvars} parts")]
    PartitionTooLong { partition: Partition, nvars: usize },

    #[error("argument out of range: {0}")]
    OutOfRange(String),

    #[error("resonant parameter point: eigenvalues of {kappa} and {mu} coincide")]
    Resonance { kappa: Partition, mu: Partition },

    #[error("row {row} is not removable from {partition}")]
    NotRemovable { partition: Partition, row: usize },

    #[error("{outer}/{inner} is not a vertical strip")]
    NotVerticalStrip { outer: Partition, inner: Partition },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("series does not converge: {0}")]
    Divergent(String),

    #[error("lattice sum tail does not decay: {0}")]
    NonDecayingTail(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal consistency check failed: {0}")]
    Internal(String),
}
