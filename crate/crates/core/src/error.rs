use thiserror::Error;

/// Errors raised by the finite engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpaceError {
    #[error("carrier must have at least one element")]
    EmptyCarrier,
    #[error("carrier size {0} exceeds the representable maximum of 64")]
    CarrierTooLarge(usize),
    #[error("carrier mismatch: {left} vs {right}")]
    CarrierMismatch { left: usize, right: usize },
    #[error("element {index} is out of range for a carrier of size {size}")]
    OutOfRange { index: usize, size: usize },
    #[error("family does not cover the carrier: element {missing} is missing")]
    NotACover { missing: usize },
    #[error("{op} enumerates {what} and is capped at carrier size {limit} (got {size})")]
    SizeGuard {
        op: &'static str,
        what: &'static str,
        limit: usize,
        size: usize,
    },
    #[error("function table has length {got}, expected {expected}")]
    TableLength { got: usize, expected: usize },
    #[error("function value {value} at {at} is out of range for codomain of size {size}")]
    TableValue { at: usize, value: usize, size: usize },
    #[error("structure violates the regularity axiom")]
    NotRegular,
    #[error("structure is not strongly regular")]
    NotStronglyRegular,
    #[error("topology is not closed under unions and intersections")]
    NotATopology,
    #[error("topology is not regular")]
    TopologyNotRegular,
    #[error("filter base {0} is not Cauchy")]
    NotCauchy(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("lattice table is invalid: {0}")]
    BadLattice(String),
}
