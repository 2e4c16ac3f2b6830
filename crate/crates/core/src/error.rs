use thiserror::Error;

/// Errors raised by group construction, searches and surveys.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("group needs at least one cyclic factor")]
    EmptyOrders,
    #[error("cyclic factor order {0} is below 2")]
    OrderBelowTwo(u64),
    #[error("group of size {size} exceeds the cap of {cap} elements")]
    SizeCapExceeded { size: u128, cap: usize },
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("{what} cap exceeded: {size} > {cap}")]
    CapExceeded { what: &'static str, size: usize, cap: usize },
    #[error("search exceeded its time budget")]
    Timeout,
    #[error("not an index-2 subgroup: {0}")]
    BadSubgroup(String),
    #[error("connection set meets the subgroup B")]
    SetNotAvoidingB,
    #[error("element index {0} is outside the group")]
    SetOutOfRange(usize),
    #[error("connection set is not inverse-closed")]
    NotInverseClosed,
    #[error("(A, B) is an exceptional pair; undirected classification does not apply")]
    ExceptionalPair,
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("budget exceeded: {needed} > {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("group has odd order {0}")]
    OddOrder(usize),
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
