//! Error type shared by all modules.

use thiserror::Error;

/// Everything that can go wrong while building or querying resolution data.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("field must be Q or GF(p) with p prime, got modulus {0}")]
    PrimeRequired(u64),
    #[error("bad field syntax: {0}")]
    FieldSyntax(String),
    #[error("bad polynomial syntax at byte {at}: {reason}")]
    PolySyntax { at: usize, reason: String },
    #[error("division by zero")]
    DivisionByZero,
    #[error("t-adic valuation is negative ({0}); operand is not in the valuation ring")]
    NotInValuationRing(i64),
    #[error("resultant of two polynomials of s-degree zero is undefined")]
    ResultantUndefined,
    #[error("parametrization does not pass through the origin")]
    NotThroughOrigin,
    #[error("x(t) and y(t) are both zero")]
    BothZero,
    #[error("parametrization is not primitive: exponent gcd is {0}")]
    NotPrimitive(u64),
    #[error("euclidean chain requires both inputs to have finite positive valuation")]
    NonPositiveValuation,
    #[error("operation requires a tableau produced under the minimal depth policy")]
    RequiresMinimalPolicy,
    #[error("tableau is not realizable by a branch: {0}")]
    UnrealizableTableau(String),
    #[error("characteristic column {0} has an infinite entry")]
    InfiniteCharacteristicColumn(usize),
    #[error("the two branches have the same image (contact order is infinite)")]
    SameBranch,
    #[error("column {0} is not a characteristic index")]
    NotCharacteristicIndex(usize),
    #[error("column scaling by c_mu = {0} is not integral")]
    NonIntegerScaling(u64),
    #[error("characteristic index {index} out of range (h = {h})")]
    IndexOutOfRange { index: usize, h: usize },
    #[error("intersection matrix is singular")]
    SingularN,
    #[error("cluster is not valid: {0}")]
    InvalidCluster(String),
    #[error("operands live in different fields")]
    FieldMismatch,
    #[error("bad input file at line {line}: {reason}")]
    FileFormat { line: usize, reason: String },
    #[error("bad JSON report: {0}")]
    JsonFormat(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// One failed structural invariant, reported as data by the validators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    /// What the rule was checked on, e.g. `column 2` or `point 5`.
    pub subject: String,
    /// The rule that failed.
    pub rule: String,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.subject, self.rule)
    }
}

impl Violation {
    pub fn new(subject: impl Into<String>, rule: impl Into<String>) -> Self {
        Violation { subject: subject.into(), rule: rule.into() }
    }
}

pub(crate) fn join_violations(violations: &[Violation]) -> String {
    violations.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}
