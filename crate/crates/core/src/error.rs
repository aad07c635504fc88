use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("characteristic {0} is not below 2^31")]
    CharacteristicTooLarge(u64),
    #[error("unknown field tag `{0}` (expected `Q` or `F<p>`)")]
    BadTag(String),
    #[error("malformed scalar `{0}`")]
    BadScalar(String),
    #[error("denominator vanishes in the field")]
    ZeroDenominator,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("subspace is not contained in the larger subspace")]
    NotContained,
    #[error("linear system has no solution")]
    NoSolution,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("unknown generator `{name}` at offset {pos}")]
    UnknownGenerator { name: String, pos: usize },
    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("duplicate generator name `{0}`")]
    DuplicateGenerator(String),
    #[error("generator index {index} out of range for {count} generators")]
    GeneratorIndex { index: usize, count: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MagnusError {
    #[error("truncated tensor algebra needs {required} monomials, cap is {cap}")]
    MemoryCap { required: u128, cap: u128 },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("group enumeration exceeded cap {cap} (reached {partial} elements)")]
    CapExceeded { cap: usize, partial: usize },
    #[error("invalid permutation: {0}")]
    BadPermutation(String),
    #[error("multiplication table is not a group law: {0}")]
    NotAGroup(String),
    #[error("generators do not generate the table's group ({reached} of {order} elements)")]
    NotGenerating { reached: usize, order: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RepError {
    #[error("expected {expected} generator matrices, found {found}")]
    GeneratorCount { expected: usize, found: usize },
    #[error("matrix for generator `{0}` is not square of the declared dimension")]
    BadShape(String),
    #[error("matrix for generator `{0}` is not invertible")]
    NotInvertible(String),
    #[error("relator `{0}` does not act as the identity")]
    RelatorViolated(String),
    #[error("matrices do not respect the group law")]
    NotHomomorphism,
    #[error("matrix entry outside the declared field")]
    WrongField,
}

/// Crate-level error.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Magnus(#[from] MagnusError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error("instance file: {0}")]
    Instance(String),
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
