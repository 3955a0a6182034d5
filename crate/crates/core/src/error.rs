use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("delta is undefined for equal vertices ({0})")]
    EqualVertices(u64),
    #[error("need at least {needed} elements, got {got}")]
    TooShort { needed: usize, got: usize },
    #[error("elements are not strictly increasing")]
    NotSorted,
    #[error("expected {expected} elements, got {got}")]
    WrongArity { expected: usize, got: usize },
    #[error("profile is empty")]
    EmptyProfile,
    #[error("pair coloring needs two distinct arguments, got {0} twice")]
    EqualArguments(usize),
    #[error("value {value} outside universe of size {size}")]
    OutOfRange { value: usize, size: usize },
    #[error("bad arity n={n} for universe of size {d} (need 3 <= n <= D)")]
    BadArity { n: usize, d: usize },
    #[error("domain D={d} is smaller than n={n}")]
    DomainTooSmall { d: u64, n: usize },
    #[error("width mismatch: {0}")]
    WidthMismatch(String),
    #[error("instance too large: {size} vertices exceeds cap {cap}")]
    TooLarge { size: u64, cap: u64 },
    #[error("fewer local maxima than required at level {0}")]
    InsufficientMaxima(usize),
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("index {0} is the first or last element of the parent layer")]
    BoundaryElement(usize),
    #[error("index {index} is not in layer {level}")]
    NotInLayer { index: usize, level: usize },
    #[error("run values are not strictly monotone")]
    NotMonotone,
    #[error("vertex set too small: no layers to depth 5 and no monotone-run witness")]
    InsufficientSize,
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("parse error: {0}")]
    Parse(String),
}
