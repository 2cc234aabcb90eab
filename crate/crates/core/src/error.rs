use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("prime {p} exceeds the configured cap {cap}")]
    PrimeTooLarge { p: u32, cap: u32 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("dimension {dim} exceeds the configured cap {cap}")]
    DimensionCap { dim: usize, cap: usize },
    #[error("multiplication is not associative at basis triple ({0}, {1}, {2})")]
    NonAssociative(usize, usize, usize),
    #[error("unit is not a two-sided identity: fails against basis element {0}")]
    BadUnit(usize),
    #[error("bad idempotents: {0}")]
    BadIdempotents(String),
    #[error("malformed input: {0}")]
    MalformedSpec(String),
    #[error("objects live over different algebras")]
    AlgebraMismatch,
    #[error("module axiom fails: {0}")]
    NotModule(String),
    #[error("not a module map: {0}")]
    NotModuleMap(String),
    #[error("subspace is not stable under the action of basis element {0}")]
    NotActionStable(usize),
    #[error("vectors do not generate the module (span {span} of {dim})")]
    NotGenerating { span: usize, dim: usize },
    #[error("projective dimension exceeds the cutoff {0}")]
    ExceedsCutoff(usize),
    #[error("module is not projective")]
    NotProjective,
    #[error("budget exceeded: needed {needed}, budget {budget}")]
    BudgetExceeded { needed: usize, budget: usize },
    #[error("not a submodule: {0}")]
    NotASubmodule(String),
    #[error("no pure extension found within budget {0}")]
    NoPureExtensionFound(usize),
    #[error("not a complex: {0}")]
    NotComplex(String),
    #[error("not a subcomplex at degree {0}")]
    NotSubcomplex(i64),
    #[error("not a chain map: {0}")]
    NotChainMap(String),
    #[error("complex is not exact at degree {0}")]
    NotExact(i64),
    #[error("object is not in the class: {0}")]
    NotInClass(String),
    #[error("unsupported class spec: {0}")]
    UnsupportedSpec(String),
    #[error("bad cocycle: {0}")]
    BadCocycle(String),
    #[error("malformed lifting square: {0}")]
    MalformedSquare(String),
    #[error("search space exhausted: {0}")]
    NotFound(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("unknown name: {0}")]
    UnknownName(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::MalformedSpec(e.to_string())
    }
}
