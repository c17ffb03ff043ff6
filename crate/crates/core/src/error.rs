use thiserror::Error;

/// Failures raised anywhere in the pipeline. Variants carry enough context to
/// tell which stage produced them.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by a value indistinguishable from zero")]
    DivisionByIndistinguishableZero,
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("argument outside the convergence domain: {0}")]
    OutsideConvergenceDomain(String),
    #[error("incompatible operands: {0}")]
    Incompatible(String),
    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("discriminant {0} is not fundamental")]
    NotFundamental(i64),
    #[error("discriminant {0} has extra units")]
    UnitObstruction(i64),
    #[error("{p} does not ramify in Q(sqrt({d}))")]
    NotRamified { d: i64, p: u64 },

    #[error("bad algebra discriminant: {0}")]
    BadDiscriminant(String),
    #[error("level not coprime: {0}")]
    LevelNotCoprime(String),

    #[error("quotient exploration exceeded depth {0}")]
    DepthExceeded(usize),
    #[error("element has infinite order")]
    InfiniteOrder,
    #[error("degenerate fundamental domain: {0}")]
    DegenerateDomain(String),

    #[error("bad Hecke prime {0}")]
    BadHeckePrime(u64),
    #[error("eigenspace not found: {0}")]
    EigenspaceNotFound(String),
    #[error("eigenspace has dimension {0}, not 1")]
    EigenspaceNotLine(usize),
    #[error("unsupported weight {0}")]
    UnsupportedWeight(u32),

    #[error("sample hits a zero or pole of the integrand")]
    NonUnitSample,
    #[error("embedding count mismatch: found {found}, expected {expected}")]
    CountMismatch { found: usize, expected: usize },
    #[error("ideal not coprime to the level")]
    IdealNotCoprime,
    #[error("conjugator not found within the search bound")]
    ConjugatorNotFound,
    #[error("routes disagree: {0}")]
    RouteDisagreement(String),

    #[error("curve has no multiplicative reduction at {0}")]
    NotMultiplicative(u64),
    #[error("uniformization failed: {0}")]
    UniformizationFailed(String),
    #[error("orbit incomplete: {0}")]
    OrbitIncomplete(String),

    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("config: {0}")]
    Config(String),
    #[error("cache version mismatch: found {found}, expected {expected}")]
    VersionMismatch { found: String, expected: String },
    #[error("corrupt cache: {0}")]
    CorruptCache(String),
}

pub type Result<T> = std::result::Result<T, Error>;
