use thiserror::Error;

/// Errors raised across the toolkit.
///
/// Each certification failure names the check that rejected the input so
/// that a certificate consumer can tell a bad sample from a bad prime.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus {p} outside the supported range: {reason}")]
    UnsupportedModulus { p: u64, reason: &'static str },
    #[error("kernel is trivial")]
    EmptyKernel,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("leading coefficients in the eliminated variable both vanish")]
    DegenerateLeadingCoefficient,
    #[error("form is not squarefree")]
    NotSquarefree,
    #[error("index out of range or repeated: {0}")]
    IndexError(String),
    #[error("(d, delta) = ({d}, {delta}) outside the sampling range")]
    InfeasibleRange { d: u32, delta: usize },
    #[error("certification failed after {attempts} attempts: {last}")]
    CertificationExhausted { attempts: usize, last: String },
    #[error("extra singular point found at {0}")]
    ExtraSingularityFound(String),
    #[error("calibration mismatch: {0}")]
    CalibrationMismatch(String),
    #[error("Brill-Noether number is not zero for (g, k) = ({g}, {k})")]
    RhoNotZero { g: u64, k: u64 },
    #[error("characteristic two is not supported")]
    CharacteristicTwo,
    #[error("determinant vanishes identically")]
    IdenticallyZero,
    #[error("conditions matrix rank {got}, expected {expected}")]
    UnexpectedRank { got: usize, expected: usize },
    #[error("delta = {0} outside 4..=7")]
    InfeasibleDelta(usize),
    #[error("could not find enough smooth points on the discriminant")]
    TooFewSmoothPoints,
    #[error("negative boundary coefficient for {0}")]
    NegativeBoundaryCoefficient(String),
    #[error("symbol {0} is not legal for this basis")]
    IllegalSymbol(String),
    #[error("admissibility clause ({clause}) violated: {detail}")]
    NotAdmissible { clause: u8, detail: String },
    #[error("general position not reached after {0} resamples")]
    GeneralPositionExhausted(usize),
    #[error("stored evidence does not match recomputation: {0}")]
    EvidenceMismatch(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
