use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field order {p}^{m} exceeds the size limit {limit}")]
    FieldTooLarge { p: u64, m: u32, limit: u64 },
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
    #[error("modulus {0} is reducible over the prime field")]
    ReducibleModulus(String),
    #[error("element index {index} is outside a field of order {q}")]
    ElementOutOfRange { index: u64, q: u64 },
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("quadratic character is undefined at zero")]
    ZeroResidue,
    #[error("binary operation {0} requires a second operand")]
    MissingOperand(&'static str),
    #[error("field specification `{spec}`: bad token `{token}`: {reason}")]
    FieldSpec {
        spec: String,
        token: String,
        reason: String,
    },

    #[error("connection set contains zero")]
    ZeroInConnectionSet,
    #[error("connection set is not symmetric: {elem} is present but its negation {neg} is not")]
    AsymmetricConnectionSet { elem: u32, neg: u32 },
    #[error("{family} requires q = 1 mod 4, got q = {q}")]
    NotOneModFour { family: &'static str, q: u64 },
    #[error("power vertices have lengths {0} and {1}")]
    LengthMismatch(usize, usize),
    #[error("power must be at least 1")]
    ZeroPower,

    #[error("G^{k} has {vertices} vertices, above the cap of {cap}")]
    VertexCapExceeded { k: u32, vertices: u128, cap: u64 },
    #[error("invalid linear code: {0}")]
    InvalidCode(String),

    #[error("polynomial expansion exceeded {cap} terms")]
    TermCapExceeded { cap: usize },
    #[error("polynomials live in different rings")]
    RingMismatch,
    #[error("interpolation grid is incomplete: missing point {0:?}")]
    IncompleteGrid(Vec<u32>),
    #[error("interpolation nodes must be distinct and nonempty")]
    BadInterpolationNodes,

    #[error("Hoffman bound is undefined for an edgeless graph")]
    EdgelessHoffman,
    #[error("LP solver did not converge within {0} iterations")]
    NonConvergence(usize),
    #[error("theta certificate failed verification: residual {residual:e} exceeds tolerance {tolerance:e}")]
    ThetaVerification { residual: f64, tolerance: f64 },
    #[error("LP is infeasible")]
    Infeasible,
    #[error("LP is unbounded")]
    Unbounded,

    #[error("report invariant violated: {0}")]
    InvariantViolation(String),
    #[error("report serialization failed: {0}")]
    Serialization(String),
}

pub type Result<T> = std::result::Result<T, Error>;
