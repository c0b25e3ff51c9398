use thiserror::Error;

/// Errors raised anywhere in the library.
///
/// Variants are grouped loosely by the layer that raises them; the CLI maps
/// [`Error::is_parse`] to exit code 2 and everything else to exit code 3.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),

    // ring tower
    #[error("NonMonicModulus: {0}")]
    NonMonicModulus(String),
    #[error("CompositeModulusPrime: {0} is not prime")]
    CompositeModulusPrime(u64),
    #[error("NotAUnit: {0}")]
    NotAUnit(String),
    #[error("DescriptorMismatch: {0} vs {1}")]
    DescriptorMismatch(String, String),
    #[error("RootsUnavailable: {0}")]
    RootsUnavailable(String),
    #[error("NotIntegral: {0}")]
    NotIntegral(String),
    #[error("InvalidHom: {0}")]
    InvalidHom(String),

    // Laurent fractions
    #[error("DenominatorNotInS: {0}")]
    DenominatorNotInS(String),
    #[error("NumeratorNotInS: {0}")]
    NumeratorNotInS(String),

    // representations
    #[error("DimensionMismatch: {0}")]
    DimensionMismatch(String),
    #[error("RelationViolated: {0}")]
    RelationViolated(String),
    #[error("NotFiniteOrder: no power up to {0} is the identity")]
    NotFiniteOrder(u64),
    #[error("OrderDivisibleByP: order {order} divisible by p = {p}")]
    OrderDivisibleByP { order: u64, p: u64 },
    #[error("QNotInvertible: q = {0}")]
    QNotInvertible(u64),
    #[error("RingNotField: {0}")]
    RingNotField(String),
    #[error("NonIntegerTrace: {0}")]
    NonIntegerTrace(String),
    #[error("NonIntegralSwan: {0}")]
    NonIntegralSwan(String),
    #[error("NegativeBreakRank: {0}")]
    NegativeBreakRank(String),
    #[error("InvalidFiltration: {0}")]
    InvalidFiltration(String),

    // local factors
    #[error("LevelUnsupported: n(psi) = {0}")]
    LevelUnsupported(i64),
    #[error("BadPrimeChoice: {0}")]
    BadPrimeChoice(String),
    #[error("DetTNotUnit: {0}")]
    DetTNotUnit(String),
}

impl Error {
    /// True for errors caused by malformed input text rather than by a
    /// violated mathematical precondition.
    pub fn is_parse(&self) -> bool {
        matches!(self, Error::Parse(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
