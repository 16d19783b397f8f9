use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("series has no invertible leading term at or below exponent 0")]
    ZeroConstantTerm,

    #[error("grid with denominator {from} cannot be refined to denominator {to}")]
    IncompatibleGrid { from: u32, to: u32 },

    #[error("invalid exponent grid: denominator {denom}, order {order}")]
    InvalidGrid { denom: u32, order: i64 },

    #[error("q-shifted factorial has a vanishing factor in the denominator: {0}")]
    PolePoch(String),

    #[error("requested accuracy not reached within the iteration cap: {0}")]
    PrecisionLoss(String),

    #[error("no sign change found while bracketing the root: {0}")]
    NoBracket(String),

    #[error("argument outside the domain: {0}")]
    DomainError(String),

    #[error("series does not converge: {0}")]
    Divergence(String),

    #[error("rate fit needs strictly positive residuals (sample {0})")]
    NonPositiveResidual(usize),

    #[error("rate fit needs at least three samples with strictly decreasing t")]
    InsufficientSamples,

    #[error("identity `{id}` has no {mode} check")]
    UnsupportedMode { id: String, mode: String },

    #[error("unknown identity `{0}`")]
    UnknownIdentity(String),

    #[error("bad parameter `{key}`: {reason}")]
    BadParameter { key: String, reason: String },
}
