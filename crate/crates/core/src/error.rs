use thiserror::Error;

/// Errors raised anywhere in the workbench.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("field mismatch")]
    FieldMismatch,
    #[error("invalid field parameters: {0}")]
    InvalidField(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("singular matrix")]
    Singular,
    #[error("not integral: {0}")]
    NotIntegral(String),
    #[error("weight model broken: {0}")]
    WeightModelBroken(String),
    #[error("spanning set insufficient")]
    SpanningSetInsufficient,
    #[error("truncation too small: radius {needed} exceeds R_max = {max}; raise the radius bound")]
    TruncationTooSmall { needed: i64, max: i64 },
    #[error("level overflow: level {required} exceeds N_max = {max}")]
    LevelOverflow { required: u32, max: u32 },
    #[error("model inconsistency: {0}")]
    ModelInconsistency(String),
    #[error("character is not of the form psi o det")]
    NotDetCharacter,
    #[error("averaging failed")]
    AveragingFailed,
    #[error("lemma-next failure")]
    LemmaNextFailure,
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("irreducibility test inconclusive")]
    Inconclusive,
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
