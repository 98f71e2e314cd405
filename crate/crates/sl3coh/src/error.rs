use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("InvalidPrime: {0} is not a prime")]
    InvalidPrime(i64),
    #[error("DomainError: {0}")]
    DomainError(String),
    #[error("NotAModuleCharacter: {0}")]
    NotAModuleCharacter(String),
    #[error("OutsideSupportedFamily: {0}")]
    OutsideSupportedFamily(String),
    #[error("ArithmeticOverflow")]
    ArithmeticOverflow,
}

impl Error {
    /// The bare variant name, as printed by the CLI.
    pub fn name(&self) -> &'static str {
        match self {
            Error::InvalidPrime(_) => "InvalidPrime",
            Error::DomainError(_) => "DomainError",
            Error::NotAModuleCharacter(_) => "NotAModuleCharacter",
            Error::OutsideSupportedFamily(_) => "OutsideSupportedFamily",
            Error::ArithmeticOverflow => "ArithmeticOverflow",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::DomainError(msg.into())
}
