use thiserror::Error;

/// Domain errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("NotInvertible: {0} has no inverse modulo {1}")]
    NotInvertible(String, String),
    #[error("MixedFields: cannot combine elements of Q(sqrt({0})) and Q(sqrt({1}))")]
    MixedFields(String, String),
    #[error("DivisionByZero")]
    DivisionByZero,
    #[error("NotFundamental: {0} is not a fundamental discriminant")]
    NotFundamental(String),
    #[error("NotCoprimeToDiscriminant: gcd({0}, {1}) != 1")]
    NotCoprimeToDiscriminant(String, String),
    #[error("NotUnimodular: matrix determinant is {0}, expected 1")]
    NotUnimodular(String),
    #[error("NotPrimitive: form {0} has content > 1")]
    NotPrimitive(String),
    #[error("TooLarge: |{0}| exceeds the supported bound {1}")]
    TooLarge(String, String),
    #[error("DenominatorCollapse: den(u/A) = {0}, expected {1}")]
    DenominatorCollapse(String, String),
    #[error("MixedDiscriminants: {0} vs {1}")]
    MixedDiscriminants(String, String),
    #[error("NegativeDefinite: form {0} is negative definite")]
    NegativeDefinite(String),
    #[error("NotOnConic: point {0} does not satisfy the conic equation")]
    NotOnConic(String),
    #[error("NotOnTorsor: point {0} does not satisfy {1} = 1")]
    NotOnTorsor(String, String),
    #[error("InvalidClassRep: {0}")]
    InvalidClassRep(String),
    #[error("Parse: {0}")]
    Parse(String),
    #[error("CheckFailed: {0}")]
    CheckFailed(String),
}

impl Error {
    /// Stable error name, used by the CLI to report domain failures.
    pub fn name(&self) -> &'static str {
        match self {
            Error::NotInvertible(..) => "NotInvertible",
            Error::MixedFields(..) => "MixedFields",
            Error::DivisionByZero => "DivisionByZero",
            Error::NotFundamental(..) => "NotFundamental",
            Error::NotCoprimeToDiscriminant(..) => "NotCoprimeToDiscriminant",
            Error::NotUnimodular(..) => "NotUnimodular",
            Error::NotPrimitive(..) => "NotPrimitive",
            Error::TooLarge(..) => "TooLarge",
            Error::DenominatorCollapse(..) => "DenominatorCollapse",
            Error::MixedDiscriminants(..) => "MixedDiscriminants",
            Error::NegativeDefinite(..) => "NegativeDefinite",
            Error::NotOnConic(..) => "NotOnConic",
            Error::NotOnTorsor(..) => "NotOnTorsor",
            Error::InvalidClassRep(..) => "InvalidClassRep",
            Error::Parse(..) => "Parse",
            Error::CheckFailed(..) => "CheckFailed",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
