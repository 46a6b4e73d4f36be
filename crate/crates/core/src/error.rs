use thiserror::Error;

/// Errors shared by all modules of the crate.
///
/// Diagnostics (validation reports, failed checks) are not errors: an
/// operation that *evaluates* a property returns a [`crate::verdict::CheckResult`]
/// or a violation list. `Error` is reserved for inputs that make the
/// requested computation meaningless (unknown names, broken preconditions)
/// and for explicit budget exhaustion.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("unknown element `{0}`")]
    UnknownElement(String),

    #[error("duplicate element `{0}`")]
    DuplicateElement(String),

    #[error("carrier has {0} elements, limit is {max}", max = crate::order::MAX_ELEMENTS)]
    CarrierTooLarge(usize),

    #[error("input error: {0}")]
    Input(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("postcondition failed: {0}")]
    Postcondition(String),

    #[error("budget exceeded: {0}")]
    Budget(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}
