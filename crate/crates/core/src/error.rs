use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A size argument is above the configured cap.
    #[error("{what} = {value} exceeds the cap of {cap}{hint}")]
    CapExceeded {
        what: &'static str,
        value: u64,
        cap: u64,
        hint: &'static str,
    },

    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    #[error("invalid tree: {0}")]
    InvalidTree(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// An exact division left a remainder. Indicates a bug, never bad input.
    #[error("non-integral intermediate: {0}")]
    NonIntegral(String),

    /// Two exact routes that must agree did not.
    #[error("identity violated: {0}")]
    IdentityViolated(String),

    #[error("non-finite state at step {step}: {state}")]
    NonFinite { step: usize, state: String },

    #[error("expected count per cell is {min_expected:.3} < 5; merge cells before testing")]
    SparseCells { min_expected: f64 },

    #[error("sample is empty")]
    EmptySample,

    #[error("sample contains a non-finite value at index {0}")]
    NonFiniteSample(usize),

    #[error("resource exhausted: {0}")]
    Resource(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_cap(
    what: &'static str,
    value: u64,
    cap: u64,
    hint: &'static str,
) -> Result<()> {
    if value > cap {
        Err(Error::CapExceeded {
            what,
            value,
            cap,
            hint,
        })
    } else {
        Ok(())
    }
}
