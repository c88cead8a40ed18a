use thiserror::Error;

pub type Result<T> = std::result::Result<T, WickError>;

#[derive(Debug, Error)]
pub enum WickError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(
        "Hermiticity violated at T[{},{},{},{}]: expected conj(T[{},{},{},{}]) = {expected}, found {found}",
        at[0], at[1], at[2], at[3], partner[0], partner[1], partner[2], partner[3]
    )]
    Hermiticity {
        at: [usize; 4],
        partner: [usize; 4],
        expected: crate::C64,
        found: crate::C64,
    },

    #[error("index {index} out of range 1..={d} in entry {entry}")]
    IndexOutOfRange { index: usize, d: usize, entry: usize },

    #[error("duplicate coefficient entry T[{},{},{},{}]", .0[0], .0[1], .0[2], .0[3])]
    DuplicateEntry([usize; 4]),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("dimension mismatch: {0}")]
    Mismatch(String),

    #[error("dense materialization of a {size}x{size} operator exceeds the cap {cap}")]
    Capacity { size: usize, cap: usize },

    #[error("hypothesis not met: {0}")]
    Hypothesis(String),

    #[error("linear algebra failure: {0}")]
    Linalg(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<ndarray_linalg::error::LinalgError> for WickError {
    fn from(e: ndarray_linalg::error::LinalgError) -> Self {
        WickError::Linalg(e.to_string())
    }
}
