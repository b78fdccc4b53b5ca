use alloc::string::String;
use alloc::vec::Vec;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// Invalid sizes, indices or hyperparameters supplied by the caller.
    #[error("configuration error: {0}")]
    Config(String),
    /// The objective returned NaN or infinity.
    #[error("optimization error: objective returned {value} at evaluation {evaluation}")]
    NonFiniteObjective {
        evaluation: usize,
        value: f64,
        point: Vec<f64>,
    },
    /// VQC training hit a non-finite cost.
    #[error("training error at iteration {iteration}: {message}")]
    Training { iteration: usize, message: String },
}

pub type Result<T, E = Error> = core::result::Result<T, E>;

macro_rules! config_err {
    ($($arg:tt)*) => {
        $crate::error::Error::Config(alloc::format!($($arg)*))
    };
}
pub(crate) use config_err;
