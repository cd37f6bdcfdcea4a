use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// `p_i * S` is not an integer for some element.
    #[error("weight of element {element} is not a multiple of 1/{s}")]
    Divisibility { element: usize, s: u64 },

    #[error("support sizes differ: {left} vs {right}")]
    SupportMismatch { left: usize, right: usize },

    /// Parameters that admit no valid instance or no runnable configuration.
    #[error("infeasible parameters: {0}")]
    Infeasible(String),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid oracle: {0}")]
    InvalidOracle(String),

    #[error("oracle has an empty domain")]
    EmptyOracle,

    #[error("simulation cap exceeded: {0}")]
    CapExceeded(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("calibration sweep exhausted: {0}")]
    CalibrationExhausted(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// True for errors caused by the caller's configuration rather than by a
    /// failure while running an experiment.
    pub fn is_config(&self) -> bool {
        matches!(
            self,
            Error::Config(_)
                | Error::Parse(_)
                | Error::Infeasible(_)
                | Error::Precondition(_)
                | Error::Divisibility { .. }
                | Error::SupportMismatch { .. }
                | Error::InvalidDistribution(_)
                | Error::InvalidOracle(_)
                | Error::EmptyOracle
                | Error::CapExceeded(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
