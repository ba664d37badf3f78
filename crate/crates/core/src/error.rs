use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("photon energy must be positive, got {0}")]
    NonPositiveEnergy(f64),

    #[error("dressed states undefined: drive strength and drive detuning are both zero")]
    DegenerateDressing,

    #[error("no root of the {equation} condition in [{lo:e}, {hi:e}] rad/s")]
    NoConvergence {
        equation: &'static str,
        lo: f64,
        hi: f64,
    },

    #[error("ill-conditioned fit: {0}")]
    IllConditionedFit(String),

    #[error("matching system is singular (condition estimate {condition:e})")]
    SingularSystem { condition: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
