use thiserror::Error;

use crate::states::PmcId;

/// Everything that can go wrong in the core crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("phase-matching condition {0:?} is not defined for this input family")]
    IncompatiblePmc(PmcId),
    #[error("invalid mode specification: {0}")]
    InvalidMode(String),
    #[error("beam-splitter angle {0} outside [0, pi]")]
    InvalidAngle(f64),
    #[error("transmittance {0} outside [0, 1]")]
    InvalidTransmittance(f64),
    #[error("signal slope vanishes, sensitivity is undefined")]
    ZeroDerivative,
    #[error("balanced homodyne detection needs an external phase reference")]
    WrongConvention,
    #[error("input state carries no photons")]
    EmptyInput,
    #[error("Fisher matrix is degenerate (f_ss = 0 while f_sd != 0)")]
    DegenerateFisher,
    #[error("objective is flat over the whole scan")]
    FlatObjective,
    #[error("both slope coefficients F and G vanish")]
    ZeroDerivativeEverywhere,
    #[error("quartic has no admissible real root")]
    NoRealRoot,
    #[error("closed form is degenerate: {0}")]
    Degenerate(&'static str),
    #[error("alternating optimization did not converge in {0} iterations")]
    NoConvergence(usize),
    #[error("Fock truncation needs {needed} amplitudes, budget is {budget}")]
    CutoffExceeded { needed: usize, budget: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
