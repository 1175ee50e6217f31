use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("expected {expected} phases, got {got}")]
    PhaseCount { expected: usize, got: usize },
    #[error("a superposition needs at least one term")]
    EmptySuperposition,
    #[error("state has zero norm")]
    ZeroNorm,
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("invalid grid: {0}")]
    InvalidGrid(&'static str),
    #[error("fields are sampled on different grids")]
    GridMismatch,
    #[error("dt_fraction {0} is outside (0, 1]")]
    DtFraction(f64),
    #[error("excited count {excited} exceeds repetitions {repetitions}")]
    CountExceedsRepetitions { excited: u64, repetitions: u64 },
    #[error("Fock truncation too small: top-level population {0:e}")]
    Truncation(f64),
    #[error("integrator failed: {0}")]
    Integrator(&'static str),
    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
}
