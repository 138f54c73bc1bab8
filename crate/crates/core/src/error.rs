use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("state support too close to the Fock cutoff: {0}")]
    CutoffRisk(String),
    #[error("cat Fock series not converged at n_max={n_max} (tail/sum = {ratio:.3e})")]
    SeriesTruncation { n_max: usize, ratio: f64 },
    #[error("lattice gate direction (zeta, sigma) = (0, 0) is degenerate")]
    DegenerateDirection,
    #[error("index {index} out of range 0..={max} for {what}")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        max: usize,
    },
    #[error("norm drifted to {norm:.12} at step {step}")]
    NonUnitaryDrift { step: usize, norm: f64 },
    #[error("trace drifted to {trace:.12}")]
    TraceDrift { trace: f64 },
    #[error("overlap with code word {word} is {modulus:.3e}, phase undefined")]
    ZeroOverlap { word: usize, modulus: f64 },
    #[error("parity outcome {outcome} has probability {prob:.3e}")]
    ImprobableOutcome { outcome: usize, prob: f64 },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Process exit code for the command-line runner.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Json(_) | Error::IndexOutOfRange { .. } => 2,
            Error::NonUnitaryDrift { .. }
            | Error::TraceDrift { .. }
            | Error::CutoffRisk(_)
            | Error::SeriesTruncation { .. }
            | Error::ZeroOverlap { .. }
            | Error::ImprobableOutcome { .. }
            | Error::DegenerateDirection => 3,
            Error::Io(_) | Error::Csv(_) => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
