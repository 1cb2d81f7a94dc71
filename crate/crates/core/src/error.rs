use std::fmt;

/// Named structural invariant, reported when validation fails.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Invariant {
    Square,
    DimensionProduct,
    Hermitian,
    UnitTrace,
    PositiveSemidefinite,
    Normalization,
    ProbabilitySum,
    NegativeProbability,
    KrausCompleteness,
    Idempotence,
    DimensionBound,
    EntropyAdditivity,
    Unitarity,
}

impl fmt::Display for Invariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Invariant::Square => "square matrix",
            Invariant::DimensionProduct => "product of subsystem dimensions",
            Invariant::Hermitian => "hermiticity",
            Invariant::UnitTrace => "unit trace",
            Invariant::PositiveSemidefinite => "positive semidefiniteness",
            Invariant::Normalization => "state normalization",
            Invariant::ProbabilitySum => "probabilities summing to one",
            Invariant::NegativeProbability => "nonnegative probabilities",
            Invariant::KrausCompleteness => "Kraus completeness",
            Invariant::Idempotence => "projector idempotence",
            Invariant::DimensionBound => "typical subspace dimension bound",
            Invariant::EntropyAdditivity => "entropy additivity under blocking",
            Invariant::Unitarity => "unitarity",
        };
        f.write_str(s)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("validation failed: {invariant} violated (magnitude {magnitude:.3e})")]
    Validation {
        invariant: Invariant,
        magnitude: f64,
    },

    #[error("dimension {requested} exceeds the configured capacity {limit}")]
    Capacity { requested: usize, limit: usize },

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("operation has a null outcome (trace {norm:.3e})")]
    NullOutcome { norm: f64 },

    #[error("impossible evidence: {0}")]
    ImpossibleEvidence(String),

    #[error("malformed input: {0}")]
    Format(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn validation(invariant: Invariant, magnitude: f64) -> Self {
        Error::Validation {
            invariant,
            magnitude,
        }
    }

    pub(crate) fn argument(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
