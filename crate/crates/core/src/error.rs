use thiserror::Error;

/// Errors raised by the dynamics engine.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter lies outside its admissible domain.
    #[error("parameter `{name}` out of domain: {reason}")]
    Domain { name: &'static str, reason: String },

    /// An operation was called with inputs that violate its usage contract.
    #[error("usage error: {0}")]
    Usage(String),

    /// An iterative solver did not reach its tolerance.
    #[error("no convergence after {iterations} iterations (last energy {last_energy:.12e})")]
    Convergence { iterations: usize, last_energy: f64 },

    /// NaN or overflow detected during propagation.
    #[error("numerical failure at step {step} (seed {seed:?}): {what}")]
    Numerical {
        seed: Option<u64>,
        step: usize,
        what: String,
    },

    /// Some realizations of an ensemble failed.
    #[error("{} of {total} realizations failed (seeds: {})", failed.len(), seed_list(failed))]
    PartialEnsemble {
        total: usize,
        failed: Vec<FailedRealization>,
    },

    #[error("checkpoint: {0}")]
    Checkpoint(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// A realization that failed inside an ensemble run.
#[derive(Debug, Clone)]
pub struct FailedRealization {
    pub index: usize,
    pub seed: u64,
    pub message: String,
}

fn seed_list(failed: &[FailedRealization]) -> String {
    failed
        .iter()
        .map(|f| f.seed.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(name: &'static str, reason: impl Into<String>) -> Error {
    Error::Domain {
        name,
        reason: reason.into(),
    }
}
