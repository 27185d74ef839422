use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// `|r(0)|` is too small to define the phase that makes it real.
    #[error("gauge undefined: |r(0)| = {magnitude:.3e} is below 1e-6; supply an explicit phase")]
    DegenerateGauge { magnitude: f64 },

    #[error("no sign change of the ensemble signal over the p grid")]
    NoCrossing,

    #[error("relative sign is ambiguous: {reason}")]
    AmbiguousSign { reason: String },

    /// A sign relation inside the chain could not be resolved; every
    /// amplitude from `at` onward (1-based step index) is undetermined.
    #[error("sign chain broken at j = {at}; undetermined steps: {undetermined:?}")]
    ChainBroken { at: usize, undetermined: Vec<usize> },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
