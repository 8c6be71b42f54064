use thiserror::Error;

/// Errors raised by the numerical pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{what} = {value} is outside its domain ({expected})")]
    Domain {
        what: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("unsupported input: {0}")]
    Unsupported(String),

    #[error("{what} did not converge (best estimate {estimate:e}, error {error:e})")]
    Convergence {
        what: &'static str,
        estimate: f64,
        error: f64,
    },

    #[error("{what}: accuracy defect {defect:e} exceeds tolerance {tolerance:e}")]
    Accuracy {
        what: &'static str,
        defect: f64,
        tolerance: f64,
    },

    #[error("transform value {value:e} at frequency {at} is negative beyond tolerance")]
    Negativity { at: f64, value: f64 },

    #[error("Fock cutoff {given} is too small; {required} is required")]
    Truncation { given: usize, required: usize },

    #[error("oracle outside its validity region: {0}")]
    Validity(String),

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
