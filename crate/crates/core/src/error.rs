use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("matrix is not Hermitian (max deviation {max_deviation:.3e})")]
    NotHermitian { max_deviation: f64 },

    #[error("eigensolver did not converge after {sweeps} sweeps (residual {residual:.3e})")]
    NoConvergence { sweeps: usize, residual: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("Kraus operators violate completeness (max deviation {deviation:.3e})")]
    IncompleteChannel { deviation: f64 },

    #[error("invalid dephasing law: {0}")]
    InvalidLaw(String),

    #[error("integration diverged at t = {time}: {reason}")]
    IntegrationDiverged { time: f64, reason: String },

    #[error("no sign change on [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },

    #[error("function returned a non-finite value at t = {t}")]
    NonFinite { t: f64 },

    #[error("expected a real value, imaginary part {imag:.3e}")]
    NotReal { imag: f64 },
}
