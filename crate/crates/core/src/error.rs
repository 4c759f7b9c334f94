use thiserror::Error;

/// Errors raised by the simulation library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("matrix is not Hermitian (deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is numerically singular")]
    Singular,

    #[error("Schur iteration failed to converge after {iterations} iterations")]
    NoConvergence { iterations: usize },

    #[error("Sylvester equation is ill-posed: spectra overlap (separation {separation:.3e})")]
    SpectraOverlap { separation: f64 },

    #[error("no eigenvalue lies in the zero cluster")]
    EmptyZeroCluster,

    #[error("spectrum has no nonzero eigenvalue outside the zero cluster")]
    NoSpectralGap,

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("least-squares fit is degenerate: {0}")]
    DegenerateFit(String),

    #[error("configuration error: {0}")]
    Config(String),
}

impl Error {
    /// True for failures of the numerical machinery (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Singular
                | Error::NoConvergence { .. }
                | Error::SpectraOverlap { .. }
                | Error::EmptyZeroCluster
                | Error::NoSpectralGap
                | Error::DegenerateFit(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
