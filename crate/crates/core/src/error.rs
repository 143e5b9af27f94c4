use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("non-finite value at index {index}")]
    NonFinite { index: usize },

    /// All residuals are exactly zero, so the autocorrelation normalizer vanishes.
    #[error("residual sequence is identically zero (perfect fit)")]
    ZeroResidual,

    #[error("circulant estimate is not positive semidefinite: eigenvalue {index} = {value:e}")]
    NonPsd { index: usize, value: f64 },

    #[error("basis has {params} parameters but only {points} points")]
    OverdeterminedBasis { params: usize, points: usize },

    #[error("fourier order {order} exceeds the Nyquist limit {max} for {points} points")]
    AboveNyquist {
        order: usize,
        max: usize,
        points: usize,
    },

    #[error("design matrix is rank deficient (condition estimate {condition:e})")]
    SingularDesign { condition: f64 },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// A numerical self-check failed, e.g. a real-input transform produced a
    /// non-negligible imaginary part.
    #[error("internal numerical error: {0}")]
    Internal(String),
}

impl Error {
    /// True for errors caused by the numbers themselves rather than by
    /// malformed input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::ZeroResidual
                | Error::NonPsd { .. }
                | Error::SingularDesign { .. }
                | Error::Internal(_)
        )
    }
}
