use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("unknown coupling tag `{0}` (expected `electronic` or `motional`)")]
    UnknownCoupling(String),

    #[error("transition frequency {0:e} lies below the degeneracy tolerance")]
    DegenerateFrequency(f64),

    #[error("steady state is not unique: transition graph has {0} closed classes")]
    NonUniqueSteadyState(usize),

    #[error("steady-state solve failed: {0}")]
    SteadySolve(String),

    #[error("integrator step size underflow at t = {0}")]
    StepUnderflow(f64),

    #[error("Q is undefined: |J_SS(T_E = 0)| = {0:e} vanishes")]
    UndefinedQ(f64),

    #[error("rectification factor is undefined: {0}")]
    UndefinedRectification(String),

    #[error("circle distance is undefined at the origin")]
    Origin,
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
