use thiserror::Error;

/// Failure modes surfaced by the geometry and analysis routines.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Input outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// An iterative routine exhausted its budget without meeting tolerance.
    #[error("convergence failure: {0}")]
    Convergence(String),

    /// An integral was detected to diverge.
    #[error("divergent integral: {0}")]
    Divergence(String),

    /// A quantity is singular at the requested evaluation point.
    #[error("singular value: {0}")]
    Singular(String),

    /// A documented precondition of the operation does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Construction parameters violate a structural constraint.
    #[error("constraint violated: {0}")]
    Constraint(String),
}

pub type Result<T> = std::result::Result<T, Error>;
