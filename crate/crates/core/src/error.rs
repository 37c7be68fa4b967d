use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("radius must be positive, got {0}")]
    NonPositiveRadius(f64),

    #[error("semi-axes must be positive, got ({0}, {1})")]
    NonPositiveAxis(f64, f64),

    #[error("support projection error {error:.3e} above tolerance {tol:.1e} at degree {degree}")]
    ProjectionTolerance { error: f64, tol: f64, degree: usize },

    #[error("domain is not strictly convex: min(h + h'') = {0:.3e}")]
    NotConvex(f64),

    #[error("node count must be even and >= 16, got {0}")]
    BadNodeCount(usize),

    #[error("singular kernel evaluation: |sigma - z| = {0:.3e}")]
    SingularKernel(f64),

    #[error("pole of the denominator hit at evaluation point")]
    PoleHit,

    #[error("denominator root within {0:.3e} of the closed domain")]
    PoleNearDomain(f64),

    #[error("evaluation point lies outside the domain")]
    OutsideDomain,

    #[error("numerical range not enclosed: eigenvalue margin {0:.3e}")]
    NotEnclosed(f64),

    #[error("resolvent residual {0:.3e} exceeds 1e-10")]
    ResolventResidual(f64),

    #[error("sample length {0} does not match node count {1}")]
    LengthMismatch(usize, usize),

    #[error("eigensolver failed")]
    EigenFailure,

    #[error("smoothing destroyed the enclosure margin at degree {0}")]
    SmoothingMargin(usize),

    #[error("invalid configuration: {0}")]
    BadConfig(String),

    #[error("all search trials failed preconditions")]
    SearchDegenerate,
}
