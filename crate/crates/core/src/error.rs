//! Error type shared by every module of the crate.
//!
//! Variants are coarse: each names the contract that was violated, and the
//! message carries the offending values. Callers that need to distinguish
//! recoverable conditions (a sweep skipping a phase boundary) from genuine
//! failures match on the variant, not the message.

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong while evaluating the model.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// Parameters within `eps_phase` of a critical line (h = 2 or
    /// h = 2 sqrt(1 - gamma^2)). The asymptotic apparatus degenerates there.
    #[error("phase boundary: {0}")]
    PhaseBoundary(String),

    /// The symbol or a related quantity vanished where it must not.
    #[error("degenerate symbol: {0}")]
    Degenerate(String),

    /// An argument lies outside the documented domain of the operation.
    #[error("domain error: {0}")]
    DomainError(String),

    /// A size or discretization parameter violates its documented bounds.
    #[error("size error: {0}")]
    SizeError(String),

    /// A numerical invariant failed at run time (spectral pairing broke,
    /// a residual exceeded its tolerance, an eigensolve did not converge).
    #[error("numerical error: {0}")]
    NumericalError(String),

    /// An iterative process hit its iteration cap before reaching tolerance.
    #[error("convergence error: {0}")]
    ConvergenceError(String),

    /// Evaluation of w(z) was requested on or within 1e-12 of a branch cut.
    #[error("on-cut error: {0}")]
    OnCutError(String),

    /// Adaptive quadrature could not meet the requested tolerance.
    #[error("quadrature error: {0}")]
    QuadratureError(String),

    /// The period ratio tau came out with a real part or orientation that
    /// contradicts the Riemann-surface structure.
    #[error("purity error: {0}")]
    PurityError(String),

    /// tau0 below the supported threshold of the routine.
    #[error("small-tau error: {0}")]
    SmallTauError(String),

    /// lambda inside an excluded neighborhood of +-1 or of a zero +-lambda_m.
    #[error("excluded point: {0}")]
    ExcludedPoint(String),

    /// The Fredholm determinant was requested at a singular lambda
    /// (real lambda with |lambda| <= 1).
    #[error("singularity error: {0}")]
    SingularityError(String),
}
