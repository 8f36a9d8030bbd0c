//! Error type shared by all modules.

/// Everything that can go wrong in this crate.
///
/// Construction of the operator set and most algebraic checks are exact to
/// rounding, so errors here almost always indicate a genuinely invalid input
/// (bad parameters, off-shell momenta, singular elimination tensors) rather
/// than a numerical accident.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    /// Pivoted elimination hit a pivot too small to divide by.
    #[error("singular matrix: pivot magnitude {pivot:.3e} at step {step}")]
    SingularMatrix { pivot: f64, step: usize },

    /// An iterative scheme did not reach its residual target.
    #[error("numerical failure in {context}: residual {residual:.3e} exceeds {tolerance:.3e}")]
    NumericalFailure {
        context: &'static str,
        residual: f64,
        tolerance: f64,
    },

    /// A precondition expressed as a matrix identity does not hold.
    #[error("contract violation in {context}: residual {residual:.3e}")]
    ContractViolation { context: &'static str, residual: f64 },

    /// Parameter combination for which the requested object is undefined.
    #[error("degenerate parameter: {0}")]
    DegenerateParameter(String),

    /// The deformation parameter lies below -1/4, where the two masses
    /// leave the real axis.
    #[error("complex masses: a = {a} is below -1/4")]
    ComplexMass { a: f64 },

    /// a = 0 collapses the two-mass spectrum; the single surviving mass is
    /// carried along.
    #[error("single-mass limit: a = 0 leaves one fermion of mass {mass}")]
    DiracLimit { mass: f64 },

    /// Invalid argument that is not a matrix-shape issue.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Four-momentum does not satisfy the mass-shell quartic.
    #[error("off-shell momentum: mass-shell residual {residual:.3e}")]
    OffShell { residual: f64 },

    /// Scalar denominator of a projector too close to zero.
    #[error("singular denominator: |a p^2 + m^2| = {value:.3e}")]
    SingularDenominator { value: f64 },

    /// The vector-index elimination tensor m I + i kappa1 a F is not
    /// invertible for this field configuration.
    #[error("singular elimination: |det(m I + i kappa1 a F)| = {det_abs:.6e}")]
    SingularElimination { det_abs: f64 },

    /// No plane-wave state exists for the requested labels.
    #[error("no such state: {0}")]
    NoSuchState(String),
}

pub type Result<T> = std::result::Result<T, Error>;
