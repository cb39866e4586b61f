use std::fmt;

/// Error type shared by every numerical routine in this crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument is outside the mathematical domain of the operation.
    Domain(String),
    /// An iterative method hit its iteration cap without converging.
    Convergence {
        context: &'static str,
        iterations: usize,
    },
    /// Adaptive quadrature could not reach the requested absolute tolerance
    /// within the subdivision cap.
    QuadratureTolerance {
        requested: f64,
        achieved: f64,
        subdivisions: usize,
    },
    /// Bracketing by doubling/halving never produced a sign change.
    BracketNotFound {
        attempts: usize,
        history: Vec<(f64, f64)>,
    },
    /// Two profiles that must share a grid relationship do not.
    GridMismatch(String),
    /// An operation that needs a nontrivial profile received an all-zero one.
    TrivialProfile(&'static str),
    /// A weighted partial sum in the fixed-point recurrence came out negative,
    /// which cannot happen with correctly computed weights.
    NegativeWeightSum { node: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {}", msg),
            Error::Convergence { context, iterations } => {
                write!(f, "{} failed to converge after {} iterations", context, iterations)
            }
            Error::QuadratureTolerance { requested, achieved, subdivisions } => write!(
                f,
                "adaptive quadrature stalled at error {:.3e} (requested {:.3e}) after {} subdivisions",
                achieved, requested, subdivisions
            ),
            Error::BracketNotFound { attempts, .. } => {
                write!(f, "no sign change found while bracketing the mass residual ({} attempts)", attempts)
            }
            Error::GridMismatch(msg) => write!(f, "grid mismatch: {}", msg),
            Error::TrivialProfile(what) => write!(f, "{} requires a nontrivial profile", what),
            Error::NegativeWeightSum { node } => {
                write!(f, "negative weighted sum at node {} (weight computation bug)", node)
            }
        }
    }
}

impl std::error::Error for Error {}
