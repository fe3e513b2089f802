use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid ring: {0}")]
    InvalidRing(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("d o d is nonzero starting at degree {degree} (witness column {column})")]
    DifferentialSquareNonzero { degree: i64, column: usize },

    #[error("decalage needs a complex concentrated in degrees >= 0 (lowest degree {0})")]
    DegreeBelowZero(i64),

    #[error("filtration index must be nonnegative, got {0}")]
    NegativeM(i64),

    #[error("invalid poset: {0}")]
    InvalidPoset(String),

    #[error("invalid sheaf at {from} <= {to}: {reason}")]
    InvalidSheaf {
        from: String,
        to: String,
        reason: String,
    },

    #[error("lattice basis is singular")]
    SingularBasis,

    #[error("xi-torsion in degree {degree}: {group}")]
    TorsionObstruction { degree: i64, group: String },

    #[error("hypothesis H1 fails: H^{0} of the global sections has xi-torsion")]
    HypothesisH1Failed(i64),

    #[error("hypothesis H3 fails: truncation map not injective at (i, m) = ({0}, {1})")]
    HypothesisH3Failed(i64, i64),

    #[error("no instance found within a budget of {0} attempts")]
    GenerationBudgetExceeded(usize),

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    /// Malformed or unsupported input, as opposed to a mathematical failure.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Parse(_)
                | Error::InvalidRing(_)
                | Error::ShapeMismatch(_)
                | Error::InvalidPoset(_)
                | Error::DegreeBelowZero(_)
                | Error::NegativeM(_)
        )
    }
}
