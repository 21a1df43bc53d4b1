use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// What went wrong while reading a group-definition file or a word.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("lexical error: {0}")]
    Lexical(String),
    #[error("continuity violation: {0}")]
    Continuity(String),
    #[error("orientation violation: {0}")]
    Orientation(String),
    #[error("structure error: {0}")]
    Structure(String),
    #[error("invalid element: {0}")]
    Validation(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain mismatch: {0} vs {1}")]
    DomainMismatch(String, String),
    #[error("empty piece list")]
    EmptyPieces,
    #[error("orientation violation: {0}")]
    Orientation(String),
    #[error("non-monotone piece: {0}")]
    NonMonotone(String),
    #[error("discontinuity at {at}: {left} from the left, {right} from the right")]
    Discontinuity {
        at: String,
        left: String,
        right: String,
    },
    #[error("pole {pole} lies in piece [{left}, {right}]")]
    PoleInPiece {
        pole: String,
        left: String,
        right: String,
    },
    #[error("pieces do not tile the domain: {0}")]
    Tiling(String),
    #[error("not a homeomorphism of the domain: {0}")]
    NotBijective(String),
    #[error("point {0} lies outside the domain")]
    OutOfDomain(String),
    #[error("{0}")]
    NotFixed(String),
    #[error("invalid germ side: {0}")]
    InvalidSide(String),
    #[error("germs live at different bases or sides")]
    GermMismatch,
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
    #[error("slope {0} is not positive")]
    NonPositiveSlope(String),
    #[error("irrational point {0} where a rational point is required")]
    IrrationalPoint(String),
    #[error("invalid catalog key: {0}")]
    InvalidKey(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("search budget exhausted after {nodes} nodes (max length {max_length}): {context}")]
    BudgetExhausted {
        nodes: usize,
        max_length: usize,
        context: String,
    },
    #[error("line {line}: {kind}")]
    Parse { line: usize, kind: ParseErrorKind },
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    pub fn is_budget_exhausted(&self) -> bool {
        matches!(self, Error::BudgetExhausted { .. })
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}
