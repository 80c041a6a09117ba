use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("duplicate node name `{0}`")]
    DuplicateName(String),
    #[error("node `{node}`: duplicate outcome label `{outcome}`")]
    DuplicateOutcome { node: String, outcome: String },
    #[error("node `{0}` needs at least two outcomes")]
    TooFewOutcomes(String),
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("the arcs contain a cycle through `{0}`")]
    CycleDetected(String),
    #[error("diagram has no value node")]
    NoValueNode,
    #[error("diagram has more than one value node (`{0}` and `{1}`)")]
    MultipleValueNodes(String, String),
    #[error("value node `{0}` cannot have successors")]
    ValueHasSuccessors(String),
    #[error("node `{node}` row {row}: lower bounds sum to {sum} > 1")]
    RowSumExceedsOne { node: String, row: usize, sum: f64 },
    #[error("node `{node}` row {row}: negative or non-finite lower bound {value}")]
    NegativeBound { node: String, row: usize, value: f64 },
    #[error("node `{node}` row {row}: interval [{lo}, {hi}] is inverted or non-finite")]
    IntervalInverted { node: String, row: usize, lo: f64, hi: f64 },
    #[error("node `{node}`: {detail}")]
    ParentMismatch { node: String, detail: String },
    #[error("decisions `{0}` and `{1}` are not ordered by a directed path")]
    UnorderedDecisions(String, String),
    #[error("configuration index {index} out of range (only {size} configurations)")]
    OutOfRange { index: usize, size: usize },
    #[error("cannot remove `{node}`: {reason}")]
    NotRemovable { node: String, reason: String },
    #[error("`{node}` is not a {expected} node")]
    WrongKind { node: String, expected: &'static str },
    #[error("`{0}` is not barren")]
    NotBarren(String),
    #[error("no arc `{0}` -> `{1}`")]
    ArcMissing(String, String),
    #[error("reversing `{0}` -> `{1}` would create a cycle")]
    WouldCreateCycle(String, String),
    #[error("no reduction rule applies: {0}")]
    Unsolvable(String),
    #[error("realization does not match the diagram: {0}")]
    ShapeMismatch(String),
    #[error("node `{0}` is imprecise but not varied")]
    NonPointResidual(String),
    #[error("{count} configurations exceed the cap of {cap}")]
    CombinatorialLimitExceeded { count: u128, cap: u128 },
    #[error("invalid range {0}: must lie in [0, 1)")]
    InvalidRange(f64),
    #[error("missing {0}")]
    MissingEntry(String),
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("{path}: {source}")]
    Field {
        path: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn not_removable(node: &str, reason: impl Into<String>) -> Self {
        Error::NotRemovable { node: node.to_string(), reason: reason.into() }
    }

    /// The innermost error, with field-path wrappers stripped.
    pub fn root(&self) -> &Error {
        match self {
            Error::Field { source, .. } => source.root(),
            other => other,
        }
    }
}
