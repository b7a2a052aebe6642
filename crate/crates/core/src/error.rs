use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("edge path is not composable between positions {0} and {1}")]
    NotComposable(usize, usize),
    #[error("edge path is not closed")]
    NotClosed,
    #[error("trivial path is not allowed here")]
    TrivialPath,
    #[error("empty loop")]
    EmptyLoop,
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("map is not regular: {0}")]
    NotRegular(String),
    #[error("not a train track map: image of {edge} crosses illegal turn {turn}")]
    NotTrainTrack { edge: String, turn: String },
    #[error("not expanding at this power: |f({0})| = 1")]
    NotExpanding(String),
    #[error("invariant loop among non-expanded edges: {0}")]
    InvariantLoop(String),
    #[error("no expanding power up to {0}")]
    MaxPowerExceeded(usize),
    #[error("image length {len} exceeds budget {budget}")]
    LengthBudget { len: String, budget: usize },
    #[error("cancellation is unbounded")]
    UnboundedCancellation,
    #[error("not hyperbolic: {0}")]
    NotHyperbolic(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("no convergence: {0}")]
    NoConvergence(String),
    #[error("inconsistent factors: {0}")]
    InconsistentFactors(String),
    #[error("line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
