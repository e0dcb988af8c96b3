use thiserror::Error;

/// Errors produced by graph construction, game evaluation and the analyses built on them.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("node count {0} outside supported range 2..={max}", max = crate::graph::MAX_NODES)]
    InvalidNodeCount(usize),

    #[error("node {node} out of range for graph on {n} nodes")]
    NodeOutOfRange { node: usize, n: usize },

    #[error("self-loop at node {0} is not allowed")]
    SelfLoop(usize),

    #[error("edge ({0}, {1}) already present")]
    EdgePresent(usize, usize),

    #[error("edge ({0}, {1}) absent")]
    EdgeAbsent(usize, usize),

    #[error("graph code does not fit {slots} edge slots")]
    CodeOutOfRange { slots: usize },

    #[error("degree sequence is not graphical")]
    NotGraphical,

    #[error("enumeration over n = {n} needs {slots} edge slots, cap is {cap}")]
    EnumerationCap { n: usize, slots: usize, cap: usize },

    #[error("dimension mismatch: game has {expected} players, graph has {found} nodes")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid cost function: {0}")]
    InvalidCost(String),

    #[error("cost function undefined at x = {0}")]
    CostUndefined(i64),

    #[error("invalid game specification: {0}")]
    InvalidSpec(String),

    #[error("operation needs a {expected} game")]
    WrongGameKind { expected: &'static str },

    #[error("cost functions do not share a common shape: {0}")]
    HeterogeneousShape(String),

    #[error("graph does not realize the target degree sequence")]
    NotRealizingTargets,

    #[error("cannot parse rational {0:?}")]
    ParseRational(String),

    #[error("cannot parse degree sequence: {0}")]
    ParseDegreeSequence(String),

    #[error("invalid formation config: {0}")]
    InvalidFormation(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
