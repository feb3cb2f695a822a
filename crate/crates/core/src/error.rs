use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("belief strength {0} is outside 0..=6")]
    BeliefOutOfRange(i64),
    #[error("probability {0} is outside [0, 1]")]
    ProbabilityOutOfRange(f64),
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter {
        name: &'static str,
        reason: &'static str,
    },
    #[error("{model} model is not supported by {operation}")]
    UnsupportedModel {
        model: &'static str,
        operation: &'static str,
    },
    #[error("graph has no edges")]
    EmptyEdgeSet,
    #[error("node {node} is out of range for a graph of {nodes} nodes")]
    NodeOutOfRange { node: usize, nodes: usize },
    #[error("self-loop on node {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("tick {tick} is outside 1..={horizon}")]
    TickOutOfRange { tick: u32, horizon: u32 },
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: &'static str) -> Error {
    Error::InvalidParameter { name, reason }
}
