use alloc::string::String;

use crate::graph::NodeId;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),

    /// A routing step delivered more words to one node than its declared quota.
    #[error("{primitive}: node {node} receives {load} words, quota is {limit}")]
    QuotaExceeded {
        primitive: String,
        node: NodeId,
        load: u64,
        limit: u64,
    },

    /// Instances declared parallel need more bandwidth than the model provides.
    #[error("{primitive}: parallel instances need {load} words per node per round, bandwidth allows {limit}")]
    BandwidthExceeded {
        primitive: String,
        load: u64,
        limit: u64,
    },

    /// A product had more finite entries than the density bound declared for it.
    #[error("{primitive}: {actual} finite entries exceed the declared bound {bound}")]
    DensityViolation {
        primitive: String,
        actual: u64,
        bound: u64,
    },

    #[error("spanner has {edges} edges, broadcast budget is {budget}")]
    SizeViolation { edges: u64, budget: u64 },

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("scale index {index} is outside the family 0..={max}")]
    IndexOutOfFamily { index: u32, max: u32 },
}
