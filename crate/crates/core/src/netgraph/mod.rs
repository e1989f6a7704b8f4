//! Radial network model: graph, spanning trees, switch coverage and the
//! reliability and energy metrics.

mod coverage;
mod metrics;
mod network;
mod tree;

pub use coverage::{compute_coverage, update_coverage_after_exchange, CoverageMap};
pub use metrics::{
    cover_times, evaluate_metrics, evaluate_metrics_with, per_vertex_outage, MetricsReport,
    SwitchOrder, UncoveredMode,
};
pub use network::{Edge, EdgeId, Network, NetworkBuilder, Vertex, VertexId, VoltageClass};
pub use tree::{build_tree_config, TreeConfig};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NetError {
    #[error("network has no vertices")]
    Empty,
    #[error("root vertex {0} does not exist")]
    RootMissing(usize),
    #[error("invalid {what}: {value}")]
    InvalidWeight { what: String, value: f64 },
    #[error("edge {edge} references unknown vertex {vertex}")]
    UnknownVertex { edge: String, vertex: usize },
    #[error("edge {0} is a self-loop")]
    SelfLoop(String),
    #[error("edge {0} duplicates an existing edge")]
    ParallelEdge(String),
    #[error("network is not connected")]
    Disconnected,
    #[error("not a spanning tree: {0}")]
    NotATree(String),
    #[error("unknown edge id {0}")]
    UnknownEdgeId(usize),
    #[error("exchanging {edge} for {switch} does not yield a spanning tree")]
    InfeasibleExchange { edge: EdgeId, switch: EdgeId },
    #[error("ordering is not a permutation of the switches: {0}")]
    NotAPermutation(String),
}
