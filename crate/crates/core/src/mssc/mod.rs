//! Min Sum Set Cover: instances, orderings and the solvers built on them.

mod alpha;
mod exact;
mod greedy;
mod instance;
mod io;
mod kernel;
mod pad;
mod verify;

pub use alpha::{alpha_point_round, AlphaRun, Schedule};
pub use exact::{exact_order_dp, DP_MAX_FREE_VERTICES, DP_MAX_STATES};
pub use greedy::{greedy_order, TieRule};
pub use instance::{instance_from_coverage, CoverageInstance, Hyperedge, MsscInstance, Ordering};
pub use io::{parse_hypergraph, write_hypergraph};
pub use kernel::{KernelKind, KernelSpec};
pub use pad::{pad_to_uniform, strip_dummies};
pub use verify::{verify_kernel_bounds, verify_lemmas, KernelReport, LemmaGrid, LemmaReport};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MsscError {
    #[error("instance has no hyperedges")]
    EmptyInstance,
    #[error("hyperedge {0} has no vertices")]
    EmptyHyperedge(usize),
    #[error("hyperedge {edge} references vertex {vertex} but the instance has {n} vertices")]
    UnknownVertex {
        edge: usize,
        vertex: usize,
        n: usize,
    },
    #[error("hyperedge {edge} has invalid weight {weight}")]
    InvalidWeight { edge: usize, weight: f64 },
    #[error("instance too large for exact solving: {0}")]
    TooLarge(String),
    #[error("uniformity {c} is below the largest hyperedge size {max}")]
    BadUniformity { c: usize, max: usize },
    #[error("not a permutation of the instance vertices: {0}")]
    NotAPermutation(String),
    #[error("schedule shape {got} does not match the instance ({expected})")]
    ScheduleMismatch { expected: String, got: String },
    #[error("{check} violated at {witness}")]
    BoundViolated { check: String, witness: String },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
