//! Linear programming: a sparse model type, a two-phase revised simplex
//! solver, and the time-indexed relaxation of min sum set cover.

mod lu;
mod model;
mod mssc_lp;
mod simplex;

pub use model::{LpBuilder, LpModel, Sense};
pub use mssc_lp::{build_mssc_lp, greedy_cover_size, MsscLp};
pub use simplex::{solve_lp, LpSolution, SolverOptions};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LpError {
    #[error("instance has no hyperedges")]
    EmptyInstance,
    #[error("horizon {horizon} is shorter than a set cover of size {needed}; the relaxation could be infeasible")]
    HorizonTooShort { horizon: usize, needed: usize },
    #[error("malformed model: {0}")]
    Malformed(String),
    #[error("problem is infeasible (phase-one residual {0:e})")]
    Infeasible(f64),
    #[error("problem is unbounded")]
    Unbounded,
    #[error("iteration limit of {0} pivots reached")]
    IterationLimit(usize),
    #[error("numerical failure: {0}")]
    Numerical(String),
}
