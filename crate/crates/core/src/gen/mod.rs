//! Instance generators and brute-force oracles.

mod fixtures;
mod gap;
mod joint;
mod tap;

pub use fixtures::{
    gen_greedy_gap_example, gen_grid, gen_mssc_non_mrt_fixture, gen_random_mssc,
    gen_random_network, gen_wheel, Wheel,
};
pub use gap::{gen_integrality_gap, GapFamilyParams, IntegralityGap};
pub use joint::{brute_force_joint, enumerate_spanning_trees, JointOptimum, JOINT_MAX_VERTICES};
pub use tap::{
    brute_force_tap, gen_tap_reduction, tap_leaf_lower_bound, tap_prefix_size, two_edge_connected,
    TapReduction, TapSolution, TAP_MAX_SWITCHES,
};

use thiserror::Error;

use crate::mssc::MsscError;
use crate::netgraph::NetError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GenError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("degenerate parameters: {0}")]
    DegenerateParams(String),
    #[error("instance too large: {0}")]
    TooLarge(String),
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error(transparent)]
    Net(#[from] NetError),
    #[error(transparent)]
    Mssc(#[from] MsscError),
}
