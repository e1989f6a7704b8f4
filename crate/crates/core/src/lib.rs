//! Switch reconnection ordering and spanning-tree search for radial
//! distribution networks.
//!
//! * [`netgraph`]: network model, coverage and reliability metrics
//! * [`mssc`]: min sum set cover orderings (greedy, exact DP, α-point rounding)
//! * [`lp`]: the time-indexed relaxation and a sparse revised simplex
//! * [`localsearch`]: branch exchange over spanning trees
//! * [`prep`]: CSV ingestion, tree contraction, switch placement
//! * [`gen`]: instance generators and brute-force oracles

pub mod gen;
pub mod localsearch;
pub mod lp;
pub mod mssc;
pub mod netgraph;
pub mod prep;

pub use gen::GenError;
pub use localsearch::SearchError;
pub use lp::LpError;
pub use mssc::MsscError;
pub use netgraph::NetError;
pub use prep::PrepError;

/// Any error raised by the library.
#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum Error {
    #[error(transparent)]
    Net(#[from] NetError),
    #[error(transparent)]
    Mssc(#[from] MsscError),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error(transparent)]
    Prep(#[from] PrepError),
    #[error(transparent)]
    Gen(#[from] GenError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
