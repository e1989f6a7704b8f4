//! CSV ingestion, tree contraction and greedy switch placement.

mod contract;
mod ingest;
mod switches;

pub use contract::{contract_tree, ContractOptions, Contracted, ContractionMap};
pub use ingest::{ingest_csv, ingest_readers, write_csv, BUS_COLUMNS, LINE_COLUMNS};
pub use switches::{
    apply_switch_plan, candidate_switches, covered_exposure_fraction, greedy_add_switches,
    AddedSwitch, Candidate, SwitchPlan, GRID_THRESHOLD,
};

use thiserror::Error;

use crate::netgraph::NetError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PrepError {
    #[error("{file}: row {row}, column `{column}`: {message}")]
    Parse {
        file: String,
        row: u64,
        column: String,
        message: String,
    },
    #[error("{0}")]
    Io(String),
    #[error("no bus is flagged as the root")]
    MissingRoot,
    #[error("more than one root bus: {0}")]
    MultipleRoots(String),
    #[error("the lines do not connect every bus")]
    DisconnectedInput,
    #[error("line {0} duplicates another line between the same buses")]
    DuplicateEdge(String),
    #[error("vertex `{0}` has no coordinates")]
    MissingCoordinates(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Net(#[from] NetError),
}
