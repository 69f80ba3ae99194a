pub mod bench;
pub mod dag;
pub mod debruijn;
pub mod error;
pub mod format;
pub mod generate;
pub mod graph;
pub mod oracle;
pub mod privacy;
pub mod reductions;
pub mod solve;
pub mod solver_dbg;
pub mod solver_general;

pub use error::{Error, Result};
pub use graph::{
    EdgeId, EdgeRecord, GraphBuilder, Interval, NodeIx, Orientation, TimedGraph, TrailResult,
};
