//! Simulation and analysis of exchangeable graph-valued processes.
//!
//! A path is a càdlàg step function of graphs on a finite vertex window
//! ([`process::EventLogPath`]). The crate computes edit densities between
//! snapshots, stopping-time ladders that localize the path at threshold
//! `p`, α-order variation under a chosen graph metric, labeled subgraph
//! densities and weighted graph-limit distances, and checks each proved
//! inequality numerically ([`verify`]).

// `!(x > y)` is used on purpose so that NaN inputs fail validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analyze;
pub mod config;
pub mod density;
pub mod error;
pub mod exchangeability;
pub mod graph;
pub mod metrics;
pub mod pathio;
pub mod process;
pub mod rng;
pub mod stats;
pub mod variation;
pub mod verify;

pub use error::{Error, Result};
pub use graph::{AdjacencyGraph, InjectiveMap};
pub use process::{EventLogPath, Model};
