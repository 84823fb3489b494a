//! Solvers for the minimum weighted latency problem with several crews.
//!
//! Crews leave a shared depot and repair every target once. A target's
//! latency is the time its crew reaches and repairs it; the objective is the
//! importance-weighted sum of latencies over all targets. The crate provides
//! the transfers-and-swaps partition optimizer with greedy and
//! nearest-neighbor subset routing, the greedy / nearest-neighbor /
//! greedy-random dispatch baselines, exact enumeration for tiny instances,
//! and instance generation and IO.

pub mod baselines;
pub mod error;
pub mod exact;
pub mod graph;
pub mod harness;
pub mod heuristics;
pub mod instance;
pub mod metrics;
pub mod optimizer;
pub mod road;

pub use baselines::StrategyId;
pub use error::{Error, Result};
pub use graph::{Assignment, Graph, NodeId, Partition, Path};
pub use heuristics::Heuristic;
pub use optimizer::OptimizerConfig;
