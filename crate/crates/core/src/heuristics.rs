//! Single-crew routing rules used as the cost proxy of a node subset.
//!
//! Both rules build a route from the depot one node at a time, scanning the
//! remaining nodes at every step (`O(k^2)` for a `k`-node subset). Ties go to
//! the smallest node index so every route is reproducible.

use std::fmt;
use std::str::FromStr;

use crate::error::Error;
use crate::graph::{Assignment, Graph, NodeId, Partition, Path};
use crate::metrics::route_cost;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Heuristic {
    /// Next node is the unvisited one of highest importance.
    Greedy,
    /// Next node is the unvisited one with the cheapest edge from the current node.
    NearestNeighbor,
}

impl fmt::Display for Heuristic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Heuristic::Greedy => f.write_str("greedy"),
            Heuristic::NearestNeighbor => f.write_str("nearest_neighbor"),
        }
    }
}

impl FromStr for Heuristic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "greedy" | "g" => Ok(Heuristic::Greedy),
            "nearest_neighbor" | "nearest-neighbor" | "nn" => Ok(Heuristic::NearestNeighbor),
            other => Err(Error::InvalidInput(format!("unknown heuristic '{other}'"))),
        }
    }
}

/// Visit order produced by `h` over `subset`, starting at the depot.
pub fn heuristic_path(g: &Graph, subset: &[NodeId], h: Heuristic) -> Path {
    let mut scans = 0;
    Path(route(g, subset, h, &mut scans))
}

fn route(g: &Graph, subset: &[NodeId], h: Heuristic, scans: &mut usize) -> Vec<NodeId> {
    let depot = g.depot();
    let mut pending: Vec<NodeId> = subset.iter().copied().filter(|&v| v != depot).collect();
    pending.sort_unstable();
    pending.dedup();

    let mut order = Vec::with_capacity(pending.len() + 1);
    order.push(depot);
    let mut current = depot;
    while !pending.is_empty() {
        // `pending` is sorted, so keeping the first strict improvement breaks
        // ties toward the smallest index.
        let mut best = 0;
        for k in 1..pending.len() {
            *scans += 1;
            let better = match h {
                Heuristic::Greedy => g.importance(pending[k]) > g.importance(pending[best]),
                Heuristic::NearestNeighbor => {
                    g.weight(current, pending[k]) < g.weight(current, pending[best])
                }
            };
            if better {
                best = k;
            }
        }
        current = pending.remove(best);
        order.push(current);
    }
    order
}

/// Heuristic cost `c(subset)`: weighted latency of the heuristic route.
pub fn subset_cost(g: &Graph, subset: &[NodeId], h: Heuristic) -> f64 {
    let mut scans = 0;
    route_cost(g, &route(g, subset, h, &mut scans))
}

pub fn assignment_from_partition(g: &Graph, p: &Partition, h: Heuristic) -> Assignment {
    Assignment::new(p.subsets.iter().map(|s| heuristic_path(g, s, h)).collect())
}

/// Fraction of `c(subset)` that disappears when `v` is removed.
///
/// Returns 0 for a zero-cost subset. The value is not clamped: it can be
/// negative when dropping `v` reorders the heuristic route for the worse.
pub fn node_contribution(g: &Graph, subset: &[NodeId], v: NodeId, h: Heuristic) -> f64 {
    let full = subset_cost(g, subset, h);
    if full == 0.0 {
        return 0.0;
    }
    let rest: Vec<NodeId> = subset.iter().copied().filter(|&u| u != v).collect();
    (full - subset_cost(g, &rest, h)) / full
}
