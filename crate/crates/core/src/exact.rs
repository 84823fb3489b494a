//! Brute-force optimal assignments for tiny instances.
//!
//! These solvers enumerate every candidate and are meant as ground truth in
//! tests. Size guards turn oversized requests into [`Error::SizeGuard`].

use crate::error::{Error, Result};
use crate::graph::{Assignment, Graph, NodeId, Path};
use crate::metrics::{path_wlp, wlp_sum};

pub const MAX_SINGLE_NODES: usize = 11;
pub const MAX_MULTI_NODES: usize = 8;
pub const MAX_MULTI_CREWS: usize = 4;

#[derive(Debug, Clone, PartialEq)]
pub struct ExactResult {
    pub assignment: Assignment,
    pub wlp_sum: f64,
    /// Candidates scored: routes for the single-crew solver, crew labelings
    /// of the targets for the multi-crew solver.
    pub candidates: u64,
}

/// Cheapest single route, by full permutation enumeration in lexicographic
/// order (the first optimum found is kept).
pub fn exact_single_mwlp(g: &Graph) -> Result<ExactResult> {
    if g.n() > MAX_SINGLE_NODES {
        return Err(Error::SizeGuard {
            what: "nodes",
            got: g.n(),
            limit: MAX_SINGLE_NODES,
        });
    }
    let targets: Vec<NodeId> = g.targets().collect();
    let (order, cost, candidates) = best_order(g, &targets);
    Ok(ExactResult {
        assignment: Assignment::new(vec![order]),
        wlp_sum: cost,
        candidates,
    })
}

fn best_order(g: &Graph, targets: &[NodeId]) -> (Path, f64, u64) {
    let mut best: Option<(Vec<NodeId>, f64)> = None;
    let mut count = 0;
    let mut route = vec![g.depot()];
    let mut used = vec![false; targets.len()];
    permute(g, targets, &mut route, &mut used, &mut best, &mut count);
    let (nodes, cost) = best.expect("at least the empty route exists");
    (Path(nodes), cost, count)
}

fn permute(
    g: &Graph,
    targets: &[NodeId],
    route: &mut Vec<NodeId>,
    used: &mut [bool],
    best: &mut Option<(Vec<NodeId>, f64)>,
    count: &mut u64,
) {
    if route.len() == targets.len() + 1 {
        *count += 1;
        let cost = path_wlp(g, &Path(route.clone()));
        if best.as_ref().map_or(true, |(_, c)| cost < *c) {
            *best = Some((route.clone(), cost));
        }
        return;
    }
    for k in 0..targets.len() {
        if used[k] {
            continue;
        }
        used[k] = true;
        route.push(targets[k]);
        permute(g, targets, route, used, best, count);
        route.pop();
        used[k] = false;
    }
}

/// Optimal assignment for `m` labeled crews: every map from targets to crews
/// is enumerated, and each crew's node set is routed optimally by
/// permutation. Crews may stay idle.
pub fn exact_multi_mwlp(g: &Graph, m: usize) -> Result<ExactResult> {
    if g.n() > MAX_MULTI_NODES {
        return Err(Error::SizeGuard {
            what: "nodes",
            got: g.n(),
            limit: MAX_MULTI_NODES,
        });
    }
    if m > MAX_MULTI_CREWS {
        return Err(Error::SizeGuard {
            what: "crews",
            got: m,
            limit: MAX_MULTI_CREWS,
        });
    }
    if m == 0 {
        return Err(Error::InvalidInput("need at least one crew".into()));
    }
    let targets: Vec<NodeId> = g.targets().collect();
    let k = targets.len();

    // Optimal route for every subset of targets, keyed by bitmask.
    let mut route_of: Vec<(Path, f64)> = Vec::with_capacity(1 << k);
    for mask in 0u32..(1 << k) {
        let members: Vec<NodeId> = (0..k).filter(|b| mask >> b & 1 == 1).map(|b| targets[b]).collect();
        let (path, cost, _) = best_order(g, &members);
        route_of.push((path, cost));
    }

    let mut labels = vec![0usize; k];
    let mut best: Option<(Vec<usize>, f64)> = None;
    let mut candidates = 0u64;
    loop {
        candidates += 1;
        let mut masks = vec![0usize; m];
        for (b, &crew) in labels.iter().enumerate() {
            masks[crew] |= 1 << b;
        }
        let cost: f64 = masks.iter().map(|&mask| route_of[mask].1).sum();
        if best.as_ref().map_or(true, |(_, c)| cost < *c) {
            best = Some((masks, cost));
        }
        // odometer increment over m^k labelings
        let mut pos = 0;
        while pos < k {
            labels[pos] += 1;
            if labels[pos] < m {
                break;
            }
            labels[pos] = 0;
            pos += 1;
        }
        if pos == k {
            break;
        }
    }

    let (masks, _) = best.expect("at least one labeling");
    let assignment = Assignment::new(masks.iter().map(|&mask| route_of[mask].0.clone()).collect());
    Ok(ExactResult {
        wlp_sum: wlp_sum(g, &assignment),
        assignment,
        candidates,
    })
}
