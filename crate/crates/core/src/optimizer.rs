//! Transfers-and-swaps partition search for the multi-crew weighted latency
//! problem.
//!
//! The search works on unordered node subsets, one per crew. A subset is
//! priced by the weighted latency of the route a [`Heuristic`] builds on it.
//! Three procedures are composed:
//!
//! * [`transfers_and_swaps`] visits pairs of subsets and applies the single
//!   node transfer or node swap that most reduces the larger of the two
//!   subset costs. Pairs are marked for checking, unmarked when no move
//!   helps, and re-marked when either subset changes. Each sweep records the
//!   current partition; revisiting a recorded partition stops the search.
//! * [`transfer_outliers`] moves every node whose share of its subset's cost
//!   exceeds `alpha` to the subset that absorbs it most cheaply.
//! * [`optimize`] starts from a seeded random partition and alternates the two
//!   above while the total weighted latency keeps strictly decreasing.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{canonical_key, Assignment, Graph, NodeId, Partition};
use crate::heuristics::{assignment_from_partition, node_contribution, subset_cost, Heuristic};
use crate::metrics::wlp_sum;

pub const DEFAULT_ALPHA: f64 = 0.13;
pub const DEFAULT_MAX_OUTER_ITERATIONS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizerConfig {
    /// Contribution threshold above which a node counts as an outlier.
    pub alpha: f64,
    pub heuristic: Heuristic,
    /// Seed of the random starting partition.
    pub seed: u64,
    /// Cap on outlier/transfers-and-swaps rounds.
    pub max_outer_iterations: usize,
}

impl OptimizerConfig {
    pub fn new(heuristic: Heuristic, seed: u64) -> Self {
        OptimizerConfig {
            alpha: DEFAULT_ALPHA,
            heuristic,
            seed,
            max_outer_iterations: DEFAULT_MAX_OUTER_ITERATIONS,
        }
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::InvalidInput(format!(
                "alpha must lie in (0, 1), got {}",
                self.alpha
            )));
        }
        if self.max_outer_iterations == 0 {
            return Err(Error::InvalidInput("max_outer_iterations must be at least 1".into()));
        }
        Ok(())
    }
}

/// A partition update applied by [`transfers_and_swaps`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Move {
    Transfer { from: usize, to: usize, node: NodeId },
    Swap { i: usize, j: usize, node_i: NodeId, node_j: NodeId },
}

/// Hooks into the search, used by tests and diagnostics.
pub trait Observer {
    /// Called with the working partition after every applied change.
    fn partition(&mut self, _p: &Partition) {}

    /// `before` and `after` are the pairwise max subset cost around `mv`.
    fn applied(&mut self, _mv: &Move, _before: f64, _after: f64) {}

    /// Total cost of each partition accepted by the outer loop, starting with
    /// the random initial partition.
    fn accepted(&mut self, _wlp_sum: f64) {}
}

/// Observer that ignores every event.
pub struct Silent;

impl Observer for Silent {}

/// Which subset pairs still need checking.
#[derive(Debug, Clone)]
pub struct PairMarkState {
    m: usize,
    transfer: Vec<bool>,
    swap: Vec<bool>,
}

impl PairMarkState {
    pub fn all_marked(m: usize) -> Self {
        let mut transfer = vec![true; m * m];
        let mut swap = vec![false; m * m];
        for i in 0..m {
            transfer[i * m + i] = false;
            for j in i + 1..m {
                swap[i * m + j] = true;
            }
        }
        PairMarkState { m, transfer, swap }
    }

    pub fn any(&self) -> bool {
        self.transfer.iter().chain(&self.swap).any(|&b| b)
    }

    /// Ordered pair `(i, j)`: transfer from `i` to `j`.
    pub fn transfer_marked(&self, i: usize, j: usize) -> bool {
        self.transfer[i * self.m + j]
    }

    /// Unordered pair; `i < j`.
    pub fn swap_marked(&self, i: usize, j: usize) -> bool {
        self.swap[i * self.m + j]
    }

    fn unmark_transfer(&mut self, i: usize, j: usize) {
        self.transfer[i * self.m + j] = false;
    }

    fn unmark_swap(&mut self, i: usize, j: usize) {
        self.swap[i * self.m + j] = false;
    }

    /// Re-mark every transfer and swap pair containing subset `k`.
    pub fn remark(&mut self, k: usize) {
        let m = self.m;
        for other in (0..m).filter(|&o| o != k) {
            self.transfer[k * m + other] = true;
            self.transfer[other * m + k] = true;
            let (a, b) = (k.min(other), k.max(other));
            self.swap[a * m + b] = true;
        }
    }
}

fn without(subset: &[NodeId], v: NodeId) -> Vec<NodeId> {
    subset.iter().copied().filter(|&u| u != v).collect()
}

fn with(subset: &[NodeId], v: NodeId) -> Vec<NodeId> {
    let mut s = subset.to_vec();
    if let Err(pos) = s.binary_search(&v) {
        s.insert(pos, v);
    }
    s
}

fn swapped(subset: &[NodeId], out: NodeId, inn: NodeId) -> Vec<NodeId> {
    with(&without(subset, out), inn)
}

#[derive(Debug, Clone, Copy)]
struct Scored<T> {
    choice: T,
    gain: f64,
    cost_i: f64,
    cost_j: f64,
}

fn scan_transfer(
    g: &Graph,
    vi: &[NodeId],
    vj: &[NodeId],
    ci: f64,
    cj: f64,
    h: Heuristic,
) -> Option<Scored<NodeId>> {
    let before = ci.max(cj);
    let mut best: Option<Scored<NodeId>> = None;
    for &v in vi.iter().filter(|&&v| v != g.depot()) {
        let cost_i = subset_cost(g, &without(vi, v), h);
        let cost_j = subset_cost(g, &with(vj, v), h);
        let gain = before - cost_i.max(cost_j);
        if best.map_or(true, |b| gain > b.gain) {
            best = Some(Scored { choice: v, gain, cost_i, cost_j });
        }
    }
    best.filter(|b| b.gain > 0.0)
}

fn scan_swap(
    g: &Graph,
    vi: &[NodeId],
    vj: &[NodeId],
    ci: f64,
    cj: f64,
    h: Heuristic,
) -> Option<Scored<(NodeId, NodeId)>> {
    let depot = g.depot();
    let before = ci.max(cj);
    let mut best: Option<Scored<(NodeId, NodeId)>> = None;
    for &a in vi.iter().filter(|&&v| v != depot) {
        for &b in vj.iter().filter(|&&v| v != depot) {
            let cost_i = subset_cost(g, &swapped(vi, a, b), h);
            let cost_j = subset_cost(g, &swapped(vj, b, a), h);
            let gain = before - cost_i.max(cost_j);
            if best.map_or(true, |s| gain > s.gain) {
                best = Some(Scored { choice: (a, b), gain, cost_i, cost_j });
            }
        }
    }
    best.filter(|b| b.gain > 0.0)
}

fn normalized(p: &Partition) -> Vec<Vec<NodeId>> {
    p.subsets
        .iter()
        .map(|s| {
            let mut s = s.clone();
            s.sort_unstable();
            s.dedup();
            s
        })
        .collect()
}

/// Node of subset `i` whose transfer to subset `j` most reduces
/// `max(c(V_i), c(V_j))`, if any transfer strictly reduces it. Ties go to the
/// smallest node index.
pub fn best_transfer(g: &Graph, p: &Partition, i: usize, j: usize, h: Heuristic) -> Option<NodeId> {
    assert_ne!(i, j, "transfer needs two distinct subsets");
    let subsets = normalized(p);
    let ci = subset_cost(g, &subsets[i], h);
    let cj = subset_cost(g, &subsets[j], h);
    scan_transfer(g, &subsets[i], &subsets[j], ci, cj, h).map(|s| s.choice)
}

/// Best strictly improving exchange `(node from i, node from j)`. Ties go to
/// the smallest node of `i`, then the smallest node of `j`.
pub fn best_swap(
    g: &Graph,
    p: &Partition,
    i: usize,
    j: usize,
    h: Heuristic,
) -> Option<(NodeId, NodeId)> {
    assert_ne!(i, j, "swap needs two distinct subsets");
    let subsets = normalized(p);
    let ci = subset_cost(g, &subsets[i], h);
    let cj = subset_cost(g, &subsets[j], h);
    scan_swap(g, &subsets[i], &subsets[j], ci, cj, h).map(|s| s.choice)
}

pub fn transfers_and_swaps(g: &Graph, p: &Partition, h: Heuristic) -> Partition {
    transfers_and_swaps_observed(g, p, h, &mut Silent)
}

pub fn transfers_and_swaps_observed(
    g: &Graph,
    p: &Partition,
    h: Heuristic,
    observer: &mut dyn Observer,
) -> Partition {
    let mut subsets = normalized(p);
    let m = subsets.len();
    let mut costs: Vec<f64> = subsets.iter().map(|s| subset_cost(g, s, h)).collect();
    let mut marks = PairMarkState::all_marked(m);
    let mut tried = HashSet::new();

    while marks.any() && tried.insert(canonical_key(&Partition::new(subsets.clone()))) {
        let mut touched = vec![false; m];

        for i in 0..m {
            for j in (0..m).filter(|&j| j != i) {
                if !marks.transfer_marked(i, j) {
                    continue;
                }
                let Some(best) = scan_transfer(g, &subsets[i], &subsets[j], costs[i], costs[j], h)
                else {
                    marks.unmark_transfer(i, j);
                    continue;
                };
                let before = costs[i].max(costs[j]);
                let v = best.choice;
                subsets[i] = without(&subsets[i], v);
                subsets[j] = with(&subsets[j], v);
                costs[i] = best.cost_i;
                costs[j] = best.cost_j;
                touched[i] = true;
                touched[j] = true;
                observer.applied(
                    &Move::Transfer { from: i, to: j, node: v },
                    before,
                    best.cost_i.max(best.cost_j),
                );
                observer.partition(&Partition::new(subsets.clone()));
            }
        }

        for i in 0..m {
            for j in i + 1..m {
                if !marks.swap_marked(i, j) {
                    continue;
                }
                let Some(best) = scan_swap(g, &subsets[i], &subsets[j], costs[i], costs[j], h)
                else {
                    marks.unmark_swap(i, j);
                    continue;
                };
                let before = costs[i].max(costs[j]);
                let (a, b) = best.choice;
                subsets[i] = swapped(&subsets[i], a, b);
                subsets[j] = swapped(&subsets[j], b, a);
                costs[i] = best.cost_i;
                costs[j] = best.cost_j;
                touched[i] = true;
                touched[j] = true;
                observer.applied(
                    &Move::Swap { i, j, node_i: a, node_j: b },
                    before,
                    best.cost_i.max(best.cost_j),
                );
                observer.partition(&Partition::new(subsets.clone()));
            }
        }

        for k in (0..m).filter(|&k| touched[k]) {
            marks.remark(k);
        }
    }
    Partition::new(subsets)
}

/// Relocates high-contribution nodes. Subsets are scanned in index order and
/// nodes in ascending order; each move is applied before the next node is
/// examined. When the current subset ties for the cheapest destination the
/// node stays put; otherwise ties go to the smallest subset index.
pub fn transfer_outliers(g: &Graph, p: &Partition, h: Heuristic, alpha: f64) -> Partition {
    transfer_outliers_observed(g, p, h, alpha, &mut Silent)
}

pub fn transfer_outliers_observed(
    g: &Graph,
    p: &Partition,
    h: Heuristic,
    alpha: f64,
    observer: &mut dyn Observer,
) -> Partition {
    let depot = g.depot();
    let mut subsets = normalized(p);
    for i in 0..subsets.len() {
        let candidates: Vec<NodeId> = subsets[i].iter().copied().filter(|&v| v != depot).collect();
        for v in candidates {
            if node_contribution(g, &subsets[i], v, h) <= alpha {
                continue;
            }
            let mut target = i;
            let mut target_cost = subset_cost(g, &subsets[i], h);
            for (k, subset) in subsets.iter().enumerate() {
                if k == i {
                    continue;
                }
                let cost = subset_cost(g, &with(subset, v), h);
                if cost < target_cost {
                    target = k;
                    target_cost = cost;
                }
            }
            if target != i {
                subsets[i] = without(&subsets[i], v);
                subsets[target] = with(&subsets[target], v);
                observer.partition(&Partition::new(subsets.clone()));
            }
        }
    }
    Partition::new(subsets)
}

/// Shuffles the targets with a seeded ChaCha8 stream and deals them
/// round-robin to `m` subsets, each of which also holds the depot.
pub fn random_initial_partition(g: &Graph, m: usize, seed: u64) -> Partition {
    assert!(m >= 1, "need at least one crew");
    let mut targets: Vec<NodeId> = g.targets().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    targets.shuffle(&mut rng);
    let mut subsets = vec![vec![g.depot()]; m];
    for (k, v) in targets.into_iter().enumerate() {
        subsets[k % m].push(v);
    }
    for s in &mut subsets {
        s.sort_unstable();
    }
    Partition::new(subsets)
}

pub fn optimize(g: &Graph, m: usize, cfg: &OptimizerConfig) -> Result<Assignment> {
    optimize_observed(g, m, cfg, &mut Silent)
}

/// Alternates outlier transfers and transfers-and-swaps from a random start
/// while each round strictly lowers the total weighted latency, then routes
/// the best partition with the configured heuristic.
pub fn optimize_observed(
    g: &Graph,
    m: usize,
    cfg: &OptimizerConfig,
    observer: &mut dyn Observer,
) -> Result<Assignment> {
    cfg.validate()?;
    if m == 0 {
        return Err(Error::InvalidInput("need at least one crew".into()));
    }
    let h = cfg.heuristic;
    let total = |p: &Partition| wlp_sum(g, &assignment_from_partition(g, p, h));

    let mut best = random_initial_partition(g, m, cfg.seed);
    observer.partition(&best);
    let mut best_cost = total(&best);
    observer.accepted(best_cost);

    let mut current = transfers_and_swaps_observed(g, &best, h, observer);
    let mut improving = total(&current) < best_cost;
    let mut rounds = 0;
    while improving && rounds < cfg.max_outer_iterations {
        rounds += 1;
        current = transfer_outliers_observed(g, &current, h, cfg.alpha, observer);
        current = transfers_and_swaps_observed(g, &current, h, observer);
        let cost = total(&current);
        improving = cost < best_cost;
        if improving {
            best = current.clone();
            best_cost = cost;
            observer.accepted(best_cost);
        }
    }
    Ok(assignment_from_partition(g, &best, h))
}
