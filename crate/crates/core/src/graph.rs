//! Instance, partition and assignment model.
//!
//! A [`Graph`] is complete and directed. Edge weight `d(u -> v)` is the travel
//! time from `u` to `v` plus the repair time at `v`, so the matrix is
//! asymmetric in general. Node importances are population counts, and the
//! depot carries importance zero.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

pub type NodeId = usize;

#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    depot: NodeId,
    importance: Vec<f64>,
    /// Per-node repair minutes, already folded into incoming edge weights.
    repair: Vec<f64>,
    weights: Vec<f64>,
}

impl Graph {
    /// Builds a graph from a dense row-major matrix. Only the shape is checked
    /// here; use [`validate_graph`] for the model invariants.
    pub fn new(depot: NodeId, importance: Vec<f64>, matrix: Vec<Vec<f64>>) -> Result<Self> {
        let n = importance.len();
        Self::with_repair(depot, importance, vec![0.0; n], matrix)
    }

    pub fn with_repair(
        depot: NodeId,
        importance: Vec<f64>,
        repair: Vec<f64>,
        matrix: Vec<Vec<f64>>,
    ) -> Result<Self> {
        let n = importance.len();
        if n == 0 {
            return Err(Error::Shape("graph has no nodes".into()));
        }
        if depot >= n {
            return Err(Error::Shape(format!("depot {depot} out of range for {n} nodes")));
        }
        if repair.len() != n {
            return Err(Error::Shape(format!(
                "{} repair times for {n} nodes",
                repair.len()
            )));
        }
        if matrix.len() != n || matrix.iter().any(|row| row.len() != n) {
            return Err(Error::Shape(format!("edge matrix is not {n}x{n}")));
        }
        Ok(Graph {
            depot,
            importance,
            repair,
            weights: matrix.into_iter().flatten().collect(),
        })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.importance.len()
    }

    #[inline]
    pub fn depot(&self) -> NodeId {
        self.depot
    }

    #[inline]
    pub fn importance(&self, v: NodeId) -> f64 {
        self.importance[v]
    }

    pub fn importances(&self) -> &[f64] {
        &self.importance
    }

    pub fn repair(&self, v: NodeId) -> f64 {
        self.repair[v]
    }

    #[inline]
    pub fn weight(&self, from: NodeId, to: NodeId) -> f64 {
        self.weights[from * self.n() + to]
    }

    /// All nodes except the depot, ascending.
    pub fn targets(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.n()).filter(move |&v| v != self.depot)
    }

    pub fn total_importance(&self) -> f64 {
        self.importance.iter().sum()
    }

    /// Largest minus smallest off-diagonal edge weight; zero for `n < 2`.
    pub fn weight_spread(&self) -> f64 {
        let n = self.n();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for u in 0..n {
            for v in 0..n {
                if u != v {
                    let d = self.weight(u, v);
                    lo = lo.min(d);
                    hi = hi.max(d);
                }
            }
        }
        if lo.is_finite() {
            hi - lo
        } else {
            0.0
        }
    }
}

/// Three-node asymmetric reference instance: depot 0, importances `[0, 3, 5]`.
///
/// The greedy and nearest-neighbor routing rules disagree on it, which makes
/// it useful for hand-checked tests across the crate.
pub fn reference_graph() -> Graph {
    Graph::new(
        0,
        vec![0.0, 3.0, 5.0],
        vec![
            vec![0.0, 1.0, 4.0],
            vec![1.0, 0.0, 2.0],
            vec![4.0, 3.0, 0.0],
        ],
    )
    .expect("reference graph is well-formed")
}

/// Depot-rooted ordered route of one crew.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Path(pub Vec<NodeId>);

impl Path {
    pub fn nodes(&self) -> &[NodeId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl From<Vec<NodeId>> for Path {
    fn from(nodes: Vec<NodeId>) -> Self {
        Path(nodes)
    }
}

/// `m` node subsets, one per crew. Each subset holds the depot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    pub subsets: Vec<Vec<NodeId>>,
}

impl Partition {
    pub fn new(subsets: Vec<Vec<NodeId>>) -> Self {
        Partition { subsets }
    }

    pub fn m(&self) -> usize {
        self.subsets.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    pub paths: Vec<Path>,
}

impl Assignment {
    pub fn new(paths: Vec<Path>) -> Self {
        Assignment { paths }
    }

    pub fn from_lists(lists: Vec<Vec<NodeId>>) -> Self {
        Assignment {
            paths: lists.into_iter().map(Path).collect(),
        }
    }

    pub fn m(&self) -> usize {
        self.paths.len()
    }
}

/// First broken invariant found by one of the validators.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    DepotImportanceNonzero(f64),
    NegativeImportance(NodeId),
    NonzeroDiagonal(NodeId),
    InvalidEdge(NodeId, NodeId),
    NodeOutOfRange(NodeId),
    NoSubsets,
    SubsetMissingDepot(usize),
    NodeInTwoSubsets(NodeId),
    NodeUncovered(NodeId),
    EmptyPath(usize),
    PathNotAtDepot(usize),
    NodeRepeated(NodeId),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DepotImportanceNonzero(w) => write!(f, "depot importance nonzero ({w})"),
            Violation::NegativeImportance(v) => write!(f, "node {v} has negative or non-finite importance"),
            Violation::NonzeroDiagonal(v) => write!(f, "nonzero diagonal at node {v}"),
            Violation::InvalidEdge(u, v) => write!(f, "edge {u}->{v} is negative or non-finite"),
            Violation::NodeOutOfRange(v) => write!(f, "node {v} out of range"),
            Violation::NoSubsets => write!(f, "no subsets"),
            Violation::SubsetMissingDepot(i) => write!(f, "subset {i} missing depot"),
            Violation::NodeInTwoSubsets(v) => write!(f, "node {v} in two subsets"),
            Violation::NodeUncovered(v) => write!(f, "node {v} not covered"),
            Violation::EmptyPath(i) => write!(f, "path {i} is empty"),
            Violation::PathNotAtDepot(i) => write!(f, "path {i} does not begin at depot"),
            Violation::NodeRepeated(v) => write!(f, "node {v} appears twice"),
        }
    }
}

impl std::error::Error for Violation {}

pub fn validate_graph(g: &Graph) -> std::result::Result<(), Violation> {
    let n = g.n();
    let depot_w = g.importance(g.depot());
    if depot_w != 0.0 {
        return Err(Violation::DepotImportanceNonzero(depot_w));
    }
    if let Some(v) = (0..n).find(|&v| !(g.importance(v).is_finite() && g.importance(v) >= 0.0)) {
        return Err(Violation::NegativeImportance(v));
    }
    for u in 0..n {
        if g.weight(u, u) != 0.0 {
            return Err(Violation::NonzeroDiagonal(u));
        }
        for v in 0..n {
            let d = g.weight(u, v);
            if !(d.is_finite() && d >= 0.0) {
                return Err(Violation::InvalidEdge(u, v));
            }
        }
    }
    Ok(())
}

pub fn validate_partition(g: &Graph, p: &Partition) -> std::result::Result<(), Violation> {
    if p.subsets.is_empty() {
        return Err(Violation::NoSubsets);
    }
    let n = g.n();
    let depot = g.depot();
    let mut owner: Vec<Option<usize>> = vec![None; n];
    for (i, subset) in p.subsets.iter().enumerate() {
        if !subset.contains(&depot) {
            return Err(Violation::SubsetMissingDepot(i));
        }
        let mut local = BTreeSet::new();
        for &v in subset {
            if v >= n {
                return Err(Violation::NodeOutOfRange(v));
            }
            if v == depot {
                continue;
            }
            if !local.insert(v) || owner[v].is_some() {
                return Err(Violation::NodeInTwoSubsets(v));
            }
            owner[v] = Some(i);
        }
    }
    match g.targets().find(|&v| owner[v].is_none()) {
        Some(v) => Err(Violation::NodeUncovered(v)),
        None => Ok(()),
    }
}

pub fn validate_assignment(g: &Graph, a: &Assignment) -> std::result::Result<(), Violation> {
    if a.paths.is_empty() {
        return Err(Violation::NoSubsets);
    }
    let n = g.n();
    let depot = g.depot();
    let mut seen = vec![false; n];
    for (i, path) in a.paths.iter().enumerate() {
        match path.nodes().first() {
            None => return Err(Violation::EmptyPath(i)),
            Some(&first) if first != depot => return Err(Violation::PathNotAtDepot(i)),
            Some(_) => {}
        }
        for &v in &path.nodes()[1..] {
            if v >= n {
                return Err(Violation::NodeOutOfRange(v));
            }
            if v == depot || seen[v] {
                return Err(Violation::NodeRepeated(v));
            }
            seen[v] = true;
        }
    }
    match g.targets().find(|&v| !seen[v]) {
        Some(v) => Err(Violation::NodeUncovered(v)),
        None => Ok(()),
    }
}

/// Drops the visiting order: subset `i` holds the nodes of path `i`, sorted.
pub fn partition_of(a: &Assignment) -> Partition {
    Partition::new(
        a.paths
            .iter()
            .map(|p| {
                let mut nodes = p.0.clone();
                nodes.sort_unstable();
                nodes
            })
            .collect(),
    )
}

/// Order-free identity of a partition: sorted subsets in sorted order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartitionKey(Vec<Vec<NodeId>>);

pub fn canonical_key(p: &Partition) -> PartitionKey {
    let mut subsets: Vec<Vec<NodeId>> = p
        .subsets
        .iter()
        .map(|s| {
            let mut s = s.clone();
            s.sort_unstable();
            s
        })
        .collect();
    subsets.sort_unstable();
    PartitionKey(subsets)
}
