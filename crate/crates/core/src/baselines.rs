//! Crew-dispatch baselines: greedy, nearest-neighbor and greedy/random mix.
//!
//! Crews are simulated event by event. The crew that becomes free first
//! (lowest index on ties, so all crews start in index order at t = 0) claims
//! an unclaimed node by its rule, travels there and is busy until the edge
//! weight has elapsed. The run ends once every target is claimed.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::graph::{Assignment, Graph, NodeId, Path};

/// Labels of the five compared strategies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StrategyId {
    Ga,
    Nna,
    Gra,
    Tsg,
    Tsnn,
}

impl StrategyId {
    pub const ALL: [StrategyId; 5] = [
        StrategyId::Ga,
        StrategyId::Nna,
        StrategyId::Gra,
        StrategyId::Tsg,
        StrategyId::Tsnn,
    ];

    pub fn label(self) -> &'static str {
        match self {
            StrategyId::Ga => "GA",
            StrategyId::Nna => "NNA",
            StrategyId::Gra => "GRA",
            StrategyId::Tsg => "TSG",
            StrategyId::Tsnn => "TSNN",
        }
    }
}

impl fmt::Display for StrategyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for StrategyId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        StrategyId::ALL
            .into_iter()
            .find(|id| id.label().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidInput(format!("unknown strategy '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrewState {
    pub crew: usize,
    pub at: NodeId,
    /// Minutes until the crew finishes its current job.
    pub available_at: f64,
    pub route: Path,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Rule {
    Greedy,
    Nearest,
    RandomWithin,
}

fn highest_importance(g: &Graph, open: &[NodeId]) -> usize {
    let mut best = 0;
    for k in 1..open.len() {
        if g.importance(open[k]) > g.importance(open[best]) {
            best = k;
        }
    }
    best
}

fn nearest(g: &Graph, from: NodeId, open: &[NodeId]) -> usize {
    let mut best = 0;
    for k in 1..open.len() {
        if g.weight(from, open[k]) < g.weight(from, open[best]) {
            best = k;
        }
    }
    best
}

fn simulate(
    g: &Graph,
    m: usize,
    rule_of: impl Fn(usize) -> Rule,
    radius: f64,
    rng: &mut ChaCha8Rng,
) -> Assignment {
    assert!(m >= 1, "need at least one crew");
    let depot = g.depot();
    let mut crews: Vec<CrewState> = (0..m)
        .map(|crew| CrewState {
            crew,
            at: depot,
            available_at: 0.0,
            route: Path(vec![depot]),
        })
        .collect();
    // kept sorted so ties resolve to the smallest node index
    let mut open: Vec<NodeId> = g.targets().collect();

    while !open.is_empty() {
        let mut next = 0;
        for c in 1..m {
            if crews[c].available_at < crews[next].available_at {
                next = c;
            }
        }
        let crew = &mut crews[next];
        let pick = match rule_of(next) {
            Rule::Greedy => highest_importance(g, &open),
            Rule::Nearest => nearest(g, crew.at, &open),
            Rule::RandomWithin => {
                let within: Vec<usize> = (0..open.len())
                    .filter(|&k| g.weight(crew.at, open[k]) <= radius)
                    .collect();
                match within.choose(rng) {
                    Some(&k) => k,
                    None => nearest(g, crew.at, &open),
                }
            }
        };
        let v = open.remove(pick);
        crew.available_at += g.weight(crew.at, v);
        crew.at = v;
        crew.route.0.push(v);
    }
    Assignment::new(crews.into_iter().map(|c| c.route).collect())
}

/// Every free crew heads to the most important unclaimed node.
pub fn greedy_assignment(g: &Graph, m: usize) -> Assignment {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    simulate(g, m, |_| Rule::Greedy, 0.0, &mut rng)
}

/// Every free crew heads to the unclaimed node with the cheapest edge from
/// where it stands.
pub fn nearest_neighbor_assignment(g: &Graph, m: usize) -> Assignment {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    simulate(g, m, |_| Rule::Nearest, 0.0, &mut rng)
}

/// The first `ceil(m/2)` crews act greedily. The others pick uniformly among
/// unclaimed nodes within a quarter of the graph's edge-weight spread of
/// their position, falling back to the nearest node when none is in range.
pub fn greedy_random_assignment(g: &Graph, m: usize, seed: u64) -> Assignment {
    let greedy_crews = m.div_ceil(2);
    let radius = search_radius(g);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    simulate(
        g,
        m,
        |c| if c < greedy_crews { Rule::Greedy } else { Rule::RandomWithin },
        radius,
        &mut rng,
    )
}

pub fn search_radius(g: &Graph) -> f64 {
    g.weight_spread() / 4.0
}
