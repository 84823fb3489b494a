//! Road networks and their shortest-path closure over repair targets.
//!
//! A road network is read from a small text export:
//!
//! ```text
//! xnode <id> <x> <y>
//! seg <id1> <id2> <meters>
//! target <id> <importance>
//! depot <id>
//! ```
//!
//! Segments are undirected. [`synthetic_city`] builds a city-like network
//! (a jittered street grid with some streets missing and tract-level
//! populations) for experiments without map data.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path as FsPath;

use petgraph::algo::dijkstra;
use petgraph::graph::{NodeIndex, UnGraph};
use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::instance::quantize;

/// 25 miles per hour, in meters per minute.
pub const CITY_SPEED_M_PER_MIN: f64 = 25.0 * 1609.344 / 60.0;

#[derive(Debug, Clone, PartialEq)]
pub struct RoadNetwork {
    /// `(id, x, y)` in meters.
    pub intersections: Vec<(u64, f64, f64)>,
    /// `(id1, id2, meters)`.
    pub segments: Vec<(u64, u64, f64)>,
    /// `(id, importance)`.
    pub targets: Vec<(u64, f64)>,
    pub depot: u64,
}

impl RoadNetwork {
    fn road_graph(&self) -> Result<(UnGraph<u64, f64>, HashMap<u64, NodeIndex>)> {
        let mut graph = UnGraph::with_capacity(self.intersections.len(), self.segments.len());
        let mut index = HashMap::with_capacity(self.intersections.len());
        for &(id, _, _) in &self.intersections {
            if index.insert(id, graph.add_node(id)).is_some() {
                return Err(Error::InvalidInput(format!("duplicate intersection {id}")));
            }
        }
        let lookup = |id: u64| {
            index
                .get(&id)
                .copied()
                .ok_or_else(|| Error::InvalidInput(format!("unknown intersection {id}")))
        };
        for &(a, b, meters) in &self.segments {
            if !(meters.is_finite() && meters >= 0.0) {
                return Err(Error::InvalidInput(format!("segment {a}-{b} has length {meters}")));
            }
            graph.add_edge(lookup(a)?, lookup(b)?, meters);
        }
        Ok((graph, index))
    }
}

/// Complete graph over the depot (index 0) and the targets (in file order):
/// `d(u -> v)` is the shortest road distance divided by `speed`, plus the
/// repair minutes of `v`. Values are rounded to six decimals.
pub fn metric_closure(road: &RoadNetwork, speed: f64, repair_minutes: &[f64]) -> Result<Graph> {
    if !(speed.is_finite() && speed > 0.0) {
        return Err(Error::InvalidInput(format!("speed must be positive, got {speed}")));
    }
    if repair_minutes.len() != road.targets.len() {
        return Err(Error::InvalidInput(format!(
            "{} repair times for {} targets",
            repair_minutes.len(),
            road.targets.len()
        )));
    }
    let (graph, index) = road.road_graph()?;
    let site = |id: u64| {
        index
            .get(&id)
            .copied()
            .ok_or_else(|| Error::InvalidInput(format!("unknown intersection {id}")))
    };
    let mut sites = vec![site(road.depot)?];
    for &(id, _) in &road.targets {
        sites.push(site(id)?);
    }

    let n = sites.len();
    let mut importance = vec![0.0];
    importance.extend(road.targets.iter().map(|t| t.1));
    let mut repair = vec![0.0];
    repair.extend_from_slice(repair_minutes);

    let mut matrix = vec![vec![0.0; n]; n];
    for (u, &from) in sites.iter().enumerate() {
        let dist = dijkstra(&graph, from, None, |e| *e.weight());
        for (v, &to) in sites.iter().enumerate() {
            if u == v {
                continue;
            }
            let meters = dist.get(&to).ok_or_else(|| {
                Error::InvalidInput(format!(
                    "intersection {} unreachable from {}",
                    graph[to], graph[from]
                ))
            })?;
            matrix[u][v] = quantize(meters / speed + repair[v], 6);
        }
    }
    Graph::with_repair(0, importance, repair, matrix)
}

pub fn road_network_to_string(road: &RoadNetwork) -> String {
    let mut out = String::new();
    for &(id, x, y) in &road.intersections {
        let _ = writeln!(out, "xnode {id} {x} {y}");
    }
    for &(a, b, m) in &road.segments {
        let _ = writeln!(out, "seg {a} {b} {m}");
    }
    for &(id, w) in &road.targets {
        let _ = writeln!(out, "target {id} {w}");
    }
    let _ = writeln!(out, "depot {}", road.depot);
    out
}

pub fn parse_road_network(text: &str) -> Result<RoadNetwork> {
    let mut road = RoadNetwork {
        intersections: Vec::new(),
        segments: Vec::new(),
        targets: Vec::new(),
        depot: 0,
    };
    let mut depot = None;
    for (idx, line) in text.lines().enumerate() {
        let ln = idx + 1;
        let t: Vec<&str> = line.split_whitespace().collect();
        if t.is_empty() || t[0].starts_with('#') {
            continue;
        }
        let arity = |k: usize| {
            if t.len() == k {
                Ok(())
            } else {
                Err(Error::parse(ln, format!("'{}' takes {} fields", t[0], k - 1)))
            }
        };
        let num = |i: usize, name: &str| -> Result<f64> {
            t[i].parse().map_err(|_| Error::parse(ln, format!("invalid {name} '{}'", t[i])))
        };
        let id = |i: usize| -> Result<u64> {
            t[i].parse().map_err(|_| Error::parse(ln, format!("invalid id '{}'", t[i])))
        };
        match t[0] {
            "xnode" => {
                arity(4)?;
                road.intersections.push((id(1)?, num(2, "x")?, num(3, "y")?));
            }
            "seg" => {
                arity(4)?;
                road.segments.push((id(1)?, id(2)?, num(3, "meters")?));
            }
            "target" => {
                arity(3)?;
                road.targets.push((id(1)?, num(2, "importance")?));
            }
            "depot" => {
                arity(2)?;
                if depot.replace(id(1)?).is_some() {
                    return Err(Error::parse(ln, "depot given twice"));
                }
            }
            other => return Err(Error::parse(ln, format!("unknown record '{other}'"))),
        }
    }
    road.depot = depot.ok_or_else(|| Error::parse(text.lines().count(), "missing depot line"))?;
    Ok(road)
}

pub fn load_road_network(path: impl AsRef<FsPath>) -> Result<RoadNetwork> {
    parse_road_network(&fs::read_to_string(path)?)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CityParams {
    pub cols: usize,
    pub rows: usize,
    /// Street spacing in meters.
    pub block_meters: f64,
    /// Intersection jitter as a fraction of the spacing.
    pub jitter: f64,
    /// Share of non-essential street segments removed.
    pub missing_streets: f64,
    /// Census-tract side length, in blocks.
    pub tract_blocks: usize,
    pub population_range: (u32, u32),
    /// Number of targets (the depot comes on top).
    pub targets: usize,
    pub seed: u64,
}

impl Default for CityParams {
    fn default() -> Self {
        CityParams {
            cols: 24,
            rows: 24,
            block_meters: 400.0,
            jitter: 0.2,
            missing_streets: 0.15,
            tract_blocks: 4,
            population_range: (1, 1500),
            targets: 200,
            seed: 0,
        }
    }
}

/// Seeded city-like road network. A random spanning tree of the street grid
/// is always kept, so every intersection stays reachable.
pub fn synthetic_city(p: &CityParams) -> Result<RoadNetwork> {
    let cells = p.cols * p.rows;
    if p.cols == 0 || p.rows == 0 || p.targets + 1 > cells {
        return Err(Error::InvalidInput(format!(
            "{}x{} grid cannot host {} targets and a depot",
            p.cols, p.rows, p.targets
        )));
    }
    if p.tract_blocks == 0 || p.population_range.0 > p.population_range.1 {
        return Err(Error::InvalidInput("invalid tract parameters".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let id = |c: usize, r: usize| (r * p.cols + c) as u64;

    let mut intersections = Vec::with_capacity(cells);
    for r in 0..p.rows {
        for c in 0..p.cols {
            let jx = rng.gen_range(-p.jitter..=p.jitter) * p.block_meters;
            let jy = rng.gen_range(-p.jitter..=p.jitter) * p.block_meters;
            let x = quantize(c as f64 * p.block_meters + jx, 1);
            let y = quantize(r as f64 * p.block_meters + jy, 1);
            intersections.push((id(c, r), x, y));
        }
    }

    let mut streets = Vec::new();
    for r in 0..p.rows {
        for c in 0..p.cols {
            if c + 1 < p.cols {
                streets.push((id(c, r), id(c + 1, r)));
            }
            if r + 1 < p.rows {
                streets.push((id(c, r), id(c, r + 1)));
            }
        }
    }
    streets.shuffle(&mut rng);

    // Kruskal-style union-find picks the spanning tree in shuffled order.
    let mut parent: Vec<usize> = (0..cells).collect();
    fn root(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut segments = Vec::with_capacity(streets.len());
    for (a, b) in streets {
        let (ra, rb) = (root(&mut parent, a as usize), root(&mut parent, b as usize));
        let keep = if ra != rb {
            parent[ra] = rb;
            true
        } else {
            rng.gen::<f64>() >= p.missing_streets
        };
        if keep {
            let (_, ax, ay) = intersections[a as usize];
            let (_, bx, by) = intersections[b as usize];
            let meters = quantize(((ax - bx).powi(2) + (ay - by).powi(2)).sqrt(), 1);
            segments.push((a, b, meters));
        }
    }
    segments.sort_by_key(|s| (s.0, s.1));

    let tract_cols = p.cols.div_ceil(p.tract_blocks);
    let tract_rows = p.rows.div_ceil(p.tract_blocks);
    let population: Vec<f64> = (0..tract_cols * tract_rows)
        .map(|_| rng.gen_range(p.population_range.0..=p.population_range.1) as f64)
        .collect();

    let mut sites: Vec<u64> = (0..cells as u64).collect();
    sites.shuffle(&mut rng);
    let depot = sites[0];
    let targets = sites[1..=p.targets]
        .iter()
        .map(|&s| {
            let (c, r) = (s as usize % p.cols, s as usize / p.cols);
            let tract = (r / p.tract_blocks) * tract_cols + c / p.tract_blocks;
            (s, population[tract])
        })
        .collect();

    Ok(RoadNetwork { intersections, segments, targets, depot })
}
