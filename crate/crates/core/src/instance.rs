//! Random instance generation and the plain-text instance format.
//!
//! Generated values are rounded to a fixed number of decimals (six by
//! default) so that saving and loading an instance is lossless. Random draws
//! come from `ChaCha8Rng`, whose stream is identical on every platform.

use std::fmt::Write as _;
use std::fs;
use std::path::Path as FsPath;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{validate_graph, Graph};

/// Repair time range, in hours, for importances in `[min_importance, max_importance)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RepairBand {
    pub min_importance: f64,
    /// `None` means unbounded.
    pub max_importance: Option<f64>,
    pub hours: (f64, f64),
}

/// Repair-time table for storm outages, read as half-open importance bands.
pub fn storm_repair_table() -> Vec<RepairBand> {
    vec![
        RepairBand { min_importance: 0.0, max_importance: Some(10.0), hours: (2.0, 4.0) },
        RepairBand { min_importance: 10.0, max_importance: Some(100.0), hours: (2.0, 6.0) },
        RepairBand { min_importance: 100.0, max_importance: Some(1000.0), hours: (3.0, 8.0) },
        RepairBand { min_importance: 1000.0, max_importance: None, hours: (5.0, 10.0) },
    ]
}

pub fn zero_repair_table() -> Vec<RepairBand> {
    vec![RepairBand { min_importance: 0.0, max_importance: None, hours: (0.0, 0.0) }]
}

/// Band containing `importance`, if any.
pub fn repair_band(table: &[RepairBand], importance: f64) -> Option<&RepairBand> {
    table.iter().find(|b| {
        importance >= b.min_importance && b.max_importance.map_or(true, |hi| importance < hi)
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct InstanceParams {
    /// Node count including the depot.
    pub n: usize,
    /// Crew count; not stored in the instance, carried for reporting.
    pub m: usize,
    /// Inclusive integer importance range.
    pub importance_range: (u32, u32),
    pub travel_range_minutes: (f64, f64),
    pub repair_table: Vec<RepairBand>,
    /// Decimal places kept in generated times.
    pub decimals: u32,
    pub seed: u64,
}

impl Default for InstanceParams {
    fn default() -> Self {
        InstanceParams {
            n: 201,
            m: 20,
            importance_range: (1, 1500),
            travel_range_minutes: (30.0, 60.0),
            repair_table: storm_repair_table(),
            decimals: 6,
            seed: 0,
        }
    }
}

impl InstanceParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidInput(msg));
        if self.n == 0 {
            return bad("need at least the depot node".into());
        }
        if self.m == 0 {
            return bad("need at least one crew".into());
        }
        let (lo, hi) = self.importance_range;
        if lo > hi {
            return bad(format!("empty importance range [{lo}, {hi}]"));
        }
        let (tlo, thi) = self.travel_range_minutes;
        if !(tlo >= 0.0 && tlo <= thi && thi.is_finite()) {
            return bad(format!("invalid travel range [{tlo}, {thi}]"));
        }
        if self.decimals > 6 {
            return bad("at most 6 decimals are representable in instance files".into());
        }
        let table = &self.repair_table;
        if table.first().map(|b| b.min_importance) != Some(0.0) {
            return bad("repair table must start at importance 0".into());
        }
        for pair in table.windows(2) {
            if pair[0].max_importance != Some(pair[1].min_importance) {
                return bad("repair table rows must be contiguous".into());
            }
        }
        if table.last().and_then(|b| b.max_importance).is_some() {
            return bad("last repair table row must be unbounded".into());
        }
        if table.iter().any(|b| !(b.hours.0 >= 0.0 && b.hours.0 <= b.hours.1)) {
            return bad("invalid repair hour range".into());
        }
        Ok(())
    }
}

/// Rounds to `decimals` places, the precision kept by the file format.
pub fn quantize(x: f64, decimals: u32) -> f64 {
    let scale = 10f64.powi(decimals as i32);
    (x * scale).round() / scale
}

fn uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    if lo == hi {
        lo
    } else {
        rng.gen_range(lo..=hi)
    }
}

/// Repair minutes for each importance, drawn from its band in `table`.
pub fn draw_repair_minutes(
    table: &[RepairBand],
    importances: &[f64],
    decimals: u32,
    seed: u64,
) -> Result<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    importances
        .iter()
        .map(|&w| {
            let band = repair_band(table, w).ok_or_else(|| {
                Error::InvalidInput(format!("no repair band covers importance {w}"))
            })?;
            Ok(quantize(uniform(&mut rng, band.hours.0, band.hours.1) * 60.0, decimals))
        })
        .collect()
}

/// Random complete graph: depot 0, integer importances, symmetric travel
/// times, destination repair times folded into incoming edges.
pub fn generate_random_instance(p: &InstanceParams) -> Result<Graph> {
    p.validate()?;
    let n = p.n;
    let q = |x: f64| quantize(x, p.decimals);
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);

    let mut importance = vec![0.0; n];
    for w in importance.iter_mut().skip(1) {
        *w = rng.gen_range(p.importance_range.0..=p.importance_range.1) as f64;
    }

    let mut travel = vec![vec![0.0; n]; n];
    let (tlo, thi) = p.travel_range_minutes;
    for u in 0..n {
        for v in u + 1..n {
            let t = q(uniform(&mut rng, tlo, thi));
            travel[u][v] = t;
            travel[v][u] = t;
        }
    }

    let mut repair = vec![0.0; n];
    for v in 1..n {
        let band = repair_band(&p.repair_table, importance[v])
            .expect("validated table covers every nonnegative importance");
        repair[v] = q(uniform(&mut rng, band.hours.0, band.hours.1) * 60.0);
    }

    let matrix = (0..n)
        .map(|u| {
            (0..n)
                .map(|v| if u == v { 0.0 } else { q(travel[u][v] + repair[v]) })
                .collect()
        })
        .collect();
    Graph::with_repair(0, importance, repair, matrix)
}

fn fmt_num(x: f64) -> String {
    let s = format!("{x:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

/// Serializes to the versioned text format. Values are written with at most
/// six decimals.
pub fn instance_to_string(g: &Graph) -> String {
    let n = g.n();
    let mut out = String::with_capacity(32 * n * n);
    out.push_str("mwlp 1\n");
    let _ = writeln!(out, "n {n} depot {}", g.depot());
    for v in 0..n {
        let _ = writeln!(out, "node {v} {} {}", fmt_num(g.importance(v)), fmt_num(g.repair(v)));
    }
    for u in 0..n {
        for v in (0..n).filter(|&v| v != u) {
            let _ = writeln!(out, "edge {u} {v} {}", fmt_num(g.weight(u, v)));
        }
    }
    out
}

pub fn save_instance(g: &Graph, path: impl AsRef<FsPath>) -> Result<()> {
    fs::write(path, instance_to_string(g))?;
    Ok(())
}

pub fn load_instance(path: impl AsRef<FsPath>) -> Result<Graph> {
    parse_instance(&fs::read_to_string(path)?)
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    /// Next non-blank line, split into whitespace tokens.
    fn next(&mut self, expect: &str) -> Result<(usize, Vec<&'a str>)> {
        for (idx, line) in self.inner.by_ref() {
            self.last = idx + 1;
            let tokens: Vec<&str> = line.split_whitespace().collect();
            if !tokens.is_empty() {
                return Ok((idx + 1, tokens));
            }
        }
        Err(Error::parse(self.last + 1, format!("unexpected end of file, expected {expect}")))
    }
}

fn field<T: std::str::FromStr>(line: usize, tokens: &[&str], idx: usize, name: &str) -> Result<T> {
    let raw = tokens
        .get(idx)
        .ok_or_else(|| Error::parse(line, format!("missing field '{name}'")))?;
    raw.parse()
        .map_err(|_| Error::parse(line, format!("invalid {name} '{raw}'")))
}

fn keyword(line: usize, tokens: &[&str], word: &str, arity: usize) -> Result<()> {
    if tokens[0] != word {
        return Err(Error::parse(line, format!("expected '{word}', found '{}'", tokens[0])));
    }
    if tokens.len() != arity {
        return Err(Error::parse(
            line,
            format!("'{word}' takes {} fields, found {}", arity - 1, tokens.len() - 1),
        ));
    }
    Ok(())
}

pub fn parse_instance(text: &str) -> Result<Graph> {
    let mut lines = Lines { inner: text.lines().enumerate(), last: 0 };

    let (ln, t) = lines.next("header")?;
    keyword(ln, &t, "mwlp", 2)?;
    let version: u32 = field(ln, &t, 1, "version")?;
    if version != 1 {
        return Err(Error::parse(ln, format!("unsupported version {version}")));
    }

    let (ln, t) = lines.next("size line")?;
    keyword(ln, &t, "n", 4)?;
    let n: usize = field(ln, &t, 1, "n")?;
    if t[2] != "depot" {
        return Err(Error::parse(ln, format!("expected 'depot', found '{}'", t[2])));
    }
    let depot: usize = field(ln, &t, 3, "depot")?;
    if n == 0 || depot >= n {
        return Err(Error::parse(ln, format!("depot {depot} out of range for n = {n}")));
    }

    let mut importance = vec![f64::NAN; n];
    let mut repair = vec![f64::NAN; n];
    for _ in 0..n {
        let (ln, t) = lines.next("node line")?;
        keyword(ln, &t, "node", 4)?;
        let v: usize = field(ln, &t, 1, "node index")?;
        if v >= n || !importance[v].is_nan() {
            return Err(Error::parse(ln, format!("bad or duplicate node index {v}")));
        }
        importance[v] = field(ln, &t, 2, "importance")?;
        repair[v] = field(ln, &t, 3, "repair_minutes")?;
    }

    let mut matrix = vec![vec![f64::NAN; n]; n];
    for (v, row) in matrix.iter_mut().enumerate() {
        row[v] = 0.0;
    }
    for _ in 0..n * (n - 1) {
        let (ln, t) = lines.next("edge line")?;
        keyword(ln, &t, "edge", 4)?;
        let u: usize = field(ln, &t, 1, "edge source")?;
        let v: usize = field(ln, &t, 2, "edge target")?;
        if u >= n || v >= n || u == v || !matrix[u][v].is_nan() {
            return Err(Error::parse(ln, format!("bad or duplicate edge {u} -> {v}")));
        }
        matrix[u][v] = field(ln, &t, 3, "edge weight")?;
    }
    if let Ok((ln, t)) = lines.next("end of file") {
        return Err(Error::parse(ln, format!("trailing content starting with '{}'", t[0])));
    }

    let g = Graph::with_repair(depot, importance, repair, matrix)?;
    validate_graph(&g).map_err(|v| Error::parse(0, format!("invalid instance: {v}")))?;
    Ok(g)
}
