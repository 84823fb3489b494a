//! Strategy dispatch, run reports and summary statistics.

use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

use crate::baselines::{
    greedy_assignment, greedy_random_assignment, nearest_neighbor_assignment, StrategyId,
};
use crate::error::{Error, Result};
use crate::exact::exact_multi_mwlp;
use crate::graph::{Assignment, Graph};
use crate::heuristics::Heuristic;
use crate::metrics::{average_wait, latency_range, wlp_sum};
use crate::optimizer::{optimize, OptimizerConfig};

/// Anything `solve` can run: the five compared strategies or the exact oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Solver {
    Strategy(StrategyId),
    Exact,
}

impl fmt::Display for Solver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Solver::Strategy(id) => id.fmt(f),
            Solver::Exact => f.write_str("EXACT"),
        }
    }
}

impl FromStr for Solver {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("exact") {
            Ok(Solver::Exact)
        } else {
            s.parse().map(Solver::Strategy)
        }
    }
}

/// Runs one solver. `seed` drives GRA and the optimizer's starting partition.
pub fn run_solver(g: &Graph, m: usize, solver: Solver, seed: u64, alpha: f64) -> Result<Assignment> {
    if m == 0 {
        return Err(Error::InvalidInput("need at least one crew".into()));
    }
    let optimized = |h| optimize(g, m, &OptimizerConfig::new(h, seed).with_alpha(alpha));
    match solver {
        Solver::Strategy(StrategyId::Ga) => Ok(greedy_assignment(g, m)),
        Solver::Strategy(StrategyId::Nna) => Ok(nearest_neighbor_assignment(g, m)),
        Solver::Strategy(StrategyId::Gra) => Ok(greedy_random_assignment(g, m, seed)),
        Solver::Strategy(StrategyId::Tsg) => optimized(Heuristic::Greedy),
        Solver::Strategy(StrategyId::Tsnn) => optimized(Heuristic::NearestNeighbor),
        Solver::Exact => exact_multi_mwlp(g, m).map(|r| r.assignment),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub instance: String,
    pub seed: u64,
    pub solver: Solver,
    pub assignment: Assignment,
    pub wlp_sum: f64,
    pub average_wait_hours: f64,
    pub latency_range: f64,
    pub wall_ms: f64,
}

/// Solves and measures. All reported costs are recomputed from the returned
/// assignment.
pub fn solve(
    g: &Graph,
    instance: &str,
    m: usize,
    solver: Solver,
    seed: u64,
    alpha: f64,
) -> Result<SolveReport> {
    let start = Instant::now();
    let assignment = run_solver(g, m, solver, seed, alpha)?;
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(SolveReport {
        instance: instance.to_string(),
        seed,
        solver,
        wlp_sum: wlp_sum(g, &assignment),
        average_wait_hours: average_wait(g, &assignment)?,
        latency_range: latency_range(g, &assignment),
        assignment,
        wall_ms,
    })
}

pub const REPORT_HEADER: &str = "instance,seed,strategy,wlp_sum,average_wait_hours,latency_range,wall_ms";

/// One CSV row per report, in the given order. Floats use the shortest text
/// that parses back to the same value.
pub fn write_report<W: Write>(reports: &[SolveReport], mut out: W) -> std::io::Result<()> {
    writeln!(out, "{REPORT_HEADER}")?;
    for r in reports {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.instance, r.seed, r.solver, r.wlp_sum, r.average_wait_hours, r.latency_range, r.wall_ms
        )?;
    }
    Ok(())
}

pub fn save_report(reports: &[SolveReport], path: impl AsRef<std::path::Path>) -> Result<()> {
    let mut buf = Vec::new();
    write_report(reports, &mut buf)?;
    std::fs::write(path, buf)?;
    Ok(())
}

/// A parsed report row (the assignment itself is not stored in the CSV).
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub instance: String,
    pub seed: u64,
    pub solver: Solver,
    pub wlp_sum: f64,
    pub average_wait_hours: f64,
    pub latency_range: f64,
    pub wall_ms: f64,
}

pub fn parse_report(text: &str) -> Result<Vec<ReportRow>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h == REPORT_HEADER => {}
        _ => return Err(Error::parse(1, "missing report header")),
    }
    lines
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(idx, line)| {
            let ln = idx + 1;
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 7 {
                return Err(Error::parse(ln, format!("expected 7 columns, found {}", f.len())));
            }
            let num = |i: usize| -> Result<f64> {
                f[i].parse().map_err(|_| Error::parse(ln, format!("invalid number '{}'", f[i])))
            };
            Ok(ReportRow {
                instance: f[0].to_string(),
                seed: f[1].parse().map_err(|_| Error::parse(ln, "invalid seed"))?,
                solver: f[2].parse().map_err(|e: Error| Error::parse(ln, e.to_string()))?,
                wlp_sum: num(3)?,
                average_wait_hours: num(4)?,
                latency_range: num(5)?,
                wall_ms: num(6)?,
            })
        })
        .collect()
}

/// Linear-interpolation quantile of sorted data (`q` in `[0, 1]`).
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    assert!(!sorted.is_empty(), "quantile of empty data");
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoxStats {
    pub median: f64,
    pub q1: f64,
    pub q3: f64,
}

impl BoxStats {
    pub fn of(values: &[f64]) -> Self {
        let mut v = values.to_vec();
        v.sort_by(f64::total_cmp);
        BoxStats {
            median: quantile(&v, 0.5),
            q1: quantile(&v, 0.25),
            q3: quantile(&v, 0.75),
        }
    }

    pub fn iqr(&self) -> f64 {
        self.q3 - self.q1
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StrategySummary {
    pub solver: Solver,
    pub runs: usize,
    pub wait_hours: BoxStats,
    pub range: BoxStats,
}

impl fmt::Display for StrategySummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "summary {} runs={} wait_median_h={:.4} wait_iqr_h={:.4} range_median={:.1} range_iqr={:.1}",
            self.solver,
            self.runs,
            self.wait_hours.median,
            self.wait_hours.iqr(),
            self.range.median,
            self.range.iqr()
        )
    }
}

/// Per-solver box statistics, in order of first appearance.
pub fn summarize(reports: &[SolveReport]) -> Vec<StrategySummary> {
    let mut order: Vec<Solver> = Vec::new();
    for r in reports {
        if !order.contains(&r.solver) {
            order.push(r.solver);
        }
    }
    order
        .into_iter()
        .map(|solver| {
            let rows: Vec<&SolveReport> = reports.iter().filter(|r| r.solver == solver).collect();
            let waits: Vec<f64> = rows.iter().map(|r| r.average_wait_hours).collect();
            let ranges: Vec<f64> = rows.iter().map(|r| r.latency_range).collect();
            StrategySummary {
                solver,
                runs: rows.len(),
                wait_hours: BoxStats::of(&waits),
                range: BoxStats::of(&ranges),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::reference_graph;

    #[test]
    fn solver_names() {
        assert_eq!("exact".parse::<Solver>().unwrap(), Solver::Exact);
        assert_eq!("TSG".parse::<Solver>().unwrap(), Solver::Strategy(StrategyId::Tsg));
        assert!("nope".parse::<Solver>().is_err());
        assert_eq!(Solver::Strategy(StrategyId::Gra).to_string(), "GRA");
    }

    #[test]
    fn reference_solves() {
        let g = reference_graph();
        let exact = solve(&g, "ref", 2, Solver::Exact, 0, 0.13).unwrap();
        assert_eq!(exact.wlp_sum, 18.0);
        let ga = solve(&g, "ref", 2, Solver::Strategy(StrategyId::Ga), 0, 0.13).unwrap();
        assert_eq!(ga.wlp_sum, 23.0);
        assert_eq!(ga.latency_range, 17.0);
        for seed in 0..10 {
            let tsg = solve(&g, "ref", 2, Solver::Strategy(StrategyId::Tsg), seed, 0.13).unwrap();
            assert!(tsg.wlp_sum == 18.0 || tsg.wlp_sum == 23.0, "{}", tsg.wlp_sum);
        }
    }

    #[test]
    fn quartiles_by_hand() {
        // sorted 1 2 4 7 11: positions 1 and 3 for the quartiles
        let s = BoxStats::of(&[7.0, 1.0, 11.0, 2.0, 4.0]);
        assert_eq!(s.median, 4.0);
        assert_eq!(s.q1, 2.0);
        assert_eq!(s.q3, 7.0);
        assert_eq!(s.iqr(), 5.0);
        // even count interpolates: 1 2 3 4 -> q1 at 0.75, median at 1.5
        let s = BoxStats::of(&[4.0, 3.0, 2.0, 1.0]);
        assert_eq!(s.median, 2.5);
        assert_eq!(s.q1, 1.75);
        assert_eq!(s.q3, 3.25);
    }

    #[test]
    fn report_csv_round_trip() {
        let g = reference_graph();
        let mut reports = Vec::new();
        for seed in 0..3 {
            for solver in [Solver::Strategy(StrategyId::Ga), Solver::Strategy(StrategyId::Tsg)] {
                let mut r = solve(&g, "ref", 2, solver, seed, 0.13).unwrap();
                r.wall_ms = 0.1 * seed as f64 + 1.0 / 3.0;
                reports.push(r);
            }
        }
        let mut buf = Vec::new();
        write_report(&reports, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 7);
        let rows = parse_report(&text).unwrap();
        assert_eq!(rows.len(), 6);
        for (row, r) in rows.iter().zip(&reports) {
            assert_eq!(row.solver, r.solver);
            assert_eq!(row.seed, r.seed);
            assert!((row.wlp_sum - r.wlp_sum).abs() <= 1e-9);
            assert!((row.average_wait_hours - r.average_wait_hours).abs() <= 1e-9);
            assert!((row.latency_range - r.latency_range).abs() <= 1e-9);
            assert!((row.wall_ms - r.wall_ms).abs() <= 1e-9);
        }

        let mut empty = Vec::new();
        write_report(&[], &mut empty).unwrap();
        assert_eq!(String::from_utf8(empty).unwrap(), format!("{REPORT_HEADER}\n"));
    }

    #[test]
    fn summary_per_strategy() {
        let g = reference_graph();
        let reports: Vec<SolveReport> = (0..5)
            .flat_map(|seed| {
                [StrategyId::Ga, StrategyId::Tsg].map(|id| {
                    solve(&g, "ref", 2, Solver::Strategy(id), seed, 0.13).unwrap()
                })
            })
            .collect();
        let summary = summarize(&reports);
        assert_eq!(summary.len(), 2);
        assert_eq!(summary[0].solver, Solver::Strategy(StrategyId::Ga));
        assert_eq!(summary[0].runs, 5);
        assert_eq!(summary[0].range.median, 17.0);
    }
}
