//! Acceptance criteria. Each test prints one `PASS`/`FAIL` line; run with
//! `cargo test -p mwlp-cli --test acceptance -- --nocapture` to see them.

use std::path::Path;
use std::process::Command;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use mwlp_core::baselines::{greedy_assignment, greedy_random_assignment, nearest_neighbor_assignment};
use mwlp_core::exact::exact_multi_mwlp;
use mwlp_core::graph::{reference_graph, validate_partition, Assignment, Graph, Partition, Path as Route};
use mwlp_core::harness::{run_solver, solve, BoxStats, SolveReport, Solver};
use mwlp_core::heuristics::{heuristic_path, node_contribution, Heuristic};
use mwlp_core::instance::{generate_random_instance, zero_repair_table, InstanceParams};
use mwlp_core::metrics::{average_wait, latency_range, makespan, path_wlp, restoration_curve, wlp_sum};
use mwlp_core::optimizer::{optimize, optimize_observed, Move, Observer, OptimizerConfig, DEFAULT_ALPHA};
use mwlp_core::road::{metric_closure, synthetic_city, CityParams, CITY_SPEED_M_PER_MIN};
use mwlp_core::StrategyId;

fn verdict(criterion: u32, title: &str, pass: bool, detail: &str) {
    println!(
        "criterion {criterion} [{}] {title}: {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {criterion} failed: {detail}");
}

fn micro_instance(n: usize, seed: u64) -> Graph {
    generate_random_instance(&InstanceParams {
        n,
        importance_range: (1, 15),
        travel_range_minutes: (1.0, 6.0),
        repair_table: zero_repair_table(),
        decimals: 0,
        seed,
        ..InstanceParams::default()
    })
    .unwrap()
}

#[test]
fn criterion_1_oracle_dominance() {
    let start = Instant::now();
    let mut instances = 0;
    let mut violations = Vec::new();
    for seed in 0..240u64 {
        let n = 4 + (seed % 4) as usize;
        let m = 1 + (seed / 4 % 3) as usize;
        let g = micro_instance(n, 1000 + seed);
        let opt = exact_multi_mwlp(&g, m).unwrap().wlp_sum;
        for id in StrategyId::ALL {
            let a = run_solver(&g, m, Solver::Strategy(id), seed, DEFAULT_ALPHA).unwrap();
            let cost = wlp_sum(&g, &a);
            // integer data: every sum is exact in f64
            if cost < opt {
                violations.push(format!("{id} seed {seed}: {cost} < {opt}"));
            }
        }
        instances += 1;
    }
    let elapsed = start.elapsed();
    verdict(
        1,
        "oracle dominance",
        instances >= 200 && violations.is_empty() && elapsed < Duration::from_secs(60),
        &format!(
            "{instances} instances x 5 strategies, {} violations {:?}, {:.2}s",
            violations.len(),
            violations.first(),
            elapsed.as_secs_f64()
        ),
    );
}

#[test]
fn criterion_2_worked_example() {
    let g = reference_graph();
    let split = Assignment::from_lists(vec![vec![0, 1], vec![0, 2]]);
    let checks = [
        ("wlp [0,1,2]", path_wlp(&g, &Route(vec![0, 1, 2])), 18.0),
        ("wlp [0,2,1]", path_wlp(&g, &Route(vec![0, 2, 1])), 41.0),
        ("wlp_sum split", wlp_sum(&g, &split), 23.0),
        ("range split", latency_range(&g, &split), 17.0),
        ("exact m=2", exact_multi_mwlp(&g, 2).unwrap().wlp_sum, 18.0),
    ];
    let mut ok = checks.iter().all(|(_, got, want)| got == want);
    let c2 = node_contribution(&g, &[0, 1, 2], 2, Heuristic::Greedy);
    let c1 = node_contribution(&g, &[0, 1, 2], 1, Heuristic::Greedy);
    ok &= (c2 - 38.0 / 41.0).abs() <= 1e-9 && (c2 - 0.9268).abs() < 5e-5;
    ok &= (c1 - 21.0 / 41.0).abs() <= 1e-9 && (c1 - 0.5122).abs() < 5e-5;
    verdict(
        2,
        "worked example",
        ok,
        &format!("{checks:?}, contributions {c2:.6} / {c1:.6}"),
    );
}

#[derive(Default)]
struct Monitor {
    graph: Option<Graph>,
    partitions: usize,
    invalid: usize,
    moves: usize,
    bad_moves: usize,
    accepted: Vec<f64>,
}

impl Observer for Monitor {
    fn partition(&mut self, p: &Partition) {
        self.partitions += 1;
        if validate_partition(self.graph.as_ref().unwrap(), p).is_err() {
            self.invalid += 1;
        }
    }

    fn applied(&mut self, _mv: &Move, before: f64, after: f64) {
        self.moves += 1;
        if !(after < before) {
            self.bad_moves += 1;
        }
    }

    fn accepted(&mut self, cost: f64) {
        self.accepted.push(cost);
    }
}

#[test]
fn criterion_3_monotonicity() {
    let (mut runs, mut moves, mut partitions, mut violations) = (0, 0, 0, 0);
    for seed in 0..50u64 {
        let g = generate_random_instance(&InstanceParams { n: 40, m: 4, seed, ..InstanceParams::default() })
            .unwrap();
        for h in [Heuristic::Greedy, Heuristic::NearestNeighbor] {
            let mut mon = Monitor { graph: Some(g.clone()), ..Monitor::default() };
            let a = optimize_observed(&g, 4, &OptimizerConfig::new(h, seed), &mut mon).unwrap();
            runs += 1;
            moves += mon.moves;
            partitions += mon.partitions;
            violations += mon.invalid + mon.bad_moves;
            if !mon.accepted.windows(2).all(|w| w[1] < w[0]) {
                violations += 1;
            }
            if mon.accepted.last() != Some(&wlp_sum(&g, &a)) {
                violations += 1;
            }
        }
    }
    verdict(
        3,
        "monotone search",
        violations == 0 && moves > 0,
        &format!("{runs} runs, {moves} moves, {partitions} partitions checked, {violations} violations"),
    );
}

struct FullScale {
    reports: Vec<SolveReport>,
    slowest_ts: f64,
}

fn full_scale() -> &'static FullScale {
    static CELL: OnceLock<FullScale> = OnceLock::new();
    CELL.get_or_init(|| {
        let mut reports = Vec::new();
        let mut slowest_ts: f64 = 0.0;
        for seed in 0..25u64 {
            let g = generate_random_instance(&InstanceParams { seed, ..InstanceParams::default() }).unwrap();
            for id in StrategyId::ALL {
                let r = solve(&g, &format!("seed{seed}"), 20, Solver::Strategy(id), seed, DEFAULT_ALPHA)
                    .unwrap();
                if matches!(id, StrategyId::Tsg | StrategyId::Tsnn) {
                    slowest_ts = slowest_ts.max(r.wall_ms);
                }
                reports.push(r);
            }
        }
        FullScale { reports, slowest_ts }
    })
}

fn medians(metric: impl Fn(&SolveReport) -> f64) -> Vec<(StrategyId, f64)> {
    StrategyId::ALL
        .into_iter()
        .map(|id| {
            let values: Vec<f64> = full_scale()
                .reports
                .iter()
                .filter(|r| r.solver == Solver::Strategy(id))
                .map(&metric)
                .collect();
            assert_eq!(values.len(), 25);
            (id, BoxStats::of(&values).median)
        })
        .collect()
}

fn lookup(table: &[(StrategyId, f64)], id: StrategyId) -> f64 {
    table.iter().find(|(s, _)| *s == id).unwrap().1
}

#[test]
fn criterion_4_average_wait_ordering() {
    let waits = medians(|r| r.average_wait_hours);
    let tsg = lookup(&waits, StrategyId::Tsg);
    let ok = tsg < lookup(&waits, StrategyId::Ga)
        && lookup(&waits, StrategyId::Tsnn) < lookup(&waits, StrategyId::Nna)
        && waits.iter().all(|&(id, w)| id == StrategyId::Tsg || tsg < w);
    let slowest = full_scale().slowest_ts;
    verdict(
        4,
        "median wait ordering",
        ok && slowest < 600_000.0,
        &format!("median wait hours {waits:?}; slowest optimizer run {slowest:.0} ms"),
    );
}

#[test]
fn criterion_5_range_ordering() {
    let ranges = medians(|r| r.latency_range);
    let baseline_min = [StrategyId::Ga, StrategyId::Nna, StrategyId::Gra]
        .into_iter()
        .map(|id| lookup(&ranges, id))
        .fold(f64::INFINITY, f64::min);
    let ok = lookup(&ranges, StrategyId::Tsg) < baseline_min
        && lookup(&ranges, StrategyId::Tsnn) < baseline_min;
    verdict(5, "median range ordering", ok, &format!("median ranges {ranges:?}"));
}

#[test]
fn criterion_6_city_restoration() {
    let (mut quicker, mut ahead_at_median) = (0, 0);
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    let mut details = Vec::new();
    for seed in 0..10u64 {
        let road = synthetic_city(&CityParams { seed, ..CityParams::default() }).unwrap();
        let g = metric_closure(&road, CITY_SPEED_M_PER_MIN, &vec![0.0; road.targets.len()]).unwrap();
        for u in 0..g.n() {
            for v in (0..g.n()).filter(|&v| v != u) {
                lo = lo.min(g.weight(u, v));
                hi = hi.max(g.weight(u, v));
            }
        }
        let ga = greedy_assignment(&g, 20);
        let tsg = optimize(&g, 20, &OptimizerConfig::new(Heuristic::Greedy, seed)).unwrap();
        let (span_ga, span_tsg) = (makespan(&g, &ga), makespan(&g, &tsg));
        if span_tsg < span_ga {
            quicker += 1;
        }
        // median completion time of the targets under GA
        let mut times: Vec<f64> = Vec::new();
        for p in &ga.paths {
            let mut clock = 0.0;
            for w in p.nodes().windows(2) {
                clock += g.weight(w[0], w[1]);
                times.push(clock);
            }
        }
        times.sort_by(f64::total_cmp);
        let t_med = BoxStats::of(&times).median;
        let (u_ga, u_tsg) = (
            restoration_curve(&g, &ga).unserved_at(t_med),
            restoration_curve(&g, &tsg).unserved_at(t_med),
        );
        if u_tsg <= u_ga {
            ahead_at_median += 1;
        }
        details.push(format!("{:.0}%", 100.0 * (1.0 - span_tsg / span_ga)));
    }
    let scale_ok = lo >= 0.1 && hi <= 45.0;
    verdict(
        6,
        "city restoration",
        quicker >= 8 && ahead_at_median >= 8 && scale_ok,
        &format!(
            "TSG finishes first in {quicker}/10 (time saved {details:?}), ahead at GA median time in {ahead_at_median}/10, trip times {lo:.2}-{hi:.1} min"
        ),
    );
}

fn mwlp(args: &[&str], dir: &Path) -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_mwlp"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("run mwlp");
    assert!(out.status.success(), "mwlp {args:?}: {}", String::from_utf8_lossy(&out.stderr));
    out.stdout
}

#[test]
fn criterion_7_cli_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let commands: Vec<(Vec<&str>, &str)> = vec![
        (vec!["generate", "--nodes", "60", "--agents", "6", "--seed", "4", "--out", "OUT"], "inst"),
        (vec!["generate", "--city", "--zero-repair", "--nodes", "40", "--seed", "2", "--out", "OUT"], "city"),
        (vec!["solve", "--instance", "inst1", "--agents", "6", "--strategy", "TSG", "--seed", "3", "--out", "OUT"], "solve"),
        (vec!["solve", "--instance", "inst1", "--agents", "6", "--strategy", "GRA", "--seed", "3", "--out", "OUT"], "gra"),
        (
            vec![
                "benchmark", "--nodes", "30", "--agents", "4", "--strategy", "GA", "--strategy", "TSNN",
                "--strategy", "GRA", "--seed", "1", "--seed", "2", "--out", "OUT",
            ],
            "bench",
        ),
        (vec!["curve", "--instance", "city1", "--agents", "5", "--strategy", "TSG", "--seed", "1", "--out", "OUT"], "curve"),
    ];
    let mut identical = 0;
    let mut mismatched = Vec::new();
    for (args, name) in &commands {
        let mut files = Vec::new();
        for round in 1..=2 {
            let target = format!("{name}{round}");
            let argv: Vec<&str> = args.iter().map(|a| if *a == "OUT" { target.as_str() } else { a }).collect();
            mwlp(&argv, d);
            files.push(std::fs::read(d.join(&target)).unwrap());
        }
        if files[0] == files[1] && !files[0].is_empty() {
            identical += 1;
        } else {
            mismatched.push(*name);
        }
    }
    verdict(
        7,
        "byte-identical reruns",
        mismatched.is_empty(),
        &format!("{identical}/{} commands identical, mismatched {mismatched:?}", commands.len()),
    );
}

#[test]
fn criterion_8_consistency_identities() {
    let mut wait_failures = 0;
    let mut route_failures = 0;
    for seed in 0..100u64 {
        let g = generate_random_instance(&InstanceParams { n: 41, seed, ..InstanceParams::default() }).unwrap();
        let total = g.total_importance();
        for a in [
            greedy_assignment(&g, 5),
            nearest_neighbor_assignment(&g, 5),
            greedy_random_assignment(&g, 5, seed),
        ] {
            let sum = wlp_sum(&g, &a);
            let back = average_wait(&g, &a).unwrap() * 60.0 * total;
            if (back - sum).abs() > 1e-9 * sum {
                wait_failures += 1;
            }
        }
        let all: Vec<usize> = (0..g.n()).collect();
        if greedy_assignment(&g, 1).paths[0] != heuristic_path(&g, &all, Heuristic::Greedy) {
            route_failures += 1;
        }
        if nearest_neighbor_assignment(&g, 1).paths[0] != heuristic_path(&g, &all, Heuristic::NearestNeighbor) {
            route_failures += 1;
        }
    }
    verdict(
        8,
        "consistency identities",
        wait_failures == 0 && route_failures == 0,
        &format!("100 instances: {wait_failures} wait-identity failures, {route_failures} single-crew route mismatches"),
    );
}
