use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use mwlp_core::graph::Graph;
use mwlp_core::harness::{save_report, solve, summarize, SolveReport, Solver};
use mwlp_core::instance::{
    draw_repair_minutes, generate_random_instance, load_instance, save_instance,
    storm_repair_table, zero_repair_table, InstanceParams,
};
use mwlp_core::metrics::restoration_curve;
use mwlp_core::optimizer::DEFAULT_ALPHA;
use mwlp_core::road::{load_road_network, metric_closure, synthetic_city, CityParams, RoadNetwork, CITY_SPEED_M_PER_MIN};
use mwlp_core::Error;

const EXIT_USAGE: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_SIZE_GUARD: u8 = 3;

/// Multi-crew weighted latency: generate instances, solve, benchmark.
#[derive(Debug, Parser)]
#[command(name = "mwlp", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a random instance file.
    Generate {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Solve one instance with one strategy.
    Solve {
        #[arg(long)]
        instance: PathBuf,
        /// GA, NNA, GRA, TSG, TSNN or EXACT.
        #[arg(long, default_value = "TSG")]
        strategy: Solver,
        #[arg(long, default_value_t = 20)]
        agents: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_ALPHA)]
        alpha: f64,
        /// Also write the report row as CSV.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Record wall-clock time in the CSV (otherwise 0).
        #[arg(long)]
        timing: bool,
    },
    /// Run every strategy on every instance and seed.
    Benchmark {
        /// Solve every `*.mwlp` file here instead of generating instances.
        #[arg(long)]
        instance_dir: Option<PathBuf>,
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long = "strategy", required = true)]
        strategies: Vec<Solver>,
        #[arg(long = "seed", required = true)]
        seeds: Vec<u64>,
        #[arg(long, default_value_t = DEFAULT_ALPHA)]
        alpha: f64,
        #[arg(long)]
        out: PathBuf,
        /// Record wall-clock time in the CSV (otherwise 0).
        #[arg(long)]
        timing: bool,
    },
    /// Solve, then write the population-unserved curve as CSV.
    Curve {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, default_value = "TSG")]
        strategy: Solver,
        #[arg(long, default_value_t = 20)]
        agents: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_ALPHA)]
        alpha: f64,
        #[arg(long)]
        out: PathBuf,
    },
}

/// How instances are built when they are not read from disk.
#[derive(Debug, Args)]
struct SourceArgs {
    #[arg(long, default_value_t = 201)]
    nodes: usize,
    #[arg(long, default_value_t = 20)]
    agents: usize,
    /// Repair times of zero; travel time alone drives the edge weights.
    #[arg(long)]
    zero_repair: bool,
    /// Use the shortest-path closure of a synthetic street grid at 25 mph.
    #[arg(long, conflicts_with = "road_network")]
    city: bool,
    /// Use the shortest-path closure of this road network file at 25 mph.
    #[arg(long)]
    road_network: Option<PathBuf>,
}

impl SourceArgs {
    fn build(&self, seed: u64) -> Result<Graph, Error> {
        let table = if self.zero_repair { zero_repair_table() } else { storm_repair_table() };
        let closure = |road: RoadNetwork| {
            let importances: Vec<f64> = road.targets.iter().map(|t| t.1).collect();
            let repairs = draw_repair_minutes(&table, &importances, 6, seed)?;
            metric_closure(&road, CITY_SPEED_M_PER_MIN, &repairs)
        };
        if let Some(path) = &self.road_network {
            return closure(load_road_network(path)?);
        }
        if self.nodes == 0 {
            return Err(Error::InvalidInput("--nodes must be at least 1".into()));
        }
        if self.city {
            return closure(synthetic_city(&CityParams {
                targets: self.nodes - 1,
                seed,
                ..CityParams::default()
            })?);
        }
        generate_random_instance(&InstanceParams {
            n: self.nodes,
            m: self.agents,
            repair_table: table,
            seed,
            ..InstanceParams::default()
        })
    }
}

fn print_report(r: &SolveReport) {
    println!("instance: {}", r.instance);
    println!("strategy: {}  seed: {}  agents: {}", r.solver, r.seed, r.assignment.m());
    println!("wlp_sum: {}", r.wlp_sum);
    println!("average_wait_hours: {}", r.average_wait_hours);
    println!("latency_range: {}", r.latency_range);
    println!("wall_ms: {:.3}", r.wall_ms);
    for (crew, path) in r.assignment.paths.iter().enumerate() {
        let nodes: Vec<String> = path.nodes().iter().map(|v| v.to_string()).collect();
        println!("crew {crew}: {}", nodes.join(" "));
    }
}

fn instance_label(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

fn instance_files(dir: &Path) -> Result<Vec<PathBuf>, Error> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "mwlp"))
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(Error::InvalidInput(format!("no .mwlp files in {}", dir.display())));
    }
    Ok(files)
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Generate { source, seed, out } => {
            let g = source.build(seed)?;
            save_instance(&g, &out)?;
            println!(
                "wrote {}: n={} m={} depot={} total_importance={} targets={}",
                out.display(),
                g.n(),
                source.agents,
                g.depot(),
                g.total_importance(),
                g.n() - 1
            );
        }
        Command::Solve { instance, strategy, agents, seed, alpha, out, timing } => {
            let g = load_instance(&instance)?;
            let mut report = solve(&g, &instance_label(&instance), agents, strategy, seed, alpha)?;
            print_report(&report);
            if let Some(out) = out {
                if !timing {
                    report.wall_ms = 0.0;
                }
                save_report(&[report], out)?;
            }
        }
        Command::Benchmark { instance_dir, source, strategies, seeds, alpha, out, timing } => {
            let m = source.agents;
            // (label, graph, solver seeds)
            let instances: Vec<(String, Graph, Vec<u64>)> = match &instance_dir {
                Some(dir) => instance_files(dir)?
                    .into_iter()
                    .map(|p| Ok((instance_label(&p), load_instance(&p)?, seeds.clone())))
                    .collect::<Result<_, Error>>()?,
                None => seeds
                    .iter()
                    .map(|&s| Ok((format!("seed{s}"), source.build(s)?, vec![s])))
                    .collect::<Result<_, Error>>()?,
            };
            let mut reports = Vec::new();
            for (label, g, solver_seeds) in &instances {
                for &seed in solver_seeds {
                    for &solver in &strategies {
                        let mut r = solve(g, label, m, solver, seed, alpha)?;
                        if !timing {
                            r.wall_ms = 0.0;
                        }
                        reports.push(r);
                    }
                }
            }
            save_report(&reports, &out)?;
            println!("wrote {} rows to {}", reports.len(), out.display());
            for line in summarize(&reports) {
                println!("{line}");
            }
        }
        Command::Curve { instance, strategy, agents, seed, alpha, out } => {
            let g = load_instance(&instance)?;
            let report = solve(&g, &instance_label(&instance), agents, strategy, seed, alpha)?;
            let curve = restoration_curve(&g, &report.assignment);
            let mut buf = Vec::new();
            curve.write_csv(&mut buf)?;
            fs::write(&out, buf)?;
            println!(
                "wrote {} points to {} (final time {} min)",
                curve.points.len(),
                out.display(),
                curve.final_time()
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::SizeGuard { .. } => EXIT_SIZE_GUARD,
                Error::InvalidInput(_) => EXIT_USAGE,
                _ => EXIT_INPUT,
            })
        }
    }
}
