//! Command-line front end for the minfill solver.
//!
//! Subcommands: `solve` (one JSON instance), `examples` (built-in reference
//! results), `campaign` (seeded randomized verification) and `enumerate`
//! (binary topology counts). All results go to stdout as deterministic JSON
//! or fixed-format tables; timing and diagnostics go to stderr. Exit codes:
//! 0 success, 1 failed checks, 2 parse/validation errors, 3 size limit.

use clap::{Parser, Subcommand};
use minfill::denegativize::remove_negative_edges;
use minfill::harness::{reference_checks, run_campaign, CampaignConfig, CampaignError, Check};
use minfill::metric::{PseudometricSpace, SpaceClassKind};
use minfill::rational::format_rational;
use minfill::solver::{self, SolverConfig, SolverError};
use minfill::topology::enumerate_binary_trees;
use serde_json::{json, Value};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "minfill", version, about = "Exact minimal fillings of finite pseudometric spaces")]
struct Cli {
    /// Worker threads for parallel solves.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance file and print the report as JSON.
    Solve {
        /// Instance file: {"labels": [...], "dist": [[...], ...]}.
        file: PathBuf,
        /// Rewire the generalized optimum to non-negative weights and
        /// include the witness plus its step trace.
        #[arg(long)]
        denegativize: bool,
        /// Include the per-topology value table.
        #[arg(long)]
        per_topology: bool,
    },
    /// Reproduce the built-in reference results and print a pass/fail table.
    Examples {
        /// Corrupt one embedded distance to exercise the failure path.
        #[arg(long, hide = true)]
        corrupt: bool,
    },
    /// Run a seeded randomized verification campaign.
    Campaign {
        /// Boundary sizes, comma separated (e.g. 3,4,5).
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        /// Instances per size.
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Instance class: metric | violating.
        #[arg(long, default_value = "metric")]
        class: String,
        /// Subset of checks, comma separated:
        /// theorem,tour_bound,lemma5,lemma6,denegativize,positivity.
        #[arg(long, value_delimiter = ',')]
        checks: Option<Vec<String>>,
    },
    /// Count binary tree topologies on n labelled points.
    Enumerate {
        #[arg(long)]
        n: usize,
        /// Also print every topology.
        #[arg(long)]
        list: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("error: cannot configure {jobs} worker threads: {e}");
            return ExitCode::from(2);
        }
    }
    let code = match cli.command {
        Command::Solve { file, denegativize, per_topology } => {
            cmd_solve(&file, denegativize, per_topology)
        }
        Command::Examples { corrupt } => cmd_examples(corrupt),
        Command::Campaign { sizes, count, seed, class, checks } => {
            cmd_campaign(sizes, count, seed, &class, checks)
        }
        Command::Enumerate { n, list } => cmd_enumerate(n, list),
    };
    ExitCode::from(code)
}

fn cmd_solve(file: &PathBuf, denegativize: bool, per_topology: bool) -> u8 {
    let text = match std::fs::read_to_string(file) {
        Ok(text) => text,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", file.display());
            return 2;
        }
    };
    let space = match PseudometricSpace::parse(&text) {
        Ok(space) => space,
        Err(e) => {
            eprintln!("error: invalid instance: {e}");
            return 2;
        }
    };
    let config = SolverConfig::from_env();
    let report = match solver::mf(&space, &config) {
        Ok(report) => report,
        Err(SolverError::TooManyPoints { got, limit }) => {
            eprintln!(
                "error: {got} boundary points exceed the limit {limit} (set MINFILL_MAX_N to override)"
            );
            return 3;
        }
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let mut doc = report.to_json(per_topology);
    if denegativize {
        doc["denegativized"] = match remove_negative_edges(&report.optimal_generalized, &space) {
            Ok((witness, steps)) => json!({
                "weight": format_rational(&witness.total_weight()),
                "filling": witness.to_json().expect("solver fillings serialize"),
                "steps": steps.iter().map(|s| s.to_json()).collect::<Vec<_>>(),
            }),
            Err(e) => json!({ "error": e.to_string() }),
        };
    }
    println!("{doc}");
    0
}

fn cmd_examples(corrupt: bool) -> u8 {
    let checks = reference_checks(corrupt);
    let mut failed = false;
    for check in &checks {
        let status = if check.passed { "PASS" } else { "FAIL" };
        println!("{status} {:<20} {}", check.name, check.detail);
        failed |= !check.passed;
    }
    if failed {
        1
    } else {
        0
    }
}

fn cmd_campaign(
    sizes: Vec<usize>,
    count: usize,
    seed: u64,
    class: &str,
    checks: Option<Vec<String>>,
) -> u8 {
    let class_request = match class {
        "metric" => SpaceClassKind::NonDegenerateMetric,
        "violating" => SpaceClassKind::TriangleViolating,
        other => {
            eprintln!("error: unknown class `{other}` (expected metric or violating)");
            return 2;
        }
    };
    let selected = match checks {
        None => Check::ALL.to_vec(),
        Some(names) => {
            let mut list = Vec::new();
            for name in &names {
                match Check::from_name(name) {
                    Some(check) => {
                        if !list.contains(&check) {
                            list.push(check);
                        }
                    }
                    None => {
                        eprintln!("error: unknown check `{name}`");
                        return 2;
                    }
                }
            }
            list
        }
    };
    let mut config = CampaignConfig::new(sizes, count, seed);
    config.class_request = class_request;
    config.checks = selected;
    config.max_n = SolverConfig::from_env().max_n;
    match run_campaign(&config) {
        Ok(report) => {
            println!("{}", report.to_json());
            eprintln!(
                "campaign: {} instances, {} failures, {:.2}s",
                report.instances,
                report.failures.len(),
                report.elapsed.as_secs_f64()
            );
            if report.passed() {
                0
            } else {
                1
            }
        }
        Err(CampaignError::Solver(SolverError::TooManyPoints { got, limit })) => {
            eprintln!("error: {got} boundary points exceed the limit {limit}");
            3
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn cmd_enumerate(n: usize, list: bool) -> u8 {
    let config = SolverConfig::from_env();
    if n < 2 {
        eprintln!("error: need at least 2 boundary points");
        return 2;
    }
    if n > config.max_n {
        eprintln!(
            "error: {n} boundary points exceed the limit {} (set MINFILL_MAX_N to override)",
            config.max_n
        );
        return 3;
    }
    let labels: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
    let trees = enumerate_binary_trees(&labels).expect("n >= 2 checked");
    let mut doc = json!({ "n": n });
    if list {
        let topologies: Vec<Value> = trees
            .map(|t| t.to_json().expect("enumerated topologies serialize"))
            .collect();
        doc["count"] = json!(topologies.len());
        doc["topologies"] = Value::Array(topologies);
    } else {
        doc["count"] = json!(trees.count());
    }
    println!("{doc}");
    0
}
