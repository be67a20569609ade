//! `muller`: command-line front end for Muller game analysis.
//!
//! Results go to standard output as JSON (except `tree`, which prints the
//! memory numbers). Exit codes: 0 solved or verified, 1 refuted, 2 error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use muller::io::{
    parse_arena, parse_condition, parse_strategy, solve_result_json, strategy_to_json, to_pretty, DagFile,
    TreeFile,
};
use muller::verifier::{
    enumerate_support_strategies, max_enum_from_env, AdamPolicy, SimulationConfig, VerificationReport,
};
use muller::witness::branch_name;
use muller::zielonka::enumerate_cropped_dags;
use muller::{
    build_witness, check_almost_sure, check_sure_win, optimal_cropped_dag, simulate, solve, sure_strategy,
    synthesize_on_region, Arena, MullerCondition, Rational, StateId, StrategyTransducer, ZielonkaDag, ZielonkaTree,
};
use serde_json::json;

#[derive(Parser)]
#[command(name = "muller", version, about = "Zielonka trees, strategy synthesis and verification for Muller games")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print m, mU and r of a condition; optionally export the tree or DAG.
    Tree {
        condition: PathBuf,
        /// Write a DOT rendering here.
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Render the Zielonka DAG instead of the tree.
        #[arg(long)]
        dag: bool,
        /// Render the optimal cropped DAG instead of the tree.
        #[arg(long, conflicts_with = "dag")]
        cropped: bool,
        /// Write the JSON export here.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Memory numbers and shape facts of a condition as JSON.
    Bounds { condition: PathBuf },
    /// Winning regions and the decomposition trace.
    Solve {
        arena: PathBuf,
        condition: PathBuf,
        /// Omit the decomposition trace.
        #[arg(long)]
        no_trace: bool,
    },
    /// Synthesize an almost-sure strategy on Eve's winning region.
    Synthesize {
        arena: PathBuf,
        condition: PathBuf,
        /// Fail (exit 1) unless Eve wins from every state.
        #[arg(long)]
        everywhere: bool,
    },
    /// Build the lower-bound witness arena of a condition.
    Witness {
        condition: PathBuf,
        /// Use the cropped DAG with this enumeration index instead of the
        /// optimal one.
        #[arg(long)]
        choice: Option<usize>,
        /// Write the state-role sidecar here.
        #[arg(long)]
        sidecar: Option<PathBuf>,
        /// Write Eve's sure strategy here.
        #[arg(long)]
        sure: Option<PathBuf>,
        /// Write one Adam branch strategy per branch into this directory.
        #[arg(long)]
        branches: Option<PathBuf>,
    },
    /// Check a strategy exactly, or enumerate small-memory strategies.
    Verify {
        arena: PathBuf,
        condition: PathBuf,
        /// Eve's strategy; required unless `--enumerate` is given.
        strategy: Option<PathBuf>,
        /// Check sure winning instead of almost-sure winning.
        #[arg(long)]
        sure: bool,
        /// Enumerate every support strategy with this many memory states.
        #[arg(long, conflicts_with_all = ["strategy", "sure"])]
        enumerate: Option<usize>,
        #[command(flatten)]
        starts: Starts,
    },
    /// Estimate the outcome of plays by seeded simulation.
    Simulate {
        arena: PathBuf,
        condition: PathBuf,
        strategy: PathBuf,
        /// Adam's strategy; uniform play when absent.
        #[arg(long)]
        adam: Option<PathBuf>,
        /// Replay the counterexample of a `verify` report.
        #[arg(long, conflicts_with = "adam")]
        counterexample: Option<PathBuf>,
        #[arg(long, default_value_t = 1000)]
        episodes: usize,
        #[arg(long, default_value_t = 1000)]
        horizon: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Include per-episode results.
        #[arg(long)]
        details: bool,
        #[command(flatten)]
        starts: Starts,
    },
}

#[derive(Args)]
struct Starts {
    /// Initial state (repeatable); all states by default.
    #[arg(long = "start")]
    names: Vec<String>,
}

impl Starts {
    fn resolve(&self, arena: &Arena<Rational>) -> Result<Vec<StateId>> {
        if self.names.is_empty() {
            return Ok((0..arena.len()).collect());
        }
        self.names
            .iter()
            .map(|n| arena.id(n).with_context(|| format!("unknown start state {n:?}")))
            .collect()
    }
}

enum Outcome {
    Holds,
    Refuted,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

fn load_condition(path: &Path) -> Result<MullerCondition> {
    parse_condition(&read(path)?).with_context(|| format!("in {}", path.display()))
}

fn load_arena(path: &Path, condition: &MullerCondition) -> Result<Arena<Rational>> {
    parse_arena(&read(path)?, Some(condition.alphabet())).with_context(|| format!("in {}", path.display()))
}

fn load_strategy(path: &Path, arena: &Arena<Rational>) -> Result<StrategyTransducer<Rational>> {
    parse_strategy(&read(path)?, arena).with_context(|| format!("in {}", path.display()))
}

fn print_json<T: serde::Serialize + ?Sized>(value: &T) {
    print!("{}", to_pretty(value));
}

fn verdict(report: &VerificationReport) -> Outcome {
    if report.holds() {
        Outcome::Holds
    } else {
        Outcome::Refuted
    }
}

fn run(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Tree { condition, dot, dag, cropped, json } => {
            let f = load_condition(&condition)?;
            let al = f.alphabet();
            let tree = ZielonkaTree::build(&f);
            println!("m={} mU={} r={}", tree.memory_m(), tree.memory_mu(&f), tree.memory_r());
            let d = ZielonkaDag::from_tree(&tree);
            let (rendering, export) = if dag {
                (d.to_dot(al), serde_json::to_value(DagFile::from_dag(&d, al))?)
            } else if cropped {
                let e = optimal_cropped_dag(&d);
                (e.to_dot(al), serde_json::to_value(DagFile::from_cropped(&e, al))?)
            } else {
                (tree.to_dot(al), serde_json::to_value(TreeFile::from_tree(&tree, al))?)
            };
            if let Some(p) = dot {
                write(&p, &rendering)?;
            }
            if let Some(p) = json {
                write(&p, &to_pretty(&export))?;
            }
            Ok(Outcome::Holds)
        }
        Command::Bounds { condition } => {
            let f = load_condition(&condition)?;
            let tree = ZielonkaTree::build(&f);
            let d = ZielonkaDag::from_tree(&tree);
            let e = optimal_cropped_dag(&d);
            print_json(&json!({
                "m": tree.memory_m(),
                "mU": tree.memory_mu(&f),
                "r": tree.memory_r(),
                "tree_nodes": tree.size(),
                "dag_nodes": d.len(),
                "cropped_dag_nodes": e.len(),
                "branches": e.branches().len(),
                "memoryless_randomised": tree.admits_memoryless_randomised(),
                "upward_closed": f.is_upward_closed(),
                "empty_wins": f.empty_wins(),
            }));
            Ok(Outcome::Holds)
        }
        Command::Solve { arena, condition, no_trace } => {
            let f = load_condition(&condition)?;
            let a = load_arena(&arena, &f)?;
            let res = solve(&a, &f)?;
            let mut out = solve_result_json(&a, &res);
            if no_trace {
                out.as_object_mut().expect("object").remove("trace");
            }
            print_json(&out);
            Ok(Outcome::Holds)
        }
        Command::Synthesize { arena, condition, everywhere } => {
            let f = load_condition(&condition)?;
            let a = load_arena(&arena, &f)?;
            let syn = synthesize_on_region(&a, &f)?;
            print!("{}", strategy_to_json(&syn.strategy, &a));
            if everywhere && syn.region != a.all_states() {
                let lost: Vec<&str> = (0..a.len()).filter(|&s| !syn.region.contains(s)).map(|s| a.name(s)).collect();
                eprintln!("Eve does not win from: {}", lost.join(", "));
                return Ok(Outcome::Refuted);
            }
            Ok(Outcome::Holds)
        }
        Command::Witness { condition, choice, sidecar, sure, branches } => {
            let f = load_condition(&condition)?;
            let al = f.alphabet();
            let d = ZielonkaDag::from_tree(&ZielonkaTree::build(&f));
            let e = match choice {
                None => optimal_cropped_dag(&d),
                Some(i) => enumerate_cropped_dags(&d)
                    .nth(i)
                    .with_context(|| format!("there is no cropped DAG with index {i}"))?,
            };
            let w = build_witness::<Rational>(&e, al)?;
            print!("{}", muller::io::arena_to_json(&w.arena));
            if let Some(p) = sidecar {
                write(&p, &to_pretty(&w.sidecar(&e)))?;
            }
            if let Some(p) = sure {
                write(&p, &strategy_to_json(&sure_strategy(&e, &w), &w.arena))?;
            }
            if let Some(dir) = branches {
                fs::create_dir_all(&dir).with_context(|| format!("cannot create {}", dir.display()))?;
                let mut index = Vec::new();
                for (i, b) in e.branches().iter().enumerate() {
                    let tau = muller::branch_strategy(&e, b, &w)?;
                    let file = format!("branch_{i}.json");
                    write(&dir.join(&file), &strategy_to_json(&tau, &w.arena))?;
                    index.push(json!({ "file": file, "branch": branch_name(&e, al, b) }));
                }
                write(&dir.join("branches.json"), &to_pretty(&index))?;
            }
            Ok(Outcome::Holds)
        }
        Command::Verify { arena, condition, strategy, sure, enumerate, starts } => {
            let f = load_condition(&condition)?;
            let a = load_arena(&arena, &f)?;
            let starts = starts.resolve(&a)?;
            if let Some(k) = enumerate {
                let all = enumerate_support_strategies(&a, k, max_enum_from_env())?;
                let raw = all.raw_count();
                let (mut candidates, mut winning) = (0u64, 0u64);
                for s in all {
                    candidates += 1;
                    if check_almost_sure(&a, &f, &s.uniformize(), &starts)?.holds() {
                        winning += 1;
                    }
                }
                print_json(&json!({
                    "memory": k,
                    "raw_candidates": raw.to_string(),
                    "candidates": candidates,
                    "almost_sure": winning,
                }));
                return Ok(if winning > 0 { Outcome::Holds } else { Outcome::Refuted });
            }
            let Some(sp) = strategy else { bail!("a strategy file or --enumerate is required") };
            let s = load_strategy(&sp, &a)?;
            let report = if sure {
                check_sure_win(&a, &f, &s, &starts)?
            } else {
                check_almost_sure(&a, &f, &s, &starts)?
            };
            print_json(&report);
            Ok(verdict(&report))
        }
        Command::Simulate { arena, condition, strategy, adam, counterexample, episodes, horizon, seed, details, starts } => {
            let f = load_condition(&condition)?;
            let a = load_arena(&arena, &f)?;
            let eve = load_strategy(&strategy, &a)?;
            let starts = starts.resolve(&a)?;
            let adam = adam.map(|p| load_strategy(&p, &a)).transpose()?;
            let table = match counterexample {
                None => None,
                Some(p) => {
                    let report: VerificationReport =
                        serde_json::from_str(&read(&p)?).with_context(|| format!("in {}", p.display()))?;
                    let cex = report.counterexample.context("the report has no counterexample")?;
                    Some(cex.policy(&a, &eve)?)
                }
            };
            let policy = match (&adam, &table) {
                (Some(t), _) => AdamPolicy::Transducer(t),
                (None, Some(t)) => AdamPolicy::Table(t),
                (None, None) => AdamPolicy::Uniform,
            };
            let cfg = SimulationConfig { episodes, horizon, seed, starts };
            let mut stats = simulate(&a, &f, &eve, policy, &cfg)?;
            if !details {
                stats.details.clear();
            }
            print_json(&stats);
            Ok(if stats.losses > 0 { Outcome::Refuted } else { Outcome::Holds })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(Outcome::Holds) => ExitCode::SUCCESS,
        Ok(Outcome::Refuted) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
