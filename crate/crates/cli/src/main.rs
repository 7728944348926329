//! `ip01` — solve, generate, and benchmark 0-1 integer programs with
//! linear equality constraints.
//!
//! Exit codes: 0 when a solution exists (feasible or optimal), 1 when the
//! instance is infeasible, 2 for usage, parse, or configuration errors.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use ip01::bench::{render_csv, run_bench, BenchSpec};
use ip01::format::{parse_instance, render_generated};
use ip01::generate::{generate, Family, GenSpec};
use ip01::instance::{Goal, Instance, Status};
use ip01::report::ResultReport;
use ip01::two_table::{match_half_tables, MatchAlgo};
use ip01::{auto_algorithm, solve, Algorithm, CompareMode};

#[derive(Parser)]
#[command(
    name = "ip01",
    version,
    about = "Solve 0-1 integer programs with linear equality constraints"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance file.
    Solve(SolveArgs),
    /// Generate a seeded instance.
    Gen(GenArgs),
    /// Time solver families on growing planted instances.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AlgoArg {
    /// Pick by instance size and memory budget.
    Auto,
    /// Half tables matched by sorting.
    Sort2,
    /// Half tables matched by recursive partitioning.
    Recursive2,
    /// Quarter tables swept by priority queues.
    FourTable,
    /// Exhaustive scan (small instances only).
    Brute,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GoalArg {
    Feasibility,
    Optimize,
    Count,
    Enumerate,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    /// Exact rational arithmetic.
    Exact,
    /// Floating-point data with tolerant comparison.
    Float,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    Random,
    Planted,
    SubsetSum,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputArg {
    /// Human-readable report.
    Text,
    /// Machine-readable JSON.
    Structured,
}

#[derive(Args)]
struct SolveArgs {
    /// Instance file in ip01 format.
    file: PathBuf,
    #[arg(long, value_enum, default_value_t = AlgoArg::Auto)]
    algorithm: AlgoArg,
    #[arg(long, value_enum, default_value_t = GoalArg::Feasibility)]
    goal: GoalArg,
    /// Maximum solutions to list (enumerate goal only; default 100).
    #[arg(long)]
    limit: Option<u64>,
    #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
    mode: ModeArg,
    /// Comparison tolerance (float mode only; default 1e-9).
    #[arg(long)]
    tol: Option<f64>,
    /// Report format on stdout.
    #[arg(long, value_enum, default_value_t = OutputArg::Text)]
    output: OutputArg,
    /// Memory budget in bytes steering the automatic algorithm choice.
    #[arg(long, default_value_t = 1 << 30)]
    memory_budget: u64,
    /// Print compressed match blocks instead of listing solutions
    /// (enumerate goal, two-table algorithms only).
    #[arg(long)]
    blocks: bool,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    m: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Coefficients are drawn from -R..=R (subset-sum weights from 1..=R).
    #[arg(long, value_name = "R", default_value_t = 5)]
    coeff_range: i64,
    /// Probability that a matrix cell is nonzero.
    #[arg(long, default_value_t = 1.0)]
    density: f64,
    /// Draw an objective row as well.
    #[arg(long)]
    objective: bool,
    /// Subset-sum only: plant the target instead of drawing it uniformly.
    #[arg(long)]
    planted_target: bool,
    /// Write to a file instead of stdout.
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Comma-separated instance sizes, e.g. 20,22,24.
    #[arg(long, value_delimiter = ',', required = true)]
    n_list: Vec<usize>,
    #[arg(long, default_value_t = 4)]
    m: usize,
    /// Instances per size; every algorithm solves each one.
    #[arg(long, default_value_t = 3)]
    trials: u32,
    /// Comma-separated algorithm names (sort2, recursive2, four-table, brute).
    #[arg(long, value_delimiter = ',', default_values_t = ["sort2".to_string(), "four-table".to_string()])]
    algorithms: Vec<String>,
    #[arg(long, default_value_t = 48717)]
    seed_base: u64,
    /// Write the CSV to a file instead of stdout.
    #[arg(long, short)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve(args) => run_solve(args),
        Command::Gen(args) => run_gen(args),
        Command::Bench(args) => run_bench_cmd(args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run_solve(args: SolveArgs) -> Result<u8> {
    let text = fs::read_to_string(&args.file)
        .with_context(|| format!("cannot read {}", args.file.display()))?;
    let parsed =
        parse_instance(&text).map_err(|e| anyhow!("{}: {e}", args.file.display()))?;
    for warning in parsed.warnings() {
        eprintln!("warning: {warning}");
    }

    let (instance, mode) = match args.mode {
        ModeArg::Exact => {
            if args.tol.is_some() {
                bail!("--tol requires --mode float");
            }
            (parsed, CompareMode::Exact)
        }
        ModeArg::Float => {
            let tol = args.tol.unwrap_or(1e-9);
            if !(tol.is_finite() && tol >= 0.0) {
                bail!("tolerance must be a finite nonnegative number, got {tol}");
            }
            (parsed.to_float(), CompareMode::Tolerant(tol))
        }
    };

    let goal = match args.goal {
        GoalArg::Feasibility => Goal::Feasibility,
        GoalArg::Optimize => Goal::Optimize,
        GoalArg::Count => Goal::Count,
        GoalArg::Enumerate => Goal::Enumerate {
            limit: args.limit.unwrap_or(100),
        },
    };
    if args.limit.is_some() && args.goal != GoalArg::Enumerate {
        bail!("--limit requires --goal enumerate");
    }

    let algorithm = match args.algorithm {
        AlgoArg::Auto => {
            auto_algorithm(instance.n(), instance.m(), args.memory_budget, mode)
        }
        AlgoArg::Sort2 => Algorithm::TwoTableSort,
        AlgoArg::Recursive2 => Algorithm::TwoTableRecursive,
        AlgoArg::FourTable => Algorithm::FourTable,
        AlgoArg::Brute => Algorithm::Brute,
    };

    if args.blocks {
        return run_blocks(&instance, goal, algorithm, mode);
    }

    let outcome = solve(&instance, goal, algorithm, mode)?;
    let report = ResultReport::new(&instance, &outcome, algorithm, goal, mode);
    match args.output {
        OutputArg::Structured => println!("{}", serde_json::to_string_pretty(&report)?),
        OutputArg::Text => print!("{}", report.render_text()),
    }
    Ok(if outcome.status == Status::Infeasible { 1 } else { 0 })
}

/// Bits of `code` as a string, first variable of the half first.
fn half_bits(code: u64, width: usize) -> String {
    (0..width).map(|t| if (code >> t) & 1 == 1 { '1' } else { '0' }).collect()
}

/// Prints every match block as the two code lists whose cross product is
/// the solution set — the compressed form of enumeration.
fn run_blocks(instance: &Instance, goal: Goal, algorithm: Algorithm, mode: CompareMode) -> Result<u8> {
    if !matches!(goal, Goal::Enumerate { .. }) {
        bail!("--blocks requires --goal enumerate");
    }
    let algo = match algorithm {
        Algorithm::TwoTableSort => MatchAlgo::Sort,
        Algorithm::TwoTableRecursive => MatchAlgo::Recursive,
        other => bail!("--blocks requires a two-table algorithm, got {other}"),
    };
    let (tables, list) = match_half_tables(instance, algo, mode)?;
    let u_width = tables.partition.part(0).len();
    let v_width = tables.partition.part(1).len();
    for (i, block) in list.blocks.iter().enumerate() {
        let join = |order: &[usize], range: std::ops::Range<usize>, entries: &[ip01::two_table::TableEntry], width: usize| {
            order[range]
                .iter()
                .map(|&id| half_bits(entries[id].code, width))
                .collect::<Vec<_>>()
                .join(",")
        };
        println!(
            "block {}: pairs={} u={} v={}",
            i + 1,
            block.pair_count(),
            join(&list.u_order, block.u_range.clone(), &tables.u, u_width),
            join(&list.v_order, block.v_range.clone(), &tables.v, v_width),
        );
    }
    println!("blocks={} pairs={}", list.blocks.len(), list.pair_count());
    Ok(if list.blocks.is_empty() { 1 } else { 0 })
}

fn run_gen(args: GenArgs) -> Result<u8> {
    let family = match args.family {
        FamilyArg::Random => Family::Random,
        FamilyArg::Planted => Family::Planted,
        FamilyArg::SubsetSum => Family::SubsetSum,
    };
    let spec = GenSpec {
        family,
        n: args.n,
        m: args.m,
        seed: args.seed,
        coeff_range: args.coeff_range,
        density: args.density,
        with_objective: args.objective,
        planted_target: args.planted_target,
    };
    let generated = generate(&spec)?;
    let text = render_generated(&spec, &generated);
    match &args.out {
        Some(path) => fs::write(path, text)
            .with_context(|| format!("cannot write {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(0)
}

fn run_bench_cmd(args: BenchArgs) -> Result<u8> {
    let algorithms = args
        .algorithms
        .iter()
        .map(|name| name.parse::<Algorithm>())
        .collect::<ip01::Result<Vec<_>>>()?;
    let spec = BenchSpec {
        n_list: args.n_list,
        m: args.m,
        trials: args.trials,
        algorithms,
        seed_base: args.seed_base,
    };
    let rows = run_bench(&spec)?;
    let csv = render_csv(&rows);
    match &args.out {
        Some(path) => fs::write(path, csv)
            .with_context(|| format!("cannot write {}", path.display()))?,
        None => print!("{csv}"),
    }
    Ok(0)
}
