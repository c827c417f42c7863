mod problem;
mod report;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use cwsolve_core::expr::Redundancy;
use cwsolve_core::fixtures::{self, naive_expression, FixtureKind};
use cwsolve_core::fvs::solve_fvs;
use cwsolve_core::oracle::{brute_max_forest, brute_min_fvs, brute_sigma_rho, OracleError};
use cwsolve_core::sigma_rho::solve_sigma_rho;
use cwsolve_core::{parse_expression, CwExpression, Graph, SolveError, SolveOptions, Stats};
use problem::{resolve, ProblemArgs, ProblemName, Resolved, UsageError};
use report::{Optimum, ReportStats, RunReport};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

const EXIT_USAGE: u8 = 1;
const EXIT_INVALID: u8 = 2;
const EXIT_REDUNDANT: u8 = 3;
const EXIT_TOO_LARGE: u8 = 4;

/// Exact connectivity problems on graphs given as clique-width expressions.
#[derive(Debug, Parser)]
#[command(name = "cwsolve", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, clap::Args)]
struct SolveArgs {
    /// mif, fvs, cds, ctds, perfect-cds, d-regular:<d>, cvc, steiner or custom
    #[arg(long)]
    problem: ProblemName,
    /// Expression file
    #[arg(long)]
    expr: PathBuf,
    #[command(flatten)]
    spec: ProblemArgs,
    /// Disable rank-based reduction (exponential tables; for cross-checking)
    #[arg(long)]
    no_reduce: bool,
    /// Prune co-variant indices using future degrees
    #[arg(long)]
    lookahead: bool,
    /// Worker threads for per-cell reduction
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve a problem on an expression
    Solve {
        #[command(flatten)]
        args: SolveArgs,
        /// Report an optimal vertex set
        #[arg(long)]
        witness: bool,
        #[arg(long)]
        json: bool,
    },
    /// Validate an expression and report redundant edge-adds
    CheckExpr {
        #[arg(long)]
        expr: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Print an expression for a graph family or a graph file
    Gen {
        /// clique, path, cycle, star, random-cograph or naive
        #[arg(long)]
        kind: String,
        #[arg(long, required_unless_present = "graph")]
        n: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Graph file (required for naive)
        #[arg(long)]
        graph: Option<PathBuf>,
    },
    /// Solve by exhaustive enumeration on a graph file
    Oracle {
        #[arg(long)]
        problem: ProblemName,
        #[arg(long)]
        graph: PathBuf,
        #[command(flatten)]
        spec: ProblemArgs,
        #[arg(long)]
        json: bool,
    },
    /// Emit solver statistics as CSV
    Bench {
        #[command(flatten)]
        args: SolveArgs,
        /// Number of runs
        #[arg(long, default_value_t = 1)]
        repeat: usize,
    },
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load_expr(path: &Path) -> Result<CwExpression> {
    parse_expression(&read(path)?).with_context(|| format!("invalid expression in {}", path.display()))
}

fn load_graph(path: &Path) -> Result<Graph> {
    Graph::parse(&read(path)?).with_context(|| format!("invalid graph in {}", path.display()))
}

struct Outcome {
    optimum: Optimum,
    witness: Option<Vec<u32>>,
    stats: Stats,
}

fn solve_once(args: &SolveArgs, expr: &CwExpression, with_witness: bool) -> Result<Outcome> {
    let resolved = resolve(&args.problem, &args.spec)?;
    let opts = SolveOptions {
        use_reduce: !args.no_reduce,
        with_witness,
        parallel: args.threads > 1,
        lookahead: args.lookahead,
    };
    Ok(match resolved {
        Resolved::Forest { maximize } => {
            let r = solve_fvs(expr, &opts)?;
            let (w, set) = if maximize { (r.forest_weight, r.forest) } else { (r.fvs_weight, r.fvs) };
            Outcome {
                optimum: Optimum::Value(w),
                witness: set,
                stats: r.stats,
            }
        }
        Resolved::Domination(spec) => {
            let r = solve_sigma_rho(expr, &spec, &opts)?;
            Outcome {
                optimum: r.optimum.into(),
                witness: r.witness,
                stats: r.stats,
            }
        }
    })
}

fn setup_threads(n: usize) -> Result<()> {
    if n == 0 {
        return Err(UsageError("--threads must be at least 1".into()).into());
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .context("cannot start worker threads")
}

fn names(expr_names: &[&str], ids: Option<Vec<u32>>) -> Option<Vec<String>> {
    ids.map(|v| v.iter().map(|&i| expr_names[i as usize].to_string()).collect())
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Solve { args, witness, json } => {
            setup_threads(args.threads)?;
            let expr = load_expr(&args.expr)?;
            let out = solve_once(&args, &expr, witness)?;
            let report = RunReport {
                problem: args.problem.to_string(),
                optimum: out.optimum,
                witness: names(&expr.vertex_names(), out.witness),
                stats: out.stats.into(),
            };
            println!("{}", report.render(json));
            Ok(0)
        }
        Command::CheckExpr { expr, json } => {
            let expr = load_expr(&expr)?;
            let report = expr.check_irredundant();
            if json {
                let items: Vec<_> = report
                    .iter()
                    .map(|r| {
                        serde_json::json!({
                            "node": r.node, "i": r.i, "j": r.j,
                            "kind": if r.kind == Redundancy::Full { "full" } else { "partial" },
                            "existing": r.existing, "total": r.total,
                        })
                    })
                    .collect();
                let doc = serde_json::json!({
                    "k": expr.k(),
                    "vertices": expr.num_vertices(),
                    "irredundant": report.is_empty(),
                    "redundant_adds": items,
                });
                println!("{doc}");
            } else {
                println!("valid {}-expression with {} vertices", expr.k(), expr.num_vertices());
                for r in &report {
                    let kind = if r.kind == Redundancy::Full { "fully" } else { "partially" };
                    println!(
                        "node {}: add {} {} is {kind} redundant ({} of {} edges already present)",
                        r.node, r.i, r.j, r.existing, r.total
                    );
                }
                if report.is_empty() {
                    println!("irredundant");
                }
            }
            Ok(if report.is_empty() { 0 } else { EXIT_REDUNDANT })
        }
        Command::Gen { kind, n, seed, graph } => {
            let expr = if kind == "naive" {
                let Some(path) = graph else {
                    return Err(UsageError("--kind naive requires --graph".into()).into());
                };
                let g = load_graph(&path)?;
                if g.n() == 0 {
                    anyhow::bail!("graph has no vertices; an expression needs at least one");
                }
                if g.n() > cwsolve_core::expr::MAX_LABELS {
                    anyhow::bail!(OracleError::TooLarge {
                        size: g.n(),
                        limit: cwsolve_core::expr::MAX_LABELS
                    });
                }
                naive_expression(&g)
            } else {
                let kind: FixtureKind = kind.parse().map_err(UsageError)?;
                let n = n.ok_or_else(|| UsageError("--n is required".into()))?;
                if n == 0 {
                    return Err(UsageError("--n must be at least 1".into()).into());
                }
                fixtures::fixture(kind, n, seed)
            };
            print!("{}", expr.serialize());
            Ok(0)
        }
        Command::Oracle { problem, graph, spec, json } => {
            let g = load_graph(&graph)?;
            let start = Instant::now();
            let result = match resolve(&problem, &spec)? {
                Resolved::Forest { maximize: true } => brute_max_forest(&g)?,
                Resolved::Forest { maximize: false } => brute_min_fvs(&g)?,
                Resolved::Domination(s) => brute_sigma_rho(&g, &s)?,
            };
            let report = RunReport {
                problem: problem.to_string(),
                optimum: result.optimum.into(),
                witness: result
                    .witness
                    .map(|w| w.iter().map(|&v| g.name(v).to_string()).collect()),
                stats: ReportStats {
                    elapsed_ms: start.elapsed().as_millis(),
                    ..ReportStats::default()
                },
            };
            println!("{}", report.render(json));
            Ok(0)
        }
        Command::Bench { args, repeat } => {
            setup_threads(args.threads)?;
            let expr = load_expr(&args.expr)?;
            println!("problem,n,k,reduce,run,optimum,dp_nodes,max_cell_entries,max_table_cells,reduce_calls,elapsed_ms");
            let label = args.problem.to_string();
            for run in 0..repeat.max(1) {
                let out = solve_once(&args, &expr, false)?;
                let optimum = match out.optimum {
                    Optimum::Value(w) => w.to_string(),
                    Optimum::Infeasible(s) => s.to_string(),
                };
                let s = out.stats;
                println!(
                    "{label},{},{},{},{run},{optimum},{},{},{},{},{}",
                    expr.num_vertices(),
                    expr.k(),
                    !args.no_reduce,
                    s.dp_nodes,
                    s.max_cell_entries,
                    s.max_table_cells,
                    s.reduce_calls,
                    s.elapsed_ms
                );
            }
            Ok(0)
        }
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if cause.is::<UsageError>() {
            return EXIT_USAGE;
        }
        if let Some(e) = cause.downcast_ref::<SolveError>() {
            return match e {
                SolveError::NotIrredundant(_) => EXIT_REDUNDANT,
                SolveError::TooManyLabels { .. } => EXIT_TOO_LARGE,
                _ => EXIT_INVALID,
            };
        }
        if let Some(OracleError::TooLarge { .. }) = cause.downcast_ref::<OracleError>() {
            return EXIT_TOO_LARGE;
        }
    }
    EXIT_INVALID
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
