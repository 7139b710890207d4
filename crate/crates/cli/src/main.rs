use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use cocycle_cli::config::{self, ConfigAst, Diagnostic, GranularitySpec, TaskDef};
use cocycle_cli::resolve::ResolvedConfig;
use cocycle_cli::runner::{exit_code, run_tasks, RunOptions, TaskOutcome};
use cocycle_cli::{default_budget, parse_config};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Granularity {
    Class,
    Cocycle,
}

/// Čech cohomology engine for finite coefficient data over simplicial
/// nerves: H1 class sets, abelian cohomology via Smith normal form,
/// nonabelian H2 with crossed-module coefficients, lifting obstructions,
/// exactness and gerbe-collapse checks.
///
/// Tasks can be given directly as subcommands (built-in groups, complexes
/// and `G->N` extensions only) or collected in a config file executed with
/// `run`. Reports are emitted one JSON object per line, byte-identical
/// across runs and worker counts.
#[derive(Debug, Parser)]
#[command(name = "cocycle", version, max_term_width = 100)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Backtracking node budget (overrides config files and COCYCLE_BUDGET).
    #[arg(long, global = true)]
    budget: Option<u64>,

    /// Worker threads for the parallel searches.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,

    /// Default complex for tasks that omit their complex argument.
    #[arg(long, global = true)]
    seed_complex: Option<String>,

    /// Lift reporting granularity.
    #[arg(long, global = true, value_enum)]
    granularity: Option<Granularity>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, clap::Subcommand)]
enum Command {
    /// Execute every task in a config file.
    Run {
        /// Path to a `cocycle-config v1` file.
        file: std::path::PathBuf,
    },
    /// H1 class set: `h1 <complex> <group>`.
    H1 { args: Vec<String> },
    /// Abelian cohomology: `abelian <complex> <Z|Z_m> <degree>`.
    Abelian { args: Vec<String> },
    /// Nonabelian H2 classes: `h2nab <complex> <extension>`.
    H2nab { args: Vec<String> },
    /// The lifting map: `nu <complex> <extension> <cochain>`.
    Nu { args: Vec<String> },
    /// The obstruction class: `delta <complex> <extension> <cochain>`.
    Delta { args: Vec<String> },
    /// Exhaustive lift search: `lift <complex> <extension> <cochain>`.
    Lift { args: Vec<String> },
    /// Exactness verification: `exactness <complex> <extension>`.
    Exactness { args: Vec<String> },
    /// Commuting-square verification: `square <complex> <extension> [all]`.
    Square { args: Vec<String> },
    /// Gerbe class and collapse: `gerbe <complex> <extension> <cochain>`.
    Gerbe { args: Vec<String> },
    /// Full obstruction report: `gauge-classes <complex> <extension> <cochain>`.
    #[command(name = "gauge-classes")]
    GaugeClasses { args: Vec<String> },
    /// Coboundary realization: `realize <complex> <extension> <2-cochain>`.
    Realize { args: Vec<String> },
}

impl Command {
    fn as_task_line(&self) -> Option<String> {
        let (name, args) = match self {
            Command::Run { .. } => return None,
            Command::H1 { args } => ("h1", args),
            Command::Abelian { args } => ("abelian", args),
            Command::H2nab { args } => ("h2nab", args),
            Command::Nu { args } => ("nu", args),
            Command::Delta { args } => ("delta", args),
            Command::Lift { args } => ("lift", args),
            Command::Exactness { args } => ("exactness", args),
            Command::Square { args } => ("square", args),
            Command::Gerbe { args } => ("gerbe", args),
            Command::GaugeClasses { args } => ("gauge-classes", args),
            Command::Realize { args } => ("realize", args),
        };
        Some(format!("{name} {}", args.join(" ")))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(diag) => {
            eprintln!("{diag}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<i32, Diagnostic> {
    let mut budget = default_budget();
    if let Some(nodes) = cli.budget {
        budget.max_nodes = nodes;
    }
    let (resolved, tasks) = match &cli.command {
        Command::Run { file } => {
            let text = std::fs::read_to_string(file).map_err(|e| {
                Diagnostic::new(
                    "E-PARSE",
                    format!("cannot read {}: {e}", file.display()),
                    (0, 0),
                )
            })?;
            let (ast, mut resolved) = parse_config(&text, budget)?;
            if let Some(nodes) = cli.budget {
                resolved.budget.max_nodes = nodes;
            }
            (resolved, ast.tasks)
        }
        other => {
            let line = other.as_task_line().expect("task subcommands have lines");
            let tokens = config::lex(&line)?;
            let mut parser = config::Parser::new(tokens);
            let spec = config::parse_task(&mut parser)?;
            let resolved = ResolvedConfig::from_ast(&ConfigAst::default(), budget)?;
            let task = TaskDef {
                spec,
                expects: Vec::new(),
                line: 0,
            };
            (resolved, vec![task])
        }
    };
    let options = RunOptions {
        seed_complex: cli.seed_complex.clone(),
        granularity: cli.granularity.map(|g| match g {
            Granularity::Class => GranularitySpec::Class,
            Granularity::Cocycle => GranularitySpec::Cocycle,
        }),
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs.max(1))
        .build()
        .map_err(|e| Diagnostic::new("E-PARSE", format!("thread pool: {e}"), (0, 0)))?;
    let outcomes: Vec<TaskOutcome> = pool.install(|| run_tasks(&resolved, &tasks, &options));
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    for outcome in &outcomes {
        match cli.format {
            Format::Json => {
                writeln!(out, "{}", outcome.report).expect("stdout");
            }
            Format::Table => {
                write!(
                    out,
                    "{}",
                    cocycle_cli::report::render_table(&outcome.report)
                )
                .expect("stdout");
            }
        }
    }
    Ok(exit_code(&outcomes))
}
