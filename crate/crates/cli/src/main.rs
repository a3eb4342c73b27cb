use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use hexeval::builtins;
use hexeval::ground::{ground_program, GroundConfig, GroundError, DEFAULT_MAX_INVENTION};
use hexeval::solver::{
    optimize, AnswerSet, Cost, FlpMode, Minimization, SolveError, Solver, SolverConfig,
};
use hexeval::syntax::parse_program;

const EXIT_SAT: u8 = 10;
const EXIT_UNSAT: u8 = 20;
const EXIT_ERROR: u8 = 1;
const EXIT_BUDGET: u8 = 2;

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Switch {
    On,
    Off,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MinimizeArg {
    Off,
    Deletion,
    Qxp,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FlpArg {
    Explicit,
    SkipAuto,
    Off,
}

/// Compute answer sets of HEX-programs
#[derive(Parser, Debug)]
#[command(name = "hexeval", version)]
struct Cli {
    /// Program files, read in order; stdin when none are given
    files: Vec<PathBuf>,

    /// Number of answer sets to print (0 = all)
    #[arg(long, default_value_t = 0)]
    models: usize,

    /// Evaluate external atoms under partial assignments
    #[arg(long, value_enum, default_value = "on")]
    partial_eval: Switch,

    /// Decisions between two partial evaluations
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    eval_frequency: u32,

    /// Minimization of learned external nogoods
    #[arg(long, value_enum, default_value = "deletion")]
    minimize: MinimizeArg,

    /// FLP minimality check policy
    #[arg(long, value_enum, default_value = "skip-auto")]
    flp: FlpArg,

    /// Maximum number of terms introduced by value invention
    #[arg(long, default_value_t = DEFAULT_MAX_INVENTION)]
    max_invention: usize,

    /// Minimize weak constraints and print optimal answer sets
    #[arg(long)]
    opt: bool,

    /// Print solver statistics
    #[arg(long)]
    stats: bool,

    /// Print the ground program before solving
    #[arg(long)]
    dump_ground: bool,
}

enum Failure {
    Error(String),
    Budget(String),
}

impl From<SolveError> for Failure {
    fn from(e: SolveError) -> Self {
        Failure::Error(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Error(e.to_string())
    }
}

fn read_input(files: &[PathBuf]) -> Result<String, Failure> {
    if files.is_empty() {
        let mut text = String::new();
        io::stdin().read_to_string(&mut text)?;
        return Ok(text);
    }
    let mut text = String::new();
    for path in files {
        let part = fs::read_to_string(path)
            .map_err(|e| Failure::Error(format!("{}: {e}", path.display())))?;
        text.push_str(&part);
        text.push('\n');
    }
    Ok(text)
}

fn cost_text(cost: &Cost) -> String {
    if cost.entries().is_empty() {
        "0".to_string()
    } else {
        cost.to_string()
    }
}

fn run(cli: &Cli, out: &mut impl Write) -> Result<bool, Failure> {
    let text = read_input(&cli.files)?;
    let program = parse_program(&text).map_err(|e| Failure::Error(e.to_string()))?;
    let registry = builtins::registry();
    let gp = ground_program(
        &program,
        &registry,
        &GroundConfig {
            max_invention: cli.max_invention,
        },
    )
    .map_err(|e| match e {
        GroundError::InventionBudget { .. } => Failure::Budget(e.to_string()),
        e => Failure::Error(e.to_string()),
    })?;
    if cli.dump_ground {
        write!(out, "{gp}")?;
    }
    let config = SolverConfig {
        partial_eval: matches!(cli.partial_eval, Switch::On),
        eval_frequency: cli.eval_frequency,
        minimization: match cli.minimize {
            MinimizeArg::Off => Minimization::Off,
            MinimizeArg::Deletion => Minimization::Deletion,
            MinimizeArg::Qxp => Minimization::QuickXplain,
        },
        flp_mode: match cli.flp {
            FlpArg::Explicit => FlpMode::Explicit,
            FlpArg::SkipAuto => FlpMode::SkipAuto,
            FlpArg::Off => FlpMode::Off,
        },
        max_models: cli.models,
    };

    let print = |out: &mut dyn Write, n: usize, a: &AnswerSet| -> io::Result<()> {
        writeln!(out, "Answer {n}: {}", a.display(&gp))
    };
    let (found, stats) = if cli.opt {
        let result = optimize(&gp, &registry, config)?;
        for (i, a) in result.optimal.iter().enumerate() {
            print(out, i + 1, a)?;
            writeln!(out, "Cost: {}", cost_text(&a.cost))?;
        }
        if result.optimum.is_some() {
            writeln!(out, "OPTIMUM FOUND")?;
        }
        (!result.optimal.is_empty(), result.stats)
    } else {
        let mut solver = Solver::new(&gp, &registry, config)?;
        let mut n = 0;
        while let Some(a) = solver.next_answer_set()? {
            n += 1;
            print(out, n, &a)?;
        }
        (n > 0, solver.stats())
    };
    if !found {
        writeln!(out, "UNSATISFIABLE")?;
    }
    if cli.stats {
        write!(out, "{stats}")?;
    }
    Ok(found)
}

fn main() -> ExitCode {
    let cli = Cli::try_parse().unwrap_or_else(|e| {
        let code = if e.use_stderr() { EXIT_ERROR as i32 } else { 0 };
        let _ = e.print();
        std::process::exit(code);
    });
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let result = run(&cli, &mut out);
    let _ = out.flush();
    match result {
        Ok(true) => ExitCode::from(EXIT_SAT),
        Ok(false) => ExitCode::from(EXIT_UNSAT),
        Err(Failure::Error(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_ERROR)
        }
        Err(Failure::Budget(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_BUDGET)
        }
    }
}
