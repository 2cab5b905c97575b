use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use parity_justify::game::{Refutation, SolutionError};
use parity_justify::io::{audit_trace, emit_game, emit_solution, parse_game, parse_solution};
use parity_justify::oracle::{self, OracleError};
use parity_justify::{
    check_solution, solve, Algorithm, ParameterMap, ParityGame, ResetPolicy, SolveError,
    SolverConfig,
};

const VERIFY_FAILED: u8 = 1;
const USAGE: u8 = 2;
const IO_ERROR: u8 = 3;

#[derive(Parser)]
#[command(
    name = "pgjustify",
    version,
    about = "Parity game solving by safe justification steps"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a game in PGSolver format.
    Solve {
        file: PathBuf,
        #[arg(long, value_parser = parse_algorithm)]
        algorithm: Algorithm,
        #[arg(long, value_enum, default_value_t = Reset::Minimal)]
        reset: Reset,
        /// Write the justification trace as TSV.
        #[arg(long, value_name = "FILE")]
        trace: Option<PathBuf>,
        /// Check safety before and after every step.
        #[arg(long)]
        audit: bool,
        /// Write the final justification graph in DOT format.
        #[arg(long, value_name = "FILE")]
        dot: Option<PathBuf>,
        /// Write the solution here instead of standard output.
        #[arg(long, value_name = "FILE")]
        solution: Option<PathBuf>,
    },
    /// Check a solution against a game.
    Verify { game: PathBuf, solution: PathBuf },
    /// Solve a small game by enumerating strategies.
    Oracle {
        file: PathBuf,
        /// Largest number of nodes to accept.
        #[arg(long, default_value_t = oracle::DEFAULT_BOUND)]
        bound: usize,
    },
    /// Print a seeded random game.
    Gen {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        nodes: usize,
        #[arg(long)]
        max_priority: u64,
        #[arg(long)]
        density: f64,
    },
    /// Check a solver trace offline.
    AuditTrace {
        trace: PathBuf,
        /// Replay the trace against this game as well.
        #[arg(long)]
        game: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Reset {
    Minimal,
    Aggressive,
}

fn parse_algorithm(s: &str) -> Result<Algorithm, String> {
    s.parse().map_err(|e| format!("{e}"))
}

struct Failure {
    code: u8,
    message: String,
}

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure {
        code,
        message: message.into(),
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("pgjustify: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Solve {
            file,
            algorithm,
            reset,
            trace,
            audit,
            dot,
            solution,
        } => {
            let game = read_game(&file)?;
            let reset = match reset {
                Reset::Minimal => ResetPolicy::Minimal,
                Reset::Aggressive => ResetPolicy::Aggressive,
            };
            let mut config = SolverConfig::new(algorithm).with_reset(reset);
            if trace.is_some() {
                config = config.traced();
            }
            if audit {
                config = config.audited();
            }
            let result = solve(&game, &config).map_err(|e| solve_failure(&game, e))?;
            if let (Some(path), Some(t)) = (&trace, &result.trace) {
                write(path, &t.to_tsv(&game))?;
            }
            if let Some(path) = &dot {
                write(path, &result.justification.to_dot())?;
            }
            let text = emit_solution(&game, &result.solution);
            match &solution {
                Some(path) => write(path, &text)?,
                None => print!("{text}"),
            }
            eprintln!(
                "{}: {} nodes solved in {} steps",
                algorithm,
                game.node_count(),
                result.steps
            );
            Ok(())
        }
        Command::Verify { game, solution } => {
            let game = read_game(&game)?;
            let text = read(&solution)?;
            let sol = parse_solution(&text, &game)
                .map_err(|e| fail(IO_ERROR, format!("{}: {e}", solution.display())))?;
            let params = ParameterMap::empty(game.node_count());
            match check_solution(&game, &params, &sol) {
                Ok(()) => {
                    println!("solution verified: {} nodes", game.node_count());
                    Ok(())
                }
                Err(e) => {
                    println!("counterexample: node {}", counterexample(&game, &e));
                    Err(fail(VERIFY_FAILED, describe(&game, &e)))
                }
            }
        }
        Command::Oracle { file, bound } => {
            if bound > oracle::MAX_BOUND {
                return Err(fail(
                    USAGE,
                    format!("--bound must be at most {}", oracle::MAX_BOUND),
                ));
            }
            let game = read_game(&file)?;
            let params = ParameterMap::empty(game.node_count());
            let sol = oracle::oracle_solve_bounded(&game, &params, bound).map_err(|e| match e {
                OracleError::TooLarge { .. } => fail(USAGE, format!("{e}; raise --bound")),
                e => fail(VERIFY_FAILED, e.to_string()),
            })?;
            print!("{}", emit_solution(&game, &sol));
            Ok(())
        }
        Command::Gen {
            seed,
            nodes,
            max_priority,
            density,
        } => {
            if nodes == 0 {
                return Err(fail(USAGE, "--nodes must be positive"));
            }
            if !(0.0..=1.0).contains(&density) {
                return Err(fail(USAGE, "--density must lie in [0, 1]"));
            }
            let game = oracle::random_game(seed, nodes, max_priority, density);
            print!("{}", emit_game(&game));
            Ok(())
        }
        Command::AuditTrace { trace, game } => {
            let text = read(&trace)?;
            let game = game.as_deref().map(read_game).transpose()?;
            let report = audit_trace(&text, game.as_ref())
                .map_err(|e| fail(IO_ERROR, format!("{}: {e}", trace.display())))?;
            println!(
                "monotone: {}, steps: {}",
                yes_no(report.monotone()),
                report.steps
            );
            if let Some(step) = report.first_non_increase {
                println!("size does not increase at step {step}");
            }
            for step in &report.unsafe_claims {
                println!("step {step} is recorded as unsafe");
            }
            if report.replayed {
                println!(
                    "replay: {} size mismatches, {} false safety claims",
                    report.size_mismatches.len(),
                    report.false_safety_claims.len()
                );
            }
            if report.passed() {
                Ok(())
            } else {
                Err(fail(VERIFY_FAILED, "trace audit failed"))
            }
        }
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| fail(IO_ERROR, format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Outcome {
    fs::write(path, text).map_err(|e| fail(IO_ERROR, format!("{}: {e}", path.display())))
}

fn read_game(path: &Path) -> Result<ParityGame, Failure> {
    let text = read(path)?;
    parse_game(&text).map_err(|e| fail(IO_ERROR, format!("{}: {e}", path.display())))
}

fn solve_failure(game: &ParityGame, e: SolveError) -> Failure {
    let message = match &e {
        SolveError::Step { step, node, source } => format!(
            "step {step} at node {} failed: {source}",
            game.external_id(*node)
        ),
        _ => e.to_string(),
    };
    fail(VERIFY_FAILED, message)
}

fn counterexample(game: &ParityGame, e: &SolutionError) -> u64 {
    let v = match e {
        SolutionError::WrongLength { .. } => return game.external_id(parity_justify::NodeId(0)),
        SolutionError::MissingMove { node, .. }
        | SolutionError::UnexpectedMove { node, .. }
        | SolutionError::NotAnEdge { node, .. } => *node,
        SolutionError::Refuted(r) => r.start(),
    };
    game.external_id(v)
}

fn describe(game: &ParityGame, e: &SolutionError) -> String {
    let id = |v| game.external_id(v);
    match e {
        SolutionError::WrongLength { .. } => e.to_string(),
        SolutionError::MissingMove { player, node } => {
            format!("player {player} has no move at node {}", id(*node))
        }
        SolutionError::UnexpectedMove { player, node } => {
            format!(
                "player {player} has a move at node {}, which it does not win",
                id(*node)
            )
        }
        SolutionError::NotAnEdge {
            player,
            node,
            target,
        } => format!(
            "player {player} moves {} -> {}, which is not an edge",
            id(*node),
            id(*target)
        ),
        SolutionError::Refuted(Refutation::ReachesParameter { start, parameter }) => format!(
            "from node {} the opponent can reach parameter {}",
            id(*start),
            id(*parameter)
        ),
        SolutionError::Refuted(Refutation::LosingCycle { start, cycle }) => {
            let cycle: Vec<String> = cycle.iter().map(|&v| id(v).to_string()).collect();
            format!(
                "from node {} the opponent can force the losing cycle <{}>",
                id(*start),
                cycle.join(",")
            )
        }
    }
}
