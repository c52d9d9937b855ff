//! `coapprox`: best coapproximations out of subspaces of diagonal matrices.
//!
//! Exit codes: 0 success (an empty solution set included), 1 verification
//! failure, 2 input error, 3 numerical failure.

mod problem;
mod report;
mod text;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use coapprox_core::linalg::rational::to_f64;
use coapprox_core::oracle::{verify_bj_directions, verify_by_definition, DEFAULT_RANDOM_DIRECTIONS};
use coapprox_core::solver::{analyze, DEFAULT_TOL_UNIQUE, DEFAULT_TOL_W};
use coapprox_core::{coapprox, CoapproxError, KernelError, SolverOptions};
use serde_json::{json, Map, Value};

use problem::{load_candidate, load_problem, Mode};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl From<CoapproxError> for CliError {
    fn from(e: CoapproxError) -> Self {
        use CoapproxError::*;
        match e {
            Kernel(
                KernelError::NotSymmetric(_)
                | KernelError::CycleGuardExceeded(_)
                | KernelError::NumericalFailure(_),
            )
            | InternalInvariantViolated(_)
            | UnknownClass(_)
            | ZeroClass(_) => CliError::Numerical(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "coapprox",
    version,
    about = "Best coapproximations out of subspaces of diagonal matrices"
)]
struct Cli {
    #[command(flatten)]
    output: OutputArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct OutputArgs {
    /// Emit a JSON report (default).
    #[arg(long, global = true, conflicts_with = "text")]
    json: bool,
    /// Emit a human-readable report.
    #[arg(long, global = true)]
    text: bool,
    /// Half-width added to numerical-range endpoints that are not exact.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL_W, value_parser = tolerance)]
    tol_w: f64,
    /// Largest bounding-box width reported as a unique solution (float mode).
    #[arg(long, global = true, default_value_t = DEFAULT_TOL_UNIQUE, value_parser = tolerance)]
    tol_unique: f64,
}

fn tolerance(text: &str) -> Result<f64, String> {
    match text.parse::<f64>() {
        Ok(x) if x.is_finite() && x >= 0.0 => Ok(x),
        _ => Err(format!("`{text}` is not a finite non-negative number")),
    }
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether the subspace is coproximinal or co-Chebyshev.
    Classify { problem: PathBuf },
    /// Compute every best coapproximation to the target.
    Solve { problem: PathBuf },
    /// Equivalence classes of components and their dominance witnesses.
    StarReport { problem: PathBuf },
    /// Check a candidate against the definition and by orthogonality.
    Verify {
        problem: PathBuf,
        /// JSON array of coefficients or diagonal entries, or {"alpha": [...]} / {"diagonal": [...]}.
        candidate: PathBuf,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long)]
        seed: u64,
    },
    /// Solve a problem in ℓ∞ⁿ (basis rows and target are vectors).
    Linf { problem: PathBuf },
}

struct Outcome {
    report: Value,
    passed: bool,
}

fn object(entries: Vec<(&str, Value)>) -> Value {
    Value::Object(
        entries
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect::<Map<_, _>>(),
    )
}

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let opts = SolverOptions {
        tol_w: cli.output.tol_w,
        tol_unique: cli.output.tol_unique,
        ..SolverOptions::default()
    };
    let solve = |path: &PathBuf, force: Option<Mode>| -> Result<Outcome, CliError> {
        let problem = load_problem(path, force)?;
        let report = match &problem.target {
            Some(t) => {
                let r = coapprox(&problem.basis, t, &opts)?;
                object(vec![
                    ("classification", report::classification(&r.classification)),
                    ("star_report", report::star_report(&r.table, &r.star)),
                    ("system", report::system(&r.table, &r.system)),
                    ("solution", report::solution(&r.solution)),
                ])
            }
            None => {
                let a = analyze(&problem.basis, opts.execution)?;
                object(vec![
                    ("classification", report::classification(&a.classification)),
                    ("star_report", report::star_report(&a.table, &a.star)),
                ])
            }
        };
        Ok(Outcome { report, passed: true })
    };

    match &cli.command {
        Command::Solve { problem } => solve(problem, None),
        Command::Linf { problem } => solve(problem, Some(Mode::Linf)),
        Command::Classify { problem } | Command::StarReport { problem } => {
            let problem = load_problem(problem, None)?;
            let a = analyze(&problem.basis, opts.execution)?;
            let star = ("star_report", report::star_report(&a.table, &a.star));
            let report = if matches!(cli.command, Command::Classify { .. }) {
                object(vec![
                    ("classification", report::classification(&a.classification)),
                    star,
                ])
            } else {
                object(vec![star])
            };
            Ok(Outcome { report, passed: true })
        }
        Command::Verify {
            problem,
            candidate,
            samples,
            seed,
        } => {
            if *samples == 0 {
                return Err(CliError::Input("--samples must be at least 1".into()));
            }
            let problem = load_problem(problem, None)?;
            let t = problem.target()?;
            let alpha = load_candidate(candidate, &problem.basis)?;
            let a = analyze(&problem.basis, opts.execution)?;
            let alpha_f: Vec<f64> = alpha.iter().map(to_f64).collect();
            let def = verify_by_definition(&alpha_f, t, &problem.basis, *samples, *seed, opts.execution)?;
            let bj = verify_bj_directions(
                &alpha_f,
                t,
                &problem.basis,
                &a.star,
                DEFAULT_RANDOM_DIRECTIONS,
                *seed,
            )?;
            let passed = def.passed() && bj.passed();
            let diagonal = problem.basis.combine(&alpha);
            let oracle = json!({
                "verdict": if passed { "Pass" } else { "Fail" },
                "alpha": Value::Array(alpha.iter().map(report::rational).collect()),
                "diagonal": Value::Array(diagonal.entries().iter().map(report::rational).collect()),
                "seed": seed,
                "definition": report::verification(&def),
                "orthogonality": report::verification(&bj),
            });
            let report = object(vec![
                ("classification", report::classification(&a.classification)),
                ("star_report", report::star_report(&a.table, &a.star)),
                ("oracle", oracle),
            ]);
            Ok(Outcome { report, passed })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            let rendered = if cli.output.text {
                text::render(&outcome.report)
            } else {
                report::render(&outcome.report)
            };
            print!("{rendered}");
            if outcome.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
