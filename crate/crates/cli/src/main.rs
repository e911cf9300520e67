use std::fmt::Display;
use std::fs;
use std::net::{SocketAddr, ToSocketAddrs};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use sourcing_core::eval::evaluate;
use sourcing_core::ingest::{ingest, DEFAULT_PLAN_QUANTITY};
use sourcing_core::model::validate;
use sourcing_core::mutate::{apply_script, Mutation};
use sourcing_core::report::{matrix_report, render_csv, render_evaluation_text, render_text};
use sourcing_core::solver::solve_min_cost;
use sourcing_core::{Scenario, ScenarioDoc};

#[derive(Parser)]
#[command(name = "sourcing", version, about = "Transportation-model sourcing workbench")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Read a raw long-format CSV document and write the canonical scenario JSON.
    Ingest {
        raw: PathBuf,
        /// Units initially planned on every lane.
        #[arg(long, default_value_t = DEFAULT_PLAN_QUANTITY)]
        plan_default: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List every rule violation in a scenario file; exit 1 if there are any.
    Validate { scenario: PathBuf },
    /// Print the evaluation of a scenario's current plan.
    Eval {
        scenario: PathBuf,
        #[arg(long, value_enum, default_value_t = EvalFormat::Json)]
        format: EvalFormat,
    },
    /// Print the supplier by destination matrix.
    Report {
        scenario: PathBuf,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
    },
    /// Apply a JSON mutation script; all steps succeed or nothing is written.
    Mutate {
        scenario: PathBuf,
        script: PathBuf,
        #[arg(long, conflicts_with = "dry_run")]
        out: Option<PathBuf>,
        /// Print what each step would remove and the resulting evaluation instead of the scenario.
        #[arg(long)]
        dry_run: bool,
    },
    /// Compute the minimum-cost plan meeting every requirement within capacity.
    Solve {
        scenario: PathBuf,
        /// Write the scenario with its plan replaced by the optimum.
        #[arg(long, requires = "out")]
        apply: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the HTTP service until interrupted.
    Serve {
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
        #[arg(long, default_value_t = 7411)]
        port: u16,
        /// Load scenarios from this file on start and save them on shutdown.
        #[arg(long)]
        snapshot: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum EvalFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Text,
    Csv,
    Json,
}

/// A non-zero exit: 1 for violations, rejected edits or infeasibility,
/// 3 for unreadable or malformed input. Usage errors (2) come from clap.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn rejected(message: impl Display) -> Self {
        Failure { code: 1, message: message.to_string() }
    }

    fn input(message: impl Display) -> Self {
        Failure { code: 3, message: message.to_string() }
    }
}

type Outcome = Result<(), Failure>;

fn pretty<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("model types serialize");
    text.push('\n');
    text
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn read_doc(path: &Path) -> Result<ScenarioDoc, Failure> {
    serde_json::from_str(&read(path)?).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn read_scenario(path: &Path) -> Result<Scenario, Failure> {
    Scenario::try_from(read_doc(path)?).map_err(|invalid| {
        let lines: Vec<String> = invalid.0.iter().map(ToString::to_string).collect();
        Failure::input(format!("{}: invalid scenario\n{}", path.display(), lines.join("\n")))
    })
}

fn emit(text: &str, out: Option<&Path>) -> Outcome {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::input(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Ingest { raw, plan_default, out } => {
            let scenario = ingest(&read(&raw)?, plan_default)
                .map_err(|e| Failure::input(format!("{}: {e}", raw.display())))?;
            emit(&pretty(&scenario), out.as_deref())
        }
        Command::Validate { scenario } => {
            let violations = validate(&read_doc(&scenario)?);
            if violations.is_empty() {
                println!("valid");
                return Ok(());
            }
            for v in &violations {
                println!("{v}");
            }
            Err(Failure::rejected(format!("{} violation(s)", violations.len())))
        }
        Command::Eval { scenario, format } => {
            let evaluation = evaluate(&read_scenario(&scenario)?);
            match format {
                EvalFormat::Json => print!("{}", pretty(&evaluation)),
                EvalFormat::Text => print!("{}", render_evaluation_text(&evaluation)),
            }
            Ok(())
        }
        Command::Report { scenario, format } => {
            let report = matrix_report(&read_scenario(&scenario)?);
            match format {
                ReportFormat::Text => print!("{}", render_text(&report)),
                ReportFormat::Csv => print!("{}", render_csv(&report)),
                ReportFormat::Json => print!("{}", pretty(&report)),
            }
            Ok(())
        }
        Command::Mutate { scenario, script, out, dry_run } => {
            let base = read_scenario(&scenario)?;
            let steps: Vec<Mutation> = serde_json::from_str(&read(&script)?)
                .map_err(|e| Failure::input(format!("{}: {e}", script.display())))?;
            if dry_run {
                return preview(&base, &steps);
            }
            let edited = apply_script(&base, &steps).map_err(Failure::rejected)?;
            emit(&pretty(&edited), out.as_deref())
        }
        Command::Solve { scenario, apply, out } => {
            let base = read_scenario(&scenario)?;
            let result = solve_min_cost(&base);
            print!("{}", pretty(&result));
            if !result.is_optimal() {
                return Err(Failure::rejected("infeasible: requirements cannot all be met within capacity"));
            }
            if apply {
                emit(&pretty(&result.apply_to(&base)), out.as_deref())?;
            }
            Ok(())
        }
        Command::Serve { host, port, snapshot } => serve(&host, port, snapshot),
    }
}

/// Walks the script step by step, reporting removal cascades, then prints
/// the evaluation the full script would produce.
fn preview(base: &Scenario, steps: &[Mutation]) -> Outcome {
    let mut current = base.clone();
    for (index, step) in steps.iter().enumerate() {
        let cascade = step
            .cascade(&current)
            .map_err(|e| Failure::rejected(format!("step {index}: {e}")))?;
        if !cascade.lanes.is_empty() {
            let lanes: Vec<String> = cascade.lanes.iter().map(ToString::to_string).collect();
            println!(
                "step {index} removes {} lane(s) carrying {} units: {}",
                lanes.len(),
                cascade.shipped,
                lanes.join(", ")
            );
        }
        current = step
            .apply(&current)
            .map_err(|e| Failure::rejected(format!("step {index}: {e}")))?;
    }
    print!("{}", render_evaluation_text(&evaluate(&current)));
    Ok(())
}

fn serve(host: &str, port: u16, snapshot: Option<PathBuf>) -> Outcome {
    let addr: SocketAddr = (host, port)
        .to_socket_addrs()
        .ok()
        .and_then(|mut addrs| addrs.next())
        .ok_or_else(|| Failure::input(format!("cannot resolve {host}:{port}")))?;
    tracing_subscriber::fmt()
        .with_env_filter(
            tracing_subscriber::EnvFilter::try_from_default_env().unwrap_or_else(|_| "info".into()),
        )
        .with_writer(std::io::stderr)
        .init();
    let runtime = tokio::runtime::Runtime::new().map_err(Failure::input)?;
    runtime
        .block_on(sourcing_service::serve(addr, snapshot))
        .map_err(|e| Failure::input(format!("service stopped: {e}")))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
