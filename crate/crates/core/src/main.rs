//! Command-line front door: parse a JSON problem description (or pick a
//! built-in example), run the requested checks, and emit a human-readable
//! table or a deterministic JSON report.
//!
//! Exit codes: 0 all binding checks pass, 1 some binding check failed,
//! 2 input error (unreadable file, malformed JSON, schema violation).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use nilcontact::catalog;
use nilcontact::document::{DocumentError, Problem, ReportDocument};
use nilcontact::run::{
    run_classify, run_connection, run_contact, run_subalgebra, run_validate, RunOptions,
};

#[derive(Parser)]
#[command(
    name = "nilcontact",
    version,
    about = "Checks almost contact metric structures on metric Lie algebras"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Input JSON document (omit when using --example).
    path: Option<PathBuf>,

    /// Use a built-in example instead of a file.
    #[arg(long, value_name = "NAME")]
    example: Option<String>,

    /// Absolute tolerance for residual verdicts.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,

    /// Random directions drawn by sampled checks.
    #[arg(long, default_value_t = 64)]
    samples: u32,

    /// Seed for sampled checks.
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Emit the report as JSON on stdout.
    #[arg(long)]
    json: bool,

    /// Skip the scale normalization applied before checking.
    #[arg(long)]
    no_normalize: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Check the Jacobi identity and the almost-contact axioms.
    Validate(CommonArgs),
    /// Lower central series, center, 2-step flag, nonsingularity.
    Classify(CommonArgs),
    /// Cosymplectic/Sasakian classification and its bracket consequences.
    Contact(CommonArgs),
    /// Subalgebra geometry: closure, duality, Q spectrum, slant angle.
    Subalg {
        #[command(flatten)]
        common: CommonArgs,
        /// Restrict to the named subalgebra from the input.
        #[arg(long, value_name = "NAME")]
        name: Option<String>,
    },
    /// The Levi-Civita table with torsion/compatibility residuals.
    Connection(CommonArgs),
    /// List the built-in example names.
    Examples,
}

fn load_problem(common: &CommonArgs) -> Result<Problem, DocumentError> {
    match (&common.example, &common.path) {
        (Some(name), None) => {
            let ex = catalog::lookup(name).ok_or_else(|| {
                DocumentError::Schema(format!(
                    "unknown example {name:?}; run `nilcontact examples` for the list"
                ))
            })?;
            Ok(Problem::from_example(&ex))
        }
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                DocumentError::Schema(format!("cannot read {}: {e}", path.display()))
            })?;
            Problem::from_json(&text)
        }
        (Some(_), Some(_)) => Err(DocumentError::Schema(
            "give either a path or --example, not both".to_string(),
        )),
        (None, None) => Err(DocumentError::Schema(
            "an input path or --example is required".to_string(),
        )),
    }
}

fn options(common: &CommonArgs) -> RunOptions {
    RunOptions {
        tolerance: common.tol,
        samples: common.samples,
        seed: common.seed,
        normalize: !common.no_normalize,
    }
}

fn emit(report: ReportDocument, json: bool) -> ExitCode {
    if json {
        println!("{}", report.to_json());
    } else {
        print!("{}", report.to_text());
    }
    if report.all_pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn dispatch(command: Command) -> Result<ExitCode, DocumentError> {
    match command {
        Command::Validate(common) => {
            let problem = load_problem(&common)?;
            Ok(emit(run_validate(&problem, &options(&common)), common.json))
        }
        Command::Classify(common) => {
            let problem = load_problem(&common)?;
            Ok(emit(run_classify(&problem, &options(&common)), common.json))
        }
        Command::Contact(common) => {
            let problem = load_problem(&common)?;
            Ok(emit(run_contact(&problem, &options(&common)), common.json))
        }
        Command::Subalg { common, name } => {
            let problem = load_problem(&common)?;
            let report = run_subalgebra(&problem, name.as_deref(), &options(&common))?;
            Ok(emit(report, common.json))
        }
        Command::Connection(common) => {
            let problem = load_problem(&common)?;
            Ok(emit(
                run_connection(&problem, &options(&common)),
                common.json,
            ))
        }
        Command::Examples => {
            for name in catalog::example_names() {
                println!("{name}");
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
