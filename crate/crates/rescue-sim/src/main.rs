//! `rescue-sim`: Monte-Carlo estimation of inland-water rescue response
//! times, for a boat-based rescue chain (`sro`) and a camera-equipped UAV
//! fleet (`uav`), plus a same-seed comparison of the two (`compare`) and a
//! scenario linter (`validate`).
//!
//! Exit codes: 0 success, 2 invalid invocation or scenario, 3 I/O or
//! environment failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use rescue_core::search::SearchMethod;
use rescue_sim::output::{
    self, write_run_artifacts, CompareDoc, Mode, ResultSetDoc, SummaryDoc,
};
use rescue_sim::runner;
use rescue_sim::schema::{self, LoadError};

const EXIT_INVALID: u8 = 2;
const EXIT_IO: u8 = 3;

#[derive(Parser)]
#[command(
    name = "rescue-sim",
    version,
    about = "Seeded Monte-Carlo simulation of inland-water rescue response times"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate the boat-based standard rescue operation.
    Sro(RunArgs),
    /// Simulate the UAV search fleet.
    Uav(UavArgs),
    /// Run both modes with the same seed and report the speedup.
    Compare(UavArgs),
    /// Check a scenario file; prints problems and exits non-zero if invalid.
    Validate(ValidateArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Scenario JSON file.
    #[arg(long)]
    scenario: PathBuf,
    /// Number of Monte-Carlo runs.
    #[arg(long, default_value_t = 10_000)]
    runs: u64,
    /// Master seed; falls back to RESCUE_SIM_SEED, then 0.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Histogram bin width in seconds.
    #[arg(long, default_value_t = 10.0)]
    bin_width: f64,
    /// Worker threads; 0 means one per core. Results never depend on this.
    #[arg(long, default_value_t = 0)]
    parallelism: usize,
    /// Also write per-run outcomes to runs.csv.
    #[arg(long)]
    dump_runs: bool,
}

#[derive(Args)]
struct UavArgs {
    #[command(flatten)]
    run: RunArgs,
    /// Search pattern: parallel_sweep, expanding_square, or imported.
    #[arg(long, default_value = "parallel_sweep")]
    method: String,
}

#[derive(Args)]
struct ValidateArgs {
    /// Scenario JSON file.
    #[arg(long)]
    scenario: PathBuf,
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Sro(args) => cmd_run(args, None),
        Command::Uav(args) => cmd_run(args.run, Some(args.method)),
        Command::Compare(args) => cmd_compare(args),
        Command::Validate(args) => cmd_validate(args),
    }
}

/// Flag > environment variable > 0.
fn resolve_seed(flag: Option<u64>) -> Result<u64, String> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var("RESCUE_SIM_SEED") {
        Ok(text) => text
            .trim()
            .parse()
            .map_err(|_| format!("RESCUE_SIM_SEED must be an unsigned 64-bit integer, got {text:?}")),
        Err(_) => Ok(0),
    }
}

struct Invocation {
    scenario: rescue_core::scenario::Scenario,
    seed: u64,
}

/// Shared front half of every run command: argument checks + scenario load.
fn prepare(args: &RunArgs) -> Result<Invocation, ExitCode> {
    let mut problems = Vec::new();
    if args.runs < 1 {
        problems.push("--runs must be at least 1".to_string());
    }
    if !(args.bin_width.is_finite() && args.bin_width > 0.0) {
        problems.push(format!("--bin-width must be positive, got {}", args.bin_width));
    }
    let seed = match resolve_seed(args.seed) {
        Ok(s) => s,
        Err(msg) => {
            problems.push(msg);
            0
        }
    };
    if !problems.is_empty() {
        for p in &problems {
            eprintln!("error: {p}");
        }
        return Err(ExitCode::from(EXIT_INVALID));
    }
    let scenario = schema::load_scenario(&args.scenario).map_err(report_load_error)?;
    Ok(Invocation { scenario, seed })
}

fn report_load_error(err: LoadError) -> ExitCode {
    match err {
        LoadError::Io { .. } => {
            eprintln!("error: {err}");
            ExitCode::from(EXIT_IO)
        }
        LoadError::Parse { .. } => {
            eprintln!("error: {err}");
            ExitCode::from(EXIT_INVALID)
        }
        LoadError::Validation { messages } => {
            for m in messages {
                eprintln!("error: {m}");
            }
            ExitCode::from(EXIT_INVALID)
        }
    }
}

fn report_runner_error(err: runner::RunnerError) -> ExitCode {
    eprintln!("error: {err}");
    if err.is_validation() {
        ExitCode::from(EXIT_INVALID)
    } else {
        ExitCode::from(EXIT_IO)
    }
}

fn report_output_error(err: output::OutputError) -> ExitCode {
    eprintln!("error: {err}");
    ExitCode::from(EXIT_IO)
}

fn parse_method_arg(method: &str) -> Result<SearchMethod, ExitCode> {
    schema::parse_method(method).map_err(|msg| {
        eprintln!("error: {msg}");
        ExitCode::from(EXIT_INVALID)
    })
}

fn cmd_run(args: RunArgs, method: Option<String>) -> ExitCode {
    let method_enum = match &method {
        Some(m) => match parse_method_arg(m) {
            Ok(m) => Some(m),
            Err(code) => return code,
        },
        None => None,
    };
    let inv = match prepare(&args) {
        Ok(v) => v,
        Err(code) => return code,
    };
    let (mode, run_result) = match method_enum {
        Some(m) => (
            Mode::Uav,
            runner::run_uas(&inv.scenario, m, args.runs, inv.seed, args.bin_width, args.parallelism),
        ),
        None => (
            Mode::Sro,
            runner::run_sro(&inv.scenario, args.runs, inv.seed, args.bin_width, args.parallelism),
        ),
    };
    let (outcomes, results) = match run_result {
        Ok(v) => v,
        Err(e) => return report_runner_error(e),
    };
    let summary = SummaryDoc {
        scenario: &inv.scenario.name,
        mode: mode.as_str(),
        method: method.as_deref(),
        seed: inv.seed,
        results: ResultSetDoc::from(&results),
    };
    let runs = args.dump_runs.then_some((outcomes.as_slice(), mode));
    if let Err(e) = write_run_artifacts(&args.out, &summary, &results, runs) {
        return report_output_error(e);
    }
    println!(
        "{}: {} runs, success rate {:.4}, mean {}",
        mode.as_str(),
        results.n_runs,
        results.success_rate,
        results
            .mean_s
            .map(|m| format!("{m:.2} s"))
            .unwrap_or_else(|| "n/a".to_string()),
    );
    ExitCode::SUCCESS
}

fn cmd_compare(args: UavArgs) -> ExitCode {
    let method = match parse_method_arg(&args.method) {
        Ok(m) => m,
        Err(code) => return code,
    };
    let inv = match prepare(&args.run) {
        Ok(v) => v,
        Err(code) => return code,
    };
    let a = &args.run;
    let sro = runner::run_sro(&inv.scenario, a.runs, inv.seed, a.bin_width, a.parallelism);
    let (_, sro_results) = match sro {
        Ok(v) => v,
        Err(e) => return report_runner_error(e),
    };
    let uas = runner::run_uas(&inv.scenario, method, a.runs, inv.seed, a.bin_width, a.parallelism);
    let (_, uas_results) = match uas {
        Ok(v) => v,
        Err(e) => return report_runner_error(e),
    };
    let speedup = output::speedup(&sro_results, &uas_results);
    let doc = CompareDoc {
        scenario: &inv.scenario.name,
        method: method.as_str(),
        seed: inv.seed,
        sro: ResultSetDoc::from(&sro_results),
        uas: ResultSetDoc::from(&uas_results),
        speedup,
    };
    if let Err(e) = output::write_json(&a.out.join("compare.json"), &doc) {
        return report_output_error(e);
    }
    println!(
        "sro mean {} vs uav mean {} -> speedup {}",
        sro_results.mean_s.map(|m| format!("{m:.2} s")).unwrap_or_else(|| "n/a".into()),
        uas_results.mean_s.map(|m| format!("{m:.2} s")).unwrap_or_else(|| "n/a".into()),
        speedup.map(|s| format!("{s:.2}x")).unwrap_or_else(|| "n/a".into()),
    );
    ExitCode::SUCCESS
}

fn cmd_validate(args: ValidateArgs) -> ExitCode {
    match schema::load_scenario(&args.scenario) {
        Ok(scenario) => {
            println!("scenario {:?} is valid", scenario.name);
            ExitCode::SUCCESS
        }
        Err(err) => report_load_error(err),
    }
}
