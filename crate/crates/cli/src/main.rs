use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use gsqg_core::io::{execute, parse_config, Mode};
use gsqg_core::{Error, ErrorClass};

#[derive(Parser)]
#[command(
    name = "gsqg",
    version,
    about = "Flux and conservation experiments for generalized SQG"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct RunArgs {
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output directory; defaults to the config's `output` or `gsqg-out`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads.
    #[arg(long, env = "GSQG_THREADS")]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate the equation and record diagnostics.
    Simulate(RunArgs),
    /// Scan flux functionals over (gamma, alpha, N or eps).
    FluxScan(RunArgs),
    /// Scan commutator and mollification rates over eps.
    CommutatorScan(RunArgs),
    /// Shell profiles and norms of a single field.
    Analyze(RunArgs),
}

fn class_name(class: ErrorClass) -> &'static str {
    match class {
        ErrorClass::Config => "config",
        ErrorClass::Numerical => "numerical",
        ErrorClass::Io => "io",
    }
}

fn fail(err: &Error) -> ExitCode {
    let class = err.class();
    eprintln!("error[{}]: {err}", class_name(class));
    ExitCode::from(match class {
        ErrorClass::Config => 2,
        ErrorClass::Numerical => 3,
        ErrorClass::Io => 4,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (mode, args) = match cli.command {
        Command::Simulate(a) => (Mode::Simulate, a),
        Command::FluxScan(a) => (Mode::FluxScan, a),
        Command::CommutatorScan(a) => (Mode::CommutatorScan, a),
        Command::Analyze(a) => (Mode::Analyze, a),
    };
    if let Some(k) = args.threads {
        if k == 0 {
            return fail(&Error::config("--threads", "must be at least 1"));
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global()
        {
            eprintln!("warning: could not size the thread pool: {e}");
        }
    }
    let config = match parse_config(&args.config) {
        Ok(c) => c,
        Err(e) => return fail(&e),
    };
    if config.mode != mode {
        let msg = format!(
            "config mode is {} but the {} command was invoked",
            config.mode.name(),
            mode.name()
        );
        return fail(&Error::config("mode", msg));
    }
    let out = args
        .out
        .or_else(|| config.output.clone())
        .unwrap_or_else(|| PathBuf::from("gsqg-out"));
    match execute(&config, &out) {
        Ok(report) => {
            for f in &report.files {
                println!("{}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => fail(&e),
    }
}
