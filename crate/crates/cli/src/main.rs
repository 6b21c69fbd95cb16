use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use edgelab::lab::{emit, parse_config, resolve_workers, run_study, exit_status, OutputFormat, RunContext, Study};

#[derive(Parser, Debug)]
#[command(name = "edgelab", version, about = "Edge statistics of Fermi-deformed unitary ensembles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// log L_n against the finite-temperature Airy determinant
    Theorem1(RunArgs),
    /// Rescaled kernel against the id-PII kernel
    Theorem2(RunArgs),
    /// Norming constant ratio and its n^{-1/3} correction
    Theorem3(RunArgs),
    /// Internal consistency checks
    Crosschecks(RunArgs),
    /// Fredholm determinants over the configured (s, T) grid
    Fredholm(RunArgs),
    /// Solve the integro-differential Painleve II equation
    IdpiiSolve(RunArgs),
    /// Equilibrium measure of the configured potential
    Eqmeasure(RunArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(clap::Args, Debug)]
struct RunArgs {
    /// TOML configuration file
    #[arg(long, short)]
    config: PathBuf,
    /// Output directory, overriding `output.dir`; the file is <study>.<ext>
    #[arg(long, short)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Worker threads; EDGELAB_WORKERS takes precedence
    #[arg(long)]
    workers: Option<usize>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (study, args) = match cli.command {
        Command::Theorem1(a) => (Study::Theorem1, a),
        Command::Theorem2(a) => (Study::Theorem2, a),
        Command::Theorem3(a) => (Study::Theorem3, a),
        Command::Crosschecks(a) => (Study::Crosschecks, a),
        Command::Fredholm(a) => (Study::Fredholm, a),
        Command::IdpiiSolve(a) => (Study::IdPiiSolve, a),
        Command::Eqmeasure(a) => (Study::EqMeasure, a),
    };
    let cfg = match parse_config(&args.config) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let format = match args.format {
        Format::Csv => OutputFormat::Csv,
        Format::Json => OutputFormat::Json,
    };
    let workers = resolve_workers(args.workers.unwrap_or(cfg.output.workers));
    let ctx = RunContext::new(&cfg);
    let records = run_study(study, &cfg, workers, &ctx);
    let out = args
        .out
        .unwrap_or_else(|| cfg.output.dir.clone())
        .join(format!("{}.{}", study.name(), format.extension()));
    if let Err(e) = emit(&records, format, &out) {
        eprintln!("error: cannot write {}: {e}", out.display());
        return ExitCode::from(3);
    }
    let status = exit_status(&records);
    eprintln!("{} records written to {} (status {status})", records.len(), out.display());
    ExitCode::from(status as u8)
}
