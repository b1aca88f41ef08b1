//! `bench` — run benchmark grids, generate zipf streams, and verify recall
//! on stored streams.
//!
//! Exit status is zero only when the requested work completed and, for
//! `verify`, every truly frequent item was reported.

use std::ffi::OsString;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use spacesaving::datagen::{
    generate_zipf, read_stream, write_metadata, write_stream, StreamFormat, ZipfSpec,
};
use spacesaving::evaluate::{evaluate, ExactCounts};
use spacesaving::mode::{lookup, names, ModeParams};
use ssbench::experiment::{run_grid, GridOptions};
use ssbench::grid::parse_grid;
use ssbench::report::emit_report;

#[derive(Parser)]
#[command(name = "bench", about = "space-saving benchmark harness", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every experiment in a grid file and write reports.
    Run(RunArgs),
    /// Generate a zipf-distributed stream file with a metadata sidecar.
    Gen(GenArgs),
    /// Count a stored stream and check that recall over true frequent items is 1.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Grid file describing the experiments.
    #[arg(long)]
    grid: PathBuf,
    /// Output directory for results.csv and plot data.
    #[arg(long)]
    out: PathBuf,
    /// Override the seed of every experiment.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the repetition count of every experiment.
    #[arg(long)]
    reps: Option<usize>,
}

#[derive(Args)]
struct GenArgs {
    /// Stream parameters as UNIVERSE,RHO,LENGTH (e.g. 1000000,1.1,10000000).
    #[arg(long)]
    zipf: String,
    /// Generator seed.
    #[arg(long, default_value_t = ssbench::experiment::DEFAULT_SEED)]
    seed: u64,
    /// Output stream file; metadata goes to <out>.meta.json.
    #[arg(long)]
    out: PathBuf,
    /// Stream encoding.
    #[arg(long, value_enum, default_value_t = FormatArg::Binary)]
    format: FormatArg,
}

#[derive(Args)]
struct VerifyArgs {
    /// Stream file to verify.
    #[arg(long)]
    stream: PathBuf,
    /// Number of counters (frequent means frequency > n/k).
    #[arg(long)]
    k: usize,
    /// Worker count.
    #[arg(long)]
    workers: usize,
    /// Execution mode.
    #[arg(long, default_value = "flat")]
    mode: String,
    /// Process count for hybrid mode.
    #[arg(long, default_value_t = 2)]
    processes: usize,
    /// Stream encoding.
    #[arg(long, value_enum, default_value_t = FormatArg::Binary)]
    format: FormatArg,
}

#[derive(Copy, Clone, ValueEnum)]
enum FormatArg {
    Binary,
    Text,
}

impl From<FormatArg> for StreamFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Binary => StreamFormat::Binary,
            FormatArg::Text => StreamFormat::Text,
        }
    }
}

fn parse_zipf_arg(s: &str) -> Result<(u64, f64, u64)> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        bail!("--zipf expects UNIVERSE,RHO,LENGTH, got {s:?}");
    }
    let universe: u64 = parts[0].trim().parse().context("universe in --zipf")?;
    let rho: f64 = parts[1].trim().parse().context("rho in --zipf")?;
    let length: u64 = parts[2].trim().parse().context("length in --zipf")?;
    Ok((universe, rho, length))
}

fn cmd_run(args: RunArgs) -> Result<()> {
    let text = std::fs::read_to_string(&args.grid)
        .with_context(|| format!("reading grid file {}", args.grid.display()))?;
    let experiments = parse_grid(&text)?;
    if experiments.is_empty() {
        bail!("grid file {} defines no experiments", args.grid.display());
    }
    let opts = GridOptions { seed_override: args.seed, reps_override: args.reps };
    let results = run_grid(&experiments, &opts, |msg| eprintln!("{msg}"))?;
    if results.is_empty() {
        bail!("all cells were skipped; nothing to report");
    }
    emit_report(&results, &args.out)?;
    eprintln!("wrote {} result rows to {}", results.len(), args.out.display());
    Ok(())
}

fn cmd_gen(args: GenArgs) -> Result<()> {
    let (universe, rho, length) = parse_zipf_arg(&args.zipf)?;
    let spec = ZipfSpec { universe, skew: rho, seed: args.seed, length };
    let stream = generate_zipf(&spec)?;
    write_stream(&args.out, &stream, args.format.into())?;
    let mut meta_path = OsString::from(args.out.as_os_str());
    meta_path.push(".meta.json");
    write_metadata(meta_path.as_ref(), &spec)?;
    eprintln!("wrote {} items to {}", stream.len(), args.out.display());
    Ok(())
}

fn cmd_verify(args: VerifyArgs) -> Result<()> {
    if args.k == 0 {
        bail!("--k must be positive");
    }
    let stream = read_stream(&args.stream, args.format.into())
        .with_context(|| format!("reading stream file {}", args.stream.display()))?;
    let mode = lookup(&args.mode)
        .ok_or_else(|| anyhow!("unknown mode {:?} (expected one of {:?})", args.mode, names()))?;
    let params =
        ModeParams { capacity: args.k, workers: args.workers, processes: args.processes };
    let output = mode.run(&stream, &params)?;
    let truth = ExactCounts::from_stream(&stream);
    let report = evaluate(&output.candidates, &truth, args.k)?;
    print!("{}", report.to_csv());
    if report.recall < 1.0 {
        bail!("recall {} < 1.0: some frequent items were missed", report.recall);
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Gen(args) => cmd_gen(args),
        Command::Verify(args) => cmd_verify(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}
