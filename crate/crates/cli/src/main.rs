use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qchan_cli::channel_input::merge_assignments;
use qchan_cli::commands::{self, SweepRange, DEFAULT_TOL};
use qchan_cli::error::{CliError, EXIT_OK, EXIT_VALIDATION_FAILED};
use qchan_core::OptimizerConfig;
use serde::Serialize;

#[derive(Parser)]
#[command(
    name = "qchan",
    version,
    about = "Commutator-based quantumness of qubit channels"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Grid points per angle for the coarse search.
    #[arg(long, global = true, env = "QCHAN_DEFAULT_GRID", default_value_t = 24)]
    grid: usize,

    /// Worker threads (defaults to the number of cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// Seed for the random mixed-state diagnostic.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Maximize the incompatibility of a single channel.
    Measure(MeasureArgs),
    /// Maximize over a range of one channel or kernel parameter.
    Sweep(SweepArgs),
    /// Compare numerical maxima with the closed forms on a fixed grid.
    Validate(ValidateArgs),
    /// Visibilities of the outputs for the maximally non-commuting input pair.
    Visibility(VisibilityArgs),
}

#[derive(Args)]
struct ChannelArgs {
    /// Channel label: identity, rtn, nmd, pd, ad, gad, unruh, gdc.
    #[arg(long)]
    channel: String,

    /// Parameters as key=value pairs, comma separated; may be repeated.
    #[arg(long = "set", value_name = "K=V,...")]
    set: Vec<String>,

    /// Memory kernel for rtn (daffer) or nmd (linear).
    #[arg(long)]
    kernel: Option<String>,
}

#[derive(Args)]
struct MeasureArgs {
    #[command(flatten)]
    channel: ChannelArgs,

    /// Also sample mixed input pairs and report their best incompatibility.
    #[arg(long)]
    mixed_diagnostic: bool,

    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Structured,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    channel: ChannelArgs,

    /// Swept parameter as name=start:stop:step (stop inclusive).
    #[arg(long, value_name = "K=START:STOP:STEP")]
    sweep: String,

    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,

    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ValidateArgs {
    /// Maximum allowed |numeric − closed form|.
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,

    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VisibilityArgs {
    #[command(flatten)]
    channel: ChannelArgs,

    /// Polar angle of the first input state.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    x: f64,

    /// Azimuth of both input states.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    phi: f64,

    #[arg(long)]
    out: Option<PathBuf>,
}

fn open_output(out: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match out {
        Some(path) => {
            let file = File::create(path)
                .map_err(|e| CliError::runtime(format!("cannot write {}: {e}", path.display())))?;
            Box::new(BufWriter::new(file))
        }
        None => Box::new(io::stdout().lock()),
    })
}

fn write_json<T: Serialize>(value: &T, out: Option<&Path>) -> Result<(), CliError> {
    let mut w = open_output(out)?;
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| CliError::runtime(e.to_string()))?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn run(cli: Cli) -> Result<u8, CliError> {
    let mut cfg = OptimizerConfig::default().with_grid(cli.grid);
    cfg.seed = cli.seed;
    cfg.validate()?;

    match cli.command {
        Command::Measure(args) => {
            cfg.include_mixed_diagnostic = args.mixed_diagnostic;
            let params = merge_assignments(&args.channel.set)?;
            let report = commands::measure(
                &args.channel.channel,
                &params,
                args.channel.kernel.as_deref(),
                &cfg,
            )?;
            write_json(&report, args.out.as_deref())?;
        }
        Command::Sweep(args) => {
            let fixed = merge_assignments(&args.channel.set)?;
            let range = SweepRange::parse(&args.sweep)?;
            let report = commands::sweep(
                &args.channel.channel,
                &fixed,
                &range,
                args.channel.kernel.as_deref(),
                &cfg,
            )?;
            match args.format {
                Format::Csv => {
                    let mut w = open_output(args.out.as_deref())?;
                    commands::write_sweep_csv(&report, &mut w)?;
                    w.flush()?;
                }
                Format::Structured => write_json(&report, args.out.as_deref())?,
            }
        }
        Command::Validate(args) => {
            let report = commands::validate(args.tol, &cfg)?;
            write_json(&report, args.out.as_deref())?;
            if !report.overall_pass {
                eprintln!(
                    "validation failed: {} of {} asserted rows outside tolerance {}",
                    report.failures,
                    report.rows.iter().filter(|r| r.pass.is_some()).count(),
                    report.tolerance
                );
                return Ok(EXIT_VALIDATION_FAILED);
            }
        }
        Command::Visibility(args) => {
            let params = merge_assignments(&args.channel.set)?;
            let report = commands::visibility(
                &args.channel.channel,
                &params,
                args.channel.kernel.as_deref(),
                args.x,
                args.phi,
            )?;
            write_json(&report, args.out.as_deref())?;
        }
    }
    Ok(EXIT_OK)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();

    let pool = match cli.jobs {
        Some(0) => {
            eprintln!("{}", CliError::usage("--jobs must be at least 1"));
            return ExitCode::from(qchan_cli::error::EXIT_USAGE);
        }
        Some(n) => rayon::ThreadPoolBuilder::new().num_threads(n).build(),
        None => rayon::ThreadPoolBuilder::new().build(),
    };
    let pool = match pool {
        Ok(p) => p,
        Err(e) => {
            eprintln!("{}", CliError::runtime(e.to_string()));
            return ExitCode::from(qchan_cli::error::EXIT_RUNTIME);
        }
    };

    match pool.install(|| run(cli)) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}
