//! Command-line front end. Exit codes: 0 success, 1 configuration error,
//! 2 runtime error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{report, run_experiment, run_sweep, ExperimentConfig, SweepConfig};
use crate::adversary::StrategySpec;
use crate::analysis::ExperimentSummary;
use crate::error::{Error, Result};
use crate::protocol::classical::{classical_ks_break, classical_ks_run, random_message, ClassicalWord};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_RUNTIME: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "qpadlock", version, about = "Multi-pass rotation-padlock key distribution simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one experiment.
    Run(RunArgs),
    /// Run a grid of experiments from a sweep config.
    Sweep(SweepArgs),
    /// Show that the classical three-pass exchange leaks the message.
    ClassicalDemo(DemoArgs),
    /// Summarize an existing transcripts.jsonl.
    Report(ReportArgs),
}

#[derive(Debug, Clone, Copy, Default, ValueEnum)]
enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Args)]
struct Overrides {
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
}

#[derive(Debug, Args)]
struct RunArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    sessions: Option<u64>,
    #[arg(long)]
    strategy: Option<String>,
    /// Strategy parameters as a JSON object, e.g. '{"passes":[1,2]}'.
    #[arg(long, requires = "strategy")]
    strategy_params: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    repetition_factor: Option<usize>,
    #[arg(long)]
    depolarize: Option<f64>,
    #[command(flatten)]
    common: Overrides,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long)]
    config: PathBuf,
    #[command(flatten)]
    common: Overrides,
}

#[derive(Debug, Args)]
struct DemoArgs {
    #[arg(long, default_value_t = 1000)]
    words: usize,
    #[arg(long, default_value_t = ClassicalWord::DEFAULT_WIDTH)]
    width: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Args)]
struct ReportArgs {
    /// Path to a transcripts.jsonl file.
    transcripts: PathBuf,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
}

/// Parses `args` (including the program name) and runs the command.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::Config(_) => EXIT_CONFIG,
                _ => EXIT_RUNTIME,
            }
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<()> {
    match command {
        Command::Run(args) => {
            let format = args.common.format;
            let config = run_config(args)?;
            let run = run_experiment(&config)?;
            run.write_to(&config.out_dir)?;
            print_summaries(std::slice::from_ref(&run.summary), format, out)
        }
        Command::Sweep(args) => {
            let mut sweep = SweepConfig::load(&args.config)?;
            apply_overrides(&mut sweep.base, &args.common);
            let summaries = run_sweep(&sweep)?;
            print_summaries(&summaries, args.common.format, out)
        }
        Command::ClassicalDemo(args) => classical_demo(&args, out),
        Command::Report(args) => {
            let summary = report(&args.transcripts)?;
            print_summaries(std::slice::from_ref(&summary), args.format, out)
        }
    }
}

fn apply_overrides(config: &mut ExperimentConfig, common: &Overrides) {
    if let Some(seed) = common.seed {
        config.master_seed = Some(seed);
    }
    if let Some(dir) = &common.out_dir {
        config.out_dir = dir.clone();
    }
    if let Some(w) = common.workers {
        config.workers = w;
    }
}

fn run_config(args: RunArgs) -> Result<ExperimentConfig> {
    let mut config = match &args.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => {
            let sessions =
                args.sessions.ok_or_else(|| Error::Config("--sessions is required without --config".into()))?;
            ExperimentConfig::from_json(&format!("{{\"sessions\": {sessions}}}"))?
        }
    };
    if let Some(s) = args.sessions {
        config.sessions = s;
    }
    if let Some(name) = &args.strategy {
        let params = match &args.strategy_params {
            Some(text) => match serde_json::from_str(text) {
                Ok(serde_json::Value::Object(map)) => map,
                Ok(_) => return Err(Error::Config("--strategy-params must be a JSON object".into())),
                Err(e) => return Err(Error::Config(format!("--strategy-params: {e}"))),
            },
            None => serde_json::Map::new(),
        };
        config.strategy = StrategySpec::from_name_params(name, &params).map_err(Error::into_config)?;
    }
    if let Some(n) = args.n {
        config.n = n;
    }
    if let Some(r) = args.repetition_factor {
        config.repetition_factor = r;
    }
    if let Some(p) = args.depolarize {
        config.channel_depolarize_p = p;
    }
    apply_overrides(&mut config, &args.common);
    config.validate()?;
    Ok(config)
}

fn print_summaries(summaries: &[ExperimentSummary], format: Format, out: &mut dyn Write) -> Result<()> {
    match format {
        Format::Csv => ExperimentSummary::write_csv(summaries, &mut *out),
        Format::Json => {
            if let [one] = summaries {
                serde_json::to_writer_pretty(&mut *out, one)?;
            } else {
                serde_json::to_writer_pretty(&mut *out, summaries)?;
            }
            writeln!(out)?;
            Ok(())
        }
    }
}

fn classical_demo(args: &DemoArgs, out: &mut dyn Write) -> Result<()> {
    if args.words == 0 {
        return Err(Error::Config("--words must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let message = random_message(args.words, args.width, &mut rng).map_err(Error::into_config)?;
    let run = classical_ks_run(&message, &mut rng)?;
    let recovered = classical_ks_break(&run.wire)?;
    let delivered = run.received.iter().zip(&message).filter(|(a, b)| a == b).count();
    let broken = recovered.iter().zip(&message).filter(|(a, b)| a == b).count();
    writeln!(out, "words: {} (width {})", args.words, args.width)?;
    writeln!(out, "delivery rate {:.3}", delivered as f64 / args.words as f64)?;
    writeln!(out, "recovery rate {:.3}", broken as f64 / args.words as f64)?;
    Ok(())
}
