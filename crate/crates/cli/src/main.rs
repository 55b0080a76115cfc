mod input;
mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use sqm_core::audio::DEFAULT_FULLSCALE_DB;
use sqm_core::earfilter::EarTransferTable;
use sqm_core::eval::{Evaluator, Grid, Metric};
use sqm_core::loudness::LoudnessTable;
use sqm_core::roughness::RoughnessWeights;
use sqm_core::{Analyzer, AnalyzerConfig, Execution, Variant};

use input::InputArgs;
use report::{dump, metric_report, DumpStage, Layout};

#[derive(Debug, Parser)]
#[command(name = "sqm", version, about = "Loudness, sharpness, roughness and fluctuation strength on auditory filterbanks")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalArgs {
    /// Filterbank: gt (gammatone) or gc (gammachirp).
    #[arg(long = "fb", global = true, default_value = "gt", value_parser = parse_variant)]
    variant: Variant,
    /// dB SPL of a full-scale sinusoid in audio files.
    #[arg(long, global = true, default_value_t = DEFAULT_FULLSCALE_DB)]
    fullscale_db: f64,
    /// Output path (stdout when omitted; a directory for `eval all`).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Seed for noise stimuli.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Run every stage on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    /// Ear transfer table (`freq_hz gain_db` rows).
    #[arg(long, global = true, env = "SQM_EAR_TABLE")]
    ear_table: Option<PathBuf>,
    /// Loudness parameter table (`cam g_db a alpha e_thrq_db` rows).
    #[arg(long, global = true, env = "SQM_LOUDNESS_TABLE")]
    loudness_table: Option<PathBuf>,
    /// Roughness channel weights (`cam weight` rows).
    #[arg(long, global = true, env = "SQM_ROUGHNESS_WEIGHTS")]
    roughness_weights: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Total loudness in sone.
    Loudness(MetricArgs),
    /// Sharpness in acum.
    Sharpness(MetricArgs),
    /// Roughness in asper.
    Roughness(MetricArgs),
    /// Fluctuation strength in vacil.
    Fluctuation(MetricArgs),
    /// Run an evaluation grid on both filterbanks.
    Eval {
        /// Grid name, or `all`.
        grid: String,
    },
    /// Export an intermediate stage.
    Dump {
        #[arg(value_enum)]
        stage: DumpStage,
        #[command(flatten)]
        input: InputArgs,
        /// Modulation band for the bandpassed, envelopes and correlations stages.
        #[arg(long, value_enum, default_value_t = Band::Roughness)]
        band: Band,
        #[arg(long, value_enum, default_value_t = Layout::Long)]
        layout: Layout,
    },
}

#[derive(Debug, Args)]
pub struct MetricArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Emit the time series instead of the scalar.
    #[arg(long)]
    series: bool,
    /// Emit per-channel values (window means) instead of the scalar.
    #[arg(long, conflicts_with = "series")]
    specific: bool,
    /// Also export an intermediate stage.
    #[arg(long, value_enum)]
    dump: Option<DumpStage>,
    /// Where `--dump` writes (default `<stage>.csv`).
    #[arg(long, requires = "dump")]
    dump_out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Band {
    Roughness,
    Fluctuation,
}

fn parse_variant(s: &str) -> Result<Variant, String> {
    s.parse().map_err(|e: sqm_core::Error| e.to_string())
}

impl GlobalArgs {
    fn execution(&self) -> Execution {
        if self.sequential {
            Execution::Sequential
        } else {
            Execution::default()
        }
    }

    fn config(&self, variant: Variant, sample_rate: f64) -> Result<AnalyzerConfig> {
        let mut config = AnalyzerConfig::new(variant).with_sample_rate(sample_rate).with_execution(self.execution());
        if let Some(p) = &self.ear_table {
            config.ear_table = EarTransferTable::from_file(p).with_context(|| format!("ear table {}", p.display()))?;
        }
        if let Some(p) = &self.loudness_table {
            config.loudness.table =
                LoudnessTable::from_file(p).with_context(|| format!("loudness table {}", p.display()))?;
        }
        if let Some(p) = &self.roughness_weights {
            config.roughness.weights =
                RoughnessWeights::from_file(p).with_context(|| format!("roughness weights {}", p.display()))?;
        }
        Ok(config)
    }

    fn analyzer(&self, variant: Variant, sample_rate: f64) -> Result<Analyzer> {
        Ok(Analyzer::new(self.config(variant, sample_rate)?)?)
    }
}

fn write_output(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run_metric(global: &GlobalArgs, metric: Metric, args: &MetricArgs) -> Result<()> {
    let signal = args.input.signal(global.fullscale_db, global.seed)?;
    let analyzer = global.analyzer(global.variant, signal.sample_rate())?;
    let text = metric_report(&analyzer, metric, &signal, args, global.format)?;
    write_output(global.out.as_deref(), &text)?;
    if let Some(stage) = args.dump {
        let path = args.dump_out.clone().unwrap_or_else(|| PathBuf::from(format!("{}.csv", stage.name())));
        let band = match metric {
            Metric::Fluctuation => Band::Fluctuation,
            _ => Band::Roughness,
        };
        let csv = dump(&analyzer, stage, &signal, band, Layout::Long)?;
        fs::write(&path, csv).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn run_eval(global: &GlobalArgs, name: &str) -> Result<()> {
    let grids: Vec<Grid> = if name == "all" { Grid::ALL.to_vec() } else { vec![name.parse()?] };
    let fs = sqm_core::signal::DEFAULT_SAMPLE_RATE;
    let evaluator = Evaluator::new(
        global.analyzer(Variant::Gammatone, fs)?,
        global.analyzer(Variant::Gammachirp, fs)?,
    )?;
    let ext = match global.format {
        Format::Csv => "csv",
        Format::Json => "json",
    };
    if grids.len() > 1 {
        let Some(dir) = &global.out else { bail!("`eval all` needs --out <directory>") };
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    for grid in grids {
        let result = evaluator.evaluate(grid, global.seed)?;
        let text = match global.format {
            Format::Csv => result.to_csv(),
            Format::Json => serde_json::to_string_pretty(&result)? + "\n",
        };
        if name == "all" {
            let path = global.out.as_ref().expect("checked above").join(format!("{}.{ext}", grid.name()));
            write_output(Some(&path), &text)?;
            eprintln!("wrote {}", path.display());
        } else {
            write_output(global.out.as_deref(), &text)?;
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    let g = &cli.global;
    match &cli.command {
        Command::Loudness(a) => run_metric(g, Metric::Loudness, a),
        Command::Sharpness(a) => run_metric(g, Metric::Sharpness, a),
        Command::Roughness(a) => run_metric(g, Metric::Roughness, a),
        Command::Fluctuation(a) => run_metric(g, Metric::Fluctuation, a),
        Command::Eval { grid } => run_eval(g, grid),
        Command::Dump { stage, input, band, layout } => {
            let signal = input.signal(g.fullscale_db, g.seed)?;
            let analyzer = g.analyzer(g.variant, signal.sample_rate())?;
            write_output(g.out.as_deref(), &dump(&analyzer, *stage, &signal, *band, *layout)?)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
