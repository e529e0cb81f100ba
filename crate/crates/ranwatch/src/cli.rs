//! Command-line surface: forge datasets, train the baseline, run
//! detections, emit reports.
//!
//! Exit codes: 0 success (an autoencoder crash mid-run is a *result*, not a
//! failure), 1 usage or config problems, 2 I/O problems, 3 backend
//! unreachable.

use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::ae::{AeError, AeModel};
use crate::config::{ConfigError, RunConfig};
use crate::dataset::{read_dataset, write_dataset, DatasetError};
use crate::eval::{
    render_table, run_llm_experiment, sweep_ae, sweep_llm, write_combined_csv,
    write_report_json, EvalError, EvalOptions, EvalReport,
};
use crate::forge::{forge_dataset, ForgeError};
use crate::llm::{Backend, BackendError, MockRuleBackend, Prompt, PromptTemplate, RemoteBackend, ScriptedBackend};
use crate::message::{Label, Layer3Message, MessageCatalog};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_IO: i32 = 2;
pub const EXIT_BACKEND: i32 = 3;

#[derive(Parser)]
#[command(
    name = "ranwatch",
    version,
    about = "Desk-scale O-RAN SDL testbed: forge Layer-3 traffic with Blind DoS and \
             hypoglyph attacks, then compare autoencoder and LLM-backed detectors"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Synthesize a dataset: benign UE sessions, Blind DoS injections,
    /// hypoglyphed messages.
    Forge(ForgeArgs),
    /// Train per-window-size autoencoder models on the first 700 normal
    /// messages.
    TrainAe(TrainArgs),
    /// Run a detector over a dataset and write evaluation reports.
    Detect(DetectArgs),
}

#[derive(Args)]
struct ForgeArgs {
    /// Output dataset file (JSON lines)
    #[arg(long)]
    out: PathBuf,
    /// Run config file (TOML)
    #[arg(long)]
    config: Option<PathBuf>,
    /// RNG seed override
    #[arg(long)]
    seed: Option<u64>,
    /// Number of UEs
    #[arg(long)]
    ue: Option<u64>,
    /// Total messages including attacks
    #[arg(long)]
    total: Option<usize>,
    /// Blind DoS injections
    #[arg(long)]
    attacks: Option<usize>,
    /// Attack messages to hypoglyph
    #[arg(long)]
    hypoglyph_attacks: Option<usize>,
    /// Normal messages to hypoglyph
    #[arg(long)]
    hypoglyph_normals: Option<usize>,
}

#[derive(Args)]
struct TrainArgs {
    /// Input dataset file
    #[arg(long)]
    dataset: PathBuf,
    /// Directory for model files
    #[arg(long)]
    out_dir: PathBuf,
    /// Train a single window size
    #[arg(long)]
    window: Option<usize>,
    /// Train all window sizes 1..=10
    #[arg(long)]
    all: bool,
    /// Run config file (TOML)
    #[arg(long)]
    config: Option<PathBuf>,
    /// RNG seed override
    #[arg(long)]
    seed: Option<u64>,
    /// Gradient-descent epochs
    #[arg(long)]
    epochs: Option<usize>,
    /// Gradient-descent step size
    #[arg(long)]
    learning_rate: Option<f64>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum DetectorArg {
    Ae,
    Llm,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum BackendArg {
    Scripted,
    Mock,
    Remote,
}

#[derive(Args)]
struct DetectArgs {
    /// Input dataset file
    #[arg(long)]
    dataset: PathBuf,
    /// Which detector to run
    #[arg(long, value_enum)]
    detector: DetectorArg,
    /// Classification backend (LLM detector only)
    #[arg(long, value_enum)]
    backend: Option<BackendArg>,
    /// Directory holding trained autoencoder models (AE detector only)
    #[arg(long)]
    models: Option<PathBuf>,
    /// Response fixture file (scripted backend only)
    #[arg(long)]
    fixture: Option<PathBuf>,
    /// Run a single window size
    #[arg(long)]
    window: Option<usize>,
    /// Run all window sizes 1..=10
    #[arg(long)]
    all: bool,
    /// Directory for report files
    #[arg(long)]
    out_dir: PathBuf,
    /// Run config file (TOML)
    #[arg(long)]
    config: Option<PathBuf>,
    /// Evaluate the LLM on the same seq >= 700 split as the autoencoder
    #[arg(long)]
    align_splits: bool,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Config(String),
    Io(String),
    Backend(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Config(_) => EXIT_USAGE,
            CliError::Io(_) => EXIT_IO,
            CliError::Backend(_) => EXIT_BACKEND,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Config(m) | CliError::Io(m) | CliError::Backend(m) => m,
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        match e {
            ConfigError::Io(io) => CliError::Io(io.to_string()),
            other => CliError::Config(other.to_string()),
        }
    }
}

impl From<ForgeError> for CliError {
    fn from(e: ForgeError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<DatasetError> for CliError {
    fn from(e: DatasetError) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<AeError> for CliError {
    fn from(e: AeError) -> Self {
        match e {
            AeError::Io(io) => CliError::Io(io.to_string()),
            AeError::Format(msg) => CliError::Io(msg),
            other => CliError::Config(other.to_string()),
        }
    }
}

impl From<EvalError> for CliError {
    fn from(e: EvalError) -> Self {
        match e {
            EvalError::Io(io) => CliError::Io(io.to_string()),
            other => CliError::Config(other.to_string()),
        }
    }
}

/// Parses the process arguments and runs one subcommand. Returns the
/// process exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = err.print();
            return code;
        }
    };
    let result = match cli.command {
        Command::Forge(args) => cmd_forge(args),
        Command::TrainAe(args) => cmd_train(args),
        Command::Detect(args) => cmd_detect(args),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(err) => {
            eprintln!("error: {}", err.message());
            err.exit_code()
        }
    }
}

fn cmd_forge(args: ForgeArgs) -> Result<(), CliError> {
    let mut config = RunConfig::load(args.config.as_deref())?;
    if let Some(seed) = args.seed {
        config.forge.seed = seed;
    }
    if let Some(ue) = args.ue {
        config.forge.n_ue = ue;
    }
    if let Some(total) = args.total {
        config.forge.target_total = total;
    }
    if let Some(attacks) = args.attacks {
        config.forge.n_attacks = attacks;
    }
    if let Some(n) = args.hypoglyph_attacks {
        config.forge.n_hypoglyph_attacks = n;
    }
    if let Some(n) = args.hypoglyph_normals {
        config.forge.n_hypoglyph_normals = n;
    }

    let forged = forge_dataset(&config.forge)?;
    write_dataset(&forged.messages, &args.out)?;
    println!(
        "wrote {} messages to {} ({} BlindDoS, {} hypoglyphed: seqs {:?})",
        forged.messages.len(),
        args.out.display(),
        forged.attack_count(),
        forged.manipulated_count(),
        forged.hypoglyph_seqs,
    );
    Ok(())
}

fn window_sizes(window: Option<usize>, all: bool) -> Result<Vec<usize>, CliError> {
    match (window, all) {
        (Some(w), false) => Ok(vec![w]),
        (None, true) => Ok((1..=10).collect()),
        _ => Err(CliError::Usage(
            "pass exactly one of --window <W> or --all".to_string(),
        )),
    }
}

/// The AE training set: the first 700 normal messages of the stream, with
/// attacks filtered out.
fn training_prefix(dataset: &[Layer3Message]) -> Vec<crate::message::MessageView> {
    dataset
        .iter()
        .filter(|m| m.label == Label::Normal)
        .take(crate::forge::TRAIN_SPLIT as usize)
        .map(|m| m.view())
        .collect()
}

fn model_path(dir: &Path, w: usize) -> PathBuf {
    dir.join(format!("ae_w{w}.json"))
}

fn cmd_train(args: TrainArgs) -> Result<(), CliError> {
    let mut config = RunConfig::load(args.config.as_deref())?;
    if let Some(seed) = args.seed {
        config.forge.seed = seed;
    }
    if let Some(epochs) = args.epochs {
        config.ae.epochs = epochs;
    }
    if let Some(lr) = args.learning_rate {
        config.ae.learning_rate = lr;
    }
    config.validate()?;

    let windows = window_sizes(args.window, args.all)?;
    let dataset = read_dataset(&args.dataset)?;
    let training = training_prefix(&dataset);
    println!("training on {} normal messages from {}", training.len(), args.dataset.display());
    std::fs::create_dir_all(&args.out_dir).map_err(|e| CliError::Io(e.to_string()))?;

    for w in windows {
        let model = AeModel::train(&training, w, &config.ae, config.forge.seed)?;
        let path = model_path(&args.out_dir, w);
        model.save(&path)?;
        println!(
            "w={w}: threshold {:.6e}, final loss {:.3e} after {} epochs -> {}",
            model.threshold,
            model.final_loss,
            model.epochs_run,
            path.display()
        );
    }
    Ok(())
}

fn load_models(dir: &Path, windows: &[usize]) -> Result<Vec<AeModel>, CliError> {
    let mut models = Vec::new();
    for &w in windows {
        let path = model_path(dir, w);
        if !path.exists() {
            return Err(CliError::Config(format!(
                "model file {} not found; run `ranwatch train-ae` first",
                path.display()
            )));
        }
        models.push(AeModel::load(&path)?);
    }
    Ok(models)
}

fn make_llm_backend(
    kind: BackendArg,
    config: &RunConfig,
    fixture: Option<&Path>,
) -> Result<Box<dyn Backend>, CliError> {
    match kind {
        BackendArg::Scripted => {
            let path = fixture.ok_or_else(|| {
                CliError::Usage("--backend scripted requires --fixture <FILE>".to_string())
            })?;
            Ok(Box::new(
                ScriptedBackend::from_file(path).map_err(|e| CliError::Io(e.to_string()))?,
            ))
        }
        BackendArg::Mock => Ok(Box::new(MockRuleBackend::new(&MessageCatalog::default()))),
        BackendArg::Remote => Ok(Box::new(
            RemoteBackend::new(config.backend.clone())
                .map_err(|e| CliError::Config(e.to_string()))?,
        )),
    }
}

/// One throwaway request to fail fast with a distinct exit code when the
/// inference server is down.
fn preflight_remote(config: &RunConfig) -> Result<(), CliError> {
    let mut backend = RemoteBackend::new(config.backend.clone())
        .map_err(|e| CliError::Config(e.to_string()))?;
    let probe = Prompt {
        system: "Connectivity check.".to_string(),
        user: "Respond with the single word: Normal".to_string(),
        template_version: "preflight".to_string(),
    };
    match backend.complete(&probe) {
        Ok(_) => Ok(()),
        Err(BackendError::Transport(msg)) => Err(CliError::Backend(format!(
            "inference server unreachable at {}: {msg}",
            config.backend.endpoint
        ))),
    }
}

fn write_reports(reports: &[EvalReport], out_dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(out_dir).map_err(|e| CliError::Io(e.to_string()))?;
    for report in reports {
        write_report_json(report, out_dir)?;
    }
    write_combined_csv(reports, &out_dir.join("reports.csv"))?;
    let table = render_table(reports);
    std::fs::write(out_dir.join("reports.txt"), &table)
        .map_err(|e| CliError::Io(e.to_string()))?;
    print!("{table}");
    Ok(())
}

fn cmd_detect(args: DetectArgs) -> Result<(), CliError> {
    let config = RunConfig::load(args.config.as_deref())?;
    let windows = window_sizes(args.window, args.all)?;
    let dataset = read_dataset(&args.dataset)?;

    let template = match &config.template {
        Some(path) => PromptTemplate::from_file(path).map_err(CliError::Config)?,
        None => PromptTemplate::default(),
    };
    let mut opts = if args.align_splits || config.align_splits {
        EvalOptions::aligned()
    } else {
        EvalOptions::default()
    };
    opts.max_retries = config.backend.retries;
    opts.seed = Some(config.forge.seed);
    opts.run_config = Some(config.clone());

    let reports = match args.detector {
        DetectorArg::Ae => {
            let dir = args.models.as_deref().ok_or_else(|| {
                CliError::Usage("--detector ae requires --models <DIR>".to_string())
            })?;
            let models = load_models(dir, &windows)?;
            let reports = sweep_ae(&dataset, &models, &opts);
            for report in &reports {
                if let Some(seq) = report.terminated_early {
                    println!(
                        "ae w={}: run terminated at seq {seq}: {}",
                        report.window_size,
                        report.termination_reason.as_deref().unwrap_or("encoding failure")
                    );
                }
            }
            reports
        }
        DetectorArg::Llm => {
            let kind = args.backend.ok_or_else(|| {
                CliError::Usage("--detector llm requires --backend <scripted|mock|remote>".to_string())
            })?;
            if kind == BackendArg::Remote {
                preflight_remote(&config)?;
            }
            if windows.len() == 1 {
                let mut backend = make_llm_backend(kind, &config, args.fixture.as_deref())?;
                vec![run_llm_experiment(&dataset, backend.as_mut(), &template, windows[0], &opts)?]
            } else {
                // one fresh backend per window size, all constructed up front
                let mut backends = windows
                    .iter()
                    .map(|_| make_llm_backend(kind, &config, args.fixture.as_deref()))
                    .collect::<Result<std::collections::VecDeque<_>, _>>()?;
                sweep_llm(&dataset, &template, &opts, |_| {
                    backends.pop_front().expect("one backend per window size")
                })
            }
        }
    };

    write_reports(&reports, &args.out_dir)?;
    Ok(())
}
