use clap::{Args, Parser, Subcommand};
use qwtopo_cli::config::{self, ExperimentConfig};
use qwtopo_cli::error::{CliError, Result};
use qwtopo_cli::manifest::{write_run, ManifestInput};
use qwtopo_cli::replot::replot;
use qwtopo_cli::run::{execute, Format};
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

/// Split-step quantum walk experiments: scattering invariants, disorder
/// ensembles, edge localization and apparatus emulation.
#[derive(Parser)]
#[command(name = "qwtopo", version)]
struct Cli {
    /// Worker threads for the simulation pool (defaults to all cores).
    #[arg(long, env = "QWTOPO_THREADS", global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment and write data, plots and a manifest.
    Run(RunArgs),
    /// Validate a config and estimate its cost without running it.
    Verify {
        #[arg(long)]
        config: PathBuf,
    },
    /// Regenerate plots from the data files of a run directory.
    Replot { dir: PathBuf },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    /// Output directory; overrides the config's `output` entry.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Master seed; overrides the config's `seed`.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

fn load_checked(path: &Path) -> Result<(ExperimentConfig, config::Validation)> {
    let (cfg, _) = config::load(path)?;
    let validation = cfg.validate()?;
    Ok((cfg, validation))
}

fn config_dir(path: &Path) -> PathBuf {
    path.parent().map(Path::to_path_buf).unwrap_or_default()
}

fn run(args: RunArgs) -> Result<()> {
    let started = chrono::Utc::now().to_rfc3339();
    let (mut cfg, validation) = load_checked(&args.config)?;
    for w in &validation.warnings {
        eprintln!("warning: {w}");
    }
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    let base = config_dir(&args.config);
    let out_dir = match (&args.out, &cfg.output) {
        (Some(dir), _) => dir.clone(),
        (None, Some(dir)) => base.join(dir),
        (None, None) => PathBuf::from("qwtopo_out"),
    };
    let outputs = execute(&cfg, args.format, &base)?;
    let canonical = serde_json::to_string(&cfg).expect("config serializes");
    let manifest = write_run(
        &out_dir,
        &outputs.artifacts,
        ManifestInput {
            experiment: cfg.experiment.section(),
            canonical_config: &canonical,
            seed: cfg.seed,
            format: args.format,
            tolerance: outputs.tolerance,
            started,
        },
    )?;
    println!("wrote {} files to {}", manifest.files.len() + 1, out_dir.display());
    Ok(())
}

fn verify(path: &Path) -> Result<()> {
    let (cfg, validation) = load_checked(path)?;
    let (window, sims) = cfg.estimate();
    println!("ok: experiment {}, window {window} sites, about {sims} simulations", cfg.experiment.section());
    for w in &validation.warnings {
        println!("warning: {w}");
    }
    Ok(())
}

fn dispatch(cli: Cli) -> Result<()> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::config("--threads", "must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::config("--threads", e.to_string()))?;
    }
    match cli.command {
        Command::Run(args) => run(args),
        Command::Verify { config } => verify(&config),
        Command::Replot { dir } => {
            let written = replot(&dir)?;
            let mut stdout = std::io::stdout().lock();
            for path in written {
                if writeln!(stdout, "{}", path.display()).is_err() {
                    break;
                }
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
