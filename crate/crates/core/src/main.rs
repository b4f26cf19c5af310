use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use histotex::cli::{self, error_status, ExitStatus, RunConfig};

#[derive(Parser)]
#[command(name = "histotex", version, about = "Texture features, significance screening and nested cross-validated model selection for small image sets")]
struct Cli {
    /// More log output (repeat for debug)
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Default)]
struct Common {
    /// Configuration file (key = value lines or a JSON object)
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (defaults to all cores)
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Extract the 39 texture features of every manifest image
    Extract {
        #[arg(long)]
        manifest: PathBuf,
        /// Target size WxH, or "native" to keep each image's size
        #[arg(long)]
        size: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Kruskal-Wallis screening with Benjamini-Hochberg adjustment
    Stats {
        /// Features CSV written by `extract`
        #[arg(long)]
        features: PathBuf,
        #[arg(long)]
        alpha: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Nested cross-validation of model designs
    Run {
        #[arg(long)]
        manifest: PathBuf,
        /// Number of folds
        #[arg(long)]
        k: Option<usize>,
        /// Optimization trials per search
        #[arg(long)]
        b: Option<usize>,
        /// Designs such as "FS,DC,SVM-LK", separated by ';', or "all"
        #[arg(long)]
        designs: Option<String>,
        #[arg(long)]
        size: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Write a synthetic three-class texture set and its manifest
    Synth {
        #[arg(long)]
        per_class: Option<usize>,
        #[arg(long)]
        width: Option<usize>,
        #[arg(long)]
        height: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
}

fn build_config(common: &Common, overrides: &[(&str, Option<String>)]) -> histotex::Result<RunConfig> {
    let mut cfg = RunConfig::default();
    if let Some(path) = &common.config {
        cfg.apply_file(path)?;
    }
    let flags = [
        ("out", common.out.as_ref().map(|p| p.display().to_string())),
        ("seed", common.seed.map(|s| s.to_string())),
        ("workers", common.workers.map(|w| w.to_string())),
    ];
    for (key, value) in flags.iter().chain(overrides) {
        if let Some(v) = value {
            cfg.set(key, v)?;
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

fn execute(command: Command) -> histotex::Result<cli::CommandReport> {
    match command {
        Command::Extract { manifest, size, common } => {
            let cfg = build_config(&common, &[("size", size)])?;
            cli::with_workers(cfg.workers, || cli::cmd_extract(&manifest, &cfg))?
        }
        Command::Stats { features, alpha, common } => {
            let cfg = build_config(&common, &[("alpha", alpha.map(|a| a.to_string()))])?;
            cli::with_workers(cfg.workers, || cli::cmd_stats(&features, &cfg))?
        }
        Command::Run {
            manifest,
            k,
            b,
            designs,
            size,
            common,
        } => {
            let cfg = build_config(
                &common,
                &[
                    ("k", k.map(|v| v.to_string())),
                    ("b", b.map(|v| v.to_string())),
                    ("designs", designs),
                    ("size", size),
                ],
            )?;
            cli::with_workers(cfg.workers, || cli::cmd_run(&manifest, &cfg))?
        }
        Command::Synth {
            per_class,
            width,
            height,
            common,
        } => {
            let cfg = build_config(
                &common,
                &[
                    ("per_class", per_class.map(|v| v.to_string())),
                    ("width", width.map(|v| v.to_string())),
                    ("height", height.map(|v| v.to_string())),
                ],
            )?;
            cli::cmd_synth(&cfg)
        }
    }
}

fn main() -> ExitCode {
    let args = match Cli::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { ExitStatus::Usage as u8 } else { 0 });
        }
    };
    let level = match args.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();

    match execute(args.command) {
        Ok(report) => {
            for p in &report.outputs {
                log::info!("wrote {}", p.display());
            }
            if report.skipped > 0 {
                log::warn!("{} input(s) or design(s) were skipped", report.skipped);
            }
            ExitCode::from(report.status() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(error_status(&e) as u8)
        }
    }
}
