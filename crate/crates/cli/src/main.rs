//! `legpol` — train, compare, and extrapolate state legislature
//! polarization regressors over state-year panel files.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use legpol_cli::commands;
use legpol_cli::config::{PipelineConfig, TaskSelector};

/// Exit code for malformed inputs or configuration.
const EXIT_VALIDATION: u8 = 1;
/// Exit code for runtime/model failures.
const EXIT_RUNTIME: u8 = 2;

#[derive(Parser)]
#[command(
    name = "legpol",
    about = "Regression and model comparison over state-year polarization panels",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Clone)]
struct CommonArgs {
    /// Labeled panel file (state, year, features, labels).
    #[arg(long)]
    input: PathBuf,

    /// Unlabeled future-year panel file.
    #[arg(long)]
    future: Option<PathBuf>,

    /// Task selector.
    #[arg(long, value_enum, default_value = "both")]
    task: TaskSelector,

    /// Master seed; every random stage derives a named sub-stream.
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Training fraction of the holdout split.
    #[arg(long, default_value_t = 0.8)]
    train_fraction: f64,

    /// Non-linearity flag tolerance (Spearman minus Pearson).
    #[arg(long, default_value_t = 0.05)]
    lambda: f64,

    /// Feature-selection threshold on max |r| across the two labels.
    #[arg(long, default_value_t = 0.1)]
    threshold: f64,

    /// JSON file with SVR/MLP hyperparameter grids.
    #[arg(long)]
    grid: Option<PathBuf>,

    /// Explicit comma-separated feature list (skips selection).
    #[arg(long, value_delimiter = ',')]
    features: Option<Vec<String>>,

    /// Output root; LEGPOL_OUT overrides the default.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl CommonArgs {
    fn into_config(self) -> PipelineConfig {
        let out_dir = self
            .out
            .or_else(|| std::env::var_os("LEGPOL_OUT").map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("runs"));
        PipelineConfig {
            input: self.input,
            future: self.future,
            task: self.task,
            seed: self.seed,
            train_fraction: self.train_fraction,
            lambda: self.lambda,
            threshold: self.threshold,
            grid: self.grid,
            features: self.features,
            out_dir,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check a panel file: shape, labels, ordering, split sizes.
    Validate(CommonArgs),
    /// Correlation pairs, non-linearity flags, feature selection,
    /// heat-map matrices.
    Explore(CommonArgs),
    /// Split, scale, fit OLS/SVM/ANN, write models and reports.
    Train(CommonArgs),
    /// Predict an unlabeled year with each task's best model.
    Predict(CommonArgs),
    /// Re-run the command stored in a run manifest.
    Replay {
        /// Path to a run_manifest.json.
        manifest: PathBuf,
    },
}

fn run(cli: Cli) -> legpol_core::Result<()> {
    match cli.command {
        Command::Validate(args) => {
            let report = commands::cmd_validate(&args.into_config())?;
            print!("{}", report.to_text());
        }
        Command::Explore(args) => {
            let outputs = commands::cmd_explore(&args.into_config())?;
            for report in &outputs.flag_reports {
                let flagged = report.flagged_features();
                println!(
                    "{}: {} feature(s) flagged at lambda {}{}",
                    report.label_name,
                    flagged.len(),
                    report.lambda,
                    if flagged.is_empty() {
                        String::new()
                    } else {
                        format!(" ({})", flagged.join(", "))
                    }
                );
            }
            println!(
                "selected {} feature(s): {}",
                outputs.selected.len(),
                outputs.selected.join(", ")
            );
        }
        Command::Train(args) => {
            let outputs = commands::cmd_train(&args.into_config())?;
            for task in &outputs.tasks {
                print!("{}", task.eval.to_text_table());
                for w in &task.warnings {
                    eprintln!("warning ({}): {w}", task.task);
                }
            }
        }
        Command::Predict(args) => {
            let outputs = commands::cmd_predict(&args.into_config())?;
            for set in &outputs.sets {
                let flagged = set.rows.iter().filter(|r| r.flagged).count();
                println!(
                    "{}: {} predictions with {} ({} flagged negative)",
                    set.task,
                    set.rows.len(),
                    set.model_id,
                    flagged
                );
                for w in &set.warnings {
                    eprintln!("warning ({}): {w}", set.task);
                }
            }
        }
        Command::Replay { manifest } => {
            let command = commands::cmd_replay(&manifest)?;
            println!("replayed `{command}`");
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help/version requests are successes; usage mistakes are
            // validation failures.
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    ExitCode::SUCCESS
                }
                _ => ExitCode::from(EXIT_VALIDATION),
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            let mut source = std::error::Error::source(&e);
            while let Some(cause) = source {
                eprintln!("  caused by: {cause}");
                source = cause.source();
            }
            if e.is_validation() {
                ExitCode::from(EXIT_VALIDATION)
            } else {
                ExitCode::from(EXIT_RUNTIME)
            }
        }
    }
}
