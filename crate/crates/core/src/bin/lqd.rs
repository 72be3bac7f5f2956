use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use lqd::expcli::{self, ExperimentConfig};
use lqd::Result;

/// Learned quality-diversity experiments.
#[derive(Parser)]
#[command(name = "lqd", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an algorithm for the configured number of replications.
    Run { config: PathBuf },
    /// Meta-train a learned competition.
    MetaTrain { config: PathBuf },
    /// Rank-sum comparison of final-generation metrics across run directories.
    Compare {
        #[arg(required = true, num_args = 2..)]
        dirs: Vec<PathBuf>,
        #[arg(long, default_value = "max_fitness")]
        metric: String,
        /// Write the table here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Competition-fitness grid over a 2-D descriptor box.
    Landscape { config: PathBuf },
    /// Learned competition with projection vs. random descriptors vs. GA.
    Ablation { config: PathBuf },
    /// Print the benchmark function table.
    ListFunctions,
}

fn execute(cli: Cli) -> Result<()> {
    let workers = expcli::configure_workers()?;
    match cli.command {
        Command::Run { config } => {
            let cfg = ExperimentConfig::load(&config)?;
            let recs = expcli::cmd_run(&cfg)?;
            eprintln!(
                "{} replications written to {} ({workers} workers)",
                recs.len(),
                cfg.output_dir.display()
            );
        }
        Command::MetaTrain { config } => {
            let cfg = ExperimentConfig::load(&config)?;
            let out = expcli::cmd_meta_train(&cfg)?;
            eprintln!(
                "best parameters from meta-generation {} written to {}",
                out.best_meta_gen,
                cfg.output_dir.display()
            );
        }
        Command::Compare { dirs, metric, out } => {
            let rows = expcli::cmd_compare(&dirs, &metric)?;
            let table = expcli::render_comparison(&rows, &metric);
            match out {
                Some(p) => std::fs::write(&p, table).map_err(|e| lqd::Error::io(p, e))?,
                None => print!("{table}"),
            }
        }
        Command::Landscape { config } => {
            let cfg = ExperimentConfig::load(&config)?;
            let grid = expcli::cmd_landscape(&cfg)?;
            eprintln!("{} grid points written to {}", grid.len(), cfg.output_dir.display());
        }
        Command::Ablation { config } => {
            let cfg = ExperimentConfig::load(&config)?;
            expcli::cmd_ablation(&cfg)?;
            eprintln!("ablation arms written under {}", cfg.output_dir.display());
        }
        Command::ListFunctions => print!("{}", expcli::list_functions_table()),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
