use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use opq::config::Command;
use opq::{run, RunRequest, EXIT_CONFIG};

#[derive(Parser)]
#[command(
    name = "opq",
    version,
    about = "Pairing ground states, phase stiffness, circuit parameters and qubit spectra"
)]
struct Cli {
    /// Raise log verbosity (-v info, -vv per-iteration solver lines).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Execute a JSON run config.
    Run {
        config: PathBuf,
        #[arg(long)]
        output_dir: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Print the JSON schema of a command's `params` block.
    Schema { command: Command },
}

fn init_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var("OPQ_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| format!("OPQ_THREADS must be a non-negative integer, got {raw:?}"))?;
    if n > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| e.to_string())?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    env_logger::Builder::new()
        .filter_level(level)
        .parse_default_env()
        .init();

    match cli.command {
        Cmd::Schema { command } => {
            println!(
                "{}",
                serde_json::to_string_pretty(&command.schema()).expect("schema serializes")
            );
            ExitCode::SUCCESS
        }
        Cmd::Run {
            config,
            output_dir,
            seed,
        } => {
            if let Err(e) = init_threads() {
                eprintln!("error: {e}");
                return ExitCode::from(EXIT_CONFIG);
            }
            let summary = run(&RunRequest {
                config,
                output_dir,
                seed,
            });
            if let Some(m) = &summary.message {
                eprintln!("error: {m}");
            }
            for f in &summary.files {
                log::info!("wrote {}", f.display());
            }
            ExitCode::from(summary.exit_code)
        }
    }
}
