use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use wwgm_cli::config::{threads_from_env, Command, ConfigError, Overrides, ScenarioConfig};

#[derive(Parser)]
#[command(name = "wwgm", version, about = "Phase-space quantum mechanics runner")]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// Scenario file of `section.key = value` lines.
    #[arg(long)]
    config: PathBuf,
    /// Output directory; overrides `output.dir`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed of the randomized checks; overrides `seed`.
    #[arg(long)]
    seed: Option<u64>,
}

fn load(cli: &Cli) -> Result<(ScenarioConfig, String), ConfigError> {
    let threads = threads_from_env(std::env::var("WWGM_THREADS").ok().as_deref())?;
    if let Some(n) = threads {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().expect("global pool is built once");
    }
    let text = std::fs::read_to_string(&cli.config).map_err(|source| ConfigError::Io { path: cli.config.clone(), source })?;
    let overrides = Overrides { output_dir: cli.out.clone(), seed: cli.seed };
    Ok((ScenarioConfig::parse(&text, cli.command, &overrides)?, text))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (cfg, text) = match load(&cli) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("config error: {e}");
            return ExitCode::from(2);
        }
    };
    match wwgm_cli::run(&cfg, &text, Some(&cli.config)) {
        Ok(summary) => {
            if let Ok(report) = std::fs::read_to_string(&summary.report) {
                print!("{report}");
            }
            if summary.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
