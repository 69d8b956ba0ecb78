use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hrl_harness::summary::render_table;
use hrl_harness::{run_experiment, summarize_dir, write_curves, ExperimentConfig, HarnessError, OUTPUT_ROOT_VAR};

/// Option-Interruption experiments.
#[derive(Parser)]
#[command(name = "hrl", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Train every replicate of a config and write metrics.jsonl + meta.json.
    ///
    /// Relative output directories are placed under $HRL_OUTPUT_ROOT when set.
    Train {
        #[arg(long)]
        config: PathBuf,
        /// `key=value`, applied after the file; repeatable.
        #[arg(long = "override", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
        #[arg(long)]
        map: Option<PathBuf>,
        #[arg(long, value_name = "BOOL")]
        observe_blockage: Option<bool>,
        /// `n-step` or `one-step`.
        #[arg(long)]
        termination_td: Option<String>,
        #[arg(long, allow_negative_numbers = true)]
        reward_c_s: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        reward_p_time: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        reward_p_collision: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        reward_r_success: Option<f64>,
        #[arg(long)]
        sensor_range: Option<usize>,
    },
    /// Print the summary table of a metrics directory (or of each child directory).
    Summarize {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = hrl_harness::DEFAULT_WINDOW)]
        window: usize,
    },
    /// Write the across-run mean curve as CSV.
    Curves {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

fn run(cli: Cli) -> Result<(), HarnessError> {
    match cli.command {
        Command::Train {
            config,
            mut overrides,
            map,
            observe_blockage,
            termination_td,
            reward_c_s,
            reward_p_time,
            reward_p_collision,
            reward_r_success,
            sensor_range,
        } => {
            let flags = [
                ("map", map.map(|p| p.display().to_string())),
                ("observe_blockage", observe_blockage.map(|b| b.to_string())),
                ("termination_td", termination_td),
                ("reward_c_s", reward_c_s.map(|x| x.to_string())),
                ("reward_p_time", reward_p_time.map(|x| x.to_string())),
                ("reward_p_collision", reward_p_collision.map(|x| x.to_string())),
                ("reward_r_success", reward_r_success.map(|x| x.to_string())),
                ("sensor_range", sensor_range.map(|x| x.to_string())),
            ];
            overrides.extend(flags.into_iter().filter_map(|(k, v)| v.map(|v| format!("{k}={v}"))));
            let text = std::fs::read_to_string(&config).map_err(|source| HarnessError::Io { path: config, source })?;
            let cfg = ExperimentConfig::load(&text, &overrides)?;
            let root = std::env::var_os(OUTPUT_ROOT_VAR).map(PathBuf::from);
            let dir = cfg.output_dir(root.as_deref());
            let out = run_experiment(&cfg, &dir)?;
            println!("{} records -> {} ({:.1}s)", out.records, out.dir.display(), out.wall_clock.as_secs_f64());
        }
        Command::Summarize { input, window } => {
            print!("{}", render_table(&summarize_dir(&input, window)?, window));
        }
        Command::Curves { input, out } => {
            let rows = write_curves(&input, &out)?;
            println!("{rows} rows -> {}", out.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
