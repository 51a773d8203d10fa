use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use saen::harness::{
    load_scenario, parse_list, parse_methods, run_experiment_with, trial_paths, write_report, Execution,
    ExperimentConfig, Method,
};
use saen::{mbc, AlphaGrid, PathMode};

#[derive(Parser)]
#[command(name = "saen", version, about = "Single-snapshot compressive beamforming experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a Monte-Carlo experiment and write JSON and CSV results.
    Run {
        /// Preset 1-7 or a scenario JSON file.
        #[arg(long)]
        setup: String,
        /// SNR in dB, or a comma-separated list.
        #[arg(long, default_value = "20")]
        snr: String,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Comma-separated subset of saen,aen_lse,aen_n,aen_3k,en,lasso,omp,cosamp.
        #[arg(long, default_value = "saen,en,lasso,omp,cosamp")]
        methods: String,
        /// Comma-separated, strictly decreasing, starting at 1.
        #[arg(long)]
        alpha_grid: Option<String>,
        /// Include per-trial records in the JSON.
        #[arg(long)]
        per_trial: bool,
        #[arg(long, value_enum, default_value_t = Mode::Linear)]
        path_mode: Mode,
        /// Run trials on one thread.
        #[arg(long)]
        serial: bool,
        /// JSON output path; the CSV goes next to it with a .csv extension.
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the maximal basis coherence of a set-up.
    Mbc {
        #[arg(long)]
        setup: String,
    },
    /// Dump the knot paths of one trial as JSON.
    Path {
        #[arg(long)]
        setup: String,
        #[arg(long, default_value_t = 20.0)]
        snr: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Mode::Linear)]
        path_mode: Mode,
        /// Write to a file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Linear,
    Exact,
}

impl From<Mode> for PathMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Linear => PathMode::Linear,
            Mode::Exact => PathMode::Exact,
        }
    }
}

const EXIT_CONFIG: u8 = 1;
const EXIT_ALL_FAILED: u8 = 2;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_CONFIG)
        }
    }
}

fn run(command: Command) -> saen::Result<u8> {
    match command {
        Command::Run {
            setup,
            snr,
            trials,
            seed,
            methods,
            alpha_grid,
            per_trial,
            path_mode,
            serial,
            out,
        } => {
            let methods: Vec<Method> = parse_methods(&methods)?;
            let mut config = ExperimentConfig::new(load_scenario(&setup)?, parse_list(&snr)?, trials, methods, seed);
            if let Some(grid) = alpha_grid {
                config.alpha_grid = AlphaGrid::new(parse_list(&grid)?)?;
            }
            config.per_trial = per_trial;
            config.path_mode = path_mode.into();
            let execution = if serial { Execution::Serial } else { Execution::Parallel };
            let report = run_experiment_with(&config, execution)?;
            write_report(&report, &out)?;
            for r in &report.results {
                for (method, m) in &r.methods {
                    let rmse = m.rmse.map_or("-".to_string(), |v| format!("{v:.3}"));
                    println!("{:>6} dB  {:<8} PER {:.3}  RMSE {rmse}  failures {}", r.snr_db, method.name(), m.per, m.failures);
                }
                if let Some(ub) = r.ub {
                    println!("{:>6} dB  UB       {ub:.3}", r.snr_db);
                }
            }
            if report.all_failed() {
                eprintln!("error: every method failed on every trial");
                return Ok(EXIT_ALL_FAILED);
            }
            Ok(0)
        }
        Command::Mbc { setup } => {
            let scenario = load_scenario(&setup)?;
            println!("{:.3}", mbc(&scenario, &scenario.grid()?)?);
            Ok(0)
        }
        Command::Path {
            setup,
            snr,
            seed,
            path_mode,
            out,
        } => {
            let mut config = ExperimentConfig::new(load_scenario(&setup)?, vec![snr], 1, vec![Method::Lasso], seed);
            config.path_mode = path_mode.into();
            let dump = trial_paths(&config, snr)?;
            let text = serde_json::to_string_pretty(&dump).map_err(|e| saen::Error::Io(e.to_string()))?;
            match out {
                Some(path) => std::fs::write(path, text)?,
                None => println!("{text}"),
            }
            Ok(0)
        }
    }
}
