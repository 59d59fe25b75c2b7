use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use ipr_qsim::harness::{
    emit_csv, init_thread_pool, run_experiment, run_verification, write_manifest,
    ExperimentConfig, ExperimentKind, Mode,
};

#[derive(Parser)]
#[command(
    name = "ipr-qsim",
    version,
    about = "Inverse-participation-ratio estimation circuits with exact cross-checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment described by a config file, emitting CSV results
    /// and a run manifest.
    Run {
        /// Path to a TOML experiment config.
        config: PathBuf,
        /// Override the experiment named in the config.
        #[arg(long)]
        experiment: Option<String>,
        /// Output directory (default from config, else ./results).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Override the seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Override the measurement mode.
        #[arg(long, value_parser = ["exact", "sampled"])]
        mode: Option<String>,
        /// Override the shot count (sampled mode).
        #[arg(long)]
        shots: Option<u64>,
    },
    /// Run the error-bound study and property suite; exits 0 only if every
    /// invariant holds.
    Verify {
        /// Shrink the random ensembles for a fast smoke run.
        #[arg(long)]
        quick: bool,
    },
}

fn main() -> ExitCode {
    init_thread_pool();
    match Cli::parse().command {
        Command::Run {
            config,
            experiment,
            out,
            seed,
            mode,
            shots,
        } => run_cmd(config, experiment, out, seed, mode, shots),
        Command::Verify { quick } => verify_cmd(quick),
    }
}

fn run_cmd(
    config_path: PathBuf,
    experiment: Option<String>,
    out: Option<PathBuf>,
    seed: Option<u64>,
    mode: Option<String>,
    shots: Option<u64>,
) -> ExitCode {
    let mut config = match ExperimentConfig::load(&config_path) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::FAILURE;
        }
    };
    // Flags take precedence over file values.
    if let Some(name) = experiment {
        config.experiment = match ExperimentKind::parse(&name) {
            Ok(k) => k,
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::FAILURE;
            }
        };
    }
    if let Some(s) = seed {
        config.seed = Some(s);
    }
    if let Some(m) = mode {
        config.mode = Some(if m == "sampled" {
            Mode::Sampled
        } else {
            Mode::Exact
        });
    }
    if let Some(n) = shots {
        config.n_shots = Some(n);
    }
    if let Some(dir) = out {
        config.out = Some(dir);
    }

    let tick = Instant::now();
    let rows = match run_experiment(&config) {
        Ok(rows) => rows,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::FAILURE;
        }
    };
    let elapsed = tick.elapsed().as_secs_f64();

    let dir = config
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from("results"));
    let name = config.experiment.name();
    let csv_path = dir.join(format!("{name}.csv"));
    let manifest_path = dir.join(format!("{name}_manifest.toml"));
    if let Err(e) = emit_csv(&rows, &csv_path) {
        eprintln!("error: {e}");
        return ExitCode::FAILURE;
    }
    if let Err(e) = write_manifest(&config, &manifest_path) {
        eprintln!("error: {e}");
        return ExitCode::FAILURE;
    }

    let point_ms: f64 = rows.iter().map(|r| r.wall_ms).sum();
    eprintln!(
        "{name}: {} rows in {elapsed:.2}s (sum of point times {point_ms:.0} ms)",
        rows.len()
    );
    eprintln!("wrote {}", csv_path.display());
    eprintln!("wrote {}", manifest_path.display());
    ExitCode::SUCCESS
}

fn verify_cmd(quick: bool) -> ExitCode {
    let report = match run_verification(quick) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::FAILURE;
        }
    };
    for check in &report.checks {
        println!(
            "{}: {} ({})",
            check.name,
            if check.passed { "PASS" } else { "FAIL" },
            check.detail
        );
    }
    if report.passed() {
        println!("verify: all checks passed");
        ExitCode::SUCCESS
    } else {
        println!("verify: FAILURES present");
        ExitCode::FAILURE
    }
}
