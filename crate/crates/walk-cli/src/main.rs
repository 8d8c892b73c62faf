use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use walk_cli::{all_presets, preset, run, CliError, ConfigFile};

/// Two-photon discrete-time quantum walks on a chain of Grover four-ports.
#[derive(Parser)]
#[command(name = "walk", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario from a TOML config file.
    Run {
        /// Path to the run configuration.
        config: PathBuf,
        /// Output directory (default: $WALK_OUT or ./walk-out).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Re-run against the dense reference and fail on disagreement.
        #[arg(long)]
        verify: bool,
    },
    /// Run a built-in preset scenario.
    Preset {
        /// Preset name; see `walk list-presets`.
        name: String,
        /// Override the preset's step count.
        #[arg(long)]
        steps: Option<u32>,
        /// Re-run against the dense reference and fail on disagreement.
        #[arg(long)]
        verify: bool,
        /// Output directory (default: $WALK_OUT or ./walk-out).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the built-in presets.
    ListPresets,
}

fn out_dir(flag: Option<PathBuf>) -> PathBuf {
    flag.or_else(|| std::env::var_os("WALK_OUT").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("walk-out"))
}

fn execute(command: Command) -> Result<(), CliError> {
    match command {
        Command::Run { config, out, verify } => {
            let text = std::fs::read_to_string(&config)?;
            let file = ConfigFile::from_toml(&text)?;
            let resolved = file.resolve(None)?;
            let dir = out_dir(out);
            let report = run(&resolved, &dir, verify)?;
            print_summary(&report, &dir);
            Ok(())
        }
        Command::Preset {
            name,
            steps,
            verify,
            out,
        } => {
            let mut p = preset(&name)?;
            if let Some(steps) = steps {
                p.config.steps = steps;
            }
            let resolved = p.config.resolve(Some(p.name))?;
            let dir = out_dir(out);
            let report = run(&resolved, &dir, verify)?;
            print_summary(&report, &dir);
            Ok(())
        }
        Command::ListPresets => {
            for p in all_presets() {
                println!("{:<20} {}", p.name, p.description);
            }
            Ok(())
        }
    }
}

fn print_summary(report: &walk_cli::RunReport, dir: &std::path::Path) {
    match report.preset.as_deref() {
        Some(name) => println!("preset {name}: {} scenario, {} steps", report.scenario, report.steps),
        None => println!("{} scenario, {} steps", report.scenario, report.steps),
    }
    println!(
        "lattice half-width {}, polarized: {}",
        report.lattice_half_width, report.polarized
    );
    println!("max norm drift {:.3e}", report.invariants.max_norm_drift);
    if let Some(defect) = report.invariants.max_clustering_defect {
        println!("max clustering defect {defect:.3e}");
    }
    for row in &report.census {
        println!("  {:<16} {}", row.state, row.classification);
    }
    if let Some(v) = &report.verification {
        println!(
            "verified against the dense reference over {} steps: max difference {:.3e}",
            v.compared_steps, v.max_amplitude_difference
        );
    }
    println!("outputs written to {}", dir.display());
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
