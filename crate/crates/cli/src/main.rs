use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use cvteleport_cli::commands;
use cvteleport_cli::config::RunConfig;

/// Simulator for continuous-variable teleportation between nanomechanical
/// modes coupled through a superconducting circuit.
#[derive(Parser)]
#[command(name = "cvteleport", disable_help_subcommand = true)]
struct Cli {
    /// Path to a run configuration file (defaults to the built-in
    /// reference operating point).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Random seed override.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Output directory override for CSV files.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Print the default configuration and exit.
    #[arg(long)]
    dump_defaults: bool,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Derive circuit energies, frequencies and couplings; check the
    /// validity hierarchy (exit 2 on violation).
    Derive,
    /// Print the five-operation protocol schedule.
    Schedule,
    /// Run the teleportation pipeline and report fidelities.
    Teleport,
    /// Write figure-reproduction CSV tables.
    Sweep {
        #[command(subcommand)]
        which: SweepKind,
    },
    /// Report the SET readout sensitivities and POVM widths.
    Detector,
    /// Cross-check the closed-form channel against the Wigner quadrature.
    Oracle,
}

#[derive(Subcommand)]
enum SweepKind {
    /// Critical curve eta_c(tau_m) plus fidelity-vs-tau inset data.
    Fig2,
    /// Fidelity versus thermal index for several squeezing strengths.
    Fig3,
}

fn load_config(cli: &Cli) -> Result<RunConfig, Box<dyn std::error::Error>> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::parse(&std::fs::read_to_string(path)?)?,
        None => RunConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(dir) = &cli.out {
        cfg.output.dir = dir.clone();
    }
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap prints its own help/version output with status 0
            if e.use_stderr() {
                eprint!("{e}");
                return ExitCode::from(1);
            }
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };

    if cli.dump_defaults {
        print!("{}", RunConfig::default().dump());
        return ExitCode::SUCCESS;
    }

    let cfg = match load_config(&cli) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(1);
        }
    };

    let command = match &cli.command {
        Some(c) => c,
        None => {
            eprintln!("a subcommand is required (try --help)");
            return ExitCode::from(1);
        }
    };

    let result = match command {
        Command::Derive => commands::cmd_derive(&cfg),
        Command::Schedule => commands::cmd_schedule(&cfg),
        Command::Teleport => commands::cmd_teleport(&cfg),
        Command::Sweep { which } => match which {
            SweepKind::Fig2 => commands::cmd_sweep_fig2(&cfg),
            SweepKind::Fig3 => commands::cmd_sweep_fig3(&cfg),
        },
        Command::Detector => commands::cmd_detector(&cfg),
        Command::Oracle => commands::cmd_oracle(&cfg),
    };

    match result {
        Ok((report, code)) => {
            print!("{report}");
            ExitCode::from(code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
