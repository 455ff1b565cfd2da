//! `cara`: instance generators, solver drivers, batch experiment runner
//! with CSV reports, and SVG rendering for planar instances.

mod commands;
mod render;
mod spec;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "cara", about = "certified convex geometry toolkit", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Produce an instance file from a generator spec.
    Generate {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a batch of experiments and write a CSV report.
    Run {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Render a planar instance (and optional certificate) to SVG.
    Render {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Re-verify a certificate against its instance.
    Verify {
        #[arg(long)]
        spec: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Generate { spec, seed, out } => commands::generate(&spec, seed, &out),
        Command::Run { spec, seed, out } => commands::run(&spec, seed, &out),
        Command::Render { spec, out } => render::render(&spec, &out),
        Command::Verify { spec } => commands::verify(&spec),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
