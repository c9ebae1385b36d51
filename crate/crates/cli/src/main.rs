//! `uvf`: build targets, walk contours, evaluate, and benchmark on
//! synthetic scenes.

use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod cmd;
mod common;

#[derive(Debug, Parser)]
#[command(name = "uvf", version, about = "Unit vector field contour tools")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Landmark JSON to field and heatmap grid files.
    Targets(cmd::targets::Args),
    /// Walk a contour through grid files.
    Walk(cmd::walk::Args),
    /// Score predicted contours against landmarks.
    Eval(cmd::eval::Args),
    /// Write seeded synthetic scene bundles.
    Synth(cmd::synth::Args),
    /// Round-trip synthetic scenes and report error quantiles.
    Bench(cmd::bench::Args),
    /// Draw grids and contours to a PNG.
    Render(cmd::render::Args),
}

fn main() -> ExitCode {
    // clap exits with 2 on usage errors and 0 for --help/--version.
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Targets(a) => cmd::targets::run(a),
        Command::Walk(a) => cmd::walk::run(a),
        Command::Eval(a) => cmd::eval::run(a),
        Command::Synth(a) => cmd::synth::run(a),
        Command::Bench(a) => cmd::bench::run(a),
        Command::Render(a) => cmd::render::run(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
