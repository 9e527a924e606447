use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use ionheat::cli::{self, Subcommand};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Command {
    /// Steady-state currents, coherence and populations at one point.
    Steady,
    /// Observable map over the (delta, omega) grid.
    Sweep2d,
    /// J_SS(T_E) curve and the NDC ratio Q.
    Ndc,
    /// Local maxima of |J_SS| and their distance to the circles.
    Ridge,
}

#[derive(Debug, Parser)]
#[command(name = "ionheat", version, about = "Heat transport through a laser-driven trapped ion")]
struct Args {
    #[arg(value_enum)]
    command: Command,
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long)]
    workers: Option<usize>,
}

fn main() -> ExitCode {
    env_logger::init();
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { cli::EXIT_CONFIG as u8 } else { 0 });
        }
    };
    let cmd = match args.command {
        Command::Steady => Subcommand::Steady,
        Command::Sweep2d => Subcommand::Sweep2d,
        Command::Ndc => Subcommand::Ndc,
        Command::Ridge => Subcommand::Ridge,
    };
    let code = cli::run_subcommand(cmd, &args.config, args.output.as_deref(), args.workers);
    ExitCode::from(code as u8)
}
