//! Drives the file-based interface in-process: parse a config, render one
//! subcommand to CSV text.
//!
//!     cargo run --example run_config -- configs/working_point.cfg ndc

use std::path::PathBuf;

use ionheat::cli::{self, Subcommand};

fn main() {
    let mut args = std::env::args().skip(1);
    let path = PathBuf::from(args.next().unwrap_or_else(|| {
        concat!(env!("CARGO_MANIFEST_DIR"), "/configs/working_point.cfg").to_string()
    }));
    let cmd = match args.next().as_deref().unwrap_or("steady") {
        "steady" => Subcommand::Steady,
        "sweep2d" => Subcommand::Sweep2d,
        "ndc" => Subcommand::Ndc,
        "ridge" => Subcommand::Ridge,
        other => {
            eprintln!("unknown subcommand {other}");
            std::process::exit(cli::EXIT_CONFIG);
        }
    };
    let cfg = match cli::load_config(&path) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(cli::EXIT_CONFIG);
        }
    };
    match cli::render(cmd, &cfg) {
        Ok(text) => print!("{text}"),
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(e.exit_code());
        }
    }
}
