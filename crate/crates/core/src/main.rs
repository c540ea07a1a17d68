use std::process::ExitCode;

use clap::Parser;
use fstar_core::cli::{configure_threads, run, Cli, Outcome};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = std::env::var("FSTAR_THREADS").ok();
    let result = configure_threads(threads.as_deref()).and_then(|()| run(&cli));
    match result {
        Ok(Outcome::Success) => ExitCode::SUCCESS,
        Ok(Outcome::VerificationFailed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
