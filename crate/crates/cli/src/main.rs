use std::process::ExitCode;

use clap::Parser;
use decalage_cli::{run, Cli, EXIT_INPUT};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = run(&cli);
    let text = outcome.rendered(cli.format);
    let code = match &cli.out {
        Some(path) => match std::fs::write(path, text) {
            Ok(()) => outcome.code,
            Err(e) => {
                eprintln!("error: {}: {e}", path.display());
                EXIT_INPUT
            }
        },
        None => {
            print!("{text}");
            outcome.code
        }
    };
    ExitCode::from(code as u8)
}
