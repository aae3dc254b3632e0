use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use gftkit::cli::{run, Cli};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(outcome) => {
            if cli.out.is_none() {
                let mut stdout = std::io::stdout().lock();
                if stdout.write_all(outcome.text.as_bytes()).is_err() {
                    return ExitCode::from(3);
                }
            }
            ExitCode::from(outcome.exit_code as u8)
        }
        Err(e) => {
            eprintln!("gftkit: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
