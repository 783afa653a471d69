use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use qvk_cli::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match qvk_cli::run(&cli) {
        Ok(out) => {
            if !out.is_empty() {
                let mut stdout = std::io::stdout().lock();
                let _ = writeln!(stdout, "{}", out.trim_end());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
