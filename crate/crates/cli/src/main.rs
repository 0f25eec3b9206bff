use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = donorspin::Cli::parse();
    match donorspin::run(&cli) {
        Ok(out) => {
            let _ = std::io::stderr().write_all(out.stderr.as_bytes());
            if std::io::stdout().write_all(out.stdout.as_bytes()).is_err() {
                return ExitCode::from(donorspin::ExitCode::Runtime as u8);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
