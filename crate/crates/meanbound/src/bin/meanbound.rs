use std::process::ExitCode;

use clap::Parser;
use meanbound::cli::{self, Cli};

fn main() -> ExitCode {
    let parsed = Cli::parse();
    let (stdout, stderr) = (std::io::stdout(), std::io::stderr());
    match cli::run(parsed, &mut stdout.lock(), &mut stderr.lock()) {
        Ok(code) => ExitCode::from(code),
        Err(meanbound::Error::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
