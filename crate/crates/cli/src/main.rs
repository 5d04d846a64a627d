use std::io;
use std::process::ExitCode;

use clap::Parser;
use fgn_toolkit::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut stdout = io::stdout().lock();
    let mut stderr = io::stderr().lock();
    match run(cli, &mut stdout, &mut stderr) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            use io::Write;
            let _ = writeln!(stderr, "error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
