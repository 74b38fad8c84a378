use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use symkrylov_cli::{cmd_classify, cmd_experiment, cmd_solve, Cli, Command};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let code = match &cli.command {
        Command::Solve(args) => cmd_solve(args, &mut out).map(|o| o.exit_code),
        Command::Experiment(args) => {
            cmd_experiment(args, &mut out, &mut std::io::stderr()).map(|_| 0)
        }
        Command::Classify(args) => cmd_classify(args, &mut out).map(|_| 0),
    };
    let _ = out.flush();
    match code {
        Ok(c) => ExitCode::from(c as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
