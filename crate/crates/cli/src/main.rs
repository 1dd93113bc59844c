mod cli;
mod commands;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use cli::{Cli, Command};
use commands::Failure;

fn configure_threads() -> Result<(), Failure> {
    let Ok(value) = std::env::var("SPECKIT_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::usage(format!("SPECKIT_THREADS must be a positive integer, got `{value}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure::usage(format!("cannot size the thread pool: {e}")))
}

fn run(cli: &Cli) -> Result<(), Failure> {
    configure_threads()?;
    let (output, path) = match &cli.command {
        Command::Solve(a) => (commands::solve(a)?, &a.output),
        Command::Sweep(a) => (commands::sweep(a)?, &a.output),
        Command::Table(a) => (commands::table(a)?, &a.output),
        Command::Probe(a) => (commands::probe(a)?, &None),
    };
    if !cli.quiet {
        for w in &output.warnings {
            eprintln!("warning: {w}");
        }
    }
    match path {
        Some(path) => std::fs::write(path, &output.text)
            .map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(output.text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Failure {
                    code: 1,
                    message: format!("cannot write output: {e}"),
                })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if !cli.quiet {
        eprintln!("speckit {}", env!("CARGO_PKG_VERSION"));
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code as u8)
        }
    }
}
