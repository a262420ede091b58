use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use coarse_cli::{run, Cli};

/// 0: every check holds. 1: a certified inequality or law fails. 2: error.
fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) if is_broken_pipe(&e) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn execute(cli: &Cli) -> anyhow::Result<bool> {
    let opts = cli.options()?;
    let mut ws = cli.workspace()?;
    let report = run(&mut ws, &cli.command, &opts)?;
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    report.print(&mut out, cli.out.is_none())?;
    if let Some(dir) = &cli.out {
        let files = report.write_files(dir)?;
        writeln!(out, "wrote {} files to {}", files.len(), dir.display())?;
    }
    let verdict = if report.all_hold() { "all checks hold".to_string() } else { format!("{} violated", report.violations) };
    writeln!(out, "{verdict}")?;
    Ok(report.all_hold())
}

/// Output cut short by a closed pipe (`coarse ... | head`) is not an error.
fn is_broken_pipe(e: &anyhow::Error) -> bool {
    e.chain()
        .any(|c| c.downcast_ref::<std::io::Error>().is_some_and(|io| io.kind() == std::io::ErrorKind::BrokenPipe))
}
