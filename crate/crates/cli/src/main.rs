use std::process::ExitCode;

use anyhow::Result;
use clap::Parser;

mod args;
mod commands;
mod output;

use args::{Cli, Command, RunConfig};
use output::RunOutput;

fn run(cli: Cli) -> Result<bool> {
    let cfg = RunConfig::resolve(&cli.common)?;
    for w in cfg.params.warnings() {
        eprintln!("warning: {w:?}");
    }
    output::ensure_writable(&cfg.out)?;
    let (name, out): (&str, RunOutput) = match &cli.command {
        Command::AiryExample => ("airy-example", commands::airy_example(&cfg)?),
        Command::StaticExample => ("static-example", commands::static_example(&cfg)?),
        Command::Verify => ("verify", commands::verify(&cfg)?),
        Command::Trajectories(a) => ("trajectories", commands::trajectories(&cfg, a)?),
        Command::Horizons => ("horizons", commands::horizons(&cfg)?),
    };
    for r in &out.reports {
        let rep = &r.report;
        println!(
            "{:<4} {:<18} {:<22} n={:<5} max={:.3e} tol={:.0e}",
            if rep.passed { "ok" } else { "FAIL" },
            r.suite,
            serde_json::to_value(rep.equation)?.as_str().unwrap_or_default(),
            rep.grid.count,
            rep.normalized_max,
            rep.tolerance,
        );
    }
    let written = output::write(&cfg, name, &out)?;
    println!("wrote {} file(s) to {}", written.len(), cfg.out.display());
    Ok(!cfg.strict || out.all_passed())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("error: residual checks failed under --strict");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
