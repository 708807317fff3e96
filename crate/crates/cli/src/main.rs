mod args;
mod config;
mod error;
mod rate;
mod run;
mod scenario;
mod sweep;
mod verify;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use config::parse_window;
use error::{CliError, Result};

fn window_pair(window: &Option<String>) -> Vec<(&'static str, String)> {
    window.iter().map(|w| ("window", w.clone())).collect()
}

fn dispatch(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Run(a) => {
            let mut extra = window_pair(&a.window);
            if let Some(f) = &a.format {
                extra.push(("format", f.clone()));
            }
            if let Some(o) = &a.output {
                extra.push(("output", o.display().to_string()));
            }
            let cfg = a.params.resolve(a.scenario.as_deref(), &extra)?;
            run::cmd_run(&cfg)?;
        }
        Command::Rate(a) => {
            let cfg = a
                .params
                .resolve(a.scenario.as_deref(), &window_pair(&a.window))?;
            rate::cmd_rate(&cfg, a.trace.as_deref())?;
        }
        Command::Sweep(a) => {
            let cfg = a
                .params
                .resolve(a.scenario.as_deref(), &window_pair(&a.window))?;
            if let Some(w) = &a.window {
                parse_window(w)?;
            }
            let axes = a
                .grid
                .iter()
                .map(|g| sweep::parse_axis(g))
                .collect::<Result<Vec<_>>>()?;
            if !axes.is_empty() && cfg.scenario.is_none() {
                return Err(CliError::usage("no scenario given"));
            }
            let entries = sweep::sweep(&cfg, &axes);
            let mut out: Box<dyn Write> = match &a.output {
                Some(p) => Box::new(BufWriter::new(File::create(p)?)),
                None => Box::new(io::stdout().lock()),
            };
            sweep::write_entries(&entries, &mut out)?;
            for e in entries.iter().filter(|e| !e.ok) {
                eprintln!(
                    "run {} failed: {}",
                    e.index,
                    e.error.as_deref().unwrap_or("unknown")
                );
            }
            return Ok(sweep::sweep_code(&entries));
        }
        Command::Verify(a) => verify::cmd_verify(a.suite, a.seed, a.samples, a.cycles)?,
    }
    Ok(0)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
