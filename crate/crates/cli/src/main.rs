use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use wforms_cli::commands::{cmd_flat, cmd_solve, cmd_verify, Outcome};
use wforms_cli::config::{Overrides, RunConfig};
use wforms_cli::suites::{Constants, SUITES};

const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(name = "wforms", version, about = "Residue bilinear forms: flat tables, curved checks, constant solving")]
struct Cli {
    /// key=value file with defaults for n, format, measure, E, G, output
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// json, latex or text
    #[arg(long, global = true)]
    format: Option<String>,
    /// Write the report here instead of stdout
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConstantsArg {
    Solved,
    Published,
}

#[derive(Subcommand)]
enum Command {
    /// Flat coefficient table by both routes and their difference
    Flat {
        #[arg(long)]
        n: Option<usize>,
        /// normalized or area
        #[arg(long)]
        measure: Option<String>,
    },
    /// Run verification suites (all when none given)
    Verify {
        suites: Vec<String>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long = "E", allow_hyphen_values = true)]
        e: Option<String>,
        #[arg(long = "G", allow_hyphen_values = true)]
        g: Option<String>,
        /// Constants A to D used by the family suite
        #[arg(long, value_enum, default_value = "solved")]
        constants: ConstantsArg,
    },
    /// Assemble and solve the constraint system for A, B, C, D, E, G
    Solve {
        /// Extra equation such as "E=0" or "B+2C=-32"; repeatable
        #[arg(long = "constraint", allow_hyphen_values = true)]
        constraints: Vec<String>,
        /// Solve the printed conditions instead of the computed ones
        #[arg(long)]
        published: bool,
    },
}

fn threads() -> Result<()> {
    if let Ok(v) = std::env::var("WF_THREADS") {
        let n: usize = v.parse().with_context(|| format!("WF_THREADS = {v:?}"))?;
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<Result<Outcome>, anyhow::Error> {
    threads()?;
    let mut flags = Overrides {
        format: cli.format.clone(),
        output: cli.output.clone(),
        ..Default::default()
    };
    let cfg = |flags: Overrides| RunConfig::resolve(cli.config.as_deref(), flags);
    // configuration problems are usage errors; work failures are not
    Ok(match &cli.command {
        Command::Flat { n, measure } => {
            flags.n = *n;
            flags.measure = measure.clone();
            let cfg = cfg(flags)?;
            finish(cmd_flat(&cfg), &cfg)
        }
        Command::Verify { suites, n, e, g, constants } => {
            flags.n = *n;
            flags.e = e.clone();
            flags.g = g.clone();
            let cfg = cfg(flags)?;
            if let Some(bad) = suites.iter().find(|s| !SUITES.contains(&s.as_str())) {
                anyhow::bail!("unknown suite {bad:?}; expected one of {}", SUITES.join(", "));
            }
            let names: Vec<String> = if suites.is_empty() { SUITES.iter().map(|s| s.to_string()).collect() } else { suites.clone() };
            let constants = match constants {
                ConstantsArg::Solved => Constants::Solved,
                ConstantsArg::Published => Constants::Published,
            };
            finish(cmd_verify(&names, &cfg, constants), &cfg)
        }
        Command::Solve { constraints, published } => {
            let cfg = cfg(flags)?;
            for c in constraints {
                wforms_cli::commands::parse_constraint(c)?;
            }
            finish(cmd_solve(*published, constraints, cfg.format), &cfg)
        }
    })
}

fn finish(out: Result<Outcome>, cfg: &RunConfig) -> Result<Outcome> {
    let out = out?;
    match &cfg.output {
        Some(p) => std::fs::write(p, &out.output).with_context(|| format!("writing {}", p.display()))?,
        None => std::io::stdout().write_all(out.output.as_bytes())?,
    }
    Ok(out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
        Ok(Err(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Ok(Ok(o)) => ExitCode::from(o.code as u8),
    }
}
