use std::{path::PathBuf, process::ExitCode};

use clap::{Parser, Subcommand};
use sdfs_jcm::{figure_preset, parse_config, run, sdfs_overlap, selfcheck, Error, RunConfig, SdfsParams, C64};

const EXIT_INVARIANT: u8 = 1;
const EXIT_USAGE: u8 = 2;

/// Jaynes-Cummings dynamics driven by squeezed displaced Fock states.
#[derive(Parser)]
#[command(version, about, long_about = None)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a `key = value` configuration file
    Run { config: PathBuf },
    /// Run one of the built-in figure presets (fig1a..fig5c)
    Preset {
        name: String,
        /// Output directory (default: out/<name>)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the invariant suite
    Check,
    /// Print ⟨p1|p2⟩ for two states given as `re,im,r,phi,m`
    Overlap {
        #[arg(long, value_parser = parse_state, allow_hyphen_values = true)]
        p1: SdfsParams,
        #[arg(long, value_parser = parse_state, allow_hyphen_values = true)]
        p2: SdfsParams,
    },
}

fn parse_state(s: &str) -> Result<SdfsParams, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 5 {
        return Err(format!("expected `re,im,r,phi,m`, got `{s}`"));
    }
    let real = |i: usize, name: &str| parts[i].parse::<f64>().map_err(|_| format!("bad {name} `{}`", parts[i]));
    let m = parts[4].parse::<usize>().map_err(|_| format!("bad m `{}`", parts[4]))?;
    SdfsParams::new(C64::new(real(0, "re")?, real(1, "im")?), real(2, "r")?, real(3, "phi")?, m)
        .map_err(|e| e.to_string())
}

fn execute(cfg: &RunConfig) -> ExitCode {
    match run(cfg) {
        Ok(summary) => {
            print!("{}", summary.render());
            for f in &summary.files {
                println!("wrote {}", f.display());
            }
            if summary.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_INVARIANT)
            }
        }
        Err(e) => fail(e),
    }
}

fn fail(e: Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(EXIT_USAGE)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { config } => {
            let text = match std::fs::read_to_string(&config) {
                Ok(t) => t,
                Err(e) => return fail(e.into()),
            };
            match parse_config(&text) {
                Ok(cfg) => execute(&cfg),
                Err(e) => fail(e),
            }
        }
        Command::Preset { name, out } => match figure_preset(&name) {
            Ok(mut cfg) => {
                if let Some(dir) = out {
                    cfg.output_dir = dir;
                }
                execute(&cfg)
            }
            Err(e) => fail(e),
        },
        Command::Check => {
            let results = selfcheck::run_checks();
            for r in &results {
                println!("[{}] {}: {}", if r.passed { "PASS" } else { "FAIL" }, r.name, r.detail);
            }
            if results.iter().all(|r| r.passed) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_INVARIANT)
            }
        }
        Command::Overlap { p1, p2 } => {
            let ov = sdfs_overlap(&p1, &p2);
            println!("overlap = {:.15e} {:+.15e}i", ov.re, ov.im);
            println!("magnitude = {:.15e}", ov.norm());
            println!("phase = {:.15e}", ov.arg());
            ExitCode::SUCCESS
        }
    }
}
