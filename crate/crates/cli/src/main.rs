//! `nwlab`: experiment driver for designs, targeted generators, the
//! predictor attack, the bad-set census, the hardness search problem and the
//! derandomizers.
//!
//! Exit status: 0 on success, 2 when a size guard refuses the request, 1 for
//! any other error.

mod commands;
mod config;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use nwlab_core::{Error, Oracle};

use commands::{DerandFlags, Report};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{0}")]
    Other(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_guard() => 2,
            _ => 1,
        }
    }
}

#[derive(Parser)]
#[command(name = "nwlab", version, about = "Desk-scale experiments with targeted Nisan-Wigderson generators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Clone, Debug)]
struct Common {
    /// JSON config for the subcommand.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Report file; stdout when absent. Run metadata goes to `<out>.meta.json`.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for parallel censuses.
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Args, Clone, Debug)]
struct Seeded {
    /// Master seed; every random choice is a labeled split of it.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Combinatorial designs.
    Design {
        #[command(subcommand)]
        cmd: DesignCmd,
    },
    /// The targeted generator.
    Prg {
        #[command(subcommand)]
        cmd: PrgCmd,
    },
    /// Distinguisher advantage and the leak/attacker pair.
    Attack {
        #[command(subcommand)]
        cmd: AttackCmd,
    },
    /// Hamming balls and bad-set counting.
    Lemma {
        #[command(subcommand)]
        cmd: LemmaCmd,
    },
    /// The hardness search problem.
    Hardness {
        #[command(subcommand)]
        cmd: HardnessCmd,
    },
    /// Seed-enumeration derandomizers.
    Derand {
        #[command(subcommand)]
        cmd: DerandCmd,
    },
    /// The bounded machine model.
    Vm {
        #[command(subcommand)]
        cmd: VmCmd,
    },
}

#[derive(Subcommand)]
enum DesignCmd {
    Gen(Seeded),
    Verify(Seeded),
}

#[derive(Subcommand)]
enum PrgCmd {
    /// Parameters tied together for given `m` and `alpha`.
    Params(Seeded),
    Expand(ExpandArgs),
    /// Every seed with its output, as CSV.
    Enumerate(Seeded),
}

#[derive(Args)]
struct ExpandArgs {
    /// Design file (a bare design or a `design gen` report).
    #[arg(long)]
    design: Option<PathBuf>,
    /// `table`, `table:<bits>` or `seeded:<u64>`.
    #[arg(long)]
    oracle: Option<Oracle>,
    #[arg(long)]
    target: Option<String>,
    /// Seed bits.
    #[arg(long)]
    seed: Option<String>,
    /// Output length; every design set by default.
    #[arg(long)]
    m: Option<usize>,
}

#[derive(Subcommand)]
enum AttackCmd {
    Advantage(Seeded),
    Leak(Seeded),
    Census(Seeded),
}

#[derive(Subcommand)]
enum LemmaCmd {
    Ball(Seeded),
    Badset(Seeded),
    Census(Seeded),
}

#[derive(Subcommand)]
enum HardnessCmd {
    Oracle(Seeded),
    Verify(Seeded),
    Find(Seeded),
}

#[derive(Subcommand)]
enum DerandCmd {
    Decision(DerandArgs),
    Search(DerandArgs),
}

#[derive(Args)]
struct DerandArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Problem fixture file.
    #[arg(long)]
    problem: Option<PathBuf>,
    /// Generator config file.
    #[arg(long)]
    prg: Option<PathBuf>,
    #[arg(long)]
    input: Option<String>,
}

#[derive(Subcommand)]
enum VmCmd {
    Run(Seeded),
    /// Every description up to a length, as CSV.
    Enumerate(Seeded),
}

impl DerandArgs {
    fn flags(self) -> (u64, DerandFlags) {
        (
            self.seed,
            DerandFlags {
                problem: self.problem,
                prg: self.prg,
                input: self.input,
            },
        )
    }
}

/// Runs the chosen subcommand; returns its name, seed and report.
fn dispatch(command: Command, config: Option<&Path>) -> (String, String, Result<Report, CliError>) {
    use commands::*;
    macro_rules! seeded {
        ($name:expr, $args:expr, $f:expr) => {{
            let seed = $args.seed;
            ($name.to_string(), seed.to_string(), $f(config, seed))
        }};
    }
    fn plain(f: fn(Option<&Path>) -> Result<Report, CliError>) -> impl Fn(Option<&Path>, u64) -> Result<Report, CliError> {
        move |c, _| f(c)
    }
    match command {
        Command::Design { cmd } => match cmd {
            DesignCmd::Gen(a) => seeded!("design gen", a, plain(design_gen)),
            DesignCmd::Verify(a) => seeded!("design verify", a, plain(design_verify)),
        },
        Command::Prg { cmd } => match cmd {
            PrgCmd::Params(a) => seeded!("prg params", a, plain(prg_params)),
            PrgCmd::Enumerate(a) => seeded!("prg enumerate", a, plain(prg_enumerate)),
            PrgCmd::Expand(a) => {
                let seed = a.seed.clone().unwrap_or_default();
                let flags = ExpandFlags {
                    design: a.design,
                    oracle: a.oracle,
                    target: a.target,
                    seed: a.seed,
                    m: a.m,
                };
                ("prg expand".into(), seed, prg_expand(config, flags))
            }
        },
        Command::Attack { cmd } => match cmd {
            AttackCmd::Advantage(a) => seeded!("attack advantage", a, attack_advantage),
            AttackCmd::Leak(a) => seeded!("attack leak", a, attack_leak),
            AttackCmd::Census(a) => seeded!("attack census", a, plain(attack_census)),
        },
        Command::Lemma { cmd } => match cmd {
            LemmaCmd::Ball(a) => seeded!("lemma ball", a, plain(lemma_ball)),
            LemmaCmd::Badset(a) => seeded!("lemma badset", a, plain(lemma_badset)),
            LemmaCmd::Census(a) => seeded!("lemma census", a, plain(lemma_census)),
        },
        Command::Hardness { cmd } => match cmd {
            HardnessCmd::Oracle(a) => seeded!("hardness oracle", a, plain(hardness_oracle)),
            HardnessCmd::Verify(a) => seeded!("hardness verify", a, hardness_verify),
            HardnessCmd::Find(a) => seeded!("hardness find", a, hardness_find),
        },
        Command::Derand { cmd } => {
            let (name, args, search) = match cmd {
                DerandCmd::Decision(a) => ("derand decision", a, false),
                DerandCmd::Search(a) => ("derand search", a, true),
            };
            let (seed, flags) = args.flags();
            let report = if search {
                derand_search(config, flags)
            } else {
                derand_decision(config, flags)
            };
            (name.into(), seed.to_string(), report)
        }
        Command::Vm { cmd } => match cmd {
            VmCmd::Run(a) => seeded!("vm run", a, vm_run),
            VmCmd::Enumerate(a) => seeded!("vm enumerate", a, plain(vm_enumerate)),
        },
    }
}

fn write_outputs(
    name: &str,
    common: &Common,
    seed: &str,
    report: Report,
    started: SystemTime,
    elapsed_ms: u128,
) -> Result<(), CliError> {
    let (text, format) = match report {
        Report::Json(t) => (t, "json"),
        Report::Csv(t) => (t, "csv"),
    };
    let Some(out) = &common.out else {
        print!("{text}");
        return Ok(());
    };
    let io = |e: std::io::Error| CliError::Other(format!("cannot write {}: {e}", out.display()));
    fs::write(out, text).map_err(io)?;
    let mut meta_path = out.clone().into_os_string();
    meta_path.push(".meta.json");
    let meta = json!({
        "command": name,
        "config": common.config,
        "seed": seed,
        "threads": rayon::current_num_threads(),
        "format": format,
        "version": env!("CARGO_PKG_VERSION"),
        "started_unix_ms": started.duration_since(UNIX_EPOCH).map(|d| d.as_millis()).unwrap_or(0),
        "elapsed_ms": elapsed_ms,
    });
    let mut meta_text = serde_json::to_string_pretty(&meta).map_err(|e| CliError::Other(e.to_string()))?;
    meta_text.push('\n');
    fs::write(PathBuf::from(meta_path), meta_text).map_err(io)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = SystemTime::now();
    let clock = Instant::now();
    if let Some(threads) = cli.common.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("nwlab: cannot start {threads} threads: {e}");
            return ExitCode::from(1);
        }
    }
    let common = cli.common;
    let (name, seed, report) = dispatch(cli.command, common.config.as_deref());
    let result = report.and_then(|r| write_outputs(&name, &common, &seed, r, started, clock.elapsed().as_millis()));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("nwlab {name}: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
