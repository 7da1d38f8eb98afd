//! Argument parsing and file handling around [`crate::commands`].

use std::ffi::OsString;
use std::path::PathBuf;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use helixlab_core::kronecker::DEFAULT_BUDGET;

use crate::commands::{exit_code, run_chi, run_kron, run_system, run_theorem, KronAction, KronOptions, Outcome};
use crate::document::ProblemDocument;
use crate::render::canonical_string;

#[derive(Debug, Parser)]
#[command(name = "helixlab", version, about = "Exceptional bundle systems and Kronecker moduli")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Problem document (JSON).
    #[arg(long)]
    pub input: PathBuf,
    /// Report destination; standard output when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Worker threads for census.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// Largest number of modules a census may enumerate.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    /// Seed for random modules; overrides the document.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Euler form, skew form and invariants of the named pair.
    Chi(Common),
    /// The system generated by the named pair on a window.
    System {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        lo: Option<i64>,
        #[arg(long, allow_hyphen_values = true)]
        hi: Option<i64>,
    },
    /// Hypotheses and data of the moduli comparison for a collection and
    /// candidate.
    Theorem(Common),
    /// Kronecker modules: stability check, exhaustive census, random draw.
    Kron {
        #[arg(value_enum)]
        action: KronAction,
        #[command(flatten)]
        common: Common,
    },
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::Chi(c) | Command::Theorem(c) => c,
            Command::System { common, .. } | Command::Kron { common, .. } => common,
        }
    }
}

/// Runs a parsed command on an already loaded document.
pub fn dispatch(command: &Command, doc: &ProblemDocument) -> helixlab_core::Result<Outcome> {
    let c = command.common();
    match command {
        Command::Chi(_) => run_chi(doc),
        Command::System { lo, hi, .. } => run_system(doc, *lo, *hi),
        Command::Theorem(_) => run_theorem(doc),
        Command::Kron { action, .. } => {
            run_kron(doc, *action, KronOptions { jobs: c.jobs, budget: c.budget, seed: c.seed })
        }
    }
}

fn execute(cli: &Cli) -> anyhow::Result<i32> {
    let common = cli.command.common();
    let text = std::fs::read_to_string(&common.input).with_context(|| format!("reading {}", common.input.display()))?;
    let doc = ProblemDocument::parse(&text)?;
    let outcome = dispatch(&cli.command, &doc)?;
    let rendered = canonical_string(&outcome.report);
    match &common.output {
        Some(path) => std::fs::write(path, rendered).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{rendered}"),
    }
    Ok(outcome.exit_code)
}

/// Entry point shared by the binary and the tests; returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            e.downcast_ref::<helixlab_core::Error>().map_or(2, exit_code)
        }
    }
}
