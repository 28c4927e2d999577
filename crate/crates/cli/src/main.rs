mod args;
mod construct;
mod input;
mod number;
mod search;
mod verify;

use std::process::ExitCode;

use clap::Parser;
use serde::Serialize;

use args::{Cli, Command, SearchLimits};

/// Exit statuses shared by every subcommand.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exit {
    /// Witness found, value exact, or check passed.
    Success = 0,
    /// No witness, or a failure report.
    Failure = 1,
    Usage = 2,
    Resource = 3,
}

pub fn emit<T: Serialize>(
    json: bool,
    value: &T,
    human: impl FnOnce() -> String,
) -> anyhow::Result<()> {
    if json {
        println!("{}", serde_json::to_string_pretty(value)?);
    } else {
        let text = human();
        println!("{}", text.trim_end());
    }
    Ok(())
}

pub fn limits(args: &SearchLimits) -> apsum::numbers::Limits {
    apsum::numbers::Limits {
        node_budget: args.budget,
        max_depth: args.max_depth,
        cross_check: args.cross_check,
        threads: args.threads.max(1),
    }
}

fn classify(err: &anyhow::Error) -> Exit {
    if err.downcast_ref::<input::Usage>().is_some() {
        return Exit::Usage;
    }
    match err.downcast_ref::<apsum::Error>() {
        Some(e) if e.is_resource() => Exit::Resource,
        Some(apsum::Error::Integrity(_) | apsum::Error::Internal(_)) => Exit::Failure,
        _ => Exit::Usage,
    }
}

fn run(cli: Cli) -> anyhow::Result<Exit> {
    match cli.command {
        Command::Search(cmd) => search::run(cmd),
        Command::Number(args) => number::number(args),
        Command::Certify(args) => number::certify(args),
        Command::Construct(cmd) => construct::run(cmd),
        Command::Verify(args) => verify::run(args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(exit) => ExitCode::from(exit as u8),
        Err(err) => {
            eprintln!("apsum: {err:#}");
            ExitCode::from(classify(&err) as u8)
        }
    }
}
