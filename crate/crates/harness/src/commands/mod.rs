//! Subcommand implementations. Each command assembles its entire stdout as
//! a string (and optionally writes CSV rows to a file), so output ordering
//! never depends on timing or worker count.

mod adversary;
mod gametree;
mod primes;
mod sampler_check;
mod solve;

pub use adversary::run_adversary;
pub use gametree::run_gametree;
pub use primes::run_primes;
pub use sampler_check::{lazy_eager_tv, run_sampler_check};
pub use solve::run_solve;

use std::sync::mpsc;

use crate::cli::{Args, Command};
use crate::CliError;

/// Dispatch a parsed command line; returns the text to print on stdout.
pub fn dispatch(args: &Args) -> Result<String, CliError> {
    match args.command {
        Command::Primes => run_primes(args),
        Command::Solve => run_solve(args),
        Command::Adversary => run_adversary(args),
        Command::SamplerCheck => run_sampler_check(args),
        Command::Gametree => run_gametree(args),
    }
}

/// Run `count` independent trials across `jobs` workers and hand back the
/// outcomes in trial order. Worker count never affects the result, only the
/// wall clock.
pub(crate) fn run_trials<T, F>(count: u64, jobs: usize, body: F) -> Result<Vec<T>, CliError>
where
    T: Send,
    F: Fn(u64) -> Result<T, CliError> + Sync,
{
    let jobs = jobs.clamp(1, count.max(1) as usize);
    if jobs == 1 {
        return (0..count).map(&body).collect();
    }
    let (tx, rx) = mpsc::channel::<(u64, Result<T, CliError>)>();
    std::thread::scope(|scope| {
        for worker in 0..jobs {
            let tx = tx.clone();
            let body = &body;
            scope.spawn(move || {
                let mut trial = worker as u64;
                while trial < count {
                    if tx.send((trial, body(trial))).is_err() {
                        return;
                    }
                    trial += jobs as u64;
                }
            });
        }
        drop(tx);
    });
    let mut slots: Vec<Option<T>> = (0..count).map(|_| None).collect();
    for (idx, outcome) in rx {
        slots[idx as usize] = Some(outcome?);
    }
    slots
        .into_iter()
        .map(|s| s.ok_or_else(|| CliError::Internal("trial outcome lost".into())))
        .collect()
}

/// Write CSV rows to `--out` when given, otherwise include them in stdout.
pub(crate) fn emit_rows(
    out: Option<&std::path::Path>,
    header: &str,
    rows: &[String],
    stdout: &mut String,
) -> Result<(), CliError> {
    let mut csv = String::with_capacity(header.len() + rows.iter().map(String::len).sum::<usize>() + rows.len() + 8);
    csv.push_str(header);
    csv.push('\n');
    for row in rows {
        csv.push_str(row);
        csv.push('\n');
    }
    match out {
        Some(path) => std::fs::write(path, csv)?,
        None => stdout.push_str(&csv),
    }
    Ok(())
}
