use std::fmt::Write;

use orderlab_core::solvers::gametree_depth;

use crate::cli::Args;
use crate::CliError;

/// Exact worst-case query count of the splitting strategy, by exhaustive
/// game-tree evaluation over candidate sets. Only feasible for `2^n <= 64`.
pub fn run_gametree(args: &Args) -> Result<String, CliError> {
    let n = args.require_n()?;
    let m = args.m_or_default(n);
    let depth = gametree_depth(n, m)?;
    let mut out = String::new();
    writeln!(out, "gametree n={n} m={m}").unwrap();
    writeln!(out, "depth={depth}").unwrap();
    Ok(out)
}
