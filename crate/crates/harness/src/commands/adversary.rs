use std::fmt::Write;

use orderlab_core::adversary::{evasive_threshold, Adversary};
use orderlab_core::oracle::{OracleParams, QueryOracle};
use orderlab_core::rng::{split_seed, SplitMix64};
use orderlab_core::solvers::{birthday_solver, scan_solver, splitting_solver};
use orderlab_core::{Error, Result as CoreResult};

use crate::cli::{Args, SolverKind};
use crate::textio::export_permutation;
use crate::CliError;

/// Adversary view handed to the solver: enforces the game budget and notes
/// the count of consistent orders after every answered query.
struct RefereedAdversary<'a> {
    adversary: &'a mut Adversary,
    budget: u64,
    remaining_per_step: Vec<usize>,
}

impl QueryOracle for RefereedAdversary<'_> {
    fn n(&self) -> u32 {
        self.adversary.n()
    }

    fn m(&self) -> u32 {
        self.adversary.m()
    }

    fn query(&mut self, x: u128, y: u64) -> CoreResult<u64> {
        if self.remaining_per_step.len() as u64 >= self.budget {
            return Err(Error::BudgetExhausted);
        }
        let resp = self.adversary.respond(x, y)?;
        self.remaining_per_step.push(self.adversary.remaining_orders().len());
        Ok(resp)
    }

    fn queries_used(&self) -> u64 {
        self.adversary.queries_used()
    }
}

/// One full game against the evasive responder: run the solver for at most
/// `--max-queries` queries (default: half the evasiveness threshold), report
/// the consistent-order count after every step, then commit the two smallest
/// surviving orders to concrete witness permutations and replay-verify them.
pub fn run_adversary(args: &Args) -> Result<String, CliError> {
    let n = args.require_n()?;
    let m = args.m_or_default(n);
    let solver = args.require_solver()?;
    let master = args.seed_or_default();
    let k = args.k_or_default(n);
    let threshold = evasive_threshold(n, m);
    let budget = args.max_queries.unwrap_or(threshold / 2);

    let y0 = SplitMix64::new(split_seed(master, 0)).gen_bits(n) as u64;
    let params = OracleParams::new(n, m, y0)?;
    let mut adversary = Adversary::new(params)?;
    let window_size = adversary.window().len();

    let mut referee = RefereedAdversary {
        adversary: &mut adversary,
        budget,
        remaining_per_step: Vec::new(),
    };
    let result = match solver {
        SolverKind::Scan => scan_solver(&mut referee, y0)?,
        SolverKind::Split => splitting_solver(&mut referee, y0)?,
        SolverKind::Birthday => birthday_solver(&mut referee, y0, k, split_seed(master, 1))?,
    };
    let steps = referee.remaining_per_step.clone();

    let mut out = String::new();
    writeln!(
        out,
        "adversary n={n} m={m} solver={} seed={master} y0={y0}",
        solver.name()
    )
    .unwrap();
    writeln!(out, "window_size={window_size} threshold={threshold} budget={budget}").unwrap();
    for (i, remaining) in steps.iter().enumerate() {
        writeln!(out, "step {}: remaining={remaining}", i + 1).unwrap();
    }
    writeln!(out, "queries_answered={}", adversary.queries_answered()).unwrap();
    match result.reported {
        Some(v) => writeln!(out, "solver_reported={v}").unwrap(),
        None => writeln!(out, "solver_reported=none (budget exhausted)").unwrap(),
    }
    let remaining = adversary.remaining_orders();
    writeln!(out, "remaining={}", remaining.len()).unwrap();
    writeln!(out, "chain:").unwrap();
    out.push_str(&adversary.chain().dump());

    if remaining.len() >= 2 {
        for (tag, &r) in remaining.iter().take(2).enumerate() {
            let witness = adversary.finalize(r)?;
            let replay_ok = witness.replay_matches(adversary.transcript());
            let ord = witness.order_of(y0);
            if !replay_ok || ord != r {
                return Err(CliError::Internal(format!(
                    "witness for order {r} failed verification (replay={replay_ok}, ord={ord})"
                )));
            }
            writeln!(out, "witness r={r}: replay=ok ord={ord}").unwrap();
            if let Some(path) = &args.out {
                let mut file = path.as_os_str().to_owned();
                file.push(format!(".witness{}.txt", tag + 1));
                std::fs::write(std::path::PathBuf::from(file), export_permutation(&witness, master))?;
            }
        }
        writeln!(out, "evasive=true (two witnesses with distinct orders)").unwrap();
    } else {
        writeln!(out, "evasive=false (pinned down; consistent orders left: {})", remaining.len())
            .unwrap();
    }
    Ok(out)
}
