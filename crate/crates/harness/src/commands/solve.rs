use std::fmt::Write;

use orderlab_core::number_theory::{top_slice_window, upper_half_window, PrimeWindow};
use orderlab_core::oracle::{TwoCycleOracle, TwoCyclePermutation};
use orderlab_core::rng::{split_seed, SplitMix64};
use orderlab_core::solvers::{birthday_solver, scan_solver, splitting_solver, verify_order};

use crate::cli::{Args, SolverKind, WindowKind};
use crate::commands::{emit_rows, run_trials};
use crate::stats::wilson_interval;
use crate::CliError;

pub const SOLVE_CSV_HEADER: &str = "trial,seed,n,m,r,y0,solver,reported,correct,queries";

/// How each trial picks its cycle size.
enum OrderSource {
    Window(PrimeWindow),
    /// Deterministic sweep over `1..=2^n`, so `--trials 2^n` covers every
    /// order exactly once.
    Sweep(u64),
}

struct TrialOutcome {
    row: String,
    correct: bool,
    solver_failed: bool,
    queries: u64,
}

/// Seeded order-finding trials: each builds a fresh two-cycle oracle with a
/// window-drawn cycle size and a random starting element inside that cycle,
/// runs the chosen solver, and re-verifies any reported order against the
/// live oracle before counting it correct.
pub fn run_solve(args: &Args) -> Result<String, CliError> {
    let n = args.require_n()?;
    let m = args.m_or_default(n);
    let solver = args.require_solver()?;
    let window_kind = args.window.unwrap_or(WindowKind::R);
    let trials = args.trials_or_default();
    let master = args.seed_or_default();
    let k = args.k_or_default(n);
    if trials == 0 {
        return Err(CliError::Config("--trials must be at least 1".into()));
    }
    if n + m > 120 || m < n {
        return Err(CliError::Config("need n <= m and n + m <= 120".into()));
    }
    let source = match window_kind {
        WindowKind::R => OrderSource::Window(upper_half_window(n)?),
        WindowKind::Rprime => OrderSource::Window(top_slice_window(n)?),
        WindowKind::All => OrderSource::Sweep(1 << n),
    };

    let outcomes = run_trials(trials, args.jobs_or_default(), |trial| {
        let trial_seed = split_seed(master, trial);
        let r = match &source {
            OrderSource::Sweep(size) => 1 + trial % size,
            OrderSource::Window(w) => {
                let mut rng = SplitMix64::new(split_seed(trial_seed, 0));
                w.primes()[rng.gen_range(0, w.len() as u64) as usize]
            }
        };
        let perm = TwoCyclePermutation::random(n, r, split_seed(trial_seed, 1))?;
        let mut rng = SplitMix64::new(split_seed(trial_seed, 2));
        let y0 = perm.array()[rng.gen_range(0, r) as usize];
        let mut oracle = TwoCycleOracle::new(perm, m)?;
        let result = match solver {
            SolverKind::Scan => scan_solver(&mut oracle, y0)?,
            SolverKind::Split => splitting_solver(&mut oracle, y0)?,
            SolverKind::Birthday => {
                birthday_solver(&mut oracle, y0, k, split_seed(trial_seed, 3))?
            }
        };
        let (reported, correct) = match result.reported {
            None => (0, false),
            Some(v) => {
                let structurally = oracle.order_of(y0) == v;
                let queried = verify_order(&mut oracle, y0, v)?;
                (v, structurally && queried)
            }
        };
        let row = format!(
            "{trial},{trial_seed},{n},{m},{r},{y0},{},{reported},{},{}",
            solver.name(),
            correct as u8,
            result.queries_used
        );
        Ok(TrialOutcome {
            row,
            correct,
            solver_failed: result.reported.is_none(),
            queries: result.queries_used,
        })
    })?;

    let mut stdout = String::new();
    let rows: Vec<String> = outcomes.iter().map(|o| o.row.clone()).collect();
    emit_rows(args.out.as_deref(), SOLVE_CSV_HEADER, &rows, &mut stdout)?;

    let successes = outcomes.iter().filter(|o| o.correct).count() as u64;
    let failures = outcomes.iter().filter(|o| o.solver_failed).count() as u64;
    let max_queries = outcomes.iter().map(|o| o.queries).max().unwrap_or(0);
    let total_queries: u64 = outcomes.iter().map(|o| o.queries).sum();
    let (ci_lo, ci_hi) = wilson_interval(successes, trials, 1.96);
    writeln!(
        stdout,
        "# solver={} n={n} m={m} window={} trials={trials} seed={master} k={k}",
        solver.name(),
        window_kind.name()
    )
    .unwrap();
    writeln!(
        stdout,
        "# success_rate={:.6} ci95=[{ci_lo:.6},{ci_hi:.6}]",
        successes as f64 / trials as f64
    )
    .unwrap();
    writeln!(
        stdout,
        "# mean_queries={:.6} max_queries={max_queries} solver_failures={failures}",
        total_queries as f64 / trials as f64
    )
    .unwrap();
    Ok(stdout)
}
