use std::collections::BTreeMap;
use std::fmt::Write;

use orderlab_core::number_theory::top_slice_window;
use orderlab_core::oracle::{OracleParams, QueryOracle};
use orderlab_core::rng::{split_seed, SplitMix64};
use orderlab_core::sampler::{
    eager_build, failure_probability_bound, is_collision, LazySampler,
};

use crate::cli::Args;
use crate::commands::{emit_rows, run_trials};
use crate::stats::{canonical_pattern, tv_distance};
use crate::CliError;

pub const SAMPLER_CSV_HEADER: &str = "seed,n,m,r,t,collision_found,failure_a,failure_b";

/// Fixed script length for the lazy-versus-eager distribution comparison.
const TV_SCRIPT_LEN: usize = 3;
/// The comparison is only attempted where the canonical pattern space is
/// small relative to the sample count.
const TV_MAX_N: u32 = 8;

/// Drive instrumented lazy samplers through random query scripts, reporting
/// the empirical chain-failure rate against the analytic ceiling, plus (at
/// small sizes) an estimated total-variation distance between lazy and eager
/// response distributions.
pub fn run_sampler_check(args: &Args) -> Result<String, CliError> {
    let n = args.require_n()?;
    let m = args.m_or_default(n);
    let t = args.script_len.unwrap_or(10);
    let trials = args.trials_or_default();
    let master = args.seed_or_default();
    if n % 3 != 0 {
        return Err(CliError::Config(
            "sampler-check needs n divisible by 3 (the top-slice window and failure bound require it)".into(),
        ));
    }
    let window = top_slice_window(n)?;
    let params = OracleParams::new(n, m, 0)?;
    let bound = failure_probability_bound(t, n)?;

    let trial_master = split_seed(master, 1);
    struct Outcome {
        row: String,
        failed: bool,
    }
    let outcomes = run_trials(trials, args.jobs_or_default(), |trial| {
        let trial_seed = split_seed(trial_master, trial);
        let mut script_rng = SplitMix64::new(split_seed(trial_seed, 0));
        let mut sampler = LazySampler::instrumented(params, &window, split_seed(trial_seed, 1))?;
        let mut collision_found = false;
        for _ in 0..t {
            let x = script_rng.gen_bits(m);
            let y = script_rng.gen_bits(n) as u64;
            let resp = sampler.query(x, y)?;
            collision_found |= is_collision(x, y, resp);
        }
        let failure = *sampler.instrumentation().expect("instrumented").failure();
        let row = format!(
            "{trial_seed},{n},{m},{},{t},{},{},{}",
            sampler.order(),
            collision_found as u8,
            (failure.event_a_count > 0) as u8,
            (failure.event_b_count > 0) as u8,
        );
        Ok(Outcome { row, failed: failure.failed() })
    })?;

    let mut stdout = String::new();
    let rows: Vec<String> = outcomes.iter().map(|o| o.row.clone()).collect();
    emit_rows(args.out.as_deref(), SAMPLER_CSV_HEADER, &rows, &mut stdout)?;

    let failed = outcomes.iter().filter(|o| o.failed).count() as u64;
    let rate = failed as f64 / trials.max(1) as f64;
    writeln!(stdout, "# n={n} m={m} t={t} trials={trials} seed={master}").unwrap();
    writeln!(stdout, "# failed={failed} rate={rate:.6}").unwrap();
    writeln!(stdout, "# bound={} ({})", bound, bound.to_decimal(6)).unwrap();
    let bound_f = bound.numerator() as f64 / bound.denominator() as f64;
    writeln!(stdout, "# within_bound={}", rate <= bound_f).unwrap();

    if n <= TV_MAX_N {
        let tv = lazy_eager_tv(params, &window, split_seed(master, 2), trials)?;
        writeln!(
            stdout,
            "# tv_script_len={TV_SCRIPT_LEN} tv_estimate={tv:.6} (lazy vs eager, {trials} seeds each)"
        )
        .unwrap();
    }
    Ok(stdout)
}

/// Estimated total-variation distance between the joint response
/// distributions of the lazy and the eager construction on one fixed script,
/// measured on label-canonical response patterns.
pub fn lazy_eager_tv(
    params: OracleParams,
    window: &orderlab_core::number_theory::PrimeWindow,
    seed: u64,
    samples: u64,
) -> Result<f64, CliError> {
    let mut script_rng = SplitMix64::new(split_seed(seed, 0));
    let script: Vec<(u128, u64)> = (0..TV_SCRIPT_LEN)
        .map(|_| (script_rng.gen_bits(params.m()), script_rng.gen_bits(params.n()) as u64))
        .collect();

    let mut lazy_counts: BTreeMap<Vec<u8>, u64> = BTreeMap::new();
    let mut eager_counts: BTreeMap<Vec<u8>, u64> = BTreeMap::new();
    for i in 0..samples {
        let mut sampler = LazySampler::new(params, window, split_seed(seed, 2 * i + 1))?;
        let responses: Vec<u64> = script
            .iter()
            .map(|&(x, y)| sampler.query(x, y))
            .collect::<orderlab_core::Result<_>>()?;
        *lazy_counts.entry(canonical_pattern(&script, &responses)).or_default() += 1;

        let perm = eager_build(split_seed(seed, 2 * i + 2), params.n(), window)?;
        let responses: Vec<u64> = script.iter().map(|&(x, y)| perm.eval_pow(x, y)).collect();
        *eager_counts.entry(canonical_pattern(&script, &responses)).or_default() += 1;
    }
    Ok(tv_distance(&lazy_counts, &eager_counts))
}
