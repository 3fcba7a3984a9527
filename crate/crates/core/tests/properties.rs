//! Cross-module invariants, exercised with randomized inputs.

use orderlab_core::chain::{consistent_orders_by_placement, elimination_bound, Chain};
use orderlab_core::number_theory::{divisors_in_window, order_divides, upper_half_window};
use orderlab_core::oracle::{
    CycleIndexedOracle, CycleIndexedPermutation, ModularOracle, QueryOracle, TwoCycleOracle,
    TwoCyclePermutation,
};
use orderlab_core::rng::SplitMix64;
use proptest::prelude::*;

proptest! {
    /// An exponent below 2^h can have at most floor(h/(n-1)) divisors among
    /// primes above 2^(n-1).
    #[test]
    fn divisor_count_in_upper_window_is_capped(
        n in 3u32..10,
        h_extra in 0u32..16,
        raw in any::<u128>(),
    ) {
        let h = n + h_extra;
        let x = (raw & ((1u128 << h) - 1)).max(1);
        let w = upper_half_window(n).unwrap();
        let cap = (h / (n - 1)) as usize;
        let divisors = divisors_in_window(x, &w);
        prop_assert!(
            divisors.len() <= cap,
            "x={x} has {} window divisors, cap {cap}", divisors.len()
        );
    }

    /// Multiples of a window prime are divisible by it, and nothing strictly
    /// between two multiples is.
    #[test]
    fn order_divisibility_around_multiples(idx in 0usize..5, k in 0u64..50, j in 1u64..11) {
        let w = upper_half_window(5).unwrap();
        let r = w.primes()[idx];
        prop_assert!(order_divides(k as u128 * r as u128, r));
        prop_assert!(!order_divides(k as u128 * r as u128 + j as u128, r));
    }

    /// Composed queries agree with a single query of the summed exponent.
    #[test]
    fn query_composition_law(seed in any::<u64>(), x1 in 0u128..4096, x2 in 0u128..4096, y in 0u64..64) {
        let perm = TwoCyclePermutation::random(6, 53, seed).unwrap();
        let mut oracle = TwoCycleOracle::new(perm, 13).unwrap();
        let step = oracle.query(x2, y).unwrap();
        let composed = oracle.query(x1, step).unwrap();
        let direct = oracle.query(x1 + x2, y).unwrap();
        prop_assert_eq!(composed, direct);
    }

    /// A query answers y exactly when the order of y divides the exponent —
    /// across all three oracle flavors.
    #[test]
    fn collision_iff_order_divides(seed in any::<u64>(), x in 0u128..(1 << 20), y in 0u64..256) {
        let r = SplitMix64::new(seed).gen_range(1, 257);
        let perm = TwoCyclePermutation::random(8, r, seed).unwrap();
        let truth = perm.order_of(y);
        let mut two_cycle = TwoCycleOracle::new(perm.clone(), 20).unwrap();
        prop_assert_eq!(two_cycle.query(x, y).unwrap() == y, order_divides(x, truth));

        let general = CycleIndexedPermutation::from_permutation(8, &perm.pointwise()).unwrap();
        prop_assert_eq!(general.order_of(y), truth);
        let mut general = CycleIndexedOracle::new(general, 20).unwrap();
        prop_assert_eq!(general.query(x, y).unwrap() == y, order_divides(x, truth));
    }

    /// Same check for the modular flavor, which evaluates through modular
    /// exponentiation instead of an array.
    #[test]
    fn modular_collision_iff_order_divides(x in 0u128..(1 << 20), y in 0u64..256) {
        let mut oracle = ModularOracle::new(8, 20, 255, 2).unwrap();
        let truth = oracle.order_of(y);
        prop_assert_eq!(oracle.query(x, y).unwrap() == y, order_divides(x, truth));
    }

    /// The offset-residue consistency test agrees exactly with brute-force
    /// placement of the chain onto a cycle of each candidate size.
    #[test]
    fn consistency_matches_placement_oracle(
        n in 4u32..9,
        ops in prop::collection::vec((any::<u16>(), any::<u8>()), 1..24),
    ) {
        let chain = build_chain(n, 2 * n, &ops);
        let w = upper_half_window(n).unwrap();
        prop_assert_eq!(chain.consistent_orders(&w), consistent_orders_by_placement(&chain, &w));
    }

    /// However a chain is built with valid operations, it cannot rule out
    /// more window orders than the elimination bound allows.
    #[test]
    fn elimination_bound_holds_for_built_chains(
        n in 4u32..9,
        ops in prop::collection::vec((any::<u16>(), any::<u8>()), 1..24),
    ) {
        let m = 2 * n;
        let chain = build_chain(n, m, &ops);
        let w = upper_half_window(n).unwrap();
        let eliminated = (w.len() - chain.consistent_orders(&w).len()) as u128;
        prop_assert!(eliminated <= elimination_bound(chain.len() as u64, n, m));
    }
}

/// Drive a chain through a random mix of the real mutating operations:
/// seeding, prepends, and offset inserts derived from existing nodes.
fn build_chain(n: u32, m: u32, ops: &[(u16, u8)]) -> Chain {
    let mut chain = Chain::with_weight_bound(1 << m);
    let mut fresh = 0u64..1 << n;
    for &(raw_x, selector) in ops {
        let Some(v) = fresh.clone().next() else { break };
        if chain.is_empty() {
            chain.insert_at_offset(0, v).unwrap();
            fresh.next();
            continue;
        }
        let x = (raw_x as u128 % ((1 << m) - 1)) + 1;
        if selector % 3 == 0 {
            chain.prepend(v, x).unwrap();
            fresh.next();
        } else {
            let nodes: Vec<(u128, u64)> = chain.nodes().collect();
            let (_, y) = nodes[selector as usize % nodes.len()];
            if chain.lookup(y, x).unwrap().is_none() {
                chain.insert_at(y, x, v).unwrap();
                fresh.next();
            }
        }
    }
    chain
}

/// The splitting-strategy candidate set shrinks too slowly against the
/// evasive responder: large-prime divisor classes are thin, so the set stays
/// far from a singleton within the evasiveness budget.
#[test]
fn splitting_solver_cannot_pin_down_the_adversary() {
    use orderlab_core::adversary::{evasive_threshold, Adversary};
    use orderlab_core::oracle::{Budgeted, OracleParams};
    use orderlab_core::solvers::splitting_solver;

    let params = OracleParams::new(16, 32, 0).unwrap();
    let budget = evasive_threshold(16, 32) / 2;
    let mut adversary = Adversary::new(params).unwrap();
    let mut capped = Budgeted::new(&mut adversary, budget);
    let result = splitting_solver(&mut capped, 0).unwrap();
    assert_eq!(result.reported, None, "solver should not finish inside the budget");
    assert_eq!(result.queries_used, budget);
    assert!(adversary.remaining_orders().len() >= 2);
}

/// Transcript replay: an honest oracle reproduces its own log, and rejects a
/// log from a different permutation.
#[test]
fn transcripts_replay_against_their_source() {
    let mut rng = SplitMix64::new(3);
    let perm = TwoCyclePermutation::random(6, 61, 8).unwrap();
    let other = TwoCyclePermutation::random(6, 61, 9).unwrap();
    let mut oracle = TwoCycleOracle::new(perm.clone(), 12).unwrap();
    for _ in 0..40 {
        let x = rng.gen_bits(12);
        let y = rng.gen_bits(6) as u64;
        oracle.query(x, y).unwrap();
    }
    assert!(perm.replay_matches(oracle.transcript().entries()));
    assert!(!other.replay_matches(oracle.transcript().entries()));
}
