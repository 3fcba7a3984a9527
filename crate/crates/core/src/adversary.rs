//! The evasive responder.
//!
//! Facing an arbitrary query sequence, the adversary invents answers instead
//! of committing to a permutation, recording everything it has asserted in a
//! single [`Chain`]. Answers are chosen so that as many candidate orders as
//! possible stay consistent with the chain; as long as at least two remain,
//! no algorithm can have determined the order yet, because [`finalize`]
//! can exhibit a genuine permutation for each surviving order that replays
//! the whole conversation.
//!
//! Each answered query adds at most two chain nodes (external queries cost
//! a prepend plus an insert), and a chain of length `k` rules out at most
//! [`elimination_bound`]`(k, n, m)` orders, which yields the concrete
//! evasiveness guarantee computed by [`evasive_threshold`].
//!
//! [`finalize`]: Adversary::finalize

use alloc::vec;
use alloc::vec::Vec;

use crate::chain::{elimination_bound, Chain};
use crate::number_theory::{upper_half_window, PrimeWindow};
use crate::oracle::{OracleParams, QueryOracle, QueryRecord, TwoCyclePermutation};
use crate::{Error, Result};

/// Largest chain length `k` for which
/// `0.721 · 2^n / n  −  (k²/2) · (m+n)/(n−1)  >=  2`
/// holds, evaluated in exact integer arithmetic.
///
/// While the chain is at most this long (at most `threshold / 2` queries),
/// at least two upper-half-window orders stay consistent, provided the
/// window really holds its density floor — true for every n >= 9 in range.
pub fn evasive_threshold(n: u32, m: u32) -> u64 {
    debug_assert!((2..=26).contains(&n) && m >= n);
    let n = n as i128;
    let m = m as i128;
    let num = 1442 * (n - 1) * (1i128 << n) - 4000 * n * (n - 1);
    let den = 1000 * n * (m + n);
    if num <= 0 {
        return 0;
    }
    // floor of sqrt(num/den): largest k with k^2 * den <= num
    let mut k = 0i128;
    let mut step = 1i128 << 32;
    while step > 0 {
        while (k + step) * (k + step) * den <= num {
            k += step;
        }
        step /= 2;
    }
    k as u64
}

/// Evasive strategy state for one game.
#[derive(Debug, Clone)]
pub struct Adversary {
    params: OracleParams,
    window: PrimeWindow,
    chain: Chain,
    queries_answered: u64,
    transcript: Vec<QueryRecord>,
}

impl Adversary {
    /// Candidate orders default to the upper-half prime window.
    pub fn new(params: OracleParams) -> Result<Self> {
        let window = upper_half_window(params.n())?;
        Ok(Self::with_window(params, window))
    }

    pub fn with_window(params: OracleParams, window: PrimeWindow) -> Self {
        Adversary {
            params,
            window,
            chain: Chain::with_weight_bound(1u128 << params.m()),
            queries_answered: 0,
            transcript: Vec::new(),
        }
    }

    pub fn params(&self) -> &OracleParams {
        &self.params
    }

    pub fn chain(&self) -> &Chain {
        &self.chain
    }

    pub fn window(&self) -> &PrimeWindow {
        &self.window
    }

    pub fn queries_answered(&self) -> u64 {
        self.queries_answered
    }

    pub fn transcript(&self) -> &[QueryRecord] {
        &self.transcript
    }

    /// Smallest domain value not yet asserted anywhere in the chain.
    fn next_fresh(&self) -> Result<u64> {
        let size = self.params.domain_size();
        (0..size)
            .find(|&v| !self.chain.contains_value(v))
            .ok_or(Error::Capacity("every domain value is already pinned to the chain"))
    }

    /// Answer `pi^x(y)` evasively.
    ///
    /// The first query seeds the chain with `y` as head. A query on a value
    /// outside the chain first prepends it with weight 1 (asserting slightly
    /// more about `pi` than the caller learns, which is safe — the chain
    /// only ever over-approximates what has been revealed). After that the
    /// query is internal: answer from the chain if the offset `offset(y)+x`
    /// is taken, otherwise mint the smallest unused value there.
    pub fn respond(&mut self, x: u128, y: u64) -> Result<u64> {
        if x >= self.params.exponent_limit() {
            return Err(Error::InvalidArgument("exponent x out of range"));
        }
        if y >= self.params.domain_size() {
            return Err(Error::InvalidArgument("element y out of range"));
        }
        if self.chain.is_empty() {
            self.chain.insert_at_offset(0, y)?;
        } else if !self.chain.contains_value(y) {
            if self.chain.len() as u64 >= self.params.domain_size() {
                return Err(Error::Capacity("chain already spans the whole domain"));
            }
            self.chain.prepend(y, 1)?;
        }
        let response = if x == 0 {
            y
        } else {
            match self.chain.lookup(y, x)? {
                Some(v) => v,
                None => {
                    let fresh = self.next_fresh()?;
                    self.chain.insert_at(y, x, fresh)?
                }
            }
        };
        self.queries_answered += 1;
        self.transcript.push((x, y, response));
        debug_assert!(self.chain.len() as u64 <= 2 * self.queries_answered);
        Ok(response)
    }

    /// The window orders still consistent with everything asserted so far.
    pub fn remaining_orders(&self) -> Vec<u64> {
        self.chain.consistent_orders(&self.window)
    }

    /// Guaranteed floor on `remaining_orders().len()` at the current chain
    /// length (can be negative-meaning-zero at small n).
    pub fn consistency_floor(&self) -> i128 {
        self.window.len() as i128
            - elimination_bound(self.chain.len() as u64, self.params.n(), self.params.m()) as i128
    }

    /// Commit to order `r`: build a concrete two-cycle permutation that
    /// answers the entire transcript exactly as this adversary did and in
    /// which `ord(y0) = r`.
    ///
    /// Chain nodes land in the first cycle at position `offset mod r` —
    /// distinct positions exactly because `r` is consistent. `y0` is forced
    /// into the first cycle even if it was never queried, and all unused
    /// values fill the remaining slots in increasing order.
    pub fn finalize(&self, r: u64) -> Result<TwoCyclePermutation> {
        if !self.window.contains(r) || !self.chain_consistent_with(r) {
            return Err(Error::InvalidArgument("r is not a consistent remaining order"));
        }
        if self.chain.len() as u64 > r {
            return Err(Error::Capacity("chain is longer than the requested cycle"));
        }
        let size = self.params.domain_size();
        let y0 = self.params.y0();
        debug_assert!(r <= size);

        const EMPTY: u64 = u64::MAX;
        let mut array = vec![EMPTY; size as usize];
        let mut placed = vec![false; size as usize];
        for (offset, value) in self.chain.nodes() {
            let pos = (offset % r as u128) as usize;
            debug_assert_eq!(array[pos], EMPTY);
            array[pos] = value;
            placed[value as usize] = true;
        }
        if !placed[y0 as usize] {
            let slot = array[..r as usize]
                .iter()
                .position(|&v| v == EMPTY)
                .ok_or(Error::Capacity("no free slot in the first cycle for y0"))?;
            array[slot] = y0;
            placed[y0 as usize] = true;
        }
        let mut unused = (0..size).filter(|&v| !placed[v as usize]);
        for slot in array.iter_mut() {
            if *slot == EMPTY {
                *slot = unused.next().expect("value/slot counts match");
            }
        }
        let perm = TwoCyclePermutation::from_array(self.params.n(), r, array)?;
        debug_assert!(perm.replay_matches(&self.transcript));
        debug_assert_eq!(perm.order_of(y0), r);
        Ok(perm)
    }

    fn chain_consistent_with(&self, r: u64) -> bool {
        let mut residues: Vec<u128> = self.chain.offsets().map(|o| o % r as u128).collect();
        residues.sort_unstable();
        residues.windows(2).all(|w| w[0] != w[1])
    }
}

/// Solvers can play directly against the adversary through the ordinary
/// black-box interface.
impl QueryOracle for Adversary {
    fn n(&self) -> u32 {
        self.params.n()
    }

    fn m(&self) -> u32 {
        self.params.m()
    }

    fn query(&mut self, x: u128, y: u64) -> Result<u64> {
        self.respond(x, y)
    }

    fn queries_used(&self) -> u64 {
        self.queries_answered
    }
}
