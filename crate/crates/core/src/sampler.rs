//! Lazily sampled random two-cycle permutations.
//!
//! The hard input distribution draws a cycle size `r` uniformly from a prime
//! window, then lays out one `r`-cycle of random elements followed by one
//! `(2^n − r)`-cycle in an array `A`. [`eager_build`] materializes that
//! directly. [`LazySampler`] answers the same queries while determining the
//! entries of `A` on the fly from two pre-shuffled streams: a list `V` of
//! new values and a list `I` of new indices. Stochastically the two are the
//! same oracle; the lazy one costs memory proportional to the number of
//! queries rather than `2^n`.
//!
//! Each query runs a two-stage update:
//!
//! 1. find (or assign, drawing from `I`) the index `i` with `A_i = y`;
//! 2. compute `j` by cycle arithmetic from `(i, x, r)`; if `A_j` is
//!    unassigned, draw values from `V` until one not yet in `A` appears and
//!    put it there. `A_j` is the response.
//!
//! With instrumentation on, the sampler also maintains the chain that
//! subsumes everything the querier has learned — pinned to array locations
//! through the head index — and records the two ways that bookkeeping can
//! break: a drawn index landing above `2^n − 2^{2n/3}` (past the guaranteed
//! first-cycle prefix), or a new node overlapping an occupied chain offset.

use alloc::collections::btree_map::Entry;
use alloc::collections::BTreeMap;

use crate::chain::Chain;
use crate::number_theory::PrimeWindow;
use crate::oracle::{OracleParams, QueryOracle, Transcript, TwoCyclePermutation};
use crate::rational::Rational;
use crate::rng::{split_seed, SplitMix64};
use crate::{Error, Result};

/// A uniformly shuffled copy of `{0, …, size−1}`, materialized on demand.
///
/// Consuming the stream runs Fisher-Yates one position at a time: only the
/// slots actually displaced are stored, so memory grows with the number of
/// accesses, not with `size`.
#[derive(Debug, Clone)]
pub struct LazyShuffle {
    size: u64,
    cursor: u64,
    displaced: BTreeMap<u64, u64>,
    rng: SplitMix64,
}

impl LazyShuffle {
    pub fn new(size: u64, seed: u64) -> Self {
        LazyShuffle { size, cursor: 0, displaced: BTreeMap::new(), rng: SplitMix64::new(seed) }
    }

    /// Number of elements consumed so far.
    pub fn accessed(&self) -> u64 {
        self.cursor
    }
}

impl Iterator for LazyShuffle {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        if self.cursor >= self.size {
            return None;
        }
        let t = self.cursor;
        let u = self.rng.gen_range(t, self.size);
        let at_t = self.displaced.remove(&t).unwrap_or(t);
        let result = if u == t {
            at_t
        } else {
            self.displaced.insert(u, at_t).unwrap_or(u)
        };
        self.cursor += 1;
        Some(result)
    }
}

/// Cycle-structure index arithmetic: the position reached from position `i`
/// after `x` steps, in an array whose first `r` slots form one cycle and
/// whose remaining `domain − r` slots form another.
pub fn cycle_step(i: u64, x: u128, r: u64, domain: u64) -> u64 {
    if i < r {
        ((i as u128 + x) % r as u128) as u64
    } else {
        let s = domain - r;
        r + (((i - r) as u128 + x) % s as u128) as u64
    }
}

/// A query asking for a positive power of `y` that answered `y` itself;
/// such a query certifies a multiple of the order of `y`.
pub fn is_collision(x: u128, y: u64, response: u64) -> bool {
    x > 0 && response == y
}

/// Counts of the two instrumentation failure events.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FailureRecord {
    /// A freshly drawn index exceeded `2^n − 2^{2n/3}`.
    pub event_a_count: u32,
    /// A new chain node landed on an occupied offset.
    pub event_b_count: u32,
}

impl FailureRecord {
    pub fn failed(&self) -> bool {
        self.event_a_count > 0 || self.event_b_count > 0
    }
}

/// Chain bookkeeping attached to a [`LazySampler`].
#[derive(Debug, Clone)]
pub struct Instrumentation {
    chain: Chain,
    failure: FailureRecord,
    diverged: bool,
    tracking: bool,
    index_cap: u64,
}

impl Instrumentation {
    fn new(index_cap: u64, weight_bound: u128) -> Self {
        Instrumentation {
            chain: Chain::with_weight_bound(weight_bound),
            failure: FailureRecord::default(),
            diverged: false,
            tracking: true,
            index_cap,
        }
    }

    pub fn chain(&self) -> &Chain {
        &self.chain
    }

    pub fn failure(&self) -> &FailureRecord {
        &self.failure
    }

    /// True once some response contradicted the chain — the execution left
    /// the principal path (the drawn order collided with the chain).
    pub fn diverged(&self) -> bool {
        self.diverged
    }

    /// Chain maintenance for one answered query. `index_drawn` is the index
    /// freshly assigned to `y` in stage 1, when one was.
    fn observe(&mut self, x: u128, y: u64, response: u64, index_drawn: Option<u64>) {
        if !self.tracking || self.diverged {
            return;
        }
        if self.chain.is_empty() {
            let i0 = match index_drawn {
                Some(i) => i,
                None => {
                    self.diverged = true;
                    return;
                }
            };
            if i0 > self.index_cap {
                self.failure.event_a_count += 1;
                self.tracking = false;
                return;
            }
            self.chain.insert_at_offset(0, y).expect("empty chain accepts a head");
            self.chain.set_head_location(i0);
        } else if !self.chain.contains_value(y) {
            // external query: tie y to the head through its array index
            let drawn = match index_drawn {
                Some(i) => i,
                None => {
                    // y was already in the array yet never entered the
                    // chain; the chain no longer subsumes the execution
                    self.diverged = true;
                    return;
                }
            };
            if drawn > self.index_cap {
                self.failure.event_a_count += 1;
                self.tracking = false;
                return;
            }
            let head = self.chain.head_location().expect("nonempty chain has a head index");
            if drawn < head {
                self.chain
                    .prepend(y, (head - drawn) as u128)
                    .expect("prepend weight is positive and below 2^m");
                self.chain.set_head_location(drawn);
            } else {
                let offset = (drawn - head) as u128;
                if self.chain.value_at(offset).is_some() {
                    self.failure.event_b_count += 1;
                    self.tracking = false;
                    return;
                }
                self.chain
                    .insert_at_offset(offset, y)
                    .expect("offset and value checked fresh");
            }
        }
        // internal step: compare the chain's prediction with the response
        let o = self.chain.offset_of(y).expect("y is a chain value now");
        let predicted = if x == 0 { Some(y) } else { self.chain.value_at(o + x) };
        match predicted {
            Some(p) => {
                if p != response {
                    self.diverged = true;
                }
            }
            None => {
                if self.chain.contains_value(response) {
                    self.diverged = true;
                } else {
                    self.chain
                        .insert_at(y, x, response)
                        .expect("offset free by lookup, value checked fresh");
                }
            }
        }
    }
}

/// The lazily materialized oracle.
#[derive(Debug, Clone)]
pub struct LazySampler {
    params: OracleParams,
    r: u64,
    values: LazyShuffle,
    indices: LazyShuffle,
    assigned: BTreeMap<u64, u64>,
    index_of: BTreeMap<u64, u64>,
    count: u64,
    transcript: Transcript,
    instr: Option<Instrumentation>,
}

impl LazySampler {
    /// Draw `r` uniformly from `window` and set up the value/index streams.
    /// The seed fully determines `r`, `V`, and `I`.
    pub fn new(params: OracleParams, window: &PrimeWindow, seed: u64) -> Result<Self> {
        if window.is_empty() {
            return Err(Error::EmptyWindow);
        }
        if window.hi() > params.domain_size() {
            return Err(Error::InvalidArgument("window exceeds the domain"));
        }
        let mut pick = SplitMix64::new(split_seed(seed, 0));
        let r = window.primes()[pick.gen_range(0, window.len() as u64) as usize];
        let size = params.domain_size();
        Ok(LazySampler {
            params,
            r,
            values: LazyShuffle::new(size, split_seed(seed, 1)),
            indices: LazyShuffle::new(size, split_seed(seed, 2)),
            assigned: BTreeMap::new(),
            index_of: BTreeMap::new(),
            count: 0,
            transcript: Transcript::default(),
            instr: None,
        })
    }

    /// Like [`LazySampler::new`], with chain instrumentation enabled. The
    /// index cap for failure accounting is the window's lower bound, below
    /// which an index is guaranteed to sit in the first cycle whatever `r`
    /// was drawn.
    pub fn instrumented(params: OracleParams, window: &PrimeWindow, seed: u64) -> Result<Self> {
        let mut sampler = Self::new(params, window, seed)?;
        sampler.instr = Some(Instrumentation::new(window.lo(), 1u128 << params.m()));
        Ok(sampler)
    }

    pub fn params(&self) -> &OracleParams {
        &self.params
    }

    /// The drawn cycle size (structural information, not query-visible).
    pub fn order(&self) -> u64 {
        self.r
    }

    pub fn instrumentation(&self) -> Option<&Instrumentation> {
        self.instr.as_ref()
    }

    pub fn transcript(&self) -> &Transcript {
        &self.transcript
    }

    pub fn set_recording(&mut self, on: bool) {
        self.transcript.set_recording(on);
    }

    /// Number of array entries assigned so far.
    pub fn assigned_len(&self) -> usize {
        self.assigned.len()
    }

    /// Stage 1: the index holding `y`, assigning one from `I` if needed.
    fn locate(&mut self, y: u64) -> (u64, bool) {
        if let Some(&i) = self.index_of.get(&y) {
            return (i, false);
        }
        loop {
            let i = self.indices.next().expect("index stream outlives the array");
            if let Entry::Vacant(slot) = self.assigned.entry(i) {
                slot.insert(y);
                self.index_of.insert(y, i);
                return (i, true);
            }
        }
    }

    /// Stage 2: the value at index `j`, assigning one from `V` if needed.
    fn materialize(&mut self, j: u64) -> u64 {
        if let Some(&v) = self.assigned.get(&j) {
            return v;
        }
        loop {
            let v = self.values.next().expect("value stream outlives the array");
            if !self.index_of.contains_key(&v) {
                self.assigned.insert(j, v);
                self.index_of.insert(v, j);
                return v;
            }
        }
    }
}

impl QueryOracle for LazySampler {
    fn n(&self) -> u32 {
        self.params.n()
    }

    fn m(&self) -> u32 {
        self.params.m()
    }

    fn query(&mut self, x: u128, y: u64) -> Result<u64> {
        if x >= self.params.exponent_limit() {
            return Err(Error::InvalidArgument("exponent x out of range"));
        }
        if y >= self.params.domain_size() {
            return Err(Error::InvalidArgument("element y out of range"));
        }
        let (i, was_new) = self.locate(y);
        let j = cycle_step(i, x, self.r, self.params.domain_size());
        let response = self.materialize(j);
        self.count += 1;
        self.transcript.record(x, y, response);
        if let Some(instr) = self.instr.as_mut() {
            instr.observe(x, y, response, if was_new { Some(i) } else { None });
        }
        Ok(response)
    }

    fn queries_used(&self) -> u64 {
        self.count
    }
}

/// Materialize a permutation from the same distribution in one shot.
pub fn eager_build(seed: u64, n: u32, window: &PrimeWindow) -> Result<TwoCyclePermutation> {
    if window.is_empty() {
        return Err(Error::EmptyWindow);
    }
    if window.hi() > 1u64 << n {
        return Err(Error::InvalidArgument("window exceeds the domain"));
    }
    let mut pick = SplitMix64::new(split_seed(seed, 0));
    let r = window.primes()[pick.gen_range(0, window.len() as u64) as usize];
    TwoCyclePermutation::random(n, r, split_seed(seed, 1))
}

/// Upper bound on the probability that instrumentation fails within `t`
/// queries: `t · 2^{−n/3} + t² / (2^n − 2^{2n/3})`. Exact only when `n` is
/// divisible by 3, which is required.
pub fn failure_probability_bound(t: u64, n: u32) -> Result<Rational> {
    if n < 3 || !n.is_multiple_of(3) || n > 42 {
        return Err(Error::InvalidArgument("failure bound needs n divisible by 3, 3 <= n <= 42"));
    }
    let t = t as i128;
    let third = 1i128 << (n / 3);
    let slice = (1i128 << n) - (1i128 << (2 * n / 3));
    Ok(Rational::new(t, third) + Rational::new(t * t, slice))
}

/// Lower bound on the probability that a uniformly drawn window order stays
/// consistent with a length-`k` chain:
/// `1 − (k(k−1)/2) · floor((m+n)/(n−1)) / window_size`.
/// Can be negative for long chains; callers treat that as zero information.
pub fn consistency_probability_bound(k: u64, n: u32, m: u32, window_size: u64) -> Rational {
    debug_assert!(n >= 2 && window_size > 0);
    let pairs = k as i128 * (k as i128 - 1) / 2;
    let per_pair = ((m + n) / (n - 1)) as i128;
    Rational::one() - Rational::new(pairs * per_pair, window_size as i128)
}
