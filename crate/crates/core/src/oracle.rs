//! Black-box permutation oracles.
//!
//! A solver sees a permutation `pi` on `{0, …, 2^n − 1}` only through the
//! query map `(x, y) ↦ pi^x(y)` with `x < 2^m`. The [`QueryOracle`] trait is
//! that interface and nothing more: queries are counted (repeats included)
//! and logged to a [`Transcript`]. Structural access — cycle layout,
//! [`TwoCyclePermutation::order_of`] — lives on the concrete types, which a
//! test harness holds on to while handing solvers a `&mut dyn QueryOracle`.
//!
//! Three flavors are provided: the explicit two-cycle layout used by the
//! hard instance distribution, a modular-multiplication oracle, and a
//! general cycle-indexed oracle for arbitrary permutations.

use alloc::vec;
use alloc::vec::Vec;

use crate::rng::SplitMix64;
use crate::{Error, Result};

/// Problem-size parameters: domain bits `n`, exponent bits `m`, and the
/// element `y0` whose order is sought.
///
/// The width contract `n + m <= 120` keeps every exponent, chain offset, and
/// offset sum comfortably inside `u128` (sums stay below `2^{n+m}`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleParams {
    n: u32,
    m: u32,
    y0: u64,
}

impl OracleParams {
    pub fn new(n: u32, m: u32, y0: u64) -> Result<Self> {
        if !(1..=26).contains(&n) {
            return Err(Error::InvalidArgument("n must satisfy 1 <= n <= 26"));
        }
        if m < n {
            return Err(Error::InvalidArgument("m must satisfy m >= n"));
        }
        if n + m > 120 {
            return Err(Error::InvalidArgument("n + m must not exceed 120"));
        }
        if y0 >= 1 << n {
            return Err(Error::InvalidArgument("y0 must lie in the domain"));
        }
        Ok(OracleParams { n, m, y0 })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn y0(&self) -> u64 {
        self.y0
    }

    /// `2^n`.
    pub fn domain_size(&self) -> u64 {
        1 << self.n
    }

    /// `2^m`.
    pub fn exponent_limit(&self) -> u128 {
        1 << self.m
    }
}

/// One logged query: `(x, y, response)`.
pub type QueryRecord = (u128, u64, u64);

/// Transcript entries are capped so runaway experiments do not eat the heap;
/// past the cap the log stops growing and marks itself truncated. Recording
/// can also be switched off for bulk runs.
pub const TRANSCRIPT_CAP: usize = 10_000_000;

/// Ordered log of every query answered by an oracle.
#[derive(Debug, Clone)]
pub struct Transcript {
    entries: Vec<QueryRecord>,
    recording: bool,
    truncated: bool,
}

impl Default for Transcript {
    fn default() -> Self {
        Transcript {
            entries: Vec::new(),
            recording: true,
            truncated: false,
        }
    }
}

impl Transcript {
    pub(crate) fn record(&mut self, x: u128, y: u64, response: u64) {
        if !self.recording {
            return;
        }
        if self.entries.len() >= TRANSCRIPT_CAP {
            self.truncated = true;
            return;
        }
        self.entries.push((x, y, response));
    }

    pub fn entries(&self) -> &[QueryRecord] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_truncated(&self) -> bool {
        self.truncated
    }

    pub fn set_recording(&mut self, on: bool) {
        self.recording = on;
    }
}

/// Query counter plus transcript, shared by all oracle flavors.
#[derive(Debug, Clone, Default)]
struct Meter {
    count: u64,
    transcript: Transcript,
}

impl Meter {
    fn note(&mut self, x: u128, y: u64, response: u64) {
        self.count += 1;
        self.transcript.record(x, y, response);
    }
}

/// The black-box interface handed to solvers: composed-power queries with
/// counting, nothing else.
pub trait QueryOracle {
    fn n(&self) -> u32;
    fn m(&self) -> u32;
    /// Returns `pi^x(y)`. Counts the query and logs it.
    fn query(&mut self, x: u128, y: u64) -> Result<u64>;
    fn queries_used(&self) -> u64;
}

fn check_args(n: u32, m: u32, x: u128, y: u64) -> Result<()> {
    if x >= 1 << m {
        return Err(Error::InvalidArgument("exponent x out of range"));
    }
    if y >= 1 << n {
        return Err(Error::InvalidArgument("element y out of range"));
    }
    Ok(())
}

/// A permutation made of two cycles laid out in an array `A`: positions
/// `0..r` hold the first cycle and positions `r..2^n` the second, so that
///
/// ```text
/// pi^x(A_i) = A_{(i+x) mod r}            for 0 <= i < r
/// pi^x(A_i) = A_{((i-r+x) mod s) + r}    for r <= i < 2^n,  s = 2^n - r
/// ```
///
/// which makes any power of `pi` a single index computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoCyclePermutation {
    n: u32,
    r: u64,
    array: Vec<u64>,
    position: Vec<u64>,
}

impl TwoCyclePermutation {
    /// Validates that `array` is a bijection on `{0, …, 2^n − 1}` and that
    /// `1 <= r <= 2^n`.
    pub fn from_array(n: u32, r: u64, array: Vec<u64>) -> Result<Self> {
        if n == 0 || n > 26 {
            return Err(Error::InvalidArgument("n must satisfy 1 <= n <= 26"));
        }
        let size = 1u64 << n;
        if r == 0 || r > size {
            return Err(Error::InvalidArgument("cycle size r must satisfy 1 <= r <= 2^n"));
        }
        if array.len() as u64 != size {
            return Err(Error::InvalidArgument("array length must be 2^n"));
        }
        let mut position = vec![u64::MAX; size as usize];
        for (i, &v) in array.iter().enumerate() {
            if v >= size {
                return Err(Error::InvalidArgument("array entry out of domain"));
            }
            if position[v as usize] != u64::MAX {
                return Err(Error::InvalidArgument("array entry repeated; not a bijection"));
            }
            position[v as usize] = i as u64;
        }
        Ok(TwoCyclePermutation { n, r, array, position })
    }

    /// Sample the layout for cycle size `r`: `r` randomly selected elements
    /// in random order fill positions `0..r`, the rest in random order fill
    /// the remainder. A uniform shuffle of the whole array yields exactly
    /// this distribution. Deterministic given the seed.
    pub fn random(n: u32, r: u64, seed: u64) -> Result<Self> {
        if n == 0 || n > 26 {
            return Err(Error::InvalidArgument("n must satisfy 1 <= n <= 26"));
        }
        let size = 1u64 << n;
        if r == 0 || r > size {
            return Err(Error::InvalidArgument("cycle size r must satisfy 1 <= r <= 2^n"));
        }
        let mut array: Vec<u64> = (0..size).collect();
        SplitMix64::new(seed).shuffle(&mut array);
        Self::from_array(n, r, array)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Size of the first cycle.
    pub fn r(&self) -> u64 {
        self.r
    }

    /// Size of the second cycle, `2^n − r`.
    pub fn s(&self) -> u64 {
        (1u64 << self.n) - self.r
    }

    pub fn array(&self) -> &[u64] {
        &self.array
    }

    /// Index `i` with `A_i = y`.
    pub fn position_of(&self, y: u64) -> u64 {
        self.position[y as usize]
    }

    /// `pi^x(y)` by index arithmetic; does not count as a query.
    pub fn eval_pow(&self, x: u128, y: u64) -> u64 {
        let i = self.position[y as usize];
        let r = self.r;
        let j = if i < r {
            ((i as u128 + x) % r as u128) as u64
        } else {
            let s = self.s();
            r + (((i - r) as u128 + x) % s as u128) as u64
        };
        self.array[j as usize]
    }

    /// Exact order of `y`: the length of the cycle containing it.
    pub fn order_of(&self, y: u64) -> u64 {
        if self.position[y as usize] < self.r {
            self.r
        } else {
            self.s()
        }
    }

    /// Pointwise map `y ↦ pi(y)`.
    pub fn pointwise(&self) -> Vec<u64> {
        let size = 1u64 << self.n;
        (0..size).map(|y| self.eval_pow(1, y)).collect()
    }

    /// True iff every logged `(x, y, response)` agrees with this permutation.
    pub fn replay_matches(&self, transcript: &[QueryRecord]) -> bool {
        transcript.iter().all(|&(x, y, resp)| {
            y < (1 << self.n) && resp < (1 << self.n) && self.eval_pow(x, y) == resp
        })
    }
}

/// Cycle decomposition of an arbitrary permutation: every element knows its
/// cycle and its position inside it, so `pi^x` is one modular index step.
#[derive(Debug, Clone)]
pub struct CycleIndexedPermutation {
    n: u32,
    cycles: Vec<Vec<u64>>,
    cycle_of: Vec<u32>,
    pos_in_cycle: Vec<u64>,
}

impl CycleIndexedPermutation {
    /// Decompose the pointwise map `perm[y] = pi(y)`.
    pub fn from_permutation(n: u32, perm: &[u64]) -> Result<Self> {
        if n == 0 || n > 26 {
            return Err(Error::InvalidArgument("n must satisfy 1 <= n <= 26"));
        }
        let size = 1usize << n;
        if perm.len() != size {
            return Err(Error::InvalidArgument("permutation length must be 2^n"));
        }
        let mut seen = vec![false; size];
        for &v in perm {
            if v as usize >= size || seen[v as usize] {
                return Err(Error::InvalidArgument("not a bijection on the domain"));
            }
            seen[v as usize] = true;
        }
        let mut cycles = Vec::new();
        let mut cycle_of = vec![u32::MAX; size];
        let mut pos_in_cycle = vec![0u64; size];
        for start in 0..size as u64 {
            if cycle_of[start as usize] != u32::MAX {
                continue;
            }
            let id = cycles.len() as u32;
            let mut cycle = Vec::new();
            let mut cur = start;
            loop {
                cycle_of[cur as usize] = id;
                pos_in_cycle[cur as usize] = cycle.len() as u64;
                cycle.push(cur);
                cur = perm[cur as usize];
                if cur == start {
                    break;
                }
            }
            cycles.push(cycle);
        }
        Ok(CycleIndexedPermutation { n, cycles, cycle_of, pos_in_cycle })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn eval_pow(&self, x: u128, y: u64) -> u64 {
        let cycle = &self.cycles[self.cycle_of[y as usize] as usize];
        let len = cycle.len() as u128;
        let p = (self.pos_in_cycle[y as usize] as u128 + x) % len;
        cycle[p as usize]
    }

    pub fn order_of(&self, y: u64) -> u64 {
        self.cycles[self.cycle_of[y as usize] as usize].len() as u64
    }
}

/// Counting oracle over a [`TwoCyclePermutation`].
#[derive(Debug, Clone)]
pub struct TwoCycleOracle {
    perm: TwoCyclePermutation,
    m: u32,
    meter: Meter,
}

impl TwoCycleOracle {
    pub fn new(perm: TwoCyclePermutation, m: u32) -> Result<Self> {
        if m < perm.n() || perm.n() + m > 120 {
            return Err(Error::InvalidArgument("need n <= m and n + m <= 120"));
        }
        Ok(TwoCycleOracle { perm, m, meter: Meter::default() })
    }

    /// Structural access for verification; not part of the query interface.
    pub fn permutation(&self) -> &TwoCyclePermutation {
        &self.perm
    }

    pub fn order_of(&self, y: u64) -> u64 {
        self.perm.order_of(y)
    }

    pub fn transcript(&self) -> &Transcript {
        &self.meter.transcript
    }

    pub fn set_recording(&mut self, on: bool) {
        self.meter.transcript.set_recording(on);
    }
}

impl QueryOracle for TwoCycleOracle {
    fn n(&self) -> u32 {
        self.perm.n()
    }

    fn m(&self) -> u32 {
        self.m
    }

    fn query(&mut self, x: u128, y: u64) -> Result<u64> {
        check_args(self.perm.n(), self.m, x, y)?;
        let resp = self.perm.eval_pow(x, y);
        self.meter.note(x, y, resp);
        Ok(resp)
    }

    fn queries_used(&self) -> u64 {
        self.meter.count
    }
}

/// Counting oracle over an arbitrary permutation via cycle decomposition.
#[derive(Debug, Clone)]
pub struct CycleIndexedOracle {
    perm: CycleIndexedPermutation,
    m: u32,
    meter: Meter,
}

impl CycleIndexedOracle {
    pub fn new(perm: CycleIndexedPermutation, m: u32) -> Result<Self> {
        if m < perm.n() || perm.n() + m > 120 {
            return Err(Error::InvalidArgument("need n <= m and n + m <= 120"));
        }
        Ok(CycleIndexedOracle { perm, m, meter: Meter::default() })
    }

    pub fn permutation(&self) -> &CycleIndexedPermutation {
        &self.perm
    }

    pub fn order_of(&self, y: u64) -> u64 {
        self.perm.order_of(y)
    }

    pub fn transcript(&self) -> &Transcript {
        &self.meter.transcript
    }
}

impl QueryOracle for CycleIndexedOracle {
    fn n(&self) -> u32 {
        self.perm.n()
    }

    fn m(&self) -> u32 {
        self.m
    }

    fn query(&mut self, x: u128, y: u64) -> Result<u64> {
        check_args(self.perm.n(), self.m, x, y)?;
        let resp = self.perm.eval_pow(x, y);
        self.meter.note(x, y, resp);
        Ok(resp)
    }

    fn queries_used(&self) -> u64 {
        self.meter.count
    }
}

/// Oracle for `pi(y) = (a·y) mod N` on `0 <= y < N`, identity on
/// `N <= y < 2^n`. Powers are evaluated by modular exponentiation:
/// `pi^x(y) = (a^x · y) mod N`.
#[derive(Debug, Clone)]
pub struct ModularOracle {
    n: u32,
    m: u32,
    modulus: u64,
    multiplier: u64,
    meter: Meter,
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod_wide(base: u64, mut exp: u128, m: u64) -> u64 {
    let mut acc = 1 % m;
    let mut base = base % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

impl ModularOracle {
    /// Requires `0 < a < N < 2^n` and `gcd(a, N) = 1`, otherwise the map
    /// would not be a permutation.
    pub fn new(n: u32, m: u32, modulus: u64, a: u64) -> Result<Self> {
        if n == 0 || n > 26 || m < n || n + m > 120 {
            return Err(Error::InvalidArgument("need 1 <= n <= 26, n <= m, n + m <= 120"));
        }
        if modulus >= 1 << n {
            return Err(Error::InvalidArgument("modulus must be below 2^n"));
        }
        if a == 0 || a >= modulus {
            return Err(Error::InvalidArgument("need 0 < a < modulus"));
        }
        if gcd_u64(a, modulus) != 1 {
            return Err(Error::InvalidArgument("a and modulus must be coprime"));
        }
        Ok(ModularOracle { n, m, modulus, multiplier: a, meter: Meter::default() })
    }

    pub fn eval_pow(&self, x: u128, y: u64) -> u64 {
        if y >= self.modulus {
            return y;
        }
        mul_mod(pow_mod_wide(self.multiplier, x, self.modulus), y, self.modulus)
    }

    /// Exact order of `y`, by direct iteration of the structural map;
    /// does not touch the query counter.
    pub fn order_of(&self, y: u64) -> u64 {
        if y >= self.modulus {
            return 1;
        }
        let mut cur = mul_mod(self.multiplier, y, self.modulus);
        let mut steps = 1u64;
        while cur != y {
            cur = mul_mod(self.multiplier, cur, self.modulus);
            steps += 1;
        }
        steps
    }

    pub fn transcript(&self) -> &Transcript {
        &self.meter.transcript
    }

    pub fn replay_matches(&self, transcript: &[QueryRecord]) -> bool {
        transcript
            .iter()
            .all(|&(x, y, resp)| y < (1 << self.n) && self.eval_pow(x, y) == resp)
    }
}

impl QueryOracle for ModularOracle {
    fn n(&self) -> u32 {
        self.n
    }

    fn m(&self) -> u32 {
        self.m
    }

    fn query(&mut self, x: u128, y: u64) -> Result<u64> {
        check_args(self.n, self.m, x, y)?;
        let resp = self.eval_pow(x, y);
        self.meter.note(x, y, resp);
        Ok(resp)
    }

    fn queries_used(&self) -> u64 {
        self.meter.count
    }
}

/// Caps the number of queries a solver may spend on an inner oracle.
/// Past the limit, queries fail with [`Error::BudgetExhausted`].
pub struct Budgeted<'a, O: QueryOracle + ?Sized> {
    inner: &'a mut O,
    remaining: u64,
}

impl<'a, O: QueryOracle + ?Sized> Budgeted<'a, O> {
    pub fn new(inner: &'a mut O, limit: u64) -> Self {
        Budgeted { inner, remaining: limit }
    }
}

impl<O: QueryOracle + ?Sized> QueryOracle for Budgeted<'_, O> {
    fn n(&self) -> u32 {
        self.inner.n()
    }

    fn m(&self) -> u32 {
        self.inner.m()
    }

    fn query(&mut self, x: u128, y: u64) -> Result<u64> {
        if self.remaining == 0 {
            return Err(Error::BudgetExhausted);
        }
        self.remaining -= 1;
        self.inner.query(x, y)
    }

    fn queries_used(&self) -> u64 {
        self.inner.queries_used()
    }
}
