//! Prime windows, divisibility predicates, and density checks.
//!
//! Candidate orders are drawn from two half-open prime windows over the
//! domain `{0, …, 2^n − 1}`:
//!
//! - the *upper-half window*: primes in `(2^{n-1}, 2^n]`, which by the prime
//!   number theorem holds at least `0.721 · 2^n / n` primes for large `n`;
//! - the *top-slice window*: primes in `(2^n − 2^{2n/3}, 2^n]`, which holds
//!   at least `(1/14) · 2^{2n/3} / n` primes for large `n`.
//!
//! Both density floors are asymptotic; [`density_check_upper`] and
//! [`density_check_top`] report the sieved count against the bound instead
//! of asserting it, so the smallest `n` where each floor kicks in can be
//! read off a table.

use alloc::vec;
use alloc::vec::Vec;

use crate::rational::Rational;
use crate::{Error, Result};

/// Widest interval the segmented sieve will enumerate in one call.
const MAX_SIEVE_SPAN: u64 = 1 << 28;
/// Above this the base-prime sieve alone would need too much memory.
const MAX_SIEVE_HI: u64 = 1 << 40;
const SEGMENT_LEN: usize = 1 << 20;

/// The primes in a half-open interval `(lo, hi]`, sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeWindow {
    lo: u64,
    hi: u64,
    primes: Vec<u64>,
}

impl PrimeWindow {
    /// Assemble a window from parts without sieving. The caller is
    /// responsible for the contents actually being the primes in `(lo, hi]`;
    /// this exists for tests and for replaying imported experiment state.
    pub fn from_parts(lo: u64, hi: u64, primes: Vec<u64>) -> Self {
        PrimeWindow { lo, hi, primes }
    }

    /// Exclusive lower bound.
    pub fn lo(&self) -> u64 {
        self.lo
    }

    /// Inclusive upper bound.
    pub fn hi(&self) -> u64 {
        self.hi
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    pub fn contains(&self, r: u64) -> bool {
        self.primes.binary_search(&r).is_ok()
    }
}

/// Deterministic Miller-Rabin primality test, valid for all `u64`.
///
/// The witness set {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37} is known to
/// be exact below 3.3 * 10^24, which covers the full u64 range.
pub fn is_prime(x: u64) -> bool {
    if x < 2 {
        return false;
    }
    for &p in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if x == p {
            return true;
        }
        if x.is_multiple_of(p) {
            return false;
        }
    }
    let d = x - 1;
    let s = d.trailing_zeros();
    let d = d >> s;
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut v = pow_mod(a, d, x);
        if v == 1 || v == x - 1 {
            continue;
        }
        for _ in 1..s {
            v = mul_mod(v, v, x);
            if v == x - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[inline]
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Integer square root.
pub fn isqrt_u64(x: u64) -> u64 {
    if x < 2 {
        return x;
    }
    let mut guess = 1u64 << (x.ilog2() / 2 + 1);
    loop {
        let next = (guess + x / guess) / 2;
        if next >= guess {
            return guess;
        }
        guess = next;
    }
}

/// Simple sieve of Eratosthenes up to `limit` inclusive.
fn small_primes(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for p in 2..=n {
        if !composite[p] {
            out.push(p as u64);
            let mut q = p * p;
            while q <= n {
                composite[q] = true;
                q += p;
            }
        }
    }
    out
}

/// All primes in the half-open interval `(lo, hi]`, by segmented sieve.
pub fn primes_in(lo: u64, hi: u64) -> Result<PrimeWindow> {
    if lo >= hi || hi > 1 << 63 {
        return Err(Error::InvalidArgument("primes_in requires 0 <= lo < hi <= 2^63"));
    }
    if hi > MAX_SIEVE_HI {
        return Err(Error::Resource("interval endpoint exceeds sieve budget (2^40)"));
    }
    if hi - lo > MAX_SIEVE_SPAN {
        return Err(Error::Resource("interval span exceeds sieve budget (2^28)"));
    }
    let base = small_primes(isqrt_u64(hi));
    let mut primes = Vec::new();
    let mut seg_lo = lo + 1;
    let mut flags = vec![false; SEGMENT_LEN];
    while seg_lo <= hi {
        let seg_len = (hi - seg_lo + 1).min(SEGMENT_LEN as u64) as usize;
        for f in flags[..seg_len].iter_mut() {
            *f = false;
        }
        for &p in &base {
            if p * p > seg_lo + seg_len as u64 - 1 {
                break;
            }
            let mut start = seg_lo.div_ceil(p) * p;
            if start < p * p {
                start = p * p;
            }
            let mut q = start;
            while q < seg_lo + seg_len as u64 {
                flags[(q - seg_lo) as usize] = true;
                q += p;
            }
        }
        for (i, &f) in flags[..seg_len].iter().enumerate() {
            let candidate = seg_lo + i as u64;
            if !f && candidate >= 2 {
                primes.push(candidate);
            }
        }
        seg_lo += seg_len as u64;
    }
    Ok(PrimeWindow { lo, hi, primes })
}

/// Primes in `(2^{n-1}, 2^n]`, the wide window of candidate orders.
pub fn upper_half_window(n: u32) -> Result<PrimeWindow> {
    if !(2..=30).contains(&n) {
        return Err(Error::InvalidArgument("upper_half_window requires 2 <= n <= 30"));
    }
    primes_in(1 << (n - 1), 1 << n)
}

/// Primes in `(2^n − 2^{2n/3}, 2^n]`, the thin top slice used by the
/// randomized sampler. Requires `n` divisible by 3 so the slice width
/// `2^{2n/3}` is an integer.
pub fn top_slice_window(n: u32) -> Result<PrimeWindow> {
    if !(3..=30).contains(&n) || !n.is_multiple_of(3) {
        return Err(Error::InvalidArgument(
            "top_slice_window requires n divisible by 3, 3 <= n <= 30",
        ));
    }
    let hi = 1u64 << n;
    let lo = hi - (1 << (2 * n / 3));
    let w = primes_in(lo, hi)?;
    if w.is_empty() {
        return Err(Error::EmptyWindow);
    }
    Ok(w)
}

/// The elements of `w` that divide `x`.
pub fn divisors_in_window(x: u128, w: &PrimeWindow) -> Vec<u64> {
    if let Ok(narrow) = u64::try_from(x) {
        w.primes.iter().copied().filter(|&p| narrow % p == 0).collect()
    } else {
        w.primes.iter().copied().filter(|&p| x.is_multiple_of(p as u128)).collect()
    }
}

/// True iff `r` divides `x`; with `r` the order of `y`, this predicts
/// whether `pi^x(y) = y`.
pub fn order_divides(x: u128, r: u64) -> bool {
    debug_assert!(r >= 1);
    x.is_multiple_of(r as u128)
}

/// Result of comparing a sieved prime count against a density floor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensityCheck {
    pub count: u64,
    pub bound: Rational,
    pub holds: bool,
}

/// Sieve the upper-half window and compare against `0.721 · 2^n / n`.
/// The floor is asymptotic, so `holds` is reported rather than asserted.
pub fn density_check_upper(n: u32) -> Result<DensityCheck> {
    if !(2..=26).contains(&n) {
        return Err(Error::InvalidArgument("density_check_upper requires 2 <= n <= 26"));
    }
    let count = upper_half_window(n)?.len() as u64;
    let bound = Rational::new(721 * (1i128 << n), 1000 * n as i128);
    Ok(DensityCheck {
        count,
        bound,
        holds: Rational::from_int(count as i128) >= bound,
    })
}

/// Sieve the top-slice window and compare against `(1/14) · 2^{2n/3} / n`.
pub fn density_check_top(n: u32) -> Result<DensityCheck> {
    if n > 30 || !n.is_multiple_of(3) || n < 3 {
        return Err(Error::InvalidArgument(
            "density_check_top requires n divisible by 3, 3 <= n <= 30",
        ));
    }
    let count = match top_slice_window(n) {
        Ok(w) => w.len() as u64,
        Err(Error::EmptyWindow) => 0,
        Err(e) => return Err(e),
    };
    let bound = Rational::new(1i128 << (2 * n / 3), 14 * n as i128);
    Ok(DensityCheck {
        count,
        bound,
        holds: Rational::from_int(count as i128) >= bound,
    })
}
