//! The chain: a weighted linked list of distinct domain values.
//!
//! A link of weight `w` from `a` to `b` records the fact `pi^w(a) = b`, and
//! transitivity extends that to every pair of chain nodes. Internally the
//! chain stores each node's *offset* — the prefix sum of weights from the
//! head — because every question asked of a chain reduces to offset
//! arithmetic:
//!
//! - `pi^x(y)` is determined by the chain iff a node sits at `offset(y) + x`;
//! - a cycle size `r` is consistent with the chain iff no two node offsets
//!   are congruent mod `r` (mapping nodes onto an `r`-cycle by `offset mod r`
//!   collides exactly when `r` divides some pairwise offset difference).
//!
//! Weights between consecutive nodes must stay below a configured bound
//! (`2^m` in the experiments); offset collisions are forbidden outright,
//! which also rules out zero-weight links between distinct values.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use crate::number_theory::PrimeWindow;
use crate::{Error, Result};

#[derive(Debug, Clone, Default)]
pub struct Chain {
    by_offset: BTreeMap<u128, u64>,
    by_value: BTreeMap<u64, u128>,
    weight_bound: Option<u128>,
    head_location: Option<u64>,
}

impl Chain {
    pub fn new() -> Self {
        Chain::default()
    }

    /// A chain whose consecutive weights must stay below `bound`.
    pub fn with_weight_bound(bound: u128) -> Self {
        Chain { weight_bound: Some(bound), ..Chain::default() }
    }

    pub fn len(&self) -> usize {
        self.by_offset.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_offset.is_empty()
    }

    pub fn contains_value(&self, y: u64) -> bool {
        self.by_value.contains_key(&y)
    }

    pub fn offset_of(&self, y: u64) -> Option<u128> {
        self.by_value.get(&y).copied()
    }

    pub fn value_at(&self, offset: u128) -> Option<u64> {
        self.by_offset.get(&offset).copied()
    }

    /// Nodes in offset order.
    pub fn nodes(&self) -> impl Iterator<Item = (u128, u64)> + '_ {
        self.by_offset.iter().map(|(&o, &v)| (o, v))
    }

    pub fn offsets(&self) -> impl Iterator<Item = u128> + '_ {
        self.by_offset.keys().copied()
    }

    /// Array index of the head, when the owner tracks one.
    pub fn head_location(&self) -> Option<u64> {
        self.head_location
    }

    pub fn set_head_location(&mut self, loc: u64) {
        self.head_location = Some(loc);
    }

    fn check_weight(&self, prev: Option<u128>, next: Option<u128>, offset: u128) -> Result<()> {
        if let Some(bound) = self.weight_bound {
            if let Some(p) = prev {
                if offset - p >= bound {
                    return Err(Error::InvalidArgument("link weight reaches the weight bound"));
                }
            }
            if let Some(nx) = next {
                if nx - offset >= bound {
                    return Err(Error::InvalidArgument("link weight reaches the weight bound"));
                }
            }
        }
        Ok(())
    }

    /// Insert a node at an absolute offset. This is the primitive behind
    /// the public operations; offset and value must both be new.
    pub fn insert_at_offset(&mut self, offset: u128, value: u64) -> Result<()> {
        if self.by_value.contains_key(&value) {
            return Err(Error::InvalidArgument("value already in chain"));
        }
        if self.by_offset.contains_key(&offset) {
            return Err(Error::InvalidArgument("offset already occupied"));
        }
        if self.is_empty() && offset != 0 {
            return Err(Error::InvalidArgument("the first node must sit at offset 0"));
        }
        let prev = self.by_offset.range(..offset).next_back().map(|(&o, _)| o);
        let next = self.by_offset.range(offset..).next().map(|(&o, _)| o);
        // splitting an existing link only shrinks weights, but an insert past
        // the tail or before the head creates a genuinely new link
        self.check_weight(prev, next, offset)?;
        self.by_offset.insert(offset, value);
        self.by_value.insert(value, offset);
        self.debug_check();
        Ok(())
    }

    /// The response to `pi^x(y)` if the chain already determines it.
    /// `y` must be a chain value.
    pub fn lookup(&self, y: u64, x: u128) -> Result<Option<u64>> {
        let o = self
            .offset_of(y)
            .ok_or(Error::InvalidArgument("lookup requires y to be a chain value"))?;
        Ok(self.value_at(o + x))
    }

    /// Record `pi^x(y) = fresh` by inserting `fresh` at `offset(y) + x`.
    /// Returns `fresh`.
    pub fn insert_at(&mut self, y: u64, x: u128, fresh: u64) -> Result<u64> {
        let o = self
            .offset_of(y)
            .ok_or(Error::InvalidArgument("insert_at requires y to be a chain value"))?;
        self.insert_at_offset(o + x, fresh)?;
        Ok(fresh)
    }

    /// Make `y` the new head: shift every offset up by `weight` and put `y`
    /// at offset 0. On an empty chain this just seeds the head.
    pub fn prepend(&mut self, y: u64, weight: u128) -> Result<()> {
        if self.by_value.contains_key(&y) {
            return Err(Error::InvalidArgument("value already in chain"));
        }
        if !self.is_empty() {
            if weight == 0 {
                return Err(Error::InvalidArgument("prepend weight must be positive"));
            }
            if let Some(bound) = self.weight_bound {
                if weight >= bound {
                    return Err(Error::InvalidArgument("link weight reaches the weight bound"));
                }
            }
        }
        let shifted: BTreeMap<u128, u64> =
            self.by_offset.iter().map(|(&o, &v)| (o + weight, v)).collect();
        self.by_offset = shifted;
        for o in self.by_value.values_mut() {
            *o += weight;
        }
        self.by_offset.insert(0, y);
        self.by_value.insert(y, 0);
        self.debug_check();
        Ok(())
    }

    /// The cycle sizes in `window` consistent with this chain: those `r`
    /// for which all node offsets are distinct mod `r`.
    pub fn consistent_orders(&self, window: &PrimeWindow) -> Vec<u64> {
        let offsets: Vec<u128> = self.offsets().collect();
        // chains built under n + m <= 120 usually fit u64 offsets; the
        // narrow path avoids u128 division in the hot loop
        if offsets.iter().all(|&o| o <= u64::MAX as u128) {
            let narrow: Vec<u64> = offsets.iter().map(|&o| o as u64).collect();
            let mut residues: Vec<u64> = Vec::with_capacity(narrow.len());
            window
                .primes()
                .iter()
                .copied()
                .filter(|&r| {
                    residues.clear();
                    residues.extend(narrow.iter().map(|&o| o % r));
                    residues.sort_unstable();
                    residues.windows(2).all(|w| w[0] != w[1])
                })
                .collect()
        } else {
            let mut residues: Vec<u128> = Vec::with_capacity(offsets.len());
            window
                .primes()
                .iter()
                .copied()
                .filter(|&r| {
                    residues.clear();
                    residues.extend(offsets.iter().map(|&o| o % r as u128));
                    residues.sort_unstable();
                    residues.windows(2).all(|w| w[0] != w[1])
                })
                .collect()
        }
    }

    /// Debug serialization: one node per line, `offset value`.
    pub fn dump(&self) -> String {
        use core::fmt::Write;
        let mut out = String::new();
        for (offset, value) in self.nodes() {
            let _ = writeln!(out, "{offset} {value}");
        }
        out
    }

    #[cfg(debug_assertions)]
    fn debug_check(&self) {
        assert_eq!(self.by_offset.len(), self.by_value.len());
        for (&o, &v) in &self.by_offset {
            assert_eq!(self.by_value.get(&v), Some(&o));
        }
        if !self.is_empty() {
            assert_eq!(self.by_offset.keys().next(), Some(&0));
        }
        if let Some(bound) = self.weight_bound {
            let offs: Vec<u128> = self.offsets().collect();
            for w in offs.windows(2) {
                assert!(w[1] - w[0] < bound, "weight {} breaks bound {}", w[1] - w[0], bound);
            }
        }
    }

    #[cfg(not(debug_assertions))]
    fn debug_check(&self) {}
}

/// Ceiling on how many window elements a length-`k` chain can rule out:
/// each of the `k(k−1)/2` offset differences is below `2^{n+m}`, so it has
/// at most `floor((m+n)/(n−1))` divisors among primes above `2^{n−1}`.
pub fn elimination_bound(k: u64, n: u32, m: u32) -> u128 {
    debug_assert!(n >= 2);
    let pairs = k as u128 * (k as u128).saturating_sub(1) / 2;
    let per_pair = ((m + n) / (n - 1)) as u128;
    pairs * per_pair
}

/// Brute-force consistency check used as an independent test oracle: place
/// every node on an `r`-cycle at position `offset mod r` and look for two
/// distinct values forced onto the same position.
pub fn consistent_orders_by_placement(chain: &Chain, window: &PrimeWindow) -> Vec<u64> {
    window
        .primes()
        .iter()
        .copied()
        .filter(|&r| {
            let mut positions: BTreeSet<u128> = BTreeSet::new();
            chain.nodes().all(|(offset, _)| positions.insert(offset % r as u128))
        })
        .collect()
}
