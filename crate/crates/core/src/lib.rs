//! Core algorithms for the black-box order-finding testbed.
//!
//! The problem: an unknown permutation `pi` on `{0, …, 2^n − 1}` is reachable
//! only through queries `(x, y) ↦ pi^x(y)` with `x < 2^m`, and the task is to
//! find the order of a designated element `y0` — the least `r > 0` with
//! `pi^r(y0) = y0` — in as few queries as possible.
//!
//! This crate supplies every side of that game:
//!
//! - [`oracle`] — honest permutation oracles (two-cycle, modular, general)
//!   with query counting and transcripts;
//! - [`solvers`] — query algorithms: linear scan, divisor-splitting, and
//!   birthday-collision sampling;
//! - [`adversary`] — an evasive responder that answers queries while keeping
//!   as many candidate orders alive as possible, and can exhibit concrete
//!   witness permutations for its answers;
//! - [`sampler`] — a lazily materialized random two-cycle permutation whose
//!   entries are fixed on demand, with chain instrumentation and failure
//!   accounting;
//! - [`chain`] — the weighted-chain bookkeeping shared by the adversary and
//!   the sampler;
//! - [`number_theory`] — prime windows, divisor counting, and density checks.
//!
//! Everything is integer-only and deterministic: all randomness flows from a
//! caller-supplied 64-bit seed through [`rng::SplitMix64`].
//!
//! The crate is `no_std` (with `alloc`); IO, the CLI, and file formats live in
//! the companion `orderlab` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod adversary;
pub mod chain;
pub mod error;
pub mod number_theory;
pub mod oracle;
pub mod rational;
pub mod rng;
pub mod sampler;
pub mod solvers;

pub use error::{Error, Result};
