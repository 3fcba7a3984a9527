//! Summary statistics for trial batches.

use std::collections::BTreeMap;

/// Wilson score interval for a binomial proportion. Returns `(lo, hi)`.
/// `z = 1.96` gives the usual 95% interval.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Estimated total variation distance between two empirical distributions,
/// given per-outcome counts: half the L1 distance of the frequency vectors.
pub fn tv_distance<K: Ord + Clone>(a: &BTreeMap<K, u64>, b: &BTreeMap<K, u64>) -> f64 {
    let na: u64 = a.values().sum();
    let nb: u64 = b.values().sum();
    if na == 0 || nb == 0 {
        return 1.0;
    }
    let mut keys: Vec<K> = a.keys().cloned().collect();
    keys.extend(b.keys().cloned());
    keys.sort();
    keys.dedup();
    0.5 * keys
        .iter()
        .map(|k| {
            let pa = *a.get(k).unwrap_or(&0) as f64 / na as f64;
            let pb = *b.get(k).unwrap_or(&0) as f64 / nb as f64;
            (pa - pb).abs()
        })
        .sum::<f64>()
}

/// Map a response sequence onto its label-canonical pattern: each response
/// becomes "the i-th scripted input value" or "the j-th fresh value seen".
///
/// Both the lazy and the eager samplers are symmetric under relabeling of
/// values outside the scripted inputs, so their response distributions agree
/// exactly iff their canonical-pattern distributions do — and the pattern
/// space is small enough to estimate total variation from feasible sample
/// counts.
pub fn canonical_pattern(script: &[(u128, u64)], responses: &[u64]) -> Vec<u8> {
    let mut fresh_seen: Vec<u64> = Vec::new();
    responses
        .iter()
        .map(|&resp| {
            if let Some(i) = script.iter().position(|&(_, y)| y == resp) {
                i as u8
            } else if let Some(j) = fresh_seen.iter().position(|&v| v == resp) {
                64 + j as u8
            } else {
                fresh_seen.push(resp);
                64 + (fresh_seen.len() - 1) as u8
            }
        })
        .collect()
}
