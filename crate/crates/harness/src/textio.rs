//! Text formats for reproducing cases outside a live process.
//!
//! Permutations travel as two lines — `n r seed`, then the array as
//! space-separated integers — so a failing trial can be rebuilt exactly.

use orderlab_core::oracle::TwoCyclePermutation;

use crate::CliError;

pub fn export_permutation(perm: &TwoCyclePermutation, seed: u64) -> String {
    let mut out = format!("{} {} {}\n", perm.n(), perm.r(), seed);
    let cells: Vec<String> = perm.array().iter().map(u64::to_string).collect();
    out.push_str(&cells.join(" "));
    out.push('\n');
    out
}

/// Returns the permutation and the recorded seed.
pub fn import_permutation(text: &str) -> Result<(TwoCyclePermutation, u64), CliError> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| CliError::Config("empty permutation file".into()))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 3 {
        return Err(CliError::Config("header must be `n r seed`".into()));
    }
    let n: u32 = fields[0]
        .parse()
        .map_err(|_| CliError::Config("bad n in header".into()))?;
    let r: u64 = fields[1]
        .parse()
        .map_err(|_| CliError::Config("bad r in header".into()))?;
    let seed: u64 = fields[2]
        .parse()
        .map_err(|_| CliError::Config("bad seed in header".into()))?;
    let body = lines
        .next()
        .ok_or_else(|| CliError::Config("missing array line".into()))?;
    let array: Vec<u64> = body
        .split_whitespace()
        .map(|cell| cell.parse().map_err(|_| CliError::Config("bad array entry".into())))
        .collect::<Result<_, _>>()?;
    let perm = TwoCyclePermutation::from_array(n, r, array)?;
    Ok((perm, seed))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let perm = TwoCyclePermutation::random(4, 13, 99).unwrap();
        let text = export_permutation(&perm, 99);
        let (back, seed) = import_permutation(&text).unwrap();
        assert_eq!(seed, 99);
        assert_eq!(back, perm);
    }

    #[test]
    fn exact_format() {
        let perm = TwoCyclePermutation::from_array(1, 2, vec![1, 0]).unwrap();
        assert_eq!(export_permutation(&perm, 7), "1 2 7\n1 0\n");
    }

    #[test]
    fn rejects_corrupt_input() {
        assert!(import_permutation("").is_err());
        assert!(import_permutation("4 13\n0 1 2").is_err());
        assert!(import_permutation("2 2 1\n0 1 2 2").is_err());
        assert!(import_permutation("2 2 1\n0 1 x 3").is_err());
    }
}
