use std::fmt::Write;

use orderlab_core::number_theory::{
    density_check_top, density_check_upper, top_slice_window, upper_half_window,
};
use orderlab_core::Error;

use crate::cli::{Args, WindowKind};
use crate::CliError;

/// Sieve one candidate-order window and print its density check: the prime
/// count, the asymptotic floor as an exact fraction, and whether the floor
/// already holds at this size.
pub fn run_primes(args: &Args) -> Result<String, CliError> {
    let n = args.require_n()?;
    let window = args.window.unwrap_or(WindowKind::R);
    let mut out = String::new();
    match window {
        WindowKind::R => {
            let w = upper_half_window(n)?;
            let check = density_check_upper(n)?;
            writeln!(out, "window=R n={n} lo={} hi={}", w.lo(), w.hi()).unwrap();
            writeln!(out, "count={}", check.count).unwrap();
            writeln!(out, "bound={} ({})", check.bound, check.bound.to_decimal(6)).unwrap();
            writeln!(out, "holds={}", check.holds).unwrap();
        }
        WindowKind::Rprime => {
            let check = density_check_top(n)?;
            match top_slice_window(n) {
                Ok(w) => {
                    writeln!(out, "window=Rprime n={n} lo={} hi={}", w.lo(), w.hi()).unwrap();
                }
                Err(Error::EmptyWindow) => {
                    writeln!(out, "window=Rprime n={n} (empty)").unwrap();
                }
                Err(e) => return Err(e.into()),
            }
            writeln!(out, "count={}", check.count).unwrap();
            writeln!(out, "bound={} ({})", check.bound, check.bound.to_decimal(6)).unwrap();
            writeln!(out, "holds={}", check.holds).unwrap();
        }
        WindowKind::All => {
            return Err(CliError::Config("primes expects --window R or Rprime".into()));
        }
    }
    Ok(out)
}
