//! Exact rational arithmetic over `i128`.
//!
//! Density bounds and failure probabilities are reported as exact fractions
//! so that every printed figure is reproducible digit for digit. Magnitudes
//! here stay far below `i128` limits (numerators are at most a few times
//! `2^40`), so cross-multiplication never overflows.

use alloc::string::String;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Sub};

/// A reduced fraction with positive denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rational {
    num: i128,
    den: i128,
}

fn gcd_i128(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Rational {
    /// Panics if `den == 0`.
    pub fn new(num: i128, den: i128) -> Self {
        assert!(den != 0, "zero denominator");
        let sign = if den < 0 { -1 } else { 1 };
        let g = gcd_i128(num, den).max(1);
        Rational {
            num: sign * num / g,
            den: (den / g).abs(),
        }
    }

    pub fn from_int(v: i128) -> Self {
        Rational { num: v, den: 1 }
    }

    pub fn zero() -> Self {
        Rational { num: 0, den: 1 }
    }

    pub fn one() -> Self {
        Rational { num: 1, den: 1 }
    }

    pub fn numerator(&self) -> i128 {
        self.num
    }

    pub fn denominator(&self) -> i128 {
        self.den
    }

    pub fn is_negative(&self) -> bool {
        self.num < 0
    }

    /// Fixed-point decimal expansion, rounding half away from zero.
    pub fn to_decimal(&self, places: u32) -> String {
        let scale = 10i128.pow(places);
        let mag_num = self.num.unsigned_abs();
        let den = self.den.unsigned_abs();
        let scaled = (mag_num * scale.unsigned_abs() + den / 2) / den;
        let int_part = scaled / scale.unsigned_abs();
        let frac_part = scaled % scale.unsigned_abs();
        let sign = if self.num < 0 { "-" } else { "" };
        if places == 0 {
            alloc::format!("{sign}{int_part}")
        } else {
            alloc::format!("{sign}{int_part}.{frac_part:0width$}", width = places as usize)
        }
    }
}

impl Add for Rational {
    type Output = Rational;
    fn add(self, rhs: Rational) -> Rational {
        Rational::new(self.num * rhs.den + rhs.num * self.den, self.den * rhs.den)
    }
}

impl Sub for Rational {
    type Output = Rational;
    fn sub(self, rhs: Rational) -> Rational {
        Rational::new(self.num * rhs.den - rhs.num * self.den, self.den * rhs.den)
    }
}

impl Mul for Rational {
    type Output = Rational;
    fn mul(self, rhs: Rational) -> Rational {
        Rational::new(self.num * rhs.num, self.den * rhs.den)
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Rational) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Rational) -> Ordering {
        (self.num * other.den).cmp(&(other.num * self.den))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn reduction_and_ordering() {
        assert_eq!(Rational::new(2, 4), Rational::new(1, 2));
        assert_eq!(Rational::new(3, -6), Rational::new(-1, 2));
        assert!(Rational::new(1, 3) < Rational::new(1, 2));
        assert!(Rational::new(-1, 2) < Rational::zero());
    }

    #[test]
    fn arithmetic() {
        let a = Rational::new(5, 8);
        let b = Rational::new(5, 192);
        assert_eq!(a + b, Rational::new(125, 192));
        assert_eq!(Rational::one() - Rational::new(3, 2), Rational::new(-1, 2));
        assert_eq!(a * Rational::new(8, 5), Rational::one());
    }

    #[test]
    fn decimal_formatting() {
        assert_eq!(Rational::new(125, 192).to_decimal(6), "0.651042");
        assert_eq!(Rational::new(-1, 3).to_decimal(4), "-0.3333");
        assert_eq!(Rational::from_int(7).to_decimal(2), "7.00");
        assert_eq!(Rational::new(1, 2).to_decimal(0), "1");
        assert_eq!(Rational::new(721, 250).to_decimal(6), "2.884000");
    }

    #[test]
    fn display() {
        assert_eq!(Rational::new(125, 192).to_string(), "125/192");
        assert_eq!(Rational::from_int(4).to_string(), "4");
    }
}
