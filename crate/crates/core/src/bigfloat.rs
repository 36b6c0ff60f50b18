//! Fixed-precision decimal floats for the lattice-sum engine.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub};

use dashu_float::DBig;
use dashu_int::IBig;
use num_bigint::BigInt;

use crate::algebra::Rational;

/// Default working precision in significant decimal digits.
pub const DEFAULT_DIGITS: usize = 60;

/// Extra digits carried internally on top of the requested precision.
pub const GUARD_DIGITS: usize = 12;

/// A decimal float carrying its own precision. Binary operations use the larger precision of
/// the two operands.
#[derive(Clone, Debug, PartialEq)]
pub struct BigFloat(DBig);

fn to_ibig(n: &BigInt) -> IBig {
    IBig::from_le_bytes(&n.to_signed_bytes_le())
}

impl BigFloat {
    pub fn from_rational(r: &Rational, digits: usize) -> Self {
        let p = digits + GUARD_DIGITS;
        let num = DBig::from(to_ibig(r.numer())).with_precision(p).value();
        let den = DBig::from(to_ibig(r.denom())).with_precision(p).value();
        BigFloat(num / den)
    }

    pub fn from_i64(v: i64, digits: usize) -> Self {
        BigFloat(DBig::from(v).with_precision(digits + GUARD_DIGITS).value())
    }

    pub fn zero(digits: usize) -> Self {
        Self::from_i64(0, digits)
    }

    pub fn one(digits: usize) -> Self {
        Self::from_i64(1, digits)
    }

    /// Parses a decimal literal such as `"0.999"` or `"1e-3"`.
    pub fn parse(s: &str, digits: usize) -> Option<Self> {
        let v: DBig = s.parse().ok()?;
        Some(BigFloat(v.with_precision(digits + GUARD_DIGITS).value()))
    }

    pub fn digits(&self) -> usize {
        self.0.precision().saturating_sub(GUARD_DIGITS)
    }

    pub fn is_zero(&self) -> bool {
        self.0.repr().significand().is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0 < DBig::ZERO
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn powi(&self, e: i64) -> Self {
        if e < 0 {
            return Self::one(self.digits()) / self.powi(-e);
        }
        if e == 0 {
            return Self::one(self.digits());
        }
        BigFloat(self.0.powi(IBig::from(e)))
    }

    pub fn sqrt(&self) -> Self {
        BigFloat(self.0.sqrt())
    }

    pub fn exp(&self) -> Self {
        BigFloat(self.0.exp())
    }

    pub fn ln(&self) -> Self {
        BigFloat(self.0.ln())
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().value()
    }

    pub fn max(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }

    /// `|a - b| / max(|a|, |b|, floor)`.
    pub fn rel_err(a: &Self, b: &Self, floor: &Self) -> Self {
        let scale = a.abs().max(b.abs()).max(floor.clone());
        (a - b).abs() / scale
    }

    /// Scientific notation with `sig` significant digits.
    pub fn to_sci(&self, sig: usize) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let v = self.0.clone().with_precision(sig.max(1)).value();
        let repr = v.repr();
        let digits = repr.significand().to_string();
        let (sign, digits) = match digits.strip_prefix('-') {
            Some(d) => ("-", d.to_string()),
            None => ("", digits),
        };
        let exp = repr.exponent() + digits.len() as isize - 1;
        let mant = if digits.len() > 1 {
            format!("{}.{}", &digits[..1], digits[1..].trim_end_matches('0'))
        } else {
            digits.clone()
        };
        let mant = mant.trim_end_matches('.').to_string();
        format!("{sign}{mant}e{exp}")
    }
}

impl fmt::Display for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_sci(self.digits().max(1)))
    }
}

impl PartialOrd for BigFloat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.0.partial_cmp(&other.0)
    }
}

macro_rules! float_binop {
    ($tr:ident, $m:ident, $op:tt) => {
        impl $tr<&BigFloat> for &BigFloat {
            type Output = BigFloat;
            fn $m(self, rhs: &BigFloat) -> BigFloat {
                BigFloat(&self.0 $op &rhs.0)
            }
        }
        impl $tr<BigFloat> for BigFloat {
            type Output = BigFloat;
            fn $m(self, rhs: BigFloat) -> BigFloat {
                BigFloat(self.0 $op rhs.0)
            }
        }
        impl $tr<&BigFloat> for BigFloat {
            type Output = BigFloat;
            fn $m(self, rhs: &BigFloat) -> BigFloat {
                BigFloat(self.0 $op &rhs.0)
            }
        }
    };
}

float_binop!(Add, add, +);
float_binop!(Sub, sub, -);
float_binop!(Mul, mul, *);
float_binop!(Div, div, /);

impl AddAssign<&BigFloat> for BigFloat {
    fn add_assign(&mut self, rhs: &BigFloat) {
        self.0 = &self.0 + &rhs.0;
    }
}

impl MulAssign<&BigFloat> for BigFloat {
    fn mul_assign(&mut self, rhs: &BigFloat) {
        self.0 = &self.0 * &rhs.0;
    }
}

impl Neg for &BigFloat {
    type Output = BigFloat;
    fn neg(self) -> BigFloat {
        BigFloat(-self.0.clone())
    }
}

impl Neg for BigFloat {
    type Output = BigFloat;
    fn neg(self) -> BigFloat {
        BigFloat(-self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rat;

    #[test]
    fn rational_conversion() {
        let x = BigFloat::from_rational(&rat(1, 3), 40);
        let three = BigFloat::from_i64(3, 40);
        let one = BigFloat::one(40);
        let err = (&(&x * &three) - &one).abs();
        assert!(err < BigFloat::parse("1e-45", 40).unwrap());
        assert!((x.to_f64() - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn big_integers_roundtrip() {
        let big = Rational::from_integer(BigInt::from(10).pow(50) + 7);
        let f = BigFloat::from_rational(&big, 60);
        assert!((f.to_f64() - 1e50).abs() / 1e50 < 1e-14);
        let neg = BigFloat::from_rational(&rat(-7, 2), 20);
        assert!(neg.is_negative());
        assert_eq!(neg.abs().to_f64(), 3.5);
    }

    #[test]
    fn elementary_functions() {
        let two = BigFloat::from_i64(2, 30);
        assert!((two.sqrt().to_f64() - 2f64.sqrt()).abs() < 1e-15);
        assert!((two.powi(-2).to_f64() - 0.25).abs() < 1e-18);
        assert!((BigFloat::one(30).exp().to_f64() - std::f64::consts::E).abs() < 1e-15);
        assert_eq!(BigFloat::from_rational(&rat(-1, 4), 10).to_sci(3), "-2.5e-1");
    }
}
