//! Helpers around `BigRational`, the exact scalar type used everywhere.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `r^e` for any integer `e`; `0^e` with `e < 0` panics.
pub fn pow(r: &Rational, e: i64) -> Rational {
    if e >= 0 {
        num_traits::pow(r.clone(), e as usize)
    } else {
        assert!(!r.is_zero(), "zero raised to a negative power");
        num_traits::pow(r.recip(), (-e) as usize)
    }
}

/// Parses `"p/q"`, `"-p/q"` or a plain integer.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Rational::new(n, d))
        }
        None => {
            let n: BigInt = s.parse().map_err(|_| bad())?;
            Ok(Rational::from_integer(n))
        }
    }
}

/// Canonical text form: `"p/q"` in lowest terms, or `"p"` for integers.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// `[m]_t = (1 - t^m)/(1 - t)`, evaluated as the finite geometric sum so that `t = 1` is fine.
pub fn qnumber(m: usize, t: &Rational) -> Rational {
    let mut acc = Rational::zero();
    let mut p = Rational::one();
    for _ in 0..m {
        acc += &p;
        p *= t;
    }
    acc
}

pub fn to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or_else(|| {
        // numerator/denominator beyond f64 range individually
        let shift = r.numer().bits().max(r.denom().bits()) as i64 - 1000;
        if shift <= 0 {
            return f64::NAN;
        }
        let n = r.numer() >> shift as usize;
        let d = r.denom() >> shift as usize;
        n.to_f64().unwrap_or(f64::NAN) / d.to_f64().unwrap_or(f64::NAN)
    })
}

pub fn abs(r: &Rational) -> Rational {
    r.abs()
}
