use std::fmt;

use num_traits::{One, Signed, Zero};
use serde_json::json;

use super::rational::{format_rational, Rational};
use crate::error::{Error, Result};

/// A concrete rational assignment of `(q, t, a)` together with the number of variables.
///
/// All exact computation happens at such a point; identities in `(q, t, a)` are checked at
/// several independent points rather than symbolically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ParamPoint {
    pub q: Rational,
    pub t: Rational,
    pub a: Rational,
    pub nvars: usize,
}

impl ParamPoint {
    pub fn new(q: Rational, t: Rational, a: Rational, nvars: usize) -> Self {
        ParamPoint { q, t, a, nvars }
    }

    /// Same point with `(q, t)` replaced by `(1/q, 1/t)`.
    pub fn inverted(&self) -> Self {
        ParamPoint {
            q: self.q.recip(),
            t: self.t.recip(),
            a: self.a.clone(),
            nvars: self.nvars,
        }
    }

    pub fn with_nvars(&self, nvars: usize) -> Self {
        ParamPoint { nvars, ..self.clone() }
    }

    pub fn with_a(&self, a: Rational) -> Self {
        ParamPoint { a, ..self.clone() }
    }

    pub fn with_qt(&self, q: Rational, t: Rational) -> Self {
        ParamPoint { q, t, ..self.clone() }
    }

    /// Requirements of the exact-identity modules: `q ∉ {0, 1}`, `t ≠ 0`, `n ≥ 1`.
    pub fn check_exact(&self) -> Result<()> {
        if self.nvars == 0 {
            return Err(Error::InvalidParameter("nvars must be positive".into()));
        }
        if self.q.is_zero() || self.q.is_one() {
            return Err(Error::InvalidParameter("q must differ from 0 and 1".into()));
        }
        if self.t.is_zero() {
            return Err(Error::InvalidParameter("t must be nonzero".into()));
        }
        Ok(())
    }

    /// Requirements of the integral and kernel modules: `0 < q, t < 1` and `a < 0`.
    pub fn check_analytic(&self) -> Result<()> {
        self.check_exact()?;
        let in_unit = |x: &Rational| x.is_positive() && x < &Rational::one();
        if !in_unit(&self.q) || !in_unit(&self.t) {
            return Err(Error::InvalidParameter("0 < q, t < 1 required".into()));
        }
        if !self.a.is_negative() {
            return Err(Error::InvalidParameter("a < 0 required".into()));
        }
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "q": format_rational(&self.q),
            "t": format_rational(&self.t),
            "a": format_rational(&self.a),
            "n": self.nvars,
        })
    }
}

impl fmt::Display for ParamPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(q={}, t={}, a={}, n={})",
            format_rational(&self.q),
            format_rational(&self.t),
            format_rational(&self.a),
            self.nvars
        )
    }
}
