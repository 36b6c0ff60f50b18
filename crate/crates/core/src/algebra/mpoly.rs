//! Sparse multivariate polynomials with exact rational coefficients.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::rational::{format_rational, parse_rational, pow, Rational};
use crate::error::{Error, Result};

/// Exponent vector of a monomial, ordered graded-lexicographically
/// (total degree first, then lexicographic with `x1 > x2 > ... > xn`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn div(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

type Terms = BTreeMap<Monomial, Rational>;

fn add_term(terms: &mut Terms, m: Monomial, c: Rational) {
    if c.is_zero() {
        return;
    }
    match terms.entry(m) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

/// A polynomial in `x1..xn`. Never stores zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MPoly {
    nvars: usize,
    terms: Terms,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly { nvars, terms: Terms::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Self::monomial(nvars, Monomial::one(nvars), c)
    }

    /// The variable `x_{i+1}` (0-based index `i`).
    pub fn var(nvars: usize, i: usize) -> Self {
        Self::monomial(nvars, Monomial::var(nvars, i), Rational::one())
    }

    pub fn monomial(nvars: usize, m: Monomial, c: Rational) -> Self {
        assert_eq!(m.0.len(), nvars, "exponent vector length");
        let mut terms = Terms::new();
        add_term(&mut terms, m, c);
        MPoly { nvars, terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Vec<u32>, Rational)>>(nvars: usize, it: I) -> Self {
        let mut terms = Terms::new();
        for (e, c) in it {
            assert_eq!(e.len(), nvars, "exponent vector length");
            add_term(&mut terms, Monomial(e), c);
        }
        MPoly { nvars, terms }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(&Monomial::one(self.nvars))
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.leading_term().map(|(m, _)| m.degree())
    }

    fn check_nvars(&self, other: &MPoly) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::VarCountMismatch { left: self.nvars, right: other.nvars });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &MPoly) -> Result<MPoly> {
        self.check_nvars(other)?;
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            add_term(&mut terms, m.clone(), c.clone());
        }
        Ok(MPoly { nvars: self.nvars, terms })
    }

    pub fn try_sub(&self, other: &MPoly) -> Result<MPoly> {
        self.check_nvars(other)?;
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            add_term(&mut terms, m.clone(), -c.clone());
        }
        Ok(MPoly { nvars: self.nvars, terms })
    }

    pub fn try_mul(&self, other: &MPoly) -> Result<MPoly> {
        self.check_nvars(other)?;
        let mut acc: std::collections::HashMap<Monomial, Rational> = Default::default();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                *acc.entry(m1.mul(m2)).or_insert_with(Rational::zero) += c1 * c2;
            }
        }
        let terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Ok(MPoly { nvars: self.nvars, terms })
    }

    pub fn scale(&self, c: &Rational) -> MPoly {
        if c.is_zero() {
            return MPoly::zero(self.nvars);
        }
        let terms = self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect();
        MPoly { nvars: self.nvars, terms }
    }

    /// Multiplication by the monomial `x^e`.
    pub fn shift(&self, e: &Monomial) -> MPoly {
        let terms = self.terms.iter().map(|(m, v)| (m.mul(e), v.clone())).collect();
        MPoly { nvars: self.nvars, terms }
    }

    pub fn pow(&self, k: u32) -> MPoly {
        let mut acc = MPoly::one(self.nvars);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// `x_i ↦ c·x_i` (0-based `i`). With `c = q` this is the q-shift `τ_i`.
    pub fn scale_var(&self, i: usize, c: &Rational) -> MPoly {
        let terms = self
            .terms
            .iter()
            .map(|(m, v)| (m.clone(), v * pow(c, m.0[i] as i64)))
            .filter(|(_, v)| !v.is_zero())
            .collect();
        MPoly { nvars: self.nvars, terms }
    }

    /// Scales every variable by `c`.
    pub fn dilate(&self, c: &Rational) -> MPoly {
        let terms = self
            .terms
            .iter()
            .map(|(m, v)| (m.clone(), v * pow(c, m.degree() as i64)))
            .filter(|(_, v)| !v.is_zero())
            .collect();
        MPoly { nvars: self.nvars, terms }
    }

    /// Exchanges `x_i` and `x_j` (0-based).
    pub fn swap_vars(&self, i: usize, j: usize) -> MPoly {
        let terms = self
            .terms
            .iter()
            .map(|(m, v)| {
                let mut e = m.0.clone();
                e.swap(i, j);
                (Monomial(e), v.clone())
            })
            .collect();
        MPoly { nvars: self.nvars, terms }
    }

    /// Substitutes `x_j ↦ x_{perm[j]}`, i.e. the exponent of `x_j` moves to position `perm[j]`.
    pub fn rename_vars(&self, perm: &[usize]) -> MPoly {
        assert_eq!(perm.len(), self.nvars);
        let terms = self
            .terms
            .iter()
            .map(|(m, v)| {
                let mut e = vec![0; self.nvars];
                for (j, &p) in perm.iter().enumerate() {
                    e[p] += m.0[j];
                }
                (Monomial(e), v.clone())
            })
            .collect();
        MPoly { nvars: self.nvars, terms }
    }

    /// Embeds into a ring with more variables (new ones appended).
    pub fn extend_vars(&self, nvars: usize) -> MPoly {
        assert!(nvars >= self.nvars);
        let terms = self
            .terms
            .iter()
            .map(|(m, v)| {
                let mut e = m.0.clone();
                e.resize(nvars, 0);
                (Monomial(e), v.clone())
            })
            .collect();
        MPoly { nvars, terms }
    }

    pub fn homogeneous_part(&self, d: u32) -> MPoly {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.degree() == d)
            .map(|(m, v)| (m.clone(), v.clone()))
            .collect();
        MPoly { nvars: self.nvars, terms }
    }

    /// Drops all terms of total degree above `d`.
    pub fn truncate(&self, d: u32) -> MPoly {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.degree() <= d)
            .map(|(m, v)| (m.clone(), v.clone()))
            .collect();
        MPoly { nvars: self.nvars, terms }
    }

    pub fn eval(&self, x: &[Rational]) -> Rational {
        assert_eq!(x.len(), self.nvars);
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (xi, &e) in x.iter().zip(&m.0) {
                if e > 0 {
                    term *= pow(xi, e as i64);
                }
            }
            acc += term;
        }
        acc
    }

    /// Floating-point evaluation at `digits` working precision.
    pub fn eval_float(&self, x: &[crate::bigfloat::BigFloat], digits: usize) -> crate::bigfloat::BigFloat {
        use crate::bigfloat::BigFloat;
        assert_eq!(x.len(), self.nvars);
        let maxdeg = self.terms.keys().flat_map(|m| m.0.iter().copied()).max().unwrap_or(0) as usize;
        let powers: Vec<Vec<BigFloat>> = x
            .iter()
            .map(|xi| {
                let mut v = vec![BigFloat::one(digits)];
                for k in 0..maxdeg {
                    let next = &v[k] * xi;
                    v.push(next);
                }
                v
            })
            .collect();
        let mut acc = BigFloat::zero(digits);
        for (m, c) in &self.terms {
            let mut term = BigFloat::from_rational(c, digits);
            for (pw, &e) in powers.iter().zip(&m.0) {
                if e > 0 {
                    term = &term * &pw[e as usize];
                }
            }
            acc += &term;
        }
        acc
    }

    /// Exact division by `x_i`; fails unless every term contains `x_i`.
    pub fn div_var(&self, i: usize) -> Result<MPoly> {
        let mut terms = Terms::new();
        for (m, c) in &self.terms {
            if m.0[i] == 0 {
                return Err(Error::NotDivisible);
            }
            let mut e = m.0.clone();
            e[i] -= 1;
            terms.insert(Monomial(e), c.clone());
        }
        Ok(MPoly { nvars: self.nvars, terms })
    }

    /// Exact division by the linear form `x_i - c·x_j` (0-based, `i ≠ j`), by synthetic division
    /// in `x_i`.
    pub fn div_linear(&self, i: usize, j: usize, c: &Rational) -> Result<MPoly> {
        assert_ne!(i, j);
        if self.is_zero() {
            return Ok(self.clone());
        }
        // slices f = Σ_k x_i^k F_k with F_k free of x_i
        let mut slices: BTreeMap<u32, Terms> = BTreeMap::new();
        for (m, v) in &self.terms {
            let mut e = m.0.clone();
            let k = std::mem::replace(&mut e[i], 0);
            slices.entry(k).or_default().insert(Monomial(e), v.clone());
        }
        let top = *slices.keys().next_back().unwrap();
        let mut out = Terms::new();
        // carry = G_k, starting from G_top = 0
        let mut carry = Terms::new();
        for k in (0..=top).rev() {
            // G_{k-1} = F_k + c x_j G_k
            let mut next: Terms = slices.remove(&k).unwrap_or_default();
            for (m, v) in carry {
                let mut e = m.0;
                e[j] += 1;
                add_term(&mut next, Monomial(e), v * c);
            }
            if k == 0 {
                if !next.is_empty() {
                    return Err(Error::NotDivisible);
                }
                break;
            }
            for (m, v) in &next {
                let mut e = m.0.clone();
                e[i] = k - 1;
                out.insert(Monomial(e), v.clone());
            }
            carry = next;
        }
        Ok(MPoly { nvars: self.nvars, terms: out })
    }

    /// Exact multivariate division: returns `quot` with `den · quot == self`, or
    /// [`Error::NotDivisible`].
    pub fn exact_divide(&self, den: &MPoly) -> Result<MPoly> {
        self.check_nvars(den)?;
        let (lm, lc) = match den.leading_term() {
            Some((m, c)) => (m.clone(), c.clone()),
            None => return Err(Error::DivisionByZero),
        };
        let mut rem = self.clone();
        let mut quot = MPoly::zero(self.nvars);
        while let Some((m, c)) = rem.leading_term() {
            if !lm.divides(m) {
                return Err(Error::NotDivisible);
            }
            let qm = m.div(&lm);
            let qc = c / &lc;
            let step = den.shift(&qm).scale(&qc);
            add_term(&mut quot.terms, qm, qc);
            rem = &rem - &step;
        }
        Ok(quot)
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.nvars.saturating_sub(1)).all(|i| self.swap_vars(i, i + 1) == *self)
    }

    pub fn max_coeff_abs(&self) -> Rational {
        use num_traits::Signed;
        self.terms.values().map(|c| c.abs()).max().unwrap_or_else(Rational::zero)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(PolyJson::from(self)).expect("serializable")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<MPoly> {
        let pj: PolyJson = serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        MPoly::try_from(pj)
    }
}

/// Wire format: `{"nvars": n, "terms": [{"exp": [..], "coef": "p/q"}, ..]}` with terms in
/// descending graded-lex order.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct PolyJson {
    pub nvars: usize,
    pub terms: Vec<TermJson>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct TermJson {
    pub exp: Vec<u32>,
    pub coef: String,
}

impl From<&MPoly> for PolyJson {
    fn from(p: &MPoly) -> Self {
        PolyJson {
            nvars: p.nvars,
            terms: p
                .terms
                .iter()
                .rev()
                .map(|(m, c)| TermJson { exp: m.0.clone(), coef: format_rational(c) })
                .collect(),
        }
    }
}

impl TryFrom<PolyJson> for MPoly {
    type Error = Error;

    fn try_from(pj: PolyJson) -> Result<MPoly> {
        let mut terms = Vec::with_capacity(pj.terms.len());
        for t in pj.terms {
            if t.exp.len() != pj.nvars {
                return Err(Error::Parse("exponent vector length differs from nvars".into()));
            }
            terms.push((t.exp, parse_rational(&t.coef)?));
        }
        Ok(MPoly::from_terms(pj.nvars, terms))
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({})", format_rational(c))?;
            for (i, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "*x{}", i + 1)?,
                    _ => write!(f, "*x{}^{}", i + 1, e)?,
                }
            }
        }
        Ok(())
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $try:ident) => {
        impl $tr<&MPoly> for &MPoly {
            type Output = MPoly;
            fn $method(self, rhs: &MPoly) -> MPoly {
                self.$try(rhs).expect("variable count mismatch")
            }
        }
        impl $tr<MPoly> for MPoly {
            type Output = MPoly;
            fn $method(self, rhs: MPoly) -> MPoly {
                (&self).$try(&rhs).expect("variable count mismatch")
            }
        }
        impl $tr<&MPoly> for MPoly {
            type Output = MPoly;
            fn $method(self, rhs: &MPoly) -> MPoly {
                (&self).$try(rhs).expect("variable count mismatch")
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        self.scale(&-Rational::one())
    }
}

impl Neg for MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{int, rat};

    fn x(n: usize, i: usize) -> MPoly {
        MPoly::var(n, i)
    }

    #[test]
    fn arithmetic_examples() {
        let (x1, x2) = (x(2, 0), x(2, 1));
        let sum = &x1 + &x2;
        assert_eq!(sum.len(), 2);
        let diff_sq = &(&x1 - &x2) * &(&x1 + &x2);
        assert_eq!(diff_sq, &x1.pow(2) - &x2.pow(2));
        assert!((&diff_sq * &MPoly::zero(2)).is_zero());
        assert!(x1.try_add(&x(3, 0)).is_err());
    }

    #[test]
    fn division_examples() {
        let (x1, x2) = (x(2, 0), x(2, 1));
        let num = &x1.pow(2) - &x2.pow(2);
        assert_eq!(num.exact_divide(&(&x1 - &x2)).unwrap(), &x1 + &x2);
        assert_eq!((&x1 * &x2).exact_divide(&x1).unwrap(), x2.clone());
        assert_eq!((&x1 + &x2).exact_divide(&(&x1 - &x2)), Err(Error::NotDivisible));
        assert_eq!(x1.exact_divide(&MPoly::zero(2)), Err(Error::DivisionByZero));
    }

    #[test]
    fn linear_division_matches_general() {
        let n = 3;
        let f = &(&x(n, 0).pow(3) + &x(n, 1).scale(&rat(2, 3))) * &(&x(n, 2) + &MPoly::one(n));
        let c = rat(-5, 7);
        let lin = &x(n, 1) - &x(n, 2).scale(&c);
        let prod = &f * &lin;
        assert_eq!(prod.div_linear(1, 2, &c).unwrap(), f);
        assert_eq!(prod.exact_divide(&lin).unwrap(), f);
        assert_eq!(f.div_linear(0, 1, &int(1)), Err(Error::NotDivisible));
    }

    #[test]
    fn json_roundtrip_and_order() {
        let p = &x(2, 0).pow(2).scale(&rat(1, 2)) - &x(2, 1);
        let v = p.to_json();
        assert_eq!(v["terms"][0]["exp"], serde_json::json!([2, 0]));
        assert_eq!(v["terms"][0]["coef"], "1/2");
        assert_eq!(MPoly::from_json(&v).unwrap(), p);
    }

    #[test]
    fn shifts_and_swaps() {
        let p = &x(2, 0) * &x(2, 1).pow(2);
        assert_eq!(p.scale_var(1, &rat(1, 2)), p.scale(&rat(1, 4)));
        assert_eq!(p.swap_vars(0, 1), &x(2, 1) * &x(2, 0).pow(2));
        assert!((&p + &p.swap_vars(0, 1)).is_symmetric());
        assert!(!p.is_symmetric());
    }
}
