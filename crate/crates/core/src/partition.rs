//! Integer partitions and the `(q,t)` hook statistics built on them.

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::rational::{pow, Rational};
use crate::algebra::ParamPoint;
use crate::error::{Error, Result};

/// Weakly decreasing sequence of positive parts. Trailing zeros are stripped on construction.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    /// Builds a partition from parts in any order; zero parts are dropped.
    pub fn new(mut parts: Vec<u32>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    /// Like [`Partition::new`] but rejects input that is not already weakly decreasing.
    pub fn try_from_parts(parts: Vec<u32>) -> Result<Self> {
        let trimmed: Vec<u32> = {
            let mut v = parts.clone();
            while v.last() == Some(&0) {
                v.pop();
            }
            v
        };
        if trimmed.windows(2).any(|w| w[0] < w[1]) || trimmed.contains(&0) {
            return Err(Error::Parse(format!("{parts:?} is not a partition")));
        }
        Ok(Partition(trimmed))
    }

    /// `1^r`.
    pub fn column(r: usize) -> Self {
        Partition(vec![1; r])
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    /// `λ_i` with 1-based `i`; zero past the length.
    pub fn part(&self, i: usize) -> u32 {
        if i == 0 {
            return 0;
        }
        self.0.get(i - 1).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Parts padded with zeros to length `n`.
    pub fn padded(&self, n: usize) -> Vec<u32> {
        let mut v = self.0.clone();
        v.resize(n.max(v.len()), 0);
        v
    }

    pub fn check_len(&self, n: usize) -> Result<()> {
        if self.len() > n {
            return Err(Error::PartitionTooLong { partition: self.clone(), nvars: n });
        }
        Ok(())
    }

    pub fn conjugate(&self) -> Partition {
        let w = self.0.first().copied().unwrap_or(0);
        Partition((1..=w).map(|j| self.0.iter().filter(|&&p| p >= j).count() as u32).collect())
    }

    /// `b(λ) = Σ (i-1) λ_i`.
    pub fn b_stat(&self) -> u64 {
        self.0.iter().enumerate().map(|(i, &p)| i as u64 * p as u64).sum()
    }

    /// Cells `(i, j)` of the diagram, 1-based.
    pub fn cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(i, &p)| (1..=p as usize).map(move |j| (i + 1, j)))
    }

    /// Arm length of cell `(i, j)`.
    pub fn arm(&self, i: usize, j: usize) -> i64 {
        self.part(i) as i64 - j as i64
    }

    /// Leg length of cell `(i, j)`, given the conjugate partition.
    pub fn leg_with(conj: &Partition, i: usize, j: usize) -> i64 {
        conj.part(j) as i64 - i as i64
    }

    /// True when `self ⊇ other` as diagrams.
    pub fn contains(&self, other: &Partition) -> bool {
        other.len() <= self.len() && other.0.iter().zip(&self.0).all(|(a, b)| a <= b)
    }

    /// Dominance order: `self ≥ other` (same size assumed by callers).
    pub fn dominates(&self, other: &Partition) -> bool {
        if self.size() != other.size() {
            return false;
        }
        let n = self.len().max(other.len());
        let (mut s, mut o) = (0u32, 0u32);
        for i in 1..=n {
            s += self.part(i);
            o += other.part(i);
            if s < o {
                return false;
            }
        }
        true
    }

    /// `λ^(p)`: a node added to row `p` (1-based), if the result is a partition.
    pub fn add_node(&self, p: usize) -> Option<Partition> {
        if p == 0 || p > self.len() + 1 {
            return None;
        }
        if p > 1 && self.part(p - 1) == self.part(p) {
            return None;
        }
        let mut v = self.padded(p);
        v[p - 1] += 1;
        Some(Partition(v))
    }

    /// `λ_(p)`: a node removed from row `p` (1-based), if the result is a partition.
    pub fn remove_node(&self, p: usize) -> Option<Partition> {
        if p == 0 || p > self.len() || self.part(p) == self.part(p + 1) {
            return None;
        }
        let mut v = self.0.clone();
        v[p - 1] -= 1;
        Some(Partition::new(v))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!(self.0)
    }
}

impl TryFrom<Vec<u32>> for Partition {
    type Error = Error;
    fn try_from(v: Vec<u32>) -> Result<Self> {
        Partition::try_from_parts(v)
    }
}

impl From<Partition> for Vec<u32> {
    fn from(p: Partition) -> Self {
        p.0
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// Parses `"2,1"`, `"(2,1)"`, `"[2,1]"`; `"0"` and `""` give the empty partition.
impl std::str::FromStr for Partition {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim().trim_matches(|c| matches!(c, '(' | ')' | '[' | ']'));
        if inner.trim().is_empty() {
            return Ok(Partition::empty());
        }
        let parts = inner
            .split(',')
            .map(|x| x.trim().parse::<u32>().map_err(|_| Error::Parse(format!("bad partition {s:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Partition::try_from_parts(parts)
    }
}

/// All partitions of `m` with at most `maxlen` parts, in decreasing lexicographic order
/// (a linear extension of dominance).
pub fn partitions_of(m: u32, maxlen: usize) -> Vec<Partition> {
    fn rec(rem: u32, maxpart: u32, slots: usize, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if rem == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        if slots == 0 {
            return;
        }
        for p in (1..=maxpart.min(rem)).rev() {
            cur.push(p);
            rec(rem - p, p, slots - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(m, m, maxlen, &mut Vec::new(), &mut out);
    out
}

/// All partitions with `|λ| ≤ m` and at most `maxlen` parts, ordered by size then as in
/// [`partitions_of`].
pub fn partitions_up_to(m: u32, maxlen: usize) -> Vec<Partition> {
    (0..=m).flat_map(|d| partitions_of(d, maxlen)).collect()
}

fn qt_mono(q: &Rational, qe: i64, t: &Rational, te: i64) -> Rational {
    pow(q, qe) * pow(t, te)
}

/// `(h_λ(q,t), h'_λ(q,t))`.
pub fn hook_products(lambda: &Partition, pt: &ParamPoint) -> (Rational, Rational) {
    let conj = lambda.conjugate();
    let mut h = Rational::one();
    let mut hp = Rational::one();
    for (i, j) in lambda.cells() {
        let a = lambda.arm(i, j);
        let l = Partition::leg_with(&conj, i, j);
        h *= Rational::one() - qt_mono(&pt.q, a, &pt.t, l + 1);
        hp *= Rational::one() - qt_mono(&pt.q, a + 1, &pt.t, l);
    }
    (h, hp)
}

pub fn hook_prime(lambda: &Partition, pt: &ParamPoint) -> Rational {
    hook_products(lambda, pt).1
}

/// `P_λ(1, t, …, t^{n-1}; q, t)` from the product formula.
pub fn principal_specialization(lambda: &Partition, pt: &ParamPoint) -> Result<Rational> {
    let n = pt.nvars;
    lambda.check_len(n)?;
    let (h, _) = hook_products(lambda, pt);
    let mut num = Rational::one();
    for (i, j) in lambda.cells() {
        num *= Rational::one() - qt_mono(&pt.q, j as i64 - 1, &pt.t, n as i64 - i as i64 + 1);
    }
    Ok(pow(&pt.t, lambda.b_stat() as i64) * num / h)
}

/// Rows (1-based) where a node can be added (keeping length ≤ `n`) or removed.
pub fn nodes(lambda: &Partition, n: usize) -> (Vec<usize>, Vec<usize>) {
    let addable = (1..=n.min(lambda.len() + 1))
        .filter(|&p| lambda.add_node(p).is_some())
        .collect();
    let removable = (1..=lambda.len()).filter(|&p| lambda.remove_node(p).is_some()).collect();
    (addable, removable)
}

/// The binomial `(λ choose λ_(p))_{q,t}` for a removable row `p`.
pub fn binom_remove(lambda: &Partition, p: usize, pt: &ParamPoint) -> Result<Rational> {
    if lambda.remove_node(p).is_none() {
        return Err(Error::NotRemovable { partition: lambda.clone(), row: p });
    }
    let (q, t) = (&pt.q, &pt.t);
    let l = lambda.len() as i64;
    let lp = lambda.part(p) as i64;
    let pi = p as i64;
    let one = Rational::one();
    let mut r = pow(t, 1 - pi) * (&one - qt_mono(q, lp, t, l - pi)) / (&one - q);
    for i in 1..p {
        let d = lambda.part(i) as i64 - lp;
        let ii = i as i64;
        r *= (&one - qt_mono(q, d, t, pi + 1 - ii)) / (&one - qt_mono(q, d, t, pi - ii));
    }
    for i in p + 1..=lambda.len() {
        let d = lp - lambda.part(i) as i64;
        let ii = i as i64;
        r *= (&one - qt_mono(q, d, t, ii - pi - 1)) / (&one - qt_mono(q, d, t, ii - pi));
    }
    Ok(r)
}

fn is_vertical_strip(lambda: &Partition, mu: &Partition) -> bool {
    lambda.contains(mu) && (1..=lambda.len()).all(|i| lambda.part(i) - mu.part(i) <= 1)
}

/// Pieri coefficient `ψ'_{λ/μ}` as the product over cells in columns, but not rows, meeting `λ/μ`.
pub fn psi_prime(lambda: &Partition, mu: &Partition, pt: &ParamPoint) -> Result<Rational> {
    if !is_vertical_strip(lambda, mu) {
        return Err(Error::NotVerticalStrip { outer: lambda.clone(), inner: mu.clone() });
    }
    let (lc, mc) = (lambda.conjugate(), mu.conjugate());
    let rows: Vec<usize> = (1..=lambda.len()).filter(|&i| lambda.part(i) != mu.part(i)).collect();
    let cols: Vec<usize> = (1..=lc.len()).filter(|&j| lc.part(j) != mc.part(j)).collect();
    let (q, t) = (&pt.q, &pt.t);
    let one = Rational::one();
    let mut r = Rational::one();
    for (i, j) in lambda.cells() {
        if !cols.contains(&j) || rows.contains(&i) {
            continue;
        }
        // every such cell lies in μ as well
        let (la, ll) = (lambda.arm(i, j), Partition::leg_with(&lc, i, j));
        let (ma, ml) = (mu.arm(i, j), Partition::leg_with(&mc, i, j));
        r *= (&one - qt_mono(q, la, t, ll + 1)) / (&one - qt_mono(q, la + 1, t, ll));
        r *= (&one - qt_mono(q, ma + 1, t, ml)) / (&one - qt_mono(q, ma, t, ml + 1));
    }
    Ok(r)
}

/// All `μ ⊆ λ` with `λ/μ` a vertical strip of exactly `r` cells.
pub fn vertical_strips(lambda: &Partition, r: usize) -> Vec<Partition> {
    let rows = lambda.len();
    let mut out = Vec::new();
    if r > rows {
        return out;
    }
    for mask in 0u32..(1 << rows) {
        if mask.count_ones() as usize != r {
            continue;
        }
        let v: Vec<u32> = (0..rows)
            .map(|i| lambda.0[i] - ((mask >> i) & 1))
            .collect();
        if v.windows(2).all(|w| w[0] >= w[1]) {
            out.push(Partition::new(v));
        }
    }
    out.sort_by(|a, b| b.cmp(a));
    out
}

/// `[m]_t! = ∏_{i=1}^m [i]_t`.
pub fn qfactorial(m: usize, t: &Rational) -> Rational {
    let mut acc = Rational::one();
    for i in 1..=m {
        acc *= crate::algebra::rational::qnumber(i, t);
    }
    acc
}

/// `e(κ) = Σ_i q^{κ_i} t^{n-i}`.
pub fn eigenvalue_e(kappa: &Partition, q: &Rational, t: &Rational, n: usize) -> Rational {
    let mut acc = Rational::zero();
    for i in 1..=n {
        acc += qt_mono(q, kappa.part(i) as i64, t, (n - i) as i64);
    }
    acc
}

/// `ẽ(κ) = Σ_i q^{-κ_i} t^{-n+i}`.
pub fn eigenvalue_e_tilde(kappa: &Partition, q: &Rational, t: &Rational, n: usize) -> Rational {
    eigenvalue_e(kappa, &q.recip(), &t.recip(), n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{int, rat};

    fn p(v: &[u32]) -> Partition {
        Partition::new(v.to_vec())
    }

    fn pt() -> ParamPoint {
        ParamPoint::new(rat(1, 3), rat(2, 7), rat(-1, 2), 3)
    }

    #[test]
    fn conjugates() {
        assert_eq!(p(&[2, 1]).conjugate(), p(&[2, 1]));
        assert_eq!(p(&[3]).conjugate(), p(&[1, 1, 1]));
        assert_eq!(Partition::empty().conjugate(), Partition::empty());
    }

    #[test]
    fn b_values() {
        assert_eq!(p(&[2, 1]).b_stat(), 1);
        assert_eq!(p(&[1, 1, 1]).b_stat(), 3);
        assert_eq!(Partition::empty().b_stat(), 0);
    }

    #[test]
    fn hooks() {
        let pt = pt();
        let one = Rational::one();
        assert_eq!(hook_products(&p(&[1]), &pt).1, &one - &pt.q);
        assert_eq!(
            hook_products(&p(&[2]), &pt).1,
            (&one - pow(&pt.q, 2)) * (&one - &pt.q)
        );
        assert_eq!(hook_products(&Partition::empty(), &pt), (one.clone(), one));
    }

    #[test]
    fn principal_specialization_examples() {
        let pt = pt().with_nvars(2);
        assert_eq!(principal_specialization(&p(&[1]), &pt).unwrap(), int(1) + &pt.t);
        assert_eq!(principal_specialization(&p(&[1, 1]), &pt).unwrap(), pt.t.clone());
        assert_eq!(principal_specialization(&Partition::empty(), &pt).unwrap(), int(1));
        assert!(principal_specialization(&p(&[1, 1, 1]), &pt).is_err());
    }

    #[test]
    fn node_sets() {
        assert_eq!(nodes(&p(&[2, 1]), 3), (vec![1, 2, 3], vec![1, 2]));
        assert_eq!(nodes(&Partition::empty(), 2), (vec![1], vec![]));
        assert_eq!(nodes(&p(&[1, 1]), 2), (vec![1], vec![2]));
    }

    #[test]
    fn binomials() {
        let pt = pt();
        let one = Rational::one();
        assert_eq!(binom_remove(&p(&[1]), 1, &pt).unwrap(), one.clone());
        assert_eq!(binom_remove(&p(&[2]), 1, &pt).unwrap(), &one + &pt.q);
        // t^{-1}(1+t)
        assert_eq!(
            binom_remove(&p(&[1, 1]), 2, &pt).unwrap(),
            (&one + &pt.t) / &pt.t
        );
        assert!(binom_remove(&p(&[1, 1]), 1, &pt).is_err());
    }

    #[test]
    fn psi_prime_examples() {
        let pt = pt();
        let one = Rational::one();
        assert_eq!(psi_prime(&p(&[1]), &Partition::empty(), &pt).unwrap(), one.clone());
        let expect = (&one - &pt.q) * (&one + &pt.t) / (&one - &pt.q * &pt.t);
        assert_eq!(psi_prime(&p(&[1, 1]), &p(&[1]), &pt).unwrap(), expect);
        assert!(psi_prime(&p(&[2]), &Partition::empty(), &pt).is_err());
    }

    #[test]
    fn strips() {
        assert_eq!(vertical_strips(&p(&[1, 1]), 2), vec![Partition::empty()]);
        assert_eq!(vertical_strips(&p(&[2, 1]), 1), vec![p(&[2]), p(&[1, 1])]);
        assert!(vertical_strips(&p(&[2]), 2).is_empty());
    }

    #[test]
    fn enumeration_and_dominance() {
        let ps = partitions_of(4, 4);
        assert_eq!(ps.len(), 5);
        assert_eq!(ps[0], p(&[4]));
        assert_eq!(partitions_of(4, 2).len(), 3);
        assert!(p(&[3, 1]).dominates(&p(&[2, 2])));
        assert!(!p(&[3, 3]).dominates(&p(&[4, 1, 1])));
        assert!(!p(&[4, 1, 1]).dominates(&p(&[3, 3])));
        assert_eq!(partitions_up_to(2, 2).len(), 4);
    }

    #[test]
    fn parse_and_json() {
        assert_eq!("2,1".parse::<Partition>().unwrap(), p(&[2, 1]));
        assert_eq!("0".parse::<Partition>().unwrap(), Partition::empty());
        assert!("1,2".parse::<Partition>().is_err());
        let v = serde_json::to_value(p(&[3, 1])).unwrap();
        assert_eq!(v, serde_json::json!([3, 1]));
        let back: Partition = serde_json::from_value(v).unwrap();
        assert_eq!(back, p(&[3, 1]));
    }
}
