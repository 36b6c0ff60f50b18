//! Monomial and elementary symmetric polynomials and conversion to the monomial basis.

use std::collections::BTreeMap;

use num_traits::One;

use super::mpoly::{MPoly, Monomial};
use super::rational::Rational;
use crate::error::{Error, Result};
use crate::partition::Partition;

/// Distinct permutations of `v`, via next-permutation on the sorted vector.
pub(crate) fn distinct_permutations(v: &[u32]) -> Vec<Vec<u32>> {
    let mut cur = v.to_vec();
    cur.sort_unstable();
    let mut out = vec![cur.clone()];
    loop {
        let n = cur.len();
        if n < 2 {
            break;
        }
        let mut i = n - 1;
        while i > 0 && cur[i - 1] >= cur[i] {
            i -= 1;
        }
        if i == 0 {
            break;
        }
        let mut j = n - 1;
        while cur[j] <= cur[i - 1] {
            j -= 1;
        }
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(cur.clone());
    }
    out
}

/// `m_λ(x_1..x_n)`.
pub fn monomial_symmetric(lambda: &Partition, n: usize) -> Result<MPoly> {
    lambda.check_len(n)?;
    let exps = distinct_permutations(&lambda.padded(n));
    Ok(MPoly::from_terms(n, exps.into_iter().map(|e| (e, Rational::one()))))
}

/// `e_r(x_1..x_n)`.
pub fn elementary(r: usize, n: usize) -> Result<MPoly> {
    if r > n {
        return Err(Error::OutOfRange(format!("e_{r} in {n} variables")));
    }
    monomial_symmetric(&Partition::column(r), n)
}

/// Coefficients `c_λ` with `p = Σ c_λ m_λ`; fails when `p` is not symmetric.
pub fn to_monomial_basis(p: &MPoly) -> Result<BTreeMap<Partition, Rational>> {
    let n = p.nvars();
    let mut out = BTreeMap::new();
    for (m, c) in p.terms() {
        if m.0.windows(2).all(|w| w[0] >= w[1]) {
            out.insert(Partition::new(m.0.clone()), c.clone());
        }
    }
    // every term must be a permutation of a dominant one with the same coefficient
    let mut count = 0usize;
    for (lambda, c) in &out {
        for e in distinct_permutations(&lambda.padded(n)) {
            if p.coeff(&Monomial(e)) != *c {
                return Err(Error::NotSymmetric);
            }
            count += 1;
        }
    }
    if count != p.len() {
        return Err(Error::NotSymmetric);
    }
    Ok(out)
}

/// `Σ c_λ m_λ`.
pub fn from_monomial_basis<'a, I>(coeffs: I, n: usize) -> Result<MPoly>
where
    I: IntoIterator<Item = (&'a Partition, &'a Rational)>,
{
    let mut terms = Vec::new();
    for (lambda, c) in coeffs {
        lambda.check_len(n)?;
        for e in distinct_permutations(&lambda.padded(n)) {
            terms.push((e, c.clone()));
        }
    }
    Ok(MPoly::from_terms(n, terms))
}

/// Vandermonde product `∏_{i<j} (x_i - x_j)`.
pub fn vandermonde(n: usize) -> MPoly {
    let mut v = MPoly::one(n);
    for i in 0..n {
        for j in i + 1..n {
            v = &v * &(&MPoly::var(n, i) - &MPoly::var(n, j));
        }
    }
    v
}

/// Divides by `∏_{i<j}(x_i - x_j)` one linear factor at a time.
pub fn divide_by_vandermonde(p: &MPoly) -> Result<MPoly> {
    let n = p.nvars();
    let one = Rational::one();
    let mut cur = p.clone();
    for i in 0..n {
        for j in i + 1..n {
            cur = cur.div_linear(i, j, &one)?;
        }
    }
    Ok(cur)
}

/// Determinant of a square matrix of polynomials by cofactor expansion along the first row.
pub fn determinant(m: &[Vec<MPoly>]) -> MPoly {
    let n = m.len();
    assert!(m.iter().all(|r| r.len() == n), "square matrix");
    match n {
        0 => panic!("empty matrix"),
        1 => m[0][0].clone(),
        _ => {
            let mut acc = MPoly::zero(m[0][0].nvars());
            for j in 0..n {
                if m[0][j].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<MPoly>> = m[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, p)| p.clone()).collect())
                    .collect();
                let term = &m[0][j] * &determinant(&minor);
                acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
            }
            acc
        }
    }
}

/// Schur polynomial `s_λ` as the bialternant `det[x_j^{λ_i+n-i}] / ∏_{i<j}(x_i - x_j)`.
pub fn schur(lambda: &Partition, n: usize) -> Result<MPoly> {
    lambda.check_len(n)?;
    let parts = lambda.padded(n);
    let rows: Vec<Vec<MPoly>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut e = vec![0; n];
                    e[j] = parts[i] + (n - 1 - i) as u32;
                    MPoly::monomial(n, Monomial(e), Rational::one())
                })
                .collect()
        })
        .collect();
    divide_by_vandermonde(&determinant(&rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::int;

    fn x(n: usize, i: usize) -> MPoly {
        MPoly::var(n, i)
    }

    #[test]
    fn monomial_examples() {
        assert_eq!(monomial_symmetric(&Partition::new(vec![1]), 2).unwrap(), &x(2, 0) + &x(2, 1));
        assert_eq!(monomial_symmetric(&Partition::new(vec![1, 1]), 2).unwrap(), &x(2, 0) * &x(2, 1));
        assert_eq!(monomial_symmetric(&Partition::new(vec![2, 1]), 3).unwrap().len(), 6);
        assert!(monomial_symmetric(&Partition::new(vec![1, 1, 1]), 2).is_err());
    }

    #[test]
    fn elementary_examples() {
        assert_eq!(elementary(1, 2).unwrap(), &x(2, 0) + &x(2, 1));
        assert_eq!(elementary(2, 2).unwrap(), &x(2, 0) * &x(2, 1));
        assert_eq!(elementary(0, 3).unwrap(), MPoly::one(3));
        assert!(elementary(3, 2).is_err());
    }

    #[test]
    fn basis_conversion() {
        let e1 = elementary(1, 2).unwrap();
        let c = to_monomial_basis(&e1).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[&Partition::new(vec![1])], int(1));
        let c = to_monomial_basis(&(&e1 * &e1)).unwrap();
        assert_eq!(c[&Partition::new(vec![2])], int(1));
        assert_eq!(c[&Partition::new(vec![1, 1])], int(2));
        assert!(to_monomial_basis(&MPoly::zero(2)).unwrap().is_empty());
        assert_eq!(to_monomial_basis(&x(2, 0)), Err(Error::NotSymmetric));
    }

    #[test]
    fn schur_examples() {
        let n = 3;
        let s21 = schur(&Partition::new(vec![2, 1]), n).unwrap();
        let c = to_monomial_basis(&s21).unwrap();
        assert_eq!(c[&Partition::new(vec![2, 1])], int(1));
        assert_eq!(c[&Partition::new(vec![1, 1, 1])], int(2));
        assert_eq!(schur(&Partition::new(vec![1, 1]), n).unwrap(), elementary(2, n).unwrap());
        assert_eq!(schur(&Partition::empty(), n).unwrap(), MPoly::one(n));
    }

    #[test]
    fn vandermonde_division() {
        let v = vandermonde(3);
        let e2 = elementary(2, 3).unwrap();
        assert_eq!(divide_by_vandermonde(&(&v * &e2)).unwrap(), e2);
        assert!(divide_by_vandermonde(&e2).is_err());
    }
}
