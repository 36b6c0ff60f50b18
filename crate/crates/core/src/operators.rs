//! q-shift and Macdonald-type operators on symmetric polynomials.
//!
//! Every operator of the form `Σ_i A_i(t) h_i` is assembled over the common denominator
//! `∏_{i<j}(x_i - x_j)` and cleared by exact division; a failed division means the input was
//! not symmetric.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::One;
use serde_json::json;

use crate::algebra::rational::{pow, Rational};
use crate::algebra::symmetric::{divide_by_vandermonde, monomial_symmetric};
use crate::algebra::{MPoly, Monomial, ParamPoint};
use crate::error::{Error, Result};
use crate::partition::partitions_up_to;
use crate::report::CheckReport;

type WeightKey = (usize, usize, Rational);

fn weight_cache() -> &'static Mutex<HashMap<WeightKey, Arc<Vec<MPoly>>>> {
    static CACHE: OnceLock<Mutex<HashMap<WeightKey, Arc<Vec<MPoly>>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

fn linear(n: usize, i: usize, ci: &Rational, j: usize) -> MPoly {
    &MPoly::var(n, i).scale(ci) - &MPoly::var(n, j)
}

/// `W_i = ∏_{p<m, p≠i}(t x_i - x_p) · ∏_{j<k<m; j,k≠i}(x_j - x_k) · (-1)^i`, so that
/// `A_{i,m}(t) = W_i / ∏_{j<k<m}(x_j - x_k)`.
fn a_numerators(n: usize, m: usize, t: &Rational) -> Arc<Vec<MPoly>> {
    let key = (n, m, t.clone());
    if let Some(w) = weight_cache().lock().unwrap().get(&key) {
        return w.clone();
    }
    let one = Rational::one();
    let ws: Vec<MPoly> = (0..m)
        .map(|i| {
            let mut w = MPoly::one(n);
            for p in (0..m).filter(|&p| p != i) {
                w = &w * &linear(n, i, t, p);
            }
            for j in (0..m).filter(|&j| j != i) {
                for k in (j + 1..m).filter(|&k| k != i) {
                    w = &w * &linear(n, j, &one, k);
                }
            }
            if i % 2 == 1 {
                -w
            } else {
                w
            }
        })
        .collect();
    let ws = Arc::new(ws);
    weight_cache().lock().unwrap().insert(key, ws.clone());
    ws
}

fn divide_by_partial_vandermonde(p: &MPoly, m: usize) -> Result<MPoly> {
    if m == p.nvars() {
        return divide_by_vandermonde(p);
    }
    let one = Rational::one();
    let mut cur = p.clone();
    for i in 0..m {
        for j in i + 1..m {
            cur = cur.div_linear(i, j, &one)?;
        }
    }
    Ok(cur)
}

/// `Σ_{i<m} A_{i,m}(t) h_i` where `A_{i,m}(t) = ∏_{p<m, p≠i} (t x_i - x_p)/(x_i - x_p)`.
pub fn a_weighted_sum(hs: &[MPoly], t: &Rational, m: usize) -> Result<MPoly> {
    let n = hs.first().map(|h| h.nvars()).ok_or(Error::OutOfRange("empty operator sum".into()))?;
    assert_eq!(hs.len(), m);
    let ws = a_numerators(n, m, t);
    let mut num = MPoly::zero(n);
    for (w, h) in ws.iter().zip(hs) {
        if !h.is_zero() {
            num = &num + &(w * h);
        }
    }
    divide_by_partial_vandermonde(&num, m).map_err(|_| Error::NotSymmetric)
}

/// `(f - τ_i f) / ((1-q) x_i)`, the q-derivative in `x_i`.
pub fn q_partial(f: &MPoly, i: usize, q: &Rational) -> MPoly {
    let diff = f - &f.scale_var(i, q);
    diff.div_var(i)
        .expect("f - τ_i f vanishes at x_i = 0")
        .scale(&(Rational::one() - q).recip())
}

#[derive(Clone, Debug, PartialEq)]
pub enum OpKind {
    /// `τ_i` (0-based), `x_i -> q x_i`.
    Tau(usize),
    /// `τ_i^{-1}`.
    TauInv(usize),
    M1,
    M1Tilde,
    /// `E_k = Σ x_i^k A_i(t) ∂_{q,i}`.
    E(u32),
    HForm1,
    B,
    MulBy(MPoly),
    Commutator(Box<OpKind>, Box<OpKind>),
}

/// An operator together with the parameter point it is evaluated at.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearOp {
    pub kind: OpKind,
    pub pt: ParamPoint,
}

impl LinearOp {
    pub fn new(kind: OpKind, pt: &ParamPoint) -> Self {
        LinearOp { kind, pt: pt.clone() }
    }

    pub fn nvars(&self) -> usize {
        self.pt.nvars
    }

    pub fn apply(&self, f: &MPoly) -> Result<MPoly> {
        if f.nvars() != self.pt.nvars {
            return Err(Error::VarCountMismatch { left: self.pt.nvars, right: f.nvars() });
        }
        apply_kind(&self.kind, f, &self.pt)
    }
}

fn apply_kind(kind: &OpKind, f: &MPoly, pt: &ParamPoint) -> Result<MPoly> {
    match kind {
        OpKind::Tau(i) => Ok(f.scale_var(*i, &pt.q)),
        OpKind::TauInv(i) => Ok(f.scale_var(*i, &pt.q.recip())),
        OpKind::M1 => m1(f, &pt.q, &pt.t),
        OpKind::M1Tilde => m1(f, &pt.q.recip(), &pt.t.recip()),
        OpKind::E(k) => e_k(f, *k, pt),
        OpKind::B => operator_b_apply(f, pt),
        OpKind::HForm1 => h_form1_apply(f, pt),
        OpKind::MulBy(p) => f.try_mul(p),
        OpKind::Commutator(a, b) => {
            let ab = apply_kind(a, &apply_kind(b, f, pt)?, pt)?;
            let ba = apply_kind(b, &apply_kind(a, f, pt)?, pt)?;
            Ok(&ab - &ba)
        }
    }
}

/// `Σ A_i(t) τ_i f` with shift base `q`.
pub fn m1(f: &MPoly, q: &Rational, t: &Rational) -> Result<MPoly> {
    let n = f.nvars();
    if f.is_zero() {
        return Ok(f.clone());
    }
    let hs: Vec<MPoly> = (0..n).map(|i| f.scale_var(i, q)).collect();
    a_weighted_sum(&hs, t, n)
}

/// `M̃_1^{(m)} = Σ_{i<m} A_{i,m}(1/t) τ_i^{-1}`, the operator on the first `m` variables.
pub fn m1_tilde_partial(f: &MPoly, pt: &ParamPoint, m: usize) -> Result<MPoly> {
    if f.is_zero() {
        return Ok(f.clone());
    }
    let qi = pt.q.recip();
    let hs: Vec<MPoly> = (0..m).map(|i| f.scale_var(i, &qi)).collect();
    a_weighted_sum(&hs, &pt.t.recip(), m)
}

fn e_k(f: &MPoly, k: u32, pt: &ParamPoint) -> Result<MPoly> {
    let n = f.nvars();
    if f.is_zero() {
        return Ok(f.clone());
    }
    let hs: Vec<MPoly> = (0..n)
        .map(|i| {
            let d = q_partial(f, i, &pt.q);
            if k == 0 {
                d
            } else {
                d.shift(&mono_pow(n, i, k))
            }
        })
        .collect();
    a_weighted_sum(&hs, &pt.t, n)
}

fn mono_pow(n: usize, i: usize, k: u32) -> Monomial {
    let mut e = vec![0; n];
    e[i] = k;
    Monomial(e)
}

fn operator_b_apply(f: &MPoly, pt: &ParamPoint) -> Result<MPoly> {
    let n = f.nvars();
    if f.is_zero() {
        return Ok(f.clone());
    }
    let one = MPoly::one(n);
    let hs: Vec<MPoly> = (0..n)
        .map(|i| {
            let xi = MPoly::var(n, i);
            let w = &(&one - &xi) * &(&one - &xi.scale(&pt.a));
            &w * &q_partial(f, i, &pt.q)
        })
        .collect();
    a_weighted_sum(&hs, &pt.t, n)
}

fn h_form1_apply(f: &MPoly, pt: &ParamPoint) -> Result<MPoly> {
    let (qi, ti) = (pt.q.recip(), pt.t.recip());
    let mt = |g: &MPoly| m1(g, &qi, &ti);
    let e0 = |g: &MPoly| e_k(g, 0, pt);
    let e0f = e0(f)?;
    let mf = mt(f)?;
    // C g = E0 M̃ g - M̃ E0 g
    let e0e0f = e0(&e0f)?;
    let cf = &e0(&mf)? - &mt(&e0f)?;
    let c_e0f = &e0(&mt(&e0f)?)? - &mt(&e0e0f)?;
    let ccf = &e0(&cf)? - &c_e0f;
    let one = Rational::one();
    Ok(&(&mf - &cf.scale(&(&one + &pt.a))) + &ccf.scale(&pt.a))
}

pub fn h_form1(pt: &ParamPoint) -> LinearOp {
    LinearOp::new(OpKind::HForm1, pt)
}

pub fn operator_b(pt: &ParamPoint) -> LinearOp {
    LinearOp::new(OpKind::B, pt)
}

pub fn p1(n: usize) -> MPoly {
    (0..n).fold(MPoly::zero(n), |acc, i| &acc + &MPoly::var(n, i))
}

/// `(1/q - 1)^k Σ_p x_p^k A_p(1/t) τ_p^{-1} f`.
pub fn comm_rhs(f: &MPoly, pt: &ParamPoint, k: u32) -> Result<MPoly> {
    let n = f.nvars();
    let qi = pt.q.recip();
    let hs: Vec<MPoly> = (0..n).map(|i| f.scale_var(i, &qi).shift(&mono_pow(n, i, k))).collect();
    let s = a_weighted_sum(&hs, &pt.t.recip(), n)?;
    Ok(s.scale(&pow(&(&qi - Rational::one()), k as i64)))
}

/// Monomial symmetric functions `m_λ` with `|λ| ≤ degmax`, `ℓ(λ) ≤ n`.
pub fn symmetric_basis(n: usize, degmax: u32) -> Vec<(crate::partition::Partition, MPoly)> {
    partitions_up_to(degmax, n)
        .into_iter()
        .map(|l| {
            let m = monomial_symmetric(&l, n).expect("length checked");
            (l, m)
        })
        .collect()
}

/// Checks `[M̃_1, p_1]` and `[[M̃_1, p_1], p_1]` against their closed forms on every `m_λ` with
/// `|λ| ≤ degmax`.
pub fn commutator_checks(pt: &ParamPoint, degmax: u32) -> Vec<CheckReport> {
    let n = pt.nvars;
    let p1k = OpKind::MulBy(p1(n));
    let c1 = LinearOp::new(OpKind::Commutator(Box::new(OpKind::M1Tilde), Box::new(p1k.clone())), pt);
    let c2 = LinearOp::new(OpKind::Commutator(Box::new(c1.kind.clone()), Box::new(p1k)), pt);
    let mut out = Vec::new();
    for (lambda, m) in symmetric_basis(n, degmax) {
        let params = json!({"pt": pt.to_json(), "basis": lambda.to_json()});
        for (name, op, k) in [("commutator p1", &c1, 1), ("double commutator p1", &c2, 2)] {
            let rep = match (op.apply(&m), comm_rhs(&m, pt, k)) {
                (Ok(l), Ok(r)) => CheckReport::exact_poly(name, params.clone(), &l, &r),
                (Err(e), _) | (_, Err(e)) => CheckReport::failure(name, params.clone(), e.to_string()),
            };
            out.push(rep);
        }
    }
    out
}

/// `B = E_0 - (1+a)E_1 + aE_2` and `E_2 = t^{n-1}e_1/(1-q) - [E_1, e_1]/(1-q)` on `m_λ`,
/// `|λ| ≤ degmax`.
pub fn operator_b_checks(pt: &ParamPoint, degmax: u32) -> Vec<CheckReport> {
    let n = pt.nvars;
    let one = Rational::one();
    let mut out = Vec::new();
    let e = |k: u32| LinearOp::new(OpKind::E(k), pt);
    let e1 = p1(n);
    let comm = LinearOp::new(
        OpKind::Commutator(Box::new(OpKind::E(1)), Box::new(OpKind::MulBy(e1.clone()))),
        pt,
    );
    let inv = (&one - &pt.q).recip();
    for (lambda, m) in symmetric_basis(n, degmax) {
        let params = json!({"pt": pt.to_json(), "basis": lambda.to_json()});
        let res: Result<(MPoly, MPoly, MPoly, MPoly)> = (|| {
            let b = operator_b(pt).apply(&m)?;
            let e0 = e(0).apply(&m)?;
            let e1m = e(1).apply(&m)?;
            let e2m = e(2).apply(&m)?;
            let rhs = &(&e0 - &e1m.scale(&(&one + &pt.a))) + &e2m.scale(&pt.a);
            let rel = &(&e1 * &m).scale(&(pow(&pt.t, n as i64 - 1) * &inv)) - &comm.apply(&m)?.scale(&inv);
            Ok((b, rhs, e2m, rel))
        })();
        match res {
            Ok((b, rhs, e2m, rel)) => {
                out.push(CheckReport::exact_poly("B decomposition", params.clone(), &b, &rhs));
                out.push(CheckReport::exact_poly("E2 relation", params, &e2m, &rel));
            }
            Err(err) => out.push(CheckReport::failure("B decomposition", params, err.to_string())),
        }
    }
    out
}

/// `∏_i ρ_a(x_i)` truncated at total degree `deg`.
pub fn rho_product(pt: &ParamPoint, deg: u32) -> MPoly {
    let n = pt.nvars;
    let r = crate::qseries::rho_series(&pt.a, &pt.q, deg as usize);
    let mut acc = MPoly::one(n);
    for i in 0..n {
        let f = MPoly::from_terms(
            n,
            r.iter().enumerate().map(|(k, c)| {
                let mut e = vec![0; n];
                e[i] = k as u32;
                (e, c.clone())
            }),
        );
        acc = (&acc * &f).truncate(deg);
    }
    acc
}

/// `B ∏ρ_a(x_i) = (a t^{n-1} e_1 - (1+a)[n]_t)/(1-q) ∏ρ_a(x_i)` through degree `deg`.
pub fn operator_b_rho_check(pt: &ParamPoint, deg: u32) -> CheckReport {
    let n = pt.nvars;
    let one = Rational::one();
    let params = json!({"pt": pt.to_json(), "deg": deg});
    let rho = rho_product(pt, deg + 1);
    let lhs = match operator_b(pt).apply(&rho) {
        Ok(p) => p.truncate(deg),
        Err(e) => return CheckReport::failure("B on rho product", params, e.to_string()),
    };
    let inv = (&one - &pt.q).recip();
    let factor = &p1(n).scale(&(&pt.a * pow(&pt.t, n as i64 - 1) * &inv))
        - &MPoly::constant(n, (&one + &pt.a) * crate::algebra::rational::qnumber(n, &pt.t) * &inv);
    let rhs = (&factor * &rho).truncate(deg);
    CheckReport::exact_poly("B on rho product", params, &lhs, &rhs)
}

/// One-variable eigen-relation `(1 - (1+a)D + aD^2) τ^{-1} U_m = q^{-m} U_m`,
/// `D = x^{-1}(1 - τ)`, for `m ≤ nmax`.
pub fn one_variable_eigen_check(pt: &ParamPoint, nmax: usize) -> Vec<CheckReport> {
    let pt1 = pt.with_nvars(1);
    let one = Rational::one();
    let d = |g: &MPoly| -> MPoly { (g - &g.scale_var(0, &pt1.q)).div_var(0).expect("divisible") };
    let us = crate::qseries::u1_family(nmax, &pt1);
    us.iter()
        .enumerate()
        .map(|(m, u)| {
            let u = u.to_mpoly();
            let g = u.scale_var(0, &pt1.q.recip());
            let dg = d(&g);
            let ddg = d(&dg);
            let lhs = &(&g - &dg.scale(&(&one + &pt1.a))) + &ddg.scale(&pt1.a);
            let rhs = u.scale(&pow(&pt1.q, -(m as i64)));
            CheckReport::exact_poly(format!("one-variable eigen m={m}"), pt1.to_json(), &lhs, &rhs)
        })
        .collect()
}

/// `Σ_i A_i(t) = [n]_t` and `Σ_i x_i A_i(t) = t^{n-1} e_1`.
pub fn a_sum_identities(pt: &ParamPoint) -> Result<(MPoly, MPoly)> {
    let n = pt.nvars;
    let ones = vec![MPoly::one(n); n];
    let xs: Vec<MPoly> = (0..n).map(|i| MPoly::var(n, i)).collect();
    Ok((a_weighted_sum(&ones, &pt.t, n)?, a_weighted_sum(&xs, &pt.t, n)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{int, qnumber, rat};
    use crate::algebra::symmetric::elementary;
    use crate::report::{all_pass, first_failure};

    fn pt(n: usize) -> ParamPoint {
        ParamPoint::new(rat(2, 5), rat(3, 7), rat(-4, 3), n)
    }

    #[test]
    fn m1_on_e1() {
        let pt = pt(2);
        let e1 = elementary(1, 2).unwrap();
        let out = LinearOp::new(OpKind::M1, &pt).apply(&e1).unwrap();
        assert_eq!(out, e1.scale(&(&pt.q * &pt.t + int(1))));
    }

    #[test]
    fn e0_on_elementary() {
        for n in 2..=4 {
            let pt = pt(n);
            for p in 1..=n {
                let ep = elementary(p, n).unwrap();
                let out = LinearOp::new(OpKind::E(0), &pt).apply(&ep).unwrap();
                let expect = elementary(p - 1, n).unwrap().scale(&qnumber(n + 1 - p, &pt.t));
                assert_eq!(out, expect, "n={n} p={p}");
            }
        }
    }

    #[test]
    fn tau_and_constants() {
        let pt = pt(2);
        let x1x2 = elementary(2, 2).unwrap();
        assert_eq!(LinearOp::new(OpKind::Tau(0), &pt).apply(&x1x2).unwrap(), x1x2.scale(&pt.q));
        assert!(operator_b(&pt).apply(&MPoly::one(2)).unwrap().is_zero());
        let one = MPoly::one(2);
        let expect = one.scale(&(pt.t.recip() + int(1)));
        assert_eq!(h_form1(&pt).apply(&one).unwrap(), expect);
    }

    #[test]
    fn non_symmetric_input_rejected() {
        let pt = pt(2);
        let x1 = MPoly::var(2, 0);
        assert_eq!(LinearOp::new(OpKind::M1, &pt).apply(&x1), Err(Error::NotSymmetric));
    }

    #[test]
    fn a_sums() {
        for n in 1..=4 {
            let pt = pt(n);
            let (s0, s1) = a_sum_identities(&pt).unwrap();
            assert_eq!(s0, MPoly::constant(n, qnumber(n, &pt.t)));
            assert_eq!(s1, p1(n).scale(&pow(&pt.t, n as i64 - 1)));
        }
    }

    #[test]
    fn commutators() {
        for n in [2, 3] {
            let reps = commutator_checks(&pt(n), 3);
            assert!(all_pass(&reps), "{:?}", first_failure(&reps));
        }
    }

    #[test]
    fn b_operator() {
        for n in [2, 3] {
            let reps = operator_b_checks(&pt(n), 3);
            assert!(all_pass(&reps), "{:?}", first_failure(&reps));
            for deg in [0, 1, 4] {
                assert!(operator_b_rho_check(&pt(n), deg).pass);
            }
        }
    }

    #[test]
    fn one_variable_reduction() {
        let reps = one_variable_eigen_check(&pt(1), 5);
        assert!(all_pass(&reps), "{:?}", first_failure(&reps));
    }

    #[test]
    fn h_form1_one_variable() {
        // n = 1: H U_2 = q^{-2} U_2
        let pt = pt(1);
        let u2 = crate::qseries::u1(2, &pt).to_mpoly();
        let out = h_form1(&pt).apply(&u2).unwrap();
        assert_eq!(out, u2.scale(&pow(&pt.q, -2)));
    }

    #[test]
    fn u1_eigen_n2() {
        let pt = pt(2);
        let one = int(1);
        let u = &elementary(1, 2).unwrap() - &MPoly::constant(2, (&one + &pt.a) * qnumber(2, &pt.t));
        let ev = crate::partition::eigenvalue_e_tilde(&crate::partition::Partition::new(vec![1]), &pt.q, &pt.t, 2);
        assert_eq!(h_form1(&pt).apply(&u).unwrap(), u.scale(&ev));
    }
}
