//! Demazure-Lustig operators `T_i`, the rotation `ω`, Cherednik operators `Y_i` and the q-Dunkl
//! operators `D_i`, acting on arbitrary polynomials.
//!
//! Indices in the public functions are 1-based, matching the usual operator notation.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};
use serde_json::json;

use crate::algebra::rational::{pow, Rational};
use crate::algebra::symmetric::{distinct_permutations, to_monomial_basis};
use crate::algebra::{MPoly, ParamPoint};
use crate::error::{Error, Result};
use crate::macdonald::{expand_in_p, macdonald_p};
use crate::operators::{m1_tilde_partial, symmetric_basis, LinearOp, OpKind};
use crate::partition::{hook_prime, partitions_up_to, principal_specialization, Partition};
use crate::report::CheckReport;

/// One letter of an operator word.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Gen {
    T(usize),
    TInv(usize),
    Swap(usize),
    Tau(usize),
    TauInv(usize),
    Omega,
    OmegaInv,
}

fn check_t_index(i: usize, n: usize) -> Result<()> {
    if i == 0 || i >= n {
        return Err(Error::OutOfRange(format!("T_{i} needs 1 <= i <= {}", n.saturating_sub(1))));
    }
    Ok(())
}

fn check_y_index(i: usize, n: usize) -> Result<()> {
    if i == 0 || i > n {
        return Err(Error::OutOfRange(format!("index {i} outside 1..={n}")));
    }
    Ok(())
}

/// `T_i f = t f + (t x_i - x_{i+1}) (s_i f - f)/(x_i - x_{i+1})`; the inverse is
/// `t^{-1}(T_i - t + 1)`.
pub fn t_op(i: usize, inverse: bool, f: &MPoly, pt: &ParamPoint) -> Result<MPoly> {
    let n = f.nvars();
    check_t_index(i, n)?;
    let (a, b) = (i - 1, i);
    let diff = &f.swap_vars(a, b) - f;
    let quot = diff.div_linear(a, b, &Rational::one())?;
    let lin = &MPoly::var(n, a).scale(&pt.t) - &MPoly::var(n, b);
    let tf = &f.scale(&pt.t) + &(&lin * &quot);
    if inverse {
        let one = Rational::one();
        Ok((&tf + &f.scale(&(&one - &pt.t))).scale(&pt.t.recip()))
    } else {
        Ok(tf)
    }
}

/// `ω = s_{n-1}⋯s_1 τ_1`, so `ω f(x) = f(q x_n, x_1, …, x_{n-1})`; the inverse runs the reversed
/// word `τ_1^{-1} s_1 ⋯ s_{n-1}`.
pub fn omega_op(f: &MPoly, pt: &ParamPoint, inverse: bool) -> MPoly {
    let n = f.nvars();
    let mut g = f.clone();
    if inverse {
        for j in (0..n.saturating_sub(1)).rev() {
            g = g.swap_vars(j, j + 1);
        }
        g.scale_var(0, &pt.q.recip())
    } else {
        g = g.scale_var(0, &pt.q);
        for j in 0..n.saturating_sub(1) {
            g = g.swap_vars(j, j + 1);
        }
        g
    }
}

/// Applies an operator word right to left: the last letter acts first.
pub fn apply_word(word: &[Gen], f: &MPoly, pt: &ParamPoint) -> Result<MPoly> {
    let mut g = f.clone();
    for letter in word.iter().rev() {
        g = match *letter {
            Gen::T(i) => t_op(i, false, &g, pt)?,
            Gen::TInv(i) => t_op(i, true, &g, pt)?,
            Gen::Swap(i) => {
                check_t_index(i, g.nvars())?;
                g.swap_vars(i - 1, i)
            }
            Gen::Tau(i) => {
                check_y_index(i, g.nvars())?;
                g.scale_var(i - 1, &pt.q)
            }
            Gen::TauInv(i) => {
                check_y_index(i, g.nvars())?;
                g.scale_var(i - 1, &pt.q.recip())
            }
            Gen::Omega => omega_op(&g, pt, false),
            Gen::OmegaInv => omega_op(&g, pt, true),
        };
    }
    Ok(g)
}

/// Word for `T_i⋯T_{n-1} ω T_1^{-1}⋯T_{i-1}^{-1}` or its inverse
/// `T_{i-1}⋯T_1 ω^{-1} T_{n-1}^{-1}⋯T_i^{-1}`.
fn y_word(i: usize, n: usize, inverse: bool) -> Vec<Gen> {
    let mut w = Vec::new();
    if inverse {
        w.extend((1..i).rev().map(Gen::T));
        w.push(Gen::OmegaInv);
        w.extend((i..n).rev().map(Gen::TInv));
    } else {
        w.extend((i..n).map(Gen::T));
        w.push(Gen::Omega);
        w.extend((1..i).map(Gen::TInv));
    }
    w
}

/// `Y_i = t^{-n+i} T_i⋯T_{n-1} ω T_1^{-1}⋯T_{i-1}^{-1}`.
pub fn y_op(i: usize, inverse: bool, f: &MPoly, pt: &ParamPoint) -> Result<MPoly> {
    let n = f.nvars();
    check_y_index(i, n)?;
    let g = apply_word(&y_word(i, n, inverse), f, pt)?;
    let e = n as i64 - i as i64;
    Ok(g.scale(&pow(&pt.t, if inverse { e } else { -e })))
}

/// Palindromic word `T_i^{-1}⋯T_{j-2}^{-1} T_{j-1}^{-1} T_{j-2}^{-1}⋯T_i^{-1}` for `i < j`.
fn t_ij_inv_word(i: usize, j: usize) -> Vec<Gen> {
    (i..j).chain((i..j - 1).rev()).map(Gen::TInv).collect()
}

/// `D_i = x_i^{-1}(1 - t^{n-1}[1 + (t^{-1} - 1) Σ_{j>i} t^{j-i} T_{ij}^{-1}] Y_i)`.
pub fn dunkl_d(i: usize, f: &MPoly, pt: &ParamPoint) -> Result<MPoly> {
    let n = f.nvars();
    check_y_index(i, n)?;
    if f.is_zero() {
        return Ok(f.clone());
    }
    let h = y_op(i, false, f, pt)?;
    let mut sum = MPoly::zero(n);
    for j in i + 1..=n {
        let term = apply_word(&t_ij_inv_word(i, j), &h, pt)?;
        sum = &sum + &term.scale(&pow(&pt.t, (j - i) as i64));
    }
    let one = Rational::one();
    let bracket = &h + &sum.scale(&(&pt.t.recip() - &one));
    let num = f - &bracket.scale(&pow(&pt.t, n as i64 - 1));
    num.div_var(i - 1).map_err(|_| Error::Internal(format!("D_{i} numerator not divisible by x_{i}")))
}

/// `t^{1-n} Σ_i Y_i^{-1} f`.
pub fn m1tilde_via_y(f: &MPoly, pt: &ParamPoint) -> Result<MPoly> {
    m1tilde_partial_via_y(f, pt, f.nvars())
}

/// `t^{1-m} Σ_{i≤m} Y_i^{-1} f`, the right side of the inductive form of the same identity.
pub fn m1tilde_partial_via_y(f: &MPoly, pt: &ParamPoint, m: usize) -> Result<MPoly> {
    let mut acc = MPoly::zero(f.nvars());
    for i in 1..=m {
        acc = &acc + &y_op(i, true, f, pt)?;
    }
    Ok(acc.scale(&pow(&pt.t, 1 - m as i64)))
}

/// The three Dunkl sums that appear in the commutator identities, applied to `f`:
/// `Σ t^{1-i} D_i Y_i^{-1} f`, `Σ t^{1-i} D_i^2 Y_i^{-1} f` and `Σ_{i<j} t^{1-i} D_j D_i Y_i^{-1} f`.
pub fn dunkl_sums(f: &MPoly, pt: &ParamPoint) -> Result<(MPoly, MPoly, MPoly)> {
    let n = f.nvars();
    let (mut s1, mut s2, mut s3) = (MPoly::zero(n), MPoly::zero(n), MPoly::zero(n));
    for i in 1..=n {
        let w = pow(&pt.t, 1 - i as i64);
        let yf = y_op(i, true, f, pt)?;
        let dy = dunkl_d(i, &yf, pt)?;
        s1 = &s1 + &dy.scale(&w);
        s2 = &s2 + &dunkl_d(i, &dy, pt)?.scale(&w);
        for j in i + 1..=n {
            s3 = &s3 + &dunkl_d(j, &dy, pt)?.scale(&w);
        }
    }
    Ok((s1, s2, s3))
}

/// The eigenoperator written through `Y_i^{-1}` and `D_i`:
/// `t^{1-n}ΣY_i^{-1} - (1+a)Σt^{1-i}D_iY_i^{-1} + aΣt^{1-i}D_i^2Y_i^{-1}
///  + a(1-t^{-1})Σ_{i<j}t^{1-i}D_jD_iY_i^{-1}`.
pub fn h_form2(f: &MPoly, pt: &ParamPoint) -> Result<MPoly> {
    let one = Rational::one();
    let m = m1tilde_via_y(f, pt)?;
    let (s1, s2, s3) = dunkl_sums(f, pt)?;
    let c3 = &pt.a * (&one - pt.t.recip());
    Ok(&(&(&m - &s1.scale(&(&one + &pt.a))) + &s2.scale(&pt.a)) + &s3.scale(&c3))
}

/// Applies `m_λ(D) = Σ_{distinct permutations e of λ} D_1^{e_1}⋯D_n^{e_n}` to `r`, memoising
/// intermediate D-monomials in `memo`.
fn apply_m_of_d(
    lambda: &Partition,
    r: &MPoly,
    pt: &ParamPoint,
    memo: &mut HashMap<Vec<u32>, MPoly>,
) -> Result<MPoly> {
    let n = r.nvars();
    let mut acc = MPoly::zero(n);
    for e in distinct_permutations(&lambda.padded(n)) {
        acc = &acc + &d_monomial(&e, r, pt, memo)?;
    }
    Ok(acc)
}

fn d_monomial(e: &[u32], r: &MPoly, pt: &ParamPoint, memo: &mut HashMap<Vec<u32>, MPoly>) -> Result<MPoly> {
    if let Some(v) = memo.get(e) {
        return Ok(v.clone());
    }
    let out = match e.iter().rposition(|&k| k > 0) {
        None => r.clone(),
        Some(k) => {
            let mut prev = e.to_vec();
            prev[k] -= 1;
            let inner = d_monomial(&prev, r, pt, memo)?;
            dunkl_d(k + 1, &inner, pt)?
        }
    };
    memo.insert(e.to_vec(), out.clone());
    Ok(out)
}

/// Asserts `D_i D_j r = D_j D_i r` for all `i < j`.
pub fn check_dunkl_commute(r: &MPoly, pt: &ParamPoint) -> Result<()> {
    let n = r.nvars();
    let d: Vec<MPoly> = (1..=n).map(|i| dunkl_d(i, r, pt)).collect::<Result<_>>()?;
    for i in 1..=n {
        for j in i + 1..=n {
            if dunkl_d(i, &d[j - 1], pt)? != dunkl_d(j, &d[i - 1], pt)? {
                return Err(Error::Internal(format!("D_{i} and D_{j} do not commute")));
            }
        }
    }
    Ok(())
}

/// `p(D) r` for symmetric `p`, realised through the monomial-symmetric expansion of `p`.
pub fn apply_symmetric_in_d(p: &MPoly, r: &MPoly, pt: &ParamPoint) -> Result<MPoly> {
    if p.nvars() != r.nvars() {
        return Err(Error::VarCountMismatch { left: p.nvars(), right: r.nvars() });
    }
    if r.degree().is_some_and(|d| d <= 3) {
        check_dunkl_commute(r, pt)?;
    }
    let mut memo = HashMap::new();
    let mut acc = MPoly::zero(r.nvars());
    for (lambda, c) in to_monomial_basis(p)? {
        acc = &acc + &apply_m_of_d(&lambda, r, pt, &mut memo)?.scale(&c);
    }
    Ok(acc)
}

/// `[p, r] = p(D) r |_{x=0}`.
pub fn dunkl_pairing(p: &MPoly, r: &MPoly, pt: &ParamPoint) -> Result<Rational> {
    if !r.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    Ok(apply_symmetric_in_d(p, r, pt)?.constant_term())
}

/// The generalized binomial coefficient `(λ over μ)` from the operator formula
/// `P_μ(D) V^{(0)}_λ |_{y=0}` with its normalising prefactor.
pub fn binomial_from_pairing(lambda: &Partition, mu: &Partition, pt: &ParamPoint) -> Result<Rational> {
    let n = pt.nvars;
    if mu.size() > lambda.size() {
        return Err(Error::OutOfRange(format!("|{mu}| > |{lambda}|")));
    }
    let pt0 = pt.with_a(Rational::zero());
    let v = crate::asc::asc_v(lambda, &pt0)?.poly;
    let pm = macdonald_p(mu, pt)?;
    let pairing = dunkl_pairing(&pm, &v, pt)?;
    let dsize = lambda.size() as i64 - mu.size() as i64;
    let sign = if dsize % 2 == 0 { Rational::one() } else { -Rational::one() };
    let qexp = lambda.conjugate().b_stat() as i64 - mu.conjugate().b_stat() as i64;
    let texp = (n as i64 - 1) * dsize + 2 * mu.b_stat() as i64 - lambda.b_stat() as i64;
    let pref = sign * pow(&pt.q, qexp) * pow(&pt.t, texp)
        / (principal_specialization(lambda, pt)? * hook_prime(mu, pt));
    Ok(pref * pairing)
}

fn monomials_up_to(n: usize, deg: u32) -> Vec<MPoly> {
    fn rec(n: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<MPoly>) {
        if cur.len() == n {
            out.push(MPoly::monomial(n, crate::algebra::Monomial(cur.clone()), Rational::one()));
            return;
        }
        for k in 0..=left {
            cur.push(k);
            rec(n, left - k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, deg, &mut Vec::new(), &mut out);
    out
}

/// A fixed non-symmetric test polynomial of degree `deg`.
fn probe(n: usize, deg: u32) -> MPoly {
    let mut acc = MPoly::zero(n);
    for (k, m) in monomials_up_to(n, deg).into_iter().enumerate() {
        acc = &acc + &m.scale(&crate::algebra::rational::int(((k * 7 + 3) % 11) as i64 - 5));
    }
    acc
}

/// Hecke relations on monomials of degree `≤ degmax`: the quadratic and braid relations, the
/// commutation rules of `T_i` and `ω` with the coordinates, the commutativity of the `Y_i` and
/// `T_i Y_{i+1} T_i = t Y_i`, `[T_i, Y_j] = 0` for `j ∉ {i, i+1}`.
pub fn hecke_relation_checks(pt: &ParamPoint, degmax: u32) -> Vec<CheckReport> {
    let n = pt.nvars;
    let params = json!({"pt": pt.to_json(), "degmax": degmax});
    let run = || -> Result<Vec<CheckReport>> {
        let mut out = Vec::new();
        let mut push = |name: &str, idx: serde_json::Value, l: MPoly, r: MPoly| {
            let p = json!({"pt": pt.to_json(), "degmax": degmax, "case": idx});
            out.push(CheckReport::exact_poly(name, p, &l, &r));
        };
        let monos = monomials_up_to(n, degmax);
        let one = Rational::one();
        let x = |i: usize| MPoly::var(n, i - 1);
        for (k, f) in monos.iter().enumerate() {
            for i in 1..n {
                let tf = t_op(i, false, f, pt)?;
                let ttf = t_op(i, false, &tf, pt)?;
                // (T - t)(T + 1) f = T^2 f + (1 - t) T f - t f
                let quad = &(&ttf + &tf.scale(&(&one - &pt.t))) - &f.scale(&pt.t);
                push("quadratic relation", json!([i, k]), quad, MPoly::zero(n));
                let inv = t_op(i, true, &tf, pt)?;
                push("inverse", json!([i, k]), inv, f.clone());
                // T_i x_i = t x_{i+1} T_i^{-1}
                let l = t_op(i, false, &(&x(i) * f), pt)?;
                let r = (&x(i + 1) * &t_op(i, true, f, pt)?).scale(&pt.t);
                push("T x_i", json!([i, k]), l, r);
                // T_i x_{i+1} = x_i T_i + (t-1) x_{i+1}
                let l = t_op(i, false, &(&x(i + 1) * f), pt)?;
                let r = &(&x(i) * &tf) + &(&x(i + 1) * f).scale(&(&pt.t - &one));
                push("T x_{i+1}", json!([i, k]), l, r);
                // T_i^{-1} x_{i+1} = t^{-1} x_i T_i
                let l = t_op(i, true, &(&x(i + 1) * f), pt)?;
                let r = (&x(i) * &tf).scale(&pt.t.recip());
                push("Tinv x_{i+1}", json!([i, k]), l, r);
                // T_i^{-1} x_i = x_{i+1} T_i^{-1} + (t^{-1}-1) x_i
                let l = t_op(i, true, &(&x(i) * f), pt)?;
                let r = &(&x(i + 1) * &t_op(i, true, f, pt)?) + &(&x(i) * f).scale(&(&pt.t.recip() - &one));
                push("Tinv x_i", json!([i, k]), l, r);
                // ω x_{i+1} = x_i ω
                let l = omega_op(&(&x(i + 1) * f), pt, false);
                let r = &x(i) * &omega_op(f, pt, false);
                push("omega x_{i+1}", json!([i, k]), l, r);
            }
            if n >= 1 {
                let l = omega_op(&(&x(1) * f), pt, false);
                let r = (&x(n) * &omega_op(f, pt, false)).scale(&pt.q);
                push("omega x_1", json!([k]), l, r);
                push("omega inverse", json!([k]), omega_op(&omega_op(f, pt, false), pt, true), f.clone());
            }
            for i in 1..n.saturating_sub(1) {
                let l = apply_word(&[Gen::T(i), Gen::T(i + 1), Gen::T(i)], f, pt)?;
                let r = apply_word(&[Gen::T(i + 1), Gen::T(i), Gen::T(i + 1)], f, pt)?;
                push("braid relation", json!([i, k]), l, r);
            }
        }
        let f = probe(n, degmax.min(3));
        let ys: Vec<MPoly> = (1..=n).map(|i| y_op(i, false, &f, pt)).collect::<Result<_>>()?;
        for i in 1..=n {
            push("Y inverse", json!([i]), y_op(i, true, &ys[i - 1], pt)?, f.clone());
            for j in i + 1..=n {
                let l = y_op(i, false, &ys[j - 1], pt)?;
                let r = y_op(j, false, &ys[i - 1], pt)?;
                push("Y commute", json!([i, j]), l, r);
            }
        }
        for i in 1..n {
            let l = t_op(i, false, &y_op(i + 1, false, &t_op(i, false, &f, pt)?, pt)?, pt)?;
            push("T Y T = t Y", json!([i]), l, ys[i - 1].scale(&pt.t));
            for j in (1..=n).filter(|&j| j != i && j != i + 1) {
                let l = t_op(i, false, &ys[j - 1], pt)?;
                let r = y_op(j, false, &t_op(i, false, &f, pt)?, pt)?;
                push("[T_i, Y_j] = 0", json!([i, j]), l, r);
            }
        }
        Ok(out)
    };
    crate::report::or_failure("hecke relations", params, run())
}

/// `Σ D_i = (1-q) E_0`, `M̃_1 = t^{1-n} Σ Y_i^{-1}` and the inductive partial form for every
/// `m ≤ n`, on `m_λ` with `|λ| ≤ degmax`.
pub fn dunkl_sum_checks(pt: &ParamPoint, degmax: u32) -> Vec<CheckReport> {
    let n = pt.nvars;
    let params = json!({"pt": pt.to_json(), "degmax": degmax});
    let run = || -> Result<Vec<CheckReport>> {
        let mut out = Vec::new();
        let e0 = LinearOp::new(OpKind::E(0), pt);
        let mt = LinearOp::new(OpKind::M1Tilde, pt);
        let one = Rational::one();
        for (lambda, f) in symmetric_basis(n, degmax) {
            let p = json!({"pt": pt.to_json(), "lambda": lambda.to_json()});
            let mut sd = MPoly::zero(n);
            for i in 1..=n {
                sd = &sd + &dunkl_d(i, &f, pt)?;
            }
            out.push(CheckReport::exact_poly("sum D = (1-q) E0", p.clone(), &sd, &e0.apply(&f)?.scale(&(&one - &pt.q))));
            out.push(CheckReport::exact_poly("M1tilde via Y", p.clone(), &m1tilde_via_y(&f, pt)?, &mt.apply(&f)?));
            for m in 1..=n {
                let pm = json!({"pt": pt.to_json(), "lambda": lambda.to_json(), "m": m});
                let l = m1_tilde_partial(&f, pt, m)?;
                let r = m1tilde_partial_via_y(&f, pt, m)?;
                out.push(CheckReport::exact_poly("partial M1tilde via Y", pm, &l, &r));
            }
        }
        Ok(out)
    };
    crate::report::or_failure("Dunkl sums", params, run())
}

/// `[E_0, M̃_1]` and `[E_0, [E_0, M̃_1]]` against their Dunkl-operator forms, and the two forms
/// of the eigenoperator against each other.
pub fn commutator_dunkl_checks(pt: &ParamPoint, degmax: u32) -> Vec<CheckReport> {
    let n = pt.nvars;
    let params = json!({"pt": pt.to_json(), "degmax": degmax});
    let run = || -> Result<Vec<CheckReport>> {
        let mut out = Vec::new();
        let e0 = OpKind::E(0);
        let c1 = OpKind::Commutator(Box::new(e0.clone()), Box::new(OpKind::M1Tilde));
        let c2 = OpKind::Commutator(Box::new(e0), Box::new(c1.clone()));
        let (c1, c2) = (LinearOp::new(c1, pt), LinearOp::new(c2, pt));
        let h1 = LinearOp::new(OpKind::HForm1, pt);
        let one = Rational::one();
        for (lambda, f) in symmetric_basis(n, degmax) {
            let p = json!({"pt": pt.to_json(), "lambda": lambda.to_json()});
            let (s1, s2, s3) = dunkl_sums(&f, pt)?;
            out.push(CheckReport::exact_poly("[E0, M1tilde]", p.clone(), &c1.apply(&f)?, &s1));
            let r2 = &s2 + &s3.scale(&(&one - pt.t.recip()));
            out.push(CheckReport::exact_poly("[E0, [E0, M1tilde]]", p.clone(), &c2.apply(&f)?, &r2));
            out.push(CheckReport::exact_poly("eigenoperator forms agree", p, &h1.apply(&f)?, &h_form2(&f, pt)?));
        }
        Ok(out)
    };
    crate::report::or_failure("commutators via Dunkl", params, run())
}

/// `[P_κ, P_σ] = t^{-b(κ)} h'_κ P_κ(t^δ) δ_{κσ}` for `|κ|, |σ| ≤ degmax`.
pub fn pairing_orthogonality_checks(pt: &ParamPoint, degmax: u32) -> Vec<CheckReport> {
    let n = pt.nvars;
    let params = json!({"pt": pt.to_json(), "degmax": degmax});
    let run = || -> Result<Vec<CheckReport>> {
        let mut out = Vec::new();
        let parts = partitions_up_to(degmax, n);
        let ps: Vec<_> = parts.iter().map(|k| macdonald_p(k, pt)).collect::<Result<_>>()?;
        for (k, pk) in parts.iter().zip(&ps) {
            for (s, psg) in parts.iter().zip(&ps) {
                let got = dunkl_pairing(pk, psg, pt)?;
                let expect = if k == s {
                    pow(&pt.t, -(k.b_stat() as i64)) * hook_prime(k, pt) * principal_specialization(k, pt)?
                } else {
                    Rational::zero()
                };
                let p = json!({"pt": pt.to_json(), "kappa": k.to_json(), "sigma": s.to_json()});
                out.push(CheckReport::exact("Dunkl pairing", p, &got, &expect));
            }
        }
        Ok(out)
    };
    crate::report::or_failure("Dunkl pairing", params, run())
}

/// Embeds an `n`-variable polynomial into `2n` variables, in the first block (`second = false`)
/// or the second block.
fn embed(f: &MPoly, second: bool) -> MPoly {
    let n = f.nvars();
    let g = f.extend_vars(2 * n);
    if !second {
        return g;
    }
    let perm: Vec<usize> = (0..2 * n).map(|j| (j + n) % (2 * n)).collect();
    g.rename_vars(&perm)
}

/// Kernel eigenproperty `f(D^{(x)}) F(x;y) = f(y) F(x;y)` for `f = e_r`, with `F` the
/// hypergeometric kernel truncated at total `(x, y)`-degree `degmax` and both sides compared
/// through degree `degmax - r`.
pub fn kernel_eigen_check(pt: &ParamPoint, r: usize, degmax: u32) -> Vec<CheckReport> {
    let n = pt.nvars;
    let params = json!({"pt": pt.to_json(), "r": r, "degmax": degmax});
    let run = || -> Result<Vec<CheckReport>> {
        let er = crate::algebra::elementary(r, n)?;
        let mut lhs = MPoly::zero(2 * n);
        let mut kernel = MPoly::zero(2 * n);
        for kappa in partitions_up_to(degmax / 2, n) {
            let c = crate::kernels::f00_coefficient(&kappa, pt)?;
            let pk = macdonald_p(&kappa, pt)?;
            let py = embed(&pk, true);
            let dk = apply_symmetric_in_d(&er, &pk, pt)?;
            lhs = &lhs + &(&embed(&dk, false) * &py).scale(&c);
            kernel = &kernel + &(&embed(&pk, false) * &py).scale(&c);
        }
        let rhs = &embed(&er, true) * &kernel;
        let cut = degmax.saturating_sub(r as u32);
        Ok(vec![CheckReport::exact_poly("kernel eigenproperty", params.clone(), &lhs.truncate(cut), &rhs.truncate(cut))])
    };
    crate::report::or_failure("kernel eigenproperty", params.clone(), run())
}

/// `(λ over μ)` from the pairing against the Pieri-derived one-node binomials and the
/// boundary values `(λ over λ) = 1`, `(λ over ∅) = 1`.
pub fn binomial_pairing_checks(pt: &ParamPoint, degmax: u32) -> Vec<CheckReport> {
    let n = pt.nvars;
    let params = json!({"pt": pt.to_json(), "degmax": degmax});
    let run = || -> Result<Vec<CheckReport>> {
        let mut out = Vec::new();
        for lambda in partitions_up_to(degmax, n) {
            let p = |mu: &Partition| json!({"pt": pt.to_json(), "lambda": lambda.to_json(), "mu": mu.to_json()});
            out.push(CheckReport::exact("binomial (l over l)", p(&lambda), &binomial_from_pairing(&lambda, &lambda, pt)?, &Rational::one()));
            let e = Partition::empty();
            out.push(CheckReport::exact("binomial (l over 0)", p(&e), &binomial_from_pairing(&lambda, &e, pt)?, &Rational::one()));
            for row in 1..=lambda.len() {
                if let Some(mu) = lambda.remove_node(row) {
                    let expect = crate::partition::binom_remove(&lambda, row, pt)?;
                    out.push(CheckReport::exact("binomial one node", p(&mu), &binomial_from_pairing(&lambda, &mu, pt)?, &expect));
                }
            }
        }
        Ok(out)
    };
    crate::report::or_failure("binomial from pairing", params, run())
}

/// `P`-basis coefficients of `p(D) P_κ`, exposed for diagnostics.
pub fn d_action_in_p(p: &MPoly, kappa: &Partition, pt: &ParamPoint) -> Result<BTreeMap<Partition, Rational>> {
    let pk = macdonald_p(kappa, pt)?;
    expand_in_p(&apply_symmetric_in_d(p, &pk, pt)?, pt)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{int, rat};
    use crate::algebra::{elementary, Monomial};
    use crate::report::{all_pass, first_failure};

    fn pt(n: usize) -> ParamPoint {
        ParamPoint::new(rat(2, 5), rat(3, 7), rat(-3, 2), n)
    }

    fn assert_ok(reps: &[CheckReport]) {
        assert!(!reps.is_empty());
        assert!(all_pass(reps), "{:?}", first_failure(reps));
    }

    #[test]
    fn t_examples() {
        let pt = pt(3);
        assert_eq!(t_op(1, false, &MPoly::one(3), &pt).unwrap(), MPoly::constant(3, pt.t.clone()));
        let e2 = elementary(2, 3).unwrap();
        assert_eq!(t_op(2, false, &e2, &pt).unwrap(), e2.scale(&pt.t));
        let x1 = MPoly::var(3, 0);
        // T_1 x_1 · 1 = t x_2 T_1^{-1} 1 = x_2
        assert_eq!(t_op(1, false, &x1, &pt).unwrap(), MPoly::var(3, 1));
        assert!(t_op(3, false, &x1, &pt).is_err());
        assert!(t_op(0, false, &x1, &pt).is_err());
    }

    #[test]
    fn omega_closed_form() {
        let pt = pt(3);
        let f = probe(3, 3);
        // ω f = f(q x_3, x_1, x_2)
        let expect = f.scale_var(0, &pt.q).rename_vars(&[2, 0, 1]);
        assert_eq!(omega_op(&f, &pt, false), expect);
        assert_eq!(omega_op(&MPoly::one(3), &pt, false), MPoly::one(3));
    }

    #[test]
    fn one_variable_degenerations() {
        let pt = pt(1);
        for m in 0..5u32 {
            let xm = MPoly::monomial(1, Monomial(vec![m]), int(1));
            assert_eq!(y_op(1, false, &xm, &pt).unwrap(), xm.scale(&pow(&pt.q, m as i64)));
            let expect = if m == 0 {
                MPoly::zero(1)
            } else {
                MPoly::monomial(1, Monomial(vec![m - 1]), int(1) - pow(&pt.q, m as i64))
            };
            assert_eq!(dunkl_d(1, &xm, &pt).unwrap(), expect);
        }
    }

    #[test]
    fn dunkl_kills_constants_and_lowers_degree() {
        for n in 1..=3 {
            let pt = pt(n);
            for i in 1..=n {
                assert!(dunkl_d(i, &MPoly::one(n), &pt).unwrap().is_zero());
                let f = probe(n, 3).homogeneous_part(3);
                let d = dunkl_d(i, &f, &pt).unwrap();
                assert!(d.terms().all(|(m, _)| m.degree() == 2));
            }
        }
    }

    #[test]
    fn relations() {
        for n in [2, 3] {
            assert_ok(&hecke_relation_checks(&pt(n), 3));
        }
    }

    #[test]
    fn dunkl_sums_and_induction() {
        for n in [1, 2, 3] {
            assert_ok(&dunkl_sum_checks(&pt(n), 3));
        }
    }

    #[test]
    fn commutators_and_second_form() {
        for n in [1, 2, 3] {
            assert_ok(&commutator_dunkl_checks(&pt(n), 3));
        }
    }

    #[test]
    fn pairing() {
        let p1 = ParamPoint::new(rat(1, 3), rat(1, 2), int(-1), 1);
        let e1 = MPoly::var(1, 0);
        assert_eq!(dunkl_pairing(&e1, &e1, &p1).unwrap(), int(1) - &p1.q);
        for n in [2, 3] {
            assert_ok(&pairing_orthogonality_checks(&pt(n), 3));
        }
    }

    #[test]
    fn kernel_eigenproperty() {
        for n in [1, 2] {
            for r in 1..=n {
                assert_ok(&kernel_eigen_check(&pt(n), r, 6));
            }
        }
    }

    #[test]
    fn binomials() {
        for n in [1, 2, 3] {
            assert_ok(&binomial_pairing_checks(&pt(n), 3));
        }
    }
}
