//! Jackson q-integrals on `[a,1]^n` and `[1,∞)^n`, the weights `w_U`, `w_V`, the inner products
//! and the normalization, orthogonality and integral-representation checks built on them.
//!
//! An n-fold sum over the product lattice of `h(x) ∏w(x_l)` with polynomial `h` equals
//! `Σ_α c_α ∏_l M_{α_l}` where `M_j` are the one-dimensional moments over the same truncated
//! lattice. Inner products are evaluated this way; [`inner_product_direct`] iterates the lattice
//! literally and serves as a cross-check.

use std::sync::RwLock;

use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::algebra::rational::{format_rational, int, pow, Rational};
use crate::algebra::{MPoly, ParamPoint};
use crate::asc::{asc_u_eigen, asc_v, determinant_norm, Family};
use crate::bigfloat::BigFloat;
use crate::error::{Error, Result};
use crate::kernels::{majorant_tail, KernelKind, TruncatedKernel};
use crate::operators::{h_form1, symmetric_basis};
use crate::partition::{hook_prime, partitions_up_to, principal_specialization, qfactorial, Partition};
use crate::qseries::{qpochhammer, qpochhammer_inf, u1, v1, Approx};
use crate::report::CheckReport;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Domain {
    /// `[a,1]`, lattice `{q^m} ∪ {a q^m}`.
    Finite,
    /// `[1,∞)`, lattice `{q^{-m}}`.
    Infinite,
}

/// Lattice points and Jackson jacobians `(x, dx)` of one branch, `m = 0..nterms`.
fn lattice(domain: Domain, pt: &ParamPoint, nterms: usize) -> Vec<Vec<(Rational, Rational)>> {
    let one = Rational::one();
    let c = &one - &pt.q;
    match domain {
        Domain::Finite => {
            let mut up = Vec::with_capacity(nterms);
            let mut down = Vec::with_capacity(nterms);
            let mut qm = one.clone();
            for _ in 0..nterms {
                up.push((qm.clone(), &c * &qm));
                down.push((&pt.a * &qm, -(&c * &pt.a * &qm)));
                qm *= &pt.q;
            }
            vec![up, down]
        }
        Domain::Infinite => {
            let qi = pt.q.recip();
            let mut out = Vec::with_capacity(nterms);
            let mut qm = one.clone();
            for _ in 0..nterms {
                out.push((qm.clone(), &c * &qm));
                qm *= &qi;
            }
            vec![out]
        }
    }
}

/// Sum of a branch with the tail estimated from the geometric ratio of the last two terms.
fn branch_sum(terms: &[BigFloat], digits: usize) -> Result<Approx> {
    let mut acc = BigFloat::zero(digits);
    for t in terms {
        acc += t;
    }
    let tail = match terms {
        [.., prev, last] => {
            if last.is_zero() {
                BigFloat::zero(digits)
            } else if prev.is_zero() {
                return Err(Error::NonDecayingTail("last lattice term is not decaying".into()));
            } else {
                let r = &last.abs() / &prev.abs();
                if r >= BigFloat::one(digits) {
                    return Err(Error::NonDecayingTail(format!("term ratio {} at the truncation", r.to_sci(6))));
                }
                &(&last.abs() * &r) / &(&BigFloat::one(digits) - &r)
            }
        }
        _ => BigFloat::zero(digits),
    };
    Ok(Approx { value: acc, err: tail })
}

/// Sum of a series whose terms may vanish in alternate positions (e.g. odd moments of a symmetric
/// measure): the tail is estimated from the ratio of the last two pairs of terms.
fn paired_sum(terms: &[BigFloat], digits: usize) -> Result<Approx> {
    let mut acc = BigFloat::zero(digits);
    for t in terms {
        acc += t;
    }
    let n = terms.len();
    if n < 4 {
        return Err(Error::NonDecayingTail("too few series terms for a tail estimate".into()));
    }
    let last = &terms[n - 1].abs() + &terms[n - 2].abs();
    let prev = &terms[n - 3].abs() + &terms[n - 4].abs();
    let tail = if last.is_zero() {
        last
    } else {
        let r = &last / &prev;
        if prev.is_zero() || r >= BigFloat::one(digits) {
            return Err(Error::NonDecayingTail(format!("series term ratio {} at the truncation", r.to_sci(6))));
        }
        &(&last * &r) / &(&BigFloat::one(digits) - &r)
    };
    Ok(Approx { value: acc, err: tail })
}

/// Truncated Jackson integral of `f` over `[a,1]` or `[1,∞)`, with the tail estimate as error.
pub fn jackson_1d<F>(f: F, pt: &ParamPoint, domain: Domain, nterms: usize, digits: usize) -> Result<Approx>
where
    F: Fn(&Rational) -> Result<BigFloat>,
{
    let mut value = BigFloat::zero(digits);
    let mut err = BigFloat::zero(digits);
    for branch in lattice(domain, pt, nterms) {
        let terms = branch
            .iter()
            .map(|(x, dx)| Ok(&f(x)? * &BigFloat::from_rational(dx, digits)))
            .collect::<Result<Vec<_>>>()?;
        let s = branch_sum(&terms, digits)?;
        value += &s.value;
        err += &s.err;
    }
    Ok(Approx { value, err })
}

/// `(x;q)_∞` for rational `x`: factors with `|x q^i| > 1/2` are formed exactly, so a factor that
/// vanishes is recognised exactly and, with `dash`, deleted. The rest is a numeric product.
fn poch_inf(x: &Rational, q: &Rational, digits: usize, dash: bool) -> Result<Approx> {
    let one = Rational::one();
    let half = Rational::new(1.into(), 2.into());
    let mut head = BigFloat::one(digits);
    let mut p = x.clone();
    while p.abs() > half {
        let f = &one - &p;
        if f.is_zero() {
            if !dash {
                return Ok(Approx { value: BigFloat::zero(digits), err: BigFloat::zero(digits) });
            }
        } else {
            head = &head * &BigFloat::from_rational(&f, digits);
        }
        p *= q;
    }
    let tail = qpochhammer_inf(&BigFloat::from_rational(&p, digits), &BigFloat::from_rational(q, digits), digits)?;
    Ok(Approx { value: &head * &tail.value, err: &head.abs() * &tail.err })
}

fn rel(a: &Approx) -> BigFloat {
    if a.value.is_zero() {
        a.err.clone()
    } else {
        &a.err / &a.value.abs()
    }
}

/// Quotient of two products of infinite q-Pochhammers, with the relative errors added.
fn poch_ratio(num: &[Approx], den: &[Approx], digits: usize) -> Result<Approx> {
    let mut v = BigFloat::one(digits);
    let mut r = BigFloat::zero(digits);
    for a in num {
        v = &v * &a.value;
        r += &rel(a);
    }
    for a in den {
        if a.value.is_zero() {
            return Err(Error::DivisionByZero);
        }
        v = &v / &a.value;
        r += &rel(a);
    }
    let err = &v.abs() * &r;
    Ok(Approx { value: v, err })
}

/// `w_U(x) = (qx;q)_∞(qx/a;q)_∞ / ((q;q)_∞(a;q)_∞(q/a;q)_∞)`.
pub fn weight_u(x: &Rational, pt: &ParamPoint, digits: usize) -> Result<Approx> {
    let q = &pt.q;
    let qx = q * x;
    let num = [poch_inf(&qx, q, digits, false)?, poch_inf(&(&qx / &pt.a), q, digits, false)?];
    let den = [poch_inf(q, q, digits, false)?, poch_inf(&pt.a, q, digits, false)?, poch_inf(&(q / &pt.a), q, digits, false)?];
    poch_ratio(&num, &den, digits)
}

/// `w_V(x) = (q;q)_∞(1/a;q)_∞(qa;q)_∞ / ((x;q)'_∞ (x/a;q)_∞)`, where the dash deletes a
/// vanishing factor.
pub fn weight_v(x: &Rational, pt: &ParamPoint, digits: usize) -> Result<Approx> {
    let q = &pt.q;
    let num = [poch_inf(q, q, digits, false)?, poch_inf(&pt.a.recip(), q, digits, false)?, poch_inf(&(q * &pt.a), q, digits, false)?];
    let den = [poch_inf(x, q, digits, true)?, poch_inf(&(x / &pt.a), q, digits, false)?];
    poch_ratio(&num, &den, digits)
}

/// Big q-Jacobi weight `(qx/c;q)_∞(-qx/d;q)_∞ / ((qαx/c;q)_∞(-qβx/d;q)_∞)`.
pub fn weight_b(x: &Rational, q: &Rational, alpha: &Rational, beta: &Rational, c: &Rational, d: &Rational, digits: usize) -> Result<Approx> {
    let qx = q * x;
    let num = [poch_inf(&(&qx / c), q, digits, false)?, poch_inf(&(-(&qx / d)), q, digits, false)?];
    let den = [poch_inf(&(alpha * &qx / c), q, digits, false)?, poch_inf(&(-(beta * &qx / d)), q, digits, false)?];
    poch_ratio(&num, &den, digits)
}

/// The smallest `k ≥ 1` with `t = q^k`, if any below 64.
pub fn integral_k(pt: &ParamPoint) -> Option<u32> {
    let mut p = pt.q.clone();
    for k in 1..64 {
        if p == pt.t {
            return Some(k);
        }
        p *= &pt.q;
    }
    None
}

/// The measure `Δ_q^{(k)}(x) ∏ w(x_l) d_qx_l` on `[a,1]^n` (family U) or `[1,∞)^n` (family V).
#[derive(Debug)]
pub struct QMeasure {
    pub family: Family,
    pub pt: ParamPoint,
    pub k: u32,
    pub nterms: usize,
    pub digits: usize,
    /// Per branch, `(x, w(x) dx)` at every lattice point.
    nodes: Vec<Vec<(BigFloat, BigFloat)>>,
    weight_err: BigFloat,
    moments: RwLock<Vec<Approx>>,
}

impl QMeasure {
    /// Default truncation: `4 * digits` lattice points per branch.
    pub fn new(family: Family, pt: &ParamPoint, digits: usize) -> Result<Self> {
        Self::with_nterms(family, pt, 4 * digits, digits)
    }

    pub fn with_nterms(family: Family, pt: &ParamPoint, nterms: usize, digits: usize) -> Result<Self> {
        pt.check_exact()?;
        if !(pt.q.is_positive() && pt.q < Rational::one()) {
            return Err(Error::InvalidParameter("0 < q < 1 required".into()));
        }
        let k = integral_k(pt).ok_or_else(|| Error::InvalidParameter("t = q^k with integer k ≥ 1 required".into()))?;
        let domain = match family {
            Family::U => {
                if !pt.a.is_negative() {
                    return Err(Error::InvalidParameter("a < 0 required for the [a,1] measure".into()));
                }
                Domain::Finite
            }
            Family::V => {
                if pt.a.is_zero() {
                    return Err(Error::InvalidParameter("a must be nonzero".into()));
                }
                Domain::Infinite
            }
        };
        let mut weight_err = BigFloat::zero(digits);
        let mut nodes = Vec::new();
        for branch in lattice(domain, pt, nterms) {
            let mut b = Vec::with_capacity(branch.len());
            for (x, dx) in &branch {
                let w = match family {
                    Family::U => weight_u(x, pt, digits)?,
                    Family::V => weight_v(x, pt, digits)?,
                };
                let dxf = BigFloat::from_rational(dx, digits);
                weight_err = weight_err.max(rel(&w));
                b.push((BigFloat::from_rational(x, digits), &w.value * &dxf));
            }
            nodes.push(b);
        }
        Ok(QMeasure { family, pt: pt.clone(), k, nterms, digits, nodes, weight_err, moments: RwLock::new(Vec::new()) })
    }

    pub fn nvars(&self) -> usize {
        self.pt.nvars
    }

    /// `∫ x^j w(x) d_qx` for `j ≤ jmax`.
    pub fn moments(&self, jmax: usize) -> Result<Vec<Approx>> {
        {
            let m = self.moments.read().unwrap();
            if m.len() > jmax {
                return Ok(m[..=jmax].to_vec());
            }
        }
        let mut m = self.moments.write().unwrap();
        for j in m.len()..=jmax {
            let mut value = BigFloat::zero(self.digits);
            let mut err = BigFloat::zero(self.digits);
            for branch in &self.nodes {
                let terms: Vec<BigFloat> = branch.iter().map(|(x, w)| w * &x.powi(j as i64)).collect();
                let s = branch_sum(&terms, self.digits)?;
                let abs_sum = terms.iter().fold(BigFloat::zero(self.digits), |acc, t| acc + &t.abs());
                value += &s.value;
                err += &(&s.err + &(&abs_sum * &self.weight_err));
            }
            m.push(Approx { value, err });
        }
        Ok(m[..=jmax].to_vec())
    }

    /// One-dimensional integral `∫ f(x) w(x) d_qx` over the stored lattice.
    pub fn integrate_fn<F: Fn(&BigFloat) -> BigFloat>(&self, f: F) -> Result<Approx> {
        let mut value = BigFloat::zero(self.digits);
        let mut err = BigFloat::zero(self.digits);
        for branch in &self.nodes {
            let terms: Vec<BigFloat> = branch.iter().map(|(x, w)| w * &f(x)).collect();
            let s = branch_sum(&terms, self.digits)?;
            let abs_sum = terms.iter().fold(BigFloat::zero(self.digits), |acc, t| acc + &t.abs());
            value += &s.value;
            err += &(&s.err + &(&abs_sum * &self.weight_err));
        }
        Ok(Approx { value, err })
    }

    /// `∫ h(x) ∏ w(x_l) d_qx_l` for a polynomial `h`, without the `Δ` factor.
    pub fn integrate_product(&self, h: &MPoly) -> Result<Approx> {
        let d = h.terms().flat_map(|(m, _)| m.0.iter().copied()).max().unwrap_or(0) as usize;
        let mom = self.moments(d)?;
        let digits = self.digits;
        let mut value = BigFloat::zero(digits);
        let mut err = BigFloat::zero(digits);
        for (m, c) in h.terms() {
            let cf = BigFloat::from_rational(c, digits);
            let mut v = cf.clone();
            let mut upper = cf.abs();
            let mut lower = cf.abs();
            for &e in &m.0 {
                let mj = &mom[e as usize];
                v = &v * &mj.value;
                upper = &upper * &(&mj.value.abs() + &mj.err);
                lower = &lower * &mj.value.abs();
            }
            value += &v;
            err += &(&upper - &lower);
        }
        Ok(Approx { value, err })
    }

    /// `∫ h dμ` including `Δ_q^{(k)}`.
    pub fn integrate(&self, h: &MPoly) -> Result<Approx> {
        let delta = delta_k(self.nvars(), self.k, &self.pt.q);
        self.integrate_product(&(h * &delta))
    }
}

/// `Δ_q^{(k)}(x) = ∏_{p=-(k-1)}^{k} ∏_{i<j} (x_i - q^p x_j)`.
pub fn delta_k(n: usize, k: u32, q: &Rational) -> MPoly {
    let mut d = MPoly::one(n);
    for p in -(k as i64 - 1)..=k as i64 {
        let qp = pow(q, p);
        for i in 0..n {
            for j in i + 1..n {
                d = &d * &(&MPoly::var(n, i) - &MPoly::var(n, j).scale(&qp));
            }
        }
    }
    d
}

/// `⟨f|g⟩ = ∫ f g dμ` for symmetric `f`, `g`.
pub fn inner_product(f: &MPoly, g: &MPoly, meas: &QMeasure) -> Result<Approx> {
    if !f.is_symmetric() || !g.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    meas.integrate(&(f * g))
}

/// The same sum evaluated point by point over the product lattice.
pub fn inner_product_direct(f: &MPoly, g: &MPoly, meas: &QMeasure) -> Result<BigFloat> {
    if !f.is_symmetric() || !g.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let n = meas.nvars();
    let h = &(f * g) * &delta_k(n, meas.k, &meas.pt.q);
    let pts: Vec<&(BigFloat, BigFloat)> = meas.nodes.iter().flatten().collect();
    let digits = meas.digits;
    let mut acc = BigFloat::zero(digits);
    let mut idx = vec![0usize; n];
    loop {
        let x: Vec<BigFloat> = idx.iter().map(|&i| pts[i].0.clone()).collect();
        let mut w = h.eval_float(&x, digits);
        for &i in &idx {
            w = &w * &pts[i].1;
        }
        acc += &w;
        let mut l = 0;
        loop {
            if l == n {
                return Ok(acc);
            }
            idx[l] += 1;
            if idx[l] < pts.len() {
                break;
            }
            idx[l] = 0;
            l += 1;
        }
    }
}

fn check_k(pt: &ParamPoint, k: u32) -> Result<()> {
    if pow(&pt.q, k as i64) != pt.t || k == 0 {
        return Err(Error::InvalidParameter(format!("t must equal q^{k}")));
    }
    Ok(())
}

fn binom2(n: usize) -> i64 {
    (n * n.saturating_sub(1) / 2) as i64
}

fn binom3(n: usize) -> i64 {
    (n * n.saturating_sub(1) * n.saturating_sub(2) / 6) as i64
}

/// Closed form of `∫ dμ` for `t = q^k`. The `t` exponents are converted to powers of `q`.
pub fn norm0_closed(family: Family, pt: &ParamPoint, k: u32) -> Result<Rational> {
    check_k(pt, k)?;
    let n = pt.nvars;
    let q = &pt.q;
    let kk = k as i64;
    let mut prod = Rational::one();
    for l in 1..=n {
        prod *= qpochhammer(q, q, k as usize * l) / qpochhammer(q, q, k as usize);
    }
    let base = pow(&(Rational::one() - q), n as i64) * prod;
    let e = kk * binom2(n);
    Ok(match family {
        // t^{k C(n,3) - (k-1)/2 C(n,2)} = q^{k^2 C(n,3) - k(k-1)/2 C(n,2)}
        Family::U => base * pow(&-pt.a.clone(), e) * pow(q, kk * kk * binom3(n) - kk * (kk - 1) / 2 * binom2(n)),
        Family::V => base * pow(&pt.a, e) * pow(&pt.t, -2 * kk * binom3(n) - kk * binom2(n)),
    })
}

/// Closed form of `⟨U_λ|U_λ⟩` (family U) or `⟨V_λ|V_λ⟩` (family V).
pub fn norm_lambda_closed(lambda: &Partition, family: Family, pt: &ParamPoint, k: u32) -> Result<Rational> {
    let n = pt.nvars as i64;
    let size = lambda.size() as i64;
    let bl = lambda.b_stat() as i64;
    let bc = lambda.conjugate().b_stat() as i64;
    let common = hook_prime(lambda, pt) * principal_specialization(lambda, pt)? * norm0_closed(family, pt, k)?;
    let (q, t) = (&pt.q, &pt.t);
    Ok(match family {
        Family::U => pow(&(-(&pt.a * pow(t, n - 1))), size) * pow(q, bc) * pow(t, -2 * bl) * common,
        Family::V => pow(&(&pt.a / q * pow(t, -2 * (n - 1))), size) * pow(q, -2 * bc) * pow(t, bl) * common,
    })
}

/// Moment functional of the one-variable measure normalised to total mass `1 - q`, from the
/// three-term recurrence of `U_n` (family U) or `V_n` (family V): `x^j` is expanded in the
/// orthogonal basis and the constant coefficient read off.
pub fn exact_moments(family: Family, pt: &ParamPoint, jmax: usize) -> Vec<Rational> {
    let q = match family {
        Family::U => pt.q.clone(),
        Family::V => pt.q.recip(),
    };
    let a = &pt.a;
    let one = Rational::one();
    let b = |n: usize| (&one + a) * pow(&q, n as i64);
    let c = |n: usize| -(a * pow(&q, n as i64 - 1) * (&one - pow(&q, n as i64)));
    let mut coeffs = vec![one.clone()];
    let mut out = Vec::with_capacity(jmax + 1);
    let mass = &one - &pt.q;
    for _ in 0..=jmax {
        out.push(&coeffs[0] * &mass);
        let mut next = vec![Rational::zero(); coeffs.len() + 1];
        for (n, cn) in coeffs.iter().enumerate() {
            next[n + 1] += cn;
            next[n] += &b(n) * cn;
            if n >= 1 {
                next[n - 1] += &c(n) * cn;
            }
        }
        coeffs = next;
    }
    out
}

/// Exact `∫ h dμ` with the moments of [`exact_moments`].
pub fn exact_integral(h: &MPoly, family: Family, pt: &ParamPoint, k: u32) -> Rational {
    let h = h * &delta_k(pt.nvars, k, &pt.q);
    let d = h.terms().flat_map(|(m, _)| m.0.iter().copied()).max().unwrap_or(0) as usize;
    let mom = exact_moments(family, pt, d);
    let mut acc = Rational::zero();
    for (m, c) in h.terms() {
        let mut v = c.clone();
        for &e in &m.0 {
            v *= &mom[e as usize];
        }
        acc += v;
    }
    acc
}

// ---- reports ------------------------------------------------------------------------------

/// Floor `10^{-digits/2}` for relative comparisons.
pub fn floor(digits: usize) -> BigFloat {
    BigFloat::from_i64(10, digits).powi(-(digits as i64 / 2))
}

fn tol(exp: i64, digits: usize) -> BigFloat {
    BigFloat::from_i64(10, digits).powi(-exp)
}

/// Numeric report where the tail estimate must itself be within tolerance; otherwise the check
/// is declared non-convergent.
fn numeric_report(check: &str, params: Value, lhs: &Approx, rhs: &BigFloat, tol: &BigFloat, floor: &BigFloat) -> CheckReport {
    let scale = lhs.value.abs().max(rhs.abs()).max(floor.clone());
    let budget = tol * &scale;
    let mut r = CheckReport::numeric(check, params, &lhs.value, rhs, &lhs.err, tol, floor);
    if lhs.err > budget {
        r.pass = false;
        r = r.with_detail(json!("declared non-convergence: tail estimate exceeds the tolerance budget"));
    }
    r
}

fn meas_params(meas: &QMeasure) -> Value {
    json!({
        "family": meas.family,
        "pt": meas.pt.to_json(),
        "k": meas.k,
        "nterms": meas.nterms,
        "digits": meas.digits,
    })
}

/// `∫ w_U U_m U_n d_qx = (1-q)(-a)^n q^{n(n-1)/2}(q;q)_n δ_{mn}` for `m, n ≤ nmax`, one variable.
pub fn one_variable_orthogonality(pt: &ParamPoint, nmax: usize, digits: usize, tol_exp: i64) -> Vec<CheckReport> {
    let pt = pt.with_nvars(1);
    let params = json!({"pt": pt.to_json(), "nmax": nmax, "digits": digits});
    let run = || -> Result<Vec<CheckReport>> {
        let meas = QMeasure::new(Family::U, &pt, digits)?;
        let us: Vec<_> = (0..=nmax).map(|m| u1(m, &pt)).collect();
        let norm = |m: usize| {
            (Rational::one() - &pt.q)
                * pow(&-pt.a.clone(), m as i64)
                * pow(&pt.q, binom2(m))
                * qpochhammer(&pt.q, &pt.q, m)
        };
        let mut out = Vec::new();
        for m in 0..=nmax {
            for n in m..=nmax {
                let v = meas.integrate_fn(|x| &us[m].eval_float(x) * &us[n].eval_float(x))?;
                let p = json!({"pt": pt.to_json(), "m": m, "n": n});
                let expect = if m == n { norm(m) } else { Rational::zero() };
                let scale = BigFloat::from_rational(&(norm(m) * norm(n)), digits).abs().sqrt();
                out.push(numeric_report(
                    "one-variable orthogonality",
                    p,
                    &v,
                    &BigFloat::from_rational(&expect, digits),
                    &tol(tol_exp, digits),
                    &scale,
                ));
            }
        }
        Ok(out)
    };
    crate::report::or_failure("one-variable orthogonality", params, run())
}

/// `⟨1|1⟩` against the closed form.
pub fn mehta_check(meas: &QMeasure, tol_exp: i64) -> CheckReport {
    let params = meas_params(meas);
    let run = || -> Result<CheckReport> {
        let n = meas.nvars();
        let v = inner_product(&MPoly::one(n), &MPoly::one(n), meas)?;
        let c = norm0_closed(meas.family, &meas.pt, meas.k)?;
        Ok(numeric_report("normalization constant", params.clone(), &v, &BigFloat::from_rational(&c, meas.digits), &tol(tol_exp, meas.digits), &floor(meas.digits)))
    };
    run().unwrap_or_else(|e| CheckReport::failure("normalization constant", params.clone(), e.to_string()))
}

fn family_polys(meas: &QMeasure, degmax: u32) -> Result<Vec<(Partition, MPoly)>> {
    partitions_up_to(degmax, meas.nvars())
        .into_iter()
        .map(|k| {
            let p = match meas.family {
                Family::U => asc_u_eigen(&k, &meas.pt)?.poly,
                Family::V => asc_v(&k, &meas.pt)?.poly,
            };
            Ok((k, p))
        })
        .collect()
}

/// Gram matrix of `{U_κ}` (or `{V_κ}`) for `|κ| ≤ degmax`: off-diagonal entries against the
/// geometric mean of the diagonals at `10^{-off_exp}`, diagonals against the closed-form norms
/// at `10^{-diag_exp}`. The first report carries the matrix.
pub fn orthogonality_suite(meas: &QMeasure, degmax: u32, off_exp: i64, diag_exp: i64) -> Vec<CheckReport> {
    let params = json!({"measure": meas_params(meas), "degmax": degmax});
    let run = || -> Result<Vec<CheckReport>> {
        let digits = meas.digits;
        let polys = family_polys(meas, degmax)?;
        let m = polys.len();
        let mut g = vec![vec![BigFloat::zero(digits); m]; m];
        let mut gerr = vec![vec![BigFloat::zero(digits); m]; m];
        for i in 0..m {
            for j in i..m {
                let v = inner_product(&polys[i].1, &polys[j].1, meas)?;
                g[i][j] = v.value.clone();
                g[j][i] = v.value;
                gerr[i][j] = v.err.clone();
                gerr[j][i] = v.err;
            }
        }
        let matrix: Vec<Vec<String>> = g.iter().map(|r| r.iter().map(|v| v.to_sci(12)).collect()).collect();
        let labels: Vec<String> = polys.iter().map(|(k, _)| k.to_string()).collect();
        let mut out = vec![CheckReport::boolean("Gram matrix", params.clone(), true, json!({"basis": labels, "gram": matrix}))];
        for i in 0..m {
            let (ki, _) = &polys[i];
            let closed = norm_lambda_closed(ki, meas.family, &meas.pt, meas.k)?;
            let p = json!({"measure": meas_params(meas), "kappa": ki.to_json()});
            let a = Approx { value: g[i][i].clone(), err: gerr[i][i].clone() };
            out.push(numeric_report("diagonal = closed-form norm", p, &a, &BigFloat::from_rational(&closed, digits), &tol(diag_exp, digits), &floor(digits)));
            for j in i + 1..m {
                let scale = (&g[i][i] * &g[j][j]).abs().sqrt();
                let p = json!({"measure": meas_params(meas), "kappa": ki.to_json(), "sigma": polys[j].0.to_json()});
                let a = Approx { value: g[i][j].clone(), err: gerr[i][j].clone() };
                out.push(numeric_report("off-diagonal vanishes", p, &a, &BigFloat::zero(digits), &tol(off_exp, digits), &scale));
            }
        }
        Ok(out)
    };
    crate::report::or_failure("orthogonality", params.clone(), run())
}

/// `⟨𝓗f|g⟩ = ⟨f|𝓗g⟩` over the monomial symmetric basis of degree `≤ degmax`.
pub fn hermiticity_check(meas: &QMeasure, degmax: u32, tol_exp: i64) -> Vec<CheckReport> {
    let params = json!({"measure": meas_params(meas), "degmax": degmax});
    let run = || -> Result<Vec<CheckReport>> {
        let digits = meas.digits;
        let h = h_form1(&meas.pt);
        let basis = symmetric_basis(meas.nvars(), degmax);
        let images: Vec<MPoly> = basis.iter().map(|(_, f)| h.apply(f)).collect::<Result<_>>()?;
        let mut out = Vec::new();
        for i in 0..basis.len() {
            for j in i..basis.len() {
                let l = inner_product(&images[i], &basis[j].1, meas)?;
                let r = inner_product(&basis[i].1, &images[j], meas)?;
                let scale = &(&l.value.abs() + &r.value.abs()) + &BigFloat::one(digits);
                let p = json!({"measure": meas_params(meas), "f": basis[i].0.to_json(), "g": basis[j].0.to_json()});
                let a = Approx { value: l.value, err: &l.err + &r.err };
                out.push(numeric_report("eigenoperator is Hermitian", p, &a, &r.value, &tol(tol_exp, digits), &scale));
            }
        }
        Ok(out)
    };
    crate::report::or_failure("hermiticity", params.clone(), run())
}

/// With `a = -q^p`: the `[a,1]` moment functional of `w_U`, continued to base `1/q`, equals the
/// `[1,∞)` lattice sum of `w_V`. The left side is the exact moment (a rational function of `q`)
/// evaluated at `1/q` and divided by `1 - 1/q`; the right side is `Σ w_V(q^{-m}) f(q^{-m}) q^{-m}`.
pub fn uv_inversion_check(q: &Rational, p_exp: u32, nterms: usize, digits: usize, tol_exp: i64) -> Vec<CheckReport> {
    let a = -pow(q, p_exp as i64);
    let pt = ParamPoint::new(q.clone(), q.clone(), a, 1);
    let params = json!({"pt": pt.to_json(), "p": p_exp});
    let run = || -> Result<Vec<CheckReport>> {
        let inv = pt.inverted();
        let lhs = exact_moments(Family::U, &inv, 2);
        let one = Rational::one();
        let mut out = Vec::new();
        for (j, l) in lhs.iter().enumerate() {
            let l = l / (&one - &inv.q);
            let f = |x: &Rational| -> Result<BigFloat> {
                let w = weight_v(x, &pt, digits)?;
                Ok(&w.value * &BigFloat::from_rational(&pow(x, j as i64), digits))
            };
            let r = jackson_1d(f, &pt, Domain::Infinite, nterms, digits)?;
            let r = Approx { value: &r.value / &BigFloat::from_rational(&(&one - q), digits), err: &r.err / &BigFloat::from_rational(&(&one - q), digits) };
            let p = json!({"pt": pt.to_json(), "p": p_exp, "f": format!("x^{j}")});
            out.push(numeric_report("U to V inversion", p, &r, &BigFloat::from_rational(&l, digits), &tol(tol_exp, digits), &floor(digits)));
        }
        Ok(out)
    };
    crate::report::or_failure("U to V inversion", params.clone(), run())
}

/// At `t = q`: `∫ f ∏w ∏_{i<j}(x_i-x_j)(x_i-qx_j) = ([n]_q!/n!) ∫ f ∏w ∏_{i<j}(x_i-x_j)^2`.
pub fn kadell_check(meas: &QMeasure, degmax: u32, tol_exp: i64) -> Vec<CheckReport> {
    let params = json!({"measure": meas_params(meas), "degmax": degmax});
    let run = || -> Result<Vec<CheckReport>> {
        if meas.k != 1 {
            return Err(Error::InvalidParameter("requires t = q".into()));
        }
        let n = meas.nvars();
        let digits = meas.digits;
        let vdm = crate::algebra::symmetric::vandermonde(n);
        let vdm2 = &vdm * &vdm;
        let mut nfact = Rational::one();
        for i in 1..=n {
            nfact *= int(i as i64);
        }
        let factor = BigFloat::from_rational(&(qfactorial(n, &meas.pt.q) / nfact), digits);
        let mut out = Vec::new();
        for (lambda, f) in symmetric_basis(n, degmax) {
            let l = meas.integrate(&f)?;
            let r = meas.integrate_product(&(&f * &vdm2))?;
            let p = json!({"measure": meas_params(meas), "f": lambda.to_json()});
            let a = Approx { value: l.value, err: &l.err + &(&r.err * &factor.abs()) };
            out.push(numeric_report("symmetrisation of the q-Vandermonde", p, &a, &(&r.value * &factor), &tol(tol_exp, digits), &floor(digits)));
        }
        Ok(out)
    };
    crate::report::or_failure("symmetrisation", params.clone(), run())
}

/// `ρ_a(y) = (y;q)_∞(ay;q)_∞`.
pub fn rho_num(y: &Rational, pt: &ParamPoint, digits: usize) -> Result<Approx> {
    poch_ratio(&[poch_inf(y, &pt.q, digits, false)?, poch_inf(&(&pt.a * y), &pt.q, digits, false)?], &[], digits)
}

/// Bound on `∫ |Δ| ∏|w| |d_qx|`, using `|x_l| ≤ R = max(1, |a|)` on the lattice.
fn abs_mass_bound(meas: &QMeasure) -> Result<BigFloat> {
    let digits = meas.digits;
    let one = BigFloat::one(digits);
    let mass = meas.integrate_fn(|_| one.clone())?;
    let abs_mass = {
        let mut acc = BigFloat::zero(digits);
        for branch in &meas.nodes {
            for (_, w) in branch {
                acc += &w.abs();
            }
        }
        &acc + &mass.err
    };
    let n = meas.nvars();
    let r = Rational::one().max(pt_abs(&meas.pt.a));
    let mut dbound = Rational::one();
    for p in -(meas.k as i64 - 1)..=meas.k as i64 {
        let f = &r * (Rational::one() + pow(&meas.pt.q, p));
        dbound *= pow(&f, binom2(n));
    }
    Ok(&BigFloat::from_rational(&dbound, digits) * &abs_mass.powi(n as i64))
}

fn pt_abs(r: &Rational) -> Rational {
    r.abs()
}

/// Supremum over the lattice box `|x_l| ≤ R` of the truncated kernel tail and of the full
/// majorant, for kernel points `y`.
fn kernel_bounds(kind: KernelKind, y: &[Rational], meas: &QMeasure, degmax: u32) -> Result<(BigFloat, BigFloat)> {
    let digits = meas.digits;
    let n = meas.nvars();
    let r = BigFloat::from_rational(&Rational::one().max(pt_abs(&meas.pt.a)), digits);
    let xs = vec![r; n];
    let yf: Vec<BigFloat> = y.iter().map(|v| BigFloat::from_rational(v, digits)).collect();
    let tail = majorant_tail(kind, &xs, &yf, &meas.pt, degmax, digits)?;
    let full = majorant_tail(kind, &xs, &yf, &meas.pt, 0, digits)? + BigFloat::one(digits);
    Ok((tail, full))
}

/// Numeric checks of the kernel integral representations on `[a,1]^n`: for every `κ` with
/// `|κ| ≤ kappa_deg` the ones with `U_κ` and with `P_κ`, and the product of two `₀F₀` kernels.
/// Both sides are normalised so that `κ = ()`, `y = 0` reads `∫ dμ = 𝒩_0`.
/// Kernels are truncated at `kernel_deg`; the omitted part is bounded through the majorant
/// products and added to the error, and a budget above tolerance fails the check.
pub fn integral_representations(
    meas: &QMeasure,
    y: &[Rational],
    z: &[Rational],
    kernel_deg: u32,
    kappa_deg: u32,
    tol_exp: i64,
) -> Vec<CheckReport> {
    let params = json!({
        "measure": meas_params(meas),
        "y": y.iter().map(format_rational).collect::<Vec<_>>(),
        "z": z.iter().map(format_rational).collect::<Vec<_>>(),
        "kernel_deg": kernel_deg,
    });
    let run = || -> Result<Vec<CheckReport>> {
        if meas.family != Family::U {
            return Err(Error::InvalidParameter("representations are checked on the U measure".into()));
        }
        let pt = &meas.pt;
        let n = pt.nvars;
        let digits = meas.digits;
        let one = Rational::one();
        let n0 = norm0_closed(Family::U, pt, meas.k)?;
        let kern = TruncatedKernel::new(KernelKind::F00, pt, kernel_deg)?;
        let fy = kern.in_x(y);
        let fz = kern.in_x(z);
        let mass = abs_mass_bound(meas)?;
        let (ty, my) = kernel_bounds(KernelKind::F00, y, meas, kernel_deg)?;
        let (tz, mz) = kernel_bounds(KernelKind::F00, z, meas, kernel_deg)?;
        let rho_prod = |v: &[Rational]| -> Result<Approx> {
            let mut acc = Approx { value: BigFloat::one(digits), err: BigFloat::zero(digits) };
            for vi in v {
                let r = rho_num(vi, pt, digits)?;
                acc = poch_ratio(&[acc], &[r], digits)?;
            }
            Ok(acc)
        };
        let inv_rho_y = rho_prod(y)?;
        let inv_rho_z = rho_prod(z)?;
        let mut out = Vec::new();
        let tolf = tol(tol_exp, digits);
        for kappa in partitions_up_to(kappa_deg, n) {
            let p = json!({"measure": meas_params(meas), "kappa": kappa.to_json(), "y": y.iter().map(format_rational).collect::<Vec<_>>()});
            let u = asc_u_eigen(&kappa, pt)?.poly;
            let umax = BigFloat::from_rational(&poly_abs_bound(&u, &one.clone().max(pt_abs(&pt.a))), digits);
            let lhs = meas.integrate(&(&fy * &u))?;
            let lhs = Approx { value: lhs.value, err: &lhs.err + &(&(&ty * &umax) * &mass) };
            let size = kappa.size() as i64;
            let coef = n0.clone()
                * pow(&-(&pt.a * pow(&pt.t, n as i64 - 1)), size)
                * pow(&pt.q, kappa.conjugate().b_stat() as i64)
                * pow(&pt.t, -(kappa.b_stat() as i64))
                * crate::macdonald::macdonald_p(&kappa, pt)?.eval(y);
            let rhs = &BigFloat::from_rational(&coef, digits) * &inv_rho_y.value;
            out.push(numeric_report("kernel against U_kappa", p.clone(), &lhs, &rhs, &tolf, &floor(digits)));

            let pk = crate::macdonald::macdonald_p(&kappa, pt)?;
            let pmax = BigFloat::from_rational(&poly_abs_bound(&pk, &one.clone().max(pt_abs(&pt.a))), digits);
            let lhs = meas.integrate(&(&fz * &*pk))?;
            let lhs = Approx { value: lhs.value, err: &lhs.err + &(&(&tz * &pmax) * &mass) };
            let az: Vec<Rational> = z.iter().map(|v| &pt.a * v).collect();
            let coef = n0.clone()
                * pow(&-pow(&pt.t, n as i64 - 1), size)
                * pow(&pt.q, kappa.conjugate().b_stat() as i64)
                * pow(&pt.t, -(kappa.b_stat() as i64))
                * asc_v(&kappa, pt)?.poly.eval(&az);
            let rhs = &BigFloat::from_rational(&coef, digits) * &inv_rho_z.value;
            let p = json!({"measure": meas_params(meas), "kappa": kappa.to_json(), "z": z.iter().map(format_rational).collect::<Vec<_>>()});
            out.push(numeric_report("kernel against P_kappa", p, &lhs, &rhs, &tolf, &floor(digits)));
        }
        // two kernels
        let lhs = meas.integrate(&(&fy * &fz))?;
        let trunc_err = &(&(&(&ty * &mz) + &(&my * &tz)) + &(&ty * &tz)) * &mass;
        let lhs = Approx { value: lhs.value, err: &lhs.err + &trunc_err };
        let psi = TruncatedKernel::new(KernelKind::Psi00, pt, kernel_deg)?;
        let yf: Vec<BigFloat> = y.iter().map(|v| BigFloat::from_rational(v, digits)).collect();
        let atz: Vec<BigFloat> =
            z.iter().map(|v| BigFloat::from_rational(&(&pt.a * pow(&pt.t, n as i64 - 1) * v), digits)).collect();
        let psi_v = psi.eval(&yf, &atz, digits)?;
        let pref = &(&BigFloat::from_rational(&n0, digits) * &inv_rho_y.value) * &inv_rho_z.value;
        let rhs = &pref * &psi_v.value;
        let lhs = Approx { value: lhs.value, err: &lhs.err + &(&pref.abs() * &psi_v.err) };
        out.push(numeric_report("product of two kernels", params.clone(), &lhs, &rhs, &tolf, &floor(digits)));
        Ok(out)
    };
    crate::report::or_failure("integral representations", params.clone(), run())
}

/// `Σ |c_α| R^{|α|}`.
fn poly_abs_bound(p: &MPoly, r: &Rational) -> Rational {
    p.terms().map(|(m, c)| c.abs() * pow(r, m.degree() as i64)).sum()
}

/// The `[1,∞)` representations in one variable, with the kernels expanded termwise:
/// `∫ ₀ψ₀(y;x) V_m(x) dμ`, `∫ ₀ψ₀(y;x) x^m dμ` and `∫ ₀ψ₀(y;x)₀ψ₀(z;x) dμ`. The series in the
/// kernel degree is summed to `kernel_deg` with the tail estimated from its last ratio.
pub fn v_side_representations(pt: &ParamPoint, y: &Rational, z: &Rational, kernel_deg: usize, mmax: usize, digits: usize, tol_exp: i64) -> Vec<CheckReport> {
    let pt = pt.with_nvars(1);
    let params = json!({"pt": pt.to_json(), "y": format_rational(y), "z": format_rational(z)});
    let run = || -> Result<Vec<CheckReport>> {
        let meas = QMeasure::new(Family::V, &pt, digits)?;
        let q = &pt.q;
        let n0 = norm0_closed(Family::V, &pt, meas.k)?;
        let psi_c = |m: usize| pow(&int(-1), m as i64) * pow(q, binom2(m)) / qpochhammer(q, q, m);
        let mom = meas.moments(2 * kernel_deg + mmax)?;
        let integ = |poly: &[Rational]| -> Approx {
            let mut v = BigFloat::zero(digits);
            let mut e = BigFloat::zero(digits);
            for (j, c) in poly.iter().enumerate() {
                let cf = BigFloat::from_rational(c, digits);
                v += &(&cf * &mom[j].value);
                e += &(&cf.abs() * &mom[j].err);
            }
            Approx { value: v, err: e }
        };
        let series = |terms: Vec<Approx>| -> Result<Approx> {
            let vals: Vec<BigFloat> = terms.iter().map(|t| t.value.clone()).collect();
            let s = paired_sum(&vals, digits)?;
            let e = terms.iter().fold(s.err, |acc, t| acc + &t.err);
            Ok(Approx { value: s.value, err: e })
        };
        let rho_t = |v: &Rational| rho_num(v, &pt, digits);
        let mut out = Vec::new();
        let tolf = tol(tol_exp, digits);
        for m in 0..=mmax {
            let vm = v1(m, &pt)?;
            let terms: Vec<Approx> = (0..=kernel_deg)
                .map(|l| {
                    let mut poly = vec![Rational::zero(); l + vm.coeffs().len()];
                    for (i, c) in vm.coeffs().iter().enumerate() {
                        poly[l + i] += c * psi_c(l) * pow(y, l as i64);
                    }
                    integ(&poly)
                })
                .collect();
            let lhs = series(terms)?;
            let coef = &n0 * pow(&-(&pt.a / q), m as i64) * pow(q, -binom2(m)) * pow(y, m as i64);
            let rhs = &BigFloat::from_rational(&coef, digits) * &rho_t(y)?.value;
            let p = json!({"pt": pt.to_json(), "m": m, "y": format_rational(y)});
            out.push(numeric_report("kernel against V_m on [1,inf)", p, &lhs, &rhs, &tolf, &floor(digits)));

            let terms: Vec<Approx> = (0..=kernel_deg)
                .map(|l| {
                    let mut poly = vec![Rational::zero(); l + m + 1];
                    poly[l + m] = psi_c(l) * pow(z, l as i64);
                    integ(&poly)
                })
                .collect();
            let lhs = series(terms)?;
            // (1/q, 1/t) image of the U-side formula with P_κ; the kernel argument rescales by q
            let coef = &n0 * pow(&int(-1), m as i64) * pow(q, -binom2(m));
            let rhs = &(&BigFloat::from_rational(&coef, digits) * &rho_t(z)?.value)
                * &BigFloat::from_rational(&u1(m, &pt).eval(&(&pt.a * z / q)), digits);
            let p = json!({"pt": pt.to_json(), "m": m, "z": format_rational(z)});
            out.push(numeric_report("kernel against x^m on [1,inf)", p, &lhs, &rhs, &tolf, &floor(digits)));
        }
        // two kernels, summed along anti-diagonals l1 + l2 = s
        let terms: Vec<Approx> = (0..=kernel_deg)
            .map(|s| {
                let mut poly = vec![Rational::zero(); s + 1];
                for l1 in 0..=s {
                    poly[s] += psi_c(l1) * psi_c(s - l1) * pow(y, l1 as i64) * pow(z, (s - l1) as i64);
                }
                integ(&poly)
            })
            .collect();
        let lhs = series(terms)?;
        // ₀F₀(y; a q^{-1} z) in one variable is e_q(a y z / q)
        let arg = &pt.a / q * y * z;
        let mut ef = Rational::zero();
        let mut last = Rational::zero();
        for l in 0..=kernel_deg {
            last = pow(&arg, l as i64) / qpochhammer(q, q, l);
            ef += &last;
        }
        let rhs = &(&(&BigFloat::from_rational(&(n0 * ef), digits) * &rho_t(y)?.value) * &rho_t(z)?.value);
        let lhs = Approx { value: lhs.value, err: &lhs.err + &BigFloat::from_rational(&(last.abs() * int(2)), digits) };
        out.push(numeric_report("product of two kernels on [1,inf)", params.clone(), &lhs, rhs, &tolf, &floor(digits)));
        Ok(out)
    };
    crate::report::or_failure("V-side representations", params.clone(), run())
}

/// Closed-form and numeric checks of `𝒩_0(aq) = t^{n(n-1)/2} 𝒩_0(a)`, and of
/// `⟨∏(x_j - a)|1⟩ = 𝒩_0(aq)`.
pub fn scaling_checks(meas: &QMeasure, tol_exp: i64) -> Vec<CheckReport> {
    let params = meas_params(meas);
    let run = || -> Result<Vec<CheckReport>> {
        let pt = &meas.pt;
        let n = pt.nvars;
        let digits = meas.digits;
        let shifted = pt.with_a(&pt.a * &pt.q);
        let c0 = norm0_closed(Family::U, pt, meas.k)?;
        let c1 = norm0_closed(Family::U, &shifted, meas.k)?;
        let tn = pow(&pt.t, binom2(n));
        let mut out = vec![CheckReport::exact("scaling in a (closed form)", params.clone(), &c1, &(&tn * &c0))];
        let meas_s = QMeasure::with_nterms(Family::U, &shifted, meas.nterms, digits)?;
        let v0 = inner_product(&MPoly::one(n), &MPoly::one(n), meas)?;
        let v1 = inner_product(&MPoly::one(n), &MPoly::one(n), &meas_s)?;
        let tnf = BigFloat::from_rational(&tn, digits);
        let rhs = &tnf * &v0.value;
        let lhs = Approx { value: v1.value.clone(), err: &v1.err + &(&tnf * &v0.err) };
        out.push(numeric_report("scaling in a (lattice sums)", params.clone(), &lhs, &rhs, &tol(tol_exp, digits), &floor(digits)));
        let mut prod = MPoly::one(n);
        for j in 0..n {
            prod = &prod * &(&MPoly::var(n, j) - &MPoly::constant(n, pt.a.clone()));
        }
        let ins = inner_product(&prod, &MPoly::one(n), meas)?;
        out.push(numeric_report("insertion of prod(x_j - a)", params.clone(), &ins, &v1.value, &tol(tol_exp, digits), &floor(digits)));
        out.push(numeric_report("insertion of prod(x_j - a) (closed form)", params.clone(), &ins, &BigFloat::from_rational(&c1, digits), &tol(tol_exp, digits), &floor(digits)));
        Ok(out)
    };
    crate::report::or_failure("scaling in a", params.clone(), run())
}

/// Single lattice term at `x = t^δ`: `(1-q)^n t^{Σ(j-1)} ∏ w_U(t^{j-1}) Δ(t^δ)`.
pub fn asym_leading_term(pt: &ParamPoint, k: u32, digits: usize) -> Result<BigFloat> {
    let n = pt.nvars;
    let x: Vec<Rational> = (0..n).map(|j| pow(&pt.t, j as i64)).collect();
    let delta = delta_k(n, k, &pt.q).eval(&x);
    let mut acc = BigFloat::from_rational(&(pow(&(Rational::one() - &pt.q), n as i64) * pow(&pt.t, binom2(n)) * delta), digits);
    for xj in &x {
        acc = &acc * &weight_u(xj, pt, digits)?.value;
    }
    Ok(acc)
}

/// Limit of `(-a)^{-kn(n-1)/2} 𝒩_0(a)` as `a → 0` from the leading lattice term, using
/// `w_U(q^m) ~ (-a)^m q^{-m(m+1)/2} / (q;q)_m`.
pub fn asym_limit(pt: &ParamPoint, k: u32) -> Rational {
    let n = pt.nvars;
    let q = &pt.q;
    let x: Vec<Rational> = (0..n).map(|j| pow(&pt.t, j as i64)).collect();
    let mut acc = pow(&(Rational::one() - q), n as i64) * pow(&pt.t, binom2(n)) * delta_k(n, k, q).eval(&x);
    for j in 0..n {
        let m = (k as usize) * j;
        acc *= pow(q, -((m * (m + 1) / 2) as i64)) / qpochhammer(q, q, m);
    }
    acc
}

/// Relative error between `𝒩_0(a)` from the lattice sums and its leading term, along `a → 0^-`;
/// passes when it strictly decreases. The detail also compares [`asym_limit`] with the closed
/// form exactly.
pub fn asym_trend(q: &Rational, k: u32, n: usize, avals: &[Rational], digits: usize) -> CheckReport {
    let t = pow(q, k as i64);
    let params = json!({"q": format_rational(q), "k": k, "n": n, "a": avals.iter().map(format_rational).collect::<Vec<_>>()});
    let run = || -> Result<CheckReport> {
        let mut errs = Vec::new();
        for a in avals {
            let pt = ParamPoint::new(q.clone(), t.clone(), a.clone(), n);
            let meas = QMeasure::new(Family::U, &pt, digits)?;
            let v = inner_product(&MPoly::one(n), &MPoly::one(n), &meas)?;
            let lead = asym_leading_term(&pt, k, digits)?;
            errs.push(BigFloat::rel_err(&lead, &v.value, &floor(digits)));
        }
        let pt = ParamPoint::new(q.clone(), t.clone(), int(-1), n);
        let limit = asym_limit(&pt, k);
        let closed = norm0_closed(Family::U, &pt, k)?;
        let pass = errs.windows(2).all(|w| w[1] < w[0]) && limit == closed;
        Ok(CheckReport::boolean(
            "small-a asymptotics",
            params.clone(),
            pass,
            json!({
                "rel_errs": errs.iter().map(|e| e.to_sci(6)).collect::<Vec<_>>(),
                "limit": format_rational(&limit),
                "closed_form": format_rational(&closed),
            }),
        ))
    };
    run().unwrap_or_else(|e| CheckReport::failure("small-a asymptotics", params.clone(), e.to_string()))
}

/// `w_B` at `α = β = 0`, `c = 1`, `d = -a` against `w_U`. The two agree up to the
/// `x`-independent normalisation `(q;q)_∞(a;q)_∞(q/a;q)_∞` of `w_U`.
pub fn w_b_reduction_check(pt: &ParamPoint, xs: &[Rational], digits: usize, tol_exp: i64) -> Vec<CheckReport> {
    let params = json!({"pt": pt.to_json()});
    let run = || -> Result<Vec<CheckReport>> {
        let q = &pt.q;
        let zero = Rational::zero();
        let norm = poch_ratio(&[poch_inf(q, q, digits, false)?, poch_inf(&pt.a, q, digits, false)?, poch_inf(&(q / &pt.a), q, digits, false)?], &[], digits)?;
        let mut out = Vec::new();
        for x in xs {
            let wb = weight_b(x, q, &zero, &zero, &Rational::one(), &-pt.a.clone(), digits)?;
            let wu = weight_u(x, pt, digits)?;
            let rhs = &wu.value * &norm.value;
            let p = json!({"pt": pt.to_json(), "x": format_rational(x)});
            let err = &(&wb.err + &(&wu.err * &norm.value.abs())) + &(&norm.err * &wu.value.abs());
            out.push(numeric_report("big q-Jacobi weight reduction", p, &Approx { value: wb.value, err }, &rhs, &tol(tol_exp, digits), &floor(digits)));
        }
        Ok(out)
    };
    crate::report::or_failure("big q-Jacobi weight reduction", params.clone(), run())
}

/// At `t = q`: the determinant-based norm equals the closed-form norm exactly, and the Gram
/// diagonal numerically.
pub fn determinant_norm_checks(meas: &QMeasure, degmax: u32, tol_exp: i64) -> Vec<CheckReport> {
    let params = json!({"measure": meas_params(meas), "degmax": degmax});
    let run = || -> Result<Vec<CheckReport>> {
        if meas.k != 1 || meas.family != Family::U {
            return Err(Error::InvalidParameter("requires the U measure at t = q".into()));
        }
        let pt = &meas.pt;
        let mut out = Vec::new();
        for kappa in partitions_up_to(degmax, pt.nvars) {
            let p = json!({"measure": meas_params(meas), "kappa": kappa.to_json()});
            let s = determinant_norm(&kappa, pt);
            out.push(CheckReport::exact("determinant norm = closed-form norm", p.clone(), &s, &norm_lambda_closed(&kappa, Family::U, pt, 1)?));
            let u = asc_u_eigen(&kappa, pt)?.poly;
            let g = inner_product(&u, &u, meas)?;
            out.push(numeric_report("determinant norm = Gram diagonal", p, &g, &BigFloat::from_rational(&s, meas.digits), &tol(tol_exp, meas.digits), &floor(meas.digits)));
        }
        Ok(out)
    };
    crate::report::or_failure("determinant norm", params.clone(), run())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::elementary;
    use crate::algebra::rational::rat;
    use crate::report::{all_pass, first_failure};

    const D: usize = 40;

    fn assert_ok(reps: &[CheckReport]) {
        assert!(!reps.is_empty());
        assert!(all_pass(reps), "{:#?}", first_failure(reps));
    }

    fn close(a: &BigFloat, b: &Rational, exp: i64) {
        close_with_floor(a, b, exp, &floor(D));
    }

    fn close_with_floor(a: &BigFloat, b: &Rational, exp: i64, fl: &BigFloat) {
        let b = BigFloat::from_rational(b, D);
        assert!(BigFloat::rel_err(a, &b, fl) < tol(exp, D), "{} vs {}", a, b);
    }

    #[test]
    fn jackson_examples() {
        let pt = ParamPoint::new(rat(1, 2), rat(1, 2), int(-1), 1);
        let one = jackson_1d(|_| Ok(BigFloat::one(D)), &pt, Domain::Finite, 4 * D, D).unwrap();
        close(&one.value, &rat(2, 1), 30);
        let w = jackson_1d(|x| Ok(weight_u(x, &pt, D)?.value), &pt, Domain::Finite, 4 * D, D).unwrap();
        close(&w.value, &rat(1, 2), 30);
        let u1p = u1(1, &pt);
        let w = jackson_1d(
            |x| {
                let u = BigFloat::from_rational(&u1p.eval(x), D);
                Ok(&(&weight_u(x, &pt, D)?.value * &u) * &u)
            },
            &pt,
            Domain::Finite,
            4 * D,
            D,
        )
        .unwrap();
        close(&w.value, &rat(1, 4), 30);
        let pt = ParamPoint::new(rat(1, 3), rat(1, 3), rat(-1, 2), 1);
        let w = jackson_1d(|x| Ok(weight_u(x, &pt, D)?.value), &pt, Domain::Finite, 4 * D, D).unwrap();
        close(&w.value, &rat(2, 3), 30);
    }

    #[test]
    fn non_decaying_tail_is_reported() {
        let pt = ParamPoint::new(rat(1, 2), rat(1, 2), int(-1), 1);
        let r = jackson_1d(|x| Ok(BigFloat::from_rational(x, D)), &pt, Domain::Infinite, 30, D);
        assert!(matches!(r, Err(Error::NonDecayingTail(_))));
    }

    #[test]
    fn weight_v_dash_convention() {
        let pt = ParamPoint::new(rat(1, 2), rat(1, 2), int(-1), 1);
        let w = weight_v(&int(4), &pt, D).unwrap();
        assert!(!w.value.is_zero());
        // total mass 1 - q on [1, ∞)
        let m = jackson_1d(|x| Ok(weight_v(x, &pt, D)?.value), &pt, Domain::Infinite, 60, D).unwrap();
        close(&m.value, &rat(1, 2), 30);
    }

    #[test]
    fn moments_match_exact_functional() {
        for (fam, a) in [(Family::U, int(-1)), (Family::U, rat(-1, 2)), (Family::V, int(-1)), (Family::V, rat(1, 3))] {
            let pt = ParamPoint::new(rat(1, 2), rat(1, 2), a, 1);
            let meas = QMeasure::new(fam, &pt, D).unwrap();
            let num = meas.moments(8).unwrap();
            let ex = exact_moments(fam, &pt, 8);
            for (n, e) in num.iter().zip(&ex) {
                close_with_floor(&n.value, e, 30, &BigFloat::one(D));
            }
        }
    }

    #[test]
    fn closed_form_examples() {
        let pt = ParamPoint::new(rat(1, 2), rat(1, 2), int(-1), 2);
        assert_eq!(norm0_closed(Family::U, &pt, 1).unwrap(), rat(3, 16));
        assert_eq!(norm0_closed(Family::U, &pt.with_nvars(1), 1).unwrap(), rat(1, 2));
        assert!(norm0_closed(Family::U, &pt, 2).is_err());
        let p1 = ParamPoint::new(rat(1, 3), rat(1, 3), rat(-1, 2), 1);
        let n1 = norm_lambda_closed(&Partition::new(vec![1]), Family::U, &p1, 1).unwrap();
        assert_eq!(n1, rat(1, 2) * rat(2, 3) * rat(2, 3));
        assert_eq!(norm_lambda_closed(&Partition::empty(), Family::U, &pt, 1).unwrap(), rat(3, 16));
        for n in [2, 3] {
            let pt = ParamPoint::new(rat(1, 2), rat(1, 4), rat(-2, 3), n);
            let s = norm0_closed(Family::U, &pt.with_a(&pt.a * &pt.q), 2).unwrap();
            assert_eq!(s, pow(&pt.t, binom2(n)) * norm0_closed(Family::U, &pt, 2).unwrap());
        }
    }

    #[test]
    fn factorised_sum_equals_direct_sum() {
        let pt = ParamPoint::new(rat(1, 2), rat(1, 2), int(-1), 2);
        let meas = QMeasure::with_nterms(Family::U, &pt, 12, D).unwrap();
        let f = elementary(1, 2).unwrap();
        let a = inner_product(&f, &f, &meas).unwrap();
        let b = inner_product_direct(&f, &f, &meas).unwrap();
        assert!(BigFloat::rel_err(&a.value, &b, &floor(D)) < tol(30, D));
        assert_eq!(inner_product(&MPoly::var(2, 0), &f, &meas).unwrap_err(), Error::NotSymmetric);
    }

    #[test]
    fn exact_gram_matches_norms() {
        // exact moment functional: the Gram matrix is diagonal with the closed-form norms
        for (k, t) in [(1, rat(1, 3)), (2, rat(1, 9))] {
            let pt = ParamPoint::new(rat(1, 3), t, rat(-3, 2), 2);
            let polys: Vec<_> = partitions_up_to(3, 2).into_iter().map(|l| (l.clone(), asc_u_eigen(&l, &pt).unwrap().poly)).collect();
            for (i, (li, pi)) in polys.iter().enumerate() {
                for (lj, pj) in &polys[i..] {
                    let v = exact_integral(&(pi * pj), Family::U, &pt, k);
                    let expect = if li == lj { norm_lambda_closed(li, Family::U, &pt, k).unwrap() } else { Rational::zero() };
                    assert_eq!(v, expect, "{li} {lj} k={k}");
                }
            }
        }
        let pt = ParamPoint::new(rat(1, 3), rat(1, 3), rat(2, 5), 2);
        for l in partitions_up_to(2, 2) {
            let v = asc_v(&l, &pt).unwrap().poly;
            assert_eq!(exact_integral(&(&v * &v), Family::V, &pt, 1), norm_lambda_closed(&l, Family::V, &pt, 1).unwrap());
        }
    }

    #[test]
    fn one_variable() {
        assert_ok(&one_variable_orthogonality(&ParamPoint::new(rat(1, 2), rat(1, 2), rat(-1, 2), 1), 4, D, 20));
    }

    #[test]
    fn multivariable_numeric() {
        let pt = ParamPoint::new(rat(1, 2), rat(1, 2), int(-1), 2);
        let meas = QMeasure::new(Family::U, &pt, D).unwrap();
        assert!(mehta_check(&meas, 12).pass);
        assert_ok(&orthogonality_suite(&meas, 2, 15, 12));
        assert_ok(&hermiticity_check(&meas, 2, 12));
        assert_ok(&kadell_check(&meas, 2, 12));
        assert_ok(&scaling_checks(&meas, 12));
        assert_ok(&determinant_norm_checks(&meas, 2, 12));
        let vm = QMeasure::new(Family::V, &pt, D).unwrap();
        assert!(mehta_check(&vm, 12).pass);
        assert_ok(&orthogonality_suite(&vm, 2, 15, 12));
    }

    #[test]
    fn measure_preconditions() {
        let pt = ParamPoint::new(rat(1, 2), rat(1, 3), int(-1), 2);
        assert!(QMeasure::new(Family::U, &pt, 20).is_err());
        let pt = ParamPoint::new(rat(1, 2), rat(1, 2), int(1), 2);
        assert!(QMeasure::new(Family::U, &pt, 20).is_err());
    }

    #[test]
    fn inversion_between_u_and_v() {
        for p in [1, 2] {
            assert_ok(&uv_inversion_check(&rat(1, 2), p, 80, D, 12));
        }
    }

    #[test]
    fn representations() {
        let pt = ParamPoint::new(rat(1, 2), rat(1, 2), int(-1), 1);
        let meas = QMeasure::new(Family::U, &pt, D).unwrap();
        assert_ok(&integral_representations(&meas, &[rat(1, 10)], &[rat(1, 20)], 14, 2, 8));
        assert_ok(&v_side_representations(&pt, &rat(1, 10), &rat(1, 20), 12, 2, D, 8));
    }

    #[test]
    fn asymptotics_and_reduction() {
        let r = asym_trend(&rat(1, 2), 1, 2, &[rat(-1, 100), rat(-1, 1000), rat(-1, 10000)], D);
        assert!(r.pass, "{r:?}");
        let pt = ParamPoint::new(rat(1, 3), rat(1, 3), rat(-1, 2), 1);
        assert_ok(&w_b_reduction_check(&pt, &[int(1), rat(1, 9), rat(-1, 6), rat(2, 7)], D, 25));
    }
}
