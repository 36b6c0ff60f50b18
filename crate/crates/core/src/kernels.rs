//! Truncated hypergeometric kernels `₀F₀(x;y)` and `₀ψ₀(x;y)` in the Macdonald basis.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde_json::json;

use crate::algebra::rational::{pow, Rational};
use crate::algebra::{MPoly, Monomial, ParamPoint};
use crate::bigfloat::BigFloat;
use crate::error::{Error, Result};
use crate::macdonald::macdonald_p;
use crate::partition::{hook_prime, partitions_up_to, principal_specialization, Partition};
use crate::qseries::{big_e_q_neg_series, e_q_series, qpochhammer, qpochhammer_inf, series_dilate, Approx};
use crate::report::CheckReport;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KernelKind {
    /// `Σ t^{b(κ)}/(h'_κ P_κ(t^δ)) P_κ(x) P_κ(y)`.
    F00,
    /// `Σ (-1)^{|κ|} q^{b(κ')}/(h'_κ P_κ(t^δ)) P_κ(x) P_κ(y)`.
    Psi00,
}

/// `t^{b(κ)} / (h'_κ P_κ(t^δ))`.
pub fn f00_coefficient(kappa: &Partition, pt: &ParamPoint) -> Result<Rational> {
    Ok(pow(&pt.t, kappa.b_stat() as i64) / (hook_prime(kappa, pt) * principal_specialization(kappa, pt)?))
}

/// `(-1)^{|κ|} q^{b(κ')} / (h'_κ P_κ(t^δ))`.
pub fn psi00_coefficient(kappa: &Partition, pt: &ParamPoint) -> Result<Rational> {
    let sign = if kappa.size().is_multiple_of(2) { Rational::one() } else { -Rational::one() };
    Ok(sign * pow(&pt.q, kappa.conjugate().b_stat() as i64)
        / (hook_prime(kappa, pt) * principal_specialization(kappa, pt)?))
}

/// All terms `c_κ P_κ(x) P_κ(y)` with `|κ| ≤ degmax`.
#[derive(Clone, Debug)]
pub struct TruncatedKernel {
    pub kind: KernelKind,
    pub pt: ParamPoint,
    pub degmax: u32,
    pub terms: BTreeMap<Partition, (Rational, Arc<MPoly>)>,
}

impl TruncatedKernel {
    pub fn new(kind: KernelKind, pt: &ParamPoint, degmax: u32) -> Result<Self> {
        let mut terms = BTreeMap::new();
        for kappa in partitions_up_to(degmax, pt.nvars) {
            let c = match kind {
                KernelKind::F00 => f00_coefficient(&kappa, pt)?,
                KernelKind::Psi00 => psi00_coefficient(&kappa, pt)?,
            };
            let p = macdonald_p(&kappa, pt)?;
            terms.insert(kappa, (c, p));
        }
        Ok(TruncatedKernel { kind, pt: pt.clone(), degmax, terms })
    }

    /// The kernel as a polynomial in `x` at a rational point `y`.
    pub fn in_x(&self, y: &[Rational]) -> MPoly {
        let mut acc = MPoly::zero(self.pt.nvars);
        for (c, p) in self.terms.values() {
            acc = &acc + &p.scale(&(c * p.eval(y)));
        }
        acc
    }

    /// Numeric value with the majorant tail bound as error.
    pub fn eval(&self, x: &[BigFloat], y: &[BigFloat], digits: usize) -> Result<Approx> {
        let mut acc = BigFloat::zero(digits);
        for (c, p) in self.terms.values() {
            let term = &(&BigFloat::from_rational(c, digits) * &p.eval_float(x, digits)) * &p.eval_float(y, digits);
            acc += &term;
        }
        let err = majorant_tail(self.kind, x, y, &self.pt, self.degmax, digits)?;
        Ok(Approx { value: acc, err })
    }
}

/// `₀F₀` truncated at `|κ| ≤ degmax`, as a polynomial in `x` at rational `y`.
pub fn f00(y: &[Rational], pt: &ParamPoint, degmax: u32) -> Result<MPoly> {
    Ok(TruncatedKernel::new(KernelKind::F00, pt, degmax)?.in_x(y))
}

/// `₀ψ₀` truncated at `|κ| ≤ degmax`, as a polynomial in `x` at rational `y`.
pub fn psi00(y: &[Rational], pt: &ParamPoint, degmax: u32) -> Result<MPoly> {
    Ok(TruncatedKernel::new(KernelKind::Psi00, pt, degmax)?.in_x(y))
}

pub fn f00_numeric(x: &[BigFloat], y: &[BigFloat], pt: &ParamPoint, degmax: u32, digits: usize) -> Result<Approx> {
    TruncatedKernel::new(KernelKind::F00, pt, degmax)?.eval(x, y, digits)
}

pub fn psi00_numeric(x: &[BigFloat], y: &[BigFloat], pt: &ParamPoint, degmax: u32, digits: usize) -> Result<Approx> {
    TruncatedKernel::new(KernelKind::Psi00, pt, degmax)?.eval(x, y, digits)
}

/// Bound on the omitted terms `|κ| > degmax`. With `c = max_j t^{-(n-1)}|y_j|` the terms are
/// dominated termwise by those of `∏ 1/(c|x_i|;q)_∞` (resp. `∏ (-c|x_i|;q)_∞`), so the tail is
/// at most that product minus its own degree-`degmax` truncation. Requires `0 < q, t < 1` and, for
/// `₀F₀`, `c|x_i| < 1`.
pub fn majorant_tail(
    kind: KernelKind,
    x: &[BigFloat],
    y: &[BigFloat],
    pt: &ParamPoint,
    degmax: u32,
    digits: usize,
) -> Result<BigFloat> {
    pt.check_analytic()?;
    let n = pt.nvars;
    let tpow = BigFloat::from_rational(&pow(&pt.t, -(n as i64 - 1)), digits);
    let mut c = BigFloat::zero(digits);
    for yj in y {
        c = c.max(&yj.abs() * &tpow);
    }
    let q = BigFloat::from_rational(&pt.q, digits);
    let d = degmax as usize;
    let coeffs = match kind {
        KernelKind::F00 => e_q_series(&pt.q, d),
        KernelKind::Psi00 => series_dilate(&big_e_q_neg_series(&pt.q, d), &-Rational::one()),
    };
    // truncated product of one-variable series, in total degree
    let mut trunc = vec![BigFloat::zero(digits); d + 1];
    trunc[0] = BigFloat::one(digits);
    let mut full = BigFloat::one(digits);
    let mut err = BigFloat::zero(digits);
    for xi in x {
        let z = &c * &xi.abs();
        let mut s = Vec::with_capacity(d + 1);
        let mut zp = BigFloat::one(digits);
        for ck in &coeffs {
            s.push(&BigFloat::from_rational(ck, digits) * &zp);
            zp = &zp * &z;
        }
        let mut next = vec![BigFloat::zero(digits); d + 1];
        for (i, a) in trunc.iter().enumerate() {
            for (j, b) in s.iter().enumerate().take(d + 1 - i) {
                next[i + j] += &(a * b);
            }
        }
        trunc = next;
        let f = match kind {
            KernelKind::F00 => {
                if z >= BigFloat::one(digits) {
                    return Err(Error::Divergent(format!("majorant argument {} >= 1", z.to_sci(6))));
                }
                let p = qpochhammer_inf(&z, &q, digits)?;
                err = &err + &(&p.err / &(&p.value * &p.value));
                &BigFloat::one(digits) / &p.value
            }
            KernelKind::Psi00 => {
                let p = qpochhammer_inf(&-z, &q, digits)?;
                err = &err + &p.err;
                p.value
            }
        };
        full = &full * &f;
    }
    let mut tsum = BigFloat::zero(digits);
    for v in &trunc {
        tsum += v;
    }
    let tail = &full - &tsum;
    Ok(tail.abs().max(BigFloat::zero(digits)) + &err * &full.abs().max(BigFloat::one(digits)))
}

/// `₀F₀(x;y;1/q,1/t) = ₀ψ₀(x;t^{n-1}qy;q,t)`, compared term by term in `P_κ(x)P_κ(y)`.
pub fn inversion_relation_check(pt: &ParamPoint, degmax: u32) -> CheckReport {
    let n = pt.nvars;
    let params = json!({"pt": pt.to_json(), "degmax": degmax});
    let scale = pow(&pt.t, n as i64 - 1) * &pt.q;
    let run = || -> Result<CheckReport> {
        let inv = pt.inverted();
        for kappa in partitions_up_to(degmax, n) {
            let l = f00_coefficient(&kappa, &inv)?;
            let r = psi00_coefficient(&kappa, pt)? * pow(&scale, kappa.size() as i64);
            if l != r {
                return Ok(CheckReport::exact("kernel inversion relation", params.clone(), &l, &r)
                    .with_detail(json!({"first_mismatch": kappa.to_json()})));
            }
        }
        Ok(CheckReport::boolean("kernel inversion relation", params.clone(), true, json!({"partitions": partitions_up_to(degmax, n).len()})))
    };
    run().unwrap_or_else(|e| CheckReport::failure("kernel inversion relation", params.clone(), e.to_string()))
}

fn one_var_product(series: &[Rational], c: &Rational, pt: &ParamPoint, deg: u32) -> MPoly {
    let n = pt.nvars;
    let s = series_dilate(series, c);
    let mut acc = MPoly::one(n);
    for i in 0..n {
        let f = MPoly::from_terms(
            n,
            s.iter().enumerate().map(|(k, v)| {
                let mut e = vec![0; n];
                e[i] = k as u32;
                (e, v.clone())
            }),
        );
        acc = (&acc * &f).truncate(deg);
    }
    acc
}

/// The principal specialisations `₀F₀(x; c t^δ) = ∏ 1/(c x_i;q)_∞` and
/// `₀ψ₀(x; c t^δ) = ∏ (c x_i;q)_∞` through degree `degmax`, plus the one-variable forms.
pub fn specialization_checks(pt: &ParamPoint, c: &Rational, degmax: u32) -> Vec<CheckReport> {
    let n = pt.nvars;
    let params = json!({"pt": pt.to_json(), "c": crate::algebra::format_rational(c), "degmax": degmax});
    let run = || -> Result<Vec<CheckReport>> {
        let y: Vec<Rational> = (0..n).map(|i| c * pow(&pt.t, i as i64)).collect();
        let d = degmax as usize;
        let lf = f00(&y, pt, degmax)?;
        let rf = one_var_product(&e_q_series(&pt.q, d), c, pt, degmax);
        let lp = psi00(&y, pt, degmax)?;
        let rp = one_var_product(&big_e_q_neg_series(&pt.q, d), c, pt, degmax);
        let mut out = vec![
            CheckReport::exact_poly("F00 at c t^delta", params.clone(), &lf, &rf),
            CheckReport::exact_poly("psi00 at c t^delta", params.clone(), &lp, &rp),
        ];
        if n == 1 {
            // coefficients of (xy)^k: 1/(q;q)_k and (-1)^k q^{k(k-1)/2}/(q;q)_k
            let kf = TruncatedKernel::new(KernelKind::F00, pt, degmax)?;
            let kp = TruncatedKernel::new(KernelKind::Psi00, pt, degmax)?;
            for k in 0..=degmax {
                let kappa = Partition::new(vec![k]);
                let qq = qpochhammer(&pt.q, &pt.q, k as usize);
                let sign = if k % 2 == 0 { Rational::one() } else { -Rational::one() };
                let p = json!({"pt": pt.to_json(), "k": k});
                let ef = kf.terms[&kappa].0.clone();
                out.push(CheckReport::exact("one-variable F00 = e_q", p.clone(), &ef, &qq.recip()));
                let ep = kp.terms[&kappa].0.clone();
                let expect = sign * pow(&pt.q, (k as i64) * (k as i64 - 1) / 2) / qq;
                out.push(CheckReport::exact("one-variable psi00 = E_q", p, &ep, &expect));
            }
        }
        Ok(out)
    };
    crate::report::or_failure("kernel specializations", params.clone(), run())
}

/// Monomial coefficients of `P_κ` are positive for `|κ| ≤ degmax` (needs `0 < q, t < 1`).
pub fn positivity_check(pt: &ParamPoint, degmax: u32) -> CheckReport {
    let params = json!({"pt": pt.to_json(), "degmax": degmax});
    let mut bad = Vec::new();
    for kappa in partitions_up_to(degmax, pt.nvars) {
        match macdonald_p(&kappa, pt) {
            Ok(p) => {
                if p.terms().any(|(_, c)| *c <= Rational::zero()) {
                    bad.push(kappa.to_string());
                }
            }
            Err(e) => return CheckReport::failure("P coefficient positivity", params, e.to_string()),
        }
    }
    CheckReport::boolean("P coefficient positivity", params, bad.is_empty(), json!({"violations": bad}))
}

/// The majorant tail estimate at truncation `degmax` covers the actual change when the
/// truncation is raised to `degmax + extra`.
pub fn tail_bound_check(
    kind: KernelKind,
    x: &[Rational],
    y: &[Rational],
    pt: &ParamPoint,
    degmax: u32,
    extra: u32,
    digits: usize,
) -> CheckReport {
    let name = match kind {
        KernelKind::F00 => "F00 tail bound",
        KernelKind::Psi00 => "psi00 tail bound",
    };
    let params = json!({"pt": pt.to_json(), "degmax": degmax, "extra": extra});
    let run = || -> Result<CheckReport> {
        let xf: Vec<BigFloat> = x.iter().map(|v| BigFloat::from_rational(v, digits)).collect();
        let yf: Vec<BigFloat> = y.iter().map(|v| BigFloat::from_rational(v, digits)).collect();
        let big = TruncatedKernel::new(kind, pt, degmax + extra)?;
        let full = big.eval(&xf, &yf, digits)?;
        let mut small = big.clone();
        small.terms.retain(|k, _| k.size() <= degmax);
        small.degmax = degmax;
        let part = small.eval(&xf, &yf, digits)?;
        let diff = (&full.value - &part.value).abs();
        let pass = diff <= part.err;
        Ok(CheckReport::boolean(name, params.clone(), pass, json!({"observed": diff.to_sci(6), "bound": part.err.to_sci(6)})))
    };
    run().unwrap_or_else(|e| CheckReport::failure(name, params.clone(), e.to_string()))
}

/// Monomial `x^e` helper for tests and callers building kernels by hand.
pub fn monomial(n: usize, e: Vec<u32>) -> MPoly {
    MPoly::monomial(n, Monomial(e), Rational::one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{int, rat};
    use crate::report::{all_pass, first_failure};

    fn pt(n: usize) -> ParamPoint {
        ParamPoint::new(rat(1, 3), rat(1, 2), int(-1), n)
    }

    #[test]
    fn degree_zero_is_one() {
        let y = vec![rat(1, 5), rat(2, 7)];
        assert_eq!(f00(&y, &pt(2), 0).unwrap(), MPoly::one(2));
        assert_eq!(psi00(&y, &pt(2), 0).unwrap(), MPoly::one(2));
    }

    #[test]
    fn specializations() {
        for n in [1, 2, 3] {
            let reps = specialization_checks(&pt(n), &rat(2, 3), 4);
            assert!(all_pass(&reps), "{:?}", first_failure(&reps));
        }
    }

    #[test]
    fn inversion_relation() {
        for (n, d) in [(1, 5), (2, 4), (3, 3)] {
            let r = inversion_relation_check(&ParamPoint::new(rat(3, 7), rat(2, 5), int(0), n), d);
            assert!(r.pass, "{r:?}");
        }
        assert!(inversion_relation_check(&pt(2), 0).pass);
    }

    #[test]
    fn inversion_relation_polynomial() {
        // same relation on the assembled polynomials at a rational y
        let pt = ParamPoint::new(rat(3, 7), rat(2, 5), int(0), 2);
        let y = vec![rat(1, 3), rat(-1, 4)];
        let s = pow(&pt.t, 1) * &pt.q;
        let ys: Vec<Rational> = y.iter().map(|v| v * &s).collect();
        assert_eq!(f00(&y, &pt.inverted(), 4).unwrap(), psi00(&ys, &pt, 4).unwrap());
    }

    #[test]
    fn positivity() {
        for n in [2, 3] {
            assert!(positivity_check(&pt(n), 4).pass);
        }
    }

    #[test]
    fn tails_are_bounded() {
        let x = vec![rat(1, 2), rat(-1, 3)];
        let y = vec![rat(1, 10), rat(1, 20)];
        for kind in [KernelKind::F00, KernelKind::Psi00] {
            for d in [2, 4] {
                let r = tail_bound_check(kind, &x, &y, &pt(2), d, 4, 40);
                assert!(r.pass, "{r:?}");
            }
        }
    }

    #[test]
    fn numeric_matches_closed_form() {
        // F00(x; c t^δ) = ∏ 1/(c x_i;q)_∞ numerically, inside the reported error
        let pt = pt(2);
        let d = 40;
        let c = rat(1, 4);
        let x = [rat(1, 3), rat(-1, 5)];
        let xf: Vec<BigFloat> = x.iter().map(|v| BigFloat::from_rational(v, d)).collect();
        let yf: Vec<BigFloat> = (0..2).map(|i| BigFloat::from_rational(&(&c * pow(&pt.t, i)), d)).collect();
        let got = f00_numeric(&xf, &yf, &pt, 8, d).unwrap();
        let q = BigFloat::from_rational(&pt.q, d);
        let mut expect = BigFloat::one(d);
        for v in &x {
            let z = BigFloat::from_rational(&(&c * v), d);
            expect = &expect / &qpochhammer_inf(&z, &q, d).unwrap().value;
        }
        let diff = (&got.value - &expect).abs();
        assert!(diff <= got.err, "{} > {}", diff.to_sci(5), got.err.to_sci(5));
        assert!(got.err < BigFloat::parse("1e-6", d).unwrap());
    }
}
