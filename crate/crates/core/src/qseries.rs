//! One-variable q-series: Pochhammer symbols, q-exponentials, Gaussian binomials and the
//! one-variable Al-Salam & Carlitz polynomials.

use num_traits::{One, Signed, Zero};
use serde_json::json;

use crate::algebra::rational::{pow, qnumber, Rational};
use crate::algebra::{MPoly, ParamPoint};
use crate::bigfloat::BigFloat;
use crate::error::{Error, Result};
use crate::report::CheckReport;

/// Dense polynomial in one variable; `coeffs[k]` multiplies `x^k`. No trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QPoly1 {
    coeffs: Vec<Rational>,
}

impl QPoly1 {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        QPoly1 { coeffs }
    }

    pub fn zero() -> Self {
        QPoly1 { coeffs: vec![] }
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// `x - c`.
    pub fn linear(c: Rational) -> Self {
        Self::new(vec![-c, Rational::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &QPoly1) -> QPoly1 {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn sub(&self, other: &QPoly1) -> QPoly1 {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> QPoly1 {
        Self::new(self.coeffs.iter().map(|v| v * c).collect())
    }

    pub fn mul(&self, other: &QPoly1) -> QPoly1 {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_float(&self, x: &BigFloat) -> BigFloat {
        let d = x.digits();
        let mut acc = BigFloat::zero(d);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + &BigFloat::from_rational(c, d);
        }
        acc
    }

    /// `(f(x) - f(qx)) / ((1-q)x)`.
    pub fn q_derivative(&self, q: &Rational) -> QPoly1 {
        Self::new(
            (1..self.coeffs.len())
                .map(|m| &self.coeffs[m] * qnumber(m, q))
                .collect(),
        )
    }

    /// As a polynomial in variable `i` of an `nvars`-variable ring.
    pub fn to_mpoly_in(&self, nvars: usize, i: usize) -> MPoly {
        MPoly::from_terms(
            nvars,
            self.coeffs.iter().enumerate().map(|(k, c)| {
                let mut e = vec![0; nvars];
                e[i] = k as u32;
                (e, c.clone())
            }),
        )
    }

    pub fn to_mpoly(&self) -> MPoly {
        self.to_mpoly_in(1, 0)
    }
}

/// `(x;q)_n` for finite `n`, exactly.
pub fn qpochhammer(x: &Rational, q: &Rational, n: usize) -> Rational {
    let mut acc = Rational::one();
    let mut p = x.clone();
    for _ in 0..n {
        acc *= Rational::one() - &p;
        p *= q;
    }
    acc
}

/// A value with an absolute error bound.
#[derive(Clone, Debug)]
pub struct Approx {
    pub value: BigFloat,
    pub err: BigFloat,
}

/// Truncation threshold `10^-(digits+10)`.
pub fn tolerance(digits: usize) -> BigFloat {
    BigFloat::from_i64(10, digits).powi(-(digits as i64 + 10))
}

/// `(x;q)_∞` for `|q| < 1`. The product stops once `|x| q^m < tol`; the remaining factors
/// change the value by a relative amount at most `exp(|x| q^m / (1-q)) - 1`.
pub fn qpochhammer_inf(x: &BigFloat, q: &BigFloat, digits: usize) -> Result<Approx> {
    let one = BigFloat::one(digits);
    if q.abs() >= one {
        return Err(Error::Divergent("(x;q)_inf needs |q| < 1".into()));
    }
    let tol = tolerance(digits);
    let mut acc = one.clone();
    let mut p = x.clone();
    while p.abs() >= tol {
        acc = &acc * &(&one - &p);
        p = &p * q;
    }
    let rel = (&p.abs() / &(&one - &q.abs())).exp() - one;
    let err = &acc.abs() * &rel;
    Ok(Approx { value: acc, err })
}

/// `(x;q)_∞` for rational arguments.
pub fn qpochhammer_inf_rat(x: &Rational, q: &Rational, digits: usize) -> Result<Approx> {
    qpochhammer_inf(&BigFloat::from_rational(x, digits), &BigFloat::from_rational(q, digits), digits)
}

/// Coefficients of `e_q(z) = Σ z^n/(q;q)_n` through degree `deg`.
pub fn e_q_series(q: &Rational, deg: usize) -> Vec<Rational> {
    (0..=deg).map(|n| qpochhammer(q, q, n).recip()).collect()
}

/// Coefficients of `E_q(-z) = Σ (-1)^n q^{n(n-1)/2} z^n/(q;q)_n` through degree `deg`.
pub fn big_e_q_neg_series(q: &Rational, deg: usize) -> Vec<Rational> {
    (0..=deg)
        .map(|n| {
            let s = pow(q, (n * n.saturating_sub(1) / 2) as i64) / qpochhammer(q, q, n);
            if n % 2 == 1 {
                -s
            } else {
                s
            }
        })
        .collect()
}

pub fn series_mul(a: &[Rational], b: &[Rational], deg: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); deg + 1];
    for (i, x) in a.iter().enumerate().take(deg + 1) {
        for (j, y) in b.iter().enumerate().take(deg + 1 - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// Substitutes `z -> c z` in a series.
pub fn series_dilate(a: &[Rational], c: &Rational) -> Vec<Rational> {
    let mut p = Rational::one();
    a.iter()
        .map(|x| {
            let v = x * &p;
            p *= c;
            v
        })
        .collect()
}

/// `ρ_a(z;q) = E_q(-z) E_q(-az)` through degree `deg`.
pub fn rho_series(a: &Rational, q: &Rational, deg: usize) -> Vec<Rational> {
    let e = big_e_q_neg_series(q, deg);
    series_mul(&e, &series_dilate(&e, a), deg)
}

/// `1/ρ_a(z;q) = e_q(z) e_q(az)` through degree `deg`.
pub fn rho_inv_series(a: &Rational, q: &Rational, deg: usize) -> Vec<Rational> {
    let e = e_q_series(q, deg);
    series_mul(&e, &series_dilate(&e, a), deg)
}

/// `e_q(x)` summed numerically; requires `|x| < 1`, `0 < q < 1`.
pub fn e_q_num(x: &BigFloat, q: &BigFloat, digits: usize) -> Result<Approx> {
    let one = BigFloat::one(digits);
    if x.abs() >= one {
        return Err(Error::Divergent("e_q(x) needs |x| < 1".into()));
    }
    let tol = tolerance(digits);
    let mut term = one.clone();
    let mut acc = BigFloat::zero(digits);
    let mut qn = q.clone();
    loop {
        acc += &term;
        term = &(&term * x) / &(&one - &qn);
        qn = &qn * q;
        if term.abs() < tol {
            break;
        }
    }
    // ratio of successive terms is below |x|/(1-q)
    let ratio = &x.abs() / &(&one - q);
    let err = if ratio < one { &term.abs() / &(&one - &ratio) } else { term.abs() };
    Ok(Approx { value: acc, err })
}

/// `E_q(x) = Σ q^{n(n-1)/2} x^n/(q;q)_n`, entire in `x`.
pub fn big_e_q_num(x: &BigFloat, q: &BigFloat, digits: usize) -> Approx {
    let one = BigFloat::one(digits);
    let tol = tolerance(digits);
    let mut term = one.clone();
    let mut acc = BigFloat::zero(digits);
    let mut qn = one.clone();
    let mut n = 0usize;
    loop {
        acc += &term;
        // term_{n+1} = term_n q^n x / (1 - q^{n+1})
        let next_q = &qn * q;
        term = &(&(&term * &qn) * x) / &(&one - &next_q);
        qn = next_q;
        n += 1;
        if term.abs() < tol && n > 2 {
            break;
        }
    }
    Approx { value: acc, err: &term.abs() * &BigFloat::from_i64(2, digits) }
}

/// Gaussian binomial `[m choose r]_t`.
pub fn tbinomial(m: usize, r: usize, t: &Rational) -> Result<Rational> {
    if r > m {
        return Err(Error::OutOfRange(format!("[{m} choose {r}]")));
    }
    Ok(qpochhammer(t, t, m) / (qpochhammer(t, t, r) * qpochhammer(t, t, m - r)))
}

fn al_salam_carlitz(nmax: usize, q: &Rational, a: &Rational) -> Vec<QPoly1> {
    let one = Rational::one();
    let mut out = vec![QPoly1::constant(one.clone())];
    for n in 0..nmax {
        let qn = pow(q, n as i64);
        let mut next = out[n].mul(&QPoly1::linear((&one + a) * &qn));
        if n > 0 {
            let c = a * pow(q, n as i64 - 1) * (&one - &qn);
            next = next.add(&out[n - 1].scale(&c));
        }
        out.push(next);
    }
    out
}

/// `U_0, …, U_nmax` at `(q, a)` from the three-term recurrence
/// `U_{n+1} = (x - (1+a)q^n) U_n + a q^{n-1}(1-q^n) U_{n-1}`.
pub fn u1_family(nmax: usize, pt: &ParamPoint) -> Vec<QPoly1> {
    al_salam_carlitz(nmax, &pt.q, &pt.a)
}

pub fn u1(n: usize, pt: &ParamPoint) -> QPoly1 {
    u1_family(n, pt).pop().expect("nonempty")
}

/// `V_n(x;q) = U_n(x;1/q)`.
pub fn v1(n: usize, pt: &ParamPoint) -> Result<QPoly1> {
    if pt.q.is_zero() {
        return Err(Error::InvalidParameter("q must be nonzero".into()));
    }
    Ok(al_salam_carlitz(n, &pt.q.recip(), &pt.a).pop().expect("nonempty"))
}

/// Exact checks of the lowering, contiguity, recurrence and special-value identities for
/// `n ≤ nmax`, plus the `a = 0` product formula.
pub fn u1_properties_check(pt: &ParamPoint, nmax: usize) -> Vec<CheckReport> {
    let (q, a) = (&pt.q, &pt.a);
    let one = Rational::one();
    let params = json!({"q": crate::algebra::format_rational(q), "a": crate::algebra::format_rational(a), "nmax": nmax});
    let u = u1_family(nmax + 1, pt);
    let ushift = al_salam_carlitz(nmax, q, &(a / q));
    let u0 = al_salam_carlitz(nmax, q, &Rational::zero());
    let x = QPoly1::linear(Rational::zero());
    let mut out = Vec::new();
    let diff_report = |name: String, d: QPoly1| {
        let err = d.coeffs().iter().map(|c| c.abs()).max().unwrap_or_else(Rational::zero);
        CheckReport::exact(name, params.clone(), &err, &Rational::zero())
    };
    for n in 0..=nmax {
        let lower = if n > 0 { u[n - 1].scale(&qnumber(n, q)) } else { QPoly1::zero() };
        out.push(diff_report(format!("lowering n={n}"), u[n].q_derivative(q).sub(&lower)));

        let mut rhs = u[n].clone();
        if n > 0 {
            rhs = rhs.sub(&u[n - 1].scale(&(a / q * (&one - pow(q, n as i64)))));
        }
        out.push(diff_report(format!("contiguity n={n}"), ushift[n].sub(&rhs)));

        let mut rhs = u[n + 1].add(&u[n].scale(&((&one + a) * pow(q, n as i64))));
        if n > 0 {
            rhs = rhs.sub(&u[n - 1].scale(&(a * pow(q, n as i64 - 1) * (&one - pow(q, n as i64)))));
        }
        out.push(diff_report(format!("three-term n={n}"), x.mul(&u[n]).sub(&rhs)));

        let tri = pow(q, (n * n.saturating_sub(1) / 2) as i64);
        out.push(CheckReport::exact(
            format!("value at 1, n={n}"),
            params.clone(),
            &u[n].eval(&one),
            &(&tri * pow(&-a, n as i64)),
        ));
        out.push(CheckReport::exact(
            format!("value at a, n={n}"),
            params.clone(),
            &u[n].eval(a),
            &(&tri * pow(&-&one, n as i64)),
        ));

        // y^n (1/y;q)_n = ∏_{j<n} (y - q^j)
        let mut prod = QPoly1::constant(one.clone());
        for j in 0..n {
            prod = prod.mul(&QPoly1::linear(pow(q, j as i64)));
        }
        out.push(diff_report(format!("a=0 product n={n}"), u0[n].sub(&prod)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{int, rat};
    use crate::report::all_pass;

    fn pt() -> ParamPoint {
        ParamPoint::new(rat(1, 2), rat(1, 3), rat(-3, 5), 1)
    }

    #[test]
    fn pochhammer_examples() {
        assert_eq!(qpochhammer(&rat(2, 3), &rat(1, 2), 0), int(1));
        assert_eq!(qpochhammer(&rat(1, 2), &rat(1, 2), 2), rat(3, 8));
    }

    #[test]
    fn infinite_pochhammer_matches_reciprocal_series() {
        let d = 40;
        let x = BigFloat::from_rational(&rat(1, 3), d);
        let q = BigFloat::from_rational(&rat(1, 2), d);
        let prod = qpochhammer_inf(&x, &q, d).unwrap();
        let series = e_q_num(&x, &q, d).unwrap();
        let one = BigFloat::one(d);
        let err = (&(&prod.value * &series.value) - &one).abs();
        assert!(err < BigFloat::parse("1e-40", d).unwrap(), "{err}");
        let neg = big_e_q_num(&(-&x), &q, d);
        let err = (&(&neg.value * &series.value) - &one).abs();
        assert!(err < BigFloat::parse("1e-40", d).unwrap(), "{err}");
        assert!(qpochhammer_inf(&x, &one, d).is_err());
    }

    #[test]
    fn inverted_base_exponential() {
        // E_{1/q}(-x) = e_q(qx) as formal series
        let q = rat(2, 7);
        let lhs = big_e_q_neg_series(&q.recip(), 8);
        let rhs = series_dilate(&e_q_series(&q, 8), &q);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn gaussian_binomials() {
        let t = rat(3, 7);
        assert_eq!(tbinomial(2, 1, &t).unwrap(), int(1) + &t);
        assert_eq!(tbinomial(5, 0, &t).unwrap(), int(1));
        assert_eq!(
            tbinomial(3, 1, &t).unwrap(),
            tbinomial(2, 1, &t).unwrap() + &t * &t * tbinomial(2, 0, &t).unwrap()
        );
        assert!(tbinomial(2, 3, &t).is_err());
    }

    #[test]
    fn low_degree_polynomials() {
        let pt = pt();
        let one = int(1);
        assert_eq!(u1(1, &pt), QPoly1::linear(&one + &pt.a));
        assert_eq!(u1(1, &pt).eval(&one), -pt.a.clone());
        assert_eq!(v1(0, &pt).unwrap(), QPoly1::constant(one.clone()));
        assert_eq!(v1(1, &pt).unwrap(), QPoly1::linear(&one + &pt.a));
    }

    #[test]
    fn generating_function_matches_recurrence() {
        let pt = pt();
        let deg = 6;
        let r = rho_series(&pt.a, &pt.q, deg);
        for n in 0..=deg {
            // coefficient of x^n/(q;q)_n in ρ_a(x) e_q(xy)
            let coeffs = (0..=n)
                .map(|j| {
                    let k = n - j;
                    &r[n - k] / qpochhammer(&pt.q, &pt.q, k) * qpochhammer(&pt.q, &pt.q, n)
                })
                .collect::<Vec<_>>();
            // coeffs[j] multiplies y^{n-j}
            let poly = QPoly1::new((0..=n).map(|k| coeffs[n - k].clone()).collect());
            assert_eq!(poly, u1(n, &pt), "n={n}");
        }
    }

    #[test]
    fn properties_hold() {
        for pt in [pt(), ParamPoint::new(rat(3, 4), rat(1, 2), rat(-2, 1), 1)] {
            let reps = u1_properties_check(&pt, 6);
            assert!(all_pass(&reps), "{:?}", crate::report::first_failure(&reps));
        }
    }

    #[test]
    fn contiguity_example_n1() {
        let pt = pt();
        let shifted = ParamPoint { a: &pt.a / &pt.q, ..pt.clone() };
        let expect = QPoly1::linear(int(1) + &pt.a / &pt.q);
        assert_eq!(u1(1, &shifted), expect);
    }
}
