//! Multivariable Al-Salam & Carlitz polynomials `U_κ^{(a)}` and `V_κ^{(a)}`.
//!
//! `U_κ` is built three independent ways: as the eigenfunction of the eigenoperator with leading
//! term `P_κ` (eigen), by coefficient extraction from `∏ρ_a(x_i) ₀F₀(x;y)` (genfun), and by
//! applying `∏ρ_a(D_i)` to `P_κ` (expop).

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, OnceLock, RwLock};

use num_traits::{One, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::rational::{int, pow, qnumber, Rational};
use crate::algebra::symmetric::{determinant, divide_by_vandermonde};
use crate::algebra::{elementary, MPoly, ParamPoint};
use crate::bigfloat::BigFloat;
use crate::error::{Error, Result};
use crate::hecke::{dunkl_d, h_form2};
use crate::kernels::f00_coefficient;
use crate::macdonald::{expand_in_p, macdonald_p};
use crate::operators::{h_form1, rho_product, LinearOp, OpKind};
use crate::partition::{
    binom_remove, eigenvalue_e, eigenvalue_e_tilde, hook_prime, nodes, partitions_of, partitions_up_to,
    principal_specialization, psi_prime, vertical_strips, Partition,
};
use crate::qseries::{rho_inv_series, rho_series, series_dilate, tbinomial, u1};
use crate::report::CheckReport;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Family {
    U,
    V,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    Eigen,
    Genfun,
    Expop,
}

impl std::str::FromStr for Route {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "eigen" => Ok(Route::Eigen),
            "genfun" => Ok(Route::Genfun),
            "expop" => Ok(Route::Expop),
            _ => Err(Error::Parse(format!("unknown route {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AscPoly {
    pub kappa: Partition,
    pub family: Family,
    pub pt: ParamPoint,
    pub poly: MPoly,
    pub route: Route,
}

impl AscPoly {
    pub fn to_json(&self) -> Value {
        json!({
            "family": self.family,
            "kappa": self.kappa.to_json(),
            "params": self.pt.to_json(),
            "route": self.route,
            "poly": self.poly.to_json(),
        })
    }
}

type Key = (Partition, usize, Rational, Rational, Rational);

fn key(p: &Partition, pt: &ParamPoint) -> Key {
    (p.clone(), pt.nvars, pt.q.clone(), pt.t.clone(), pt.a.clone())
}

type ExpCache = RwLock<HashMap<Key, Arc<BTreeMap<Partition, Rational>>>>;

fn h_cache() -> &'static ExpCache {
    static C: OnceLock<ExpCache> = OnceLock::new();
    C.get_or_init(Default::default)
}

fn u_cache() -> &'static ExpCache {
    static C: OnceLock<ExpCache> = OnceLock::new();
    C.get_or_init(Default::default)
}

/// `𝓗 P_ν` expanded in the `P` basis, computed by applying the operator to the polynomial.
fn h_on_p(nu: &Partition, pt: &ParamPoint) -> Result<Arc<BTreeMap<Partition, Rational>>> {
    let k = key(nu, pt);
    if let Some(v) = h_cache().read().unwrap().get(&k) {
        return Ok(v.clone());
    }
    let p = macdonald_p(nu, pt)?;
    let v = Arc::new(expand_in_p(&h_form1(pt).apply(&p)?, pt)?);
    h_cache().write().unwrap().insert(k, v.clone());
    Ok(v)
}

/// `P`-basis coefficients of `U_κ` from the eigenvalue equation `𝓗U = ẽ(κ)U`, solved degree by
/// degree downwards from the leading coefficient `1` on `P_κ`.
pub fn u_eigen_coefficients(kappa: &Partition, pt: &ParamPoint) -> Result<Arc<BTreeMap<Partition, Rational>>> {
    let n = pt.nvars;
    kappa.check_len(n)?;
    pt.check_exact()?;
    let k = key(kappa, pt);
    if let Some(v) = u_cache().read().unwrap().get(&k) {
        return Ok(v.clone());
    }
    let ek = eigenvalue_e_tilde(kappa, &pt.q, &pt.t, n);
    let lower: Vec<Partition> = partitions_up_to(kappa.size().saturating_sub(1), n)
        .into_iter()
        .filter(|m| m.size() < kappa.size())
        .collect();
    if let Some(mu) = lower.iter().find(|m| eigenvalue_e_tilde(m, &pt.q, &pt.t, n) == ek) {
        return Err(Error::Resonance { kappa: kappa.clone(), mu: mu.clone() });
    }
    let mut coeffs: BTreeMap<Partition, Rational> = BTreeMap::new();
    coeffs.insert(kappa.clone(), Rational::one());
    let mut images: Vec<(Partition, Arc<BTreeMap<Partition, Rational>>)> = vec![(kappa.clone(), h_on_p(kappa, pt)?)];
    for d in (0..kappa.size()).rev() {
        let level = partitions_of(d, n);
        for nu in &level {
            let mut rhs = Rational::zero();
            for (mu, img) in &images {
                if let Some(h) = img.get(nu) {
                    rhs += &coeffs[mu] * h;
                }
            }
            let hnu = h_on_p(nu, pt)?;
            for other in level.iter().filter(|o| *o != nu) {
                if hnu.get(other).is_some_and(|c| !c.is_zero()) {
                    return Err(Error::Internal(format!("eigenoperator mixes {nu} and {other} in one degree")));
                }
            }
            let diag = hnu.get(nu).cloned().unwrap_or_else(Rational::zero);
            let gap = &ek - &diag;
            if gap.is_zero() {
                return Err(Error::Resonance { kappa: kappa.clone(), mu: nu.clone() });
            }
            let c = rhs / gap;
            if !c.is_zero() {
                coeffs.insert(nu.clone(), c);
            }
        }
        for nu in &level {
            if coeffs.contains_key(nu) {
                images.push((nu.clone(), h_on_p(nu, pt)?));
            }
        }
    }
    let v = Arc::new(coeffs);
    u_cache().write().unwrap().insert(k, v.clone());
    Ok(v)
}

fn from_p(coeffs: &BTreeMap<Partition, Rational>, pt: &ParamPoint) -> Result<MPoly> {
    crate::macdonald::from_p_basis(coeffs, pt)
}

fn wrap(kappa: &Partition, family: Family, pt: &ParamPoint, poly: MPoly, route: Route) -> AscPoly {
    AscPoly { kappa: kappa.clone(), family, pt: pt.clone(), poly, route }
}

pub fn asc_u_eigen(kappa: &Partition, pt: &ParamPoint) -> Result<AscPoly> {
    let c = u_eigen_coefficients(kappa, pt)?;
    Ok(wrap(kappa, Family::U, pt, from_p(&c, pt)?, Route::Eigen))
}

type PairKey = (Partition, Partition, usize, Rational, Rational);

type PairCache = RwLock<HashMap<PairKey, Arc<BTreeMap<Partition, Rational>>>>;

fn product_cache() -> &'static PairCache {
    static C: OnceLock<PairCache> = OnceLock::new();
    C.get_or_init(Default::default)
}

/// `P_μ P_ν` in the `P` basis.
fn p_product(mu: &Partition, nu: &Partition, pt: &ParamPoint) -> Result<Arc<BTreeMap<Partition, Rational>>> {
    let (a, b) = if mu <= nu { (mu, nu) } else { (nu, mu) };
    let k = (a.clone(), b.clone(), pt.nvars, pt.q.clone(), pt.t.clone());
    if let Some(v) = product_cache().read().unwrap().get(&k) {
        return Ok(v.clone());
    }
    let prod = &*macdonald_p(a, pt)? * &*macdonald_p(b, pt)?;
    let v = Arc::new(expand_in_p(&prod, pt)?);
    product_cache().write().unwrap().insert(k, v.clone());
    Ok(v)
}

/// Coefficient extraction from `∏ρ_a(x_i) ₀F₀(x;y) = Σ_κ f_κ U_κ(y) P_κ(x)`: with
/// `∏ρ_a(x_i) = Σ r_μ P_μ(x)`, `U_κ = Σ_ν r_μ f_ν c^κ_{μν} / f_κ · P_ν` where `c^κ_{μν}` is the
/// coefficient of `P_κ` in `P_μ P_ν`.
pub fn asc_u_genfun(kappa: &Partition, pt: &ParamPoint) -> Result<AscPoly> {
    let n = pt.nvars;
    kappa.check_len(n)?;
    let size = kappa.size();
    let r = expand_in_p(&rho_product(pt, size), pt)?;
    let fk = f00_coefficient(kappa, pt)?;
    let mut coeffs: BTreeMap<Partition, Rational> = BTreeMap::new();
    for nu in partitions_up_to(size, n) {
        let mut c = Rational::zero();
        for mu in partitions_of(size - nu.size(), n) {
            let Some(rm) = r.get(&mu) else { continue };
            if let Some(s) = p_product(&mu, &nu, pt)?.get(kappa) {
                c += rm * s;
            }
        }
        if !c.is_zero() {
            coeffs.insert(nu.clone(), c * f00_coefficient(&nu, pt)? / &fk);
        }
    }
    Ok(wrap(kappa, Family::U, pt, from_p(&coeffs, pt)?, Route::Genfun))
}

/// Applies `Σ_k c_k D_i^k` for each `i` in turn, `D` taken at `dpt`.
fn apply_series_in_d(series: &[Rational], f: &MPoly, dpt: &ParamPoint) -> Result<MPoly> {
    let n = f.nvars();
    let mut g = f.clone();
    for i in 1..=n {
        let mut acc = MPoly::zero(n);
        let mut cur = g.clone();
        for c in series {
            if cur.is_zero() {
                break;
            }
            acc = &acc + &cur.scale(c);
            cur = dunkl_d(i, &cur, dpt)?;
        }
        if !cur.is_zero() {
            return Err(Error::Internal("series in D truncated too early".into()));
        }
        g = acc;
    }
    Ok(g)
}

/// `ρ_a(D_1)⋯ρ_a(D_n) P_κ`, each factor truncated at degree `|κ|`.
pub fn asc_u_expop(kappa: &Partition, pt: &ParamPoint) -> Result<AscPoly> {
    let p = macdonald_p(kappa, pt)?;
    let s = rho_series(&pt.a, &pt.q, kappa.size() as usize);
    Ok(wrap(kappa, Family::U, pt, apply_series_in_d(&s, &p, pt)?, Route::Expop))
}

pub fn asc_u(kappa: &Partition, pt: &ParamPoint, route: Route) -> Result<AscPoly> {
    match route {
        Route::Eigen => asc_u_eigen(kappa, pt),
        Route::Genfun => asc_u_genfun(kappa, pt),
        Route::Expop => asc_u_expop(kappa, pt),
    }
}

/// `V_κ(q, t) = U_κ(1/q, 1/t)`, built by the given route at the inverted point.
pub fn asc_v_route(kappa: &Partition, pt: &ParamPoint, route: Route) -> Result<AscPoly> {
    if pt.q.is_zero() || pt.t.is_zero() {
        return Err(Error::InvalidParameter("q and t must be invertible".into()));
    }
    let u = asc_u(kappa, &pt.inverted(), route)?;
    Ok(wrap(kappa, Family::V, pt, u.poly, route))
}

pub fn asc_v(kappa: &Partition, pt: &ParamPoint) -> Result<AscPoly> {
    asc_v_route(kappa, pt, Route::Eigen)
}

/// `1/(ρ_a(q D̃_1)⋯ρ_a(q D̃_n)) P_κ` with `D̃` the Dunkl operators at `(1/q, 1/t)`.
pub fn asc_v_expop(kappa: &Partition, pt: &ParamPoint) -> Result<AscPoly> {
    let p = macdonald_p(kappa, pt)?;
    let s = series_dilate(&rho_inv_series(&pt.a, &pt.q, kappa.size() as usize), &pt.q);
    Ok(wrap(kappa, Family::V, pt, apply_series_in_d(&s, &p, &pt.inverted())?, Route::Expop))
}

/// `Σ c_μ U_μ`.
pub fn u_combination(terms: &[(Partition, Rational)], pt: &ParamPoint) -> Result<MPoly> {
    let mut acc = MPoly::zero(pt.nvars);
    for (mu, c) in terms {
        acc = &acc + &asc_u_eigen(mu, pt)?.poly.scale(c);
    }
    Ok(acc)
}

/// `f_λ = t^{b(λ)} / (h'_λ P_λ(t^δ))`.
pub fn f_lambda(lambda: &Partition, pt: &ParamPoint) -> Result<Rational> {
    f00_coefficient(lambda, pt)
}

/// Expansion of `e_1 U_λ` in the `U` basis.
pub fn pieri_u(lambda: &Partition, pt: &ParamPoint) -> Result<Vec<(Partition, Rational)>> {
    let n = pt.nvars;
    let one = Rational::one();
    let mut out = vec![(lambda.clone(), (&one + &pt.a) * eigenvalue_e(lambda, &pt.q, &pt.t, n))];
    let (add, rem) = nodes(lambda, n);
    let hl = hook_prime(lambda, pt);
    for i in add {
        let up = lambda.add_node(i).expect("addable");
        let c = (&one - &pt.q) * pow(&pt.t, i as i64 - 1) * binom_remove(&up, i, pt)? * &hl / hook_prime(&up, pt);
        out.push((up, c));
    }
    let pl = principal_specialization(lambda, pt)?;
    for i in rem {
        let down = lambda.remove_node(i).expect("removable");
        let c = -(&pt.a * (&one - &pt.q))
            * pow(&pt.q, lambda.part(i) as i64 - 1)
            * pow(&pt.t, n as i64 - i as i64)
            * binom_remove(lambda, i, pt)?
            * &pl
            / principal_specialization(&down, pt)?;
        out.push((down, c));
    }
    Ok(out)
}

/// Expansion of `E_0 U_λ` in the `U` basis.
pub fn e0_u(lambda: &Partition, pt: &ParamPoint) -> Result<Vec<(Partition, Rational)>> {
    crate::macdonald::e0_action_p(lambda, pt)
}

/// Expansion of `U_λ^{(a/q)}` in the `U^{(a)}` basis over vertical strips.
pub fn a_contiguity_u(lambda: &Partition, pt: &ParamPoint) -> Result<Vec<(Partition, Rational)>> {
    let fl = f_lambda(lambda, pt)?;
    let base = -(&pt.a / &pt.q);
    let mut out = Vec::new();
    for r in 0..=pt.nvars.min(lambda.len()) {
        for mu in vertical_strips(lambda, r) {
            let c = pow(&base, r as i64) * psi_prime(lambda, &mu, pt)? * f_lambda(&mu, pt)? / &fl;
            out.push((mu, c));
        }
    }
    Ok(out)
}

fn tdelta(pt: &ParamPoint, c: &Rational) -> Vec<Rational> {
    (0..pt.nvars).map(|i| c * pow(&pt.t, i as i64)).collect()
}

/// `(U_λ(t^δ), U_λ(a t^δ))` computed from the polynomial.
pub fn special_values_u(lambda: &Partition, pt: &ParamPoint) -> Result<(Rational, Rational)> {
    let u = asc_u_eigen(lambda, pt)?.poly;
    Ok((u.eval(&tdelta(pt, &Rational::one())), u.eval(&tdelta(pt, &pt.a))))
}

/// Closed forms `(-a)^{|λ|} q^{b(λ')} t^{-b(λ)} P_λ(t^δ)` and
/// `(-1)^{|λ|} q^{b(λ')} t^{-b(λ)} P_λ(t^δ)`.
pub fn special_values_closed(lambda: &Partition, pt: &ParamPoint) -> Result<(Rational, Rational)> {
    let common = pow(&pt.q, lambda.conjugate().b_stat() as i64)
        * pow(&pt.t, -(lambda.b_stat() as i64))
        * principal_specialization(lambda, pt)?;
    let s = lambda.size() as i64;
    Ok((pow(&-pt.a.clone(), s) * &common, pow(&int(-1), s) * common))
}

/// Structural identities for every `λ` with `|λ| ≤ degmax`: Pieri, `E_0` action,
/// `a`-contiguity and the special values.
pub fn structural_checks(pt: &ParamPoint, degmax: u32) -> Vec<CheckReport> {
    let n = pt.nvars;
    let params = json!({"pt": pt.to_json(), "degmax": degmax});
    let run = || -> Result<Vec<CheckReport>> {
        let mut out = Vec::new();
        let e1 = elementary(1, n)?;
        let e0 = LinearOp::new(OpKind::E(0), pt);
        let pt_shift = pt.with_a(&pt.a / &pt.q);
        for lambda in partitions_up_to(degmax, n) {
            let p = json!({"pt": pt.to_json(), "lambda": lambda.to_json()});
            let u = asc_u_eigen(&lambda, pt)?.poly;
            if lambda.size() < degmax {
                let rhs = u_combination(&pieri_u(&lambda, pt)?, pt)?;
                out.push(CheckReport::exact_poly("Pieri for U", p.clone(), &(&e1 * &u), &rhs));
            }
            let rhs = u_combination(&e0_u(&lambda, pt)?, pt)?;
            out.push(CheckReport::exact_poly("E0 on U", p.clone(), &e0.apply(&u)?, &rhs));
            let lhs = asc_u_eigen(&lambda, &pt_shift)?.poly;
            let rhs = u_combination(&a_contiguity_u(&lambda, pt)?, pt)?;
            out.push(CheckReport::exact_poly("a-contiguity", p.clone(), &lhs, &rhs));
            let (v1, v2) = special_values_u(&lambda, pt)?;
            let (c1, c2) = special_values_closed(&lambda, pt)?;
            out.push(CheckReport::exact("U at t^delta", p.clone(), &v1, &c1));
            out.push(CheckReport::exact("U at a t^delta", p, &v2, &c2));
        }
        Ok(out)
    };
    crate::report::or_failure("U structural identities", params, run())
}

/// With `a = 0`, `U_λ` vanishes at `y_i = q^{μ_i} t^{n-i}` for every `μ ≠ λ` with
/// `|μ| ≤ |λ|` and is nonzero at `μ = λ`.
pub fn shifted_vanishing_check(lambda: &Partition, pt: &ParamPoint) -> Vec<CheckReport> {
    let n = pt.nvars;
    let params = json!({"pt": pt.to_json(), "lambda": lambda.to_json()});
    if !pt.a.is_zero() {
        return vec![CheckReport::failure("shifted vanishing", params, "requires a = 0")];
    }
    let run = || -> Result<Vec<CheckReport>> {
        let u = asc_u_eigen(lambda, pt)?.poly;
        let mut out = Vec::new();
        for mu in partitions_up_to(lambda.size(), n) {
            let y: Vec<Rational> =
                (1..=n).map(|i| pow(&pt.q, mu.part(i) as i64) * pow(&pt.t, (n - i) as i64)).collect();
            let v = u.eval(&y);
            let p = json!({"pt": pt.to_json(), "lambda": lambda.to_json(), "mu": mu.to_json()});
            if mu == *lambda {
                out.push(CheckReport::boolean("shifted nonvanishing", p, !v.is_zero(), json!(crate::algebra::format_rational(&v))));
            } else {
                out.push(CheckReport::exact("shifted vanishing", p, &v, &Rational::zero()));
            }
        }
        Ok(out)
    };
    crate::report::or_failure("shifted vanishing", params, run())
}

/// Eigen-equation `𝓗U_κ = ẽ(κ)U_κ` with both operator forms.
pub fn eigen_equation_checks(pt: &ParamPoint, degmax: u32) -> Vec<CheckReport> {
    let n = pt.nvars;
    let params = json!({"pt": pt.to_json(), "degmax": degmax});
    let run = || -> Result<Vec<CheckReport>> {
        let mut out = Vec::new();
        let h1 = h_form1(pt);
        for kappa in partitions_up_to(degmax, n) {
            let u = asc_u_eigen(&kappa, pt)?.poly;
            let rhs = u.scale(&eigenvalue_e_tilde(&kappa, &pt.q, &pt.t, n));
            let p = json!({"pt": pt.to_json(), "kappa": kappa.to_json()});
            out.push(CheckReport::exact_poly("eigen-equation (first form)", p.clone(), &h1.apply(&u)?, &rhs));
            out.push(CheckReport::exact_poly("eigen-equation (second form)", p.clone(), &h_form2(&u, pt)?, &rhs));
            let lead = expand_in_p(&u, pt)?;
            let ok = lead.get(&kappa) == Some(&Rational::one())
                && lead.keys().all(|nu| nu == &kappa || nu.size() < kappa.size());
            out.push(CheckReport::boolean("leading term P_kappa", p, ok, json!(lead.len())));
        }
        Ok(out)
    };
    crate::report::or_failure("eigen-equation", params, run())
}

/// Exact agreement of the three `U` routes for `|κ| ≤ degmax`, and of `V` by inversion and by
/// the operator formula for `|κ| ≤ vdeg`.
pub fn route_agreement_checks(pt: &ParamPoint, degmax: u32, vdeg: u32) -> Vec<CheckReport> {
    let n = pt.nvars;
    let params = json!({"pt": pt.to_json(), "degmax": degmax});
    let run = || -> Result<Vec<CheckReport>> {
        let mut out = Vec::new();
        for kappa in partitions_up_to(degmax, n) {
            let p = json!({"pt": pt.to_json(), "kappa": kappa.to_json()});
            let e = asc_u_eigen(&kappa, pt)?.poly;
            out.push(CheckReport::exact_poly("genfun = eigen", p.clone(), &asc_u_genfun(&kappa, pt)?.poly, &e));
            out.push(CheckReport::exact_poly("expop = eigen", p.clone(), &asc_u_expop(&kappa, pt)?.poly, &e));
            if kappa.size() <= vdeg {
                out.push(CheckReport::exact_poly("V inversion = V operator", p, &asc_v(&kappa, pt)?.poly, &asc_v_expop(&kappa, pt)?.poly));
            }
        }
        Ok(out)
    };
    crate::report::or_failure("route agreement", params, run())
}

// ---- expansion of ∏(x_j - a) -----------------------------------------------------------------

/// `f_0, …, f_m` from `f_i = -(1+a) f_{i-1} + a(t^{i-1} - 1) f_{i-2}`.
pub fn f_seq(m: usize, pt: &ParamPoint) -> Vec<Rational> {
    let one = Rational::one();
    let mut f = vec![one.clone(), -(&one + &pt.a)];
    for i in 2..=m {
        let v = -(&one + &pt.a) * &f[i - 1] + &pt.a * (pow(&pt.t, i as i64 - 1) - &one) * &f[i - 2];
        f.push(v);
    }
    f.truncate(m + 1);
    f
}

/// `f̃_0, …, f̃_m` from `f̃_i = (1+a) t^{i-1} f̃_{i-1} + a t^{i-2}(1 - t^{i-1}) f̃_{i-2}`.
pub fn f_tilde_seq(m: usize, pt: &ParamPoint) -> Vec<Rational> {
    let one = Rational::one();
    let mut f = vec![one.clone(), &one + &pt.a];
    for i in 2..=m {
        let v = (&one + &pt.a) * pow(&pt.t, i as i64 - 1) * &f[i - 1]
            + &pt.a * pow(&pt.t, i as i64 - 2) * (&one - pow(&pt.t, i as i64 - 1)) * &f[i - 2];
        f.push(v);
    }
    f.truncate(m + 1);
    f
}

/// `U_{(1^p)} = Σ_i f_i [n-p+i choose i]_t e_{p-i}`.
pub fn u_column_expansion(p: usize, pt: &ParamPoint) -> Result<MPoly> {
    let n = pt.nvars;
    if p > n {
        return Err(Error::OutOfRange(format!("(1^{p}) in {n} variables")));
    }
    let f = f_seq(p, pt);
    let mut acc = MPoly::zero(n);
    for (i, fi) in f.iter().enumerate() {
        acc = &acc + &elementary(p - i, n)?.scale(&(fi * tbinomial(n - p + i, i, &pt.t)?));
    }
    Ok(acc)
}

/// `γ_1, γ_2, γ_3` with `M_1 U_{(1^p)} = γ_1 U_{(1^p)} + γ_2 U_{(1^{p-1})} + γ_3 U_{(1^{p-2})}`.
pub fn column_gammas(p: usize, pt: &ParamPoint) -> (Rational, Rational, Rational) {
    let n = pt.nvars;
    let one = Rational::one();
    let g1 = eigenvalue_e(&Partition::column(p), &pt.q, &pt.t, n);
    let tn = pow(&pt.t, n as i64 - p as i64);
    let b1 = qnumber(n + 1 - p, &pt.t);
    let b2 = if n + 2 >= p { qnumber(n + 2 - p, &pt.t) } else { Rational::zero() };
    let g2 = -(&one - &pt.q) * (&one + &pt.a) * &tn * &b1;
    let g3 = (&one - &pt.q) * (&pt.t - &one) * &pt.a * &tn * &b1 * b2;
    (g1, g2, g3)
}

/// `b^{(p)}_{p-i} = f̃_i [n-p+i choose i]_t`, indexed by `i` in `e_p = Σ b^{(p)}_i U_{(1^i)}`.
pub fn b_coefficients(p: usize, pt: &ParamPoint) -> Result<Vec<Rational>> {
    let n = pt.nvars;
    let ft = f_tilde_seq(p, pt);
    let mut b = vec![Rational::zero(); p + 1];
    for (i, fi) in ft.iter().enumerate() {
        b[p - i] = fi * tbinomial(n - p + i, i, &pt.t)?;
    }
    Ok(b)
}

/// `S_m = Σ_i f̃_{m-i} [m choose i]_t (-a)^i`.
pub fn s_m(m: usize, pt: &ParamPoint) -> Result<Rational> {
    let ft = f_tilde_seq(m, pt);
    let mut acc = Rational::zero();
    for i in 0..=m {
        acc += &ft[m - i] * tbinomial(m, i, &pt.t)? * pow(&-pt.a.clone(), i as i64);
    }
    Ok(acc)
}

/// Coefficients `t^{C(n-r, 2)}` of `∏(x_j - a) = Σ_r t^{C(n-r,2)} U_{(1^r)}`, indexed by `r`.
pub fn expand_prod_in_u(n: usize, pt: &ParamPoint) -> Vec<Rational> {
    (0..=n).map(|r| pow(&pt.t, ((n - r) * (n - r).saturating_sub(1) / 2) as i64)).collect()
}

/// Checks of the whole column expansion chain at `pt.nvars`. `eigen_nmax` bounds the number of
/// variables for which the column polynomials are also compared with the eigen route; beyond
/// it they are verified directly against the eigenvalue equation.
pub fn column_expansion_checks(pt: &ParamPoint, eigen_nmax: usize) -> Vec<CheckReport> {
    let n = pt.nvars;
    let params = json!({"pt": pt.to_json()});
    let run = || -> Result<Vec<CheckReport>> {
        let mut out = Vec::new();
        let one = Rational::one();
        let h = h_form1(pt);
        let m1 = LinearOp::new(OpKind::M1, pt);
        let cols: Vec<MPoly> = (0..=n).map(|p| u_column_expansion(p, pt)).collect::<Result<_>>()?;
        for (p, u) in cols.iter().enumerate() {
            let pp = json!({"pt": pt.to_json(), "p": p});
            let col = Partition::column(p);
            let et = eigenvalue_e_tilde(&col, &pt.q, &pt.t, n);
            out.push(CheckReport::exact_poly("column expansion eigen-equation", pp.clone(), &h.apply(u)?, &u.scale(&et)));
            if n <= eigen_nmax {
                out.push(CheckReport::exact_poly("column expansion = eigen route", pp.clone(), u, &asc_u_eigen(&col, pt)?.poly));
            }
            // 𝓗 e_p = A1 e_p + A2 e_{p-1} + A3 e_{p-2}
            let ep = elementary(p, n)?;
            let qi1 = pt.q.recip() - &one;
            let b1 = qnumber(n + 1 - p, &pt.t);
            let a2 = -(&one + &pt.a) * &qi1 * pow(&pt.t, p as i64 - n as i64) * &b1;
            let a3 = &pt.a * &qi1 * (&pt.t - &one) * pow(&pt.t, p as i64 - n as i64 - 1) * &b1 * qnumber(n + 2 - p, &pt.t);
            let mut rhs = ep.scale(&et);
            if p >= 1 {
                rhs = &rhs + &elementary(p - 1, n)?.scale(&a2);
            }
            if p >= 2 {
                rhs = &rhs + &elementary(p - 2, n)?.scale(&a3);
            }
            out.push(CheckReport::exact_poly("eigenoperator on e_p", pp.clone(), &h.apply(&ep)?, &rhs));
            let (g1, g2, g3) = column_gammas(p, pt);
            let mut rhs = u.scale(&g1);
            if p >= 1 {
                rhs = &rhs + &cols[p - 1].scale(&g2);
            }
            if p >= 2 {
                rhs = &rhs + &cols[p - 2].scale(&g3);
            }
            out.push(CheckReport::exact_poly("M1 on column U", pp.clone(), &m1.apply(u)?, &rhs));
            let b = b_coefficients(p, pt)?;
            let mut rhs = MPoly::zero(n);
            for (i, bi) in b.iter().enumerate() {
                rhs = &rhs + &cols[i].scale(bi);
            }
            out.push(CheckReport::exact_poly("e_p in column U", pp, &ep, &rhs));
        }
        let coeffs = expand_prod_in_u(n, pt);
        let mut rhs = MPoly::zero(n);
        for (r, c) in coeffs.iter().enumerate() {
            rhs = &rhs + &cols[r].scale(c);
        }
        let mut lhs = MPoly::one(n);
        for j in 0..n {
            lhs = &lhs * &(&MPoly::var(n, j) - &MPoly::constant(n, pt.a.clone()));
        }
        out.push(CheckReport::exact_poly("product expansion", json!({"pt": pt.to_json()}), &lhs, &rhs));
        Ok(out)
    };
    crate::report::or_failure("column expansions", params, run())
}

/// `S_m = t^{m-1} S_{m-1} = t^{C(m,2)}` for `1 ≤ m ≤ mmax`, and the identification of `f_i`,
/// `f̃_i` with one-variable values at base `t`.
pub fn telescoping_checks(pt: &ParamPoint, mmax: usize) -> Vec<CheckReport> {
    let params = json!({"pt": pt.to_json(), "mmax": mmax});
    let run = || -> Result<Vec<CheckReport>> {
        let mut out = Vec::new();
        let f = f_seq(mmax, pt);
        let ft = f_tilde_seq(mmax, pt);
        let base_t = pt.with_qt(pt.t.clone(), pt.t.clone());
        for m in 0..=mmax {
            let p = json!({"pt": pt.to_json(), "m": m});
            let s = s_m(m, pt)?;
            out.push(CheckReport::exact("S_m closed form", p.clone(), &s, &pow(&pt.t, (m * m.saturating_sub(1) / 2) as i64)));
            if m >= 1 {
                let prev = s_m(m - 1, pt)?;
                out.push(CheckReport::exact("S_m recursion", p.clone(), &s, &(pow(&pt.t, m as i64 - 1) * prev)));
            }
            let u0 = u1(m, &base_t).eval(&Rational::zero());
            let sign = pow(&int(-1), m as i64);
            out.push(CheckReport::exact("f-tilde = (-1)^i U_i(0)", p.clone(), &ft[m], &(sign * u0)));
            let v0 = crate::qseries::v1(m, &base_t)?.eval(&Rational::zero());
            let tm = pow(&pt.t, (m * m.saturating_sub(1) / 2) as i64);
            out.push(CheckReport::exact("f = t^{C(i,2)} V_i(0)", p, &f[m], &(tm * v0)));
        }
        Ok(out)
    };
    crate::report::or_failure("telescoping sum", params, run())
}

// ---- determinant formula at t = q -----------------------------------------------------------

/// `det[U_{κ_i+n-i}(x_j)] / ∏_{i<j}(x_i - x_j)` at `t = q`.
pub fn det_formula(kappa: &Partition, pt: &ParamPoint) -> Result<MPoly> {
    if pt.t != pt.q {
        return Err(Error::InvalidParameter("the determinant formula needs t = q".into()));
    }
    let n = pt.nvars;
    kappa.check_len(n)?;
    let parts = kappa.padded(n);
    let rows: Vec<Vec<MPoly>> = (0..n)
        .map(|i| {
            let u = u1(parts[i] as usize + n - 1 - i, pt);
            (0..n).map(|j| u.to_mpoly_in(n, j)).collect()
        })
        .collect();
    divide_by_vandermonde(&determinant(&rows)).map_err(|_| Error::Internal("determinant not divisible".into()))
}

pub fn det_formula_checks(pt: &ParamPoint, degmax: u32) -> Vec<CheckReport> {
    let params = json!({"pt": pt.to_json(), "degmax": degmax});
    let run = || -> Result<Vec<CheckReport>> {
        let mut out = Vec::new();
        for kappa in partitions_up_to(degmax, pt.nvars) {
            let p = json!({"pt": pt.to_json(), "kappa": kappa.to_json()});
            out.push(CheckReport::exact_poly("determinant formula", p, &det_formula(&kappa, pt)?, &asc_u_eigen(&kappa, pt)?.poly));
        }
        Ok(out)
    };
    crate::report::or_failure("determinant formula", params, run())
}

/// Norm of `U_κ` at `t = q` from the row-by-row integration of the determinant:
/// `[n]_q! (1-q)^n (-a)^{|κ|+n(n-1)/2} q^{Σ m_i(m_i-1)/2} ∏(q;q)_{m_i}`, `m_i = κ_i + n - i`.
pub fn determinant_norm(kappa: &Partition, pt: &ParamPoint) -> Rational {
    let n = pt.nvars;
    let one = Rational::one();
    let parts = kappa.padded(n);
    let mut qexp = 0i64;
    let mut prod = Rational::one();
    for (i, &k) in parts.iter().enumerate() {
        let m = k as i64 + n as i64 - 1 - i as i64;
        qexp += m * (m - 1) / 2;
        prod *= crate::qseries::qpochhammer(&pt.q, &pt.q, m as usize);
    }
    crate::partition::qfactorial(n, &pt.q)
        * pow(&(&one - &pt.q), n as i64)
        * pow(&-pt.a.clone(), kappa.size() as i64 + (n * (n - 1) / 2) as i64)
        * pow(&pt.q, qexp)
        * prod
}

// ---- Hermite limit -------------------------------------------------------------------------

fn hermite(m: usize, y: &BigFloat, digits: usize) -> BigFloat {
    let two = BigFloat::from_i64(2, digits);
    let (mut h0, mut h1) = (BigFloat::one(digits), &two * y);
    if m == 0 {
        return h0;
    }
    for k in 1..m {
        let next = &(&(&two * y) * &h1) - &(&BigFloat::from_i64(2 * k as i64, digits) * &h0);
        h0 = h1;
        h1 = next;
    }
    h1
}

/// `2^{-|κ|/2} s_κ(1^n) H_κ(x/√2)` at `α = 1`, from the classical Hermite determinant
/// `det[2^{-m_i/2} H_{m_i}(x_j/√2)] / ∏_{i<j}(x_i - x_j)`.
pub fn hermite_limit_value(kappa: &Partition, x: &[Rational], digits: usize) -> BigFloat {
    let n = x.len();
    let parts = kappa.padded(n);
    let sqrt2 = BigFloat::from_i64(2, digits).sqrt();
    let xs: Vec<BigFloat> = x.iter().map(|v| &BigFloat::from_rational(v, digits) / &sqrt2).collect();
    let m: Vec<usize> = (0..n).map(|i| parts[i] as usize + n - 1 - i).collect();
    let entry = |i: usize, j: usize| {
        &hermite(m[i], &xs[j], digits) / &BigFloat::from_i64(2, digits).powi(m[i] as i64).sqrt()
    };
    let det = float_det(&(0..n).map(|i| (0..n).map(|j| entry(i, j)).collect()).collect::<Vec<Vec<_>>>(), digits);
    let mut vdm = BigFloat::one(digits);
    for i in 0..n {
        for j in i + 1..n {
            vdm = &vdm * &BigFloat::from_rational(&(&x[i] - &x[j]), digits);
        }
    }
    &det / &vdm
}

fn float_det(m: &[Vec<BigFloat>], digits: usize) -> BigFloat {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = BigFloat::zero(digits);
    for j in 0..n {
        let minor: Vec<Vec<BigFloat>> =
            m[1..].iter().map(|r| r.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, v)| v.clone()).collect()).collect();
        let term = &m[0][j] * &float_det(&minor, digits);
        acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}

/// Relative errors of `(1-q)^{-|κ|/2} U_κ((1-q)^{1/2} x; q, q)` at `a = -1` against the Hermite
/// limit, for each `q` in `qs`. The report passes when the errors strictly decrease.
pub fn hermite_trend(kappa: &Partition, x: &[Rational], qs: &[Rational], digits: usize) -> CheckReport {
    let params = json!({
        "kappa": kappa.to_json(),
        "x": x.iter().map(crate::algebra::format_rational).collect::<Vec<_>>(),
        "q": qs.iter().map(crate::algebra::format_rational).collect::<Vec<_>>(),
    });
    let target = hermite_limit_value(kappa, x, digits);
    let run = || -> Result<Vec<BigFloat>> {
        let mut errs = Vec::new();
        for q in qs {
            let pt = ParamPoint::new(q.clone(), q.clone(), int(-1), x.len());
            let u = asc_u_eigen(kappa, &pt)?.poly;
            let s = BigFloat::from_rational(&(Rational::one() - q), digits).sqrt();
            let xs: Vec<BigFloat> = x.iter().map(|v| &BigFloat::from_rational(v, digits) * &s).collect();
            let val = &u.eval_float(&xs, digits) / &s.powi(kappa.size() as i64);
            errs.push(BigFloat::rel_err(&val, &target, &BigFloat::zero(digits)));
        }
        Ok(errs)
    };
    match run() {
        Ok(errs) => {
            let pass = errs.windows(2).all(|w| w[1] < w[0]);
            let rep: Vec<String> = errs.iter().map(|e| e.to_sci(6)).collect();
            CheckReport::boolean("Hermite limit trend", params, pass, json!({"target": target.to_sci(20), "rel_errs": rep}))
        }
        Err(e) => CheckReport::failure("Hermite limit trend", params, e.to_string()),
    }
}
