use clap::{Args, ValueEnum};
use serde_json::{json, Value};

use qac_core::algebra::rational::pow;
use qac_core::algebra::{rat, ParamPoint, Rational};
use qac_core::asc::{self, Family};
use qac_core::jackson::{self, QMeasure};
use qac_core::kernels::{self, KernelKind};
use qac_core::partition::partitions_up_to;
use qac_core::report::CheckReport;
use qac_core::sampling::{is_resonant, sample_points};
use qac_core::{hecke, macdonald, operators, qseries};

use crate::{digits, parse_rat, Failure};

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Identities,
    Hecke,
    Orthogonality,
    Norms,
    IntegralReps,
    #[value(name = "appendixA")]
    AppendixA,
    #[value(name = "appendixB")]
    AppendixB,
    All,
}

#[derive(Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    suite: Suite,
    /// Seed for the random rational parameter points of the exact suites.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Number of random parameter points for the exact suites.
    #[arg(long, default_value_t = 5)]
    points: usize,
    /// Working precision in decimal digits (default: QAC_PRECISION or 60).
    #[arg(long)]
    precision: Option<usize>,
    #[arg(long, default_value_t = 3)]
    degmax: u32,
    #[arg(long, default_value_t = 2)]
    n: usize,
    /// Integral suites use t = q^k.
    #[arg(long, default_value_t = 1)]
    k: u32,
    #[arg(long, value_parser = parse_rat, allow_hyphen_values = true)]
    q: Option<Rational>,
    #[arg(long, value_parser = parse_rat, allow_hyphen_values = true)]
    t: Option<Rational>,
    #[arg(long, value_parser = parse_rat, allow_hyphen_values = true)]
    a: Option<Rational>,
}

struct Ctx<'a> {
    args: &'a VerifyArgs,
    digits: usize,
}

impl Ctx<'_> {
    fn n(&self) -> usize {
        self.args.n
    }

    fn degmax(&self) -> u32 {
        self.args.degmax
    }

    /// Tolerance exponent, capped so it stays above the comparison floor of the precision.
    fn tol(&self, e: i64) -> i64 {
        e.min(self.digits as i64 / 2 - 2)
    }

    /// The given point when `q, t, a` are all set, otherwise seeded random points.
    fn exact_points(&self, t_equals_q: bool) -> Result<Vec<ParamPoint>, Failure> {
        let a = self.args;
        if let (Some(q), Some(t), Some(av)) = (&a.q, &a.t, &a.a) {
            let t = if t_equals_q { q.clone() } else { t.clone() };
            let pt = ParamPoint::new(q.clone(), t, av.clone(), a.n);
            pt.check_exact()?;
            if is_resonant(&pt, a.degmax) {
                return Err(Failure { kind: "resonance", message: "resonant parameter point".into(), code: 3 });
            }
            return Ok(vec![pt]);
        }
        if !t_equals_q {
            return Ok(sample_points(a.seed, a.points, a.n, a.degmax));
        }
        // draw until enough points stay non-resonant with t replaced by q
        let mut out = Vec::new();
        let mut batch = a.points;
        while out.len() < a.points {
            out.clear();
            for mut pt in sample_points(a.seed, batch, a.n, a.degmax) {
                pt.t = pt.q.clone();
                if !is_resonant(&pt, a.degmax) && !out.contains(&pt) && out.len() < a.points {
                    out.push(pt);
                }
            }
            batch *= 2;
        }
        Ok(out)
    }

    /// Point for the integral suites: `q` (default 1/2), `a` (default -1), `t = q^k`.
    fn analytic_point(&self, n: usize) -> Result<ParamPoint, Failure> {
        let a = self.args;
        let q = a.q.clone().unwrap_or_else(|| rat(1, 2));
        let t = pow(&q, a.k as i64);
        if let Some(tt) = &a.t {
            if *tt != t {
                return Err(Failure::usage("the integral suites require t = q^k"));
            }
        }
        let av = a.a.clone().unwrap_or_else(|| rat(-1, 1));
        let pt = ParamPoint::new(q, t, av, n);
        pt.check_analytic()?;
        Ok(pt)
    }

    fn measure(&self, family: Family, n: usize) -> Result<QMeasure, Failure> {
        Ok(QMeasure::new(family, &self.analytic_point(n)?, self.digits)?)
    }
}

fn identities(c: &Ctx) -> Result<Vec<CheckReport>, Failure> {
    let d = c.degmax();
    let mut out = Vec::new();
    for pt in c.exact_points(false)? {
        out.extend(qseries::u1_properties_check(&pt, d as usize));
        out.extend(operators::one_variable_eigen_check(&pt, d as usize));
        for mu in partitions_up_to(d, pt.nvars) {
            match macdonald::lassalle_expansion_check(&mu, &pt, d) {
                Ok((r, _)) => out.extend(r),
                Err(e) => out.push(CheckReport::failure("P times inverse Pochhammer product", json!({"pt": pt.to_json()}), e.to_string())),
            }
        }
        out.extend(operators::commutator_checks(&pt, d));
        out.extend(operators::operator_b_checks(&pt, d));
        out.push(operators::operator_b_rho_check(&pt, d));
        out.push(kernels::inversion_relation_check(&pt, d));
        out.extend(kernels::specialization_checks(&pt, &rat(1, 3), d));
        out.extend(asc::structural_checks(&pt, d));
        out.extend(asc::eigen_equation_checks(&pt, d));
        out.extend(asc::route_agreement_checks(&pt, d, d.min(2)));
        let pt0 = pt.with_a(Rational::from_integer(0.into()));
        for lambda in partitions_up_to(d, pt.nvars) {
            out.extend(asc::shifted_vanishing_check(&lambda, &pt0));
        }
    }
    let pt = c.analytic_point(c.n())?;
    out.push(kernels::positivity_check(&pt, d));
    let x: Vec<Rational> = (0..c.n()).map(|i| rat(1, 2 + i as i64)).collect();
    let y: Vec<Rational> = (0..c.n()).map(|i| rat(1, 10 * (1 << i))).collect();
    out.push(kernels::tail_bound_check(KernelKind::F00, &x, &y, &pt, d, 2, c.digits));
    out.push(kernels::tail_bound_check(KernelKind::Psi00, &x, &y, &pt, d, 2, c.digits));
    Ok(out)
}

fn hecke_suite(c: &Ctx) -> Result<Vec<CheckReport>, Failure> {
    let d = c.degmax();
    let mut out = Vec::new();
    for pt in c.exact_points(false)? {
        out.extend(hecke::hecke_relation_checks(&pt, d));
        out.extend(hecke::dunkl_sum_checks(&pt, d));
        out.extend(hecke::commutator_dunkl_checks(&pt, d));
        out.extend(hecke::pairing_orthogonality_checks(&pt, d));
        out.extend(hecke::binomial_pairing_checks(&pt, d));
        for r in 1..=pt.nvars.min(d as usize) {
            out.extend(hecke::kernel_eigen_check(&pt, r, d));
        }
    }
    Ok(out)
}

fn orthogonality(c: &Ctx) -> Result<Vec<CheckReport>, Failure> {
    let d = c.degmax();
    let mut out = Vec::new();
    let u = c.measure(Family::U, c.n())?;
    out.extend(jackson::orthogonality_suite(&u, d, c.tol(15), c.tol(12)));
    out.extend(jackson::hermiticity_check(&u, d, c.tol(12)));
    if c.args.k == 1 {
        out.extend(jackson::kadell_check(&u, d, c.tol(12)));
    }
    let v = c.measure(Family::V, c.n())?;
    out.extend(jackson::orthogonality_suite(&v, d.min(2), c.tol(15), c.tol(12)));
    let pt1 = c.analytic_point(1)?;
    out.extend(jackson::one_variable_orthogonality(&pt1, d.max(1) as usize, c.digits, c.tol(20)));
    for p in 1..=2 {
        out.extend(jackson::uv_inversion_check(&pt1.q, p, 4 * c.digits, c.digits, c.tol(12)));
    }
    Ok(out)
}

fn norms(c: &Ctx) -> Result<Vec<CheckReport>, Failure> {
    let mut out = Vec::new();
    let u = c.measure(Family::U, c.n())?;
    out.push(jackson::mehta_check(&u, c.tol(12)));
    out.push(jackson::mehta_check(&c.measure(Family::V, c.n())?, c.tol(12)));
    out.extend(jackson::scaling_checks(&u, c.tol(12)));
    if c.args.k == 1 {
        out.extend(jackson::determinant_norm_checks(&u, c.degmax(), c.tol(12)));
    }
    let pt = c.analytic_point(c.n())?;
    let avals = [rat(-1, 100), rat(-1, 1000), rat(-1, 10000)];
    out.push(jackson::asym_trend(&pt.q, c.args.k, c.n(), &avals, c.digits));
    let pt1 = c.analytic_point(1)?.with_qt(pt.q.clone(), pt.q.clone());
    let xs = [rat(1, 1), rat(1, 9), rat(-1, 6), rat(2, 7)];
    out.extend(jackson::w_b_reduction_check(&pt1, &xs, c.digits, c.tol(25)));
    Ok(out)
}

fn integral_reps(c: &Ctx) -> Result<Vec<CheckReport>, Failure> {
    let n = c.n();
    let u = c.measure(Family::U, n)?;
    // beyond two variables shrink y so that max|y| t^{1-n} stays at 1/10 or below
    let shrink = if n <= 2 { Rational::from_integer(1.into()) } else { pow(&u.pt.t, n as i64 - 1) };
    let y: Vec<Rational> = (0..n).map(|i| &shrink * rat(1, 10 * (1 << i))).collect();
    let (kernel_deg, tol) = if n == 1 { (14, 8) } else { (18, 6) };
    let mut out = if n == 1 {
        jackson::integral_representations(&u, &y, &[rat(1, 20)], kernel_deg, c.degmax().min(2), c.tol(tol))
    } else {
        jackson::integral_representations(&u, &y, &y, kernel_deg, c.degmax().min(2), c.tol(tol))
    };
    if n == 1 {
        let pt = c.analytic_point(1)?;
        out.extend(jackson::v_side_representations(&pt, &rat(1, 10), &rat(1, 20), 12, c.degmax().min(2) as usize, c.digits, c.tol(8)));
    }
    Ok(out)
}

fn column_suite(c: &Ctx) -> Result<Vec<CheckReport>, Failure> {
    let mut out = Vec::new();
    for pt in c.exact_points(false)? {
        out.extend(asc::column_expansion_checks(&pt, 3));
        out.extend(asc::telescoping_checks(&pt, 6));
    }
    Ok(out)
}

fn determinant_suite(c: &Ctx) -> Result<Vec<CheckReport>, Failure> {
    let mut out = Vec::new();
    for pt in c.exact_points(true)? {
        out.extend(asc::det_formula_checks(&pt, c.degmax()));
    }
    let pt = c.analytic_point(c.n())?;
    let meas = QMeasure::new(Family::U, &pt.with_qt(pt.q.clone(), pt.q.clone()), c.digits)?;
    out.extend(jackson::determinant_norm_checks(&meas, c.degmax(), c.tol(12)));
    Ok(out)
}

/// Runs the selected suite; returns the sorted report array and whether every check passed.
pub fn run(args: &VerifyArgs) -> Result<(Value, bool), Failure> {
    if args.n == 0 {
        return Err(Failure::usage("--n must be positive"));
    }
    if args.points == 0 {
        return Err(Failure::usage("--points must be positive"));
    }
    if args.k == 0 {
        return Err(Failure::usage("--k must be positive"));
    }
    let c = Ctx { args, digits: digits(args.precision)? };
    type SuiteFn = fn(&Ctx) -> Result<Vec<CheckReport>, Failure>;
    let table: [(Suite, SuiteFn); 7] = [
        (Suite::Identities, identities),
        (Suite::Hecke, hecke_suite),
        (Suite::Orthogonality, orthogonality),
        (Suite::Norms, norms),
        (Suite::IntegralReps, integral_reps),
        (Suite::AppendixA, column_suite),
        (Suite::AppendixB, determinant_suite),
    ];
    let mut reports = Vec::new();
    for (s, f) in table {
        if args.suite == s || args.suite == Suite::All {
            reports.extend(f(&c)?);
        }
    }
    reports.sort_by(|a, b| a.check.cmp(&b.check));
    let ok = reports.iter().all(|r| r.pass);
    Ok((serde_json::to_value(&reports).expect("serialisable"), ok))
}
