//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use qac_core::algebra::rational::{int, rat};
use qac_core::algebra::{ParamPoint, Rational};
use qac_core::asc::{
    column_expansion_checks, det_formula_checks, eigen_equation_checks, hermite_trend, route_agreement_checks,
    shifted_vanishing_check, structural_checks, telescoping_checks, Family,
};
use qac_core::hecke::{commutator_dunkl_checks, hecke_relation_checks, dunkl_sum_checks, pairing_orthogonality_checks};
use qac_core::jackson::{
    asym_trend, hermiticity_check, integral_representations, mehta_check, one_variable_orthogonality,
    orthogonality_suite, determinant_norm_checks, QMeasure,
};
use qac_core::operators::commutator_checks;
use qac_core::partition::{partitions_up_to, Partition};
use qac_core::report::CheckReport;
use qac_core::sampling::sample_points;

const SEED: u64 = 20240501;
const DIGITS: usize = 60;

struct Outcome {
    total: usize,
    failed: Vec<CheckReport>,
    note: String,
}

impl Outcome {
    fn new() -> Self {
        Outcome { total: 0, failed: Vec::new(), note: String::new() }
    }

    fn add(&mut self, reps: impl IntoIterator<Item = CheckReport>) {
        for r in reps {
            self.total += 1;
            if !r.pass {
                self.failed.push(r);
            }
        }
    }

    fn fail(&mut self, why: String) {
        self.note = why;
    }

    fn pass(&self) -> bool {
        self.total > 0 && self.failed.is_empty() && self.note.is_empty()
    }
}

fn measure(family: Family, q: Rational, k: u32, a: Rational, n: usize) -> QMeasure {
    let t = qac_core::algebra::rational::pow(&q, k as i64);
    QMeasure::new(family, &ParamPoint::new(q, t, a, n), DIGITS).expect("valid measure")
}

fn half() -> Rational {
    rat(1, 2)
}

fn a_values() -> [Rational; 2] {
    [int(-1), rat(-1, 2)]
}

fn one_variable() -> Outcome {
    let mut o = Outcome::new();
    let start = Instant::now();
    for a in a_values() {
        let pt = ParamPoint::new(half(), half(), a, 1);
        o.add(one_variable_orthogonality(&pt, 6, DIGITS, 20));
    }
    let el = start.elapsed();
    if el > Duration::from_secs(10) {
        o.fail(format!("took {el:?}, limit 10s"));
    }
    o
}

fn mehta() -> Outcome {
    let mut o = Outcome::new();
    for n in [2, 3] {
        for k in [1, 2] {
            for a in a_values() {
                o.add([mehta_check(&measure(Family::U, half(), k, a, n), 12)]);
            }
        }
    }
    o
}

fn gram() -> Outcome {
    let mut o = Outcome::new();
    for k in [1, 2] {
        for a in a_values() {
            o.add(orthogonality_suite(&measure(Family::U, half(), k, a, 2), 3, 15, 12));
        }
    }
    o
}

fn eigen_equation() -> Outcome {
    let mut o = Outcome::new();
    for n in [2, 3] {
        for pt in sample_points(SEED, 5, n, 4) {
            o.add(eigen_equation_checks(&pt, 4));
        }
    }
    o
}

fn routes() -> Outcome {
    let mut o = Outcome::new();
    for n in [2, 3] {
        for pt in sample_points(SEED + 1, 5, n, 4) {
            o.add(route_agreement_checks(&pt, 4, 2));
        }
    }
    o
}

fn column_expansions() -> Outcome {
    let mut o = Outcome::new();
    for n in 1..=5 {
        for pt in sample_points(SEED + 2, 2, n, 4) {
            o.add(column_expansion_checks(&pt, 3));
        }
    }
    for pt in sample_points(SEED + 2, 2, 2, 4) {
        o.add(telescoping_checks(&pt, 6));
    }
    o
}

fn determinant() -> Outcome {
    let mut o = Outcome::new();
    for n in [2, 3] {
        for mut pt in sample_points(SEED + 3, 3, n, 4) {
            pt.t = pt.q.clone();
            if qac_core::sampling::is_resonant(&pt, 4) {
                continue;
            }
            o.add(det_formula_checks(&pt, 4));
        }
        for a in a_values() {
            o.add(determinant_norm_checks(&measure(Family::U, half(), 1, a, n), 3, 12));
        }
    }
    o
}

fn structure() -> Outcome {
    let mut o = Outcome::new();
    for n in [2, 3] {
        for pt in sample_points(SEED + 4, 5, n, 4) {
            o.add(structural_checks(&pt, 3));
            let pt0 = pt.with_a(int(0));
            let lambdas: Vec<Partition> = partitions_up_to(3, n);
            for lambda in &lambdas {
                o.add(shifted_vanishing_check(lambda, &pt0));
            }
            o.add(pairing_orthogonality_checks(&pt, 3));
            o.add(hecke_relation_checks(&pt, 3));
            o.add(dunkl_sum_checks(&pt, 3));
            o.add(commutator_dunkl_checks(&pt, 3));
            o.add(commutator_checks(&pt, 3));
        }
    }
    o
}

fn integral_reps() -> Outcome {
    let mut o = Outcome::new();
    let m1 = measure(Family::U, half(), 1, int(-1), 1);
    o.add(integral_representations(&m1, &[rat(1, 10)], &[rat(1, 20)], 14, 3, 8));
    let m2 = measure(Family::U, half(), 1, int(-1), 2);
    let y = [rat(1, 10), rat(1, 20)];
    o.add(integral_representations(&m2, &y, &y, 18, 2, 6));
    for k in [1, 2] {
        for a in a_values() {
            o.add(hermiticity_check(&measure(Family::U, half(), k, a, 2), 3, 12));
        }
    }
    o
}

fn trends() -> Outcome {
    let mut o = Outcome::new();
    let qs = [rat(9, 10), rat(99, 100), rat(999, 1000)];
    o.add([hermite_trend(&Partition::new(vec![2]), &[half(), rat(-1, 3)], &qs, 40)]);
    let avals = [rat(-1, 100), rat(-1, 1000), rat(-1, 10000)];
    o.add([asym_trend(&half(), 1, 2, &avals, 40)]);
    o
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("one-variable orthogonality", one_variable),
        ("constant term normalisation", mehta),
        ("Gram matrix", gram),
        ("eigen-equation", eigen_equation),
        ("route agreement", routes),
        ("column expansions", column_expansions),
        ("determinant formula and norms", determinant),
        ("structural identities", structure),
        ("integral representations and Hermiticity", integral_reps),
        ("limit trends", trends),
    ];
    let results: Vec<(usize, Outcome, Duration)> = criteria
        .iter()
        .enumerate()
        .map(|(i, (_, f))| {
            let start = Instant::now();
            let o = f();
            (i, o, start.elapsed())
        })
        .collect();
    let mut all = true;
    for (i, o, el) in results {
        let status = if o.pass() { "PASS" } else { "FAIL" };
        all &= o.pass();
        println!("criterion {:>2} {status} {} ({} checks, {:.1}s)", i + 1, criteria[i].0, o.total, el.as_secs_f64());
        if !o.note.is_empty() {
            println!("    {}", o.note);
        }
        for r in o.failed.iter().take(5) {
            println!("    {}", serde_json::to_string(r).unwrap());
        }
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
