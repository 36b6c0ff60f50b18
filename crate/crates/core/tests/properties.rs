use proptest::prelude::*;

use qac_core::algebra::rational::pow;
use qac_core::algebra::symmetric::schur;
use qac_core::algebra::{from_monomial_basis, rat, to_monomial_basis, MPoly, ParamPoint, Rational};
use qac_core::asc::{asc_u, asc_u_eigen, Route};
use qac_core::hecke::{h_form2, t_op};
use qac_core::macdonald::{expand_in_p, macdonald_p};
use qac_core::operators::{h_form1, m1_tilde_partial};
use qac_core::partition::{
    eigenvalue_e_tilde, hook_products, partitions_of, partitions_up_to, principal_specialization, Partition,
};
use qac_core::sampling::{is_resonant, sample_points};

fn small_rat() -> impl Strategy<Value = Rational> {
    (-5i64..=5, 1i64..=4).prop_map(|(p, q)| rat(p, q))
}

fn poly(n: usize, deg: u32) -> impl Strategy<Value = MPoly> {
    prop::collection::vec((prop::collection::vec(0..=deg, n), small_rat()), 0..6)
        .prop_map(move |terms| MPoly::from_terms(n, terms))
}

fn partition(max: u32, len: usize) -> impl Strategy<Value = Partition> {
    let all = partitions_up_to(max, len);
    (0..all.len()).prop_map(move |i| all[i].clone())
}

/// Non-resonant point at `degmax` drawn from the seeded sampler.
fn point(n: usize, degmax: u32) -> impl Strategy<Value = ParamPoint> {
    any::<u64>().prop_map(move |s| sample_points(s, 1, n, degmax).remove(0))
}

fn well_formed(p: &MPoly, n: usize) -> bool {
    p.terms().all(|(m, c)| m.0.len() == n && *c != Rational::from_integer(0.into()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ring_laws(a in poly(3, 3), b in poly(3, 3), c in poly(3, 3)) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        let d = &(&a * &b) - &(&b * &a);
        prop_assert!(d.is_zero());
        prop_assert!(well_formed(&(&a * &b), 3) && well_formed(&(&a - &a), 3));
    }

    #[test]
    fn exact_division_round_trip(p in poly(2, 4), d in poly(2, 4)) {
        prop_assume!(!d.is_zero());
        prop_assert_eq!((&p * &d).exact_divide(&d).unwrap(), p);
    }

    #[test]
    fn symmetric_round_trip(lams in prop::collection::vec((partition(6, 4), small_rat()), 0..5)) {
        let sym = from_monomial_basis(lams.iter().map(|(l, c)| (l, c)), 4).unwrap();
        let back = to_monomial_basis(&sym).unwrap();
        prop_assert_eq!(from_monomial_basis(back.iter(), 4).unwrap(), sym);
    }

    #[test]
    fn conjugation(lam in partition(6, 6)) {
        let c = lam.conjugate();
        prop_assert_eq!(c.conjugate(), lam.clone());
        prop_assert_eq!(c.size(), lam.size());
        let expect: u64 = lam.parts().iter().map(|&l| (l as u64) * (l as u64).saturating_sub(1) / 2).sum();
        prop_assert_eq!(c.b_stat(), expect);
        prop_assert!(lam.parts().windows(2).all(|w| w[0] >= w[1]) && lam.parts().iter().all(|&p| p > 0));
    }

    #[test]
    fn hook_duality(lam in partition(5, 5), pt in point(2, 3)) {
        let (h, _) = hook_products(&lam, &pt);
        let swapped = pt.with_qt(pt.t.clone(), pt.q.clone());
        let (_, hp) = hook_products(&lam.conjugate(), &swapped);
        prop_assert_eq!(h, hp);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn macdonald_invariants(kappa in partition(4, 3), pt in point(3, 4), c in small_rat()) {
        let p = macdonald_p(&kappa, &pt).unwrap();
        let inv = macdonald_p(&kappa, &pt.inverted()).unwrap();
        prop_assert_eq!(&*p, &*inv);
        prop_assert_eq!(p.dilate(&c), p.scale(&pow(&c, kappa.size() as i64)));
        let tdelta: Vec<Rational> = (0..3).map(|i| pow(&pt.t, i)).collect();
        prop_assert_eq!(p.eval(&tdelta), principal_specialization(&kappa, &pt).unwrap());
        let et = eigenvalue_e_tilde(&kappa, &pt.q, &pt.t, 3);
        prop_assert_eq!(m1_tilde_partial(&p, &pt, 3).unwrap(), p.scale(&et));
    }

    #[test]
    fn schur_at_t_equal_q(kappa in partition(4, 3), pt in point(3, 4)) {
        let pt = pt.with_qt(pt.q.clone(), pt.q.clone());
        prop_assume!(!is_resonant(&pt, 4));
        prop_assert_eq!(&*macdonald_p(&kappa, &pt).unwrap(), &schur(&kappa, 3).unwrap());
    }

    #[test]
    fn hecke_quadratic(m in prop::collection::vec(0u32..=3, 3), pt in point(3, 3), i in 1usize..=2) {
        let f = MPoly::from_terms(3, [(m, Rational::from_integer(1.into()))]);
        let tf = t_op(i, false, &f, &pt).unwrap();
        let ttf = t_op(i, false, &tf, &pt).unwrap();
        // (T - t)(T + 1) f = T²f + (1 - t) Tf - t f
        let one = Rational::from_integer(1.into());
        let z = &(&ttf + &tf.scale(&(&one - &pt.t))) - &f.scale(&pt.t);
        prop_assert!(z.is_zero());
        let back = t_op(i, true, &tf, &pt).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn operator_forms_agree(coeffs in prop::collection::vec(small_rat(), 7), pt in point(3, 4)) {
        let basis: Vec<Partition> = (0..=3).flat_map(|d| partitions_of(d, 3)).collect();
        let f = from_monomial_basis(basis.iter().zip(coeffs.iter()), 3).unwrap();
        prop_assert_eq!(h_form1(&pt).apply(&f).unwrap(), h_form2(&f, &pt).unwrap());
    }

    #[test]
    fn u_routes_and_leading_term(kappa in partition(3, 2), pt in point(2, 3)) {
        let e = asc_u_eigen(&kappa, &pt).unwrap().poly;
        prop_assert_eq!(&asc_u(&kappa, &pt, Route::Genfun).unwrap().poly, &e);
        prop_assert_eq!(&asc_u(&kappa, &pt, Route::Expop).unwrap().poly, &e);
        let lead = expand_in_p(&e, &pt).unwrap();
        prop_assert_eq!(lead.get(&kappa), Some(&Rational::from_integer(1.into())));
        prop_assert!(lead.keys().all(|nu| nu == &kappa || nu.size() < kappa.size()));
    }
}

#[test]
fn sampler_is_deterministic_and_non_resonant() {
    for seed in 0..20 {
        let pts = sample_points(seed, 5, 3, 4);
        assert_eq!(pts, sample_points(seed, 5, 3, 4));
        assert!(pts.iter().all(|p| !is_resonant(p, 4)));
    }
}
