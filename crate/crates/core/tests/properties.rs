use num_bigint::BigInt;
use proptest::prelude::*;

use e3_core::arith::{hclass_div, rat, Exp, HClass, MPoly, Rat, Vars};
use e3_core::bott::{
    check_generic, flag_euler_characteristic, lines_on_cubic_surface, projective_space_integral,
    total_degree,
};
use e3_core::flags::{WeightVector, DEFAULT_WEIGHTS};
use e3_core::ideals::{groebner, ideal_equal, Ideal};

fn vars() -> Vars {
    Vars::new(["x", "y", "z"])
}

fn small_rat() -> impl Strategy<Value = Rat> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

fn poly(max_terms: usize, max_exp: u16) -> impl Strategy<Value = MPoly> {
    prop::collection::vec(
        (prop::array::uniform3(0..=max_exp), small_rat()),
        0..=max_terms,
    )
    .prop_map(|ts| {
        let v = vars();
        MPoly::from_terms(&v, ts.into_iter().map(|(e, c)| (Exp::from_slice(&e), c)))
    })
}

fn nonzero_poly(max_terms: usize, max_exp: u16) -> impl Strategy<Value = MPoly> {
    poly(max_terms, max_exp).prop_filter("nonzero", |p| !p.is_zero())
}

fn distinct_weights(n: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::btree_set(-40i64..40, n)
        .prop_map(|s| s.into_iter().collect::<Vec<_>>())
        .prop_shuffle()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(p in poly(4, 3), q in poly(4, 3), r in poly(4, 3)) {
        prop_assert_eq!(&(&p + &q) * &r, &(&p * &r) + &(&q * &r));
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        prop_assert!((&p - &p).is_zero());
    }

    #[test]
    fn leibniz(p in poly(4, 3), q in poly(4, 3), i in 0usize..3) {
        let lhs = (&p * &q).derivative(i);
        let rhs = &(&p.derivative(i) * &q) + &(&p * &q.derivative(i));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn exact_divide_round_trip(p in nonzero_poly(4, 3), i in 0usize..3, k in 0u32..4) {
        let v = p.vars().clone();
        let m = MPoly::var(&v, i).pow(k);
        let (q, got) = (&p * &m).exact_divide(i, k);
        prop_assert_eq!(got, k);
        prop_assert_eq!(&q * &m, &p * &m);
        let (q, got) = p.exact_divide(i, u32::MAX);
        prop_assert_eq!(&q * &MPoly::var(&v, i).pow(got), p);
    }

    #[test]
    fn div_exact_round_trip(p in poly(4, 2), h in nonzero_poly(3, 2)) {
        prop_assert_eq!((&p * &h).div_exact(&h), Some(p));
    }

    #[test]
    fn display_parses_back(p in poly(5, 3)) {
        prop_assert_eq!(MPoly::parse(p.vars(), &p.to_string()).unwrap(), p);
    }

    #[test]
    fn compose_is_a_ring_map(p in poly(3, 2), q in poly(3, 2), a in poly(2, 2), b in poly(2, 2)) {
        let v = vars();
        let images = [a, b, MPoly::var(&v, 2)];
        let c = |f: &MPoly| f.compose(&images, &v);
        prop_assert_eq!(c(&(&p * &q)), &c(&p) * &c(&q));
        prop_assert_eq!(c(&(&p + &q)), &c(&p) + &c(&q));
    }

    #[test]
    fn hclass_division_inverts_multiplication(
        a0 in small_rat(), a1 in small_rat(), b0 in small_rat(), b1 in small_rat()
    ) {
        prop_assume!(b0 != Rat::from_integer(BigInt::from(0)));
        let a = HClass::new(a0, a1);
        let b = HClass::new(b0, b1);
        prop_assert_eq!(hclass_div(&(&a * &b), &b).unwrap(), a);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn ideal_is_unchanged_by_unit_scaling(g in prop::collection::vec(nonzero_poly(3, 2), 1..=3), c in small_rat()) {
        prop_assume!(c != Rat::from_integer(BigInt::from(0)));
        let v = vars();
        let i = Ideal::new(&v, g.clone());
        let j = Ideal::new(&v, g.iter().map(|p| p.scale(&c)).collect());
        prop_assert!(ideal_equal(&i, &j));
    }

    #[test]
    fn groebner_is_idempotent(g in prop::collection::vec(nonzero_poly(3, 2), 1..=3)) {
        let i = Ideal::new(&vars(), g);
        let once = groebner(&i);
        let twice = groebner(&once);
        prop_assert_eq!(once.groebner(), twice.groebner());
    }

    #[test]
    fn generators_and_multiples_are_members(
        g in prop::collection::vec(nonzero_poly(3, 2), 1..=3), p in poly(3, 2), k in 0usize..3
    ) {
        let i = Ideal::new(&vars(), g.clone());
        let m = &p * &g[k % g.len()];
        prop_assert!(i.contains(&m));
        prop_assert!(i.normal_form(&m).is_zero());
    }

    #[test]
    fn saturation_recovers_the_ideal(g in prop::collection::vec(nonzero_poly(3, 2), 1..=2), f in nonzero_poly(2, 1)) {
        let v = vars();
        let i = Ideal::new(&v, g.clone());
        let times = Ideal::new(&v, g.iter().map(|p| p * &f).collect());
        prop_assert!(times.saturate(&f).contains_ideal(&i));
    }

    #[test]
    fn projective_space_has_degree_one(w in (1usize..=5).prop_flat_map(distinct_weights)) {
        prop_assert_eq!(projective_space_integral(&w).unwrap(), rat(1, 1));
    }

    #[test]
    fn classical_numbers_do_not_depend_on_weights(w in distinct_weights(4)) {
        let w = WeightVector::new([w[0], w[1], w[2], w[3]]).unwrap();
        prop_assert_eq!(flag_euler_characteristic(&w).unwrap(), rat(24, 1));
        prop_assert_eq!(lines_on_cubic_surface(&w).unwrap(), rat(27, 1));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn degree_is_invariant_under_translation_and_scaling(c in -500i64..500, s in 2i64..30) {
        let base = WeightVector::new(DEFAULT_WEIGHTS).unwrap();
        let want = BigInt::from(168208);
        for w in [base.translated(c), base.scaled(s).unwrap(), base.scaled(-s).unwrap()] {
            prop_assume!(check_generic(&w).is_ok());
            prop_assert_eq!(&total_degree(&w).unwrap().degree, &want);
        }
    }

    #[test]
    fn degree_at_random_generic_weights(w in distinct_weights(4)) {
        let w = WeightVector::new([w[0], w[1], w[2], w[3]]).unwrap();
        prop_assume!(check_generic(&w).is_ok());
        prop_assert_eq!(total_degree(&w).unwrap().degree, BigInt::from(168208));
    }
}
