use kbracket::diagram::{expand, pd_read, pd_write, Convention};
use kbracket::{
    parse_tangle, BracketPair, Closure, EvalMode, Evaluator, LaurentPoly, Modulus, TangleExpr,
};
use num_bigint::BigInt;
use proptest::prelude::*;

const CASES: u32 = 1000;

fn coefficient() -> impl Strategy<Value = BigInt> {
    prop_oneof![
        4 => (-5i64..=5).prop_map(BigInt::from),
        1 => any::<i128>().prop_map(BigInt::from),
    ]
}

fn poly() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((-12i64..12, coefficient()), 0..8).prop_map(LaurentPoly::from_terms)
}

fn pair() -> impl Strategy<Value = BracketPair> {
    (poly(), poly()).prop_map(|(f, g)| BracketPair::new(f, g))
}

fn modulus() -> impl Strategy<Value = Modulus> {
    prop_oneof![
        (2u64..1000).prop_map(|m| Modulus::new(m).unwrap()),
        (1u32..70).prop_map(Modulus::power_of_two)
    ]
}

fn expr() -> impl Strategy<Value = TangleExpr> {
    let leaf = prop_oneof![
        Just(TangleExpr::Zero),
        Just(TangleExpr::Infinity),
        (-3i64..=3)
            .prop_filter("nonzero", |k| *k != 0)
            .prop_map(TangleExpr::Twist),
        (-3i64..=3)
            .prop_filter("nonzero", |k| *k != 0)
            .prop_map(TangleExpr::VTwist),
    ];
    leaf.prop_recursive(4, 12, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| TangleExpr::sum(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| TangleExpr::star(a, b)),
            inner.prop_map(TangleExpr::mirror),
        ]
    })
}

fn exact(e: &TangleExpr) -> BracketPair {
    Evaluator::new(EvalMode::Exact).eval(e)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(CASES))]

    #[test]
    fn addition_is_an_abelian_group(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!((&a + &b) + &c, &a + (&b + &c));
        prop_assert_eq!(&a + LaurentPoly::zero(), a.clone());
        prop_assert!((&a - &a.clone()).is_zero());
        prop_assert!((&a + -&a).is_zero());
    }

    #[test]
    fn multiplication_is_a_commutative_monoid(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!((&a * &b) * &c, &a * (&b * &c));
        prop_assert_eq!(&a * LaurentPoly::one(), a.clone());
        prop_assert!((&a * LaurentPoly::zero()).is_zero());
    }

    #[test]
    fn multiplication_distributes(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(&a * (&b + &c), &a * &b + &a * &c);
    }

    #[test]
    fn powers_and_squares(a in poly(), n in 0u64..6) {
        prop_assert_eq!(a.square(), &a * &a);
        let mut want = LaurentPoly::one();
        for _ in 0..n {
            want = &want * &a;
        }
        prop_assert_eq!(a.pow(n), want);
    }

    #[test]
    fn shifts_are_monomial_products(a in poly(), k in -40i64..40) {
        prop_assert_eq!(a.shift(k), &a * LaurentPoly::monomial(1, k));
    }

    #[test]
    fn mirror_is_an_involutive_ring_map(a in poly(), b in poly()) {
        prop_assert_eq!(a.mirror().mirror(), a.clone());
        prop_assert_eq!((&a + &b).mirror(), a.mirror() + b.mirror());
        prop_assert_eq!((&a * &b).mirror(), a.mirror() * b.mirror());
        prop_assert_eq!(LaurentPoly::delta().mirror(), LaurentPoly::delta());
    }

    #[test]
    fn reduction_is_a_ring_map(a in poly(), b in poly(), m in modulus()) {
        let r = |p: &LaurentPoly| p.mod_reduce(&m);
        prop_assert_eq!(r(&(&a + &b)), r(&(r(&a) + r(&b))));
        prop_assert_eq!(r(&(&a * &b)), r(&(r(&a) * r(&b))));
        prop_assert_eq!(r(&r(&a)), r(&a));
        for (_, c) in r(&a).terms() {
            prop_assert!(*c > BigInt::from(0) && c < m.value());
        }
        prop_assert!(a.is_congruent(&r(&a), &m));
    }

    #[test]
    fn polynomial_text_round_trips(a in poly()) {
        let text = a.to_string();
        prop_assert_eq!(text.parse::<LaurentPoly>().unwrap(), a);
    }

    #[test]
    fn pair_units(a in pair()) {
        prop_assert_eq!(a.hsum(&BracketPair::zero_tangle()), a.clone());
        prop_assert_eq!(BracketPair::zero_tangle().hsum(&a), a.clone());
        prop_assert_eq!(a.vsum(&BracketPair::infinity_tangle()), a.clone());
        prop_assert_eq!(BracketPair::infinity_tangle().vsum(&a), a.clone());
    }

    #[test]
    fn pair_sums_commute_and_associate(a in pair(), b in pair(), c in pair()) {
        prop_assert_eq!(a.hsum(&b), b.hsum(&a));
        prop_assert_eq!(a.vsum(&b), b.vsum(&a));
        prop_assert_eq!(a.hsum(&b).hsum(&c), a.hsum(&b.hsum(&c)));
        prop_assert_eq!(a.vsum(&b).vsum(&c), a.vsum(&b.vsum(&c)));
    }

    #[test]
    fn pair_doubling_and_symmetries(a in pair(), b in pair()) {
        prop_assert_eq!(a.hsum_double(), a.hsum(&a));
        prop_assert_eq!(a.vsum_double(), a.vsum(&a));
        prop_assert_eq!(a.hsum(&b).swap(), a.swap().vsum(&b.swap()));
        prop_assert_eq!(a.hsum(&b).mirror(), a.mirror().hsum(&b.mirror()));
        prop_assert_eq!(a.vsum(&b).mirror(), a.mirror().vsum(&b.mirror()));
    }

    #[test]
    fn evaluation_respects_mirror_and_reduction(e in expr(), m in modulus()) {
        let p = exact(&e);
        prop_assert_eq!(exact(&TangleExpr::mirror(e.clone())), p.mirror());
        prop_assert_eq!(exact(&TangleExpr::sum(e.clone(), TangleExpr::Zero)), p.clone());
        prop_assert_eq!(exact(&TangleExpr::star(e.clone(), TangleExpr::Infinity)), p.clone());
        let modular = Evaluator::new(EvalMode::Modular(m.clone())).eval(&e);
        prop_assert_eq!(modular, p.mod_reduce(&m));
    }

    #[test]
    fn expression_text_round_trips(e in expr()) {
        let text = e.to_string();
        prop_assert_eq!(parse_tangle(&text).unwrap(), e);
    }

    #[test]
    fn pd_text_round_trips(e in expr(), num in any::<bool>()) {
        prop_assume!(e.crossing_count() > 0);
        let closure = if num { Closure::Num } else { Closure::Den };
        let link = expand(&e).close(closure);
        let text = pd_write(&link);
        let back = pd_read(&text).unwrap();
        prop_assert_eq!(pd_write(&back), text);
        prop_assert_eq!(back.crossing_count(), link.crossing_count());
        prop_assert_eq!(back.component_count(), link.component_count());
        prop_assert_eq!(back.writhe(), link.writhe());
        prop_assert!(back.is_planar());
        prop_assert!(back.orient(Convention::FirstStrand).is_ok());
    }
}
