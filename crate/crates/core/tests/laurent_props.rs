use cluster_surface::{Exponents, LaurentPoly};
use num_bigint::BigInt;
use proptest::prelude::*;

fn monomial() -> impl Strategy<Value = (Exponents, BigInt)> {
    (
        prop::collection::vec((1u32..6, -3i32..4), 0..4),
        -5i64..6,
    )
        .prop_map(|(pairs, c)| (Exponents::from_pairs(pairs), BigInt::from(c)))
}

fn poly() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec(monomial(), 0..5).prop_map(LaurentPoly::from_terms)
}

/// Polynomials in which `x1` only has non-negative exponents.
fn poly_in_x1() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((monomial(), 0i32..3), 0..5).prop_map(|ts| {
        LaurentPoly::from_terms(ts.into_iter().map(|((e, c), k)| {
            let rest = Exponents::from_pairs(e.iter().filter(|&(v, _)| v != 1));
            (rest.mul(&Exponents::var(1).pow(k)), c)
        }))
    })
}

proptest! {
    #[test]
    fn ring_axioms(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &LaurentPoly::one(), a.clone());
    }

    #[test]
    fn display_parses_back(a in poly()) {
        let text = a.to_string();
        let back: LaurentPoly = text.parse().unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn json_round_trip(a in poly()) {
        prop_assert_eq!(LaurentPoly::from_json(&a.to_json()).unwrap(), a);
    }

    #[test]
    fn exact_division_undoes_multiplication(a in poly(), b in poly()) {
        prop_assume!(!b.is_zero());
        let prod = &a * &b;
        prop_assert_eq!(prod.exact_div(&b).unwrap(), a);
    }

    #[test]
    fn fraction_form_recombines(a in poly()) {
        prop_assume!(!a.is_zero());
        let (num, den) = a.reduced_fraction_form().unwrap();
        prop_assert!(den.iter().all(|(_, e)| e > 0));
        let back = num.exact_div(&LaurentPoly::monomial(BigInt::from(1), den)).unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn substitution_is_a_homomorphism(a in poly_in_x1(), b in poly_in_x1(), v in poly()) {
        let sa = a.substitute(1, &v).unwrap();
        let sb = b.substitute(1, &v).unwrap();
        prop_assert_eq!((&a * &b).substitute(1, &v).unwrap(), &sa * &sb);
        prop_assert_eq!((&a + &b).substitute(1, &v).unwrap(), &sa + &sb);
    }
}
