use proptest::prelude::*;

use loewylab::localring::ArtinAlgebra;
use loewylab::oracle::{betti_by_linear_algebra, loewy_length_brute, TruncatedIdeal};
use loewylab::resolve::{min_resolution, residue_field_presentation};
use loewylab::stdbasis::{Limits, QuotientRing};
use loewylab::{Model, Monomial, Polynomial, PrimeField, RingSpec};

fn field() -> PrimeField {
    PrimeField::default()
}

/// A polynomial in two variables with terms of degree `1..=4`.
fn poly2() -> impl Strategy<Value = Polynomial> {
    prop::collection::vec(((0u16..4, 0u16..4), 1u32..32003), 1..4).prop_map(|terms| {
        let terms = terms
            .into_iter()
            .filter(|((a, b), _)| a + b > 0)
            .map(|((a, b), c)| (Monomial::from_exps(&[a, b]), c))
            .collect();
        Polynomial::from_terms(field(), 2, terms)
    })
}

/// Artinian ideals `(x^a, y^b, f, g)` of `k[[x, y]]`.
fn artinian2() -> impl Strategy<Value = Vec<Polynomial>> {
    (2u16..6, 2u16..6, poly2(), poly2()).prop_map(|(a, b, f, g)| {
        let mut gens = vec![
            Polynomial::monomial(field(), Monomial::from_exps(&[a, 0]), 1),
            Polynomial::monomial(field(), Monomial::from_exps(&[0, b]), 1),
        ];
        gens.extend([f, g].into_iter().filter(|p| !p.is_zero()));
        gens
    })
}

fn spec(gens: Vec<Polynomial>) -> RingSpec {
    RingSpec::new(field(), vec!["x".into(), "y".into()], gens, Model::Local).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn loewy_length_matches_brute_force(gens in artinian2()) {
        let alg = ArtinAlgebra::new(field(), 2, &gens, &[], Limits::none()).unwrap();
        let brute = loewy_length_brute(field(), 2, &gens, 32).unwrap();
        prop_assert_eq!(alg.loewy_length(), brute);
        prop_assert_eq!(alg.loewy_length_by_products(), brute);
        let t = TruncatedIdeal::new(field(), 2, &gens, brute + 1);
        prop_assert_eq!(alg.dim(), t.colength(brute));
    }

    #[test]
    fn truncated_algebra_is_exact_or_declines(gens in artinian2(), cap in 1u32..8) {
        let r = spec(gens);
        let full = ArtinAlgebra::from_ring(&r, &[], Limits::none()).unwrap();
        match ArtinAlgebra::below(&r, &[], cap, Limits::none()).unwrap() {
            Some(a) => {
                prop_assert!(full.loewy_length() < cap);
                prop_assert_eq!(a.loewy_length(), full.loewy_length());
                prop_assert_eq!(&a.std_monomials, &full.std_monomials);
            }
            None => prop_assert!(full.loewy_length() >= cap),
        }
    }

    #[test]
    fn ideal_members_reduce_to_zero(gens in artinian2(), h in poly2(), k in poly2()) {
        let q = QuotientRing::new(field(), 2, &gens, Limits::none()).unwrap();
        let unit = Polynomial::one(field(), 2).add(&k);
        let member = gens[2.min(gens.len() - 1)].mul(&h).add(&gens[0].mul(&unit));
        prop_assert!(q.is_zero(&member).unwrap());
    }

    #[test]
    fn residue_field_betti_numbers_agree(gens in artinian2()) {
        let q = QuotientRing::new(field(), 2, &gens, Limits::none()).unwrap();
        let alg = ArtinAlgebra::new(field(), 2, &gens, &[], Limits::none()).unwrap();
        let pres = residue_field_presentation(&q);
        let res = min_resolution(&q, &pres, 1, 3).unwrap();
        res.check(&q).unwrap();
        let (lin, _) = betti_by_linear_algebra(&alg, &pres, 1, 3).unwrap();
        prop_assert_eq!(res.betti, lin);
    }
}
