mod common;

use pest_lab::boolfn::{
    classify, gold_function, inner_product_bent, wht, BooleanFunction, Classification,
};
use pest_lab::cubelike::{ConnectionSet, GroupElement};
use pest_lab::gf2m::{trace_orthogonal_basis, FieldElement, FieldSpec};
use pest_lab::pestcheck::EdgeStatePair;
use proptest::prelude::*;

fn function(m: u32) -> impl Strategy<Value = BooleanFunction> {
    proptest::collection::vec(any::<bool>(), 1usize << m)
        .prop_map(move |t| BooleanFunction::new(m, t).unwrap())
}

fn sized_function(max_m: u32) -> impl Strategy<Value = BooleanFunction> {
    (1..=max_m).prop_flat_map(function)
}

fn connection_set(m: u32) -> impl Strategy<Value = ConnectionSet> {
    proptest::collection::vec(1u32..(1 << m), 1..(1usize << m))
        .prop_map(move |v| ConnectionSet::new(m, v.into_iter().map(GroupElement)).unwrap())
}

/// A connection set and a non-trivial pair with `a + b + c + d = 0`.
fn instance(max_m: u32) -> impl Strategy<Value = (ConnectionSet, EdgeStatePair)> {
    (2..=max_m).prop_flat_map(|m| {
        let n = 1u32 << m;
        (connection_set(m), 0..n, 1..n, 0..n).prop_filter_map("degenerate pair", |(s, a, e, g)| {
            if g == 0 || g == e {
                return None;
            }
            let (b, c) = (a ^ e, a ^ g);
            let pair = EdgeStatePair::from_bits(a, b, c, c ^ e).ok()?;
            Some((s, pair))
        })
    })
}

fn naive_wht(f: &BooleanFunction) -> Vec<i64> {
    let n = 1u32 << f.m();
    (0..n)
        .map(|a| {
            (0..n)
                .map(|x| {
                    let bit = f.eval(GroupElement(x)) ^ GroupElement(a).dot(GroupElement(x));
                    1 - 2 * bit as i64
                })
                .sum()
        })
        .collect()
}

#[test]
fn trace_form_is_coordinate_dot_product() {
    for m in 1..=6 {
        let field = FieldSpec::with_default_modulus(m).unwrap();
        let basis = trace_orthogonal_basis(&field).unwrap();
        assert_eq!(basis.expand(GroupElement::ones(m)), FieldElement::ONE);
        for x in field.elements() {
            assert_eq!(field.trace(x), field.trace(field.square(x)));
            for y in field.elements() {
                let tr = field.trace(field.mul(x, y)) == 1;
                assert_eq!(tr, basis.coords(x).dot(basis.coords(y)), "m={m}");
            }
        }
    }
}

#[test]
fn gold_zero_set_matches_trace() {
    for m in [3u32, 5, 7] {
        let field = FieldSpec::with_default_modulus(m).unwrap();
        let basis = trace_orthogonal_basis(&field).unwrap();
        let amp = 1i64 << m.div_ceil(2);
        for e in (1..m).filter(|e| num_integer::gcd(*e, m) == 1) {
            let f = gold_function(&field, &basis, e).unwrap();
            assert_eq!(f.weight(), 1 << (m - 1));
            assert_eq!(classify(&f), Classification::SemiBent);
            let s = wht(&f);
            for a in 0..1u32 << m {
                let tr = field.trace(basis.expand(GroupElement(a)));
                let v = s.get(GroupElement(a));
                assert_eq!(v == 0, tr == 0, "m={m} e={e} a={a}");
                assert!(v == 0 || v.abs() == amp);
            }
        }
    }
}

#[test]
fn hyperplane_character_sums() {
    for m in 1..=8 {
        common::hyperplane_character_sums(m).unwrap();
    }
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 256,
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn trace_is_bilinear(m in 1u32..=12, seed in any::<(u32, u32, u32)>()) {
        let field = FieldSpec::with_default_modulus(m).unwrap();
        let mask = field.mask();
        let (x, x2, y) = (
            FieldElement(seed.0 & mask),
            FieldElement(seed.1 & mask),
            FieldElement(seed.2 & mask),
        );
        let rhs = field.trace(field.mul(x, y)) ^ field.trace(field.mul(x2, y));
        prop_assert_eq!(field.trace(field.mul(x + x2, y)), rhs);
        prop_assert_eq!(field.trace(field.mul(y, x + x2)), rhs);
    }

    #[test]
    fn parseval(f in sized_function(10)) {
        common::parseval(&f).map_err(TestCaseError::fail)?;
        let w = f.weight() as i64;
        prop_assert_eq!(wht(&f).get(GroupElement::ZERO), (1i64 << f.m()) - 2 * w);
    }

    #[test]
    fn fast_transform_matches_direct_sum(f in sized_function(7)) {
        prop_assert_eq!(wht(&f).values().to_vec(), naive_wht(&f));
    }

    #[test]
    fn support_round_trip(f in sized_function(8)) {
        let back = BooleanFunction::from_support(f.m(), &f.support()).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn bent_dual_complement_and_weight(k in 1u32..=4, mask in any::<u32>(), affine in any::<bool>()) {
        let m = 2 * k;
        let f = inner_product_bent(k, GroupElement(mask & GroupElement::ones(m).bits()), affine).unwrap();
        let Classification::Bent { dual } = classify(&f) else {
            return Err(TestCaseError::fail("inner product function not bent"));
        };
        let Classification::Bent { dual: back } = classify(&dual) else {
            return Err(TestCaseError::fail("dual not bent"));
        };
        prop_assert_eq!(&back, &f);
        let big = (1usize << (m - 1)) + (1usize << (k - 1));
        let small = (1usize << (m - 1)) - (1usize << (k - 1));
        let w = f.weight();
        prop_assert!(w == big || w == small);
        let g = f.complement();
        prop_assert!(classify(&g).is_bent());
        prop_assert_eq!(g.weight(), if w == big { small } else { big });
    }

    #[test]
    fn spectrum_identities(s in (1u32..=10).prop_flat_map(connection_set)) {
        common::spectrum_identities(&s).map_err(TestCaseError::fail)?;
        let sp = s.spectrum();
        let size = s.len() as i64;
        let strict = (1..1u32 << s.m()).all(|x| sp.get(GroupElement(x)) < size);
        prop_assert_eq!(s.is_connected(), strict);
    }

    #[test]
    fn strong_cospectrality_iff_balanced(m in 1u32..=5, raw in any::<(u32, u32, u32, u32)>()) {
        let mask = GroupElement::ones(m).bits();
        let (a, b, c, d) = (raw.0 & mask, raw.1 & mask, raw.2 & mask, raw.3 & mask);
        prop_assume!(a != b && c != d);
        common::strong_cospectrality(m, a, b, c, d).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn partition_quarters((s, pair) in instance(8)) {
        common::partition_sizes(s.m(), &pair).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn verdict_independent_of_x0((s, pair) in instance(6)) {
        common::x0_invariance(&s, &pair).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn translation_invariance((s, pair) in instance(5)) {
        common::translation_invariance(&s, &pair).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn scaling_invariance((s, pair) in instance(6)) {
        common::scaling_invariance(&s, &pair).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn dense_oracle_unitary_and_periodic(
        (s, t) in (1u32..=6).prop_flat_map(|m| (connection_set(m), 0.0f64..20.0))
    ) {
        common::dense_unitary_periodic(&s, t).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn character_sum_matches_dense((s, pair) in instance(6), t in 0.0f64..10.0) {
        common::amplitude_matches_dense(&s, &pair, t).map_err(TestCaseError::fail)?;
    }
}
