mod common;

use proptest::prelude::*;
use zcat_core::fingerprint::{invariant_of, tensor_dims, z_equiv, GradedDims};
use zcat_core::fixtures;
use zcat_core::Error;

fn dims() -> impl Strategy<Value = GradedDims> {
    prop::collection::vec(0u64..5, 0..5).prop_map(GradedDims::new)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn tensor_is_a_commutative_monoid(a in dims(), b in dims(), c in dims()) {
        prop_assert_eq!(tensor_dims(&a, &b), tensor_dims(&b, &a));
        prop_assert_eq!(tensor_dims(&tensor_dims(&a, &b), &c), tensor_dims(&a, &tensor_dims(&b, &c)));
        prop_assert_eq!(tensor_dims(&GradedDims::unit(), &a), a.clone());
        let ab = tensor_dims(&a, &b);
        prop_assert!(common::poly_product_matches(a.dims(), b.dims(), ab.dims()));
        prop_assert_eq!(ab.total(), a.total() * b.total());
        if let (Some(p), Some(q)) = (a.top_degree(), b.top_degree()) {
            prop_assert_eq!(ab.top_degree(), Some(p + q));
        }
    }

    #[test]
    fn trailing_zeros_are_normalized(v in prop::collection::vec(0u64..3, 0..5), pad in 0usize..4) {
        let mut w = v.clone();
        w.extend(std::iter::repeat_n(0, pad));
        prop_assert_eq!(GradedDims::new(v), GradedDims::new(w));
    }
}

#[test]
fn tensor_example() {
    assert_eq!(tensor_dims(&GradedDims::new(vec![1, 2]), &GradedDims::new(vec![1, 1])).dims(), &[1, 3, 2]);
}

#[test]
fn fixture_equivalences_and_congruence() {
    let c = fixtures::fingerprint_category();
    let fp = fixtures::fingerprint_table(&c);
    let xs = fixtures::fingerprint_objects(&c);
    assert!(z_equiv(&c, &xs[0], &xs[1], &fp).unwrap());
    assert!(z_equiv(&c, &xs[0], &xs[2], &fp).unwrap());
    assert!(!z_equiv(&c, &xs[0], &xs[3], &fp).unwrap());
    assert!(z_equiv(&c, &xs[4], &xs[5], &fp).unwrap());
    for x in &xs {
        for y in &xs {
            if z_equiv(&c, x, y, &fp).unwrap() {
                let (a, b) = (invariant_of(&c, x, &fp).unwrap(), invariant_of(&c, y, &fp).unwrap());
                assert_eq!(a.fold_positive(), b.fold_positive());
            }
        }
    }
}

#[test]
fn formal_multiplicities_are_not_evaluated() {
    let c = fixtures::fingerprint_category();
    let fp = fixtures::fingerprint_table(&c);
    let xs = fixtures::fingerprint_objects(&c);
    assert!(matches!(invariant_of(&c, &xs[0], &fp).unwrap().evaluate(), Err(Error::FormalMultiplicity { .. })));
    assert!(invariant_of(&c, &xs[3], &fp).unwrap().evaluate().is_ok());
}

#[test]
fn missing_fingerprint_names_the_object() {
    let c = fixtures::fingerprint_category();
    let mut fp = fixtures::fingerprint_table(&c);
    fp.remove(&c.obj_id("B").unwrap());
    let xs = fixtures::fingerprint_objects(&c);
    let err = invariant_of(&c, &xs[0], &fp).unwrap_err();
    assert!(err.to_string().contains('B'), "{err}");
}
