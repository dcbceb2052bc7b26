mod common;

use std::collections::BTreeSet;
use std::sync::Arc;

use zcat_core::fincat::{FinCat, ObjEquiv};
use zcat_core::fixtures;
use zcat_core::modular::{
    class_types, enumerate_fes, model_axiom_check, precompose, quotient_model, ModelCheckOptions, ModelClass,
    ModelLabeledCat,
};
use zcat_core::fincat::check_functor;

const BUDGET: u64 = 1_000_000;

fn two_chain() -> FinCat {
    FinCat::thin(&["a", "b"], |x, y| x <= y)
}

fn micro() -> Vec<(&'static str, FinCat, FinCat, usize)> {
    vec![
        ("terminal->iso-pair", FinCat::terminal(), fixtures::iso_pair(), 2),
        ("2-chain->2-chain", two_chain(), two_chain(), 1),
        ("iso-pair->terminal", fixtures::iso_pair(), FinCat::terminal(), 1),
        ("2-chain->terminal", two_chain(), FinCat::terminal(), 0),
        ("iso-pair->iso-pair", fixtures::iso_pair(), fixtures::iso_pair(), 4),
        ("terminal->Z/2-pair", FinCat::terminal(), fixtures::connected_groupoid(&["A", "B"], 2), 0),
        ("terminal->2-chain", FinCat::terminal(), two_chain(), 0),
    ]
}

#[test]
fn fes_counts_match_the_brute_force_oracle() {
    for (name, c, m, expected) in micro() {
        assert_eq!(common::fes_count_oracle(&c, &m), expected, "oracle {name}");
        let fam = enumerate_fes(Arc::new(c), Arc::new(ModelLabeledCat::iso_weq(Arc::new(m))), BUDGET).unwrap();
        assert_eq!(fam.members.len(), expected, "{name}");
        assert!(fam.members.iter().all(|f| check_functor(f).is_fes()));
    }
}

#[test]
fn fes_output_is_independent_of_parallelism() {
    let c = Arc::new(fixtures::connected_groupoid(&["x", "y", "z"], 1));
    let m = Arc::new(ModelLabeledCat::iso_weq(Arc::new(fixtures::iso_pair())));
    let par = enumerate_fes(c.clone(), m.clone(), BUDGET).unwrap();
    zcat_core::par::force_sequential(true);
    let seq = enumerate_fes(c, m, BUDGET).unwrap();
    zcat_core::par::force_sequential(false);
    assert_eq!(par, seq);
}

#[test]
fn precomposition_is_contravariant_on_all_chains() {
    let cats: Vec<Arc<FinCat>> = vec![
        Arc::new(FinCat::terminal()),
        Arc::new(fixtures::iso_pair()),
        Arc::new(fixtures::connected_groupoid(&["x", "y", "z"], 1)),
        Arc::new(two_chain()),
    ];
    let models: Vec<Arc<ModelLabeledCat>> =
        cats.iter().map(|c| Arc::new(ModelLabeledCat::all_in_all(c.clone()))).collect();
    let fes = |a: usize, b: usize| enumerate_fes(cats[a].clone(), models[b].clone(), BUDGET).unwrap().members;
    let mut chains = 0;
    for c in 0..cats.len() {
        for d in 0..cats.len() {
            for e in 0..cats.len() {
                for g in fes(c, d) {
                    for h in fes(d, e) {
                        let hg = zcat_core::fincat::compose_functors(&h, &g).unwrap();
                        for m in &models {
                            let family = enumerate_fes(cats[e].clone(), m.clone(), BUDGET).unwrap();
                            let lhs = precompose(&hg, &family).unwrap();
                            let rhs = precompose(&g, &precompose(&h, &family).unwrap()).unwrap();
                            assert_eq!(lhs, rhs);
                            chains += 1;
                        }
                    }
                }
            }
        }
    }
    assert!(chains > 0);
}

#[test]
fn multi_typed_block_pair() {
    let mut b = FinCat::builder();
    b.object("A").object("A'").object("B");
    b.morphism("w", "A", "B").morphism("c", "A'", "B");
    b.auto_identities().identity_composites();
    let base = Arc::new(b.build().unwrap());
    let ids: BTreeSet<_> = base.objects().map(|x| base.identity(x)).collect();
    let mut weq = ids.clone();
    weq.insert(base.mor("w").unwrap());
    let mut cof = ids.clone();
    cof.insert(base.mor("c").unwrap());
    let m = ModelLabeledCat::new(base.clone(), weq, cof, ids).unwrap();
    let r = ObjEquiv::from_labels(&base, &[vec!["A", "A'"], vec!["B"]]).unwrap();
    let (a, bb) = (r.block_of(base.obj("A").unwrap()), r.block_of(base.obj("B").unwrap()));
    assert_eq!(class_types(&m, &r, (a, bb)), BTreeSet::from([ModelClass::Weq, ModelClass::Cof]));
    assert!(class_types(&m, &r, (bb, a)).is_empty());
}

#[test]
fn enlarging_a_class_never_shrinks_types() {
    let base = Arc::new(FinCat::thin(&["a", "b", "c"], |x, y| x <= y));
    let r = ObjEquiv::from_labels(&base, &[vec!["a", "b"], vec!["c"]]).unwrap();
    let small = ModelLabeledCat::iso_weq(base.clone());
    let big = ModelLabeledCat::all_in_all(base);
    for s in 0..r.num_blocks() {
        for t in 0..r.num_blocks() {
            assert!(class_types(&small, &r, (s, t)).is_subset(&class_types(&big, &r, (s, t))));
        }
    }
}

#[test]
fn iso_block_collapse_keeps_identities_and_two_of_three() {
    let base = Arc::new(fixtures::iso_pair());
    let m = ModelLabeledCat::iso_weq(base.clone());
    assert!(model_axiom_check(&m, ModelCheckOptions::default()).passes);
    let r = ObjEquiv::from_labels(&base, &[vec!["A", "B"]]).unwrap();
    let q = quotient_model(&m, &r, ModelCheckOptions::default()).unwrap();
    assert!(q.report.identities_hold());
    assert!(q.report.two_of_three_holds());
}
