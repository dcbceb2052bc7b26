mod common;

use zcat_core::fincat::FinCat;
use zcat_core::fixtures;
use zcat_core::sheaf::{
    additivity_check, cartesian_square_check, enumerate_presheaves, representable, sheaf_check,
    squares_vs_sheaf_probe, Presheaf,
};
use zcat_core::site::{generate_topology, CoveringAssignment};
use zcat_core::zlin::{summand_closure, Linearization, ZObject};
use zcat_core::fincat::ObjId;

fn sites() -> Vec<(String, std::sync::Arc<FinCat>, CoveringAssignment)> {
    let mut out = Vec::new();
    for (name, site) in fixtures::poset_sites() {
        let generated = generate_topology(&site.category, &site.seeds).unwrap();
        out.push((format!("{name}/joint"), site.category.clone(), site.topology.clone()));
        out.push((format!("{name}/generated"), site.category.clone(), generated));
        out.push((format!("{name}/trivial"), site.category.clone(), CoveringAssignment::identities(&site.category)));
    }
    out
}

#[test]
fn sheaf_check_matches_the_oracle_on_small_presheaves() {
    for (name, c, k) in sites() {
        let mut presheaves: Vec<Presheaf> = c.objects().map(|x| representable(&c, x)).collect();
        presheaves.push(Presheaf::constant(&c, &["s", "t"]));
        if c.num_objects() <= 3 {
            presheaves.extend(enumerate_presheaves(&c, 2));
        }
        for f in &presheaves {
            let r = sheaf_check(f, &c, &k).unwrap();
            assert!(r.unverifiable.is_empty());
            assert_eq!(r.is_sheaf(), common::sheaf_oracle(f, &c, &k), "{name}: {f:?}");
        }
    }
}

#[test]
fn representables_are_sheaves_for_joint_covers() {
    let site = fixtures::opens3();
    for x in site.category.objects() {
        assert!(sheaf_check(&representable(&site.category, x), &site.category, &site.topology).unwrap().is_sheaf());
    }
}

#[test]
fn constant_presheaf_is_not_a_sheaf_on_the_empty_cover() {
    let site = fixtures::opens2();
    let r = sheaf_check(&Presheaf::constant(&site.category, &["s", "t"]), &site.category, &site.topology).unwrap();
    assert!(!r.is_sheaf());
    assert!(!r.failures.is_empty());
}

#[test]
fn presheaf_count_on_a_chain() {
    let c = FinCat::thin(&["a", "b"], |x, y| x <= y);
    let total: usize = (0..=2usize).flat_map(|s| (0..=2usize).map(move |t| if t == 0 && s > 0 { 0 } else { t.pow(s as u32).max(1) })).sum();
    assert_eq!(enumerate_presheaves(&c, 2).len(), total);
}

#[test]
fn squares_probe_agrees_on_the_zariski_site() {
    let sq = fixtures::squares_site(fixtures::opens2());
    let c = &*sq.site.category;
    for f in enumerate_presheaves(c, 2) {
        let r = squares_vs_sheaf_probe(&f, c, &sq.topology, &sq.squares, true).unwrap();
        assert!(r.assertion_supported);
        assert!(r.agree, "{f:?}");
    }
}

#[test]
fn representables_are_cartesian() {
    let sq = fixtures::squares_site(fixtures::opens3());
    let c = &*sq.site.category;
    for x in c.objects() {
        for s in &sq.squares {
            assert!(cartesian_square_check(&representable(c, x), c, s).unwrap().holds);
        }
    }
}

#[test]
fn representables_on_the_linearization_are_additive() {
    let base = FinCat::free_on_dag(&["a", "b"], &[("f", 0, 1)]);
    let x = ZObject::from_list(&[(ObjId(0), 1), (ObjId(1), 2)]).unwrap();
    let y = ZObject::from_list(&[(ObjId(1), 1), (ObjId(1), 2), (ObjId(0), 1)]).unwrap();
    let lin = Linearization::new(&base, &summand_closure(&[x.clone(), y])).unwrap();
    let c = &lin.category;
    for target in c.objects() {
        let h = representable(c, target);
        for whole in c.objects() {
            assert!(additivity_check(&h, &base, &lin, whole).unwrap().holds);
        }
    }
    let whole = lin.object_of(&x).unwrap();
    let r = additivity_check(&Presheaf::constant(c, &["s", "t"]), &base, &lin, whole).unwrap();
    assert!(!r.holds);
    assert_eq!((r.whole, r.product), (2, 4));
}
