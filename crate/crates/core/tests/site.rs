use std::collections::BTreeSet;

use zcat_core::fixtures;
use zcat_core::site::{
    compose_ladders, distinguished_square_check, generate_topology, grothendieck_axiom_check,
    nisnevich_component_lemma_check, nisnevich_cover_check, powered_cover_check, powered_stability_probe,
    CoveringAssignment, Family, LadderMorphism, TopologyWitness,
};
use zcat_core::Verdict;

#[test]
fn generated_topologies_satisfy_the_axioms() {
    for (name, site) in fixtures::poset_sites() {
        let k = generate_topology(&site.category, &site.seeds).unwrap();
        let r = grothendieck_axiom_check(&site.category, &k).unwrap();
        assert!(r.all_pass(), "{name}: {:?}", r.witnesses.first());
        let joint = grothendieck_axiom_check(&site.category, &site.topology).unwrap();
        assert!(joint.all_pass(), "{name}: joint covers");
    }
}

#[test]
fn generation_is_idempotent() {
    let site = fixtures::opens5();
    let k = generate_topology(&site.category, &site.seeds).unwrap();
    assert_eq!(generate_topology(&site.category, &k).unwrap(), k);
}

#[test]
fn seeds_alone_fail_stability() {
    let site = fixtures::opens2();
    let r = grothendieck_axiom_check(&site.category, &site.seeds).unwrap();
    assert!(!r.all_pass());
}

#[test]
fn removing_a_pulled_back_family_names_it() {
    let site = fixtures::opens3();
    let c = &*site.category;
    let k = generate_topology(c, &site.seeds).unwrap();
    let pq = c.obj_id("pq").unwrap();
    let pqr = c.obj_id("pqr").unwrap();
    let cover: Family = ["pq", "pr", "qr"]
        .iter()
        .map(|l| c.hom(c.obj_id(l).unwrap(), pqr)[0])
        .collect();
    assert!(k.contains(pqr, &cover));
    let along = c.hom(pq, pqr)[0];
    let pulled: Family = [("pq", "pq"), ("p", "pq"), ("q", "pq")]
        .iter()
        .map(|(s, t)| c.hom(c.obj_id(s).unwrap(), c.obj_id(t).unwrap())[0])
        .collect();
    assert!(k.contains(pq, &pulled));
    let mut broken = k.clone();
    broken.remove(pq, &pulled);
    let r = grothendieck_axiom_check(c, &broken).unwrap();
    assert_eq!(r.pullback_stability, Verdict::Fail);
    assert!(r.witnesses.iter().any(|w| matches!(w,
        TopologyWitness::Stability { along: a, pulled: p, .. } if *a == along && *p == pulled)));
}

#[test]
fn empty_assignment_fails_only_the_iso_axiom() {
    let site = fixtures::chain3();
    let r = grothendieck_axiom_check(&site.category, &CoveringAssignment::new()).unwrap();
    assert_eq!(r.iso_axiom, Verdict::Fail);
    assert_eq!(r.pullback_stability, Verdict::Pass);
    assert_eq!(r.transitivity, Verdict::Pass);
}

#[test]
fn component_lemma_agrees_on_every_small_family() {
    let fx = fixtures::two_component_pointed();
    let pool = &fx.pool;
    assert!(pool.len() >= 8);
    let mut covering = 0;
    for a in 0..pool.len() {
        for b in a..pool.len() {
            for d in b..pool.len() {
                let fam: Vec<_> = BTreeSet::from([a, b, d]).into_iter().map(|i| pool[i].clone()).collect();
                let r = nisnevich_component_lemma_check(&fx.category, &fx.base, &fam, &fx.object).unwrap();
                assert!(r.agree, "{r:?}");
                covering += r.whole as usize;
            }
        }
    }
    assert!(covering > 0);
}

#[test]
fn single_members_miss_points() {
    let fx = fixtures::two_component_pointed();
    let uncovered: Vec<usize> = fx
        .pool
        .iter()
        .map(|m| nisnevich_cover_check(&fx.category, &fx.base, std::slice::from_ref(m), &fx.object).unwrap().uncovered.len())
        .collect();
    assert!(uncovered.iter().any(|&u| u > 0));
    assert!(uncovered.contains(&0));
}

#[test]
fn zariski_squares_are_distinguished() {
    let site = fixtures::opens3();
    let pts = fixtures::zariski_points(&site);
    let squares = fixtures::zariski_squares(&site);
    assert!(!squares.is_empty());
    for sq in squares {
        let r = distinguished_square_check(&site.category, &pts, &sq).unwrap();
        assert!(r.holds, "{r:?}");
    }
}

fn covering_families(layered: &zcat_core::site::LayeredCategory, ks: &[CoveringAssignment], ladders: &[LadderMorphism]) -> Vec<Vec<LadderMorphism>> {
    let n = ladders.len();
    let mut out = Vec::new();
    for mask in 1u32..(1 << n) {
        let fam: Vec<LadderMorphism> = (0..n).filter(|b| mask >> b & 1 == 1).map(|b| ladders[b].clone()).collect();
        let target = layered.target_chain(&fam[0]);
        let ok = (0..layered.num_levels()).all(|lv| {
            let f: Family = fam.iter().map(|l| l.arrows[lv]).collect();
            ks[lv].contains(target[lv], &f)
        });
        if ok {
            out.push(fam);
        }
    }
    out
}

#[test]
fn powered_stability_holds_on_two_levels() {
    let fx = fixtures::two_level();
    let ks: Vec<CoveringAssignment> = fx.sites.iter().map(|s| s.topology.clone()).collect();
    let ladders = fx.layered.ladders();
    let top = fx.layered.level(1);
    let x = top.obj_id("pq").unwrap();
    let into: Vec<LadderMorphism> = ladders
        .iter()
        .filter(|l| top.target(l.arrows[1]) == x)
        .cloned()
        .collect();
    let families = covering_families(&fx.layered, &ks, &into);
    assert!(!families.is_empty());
    for fam in &families {
        for test in &into {
            let r = powered_stability_probe(&fx.layered, fam, test, &ks).unwrap();
            assert_eq!(r.verdict, Verdict::Pass, "{r:?}");
        }
    }
}

#[test]
fn ladders_compose_levelwise() {
    let fx = layered_three();
    let ls = fx.layered.ladders();
    for g in &ls {
        for f in &ls {
            if fx.layered.target_chain(f) == fx.layered.source_chain(g) {
                let gf = compose_ladders(&fx.layered, g, f).unwrap();
                assert_eq!(fx.layered.source_chain(&gf), fx.layered.source_chain(f));
                assert_eq!(fx.layered.target_chain(&gf), fx.layered.target_chain(g));
            }
        }
    }
}

fn layered_three() -> fixtures::LayeredFixture {
    fixtures::layered(&["p", "pq", "pqr"])
}

#[test]
fn identity_ladders_cover() {
    let fx = layered_three();
    let ks: Vec<CoveringAssignment> = fx.sites.iter().map(|s| s.topology.clone()).collect();
    for l in fx.layered.ladders() {
        let ids = (0..fx.layered.num_levels()).all(|n| fx.layered.level(n).is_identity(l.arrows[n]));
        if ids {
            assert!(powered_cover_check(&fx.layered, &l, &ks).unwrap().covering);
        }
    }
}
