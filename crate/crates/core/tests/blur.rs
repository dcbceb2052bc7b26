use std::collections::BTreeSet;

use zcat_core::blur::{blurry_axiom_probe, blurry_topology, gamma_check, powered_blurry_compose};
use zcat_core::fixtures;
use zcat_core::site::generate_topology;
use zcat_core::Verdict;

#[test]
fn gamma_fixtures_pass_gamma_and_the_probe() {
    let fx = fixtures::gamma_fixtures();
    assert!(fx.len() >= 5);
    for (name, site, r) in fx {
        assert_eq!(gamma_check(&site.category, &r).verdict, Verdict::Pass, "{name}");
        for k in [site.topology.clone(), generate_topology(&site.category, &site.seeds).unwrap()] {
            let b = blurry_topology(site.category.clone(), &k, &r).unwrap();
            let p = blurry_axiom_probe(&b).unwrap();
            assert!(p.all_pass(), "{name}: {:?}", p.witnesses.first());
        }
    }
}

#[test]
fn swapping_points_is_not_gamma_and_skips_the_probe() {
    let site = fixtures::opens2();
    let c = &site.category;
    let r = zcat_core::fincat::ObjEquiv::from_labels(c, &[vec!["0"], vec!["p", "q"], vec!["pq"]]).unwrap();
    let g = gamma_check(c, &r);
    assert_eq!(g.verdict, Verdict::Fail);
    assert!(g.counterexample.is_some());
    let b = blurry_topology(c.clone(), &site.topology, &r).unwrap();
    let p = blurry_axiom_probe(&b).unwrap();
    assert_eq!(p.iso_axiom, Verdict::Skipped);
    assert!(p.skipped.is_some());
}

#[test]
fn discrete_relation_reproduces_the_base_assignment() {
    let site = fixtures::chain3();
    let r = zcat_core::fincat::ObjEquiv::discrete(site.elements.len());
    let b = blurry_topology(site.category.clone(), &site.topology, &r).unwrap();
    assert_eq!(b.quotient_assignment().len(), site.topology.len());
}

#[test]
fn powered_blurry_stacks_projection_relations() {
    let fx = fixtures::two_level();
    let rels = [fixtures::projection(&fx.sites[0], "p"), fixtures::projection(&fx.sites[1], "p")];
    let levels: Vec<_> = fx
        .sites
        .iter()
        .zip(&rels)
        .map(|(s, r)| blurry_topology(s.category.clone(), &s.topology, r).unwrap())
        .collect();
    let pb = powered_blurry_compose(&levels, &fx.layered, &BTreeSet::new()).unwrap();
    assert!(pb.probes.iter().all(|p| p.as_ref().is_some_and(|p| p.all_pass())));
    for l in fx.layered.ladders() {
        let cl = pb.classify(&l).unwrap();
        pb.check(&cl).unwrap();
    }
}

#[test]
fn membership_must_respect_the_relations() {
    let fx = fixtures::two_level();
    let rels = [
        zcat_core::fincat::ObjEquiv::discrete(fx.sites[0].elements.len()),
        fixtures::projection(&fx.sites[1], "r"),
    ];
    let levels: Vec<_> = fx
        .sites
        .iter()
        .zip(&rels)
        .map(|(s, r)| blurry_topology(s.category.clone(), &s.topology, r).unwrap())
        .collect();
    assert!(powered_blurry_compose(&levels, &fx.layered, &BTreeSet::from([0, 1])).is_err());
}
