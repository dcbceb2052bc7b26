//! Covering structures on finite sites.
//!
//! [`CoveringAssignment`] holds covering families per object and is checked
//! against the three topology axioms with chosen pullbacks. The submodules
//! add point-based covers over a [`PointedBase`] and levelwise covers of
//! ladders in a [`LayeredCategory`].

mod layered;
mod pointed;

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fincat::{Cone, FinCat, MorId, ObjId};
use crate::par;
use crate::verdict::Verdict;

pub use layered::{
    compose_ladders, powered_cover_check, powered_stability_probe, LadderMorphism, LayeredCategory,
    PoweredReport, PoweredStabilityReport, StabilityFault,
};
pub use pointed::{
    distinguished_square_check, nisnevich_component_lemma_check, nisnevich_cover_check, ComponentCover,
    CoverReport, LemmaReport, PointedBase, Square, SquareFault, SquareReport,
};

/// A covering family: morphisms sharing a target.
pub type Family = BTreeSet<MorId>;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CoveringAssignment {
    families: BTreeMap<ObjId, BTreeSet<Family>>,
}

impl CoveringAssignment {
    pub fn new() -> CoveringAssignment {
        CoveringAssignment::default()
    }

    /// Build from `(object, family)` pairs, checking every member targets its object.
    pub fn from_families(c: &FinCat, items: impl IntoIterator<Item = (ObjId, Family)>) -> Result<CoveringAssignment> {
        let mut k = CoveringAssignment::new();
        for (x, fam) in items {
            if x.index() >= c.num_objects() {
                return Err(Error::UnknownId { kind: "object", id: x.to_string() });
            }
            for &f in &fam {
                if f.index() >= c.num_morphisms() {
                    return Err(Error::UnknownId { kind: "morphism", id: f.to_string() });
                }
                if c.target(f) != x {
                    return Err(Error::Structural(format!(
                        "family member `{}` does not target `{}`",
                        c.mor_label(f),
                        c.obj_label(x)
                    )));
                }
            }
            k.insert(x, fam);
        }
        Ok(k)
    }

    /// The singleton identity family at every object.
    pub fn identities(c: &FinCat) -> CoveringAssignment {
        let mut k = CoveringAssignment::new();
        for x in c.objects() {
            k.insert(x, BTreeSet::from([c.identity(x)]));
        }
        k
    }

    /// Every family whose sources jointly cover the target, for a thin
    /// category of subsets given by `elements(x)`.
    pub fn jointly_covering<T: Ord + Clone>(c: &FinCat, elements: impl Fn(ObjId) -> BTreeSet<T>) -> CoveringAssignment {
        let mut k = CoveringAssignment::new();
        for x in c.objects() {
            let into: Vec<MorId> = c.objects().flat_map(|y| c.hom(y, x).to_vec()).collect();
            let want = elements(x);
            for mask in 0u64..(1u64 << into.len()) {
                let fam: Family = (0..into.len()).filter(|b| mask >> b & 1 == 1).map(|b| into[b]).collect();
                let union: BTreeSet<T> = fam.iter().flat_map(|&f| elements(c.source(f))).collect();
                if union == want {
                    k.insert(x, fam);
                }
            }
        }
        k
    }

    pub fn insert(&mut self, x: ObjId, family: Family) -> bool {
        self.families.entry(x).or_default().insert(family)
    }

    pub fn remove(&mut self, x: ObjId, family: &Family) -> bool {
        self.families.get_mut(&x).is_some_and(|s| s.remove(family))
    }

    pub fn contains(&self, x: ObjId, family: &Family) -> bool {
        self.families.get(&x).is_some_and(|s| s.contains(family))
    }

    pub fn families(&self, x: ObjId) -> impl Iterator<Item = &Family> + '_ {
        self.families.get(&x).into_iter().flatten()
    }

    /// All `(object, family)` pairs in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = (ObjId, &Family)> + '_ {
        self.families.iter().flat_map(|(&x, s)| s.iter().map(move |f| (x, f)))
    }

    pub fn len(&self) -> usize {
        self.families.values().map(BTreeSet::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Whether `f` is a member of some family on its target.
    pub fn covers_morphism(&self, c: &FinCat, f: MorId) -> bool {
        self.families(c.target(f)).any(|fam| fam.contains(&f))
    }
}

/// Pullback of `f` along `g`, taking the declared cone or the trivial one
/// when either leg is an identity. The cone's `second` leg maps to `source(g)`.
pub(crate) fn pullback_along(c: &FinCat, f: MorId, g: MorId) -> Option<Cone> {
    if let Some(cone) = c.pullback(f, g) {
        return Some(cone);
    }
    if c.is_identity(f) {
        let z = c.source(g);
        return Some(Cone { apex: z, first: g, second: c.identity(z) });
    }
    if c.is_identity(g) {
        let u = c.source(f);
        return Some(Cone { apex: u, first: c.identity(u), second: f });
    }
    None
}

/// Pull `family` back along `g`; `Err` names the first cospan without a pullback.
pub(crate) fn pull_family(c: &FinCat, family: &Family, g: MorId) -> std::result::Result<Family, (MorId, MorId)> {
    family
        .iter()
        .map(|&f| pullback_along(c, f, g).map(|cone| cone.second).ok_or((f, g)))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "axiom", rename_all = "snake_case")]
pub enum TopologyWitness {
    /// The isomorphism `f` does not form a covering family on its own.
    Iso { f: MorId },
    /// Pulling `family ∈ K(object)` back along `along` gives `pulled ∉ K(source(along))`.
    Stability { object: ObjId, family: Family, along: MorId, pulled: Family },
    /// Refining `family ∈ K(object)` member by member by `refinement` gives `composite ∉ K(object)`.
    Transitivity { object: ObjId, family: Family, refinement: Vec<Family>, composite: Family },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TopologyReport {
    pub iso_axiom: Verdict,
    pub pullback_stability: Verdict,
    pub transitivity: Verdict,
    pub witnesses: Vec<TopologyWitness>,
    /// Cospans `(f, g)` whose pullback is needed but not declared.
    pub unverifiable: Vec<(MorId, MorId)>,
}

impl TopologyReport {
    pub fn all_pass(&self) -> bool {
        self.iso_axiom.passed() && self.pullback_stability.passed() && self.transitivity.passed()
    }
}

fn check_ids(c: &FinCat, k: &CoveringAssignment) -> Result<()> {
    for (x, fam) in k.iter() {
        if x.index() >= c.num_objects() {
            return Err(Error::UnknownId { kind: "object", id: x.to_string() });
        }
        if let Some(f) = fam.iter().find(|f| f.index() >= c.num_morphisms()) {
            return Err(Error::UnknownId { kind: "morphism", id: f.to_string() });
        }
        if let Some(&f) = fam.iter().find(|&&f| c.target(f) != x) {
            return Err(Error::Structural(format!("family member {f} does not target {x}")));
        }
    }
    Ok(())
}

/// Every family obtainable by refining each member `f_α: U_α → X` of
/// `family` by some family in `K(U_α)`, each with one refinement achieving it.
fn refinements(c: &FinCat, k: &CoveringAssignment, family: &Family) -> BTreeMap<Family, Vec<Family>> {
    let mut reach: BTreeMap<Family, Vec<Family>> = BTreeMap::from([(Family::new(), Vec::new())]);
    for &f in family {
        let options: Vec<&Family> = k.families(c.source(f)).collect();
        let mut next = BTreeMap::new();
        for (acc, path) in &reach {
            for g_fam in &options {
                let mut union = acc.clone();
                union.extend(g_fam.iter().map(|&g| c.compose(f, g).expect("composable by target")));
                next.entry(union).or_insert_with(|| {
                    let mut p = path.clone();
                    p.push((*g_fam).clone());
                    p
                });
            }
        }
        reach = next;
    }
    reach
}

/// Check the isomorphism, pullback-stability and transitivity axioms
/// exhaustively. Missing pullbacks make stability unverifiable rather than
/// failing it.
pub fn grothendieck_axiom_check(c: &FinCat, k: &CoveringAssignment) -> Result<TopologyReport> {
    check_ids(c, k)?;
    let mut witnesses = Vec::new();
    let mut iso_failed = false;
    for f in c.morphisms() {
        if c.is_iso(f) && !k.contains(c.target(f), &BTreeSet::from([f])) {
            witnesses.push(TopologyWitness::Iso { f });
            iso_failed = true;
        }
    }
    let objects: Vec<ObjId> = c.objects().collect();
    let per_object = par::map(&objects, |&x| {
        let mut stab = Vec::new();
        let mut trans = Vec::new();
        let mut missing = Vec::new();
        for fam in k.families(x) {
            for z in c.objects() {
                for &g in c.hom(z, x) {
                    match pull_family(c, fam, g) {
                        Ok(pulled) if !k.contains(z, &pulled) => stab.push(TopologyWitness::Stability {
                            object: x,
                            family: fam.clone(),
                            along: g,
                            pulled,
                        }),
                        Ok(_) => {}
                        Err(cospan) => missing.push(cospan),
                    }
                }
            }
            for (composite, refinement) in refinements(c, k, fam) {
                if !k.contains(x, &composite) {
                    trans.push(TopologyWitness::Transitivity { object: x, family: fam.clone(), refinement, composite });
                }
            }
        }
        (stab, trans, missing)
    });
    let (mut stab, mut trans, mut missing) = (Vec::new(), Vec::new(), BTreeSet::new());
    for (s, t, m) in per_object {
        stab.extend(s);
        trans.extend(t);
        missing.extend(m);
    }
    let report = TopologyReport {
        iso_axiom: Verdict::from_bool(!iso_failed),
        pullback_stability: Verdict::summarize(!stab.is_empty(), !missing.is_empty()),
        transitivity: Verdict::from_bool(trans.is_empty()),
        witnesses: {
            witnesses.extend(stab);
            witnesses.extend(trans);
            witnesses
        },
        unverifiable: missing.into_iter().collect(),
    };
    Ok(report)
}

/// Close `seeds` under the three axioms: add isomorphism singletons, then
/// pullbacks along every available cospan and all refinements, to a fixpoint.
pub fn generate_topology(c: &FinCat, seeds: &CoveringAssignment) -> Result<CoveringAssignment> {
    check_ids(c, seeds)?;
    let mut k = seeds.clone();
    for f in c.morphisms() {
        if c.is_iso(f) {
            k.insert(c.target(f), BTreeSet::from([f]));
        }
    }
    loop {
        let mut added = Vec::new();
        for (x, fam) in k.iter() {
            for z in c.objects() {
                for &g in c.hom(z, x) {
                    if let Ok(pulled) = pull_family(c, fam, g) {
                        if !k.contains(z, &pulled) {
                            added.push((z, pulled));
                        }
                    }
                }
            }
            for composite in refinements(c, &k, fam).into_keys() {
                if !k.contains(x, &composite) {
                    added.push((x, composite));
                }
            }
        }
        if added.is_empty() {
            return Ok(k);
        }
        for (x, fam) in added {
            k.insert(x, fam);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Opens of the two-point space `{p, q}` under inclusion, meets declared.
    fn opens2() -> FinCat {
        let sets: [&[char]; 4] = [&[], &['p'], &['q'], &['p', 'q']];
        FinCat::thin(&["0", "p", "q", "pq"], |a, b| sets[a].iter().all(|e| sets[b].contains(e))).with_meets()
    }

    fn elements(x: ObjId) -> BTreeSet<char> {
        match x.0 {
            0 => BTreeSet::new(),
            1 => BTreeSet::from(['p']),
            2 => BTreeSet::from(['q']),
            _ => BTreeSet::from(['p', 'q']),
        }
    }

    #[test]
    fn joint_covers_of_the_two_point_space_form_a_topology() {
        let c = opens2();
        let k = CoveringAssignment::jointly_covering(&c, elements);
        let r = grothendieck_axiom_check(&c, &k).unwrap();
        assert!(r.all_pass(), "{r:?}");
        assert!(r.unverifiable.is_empty());
    }

    #[test]
    fn identity_families_alone_are_a_topology() {
        let c = opens2();
        let r = grothendieck_axiom_check(&c, &CoveringAssignment::identities(&c)).unwrap();
        assert!(r.all_pass(), "{r:?}");
    }

    #[test]
    fn missing_pulled_back_family_is_witnessed() {
        let c = opens2();
        let mut k = CoveringAssignment::jointly_covering(&c, elements);
        let pq = c.obj("pq").unwrap();
        let cover = BTreeSet::from([c.mor("p->pq").unwrap(), c.mor("q->pq").unwrap()]);
        assert!(k.contains(pq, &cover));
        let p = c.obj("p").unwrap();
        let pulled = pull_family(&c, &cover, c.mor("p->pq").unwrap()).unwrap();
        k.remove(p, &pulled);
        let r = grothendieck_axiom_check(&c, &k).unwrap();
        assert_eq!(r.pullback_stability, Verdict::Fail);
        assert!(r.witnesses.iter().any(|w| matches!(w,
            TopologyWitness::Stability { object, family, pulled: got, .. } if *object == pq && *family == cover && *got == pulled)));
    }

    #[test]
    fn undeclared_pullbacks_are_unverifiable() {
        let c = FinCat::thin(&["a", "b", "c"], |x, y| x == 2 && y != 2 || x == y);
        let x = c.obj("a").unwrap();
        let fam = BTreeSet::from([c.mor("c->a").unwrap()]);
        let mut k = CoveringAssignment::identities(&c);
        k.insert(x, fam);
        let r = grothendieck_axiom_check(&c, &k).unwrap();
        assert_eq!(r.pullback_stability, Verdict::Unverifiable);
    }

    #[test]
    fn closure_of_seeds_passes_every_axiom() {
        let c = opens2();
        let pq = c.obj("pq").unwrap();
        let seed = BTreeSet::from([c.mor("p->pq").unwrap(), c.mor("q->pq").unwrap()]);
        let seeds = CoveringAssignment::from_families(&c, [(pq, seed.clone())]).unwrap();
        let k = generate_topology(&c, &seeds).unwrap();
        assert!(k.contains(pq, &seed));
        assert!(grothendieck_axiom_check(&c, &k).unwrap().all_pass());
    }

    #[test]
    fn members_must_target_their_object() {
        let c = opens2();
        let bad = CoveringAssignment::from_families(&c, [(c.obj("p").unwrap(), BTreeSet::from([c.mor("q->pq").unwrap()]))]);
        assert!(bad.is_err());
    }
}
