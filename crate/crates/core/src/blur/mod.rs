//! Topologies induced on equivalence classes of objects.
//!
//! A class family `{[Y] → [X]}` covers `[X]` when some representative family
//! `{Y′ → X′}` covers in the base site. Because the quotient is thin, a class
//! family is determined by its set of source blocks.

mod powered;

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::Serialize;

use crate::error::Result;
use crate::fincat::{quotient_category, FinCat, MorId, ObjEquiv, ObjId, Quotient};
use crate::par;
use crate::site::{grothendieck_axiom_check, pull_family, CoveringAssignment, Family};
use crate::verdict::Verdict;

pub use powered::{powered_blurry_compose, PoweredBlurry};

/// Source blocks of a class family.
pub type ClassFamily = BTreeSet<usize>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GammaReport {
    pub verdict: Verdict,
    /// `(A, A′, B, B′)` with `A ∼ A′`, `B ∼ B′` but `A×B ≁ A′×B′`.
    pub counterexample: Option<[ObjId; 4]>,
    /// Pairs whose product is needed but not declared.
    pub missing: Vec<(ObjId, ObjId)>,
}

/// Type Γ: `A ∼ A′` and `B ∼ B′` imply `A×B ∼ A′×B′`, over all ordered pairs.
pub fn gamma_check(c: &FinCat, r: &ObjEquiv) -> GammaReport {
    let mut missing = BTreeSet::new();
    let mut counterexample = None;
    'outer: for a in c.objects() {
        for b in c.objects() {
            for &a2 in r.block(r.block_of(a)) {
                for &b2 in r.block(r.block_of(b)) {
                    if (a, b) == (a2, b2) {
                        continue;
                    }
                    let (p, q) = (c.product(a, b), c.product(a2, b2));
                    if p.is_none() {
                        missing.insert((a, b));
                    }
                    if q.is_none() {
                        missing.insert((a2, b2));
                    }
                    if let (Some(p), Some(q)) = (p, q) {
                        if !r.related(p.apex, q.apex) {
                            counterexample = Some([a, a2, b, b2]);
                            break 'outer;
                        }
                    }
                }
            }
        }
    }
    GammaReport {
        verdict: Verdict::summarize(counterexample.is_some(), !missing.is_empty()),
        counterexample,
        missing: missing.into_iter().collect(),
    }
}

/// A base family witnessing a class family.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Witness {
    pub object: ObjId,
    pub family: Family,
}

#[derive(Clone, Debug)]
pub struct BlurrySite {
    pub base: Arc<FinCat>,
    pub assignment: CoveringAssignment,
    pub relation: ObjEquiv,
    pub quotient: Quotient,
    /// Per block, every class family with all base families witnessing it.
    classes: BTreeMap<usize, BTreeMap<ClassFamily, Vec<Witness>>>,
}

impl BlurrySite {
    pub fn class_families(&self, block: usize) -> impl Iterator<Item = &ClassFamily> + '_ {
        self.classes.get(&block).into_iter().flat_map(|m| m.keys())
    }

    pub fn contains(&self, block: usize, family: &ClassFamily) -> bool {
        self.classes.get(&block).is_some_and(|m| m.contains_key(family))
    }

    /// The recorded witness (the first in canonical order).
    pub fn witness(&self, block: usize, family: &ClassFamily) -> Option<&Witness> {
        self.witnesses(block, family).first()
    }

    pub fn witnesses(&self, block: usize, family: &ClassFamily) -> &[Witness] {
        self.classes.get(&block).and_then(|m| m.get(family)).map_or(&[], Vec::as_slice)
    }

    /// `(block, class family)` pairs in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, &ClassFamily)> + '_ {
        self.classes.iter().flat_map(|(&b, m)| m.keys().map(move |f| (b, f)))
    }

    pub fn project_family(&self, family: &Family) -> ClassFamily {
        family.iter().map(|&f| self.relation.block_of(self.base.source(f))).collect()
    }

    /// The class assignment as families of quotient morphisms.
    pub fn quotient_assignment(&self) -> CoveringAssignment {
        let mut k = CoveringAssignment::new();
        for (b, fam) in self.iter() {
            let mors: Family = fam
                .iter()
                .map(|&s| self.quotient.class_morphism(s, b).expect("witnessed classes are inhabited"))
                .collect();
            k.insert(ObjId(b as u32), mors);
        }
        k
    }
}

/// Derive the class assignment, recording every witnessing base family.
pub fn blurry_topology(base: Arc<FinCat>, k: &CoveringAssignment, r: &ObjEquiv) -> Result<BlurrySite> {
    let quotient = quotient_category(&base, r)?;
    let mut classes: BTreeMap<usize, BTreeMap<ClassFamily, Vec<Witness>>> = BTreeMap::new();
    for (x, fam) in k.iter() {
        let cf: ClassFamily = fam.iter().map(|&f| r.block_of(base.source(f))).collect();
        classes
            .entry(r.block_of(x))
            .or_default()
            .entry(cf)
            .or_default()
            .push(Witness { object: x, family: fam.clone() });
    }
    Ok(BlurrySite { base, assignment: k.clone(), relation: r.clone(), quotient, classes })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "axiom", rename_all = "snake_case")]
pub enum BlurryWitness {
    /// `[from] ≅ [to]` but `{[from] → [to]}` is not covering.
    Iso { from: usize, to: usize },
    /// Pulling `witness` back along `along` lands outside `K[block of source(along)]`.
    Stability { block: usize, family: ClassFamily, witness: Witness, along: MorId, pulled: ClassFamily },
    /// Refining by `refinement` needs the class morphism `[from] → [block]`, which is uninhabited.
    Gap { block: usize, family: ClassFamily, from: usize },
    Transitivity { block: usize, family: ClassFamily, refinement: Vec<ClassFamily>, composite: ClassFamily },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum BlurryUnverifiable {
    /// A base pullback needed for the stability step is not declared.
    Pullback { f: MorId, g: MorId },
    /// No representative of `[along] → [block]` ends at a witness of `family`.
    NoRepresentative { block: usize, family: ClassFamily, along: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlurryProbeReport {
    pub iso_axiom: Verdict,
    pub pullback_stability: Verdict,
    pub transitivity: Verdict,
    /// Why the probe did not run, when skipped.
    pub skipped: Option<String>,
    pub witnesses: Vec<BlurryWitness>,
    pub unverifiable: Vec<BlurryUnverifiable>,
}

impl BlurryProbeReport {
    pub fn all_pass(&self) -> bool {
        self.iso_axiom.passed() && self.pullback_stability.passed() && self.transitivity.passed()
    }

    fn skipped(reason: String) -> BlurryProbeReport {
        BlurryProbeReport {
            iso_axiom: Verdict::Skipped,
            pullback_stability: Verdict::Skipped,
            transitivity: Verdict::Skipped,
            skipped: Some(reason),
            witnesses: Vec::new(),
            unverifiable: Vec::new(),
        }
    }
}

/// Run the three axioms on the class assignment. Skipped unless the relation
/// has type Γ and the base assignment is a topology.
pub fn blurry_axiom_probe(site: &BlurrySite) -> Result<BlurryProbeReport> {
    let gamma = gamma_check(&site.base, &site.relation);
    if !gamma.verdict.passed() {
        return Ok(BlurryProbeReport::skipped(format!("relation is not of type Γ ({})", gamma.verdict)));
    }
    let base = grothendieck_axiom_check(&site.base, &site.assignment)?;
    if !base.all_pass() {
        return Ok(BlurryProbeReport::skipped("base assignment is not a topology".into()));
    }
    let c = &*site.base;
    let r = &site.relation;
    let q = &site.quotient;
    let nb = r.num_blocks();
    let inhabited = |s: usize, t: usize| q.class_morphism(s, t).is_some();

    let mut witnesses = Vec::new();
    let mut iso_failed = false;
    for s in 0..nb {
        for t in 0..nb {
            if inhabited(s, t) && inhabited(t, s) && !site.contains(t, &BTreeSet::from([s])) {
                witnesses.push(BlurryWitness::Iso { from: s, to: t });
                iso_failed = true;
            }
        }
    }

    let blocks: Vec<usize> = (0..nb).collect();
    let per_block = par::map(&blocks, |&x| {
        let mut stab = Vec::new();
        let mut trans = Vec::new();
        let mut unver = Vec::new();
        for cf in site.class_families(x) {
            for z in (0..nb).filter(|&z| inhabited(z, x)) {
                let mut combos = 0usize;
                for w in site.witnesses(x, cf) {
                    for &z2 in r.block(z) {
                        for &g in c.hom(z2, w.object) {
                            combos += 1;
                            match pull_family(c, &w.family, g) {
                                Ok(pulled) => {
                                    let pcf = site.project_family(&pulled);
                                    if !site.contains(z, &pcf) {
                                        stab.push(BlurryWitness::Stability {
                                            block: x,
                                            family: cf.clone(),
                                            witness: w.clone(),
                                            along: g,
                                            pulled: pcf,
                                        });
                                    }
                                }
                                Err((f, g)) => unver.push(BlurryUnverifiable::Pullback { f, g }),
                            }
                        }
                    }
                }
                if combos == 0 {
                    unver.push(BlurryUnverifiable::NoRepresentative { block: x, family: cf.clone(), along: z });
                }
            }
            // Refine member by member, tracking reachable unions of source blocks.
            let mut reach: BTreeMap<ClassFamily, Vec<ClassFamily>> = BTreeMap::from([(ClassFamily::new(), Vec::new())]);
            for &u in cf {
                let options: Vec<&ClassFamily> = site.class_families(u).collect();
                let mut next = BTreeMap::new();
                for (acc, path) in &reach {
                    for g in &options {
                        let mut union = acc.clone();
                        union.extend(g.iter().copied());
                        next.entry(union).or_insert_with(|| {
                            let mut p = path.clone();
                            p.push((*g).clone());
                            p
                        });
                    }
                }
                reach = next;
            }
            for (composite, refinement) in reach {
                if let Some(&from) = composite.iter().find(|&&v| !inhabited(v, x)) {
                    trans.push(BlurryWitness::Gap { block: x, family: cf.clone(), from });
                } else if !site.contains(x, &composite) {
                    trans.push(BlurryWitness::Transitivity { block: x, family: cf.clone(), refinement, composite });
                }
            }
        }
        (stab, trans, unver)
    });
    let (mut stab, mut trans, mut unverifiable) = (Vec::new(), Vec::new(), Vec::new());
    for (s, t, u) in per_block {
        stab.extend(s);
        trans.extend(t);
        unverifiable.extend(u);
    }
    let report = BlurryProbeReport {
        iso_axiom: Verdict::from_bool(!iso_failed),
        pullback_stability: Verdict::summarize(!stab.is_empty(), !unverifiable.is_empty()),
        transitivity: Verdict::from_bool(trans.is_empty()),
        skipped: None,
        witnesses: {
            witnesses.extend(stab);
            witnesses.extend(trans);
            witnesses
        },
        unverifiable,
    };
    Ok(report)
}
