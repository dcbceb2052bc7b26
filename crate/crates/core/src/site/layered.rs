//! Layered categories and levelwise (powered) covers.
//!
//! Level `n + 1` sits inside level `n` through a membership map on
//! objects. A [`LadderMorphism`] picks one morphism per level so that the
//! sources and the targets each form a membership chain.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::Serialize;

use super::{pullback_along, CoveringAssignment, Family};
use crate::error::{Error, Result};
use crate::fincat::{FinCat, MorId, ObjId};
use crate::verdict::Verdict;

#[derive(Clone, Debug)]
pub struct LayeredCategory {
    levels: Vec<Arc<FinCat>>,
    membership: Vec<Vec<ObjId>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct LadderMorphism {
    pub arrows: Vec<MorId>,
}

impl LayeredCategory {
    /// `membership[n][x]` is the level-`n` object containing object `x` of level `n + 1`.
    pub fn new(levels: Vec<Arc<FinCat>>, membership: Vec<Vec<ObjId>>) -> Result<LayeredCategory> {
        if levels.is_empty() {
            return Err(Error::Structural("a layered category needs at least one level".into()));
        }
        if membership.len() + 1 != levels.len() {
            return Err(Error::Structural(format!(
                "{} levels need {} membership maps, got {}",
                levels.len(),
                levels.len() - 1,
                membership.len()
            )));
        }
        for (n, m) in membership.iter().enumerate() {
            if m.len() != levels[n + 1].num_objects() {
                return Err(Error::Structural(format!("membership map {n} is not total")));
            }
            if let Some(x) = m.iter().find(|x| x.index() >= levels[n].num_objects()) {
                return Err(Error::UnknownId { kind: "object", id: x.to_string() });
            }
        }
        Ok(LayeredCategory { levels, membership })
    }

    pub fn num_levels(&self) -> usize {
        self.levels.len()
    }

    pub fn level(&self, n: usize) -> &FinCat {
        &self.levels[n]
    }

    pub fn levels(&self) -> &[Arc<FinCat>] {
        &self.levels
    }

    /// Image in level `n` of object `x` of level `n + 1`.
    pub fn member(&self, n: usize, x: ObjId) -> ObjId {
        self.membership[n][x.index()]
    }

    pub fn membership(&self) -> &[Vec<ObjId>] {
        &self.membership
    }

    pub fn ladder(&self, arrows: Vec<MorId>) -> Result<LadderMorphism> {
        let l = LadderMorphism { arrows };
        self.validate_ladder(&l)?;
        Ok(l)
    }

    pub fn validate_ladder(&self, l: &LadderMorphism) -> Result<()> {
        if l.arrows.len() != self.num_levels() {
            return Err(Error::Structural(format!(
                "ladder has {} levels, the layered category {}",
                l.arrows.len(),
                self.num_levels()
            )));
        }
        for (n, &f) in l.arrows.iter().enumerate() {
            if f.index() >= self.levels[n].num_morphisms() {
                return Err(Error::UnknownId { kind: "morphism", id: format!("{f} at level {n}") });
            }
        }
        for n in 0..self.num_levels() - 1 {
            let (lo, hi) = (&self.levels[n], &self.levels[n + 1]);
            let (f, g) = (l.arrows[n], l.arrows[n + 1]);
            if self.member(n, hi.source(g)) != lo.source(f) || self.member(n, hi.target(g)) != lo.target(f) {
                return Err(Error::Structural(format!("ladder squares between levels {n} and {} do not match", n + 1)));
            }
        }
        Ok(())
    }

    /// Every ladder morphism, in canonical order.
    pub fn ladders(&self) -> Vec<LadderMorphism> {
        let top = self.num_levels() - 1;
        let mut partial: Vec<Vec<MorId>> = self.levels[top].morphisms().map(|f| vec![f]).collect();
        for n in (0..top).rev() {
            let (lo, hi) = (&self.levels[n], &self.levels[n + 1]);
            partial = partial
                .into_iter()
                .flat_map(|p| {
                    let g = *p.last().expect("nonempty");
                    let (s, t) = (self.member(n, hi.source(g)), self.member(n, hi.target(g)));
                    lo.hom(s, t).iter().map(move |&f| {
                        let mut q = p.clone();
                        q.push(f);
                        q
                    }).collect::<Vec<_>>()
                })
                .collect();
        }
        let mut out: Vec<LadderMorphism> = partial
            .into_iter()
            .map(|mut p| {
                p.reverse();
                LadderMorphism { arrows: p }
            })
            .collect();
        out.sort();
        out
    }

    pub fn source_chain(&self, l: &LadderMorphism) -> Vec<ObjId> {
        l.arrows.iter().enumerate().map(|(n, &f)| self.levels[n].source(f)).collect()
    }

    pub fn target_chain(&self, l: &LadderMorphism) -> Vec<ObjId> {
        l.arrows.iter().enumerate().map(|(n, &f)| self.levels[n].target(f)).collect()
    }
}

/// Levelwise composite `g ∘ f`.
pub fn compose_ladders(layered: &LayeredCategory, g: &LadderMorphism, f: &LadderMorphism) -> Result<LadderMorphism> {
    layered.validate_ladder(f)?;
    layered.validate_ladder(g)?;
    let arrows = (0..layered.num_levels())
        .map(|n| {
            layered.levels[n]
                .compose(g.arrows[n], f.arrows[n])
                .ok_or_else(|| Error::Precondition(format!("ladders are not composable at level {n}")))
        })
        .collect::<Result<Vec<_>>>()?;
    layered.ladder(arrows)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PoweredReport {
    pub covering: bool,
    /// Levels whose morphism lies in no family of that level's assignment.
    pub failing_levels: Vec<usize>,
}

fn check_levels(layered: &LayeredCategory, ks: &[CoveringAssignment]) -> Result<()> {
    if ks.len() != layered.num_levels() {
        return Err(Error::Structural(format!(
            "{} assignments for {} levels",
            ks.len(),
            layered.num_levels()
        )));
    }
    Ok(())
}

/// A ladder covers when each level's morphism belongs to a covering family
/// of that level.
pub fn powered_cover_check(
    layered: &LayeredCategory,
    ladder: &LadderMorphism,
    ks: &[CoveringAssignment],
) -> Result<PoweredReport> {
    check_levels(layered, ks)?;
    layered.validate_ladder(ladder)?;
    let failing_levels: Vec<usize> = (0..layered.num_levels())
        .filter(|&n| !ks[n].covers_morphism(&layered.levels[n], ladder.arrows[n]))
        .collect();
    Ok(PoweredReport { covering: failing_levels.is_empty(), failing_levels })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "fault", rename_all = "snake_case")]
pub enum StabilityFault {
    /// Levelwise pullback apexes of `member` do not form a membership chain.
    CubeOpen { member: usize, level: usize },
    /// The pulled-back family at `level` is not covering.
    NotCovering { level: usize, family: Family },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PoweredStabilityReport {
    pub verdict: Verdict,
    pub pulled: Vec<LadderMorphism>,
    pub faults: Vec<StabilityFault>,
    /// `(level, f, g)` for cospans lacking a declared pullback.
    pub unverifiable: Vec<(usize, MorId, MorId)>,
}

/// Base-change a covering ladder family along `test` levelwise and check
/// that the result is again a covering ladder family.
pub fn powered_stability_probe(
    layered: &LayeredCategory,
    family: &[LadderMorphism],
    test: &LadderMorphism,
    ks: &[CoveringAssignment],
) -> Result<PoweredStabilityReport> {
    check_levels(layered, ks)?;
    layered.validate_ladder(test)?;
    let target = layered.target_chain(test);
    for (a, l) in family.iter().enumerate() {
        layered.validate_ladder(l)?;
        if layered.target_chain(l) != target {
            return Err(Error::Precondition(format!("ladder {a} and the test ladder have different targets")));
        }
    }
    for n in 0..layered.num_levels() {
        let fam: Family = family.iter().map(|l| l.arrows[n]).collect();
        if !ks[n].contains(target[n], &fam) {
            return Err(Error::Precondition(format!("the ladder family is not covering at level {n}")));
        }
    }
    let mut unverifiable = Vec::new();
    let mut faults = Vec::new();
    let mut pulled = Vec::new();
    for (a, l) in family.iter().enumerate() {
        let mut cones = Vec::new();
        for n in 0..layered.num_levels() {
            match pullback_along(&layered.levels[n], l.arrows[n], test.arrows[n]) {
                Some(cone) => cones.push(cone),
                None => unverifiable.push((n, l.arrows[n], test.arrows[n])),
            }
        }
        if cones.len() != layered.num_levels() {
            continue;
        }
        let mut closed = true;
        for n in 0..layered.num_levels() - 1 {
            if layered.member(n, cones[n + 1].apex) != cones[n].apex {
                faults.push(StabilityFault::CubeOpen { member: a, level: n });
                closed = false;
            }
        }
        if closed {
            pulled.push(layered.ladder(cones.iter().map(|c| c.second).collect())?);
        }
    }
    if unverifiable.is_empty() && faults.is_empty() {
        let z = layered.source_chain(test);
        for n in 0..layered.num_levels() {
            let fam: Family = pulled.iter().map(|l| l.arrows[n]).collect::<BTreeSet<_>>();
            if !ks[n].contains(z[n], &fam) {
                faults.push(StabilityFault::NotCovering { level: n, family: fam });
            }
        }
    }
    let verdict = Verdict::summarize(!faults.is_empty(), !unverifiable.is_empty());
    Ok(PoweredStabilityReport { verdict, pulled, faults, unverifiable })
}
