use std::collections::BTreeSet;
use std::sync::Arc;

use super::{blurry_axiom_probe, BlurryProbeReport, BlurrySite};
use crate::error::{Error, Result};
use crate::fincat::ObjId;
use crate::site::{powered_cover_check, CoveringAssignment, LadderMorphism, LayeredCategory, PoweredReport};

/// Levelwise class assignments on the layered category of quotients.
#[derive(Clone, Debug)]
pub struct PoweredBlurry {
    pub layered: LayeredCategory,
    pub quotient_layered: LayeredCategory,
    pub assignments: Vec<CoveringAssignment>,
    /// Probe result per level; `None` for levels declared loose.
    pub probes: Vec<Option<BlurryProbeReport>>,
    levels: Vec<BlurrySite>,
}

impl PoweredBlurry {
    /// The class ladder `[f_0], …, [f_n]` of a base ladder.
    pub fn classify(&self, ladder: &LadderMorphism) -> Result<LadderMorphism> {
        self.layered.validate_ladder(ladder)?;
        let arrows = ladder
            .arrows
            .iter()
            .enumerate()
            .map(|(n, &f)| self.levels[n].quotient.project_morphism(&self.levels[n].base, f))
            .collect();
        self.quotient_layered.ladder(arrows)
    }

    /// A class ladder covers when every level's class morphism is covering.
    pub fn check(&self, class_ladder: &LadderMorphism) -> Result<PoweredReport> {
        powered_cover_check(&self.quotient_layered, class_ladder, &self.assignments)
    }
}

/// Stack blurry sites along `layered`. Every level must pass
/// [`blurry_axiom_probe`] unless listed in `loose`.
pub fn powered_blurry_compose(
    levels: &[BlurrySite],
    layered: &LayeredCategory,
    loose: &BTreeSet<usize>,
) -> Result<PoweredBlurry> {
    if levels.len() != layered.num_levels() {
        return Err(Error::Structural(format!(
            "{} blurry sites for {} levels",
            levels.len(),
            layered.num_levels()
        )));
    }
    for (n, site) in levels.iter().enumerate() {
        if !Arc::ptr_eq(&site.base, &layered.levels()[n]) {
            return Err(Error::Structural(format!("blurry site {n} is not over level {n}")));
        }
    }
    let mut probes = Vec::new();
    for (n, site) in levels.iter().enumerate() {
        if loose.contains(&n) {
            probes.push(None);
            continue;
        }
        let p = blurry_axiom_probe(site)?;
        if !p.all_pass() {
            return Err(Error::Precondition(format!("level {n} fails the blurry axiom probe")));
        }
        probes.push(Some(p));
    }
    let mut membership = Vec::new();
    for n in 0..layered.num_levels() - 1 {
        let (lo, hi) = (&levels[n].relation, &levels[n + 1].relation);
        let mut map = Vec::with_capacity(hi.num_blocks());
        for b in 0..hi.num_blocks() {
            let images: BTreeSet<usize> = hi.block(b).iter().map(|&x| lo.block_of(layered.member(n, x))).collect();
            if images.len() != 1 {
                return Err(Error::Structural(format!(
                    "membership between levels {n} and {} does not respect the relations",
                    n + 1
                )));
            }
            map.push(ObjId(*images.iter().next().expect("one image") as u32));
        }
        membership.push(map);
    }
    let quotient_layered = LayeredCategory::new(levels.iter().map(|s| s.quotient.category.clone()).collect(), membership)?;
    let assignments = levels.iter().map(BlurrySite::quotient_assignment).collect();
    Ok(PoweredBlurry {
        layered: layered.clone(),
        quotient_layered,
        assignments,
        probes,
        levels: levels.to_vec(),
    })
}
