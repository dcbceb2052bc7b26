use std::collections::BTreeSet;
use std::sync::Arc;

use serde::Serialize;

use super::functor::{check_functor, Functor, FunctorReport};
use super::{FinCat, MorId, ObjId};
use crate::error::{Error, Result};

/// An equivalence relation on objects, stored as a canonical partition:
/// blocks sorted internally and ordered by their least member.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ObjEquiv {
    blocks: Vec<Vec<ObjId>>,
    block_of: Vec<usize>,
}

impl ObjEquiv {
    /// Validate that `blocks` are disjoint and cover `0..n_objects`.
    pub fn new(n_objects: usize, blocks: Vec<Vec<ObjId>>) -> Result<ObjEquiv> {
        let mut seen = vec![false; n_objects];
        for block in &blocks {
            if block.is_empty() {
                return Err(Error::Partition("empty block".into()));
            }
            for &x in block {
                if x.index() >= n_objects {
                    return Err(Error::Partition(format!("object {x} is out of range")));
                }
                if std::mem::replace(&mut seen[x.index()], true) {
                    return Err(Error::Partition(format!("object {x} lies in two blocks")));
                }
            }
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(Error::Partition(format!(
                "object o{missing} is not covered by any block"
            )));
        }
        Ok(Self::canonical(n_objects, blocks))
    }

    fn canonical(n_objects: usize, mut blocks: Vec<Vec<ObjId>>) -> ObjEquiv {
        for b in &mut blocks {
            b.sort();
        }
        blocks.sort();
        let mut block_of = vec![0; n_objects];
        for (i, b) in blocks.iter().enumerate() {
            for x in b {
                block_of[x.index()] = i;
            }
        }
        ObjEquiv { blocks, block_of }
    }

    /// All singleton blocks.
    pub fn discrete(n_objects: usize) -> ObjEquiv {
        Self::canonical(n_objects, (0..n_objects as u32).map(|i| vec![ObjId(i)]).collect())
    }

    /// The smallest equivalence relation containing `pairs`.
    pub fn generated(n_objects: usize, pairs: impl IntoIterator<Item = (ObjId, ObjId)>) -> ObjEquiv {
        let mut parent: Vec<usize> = (0..n_objects).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let next = p[y];
                p[y] = r;
                y = next;
            }
            r
        }
        for (a, b) in pairs {
            let (ra, rb) = (find(&mut parent, a.index()), find(&mut parent, b.index()));
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
        let mut groups: Vec<Vec<ObjId>> = vec![Vec::new(); n_objects];
        for x in 0..n_objects {
            let r = find(&mut parent, x);
            groups[r].push(ObjId(x as u32));
        }
        Self::canonical(n_objects, groups.into_iter().filter(|g| !g.is_empty()).collect())
    }

    /// Blocks given by object labels of `c`.
    pub fn from_labels<S: AsRef<str>>(c: &FinCat, blocks: &[Vec<S>]) -> Result<ObjEquiv> {
        let blocks = blocks
            .iter()
            .map(|b| b.iter().map(|l| c.obj(l.as_ref())).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        ObjEquiv::new(c.num_objects(), blocks)
    }

    pub fn num_objects(&self) -> usize {
        self.block_of.len()
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[Vec<ObjId>] {
        &self.blocks
    }

    pub fn block(&self, b: usize) -> &[ObjId] {
        &self.blocks[b]
    }

    pub fn block_of(&self, x: ObjId) -> usize {
        self.block_of[x.index()]
    }

    pub fn related(&self, x: ObjId, y: ObjId) -> bool {
        self.block_of(x) == self.block_of(y)
    }

    pub fn is_discrete(&self) -> bool {
        self.blocks.len() == self.block_of.len()
    }

    /// Display label `[a,b]` of a block.
    pub fn block_label(&self, c: &FinCat, b: usize) -> String {
        let names: Vec<&str> = self.blocks[b].iter().map(|&x| c.obj_label(x)).collect();
        format!("[{}]", names.join(","))
    }
}

/// `[X] → [Y]` and `[Y] → [Z]` both inhabited while `[X] → [Z]` is not.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SaturationGap {
    pub from: usize,
    pub via: usize,
    pub to: usize,
}

/// The thin quotient `C/∼` together with the projection data.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub category: Arc<FinCat>,
    pub relation: ObjEquiv,
    /// `class_morphism[s][t]`: the unique morphism `[s] → [t]`, if inhabited.
    class_morphism: Vec<Vec<Option<MorId>>>,
    /// Representatives of each quotient morphism, in id order.
    representatives: Vec<Vec<MorId>>,
    pub saturation: Vec<SaturationGap>,
}

impl Quotient {
    pub fn class_morphism(&self, from: usize, to: usize) -> Option<MorId> {
        self.class_morphism[from][to]
    }

    pub fn representatives(&self, class: MorId) -> &[MorId] {
        &self.representatives[class.index()]
    }

    /// Block of `x`, as an object of the quotient.
    pub fn project_object(&self, x: ObjId) -> ObjId {
        ObjId(self.relation.block_of(x) as u32)
    }

    pub fn project_morphism(&self, base: &FinCat, f: MorId) -> MorId {
        let (s, t) = (
            self.relation.block_of(base.source(f)),
            self.relation.block_of(base.target(f)),
        );
        self.class_morphism[s][t].expect("a representative inhabits its class")
    }

    pub fn is_saturated(&self) -> bool {
        self.saturation.is_empty()
    }
}

/// Collapse `c` along `relation`: blocks become objects, and `[X] → [Y]`
/// exists exactly when some representative morphism does.
///
/// Composites whose class is not inhabited are left undefined and listed in
/// the saturation report instead of failing.
pub fn quotient_category(c: &FinCat, relation: &ObjEquiv) -> Result<Quotient> {
    if relation.num_objects() != c.num_objects() {
        return Err(Error::Partition(format!(
            "partition covers {} objects but the category has {}",
            relation.num_objects(),
            c.num_objects()
        )));
    }
    let nb = relation.num_blocks();
    let mut inhabited: Vec<Vec<Vec<MorId>>> = vec![vec![Vec::new(); nb]; nb];
    for f in c.morphisms() {
        let (s, t) = (relation.block_of(c.source(f)), relation.block_of(c.target(f)));
        inhabited[s][t].push(f);
    }
    let labels: Vec<String> = (0..nb).map(|b| relation.block_label(c, b)).collect();
    let mut b = FinCat::builder();
    for l in &labels {
        b.object(l);
    }
    let name = |s: usize, t: usize| {
        if s == t {
            format!("id_{}", labels[s])
        } else {
            format!("{}->{}", labels[s], labels[t])
        }
    };
    let mut representatives = Vec::new();
    for s in 0..nb {
        for t in 0..nb {
            if !inhabited[s][t].is_empty() {
                b.morphism(&name(s, t), &labels[s], &labels[t]);
                representatives.push(inhabited[s][t].clone());
            }
        }
        b.identity(&labels[s], &name(s, s));
    }
    let mut saturation = Vec::new();
    for s in 0..nb {
        for t in 0..nb {
            if inhabited[s][t].is_empty() {
                continue;
            }
            for u in 0..nb {
                if inhabited[t][u].is_empty() {
                    continue;
                }
                if inhabited[s][u].is_empty() {
                    saturation.push(SaturationGap { from: s, via: t, to: u });
                } else {
                    b.compose(&name(t, u), &name(s, t), &name(s, u));
                }
            }
        }
    }
    let category = b.build()?;
    let mut class_morphism = vec![vec![None; nb]; nb];
    for (s, row) in class_morphism.iter_mut().enumerate() {
        for (t, cell) in row.iter_mut().enumerate() {
            *cell = category.mor_id(&name(s, t));
        }
    }
    Ok(Quotient {
        category: Arc::new(category),
        relation: relation.clone(),
        class_morphism,
        representatives,
        saturation,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "fault", rename_all = "snake_case")]
pub enum WellDefinednessFault {
    /// `x` lies in a block whose image is not the block of `F x`.
    Object { object: ObjId },
    /// Representative `f` of a class maps outside the assigned image class.
    Morphism { class: MorId, representative: MorId },
}

#[derive(Clone, Debug)]
pub struct InducedFunctor {
    pub source: Quotient,
    pub target: Quotient,
    pub functor: Functor,
    pub faults: Vec<WellDefinednessFault>,
    pub report: FunctorReport,
}

impl InducedFunctor {
    pub fn is_well_defined(&self) -> bool {
        self.faults.is_empty()
    }
}

/// `[F]: C/∼ → D/∼` with `[X] ↦ [FX]` and `[φ] ↦ [Fφ]`.
///
/// The target relation is the closure of `FX ∼ FX'` for `X ∼ X'` unless one
/// is supplied, in which case it must contain every such pair. Independence
/// of the chosen representatives is verified by enumeration.
pub fn induced_functor(
    functor: &Functor,
    relation: &ObjEquiv,
    target_relation: Option<&ObjEquiv>,
) -> Result<InducedFunctor> {
    let (c, d) = (&*functor.source, &*functor.target);
    let pushed: Vec<(ObjId, ObjId)> = relation
        .blocks()
        .iter()
        .flat_map(|b| b.windows(2).map(|w| (functor.on_object(w[0]), functor.on_object(w[1]))))
        .collect();
    let target_rel = match target_relation {
        None => ObjEquiv::generated(d.num_objects(), pushed),
        Some(r) => {
            if r.num_objects() != d.num_objects() {
                return Err(Error::Partition("target relation has the wrong size".into()));
            }
            let offending: BTreeSet<String> = pushed
                .iter()
                .filter(|(a, b)| !r.related(*a, *b))
                .map(|(a, b)| format!("{}~{}", d.obj_label(*a), d.obj_label(*b)))
                .collect();
            if !offending.is_empty() {
                return Err(Error::Partition(format!(
                    "target relation does not contain the pushed-forward pairs {}",
                    offending.into_iter().collect::<Vec<_>>().join(", ")
                )));
            }
            r.clone()
        }
    };
    let source_q = quotient_category(c, relation)?;
    let target_q = quotient_category(d, &target_rel)?;
    let sq = &*source_q.category;

    let mut faults = Vec::new();
    let obj_map: Vec<ObjId> = (0..relation.num_blocks())
        .map(|b| target_q.project_object(functor.on_object(relation.block(b)[0])))
        .collect();
    for x in c.objects() {
        if target_q.project_object(functor.on_object(x)) != obj_map[relation.block_of(x)] {
            faults.push(WellDefinednessFault::Object { object: x });
        }
    }
    let mut mor_map = Vec::with_capacity(sq.num_morphisms());
    for class in sq.morphisms() {
        let reps = source_q.representatives(class);
        let (s, t) = (obj_map[sq.source(class).index()], obj_map[sq.target(class).index()]);
        let image = target_q
            .class_morphism(s.index(), t.index())
            .ok_or_else(|| Error::Structural("image class is not inhabited".into()))?;
        for &f in reps {
            if target_q.project_morphism(d, functor.on_morphism(f)) != image {
                faults.push(WellDefinednessFault::Morphism { class, representative: f });
            }
        }
        mor_map.push(image);
    }
    let induced = Functor::new(source_q.category.clone(), target_q.category.clone(), obj_map, mor_map)?;
    let report = check_functor(&induced);
    Ok(InducedFunctor { source: source_q, target: target_q, functor: induced, faults, report })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iso_pair() -> FinCat {
        let mut b = FinCat::builder();
        b.object("A")
            .object("B")
            .morphism("i", "A", "B")
            .morphism("j", "B", "A")
            .auto_identities()
            .identity_composites()
            .compose("j", "i", "id_A")
            .compose("i", "j", "id_B");
        b.build().unwrap()
    }

    #[test]
    fn partition_must_be_disjoint_and_exhaustive() {
        assert!(ObjEquiv::new(3, vec![vec![ObjId(0)], vec![ObjId(1)]]).is_err());
        assert!(ObjEquiv::new(2, vec![vec![ObjId(0), ObjId(1)], vec![ObjId(1)]]).is_err());
        let r = ObjEquiv::new(3, vec![vec![ObjId(2), ObjId(0)], vec![ObjId(1)]]).unwrap();
        assert_eq!(r.blocks(), &[vec![ObjId(0), ObjId(2)], vec![ObjId(1)]]);
    }

    #[test]
    fn trivial_partition_of_a_poset_is_an_isomorphic_copy() {
        let c = FinCat::thin(&["a", "b", "c"], |x, y| x < y);
        let q = quotient_category(&c, &ObjEquiv::discrete(3)).unwrap();
        assert!(q.is_saturated());
        assert_eq!(q.category.num_morphisms(), c.num_morphisms());
        assert!(q.category.validate().is_valid());
    }

    #[test]
    fn trivial_partition_merges_parallel_morphisms() {
        let c = FinCat::free_on_dag(&["a", "b"], &[("f", 0, 1), ("g", 0, 1)]);
        let q = quotient_category(&c, &ObjEquiv::discrete(2)).unwrap();
        assert_eq!(q.category.num_morphisms(), 3);
        assert!(q.category.is_thin());
    }

    #[test]
    fn identifying_an_iso_pair_gives_the_terminal_category() {
        let c = iso_pair();
        let r = ObjEquiv::new(2, vec![vec![ObjId(0), ObjId(1)]]).unwrap();
        let q = quotient_category(&c, &r).unwrap();
        assert!(q.is_saturated());
        assert_eq!(q.category.num_objects(), 1);
        assert_eq!(q.category.num_morphisms(), 1);
        assert_eq!(q.representatives(MorId(0)).len(), 4);
    }

    #[test]
    fn gap_in_a_broken_chain_is_reported() {
        // X → Y and Y' → Z with Y ∼ Y' but nothing X → Z.
        let mut b = FinCat::builder();
        b.object("X").object("Y").object("Y'").object("Z");
        b.morphism("f", "X", "Y").morphism("g", "Y'", "Z");
        b.auto_identities().identity_composites();
        let c = b.build().unwrap();
        let r = ObjEquiv::from_labels(&c, &[vec!["X"], vec!["Y", "Y'"], vec!["Z"]]).unwrap();
        let q = quotient_category(&c, &r).unwrap();
        let (x, z) = (r.block_of(c.obj_id("X").unwrap()), r.block_of(c.obj_id("Z").unwrap()));
        assert_eq!(q.saturation.len(), 1);
        assert_eq!((q.saturation[0].from, q.saturation[0].to), (x, z));
        assert!(!q.category.validate().is_valid());
    }

    #[test]
    fn induced_identity_and_constant_functors() {
        let c = Arc::new(FinCat::thin(&["a", "b", "c"], |x, y| x < y));
        let id = Functor::identity(c.clone());
        let ind = induced_functor(&id, &ObjEquiv::discrete(3), None).unwrap();
        assert!(ind.is_well_defined());
        assert!(ind.report.functorial);
        assert_eq!(ind.functor.obj_map, vec![ObjId(0), ObjId(1), ObjId(2)]);

        let t = Arc::new(FinCat::terminal());
        let k = Functor::constant(c.clone(), t, ObjId(0));
        let r = ObjEquiv::from_labels(&c, &[vec!["a", "b"], vec!["c"]]).unwrap();
        let ind = induced_functor(&k, &r, None).unwrap();
        assert!(ind.functor.obj_map.iter().all(|&o| o == ObjId(0)));
        assert!(ind.is_well_defined());
    }

    #[test]
    fn supplied_target_relation_must_contain_pushforward() {
        let c = Arc::new(FinCat::thin(&["a", "b"], |x, y| x < y));
        let id = Functor::identity(c.clone());
        let r = ObjEquiv::new(2, vec![vec![ObjId(0), ObjId(1)]]).unwrap();
        let err = induced_functor(&id, &r, Some(&ObjEquiv::discrete(2))).unwrap_err();
        assert!(matches!(err, Error::Partition(msg) if msg.contains("a~b")));
    }
}
