//! Point data standing in for residue fields.
//!
//! Each object carries a finite point set and each morphism a covariant map
//! of points together with the subset of its domain points at which it is
//! residue preserving (`k(u) ≅ k(f(u))`). Morphisms may be flagged `etale`
//! or `open`.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fincat::{FinCat, MorId, ObjId};
use crate::zlin::{z_validate, CompIdx, Term, ZMorphism, ZObject};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointedBase {
    points: Vec<Vec<String>>,
    maps: Vec<Vec<usize>>,
    residue: Vec<BTreeSet<usize>>,
    etale: BTreeSet<MorId>,
    open: BTreeSet<MorId>,
}

impl PointedBase {
    /// Validate point data against `c`: maps are functorial, residue sets
    /// lie in the domain, identities preserve every residue field, and
    /// `RP(g∘f) = {u ∈ RP(f) : f(u) ∈ RP(g)}`.
    pub fn new(
        c: &FinCat,
        points: Vec<Vec<String>>,
        maps: Vec<Vec<usize>>,
        residue: Vec<BTreeSet<usize>>,
        etale: BTreeSet<MorId>,
        open: BTreeSet<MorId>,
    ) -> Result<PointedBase> {
        let bad = |msg: String| Err(Error::Structural(msg));
        if points.len() != c.num_objects() {
            return bad(format!("{} point sets for {} objects", points.len(), c.num_objects()));
        }
        if maps.len() != c.num_morphisms() || residue.len() != c.num_morphisms() {
            return bad("point maps and residue sets must cover every morphism".into());
        }
        if let Some(f) = etale.iter().chain(&open).find(|f| f.index() >= c.num_morphisms()) {
            return Err(Error::UnknownId { kind: "morphism", id: f.to_string() });
        }
        for f in c.morphisms() {
            let (s, t) = (c.source(f), c.target(f));
            let m = &maps[f.index()];
            let label = c.mor_label(f);
            if m.len() != points[s.index()].len() {
                return bad(format!("point map of `{label}` has the wrong length"));
            }
            if m.iter().any(|&v| v >= points[t.index()].len()) {
                return bad(format!("point map of `{label}` leaves its target"));
            }
            if residue[f.index()].iter().any(|&u| u >= m.len()) {
                return bad(format!("residue set of `{label}` leaves its domain"));
            }
        }
        for x in c.objects() {
            let id = c.identity(x);
            let n = points[x.index()].len();
            if maps[id.index()] != (0..n).collect::<Vec<_>>() {
                return bad(format!("identity of `{}` does not fix points", c.obj_label(x)));
            }
            if residue[id.index()].len() != n {
                return bad(format!("identity of `{}` is not residue preserving", c.obj_label(x)));
            }
        }
        for (g, f, h) in c.composition_table() {
            let (mf, mg) = (&maps[f.index()], &maps[g.index()]);
            let composed: Vec<usize> = mf.iter().map(|&v| mg[v]).collect();
            if composed != maps[h.index()] {
                return bad(format!("point maps do not respect {} ∘ {}", c.mor_label(g), c.mor_label(f)));
            }
            let transported: BTreeSet<usize> = residue[f.index()]
                .iter()
                .copied()
                .filter(|&u| residue[g.index()].contains(&mf[u]))
                .collect();
            if transported != residue[h.index()] {
                return bad(format!(
                    "residue set of `{}` is not transported from {} and {}",
                    c.mor_label(h),
                    c.mor_label(g),
                    c.mor_label(f)
                ));
            }
        }
        Ok(PointedBase { points, maps, residue, etale, open })
    }

    pub fn points(&self, x: ObjId) -> &[String] {
        &self.points[x.index()]
    }

    pub fn num_points(&self, x: ObjId) -> usize {
        self.points[x.index()].len()
    }

    pub fn point_map(&self, f: MorId) -> &[usize] {
        &self.maps[f.index()]
    }

    pub fn residue_set(&self, f: MorId) -> &BTreeSet<usize> {
        &self.residue[f.index()]
    }

    pub fn is_residue_preserving(&self, f: MorId, u: usize) -> bool {
        self.residue[f.index()].contains(&u)
    }

    pub fn is_etale(&self, f: MorId) -> bool {
        self.etale.contains(&f)
    }

    pub fn is_open(&self, f: MorId) -> bool {
        self.open.contains(&f)
    }

    pub fn etale(&self) -> &BTreeSet<MorId> {
        &self.etale
    }

    pub fn open(&self) -> &BTreeSet<MorId> {
        &self.open
    }

    /// Rename points along bijections `perm[x][old] = new`.
    pub fn relabel(&self, c: &FinCat, perm: &[Vec<usize>]) -> Result<PointedBase> {
        let mut points = self.points.clone();
        for x in c.objects() {
            let p = &perm[x.index()];
            for (old, &new) in p.iter().enumerate() {
                points[x.index()][new] = self.points[x.index()][old].clone();
            }
        }
        let mut maps = self.maps.clone();
        let mut residue = self.residue.clone();
        for f in c.morphisms() {
            let (ps, pt) = (&perm[c.source(f).index()], &perm[c.target(f).index()]);
            for (u, &v) in self.maps[f.index()].iter().enumerate() {
                maps[f.index()][ps[u]] = pt[v];
            }
            residue[f.index()] = self.residue[f.index()].iter().map(|&u| ps[u]).collect();
        }
        PointedBase::new(c, points, maps, residue, self.etale.clone(), self.open.clone())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverReport {
    pub covered: bool,
    /// `(component, point)` pairs with no residue-preserving lift.
    pub uncovered: Vec<(CompIdx, usize)>,
}

fn check_members(c: &FinCat, base: &PointedBase, family: &[ZMorphism], x: &ZObject) -> Result<()> {
    for (a, phi) in family.iter().enumerate() {
        if phi.target() != x {
            return Err(Error::Precondition(format!("member {a} does not target the covered object")));
        }
        if !z_validate(c, phi).is_valid() {
            return Err(Error::Precondition(format!("member {a} violates its marginals")));
        }
        if let Some(t) = phi.terms().find(|t| !base.is_etale(t.arrow)) {
            return Err(Error::Precondition(format!(
                "term {t} of member {a} uses `{}`, which is not etale",
                c.mor_label(t.arrow)
            )));
        }
    }
    Ok(())
}

fn uncovered(base: &PointedBase, family: &[&ZMorphism], x: &ZObject) -> Vec<(CompIdx, usize)> {
    let mut out = Vec::new();
    for (j, xj, _) in x.components() {
        let mut hit = vec![false; base.num_points(xj)];
        for phi in family {
            for t in phi.terms().filter(|t| t.j == j) {
                let m = base.point_map(t.arrow);
                for &u in base.residue_set(t.arrow) {
                    hit[m[u]] = true;
                }
            }
        }
        out.extend(hit.iter().enumerate().filter(|(_, h)| !**h).map(|(p, _)| (j, p)));
    }
    out
}

/// Every point of every component of `x` lifts residue-preservingly along
/// some term of some member.
pub fn nisnevich_cover_check(c: &FinCat, base: &PointedBase, family: &[ZMorphism], x: &ZObject) -> Result<CoverReport> {
    check_members(c, base, family, x)?;
    let refs: Vec<&ZMorphism> = family.iter().collect();
    let un = uncovered(base, &refs, x);
    Ok(CoverReport { covered: un.is_empty(), uncovered: un })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentCover {
    pub component: CompIdx,
    /// Members with a term into this component (`A_j`).
    pub members: Vec<usize>,
    pub covered: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LemmaReport {
    pub whole: bool,
    pub components: Vec<ComponentCover>,
    /// `∩ A_j`.
    pub intersection: Vec<usize>,
    pub componentwise: bool,
    pub agree: bool,
}

/// The part of `phi` landing in component `j`, as a morphism into `m_j[X_j]`.
fn restrict(phi: &ZMorphism, j: CompIdx) -> Result<ZMorphism> {
    let (xj, mj) = phi.target().get(j).expect("component of target");
    let mut rows: BTreeMap<CompIdx, i64> = BTreeMap::new();
    for t in phi.terms().filter(|t| t.j == j) {
        *rows.entry(t.i).or_default() += t.coeff;
    }
    if let Some((&i, _)) = rows.iter().find(|(_, &m)| m == 0) {
        return Err(Error::Precondition(format!("restriction to component {j} cancels source component {i}")));
    }
    let source = ZObject::new(rows.iter().map(|(&i, &m)| (i, phi.source().get(i).expect("source").0, m)))?;
    let target = ZObject::single(xj, mj)?;
    let terms = phi.terms().filter(|t| t.j == j).map(|t| Term { j: 1, ..t });
    ZMorphism::new(source, target, terms)
}

/// Compare the whole cover check with the componentwise one: for every `j`
/// the restricted family indexed by `∩ A_j` covers `m_j[X_j]`, and that
/// intersection is the whole index set.
pub fn nisnevich_component_lemma_check(
    c: &FinCat,
    base: &PointedBase,
    family: &[ZMorphism],
    x: &ZObject,
) -> Result<LemmaReport> {
    let whole = nisnevich_cover_check(c, base, family, x)?.covered;
    let a_sets: Vec<(CompIdx, Vec<usize>)> = x
        .indices()
        .map(|j| (j, (0..family.len()).filter(|&a| family[a].terms().any(|t| t.j == j)).collect()))
        .collect();
    let intersection: Vec<usize> = (0..family.len())
        .filter(|a| a_sets.iter().all(|(_, s)| s.contains(a)))
        .collect();
    let mut components = Vec::new();
    for (j, members) in a_sets {
        let restricted: Vec<ZMorphism> = intersection.iter().map(|&a| restrict(&family[a], j)).collect::<Result<_>>()?;
        let (xj, mj) = x.get(j).expect("component");
        let part = ZObject::single(xj, mj)?;
        let covered = nisnevich_cover_check(c, base, &restricted, &part)?.covered;
        components.push(ComponentCover { component: j, members, covered });
    }
    let componentwise = intersection.len() == family.len() && components.iter().all(|k| k.covered);
    Ok(LemmaReport { whole, components, intersection, componentwise, agree: whole == componentwise })
}

/// A commuting square `W → V`, `W → U`, `U → X`, `V → X`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Square {
    pub wv: MorId,
    pub wu: MorId,
    pub ux: MorId,
    pub vx: MorId,
}

impl Square {
    pub fn objects(&self, c: &FinCat) -> [ObjId; 4] {
        [c.source(self.wv), c.target(self.wv), c.target(self.wu), c.target(self.ux)]
    }

    /// Check endpoints and commutativity.
    pub fn validate(&self, c: &FinCat) -> Result<()> {
        if let Some(f) = [self.wv, self.wu, self.ux, self.vx].into_iter().find(|f| f.index() >= c.num_morphisms()) {
            return Err(Error::UnknownId { kind: "morphism", id: f.to_string() });
        }
        let shaped = c.source(self.wv) == c.source(self.wu)
            && c.target(self.wv) == c.source(self.vx)
            && c.target(self.wu) == c.source(self.ux)
            && c.target(self.ux) == c.target(self.vx);
        if !shaped {
            return Err(Error::Structural("square legs do not share their corners".into()));
        }
        let (a, b) = (c.compose(self.vx, self.wv), c.compose(self.ux, self.wu));
        if a.is_none() || a != b {
            return Err(Error::Structural("square does not commute".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "fault", rename_all = "snake_case")]
pub enum SquareFault {
    NotEtale { f: MorId },
    NotOpen { f: MorId },
    /// Point `point` of X is hit twice by the open leg.
    NotInjective { f: MorId, point: usize },
    NotResiduePreserving { f: MorId, point: usize },
    /// A point of X outside U is hit by several points of V.
    ComplementHitTwice { point: usize, preimages: Vec<usize> },
    ComplementMissed { point: usize },
    /// A point of V over the complement does not preserve its residue field.
    ComplementResidue { point: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SquareReport {
    pub holds: bool,
    pub faults: Vec<SquareFault>,
}

/// `V → X` etale, `U → X` an open embedding, and `V` an isomorphism of
/// points over the complement of `U`.
pub fn distinguished_square_check(c: &FinCat, base: &PointedBase, sq: &Square) -> Result<SquareReport> {
    sq.validate(c)?;
    let mut faults = Vec::new();
    if !base.is_etale(sq.vx) {
        faults.push(SquareFault::NotEtale { f: sq.vx });
    }
    if !base.is_open(sq.ux) {
        faults.push(SquareFault::NotOpen { f: sq.ux });
    }
    let x = c.target(sq.ux);
    let mu = base.point_map(sq.ux);
    let mut image = vec![0usize; base.num_points(x)];
    for (u, &p) in mu.iter().enumerate() {
        image[p] += 1;
        if image[p] == 2 {
            faults.push(SquareFault::NotInjective { f: sq.ux, point: p });
        }
        if !base.is_residue_preserving(sq.ux, u) {
            faults.push(SquareFault::NotResiduePreserving { f: sq.ux, point: u });
        }
    }
    let mv = base.point_map(sq.vx);
    let mut over: Vec<Vec<usize>> = vec![Vec::new(); base.num_points(x)];
    for (v, &p) in mv.iter().enumerate() {
        if image[p] == 0 {
            over[p].push(v);
            if !base.is_residue_preserving(sq.vx, v) {
                faults.push(SquareFault::ComplementResidue { point: v });
            }
        }
    }
    for (p, pre) in over.into_iter().enumerate() {
        if image[p] > 0 {
            continue;
        }
        match pre.len() {
            0 => faults.push(SquareFault::ComplementMissed { point: p }),
            1 => {}
            _ => faults.push(SquareFault::ComplementHitTwice { point: p, preimages: pre }),
        }
    }
    Ok(SquareReport { holds: faults.is_empty(), faults })
}
