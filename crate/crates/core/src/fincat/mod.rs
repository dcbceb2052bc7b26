//! Finite categories given by explicit composition tables.
//!
//! A [`FinCat`] stores its data exactly as declared: structural consistency
//! (every id resolves) is enforced at construction, while the category laws
//! are checked on demand by [`FinCat::validate`]. This lets malformed tables
//! be loaded and reported on instead of rejected.

mod functor;
mod limits;
mod quotient;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par;

pub use functor::{check_functor, compose_functors, Functor, FunctorReport, FunctorViolation};
pub use limits::{chosen_limit_check, LimitFault, LimitRef, LimitReport, LimitViolation};
pub use quotient::{
    induced_functor, quotient_category, InducedFunctor, ObjEquiv, Quotient, SaturationGap,
    WellDefinednessFault,
};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ObjId(pub u32);

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MorId(pub u32);

impl ObjId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl MorId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for ObjId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "o{}", self.0)
    }
}

impl fmt::Display for MorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "m{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    pub label: String,
    pub source: ObjId,
    pub target: ObjId,
}

/// A chosen limit cone: apex with its two legs.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cone {
    pub apex: ObjId,
    pub first: MorId,
    pub second: MorId,
}

#[derive(Clone, Debug)]
pub struct FinCat {
    objects: Vec<String>,
    morphisms: Vec<Morphism>,
    identities: Vec<MorId>,
    compose: HashMap<(MorId, MorId), MorId>,
    pullbacks: BTreeMap<(MorId, MorId), Cone>,
    products: BTreeMap<(ObjId, ObjId), Cone>,
    hom: Vec<Vec<MorId>>,
    obj_index: HashMap<String, ObjId>,
    mor_index: HashMap<String, MorId>,
}

/// A violated category law, with the morphisms that witness it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "law", rename_all = "snake_case")]
pub enum LawViolation {
    IdentityEndpoints { object: ObjId, identity: MorId },
    MissingComposite { g: MorId, f: MorId },
    NotComposable { g: MorId, f: MorId, result: MorId },
    MistargetedComposite { g: MorId, f: MorId, result: MorId },
    LeftIdentity { f: MorId, got: MorId },
    RightIdentity { f: MorId, got: MorId },
    Associativity { h: MorId, g: MorId, f: MorId, left: MorId, right: MorId },
    Limit(LimitViolation),
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<LawViolation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl FinCat {
    pub fn builder() -> FinCatBuilder {
        FinCatBuilder::default()
    }

    /// The category with one object and its identity.
    pub fn terminal() -> FinCat {
        let mut b = FinCat::builder();
        b.object("*").auto_identities().identity_composites();
        b.build().expect("terminal category is well formed")
    }

    /// The thin category of a preorder on `labels`.
    ///
    /// `leq(a, b)` lists generating relations; the reflexive-transitive
    /// closure is taken. Morphisms are labelled `a->b`, identities `id_a`.
    pub fn thin<S: AsRef<str>>(labels: &[S], leq: impl Fn(usize, usize) -> bool) -> FinCat {
        let n = labels.len();
        let mut rel = vec![vec![false; n]; n];
        for (a, row) in rel.iter_mut().enumerate() {
            for (b, cell) in row.iter_mut().enumerate() {
                *cell = a == b || leq(a, b);
            }
        }
        for k in 0..n {
            for a in 0..n {
                for b in 0..n {
                    if rel[a][k] && rel[k][b] {
                        rel[a][b] = true;
                    }
                }
            }
        }
        let name = |a: usize, b: usize| {
            if a == b {
                format!("id_{}", labels[a].as_ref())
            } else {
                format!("{}->{}", labels[a].as_ref(), labels[b].as_ref())
            }
        };
        let mut builder = FinCat::builder();
        for l in labels {
            builder.object(l.as_ref());
        }
        for a in 0..n {
            for b in 0..n {
                if rel[a][b] {
                    builder.morphism(&name(a, b), labels[a].as_ref(), labels[b].as_ref());
                }
            }
            builder.identity(labels[a].as_ref(), &name(a, a));
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if rel[a][b] && rel[b][c] {
                        builder.compose(&name(b, c), &name(a, b), &name(a, c));
                    }
                }
            }
        }
        builder.build().expect("preorder categories are well formed")
    }

    /// The free category on a finite acyclic multigraph: morphisms are paths.
    ///
    /// Edges are `(label, source, target)`; a path `f` then `g` is labelled
    /// `g.f`. Panics if the graph has a cycle, since the path set would be
    /// infinite.
    pub fn free_on_dag<S: AsRef<str>>(objects: &[S], edges: &[(S, usize, usize)]) -> FinCat {
        let n = objects.len();
        // paths[x][y] = list of (label, edge sequence)
        let mut paths: Vec<Vec<Vec<(String, Vec<usize>)>>> = vec![vec![Vec::new(); n]; n];
        for x in 0..n {
            paths[x][x].push((format!("id_{}", objects[x].as_ref()), Vec::new()));
        }
        // Extend by breadth: at most n-1 edges in any path.
        let mut frontier: Vec<(usize, usize, Vec<usize>)> =
            (0..n).map(|x| (x, x, Vec::new())).collect();
        for _ in 0..n {
            let mut next = Vec::new();
            for (x, y, seq) in &frontier {
                for (e, (_, s, t)) in edges.iter().enumerate() {
                    if s == y {
                        let mut seq2 = seq.clone();
                        seq2.push(e);
                        next.push((*x, *t, seq2));
                    }
                }
            }
            for (x, y, seq) in &next {
                let label = seq
                    .iter()
                    .rev()
                    .map(|&e| edges[e].0.as_ref().to_string())
                    .collect::<Vec<_>>()
                    .join(".");
                paths[*x][*y].push((label, seq.clone()));
            }
            frontier = next;
        }
        assert!(frontier.is_empty(), "free_on_dag requires an acyclic graph");
        let mut b = FinCat::builder();
        let mut by_seq: HashMap<Vec<usize>, String> = HashMap::new();
        for o in objects {
            b.object(o.as_ref());
        }
        for x in 0..n {
            for y in 0..n {
                for (label, seq) in &paths[x][y] {
                    b.morphism(label, objects[x].as_ref(), objects[y].as_ref());
                    if seq.is_empty() {
                        b.identity(objects[x].as_ref(), label);
                    } else {
                        by_seq.insert(seq.clone(), label.clone());
                    }
                }
            }
        }
        let all: Vec<(usize, usize, String, Vec<usize>)> = (0..n)
            .flat_map(|x| (0..n).map(move |y| (x, y)))
            .flat_map(|(x, y)| {
                paths[x][y]
                    .iter()
                    .map(move |(l, s)| (x, y, l.clone(), s.clone()))
            })
            .collect();
        for (fx, fy, fl, fs) in &all {
            for (gx, _gy, gl, gs) in &all {
                if fy != gx {
                    continue;
                }
                let _ = fx;
                let mut seq = fs.clone();
                seq.extend(gs.iter().copied());
                let label = if seq.is_empty() {
                    format!("id_{}", objects[*fy].as_ref())
                } else {
                    by_seq[&seq].clone()
                };
                b.compose(gl, fl, &label);
            }
        }
        b.build().expect("free categories are well formed")
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn num_morphisms(&self) -> usize {
        self.morphisms.len()
    }

    pub fn objects(&self) -> impl Iterator<Item = ObjId> + '_ {
        (0..self.objects.len() as u32).map(ObjId)
    }

    pub fn morphisms(&self) -> impl Iterator<Item = MorId> + '_ {
        (0..self.morphisms.len() as u32).map(MorId)
    }

    pub fn obj_label(&self, x: ObjId) -> &str {
        &self.objects[x.index()]
    }

    pub fn mor_label(&self, f: MorId) -> &str {
        &self.morphisms[f.index()].label
    }

    pub fn obj_id(&self, label: &str) -> Option<ObjId> {
        self.obj_index.get(label).copied()
    }

    pub fn mor_id(&self, label: &str) -> Option<MorId> {
        self.mor_index.get(label).copied()
    }

    /// Object id by label, or an [`Error::UnknownId`].
    pub fn obj(&self, label: &str) -> Result<ObjId> {
        self.obj_id(label).ok_or_else(|| Error::UnknownId {
            kind: "object",
            id: label.to_string(),
        })
    }

    /// Morphism id by label, or an [`Error::UnknownId`].
    pub fn mor(&self, label: &str) -> Result<MorId> {
        self.mor_id(label).ok_or_else(|| Error::UnknownId {
            kind: "morphism",
            id: label.to_string(),
        })
    }

    pub fn source(&self, f: MorId) -> ObjId {
        self.morphisms[f.index()].source
    }

    pub fn target(&self, f: MorId) -> ObjId {
        self.morphisms[f.index()].target
    }

    pub fn identity(&self, x: ObjId) -> MorId {
        self.identities[x.index()]
    }

    pub fn is_identity(&self, f: MorId) -> bool {
        self.identities[self.source(f).index()] == f
    }

    /// `g ∘ f` as declared in the table, if any.
    pub fn compose(&self, g: MorId, f: MorId) -> Option<MorId> {
        self.compose.get(&(g, f)).copied()
    }

    /// Morphisms with declared endpoints `x → y`, in id order.
    pub fn hom(&self, x: ObjId, y: ObjId) -> &[MorId] {
        &self.hom[x.index() * self.objects.len() + y.index()]
    }

    /// Some `g` with `g∘f = id` and `f∘g = id`.
    pub fn inverse(&self, f: MorId) -> Option<MorId> {
        let (x, y) = (self.source(f), self.target(f));
        self.hom(y, x).iter().copied().find(|&g| {
            self.compose(g, f) == Some(self.identity(x)) && self.compose(f, g) == Some(self.identity(y))
        })
    }

    pub fn is_iso(&self, f: MorId) -> bool {
        self.inverse(f).is_some()
    }

    /// First isomorphism `x → y` found by exhaustive search.
    pub fn isomorphism(&self, x: ObjId, y: ObjId) -> Option<MorId> {
        self.hom(x, y).iter().copied().find(|&f| self.is_iso(f))
    }

    pub fn is_thin(&self) -> bool {
        self.hom.iter().all(|h| h.len() <= 1)
    }

    /// Chosen pullback of the cospan `f: A → X ← B: g`. The cone's `first`
    /// leg targets `A`, `second` targets `B`, whichever order it was declared in.
    pub fn pullback(&self, f: MorId, g: MorId) -> Option<Cone> {
        if let Some(c) = self.pullbacks.get(&(f, g)) {
            return Some(*c);
        }
        self.pullbacks.get(&(g, f)).map(|c| Cone {
            apex: c.apex,
            first: c.second,
            second: c.first,
        })
    }

    /// Chosen product `a × b`, legs oriented as for [`FinCat::pullback`].
    pub fn product(&self, a: ObjId, b: ObjId) -> Option<Cone> {
        if let Some(c) = self.products.get(&(a, b)) {
            return Some(*c);
        }
        self.products.get(&(b, a)).map(|c| Cone {
            apex: c.apex,
            first: c.second,
            second: c.first,
        })
    }

    pub fn declared_pullbacks(&self) -> impl Iterator<Item = ((MorId, MorId), Cone)> + '_ {
        self.pullbacks.iter().map(|(k, v)| (*k, *v))
    }

    pub fn declared_products(&self) -> impl Iterator<Item = ((ObjId, ObjId), Cone)> + '_ {
        self.products.iter().map(|(k, v)| (*k, *v))
    }

    /// All `(g, f, g∘f)` entries of the composition table, sorted.
    pub fn composition_table(&self) -> Vec<(MorId, MorId, MorId)> {
        let mut t: Vec<_> = self.compose.iter().map(|(&(g, f), &h)| (g, f, h)).collect();
        t.sort();
        t
    }

    /// Declare meets of a thin category as its chosen pullbacks and products.
    ///
    /// For every pair of objects with a greatest lower bound, the product is
    /// declared at that bound, and so is the pullback of every cospan on the
    /// pair. Pairs without a bound are skipped.
    pub fn with_meets(mut self) -> FinCat {
        assert!(self.is_thin(), "with_meets requires a thin category");
        let n = self.num_objects() as u32;
        let leq = |c: &FinCat, a: u32, b: u32| !c.hom(ObjId(a), ObjId(b)).is_empty();
        let mut meets = BTreeMap::new();
        for a in 0..n {
            for b in 0..n {
                let lower: Vec<u32> = (0..n).filter(|&m| leq(&self, m, a) && leq(&self, m, b)).collect();
                if let Some(&m) = lower.iter().find(|&&m| lower.iter().all(|&l| leq(&self, l, m))) {
                    meets.insert((a, b), m);
                }
            }
        }
        for (&(a, b), &m) in &meets {
            let (a, b, m) = (ObjId(a), ObjId(b), ObjId(m));
            let cone = Cone {
                apex: m,
                first: self.hom(m, a)[0],
                second: self.hom(m, b)[0],
            };
            if a <= b {
                self.products.insert((a, b), cone);
            }
            for x in 0..n {
                let x = ObjId(x);
                if let (Some(&f), Some(&g)) = (self.hom(a, x).first(), self.hom(b, x).first()) {
                    if f <= g {
                        self.pullbacks.insert((f, g), cone);
                    }
                }
            }
        }
        self
    }

    /// Check identity, composability, unit and associativity laws together
    /// with every declared limit.
    pub fn validate(&self) -> ValidationReport {
        let mut v = Vec::new();
        for x in self.objects() {
            let id = self.identity(x);
            if self.source(id) != x || self.target(id) != x {
                v.push(LawViolation::IdentityEndpoints { object: x, identity: id });
            }
        }
        for (g, f, h) in self.composition_table() {
            if self.target(f) != self.source(g) {
                v.push(LawViolation::NotComposable { g, f, result: h });
            } else if self.source(h) != self.source(f) || self.target(h) != self.target(g) {
                v.push(LawViolation::MistargetedComposite { g, f, result: h });
            }
        }
        for f in self.morphisms() {
            for g in self.morphisms() {
                if self.target(f) == self.source(g) && self.compose(g, f).is_none() {
                    v.push(LawViolation::MissingComposite { g, f });
                }
            }
        }
        for f in self.morphisms() {
            let (x, y) = (self.source(f), self.target(f));
            match self.compose(self.identity(y), f) {
                Some(got) if got != f => v.push(LawViolation::LeftIdentity { f, got }),
                _ => {}
            }
            match self.compose(f, self.identity(x)) {
                Some(got) if got != f => v.push(LawViolation::RightIdentity { f, got }),
                _ => {}
            }
        }
        let mors: Vec<MorId> = self.morphisms().collect();
        let assoc = par::flat_map(&mors, |&f| {
            let mut out = Vec::new();
            for &g in &mors {
                let Some(gf) = self.compose(g, f) else { continue };
                if self.target(f) != self.source(g) {
                    continue;
                }
                for &h in &mors {
                    if self.target(g) != self.source(h) {
                        continue;
                    }
                    let (Some(hg), Some(h_gf)) = (self.compose(h, g), self.compose(h, gf)) else {
                        continue;
                    };
                    if let Some(hg_f) = self.compose(hg, f) {
                        if hg_f != h_gf {
                            out.push(LawViolation::Associativity { h, g, f, left: hg_f, right: h_gf });
                        }
                    }
                }
            }
            out
        });
        v.extend(assoc);
        v.extend(chosen_limit_check(self).violations.into_iter().map(LawViolation::Limit));
        ValidationReport { violations: v }
    }

    /// Human-readable rendering of a law violation.
    pub fn describe(&self, v: &LawViolation) -> String {
        let m = |f: &MorId| self.mor_label(*f).to_string();
        match v {
            LawViolation::IdentityEndpoints { object, identity } => format!(
                "identity {} of {} does not have endpoints {0}→{0}",
                m(identity),
                self.obj_label(*object)
            ),
            LawViolation::MissingComposite { g, f } => {
                format!("composite {}∘{} is not defined", m(g), m(f))
            }
            LawViolation::NotComposable { g, f, result } => format!(
                "composite {}∘{} = {} declared for a non-composable pair",
                m(g),
                m(f),
                m(result)
            ),
            LawViolation::MistargetedComposite { g, f, result } => format!(
                "composite {}∘{} = {} has the wrong endpoints",
                m(g),
                m(f),
                m(result)
            ),
            LawViolation::LeftIdentity { f, got } => {
                format!("id∘{} = {} instead of {0}", m(f), m(got))
            }
            LawViolation::RightIdentity { f, got } => {
                format!("{}∘id = {} instead of {0}", m(f), m(got))
            }
            LawViolation::Associativity { h, g, f, left, right } => format!(
                "({}∘{})∘{} = {} but {0}∘({1}∘{2}) = {}",
                m(h),
                m(g),
                m(f),
                m(left),
                m(right)
            ),
            LawViolation::Limit(l) => limits::describe(self, l),
        }
    }
}

/// Collects labelled declarations and resolves them into a [`FinCat`].
#[derive(Clone, Debug, Default)]
pub struct FinCatBuilder {
    objects: Vec<String>,
    morphisms: Vec<(String, String, String)>,
    identities: Vec<(String, String)>,
    compose: Vec<(String, String, String)>,
    pullbacks: Vec<[String; 5]>,
    products: Vec<[String; 5]>,
    auto_identities: bool,
    identity_composites: bool,
}

impl FinCatBuilder {
    pub fn object(&mut self, label: &str) -> &mut Self {
        self.objects.push(label.to_string());
        self
    }

    pub fn morphism(&mut self, label: &str, source: &str, target: &str) -> &mut Self {
        self.morphisms
            .push((label.to_string(), source.to_string(), target.to_string()));
        self
    }

    pub fn identity(&mut self, object: &str, morphism: &str) -> &mut Self {
        self.identities.push((object.to_string(), morphism.to_string()));
        self
    }

    /// Declare `g ∘ f = h`.
    pub fn compose(&mut self, g: &str, f: &str, h: &str) -> &mut Self {
        self.compose.push((g.to_string(), f.to_string(), h.to_string()));
        self
    }

    /// Declare the pullback of `f: A → X ← B: g` as `apex` with legs
    /// `first: apex → A`, `second: apex → B`.
    pub fn pullback(&mut self, f: &str, g: &str, apex: &str, first: &str, second: &str) -> &mut Self {
        self.pullbacks.push([f, g, apex, first, second].map(str::to_string));
        self
    }

    pub fn product(&mut self, a: &str, b: &str, apex: &str, first: &str, second: &str) -> &mut Self {
        self.products.push([a, b, apex, first, second].map(str::to_string));
        self
    }

    /// Create `id_X` for every object without a declared identity.
    pub fn auto_identities(&mut self) -> &mut Self {
        self.auto_identities = true;
        self
    }

    /// Fill in `id∘f = f` and `f∘id = f` wherever the table is silent.
    pub fn identity_composites(&mut self) -> &mut Self {
        self.identity_composites = true;
        self
    }

    pub fn build(&self) -> Result<FinCat> {
        let mut obj_index = HashMap::new();
        for (i, o) in self.objects.iter().enumerate() {
            if obj_index.insert(o.clone(), ObjId(i as u32)).is_some() {
                return Err(Error::DuplicateId { kind: "object", id: o.clone() });
            }
        }
        let obj = |l: &str| {
            obj_index.get(l).copied().ok_or_else(|| Error::UnknownId {
                kind: "object",
                id: l.to_string(),
            })
        };
        let mut morphisms = Vec::new();
        let mut mor_index = HashMap::new();
        fn push_mor(
            label: &str,
            s: ObjId,
            t: ObjId,
            morphisms: &mut Vec<Morphism>,
            mor_index: &mut HashMap<String, MorId>,
        ) -> Result<MorId> {
            let id = MorId(morphisms.len() as u32);
            if mor_index.insert(label.to_string(), id).is_some() {
                return Err(Error::DuplicateId { kind: "morphism", id: label.to_string() });
            }
            morphisms.push(Morphism { label: label.to_string(), source: s, target: t });
            Ok(id)
        }
        for (l, s, t) in &self.morphisms {
            push_mor(l, obj(s)?, obj(t)?, &mut morphisms, &mut mor_index)?;
        }
        let mut identities: Vec<Option<MorId>> = vec![None; self.objects.len()];
        for (o, m) in &self.identities {
            let x = obj(o)?;
            let f = *mor_index.get(m).ok_or_else(|| Error::UnknownId {
                kind: "morphism",
                id: m.clone(),
            })?;
            if identities[x.index()].replace(f).is_some_and(|old| old != f) {
                return Err(Error::Structural(format!("object `{o}` has two identities")));
            }
        }
        for (i, slot) in identities.iter_mut().enumerate() {
            if slot.is_none() && self.auto_identities {
                let label = format!("id_{}", self.objects[i]);
                let x = ObjId(i as u32);
                *slot = Some(push_mor(&label, x, x, &mut morphisms, &mut mor_index)?);
            }
        }
        let identities = identities
            .into_iter()
            .enumerate()
            .map(|(i, s)| {
                s.ok_or_else(|| {
                    Error::Structural(format!("object `{}` has no identity", self.objects[i]))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let mor = |l: &str| {
            mor_index.get(l).copied().ok_or_else(|| Error::UnknownId {
                kind: "morphism",
                id: l.to_string(),
            })
        };
        let mut compose = HashMap::new();
        for (g, f, h) in &self.compose {
            let key = (mor(g)?, mor(f)?);
            let h = mor(h)?;
            if compose.insert(key, h).is_some_and(|old| old != h) {
                return Err(Error::Structural(format!(
                    "composite {g}∘{f} declared twice with different results"
                )));
            }
        }
        if self.identity_composites {
            for (i, m) in morphisms.iter().enumerate() {
                let f = MorId(i as u32);
                compose.entry((identities[m.target.index()], f)).or_insert(f);
                compose.entry((f, identities[m.source.index()])).or_insert(f);
            }
        }
        let mut pullbacks = BTreeMap::new();
        for [f, g, apex, p, q] in &self.pullbacks {
            let cone = Cone { apex: obj(apex)?, first: mor(p)?, second: mor(q)? };
            pullbacks.insert((mor(f)?, mor(g)?), cone);
        }
        let mut products = BTreeMap::new();
        for [a, b, apex, p, q] in &self.products {
            let cone = Cone { apex: obj(apex)?, first: mor(p)?, second: mor(q)? };
            products.insert((obj(a)?, obj(b)?), cone);
        }
        let n = self.objects.len();
        let mut hom = vec![Vec::new(); n * n];
        for (i, m) in morphisms.iter().enumerate() {
            hom[m.source.index() * n + m.target.index()].push(MorId(i as u32));
        }
        Ok(FinCat {
            objects: self.objects.clone(),
            morphisms,
            identities,
            compose,
            pullbacks,
            products,
            hom,
            obj_index,
            mor_index,
        })
    }
}
