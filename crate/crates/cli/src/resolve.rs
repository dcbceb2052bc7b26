//! Turning named documents into engine values, once per name.

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use zcat_core::fincat::{FinCat, Functor, MorId, ObjEquiv, ObjId};
use zcat_core::fingerprint::{FingerprintTable, GradedDims};
use zcat_core::modular::ModelLabeledCat;
use zcat_core::sheaf::{representable, Presheaf};
use zcat_core::site::{generate_topology, CoveringAssignment, Family, LadderMorphism, LayeredCategory, PointedBase, Square};
use zcat_core::zlin::{Term, ZMorphism, ZObject};

use crate::doc::{self, Document, Selection, ZRef};
use crate::load::Entry;
use crate::CliError;

pub type Res<T> = Result<T, CliError>;

pub fn err(doc: &str, message: impl Into<String>) -> CliError {
    CliError::Resolve { doc: doc.to_string(), message: message.into() }
}

/// Attach a document name to an engine error.
pub fn ctx<T>(doc: &str, r: zcat_core::Result<T>) -> Res<T> {
    r.map_err(|e| err(doc, e.to_string()))
}

pub struct Workspace {
    pub entries: BTreeMap<String, Entry>,
    categories: RefCell<HashMap<String, Arc<FinCat>>>,
    models: RefCell<HashMap<String, Arc<ModelLabeledCat>>>,
    layered: RefCell<HashMap<String, LayeredCategory>>,
}

pub fn obj(c: &FinCat, doc: &str, label: &str) -> Res<ObjId> {
    c.obj_id(label).ok_or_else(|| err(doc, format!("unknown object `{label}`")))
}

pub fn mor(c: &FinCat, doc: &str, label: &str) -> Res<MorId> {
    c.mor_id(label).ok_or_else(|| err(doc, format!("unknown morphism `{label}`")))
}

pub fn square(c: &FinCat, doc: &str, s: &doc::SquareDecl) -> Res<Square> {
    let sq = Square { wv: mor(c, doc, &s.wv)?, wu: mor(c, doc, &s.wu)?, ux: mor(c, doc, &s.ux)?, vx: mor(c, doc, &s.vx)? };
    ctx(doc, sq.validate(c))?;
    Ok(sq)
}

impl Workspace {
    pub fn new(entries: BTreeMap<String, Entry>) -> Workspace {
        Workspace {
            entries,
            categories: RefCell::default(),
            models: RefCell::default(),
            layered: RefCell::default(),
        }
    }

    fn get(&self, name: &str, kind: &str) -> Res<&Document> {
        let e = self.entries.get(name).ok_or_else(|| err(name, "no document with this name"))?;
        if e.doc.kind() != kind {
            return Err(err(name, format!("is a {}, expected a {kind}", e.doc.kind())));
        }
        Ok(&e.doc)
    }

    pub fn category(&self, name: &str) -> Res<Arc<FinCat>> {
        if let Some(c) = self.categories.borrow().get(name) {
            return Ok(c.clone());
        }
        let Document::Category(d) = self.get(name, "category")? else { unreachable!("kind checked") };
        let c = Arc::new(build_category(name, d)?);
        self.categories.borrow_mut().insert(name.to_string(), c.clone());
        Ok(c)
    }

    pub fn partition(&self, name: &str) -> Res<(Arc<FinCat>, ObjEquiv)> {
        let Document::Partition(d) = self.get(name, "partition")? else { unreachable!() };
        let c = self.category(&d.category)?;
        let mut blocks: Vec<Vec<ObjId>> = Vec::new();
        let mut seen = BTreeSet::new();
        for b in &d.blocks {
            let ids = b.iter().map(|l| obj(&c, name, l)).collect::<Res<Vec<_>>>()?;
            seen.extend(ids.iter().copied());
            blocks.push(ids);
        }
        blocks.extend(c.objects().filter(|x| !seen.contains(x)).map(|x| vec![x]));
        let r = ctx(name, ObjEquiv::new(c.num_objects(), blocks))?;
        Ok((c, r))
    }

    pub fn zobject(&self, c: &FinCat, category: &str, owner: &str, z: &ZRef) -> Res<ZObject> {
        let (doc, parts) = match z {
            ZRef::Inline(p) => (owner, p),
            ZRef::Name(n) => {
                let Document::ZObject(d) = self.get(n, "zobject")? else { unreachable!() };
                if d.category != category {
                    return Err(err(n, format!("is over `{}`, expected `{category}`", d.category)));
                }
                (n.as_str(), &d.components)
            }
        };
        let parts = parts.iter().map(|(l, m)| Ok((obj(c, doc, l)?, *m))).collect::<Res<Vec<_>>>()?;
        ctx(doc, ZObject::from_list(&parts))
    }

    pub fn zmorphism(&self, name: &str) -> Res<(String, Arc<FinCat>, ZMorphism)> {
        let Document::ZMorphism(d) = self.get(name, "zmorphism")? else { unreachable!() };
        let c = self.category(&d.category)?;
        let source = self.zobject(&c, &d.category, name, &d.source)?;
        let target = self.zobject(&c, &d.category, name, &d.target)?;
        let terms = d
            .terms
            .iter()
            .map(|(i, j, coeff, a)| Ok(Term { i: *i, j: *j, coeff: *coeff, arrow: mor(&c, name, a)? }))
            .collect::<Res<Vec<_>>>()?;
        let phi = ctx(name, ZMorphism::new(source, target, terms))?;
        Ok((d.category.clone(), c, phi))
    }

    pub fn covering(&self, name: &str) -> Res<(Arc<FinCat>, CoveringAssignment)> {
        let Document::Covering(d) = self.get(name, "covering")? else { unreachable!() };
        let c = self.category(&d.category)?;
        let mut k = if d.identities { CoveringAssignment::identities(&c) } else { CoveringAssignment::new() };
        if let Some(joint) = &d.joint {
            let mut elements: Vec<BTreeSet<String>> = vec![BTreeSet::new(); c.num_objects()];
            for (l, es) in joint {
                elements[obj(&c, name, l)?.index()] = es.iter().cloned().collect();
            }
            for (x, fam) in CoveringAssignment::jointly_covering(&c, |x| elements[x.index()].clone()).iter() {
                k.insert(x, fam.clone());
            }
        }
        for (l, fams) in &d.families {
            let x = obj(&c, name, l)?;
            for fam in fams {
                let fam: Family = fam.iter().map(|f| mor(&c, name, f)).collect::<Res<_>>()?;
                if let Some(&f) = fam.iter().find(|&&f| c.target(f) != x) {
                    return Err(err(name, format!("`{}` does not target `{l}`", c.mor_label(f))));
                }
                k.insert(x, fam);
            }
        }
        if d.generate {
            k = ctx(name, generate_topology(&c, &k))?;
        }
        Ok((c, k))
    }

    pub fn pointed(&self, name: &str) -> Res<(String, Arc<FinCat>, PointedBase)> {
        let Document::Pointed(d) = self.get(name, "pointed")? else { unreachable!() };
        let c = self.category(&d.category)?;
        let mut points = vec![Vec::new(); c.num_objects()];
        for (l, ps) in &d.points {
            points[obj(&c, name, l)?.index()] = ps.clone();
        }
        for l in d.maps.keys() {
            mor(&c, name, l)?;
        }
        for l in d.residue.keys() {
            mor(&c, name, l)?;
        }
        let mut maps = Vec::new();
        let mut residue = Vec::new();
        for f in c.morphisms() {
            let (s, t) = (c.source(f).index(), c.target(f).index());
            let label = c.mor_label(f);
            let m = if let Some(m) = d.maps.get(label) {
                m.clone()
            } else if c.is_identity(f) {
                (0..points[s].len()).collect()
            } else if d.by_label {
                points[s]
                    .iter()
                    .map(|p| {
                        points[t].iter().position(|q| q == p).ok_or_else(|| {
                            err(name, format!("point `{p}` has no namesake in the target of `{label}`"))
                        })
                    })
                    .collect::<Res<_>>()?
            } else {
                return Err(err(name, format!("no point map for `{label}`")));
            };
            maps.push(m);
            residue.push(match d.residue.get(label) {
                Some(r) => r.iter().copied().collect(),
                None => (0..points[s].len()).collect(),
            });
        }
        let select = |s: &Selection, field: &str| -> Res<BTreeSet<MorId>> {
            match s {
                Selection::Keyword(k) if k == "all" => Ok(c.morphisms().collect()),
                Selection::Keyword(k) => Err(err(name, format!("{field}: expected \"all\" or a list, found `{k}`"))),
                Selection::List(l) => l.iter().map(|f| mor(&c, name, f)).collect(),
            }
        };
        let (etale, open) = (select(&d.etale, "etale")?, select(&d.open, "open")?);
        let base = ctx(name, PointedBase::new(&c, points, maps, residue, etale, open))?;
        Ok((d.category.clone(), c, base))
    }

    pub fn presheaf(&self, name: &str) -> Res<(Arc<FinCat>, Presheaf)> {
        let Document::Presheaf(d) = self.get(name, "presheaf")? else { unreachable!() };
        let c = self.category(&d.category)?;
        if let Some(x) = &d.representable {
            return Ok((c.clone(), representable(&c, obj(&c, name, x)?)));
        }
        if let Some(labels) = &d.constant {
            let labels: Vec<&str> = labels.iter().map(String::as_str).collect();
            return Ok((c.clone(), Presheaf::constant(&c, &labels)));
        }
        let sections_doc = d
            .sections
            .as_ref()
            .ok_or_else(|| err(name, "needs one of `sections`, `representable`, `constant`"))?;
        let mut sections = vec![Vec::new(); c.num_objects()];
        for (l, s) in sections_doc {
            sections[obj(&c, name, l)?.index()] = s.clone();
        }
        for l in d.restrictions.keys() {
            mor(&c, name, l)?;
        }
        let restrictions = c
            .morphisms()
            .map(|f| match d.restrictions.get(c.mor_label(f)) {
                Some(r) => Ok(r.clone()),
                None if c.is_identity(f) => Ok((0..sections[c.source(f).index()].len()).collect()),
                None => Err(err(name, format!("no restriction along `{}`", c.mor_label(f)))),
            })
            .collect::<Res<Vec<_>>>()?;
        let p = ctx(name, Presheaf::new(&c, sections, restrictions))?;
        Ok((c, p))
    }

    pub fn model(&self, name: &str) -> Res<Arc<ModelLabeledCat>> {
        if let Some(m) = self.models.borrow().get(name) {
            return Ok(m.clone());
        }
        let Document::Model(d) = self.get(name, "model")? else { unreachable!() };
        let c = self.category(&d.category)?;
        let m = match d.preset.as_deref() {
            Some("all_in_all") => ModelLabeledCat::all_in_all(c),
            Some("iso_weq") => ModelLabeledCat::iso_weq(c),
            Some(other) => return Err(err(name, format!("unknown preset `{other}`, expected all_in_all or iso_weq"))),
            None => {
                let set = |l: &[String]| l.iter().map(|f| mor(&c, name, f)).collect::<Res<BTreeSet<_>>>();
                let (w, co, fi) = (set(&d.weq)?, set(&d.cof)?, set(&d.fib)?);
                ctx(name, ModelLabeledCat::new(c.clone(), w, co, fi))?
            }
        };
        let m = Arc::new(m);
        self.models.borrow_mut().insert(name.to_string(), m.clone());
        Ok(m)
    }

    /// A functor whose target is `target` when given, so that it can be
    /// matched against families over that exact category.
    pub fn functor(&self, name: &str) -> Res<Functor> {
        let Document::Functor(d) = self.get(name, "functor")? else { unreachable!() };
        let (s, t) = (self.category(&d.source)?, self.category(&d.target)?);
        let mut om = Vec::new();
        for x in s.objects() {
            let l = d
                .objects
                .get(s.obj_label(x))
                .ok_or_else(|| err(name, format!("object `{}` is not mapped", s.obj_label(x))))?;
            om.push(obj(&t, name, l)?);
        }
        for l in d.objects.keys() {
            obj(&s, name, l)?;
        }
        for l in d.morphisms.keys() {
            mor(&s, name, l)?;
        }
        let mut mm = Vec::new();
        for f in s.morphisms() {
            mm.push(match d.morphisms.get(s.mor_label(f)) {
                Some(l) => mor(&t, name, l)?,
                None if s.is_identity(f) => t.identity(om[s.source(f).index()]),
                None => return Err(err(name, format!("morphism `{}` is not mapped", s.mor_label(f)))),
            });
        }
        ctx(name, Functor::new(s, t, om, mm))
    }

    pub fn fingerprints(&self, name: &str) -> Res<(String, Arc<FinCat>, FingerprintTable)> {
        let Document::Fingerprints(d) = self.get(name, "fingerprints")? else { unreachable!() };
        let c = self.category(&d.category)?;
        let mut t = FingerprintTable::new();
        for (l, dims) in &d.dims {
            t.insert(obj(&c, name, l)?, GradedDims::new(dims.clone()));
        }
        Ok((d.category.clone(), c, t))
    }

    pub fn layered(&self, name: &str) -> Res<LayeredCategory> {
        if let Some(l) = self.layered.borrow().get(name) {
            return Ok(l.clone());
        }
        let Document::Layered(d) = self.get(name, "layered")? else { unreachable!() };
        let levels = d.levels.iter().map(|l| self.category(l)).collect::<Res<Vec<_>>>()?;
        if d.membership.len() + 1 != levels.len() {
            return Err(err(name, format!("{} membership maps for {} levels", d.membership.len(), levels.len())));
        }
        let mut membership = Vec::new();
        for (n, m) in d.membership.iter().enumerate() {
            let (lo, hi) = (&levels[n], &levels[n + 1]);
            let map = hi
                .objects()
                .map(|x| {
                    let l = m.get(hi.obj_label(x)).ok_or_else(|| {
                        err(name, format!("level {} object `{}` has no member", n + 1, hi.obj_label(x)))
                    })?;
                    obj(lo, name, l)
                })
                .collect::<Res<Vec<_>>>()?;
            membership.push(map);
        }
        let l = ctx(name, LayeredCategory::new(levels, membership))?;
        self.layered.borrow_mut().insert(name.to_string(), l.clone());
        Ok(l)
    }

    pub fn ladder(&self, layered: &LayeredCategory, doc: &str, arrows: &[String]) -> Res<LadderMorphism> {
        if arrows.len() != layered.num_levels() {
            return Err(err(doc, format!("ladder has {} arrows for {} levels", arrows.len(), layered.num_levels())));
        }
        let ids = arrows
            .iter()
            .enumerate()
            .map(|(n, a)| mor(layered.level(n), doc, a))
            .collect::<Res<Vec<_>>>()?;
        ctx(doc, layered.ladder(ids))
    }
}

fn build_category(name: &str, d: &doc::Category) -> Res<FinCat> {
    if let Some(order) = &d.order {
        let idx: HashMap<&str, usize> = d.objects.iter().enumerate().map(|(i, o)| (o.as_str(), i)).collect();
        let mut leq = BTreeSet::new();
        for [a, b] in order {
            let ia = *idx.get(a.as_str()).ok_or_else(|| err(name, format!("unknown object `{a}`")))?;
            let ib = *idx.get(b.as_str()).ok_or_else(|| err(name, format!("unknown object `{b}`")))?;
            leq.insert((ia, ib));
        }
        let c = FinCat::thin(&d.objects, |a, b| leq.contains(&(a, b)));
        return Ok(if d.meets { c.with_meets() } else { c });
    }
    if d.meets {
        return Err(err(name, "`meets` needs an `order`"));
    }
    if d.free {
        let idx: HashMap<&str, usize> = d.objects.iter().enumerate().map(|(i, o)| (o.as_str(), i)).collect();
        let edges = d
            .morphisms
            .iter()
            .map(|m| {
                let s = idx.get(m.source.as_str()).ok_or_else(|| err(name, format!("unknown object `{}`", m.source)))?;
                let t = idx.get(m.target.as_str()).ok_or_else(|| err(name, format!("unknown object `{}`", m.target)))?;
                Ok((m.name.clone(), *s, *t))
            })
            .collect::<Res<Vec<_>>>()?;
        let mut indegree = vec![0usize; d.objects.len()];
        for (_, _, t) in &edges {
            indegree[*t] += 1;
        }
        let mut ready: Vec<usize> = (0..d.objects.len()).filter(|&x| indegree[x] == 0).collect();
        let mut seen = 0;
        while let Some(x) = ready.pop() {
            seen += 1;
            for (_, s, t) in &edges {
                if *s == x {
                    indegree[*t] -= 1;
                    if indegree[*t] == 0 {
                        ready.push(*t);
                    }
                }
            }
        }
        if seen != d.objects.len() {
            return Err(err(name, "`free` needs an acyclic graph of generators"));
        }
        return Ok(FinCat::free_on_dag(&d.objects, &edges));
    }
    let mut b = FinCat::builder();
    for o in &d.objects {
        b.object(o);
    }
    for m in &d.morphisms {
        b.morphism(&m.name, &m.source, &m.target);
    }
    match &d.identities {
        Some(ids) => {
            for (o, m) in ids {
                b.identity(o, m);
            }
        }
        None => {
            b.auto_identities();
        }
    }
    b.identity_composites();
    for [g, f, h] in &d.compose {
        b.compose(g, f, h);
    }
    for p in &d.pullbacks {
        b.pullback(&p.f, &p.g, &p.apex, &p.first, &p.second);
    }
    for p in &d.products {
        b.product(&p.a, &p.b, &p.apex, &p.first, &p.second);
    }
    ctx(name, b.build())
}
