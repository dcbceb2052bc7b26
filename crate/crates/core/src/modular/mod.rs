//! Model-labeled finite categories and their full, essentially surjective
//! parametrizations.

mod enumerate;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fincat::{check_functor, compose_functors, quotient_category, FinCat, Functor, MorId, ObjEquiv, ObjId, Quotient};

pub use enumerate::enumerate_fes;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelClass {
    Cof,
    Weq,
    Fib,
}

impl ModelClass {
    pub const ALL: [ModelClass; 3] = [ModelClass::Cof, ModelClass::Weq, ModelClass::Fib];
}

impl fmt::Display for ModelClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelClass::Cof => "cof",
            ModelClass::Weq => "weq",
            ModelClass::Fib => "fib",
        })
    }
}

#[derive(Clone, Debug)]
pub struct ModelLabeledCat {
    pub base: Arc<FinCat>,
    pub weq: BTreeSet<MorId>,
    pub cof: BTreeSet<MorId>,
    pub fib: BTreeSet<MorId>,
}

impl PartialEq for ModelLabeledCat {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.base, &other.base) && self.weq == other.weq && self.cof == other.cof && self.fib == other.fib
    }
}

impl ModelLabeledCat {
    pub fn new(base: Arc<FinCat>, weq: BTreeSet<MorId>, cof: BTreeSet<MorId>, fib: BTreeSet<MorId>) -> Result<ModelLabeledCat> {
        if let Some(f) = weq.iter().chain(&cof).chain(&fib).find(|f| f.index() >= base.num_morphisms()) {
            return Err(Error::UnknownId { kind: "morphism", id: f.to_string() });
        }
        Ok(ModelLabeledCat { base, weq, cof, fib })
    }

    /// Every morphism in every class.
    pub fn all_in_all(base: Arc<FinCat>) -> ModelLabeledCat {
        let all: BTreeSet<MorId> = base.morphisms().collect();
        ModelLabeledCat { weq: all.clone(), cof: all.clone(), fib: all, base }
    }

    /// Weak equivalences are the isomorphisms; every morphism is a
    /// cofibration and a fibration.
    pub fn iso_weq(base: Arc<FinCat>) -> ModelLabeledCat {
        let all: BTreeSet<MorId> = base.morphisms().collect();
        let weq = base.morphisms().filter(|&f| base.is_iso(f)).collect();
        ModelLabeledCat { weq, cof: all.clone(), fib: all, base }
    }

    pub fn class(&self, c: ModelClass) -> &BTreeSet<MorId> {
        match c {
            ModelClass::Cof => &self.cof,
            ModelClass::Weq => &self.weq,
            ModelClass::Fib => &self.fib,
        }
    }

    pub fn class_mut(&mut self, c: ModelClass) -> &mut BTreeSet<MorId> {
        match c {
            ModelClass::Cof => &mut self.cof,
            ModelClass::Weq => &mut self.weq,
            ModelClass::Fib => &mut self.fib,
        }
    }

    pub fn types_of(&self, f: MorId) -> BTreeSet<ModelClass> {
        ModelClass::ALL.into_iter().filter(|&c| self.class(c).contains(&f)).collect()
    }
}

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ModelCheckOptions {
    /// Enumerate every lifting square; only sensible for tiny categories.
    pub lifting: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "violation", rename_all = "snake_case")]
pub enum ModelViolation {
    MissingIdentity { class: ModelClass, object: ObjId },
    /// Two of `f`, `g`, `g∘f` are weak equivalences but `missing` is not.
    TwoOfThree { g: MorId, f: MorId, composite: MorId, missing: MorId },
    NotClosed { class: ModelClass, g: MorId, f: MorId, composite: MorId },
    /// The square `p∘top = bottom∘i` has no diagonal.
    NoLift { i: MorId, p: MorId, top: MorId, bottom: MorId, trivial: ModelClass },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModelReport {
    pub passes: bool,
    pub lifting_checked: bool,
    pub violations: Vec<ModelViolation>,
}

impl ModelReport {
    pub fn two_of_three_holds(&self) -> bool {
        !self.violations.iter().any(|v| matches!(v, ModelViolation::TwoOfThree { .. }))
    }

    pub fn identities_hold(&self) -> bool {
        !self.violations.iter().any(|v| matches!(v, ModelViolation::MissingIdentity { .. }))
    }
}

/// Identity containment, two-out-of-three, closure of `cof` and `fib`
/// under composition and, optionally, both lifting properties.
pub fn model_axiom_check(m: &ModelLabeledCat, options: ModelCheckOptions) -> ModelReport {
    let c = &*m.base;
    let mut v = Vec::new();
    for class in ModelClass::ALL {
        for x in c.objects() {
            if !m.class(class).contains(&c.identity(x)) {
                v.push(ModelViolation::MissingIdentity { class, object: x });
            }
        }
    }
    let table = c.composition_table();
    for &(g, f, h) in &table {
        let w = |x: MorId| m.weq.contains(&x);
        let missing = match (w(f), w(g), w(h)) {
            (true, true, false) => Some(h),
            (true, false, true) => Some(g),
            (false, true, true) => Some(f),
            _ => None,
        };
        if let Some(missing) = missing {
            v.push(ModelViolation::TwoOfThree { g, f, composite: h, missing });
        }
    }
    for class in [ModelClass::Cof, ModelClass::Fib] {
        let set = m.class(class);
        for &(g, f, h) in &table {
            if set.contains(&f) && set.contains(&g) && !set.contains(&h) {
                v.push(ModelViolation::NotClosed { class, g, f, composite: h });
            }
        }
    }
    if options.lifting {
        let trivial_cof: BTreeSet<MorId> = m.cof.intersection(&m.weq).copied().collect();
        let trivial_fib: BTreeSet<MorId> = m.fib.intersection(&m.weq).copied().collect();
        lifting(c, &trivial_cof, &m.fib, ModelClass::Cof, &mut v);
        lifting(c, &m.cof, &trivial_fib, ModelClass::Fib, &mut v);
    }
    ModelReport { passes: v.is_empty(), lifting_checked: options.lifting, violations: v }
}

fn lifting(c: &FinCat, left: &BTreeSet<MorId>, right: &BTreeSet<MorId>, trivial: ModelClass, out: &mut Vec<ModelViolation>) {
    for &i in left {
        let (a, b) = (c.source(i), c.target(i));
        for &p in right {
            let (x, y) = (c.source(p), c.target(p));
            for &top in c.hom(a, x) {
                for &bottom in c.hom(b, y) {
                    if c.compose(p, top) != c.compose(bottom, i) {
                        continue;
                    }
                    let lifts = c
                        .hom(b, x)
                        .iter()
                        .any(|&d| c.compose(d, i) == Some(top) && c.compose(p, d) == Some(bottom));
                    if !lifts {
                        out.push(ModelViolation::NoLift { i, p, top, bottom, trivial });
                    }
                }
            }
        }
    }
}

/// A set of full, essentially surjective functors `source → target.base`.
#[derive(Clone, Debug)]
pub struct ParamFamily {
    pub source: Arc<FinCat>,
    pub target: Arc<ModelLabeledCat>,
    pub members: Vec<Functor>,
}

impl PartialEq for ParamFamily {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.source, &other.source) && *self.target == *other.target && self.members == other.members
    }
}

fn canonical(members: &mut Vec<Functor>) {
    members.sort_by(|a, b| (&a.obj_map, &a.mor_map).cmp(&(&b.obj_map, &b.mor_map)));
    members.dedup_by(|a, b| a.obj_map == b.obj_map && a.mor_map == b.mor_map);
}

/// `G*`: replace each member `F` by `F∘G`, re-verifying each result.
pub fn precompose(g: &Functor, family: &ParamFamily) -> Result<ParamFamily> {
    let report = check_functor(g);
    if !report.is_fes() {
        return Err(Error::Precondition("precomposition needs a full, essentially surjective functor".into()));
    }
    if !Arc::ptr_eq(&g.target, &family.source) {
        return Err(Error::Structural("functor target is not the family's source".into()));
    }
    let mut members = Vec::with_capacity(family.members.len());
    for f in &family.members {
        let fg = compose_functors(f, g)?;
        if !check_functor(&fg).is_fes() {
            return Err(Error::Precondition("a precomposed member is not full and essentially surjective".into()));
        }
        members.push(fg);
    }
    canonical(&mut members);
    Ok(ParamFamily { source: g.source.clone(), target: family.target.clone(), members })
}

/// Every class `Λ` containing some representative `A′ → B′` with `A′ ∈ [A]`, `B′ ∈ [B]`.
pub fn class_types(m: &ModelLabeledCat, r: &ObjEquiv, blocks: (usize, usize)) -> BTreeSet<ModelClass> {
    let c = &*m.base;
    let mut out = BTreeSet::new();
    for &a in r.block(blocks.0) {
        for &b in r.block(blocks.1) {
            for &f in c.hom(a, b) {
                out.extend(m.types_of(f));
            }
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct QuotientModel {
    pub quotient: Quotient,
    pub model: ModelLabeledCat,
    pub report: ModelReport,
}

/// Label each class morphism by [`class_types`] and check the result.
pub fn quotient_model(m: &ModelLabeledCat, r: &ObjEquiv, options: ModelCheckOptions) -> Result<QuotientModel> {
    let quotient = quotient_category(&m.base, r)?;
    if !quotient.is_saturated() {
        let gaps: Vec<String> = quotient
            .saturation
            .iter()
            .map(|g| format!("{}→{}→{}", r.block_label(&m.base, g.from), r.block_label(&m.base, g.via), r.block_label(&m.base, g.to)))
            .collect();
        return Err(Error::Precondition(format!("quotient is not saturated: {}", gaps.join(", "))));
    }
    let q = quotient.category.clone();
    let mut model = ModelLabeledCat { base: q.clone(), weq: BTreeSet::new(), cof: BTreeSet::new(), fib: BTreeSet::new() };
    for f in q.morphisms() {
        let blocks = (q.source(f).index(), q.target(f).index());
        for class in class_types(m, r, blocks) {
            model.class_mut(class).insert(f);
        }
    }
    let report = model_axiom_check(&model, options);
    Ok(QuotientModel { quotient, model, report })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// `f: A → B` and `g: B′ → C` weak equivalences, `k: A → C` not.
    fn seeded() -> (ModelLabeledCat, ObjEquiv) {
        let mut b = FinCat::builder();
        b.object("A").object("B").object("B'").object("C");
        b.morphism("f", "A", "B").morphism("g", "B'", "C").morphism("k", "A", "C");
        b.auto_identities().identity_composites();
        let c = Arc::new(b.build().unwrap());
        let ids: BTreeSet<MorId> = c.objects().map(|x| c.identity(x)).collect();
        let mut weq = ids.clone();
        weq.extend([c.mor("f").unwrap(), c.mor("g").unwrap()]);
        let all: BTreeSet<MorId> = c.morphisms().collect();
        let r = ObjEquiv::from_labels(&c, &[vec!["A"], vec!["B", "B'"], vec!["C"]]).unwrap();
        (ModelLabeledCat::new(c, weq, all.clone(), all).unwrap(), r)
    }

    #[test]
    fn all_in_all_lifts_only_in_a_groupoid() {
        let c = Arc::new(FinCat::thin(&["a", "b", "c"], |x, y| x <= y));
        let m = ModelLabeledCat::all_in_all(c);
        let r = model_axiom_check(&m, ModelCheckOptions::default());
        assert!(r.passes, "{r:?}");
        let lifted = model_axiom_check(&m, ModelCheckOptions { lifting: true });
        assert!(lifted.violations.iter().all(|v| matches!(v, ModelViolation::NoLift { .. })));
        assert!(!lifted.passes);
        let g = Arc::new(crate::fixtures::connected_groupoid(&["x", "y"], 2));
        assert!(model_axiom_check(&ModelLabeledCat::all_in_all(g), ModelCheckOptions { lifting: true }).passes);
    }

    #[test]
    fn missing_leg_of_two_of_three_is_named() {
        let c = Arc::new(FinCat::thin(&["a", "b", "c"], |x, y| x <= y));
        let mut m = ModelLabeledCat::all_in_all(c.clone());
        let bc = c.mor("b->c").unwrap();
        m.weq.remove(&bc);
        let r = model_axiom_check(&m, ModelCheckOptions::default());
        assert!(r.violations.iter().any(|v| matches!(v, ModelViolation::TwoOfThree { missing, .. } if *missing == bc)));
    }

    #[test]
    fn seeded_quotient_breaks_two_of_three() {
        let (m, r) = seeded();
        assert!(model_axiom_check(&m, ModelCheckOptions::default()).passes);
        let qm = quotient_model(&m, &r, ModelCheckOptions::default()).unwrap();
        assert!(!qm.report.two_of_three_holds());
        assert!(qm.report.identities_hold());
    }

    #[test]
    fn multi_typed_class_morphism() {
        let mut b = FinCat::builder();
        b.object("A").object("A'").object("B");
        b.morphism("w", "A", "B").morphism("c", "A'", "B");
        b.auto_identities().identity_composites();
        let c = Arc::new(b.build().unwrap());
        let ids: BTreeSet<MorId> = c.objects().map(|x| c.identity(x)).collect();
        let mut weq = ids.clone();
        weq.insert(c.mor("w").unwrap());
        let mut cof = ids.clone();
        cof.insert(c.mor("c").unwrap());
        let m = ModelLabeledCat::new(c.clone(), weq, cof, ids).unwrap();
        let r = ObjEquiv::from_labels(&c, &[vec!["A", "A'"], vec!["B"]]).unwrap();
        let (a, bb) = (r.block_of(c.obj("A").unwrap()), r.block_of(c.obj("B").unwrap()));
        assert_eq!(class_types(&m, &r, (a, bb)), BTreeSet::from([ModelClass::Weq, ModelClass::Cof]));
        assert!(class_types(&m, &r, (bb, a)).is_empty());
    }
}
