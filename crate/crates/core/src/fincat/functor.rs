use std::sync::Arc;

use serde::Serialize;

use super::{FinCat, MorId, ObjId};
use crate::error::{Error, Result};

/// A map of finite categories given by its object and morphism tables.
///
/// Functoriality is not enforced at construction; [`check_functor`] reports it.
#[derive(Clone, Debug)]
pub struct Functor {
    pub source: Arc<FinCat>,
    pub target: Arc<FinCat>,
    pub obj_map: Vec<ObjId>,
    pub mor_map: Vec<MorId>,
}

impl PartialEq for Functor {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.source, &other.source)
            && Arc::ptr_eq(&self.target, &other.target)
            && self.obj_map == other.obj_map
            && self.mor_map == other.mor_map
    }
}

impl Eq for Functor {}

impl Functor {
    pub fn new(
        source: Arc<FinCat>,
        target: Arc<FinCat>,
        obj_map: Vec<ObjId>,
        mor_map: Vec<MorId>,
    ) -> Result<Functor> {
        if obj_map.len() != source.num_objects() || mor_map.len() != source.num_morphisms() {
            return Err(Error::Structural(
                "functor tables must cover every source object and morphism".into(),
            ));
        }
        if obj_map.iter().any(|x| x.index() >= target.num_objects())
            || mor_map.iter().any(|f| f.index() >= target.num_morphisms())
        {
            return Err(Error::Structural("functor table points outside its target".into()));
        }
        Ok(Functor { source, target, obj_map, mor_map })
    }

    pub fn identity(c: Arc<FinCat>) -> Functor {
        let obj_map = c.objects().collect();
        let mor_map = c.morphisms().collect();
        Functor { source: c.clone(), target: c, obj_map, mor_map }
    }

    /// The functor sending everything to `object` and its identity.
    pub fn constant(source: Arc<FinCat>, target: Arc<FinCat>, object: ObjId) -> Functor {
        let id = target.identity(object);
        Functor {
            obj_map: vec![object; source.num_objects()],
            mor_map: vec![id; source.num_morphisms()],
            source,
            target,
        }
    }

    pub fn on_object(&self, x: ObjId) -> ObjId {
        self.obj_map[x.index()]
    }

    pub fn on_morphism(&self, f: MorId) -> MorId {
        self.mor_map[f.index()]
    }
}

/// `f ∘ g`: first `g`, then `f`.
pub fn compose_functors(f: &Functor, g: &Functor) -> Result<Functor> {
    if !Arc::ptr_eq(&g.target, &f.source) {
        return Err(Error::Structural("functors are not composable".into()));
    }
    Ok(Functor {
        source: g.source.clone(),
        target: f.target.clone(),
        obj_map: g.obj_map.iter().map(|&x| f.on_object(x)).collect(),
        mor_map: g.mor_map.iter().map(|&m| f.on_morphism(m)).collect(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "law", rename_all = "snake_case")]
pub enum FunctorViolation {
    Endpoints { f: MorId },
    Identity { object: ObjId },
    Composition { g: MorId, f: MorId },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FunctorReport {
    pub functorial: bool,
    pub full: bool,
    pub essentially_surjective: bool,
    pub violations: Vec<FunctorViolation>,
    /// `(X, Y, u)`: target morphism `u: FX → FY` not hit from `Hom(X, Y)`.
    pub unhit: Vec<(ObjId, ObjId, MorId)>,
    /// Target objects not isomorphic to any image object.
    pub missed_objects: Vec<ObjId>,
}

impl FunctorReport {
    pub fn is_fes(&self) -> bool {
        self.functorial && self.full && self.essentially_surjective
    }
}

/// Functoriality, fullness and essential surjectivity, each with witnesses.
///
/// Non-functorial tables are reported, not rejected, so the other two
/// properties can still be inspected.
pub fn check_functor(functor: &Functor) -> FunctorReport {
    let (c, d) = (&*functor.source, &*functor.target);
    let mut violations = Vec::new();
    for f in c.morphisms() {
        let image = functor.on_morphism(f);
        if d.source(image) != functor.on_object(c.source(f))
            || d.target(image) != functor.on_object(c.target(f))
        {
            violations.push(FunctorViolation::Endpoints { f });
        }
    }
    for x in c.objects() {
        if functor.on_morphism(c.identity(x)) != d.identity(functor.on_object(x)) {
            violations.push(FunctorViolation::Identity { object: x });
        }
    }
    for (g, f, gf) in c.composition_table() {
        let image = d.compose(functor.on_morphism(g), functor.on_morphism(f));
        if image != Some(functor.on_morphism(gf)) {
            violations.push(FunctorViolation::Composition { g, f });
        }
    }
    let mut unhit = Vec::new();
    for x in c.objects() {
        for y in c.objects() {
            let (fx, fy) = (functor.on_object(x), functor.on_object(y));
            for &u in d.hom(fx, fy) {
                if !c.hom(x, y).iter().any(|&m| functor.on_morphism(m) == u) {
                    unhit.push((x, y, u));
                }
            }
        }
    }
    let mut image: Vec<ObjId> = functor.obj_map.clone();
    image.sort();
    image.dedup();
    let missed_objects: Vec<ObjId> = d
        .objects()
        .filter(|&t| !image.iter().any(|&i| i == t || d.isomorphism(i, t).is_some()))
        .collect();
    FunctorReport {
        functorial: violations.is_empty(),
        full: unhit.is_empty(),
        essentially_surjective: missed_objects.is_empty(),
        violations,
        unhit,
        missed_objects,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Two objects with an isomorphism i: A → B, j: B → A.
    fn iso_pair() -> Arc<FinCat> {
        let mut b = FinCat::builder();
        b.object("A")
            .object("B")
            .morphism("i", "A", "B")
            .morphism("j", "B", "A")
            .auto_identities()
            .identity_composites()
            .compose("j", "i", "id_A")
            .compose("i", "j", "id_B");
        Arc::new(b.build().unwrap())
    }

    #[test]
    fn identity_functor_is_full_and_essentially_surjective() {
        let c = Arc::new(FinCat::thin(&["a", "b", "c"], |x, y| x < y));
        let r = check_functor(&Functor::identity(c));
        assert!(r.is_fes());
    }

    #[test]
    fn terminal_into_iso_pair() {
        let t = Arc::new(FinCat::terminal());
        let d = iso_pair();
        let f = Functor::constant(t, d.clone(), d.obj_id("A").unwrap());
        let r = check_functor(&f);
        assert!(r.functorial);
        assert!(r.essentially_surjective);
        // Hom(A, A) = {id_A}, so fullness holds.
        assert!(r.full);
    }

    #[test]
    fn terminal_into_non_isomorphic_pair_misses_an_object() {
        let t = Arc::new(FinCat::terminal());
        let d = Arc::new(FinCat::thin(&["a", "b"], |x, y| x < y));
        let f = Functor::constant(t, d.clone(), d.obj_id("a").unwrap());
        let r = check_functor(&f);
        assert!(!r.essentially_surjective);
        assert_eq!(r.missed_objects, vec![d.obj_id("b").unwrap()]);
    }

    #[test]
    fn non_functorial_table_is_reported_with_other_properties_intact() {
        let c = Arc::new(FinCat::thin(&["a", "b"], |x, y| x < y));
        let mut f = Functor::identity(c.clone());
        // Send a->b to id_b: endpoints break, fullness over (a, b) breaks too.
        f.mor_map[c.mor_id("a->b").unwrap().index()] = c.mor_id("id_b").unwrap();
        let r = check_functor(&f);
        assert!(!r.functorial);
        assert!(!r.full);
        assert!(r.essentially_surjective);
    }

    #[test]
    fn composition_of_functors() {
        let c = Arc::new(FinCat::thin(&["a", "b"], |x, y| x < y));
        let id = Functor::identity(c.clone());
        let comp = compose_functors(&id, &id).unwrap();
        assert_eq!(comp, id);
    }
}
