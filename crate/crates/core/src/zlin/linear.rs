//! The component-map linearization of a base category.
//!
//! Strict ℤ-morphisms have no summand inclusions (`m_i[X_i] → X` violates the
//! column marginals of the other components), so additivity and representables
//! are studied on this linearization instead: a morphism `X → Y` sends each
//! source component `i` to a target component `j` with `n_j = m_i`, together
//! with a base arrow `X_i → Y_j`. Here `Σ m_i[X_i]` is the coproduct of its
//! summands and composition is associative.

use std::collections::{BTreeSet, HashMap};

use super::{CompIdx, Term, ZMorphism, ZObject};
use crate::error::{Error, Result};
use crate::fincat::{FinCat, MorId, ObjId};

type Assignment = Vec<(CompIdx, CompIdx, MorId)>;

#[derive(Clone, Debug)]
pub struct Linearization {
    pub category: FinCat,
    objects: Vec<ZObject>,
    maps: Vec<(usize, usize, Assignment)>,
    index: HashMap<ZObject, ObjId>,
}

/// The objects together with all of their single-component summands.
pub fn summand_closure(objects: &[ZObject]) -> Vec<ZObject> {
    let mut set: BTreeSet<ZObject> = objects.iter().cloned().collect();
    for x in objects {
        for i in x.indices() {
            set.insert(x.summand(i).expect("index of x"));
        }
    }
    set.into_iter().collect()
}

impl Linearization {
    /// The full subcategory on `objects` (duplicates ignored, order kept).
    pub fn new(base: &FinCat, objects: &[ZObject]) -> Result<Linearization> {
        let mut objs: Vec<ZObject> = Vec::new();
        let mut index = HashMap::new();
        for x in objects {
            for (_, xi, _) in x.components() {
                if xi.index() >= base.num_objects() {
                    return Err(Error::UnknownId { kind: "object", id: xi.to_string() });
                }
            }
            if !index.contains_key(x) {
                index.insert(x.clone(), ObjId(objs.len() as u32));
                objs.push(x.clone());
            }
        }
        let mut labels: Vec<String> = Vec::new();
        for x in &objs {
            let mut l = x.display(base);
            if l.is_empty() {
                l = "0".into();
            }
            if labels.contains(&l) {
                l = format!("{l}#{}", labels.len());
            }
            labels.push(l);
        }
        let mut maps = Vec::new();
        let mut by_key: HashMap<(usize, usize, Assignment), usize> = HashMap::new();
        for s in 0..objs.len() {
            for t in 0..objs.len() {
                for a in assignments(base, &objs[s], &objs[t]) {
                    by_key.insert((s, t, a.clone()), maps.len());
                    maps.push((s, t, a));
                }
            }
        }
        let name = |k: usize| {
            let (s, t, a) = &maps[k];
            let parts: Vec<String> =
                a.iter().map(|(i, j, f)| format!("{i}>{j}:{}", base.mor_label(*f))).collect();
            format!("{}=>{}({})", labels[*s], labels[*t], parts.join(","))
        };
        let mut b = FinCat::builder();
        for l in &labels {
            b.object(l);
        }
        for k in 0..maps.len() {
            b.morphism(&name(k), &labels[maps[k].0], &labels[maps[k].1]);
        }
        for (s, x) in objs.iter().enumerate() {
            let id: Assignment = x.components().map(|(i, xi, _)| (i, i, base.identity(xi))).collect();
            b.identity(&labels[s], &name(by_key[&(s, s, id)]));
        }
        for (kf, (s, t, fa)) in maps.iter().enumerate() {
            for (kg, (t2, u, ga)) in maps.iter().enumerate() {
                if t != t2 {
                    continue;
                }
                let composite: Assignment = fa
                    .iter()
                    .map(|&(i, j, f)| {
                        let &(_, k, g) = ga.iter().find(|(j2, _, _)| *j2 == j).expect("total map");
                        let h = base.compose(g, f).ok_or_else(|| {
                            Error::Structural(format!(
                                "base composite {} ∘ {} is undefined",
                                base.mor_label(g),
                                base.mor_label(f)
                            ))
                        })?;
                        Ok((i, k, h))
                    })
                    .collect::<Result<_>>()?;
                let kh = by_key[&(*s, *u, composite)];
                b.compose(&name(kg), &name(kf), &name(kh));
            }
        }
        let category = b.build()?;
        Ok(Linearization { category, objects: objs, maps, index })
    }

    pub fn object_of(&self, x: &ZObject) -> Option<ObjId> {
        self.index.get(x).copied()
    }

    pub fn zobject(&self, x: ObjId) -> &ZObject {
        &self.objects[x.index()]
    }

    /// The inclusion `m_i[X_i] → X` of the summand at component `i`.
    pub fn inclusion(&self, base: &FinCat, whole: ObjId, i: CompIdx) -> Result<MorId> {
        let x = self.zobject(whole);
        let (xi, _) = x
            .get(i)
            .ok_or_else(|| Error::UnknownId { kind: "component", id: i.to_string() })?;
        let part = x.summand(i).expect("component exists");
        let s = self.object_of(&part).ok_or_else(|| {
            Error::Precondition(format!("summand {} is not an object of the linearization", part.display(base)))
        })?;
        let want: Assignment = vec![(1, i, base.identity(xi))];
        let k = self
            .maps
            .iter()
            .position(|(a, b, asg)| *a == s.index() && *b == whole.index() && *asg == want)
            .expect("summand inclusion is a component map");
        Ok(MorId(k as u32))
    }

    /// Summands of `whole` as `(component, summand object, inclusion)`.
    pub fn summands(&self, base: &FinCat, whole: ObjId) -> Result<Vec<(CompIdx, ObjId, MorId)>> {
        self.zobject(whole)
            .indices()
            .map(|i| {
                let part = self.zobject(whole).summand(i).expect("component exists");
                let s = self.object_of(&part).expect("checked by inclusion");
                Ok((i, s, self.inclusion(base, whole, i)?))
            })
            .collect()
    }

    /// The component map as a term table `(i, j, m_i, arrow)`.
    pub fn as_zmorphism(&self, f: MorId) -> ZMorphism {
        let (s, t, a) = &self.maps[f.index()];
        let src = &self.objects[*s];
        let terms = a.iter().map(|&(i, j, arrow)| Term {
            i,
            j,
            coeff: src.coefficient(i).expect("source component"),
            arrow,
        });
        ZMorphism::merged(src.clone(), self.objects[*t].clone(), terms)
    }
}

fn assignments(base: &FinCat, x: &ZObject, y: &ZObject) -> Vec<Assignment> {
    let mut out: Vec<Assignment> = vec![Vec::new()];
    for (i, xi, m) in x.components() {
        let options: Vec<(CompIdx, MorId)> = y
            .components()
            .filter(|&(_, _, n)| n == m)
            .flat_map(|(j, yj, _)| base.hom(xi, yj).iter().map(move |&f| (j, f)))
            .collect();
        out = out
            .into_iter()
            .flat_map(|prefix| {
                options.iter().map(move |&(j, f)| {
                    let mut p = prefix.clone();
                    p.push((i, j, f));
                    p
                })
            })
            .collect();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linearization_is_a_category_with_coproduct_homs() {
        let base = FinCat::thin(&["A", "B"], |a, b| a < b);
        let (a, b) = (ObjId(0), ObjId(1));
        let x = ZObject::from_list(&[(a, 2), (b, 1)]).unwrap();
        let y = ZObject::from_list(&[(b, 2), (b, 1)]).unwrap();
        let lin = Linearization::new(&base, &summand_closure(&[x.clone(), y.clone()])).unwrap();
        assert!(lin.category.validate().is_valid());
        let (ox, oy) = (lin.object_of(&x).unwrap(), lin.object_of(&y).unwrap());
        let parts = lin.summands(&base, ox).unwrap();
        let whole = lin.category.hom(ox, oy).len();
        let product: usize = parts.iter().map(|&(_, s, _)| lin.category.hom(s, oy).len()).product();
        assert_eq!(whole, product);
        assert_eq!(whole, 1);
        for (_, s, inc) in parts {
            assert_eq!(lin.category.source(inc), s);
            assert_eq!(lin.category.target(inc), ox);
        }
    }
}
