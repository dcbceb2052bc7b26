//! Formal integer combinations of base objects and their coefficient-split
//! morphisms.
//!
//! A [`ZMorphism`] `Σ m_i[X_i] → Σ n_j[Y_j]` is a table of terms
//! `(i, j, c, arrow)`: each source coefficient `m_i` splits across the base
//! arrows leaving `X_i`, and each target coefficient `n_j` is reassembled
//! from the arrows entering `Y_j`. Terms are kept canonical: keyed by
//! `(i, j, arrow)` with zero coefficients dropped, so equality is structural.

mod compose;
mod enumerate;
mod linear;
mod refine;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fincat::{FinCat, MorId, ObjId};

pub use compose::{z_compose, z_compose_with};
pub use enumerate::{enumerate_coherent_hom, enumerate_objects};
pub use linear::{summand_closure, Linearization};
pub use refine::{interval_refinement, RefinementTable};

/// Component index of a [`ZObject`]; indices are 1-based by convention.
pub type CompIdx = u32;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ZObject {
    components: BTreeMap<CompIdx, (ObjId, i64)>,
}

impl ZObject {
    pub fn new(components: impl IntoIterator<Item = (CompIdx, ObjId, i64)>) -> Result<ZObject> {
        let mut map = BTreeMap::new();
        for (i, x, m) in components {
            if m == 0 {
                return Err(Error::Structural(format!("component {i} has coefficient 0")));
            }
            if map.insert(i, (x, m)).is_some() {
                return Err(Error::DuplicateId { kind: "component", id: i.to_string() });
            }
        }
        Ok(ZObject { components: map })
    }

    /// Components numbered `1, 2, …` in the given order.
    pub fn from_list(parts: &[(ObjId, i64)]) -> Result<ZObject> {
        ZObject::new(parts.iter().enumerate().map(|(k, &(x, m))| (k as CompIdx + 1, x, m)))
    }

    /// `m[X]` as a single component with index 1.
    pub fn single(x: ObjId, m: i64) -> Result<ZObject> {
        ZObject::from_list(&[(x, m)])
    }

    pub fn components(&self) -> impl Iterator<Item = (CompIdx, ObjId, i64)> + '_ {
        self.components.iter().map(|(&i, &(x, m))| (i, x, m))
    }

    pub fn indices(&self) -> impl Iterator<Item = CompIdx> + '_ {
        self.components.keys().copied()
    }

    pub fn get(&self, i: CompIdx) -> Option<(ObjId, i64)> {
        self.components.get(&i).copied()
    }

    pub fn coefficient(&self, i: CompIdx) -> Option<i64> {
        self.get(i).map(|(_, m)| m)
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// The summand `m_i[X_i]`, reindexed to component 1.
    pub fn summand(&self, i: CompIdx) -> Option<ZObject> {
        self.get(i).map(|(x, m)| ZObject::single(x, m).expect("coefficient is nonzero"))
    }

    pub fn display(&self, base: &FinCat) -> String {
        let parts: Vec<String> = self
            .components()
            .map(|(_, x, m)| format!("{m}[{}]", base.obj_label(x)))
            .collect();
        parts.join("+")
    }
}

/// One term `(i, j, c, arrow)` of a ℤ-morphism.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Term {
    pub i: CompIdx,
    pub j: CompIdx,
    pub coeff: i64,
    pub arrow: MorId,
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{},{})", self.i, self.j, self.coeff, self.arrow)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ZMorphism {
    source: ZObject,
    target: ZObject,
    terms: BTreeMap<(CompIdx, CompIdx, MorId), i64>,
}

impl ZMorphism {
    /// Build from terms. Indices must name components of the endpoints and
    /// each `(i, j, arrow)` may occur once; zero terms are dropped. Marginals
    /// are not checked here, see [`z_validate`].
    pub fn new(source: ZObject, target: ZObject, terms: impl IntoIterator<Item = Term>) -> Result<ZMorphism> {
        let mut map = BTreeMap::new();
        for t in terms {
            if source.get(t.i).is_none() {
                return Err(Error::UnknownId { kind: "source component", id: t.i.to_string() });
            }
            if target.get(t.j).is_none() {
                return Err(Error::UnknownId { kind: "target component", id: t.j.to_string() });
            }
            if map.insert((t.i, t.j, t.arrow), t.coeff).is_some() {
                return Err(Error::DuplicateId { kind: "term", id: t.to_string() });
            }
        }
        map.retain(|_, c| *c != 0);
        Ok(ZMorphism { source, target, terms: map })
    }

    /// Sum coefficients of repeated `(i, j, arrow)` keys instead of rejecting them.
    pub(crate) fn merged(source: ZObject, target: ZObject, terms: impl IntoIterator<Item = Term>) -> ZMorphism {
        let mut map: BTreeMap<(CompIdx, CompIdx, MorId), i64> = BTreeMap::new();
        for t in terms {
            *map.entry((t.i, t.j, t.arrow)).or_default() += t.coeff;
        }
        map.retain(|_, c| *c != 0);
        ZMorphism { source, target, terms: map }
    }

    pub fn source(&self) -> &ZObject {
        &self.source
    }

    pub fn target(&self) -> &ZObject {
        &self.target
    }

    /// Terms in canonical `(i, j, arrow)` order.
    pub fn terms(&self) -> impl Iterator<Item = Term> + '_ {
        self.terms.iter().map(|(&(i, j, arrow), &coeff)| Term { i, j, coeff, arrow })
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn display(&self, base: &FinCat) -> String {
        let parts: Vec<String> = self
            .terms()
            .map(|t| format!("({},{},{},{})", t.i, t.j, t.coeff, base.mor_label(t.arrow)))
            .collect();
        format!("{{{}}}", parts.join(","))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "violation", rename_all = "snake_case")]
pub enum ZViolation {
    /// Terms leaving source component `i` sum to `actual` instead of `expected`.
    Row { i: CompIdx, expected: i64, actual: i64, discrepancy: i64 },
    Column { j: CompIdx, expected: i64, actual: i64, discrepancy: i64 },
    /// `arrow` is not in `Hom(X_i, Y_j)`.
    Membership { i: CompIdx, j: CompIdx, arrow: MorId },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ZReport {
    pub violations: Vec<ZViolation>,
}

impl ZReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Check both marginal constraints and hom-membership of every term.
pub fn z_validate(base: &FinCat, phi: &ZMorphism) -> ZReport {
    let mut violations = Vec::new();
    let mut rows: BTreeMap<CompIdx, i64> = phi.source.indices().map(|i| (i, 0)).collect();
    let mut cols: BTreeMap<CompIdx, i64> = phi.target.indices().map(|j| (j, 0)).collect();
    for t in phi.terms() {
        *rows.get_mut(&t.i).expect("checked on construction") += t.coeff;
        *cols.get_mut(&t.j).expect("checked on construction") += t.coeff;
        let (x, _) = phi.source.get(t.i).expect("checked on construction");
        let (y, _) = phi.target.get(t.j).expect("checked on construction");
        let in_hom = t.arrow.index() < base.num_morphisms()
            && base.source(t.arrow) == x
            && base.target(t.arrow) == y;
        if !in_hom {
            violations.push(ZViolation::Membership { i: t.i, j: t.j, arrow: t.arrow });
        }
    }
    for (i, actual) in rows {
        let expected = phi.source.coefficient(i).expect("index from source");
        if actual != expected {
            violations.push(ZViolation::Row { i, expected, actual, discrepancy: expected - actual });
        }
    }
    for (j, actual) in cols {
        let expected = phi.target.coefficient(j).expect("index from target");
        if actual != expected {
            violations.push(ZViolation::Column { j, expected, actual, discrepancy: expected - actual });
        }
    }
    ZReport { violations }
}

/// `Σ m_i id_{X_i}`.
pub fn z_identity(base: &FinCat, x: &ZObject) -> ZMorphism {
    let terms = x
        .components()
        .map(|(i, xi, m)| Term { i, j: i, coeff: m, arrow: base.identity(xi) });
    ZMorphism::new(x.clone(), x.clone(), terms).expect("identity terms are well formed")
}

/// `m·f : m[X] → m[Y]`.
pub fn z_scalar_embed(base: &FinCat, f: MorId, m: i64) -> Result<ZMorphism> {
    if f.index() >= base.num_morphisms() {
        return Err(Error::UnknownId { kind: "morphism", id: f.to_string() });
    }
    let source = ZObject::single(base.source(f), m)?;
    let target = ZObject::single(base.target(f), m)?;
    ZMorphism::new(source, target, [Term { i: 1, j: 1, coeff: m, arrow: f }])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fork() -> (FinCat, MorId, MorId) {
        let c = FinCat::free_on_dag(&["X", "Y1", "Y2"], &[("f", 0, 1), ("g", 0, 2)]);
        let (f, g) = (c.mor_id("f").unwrap(), c.mor_id("g").unwrap());
        (c, f, g)
    }

    fn split(m1: i64) -> (FinCat, ZMorphism) {
        let (c, f, g) = fork();
        let x = ZObject::single(ObjId(0), m1).unwrap();
        let y = ZObject::from_list(&[(ObjId(1), 2), (ObjId(2), 1)]).unwrap();
        let terms = [Term { i: 1, j: 1, coeff: 2, arrow: f }, Term { i: 1, j: 2, coeff: 1, arrow: g }];
        let phi = ZMorphism::new(x, y, terms).unwrap();
        (c, phi)
    }

    #[test]
    fn zero_coefficients_are_rejected_or_dropped() {
        assert!(ZObject::single(ObjId(0), 0).is_err());
        let (c, f, _) = fork();
        let x = ZObject::single(ObjId(0), 1).unwrap();
        let y = ZObject::single(ObjId(1), 1).unwrap();
        let phi = ZMorphism::new(
            x,
            y,
            [Term { i: 1, j: 1, coeff: 1, arrow: f }, Term { i: 1, j: 1, coeff: 0, arrow: c.identity(ObjId(0)) }],
        )
        .unwrap();
        assert_eq!(phi.num_terms(), 1);
    }

    #[test]
    fn split_with_matching_marginals_is_valid() {
        let (c, phi) = split(3);
        assert!(z_validate(&c, &phi).is_valid());
    }

    #[test]
    fn row_discrepancy_is_reported() {
        let (c, phi) = split(4);
        let r = z_validate(&c, &phi);
        assert_eq!(r.violations, vec![ZViolation::Row { i: 1, expected: 4, actual: 3, discrepancy: 1 }]);
    }

    #[test]
    fn arrow_outside_hom_is_a_membership_violation() {
        let (c, f, _) = fork();
        let x = ZObject::single(ObjId(0), 1).unwrap();
        let y = ZObject::single(ObjId(2), 1).unwrap();
        let phi = ZMorphism::new(x, y, [Term { i: 1, j: 1, coeff: 1, arrow: f }]).unwrap();
        let r = z_validate(&c, &phi);
        assert_eq!(r.violations, vec![ZViolation::Membership { i: 1, j: 1, arrow: f }]);
    }

    #[test]
    fn identities_are_valid() {
        let (c, _, _) = fork();
        let a = ZObject::from_list(&[(ObjId(0), 2), (ObjId(1), 3)]).unwrap();
        let id = z_identity(&c, &a);
        assert!(z_validate(&c, &id).is_valid());
        let terms: Vec<Term> = id.terms().collect();
        assert_eq!(terms[0], Term { i: 1, j: 1, coeff: 2, arrow: c.identity(ObjId(0)) });
        assert_eq!(terms[1], Term { i: 2, j: 2, coeff: 3, arrow: c.identity(ObjId(1)) });
        let neg = z_identity(&c, &ZObject::single(ObjId(0), -1).unwrap());
        assert_eq!(neg.terms().next().unwrap().coeff, -1);
    }

    #[test]
    fn scalar_embedding() {
        let (c, f, _) = fork();
        let e = z_scalar_embed(&c, f, 3).unwrap();
        assert_eq!(e.terms().collect::<Vec<_>>(), vec![Term { i: 1, j: 1, coeff: 3, arrow: f }]);
        assert!(z_scalar_embed(&c, f, 0).is_err());
    }
}
