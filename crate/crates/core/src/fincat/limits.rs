use serde::Serialize;

use super::{Cone, FinCat, MorId, ObjId};

/// Which declared limit a violation refers to.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LimitRef {
    Pullback { f: MorId, g: MorId },
    Product { a: ObjId, b: ObjId },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "fault", rename_all = "snake_case")]
pub enum LimitFault {
    NotACospan,
    /// The declared legs have the wrong endpoints or do not commute.
    NotACone,
    /// A competing cone `(q1, q2)` from `vertex` has no mediating morphism.
    MissingMediator { vertex: ObjId, q1: MorId, q2: MorId },
    NonUniqueMediator { vertex: ObjId, q1: MorId, q2: MorId, mediators: Vec<MorId> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LimitViolation {
    pub limit: LimitRef,
    pub fault: LimitFault,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LimitReport {
    pub checked: usize,
    pub violations: Vec<LimitViolation>,
}

impl LimitReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Validate every declared pullback and product against its universal
/// property by enumerating all competing cones.
pub fn chosen_limit_check(c: &FinCat) -> LimitReport {
    let mut report = LimitReport::default();
    for ((f, g), cone) in c.declared_pullbacks() {
        report.checked += 1;
        let limit = LimitRef::Pullback { f, g };
        if c.target(f) != c.target(g) {
            report.violations.push(LimitViolation { limit, fault: LimitFault::NotACospan });
            continue;
        }
        let commutes = |q1: MorId, q2: MorId| match (c.compose(f, q1), c.compose(g, q2)) {
            (Some(a), Some(b)) => a == b,
            _ => false,
        };
        check_cone(c, limit, cone, c.source(f), c.source(g), &commutes, &mut report);
    }
    for ((a, b), cone) in c.declared_products() {
        report.checked += 1;
        let limit = LimitRef::Product { a, b };
        check_cone(c, limit, cone, a, b, &|_, _| true, &mut report);
    }
    report
}

fn check_cone(
    c: &FinCat,
    limit: LimitRef,
    cone: Cone,
    a: ObjId,
    b: ObjId,
    admissible: &dyn Fn(MorId, MorId) -> bool,
    report: &mut LimitReport,
) {
    let legs_ok = c.source(cone.first) == cone.apex
        && c.source(cone.second) == cone.apex
        && c.target(cone.first) == a
        && c.target(cone.second) == b
        && admissible(cone.first, cone.second);
    if !legs_ok {
        report.violations.push(LimitViolation { limit, fault: LimitFault::NotACone });
        return;
    }
    for q in c.objects() {
        for &q1 in c.hom(q, a) {
            for &q2 in c.hom(q, b) {
                if !admissible(q1, q2) {
                    continue;
                }
                let mediators: Vec<MorId> = c
                    .hom(q, cone.apex)
                    .iter()
                    .copied()
                    .filter(|&u| {
                        c.compose(cone.first, u) == Some(q1) && c.compose(cone.second, u) == Some(q2)
                    })
                    .collect();
                let fault = match mediators.len() {
                    1 => continue,
                    0 => LimitFault::MissingMediator { vertex: q, q1, q2 },
                    _ => LimitFault::NonUniqueMediator { vertex: q, q1, q2, mediators },
                };
                report.violations.push(LimitViolation { limit, fault });
            }
        }
    }
}

pub(super) fn describe(c: &FinCat, v: &LimitViolation) -> String {
    let m = |f: MorId| c.mor_label(f).to_string();
    let which = match v.limit {
        LimitRef::Pullback { f, g } => format!("pullback of ({}, {})", m(f), m(g)),
        LimitRef::Product { a, b } => format!("product of ({}, {})", c.obj_label(a), c.obj_label(b)),
    };
    match &v.fault {
        LimitFault::NotACospan => format!("{which}: the two morphisms do not share a target"),
        LimitFault::NotACone => format!("{which}: declared legs do not form a cone"),
        LimitFault::MissingMediator { vertex, q1, q2 } => format!(
            "{which}: cone ({}, {}) from {} has no mediating morphism",
            m(*q1),
            m(*q2),
            c.obj_label(*vertex)
        ),
        LimitFault::NonUniqueMediator { vertex, q1, q2, mediators } => format!(
            "{which}: cone ({}, {}) from {} has {} mediating morphisms",
            m(*q1),
            m(*q2),
            c.obj_label(*vertex),
            mediators.len()
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_with_terminal_object_is_the_object_itself() {
        let mut b = FinCat::builder();
        b.object("X")
            .object("T")
            .morphism("!", "X", "T")
            .auto_identities()
            .identity_composites()
            .product("X", "T", "X", "id_X", "!");
        let c = b.build().unwrap();
        let r = chosen_limit_check(&c);
        assert_eq!(r.checked, 1);
        assert!(r.is_valid(), "{r:?}");
    }

    #[test]
    fn poset_meets_are_valid_pullbacks() {
        let c = FinCat::thin(&["0", "p", "q", "pq"], |a, b| a == 0 || b == 3).with_meets();
        let r = chosen_limit_check(&c);
        assert!(r.checked > 0);
        assert!(r.is_valid());
    }

    #[test]
    fn wrong_apex_lacks_a_mediator() {
        // Declare p ∧ q = p in the two-point opens poset: the cone from the
        // bottom element is fine but the apex p does not map to q.
        let mut b = FinCat::builder();
        let c0 = FinCat::thin(&["0", "p", "q", "pq"], |a, b| a == 0 || b == 3);
        for o in ["0", "p", "q", "pq"] {
            b.object(o);
        }
        for f in c0.morphisms() {
            b.morphism(c0.mor_label(f), c0.obj_label(c0.source(f)), c0.obj_label(c0.target(f)));
        }
        for x in c0.objects() {
            b.identity(c0.obj_label(x), c0.mor_label(c0.identity(x)));
        }
        for (g, f, h) in c0.composition_table() {
            b.compose(c0.mor_label(g), c0.mor_label(f), c0.mor_label(h));
        }
        // Wrong: the legs of a cospan over pq, apex "0" but declared as a
        // product of p and pq with apex p and second leg into pq.
        b.product("p", "q", "0", "0->p", "0->q");
        b.product("pq", "q", "pq", "id_pq", "0->q");
        let c = b.build().unwrap();
        let r = chosen_limit_check(&c);
        assert_eq!(r.violations.len(), 1);
        assert_eq!(r.violations[0].fault, LimitFault::NotACone);

        // In the chain a < b < c the product b × c is b; declaring a instead
        // leaves the cone (id_b, b->c) without a mediator.
        let mut b2 = FinCat::builder();
        let chain = FinCat::thin(&["a", "b", "c"], |x, y| x < y);
        for o in ["a", "b", "c"] {
            b2.object(o);
        }
        for f in chain.morphisms() {
            b2.morphism(chain.mor_label(f), chain.obj_label(chain.source(f)), chain.obj_label(chain.target(f)));
        }
        for x in chain.objects() {
            b2.identity(chain.obj_label(x), chain.mor_label(chain.identity(x)));
        }
        for (g, f, h) in chain.composition_table() {
            b2.compose(chain.mor_label(g), chain.mor_label(f), chain.mor_label(h));
        }
        b2.product("b", "c", "a", "a->b", "a->c");
        let c2 = b2.build().unwrap();
        let r2 = chosen_limit_check(&c2);
        assert_eq!(r2.violations.len(), 1);
        assert_eq!(
            r2.violations[0].fault,
            LimitFault::MissingMediator {
                vertex: c2.obj_id("b").unwrap(),
                q1: c2.mor_id("id_b").unwrap(),
                q2: c2.mor_id("b->c").unwrap(),
            }
        );
    }
}
