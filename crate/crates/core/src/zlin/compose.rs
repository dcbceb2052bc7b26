use std::collections::BTreeMap;

use super::{interval_refinement, CompIdx, RefinementTable, Term, ZMorphism};
use crate::error::{Error, Result};
use crate::fincat::FinCat;
use crate::par;

/// `ψ ∘ φ` under the canonical interval rule.
pub fn z_compose(base: &FinCat, psi: &ZMorphism, phi: &ZMorphism) -> Result<ZMorphism> {
    z_compose_with(base, psi, phi, &BTreeMap::new())
}

/// `ψ ∘ φ`, taking the overlap table for middle component `j` from
/// `explicit[j]` when present and from [`interval_refinement`] otherwise.
///
/// Into each `j`, φ's terms are ordered by `(i, arrow)` and ψ's terms out of
/// `j` by `(k, arrow)`; every nonzero overlap `m_(ijk)` contributes the term
/// `(i, k, m_(ijk), ψ_kj ∘ φ_ji)`.
pub fn z_compose_with(
    base: &FinCat,
    psi: &ZMorphism,
    phi: &ZMorphism,
    explicit: &BTreeMap<CompIdx, RefinementTable>,
) -> Result<ZMorphism> {
    if phi.target() != psi.source() {
        return Err(Error::Precondition("target of φ is not the source of ψ".into()));
    }
    let middle: Vec<CompIdx> = phi.target().indices().collect();
    let pieces = par::map(&middle, |&j| -> Result<Vec<Term>> {
        let into: Vec<Term> = phi.terms().filter(|t| t.j == j).collect();
        let mut out: Vec<Term> = psi.terms().filter(|t| t.i == j).collect();
        out.sort_by_key(|t| (t.j, t.arrow));
        let rows: Vec<i64> = into.iter().map(|t| t.coeff).collect();
        let cols: Vec<i64> = out.iter().map(|t| t.coeff).collect();
        let table = match explicit.get(&j) {
            Some(t) => {
                t.check_marginals(&rows, &cols)?;
                t.clone()
            }
            None => interval_refinement(&rows, &cols).map_err(|e| match e {
                Error::MixedSigns => Error::SignIncoherent { component: j },
                other => Error::MarginalMismatch(format!("middle component {j}: {other}")),
            })?,
        };
        table
            .entries
            .iter()
            .map(|(&(a, b), &m)| {
                let (f, g) = (into[a], out[b]);
                let arrow = base.compose(g.arrow, f.arrow).ok_or_else(|| {
                    Error::Structural(format!(
                        "base composite {} ∘ {} is undefined",
                        base.mor_label(g.arrow),
                        base.mor_label(f.arrow)
                    ))
                })?;
                Ok(Term { i: f.i, j: g.j, coeff: m, arrow })
            })
            .collect()
    });
    let mut terms = Vec::new();
    for p in pieces {
        terms.extend(p?);
    }
    Ok(ZMorphism::merged(phi.source().clone(), psi.target().clone(), terms))
}
