use std::collections::BTreeMap;

use super::{CompIdx, Term, ZMorphism, ZObject};
use crate::fincat::{FinCat, MorId};

/// Every ZObject with at most `max_components` components and
/// `1 ≤ |m_i| ≤ max_abs`, in canonical order.
pub fn enumerate_objects(base: &FinCat, max_components: usize, max_abs: i64) -> Vec<ZObject> {
    let atoms: Vec<_> = base
        .objects()
        .flat_map(|x| (-max_abs..=max_abs).filter(|&m| m != 0).map(move |m| (x, m)))
        .collect();
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn rec(atoms: &[(crate::fincat::ObjId, i64)], left: usize, cur: &mut Vec<(crate::fincat::ObjId, i64)>, out: &mut Vec<ZObject>) {
        if !cur.is_empty() {
            out.push(ZObject::from_list(cur).expect("nonzero coefficients"));
        }
        if left == 0 {
            return;
        }
        for &a in atoms {
            cur.push(a);
            rec(atoms, left - 1, cur, out);
            cur.pop();
        }
    }
    rec(&atoms, max_components, &mut current, &mut out);
    out.sort();
    out
}

/// All ℤ-morphisms `X → Y` satisfying both marginals whose terms all carry
/// the sign of their source and target coefficients, so that they compose
/// canonically on either side.
pub fn enumerate_coherent_hom(base: &FinCat, x: &ZObject, y: &ZObject) -> Vec<ZMorphism> {
    let rows: Vec<(CompIdx, i64, Vec<(CompIdx, MorId)>)> = x
        .components()
        .map(|(i, xi, m)| {
            let cells = y
                .components()
                .filter(|&(_, _, n)| n.signum() == m.signum())
                .flat_map(|(j, yj, _)| base.hom(xi, yj).iter().map(move |&f| (j, f)))
                .collect();
            (i, m, cells)
        })
        .collect();
    let mut capacity: BTreeMap<CompIdx, i64> = y.components().map(|(j, _, n)| (j, n.abs())).collect();
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    rows_rec(&rows, 0, &mut capacity, &mut chosen, &mut |terms| {
        out.push(ZMorphism::new(x.clone(), y.clone(), terms.iter().copied()).expect("distinct cells"));
    });
    out.sort_by(|a, b| a.terms().cmp(b.terms()));
    out
}

type Row = (CompIdx, i64, Vec<(CompIdx, MorId)>);

fn rows_rec(
    rows: &[Row],
    r: usize,
    capacity: &mut BTreeMap<CompIdx, i64>,
    chosen: &mut Vec<Term>,
    emit: &mut dyn FnMut(&[Term]),
) {
    if r == rows.len() {
        if capacity.values().all(|&c| c == 0) {
            emit(chosen);
        }
        return;
    }
    let (i, m, cells) = &rows[r];
    cells_rec(rows, r, *i, m.signum(), cells, 0, m.abs(), capacity, chosen, emit);
}

#[allow(clippy::too_many_arguments)]
fn cells_rec(
    rows: &[Row],
    r: usize,
    i: CompIdx,
    sign: i64,
    cells: &[(CompIdx, MorId)],
    c: usize,
    left: i64,
    capacity: &mut BTreeMap<CompIdx, i64>,
    chosen: &mut Vec<Term>,
    emit: &mut dyn FnMut(&[Term]),
) {
    if left == 0 {
        rows_rec(rows, r + 1, capacity, chosen, emit);
        return;
    }
    if c == cells.len() {
        return;
    }
    let (j, arrow) = cells[c];
    let cap = capacity[&j];
    for take in (0..=left.min(cap)).rev() {
        if take > 0 {
            *capacity.get_mut(&j).unwrap() -= take;
            chosen.push(Term { i, j, coeff: sign * take, arrow });
        }
        cells_rec(rows, r, i, sign, cells, c + 1, left - take, capacity, chosen, emit);
        if take > 0 {
            chosen.pop();
            *capacity.get_mut(&j).unwrap() += take;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::z_validate;
    use super::*;
    use crate::fincat::ObjId;

    #[test]
    fn counts_over_the_terminal_category() {
        let c = FinCat::terminal();
        let s = ObjId(0);
        let x = ZObject::from_list(&[(s, 1), (s, 1)]).unwrap();
        assert_eq!(enumerate_coherent_hom(&c, &x, &x).len(), 2);
        let y = ZObject::from_list(&[(s, 2), (s, 1)]).unwrap();
        let z = ZObject::from_list(&[(s, 1), (s, 2)]).unwrap();
        // 2x2 tables with rows (2,1) and columns (1,2): two of them.
        let hom = enumerate_coherent_hom(&c, &y, &z);
        assert_eq!(hom.len(), 2);
        assert!(hom.iter().all(|h| z_validate(&c, h).is_valid()));
        let neg = ZObject::single(s, -1).unwrap();
        assert!(enumerate_coherent_hom(&c, &neg, &ZObject::single(s, 1).unwrap()).is_empty());
    }

    #[test]
    fn object_enumeration_is_canonical() {
        let c = FinCat::terminal();
        let objs = enumerate_objects(&c, 2, 1);
        assert_eq!(objs.len(), 2 + 4);
        assert!(objs.windows(2).all(|w| w[0] < w[1]));
    }
}
