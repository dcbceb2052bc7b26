//! Independent oracles and random generators shared by the integration
//! tests and the acceptance suite.

#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::Rng;
use zcat_core::fincat::{FinCat, MorId, ObjId};
use zcat_core::sheaf::Presheaf;
use zcat_core::site::CoveringAssignment;
use zcat_core::zlin::{Term, ZMorphism, ZObject};

/// Sieve-style sheaf test: a tuple is compatible when it agrees along every
/// commuting square `f∘h = g∘k` out of any object, not just pullbacks.
pub fn sheaf_oracle(f: &Presheaf, c: &FinCat, k: &CoveringAssignment) -> bool {
    for (x, family) in k.iter() {
        let members: Vec<MorId> = family.iter().copied().collect();
        let sizes: Vec<usize> = members.iter().map(|&m| f.num_sections(c.source(m))).collect();
        let mut compatible = Vec::new();
        for tuple in product(&sizes) {
            let ok = (0..members.len()).all(|a| {
                (0..members.len()).all(|b| {
                    c.objects().all(|w| {
                        let (ua, ub) = (c.source(members[a]), c.source(members[b]));
                        c.hom(w, ua).iter().all(|&h| {
                            c.hom(w, ub).iter().all(|&kk| {
                                c.compose(members[a], h) != c.compose(members[b], kk)
                                    || f.restrict(h, tuple[a]) == f.restrict(kk, tuple[b])
                            })
                        })
                    })
                })
            });
            if ok {
                compatible.push(tuple);
            }
        }
        let image: BTreeSet<Vec<usize>> = (0..f.num_sections(x))
            .map(|s| members.iter().map(|&m| f.restrict(m, s)).collect())
            .collect();
        if image.len() != f.num_sections(x) || image.len() != compatible.len() {
            return false;
        }
    }
    true
}

/// All tuples with `t[i] < sizes[i]`.
pub fn product(sizes: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &n in sizes {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..n).map(move |s| {
                    let mut u = t.clone();
                    u.push(s);
                    u
                })
            })
            .collect();
    }
    out
}

/// Count full, essentially surjective functors `c → m` by trying every
/// assignment of objects and morphisms.
pub fn fes_count_oracle(c: &FinCat, m: &FinCat) -> usize {
    let objs: Vec<ObjId> = c.objects().collect();
    let mors: Vec<MorId> = c.morphisms().collect();
    let mut count = 0;
    for omap in product(&vec![m.num_objects(); objs.len()]) {
        let fo = |x: ObjId| ObjId(omap[x.index()] as u32);
        let choices: Vec<&[MorId]> = mors.iter().map(|&f| m.hom(fo(c.source(f)), fo(c.target(f)))).collect();
        let sizes: Vec<usize> = choices.iter().map(|h| h.len()).collect();
        for mmap in product(&sizes) {
            let fm = |f: MorId| choices[f.index()][mmap[f.index()]];
            let functorial = c.objects().all(|x| fm(c.identity(x)) == m.identity(fo(x)))
                && c.composition_table().iter().all(|&(g, f, h)| m.compose(fm(g), fm(f)) == Some(fm(h)));
            if !functorial {
                continue;
            }
            let full = objs.iter().all(|&x| {
                objs.iter().all(|&y| {
                    let hit: BTreeSet<MorId> = c.hom(x, y).iter().map(|&f| fm(f)).collect();
                    m.hom(fo(x), fo(y)).iter().all(|g| hit.contains(g))
                })
            });
            let es = m.objects().all(|z| objs.iter().any(|&x| m.isomorphism(fo(x), z).is_some()));
            if full && es {
                count += 1;
            }
        }
    }
    count
}

/// Overlap lengths of the sign-stripped intervals `[R_{i-1}, R_i)` and
/// `[C_{j-1}, C_j)`, with the common sign restored.
pub fn interval_overlap(rows: &[i64], cols: &[i64]) -> Vec<((usize, usize), i64)> {
    let sign = if rows.iter().chain(cols).any(|&v| v < 0) { -1 } else { 1 };
    let bounds = |v: &[i64]| {
        let mut acc = 0;
        v.iter()
            .map(|&m| {
                let lo = acc;
                acc += m.abs();
                (lo, acc)
            })
            .collect::<Vec<_>>()
    };
    let (r, c) = (bounds(rows), bounds(cols));
    let mut out = Vec::new();
    for (i, &(a0, a1)) in r.iter().enumerate() {
        for (j, &(b0, b1)) in c.iter().enumerate() {
            let len = a1.min(b1) - a0.max(b0);
            if len > 0 {
                out.push(((i, j), sign * len));
            }
        }
    }
    out
}

/// Polynomial product checked by evaluation: `p(t)·q(t)` at enough points.
pub fn poly_product_matches(p: &[u64], q: &[u64], r: &[u64]) -> bool {
    let eval = |v: &[u64], t: u128| v.iter().rev().fold(0u128, |acc, &a| acc * t + a as u128);
    let deg = p.len() + q.len() + r.len() + 1;
    (0..deg as u128).all(|t| eval(p, t) * eval(q, t) == eval(r, t))
}

/// A random positive composition of `total` into parts of size at most `cap`.
pub fn random_partition(rng: &mut impl Rng, total: i64, cap: i64) -> Vec<i64> {
    let mut left = total;
    let mut out = Vec::new();
    while left > 0 {
        let m = rng.gen_range(1..=left.min(cap));
        out.push(m);
        left -= m;
    }
    out
}

/// A DAG on `n` objects with one or two parallel generators `a → b` for
/// each `a < b`.
pub fn layered_base(n: usize, rng: &mut impl Rng) -> FinCat {
    let names: Vec<String> = (0..n).map(|i| format!("o{i}")).collect();
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for k in 0..rng.gen_range(1..=2) {
                edges.push((format!("e{a}{b}_{k}"), a, b));
            }
        }
    }
    FinCat::free_on_dag(&names, &edges)
}

/// A random sign-coherent morphism from `source` to an object over
/// `targets` with random column sums, built from a random transport plan.
pub fn random_morphism(base: &FinCat, rng: &mut impl Rng, source: &ZObject, targets: &[ObjId], max_abs: i64) -> ZMorphism {
    let sign = source.components().next().map(|(_, _, m)| m.signum()).unwrap_or(1);
    let total: i64 = source.components().map(|(_, _, m)| m.abs()).sum();
    let cols = random_partition(rng, total, max_abs);
    let objs: Vec<ObjId> = cols.iter().map(|_| targets[rng.gen_range(0..targets.len())]).collect();
    let target = ZObject::new(cols.iter().zip(&objs).enumerate().map(|(j, (&m, &y))| (j as u32 + 1, y, sign * m)))
        .expect("nonzero columns");
    let rows: Vec<(u32, ObjId, i64)> = source.components().collect();
    let mut col_left: Vec<i64> = cols.clone();
    let mut terms = Vec::new();
    let mut j = 0;
    for (i, x, m) in rows {
        let mut need = m.abs();
        while need > 0 {
            while col_left[j] == 0 {
                j += 1;
            }
            let take = rng.gen_range(1..=need.min(col_left[j]));
            let hom = base.hom(x, objs[j]);
            let arrow = hom[rng.gen_range(0..hom.len())];
            terms.push((i, j as u32 + 1, take, arrow));
            need -= take;
            col_left[j] -= take;
        }
    }
    let mut merged: std::collections::BTreeMap<(u32, u32, MorId), i64> = Default::default();
    for (i, j, m, a) in terms {
        *merged.entry((i, j, a)).or_default() += m;
    }
    ZMorphism::new(
        source.clone(),
        target,
        merged.into_iter().map(|((i, j, arrow), m)| Term { i, j, coeff: sign * m, arrow }),
    )
    .expect("distinct terms")
}

/// A random object over `objects` with total absolute coefficient `total`.
pub fn random_object(rng: &mut impl Rng, objects: &[ObjId], total: i64, sign: i64, cap: i64) -> ZObject {
    let parts = random_partition(rng, total, cap);
    ZObject::new(parts.iter().enumerate().map(|(i, &m)| (i as u32 + 1, objects[rng.gen_range(0..objects.len())], sign * m)))
        .expect("nonzero parts")
}
