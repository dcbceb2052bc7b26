use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Arc;

use super::{canonical, ModelLabeledCat, ParamFamily};
use crate::error::{Error, Result};
use crate::fincat::{check_functor, FinCat, Functor, MorId, ObjId};
use crate::par;

struct Search<'a> {
    c: &'a FinCat,
    m: &'a FinCat,
    /// Composites `(g, f, h)` grouped by the largest index among them.
    triples: Vec<Vec<(MorId, MorId, MorId)>>,
    nodes: &'a AtomicU64,
    budget: u64,
    exceeded: &'a AtomicBool,
}

impl Search<'_> {
    fn tick(&self) -> bool {
        if self.exceeded.load(Ordering::Relaxed) {
            return false;
        }
        if self.nodes.fetch_add(1, Ordering::Relaxed) >= self.budget {
            self.exceeded.store(true, Ordering::Relaxed);
            return false;
        }
        true
    }

    fn morphisms(&self, obj: &[ObjId], k: usize, mor: &mut Vec<MorId>, out: &mut Vec<Vec<MorId>>) {
        if k == self.c.num_morphisms() {
            out.push(mor.clone());
            return;
        }
        let f = MorId(k as u32);
        let (s, t) = (obj[self.c.source(f).index()], obj[self.c.target(f).index()]);
        let candidates: Vec<MorId> = if self.c.is_identity(f) {
            vec![self.m.identity(s)]
        } else {
            self.m.hom(s, t).to_vec()
        };
        for image in candidates {
            if !self.tick() {
                return;
            }
            mor.push(image);
            let ok = self.triples[k].iter().all(|&(g, f, h)| {
                self.m.compose(mor[g.index()], mor[f.index()]) == Some(mor[h.index()])
            });
            if ok {
                self.morphisms(obj, k + 1, mor, out);
            }
            mor.pop();
        }
    }
}

/// All full, essentially surjective functors `c → m.base`, in canonical
/// order. The search counts every object and morphism assignment it tries
/// and fails with [`Error::BudgetExceeded`] past `budget`.
pub fn enumerate_fes(c: Arc<FinCat>, m: Arc<ModelLabeledCat>, budget: u64) -> Result<ParamFamily> {
    let target = m.base.clone();
    let (n, k) = (c.num_objects(), target.num_objects());
    let maps = (k as u64).checked_pow(n as u32).unwrap_or(u64::MAX);
    if maps > budget {
        return Err(Error::BudgetExceeded { budget });
    }
    let mut triples = vec![Vec::new(); c.num_morphisms()];
    for (g, f, h) in c.composition_table() {
        triples[g.index().max(f.index()).max(h.index())].push((g, f, h));
    }
    let nodes = AtomicU64::new(maps);
    let exceeded = AtomicBool::new(false);
    let search = Search { c: &c, m: &target, triples, nodes: &nodes, budget, exceeded: &exceeded };
    let found = par::map_range(maps as usize, |code| {
        let mut rest = code;
        let obj: Vec<ObjId> = (0..n)
            .map(|_| {
                let x = ObjId((rest % k) as u32);
                rest /= k;
                x
            })
            .collect();
        let mut out = Vec::new();
        search.morphisms(&obj, 0, &mut Vec::new(), &mut out);
        out.into_iter().map(|mor| (obj.clone(), mor)).collect::<Vec<_>>()
    });
    if exceeded.load(Ordering::SeqCst) {
        return Err(Error::BudgetExceeded { budget });
    }
    let mut members: Vec<Functor> = found
        .into_iter()
        .flatten()
        .map(|(obj, mor)| Functor::new(c.clone(), target.clone(), obj, mor).expect("endpoints respected"))
        .filter(|f| check_functor(f).is_fes())
        .collect();
    canonical(&mut members);
    Ok(ParamFamily { source: c, target: m, members })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn terminal_onto_terminal() {
        let t = Arc::new(FinCat::terminal());
        let m = Arc::new(ModelLabeledCat::all_in_all(t.clone()));
        assert_eq!(enumerate_fes(t, m, 1000).unwrap().members.len(), 1);
    }

    #[test]
    fn budget_is_enforced() {
        let c = Arc::new(FinCat::thin(&["a", "b", "c", "d"], |x, y| x <= y));
        let m = Arc::new(ModelLabeledCat::all_in_all(c.clone()));
        assert!(matches!(enumerate_fes(c.clone(), m.clone(), 10), Err(Error::BudgetExceeded { budget: 10 })));
        assert!(enumerate_fes(c, m, 1_000_000).is_ok());
    }
}
