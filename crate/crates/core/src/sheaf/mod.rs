//! Presheaves of finite sets and the sheaf condition.
//!
//! Sections are indexed `0..|F(X)|` with display labels; the restriction
//! along `f: U → X` is stored as the table `F(f): F(X) → F(U)`.

mod squares;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fincat::{FinCat, MorId, ObjId};
use crate::par;
use crate::site::{pullback_along, CoveringAssignment, Family};
use crate::verdict::Verdict;
use crate::zlin::Linearization;

pub use squares::{cartesian_square_check, squares_vs_sheaf_probe, CartesianReport, SquaresProbeReport};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Presheaf {
    sections: Vec<Vec<String>>,
    restrictions: Vec<Vec<usize>>,
}

impl Presheaf {
    /// Validate sizes and functoriality: `F(id) = id` and `F(g∘f) = F(f)∘F(g)`.
    pub fn new(c: &FinCat, sections: Vec<Vec<String>>, restrictions: Vec<Vec<usize>>) -> Result<Presheaf> {
        if sections.len() != c.num_objects() || restrictions.len() != c.num_morphisms() {
            return Err(Error::Structural("presheaf does not cover every object and morphism".into()));
        }
        for f in c.morphisms() {
            let r = &restrictions[f.index()];
            let (s, t) = (c.source(f).index(), c.target(f).index());
            if r.len() != sections[t].len() || r.iter().any(|&v| v >= sections[s].len()) {
                return Err(Error::Structural(format!(
                    "restriction along `{}` is not a function F(target) → F(source)",
                    c.mor_label(f)
                )));
            }
        }
        for x in c.objects() {
            let r = &restrictions[c.identity(x).index()];
            if r.iter().enumerate().any(|(i, &v)| i != v) {
                return Err(Error::NotFunctorial(format!("F(id_{}) is not the identity", c.obj_label(x))));
            }
        }
        for (g, f, h) in c.composition_table() {
            let (rf, rg) = (&restrictions[f.index()], &restrictions[g.index()]);
            if rg.iter().map(|&v| rf[v]).ne(restrictions[h.index()].iter().copied()) {
                return Err(Error::NotFunctorial(format!(
                    "F({}) differs from F({})∘F({})",
                    c.mor_label(h),
                    c.mor_label(f),
                    c.mor_label(g)
                )));
            }
        }
        Ok(Presheaf { sections, restrictions })
    }

    /// Sections labeled `s0, s1, …`.
    pub fn from_sizes(c: &FinCat, sizes: &[usize], restrictions: Vec<Vec<usize>>) -> Result<Presheaf> {
        let sections = sizes.iter().map(|&n| (0..n).map(|i| format!("s{i}")).collect()).collect();
        Presheaf::new(c, sections, restrictions)
    }

    /// The presheaf with the same set `labels` everywhere and identity restrictions.
    pub fn constant(c: &FinCat, labels: &[&str]) -> Presheaf {
        let sections = vec![labels.iter().map(|s| s.to_string()).collect(); c.num_objects()];
        let restrictions = vec![(0..labels.len()).collect(); c.num_morphisms()];
        Presheaf::new(c, sections, restrictions).expect("constant presheaf is functorial")
    }

    pub fn num_sections(&self, x: ObjId) -> usize {
        self.sections[x.index()].len()
    }

    pub fn sections(&self, x: ObjId) -> &[String] {
        &self.sections[x.index()]
    }

    pub fn restriction(&self, f: MorId) -> &[usize] {
        &self.restrictions[f.index()]
    }

    pub fn restrict(&self, f: MorId, s: usize) -> usize {
        self.restrictions[f.index()][s]
    }

    fn check_over(&self, c: &FinCat) -> Result<()> {
        if self.sections.len() != c.num_objects() || self.restrictions.len() != c.num_morphisms() {
            return Err(Error::Structural("presheaf is over a different category".into()));
        }
        Ok(())
    }
}

/// `h_X`: sections over `U` are the morphisms `U → X`, restricted by precomposition.
pub fn representable(c: &FinCat, x: ObjId) -> Presheaf {
    let sections: Vec<Vec<String>> = c
        .objects()
        .map(|u| c.hom(u, x).iter().map(|&f| c.mor_label(f).to_string()).collect())
        .collect();
    let restrictions = c
        .morphisms()
        .map(|f| {
            let (v, u) = (c.source(f), c.target(f));
            c.hom(u, x)
                .iter()
                .map(|&s| {
                    let h = c.compose(s, f).expect("composable by endpoints");
                    c.hom(v, x).iter().position(|&t| t == h).expect("composite lands in Hom(V, X)")
                })
                .collect()
        })
        .collect();
    Presheaf::new(c, sections, restrictions).expect("representables are functorial on valid categories")
}

/// Every presheaf with `|F(X)| ≤ max_sections`, in canonical order. Only
/// valid (functorial) tables are returned.
pub fn enumerate_presheaves(c: &FinCat, max_sections: usize) -> Vec<Presheaf> {
    let n = c.num_objects();
    let mut out = Vec::new();
    let mut sizes = vec![0usize; n];
    loop {
        let free: Vec<MorId> = c.morphisms().filter(|&f| !c.is_identity(f)).collect();
        let mut tables: Vec<Vec<usize>> = c
            .morphisms()
            .map(|f| if c.is_identity(f) { (0..sizes[c.source(f).index()]).collect() } else { Vec::new() })
            .collect();
        enumerate_tables(c, &sizes, &free, 0, &mut tables, &mut out);
        let mut k = 0;
        while k < n && sizes[k] == max_sections {
            sizes[k] = 0;
            k += 1;
        }
        if k == n {
            break;
        }
        sizes[k] += 1;
    }
    out
}

fn enumerate_tables(
    c: &FinCat,
    sizes: &[usize],
    free: &[MorId],
    at: usize,
    tables: &mut Vec<Vec<usize>>,
    out: &mut Vec<Presheaf>,
) {
    if at == free.len() {
        if let Ok(p) = Presheaf::from_sizes(c, sizes, tables.clone()) {
            out.push(p);
        }
        return;
    }
    let f = free[at];
    let (dom, cod) = (sizes[c.target(f).index()], sizes[c.source(f).index()]);
    if dom > 0 && cod == 0 {
        return;
    }
    let count = cod.pow(dom as u32);
    for code in 0..count.max(1) {
        let mut t = Vec::with_capacity(dom);
        let mut rest = code;
        for _ in 0..dom {
            t.push(rest % cod);
            rest /= cod;
        }
        tables[f.index()] = t;
        enumerate_tables(c, sizes, free, at + 1, tables, out);
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "failure", rename_all = "snake_case")]
pub enum SheafFailure {
    /// Two global sections agree on every member.
    NotSeparated { object: ObjId, family: Family, sections: (usize, usize) },
    /// A matching family with no gluing, one section per member in family order.
    NotGlued { object: ObjId, family: Family, matching: Vec<usize> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SheafReport {
    pub verdict: Verdict,
    pub failures: Vec<SheafFailure>,
    /// Member pairs `(f_α, f_β)` whose pullback is not declared.
    pub unverifiable: Vec<(MorId, MorId)>,
}

impl SheafReport {
    pub fn is_sheaf(&self) -> bool {
        self.verdict.passed()
    }
}

/// Matching families for `members`, found by backtracking: a tuple is
/// extended one member at a time and checked against every earlier member.
fn matching_families(c: &FinCat, f: &Presheaf, members: &[MorId], cones: &[Vec<(MorId, MorId)>]) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(
        c: &FinCat,
        f: &Presheaf,
        members: &[MorId],
        cones: &[Vec<(MorId, MorId)>],
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let a = cur.len();
        if a == members.len() {
            out.push(cur.clone());
            return;
        }
        for s in 0..f.num_sections(c.source(members[a])) {
            cur.push(s);
            let ok = (0..=a).all(|b| {
                let (p1, p2) = cones[a][b];
                f.restrict(p1, cur[a]) == f.restrict(p2, cur[b])
            });
            if ok {
                rec(c, f, members, cones, cur, out);
            }
            cur.pop();
        }
    }
    rec(c, f, members, cones, &mut cur, &mut out);
    out
}

fn check_family(c: &FinCat, f: &Presheaf, x: ObjId, family: &Family) -> std::result::Result<Vec<SheafFailure>, Vec<(MorId, MorId)>> {
    let members: Vec<MorId> = family.iter().copied().collect();
    let mut cones = vec![Vec::new(); members.len()];
    let mut missing = Vec::new();
    for a in 0..members.len() {
        for b in 0..=a {
            match pullback_along(c, members[a], members[b]) {
                Some(cone) => cones[a].push((cone.first, cone.second)),
                None => missing.push((members[a], members[b])),
            }
        }
    }
    if !missing.is_empty() {
        return Err(missing);
    }
    let mut failures = Vec::new();
    let image: Vec<Vec<usize>> = (0..f.num_sections(x))
        .map(|s| members.iter().map(|&m| f.restrict(m, s)).collect())
        .collect();
    for s in 0..image.len() {
        if let Some(t) = (s + 1..image.len()).find(|&t| image[t] == image[s]) {
            failures.push(SheafFailure::NotSeparated { object: x, family: family.clone(), sections: (s, t) });
        }
    }
    for m in matching_families(c, f, &members, &cones) {
        if !image.contains(&m) {
            failures.push(SheafFailure::NotGlued { object: x, family: family.clone(), matching: m });
        }
    }
    Ok(failures)
}

/// For every covering family, `F(X) → {matching families}` must be a bijection.
pub fn sheaf_check(f: &Presheaf, c: &FinCat, k: &CoveringAssignment) -> Result<SheafReport> {
    f.check_over(c)?;
    let items: Vec<(ObjId, &Family)> = k.iter().collect();
    let results = par::map(&items, |&(x, fam)| check_family(c, f, x, fam));
    let (mut failures, mut unverifiable) = (Vec::new(), Vec::new());
    for r in results {
        match r {
            Ok(fs) => failures.extend(fs),
            Err(m) => unverifiable.extend(m),
        }
    }
    Ok(SheafReport {
        verdict: Verdict::summarize(!failures.is_empty(), !unverifiable.is_empty()),
        failures,
        unverifiable,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdditivityReport {
    pub holds: bool,
    pub whole: usize,
    /// `Π_i |F(m_i[X_i])|`.
    pub product: usize,
    /// Two sections with the same image, when the map is not injective.
    pub collision: Option<(usize, usize)>,
}

/// `F(Σ m_i[X_i]) → Π_i F(m_i[X_i])`, restricting along the summand
/// inclusions of the linearization, must be a bijection.
pub fn additivity_check(f: &Presheaf, base: &FinCat, lin: &Linearization, x: ObjId) -> Result<AdditivityReport> {
    f.check_over(&lin.category)?;
    let parts = lin.summands(base, x)?;
    let image: Vec<Vec<usize>> = (0..f.num_sections(x))
        .map(|s| parts.iter().map(|&(_, _, inc)| f.restrict(inc, s)).collect())
        .collect();
    let product: usize = parts.iter().map(|&(_, p, _)| f.num_sections(p)).product();
    let mut collision = None;
    'outer: for s in 0..image.len() {
        for t in s + 1..image.len() {
            if image[s] == image[t] {
                collision = Some((s, t));
                break 'outer;
            }
        }
    }
    let holds = collision.is_none() && image.len() == product;
    Ok(AdditivityReport { holds, whole: image.len(), product, collision })
}
