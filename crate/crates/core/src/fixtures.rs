//! Small sites, bases and categories shared by the tests, benches and the
//! bundled CLI documents.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::fincat::{FinCat, MorId, ObjEquiv, ObjId};
use crate::fingerprint::{FingerprintTable, GradedDims};
use crate::site::{generate_topology, CoveringAssignment, Family, LayeredCategory, PointedBase, Square};
use crate::zlin::{enumerate_coherent_hom, Term, ZMorphism, ZObject};

/// A thin category of open sets with meets as chosen limits.
#[derive(Clone, Debug)]
pub struct PosetSite {
    pub category: Arc<FinCat>,
    pub elements: Vec<BTreeSet<char>>,
    /// Families whose sources jointly cover their target.
    pub topology: CoveringAssignment,
    /// Covers by maximal proper subsets, to be closed by [`generate_topology`].
    pub seeds: CoveringAssignment,
}

fn label(set: &BTreeSet<char>) -> String {
    if set.is_empty() {
        "0".into()
    } else {
        set.iter().collect()
    }
}

/// The site on the given opens, each written as its points (`""` is empty).
pub fn open_sets(opens: &[&str]) -> PosetSite {
    let elements: Vec<BTreeSet<char>> = opens.iter().map(|s| s.chars().collect()).collect();
    let labels: Vec<String> = elements.iter().map(label).collect();
    let c = FinCat::thin(&labels, |a, b| elements[a].is_subset(&elements[b])).with_meets();
    let topology = CoveringAssignment::jointly_covering(&c, |x| elements[x.index()].clone());
    let mut seeds = CoveringAssignment::new();
    for x in c.objects() {
        let proper: Vec<MorId> = c
            .objects()
            .filter(|&y| y != x && elements[y.index()].is_subset(&elements[x.index()]))
            .map(|y| c.hom(y, x)[0])
            .collect();
        let maximal: Family = proper
            .iter()
            .copied()
            .filter(|&f| {
                let s = &elements[c.source(f).index()];
                !proper.iter().any(|&g| {
                    let t = &elements[c.source(g).index()];
                    s != t && s.is_subset(t)
                })
            })
            .collect();
        let union: BTreeSet<char> = maximal.iter().flat_map(|&f| elements[c.source(f).index()].clone()).collect();
        if union == elements[x.index()] {
            seeds.insert(x, maximal);
        }
    }
    PosetSite { category: Arc::new(c), elements, topology, seeds }
}

/// Opens of the discrete two-point space `{p, q}`.
pub fn opens2() -> PosetSite {
    open_sets(&["", "p", "q", "pq"])
}

/// Opens of the discrete space `{p, q, r}`.
pub fn opens3() -> PosetSite {
    open_sets(&["", "p", "q", "r", "pq", "pr", "qr", "pqr"])
}

/// The chain `∅ < P < X`.
pub fn chain3() -> PosetSite {
    open_sets(&["", "p", "px"])
}

/// A non-discrete topology on `{p, q, r}` with five opens.
pub fn opens5() -> PosetSite {
    open_sets(&["", "p", "q", "pq", "pqr"])
}

pub fn poset_sites() -> Vec<(&'static str, PosetSite)> {
    vec![("opens2", opens2()), ("chain3", chain3()), ("opens5", opens5()), ("opens3", opens3())]
}

/// `U ∼ V` iff `U ∩ keep = V ∩ keep`.
pub fn projection(site: &PosetSite, keep: &str) -> ObjEquiv {
    let keep: BTreeSet<char> = keep.chars().collect();
    let n = site.elements.len();
    let pairs = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).filter(|&(a, b)| {
        site.elements[a].intersection(&keep).eq(site.elements[b].intersection(&keep))
    });
    ObjEquiv::generated(n, pairs.map(|(a, b)| (ObjId(a as u32), ObjId(b as u32))))
}

/// Relations of type Γ on poset sites, each with a topology.
pub fn gamma_fixtures() -> Vec<(String, PosetSite, ObjEquiv)> {
    let mut out = Vec::new();
    for (name, site) in [("opens2", opens2()), ("opens3", opens3())] {
        let r = ObjEquiv::discrete(site.elements.len());
        out.push((format!("{name}/discrete"), site, r));
    }
    for (name, site, keep) in [("opens2", opens2(), "p"), ("opens3", opens3(), "pq"), ("opens3", opens3(), "p"), ("chain3", chain3(), "p")] {
        let r = projection(&site, keep);
        out.push((format!("{name}/meet-{keep}"), site, r));
    }
    out
}

/// Points are the elements, maps are inclusions, everything residue
/// preserving, etale and open.
pub fn zariski_points(site: &PosetSite) -> PointedBase {
    let c = &*site.category;
    let points: Vec<Vec<String>> = site.elements.iter().map(|e| e.iter().map(|p| p.to_string()).collect()).collect();
    let maps = c
        .morphisms()
        .map(|f| {
            let (s, t) = (&site.elements[c.source(f).index()], &site.elements[c.target(f).index()]);
            s.iter().map(|p| t.iter().position(|q| q == p).expect("inclusion")).collect()
        })
        .collect();
    let residue = c.morphisms().map(|f| (0..site.elements[c.source(f).index()].len()).collect()).collect();
    let all: BTreeSet<MorId> = c.morphisms().collect();
    PointedBase::new(c, points, maps, residue, all.clone(), all).expect("inclusions are functorial")
}

/// Squares `U ∩ V → V, U ∩ V → U, U → X, V → X` for every pair of
/// incomparable opens whose union `X` is open.
pub fn zariski_squares(site: &PosetSite) -> Vec<Square> {
    let c = &*site.category;
    let e = &site.elements;
    let find = |s: &BTreeSet<char>| e.iter().position(|t| t == s).map(|i| ObjId(i as u32));
    let mut out = Vec::new();
    for u in 0..e.len() {
        for v in u + 1..e.len() {
            if e[u].is_subset(&e[v]) || e[v].is_subset(&e[u]) {
                continue;
            }
            let x = e[u].union(&e[v]).copied().collect();
            let w = e[u].intersection(&e[v]).copied().collect();
            if let (Some(x), Some(w)) = (find(&x), find(&w)) {
                let (u, v) = (ObjId(u as u32), ObjId(v as u32));
                out.push(Square { wv: c.hom(w, v)[0], wu: c.hom(w, u)[0], ux: c.hom(u, x)[0], vx: c.hom(v, x)[0] });
            }
        }
    }
    out
}

/// A site whose assignment is generated by its declared squares.
#[derive(Clone, Debug)]
pub struct SquaresSite {
    pub site: PosetSite,
    pub points: PointedBase,
    pub squares: Vec<Square>,
    pub topology: CoveringAssignment,
}

pub fn squares_site(site: PosetSite) -> SquaresSite {
    let c = &*site.category;
    let squares = zariski_squares(&site);
    let seeds = CoveringAssignment::from_families(
        c,
        squares.iter().map(|sq| (c.target(sq.ux), Family::from([sq.ux, sq.vx]))),
    )
    .expect("square legs target X");
    let topology = generate_topology(c, &seeds).expect("ids are valid");
    SquaresSite { points: zariski_points(&site), site, squares, topology }
}

/// `2[X1] + 1[X2]` over a base with etale arrows into both components and
/// a pool of candidate covering members.
#[derive(Clone, Debug)]
pub struct PointedFixture {
    pub category: Arc<FinCat>,
    pub base: PointedBase,
    pub object: ZObject,
    pub pool: Vec<ZMorphism>,
}

pub fn two_component_pointed() -> PointedFixture {
    let names = ["X1", "X2", "U", "V", "W"];
    let edges = [("e", 2, 0), ("h", 3, 0), ("k", 4, 1), ("l", 2, 1), ("m", 3, 1)];
    let c = FinCat::free_on_dag(&names, &edges);
    let pts: [&[&str]; 5] = [&["a", "b"], &["c"], &["u1", "u2"], &["v"], &["w"]];
    let edge_maps: BTreeMap<&str, (Vec<usize>, BTreeSet<usize>)> = BTreeMap::from([
        ("e", (vec![0, 1], BTreeSet::from([0]))),
        ("h", (vec![1], BTreeSet::from([0]))),
        ("k", (vec![0], BTreeSet::from([0]))),
        ("l", (vec![0, 0], BTreeSet::new())),
        ("m", (vec![0], BTreeSet::from([0]))),
    ]);
    let mut maps = Vec::new();
    let mut residue = Vec::new();
    for f in c.morphisms() {
        if c.is_identity(f) {
            let n = pts[c.source(f).index()].len();
            maps.push((0..n).collect());
            residue.push((0..n).collect());
        } else {
            let (m, r) = edge_maps[c.mor_label(f)].clone();
            maps.push(m);
            residue.push(r);
        }
    }
    let points = pts.iter().map(|p| p.iter().map(|s| s.to_string()).collect()).collect();
    let etale: BTreeSet<MorId> = c.morphisms().collect();
    let base = PointedBase::new(&c, points, maps, residue, etale, BTreeSet::new()).expect("consistent point data");
    let o = |l: &str| c.obj_id(l).expect("fixture object");
    let object = ZObject::from_list(&[(o("X1"), 2), (o("X2"), 1)]).expect("nonzero");
    let sources: [&[(&str, i64)]; 8] = [
        &[("U", 2), ("W", 1)],
        &[("V", 2), ("W", 1)],
        &[("U", 1), ("V", 1), ("W", 1)],
        &[("U", 3)],
        &[("V", 3)],
        &[("X1", 2), ("X2", 1)],
        &[("X1", 2), ("W", 1)],
        &[("U", 2), ("X2", 1)],
    ];
    let mut pool = Vec::new();
    for s in sources {
        let parts: Vec<(ObjId, i64)> = s.iter().map(|&(l, m)| (o(l), m)).collect();
        let src = ZObject::from_list(&parts).expect("nonzero");
        pool.extend(enumerate_coherent_hom(&c, &src, &object));
    }
    PointedFixture { category: Arc::new(c), base, object, pool }
}

/// Levels are the discrete opens of growing point sets, each inside the
/// previous one by intersecting with its points.
#[derive(Clone, Debug)]
pub struct LayeredFixture {
    pub layered: LayeredCategory,
    pub sites: Vec<PosetSite>,
}

pub fn layered(points: &[&str]) -> LayeredFixture {
    let sites: Vec<PosetSite> = points
        .iter()
        .map(|p| {
            let chars: Vec<char> = p.chars().collect();
            let mut opens = Vec::new();
            for mask in 0u32..(1 << chars.len()) {
                opens.push((0..chars.len()).filter(|b| mask >> b & 1 == 1).map(|b| chars[b]).collect::<String>());
            }
            opens.sort_by_key(|s| (s.len(), s.clone()));
            let refs: Vec<&str> = opens.iter().map(String::as_str).collect();
            open_sets(&refs)
        })
        .collect();
    let membership = (0..sites.len() - 1)
        .map(|n| {
            let (lo, hi) = (&sites[n], &sites[n + 1]);
            let keep: BTreeSet<char> = points[n].chars().collect();
            hi.elements
                .iter()
                .map(|e| {
                    let cut: BTreeSet<char> = e.intersection(&keep).copied().collect();
                    ObjId(lo.elements.iter().position(|l| *l == cut).expect("subset of lower points") as u32)
                })
                .collect()
        })
        .collect();
    let layered = LayeredCategory::new(sites.iter().map(|s| s.category.clone()).collect(), membership)
        .expect("membership is total");
    LayeredFixture { layered, sites }
}

/// The two-level fixture: opens of `{p, q}` below opens of `{p, q, r}`.
pub fn two_level() -> LayeredFixture {
    layered(&["pq", "pqr"])
}

/// `φ: 2[X1]+1[X2] → 3[Y]` and `ψ: 3[Y] → 2[Z1]+1[Z2]`, both splitting
/// as `(2, 1)`.
pub fn split_compose_example() -> (FinCat, ZMorphism, ZMorphism) {
    let c = FinCat::free_on_dag(&["X1", "X2", "Y", "Z1", "Z2"], &[("f1", 0, 2), ("f2", 1, 2), ("g1", 2, 3), ("g2", 2, 4)]);
    let m = |l: &str| c.mor_id(l).expect("fixture arrow");
    let x = ZObject::from_list(&[(ObjId(0), 2), (ObjId(1), 1)]).expect("nonzero");
    let y = ZObject::single(ObjId(2), 3).expect("nonzero");
    let z = ZObject::from_list(&[(ObjId(3), 2), (ObjId(4), 1)]).expect("nonzero");
    let phi = ZMorphism::new(x, y.clone(), [Term { i: 1, j: 1, coeff: 2, arrow: m("f1") }, Term { i: 2, j: 1, coeff: 1, arrow: m("f2") }])
        .expect("distinct terms");
    let psi = ZMorphism::new(y, z, [Term { i: 1, j: 1, coeff: 2, arrow: m("g1") }, Term { i: 1, j: 2, coeff: 1, arrow: m("g2") }])
        .expect("distinct terms");
    (c, psi, phi)
}

/// `A ≅ B` with only identities and the two inverse isomorphisms.
pub fn iso_pair() -> FinCat {
    connected_groupoid(&["A", "B"], 1)
}

/// The connected groupoid on `objects` with automorphism group `ℤ/order`.
/// Morphisms `x → y` are labelled `x->y#g`, with `id_x` for `g = 0` on loops.
pub fn connected_groupoid(objects: &[&str], order: u32) -> FinCat {
    let name = |x: &str, y: &str, g: u32| {
        if x == y && g == 0 {
            format!("id_{x}")
        } else {
            format!("{x}->{y}#{g}")
        }
    };
    let mut b = FinCat::builder();
    for x in objects {
        b.object(x);
    }
    for x in objects {
        for y in objects {
            for g in 0..order {
                b.morphism(&name(x, y, g), x, y);
            }
        }
        b.identity(x, &name(x, x, 0));
    }
    for x in objects {
        for y in objects {
            for z in objects {
                for g in 0..order {
                    for h in 0..order {
                        b.compose(&name(y, z, h), &name(x, y, g), &name(x, z, (g + h) % order));
                    }
                }
            }
        }
    }
    b.build().expect("groupoid tables are well formed")
}

/// Graded dimensions for the objects of [`fingerprint_category`].
pub fn fingerprint_table(c: &FinCat) -> FingerprintTable {
    let dims: [(&str, &[u64]); 5] = [("A", &[1, 2]), ("A'", &[1, 2]), ("B", &[1, 0, 1]), ("B'", &[1, 0, 1]), ("C", &[2, 1])];
    dims.iter()
        .map(|&(l, d)| (c.obj_id(l).expect("fixture object"), GradedDims::new(d.to_vec())))
        .collect()
}

pub fn fingerprint_category() -> FinCat {
    FinCat::free_on_dag(&["A", "A'", "B", "B'", "C"], &[])
}

/// ZObjects over [`fingerprint_category`] with several coincidences of
/// coefficients and fingerprints.
pub fn fingerprint_objects(c: &FinCat) -> Vec<ZObject> {
    let o = |l: &str| c.obj_id(l).expect("fixture object");
    let lists: [&[(&str, i64)]; 6] = [
        &[("A", 2), ("B", 1)],
        &[("A'", 2), ("B'", 1)],
        &[("A", 2), ("B'", 1)],
        &[("A", 1), ("B", 1)],
        &[("C", -1), ("A", 1)],
        &[("C", -1), ("A'", 1)],
    ];
    lists
        .iter()
        .map(|l| ZObject::from_list(&l.iter().map(|&(x, m)| (o(x), m)).collect::<Vec<_>>()).expect("nonzero"))
        .collect()
}
