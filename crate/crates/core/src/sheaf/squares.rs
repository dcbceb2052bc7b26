use serde::Serialize;

use super::{sheaf_check, Presheaf, SheafReport};
use crate::error::Result;
use crate::fincat::FinCat;
use crate::site::{generate_topology, CoveringAssignment, Family, Square};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CartesianReport {
    pub holds: bool,
    /// Two sections over X with the same image in `F(U) ×_F(W) F(V)`.
    pub collision: Option<(usize, usize)>,
    /// A compatible pair `(a ∈ F(U), b ∈ F(V))` not hit from `F(X)`.
    pub missed: Option<(usize, usize)>,
}

/// `F(X) → F(U) ×_F(W) F(V)` must be a bijection.
pub fn cartesian_square_check(f: &Presheaf, c: &FinCat, sq: &Square) -> Result<CartesianReport> {
    sq.validate(c)?;
    f.check_over(c)?;
    let [_, v, u, x] = sq.objects(c);
    let image: Vec<(usize, usize)> = (0..f.num_sections(x))
        .map(|s| (f.restrict(sq.ux, s), f.restrict(sq.vx, s)))
        .collect();
    let mut collision = None;
    'outer: for s in 0..image.len() {
        for t in s + 1..image.len() {
            if image[s] == image[t] {
                collision = Some((s, t));
                break 'outer;
            }
        }
    }
    let mut missed = None;
    'search: for a in 0..f.num_sections(u) {
        for b in 0..f.num_sections(v) {
            if f.restrict(sq.wu, a) == f.restrict(sq.wv, b) && !image.contains(&(a, b)) {
                missed = Some((a, b));
                break 'search;
            }
        }
    }
    Ok(CartesianReport { holds: collision.is_none() && missed.is_none(), collision, missed })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SquaresProbeReport {
    pub sheaf: SheafReport,
    pub squares: Vec<CartesianReport>,
    pub cartesian: bool,
    pub agree: bool,
    /// The caller's claim that the squares generate the topology.
    pub asserted: bool,
    /// Whether closing the square families reproduces the assignment.
    pub assertion_supported: bool,
}

/// Compare sheafhood with cartesianness on `squares`. The assertion that
/// the squares generate `k` is recorded and checked by closing the square
/// families `{U → X, V → X}` under the topology axioms.
pub fn squares_vs_sheaf_probe(
    f: &Presheaf,
    c: &FinCat,
    k: &CoveringAssignment,
    squares: &[Square],
    asserted: bool,
) -> Result<SquaresProbeReport> {
    let sheaf = sheaf_check(f, c, k)?;
    let reports = squares.iter().map(|sq| cartesian_square_check(f, c, sq)).collect::<Result<Vec<_>>>()?;
    let cartesian = reports.iter().all(|r| r.holds);
    let seeds = CoveringAssignment::from_families(
        c,
        squares.iter().map(|sq| (c.target(sq.ux), Family::from([sq.ux, sq.vx]))),
    )?;
    let generated = generate_topology(c, &seeds)?;
    Ok(SquaresProbeReport {
        agree: sheaf.is_sheaf() == cartesian,
        sheaf,
        squares: reports,
        cartesian,
        asserted,
        assertion_supported: generated == *k,
    })
}
