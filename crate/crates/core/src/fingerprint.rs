//! Graded dimension data of Hochschild-type invariants and the equivalence
//! of ℤ-objects it induces.
//!
//! Invariants are supplied as data, one [`GradedDims`] per base object. The
//! coefficient `m_i` of a component is kept as a formal tag beside its
//! dimensions and is never folded into them.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fincat::{FinCat, ObjId};
use crate::zlin::{CompIdx, ZObject};

/// Dimensions in degrees `0..=top`, trailing zeros removed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "Vec<u64>", into = "Vec<u64>")]
pub struct GradedDims {
    dims: Vec<u64>,
}

impl From<Vec<u64>> for GradedDims {
    fn from(v: Vec<u64>) -> Self {
        GradedDims::new(v)
    }
}

impl From<GradedDims> for Vec<u64> {
    fn from(g: GradedDims) -> Self {
        g.dims
    }
}

impl GradedDims {
    pub fn new(mut dims: Vec<u64>) -> GradedDims {
        while dims.last() == Some(&0) {
            dims.pop();
        }
        GradedDims { dims }
    }

    /// The sequence `(1)`.
    pub fn unit() -> GradedDims {
        GradedDims { dims: vec![1] }
    }

    pub fn dims(&self) -> &[u64] {
        &self.dims
    }

    /// Highest degree with nonzero dimension; `None` for the zero sequence.
    pub fn top_degree(&self) -> Option<usize> {
        self.dims.len().checked_sub(1)
    }

    pub fn total(&self) -> u64 {
        self.dims.iter().sum()
    }
}

/// Product of Poincaré polynomials: `r[n] = Σ_{p+q=n} a[p]·b[q]`.
pub fn tensor_dims(a: &GradedDims, b: &GradedDims) -> GradedDims {
    if a.dims.is_empty() || b.dims.is_empty() {
        return GradedDims::new(Vec::new());
    }
    let mut out = vec![0u64; a.dims.len() + b.dims.len() - 1];
    for (p, &x) in a.dims.iter().enumerate() {
        for (q, &y) in b.dims.iter().enumerate() {
            out[p + q] += x * y;
        }
    }
    GradedDims::new(out)
}

pub type FingerprintTable = BTreeMap<ObjId, GradedDims>;

/// `(m_i, fp(X_i))` per component of a ZObject.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ZInvariant {
    pub parts: BTreeMap<CompIdx, (i64, GradedDims)>,
}

impl ZInvariant {
    /// Tensor of the dimensions of the positive-coefficient parts, each once.
    pub fn fold_positive(&self) -> GradedDims {
        self.parts
            .values()
            .filter(|(m, _)| *m > 0)
            .fold(GradedDims::unit(), |acc, (_, d)| tensor_dims(&acc, d))
    }

    /// `⊗ m_i HH(X_i)` as a single sequence. Only defined when every
    /// multiplicity is 1; any other coefficient is a formal tag.
    pub fn evaluate(&self) -> Result<GradedDims> {
        if let Some((&component, &(coefficient, _))) = self.parts.iter().find(|(_, (m, _))| *m != 1) {
            return Err(Error::FormalMultiplicity { component, coefficient });
        }
        Ok(self.fold_positive())
    }
}

pub fn invariant_of(base: &FinCat, x: &ZObject, fp: &FingerprintTable) -> Result<ZInvariant> {
    let parts = x
        .components()
        .map(|(i, xi, m)| {
            let d = fp
                .get(&xi)
                .ok_or_else(|| Error::MissingFingerprint(base.obj_label(xi).to_string()))?;
            Ok((i, (m, d.clone())))
        })
        .collect::<Result<_>>()?;
    Ok(ZInvariant { parts })
}

/// Same index sets, same coefficients, equal dimension sequences per component.
pub fn z_equiv(base: &FinCat, x: &ZObject, y: &ZObject, fp: &FingerprintTable) -> Result<bool> {
    let (a, b) = (invariant_of(base, x, fp)?, invariant_of(base, y, fp)?);
    Ok(a == b)
}
