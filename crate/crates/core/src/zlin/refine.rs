use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Overlap table for one middle component: `(row, column) → m`, with 0-based
/// positions into the row and column partitions.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RefinementTable {
    pub entries: BTreeMap<(usize, usize), i64>,
}

impl RefinementTable {
    pub fn from_entries(entries: impl IntoIterator<Item = ((usize, usize), i64)>) -> RefinementTable {
        let mut map = BTreeMap::new();
        for (k, v) in entries {
            if v != 0 {
                *map.entry(k).or_insert(0) += v;
            }
        }
        RefinementTable { entries: map }
    }

    pub fn row_sums(&self, rows: usize) -> Vec<i64> {
        let mut s = vec![0; rows];
        for (&(a, _), &v) in &self.entries {
            if a < rows {
                s[a] += v;
            }
        }
        s
    }

    pub fn col_sums(&self, cols: usize) -> Vec<i64> {
        let mut s = vec![0; cols];
        for (&(_, b), &v) in &self.entries {
            if b < cols {
                s[b] += v;
            }
        }
        s
    }

    /// Confirm the table reproduces both partitions and stays in range.
    pub fn check_marginals(&self, rows: &[i64], cols: &[i64]) -> Result<()> {
        if let Some(&(a, b)) = self.entries.keys().find(|(a, b)| *a >= rows.len() || *b >= cols.len()) {
            return Err(Error::MarginalMismatch(format!("entry ({a},{b}) is out of range")));
        }
        let (rs, cs) = (self.row_sums(rows.len()), self.col_sums(cols.len()));
        if rs != rows {
            return Err(Error::MarginalMismatch(format!("row sums {rs:?} differ from {rows:?}")));
        }
        if cs != cols {
            return Err(Error::MarginalMismatch(format!("column sums {cs:?} differ from {cols:?}")));
        }
        Ok(())
    }
}

/// Northwest-corner refinement: lay both partitions as consecutive intervals
/// of `[0, |n|)` and record the overlap lengths, signed by `n`.
pub fn interval_refinement(rows: &[i64], cols: &[i64]) -> Result<RefinementTable> {
    let (total_r, total_c): (i64, i64) = (rows.iter().sum(), cols.iter().sum());
    if total_r != total_c {
        return Err(Error::MarginalMismatch(format!(
            "row total {total_r} differs from column total {total_c}"
        )));
    }
    let sign = total_r.signum();
    if rows.iter().chain(cols).any(|&e| e != 0 && e.signum() != sign) {
        return Err(Error::MixedSigns);
    }
    let mut entries = BTreeMap::new();
    let (mut a, mut b) = (0, 0);
    let (mut ra, mut rb) = (rows.first().map_or(0, |v| v.abs()), cols.first().map_or(0, |v| v.abs()));
    while a < rows.len() && b < cols.len() {
        if ra == 0 {
            a += 1;
            ra = rows.get(a).map_or(0, |v| v.abs());
            continue;
        }
        if rb == 0 {
            b += 1;
            rb = cols.get(b).map_or(0, |v| v.abs());
            continue;
        }
        let take = ra.min(rb);
        entries.insert((a, b), sign * take);
        ra -= take;
        rb -= take;
    }
    Ok(RefinementTable { entries })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_based(t: &RefinementTable) -> Vec<((usize, usize), i64)> {
        t.entries.iter().map(|(&(a, b), &v)| ((a + 1, b + 1), v)).collect()
    }

    #[test]
    fn matching_partitions_refine_diagonally() {
        let t = interval_refinement(&[2, 1], &[2, 1]).unwrap();
        assert_eq!(one_based(&t), vec![((1, 1), 2), ((2, 2), 1)]);
    }

    #[test]
    fn single_row_spreads_over_columns() {
        let t = interval_refinement(&[3], &[1, 1, 1]).unwrap();
        assert_eq!(one_based(&t), vec![((1, 1), 1), ((1, 2), 1), ((1, 3), 1)]);
    }

    #[test]
    fn crossing_partitions() {
        let t = interval_refinement(&[1, 2], &[2, 1]).unwrap();
        assert_eq!(one_based(&t), vec![((1, 1), 1), ((2, 1), 1), ((2, 2), 1)]);
    }

    #[test]
    fn negative_coherent_partitions_carry_the_sign() {
        let t = interval_refinement(&[-2, -1], &[-1, -2]).unwrap();
        assert_eq!(one_based(&t), vec![((1, 1), -1), ((1, 2), -1), ((2, 2), -1)]);
        t.check_marginals(&[-2, -1], &[-1, -2]).unwrap();
    }

    #[test]
    fn errors() {
        assert!(matches!(interval_refinement(&[2], &[3]), Err(Error::MarginalMismatch(_))));
        assert_eq!(interval_refinement(&[3, -1], &[2]), Err(Error::MixedSigns));
        let bad = RefinementTable::from_entries([((0, 0), 1)]);
        assert!(bad.check_marginals(&[2], &[2]).is_err());
    }
}
