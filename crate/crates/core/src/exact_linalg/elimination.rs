//! Rank and invariant factors by sparse two-sided elimination.
//!
//! Pivots are taken greedily from short rows (units only over ℤ). Each pivot
//! contributes an invariant factor 1; whatever remains over ℤ is a small core
//! without unit entries, finished by a dense Smith reduction.

use std::collections::HashMap;

use super::matrix::ExactMatrix;
use super::ring::CoefficientRing;
use super::smith::dense_invariant_factors;
use super::sparse::{self, SparseVec};

pub(crate) struct Eliminated {
    pub unit_pivots: usize,
    /// Remaining nonzero rows (over ℤ only), each a sparse row vector.
    pub core: Vec<SparseVec>,
}

pub(crate) fn eliminate(a: &ExactMatrix) -> Eliminated {
    let ring = a.ring();
    let t = a.transpose();
    let mut rows: Vec<SparseVec> = t.into_columns();
    let mut col_rows: Vec<Vec<usize>> = vec![Vec::new(); a.cols()];
    for (i, r) in rows.iter().enumerate() {
        for &(c, _) in r {
            col_rows[c].push(i);
        }
    }
    let mut active: Vec<bool> = rows.iter().map(|r| !r.is_empty()).collect();
    let mut pivots = 0;
    loop {
        let mut order: Vec<usize> = (0..rows.len()).filter(|&i| active[i]).collect();
        order.sort_by_key(|&i| rows[i].len());
        let mut progress = false;
        for r in order {
            if !active[r] {
                continue;
            }
            if rows[r].is_empty() {
                active[r] = false;
                continue;
            }
            let choice = rows[r]
                .iter()
                .filter(|&&(_, v)| ring.is_unit(v))
                .min_by_key(|&&(c, _)| col_rows[c].len())
                .copied();
            let Some((c, v)) = choice else { continue };
            let vinv = ring.inv(v).expect("unit pivot");
            let pivot_row = std::mem::take(&mut rows[r]);
            active[r] = false;
            let mut touched = std::mem::take(&mut col_rows[c]);
            touched.sort_unstable();
            touched.dedup();
            for i in touched {
                if i == r || !active[i] {
                    continue;
                }
                let aic = sparse::get(&rows[i], c);
                if aic.is_zero() {
                    continue;
                }
                let f = ring.neg(ring.mul(aic, vinv));
                let old = std::mem::take(&mut rows[i]);
                let new = sparse::axpy(ring, &old, f, &pivot_row);
                for &(k, _) in &pivot_row {
                    if k != c && sparse::get(&old, k).is_zero() && !sparse::get(&new, k).is_zero() {
                        col_rows[k].push(i);
                    }
                }
                if new.is_empty() {
                    active[i] = false;
                }
                rows[i] = new;
            }
            pivots += 1;
            progress = true;
        }
        if !progress {
            break;
        }
    }
    let core = rows
        .into_iter()
        .enumerate()
        .filter(|(i, r)| active[*i] && !r.is_empty())
        .map(|(_, r)| r)
        .collect();
    Eliminated {
        unit_pivots: pivots,
        core,
    }
}

/// Rank over the fraction field (ℚ for integer input) or over F_p.
pub fn rank(a: &ExactMatrix) -> usize {
    let e = eliminate(a);
    if e.core.is_empty() {
        return e.unit_pivots;
    }
    e.unit_pivots + invariant_core(&e.core).len()
}

/// Nonzero invariant factors of an integer matrix, in divisibility order.
pub(crate) fn invariant_factors(a: &ExactMatrix) -> Vec<i64> {
    debug_assert_eq!(a.ring(), CoefficientRing::Integers);
    let e = eliminate(a);
    let mut out = vec![1; e.unit_pivots];
    if !e.core.is_empty() {
        out.extend(invariant_core(&e.core));
    }
    out
}

fn invariant_core(core: &[SparseVec]) -> Vec<i64> {
    let mut cols: HashMap<usize, usize> = HashMap::new();
    for r in core {
        for &(c, _) in r {
            let n = cols.len();
            cols.entry(c).or_insert(n);
        }
    }
    let width = cols.len();
    let dense: Vec<Vec<i64>> = core
        .iter()
        .map(|r| {
            let mut row = vec![0i64; width];
            for &(c, v) in r {
                row[cols[&c]] = v.numer();
            }
            row
        })
        .collect();
    dense_invariant_factors(dense, width)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_examples() {
        let q = CoefficientRing::Rationals;
        assert_eq!(rank(&ExactMatrix::identity(q, 3)), 3);
        let f2 = CoefficientRing::PrimeField(2);
        assert_eq!(rank(&ExactMatrix::from_rows_i64(f2, &[vec![1, 1], vec![1, 1]])), 1);
        let z = CoefficientRing::Integers;
        assert_eq!(rank(&ExactMatrix::from_rows_i64(z, &[vec![2, 4], vec![4, 6]])), 2);
    }

    #[test]
    fn core_handles_non_unit_entries() {
        let z = CoefficientRing::Integers;
        let a = ExactMatrix::from_rows_i64(z, &[vec![2, 0, 0], vec![0, 3, 0], vec![1, 0, 0]]);
        assert_eq!(invariant_factors(&a), vec![1, 3]);
        let b = ExactMatrix::from_rows_i64(z, &[vec![2, 4], vec![6, 8]]);
        assert_eq!(invariant_factors(&b), vec![2, 4]);
    }
}
