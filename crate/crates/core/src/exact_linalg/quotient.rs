//! Quotients of a free module by the span of sparse relation rows.
//!
//! Rows are brought into reduced echelon form with unit pivots, chosen in
//! short rows and in rarely used columns to limit fill-in. Over ℤ, rows left
//! without a unit entry form a small core that is finished by a Smith form:
//! nontrivial invariant factors mean the quotient has torsion.

use std::collections::{BTreeMap, HashMap};

use super::echelon::ColumnEchelon;
use super::matrix::ExactMatrix;
use super::ring::{CoefficientRing, Scalar};
use super::smith::smith_normal_form;
use super::sparse::{self, SparseVec};

/// The quotient of `ring^cols` by a submodule, with chosen basis lifts.
#[derive(Clone, Debug)]
pub struct QuotientModule {
    ring: CoefficientRing,
    cols: usize,
    /// Pivot column → reduced row (pivot coefficient 1, other entries in
    /// non-pivot columns only).
    pivots: HashMap<usize, SparseVec>,
    /// Quotient coordinates of each non-pivot column.
    coords: HashMap<usize, SparseVec>,
    lifts: Vec<SparseVec>,
}

/// Result of a quotient computation over ℤ that found torsion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsionFound(pub Vec<i64>);

impl QuotientModule {
    /// `ring^cols / span(rows)`. Fails only over ℤ, when the quotient is not
    /// free.
    pub fn new(ring: CoefficientRing, cols: usize, rows: Vec<SparseVec>) -> Result<Self, TorsionFound> {
        let (pivots, core) = gauss_jordan(ring, cols, rows);
        let mut coords: HashMap<usize, SparseVec> = HashMap::new();
        let mut lifts = Vec::new();
        let core_cols: Vec<usize> = {
            let mut c: Vec<usize> = core.iter().flat_map(|r| r.iter().map(|&(j, _)| j)).collect();
            c.sort_unstable();
            c.dedup();
            c
        };
        for j in 0..cols {
            if pivots.contains_key(&j) || core_cols.binary_search(&j).is_ok() {
                continue;
            }
            coords.insert(j, vec![(lifts.len(), Scalar::ONE)]);
            lifts.push(vec![(j, Scalar::ONE)]);
        }
        if !core.is_empty() {
            // U·C·V = diag(1, …, 1, 0, …). The relation lattice, spanned by the
            // rows of C, becomes the first r coordinates of z = Vᵀx, so the
            // quotient coordinates are the remaining ones and the lifts are
            // the matching columns of V⁻ᵀ.
            let local: HashMap<usize, usize> = core_cols.iter().enumerate().map(|(a, &b)| (b, a)).collect();
            let mut core_columns: Vec<SparseVec> = vec![Vec::new(); core_cols.len()];
            for (i, r) in core.iter().enumerate() {
                for &(j, v) in r {
                    core_columns[local[&j]].push((i, v));
                }
            }
            let c = ExactMatrix::from_columns(ring, core.len(), core_columns);
            let snf = smith_normal_form(&c).expect("core rows only arise over the integers");
            let factors = snf.invariant_factors();
            let torsion: Vec<i64> = factors
                .iter()
                .filter(|f| !num_traits::One::is_one(*f))
                .map(|f| num_traits::ToPrimitive::to_i64(f).expect("torsion coefficient fits in 64 bits"))
                .collect();
            if !torsion.is_empty() {
                return Err(TorsionFound(torsion));
            }
            let r = factors.len();
            let vt = snf.v.to_exact().expect("core transforms fit in 64 bits").transpose();
            let base = lifts.len();
            for (a, &j) in core_cols.iter().enumerate() {
                coords.insert(
                    j,
                    vt.column(a)
                        .iter()
                        .filter(|&&(t, _)| t >= r)
                        .map(|&(t, x)| (base + t - r, x))
                        .collect(),
                );
            }
            // Columns of V⁻ᵀ: solve Vᵀ·y = e_t.
            let inv = ColumnEchelon::new(&vt);
            for t in r..core_cols.len() {
                let y = inv.solve(&[(t, Scalar::ONE)]).expect("V is unimodular");
                lifts.push(y.into_iter().map(|(a, x)| (core_cols[a], x)).collect());
            }
        }
        Ok(QuotientModule {
            ring,
            cols,
            pivots,
            coords,
            lifts,
        })
    }

    pub fn rank(&self) -> usize {
        self.lifts.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.cols
    }

    /// Representatives of the quotient basis in the ambient module.
    pub fn lifts(&self) -> &[SparseVec] {
        &self.lifts
    }

    /// Quotient coordinates of an ambient vector.
    pub fn project(&self, v: &[(usize, Scalar)]) -> SparseVec {
        let ring = self.ring;
        let mut terms: Vec<(usize, Scalar)> = Vec::new();
        for &(j, x) in v {
            if let Some(row) = self.pivots.get(&j) {
                // x_j ≡ −Σ row_k x_k modulo the relation.
                for &(k, y) in row {
                    if k == j {
                        continue;
                    }
                    let f = ring.neg(ring.mul(x, y));
                    for &(t, z) in &self.coords[&k] {
                        terms.push((t, ring.mul(f, z)));
                    }
                }
            } else {
                for &(t, z) in &self.coords[&j] {
                    terms.push((t, ring.mul(x, z)));
                }
            }
        }
        sparse::collect(ring, terms)
    }

    /// Whether the ambient vector lies in the submodule.
    pub fn is_relation(&self, v: &[(usize, Scalar)]) -> bool {
        self.project(v).is_empty()
    }
}

/// Gauss–Jordan elimination with unit pivots. Returns the reduced pivot rows
/// by pivot column and the rows that have no unit entry left.
fn gauss_jordan(ring: CoefficientRing, cols: usize, rows: Vec<SparseVec>) -> (HashMap<usize, SparseVec>, Vec<SparseVec>) {
    let mut rows: Vec<SparseVec> = rows.into_iter().map(|r| sparse::collect(ring, r)).collect();
    let mut col_rows: Vec<Vec<usize>> = vec![Vec::new(); cols];
    for (i, r) in rows.iter().enumerate() {
        for &(c, _) in r {
            col_rows[c].push(i);
        }
    }
    let mut is_pivot_row = vec![false; rows.len()];
    let mut pivot_of: BTreeMap<usize, usize> = BTreeMap::new();
    loop {
        let mut order: Vec<usize> = (0..rows.len())
            .filter(|&i| !is_pivot_row[i] && !rows[i].is_empty())
            .collect();
        order.sort_by_key(|&i| rows[i].len());
        let mut progress = false;
        for r in order {
            if is_pivot_row[r] || rows[r].is_empty() {
                continue;
            }
            let choice = rows[r]
                .iter()
                .filter(|&&(_, v)| ring.is_unit(v))
                .min_by_key(|&&(c, _)| (col_rows[c].len(), c))
                .copied();
            let Some((c, v)) = choice else { continue };
            let vinv = ring.inv(v).expect("unit pivot");
            let pivot_row = sparse::scale(ring, vinv, &rows[r]);
            rows[r] = pivot_row.clone();
            is_pivot_row[r] = true;
            pivot_of.insert(c, r);
            let mut touched = std::mem::take(&mut col_rows[c]);
            touched.sort_unstable();
            touched.dedup();
            for i in touched {
                if i == r {
                    continue;
                }
                let aic = sparse::get(&rows[i], c);
                if aic.is_zero() {
                    continue;
                }
                let old = std::mem::take(&mut rows[i]);
                let new = sparse::axpy(ring, &old, ring.neg(aic), &pivot_row);
                for &(k, _) in &pivot_row {
                    if k != c && sparse::get(&old, k).is_zero() && !sparse::get(&new, k).is_zero() {
                        col_rows[k].push(i);
                    }
                }
                rows[i] = new;
            }
            col_rows[c] = vec![r];
            progress = true;
        }
        if !progress {
            break;
        }
    }
    let pivots = pivot_of.iter().map(|(&c, &r)| (c, rows[r].clone())).collect();
    let core = (0..rows.len())
        .filter(|&i| !is_pivot_row[i] && !rows[i].is_empty())
        .map(|i| rows[i].clone())
        .collect();
    (pivots, core)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(terms: &[(usize, i64)]) -> SparseVec {
        terms.iter().map(|&(i, x)| (i, Scalar::int(x))).collect()
    }

    #[test]
    fn two_term_relations_identify_columns() {
        let q = CoefficientRing::Rationals;
        let m = QuotientModule::new(q, 4, vec![v(&[(0, 1), (1, -1)]), v(&[(1, 1), (2, 1)])]).unwrap();
        assert_eq!(m.rank(), 2);
        let p0 = m.project(&v(&[(0, 1)]));
        let p2 = m.project(&v(&[(2, 1)]));
        assert_eq!(m.project(&v(&[(0, 1), (2, 1)])), Vec::new());
        assert_eq!(sparse::neg(q, &p0), p2);
        for l in m.lifts() {
            assert_eq!(m.project(l).len(), 1);
        }
    }

    #[test]
    fn integer_torsion_is_detected() {
        let z = CoefficientRing::Integers;
        assert_eq!(QuotientModule::new(z, 2, vec![v(&[(0, 2)])]).unwrap_err(), TorsionFound(vec![2]));
        // 2x + 3y = 0 has no unit entry but a free quotient.
        let m = QuotientModule::new(z, 2, vec![v(&[(0, 2), (1, 3)])]).unwrap();
        assert_eq!(m.rank(), 1);
        assert!(m.is_relation(&v(&[(0, 2), (1, 3)])));
        assert_eq!(m.project(&m.lifts()[0]), vec![(0, Scalar::ONE)]);
        let f = QuotientModule::new(CoefficientRing::PrimeField(2), 2, vec![v(&[(0, 1)])]).unwrap();
        assert_eq!(f.rank(), 1);
    }
}
