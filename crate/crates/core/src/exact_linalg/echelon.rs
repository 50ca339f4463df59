//! Column echelon reduction with an optional record of the column operations.
//!
//! Over a field this is Gaussian elimination. Over ℤ only unimodular column
//! operations are used (subtracting integer multiples, and extended-gcd
//! combinations when neither leading entry divides the other), so the kernel
//! vectors form a ℤ-basis of the integer kernel and the echelon columns form
//! a ℤ-basis of the column lattice.

use std::collections::HashMap;

use super::matrix::ExactMatrix;
use super::ring::{ext_gcd, CoefficientRing, Scalar};
use super::sparse::{self, SparseVec};

pub struct ColumnEchelon {
    ring: CoefficientRing,
    rows: usize,
    cols: usize,
    track: bool,
    basis: Vec<SparseVec>,
    transform: Vec<SparseVec>,
    pivot: HashMap<usize, usize>,
    kernel: Vec<SparseVec>,
}

impl ColumnEchelon {
    /// Reduces the columns of `a`, recording transforms (needed for kernels
    /// and for solving in terms of the original columns).
    pub fn new(a: &ExactMatrix) -> Self {
        Self::build(a, true)
    }

    /// Reduces without recording transforms: cheaper, but only the image
    /// lattice is available afterwards.
    pub fn image_only(a: &ExactMatrix) -> Self {
        Self::build(a, false)
    }

    /// An empty reduction of `rows`-dimensional vectors, filled by [`push`](Self::push).
    pub fn empty(ring: CoefficientRing, rows: usize, track: bool) -> Self {
        ColumnEchelon {
            ring,
            rows,
            cols: 0,
            track,
            basis: Vec::new(),
            transform: Vec::new(),
            pivot: HashMap::new(),
            kernel: Vec::new(),
        }
    }

    fn build(a: &ExactMatrix, track: bool) -> Self {
        let mut e = Self::empty(a.ring(), a.rows(), track);
        for c in a.columns() {
            e.push(c.clone());
        }
        e
    }

    /// Adds one more column. Returns true when it enlarged the span.
    pub fn push(&mut self, column: SparseVec) -> bool {
        let ring = self.ring;
        let j = self.cols;
        self.cols += 1;
        let mut cur = column;
        let mut tr: SparseVec = if self.track { vec![(j, Scalar::ONE)] } else { Vec::new() };
        loop {
            let Some(&(lead, a)) = cur.first() else {
                if self.track {
                    self.kernel.push(tr);
                }
                return false;
            };
            let Some(&p) = self.pivot.get(&lead) else {
                let (cur, tr) = self.normalize(cur, tr);
                self.pivot.insert(lead, self.basis.len());
                self.basis.push(cur);
                self.transform.push(tr);
                return true;
            };
            let b = self.basis[p][0].1;
            if let Some(q) = ring.div(a, b) {
                let mq = ring.neg(q);
                cur = sparse::axpy(ring, &cur, mq, &self.basis[p]);
                if self.track {
                    tr = sparse::axpy(ring, &tr, mq, &self.transform[p]);
                }
                continue;
            }
            // Integers, b does not divide a: replace the pivot column by the
            // gcd combination and keep reducing the complementary column.
            let (g, x, y) = ext_gcd(b.numer(), a.numer());
            let (sx, sy) = (Scalar::int(x), Scalar::int(y));
            let (ag, bg) = (Scalar::int(a.numer() / g), Scalar::int(-(b.numer() / g)));
            let new_pivot = sparse::lin_comb(ring, sx, &self.basis[p], sy, &cur);
            let new_cur = sparse::lin_comb(ring, ag, &self.basis[p], bg, &cur);
            if self.track {
                let new_ptr = sparse::lin_comb(ring, sx, &self.transform[p], sy, &tr);
                tr = sparse::lin_comb(ring, ag, &self.transform[p], bg, &tr);
                self.transform[p] = new_ptr;
            }
            self.basis[p] = new_pivot;
            cur = new_cur;
        }
    }

    fn normalize(&self, cur: SparseVec, tr: SparseVec) -> (SparseVec, SparseVec) {
        let ring = self.ring;
        let lead = cur[0].1;
        let f = if ring.is_field() {
            ring.inv(lead).expect("nonzero pivot")
        } else if lead.numer() < 0 {
            Scalar::int(-1)
        } else {
            return (cur, tr);
        };
        (sparse::scale(ring, f, &cur), sparse::scale(ring, f, &tr))
    }

    pub fn ring(&self) -> CoefficientRing {
        self.ring
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Echelon basis of the column span (lattice over ℤ).
    pub fn basis(&self) -> &[SparseVec] {
        &self.basis
    }

    /// Coefficients, over the original columns, of each echelon basis vector.
    pub fn basis_transform(&self) -> &[SparseVec] {
        assert!(self.track, "transforms were not recorded");
        &self.transform
    }

    /// Kernel vectors over the original columns (a ℤ-basis over ℤ).
    pub fn kernel(&self) -> &[SparseVec] {
        assert!(self.track, "transforms were not recorded");
        &self.kernel
    }

    pub fn kernel_matrix(&self) -> ExactMatrix {
        ExactMatrix::from_columns(self.ring, self.cols, self.kernel().to_vec())
    }

    /// Leading rows of the echelon basis, in basis order.
    pub fn pivot_rows(&self) -> Vec<usize> {
        self.basis.iter().map(|c| c[0].0).collect()
    }

    /// Reduces `v` against the echelon basis. Returns the coefficients used
    /// (indexed by echelon basis position) and the remainder, which is zero
    /// exactly when `v` lies in the span.
    pub fn reduce(&self, v: &[(usize, Scalar)]) -> (SparseVec, SparseVec) {
        let ring = self.ring;
        let mut cur = v.to_vec();
        let mut coeffs = Vec::new();
        while let Some(&(lead, a)) = cur.first() {
            let Some(&p) = self.pivot.get(&lead) else { break };
            let Some(q) = ring.div(a, self.basis[p][0].1) else { break };
            coeffs.push((p, q));
            cur = sparse::axpy(ring, &cur, ring.neg(q), &self.basis[p]);
        }
        (sparse::collect(ring, coeffs), cur)
    }

    pub fn contains(&self, v: &[(usize, Scalar)]) -> bool {
        self.reduce(v).1.is_empty()
    }

    /// Solves `A·x = v` for the reduced matrix `A`, if possible.
    pub fn solve(&self, v: &[(usize, Scalar)]) -> Option<SparseVec> {
        let (coeffs, rest) = self.reduce(v);
        if !rest.is_empty() {
            return None;
        }
        let ring = self.ring;
        let tr = self.basis_transform();
        Some(sparse::collect(
            ring,
            coeffs
                .iter()
                .flat_map(|&(p, q)| tr[p].iter().map(move |&(j, t)| (j, ring.mul(q, t)))),
        ))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }
}

/// Basis of the kernel of `a` as the columns of a matrix. Over ℤ the columns
/// form a ℤ-basis of the (saturated) integer kernel.
pub fn kernel_basis(a: &ExactMatrix) -> ExactMatrix {
    ColumnEchelon::new(a).kernel_matrix()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_kernel_is_a_lattice_basis() {
        let z = CoefficientRing::Integers;
        let a = ExactMatrix::from_rows_i64(z, &[vec![2, 3, 4]]);
        let e = ColumnEchelon::new(&a);
        assert_eq!(e.rank(), 1);
        assert_eq!(e.basis()[0], vec![(0, Scalar::int(1))]);
        let k = e.kernel_matrix();
        assert_eq!(k.cols(), 2);
        assert!(a.mul(&k).unwrap().is_zero());
        // (−2, 0, 1)… the kernel lattice has index 1: its 2x2 minors have gcd 1.
        let d = k.to_dense();
        let minors = [(0, 1), (0, 2), (1, 2)].map(|(i, j)| {
            d[i][0].numer() * d[j][1].numer() - d[j][0].numer() * d[i][1].numer()
        });
        assert_eq!(minors.iter().fold(0, |g, &m| super::super::ring::gcd(g, m)), 1);
    }

    #[test]
    fn solve_respects_integrality() {
        let z = CoefficientRing::Integers;
        let a = ExactMatrix::from_rows_i64(z, &[vec![2, 0], vec![0, 1]]);
        let e = ColumnEchelon::new(&a);
        assert_eq!(e.solve(&[(0, Scalar::int(4)), (1, Scalar::int(3))]), Some(vec![(0, Scalar::int(2)), (1, Scalar::int(3))]));
        assert_eq!(e.solve(&[(0, Scalar::int(1))]), None);
        let q = ColumnEchelon::new(&ExactMatrix::from_rows_i64(CoefficientRing::Rationals, &[vec![2, 0], vec![0, 1]]));
        assert!(q.solve(&[(0, Scalar::int(1))]).is_some());
    }
}
