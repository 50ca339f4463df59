use std::fmt;

use serde::{Deserialize, Serialize};

use super::ring::{CoefficientRing, Scalar};
use super::sparse::{self, SparseVec};
use crate::error::{OpkError, Result};

/// A sparse matrix over a coefficient ring, stored column by column.
///
/// Column `j` is the image of the `j`-th source basis vector, which is how
/// boundary maps are naturally produced.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactMatrix {
    ring: CoefficientRing,
    rows: usize,
    cols: Vec<SparseVec>,
}

impl ExactMatrix {
    pub fn zero(ring: CoefficientRing, rows: usize, cols: usize) -> Self {
        ExactMatrix {
            ring,
            rows,
            cols: vec![Vec::new(); cols],
        }
    }

    pub fn identity(ring: CoefficientRing, n: usize) -> Self {
        ExactMatrix {
            ring,
            rows: n,
            cols: (0..n).map(|i| vec![(i, Scalar::ONE)]).collect(),
        }
    }

    /// Builds a matrix from columns; entries are normalized (sorted, merged,
    /// zeros dropped). Panics on out-of-range rows.
    pub fn from_columns(ring: CoefficientRing, rows: usize, columns: Vec<SparseVec>) -> Self {
        let cols = columns
            .into_iter()
            .map(|c| {
                let sorted = c.windows(2).all(|w| w[0].0 < w[1].0) && c.iter().all(|(_, v)| !v.is_zero());
                let c = if sorted { c } else { sparse::collect(ring, c) };
                if let Some(&(r, _)) = c.last() {
                    assert!(r < rows, "row index {r} out of range {rows}");
                }
                c
            })
            .collect();
        ExactMatrix { ring, rows, cols }
    }

    /// Builds a matrix from (row, col, value) triples; repeated positions add up.
    pub fn from_entries<I>(ring: CoefficientRing, rows: usize, cols: usize, entries: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, Scalar)>,
    {
        let mut columns: Vec<SparseVec> = vec![Vec::new(); cols];
        for (r, c, v) in entries {
            assert!(r < rows && c < cols, "entry ({r},{c}) out of range");
            columns[c].push((r, v));
        }
        Self::from_columns(ring, rows, columns.into_iter().map(|c| sparse::collect(ring, c)).collect())
    }

    /// Builds a matrix from dense integer rows, mapped into the ring.
    pub fn from_rows_i64(ring: CoefficientRing, rows: &[Vec<i64>]) -> Self {
        let ncols = rows.first().map_or(0, |r| r.len());
        let entries = rows.iter().enumerate().flat_map(|(i, row)| {
            assert_eq!(row.len(), ncols, "ragged rows");
            row.iter()
                .enumerate()
                .map(move |(j, &v)| (i, j, ring.from_int(v)))
                .collect::<Vec<_>>()
        });
        Self::from_entries(ring, rows.len(), ncols, entries)
    }

    pub fn ring(&self) -> CoefficientRing {
        self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols.len()
    }

    pub fn column(&self, j: usize) -> &[(usize, Scalar)] {
        &self.cols[j]
    }

    pub fn columns(&self) -> &[SparseVec] {
        &self.cols
    }

    pub fn into_columns(self) -> Vec<SparseVec> {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> Scalar {
        sparse::get(&self.cols[c], r)
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(Vec::is_empty)
    }

    /// Iterates over stored (row, col, value) triples in column-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, Scalar)> + '_ {
        self.cols
            .iter()
            .enumerate()
            .flat_map(|(j, c)| c.iter().map(move |&(i, v)| (i, j, v)))
    }

    pub fn transpose(&self) -> ExactMatrix {
        let mut cols: Vec<SparseVec> = vec![Vec::new(); self.rows];
        for (i, j, v) in self.entries() {
            cols[i].push((j, v));
        }
        ExactMatrix {
            ring: self.ring,
            rows: self.cols.len(),
            cols,
        }
    }

    /// Matrix-vector product.
    pub fn apply(&self, x: &[(usize, Scalar)]) -> SparseVec {
        let ring = self.ring;
        sparse::collect(
            ring,
            x.iter()
                .flat_map(|&(k, a)| self.cols[k].iter().map(move |&(i, v)| (i, ring.mul(a, v)))),
        )
    }

    pub fn mul(&self, other: &ExactMatrix) -> Result<ExactMatrix> {
        self.check_ring(other)?;
        if self.cols() != other.rows {
            return Err(OpkError::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows,
                self.cols(),
                other.rows,
                other.cols()
            )));
        }
        Ok(ExactMatrix {
            ring: self.ring,
            rows: self.rows,
            cols: other.cols.iter().map(|c| self.apply(c)).collect(),
        })
    }

    pub fn add(&self, other: &ExactMatrix) -> Result<ExactMatrix> {
        self.check_ring(other)?;
        if self.rows != other.rows || self.cols() != other.cols() {
            return Err(OpkError::Shape("cannot add matrices of different shapes".into()));
        }
        Ok(ExactMatrix {
            ring: self.ring,
            rows: self.rows,
            cols: self
                .cols
                .iter()
                .zip(&other.cols)
                .map(|(a, b)| sparse::axpy(self.ring, a, Scalar::ONE, b))
                .collect(),
        })
    }

    pub fn sub(&self, other: &ExactMatrix) -> Result<ExactMatrix> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> ExactMatrix {
        self.scale(self.ring.neg(Scalar::ONE))
    }

    pub fn scale(&self, a: Scalar) -> ExactMatrix {
        ExactMatrix {
            ring: self.ring,
            rows: self.rows,
            cols: self.cols.iter().map(|c| sparse::scale(self.ring, a, c)).collect(),
        }
    }

    /// Restricts to the given columns, in the given order.
    pub fn select_columns(&self, idx: &[usize]) -> ExactMatrix {
        ExactMatrix {
            ring: self.ring,
            rows: self.rows,
            cols: idx.iter().map(|&j| self.cols[j].clone()).collect(),
        }
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hcat(&self, other: &ExactMatrix) -> Result<ExactMatrix> {
        self.check_ring(other)?;
        if self.rows != other.rows {
            return Err(OpkError::Shape("hcat with different row counts".into()));
        }
        let mut cols = self.cols.clone();
        cols.extend(other.cols.iter().cloned());
        Ok(ExactMatrix {
            ring: self.ring,
            rows: self.rows,
            cols,
        })
    }

    pub fn to_dense(&self) -> Vec<Vec<Scalar>> {
        let mut d = vec![vec![Scalar::ZERO; self.cols()]; self.rows];
        for (i, j, v) in self.entries() {
            d[i][j] = v;
        }
        d
    }

    /// Trace of a square matrix.
    pub fn trace(&self) -> Scalar {
        (0..self.rows.min(self.cols()))
            .map(|i| self.get(i, i))
            .fold(Scalar::ZERO, |a, b| self.ring.add(a, b))
    }

    /// Checks that all stored entries are nonzero, normalized ring elements.
    pub fn is_well_formed(&self) -> bool {
        self.cols.iter().all(|c| {
            c.windows(2).all(|w| w[0].0 < w[1].0)
                && c.iter().all(|&(i, v)| i < self.rows && !v.is_zero() && self.ring.contains(v))
        })
    }

    fn check_ring(&self, other: &ExactMatrix) -> Result<()> {
        if self.ring != other.ring {
            return Err(OpkError::InvalidRing(format!("{} vs {}", self.ring, other.ring)));
        }
        Ok(())
    }
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ExactMatrix {}x{} over {}", self.rows, self.cols(), self.ring)?;
        if self.rows * self.cols() <= 400 {
            for row in self.to_dense() {
                let cells: Vec<String> = row.iter().map(|v| format!("{v:>3}")).collect();
                writeln!(f, "  [{}]", cells.join(" "))?;
            }
        }
        Ok(())
    }
}
