use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::elimination::{invariant_factors, rank};
use super::matrix::ExactMatrix;
use super::ring::CoefficientRing;
use crate::error::{OpkError, Result};

/// A bounded chain complex of free modules with explicit bases.
///
/// Degrees run over `min_degree .. min_degree + dims.len()`; the boundary
/// of degree `d` maps the degree-`d` basis to the degree-`(d-1)` basis (the
/// lowest boundary has zero rows). `∂∘∂ = 0` is checked on construction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainComplexData {
    ring: CoefficientRing,
    min_degree: i64,
    dims: Vec<usize>,
    boundaries: Vec<ExactMatrix>,
    weights: Option<Vec<Vec<i64>>>,
}

impl ChainComplexData {
    pub fn new(
        ring: CoefficientRing,
        min_degree: i64,
        dims: Vec<usize>,
        boundaries: Vec<ExactMatrix>,
    ) -> Result<Self> {
        if boundaries.len() != dims.len() {
            return Err(OpkError::InvalidComplex("one boundary per degree expected".into()));
        }
        for (k, b) in boundaries.iter().enumerate() {
            let rows = if k == 0 { 0 } else { dims[k - 1] };
            if b.ring() != ring {
                return Err(OpkError::InvalidRing(format!("boundary over {} in a complex over {ring}", b.ring())));
            }
            if b.rows() != rows || b.cols() != dims[k] {
                return Err(OpkError::InvalidComplex(format!(
                    "boundary in degree {} has shape {}x{}, expected {}x{}",
                    min_degree + k as i64,
                    b.rows(),
                    b.cols(),
                    rows,
                    dims[k]
                )));
            }
        }
        for k in 1..boundaries.len() {
            if !boundaries[k - 1].mul(&boundaries[k])?.is_zero() {
                return Err(OpkError::InvalidComplex(format!(
                    "boundary squares to a nonzero map in degree {}",
                    min_degree + k as i64
                )));
            }
        }
        Ok(ChainComplexData {
            ring,
            min_degree,
            dims,
            boundaries,
            weights: None,
        })
    }

    /// Attaches a weight label to every basis element.
    pub fn with_weights(mut self, weights: Vec<Vec<i64>>) -> Result<Self> {
        if weights.len() != self.dims.len() || weights.iter().zip(&self.dims).any(|(w, &d)| w.len() != d) {
            return Err(OpkError::InvalidComplex("weight labels do not match dimensions".into()));
        }
        self.weights = Some(weights);
        Ok(self)
    }

    pub fn ring(&self) -> CoefficientRing {
        self.ring
    }

    pub fn min_degree(&self) -> i64 {
        self.min_degree
    }

    pub fn max_degree(&self) -> i64 {
        self.min_degree + self.dims.len() as i64 - 1
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> {
        self.min_degree..self.min_degree + self.dims.len() as i64
    }

    fn slot(&self, d: i64) -> Option<usize> {
        let k = d - self.min_degree;
        (k >= 0 && (k as usize) < self.dims.len()).then_some(k as usize)
    }

    pub fn dim(&self, d: i64) -> usize {
        self.slot(d).map_or(0, |k| self.dims[k])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Boundary out of degree `d`, or `None` outside the range.
    pub fn boundary(&self, d: i64) -> Option<&ExactMatrix> {
        self.slot(d).map(|k| &self.boundaries[k])
    }

    pub fn weights(&self, d: i64) -> Option<&[i64]> {
        let k = self.slot(d)?;
        self.weights.as_ref().map(|w| w[k].as_slice())
    }

    /// Σ(−1)^d dim C_d.
    pub fn euler_characteristic(&self) -> i64 {
        self.degrees()
            .map(|d| if d.rem_euclid(2) == 0 { 1 } else { -1 } * self.dim(d) as i64)
            .sum()
    }

    /// The sub-complex of basis elements with the given weight (requires
    /// weight labels and a weight-preserving boundary).
    pub fn weight_column(&self, s: i64) -> Result<ChainComplexData> {
        let weights = self
            .weights
            .as_ref()
            .ok_or_else(|| OpkError::InvalidComplex("complex has no weight labels".into()))?;
        let keep: Vec<Vec<usize>> = weights
            .iter()
            .map(|w| (0..w.len()).filter(|&i| w[i] == s).collect())
            .collect();
        let mut boundaries = Vec::new();
        for (k, b) in self.boundaries.iter().enumerate() {
            let rows_keep: Option<std::collections::HashMap<usize, usize>> =
                (k > 0).then(|| keep[k - 1].iter().enumerate().map(|(new, &old)| (old, new)).collect());
            let cols = keep[k]
                .iter()
                .map(|&j| {
                    let col = b.column(j);
                    match &rows_keep {
                        None => Ok(Vec::new()),
                        Some(map) => col
                            .iter()
                            .map(|&(i, v)| {
                                map.get(&i).map(|&ni| (ni, v)).ok_or_else(|| {
                                    OpkError::InvalidComplex("boundary does not preserve weight".into())
                                })
                            })
                            .collect::<Result<Vec<_>>>(),
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            let rows = if k == 0 { 0 } else { keep[k - 1].len() };
            boundaries.push(ExactMatrix::from_columns(self.ring, rows, cols));
        }
        let dims = keep.iter().map(Vec::len).collect();
        let w = keep.iter().map(|k| vec![s; k.len()]).collect();
        ChainComplexData::new(self.ring, self.min_degree, dims, boundaries)?.with_weights(w)
    }

    /// The same complex with coefficients reduced into another ring.
    /// Only integer-valued complexes can be reduced.
    pub fn change_ring(&self, ring: CoefficientRing) -> Result<ChainComplexData> {
        let boundaries = self
            .boundaries
            .iter()
            .map(|b| {
                let entries = b
                    .entries()
                    .map(|(i, j, v)| {
                        if v.is_integer() {
                            Ok((i, j, ring.from_int(v.numer())))
                        } else {
                            ring.from_fraction(v.numer(), v.denom()).map(|x| (i, j, x))
                        }
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(ExactMatrix::from_entries(ring, b.rows(), b.cols(), entries))
            })
            .collect::<Result<Vec<_>>>()?;
        let c = ChainComplexData::new(ring, self.min_degree, self.dims.clone(), boundaries)?;
        match &self.weights {
            Some(w) => c.with_weights(w.clone()),
            None => Ok(c),
        }
    }
}

/// Betti numbers and torsion invariants. Only nonzero Betti numbers and
/// nonempty torsion lists are stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologySummary {
    pub betti: BTreeMap<i64, usize>,
    pub torsion: BTreeMap<i64, Vec<i64>>,
}

impl HomologySummary {
    pub fn betti(&self, d: i64) -> usize {
        self.betti.get(&d).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.betti.is_empty() && self.torsion.is_empty()
    }

    pub fn total_rank(&self) -> usize {
        self.betti.values().sum()
    }
}

/// Homology of a validated complex: ranks over a field, Smith invariants
/// over ℤ.
pub fn homology(c: &ChainComplexData) -> HomologySummary {
    let degrees: Vec<i64> = c.degrees().collect();
    let mut ranks = Vec::with_capacity(degrees.len());
    let mut torsion_of_image = Vec::with_capacity(degrees.len());
    for &d in &degrees {
        let b = c.boundary(d).expect("degree in range");
        if c.ring() == CoefficientRing::Integers {
            let f = invariant_factors(b);
            ranks.push(f.len());
            torsion_of_image.push(f.into_iter().filter(|&x| x > 1).collect::<Vec<_>>());
        } else {
            ranks.push(rank(b));
            torsion_of_image.push(Vec::new());
        }
    }
    let mut out = HomologySummary::default();
    for (k, &d) in degrees.iter().enumerate() {
        let next_rank = ranks.get(k + 1).copied().unwrap_or(0);
        let b = c.dim(d) - ranks[k] - next_rank;
        if b > 0 {
            out.betti.insert(d, b);
        }
        if let Some(t) = torsion_of_image.get(k + 1) {
            if !t.is_empty() {
                out.torsion.insert(d, t.clone());
            }
        }
    }
    out
}

/// The linear dual: degrees negated and boundaries transposed.
pub fn dualize_complex(c: &ChainComplexData) -> ChainComplexData {
    let n = c.dims.len();
    let dims: Vec<usize> = c.dims.iter().rev().copied().collect();
    // New slot k holds old degree max - k; its boundary is the transpose of
    // the old boundary out of old degree max - k + 1.
    let boundaries: Vec<ExactMatrix> = (0..n)
        .map(|k| {
            if k == 0 {
                ExactMatrix::zero(c.ring, 0, dims[0])
            } else {
                c.boundaries[n - k].transpose()
            }
        })
        .collect();
    let weights = c
        .weights
        .as_ref()
        .map(|w| w.iter().rev().cloned().collect::<Vec<_>>());
    ChainComplexData {
        ring: c.ring,
        min_degree: -c.max_degree(),
        dims,
        boundaries,
        weights,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_linalg::Scalar;

    #[test]
    fn multiplication_by_two() {
        let z = CoefficientRing::Integers;
        let b1 = ExactMatrix::from_rows_i64(z, &[vec![2]]);
        let c = ChainComplexData::new(z, 0, vec![1, 1], vec![ExactMatrix::zero(z, 0, 1), b1]).unwrap();
        let h = homology(&c);
        assert!(h.betti.is_empty());
        assert_eq!(h.torsion.get(&0), Some(&vec![2]));
        let q = homology(&c.change_ring(CoefficientRing::Rationals).unwrap());
        assert!(q.is_zero());
        let f2 = homology(&c.change_ring(CoefficientRing::PrimeField(2)).unwrap());
        assert_eq!(f2.betti(0), 1);
        assert_eq!(f2.betti(1), 1);
    }

    #[test]
    fn zero_boundaries_give_dimensions() {
        let q = CoefficientRing::Rationals;
        let c = ChainComplexData::new(
            q,
            1,
            vec![2, 3],
            vec![ExactMatrix::zero(q, 0, 2), ExactMatrix::zero(q, 2, 3)],
        )
        .unwrap();
        let h = homology(&c);
        assert_eq!((h.betti(1), h.betti(2)), (2, 3));
    }

    #[test]
    fn rejects_nonzero_square() {
        let q = CoefficientRing::Rationals;
        let one = ExactMatrix::identity(q, 1);
        let r = ChainComplexData::new(q, 0, vec![1, 1, 1], vec![ExactMatrix::zero(q, 0, 1), one.clone(), one]);
        assert!(matches!(r, Err(OpkError::InvalidComplex(_))));
    }

    #[test]
    fn dual_is_an_involution() {
        let q = CoefficientRing::Rationals;
        let b = ExactMatrix::from_entries(q, 1, 1, [(0, 0, Scalar::ONE)]);
        let c = ChainComplexData::new(q, 0, vec![1, 1], vec![ExactMatrix::zero(q, 0, 1), b]).unwrap();
        let d = dualize_complex(&c);
        assert_eq!(d.min_degree(), -1);
        assert_eq!(d.boundary(0).unwrap().get(0, 0), Scalar::ONE);
        assert_eq!(dualize_complex(&d), c);
    }
}
