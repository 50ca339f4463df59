//! Normalized chains on the nerve of the partition poset: strict chains
//! from the one-block partition to the singletons, with interior faces.

use std::collections::HashMap;

use super::simplicial::{LevelCell, SimplicialBarComplex};
use crate::combinatorics::{enumerate_strict_chains, Mask, PartitionChain, Permutation};
use crate::error::{OpkError, Result};
use crate::exact_linalg::{ChainComplexData, ColumnEchelon, CoefficientRing, ExactMatrix, Scalar};

#[derive(Clone, Debug)]
pub struct PartitionComplex {
    r: usize,
    chains: Vec<Vec<PartitionChain>>,
    index: Vec<HashMap<PartitionChain, usize>>,
    complex: ChainComplexData,
}

/// Chains of length 1..r−1 with ∂ = Σ_{0<i<d} (−1)^i (omit λ_i), over ℤ.
pub fn partition_complex(r: usize) -> Result<PartitionComplex> {
    if r < 2 {
        return Err(OpkError::arg("the partition complex needs r ≥ 2"));
    }
    let ring = CoefficientRing::Integers;
    let chains: Vec<Vec<PartitionChain>> = (1..r).map(|d| enumerate_strict_chains(r, d)).collect::<Result<_>>()?;
    let index: Vec<HashMap<PartitionChain, usize>> = chains
        .iter()
        .map(|v| v.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect())
        .collect();
    let dims: Vec<usize> = chains.iter().map(|v| v.len()).collect();
    let mut boundaries = vec![ExactMatrix::zero(ring, 0, dims[0])];
    for k in 1..chains.len() {
        let columns = chains[k]
            .iter()
            .map(|c| {
                let steps = c.steps();
                let mut col: Vec<(usize, Scalar)> = (1..steps.len() - 1)
                    .map(|i| {
                        let mut rest = steps.to_vec();
                        rest.remove(i);
                        let face = PartitionChain::new(rest).expect("a face of a chain is a chain");
                        (index[k - 1][&face], ring.sign(i % 2 == 1))
                    })
                    .collect();
                col.sort_by_key(|&(i, _)| i);
                col
            })
            .collect();
        boundaries.push(ExactMatrix::from_columns(ring, dims[k - 1], columns));
    }
    let complex = ChainComplexData::new(ring, 1, dims, boundaries)?;
    Ok(PartitionComplex {
        r,
        chains,
        index,
        complex,
    })
}

impl PartitionComplex {
    pub fn r(&self) -> usize {
        self.r
    }

    pub fn complex(&self) -> &ChainComplexData {
        &self.complex
    }

    pub fn chains(&self, d: usize) -> &[PartitionChain] {
        d.checked_sub(1).and_then(|k| self.chains.get(k)).map_or(&[], |v| v.as_slice())
    }

    pub fn index_of(&self, c: &PartitionChain) -> Option<usize> {
        self.index.get(c.length().checked_sub(1)?)?.get(c).copied()
    }

    /// The action of w in degree d, by permuting blocks.
    pub fn action(&self, d: usize, w: &Permutation) -> Result<ExactMatrix> {
        let ring = self.complex.ring();
        if w.len() != self.r {
            return Err(OpkError::arg(format!("permutation of {} letters on r = {}", w.len(), self.r)));
        }
        let chains = self.chains(d);
        let columns = chains
            .iter()
            .map(|c| {
                let image = c.permute(w)?;
                Ok(vec![(self.index_of(&image).expect("chain"), ring.one())])
            })
            .collect::<Result<_>>()?;
        Ok(ExactMatrix::from_columns(ring, chains.len(), columns))
    }

    /// Trace of w on H_{r−1} ⊗ ℚ, the top homology.
    pub fn top_homology_character(&self, w: &Permutation) -> Result<Scalar> {
        let q = CoefficientRing::Rationals;
        let top = self.r - 1;
        let rational = self.complex.change_ring(q)?;
        let kernel = ColumnEchelon::new(rational.boundary(top as i64).expect("top degree")).kernel().to_vec();
        let k = ExactMatrix::from_columns(q, self.chains(top).len(), kernel);
        let solver = ColumnEchelon::new(&k);
        let a = change(&self.action(top, w)?, q)?;
        let mut trace = q.zero();
        for (j, col) in k.columns().iter().enumerate() {
            let coords = solver
                .solve(&a.apply(col))
                .ok_or_else(|| OpkError::InvalidComplex("cycles are not stable under Σ_r".into()))?;
            trace = q.add(trace, crate::exact_linalg::sparse::get(&coords, j));
        }
        Ok(trace)
    }

    /// The cell of N̄(Com)(r) with the same sequence of partitions.
    pub fn to_simplicial_cell(c: &PartitionChain) -> LevelCell {
        let levels: Vec<Vec<Mask>> = c.steps().iter().map(|l| l.masks().to_vec()).collect();
        LevelCell {
            labels: levels[..levels.len() - 1].iter().map(|l| vec![0; l.len()]).collect(),
            levels,
            coefficients: Vec::new(),
        }
    }

    /// The partition-sequence map to N̄(Com)(r) in degree d, as a matrix
    /// from chains to cells.
    pub fn isomorphism(&self, target: &SimplicialBarComplex, d: usize) -> ExactMatrix {
        let ring = self.complex.ring();
        let columns = self
            .chains(d)
            .iter()
            .map(|c| {
                let cell = Self::to_simplicial_cell(c);
                vec![(target.index_of(&cell).expect("cell of N̄(Com)"), ring.one())]
            })
            .collect();
        ExactMatrix::from_columns(ring, target.cells(d).len(), columns)
    }
}

fn change(m: &ExactMatrix, ring: CoefficientRing) -> Result<ExactMatrix> {
    let entries = m
        .entries()
        .map(|(r, c, x)| Ok((r, c, ring.from_fraction(x.numer(), x.denom())?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(ExactMatrix::from_entries(ring, m.rows(), m.cols(), entries))
}
