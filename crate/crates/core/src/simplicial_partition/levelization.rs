//! The levelization map B̄(P)(n) → N̄(P)(n): a tree goes to the sum of its
//! orderings of vertices into levels, one vertex per level, signed by the
//! reordering of the vertex suspensions.

use serde::{Deserialize, Serialize};

use super::simplicial::{simplicial_bar, LevelCell, SimplicialBarComplex};
use crate::bar_koszul::{bar_complex, BarComplex};
use crate::bar_koszul::parity;
use crate::error::Result;
use crate::exact_linalg::{homology, rank, sparse, ChainComplexData, ExactMatrix, HomologySummary};
use crate::sigma_operads::{FreeBasisElem, OperadStructure};
use crate::trees::linear_extensions;

/// Cells of the levelizations of one tree, with their sign (true when odd).
pub fn levelize_elem(e: &FreeBasisElem) -> Vec<(LevelCell, bool)> {
    let n = e.arity();
    let t = &e.tree;
    if e.is_unit() {
        return vec![(
            LevelCell {
                levels: vec![vec![1]],
                labels: Vec::new(),
                coefficients: Vec::new(),
            },
            false,
        )];
    }
    let parent: Vec<Option<usize>> = (0..t.num_vertices()).map(|v| t.parent(v)).collect();
    linear_extensions(&parent)
        .into_iter()
        .map(|ord| {
            let mut levels = vec![vec![crate::combinatorics::full_mask(n)]];
            let mut labels = Vec::with_capacity(ord.len());
            for &v in &ord {
                let prev = levels.last().expect("nonempty");
                let mut next: Vec<_> = prev.iter().copied().filter(|&m| m != t.mask(v)).collect();
                next.extend(t.child_masks(v));
                next.sort_by_key(|&m| crate::combinatorics::mask_min(m));
                labels.push(prev.iter().map(|&m| if m == t.mask(v) { e.labels[v] } else { 0 }).collect());
                levels.push(next);
            }
            (
                LevelCell {
                    levels,
                    labels,
                    coefficients: Vec::new(),
                },
                parity(&ord),
            )
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct LevelizationMap {
    pub bar: BarComplex,
    pub simplicial: SimplicialBarComplex,
    /// One matrix per degree of the bar complex, from the bar basis to the
    /// nondegenerate cells of the same dimension.
    pub matrices: Vec<ExactMatrix>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelizationReport {
    pub arity: usize,
    pub chain_map: bool,
    pub injective: bool,
    pub bar_homology: HomologySummary,
    pub simplicial_homology: HomologySummary,
    /// The mapping cone is acyclic.
    pub quasi_isomorphism: bool,
}

pub fn levelization(p: &OperadStructure, n: usize) -> Result<LevelizationMap> {
    let ring = p.ring();
    let bar = bar_complex(p, n)?;
    let simplicial = simplicial_bar(p, n, n.saturating_sub(1).max(1))?;
    let basis = bar.basis();
    let matrices = bar
        .complex()
        .degrees()
        .map(|d| {
            let d = d as usize;
            let columns = basis
                .degree_range(d)
                .map(|g| {
                    sparse::collect(
                        ring,
                        levelize_elem(&basis.elems()[g]).into_iter().map(|(c, odd)| {
                            (simplicial.index_of(&c).expect("levelization is nondegenerate"), ring.sign(odd))
                        }),
                    )
                })
                .collect();
            ExactMatrix::from_columns(ring, simplicial.cells(d).len(), columns)
        })
        .collect();
    Ok(LevelizationMap {
        bar,
        simplicial,
        matrices,
    })
}

impl LevelizationMap {
    fn low(&self) -> i64 {
        self.bar.complex().min_degree()
    }

    pub fn matrix(&self, d: usize) -> Option<&ExactMatrix> {
        self.matrices.get((d as i64 - self.low()) as usize)
    }

    /// ∂ ∘ φ = φ ∘ β in every degree.
    pub fn is_chain_map(&self) -> Result<bool> {
        let (b, s) = (self.bar.complex(), self.simplicial.complex());
        for d in b.degrees().skip(1) {
            let k = (d - self.low()) as usize;
            let lhs = s.boundary(d).expect("degree").mul(&self.matrices[k])?;
            let rhs = self.matrices[k - 1].mul(b.boundary(d).expect("degree"))?;
            if lhs != rhs {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn is_injective(&self) -> bool {
        self.matrices.iter().all(|m| rank(m) == m.cols())
    }

    /// The mapping cone: B̄_{d−1} ⊕ N̄_d with (b, x) ↦ (−βb, φb + ∂x).
    pub fn cone(&self) -> Result<ChainComplexData> {
        let (b, s) = (self.bar.complex(), self.simplicial.complex());
        let ring = b.ring();
        let low = self.low();
        let top = b.max_degree() + 1;
        let dim = |c: &ChainComplexData, d: i64| if d < c.min_degree() || d > c.max_degree() { 0 } else { c.dim(d) };
        let dims: Vec<usize> = (low..=top).map(|d| dim(b, d - 1) + dim(s, d)).collect();
        let mut boundaries = Vec::new();
        for d in low..=top {
            let (bd, sd) = (dim(b, d - 1), dim(s, d));
            let (bt, st) = (dim(b, d - 2), dim(s, d - 1));
            let rows = if d == low { 0 } else { bt + st };
            let mut entries = Vec::new();
            if d > low {
                if bd > 0 && bt > 0 {
                    entries.extend(b.boundary(d - 1).expect("degree").entries().map(|(r, c, x)| (r, c, ring.neg(x))));
                }
                if bd > 0 && st > 0 {
                    let phi = self.matrices[(d - 1 - low) as usize].entries();
                    entries.extend(phi.map(|(r, c, x)| (bt + r, c, x)));
                }
                if sd > 0 && st > 0 {
                    entries.extend(s.boundary(d).expect("degree").entries().map(|(r, c, x)| (bt + r, bd + c, x)));
                }
            }
            boundaries.push(ExactMatrix::from_entries(ring, rows, bd + sd, entries));
        }
        ChainComplexData::new(ring, low, dims, boundaries)
    }

    pub fn report(&self) -> Result<LevelizationReport> {
        Ok(LevelizationReport {
            arity: self.bar.arity(),
            chain_map: self.is_chain_map()?,
            injective: self.is_injective(),
            bar_homology: homology(self.bar.complex()),
            simplicial_homology: homology(self.simplicial.complex()),
            quasi_isomorphism: homology(&self.cone()?).is_zero(),
        })
    }
}
