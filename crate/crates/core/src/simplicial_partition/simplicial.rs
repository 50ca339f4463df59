//! The simplicial bar construction with trivial or right P coefficients.
//!
//! A d-cell is a chain of partitions λ_0 = one block ≥ λ_1 ≥ ⋯ ≥ λ_d of
//! {1..n}. Level k has one vertex per block of λ_{k−1}, with the blocks of
//! λ_k inside it as inputs, labelled by a basis element of P of that arity
//! (the unit when there is a single input). A level where λ_{k−1} = λ_k
//! consists of units only, and such cells are degenerate. With trivial
//! coefficients λ_d is the singleton partition; with right coefficients P
//! every block of λ_d carries one more element of P.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::bar_koszul::BarBasis;
use crate::combinatorics::{enumerate_strict_chains, full_mask, mask_elements, mask_min, permute_mask, Mask, Permutation};
use crate::error::{OpkError, Result};
use crate::exact_linalg::{sparse, ChainComplexData, CoefficientRing, ExactMatrix, Scalar, SparseVec};
use crate::sigma_operads::{mixed_radix, OperadStructure};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LevelCell {
    /// λ_0, …, λ_d as block masks sorted by least element.
    pub levels: Vec<Vec<Mask>>,
    /// `labels[k][b]` labels block b of λ_k as a vertex of level k + 1.
    pub labels: Vec<Vec<u32>>,
    /// Right coefficients on the blocks of λ_d; empty for trivial
    /// coefficients.
    pub coefficients: Vec<u32>,
}

/// Blocks of `fine` inside `block`, by least element.
pub(crate) fn sub_blocks(block: Mask, fine: &[Mask]) -> Vec<Mask> {
    fine.iter().copied().filter(|&m| m & block == m).collect()
}

fn singletons(n: usize) -> Vec<Mask> {
    (0..n).map(|k| 1 << k).collect()
}

/// γ(x; y_1, …, y_a) for basis elements, with the inputs of the result
/// ordered by least element of the given input blocks.
pub(crate) fn full_composite(p: &OperadStructure, x: usize, inner: &[(Vec<Mask>, usize)]) -> SparseVec {
    let ring = p.ring();
    let a = inner.len();
    let mut v: SparseVec = vec![(x, ring.one())];
    let mut arity = a;
    for i in (0..a).rev() {
        let k = inner[i].0.len();
        v = p.compose_vec(arity, i + 1, k, &v, &[(inner[i].1, ring.one())]);
        arity += k - 1;
    }
    let mins: Vec<usize> = inner.iter().flat_map(|(bs, _)| bs.iter().map(|&m| mask_min(m))).collect();
    let pi = Permutation::ranking(&mins);
    if pi.is_identity() {
        v
    } else {
        p.act(arity, &pi, &v).expect("arity")
    }
}

/// Expands per-block label vectors into cells sharing everything else.
fn expand(
    ring: CoefficientRing,
    per_block: Vec<SparseVec>,
    build: impl Fn(Vec<u32>) -> LevelCell,
) -> Vec<(LevelCell, Scalar)> {
    let mut partial: Vec<(Vec<u32>, Scalar)> = vec![(Vec::new(), ring.one())];
    for f in &per_block {
        partial = partial
            .into_iter()
            .flat_map(|(t, c)| {
                f.iter().map(move |&(x, y)| {
                    let mut t = t.clone();
                    t.push(x as u32);
                    (t, ring.mul(c, y))
                })
            })
            .collect();
    }
    partial.into_iter().map(|(t, c)| (build(t), c)).collect()
}

impl LevelCell {
    pub fn dim(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn arity(&self) -> usize {
        self.levels[0].iter().map(|m| m.count_ones() as usize).sum()
    }

    pub fn is_degenerate(&self) -> bool {
        self.levels.windows(2).any(|w| w[0] == w[1])
    }

    /// Positions of the non-unit vertices: (level index k, block index).
    pub fn vertices(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for k in 0..self.dim() {
            for (b, &m) in self.levels[k].iter().enumerate() {
                if sub_blocks(m, &self.levels[k + 1]).len() > 1 {
                    out.push((k, b));
                }
            }
        }
        out
    }

    pub fn weight(&self, p: &OperadStructure) -> i64 {
        let mut w = 0;
        for k in 0..self.dim() {
            for (b, &m) in self.levels[k].iter().enumerate() {
                w += p.weights(sub_blocks(m, &self.levels[k + 1]).len())[self.labels[k][b] as usize];
            }
        }
        for (b, &m) in self.levels[self.dim()].iter().enumerate() {
            if let Some(&c) = self.coefficients.get(b) {
                w += p.weights(m.count_ones() as usize)[c as usize];
            }
        }
        w
    }

    /// Face d_i. The outer faces go through the augmentation of the left
    /// coefficient and, with trivial coefficients, of the right one; with
    /// right coefficients P the top level is composed into them.
    pub fn face(&self, p: &OperadStructure, i: usize) -> Vec<(LevelCell, Scalar)> {
        let ring = p.ring();
        let d = self.dim();
        assert!(i <= d && d >= 1, "face d_{i} of a {d}-cell");
        let with_coefficients = !self.coefficients.is_empty();
        if i == 0 {
            if self.levels[0] != self.levels[1] {
                return Vec::new();
            }
            let mut c = self.clone();
            c.levels.remove(0);
            c.labels.remove(0);
            return vec![(c, ring.one())];
        }
        if i == d {
            if !with_coefficients {
                if self.levels[d - 1] != self.levels[d] {
                    return Vec::new();
                }
                let mut c = self.clone();
                c.levels.pop();
                c.labels.pop();
                return vec![(c, ring.one())];
            }
            let coarse = &self.levels[d - 1];
            let fine = &self.levels[d];
            let per_block: Vec<SparseVec> = coarse
                .iter()
                .enumerate()
                .map(|(b, &m)| {
                    let inner: Vec<(Vec<Mask>, usize)> = sub_blocks(m, fine)
                        .into_iter()
                        .map(|s| {
                            let at = fine.iter().position(|&x| x == s).expect("block");
                            (singletons_of(s), self.coefficients[at] as usize)
                        })
                        .collect();
                    full_composite(p, self.labels[d - 1][b] as usize, &inner)
                })
                .collect();
            let mut levels = self.levels.clone();
            levels.pop();
            let labels = self.labels[..d - 1].to_vec();
            return expand(ring, per_block, |coefficients| LevelCell {
                levels: levels.clone(),
                labels: labels.clone(),
                coefficients,
            });
        }
        // Compose levels i and i + 1: λ_i disappears.
        let (coarse, mid, fine) = (&self.levels[i - 1], &self.levels[i], &self.levels[i + 1]);
        let per_block: Vec<SparseVec> = coarse
            .iter()
            .enumerate()
            .map(|(b, &m)| {
                let inner: Vec<(Vec<Mask>, usize)> = sub_blocks(m, mid)
                    .into_iter()
                    .map(|s| {
                        let at = mid.iter().position(|&x| x == s).expect("block");
                        (sub_blocks(s, fine), self.labels[i][at] as usize)
                    })
                    .collect();
                full_composite(p, self.labels[i - 1][b] as usize, &inner)
            })
            .collect();
        let mut levels = self.levels.clone();
        levels.remove(i);
        expand(ring, per_block, |row| {
            let mut labels = self.labels.clone();
            labels.remove(i);
            labels[i - 1] = row;
            LevelCell {
                levels: levels.clone(),
                labels,
                coefficients: self.coefficients.clone(),
            }
        })
    }

    /// Degeneracy s_j, 0 ≤ j ≤ d: a level of units is inserted above level j.
    pub fn degeneracy(&self, j: usize) -> LevelCell {
        assert!(j <= self.dim(), "degeneracy s_{j} of a {}-cell", self.dim());
        let mut c = self.clone();
        c.levels.insert(j, self.levels[j].clone());
        c.labels.insert(j, vec![0; self.levels[j].len()]);
        c
    }

    /// The extra degeneracy s_{d+1} of a cell with right coefficients: the
    /// coefficients become a new top level over the singletons.
    pub fn extra_degeneracy(&self) -> LevelCell {
        assert!(!self.coefficients.is_empty(), "extra degeneracy needs right coefficients");
        let n = self.arity();
        let mut c = self.clone();
        c.labels.push(self.coefficients.clone());
        c.levels.push(singletons(n));
        c.coefficients = vec![0; n];
        c
    }

    /// `w_*` of the cell: blocks are relabelled and every label is moved
    /// by the permutation sorting its new inputs.
    pub fn act(&self, p: &OperadStructure, w: &Permutation) -> Vec<(LevelCell, Scalar)> {
        let ring = p.ring();
        let d = self.dim();
        let moved_levels: Vec<Vec<Mask>> = self
            .levels
            .iter()
            .map(|l| {
                let mut m: Vec<Mask> = l.iter().map(|&b| permute_mask(w, b)).collect();
                m.sort_by_key(|&b| mask_min(b));
                m
            })
            .collect();
        let mut per_block: Vec<SparseVec> = Vec::new();
        let mut shape: Vec<usize> = Vec::new();
        for k in 0..=d {
            let mut row: Vec<(Mask, SparseVec)> = Vec::new();
            for (b, &m) in self.levels[k].iter().enumerate() {
                let (inputs, label) = if k < d {
                    (sub_blocks(m, &self.levels[k + 1]), self.labels[k][b])
                } else if let Some(&c) = self.coefficients.get(b) {
                    (singletons_of(m), c)
                } else {
                    continue;
                };
                let mins: Vec<usize> = inputs.iter().map(|&s| mask_min(permute_mask(w, s))).collect();
                let pi = Permutation::ranking(&mins);
                let v = vec![(label as usize, ring.one())];
                let v = if pi.is_identity() { v } else { p.act(mins.len(), &pi, &v).expect("arity") };
                row.push((permute_mask(w, m), v));
            }
            row.sort_by_key(|(m, _)| mask_min(*m));
            shape.push(row.len());
            per_block.extend(row.into_iter().map(|(_, v)| v));
        }
        expand(ring, per_block, |flat| {
            let mut labels = Vec::with_capacity(d);
            let mut at = 0;
            for &len in &shape[..d] {
                labels.push(flat[at..at + len].to_vec());
                at += len;
            }
            LevelCell {
                levels: moved_levels.clone(),
                labels,
                coefficients: flat[at..].to_vec(),
            }
        })
    }
}

fn singletons_of(m: Mask) -> Vec<Mask> {
    mask_elements(m).map(|k| 1 << k).collect()
}

/// Nondegenerate cells of dimension d with trivial coefficients.
fn trivial_cells(p: &OperadStructure, n: usize, d: usize) -> Result<Vec<LevelCell>> {
    let mut out = Vec::new();
    for chain in enumerate_strict_chains(n, d)? {
        let levels: Vec<Vec<Mask>> = chain.steps().iter().map(|l| l.masks().to_vec()).collect();
        let arities: Vec<Vec<usize>> = (0..d)
            .map(|k| levels[k].iter().map(|&m| sub_blocks(m, &levels[k + 1]).len()).collect())
            .collect();
        let radices: Vec<usize> = arities.iter().flatten().map(|&a| p.rank(a)).collect();
        for flat in mixed_radix(&radices) {
            let mut labels = Vec::with_capacity(d);
            let mut at = 0;
            for row in &arities {
                labels.push(flat[at..at + row.len()].iter().map(|&x| x as u32).collect());
                at += row.len();
            }
            out.push(LevelCell {
                levels: levels.clone(),
                labels,
                coefficients: Vec::new(),
            });
        }
    }
    Ok(out)
}

/// Normalized chains N̄(P)(n) in dimensions 1..=max_dim (or the single unit
/// cell in arity 1), with ∂ = Σ (−1)^i d_i.
#[derive(Clone, Debug)]
pub struct SimplicialBarComplex {
    arity: usize,
    low: usize,
    cells: Vec<Vec<LevelCell>>,
    index: Vec<HashMap<LevelCell, usize>>,
    complex: ChainComplexData,
}

impl SimplicialBarComplex {
    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn complex(&self) -> &ChainComplexData {
        &self.complex
    }

    pub fn dims(&self) -> &[usize] {
        self.complex.dims()
    }

    pub fn cells(&self, d: usize) -> &[LevelCell] {
        d.checked_sub(self.low)
            .and_then(|k| self.cells.get(k))
            .map_or(&[], |v| v.as_slice())
    }

    pub fn index_of(&self, c: &LevelCell) -> Option<usize> {
        self.index.get(c.dim().checked_sub(self.low)?)?.get(c).copied()
    }

    /// Coordinates of a combination of cells, dropping degenerate ones.
    pub(crate) fn coordinates(&self, ring: CoefficientRing, terms: Vec<(LevelCell, Scalar)>) -> SparseVec {
        sparse::collect(
            ring,
            terms.into_iter().filter(|(c, _)| !c.is_degenerate()).map(|(c, x)| {
                (self.index_of(&c).unwrap_or_else(|| panic!("{c:?} is not a cell")), x)
            }),
        )
    }

    /// The action of w in dimension d.
    pub fn action(&self, p: &OperadStructure, d: usize, w: &Permutation) -> ExactMatrix {
        let ring = p.ring();
        let cells = self.cells(d);
        let columns = cells.iter().map(|c| self.coordinates(ring, c.act(p, w))).collect();
        ExactMatrix::from_columns(ring, cells.len(), columns)
    }
}

/// ∂ = Σ (−1)^i d_i of a cell as a list of cells.
pub(crate) fn boundary_terms(p: &OperadStructure, c: &LevelCell) -> Vec<(LevelCell, Scalar)> {
    let ring = p.ring();
    let mut out = Vec::new();
    for i in 0..=c.dim() {
        let s = ring.sign(i % 2 == 1);
        out.extend(c.face(p, i).into_iter().map(|(x, y)| (x, ring.mul(s, y))));
    }
    out
}

pub fn simplicial_bar(p: &OperadStructure, n: usize, max_dim: usize) -> Result<SimplicialBarComplex> {
    if max_dim < 1 {
        return Err(OpkError::arg("max_dim must be at least 1"));
    }
    BarBasis::new(p, n)?;
    let ring = p.ring();
    let (low, cells) = if n == 1 {
        let unit = LevelCell {
            levels: vec![vec![1]],
            labels: Vec::new(),
            coefficients: Vec::new(),
        };
        (0, vec![vec![unit]])
    } else {
        let top = max_dim.min(n - 1);
        (1, (1..=top).map(|d| trivial_cells(p, n, d)).collect::<Result<Vec<_>>>()?)
    };
    let index: Vec<HashMap<LevelCell, usize>> = cells
        .iter()
        .map(|v| v.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect())
        .collect();
    let mut out = SimplicialBarComplex {
        arity: n,
        low,
        cells,
        index,
        complex: ChainComplexData::new(ring, 0, Vec::new(), Vec::new())?,
    };
    let dims: Vec<usize> = out.cells.iter().map(|v| v.len()).collect();
    let mut boundaries = Vec::new();
    let mut weights = Vec::new();
    for (k, v) in out.cells.iter().enumerate() {
        let rows = if k == 0 { 0 } else { dims[k - 1] };
        let columns = v
            .iter()
            .map(|c| if k == 0 { Vec::new() } else { out.coordinates(ring, boundary_terms(p, c)) })
            .collect();
        boundaries.push(ExactMatrix::from_columns(ring, rows, columns));
        weights.push(v.iter().map(|c| c.weight(p)).collect());
    }
    out.complex = ChainComplexData::new(ring, low as i64, dims, boundaries)?.with_weights(weights)?;
    Ok(out)
}

/// Cells of C(I,P,P)(n) in dimension d, degenerate ones included.
pub(crate) fn coefficient_cells(p: &OperadStructure, n: usize, d: usize) -> Vec<LevelCell> {
    // Non-strict chains from the one-block partition, of length d.
    let parts = crate::combinatorics::enumerate_partitions(n).expect("n ≥ 1");
    let masks: Vec<Vec<Mask>> = parts.iter().map(|l| l.masks().to_vec()).collect();
    let refines = |fine: &[Mask], coarse: &[Mask]| fine.iter().all(|&f| coarse.iter().any(|&c| f & c == f));
    let mut chains: Vec<Vec<Vec<Mask>>> = vec![vec![vec![full_mask(n)]]];
    for _ in 0..d {
        chains = chains
            .into_iter()
            .flat_map(|ch| {
                let last = ch.last().expect("nonempty").clone();
                masks
                    .iter()
                    .filter(move |m| refines(m, &last))
                    .map(move |m| {
                        let mut ch = ch.clone();
                        ch.push(m.clone());
                        ch
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
    }
    let mut out = Vec::new();
    for levels in chains {
        let arities: Vec<usize> = (0..d)
            .flat_map(|k| levels[k].iter().map(|&m| sub_blocks(m, &levels[k + 1]).len()).collect::<Vec<_>>())
            .chain(levels[d].iter().map(|m| m.count_ones() as usize))
            .collect();
        let radices: Vec<usize> = arities.iter().map(|&a| p.rank(a)).collect();
        for flat in mixed_radix(&radices) {
            let mut labels = Vec::with_capacity(d);
            let mut at = 0;
            for k in 0..d {
                let len = levels[k].len();
                labels.push(flat[at..at + len].iter().map(|&x| x as u32).collect());
                at += len;
            }
            out.push(LevelCell {
                levels: levels.clone(),
                labels,
                coefficients: flat[at..].iter().map(|&x| x as u32).collect(),
            });
        }
    }
    out
}

/// Outcome of the extra degeneracy check on C(I,P,P)(n).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtraDegeneracyCheck {
    pub holds: bool,
    /// A cell where ∂h + h∂ differs from the identity minus the
    /// augmentation.
    pub counterexample: Option<String>,
}

/// With h = (−1)^{d+1} s_{d+1}, checks ∂h + h∂ = id − ηε on normalized
/// chains of C(I,P,P)(n) up to dimension n − 1.
pub fn extra_degeneracy_check(p: &OperadStructure, n: usize) -> Result<ExtraDegeneracyCheck> {
    BarBasis::new(p, n)?;
    let ring = p.ring();
    let max_dim = n.saturating_sub(1);
    let cells: Vec<Vec<LevelCell>> = (0..=max_dim + 1)
        .map(|d| coefficient_cells(p, n, d).into_iter().filter(|c| !c.is_degenerate()).collect())
        .collect();
    let h = |c: &LevelCell| -> Vec<(LevelCell, Scalar)> {
        let e = c.extra_degeneracy();
        if e.is_degenerate() {
            Vec::new()
        } else {
            vec![(e, ring.sign(c.dim() % 2 == 0))]
        }
    };
    let normalize = |terms: Vec<(LevelCell, Scalar)>| -> Vec<(LevelCell, Scalar)> {
        let mut map: HashMap<LevelCell, Scalar> = HashMap::new();
        for (c, x) in terms {
            if c.is_degenerate() {
                continue;
            }
            let e = map.entry(c).or_insert(ring.zero());
            *e = ring.add(*e, x);
        }
        let mut v: Vec<(LevelCell, Scalar)> = map.into_iter().filter(|(_, x)| !x.is_zero()).collect();
        v.sort();
        v
    };
    let boundary = |c: &LevelCell| -> Vec<(LevelCell, Scalar)> {
        if c.dim() == 0 {
            Vec::new()
        } else {
            boundary_terms(p, c)
        }
    };
    for d in 0..=max_dim {
        for c in &cells[d] {
            let mut terms = Vec::new();
            for (x, a) in h(c) {
                terms.extend(boundary(&x).into_iter().map(|(y, b)| (y, ring.mul(a, b))));
            }
            for (x, a) in boundary(c) {
                terms.extend(h(&x).into_iter().map(|(y, b)| (y, ring.mul(a, b))));
            }
            // Subtract the identity; the augmentation is nonzero only on
            // the unit in arity 1.
            terms.push((c.clone(), ring.neg(ring.one())));
            if n == 1 && d == 0 {
                terms.push((c.clone(), ring.one()));
            }
            let rest = normalize(terms);
            if !rest.is_empty() {
                return Ok(ExtraDegeneracyCheck {
                    holds: false,
                    counterexample: Some(format!("{c:?}")),
                });
            }
        }
    }
    Ok(ExtraDegeneracyCheck {
        holds: true,
        counterexample: None,
    })
}

/// Checks the simplicial identities on all cells of C(I,P,P)(n) up to
/// dimension `max_dim`, degenerate cells included. Returns the first
/// failing identity.
pub fn check_simplicial_identities(p: &OperadStructure, n: usize, max_dim: usize) -> std::result::Result<(), String> {
    let ring = p.ring();
    let collect = |terms: Vec<(LevelCell, Scalar)>| -> Vec<(LevelCell, Scalar)> {
        let mut map: HashMap<LevelCell, Scalar> = HashMap::new();
        for (c, x) in terms {
            let e = map.entry(c).or_insert(ring.zero());
            *e = ring.add(*e, x);
        }
        let mut v: Vec<(LevelCell, Scalar)> = map.into_iter().filter(|(_, x)| !x.is_zero()).collect();
        v.sort();
        v
    };
    let face_all = |terms: Vec<(LevelCell, Scalar)>, i: usize| -> Vec<(LevelCell, Scalar)> {
        terms
            .into_iter()
            .flat_map(|(c, x)| c.face(p, i).into_iter().map(move |(y, z)| (y, ring.mul(x, z))))
            .collect()
    };
    for d in 0..=max_dim {
        for c in coefficient_cells(p, n, d) {
            let one = vec![(c.clone(), ring.one())];
            if d >= 2 {
                for j in 1..=d {
                    for i in 0..j {
                        let lhs = collect(face_all(face_all(one.clone(), j), i));
                        let rhs = collect(face_all(face_all(one.clone(), i), j - 1));
                        if lhs != rhs {
                            return Err(format!("d_{i} d_{j} ≠ d_{} d_{i} on {c:?}", j - 1));
                        }
                    }
                }
            }
            for j in 0..=d {
                let s = c.degeneracy(j);
                for i in 0..=d + 1 {
                    let lhs = collect(s.face(p, i));
                    let rhs = if i < j {
                        collect(c.face(p, i).into_iter().map(|(x, y)| (x.degeneracy(j - 1), y)).collect())
                    } else if i == j || i == j + 1 {
                        one.clone()
                    } else {
                        collect(c.face(p, i - 1).into_iter().map(|(x, y)| (x.degeneracy(j), y)).collect())
                    };
                    if lhs != rhs {
                        return Err(format!("d_{i} s_{j} fails on {c:?}"));
                    }
                }
                for i in 0..=j {
                    if c.degeneracy(j).degeneracy(i) != c.degeneracy(i).degeneracy(j + 1) {
                        return Err(format!("s_{i} s_{j} ≠ s_{} s_{i} on {c:?}", j + 1));
                    }
                }
            }
        }
    }
    Ok(())
}
