//! Σ*-modules: finite-rank representations M(r) of the symmetric groups,
//! truncated at a maximal arity.
//!
//! The action of Σ_r on M(r) is stored through the matrices of the simple
//! transpositions s_1, …, s_{r−1}; column j of a matrix is the image of the
//! basis vector e_j. A general permutation acts through a reduced word.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::combinatorics::{full_mask, mask_elements, mask_min, permute_mask, Mask, Permutation};
use crate::error::{OpkError, Result};
use crate::exact_linalg::{sparse, CoefficientRing, ExactMatrix, Scalar, SparseVec};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub(crate) struct ArityPart {
    pub(crate) rank: usize,
    /// Matrices of s_1, …, s_{r−1}.
    pub(crate) generators: Vec<ExactMatrix>,
    pub(crate) degrees: Vec<i64>,
    pub(crate) weights: Vec<i64>,
}

impl ArityPart {
    fn zero(ring: CoefficientRing, r: usize) -> Self {
        ArityPart {
            rank: 0,
            generators: (1..r.max(1)).map(|_| ExactMatrix::zero(ring, 0, 0)).collect(),
            degrees: Vec::new(),
            weights: Vec::new(),
        }
    }
}

/// A Σ*-module M(0), …, M(max_arity) of free modules of finite rank.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymSequence {
    ring: CoefficientRing,
    parts: Vec<ArityPart>,
}

impl SymSequence {
    pub fn zero(ring: CoefficientRing, max_arity: usize) -> Self {
        SymSequence {
            ring,
            parts: (0..=max_arity).map(|r| ArityPart::zero(ring, r)).collect(),
        }
    }

    /// Replaces M(r) by the module with the given matrices for s_1, …, s_{r−1}.
    /// The Coxeter relations are checked.
    pub fn with_component(
        mut self,
        r: usize,
        generators: Vec<ExactMatrix>,
        degrees: Vec<i64>,
        weights: Vec<i64>,
    ) -> Result<Self> {
        if r > self.max_arity() {
            return Err(OpkError::arg(format!("arity {r} beyond the truncation {}", self.max_arity())));
        }
        let rank = degrees.len();
        if weights.len() != rank || generators.len() != r.saturating_sub(1) {
            return Err(OpkError::Shape(format!("arity {r}: expected {} generator matrices", r.saturating_sub(1))));
        }
        for g in &generators {
            if g.rows() != rank || g.cols() != rank || g.ring() != self.ring {
                return Err(OpkError::Shape(format!("arity {r}: action matrices must be {rank}×{rank}")));
            }
        }
        self.parts[r] = ArityPart {
            rank,
            generators,
            degrees,
            weights,
        };
        if !self.satisfies_coxeter(r) {
            return Err(OpkError::arg(format!("arity {r}: matrices violate the Coxeter relations")));
        }
        Ok(self)
    }

    /// M(r) = trivial representation of Σ_r on one basis vector.
    pub fn trivial(ring: CoefficientRing, r: usize, max_arity: usize) -> Result<Self> {
        let id = ExactMatrix::identity(ring, 1);
        Self::zero(ring, max_arity).with_component(r, vec![id; r.saturating_sub(1)], vec![0], vec![0])
    }

    /// M(r) = signature representation.
    pub fn sign(ring: CoefficientRing, r: usize, max_arity: usize) -> Result<Self> {
        let m = ExactMatrix::identity(ring, 1).neg();
        Self::zero(ring, max_arity).with_component(r, vec![m; r.saturating_sub(1)], vec![0], vec![0])
    }

    /// M(r) = regular representation, with basis the permutations of
    /// {1..r} in lexicographic order and `w_*(e_u) = e_{wu}`.
    pub fn regular(ring: CoefficientRing, r: usize, max_arity: usize) -> Result<Self> {
        let perms = Permutation::all(r);
        let index: HashMap<&Permutation, usize> = perms.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let mut gens = Vec::new();
        for i in 1..r {
            let s = Permutation::simple(r, i)?;
            let cols = perms
                .iter()
                .map(|u| vec![(index[&s.compose(u).expect("same size")], ring.one())])
                .collect();
            gens.push(ExactMatrix::from_columns(ring, perms.len(), cols));
        }
        let n = perms.len();
        Self::zero(ring, max_arity).with_component(r, gens, vec![0; n], vec![0; n])
    }

    /// The unit I of the composition product: the ground ring in arity 1.
    pub fn unit(ring: CoefficientRing, max_arity: usize) -> Result<Self> {
        Self::trivial(ring, 1, max_arity)
    }

    /// The unit 𝟏 of the tensor product: the ground ring in arity 0.
    pub fn tensor_unit(ring: CoefficientRing, max_arity: usize) -> Result<Self> {
        Self::trivial(ring, 0, max_arity)
    }

    /// The same module with every degree and weight set to the given values.
    pub fn with_grading(mut self, degree: i64, weight: i64) -> Self {
        for p in &mut self.parts {
            p.degrees.iter_mut().for_each(|d| *d = degree);
            p.weights.iter_mut().for_each(|w| *w = weight);
        }
        self
    }

    /// Arity-wise direct sum, truncated at the smaller bound.
    pub fn direct_sum(&self, other: &SymSequence) -> Result<Self> {
        same_ring(self, other)?;
        let ring = self.ring;
        let max = self.max_arity().min(other.max_arity());
        let mut out = Self::zero(ring, max);
        for r in 0..=max {
            let (a, b) = (&self.parts[r], &other.parts[r]);
            let gens = a
                .generators
                .iter()
                .zip(&b.generators)
                .map(|(x, y)| block_diagonal(ring, x, y))
                .collect();
            out.parts[r] = ArityPart {
                rank: a.rank + b.rank,
                generators: gens,
                degrees: a.degrees.iter().chain(&b.degrees).copied().collect(),
                weights: a.weights.iter().chain(&b.weights).copied().collect(),
            };
        }
        Ok(out)
    }

    pub fn ring(&self) -> CoefficientRing {
        self.ring
    }

    pub fn max_arity(&self) -> usize {
        self.parts.len() - 1
    }

    pub fn rank(&self, r: usize) -> usize {
        self.parts.get(r).map_or(0, |p| p.rank)
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.parts.iter().map(|p| p.rank).collect()
    }

    pub fn degrees(&self, r: usize) -> &[i64] {
        &self.parts[r].degrees
    }

    pub fn weights(&self, r: usize) -> &[i64] {
        &self.parts[r].weights
    }

    /// Matrix of s_i on M(r).
    pub fn generator(&self, r: usize, i: usize) -> Result<&ExactMatrix> {
        if r > self.max_arity() || i == 0 || i >= r {
            return Err(OpkError::arg(format!("no generator s_{i} in arity {r}")));
        }
        Ok(&self.parts[r].generators[i - 1])
    }

    /// `w_*(v)` for a coordinate vector `v` of M(r).
    pub fn act_vec(&self, r: usize, w: &Permutation, v: &[(usize, Scalar)]) -> Result<SparseVec> {
        if w.len() != r || r > self.max_arity() {
            return Err(OpkError::arg(format!("permutation of size {} on arity {r}", w.len())));
        }
        Ok(self.act_word(r, &w.simple_factorization(), v))
    }

    /// Applies s_{a_1} ∘ ⋯ ∘ s_{a_m} to `v`.
    pub(crate) fn act_word(&self, r: usize, word: &[usize], v: &[(usize, Scalar)]) -> SparseVec {
        let mut cur = v.to_vec();
        for &a in word.iter().rev() {
            cur = self.parts[r].generators[a - 1].apply(&cur);
        }
        cur
    }

    /// Matrix of `w_*` on M(r).
    pub fn action(&self, r: usize, w: &Permutation) -> Result<ExactMatrix> {
        let word = w.simple_factorization();
        if w.len() != r || r > self.max_arity() {
            return Err(OpkError::arg(format!("permutation of size {} on arity {r}", w.len())));
        }
        let ring = self.ring;
        let cols = (0..self.rank(r))
            .map(|j| self.act_word(r, &word, &[(j, ring.one())]))
            .collect();
        Ok(ExactMatrix::from_columns(ring, self.rank(r), cols))
    }

    /// Trace of `w_*` on M(r).
    pub fn character(&self, r: usize, w: &Permutation) -> Result<Scalar> {
        Ok(self.action(r, w)?.trace())
    }

    /// Checks s_i² = 1, (s_i s_{i+1})³ = 1 and s_i s_j = s_j s_i for |i − j| ≥ 2.
    pub fn satisfies_coxeter(&self, r: usize) -> bool {
        let p = &self.parts[r];
        let ring = self.ring;
        let id = ExactMatrix::identity(ring, p.rank);
        let g = &p.generators;
        let mul = |a: &ExactMatrix, b: &ExactMatrix| a.mul(b).expect("square matrices");
        for i in 0..g.len() {
            if mul(&g[i], &g[i]) != id {
                return false;
            }
            if i + 1 < g.len() {
                let st = mul(&g[i], &g[i + 1]);
                if mul(&mul(&st, &st), &st) != id {
                    return false;
                }
            }
            for j in i + 2..g.len() {
                if mul(&g[i], &g[j]) != mul(&g[j], &g[i]) {
                    return false;
                }
            }
        }
        true
    }

    pub(crate) fn part(&self, r: usize) -> &ArityPart {
        &self.parts[r]
    }
}

fn same_ring(a: &SymSequence, b: &SymSequence) -> Result<()> {
    if a.ring != b.ring {
        return Err(OpkError::InvalidRing(format!("{} vs {}", a.ring, b.ring)));
    }
    Ok(())
}

fn block_diagonal(ring: CoefficientRing, a: &ExactMatrix, b: &ExactMatrix) -> ExactMatrix {
    let shift = a.rows();
    let cols = a
        .columns()
        .iter()
        .cloned()
        .chain(b.columns().iter().map(|c| c.iter().map(|&(i, x)| (i + shift, x)).collect()))
        .collect();
    ExactMatrix::from_columns(ring, a.rows() + b.rows(), cols)
}

/// The permutation of |m| letters induced by `w` on the elements of `m`,
/// after identifying m and w(m) with initial segments in increasing order.
pub(crate) fn induced_permutation(w: &Permutation, m: Mask) -> Permutation {
    let images: Vec<usize> = mask_elements(m).map(|k| w.at(k)).collect();
    Permutation::ranking(&images)
}

fn koszul_sign(order: &[usize], degrees: &[i64]) -> bool {
    // Sign of moving the factors into positions `order`.
    let mut odd = false;
    for a in 0..order.len() {
        for b in a + 1..order.len() {
            if order[a] > order[b] && degrees[a] % 2 != 0 && degrees[b] % 2 != 0 {
                odd = !odd;
            }
        }
    }
    odd
}

/// (M ⊗ N)(n) = ⊕_{I ⊔ J = {1..n}} M(I) ⊗ N(J). Basis elements are
/// `(I, a, b)` ordered by the mask of I, then by a, then by b.
pub fn tensor_modules(m: &SymSequence, n: &SymSequence) -> Result<SymSequence> {
    same_ring(m, n)?;
    let ring = m.ring;
    let max = m.max_arity().min(n.max_arity());
    let mut out = SymSequence::zero(ring, max);
    for ar in 0..=max {
        let basis = tensor_basis(m, n, ar);
        let index: HashMap<(Mask, usize, usize), usize> = basis.iter().enumerate().map(|(i, &k)| (k, i)).collect();
        let mut gens = Vec::new();
        for i in 1..ar {
            let w = Permutation::simple(ar, i)?;
            let cols = basis
                .iter()
                .map(|&(im, a, b)| {
                    let jm = full_mask(ar) & !im;
                    let (ki, kj) = (im.count_ones() as usize, jm.count_ones() as usize);
                    let va = m.act_vec(ki, &induced_permutation(&w, im), &[(a, ring.one())]).expect("arity");
                    let vb = n.act_vec(kj, &induced_permutation(&w, jm), &[(b, ring.one())]).expect("arity");
                    let wi = permute_mask(&w, im);
                    sparse::collect(
                        ring,
                        va.iter().flat_map(|&(x, s)| {
                            let index = &index;
                            vb.iter().map(move |&(y, t)| (index[&(wi, x, y)], ring.mul(s, t)))
                        }),
                    )
                })
                .collect();
            gens.push(ExactMatrix::from_columns(ring, basis.len(), cols));
        }
        let grade = |f: fn(&ArityPart) -> &Vec<i64>| -> Vec<i64> {
            basis
                .iter()
                .map(|&(im, a, b)| {
                    let ki = im.count_ones() as usize;
                    f(m.part(ki))[a] + f(n.part(ar - ki))[b]
                })
                .collect()
        };
        let degrees = grade(|p| &p.degrees);
        let weights = grade(|p| &p.weights);
        out.parts[ar] = ArityPart {
            rank: basis.len(),
            generators: gens,
            degrees,
            weights,
        };
    }
    Ok(out)
}

fn tensor_basis(m: &SymSequence, n: &SymSequence, ar: usize) -> Vec<(Mask, usize, usize)> {
    let mut basis = Vec::new();
    for im in 0..=full_mask(ar) {
        let ki = im.count_ones() as usize;
        for a in 0..m.rank(ki) {
            for b in 0..n.rank(ar - ki) {
                basis.push((im, a, b));
            }
        }
    }
    basis
}

/// The symmetry isomorphism (M ⊗ N)(ar) → (N ⊗ M)(ar),
/// `(I, a, b) ↦ (−1)^{|a||b|} (J, b, a)`.
pub fn tensor_symmetry(m: &SymSequence, n: &SymSequence, ar: usize) -> Result<ExactMatrix> {
    same_ring(m, n)?;
    if ar > m.max_arity().min(n.max_arity()) {
        return Err(OpkError::arg(format!("arity {ar} beyond the truncation")));
    }
    let ring = m.ring;
    let target = tensor_basis(n, m, ar);
    let index: HashMap<(Mask, usize, usize), usize> = target.iter().enumerate().map(|(i, &k)| (k, i)).collect();
    let cols = tensor_basis(m, n, ar)
        .into_iter()
        .map(|(im, a, b)| {
            let jm = full_mask(ar) & !im;
            let (ki, kj) = (im.count_ones() as usize, jm.count_ones() as usize);
            let odd = m.degrees(ki)[a] % 2 != 0 && n.degrees(kj)[b] % 2 != 0;
            vec![(index[&(jm, b, a)], ring.sign(odd))]
        })
        .collect();
    Ok(ExactMatrix::from_columns(ring, target.len(), cols))
}

/// A basis element of a composite (M ∘ N)(n): blocks J_1, …, J_r of {1..n}
/// with increasing minima, an element of M(r) and one element of N(|J_k|)
/// for each block.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CompositeElem {
    pub blocks: Vec<Mask>,
    pub outer: usize,
    pub inner: Vec<usize>,
}

/// Enumerated basis of a composite (M ∘ N)(n) for connected N, given the
/// ranks of M and N.
#[derive(Clone, Debug)]
pub struct CompositeBasis {
    n: usize,
    elems: Vec<CompositeElem>,
    index: HashMap<CompositeElem, usize>,
}

impl CompositeBasis {
    pub fn new(n: usize, outer_rank: impl Fn(usize) -> usize, inner_rank: impl Fn(usize) -> usize) -> Self {
        let mut elems = Vec::new();
        if n == 0 {
            elems.extend((0..outer_rank(0)).map(|a| CompositeElem {
                blocks: Vec::new(),
                outer: a,
                inner: Vec::new(),
            }));
        } else {
            for blocks in ordered_block_decompositions(n) {
                let r = blocks.len();
                let ranks: Vec<usize> = blocks.iter().map(|b| inner_rank(b.count_ones() as usize)).collect();
                if ranks.contains(&0) {
                    continue;
                }
                for a in 0..outer_rank(r) {
                    for inner in mixed_radix(&ranks) {
                        elems.push(CompositeElem {
                            blocks: blocks.clone(),
                            outer: a,
                            inner,
                        });
                    }
                }
            }
        }
        let index = elems.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();
        CompositeBasis { n, elems, index }
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn elems(&self) -> &[CompositeElem] {
        &self.elems
    }

    pub fn index_of(&self, e: &CompositeElem) -> Option<usize> {
        self.index.get(e).copied()
    }
}

/// All tuples `t` with `0 ≤ t[k] < radices[k]`, in lexicographic order.
pub(crate) fn mixed_radix(radices: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &r in radices {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..r).map(move |x| {
                    let mut t = t.clone();
                    t.push(x);
                    t
                })
            })
            .collect();
    }
    out
}

/// Set partitions of {0..n−1} as block masks sorted by minimum, in
/// restricted-growth order.
pub(crate) fn ordered_block_decompositions(n: usize) -> Vec<Vec<Mask>> {
    fn go(k: usize, n: usize, blocks: &mut Vec<Mask>, out: &mut Vec<Vec<Mask>>) {
        if k == n {
            out.push(blocks.clone());
            return;
        }
        for b in 0..blocks.len() {
            blocks[b] |= 1 << k;
            go(k + 1, n, blocks, out);
            blocks[b] &= !(1 << k);
        }
        blocks.push(1 << k);
        go(k + 1, n, blocks, out);
        blocks.pop();
    }
    let mut out = Vec::new();
    go(0, n, &mut Vec::new(), &mut out);
    out
}

/// (M ∘ N)(n) = ⊕_r M(r) ⊗ N(J_1) ⊗ ⋯ ⊗ N(J_r) over block decompositions
/// with increasing minima; this needs N(0) = 0.
pub fn compose_modules(m: &SymSequence, n: &SymSequence) -> Result<SymSequence> {
    same_ring(m, n)?;
    if n.rank(0) != 0 {
        return Err(OpkError::arg("the composite is only expanded for connected N (N(0) = 0)"));
    }
    let ring = m.ring;
    let max = m.max_arity().min(n.max_arity());
    let mut out = SymSequence::zero(ring, max);
    for ar in 0..=max {
        let basis = CompositeBasis::new(ar, |r| m.rank(r), |k| n.rank(k));
        let mut gens = Vec::new();
        for i in 1..ar {
            let w = Permutation::simple(ar, i)?;
            let cols = basis
                .elems()
                .iter()
                .map(|e| act_composite(m, n, &basis, &w, e))
                .collect();
            gens.push(ExactMatrix::from_columns(ring, basis.len(), cols));
        }
        let grade = |f: fn(&ArityPart) -> &Vec<i64>| -> Vec<i64> {
            basis
                .elems()
                .iter()
                .map(|e| {
                    f(m.part(e.blocks.len()))[e.outer]
                        + e.blocks
                            .iter()
                            .zip(&e.inner)
                            .map(|(&b, &x)| f(n.part(b.count_ones() as usize))[x])
                            .sum::<i64>()
                })
                .collect()
        };
        let degrees = grade(|p| &p.degrees);
        let weights = grade(|p| &p.weights);
        out.parts[ar] = ArityPart {
            rank: basis.len(),
            generators: gens,
            degrees,
            weights,
        };
    }
    Ok(out)
}

/// `w_*` of a composite basis element: blocks are moved by w, the inner
/// factors by the induced permutations, the outer factor by the permutation
/// sorting the new block minima, with the Koszul sign of reordering the
/// inner factors.
fn act_composite(m: &SymSequence, n: &SymSequence, basis: &CompositeBasis, w: &Permutation, e: &CompositeElem) -> SparseVec {
    let ring = m.ring;
    let r = e.blocks.len();
    let moved: Vec<Mask> = e.blocks.iter().map(|&b| permute_mask(w, b)).collect();
    let pi = Permutation::ranking(&moved.iter().map(|&b| mask_min(b)).collect::<Vec<_>>());
    let degs: Vec<i64> = e
        .blocks
        .iter()
        .zip(&e.inner)
        .map(|(&b, &x)| n.degrees(b.count_ones() as usize)[x])
        .collect();
    let order: Vec<usize> = (0..r).map(|k| pi.at(k)).collect();
    let sign = ring.sign(koszul_sign(&order, &degs));
    let mut blocks = vec![0; r];
    let mut factors: Vec<SparseVec> = vec![Vec::new(); r];
    for k in 0..r {
        let size = e.blocks[k].count_ones() as usize;
        blocks[pi.at(k)] = moved[k];
        factors[pi.at(k)] = n
            .act_vec(size, &induced_permutation(w, e.blocks[k]), &[(e.inner[k], ring.one())])
            .expect("arity");
    }
    let outer = m.act_vec(r, &pi, &[(e.outer, ring.one())]).expect("arity");
    let mut terms: Vec<(usize, Scalar)> = Vec::new();
    for (a, s) in outer {
        let mut partial: Vec<(Vec<usize>, Scalar)> = vec![(Vec::new(), ring.mul(sign, s))];
        for f in &factors {
            partial = partial
                .into_iter()
                .flat_map(|(t, c)| {
                    f.iter().map(move |&(x, y)| {
                        let mut t = t.clone();
                        t.push(x);
                        (t, ring.mul(c, y))
                    })
                })
                .collect();
        }
        for (inner, c) in partial {
            let key = CompositeElem {
                blocks: blocks.clone(),
                outer: a,
                inner,
            };
            terms.push((basis.index_of(&key).expect("closed under the action"), c));
        }
    }
    sparse::collect(ring, terms)
}

/// The dual module: `w · f = f ∘ w^{-1}`, so the matrix of s_i is the
/// transpose of the original one; degrees are negated.
pub fn dual_module(m: &SymSequence) -> SymSequence {
    let mut out = m.clone();
    for p in &mut out.parts {
        p.generators = p.generators.iter().map(ExactMatrix::transpose).collect();
        p.degrees.iter_mut().for_each(|d| *d = -*d);
    }
    out
}

/// Trace of `w_*` on M(r).
pub fn character(m: &SymSequence, r: usize, w: &Permutation) -> Result<Scalar> {
    m.character(r, w)
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: CoefficientRing = CoefficientRing::Rationals;

    fn com(max: usize) -> SymSequence {
        let mut m = SymSequence::zero(Q, max);
        for r in 1..=max {
            m = m.direct_sum(&SymSequence::trivial(Q, r, max).unwrap()).unwrap();
        }
        m
    }

    #[test]
    fn regular_character() {
        let m = SymSequence::regular(Q, 3, 3).unwrap();
        for w in Permutation::all(3) {
            let expected = if w.is_identity() { 6 } else { 0 };
            assert_eq!(m.character(3, &w).unwrap(), Q.from_int(expected));
        }
    }

    #[test]
    fn composite_of_commutative() {
        let c = com(4);
        let cc = compose_modules(&c, &c).unwrap();
        assert_eq!(cc.rank(3), 5);
        assert_eq!(cc.rank(4), 15);
        let i = SymSequence::unit(Q, 4).unwrap();
        assert_eq!(compose_modules(&i, &c).unwrap(), c.clone());
        assert_eq!(compose_modules(&c, &i).unwrap().ranks(), c.ranks());
        assert!(compose_modules(&c, &SymSequence::tensor_unit(Q, 4).unwrap()).is_err());
    }

    #[test]
    fn tensor_with_unit_and_symmetry() {
        let c = com(3);
        assert_eq!(tensor_modules(&c, &c).unwrap().rank(2), 2);
        let one = SymSequence::tensor_unit(Q, 3).unwrap();
        assert_eq!(tensor_modules(&c, &one).unwrap(), c.clone());
        let s = SymSequence::sign(Q, 2, 3).unwrap().with_grading(1, 0);
        let t = tensor_symmetry(&c, &s, 3).unwrap();
        let back = tensor_symmetry(&s, &c, 3).unwrap();
        assert_eq!(back.mul(&t).unwrap(), ExactMatrix::identity(Q, t.cols()));
    }

    #[test]
    fn dual_of_regular_in_arity_two() {
        let m = SymSequence::regular(Q, 2, 2).unwrap();
        let d = dual_module(&m);
        assert_eq!(d.generator(2, 1).unwrap(), m.generator(2, 1).unwrap());
        assert_eq!(dual_module(&d), m);
    }
}
