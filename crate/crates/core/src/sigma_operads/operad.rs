//! Operads given by explicit bases and partial composition tables,
//! truncated at a maximal arity.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::free::{graft, FreeBasisElem, FreeOperad};
use super::presentation::QuadraticPresentation;
use super::symseq::{mixed_radix, SymSequence};
use crate::combinatorics::Permutation;
use crate::error::{OpkError, Result};
use crate::exact_linalg::{sparse, CoefficientRing, ExactMatrix, QuotientModule, Scalar, SparseVec, TorsionFound};
use crate::trees::reduced_trees;

/// Images of `e_a ∘_i e_b` for `e_a ∈ P(m)`, `e_b ∈ P(k)`, indexed by
/// `a · rank P(k) + b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompositionTable {
    pub m: usize,
    pub i: usize,
    pub k: usize,
    pub images: Vec<SparseVec>,
}

/// An operad P with P(0) = 0 and P(1) spanned by the unit, truncated at
/// `max_arity`. Basis elements have degree 0 and a weight; the unit is
/// basis element 0 of P(1), of weight 0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperadStructure {
    name: String,
    module: SymSequence,
    /// Sorted by (m, i, k); only m, k ≥ 2.
    tables: Vec<CompositionTable>,
}

impl OperadStructure {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn ring(&self) -> CoefficientRing {
        self.module.ring()
    }

    /// Arities above this bound are not represented.
    pub fn max_arity(&self) -> usize {
        self.module.max_arity()
    }

    pub fn module(&self) -> &SymSequence {
        &self.module
    }

    pub fn rank(&self, n: usize) -> usize {
        self.module.rank(n)
    }

    pub fn weights(&self, n: usize) -> &[i64] {
        self.module.weights(n)
    }

    /// Rank of each weight component of P(n).
    pub fn weight_ranks(&self, n: usize) -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        for &w in self.weights(n) {
            *out.entry(w).or_insert(0) += 1;
        }
        out
    }

    /// `e_a ∘_i e_b` with `e_a ∈ P(m)`, `e_b ∈ P(k)`, 1 ≤ i ≤ m.
    pub fn compose(&self, m: usize, i: usize, k: usize, a: usize, b: usize) -> SparseVec {
        assert!(i >= 1 && i <= m && m + k - 1 <= self.max_arity(), "∘_{i} out of range");
        if m == 1 {
            return vec![(b, Scalar::ONE)];
        }
        if k == 1 {
            return vec![(a, Scalar::ONE)];
        }
        let t = self
            .tables
            .binary_search_by(|t| (t.m, t.i, t.k).cmp(&(m, i, k)))
            .expect("table exists");
        self.tables[t].images[a * self.rank(k) + b].clone()
    }

    /// Bilinear extension of [`compose`](Self::compose).
    pub fn compose_vec(&self, m: usize, i: usize, k: usize, p: &[(usize, Scalar)], q: &[(usize, Scalar)]) -> SparseVec {
        let ring = self.ring();
        let mut terms = Vec::new();
        for &(a, x) in p {
            for &(b, y) in q {
                let c = ring.mul(x, y);
                terms.extend(self.compose(m, i, k, a, b).into_iter().map(|(j, z)| (j, ring.mul(c, z))));
            }
        }
        sparse::collect(ring, terms)
    }

    /// `w_*(v)` on P(n).
    pub fn act(&self, n: usize, w: &Permutation, v: &[(usize, Scalar)]) -> Result<SparseVec> {
        self.module.act_vec(n, w, v)
    }

    pub fn character(&self, n: usize, w: &Permutation) -> Result<Scalar> {
        self.module.character(n, w)
    }

    /// The same operad with coefficients reduced into another ring; only
    /// from ℤ (or to the same ring).
    pub fn change_ring(&self, ring: CoefficientRing) -> Result<OperadStructure> {
        if ring == self.ring() {
            return Ok(self.clone());
        }
        if self.ring() != CoefficientRing::Integers {
            return Err(OpkError::InvalidRing(format!("cannot map {} to {ring}", self.ring())));
        }
        let map = |v: &SparseVec| sparse::collect(ring, v.iter().map(|&(i, x)| (i, ring.from_int(x.numer()))));
        let max = self.max_arity();
        let mut module = SymSequence::zero(ring, max);
        for n in 0..=max {
            let gens = (1..n)
                .map(|i| {
                    let g = self.module.generator(n, i).expect("generator");
                    ExactMatrix::from_columns(ring, g.rows(), g.columns().iter().map(map).collect())
                })
                .collect();
            module = module.with_component(n, gens, self.module.degrees(n).to_vec(), self.weights(n).to_vec())?;
        }
        let tables = self
            .tables
            .iter()
            .map(|t| CompositionTable {
                m: t.m,
                i: t.i,
                k: t.k,
                images: t.images.iter().map(map).collect(),
            })
            .collect();
        Ok(OperadStructure {
            name: self.name.clone(),
            module,
            tables,
        })
    }

    /// Checks both families of partial-composition relations on all basis
    /// triples within the truncation. Returns a description of the first
    /// failure.
    pub fn check_associativity(&self) -> std::result::Result<(), String> {
        let max = self.max_arity();
        let e = |x: usize| vec![(x, Scalar::ONE)];
        for m in 1..=max {
            for k in 1..=max {
                for l in 1..=max {
                    if m + k + l - 2 > max {
                        continue;
                    }
                    for a in 0..self.rank(m) {
                        for b in 0..self.rank(k) {
                            for c in 0..self.rank(l) {
                                for i in 1..=m {
                                    let pq = self.compose(m, i, k, a, b);
                                    // (p ∘_i q) ∘_{i+j−1} r = p ∘_i (q ∘_j r)
                                    for j in 1..=k {
                                        let lhs = self.compose_vec(m + k - 1, i + j - 1, l, &pq, &e(c));
                                        let qr = self.compose(k, j, l, b, c);
                                        let rhs = self.compose_vec(m, i, k + l - 1, &e(a), &qr);
                                        if lhs != rhs {
                                            return Err(format!("sequential: arities ({m},{k},{l}), ∘_{i}, ∘_{j}, basis ({a},{b},{c})"));
                                        }
                                    }
                                    // (p ∘_i q) ∘_{j+k−1} r = (p ∘_j r) ∘_i q for i < j
                                    for j in i + 1..=m {
                                        let lhs = self.compose_vec(m + k - 1, j + k - 1, l, &pq, &e(c));
                                        let pr = self.compose(m, j, l, a, c);
                                        let rhs = self.compose_vec(m + l - 1, i, k, &pr, &e(b));
                                        if lhs != rhs {
                                            return Err(format!("parallel: arities ({m},{k},{l}), ∘_{i}, ∘_{j}, basis ({a},{b},{c})"));
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Checks `p ∘_i (u_* q) = U_*(p ∘_i q)` and
    /// `(w_* p) ∘_i q = W_*(p ∘_{w⁻¹(i)} q)` for the given permutations
    /// (or all simple transpositions when `perms` is empty), on all basis
    /// pairs.
    pub fn check_equivariance(&self, perms: &[Permutation]) -> std::result::Result<(), String> {
        let max = self.max_arity();
        let pick = |r: usize| -> Vec<Permutation> {
            let given: Vec<Permutation> = perms.iter().filter(|w| w.len() == r).cloned().collect();
            if perms.is_empty() {
                (1..r).map(|i| Permutation::simple(r, i).expect("valid")).collect()
            } else {
                given
            }
        };
        for m in 2..=max {
            for k in 2..=max + 1 - m {
                let n = m + k - 1;
                for i in 1..=m {
                    for u in pick(k) {
                        let big = block_permutation(m, k, i, &Permutation::identity(m), &u);
                        for a in 0..self.rank(m) {
                            for b in 0..self.rank(k) {
                                let uq = self.act(k, &u, &[(b, Scalar::ONE)]).map_err(|e| e.to_string())?;
                                let lhs = self.compose_vec(m, i, k, &[(a, Scalar::ONE)], &uq);
                                let rhs = self.act(n, &big, &self.compose(m, i, k, a, b)).map_err(|e| e.to_string())?;
                                if lhs != rhs {
                                    return Err(format!("inner action {u} at ({m},{i},{k}), basis ({a},{b})"));
                                }
                            }
                        }
                    }
                    for w in pick(m) {
                        let t = w.inverse().apply(i);
                        let big = block_permutation(m, k, t, &w, &Permutation::identity(k));
                        for a in 0..self.rank(m) {
                            for b in 0..self.rank(k) {
                                let wp = self.act(m, &w, &[(a, Scalar::ONE)]).map_err(|e| e.to_string())?;
                                let lhs = self.compose_vec(m, i, k, &wp, &[(b, Scalar::ONE)]);
                                let rhs = self.act(n, &big, &self.compose(m, t, k, a, b)).map_err(|e| e.to_string())?;
                                if lhs != rhs {
                                    return Err(format!("outer action {w} at ({m},{i},{k}), basis ({a},{b})"));
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Checks that ∘_i adds weights.
    pub fn check_weights(&self) -> bool {
        self.tables.iter().all(|t| {
            let (wm, wk, wn) = (self.weights(t.m), self.weights(t.k), self.weights(t.m + t.k - 1));
            t.images.iter().enumerate().all(|(idx, img)| {
                let (a, b) = (idx / wk.len(), idx % wk.len());
                img.iter().all(|&(j, _)| wn[j] == wm[a] + wk[b])
            })
        })
    }
}

/// The permutation of {1..m+k−1} acting on the composite `p ∘_t q` (inputs
/// in blocks D_1, …, D_m, D_t of size k) that sends block D_j onto block
/// C_{w(j)} of the composite `(w_* p) ∘_{w(t)} q`, applying `u` inside the
/// size-k block.
fn block_permutation(m: usize, k: usize, t: usize, w: &Permutation, u: &Permutation) -> Permutation {
    let i = w.apply(t);
    let start = |blocks_at: usize, j: usize| if j <= blocks_at { j } else { j + k - 1 };
    let mut images = Vec::with_capacity(m + k - 1);
    for j in 1..=m {
        let target = start(i, w.apply(j));
        if j == t {
            for x in 1..=k {
                images.push(target + u.apply(x) - 1);
            }
        } else {
            images.push(target);
        }
    }
    Permutation::new(&images).expect("block permutation")
}

/// One weight component of P(n) as a quotient of F(M)(n)_(s).
struct Piece {
    weight: usize,
    offset: usize,
    quotient: QuotientModule,
}

struct Builder<'a> {
    free: &'a FreeOperad,
    pieces: Vec<Vec<Piece>>,
}

impl Builder<'_> {
    fn rank(&self, n: usize) -> usize {
        if n == 1 {
            return 1;
        }
        self.pieces[n].iter().map(|p| p.quotient.rank()).sum()
    }

    fn project(&self, n: usize, s: usize, v: &[(usize, Scalar)]) -> SparseVec {
        let piece = self.pieces[n].iter().find(|p| p.weight == s).expect("weight component");
        piece.quotient.project(v).into_iter().map(|(j, x)| (j + piece.offset, x)).collect()
    }

    /// (weight, lift) of each basis element of P(n), n ≥ 2.
    fn lifts(&self, n: usize) -> Vec<(usize, &SparseVec)> {
        self.pieces[n]
            .iter()
            .flat_map(|p| p.quotient.lifts().iter().map(move |l| (p.weight, l)))
            .collect()
    }

    fn free_index(&self, n: usize, s: usize, e: &FreeBasisElem) -> usize {
        self.free.component(n, s).index_of(e).expect("element of the free operad")
    }
}

/// The free operad F(M) with its weight grading, truncated at `max_arity`.
pub fn free_operad(generators: &SymSequence, max_arity: usize) -> Result<OperadStructure> {
    let free = FreeOperad::new(generators.clone().with_grading(0, 1), max_arity)?;
    build("Free", &free, &HashMap::new())
}

/// P = F(M)/(R), truncated at `max_arity`, over `ring`. Over ℤ a weight
/// component with torsion is reported as an error.
pub fn quadratic_quotient(pres: &QuadraticPresentation, ring: CoefficientRing, max_arity: usize) -> Result<OperadStructure> {
    let free = FreeOperad::new(pres.generator_module(ring, max_arity.max(pres.max_generator_arity()))?, max_arity)?;
    let mut spans = HashMap::new();
    for k in pres.relations().iter().map(|r| r.arity).filter(|&k| k <= max_arity) {
        if let std::collections::hash_map::Entry::Vacant(e) = spans.entry(k) {
            e.insert(pres.relation_span(&free, k)?);
        }
    }
    build(pres.name(), &free, &spans)
}

fn build(name: &str, free: &FreeOperad, spans: &HashMap<usize, Vec<SparseVec>>) -> Result<OperadStructure> {
    let max = free.max_arity();
    if max < 1 {
        return Err(OpkError::arg("operads are built from arity 1 on"));
    }
    let ring = free.ring();
    let mut b = Builder {
        free,
        pieces: (0..=max).map(|_| Vec::new()).collect(),
    };
    for n in 2..=max {
        let mut offset = 0;
        for s in 1..n {
            let comp = free.component(n, s);
            if comp.is_empty() {
                continue;
            }
            let rows = ideal_rows(free, spans, n, s);
            let quotient = QuotientModule::new(ring, comp.len(), rows).map_err(|TorsionFound(factors)| OpkError::Torsion {
                arity: n,
                factors,
                context: format!("{name}, weight {s}"),
            })?;
            let r = quotient.rank();
            b.pieces[n].push(Piece {
                weight: s,
                offset,
                quotient,
            });
            offset += r;
        }
    }
    let mut module = SymSequence::zero(ring, max).with_component(1, Vec::new(), vec![0], vec![0])?;
    for n in 2..=max {
        let lifts = b.lifts(n);
        let mut gens = Vec::new();
        for i in 1..n {
            let w = Permutation::simple(n, i)?;
            let cols = lifts
                .iter()
                .map(|&(s, l)| {
                    let comp = free.component(n, s);
                    let mut image = Vec::new();
                    for &(j, c) in l {
                        for (e, x) in free.act(&w, &comp.elems()[j]) {
                            image.push((b.free_index(n, s, &e), ring.mul(c, x)));
                        }
                    }
                    b.project(n, s, &sparse::collect(ring, image))
                })
                .collect();
            gens.push(ExactMatrix::from_columns(ring, lifts.len(), cols));
        }
        let weights = lifts.iter().map(|&(s, _)| s as i64).collect();
        module = module.with_component(n, gens, vec![0; lifts.len()], weights)?;
    }
    let mut tables = Vec::new();
    for m in 2..=max {
        for i in 1..=m {
            for k in 2..=max + 1 - m {
                let n = m + k - 1;
                let (lm, lk) = (b.lifts(m), b.lifts(k));
                let mut images = Vec::with_capacity(lm.len() * lk.len());
                for &(s1, p) in &lm {
                    for &(s2, q) in &lk {
                        let (cm, ck) = (free.component(m, s1), free.component(k, s2));
                        let mut terms = Vec::new();
                        for &(x, c) in p {
                            for &(y, d) in q {
                                let e = graft(&cm.elems()[x], i, &ck.elems()[y]);
                                terms.push((b.free_index(n, s1 + s2, &e), ring.mul(c, d)));
                            }
                        }
                        images.push(b.project(n, s1 + s2, &sparse::collect(ring, terms)));
                    }
                }
                tables.push(CompositionTable { m, i, k, images });
            }
        }
    }
    tables.sort_by_key(|t| (t.m, t.i, t.k));
    debug_assert_eq!(b.rank(1), 1);
    Ok(OperadStructure {
        name: name.to_string(),
        module,
        tables,
    })
}

/// Spanning rows of the ideal component (R)(n)_(s): every tree with s − 1
/// vertices, one vertex x expanded into a relation of arity |x|, the other
/// vertices labelled by generators.
fn ideal_rows(free: &FreeOperad, spans: &HashMap<usize, Vec<SparseVec>>, n: usize, s: usize) -> Vec<SparseVec> {
    let ring = free.ring();
    let gens = free.generators();
    let comp = free.component(n, s);
    let mut rows = Vec::new();
    if s < 2 {
        return rows;
    }
    for tree in reduced_trees(n, s - 1) {
        let arities: Vec<usize> = (0..tree.num_vertices()).map(|v| tree.children(v).len()).collect();
        for x in 0..tree.num_vertices() {
            let Some(span) = spans.get(&arities[x]).filter(|sp| !sp.is_empty()) else {
                continue;
            };
            let radices: Vec<usize> = arities
                .iter()
                .enumerate()
                .map(|(v, &a)| if v == x { 1 } else { gens.rank(a) })
                .collect();
            if radices.contains(&0) {
                continue;
            }
            let rel_comp = free.component(arities[x], 2);
            for labels in mixed_radix(&radices) {
                let base = FreeBasisElem {
                    tree: tree.clone(),
                    labels: labels.into_iter().map(|l| l as u32).collect(),
                };
                for r in span {
                    let row = r
                        .iter()
                        .map(|&(j, c)| {
                            let e = free.expand_vertex(&base, x, &rel_comp.elems()[j]);
                            (comp.index_of(&e).expect("expanded tree lies in the component"), c)
                        })
                        .collect::<Vec<_>>();
                    rows.push(sparse::collect(ring, row));
                }
            }
        }
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: CoefficientRing = CoefficientRing::Rationals;

    #[test]
    fn block_permutation_examples() {
        // Identity outside, u = (1 2) on the block at position 2 of a binary p.
        let u = Permutation::simple(2, 1).unwrap();
        let big = block_permutation(2, 2, 2, &Permutation::identity(2), &u);
        assert_eq!(big.images(), vec![1, 3, 2]);
        // w = (1 2) with q substituted at input 1 of p: D_1 = {1, 2} goes to C_2 = {2, 3}.
        let w = Permutation::simple(2, 1).unwrap();
        let big = block_permutation(2, 2, 1, &w, &Permutation::identity(2));
        assert_eq!(big.images(), vec![2, 3, 1]);
    }

    #[test]
    fn free_operad_on_a_commutative_generator() {
        let m = SymSequence::trivial(Q, 2, 4).unwrap();
        let f = free_operad(&m, 4).unwrap();
        assert_eq!((1..=4).map(|n| f.rank(n)).collect::<Vec<_>>(), vec![1, 1, 3, 15]);
        assert!(f.check_associativity().is_ok());
        assert!(f.check_equivariance(&[]).is_ok());
        assert!(f.check_weights());
    }
}
