//! Free operads on a connected Σ*-module M with M(1) = 0.
//!
//! A basis element of F(M)(n) is a reduced tree with entries {1..n} whose
//! vertices carry basis elements of M. A vertex with inputs c_1, …, c_a
//! (ordered by least entry) holds an element of M(a) through the
//! order-preserving identification of its input set with {1..a}. With this
//! convention tree automorphisms fixing the entries are trivial, so the
//! basis needs no orbit normalization. Weight is the number of vertices.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::symseq::{mixed_radix, SymSequence};
use crate::combinatorics::{full_mask, mask_elements, mask_min, permute_mask, Mask, Permutation};
use crate::error::{OpkError, Result};
use crate::exact_linalg::{CoefficientRing, Scalar};
use crate::trees::{lex_cmp, reduced_trees, ReducedTree};

/// A treewise tensor: a canonical reduced tree and, for each vertex in
/// canonical order, a basis index of M(arity of the vertex).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FreeBasisElem {
    pub tree: ReducedTree,
    pub labels: Vec<u32>,
}

impl FreeBasisElem {
    pub fn arity(&self) -> usize {
        self.tree.arity()
    }

    pub fn weight(&self) -> usize {
        self.labels.len()
    }

    /// The trivial tree of arity 1, with no vertices.
    pub fn unit() -> Self {
        FreeBasisElem {
            tree: ReducedTree::canonical_unchecked(1, Vec::new()),
            labels: Vec::new(),
        }
    }

    pub fn is_unit(&self) -> bool {
        self.labels.is_empty()
    }

    /// Builds the canonical element from vertices given in any order.
    pub fn from_vertices(n: usize, mut vertices: Vec<(Mask, u32)>) -> Self {
        let depth: Vec<usize> = vertices
            .iter()
            .map(|&(m, _)| vertices.iter().filter(|&&(x, _)| x != m && x & m == m).count())
            .collect();
        let mut keyed: Vec<(usize, Mask, u32)> = vertices.drain(..).zip(depth).map(|((m, l), d)| (d, m, l)).collect();
        keyed.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| lex_cmp(a.1, b.1)));
        let masks = keyed.iter().map(|&(_, m, _)| m).collect();
        FreeBasisElem {
            tree: ReducedTree::canonical_unchecked(n, masks),
            labels: keyed.iter().map(|&(_, _, l)| l).collect(),
        }
    }

    pub(crate) fn vertices(&self) -> Vec<(Mask, u32)> {
        self.tree.masks().iter().copied().zip(self.labels.iter().copied()).collect()
    }
}

/// `p ∘_i q` on treewise tensors: the root of q is grafted onto entry i of p
/// (1-based), entries renumbered in order.
pub fn graft(p: &FreeBasisElem, i: usize, q: &FreeBasisElem) -> FreeBasisElem {
    let (m, k) = (p.arity(), q.arity());
    let at = i - 1;
    let low = (1u64 << at) - 1;
    let expand = |mask: Mask| -> Mask {
        let mut out = mask & low;
        out |= (mask >> (at + 1)) << (at + k);
        if mask >> at & 1 == 1 {
            out |= full_mask(k) << at;
        }
        out
    };
    let mut vertices: Vec<(Mask, u32)> = p.vertices().into_iter().map(|(x, l)| (expand(x), l)).collect();
    vertices.extend(q.vertices().into_iter().map(|(x, l)| (x << at, l)));
    FreeBasisElem::from_vertices(m + k - 1, vertices)
}

/// One homogeneous component F(M)(n)_(s), s = number of vertices.
#[derive(Clone, Debug)]
pub struct FreeComponent {
    n: usize,
    weight: usize,
    elems: Vec<FreeBasisElem>,
    index: HashMap<FreeBasisElem, usize>,
}

impl FreeComponent {
    fn new(m: &SymSequence, n: usize, weight: usize) -> Self {
        let mut elems = Vec::new();
        for tree in reduced_trees(n, weight) {
            let radices: Vec<usize> = (0..tree.num_vertices())
                .map(|v| m.rank(tree.children(v).len()))
                .collect();
            if radices.contains(&0) {
                continue;
            }
            for labels in mixed_radix(&radices) {
                elems.push(FreeBasisElem {
                    tree: tree.clone(),
                    labels: labels.into_iter().map(|x| x as u32).collect(),
                });
            }
        }
        let index = elems.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();
        FreeComponent { n, weight, elems, index }
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    pub fn weight(&self) -> usize {
        self.weight
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn elems(&self) -> &[FreeBasisElem] {
        &self.elems
    }

    pub fn index_of(&self, e: &FreeBasisElem) -> Option<usize> {
        self.index.get(e).copied()
    }
}

/// The free operad F(M) truncated at `max_arity`, for M with degree-0
/// basis elements and M(0) = M(1) = 0.
#[derive(Clone, Debug)]
pub struct FreeOperad {
    generators: SymSequence,
    /// `components[n][s]` for 2 ≤ n ≤ max_arity and 1 ≤ s < n.
    components: Vec<Vec<FreeComponent>>,
}

impl FreeOperad {
    pub fn new(generators: SymSequence, max_arity: usize) -> Result<Self> {
        if generators.rank(0) != 0 || generators.rank(1) != 0 {
            return Err(OpkError::arg("free operads need generators with M(0) = M(1) = 0"));
        }
        if max_arity > generators.max_arity() {
            return Err(OpkError::arg(format!(
                "generators are truncated at arity {}, below {max_arity}",
                generators.max_arity()
            )));
        }
        if (0..=max_arity).any(|r| generators.degrees(r).iter().any(|&d| d != 0)) {
            return Err(OpkError::Unsupported("free operads on graded generators".into()));
        }
        let components = (0..=max_arity)
            .map(|n| (0..n.max(1)).map(|s| FreeComponent::new(&generators, n, s)).collect())
            .collect();
        Ok(FreeOperad { generators, components })
    }

    pub fn ring(&self) -> CoefficientRing {
        self.generators.ring()
    }

    pub fn generators(&self) -> &SymSequence {
        &self.generators
    }

    pub fn max_arity(&self) -> usize {
        self.components.len() - 1
    }

    /// F(M)(n)_(s); empty outside 2 ≤ n ≤ max_arity, 1 ≤ s < n.
    pub fn component(&self, n: usize, s: usize) -> &FreeComponent {
        static EMPTY: std::sync::OnceLock<FreeComponent> = std::sync::OnceLock::new();
        self.components
            .get(n)
            .and_then(|c| c.get(s))
            .filter(|_| s >= 1)
            .unwrap_or_else(|| {
                EMPTY.get_or_init(|| FreeComponent {
                    n: 0,
                    weight: 0,
                    elems: Vec::new(),
                    index: HashMap::new(),
                })
            })
    }

    /// `w_*` of a treewise tensor: entries are relabelled by w and the label
    /// of each vertex is moved by the permutation sorting its new inputs.
    pub fn act(&self, w: &Permutation, e: &FreeBasisElem) -> Vec<(FreeBasisElem, Scalar)> {
        let ring = self.ring();
        let n = e.arity();
        let mut factors: Vec<(Mask, Vec<(usize, Scalar)>)> = Vec::new();
        for v in 0..e.tree.num_vertices() {
            let mins: Vec<usize> = e
                .tree
                .child_masks(v)
                .into_iter()
                .map(|c| mask_min(permute_mask(w, c)))
                .collect();
            let pi = Permutation::ranking(&mins);
            let label = vec![(e.labels[v] as usize, ring.one())];
            let moved = if pi.is_identity() {
                label
            } else {
                self.generators.act_vec(mins.len(), &pi, &label).expect("arity")
            };
            factors.push((permute_mask(w, e.tree.mask(v)), moved));
        }
        expand_tensor(ring, n, &factors)
    }

    /// Replaces vertex `x` of `e` (whose label is ignored) by a 2-vertex
    /// treewise tensor `t` of arity equal to the arity of x.
    pub fn expand_vertex(&self, e: &FreeBasisElem, x: usize, t: &FreeBasisElem) -> FreeBasisElem {
        let children = e.tree.child_masks(x);
        let sub = |m: Mask| mask_elements(m).fold(0, |acc, j| acc | children[j]);
        let mut vertices: Vec<(Mask, u32)> = e
            .vertices()
            .into_iter()
            .enumerate()
            .filter(|&(v, _)| v != x)
            .map(|(_, p)| p)
            .collect();
        vertices.extend(t.vertices().into_iter().map(|(m, l)| (sub(m), l)));
        FreeBasisElem::from_vertices(e.arity(), vertices)
    }
}

/// Expands a tensor of per-vertex label vectors into treewise tensors.
pub(crate) fn expand_tensor(ring: CoefficientRing, n: usize, factors: &[(Mask, Vec<(usize, Scalar)>)]) -> Vec<(FreeBasisElem, Scalar)> {
    let mut partial: Vec<(Vec<u32>, Scalar)> = vec![(Vec::new(), ring.one())];
    for (_, f) in factors {
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
    partial
        .into_iter()
        .map(|(labels, c)| {
            let vertices = factors.iter().map(|&(m, _)| m).zip(labels).collect();
            (FreeBasisElem::from_vertices(n, vertices), c)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: CoefficientRing = CoefficientRing::Rationals;

    #[test]
    fn quadratic_component_dimensions() {
        let com = FreeOperad::new(SymSequence::trivial(Q, 2, 4).unwrap(), 4).unwrap();
        assert_eq!(com.component(3, 1).len(), 0);
        assert_eq!(com.component(3, 2).len(), 3);
        assert_eq!(com.component(4, 3).len(), 15);
        let assoc = FreeOperad::new(SymSequence::regular(Q, 2, 3).unwrap(), 3).unwrap();
        assert_eq!(assoc.component(3, 2).len(), 12);
        let m = SymSequence::trivial(Q, 2, 3)
            .unwrap()
            .direct_sum(&SymSequence::regular(Q, 3, 3).unwrap())
            .unwrap();
        let f = FreeOperad::new(m, 3).unwrap();
        assert_eq!(f.component(3, 1).len(), 6);
        assert!(FreeOperad::new(SymSequence::trivial(Q, 1, 3).unwrap(), 3).is_err());
    }

    #[test]
    fn graft_renumbers_entries() {
        let c = FreeBasisElem {
            tree: ReducedTree::corolla(2),
            labels: vec![0],
        };
        let left = graft(&c, 1, &c);
        assert_eq!(left.tree.masks(), &[0b111, 0b011]);
        let right = graft(&c, 2, &c);
        assert_eq!(right.tree.masks(), &[0b111, 0b110]);
        let big = graft(&right, 1, &c);
        assert_eq!(big.tree.masks(), &[0b1111, 0b0011, 0b1100]);
    }

    #[test]
    fn action_of_transposition_on_sign_labels() {
        let lie = FreeOperad::new(SymSequence::sign(Q, 2, 3).unwrap(), 3).unwrap();
        let c = FreeBasisElem {
            tree: ReducedTree::corolla(2),
            labels: vec![0],
        };
        let t = graft(&c, 1, &c);
        // (1 2) fixes the tree shape but swaps the inputs of the inner vertex.
        let out = lie.act(&Permutation::simple(3, 1).unwrap(), &t);
        assert_eq!(out, vec![(t.clone(), Q.from_int(-1))]);
        let out = lie.act(&Permutation::simple(3, 2).unwrap(), &t);
        assert_eq!(out[0].0.tree.masks(), &[0b111, 0b101]);
    }
}
