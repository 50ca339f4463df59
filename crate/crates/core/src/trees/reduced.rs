//! Reduced trees as laminar families of leaf sets.
//!
//! In a reduced tree every vertex has at least two entries, so a vertex is
//! determined by the set of tree entries above it. The tree is the family of
//! these sets (the root vertex owns the full set). Entries are 0-based here.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::tree::{AbstractTree, CanonicalForm, Slot};
use crate::combinatorics::{full_mask, mask_elements, mask_min, Mask};
use crate::error::{OpkError, Result};

/// Lexicographic comparison of the sorted element lists of two masks.
pub fn lex_cmp(a: Mask, b: Mask) -> Ordering {
    let (mut a, mut b) = (a, b);
    loop {
        match (a == 0, b == 0) {
            (true, true) => return Ordering::Equal,
            (true, false) => return Ordering::Less,
            (false, true) => return Ordering::Greater,
            _ => {}
        }
        let (x, y) = (a.trailing_zeros(), b.trailing_zeros());
        if x != y {
            return x.cmp(&y);
        }
        a &= a - 1;
        b &= b - 1;
    }
}

/// An input of a vertex of a [`ReducedTree`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Child {
    /// A tree entry (0-based).
    Leaf(usize),
    /// A vertex, by index in the canonical order.
    Vertex(usize),
}

/// A reduced tree with entries {0..n−1} and vertices in canonical order:
/// by depth, then lexicographically by leaf set.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ReducedTree {
    n: usize,
    masks: Vec<Mask>,
}

impl ReducedTree {
    /// From any listing of the vertex leaf sets; they must form a laminar
    /// family containing the full set, with every vertex of arity ≥ 2.
    pub fn from_masks(n: usize, masks: Vec<Mask>) -> Result<Self> {
        let full = full_mask(n);
        if n < 2 || !masks.contains(&full) {
            return Err(OpkError::arg("a reduced tree needs n ≥ 2 and a root vertex"));
        }
        for (i, &a) in masks.iter().enumerate() {
            if a & !full != 0 || a.count_ones() < 2 {
                return Err(OpkError::arg("vertex leaf sets must have at least two entries"));
            }
            for &b in &masks[i + 1..] {
                let inter = a & b;
                if a == b || (inter != 0 && inter != a && inter != b) {
                    return Err(OpkError::arg("leaf sets do not form a laminar family"));
                }
            }
        }
        let t = Self::canonical_unchecked(n, masks);
        if (0..t.masks.len()).any(|v| t.children(v).len() < 2) {
            return Err(OpkError::arg("vertex with a single input"));
        }
        Ok(t)
    }

    pub(crate) fn canonical_unchecked(n: usize, mut masks: Vec<Mask>) -> Self {
        let depth = |m: Mask, all: &[Mask]| all.iter().filter(|&&x| x != m && x & m == m).count();
        let keyed: Vec<(usize, Mask)> = masks.iter().map(|&m| (depth(m, &masks), m)).collect();
        let mut keyed = keyed;
        keyed.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| lex_cmp(a.1, b.1)));
        masks = keyed.into_iter().map(|(_, m)| m).collect();
        ReducedTree { n, masks }
    }

    pub fn corolla(n: usize) -> Self {
        ReducedTree {
            n,
            masks: vec![full_mask(n)],
        }
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    pub fn num_vertices(&self) -> usize {
        self.masks.len()
    }

    pub fn masks(&self) -> &[Mask] {
        &self.masks
    }

    pub fn mask(&self, v: usize) -> Mask {
        self.masks[v]
    }

    pub fn index_of(&self, m: Mask) -> Option<usize> {
        self.masks.iter().position(|&x| x == m)
    }

    /// The vertex directly below `v` (`None` for the root vertex).
    pub fn parent(&self, v: usize) -> Option<usize> {
        let m = self.masks[v];
        (0..self.masks.len())
            .filter(|&u| u != v && self.masks[u] & m == m)
            .min_by_key(|&u| self.masks[u].count_ones())
    }

    /// Inputs of `v` ordered by their least entry.
    pub fn children(&self, v: usize) -> Vec<Child> {
        let m = self.masks[v];
        let subs: Vec<usize> = (0..self.masks.len())
            .filter(|&u| u != v && self.masks[u] & m == self.masks[u])
            .collect();
        let maximal: Vec<usize> = subs
            .iter()
            .copied()
            .filter(|&u| {
                !subs
                    .iter()
                    .any(|&w| w != u && self.masks[w] & self.masks[u] == self.masks[u])
            })
            .collect();
        let covered = maximal.iter().fold(0, |acc, &u| acc | self.masks[u]);
        let mut out: Vec<(usize, Child)> = maximal
            .into_iter()
            .map(|u| (mask_min(self.masks[u]), Child::Vertex(u)))
            .chain(mask_elements(m & !covered).map(|k| (k, Child::Leaf(k))))
            .collect();
        out.sort_by_key(|&(k, _)| k);
        out.into_iter().map(|(_, c)| c).collect()
    }

    /// Leaf sets of the inputs of `v`, ordered by least entry.
    pub fn child_masks(&self, v: usize) -> Vec<Mask> {
        self.children(v)
            .into_iter()
            .map(|c| match c {
                Child::Leaf(k) => 1 << k,
                Child::Vertex(u) => self.masks[u],
            })
            .collect()
    }

    /// Internal edges as (source, target) vertex pairs.
    pub fn internal_edges(&self) -> Vec<(usize, usize)> {
        (0..self.masks.len())
            .filter_map(|v| self.parent(v).map(|u| (v, u)))
            .collect()
    }

    /// Contracts the edge out of `v`; the merged vertex keeps the leaf set of
    /// the target.
    pub fn contract(&self, v: usize) -> ReducedTree {
        let masks = self
            .masks
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != v)
            .map(|(_, &m)| m)
            .collect();
        Self::canonical_unchecked(self.n, masks)
    }

    pub fn to_abstract(&self) -> AbstractTree {
        let inputs = (0..self.masks.len())
            .map(|v| {
                self.children(v)
                    .into_iter()
                    .map(|c| match c {
                        Child::Leaf(k) => Slot::Entry(k as u32 + 1),
                        Child::Vertex(u) => Slot::Vertex(u),
                    })
                    .collect()
            })
            .collect();
        AbstractTree::from_parts_unchecked(inputs, Slot::Vertex(0))
    }

    /// From a reduced tree with entries {1..n}.
    pub fn from_abstract(t: &AbstractTree) -> Result<Self> {
        let n = t.arity();
        if !t.is_reduced() || t.entries() != (1..=n as u32).collect::<Vec<_>>() {
            return Err(OpkError::arg("expected a reduced tree with entries 1..n"));
        }
        let masks = t
            .leaf_sets()
            .iter()
            .map(|ls| ls.iter().fold(0, |acc, &e| acc | 1 << (e - 1)))
            .collect();
        Self::from_masks(n, masks)
    }

    pub fn canonical_form(&self) -> CanonicalForm {
        self.to_abstract().canonical()
    }
}

impl std::fmt::Debug for ReducedTree {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.masks.is_empty() {
            return write!(f, "|");
        }
        write!(f, "{:?}", self.to_abstract())
    }
}

/// All reduced trees on the entries of `set`, as laminar families.
fn trees_on(set: Mask) -> Vec<Vec<Mask>> {
    let elems: Vec<usize> = mask_elements(set).collect();
    let mut out = Vec::new();
    // Root children: set partitions of `set` into at least two blocks, built
    // by restricted growth.
    fn partitions(elems: &[usize], k: usize, blocks: &mut Vec<Mask>, out: &mut Vec<Vec<Mask>>) {
        if k == elems.len() {
            if blocks.len() >= 2 {
                out.push(blocks.clone());
            }
            return;
        }
        let bit = 1 << elems[k];
        for b in 0..blocks.len() {
            blocks[b] |= bit;
            partitions(elems, k + 1, blocks, out);
            blocks[b] &= !bit;
        }
        blocks.push(bit);
        partitions(elems, k + 1, blocks, out);
        blocks.pop();
    }
    let mut parts = Vec::new();
    partitions(&elems, 0, &mut Vec::new(), &mut parts);
    for blocks in parts {
        let mut acc: Vec<Vec<Mask>> = vec![vec![set]];
        for b in blocks {
            if b.count_ones() == 1 {
                continue;
            }
            let subs = trees_on(b);
            acc = acc
                .iter()
                .flat_map(|base| {
                    subs.iter().map(move |s| {
                        let mut v = base.clone();
                        v.extend_from_slice(s);
                        v
                    })
                })
                .collect();
        }
        out.extend(acc);
    }
    out
}

/// All reduced trees with entries {0..n−1} and exactly `k` vertices, in a
/// fixed deterministic order.
pub fn reduced_trees(n: usize, k: usize) -> Vec<ReducedTree> {
    if n < 2 || k == 0 || k >= n {
        return Vec::new();
    }
    let mut out: Vec<ReducedTree> = trees_on(full_mask(n))
        .into_iter()
        .filter(|m| m.len() == k)
        .map(|m| ReducedTree::canonical_unchecked(n, m))
        .collect();
    out.sort();
    out
}

/// Isomorphism classes of reduced trees with entries {1..n} and `k` vertices.
pub fn enumerate_reduced_trees(n: usize, k: usize) -> Vec<CanonicalForm> {
    reduced_trees(n, k).iter().map(ReducedTree::canonical_form).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        assert_eq!(enumerate_reduced_trees(3, 1).len(), 1);
        assert_eq!(enumerate_reduced_trees(3, 2).len(), 3);
        assert_eq!(enumerate_reduced_trees(4, 3).len(), 15);
        assert!(enumerate_reduced_trees(4, 4).is_empty());
        let totals: Vec<usize> = (2..=6).map(|n| (1..n).map(|k| reduced_trees(n, k).len()).sum()).collect();
        assert_eq!(totals, vec![1, 4, 26, 236, 2752]);
    }

    #[test]
    fn children_in_leaf_order() {
        let t = ReducedTree::from_masks(4, vec![0b1111, 0b1010]).unwrap();
        assert_eq!(t.children(0), vec![Child::Leaf(0), Child::Vertex(1), Child::Leaf(2)]);
        assert_eq!(t.parent(1), Some(0));
        assert_eq!(t.contract(1), ReducedTree::corolla(4));
        assert!(ReducedTree::from_masks(4, vec![0b1111, 0b0111, 0b0110, 0b0011]).is_err());
    }

    #[test]
    fn abstract_round_trip() {
        for k in 1..5 {
            for t in reduced_trees(5, k) {
                assert_eq!(ReducedTree::from_abstract(&t.to_abstract()).unwrap(), t);
            }
        }
    }
}
