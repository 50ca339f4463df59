use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::permutation::Permutation;
use crate::error::{OpkError, Result};

/// Largest ground set supported by the bitmask representation.
pub const MAX_GROUND: usize = 63;

/// Bitmask of a subset of {1..n}: bit k−1 stands for k.
pub type Mask = u64;

pub(crate) fn mask_min(m: Mask) -> usize {
    m.trailing_zeros() as usize
}

pub(crate) fn mask_elements(m: Mask) -> impl Iterator<Item = usize> {
    let mut m = m;
    std::iter::from_fn(move || {
        if m == 0 {
            return None;
        }
        let k = m.trailing_zeros() as usize;
        m &= m - 1;
        Some(k)
    })
}

pub(crate) fn full_mask(n: usize) -> Mask {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Image of a mask under a 0-based permutation of positions.
pub(crate) fn permute_mask(w: &Permutation, m: Mask) -> Mask {
    mask_elements(m).fold(0, |acc, k| acc | 1 << w.at(k))
}

/// A partition of {1..n} into nonempty blocks, kept in canonical form
/// (blocks sorted by their minimum).
///
/// Order: `a ≤ b` when `b` refines `a`, so the one-block
/// partition is the smallest element and the singletons are the largest.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SetPartition {
    n: usize,
    blocks: Vec<Mask>,
}

impl SetPartition {
    /// From 1-based blocks in any order.
    pub fn new(n: usize, blocks: &[Vec<usize>]) -> Result<Self> {
        if n > MAX_GROUND {
            return Err(OpkError::arg(format!("ground set of size {n} exceeds {MAX_GROUND}")));
        }
        let mut masks = Vec::with_capacity(blocks.len());
        let mut union = 0;
        for b in blocks {
            let mut m: Mask = 0;
            for &x in b {
                if x == 0 || x > n {
                    return Err(OpkError::arg(format!("element {x} outside 1..{n}")));
                }
                m |= 1 << (x - 1);
            }
            if m == 0 || m & union != 0 || m.count_ones() as usize != b.len() {
                return Err(OpkError::arg(format!("blocks {blocks:?} are not disjoint and nonempty")));
            }
            union |= m;
            masks.push(m);
        }
        if union != full_mask(n) {
            return Err(OpkError::arg(format!("blocks {blocks:?} do not cover 1..{n}")));
        }
        Ok(Self::from_masks(n, masks))
    }

    pub(crate) fn from_masks(n: usize, mut blocks: Vec<Mask>) -> Self {
        blocks.sort_unstable_by_key(|&m| mask_min(m));
        SetPartition { n, blocks }
    }

    pub fn one_block(n: usize) -> Self {
        SetPartition {
            n,
            blocks: if n == 0 { vec![] } else { vec![full_mask(n)] },
        }
    }

    pub fn singletons(n: usize) -> Self {
        SetPartition {
            n,
            blocks: (0..n).map(|k| 1 << k).collect(),
        }
    }

    pub fn ground_size(&self) -> usize {
        self.n
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn masks(&self) -> &[Mask] {
        &self.blocks
    }

    /// Blocks as sorted 1-based element lists, in canonical order.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        self.blocks
            .iter()
            .map(|&m| mask_elements(m).map(|k| k + 1).collect())
            .collect()
    }

    /// Index of the block containing the 1-based element `x`.
    pub fn block_of(&self, x: usize) -> usize {
        self.blocks
            .iter()
            .position(|&m| m & (1 << (x - 1)) != 0)
            .expect("element in ground set")
    }

    pub fn is_one_block(&self) -> bool {
        self.blocks.len() == 1
    }

    pub fn is_singletons(&self) -> bool {
        self.blocks.len() == self.n
    }

    /// `self ≤ other`: every block of `other` lies in a block of `self`.
    pub(crate) fn le(&self, other: &SetPartition) -> bool {
        other
            .blocks
            .iter()
            .all(|&b| self.blocks.iter().any(|&a| b & !a == 0))
    }

    pub(crate) fn lt(&self, other: &SetPartition) -> bool {
        self.blocks.len() < other.blocks.len() && self.le(other)
    }
}

impl fmt::Debug for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .blocks()
            .iter()
            .map(|b| {
                let s: Vec<String> = b.iter().map(|x| x.to_string()).collect();
                format!("{{{}}}", s.join(","))
            })
            .collect();
        write!(f, "{}", parts.join(""))
    }
}

/// All partitions of {1..r} in restricted-growth-string order.
pub fn enumerate_partitions(r: usize) -> Result<Vec<SetPartition>> {
    if r == 0 {
        return Err(OpkError::arg("partitions of the empty set are not enumerated"));
    }
    if r > MAX_GROUND {
        return Err(OpkError::arg(format!("ground set of size {r} exceeds {MAX_GROUND}")));
    }
    fn go(r: usize, k: usize, blocks: &mut Vec<Mask>, out: &mut Vec<SetPartition>) {
        if k == r {
            out.push(SetPartition {
                n: r,
                blocks: blocks.clone(),
            });
            return;
        }
        for b in 0..blocks.len() {
            blocks[b] |= 1 << k;
            go(r, k + 1, blocks, out);
            blocks[b] &= !(1 << k);
        }
        blocks.push(1 << k);
        go(r, k + 1, blocks, out);
        blocks.pop();
    }
    let mut out = Vec::new();
    go(r, 0, &mut Vec::new(), &mut out);
    Ok(out)
}

/// `a ≤ b` in the refinement order (one-block partition smallest).
pub fn refines(a: &SetPartition, b: &SetPartition) -> Result<bool> {
    if a.n != b.n {
        return Err(OpkError::arg(format!(
            "partitions of {{1..{}}} and {{1..{}}} are not comparable",
            a.n, b.n
        )));
    }
    Ok(a.le(b))
}

/// Elementwise image of the blocks under `w`.
pub fn permute_partition(w: &Permutation, lambda: &SetPartition) -> Result<SetPartition> {
    if w.len() != lambda.n {
        return Err(OpkError::arg("permutation and partition sizes differ"));
    }
    Ok(SetPartition::from_masks(
        lambda.n,
        lambda.blocks.iter().map(|&m| permute_mask(w, m)).collect(),
    ))
}

/// A chain λ_0 ≤ λ_1 ≤ … ≤ λ_n of partitions of the same set.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PartitionChain {
    steps: Vec<SetPartition>,
}

impl PartitionChain {
    pub fn new(steps: Vec<SetPartition>) -> Result<Self> {
        if steps.is_empty() {
            return Err(OpkError::arg("empty partition chain"));
        }
        for w in steps.windows(2) {
            if !refines(&w[0], &w[1])? {
                return Err(OpkError::arg(format!("{} ≤ {} fails", w[0], w[1])));
            }
        }
        Ok(PartitionChain { steps })
    }

    pub(crate) fn from_steps_unchecked(steps: Vec<SetPartition>) -> Self {
        PartitionChain { steps }
    }

    pub fn steps(&self) -> &[SetPartition] {
        &self.steps
    }

    pub fn into_steps(self) -> Vec<SetPartition> {
        self.steps
    }

    /// Number of steps minus one.
    pub fn length(&self) -> usize {
        self.steps.len() - 1
    }

    pub fn is_strict(&self) -> bool {
        self.steps.windows(2).all(|w| w[0].lt(&w[1]))
    }

    pub fn permute(&self, w: &Permutation) -> Result<PartitionChain> {
        let steps = self
            .steps
            .iter()
            .map(|l| permute_partition(w, l))
            .collect::<Result<Vec<_>>>()?;
        Ok(PartitionChain { steps })
    }
}

impl fmt::Debug for PartitionChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.steps.iter().map(|l| l.to_string()).collect();
        write!(f, "{}", s.join(" < "))
    }
}

/// The partitions of {1..r} with the strict-refinement successor lists,
/// shared by the chain enumerators.
pub(crate) struct PartitionPoset {
    pub parts: Vec<SetPartition>,
    /// `above[i]`: indices j with parts[i] < parts[j].
    pub above: Vec<Vec<usize>>,
    pub bottom: usize,
    pub top: usize,
}

impl PartitionPoset {
    pub fn new(r: usize) -> Result<Self> {
        let parts = enumerate_partitions(r)?;
        let above = parts
            .iter()
            .map(|a| (0..parts.len()).filter(|&j| a.lt(&parts[j])).collect())
            .collect();
        let bottom = parts.iter().position(|p| p.is_one_block()).expect("one-block partition");
        let top = parts.iter().position(|p| p.is_singletons()).expect("singletons");
        Ok(PartitionPoset {
            parts,
            above,
            bottom,
            top,
        })
    }

    /// Strict chains from the bottom to the top, grouped by length.
    pub fn strict_chains(&self) -> Vec<Vec<PartitionChain>> {
        let r = self.parts[0].ground_size();
        let mut by_len: Vec<Vec<PartitionChain>> = vec![Vec::new(); r.max(1)];
        if self.bottom == self.top {
            by_len[0].push(PartitionChain::from_steps_unchecked(vec![self.parts[self.bottom].clone()]));
            return by_len;
        }
        let mut path = vec![self.bottom];
        self.dfs(&mut path, &mut by_len);
        by_len
    }

    fn dfs(&self, path: &mut Vec<usize>, out: &mut Vec<Vec<PartitionChain>>) {
        let last = *path.last().expect("nonempty path");
        if last == self.top {
            let steps = path.iter().map(|&i| self.parts[i].clone()).collect();
            out[path.len() - 1].push(PartitionChain::from_steps_unchecked(steps));
            return;
        }
        for &j in &self.above[last] {
            path.push(j);
            self.dfs(path, out);
            path.pop();
        }
    }
}

/// Strict chains λ_0 < … < λ_length from the one-block partition to the
/// singletons.
pub fn enumerate_strict_chains(r: usize, length: usize) -> Result<Vec<PartitionChain>> {
    if r < 2 {
        return Err(OpkError::arg("strict chains need r ≥ 2"));
    }
    let chains = PartitionPoset::new(r)?.strict_chains();
    Ok(chains.into_iter().nth(length).unwrap_or_default())
}

/// μ(0̂, 1̂) of the partition lattice of {1..r} from the recursive definition.
pub fn mobius_bottom_top(r: usize) -> Result<i64> {
    if r < 2 {
        return Err(OpkError::arg("Möbius function needs r ≥ 2"));
    }
    let poset = PartitionPoset::new(r)?;
    let mut order: Vec<usize> = (0..poset.parts.len()).collect();
    order.sort_by_key(|&i| poset.parts[i].num_blocks());
    let mut mu: HashMap<usize, i64> = HashMap::new();
    for &y in &order {
        let value = if y == poset.bottom {
            1
        } else {
            -order
                .iter()
                .filter(|&&z| mu.contains_key(&z) && poset.parts[z].lt(&poset.parts[y]))
                .map(|z| mu[z])
                .sum::<i64>()
        };
        mu.insert(y, value);
    }
    Ok(mu[&poset.top])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: usize, b: &[&[usize]]) -> SetPartition {
        SetPartition::new(n, &b.iter().map(|x| x.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn bell_numbers() {
        let counts: Vec<usize> = (1..=6).map(|r| enumerate_partitions(r).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 2, 5, 15, 52, 203]);
        assert!(enumerate_partitions(0).is_err());
    }

    #[test]
    fn refinement_examples() {
        let a = p(4, &[&[1, 3], &[2, 4]]);
        let b = p(4, &[&[1], &[3], &[2, 4]]);
        assert!(refines(&a, &b).unwrap());
        assert!(!refines(&b, &a).unwrap());
        let c = p(3, &[&[1, 2], &[3]]);
        let d = p(3, &[&[1, 3], &[2]]);
        assert!(!refines(&c, &d).unwrap() && !refines(&d, &c).unwrap());
        assert!(refines(&a, &c).is_err());
    }

    #[test]
    fn permutation_acts_elementwise() {
        let w = Permutation::new(&[2, 3, 1]).unwrap();
        let l = p(3, &[&[1, 2], &[3]]);
        assert_eq!(permute_partition(&w, &l).unwrap(), p(3, &[&[2, 3], &[1]]));
    }

    #[test]
    fn chain_counts_and_mobius() {
        assert_eq!(enumerate_strict_chains(2, 1).unwrap().len(), 1);
        assert_eq!(enumerate_strict_chains(3, 2).unwrap().len(), 3);
        assert_eq!(enumerate_strict_chains(4, 3).unwrap().len(), 18);
        assert_eq!(enumerate_strict_chains(3, 5).unwrap().len(), 0);
        assert_eq!(mobius_bottom_top(2).unwrap(), -1);
        assert_eq!(mobius_bottom_top(3).unwrap(), 2);
        assert_eq!(mobius_bottom_top(5).unwrap(), 24);
    }
}
