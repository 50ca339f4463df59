use serde::{Deserialize, Serialize};

use super::tree::{AbstractTree, CanonicalForm, Slot};
use crate::combinatorics::{PartitionChain, SetPartition};
use crate::error::{OpkError, Result};

/// A tree whose vertices are stratified into consecutive levels.
///
/// Levels run from `first` (the root vertex) to `top` (the targets of the
/// entries); every internal edge drops exactly one level. With module
/// coefficients `first = 0` and `top = d + 1`; with trivial coefficients the
/// outer levels are dropped, so `first = 1` and `top = d`. Vertices flagged
/// as units stand for the operad unit.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LevelTree {
    tree: AbstractTree,
    level: Vec<usize>,
    unit: Vec<bool>,
    first: usize,
    top: usize,
}

/// Isomorphism-invariant form of a [`LevelTree`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalLevelTree {
    pub form: CanonicalForm,
    pub unit: Vec<bool>,
    pub first: usize,
}

impl LevelTree {
    pub fn new(tree: AbstractTree, first: usize, unit: Vec<bool>) -> Result<Self> {
        let Slot::Vertex(_) = tree.root() else {
            return Err(OpkError::arg("a tree with levels needs a root vertex"));
        };
        if unit.len() != tree.num_vertices() {
            return Err(OpkError::arg("one unit flag per vertex expected"));
        }
        if (0..tree.num_vertices()).any(|v| unit[v] && tree.inputs(v).len() != 1) {
            return Err(OpkError::arg("unit vertices must have exactly one input"));
        }
        let level: Vec<usize> = tree.depths().into_iter().map(|d| d + first).collect();
        let top = level.iter().copied().max().unwrap_or(first);
        for v in 0..tree.num_vertices() {
            let has_entry = tree.inputs(v).iter().any(|s| matches!(s, Slot::Entry(_)));
            if has_entry && level[v] != top {
                return Err(OpkError::arg("entries must target vertices of the top level"));
            }
            if level[v] < top && tree.inputs(v).is_empty() {
                return Err(OpkError::arg("a vertex below the top level has no input"));
            }
        }
        Ok(LevelTree {
            tree,
            level,
            unit,
            first,
            top,
        })
    }

    pub fn tree(&self) -> &AbstractTree {
        &self.tree
    }

    pub fn level(&self, v: usize) -> usize {
        self.level[v]
    }

    pub fn is_unit(&self, v: usize) -> bool {
        self.unit[v]
    }

    pub fn first_level(&self) -> usize {
        self.first
    }

    pub fn top_level(&self) -> usize {
        self.top
    }

    pub fn num_levels(&self) -> usize {
        self.top - self.first + 1
    }

    pub fn vertices_at(&self, l: usize) -> Vec<usize> {
        (0..self.level.len()).filter(|&v| self.level[v] == l).collect()
    }

    /// Some level consists of unit vertices only.
    pub fn is_degenerate(&self) -> bool {
        (self.first..=self.top).any(|l| self.vertices_at(l).iter().all(|&v| self.unit[v]))
    }

    /// Merges the levels `i` and `i + 1` by composing each vertex of level
    /// `i` with the vertices above it.
    pub fn contract_level(&self, i: usize) -> Result<LevelTree> {
        if i < self.first || i >= self.top {
            return Err(OpkError::arg(format!(
                "level {i} cannot be merged with the next one (levels {}..{})",
                self.first, self.top
            )));
        }
        let mut t = self.tree.clone();
        let mut unit = self.unit.clone();
        let mut level = self.level.clone();
        loop {
            let parents = t.parents();
            let Some(v) = (0..t.num_vertices()).find(|&v| level[v] == i + 1) else {
                break;
            };
            let u = parents[v].expect("vertex above the first level has a parent");
            t = t.merge_into_parent(v, u);
            unit[u] = unit[u] && unit[v];
            unit.remove(v);
            level.remove(v);
        }
        LevelTree::new(t, self.first, unit)
    }

    pub fn canonical(&self) -> CanonicalLevelTree {
        let (form, index) = self.tree.canonical_with_map();
        let mut unit = vec![false; index.len()];
        for (v, &c) in index.iter().enumerate() {
            unit[c] = self.unit[v];
        }
        CanonicalLevelTree {
            form,
            unit,
            first: self.first,
        }
    }

    /// For trivial coefficients and entries {1..n}: λ_j is the partition by
    /// the leaf sets of level j + 1, and the last step is the singletons.
    pub fn partition_chain(&self) -> Result<PartitionChain> {
        if self.first != 1 {
            return Err(OpkError::arg("partition chains describe trivial-coefficient level trees"));
        }
        let n = self.tree.arity();
        let leaves = self.tree.leaf_sets();
        let mut steps = Vec::new();
        for l in self.first..=self.top {
            let blocks: Vec<Vec<usize>> = self
                .vertices_at(l)
                .iter()
                .map(|&v| leaves[v].iter().map(|&e| e as usize).collect())
                .collect();
            steps.push(SetPartition::new(n, &blocks)?);
        }
        steps.push(SetPartition::singletons(n));
        PartitionChain::new(steps)
    }

    /// Inverse of [`partition_chain`](Self::partition_chain): a chain from
    /// the one-block partition to the singletons, with a vertex per block
    /// of every step but the last. Vertices whose block survives unchanged
    /// to the next step are units.
    pub fn from_partition_chain(chain: &PartitionChain) -> Result<LevelTree> {
        let steps = chain.steps();
        let d = steps.len() - 1;
        if d == 0 || !steps[0].is_one_block() || !steps[d].is_singletons() {
            return Err(OpkError::arg("chain must run from the one-block partition to the singletons"));
        }
        let mut offsets = vec![0];
        for s in &steps[..d] {
            offsets.push(offsets.last().unwrap() + s.num_blocks());
        }
        let mut inputs = Vec::new();
        let mut unit = Vec::new();
        for j in 0..d {
            for &b in steps[j].masks() {
                let ins: Vec<Slot> = if j + 1 == d {
                    crate::combinatorics::mask_elements(b).map(|k| Slot::Entry(k as u32 + 1)).collect()
                } else {
                    steps[j + 1]
                        .masks()
                        .iter()
                        .enumerate()
                        .filter(|&(_, &c)| c & b == c)
                        .map(|(idx, _)| Slot::Vertex(offsets[j + 1] + idx))
                        .collect()
                };
                unit.push(j + 1 < d && steps[j + 1].masks().contains(&b));
                inputs.push(ins);
            }
        }
        // Top-level vertices over a single entry are units as well.
        for (v, ins) in inputs.iter().enumerate().skip(offsets[d - 1]) {
            unit[v] = ins.len() == 1;
        }
        LevelTree::new(AbstractTree::new(inputs, Slot::Vertex(0))?, 1, unit)
    }
}

/// Level tag of a vertex of a composite tree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Tag {
    /// Lower level: the source of the root.
    L,
    /// Main level.
    P,
    /// Upper level: the targets of the entries.
    R,
}

/// A tree with a lower, a main and an upper level.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompositeTree {
    tree: AbstractTree,
    tags: Vec<Tag>,
}

impl CompositeTree {
    /// Tags are forced by the tree: R on the targets of entries, L on the
    /// source of the root, P elsewhere. `tags` must agree with that.
    pub fn new(tree: AbstractTree, tags: Vec<Tag>) -> Result<Self> {
        if tags.len() != tree.num_vertices() {
            return Err(OpkError::arg("one tag per vertex expected"));
        }
        let Slot::Vertex(root) = tree.root() else {
            return Err(OpkError::arg("a composite tree needs a root vertex"));
        };
        for v in 0..tree.num_vertices() {
            let ins = tree.inputs(v);
            let has_entry = ins.iter().any(|s| matches!(s, Slot::Entry(_)));
            let expected = if v == root {
                Tag::L
            } else if has_entry {
                Tag::R
            } else {
                Tag::P
            };
            if tags[v] != expected {
                return Err(OpkError::arg(format!("vertex {v} must be tagged {expected:?}")));
            }
            if tags[v] == Tag::R && !ins.iter().all(|s| matches!(s, Slot::Entry(_))) {
                return Err(OpkError::arg("upper-level vertices take tree entries only"));
            }
        }
        Ok(CompositeTree { tree, tags })
    }

    /// Tags every vertex as forced by the tree structure.
    pub fn from_tree(tree: AbstractTree) -> Result<Self> {
        let Slot::Vertex(root) = tree.root() else {
            return Err(OpkError::arg("a composite tree needs a root vertex"));
        };
        let tags = (0..tree.num_vertices())
            .map(|v| {
                if v == root {
                    Tag::L
                } else if tree.inputs(v).iter().any(|s| matches!(s, Slot::Entry(_))) {
                    Tag::R
                } else {
                    Tag::P
                }
            })
            .collect();
        Self::new(tree, tags)
    }

    pub fn tree(&self) -> &AbstractTree {
        &self.tree
    }

    pub fn tag(&self, v: usize) -> Tag {
        self.tags[v]
    }

    /// Main-level vertices all have at least two entries.
    pub fn is_reduced(&self) -> bool {
        (0..self.tags.len()).all(|v| self.tags[v] != Tag::P || self.tree.inputs(v).len() >= 2)
    }
}

/// Orders of the vertices in which every vertex comes after its parent
/// (`None` marks vertices that only need to come after nothing).
pub fn linear_extensions(parent: &[Option<usize>]) -> Vec<Vec<usize>> {
    fn go(parent: &[Option<usize>], placed: &mut Vec<bool>, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == parent.len() {
            out.push(cur.clone());
            return;
        }
        for v in 0..parent.len() {
            if !placed[v] && parent[v].map_or(true, |p| placed[p]) {
                placed[v] = true;
                cur.push(v);
                go(parent, placed, cur, out);
                cur.pop();
                placed[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(parent, &mut vec![false; parent.len()], &mut Vec::new(), &mut out);
    out
}

/// Inserts unit vertices along the edges so that every internal edge drops
/// exactly one level and every entry starts from level `top`.
fn fill_units(tree: &AbstractTree, level: &[usize], first: usize, top: usize) -> Result<LevelTree> {
    let k = tree.num_vertices();
    let mut inputs: Vec<Vec<Slot>> = vec![Vec::new(); k];
    let mut unit = vec![false; k];
    // Returns the slot to plug at level `at` for the input `s`.
    let chain = |s: Slot, at: usize, inputs: &mut Vec<Vec<Slot>>, unit: &mut Vec<bool>| -> Slot {
        let src_level = match s {
            Slot::Vertex(c) => level[c],
            Slot::Entry(_) => top + 1,
        };
        let mut cur = s;
        for _ in at..src_level {
            inputs.push(vec![cur]);
            unit.push(true);
            cur = Slot::Vertex(inputs.len() - 1);
        }
        cur
    };
    for v in 0..k {
        let own: Vec<Slot> = tree.inputs(v).to_vec();
        let mut plugged = Vec::with_capacity(own.len());
        for s in own {
            plugged.push(chain(s, level[v] + 1, &mut inputs, &mut unit));
        }
        inputs[v] = plugged;
    }
    let Slot::Vertex(r) = tree.root() else {
        return Err(OpkError::arg("cannot levelize the trivial tree"));
    };
    if level[r] != first {
        return Err(OpkError::arg("root vertex must sit on the first level"));
    }
    LevelTree::new(AbstractTree::new(inputs, tree.root())?, first, unit)
}

/// Trees that can be spread over levels.
pub trait Levelize {
    fn levelizations(&self) -> Vec<LevelTree>;
}

impl Levelize for AbstractTree {
    /// Trivial coefficients: the vertices go to distinct levels 1..d.
    fn levelizations(&self) -> Vec<LevelTree> {
        let d = self.num_vertices();
        linear_extensions(&self.parents())
            .into_iter()
            .map(|order| {
                let mut level = vec![0; d];
                for (pos, &v) in order.iter().enumerate() {
                    level[v] = pos + 1;
                }
                fill_units(self, &level, 1, d).expect("linear extension gives a level tree")
            })
            .collect()
    }
}

impl Levelize for CompositeTree {
    /// The main-level vertices go to distinct levels 1..d, the lower vertex
    /// to level 0 and the upper vertices to level d + 1.
    fn levelizations(&self) -> Vec<LevelTree> {
        let main: Vec<usize> = (0..self.tags.len()).filter(|&v| self.tags[v] == Tag::P).collect();
        let d = main.len();
        let pos = |v: usize| main.iter().position(|&x| x == v);
        let parents = self.tree.parents();
        let main_parent: Vec<Option<usize>> = main
            .iter()
            .map(|&v| parents[v].and_then(|p| pos(p)))
            .collect();
        linear_extensions(&main_parent)
            .into_iter()
            .map(|order| {
                let mut level = vec![0; self.tags.len()];
                for (v, t) in self.tags.iter().enumerate() {
                    if *t == Tag::R {
                        level[v] = d + 1;
                    }
                }
                for (l, &idx) in order.iter().enumerate() {
                    level[main[idx]] = l + 1;
                }
                fill_units(&self.tree, &level, 0, d + 1).expect("linear extension gives a level tree")
            })
            .collect()
    }
}

pub fn enumerate_levelizations<T: Levelize>(t: &T) -> Vec<LevelTree> {
    t.levelizations()
}

#[cfg(test)]
mod tests {
    use super::*;
    use Slot::{Entry as E, Vertex as V};

    /// Lower vertex u1 over v1, v2; v1 over w1, w2; v2 over w3, w4, w5;
    /// w1 = {2, 4}, w2 = {6}, w3 = {1}, w4 = {3}, w5 = {5}.
    fn composite_example() -> CompositeTree {
        let t = AbstractTree::new(
            vec![
                vec![V(1), V(2)],
                vec![V(3), V(4)],
                vec![V(5), V(6), V(7)],
                vec![E(2), E(4)],
                vec![E(6)],
                vec![E(1)],
                vec![E(3)],
                vec![E(5)],
            ],
            V(0),
        )
        .unwrap();
        CompositeTree::from_tree(t).unwrap()
    }

    /// Levels 0, 1, 2: u1 over v1, v2; v1 over w1, w2; v2 over w3;
    /// w1 = {2}, w2 = {4, 1, 6}, w3 = {3, 5}.
    fn level_example() -> LevelTree {
        let t = AbstractTree::new(
            vec![
                vec![V(1), V(2)],
                vec![V(3), V(4)],
                vec![V(5)],
                vec![E(2)],
                vec![E(4), E(1), E(6)],
                vec![E(3), E(5)],
            ],
            V(0),
        )
        .unwrap();
        LevelTree::new(t, 0, vec![false; 6]).unwrap()
    }

    #[test]
    fn composite_tree_has_two_levelizations_with_a_common_face() {
        let c = composite_example();
        assert!(c.is_reduced());
        let ls = enumerate_levelizations(&c);
        assert_eq!(ls.len(), 2);
        assert_ne!(ls[0].canonical(), ls[1].canonical());
        let f0 = ls[0].contract_level(1).unwrap().canonical();
        let f1 = ls[1].contract_level(1).unwrap().canonical();
        assert_eq!(f0, f1);
    }

    #[test]
    fn faces_of_the_level_example() {
        let t = level_example();
        // Merging levels 1 and 2: x1 over p1(y1, y2) = {1,2,4,6} and p2(y3) = {3,5}.
        let upper = t.contract_level(1).unwrap();
        let expected = AbstractTree::new(
            vec![vec![V(1), V(2)], vec![E(2), E(4), E(1), E(6)], vec![E(3), E(5)]],
            V(0),
        )
        .unwrap();
        assert_eq!(upper.tree().canonical(), expected.canonical());
        // Merging levels 0 and 1: x1(p1, p2) over y1, y2, y3.
        let lower = t.contract_level(0).unwrap();
        let expected = AbstractTree::new(
            vec![vec![V(1), V(2), V(3)], vec![E(2)], vec![E(4), E(1), E(6)], vec![E(3), E(5)]],
            V(0),
        )
        .unwrap();
        assert_eq!(lower.tree().canonical(), expected.canonical());
        assert!(t.contract_level(2).is_err());
    }

    #[test]
    fn corolla_and_incomparable_vertices() {
        let c = AbstractTree::corolla(&[1, 2, 3]);
        assert_eq!(enumerate_levelizations(&c).len(), 1);
        let t = AbstractTree::new(vec![vec![V(1), V(2)], vec![E(1), E(2)], vec![E(3), E(4)]], V(0)).unwrap();
        let ls = enumerate_levelizations(&t);
        assert_eq!(ls.len(), 2);
        for l in &ls {
            assert_eq!(l.num_levels(), 3);
            assert!(!l.is_degenerate());
            let chain = l.partition_chain().unwrap();
            assert!(chain.is_strict());
            assert_eq!(LevelTree::from_partition_chain(&chain).unwrap().canonical(), l.canonical());
        }
    }
}
