use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{OpkError, Result};

/// An input of a vertex (or the root position): a tree entry or a vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Slot {
    Entry(u32),
    Vertex(usize),
}

/// An edge, named by its source. `target` is `None` for the root edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub source: Slot,
    pub target: Option<usize>,
}

impl Edge {
    pub fn is_internal(&self) -> bool {
        matches!(self.source, Slot::Vertex(_)) && self.target.is_some()
    }
}

/// An oriented tree with entries indexed by a finite set of labels.
///
/// Stored as the entry sets I_v of the vertices and of the root position;
/// together they partition vertices ⊔ entries. A tree without vertices
/// (root slot an entry) is the trivial tree.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AbstractTree {
    inputs: Vec<Vec<Slot>>,
    root: Slot,
}

impl AbstractTree {
    pub fn new(inputs: Vec<Vec<Slot>>, root: Slot) -> Result<Self> {
        let k = inputs.len();
        let mut vertex_seen = vec![false; k];
        let mut entries = BTreeSet::new();
        for s in inputs.iter().flatten().chain(std::iter::once(&root)) {
            match *s {
                Slot::Vertex(v) => {
                    if v >= k || vertex_seen[v] {
                        return Err(OpkError::arg(format!("vertex {v} is not used exactly once as an input")));
                    }
                    vertex_seen[v] = true;
                }
                Slot::Entry(e) => {
                    if !entries.insert(e) {
                        return Err(OpkError::arg(format!("entry {e} occurs twice")));
                    }
                }
            }
        }
        if vertex_seen.iter().any(|&s| !s) {
            return Err(OpkError::arg("some vertex has no outgoing edge"));
        }
        let t = AbstractTree { inputs, root };
        // Each vertex has one outgoing edge; the tree is connected iff every
        // vertex is reached from the root.
        let mut reached = 0;
        let mut stack = vec![root];
        while let Some(s) = stack.pop() {
            if let Slot::Vertex(v) = s {
                reached += 1;
                stack.extend(t.inputs[v].iter().copied());
            }
        }
        if reached != k {
            return Err(OpkError::arg("vertices form a cycle disconnected from the root"));
        }
        Ok(t)
    }

    pub(crate) fn from_parts_unchecked(inputs: Vec<Vec<Slot>>, root: Slot) -> Self {
        AbstractTree { inputs, root }
    }

    /// The tree with one vertex whose entries are `labels`.
    pub fn corolla(labels: &[u32]) -> Self {
        AbstractTree {
            inputs: vec![labels.iter().map(|&e| Slot::Entry(e)).collect()],
            root: Slot::Vertex(0),
        }
    }

    /// The tree with no vertex and a single entry.
    pub fn trivial(label: u32) -> Self {
        AbstractTree {
            inputs: Vec::new(),
            root: Slot::Entry(label),
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.inputs.len()
    }

    pub fn root(&self) -> Slot {
        self.root
    }

    pub fn inputs(&self, v: usize) -> &[Slot] {
        &self.inputs[v]
    }

    /// Entry labels in increasing order.
    pub fn entries(&self) -> Vec<u32> {
        let mut e: Vec<u32> = self
            .inputs
            .iter()
            .flatten()
            .chain(std::iter::once(&self.root))
            .filter_map(|s| match s {
                Slot::Entry(e) => Some(*e),
                Slot::Vertex(_) => None,
            })
            .collect();
        e.sort_unstable();
        e
    }

    pub fn arity(&self) -> usize {
        self.entries().len()
    }

    /// Every vertex has at least two entries.
    pub fn is_reduced(&self) -> bool {
        self.inputs.iter().all(|i| i.len() >= 2)
    }

    /// Target of the outgoing edge of each vertex (`None` for the root edge).
    pub fn parents(&self) -> Vec<Option<usize>> {
        let mut p = vec![None; self.inputs.len()];
        for (u, ins) in self.inputs.iter().enumerate() {
            for s in ins {
                if let Slot::Vertex(v) = *s {
                    p[v] = Some(u);
                }
            }
        }
        p
    }

    /// Distance of each vertex from the root vertex (the root vertex has 0).
    pub fn depths(&self) -> Vec<usize> {
        let mut d = vec![0; self.inputs.len()];
        let mut stack = Vec::new();
        if let Slot::Vertex(r) = self.root {
            stack.push(r);
        }
        while let Some(v) = stack.pop() {
            for s in &self.inputs[v] {
                if let Slot::Vertex(c) = *s {
                    d[c] = d[v] + 1;
                    stack.push(c);
                }
            }
        }
        d
    }

    /// Sorted entry labels above each vertex.
    pub fn leaf_sets(&self) -> Vec<Vec<u32>> {
        fn go(t: &AbstractTree, v: usize, out: &mut Vec<Vec<u32>>) {
            let mut acc = Vec::new();
            for s in &t.inputs[v] {
                match *s {
                    Slot::Entry(e) => acc.push(e),
                    Slot::Vertex(c) => {
                        go(t, c, out);
                        acc.extend_from_slice(&out[c]);
                    }
                }
            }
            acc.sort_unstable();
            out[v] = acc;
        }
        let mut out = vec![Vec::new(); self.inputs.len()];
        if let Slot::Vertex(r) = self.root {
            go(self, r, &mut out);
        }
        out
    }

    /// All edges: one per vertex and one per entry, so |E| = |V| + n.
    pub fn edges(&self) -> Vec<Edge> {
        let mut out = vec![Edge {
            source: self.root,
            target: None,
        }];
        for (u, ins) in self.inputs.iter().enumerate() {
            out.extend(ins.iter().map(|&s| Edge {
                source: s,
                target: Some(u),
            }));
        }
        out.sort();
        out
    }

    pub fn internal_edges(&self) -> Vec<Edge> {
        self.edges().into_iter().filter(Edge::is_internal).collect()
    }

    /// Reindexes the entries through `f`, which must be injective.
    pub fn relabel_entries(&self, f: impl Fn(u32) -> u32) -> AbstractTree {
        let map = |s: &Slot| match *s {
            Slot::Entry(e) => Slot::Entry(f(e)),
            v => v,
        };
        AbstractTree {
            inputs: self.inputs.iter().map(|i| i.iter().map(map).collect()).collect(),
            root: map(&self.root),
        }
    }

    /// Glues the root of `tau` onto the entry `i` of `self`. The entry sets of
    /// `self` minus `i` and of `tau` must be disjoint.
    pub fn graft(&self, i: u32, tau: &AbstractTree) -> Result<AbstractTree> {
        let mine = self.entries();
        if mine.binary_search(&i).is_err() {
            return Err(OpkError::arg(format!("{i} is not an entry of the tree")));
        }
        let theirs = tau.entries();
        if theirs.iter().any(|e| *e != i && mine.binary_search(e).is_ok()) {
            return Err(OpkError::arg("grafted trees share entry labels"));
        }
        let off = self.inputs.len();
        let shift = |s: Slot| match s {
            Slot::Vertex(v) => Slot::Vertex(v + off),
            e => e,
        };
        let glued = shift(tau.root);
        let replace = |s: &Slot| if *s == Slot::Entry(i) { glued } else { *s };
        let mut inputs: Vec<Vec<Slot>> = self.inputs.iter().map(|ins| ins.iter().map(replace).collect()).collect();
        inputs.extend(tau.inputs.iter().map(|ins| ins.iter().map(|&s| shift(s)).collect()));
        Ok(AbstractTree {
            inputs,
            root: replace(&self.root),
        })
    }

    /// Partial composite of trees with entries {1..m} and {1..k}: entries
    /// after `i` move up by k−1 and the entries of `tau` start at `i`.
    pub fn graft_standard(&self, i: u32, tau: &AbstractTree) -> Result<AbstractTree> {
        let m = self.arity() as u32;
        let k = tau.arity() as u32;
        if self.entries() != (1..=m).collect::<Vec<_>>() || tau.entries() != (1..=k).collect::<Vec<_>>() {
            return Err(OpkError::arg("graft_standard needs entries 1..n"));
        }
        if i == 0 || i > m {
            return Err(OpkError::arg(format!("{i} is not an entry of the tree")));
        }
        // Park entry i on a fresh label so it cannot collide with tau's.
        let parked = u32::MAX;
        let sigma = self.relabel_entries(|e| match e.cmp(&i) {
            std::cmp::Ordering::Less => e,
            std::cmp::Ordering::Equal => parked,
            std::cmp::Ordering::Greater => e + k - 1,
        });
        sigma.graft(parked, &tau.relabel_entries(|e| e + i - 1))
    }

    /// Collapses an internal edge: the source vertex is merged into the
    /// target, whose entry set becomes I_u ∖ {v} ⊔ I_v.
    pub fn contract_edge(&self, e: Edge) -> Result<AbstractTree> {
        let (Slot::Vertex(v), Some(u)) = (e.source, e.target) else {
            return Err(OpkError::arg("only internal edges can be contracted"));
        };
        if u >= self.inputs.len() || !self.inputs[u].contains(&Slot::Vertex(v)) {
            return Err(OpkError::arg("not an edge of the tree"));
        }
        Ok(self.merge_into_parent(v, u))
    }

    pub(crate) fn merge_into_parent(&self, v: usize, u: usize) -> AbstractTree {
        let renum = |x: usize| if x > v { x - 1 } else { x };
        let fix = |s: &Slot| match *s {
            Slot::Vertex(x) => Slot::Vertex(renum(x)),
            e => e,
        };
        let mut inputs = Vec::with_capacity(self.inputs.len() - 1);
        for (w, ins) in self.inputs.iter().enumerate() {
            if w == v {
                continue;
            }
            if w == u {
                let mut merged = Vec::new();
                for s in ins {
                    if *s == Slot::Vertex(v) {
                        merged.extend(self.inputs[v].iter().map(fix));
                    } else {
                        merged.push(fix(s));
                    }
                }
                inputs.push(merged);
            } else {
                inputs.push(ins.iter().map(fix).collect());
            }
        }
        AbstractTree {
            inputs,
            root: fix(&self.root),
        }
    }

    /// The quotient τ/σ collapsing the subtree spanned by `vertices` to one
    /// vertex. Returns the quotient and the index of the collapsed vertex.
    pub fn quotient(&self, vertices: &[usize]) -> Result<(AbstractTree, usize)> {
        let set: BTreeSet<usize> = vertices.iter().copied().collect();
        if set.is_empty() || set.iter().any(|&v| v >= self.inputs.len()) {
            return Err(OpkError::arg("invalid vertex set"));
        }
        let parents = self.parents();
        let roots: Vec<usize> = set
            .iter()
            .copied()
            .filter(|&v| parents[v].map_or(true, |p| !set.contains(&p)))
            .collect();
        if roots.len() != 1 {
            return Err(OpkError::arg("vertex set does not span a subtree"));
        }
        let mut t = self.clone();
        let mut top = roots[0];
        // Contract the remaining vertices one at a time, deepest index first
        // to keep the bookkeeping of renumbered indices simple.
        let mut rest: Vec<usize> = set.iter().copied().filter(|&v| v != top).collect();
        while let Some(pos) = {
            let parents = t.parents();
            rest.iter().position(|&v| parents[v].map_or(false, |p| p == top))
        } {
            let v = rest.remove(pos);
            t = t.merge_into_parent(v, top);
            if top > v {
                top -= 1;
            }
            for x in rest.iter_mut() {
                if *x > v {
                    *x -= 1;
                }
            }
        }
        Ok((t, top))
    }

    /// Canonical representative and, for each vertex of `self`, its index in
    /// the representative.
    pub fn canonical_with_map(&self) -> (CanonicalForm, Vec<usize>) {
        let k = self.inputs.len();
        let depths = self.depths();
        let leaves = self.leaf_sets();
        let codes = self.codes();
        let parents = self.parents();
        let max_depth = depths.iter().copied().max().unwrap_or(0);
        let mut index = vec![usize::MAX; k];
        let mut next = 0;
        for d in 0..=max_depth {
            let mut layer: Vec<usize> = (0..k).filter(|&v| depths[v] == d).collect();
            layer.sort_by(|&a, &b| {
                leaves[a]
                    .cmp(&leaves[b])
                    .then_with(|| codes[a].cmp(&codes[b]))
                    .then_with(|| parents[a].map(|p| index[p]).cmp(&parents[b].map(|p| index[p])))
            });
            for v in layer {
                index[v] = next;
                next += 1;
            }
        }
        let fix = |s: &Slot| match *s {
            Slot::Vertex(x) => Slot::Vertex(index[x]),
            e => e,
        };
        let mut inputs = vec![Vec::new(); k];
        for v in 0..k {
            let mut ins: Vec<Slot> = self.inputs[v].iter().map(fix).collect();
            ins.sort();
            inputs[index[v]] = ins;
        }
        (
            CanonicalForm {
                tree: AbstractTree {
                    inputs,
                    root: fix(&self.root),
                },
            },
            index,
        )
    }

    pub fn canonical(&self) -> CanonicalForm {
        self.canonical_with_map().0
    }

    /// Structural code of each subtree, invariant under isomorphism.
    fn codes(&self) -> Vec<String> {
        fn go(t: &AbstractTree, v: usize, out: &mut Vec<String>) {
            let mut parts: Vec<String> = Vec::new();
            for s in &t.inputs[v] {
                match *s {
                    Slot::Entry(e) => parts.push(e.to_string()),
                    Slot::Vertex(c) => {
                        go(t, c, out);
                        parts.push(out[c].clone());
                    }
                }
            }
            parts.sort();
            out[v] = format!("({})", parts.join(","));
        }
        let mut out = vec![String::new(); self.inputs.len()];
        if let Slot::Vertex(r) = self.root {
            go(self, r, &mut out);
        }
        out
    }

    /// Renumbers the vertices: vertex v becomes `perm[v]`.
    pub fn renumber_vertices(&self, perm: &[usize]) -> Result<AbstractTree> {
        let k = self.inputs.len();
        let mut seen = vec![false; k];
        if perm.len() != k || perm.iter().any(|&p| p >= k || std::mem::replace(&mut seen[p], true)) {
            return Err(OpkError::arg("not a permutation of the vertices"));
        }
        let fix = |s: &Slot| match *s {
            Slot::Vertex(x) => Slot::Vertex(perm[x]),
            e => e,
        };
        let mut inputs = vec![Vec::new(); k];
        for v in 0..k {
            inputs[perm[v]] = self.inputs[v].iter().map(fix).collect();
        }
        Ok(AbstractTree {
            inputs,
            root: fix(&self.root),
        })
    }
}

impl fmt::Debug for AbstractTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn go(t: &AbstractTree, s: Slot, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            match s {
                Slot::Entry(e) => write!(f, "{e}"),
                Slot::Vertex(v) => {
                    write!(f, "v{v}(")?;
                    for (k, c) in t.inputs[v].iter().enumerate() {
                        if k > 0 {
                            write!(f, ",")?;
                        }
                        go(t, *c, f)?;
                    }
                    write!(f, ")")
                }
            }
        }
        go(self, self.root, f)
    }
}

/// Canonical representative of an isomorphism class of entry-labeled trees.
///
/// Vertices are numbered by depth from the root, then by the sorted list of
/// entries above them (ties, which need vertices without entries above them,
/// are broken structurally). This numbering is the global vertex order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CanonicalForm {
    tree: AbstractTree,
}

impl CanonicalForm {
    pub fn tree(&self) -> &AbstractTree {
        &self.tree
    }

    pub fn into_tree(self) -> AbstractTree {
        self.tree
    }

    pub fn num_vertices(&self) -> usize {
        self.tree.num_vertices()
    }
}
