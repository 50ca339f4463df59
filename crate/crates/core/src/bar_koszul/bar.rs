//! The reduced bar complex B̄(P)(n).
//!
//! A basis element is a treewise tensor σp_{v_1} ⊗ ⋯ ⊗ σp_{v_d} written in
//! the canonical vertex order, each label a positive-weight basis element of
//! P. Every suspension is odd, so reordering vertices costs the sign of the
//! reordering. Homological degree is the number of vertices; weight is the
//! sum of the label weights.

use std::collections::HashMap;

use crate::combinatorics::{mask_min, permute_mask, Mask, Permutation};
use crate::error::{OpkError, Result};
use crate::exact_linalg::{sparse, ChainComplexData, CoefficientRing, ExactMatrix, Scalar, SparseVec};
use crate::sigma_operads::{FreeBasisElem, OperadStructure};
use crate::trees::{lex_cmp, reduced_trees, Child};

/// Parity of a sequence of distinct integers, by inversions.
pub(crate) fn parity(seq: &[usize]) -> bool {
    let mut odd = false;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if seq[i] > seq[j] {
                odd = !odd;
            }
        }
    }
    odd
}

/// Canonical positions of vertex leaf sets: `order[k]` is the input index
/// of the k-th vertex in canonical order.
pub(crate) fn canonical_order(masks: &[Mask]) -> Vec<usize> {
    let depth: Vec<usize> = masks
        .iter()
        .map(|&m| masks.iter().filter(|&&x| x != m && x & m == m).count())
        .collect();
    let mut order: Vec<usize> = (0..masks.len()).collect();
    order.sort_by(|&a, &b| depth[a].cmp(&depth[b]).then_with(|| lex_cmp(masks[a], masks[b])));
    order
}

/// The canonical element for vertices listed in tensor order, with the
/// parity of the reordering of their suspensions.
pub(crate) fn canonical_signed(n: usize, vertices: &[(Mask, u32)]) -> (FreeBasisElem, bool) {
    let masks: Vec<Mask> = vertices.iter().map(|&(m, _)| m).collect();
    let order = canonical_order(&masks);
    let odd = parity(&order);
    let sorted = order.iter().map(|&k| vertices[k]).collect();
    (FreeBasisElem::from_vertices(n, sorted), odd)
}

/// Checks that P(1) is spanned by the unit and every other basis element
/// has positive weight.
pub(crate) fn check_connected(p: &OperadStructure) -> Result<()> {
    if p.rank(0) != 0 || p.rank(1) != 1 || p.weights(1) != [0] {
        return Err(OpkError::arg(format!("{} is not connected: P(0) = 0 and P(1) = unit are required", p.name())));
    }
    for n in 2..=p.max_arity() {
        if p.weights(n).iter().any(|&w| w <= 0) {
            return Err(OpkError::arg(format!(
                "{} is not connected: P({n}) has a basis element of weight ≤ 0",
                p.name()
            )));
        }
    }
    Ok(())
}

/// The basis of B̄(P)(n) in all degrees, ordered by degree. In arity 1 it
/// is the unit alone, in degree 0.
#[derive(Clone, Debug)]
pub struct BarBasis {
    n: usize,
    elems: Vec<FreeBasisElem>,
    degrees: Vec<usize>,
    weights: Vec<i64>,
    /// Start of each degree block; one entry past the top degree.
    offsets: Vec<usize>,
    index: HashMap<FreeBasisElem, usize>,
}

impl BarBasis {
    pub fn new(p: &OperadStructure, n: usize) -> Result<Self> {
        check_connected(p)?;
        if n == 0 || n > p.max_arity() {
            return Err(OpkError::arg(format!(
                "arity {n} outside 1..={} for {}",
                p.max_arity(),
                p.name()
            )));
        }
        let mut elems = Vec::new();
        let mut degrees = Vec::new();
        let mut weights = Vec::new();
        let mut offsets = vec![0];
        if n == 1 {
            elems.push(FreeBasisElem::unit());
            degrees.push(0);
            weights.push(0);
            offsets.push(1);
        } else {
            offsets.push(0);
            for d in 1..n {
                for tree in reduced_trees(n, d) {
                    let arities: Vec<usize> = (0..d).map(|v| tree.children(v).len()).collect();
                    let radices: Vec<usize> = arities.iter().map(|&a| p.rank(a)).collect();
                    for labels in crate::sigma_operads::mixed_radix(&radices) {
                        let w = labels.iter().zip(&arities).map(|(&x, &a)| p.weights(a)[x]).sum();
                        elems.push(FreeBasisElem {
                            tree: tree.clone(),
                            labels: labels.into_iter().map(|x| x as u32).collect(),
                        });
                        degrees.push(d);
                        weights.push(w);
                    }
                }
                offsets.push(elems.len());
            }
        }
        let index = elems.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();
        Ok(BarBasis {
            n,
            elems,
            degrees,
            weights,
            offsets,
            index,
        })
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

    pub fn elems(&self) -> &[FreeBasisElem] {
        &self.elems
    }

    pub fn degree(&self, i: usize) -> usize {
        self.degrees[i]
    }

    pub fn weight(&self, i: usize) -> i64 {
        self.weights[i]
    }

    pub fn top_degree(&self) -> usize {
        self.offsets.len() - 2
    }

    /// Global indices of the degree-d block.
    pub fn degree_range(&self, d: usize) -> std::ops::Range<usize> {
        if d + 1 >= self.offsets.len() {
            return 0..0;
        }
        self.offsets[d]..self.offsets[d + 1]
    }

    pub fn index_of(&self, e: &FreeBasisElem) -> Option<usize> {
        self.index.get(e).copied()
    }

    pub(crate) fn expect_index(&self, e: &FreeBasisElem) -> usize {
        self.index_of(e).unwrap_or_else(|| panic!("{e:?} is not a basis element of B̄(P)({})", self.n))
    }
}

/// β on one basis element: the signed sum of its edge contractions.
pub fn bar_differential(p: &OperadStructure, e: &FreeBasisElem) -> Vec<(FreeBasisElem, Scalar)> {
    let ring = p.ring();
    let t = &e.tree;
    let n = e.arity();
    let d = t.num_vertices();
    let mut out = Vec::new();
    for (v, u) in t.internal_edges() {
        let cu = t.children(u);
        let j = cu.iter().position(|&c| c == Child::Vertex(v)).expect("edge");
        let mu = t.child_masks(u);
        let mv = t.child_masks(v);
        let (au, av) = (mu.len(), mv.len());
        let composite = p.compose(au, j + 1, av, e.labels[u] as usize, e.labels[v] as usize);
        let merged: Vec<usize> = mu[..j].iter().chain(&mv).chain(&mu[j + 1..]).map(|&m| mask_min(m)).collect();
        let pi = Permutation::ranking(&merged);
        let label = if pi.is_identity() {
            composite
        } else {
            p.act(au + av - 1, &pi, &composite).expect("arity in range")
        };
        let rest: Vec<usize> = (0..d).filter(|&x| x != u && x != v).collect();
        let mut front = vec![u, v];
        front.extend(&rest);
        let odd1 = parity(&front);
        for (x, c) in label {
            let mut vertices = vec![(t.mask(u), x as u32)];
            vertices.extend(rest.iter().map(|&w| (t.mask(w), e.labels[w])));
            let (elem, odd2) = canonical_signed(n, &vertices);
            out.push((elem, ring.mul(ring.sign(!(odd1 ^ odd2)), c)));
        }
    }
    out
}

/// `w_*` on a bar basis element: entries relabelled, labels moved by the
/// permutation sorting each vertex's new inputs, and the sign of the new
/// vertex order.
pub fn bar_action(p: &OperadStructure, w: &Permutation, e: &FreeBasisElem) -> Vec<(FreeBasisElem, Scalar)> {
    let ring = p.ring();
    let n = e.arity();
    let t = &e.tree;
    let mut partial: Vec<(Vec<(Mask, u32)>, Scalar)> = vec![(Vec::new(), ring.one())];
    for v in 0..t.num_vertices() {
        let mins: Vec<usize> = t.child_masks(v).into_iter().map(|c| mask_min(permute_mask(w, c))).collect();
        let pi = Permutation::ranking(&mins);
        let label = vec![(e.labels[v] as usize, ring.one())];
        let moved = if pi.is_identity() {
            label
        } else {
            p.act(mins.len(), &pi, &label).expect("arity in range")
        };
        let mask = permute_mask(w, t.mask(v));
        partial = partial
            .into_iter()
            .flat_map(|(vs, c)| {
                moved.iter().map(move |&(x, y)| {
                    let mut vs = vs.clone();
                    vs.push((mask, x as u32));
                    (vs, ring.mul(c, y))
                })
            })
            .collect();
    }
    partial
        .into_iter()
        .map(|(vs, c)| {
            let (elem, odd) = canonical_signed(n, &vs);
            (elem, ring.mul(ring.sign(odd), c))
        })
        .collect()
}

/// Matrix of a linear map given on basis elements, from the `from` range of
/// a basis to the `to` range, both by global index.
pub(crate) fn block_matrix(
    ring: CoefficientRing,
    from: std::ops::Range<usize>,
    to: std::ops::Range<usize>,
    image: impl Fn(usize) -> Vec<(usize, Scalar)>,
) -> ExactMatrix {
    let columns: Vec<SparseVec> = from
        .map(|g| {
            let terms = image(g).into_iter().map(|(h, c)| {
                assert!(to.contains(&h), "image leaves the target degree");
                (h - to.start, c)
            });
            sparse::collect(ring, terms)
        })
        .collect();
    ExactMatrix::from_columns(ring, to.len(), columns)
}

/// B̄(P)(n) with its differential and weight labels. Degrees run 1..n−1
/// for n ≥ 2; arity 1 is the unit in degree 0.
#[derive(Clone, Debug)]
pub struct BarComplex {
    arity: usize,
    basis: BarBasis,
    complex: ChainComplexData,
}

impl BarComplex {
    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn basis(&self) -> &BarBasis {
        &self.basis
    }

    pub fn complex(&self) -> &ChainComplexData {
        &self.complex
    }

    /// Dimensions from the lowest degree (1, or 0 in arity 1) upwards.
    pub fn dims(&self) -> &[usize] {
        self.complex.dims()
    }

    /// The weight-s summand B̄_*(P)_(s)(n).
    pub fn weight_column(&self, s: i64) -> Result<ChainComplexData> {
        self.complex.weight_column(s)
    }
}

/// Image of a basis element under β, by global index.
pub(crate) fn bar_image(p: &OperadStructure, basis: &BarBasis, g: usize) -> Vec<(usize, Scalar)> {
    bar_differential(p, &basis.elems()[g])
        .into_iter()
        .map(|(e, c)| (basis.expect_index(&e), c))
        .collect()
}

pub fn bar_complex(p: &OperadStructure, n: usize) -> Result<BarComplex> {
    let basis = BarBasis::new(p, n)?;
    let ring = p.ring();
    let low = if n == 1 { 0 } else { 1 };
    let top = basis.top_degree();
    let mut dims = Vec::new();
    let mut boundaries = Vec::new();
    let mut weights = Vec::new();
    for d in low..=top {
        let range = basis.degree_range(d);
        dims.push(range.len());
        weights.push(range.clone().map(|g| basis.weight(g)).collect());
        let target = if d == low { 0..0 } else { basis.degree_range(d - 1) };
        boundaries.push(block_matrix(ring, range, target, |g| bar_image(p, &basis, g)));
    }
    let complex = ChainComplexData::new(ring, low as i64, dims, boundaries)?.with_weights(weights)?;
    Ok(BarComplex {
        arity: n,
        basis,
        complex,
    })
}

/// The cobar complex of the dual cooperad P^∨ in arity n ≥ 2, built by
/// splitting vertices: the basis is that of B̄(P)(n) with d vertices in
/// degree −d, and the coefficient of a splitting is the coefficient of the
/// old label in the matching partial composite.
pub fn cobar_complex(p: &OperadStructure, n: usize) -> Result<ChainComplexData> {
    let basis = BarBasis::new(p, n)?;
    if n < 2 {
        return Err(OpkError::arg("the cobar complex is built in arities n ≥ 2"));
    }
    let ring = p.ring();
    let top = basis.top_degree();
    let mut dims = Vec::new();
    let mut boundaries = Vec::new();
    for d in (1..=top).rev() {
        let range = basis.degree_range(d);
        dims.push(range.len());
        let target = if d == top { 0..0 } else { basis.degree_range(d + 1) };
        boundaries.push(block_matrix(ring, range, target, |g| {
            split_image(p, &basis.elems()[g])
                .into_iter()
                .map(|(e, c)| (basis.expect_index(&e), c))
                .collect()
        }));
    }
    ChainComplexData::new(ring, -(top as i64), dims, boundaries)
}

fn split_image(p: &OperadStructure, e: &FreeBasisElem) -> Vec<(FreeBasisElem, Scalar)> {
    let ring = p.ring();
    let t = &e.tree;
    let n = e.arity();
    let d = t.num_vertices();
    let mut out = Vec::new();
    for x in 0..d {
        let children = t.child_masks(x);
        let a = children.len();
        let rest: Vec<usize> = (0..d).filter(|&y| y != x).collect();
        let mut old = vec![x];
        old.extend(&rest);
        let odd_old = parity(&old);
        let sub = |m: Mask| crate::combinatorics::mask_elements(m).fold(0, |acc, j| acc | children[j]);
        for two in reduced_trees(a, 2) {
            let (mu, mv) = (two.mask(0), two.mask(1));
            let ju = two.child_masks(0);
            let j = ju.iter().position(|&c| c == mv).expect("child");
            let jv = two.child_masks(1);
            let (au, av) = (ju.len(), jv.len());
            let merged: Vec<usize> = ju[..j].iter().chain(&jv).chain(&ju[j + 1..]).map(|&m| mask_min(m)).collect();
            let pi = Permutation::ranking(&merged);
            for lu in 0..p.rank(au) {
                for lv in 0..p.rank(av) {
                    let composite = p.compose(au, j + 1, av, lu, lv);
                    let label = if pi.is_identity() {
                        composite
                    } else {
                        p.act(a, &pi, &composite).expect("arity")
                    };
                    let c = sparse::get(&label, e.labels[x] as usize);
                    if c.is_zero() {
                        continue;
                    }
                    let mut vertices = vec![(sub(mu), lu as u32), (sub(mv), lv as u32)];
                    vertices.extend(rest.iter().map(|&y| (t.mask(y), e.labels[y])));
                    let (elem, odd_new) = canonical_signed(n, &vertices);
                    out.push((elem, ring.mul(ring.sign(!(odd_old ^ odd_new)), c)));
                }
            }
        }
    }
    out
}
