//! Twisted complexes B(I,P,P) = B̄(P)∘P, B(P,P,I) = P∘B̄(P) and their Koszul
//! subcomplexes K(I,P,P) = K̄(P)∘P, K(P,P,I) = P∘K̄(P).
//!
//! The differential is β applied factorwise plus a twist. On the right, a
//! vertex of the bar tree whose inputs are all entries is removed and its
//! label composed with the P-factors on those entries. On the left, the
//! root vertex of one bar factor is removed and its label composed into the
//! outer P-factor; the subtrees above it become the new factors. The Koszul
//! kinds are computed as subcomplexes of the bar kinds.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::bar::{bar_differential, canonical_order, parity, BarBasis};
use super::koszul::koszul_construction;
use crate::combinatorics::{mask_elements, mask_min, Mask, Permutation};
use crate::error::{OpkError, Result};
use crate::exact_linalg::{sparse, ChainComplexData, ColumnEchelon, CoefficientRing, ExactMatrix, Scalar, SparseVec};
use crate::sigma_operads::{CompositeBasis, CompositeElem, FreeBasisElem, OperadStructure};
use crate::trees::Child;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TwistedKind {
    /// B(I,P,P)
    BarRight,
    /// B(P,P,I)
    BarLeft,
    /// K(I,P,P)
    KoszulRight,
    /// K(P,P,I)
    KoszulLeft,
}

impl TwistedKind {
    pub const ALL: [TwistedKind; 4] = [
        TwistedKind::BarRight,
        TwistedKind::BarLeft,
        TwistedKind::KoszulRight,
        TwistedKind::KoszulLeft,
    ];

    pub fn is_right(self) -> bool {
        matches!(self, TwistedKind::BarRight | TwistedKind::KoszulRight)
    }

    pub fn is_koszul(self) -> bool {
        matches!(self, TwistedKind::KoszulRight | TwistedKind::KoszulLeft)
    }

    pub fn name(self) -> &'static str {
        match self {
            TwistedKind::BarRight => "bar-right",
            TwistedKind::BarLeft => "bar-left",
            TwistedKind::KoszulRight => "koszul-right",
            TwistedKind::KoszulLeft => "koszul-left",
        }
    }
}

impl fmt::Display for TwistedKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TwistedKind {
    type Err = OpkError;

    fn from_str(s: &str) -> Result<Self> {
        TwistedKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| OpkError::arg(format!("unknown complex kind '{s}'")))
    }
}

/// A twisted complex in one arity.
#[derive(Clone, Debug)]
pub struct TwistedComplex {
    pub kind: TwistedKind,
    pub arity: usize,
    pub complex: ChainComplexData,
}

/// Bar bases of arities 0..=n (arity 0 absent).
fn bar_bases(p: &OperadStructure, n: usize) -> Result<Vec<Option<BarBasis>>> {
    let mut out = vec![None];
    for r in 1..=n {
        out.push(Some(BarBasis::new(p, r)?));
    }
    Ok(out)
}

fn basis_of(bases: &[Option<BarBasis>], r: usize) -> &BarBasis {
    bases[r].as_ref().expect("arity ≥ 1")
}

/// `mask` with its bits renumbered by `f`.
fn map_mask(mask: Mask, f: impl Fn(usize) -> usize) -> Mask {
    mask_elements(mask).fold(0, |acc, j| acc | 1 << f(j))
}

/// Elements of `block` at the positions in `positions`.
fn select(block: Mask, positions: Mask) -> Mask {
    let elems: Vec<usize> = mask_elements(block).collect();
    mask_elements(positions).fold(0, |acc, k| acc | 1 << elems[k])
}

/// Terms of the B(I,P,P) differential on one basis element.
fn right_boundary(
    p: &OperadStructure,
    bases: &[Option<BarBasis>],
    e: &CompositeElem,
) -> Vec<(CompositeElem, Scalar)> {
    let ring = p.ring();
    let r = e.blocks.len();
    let b = &basis_of(bases, r).elems()[e.outer];
    let mut out = Vec::new();
    if b.is_unit() {
        return out;
    }
    for (t, c) in bar_differential(p, b) {
        let outer = basis_of(bases, r).expect_index(&t);
        out.push((
            CompositeElem {
                blocks: e.blocks.clone(),
                outer,
                inner: e.inner.clone(),
            },
            c,
        ));
    }
    let tree = &b.tree;
    let d = tree.num_vertices();
    for v in 0..d {
        let children = tree.children(v);
        let leaves: Vec<usize> = children
            .iter()
            .filter_map(|&c| match c {
                Child::Leaf(k) => Some(k),
                Child::Vertex(_) => None,
            })
            .collect();
        if leaves.len() != children.len() {
            continue;
        }
        // γ(p_v; p_{c_1}, …, p_{c_a}), composed from the last input down.
        let a = leaves.len();
        let mut x: SparseVec = vec![(b.labels[v] as usize, ring.one())];
        let mut arity = a;
        for i in (0..a).rev() {
            let k = e.blocks[leaves[i]].count_ones() as usize;
            x = p.compose_vec(arity, i + 1, k, &x, &[(e.inner[leaves[i]], ring.one())]);
            arity += k - 1;
        }
        let concatenated: Vec<usize> = leaves.iter().flat_map(|&l| mask_elements(e.blocks[l])).collect();
        let pi = Permutation::ranking(&concatenated);
        let label = if pi.is_identity() { x } else { p.act(arity, &pi, &x).expect("arity") };
        let union = leaves.iter().fold(0, |acc, &l| acc | e.blocks[l]);
        let mut blocks: Vec<Mask> = (0..r).filter(|l| !leaves.contains(l)).map(|l| e.blocks[l]).collect();
        blocks.push(union);
        blocks.sort_by_key(|&m| mask_min(m));
        let new_index = |l: usize| -> usize {
            let m = if leaves.contains(&l) { union } else { e.blocks[l] };
            blocks.iter().position(|&x| x == m).expect("block")
        };
        let r2 = blocks.len();
        let masks: Vec<Mask> = (0..d).filter(|&u| u != v).map(|u| map_mask(tree.mask(u), new_index)).collect();
        let labels: Vec<u32> = (0..d).filter(|&u| u != v).map(|u| b.labels[u]).collect();
        // σ_v moves to the front, then θ(σp) = −p.
        let order = canonical_order(&masks);
        let odd = parity(&order) ^ (v % 2 == 0);
        let t = if masks.is_empty() {
            FreeBasisElem::unit()
        } else {
            FreeBasisElem::from_vertices(r2, masks.into_iter().zip(labels).collect())
        };
        let outer = basis_of(bases, r2).expect_index(&t);
        let slot = blocks.iter().position(|&m| m == union).expect("merged block");
        let rest: Vec<usize> = (0..r).filter(|l| !leaves.contains(l)).collect();
        for (y, c) in label {
            let mut inner = vec![0; r2];
            for &l in &rest {
                inner[new_index(l)] = e.inner[l];
            }
            inner[slot] = y;
            out.push((
                CompositeElem {
                    blocks: blocks.clone(),
                    outer,
                    inner,
                },
                ring.mul(ring.sign(odd), c),
            ));
        }
    }
    out
}

/// Terms of the B(P,P,I) differential on one basis element.
fn left_boundary(p: &OperadStructure, bases: &[Option<BarBasis>], e: &CompositeElem) -> Vec<(CompositeElem, Scalar)> {
    let ring = p.ring();
    let r = e.blocks.len();
    let factors: Vec<&FreeBasisElem> = (0..r)
        .map(|k| &basis_of(bases, e.blocks[k].count_ones() as usize).elems()[e.inner[k]])
        .collect();
    let mut out = Vec::new();
    let mut before = 0;
    for k in 0..r {
        let f = factors[k];
        let size = f.arity();
        if f.is_unit() {
            continue;
        }
        let shift = before % 2 == 1;
        for (t, c) in bar_differential(p, f) {
            let mut inner = e.inner.clone();
            inner[k] = basis_of(bases, size).expect_index(&t);
            out.push((
                CompositeElem {
                    blocks: e.blocks.clone(),
                    outer: e.outer,
                    inner,
                },
                ring.mul(ring.sign(shift), c),
            ));
        }
        // Remove the root of factor k; its label goes into the outer factor.
        let tree = &f.tree;
        let children = tree.child_masks(0);
        let a = children.len();
        let composite = p.compose(r, k + 1, a, e.outer, f.labels[0] as usize);
        let subblocks: Vec<Mask> = children.iter().map(|&c| select(e.blocks[k], c)).collect();
        let listed: Vec<Mask> = e.blocks[..k]
            .iter()
            .chain(&subblocks)
            .chain(&e.blocks[k + 1..])
            .copied()
            .collect();
        let pi = Permutation::ranking(&listed.iter().map(|&m| mask_min(m)).collect::<Vec<_>>());
        let r2 = r + a - 1;
        let label = if pi.is_identity() {
            composite
        } else {
            p.act(r2, &pi, &composite).expect("arity")
        };
        // Factors of the new element in listed order, each with the global
        // suspension ids of its vertices in canonical order.
        let mut offsets = Vec::with_capacity(r);
        let mut acc = 0;
        for g in &factors {
            offsets.push(acc);
            acc += g.weight();
        }
        let mut pieces: Vec<(usize, Vec<usize>)> = Vec::with_capacity(r2);
        for j in 0..r {
            if j != k {
                let g = factors[j];
                pieces.push((e.inner[j], (offsets[j]..offsets[j] + g.weight()).collect()));
                continue;
            }
            for &c in &children {
                let verts: Vec<usize> = (1..tree.num_vertices()).filter(|&u| tree.mask(u) & c == tree.mask(u)).collect();
                let size = c.count_ones() as usize;
                if verts.is_empty() {
                    pieces.push((0, Vec::new()));
                    continue;
                }
                let compress = |m: Mask| -> Mask {
                    mask_elements(m).fold(0, |acc2, l| acc2 | 1 << (c & ((1 << l) - 1)).count_ones())
                };
                let masks: Vec<Mask> = verts.iter().map(|&u| compress(tree.mask(u))).collect();
                let order = canonical_order(&masks);
                let sub = FreeBasisElem::from_vertices(
                    size,
                    verts.iter().map(|&u| (compress(tree.mask(u)), f.labels[u])).collect(),
                );
                let ids = order.iter().map(|&i| offsets[k] + verts[i]).collect();
                pieces.push((basis_of(bases, size).expect_index(&sub), ids));
            }
        }
        let mut by_block: Vec<usize> = (0..r2).collect();
        by_block.sort_by_key(|&j| mask_min(listed[j]));
        let sequence: Vec<usize> = by_block.iter().flat_map(|&j| pieces[j].1.iter().copied()).collect();
        let odd = shift ^ parity(&sequence);
        let blocks: Vec<Mask> = by_block.iter().map(|&j| listed[j]).collect();
        let inner: Vec<usize> = by_block.iter().map(|&j| pieces[j].0).collect();
        for (y, c) in label {
            out.push((
                CompositeElem {
                    blocks: blocks.clone(),
                    outer: y,
                    inner: inner.clone(),
                },
                ring.mul(ring.sign(odd), c),
            ));
        }
        before += f.weight();
    }
    out
}

/// A complex on a graded basis, with global indices ordered arbitrarily.
struct Graded {
    /// Degree-sorted global indices per degree.
    by_degree: Vec<Vec<usize>>,
    /// Position of each global index inside its degree.
    local: Vec<usize>,
    degree: Vec<usize>,
}

impl Graded {
    fn new(degree: Vec<usize>) -> Self {
        let top = degree.iter().copied().max().unwrap_or(0);
        let mut by_degree = vec![Vec::new(); top + 1];
        let mut local = vec![0; degree.len()];
        for (g, &d) in degree.iter().enumerate() {
            local[g] = by_degree[d].len();
            by_degree[d].push(g);
        }
        Graded {
            by_degree,
            local,
            degree,
        }
    }

    fn assemble(&self, ring: CoefficientRing, image: impl Fn(usize) -> SparseVec) -> Result<ChainComplexData> {
        let dims: Vec<usize> = self.by_degree.iter().map(|v| v.len()).collect();
        let boundaries = self
            .by_degree
            .iter()
            .enumerate()
            .map(|(d, gs)| {
                let rows = if d == 0 { 0 } else { dims[d - 1] };
                let columns = gs
                    .iter()
                    .map(|&g| {
                        let terms = image(g).into_iter().map(|(h, c)| {
                            assert_eq!(self.degree[h] + 1, self.degree[g], "differential of degree −1");
                            (self.local[h], c)
                        });
                        sparse::collect(ring, terms)
                    })
                    .collect();
                ExactMatrix::from_columns(ring, rows, columns)
            })
            .collect();
        ChainComplexData::new(ring, 0, dims, boundaries)
    }
}

/// The B-kind basis, degrees and differential as sparse columns by global
/// index.
struct BarKind {
    basis: CompositeBasis,
    degree: Vec<usize>,
    images: Vec<SparseVec>,
}

fn bar_kind(p: &OperadStructure, right: bool, n: usize, bases: &[Option<BarBasis>]) -> BarKind {
    let ring = p.ring();
    let bar_len = |r: usize| if r == 0 { 0 } else { basis_of(bases, r).len() };
    let basis = if right {
        CompositeBasis::new(n, bar_len, |k| p.rank(k))
    } else {
        CompositeBasis::new(n, |r| p.rank(r), bar_len)
    };
    let degree = basis
        .elems()
        .iter()
        .map(|e| {
            if right {
                basis_of(bases, e.blocks.len()).degree(e.outer)
            } else {
                e.blocks
                    .iter()
                    .zip(&e.inner)
                    .map(|(&m, &i)| basis_of(bases, m.count_ones() as usize).degree(i))
                    .sum()
            }
        })
        .collect();
    let images = basis
        .elems()
        .iter()
        .map(|e| {
            let terms = if right {
                right_boundary(p, bases, e)
            } else {
                left_boundary(p, bases, e)
            };
            sparse::collect(
                ring,
                terms
                    .into_iter()
                    .map(|(t, c)| (basis.index_of(&t).expect("basis element"), c)),
            )
        })
        .collect();
    BarKind { basis, degree, images }
}

pub fn twisted_complex(p: &OperadStructure, kind: TwistedKind, n: usize) -> Result<TwistedComplex> {
    if n == 0 || n > p.max_arity() {
        return Err(OpkError::arg(format!("arity {n} outside 1..={}", p.max_arity())));
    }
    let ring = p.ring();
    let bases = bar_bases(p, n)?;
    let b = bar_kind(p, kind.is_right(), n, &bases);
    let complex = if !kind.is_koszul() {
        Graded::new(b.degree.clone()).assemble(ring, |g| b.images[g].clone())?
    } else {
        let k = koszul_construction(p, n)?;
        let incl: Vec<Option<ExactMatrix>> = (0..=n).map(|r| (r > 0).then(|| k.inclusion(r))).collect();
        let kdeg: Vec<Vec<usize>> = (0..=n).map(|r| if r == 0 { Vec::new() } else { k.degrees(r) }).collect();
        let klen = |r: usize| kdeg[r].len();
        let kbasis = if kind.is_right() {
            CompositeBasis::new(n, klen, |j| p.rank(j))
        } else {
            CompositeBasis::new(n, |r| p.rank(r), klen)
        };
        // Each Koszul basis element as a vector in the bar kind.
        let vectors: Vec<SparseVec> = kbasis
            .elems()
            .iter()
            .map(|e| {
                let mut partial: Vec<(Vec<usize>, usize, Scalar)> = Vec::new();
                if kind.is_right() {
                    let col = incl[e.blocks.len()].as_ref().expect("arity").column(e.outer);
                    partial.extend(col.iter().map(|&(g, c)| (e.inner.clone(), g, c)));
                } else {
                    partial.push((Vec::new(), e.outer, ring.one()));
                    for (&m, &i) in e.blocks.iter().zip(&e.inner) {
                        let col = incl[m.count_ones() as usize].as_ref().expect("arity").column(i);
                        partial = partial
                            .into_iter()
                            .flat_map(|(inner, o, c)| {
                                col.iter().map(move |&(g, x)| {
                                    let mut inner = inner.clone();
                                    inner.push(g);
                                    (inner, o, ring.mul(c, x))
                                })
                            })
                            .collect();
                    }
                }
                let terms = partial.into_iter().map(|(inner, outer, c)| {
                    let t = CompositeElem {
                        blocks: e.blocks.clone(),
                        outer,
                        inner,
                    };
                    (b.basis.index_of(&t).expect("bar-kind element"), c)
                });
                sparse::collect(ring, terms)
            })
            .collect();
        let kdegree: Vec<usize> = kbasis
            .elems()
            .iter()
            .map(|e| {
                if kind.is_right() {
                    kdeg[e.blocks.len()][e.outer]
                } else {
                    e.blocks
                        .iter()
                        .zip(&e.inner)
                        .map(|(&m, &i)| kdeg[m.count_ones() as usize][i])
                        .sum()
                }
            })
            .collect();
        let graded = Graded::new(kdegree);
        // Solve in each degree against the Koszul vectors of that degree.
        let solvers: Vec<(ColumnEchelon, Vec<usize>)> = graded
            .by_degree
            .iter()
            .map(|gs| {
                let m = ExactMatrix::from_columns(ring, b.basis.len(), gs.iter().map(|&g| vectors[g].clone()).collect());
                (ColumnEchelon::new(&m), gs.clone())
            })
            .collect();
        let images: Vec<SparseVec> = (0..vectors.len())
            .map(|g| {
                let terms = vectors[g]
                    .iter()
                    .flat_map(|&(h, c)| b.images[h].iter().map(move |&(t, x)| (t, ring.mul(c, x))));
                let image = sparse::collect(ring, terms);
                if image.is_empty() {
                    return Ok(Vec::new());
                }
                let d = graded.degree[g];
                let (solver, gs) = &solvers[d - 1];
                let coords = solver
                    .solve(&image)
                    .ok_or_else(|| OpkError::InvalidComplex("the Koszul kind is not a subcomplex".into()))?;
                Ok(sparse::collect(ring, coords.into_iter().map(|(j, c)| (gs[j], c))))
            })
            .collect::<Result<_>>()?;
        graded.assemble(ring, |g| images[g].clone())?
    };
    Ok(TwistedComplex {
        kind,
        arity: n,
        complex,
    })
}

