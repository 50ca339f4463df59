//! The Koszul construction K̄(P): in each arity and weight s, the kernel of β
//! on the diagonal summand B̄_s(P)_(s). Also the bar-homology criterion for
//! Koszulness and the dimensional duality round trip.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::bar::{bar_action, bar_complex, bar_image, block_matrix, BarBasis};
use crate::combinatorics::Permutation;
use crate::error::{OpkError, Result};
use crate::exact_linalg::{
    dualize_complex, homology, smith_normal_form, sparse, ColumnEchelon, CoefficientRing, ExactMatrix, HomologySummary,
    Scalar, SparseVec,
};
use crate::sigma_operads::{quadratic_dual, quadratic_quotient, OperadStructure, QuadraticPresentation};

/// K̄(P)(n)_(s) as a sublattice of the bar basis of arity n.
#[derive(Clone, Debug)]
pub struct KoszulComponent {
    pub arity: usize,
    pub weight: usize,
    /// Columns are kernel basis vectors, rows the global bar basis.
    pub inclusion: ExactMatrix,
}

impl KoszulComponent {
    pub fn rank(&self) -> usize {
        self.inclusion.cols()
    }
}

#[derive(Clone, Debug)]
pub struct KoszulModule {
    ring: CoefficientRing,
    operad: OperadStructure,
    /// Indexed by arity; entry 0 is unused.
    bases: Vec<Option<BarBasis>>,
    components: Vec<Vec<KoszulComponent>>,
}

pub fn koszul_construction(p: &OperadStructure, max_arity: usize) -> Result<KoszulModule> {
    let ring = p.ring();
    let mut bases = vec![None];
    let mut components = vec![Vec::new()];
    for n in 1..=max_arity {
        let bar = bar_complex(p, n)?;
        let basis = bar.basis().clone();
        let mut comps = Vec::new();
        if n == 1 {
            comps.push(KoszulComponent {
                arity: 1,
                weight: 0,
                inclusion: ExactMatrix::identity(ring, 1),
            });
        }
        for s in 1..n {
            let cols: Vec<usize> = basis.degree_range(s).filter(|&g| basis.weight(g) == s as i64).collect();
            if cols.is_empty() {
                continue;
            }
            let target = basis.degree_range(s - 1);
            let beta = if s == 1 {
                ExactMatrix::zero(ring, 0, cols.len())
            } else {
                let full = block_matrix(ring, basis.degree_range(s), target, |g| bar_image(p, &basis, g));
                let start = basis.degree_range(s).start;
                full.select_columns(&cols.iter().map(|&g| g - start).collect::<Vec<_>>())
            };
            let kernel = ColumnEchelon::new(&beta).kernel().to_vec();
            let columns: Vec<SparseVec> = kernel
                .into_iter()
                .map(|k| k.into_iter().map(|(j, x)| (cols[j], x)).collect())
                .collect();
            if columns.is_empty() {
                continue;
            }
            comps.push(KoszulComponent {
                arity: n,
                weight: s,
                inclusion: ExactMatrix::from_columns(ring, basis.len(), columns),
            });
        }
        bases.push(Some(basis));
        components.push(comps);
    }
    Ok(KoszulModule {
        ring,
        operad: p.clone(),
        bases,
        components,
    })
}

impl KoszulModule {
    pub fn ring(&self) -> CoefficientRing {
        self.ring
    }

    pub fn max_arity(&self) -> usize {
        self.components.len() - 1
    }

    pub fn components(&self, n: usize) -> &[KoszulComponent] {
        &self.components[n]
    }

    pub fn bar_basis(&self, n: usize) -> &BarBasis {
        self.bases[n].as_ref().expect("arity ≥ 1")
    }

    pub fn rank(&self, n: usize) -> usize {
        self.components[n].iter().map(|c| c.rank()).sum()
    }

    /// Rank by weight (which is also the homological degree).
    pub fn ranks(&self, n: usize) -> BTreeMap<usize, usize> {
        self.components[n].iter().map(|c| (c.weight, c.rank())).collect()
    }

    /// All weight components side by side.
    pub fn inclusion(&self, n: usize) -> ExactMatrix {
        let rows = self.bar_basis(n).len();
        let columns = self.components[n]
            .iter()
            .flat_map(|c| c.inclusion.columns().iter().cloned())
            .collect();
        ExactMatrix::from_columns(self.ring, rows, columns)
    }

    /// Degree of each kernel basis vector of arity n, in inclusion order.
    pub fn degrees(&self, n: usize) -> Vec<usize> {
        self.components[n].iter().flat_map(|c| std::iter::repeat(c.weight).take(c.rank())).collect()
    }

    /// β vanishes on every kernel vector.
    pub fn check_cycles(&self) -> bool {
        (1..=self.max_arity()).all(|n| {
            let basis = self.bar_basis(n);
            self.components[n].iter().all(|c| {
                c.inclusion.columns().iter().all(|col| {
                    let terms = col.iter().flat_map(|&(g, x)| {
                        bar_image(&self.operad, basis, g)
                            .into_iter()
                            .map(move |(h, y)| (h, self.ring.mul(x, y)))
                    });
                    sparse::collect(self.ring, terms).is_empty()
                })
            })
        })
    }

    /// Over ℤ, every inclusion has all invariant factors equal to 1.
    pub fn check_saturated(&self) -> Result<bool> {
        if self.ring != CoefficientRing::Integers {
            return Ok(true);
        }
        for comps in &self.components {
            for c in comps {
                let snf = smith_normal_form(&c.inclusion)?;
                if snf.invariant_factors().iter().any(|f| !num_traits::One::is_one(f)) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// The induced action of w on K̄(P)(n), in the inclusion basis.
    pub fn action(&self, n: usize, w: &Permutation) -> Result<ExactMatrix> {
        if w.len() != n {
            return Err(OpkError::arg(format!("permutation of {} letters on arity {n}", w.len())));
        }
        let basis = self.bar_basis(n);
        let k = self.inclusion(n);
        let solver = ColumnEchelon::new(&k);
        let columns = k
            .columns()
            .iter()
            .map(|col| {
                let terms = col.iter().flat_map(|&(g, x)| {
                    bar_action(&self.operad, w, &basis.elems()[g])
                        .into_iter()
                        .map(move |(e, y)| (basis.expect_index(&e), self.ring.mul(x, y)))
                });
                let image = sparse::collect(self.ring, terms);
                solver
                    .solve(&image)
                    .ok_or_else(|| OpkError::InvalidComplex("K̄(P) is not stable under Σ".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ExactMatrix::from_columns(self.ring, k.cols(), columns))
    }

    pub fn character(&self, n: usize, w: &Permutation) -> Result<Scalar> {
        Ok(self.action(n, w)?.trace())
    }
}

/// Bar homology of one arity, split by weight.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArityReport {
    pub columns: BTreeMap<i64, HomologySummary>,
    /// Homology of each weight column lies in degree = weight.
    pub concentrated: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KoszulReport {
    pub operad: String,
    pub ring: CoefficientRing,
    pub arities: BTreeMap<usize, ArityReport>,
    pub koszul: bool,
}

/// Bar homology of P(n) split by weight. P must already be over the
/// intended ring.
pub fn koszul_arity_report(p: &OperadStructure, n: usize) -> Result<ArityReport> {
    let bar = bar_complex(p, n)?;
    let basis = bar.basis();
    let mut weights: Vec<i64> = (0..basis.len()).map(|g| basis.weight(g)).collect();
    weights.sort_unstable();
    weights.dedup();
    let mut columns = BTreeMap::new();
    let mut concentrated = true;
    for s in weights {
        let h = homology(&bar.weight_column(s)?);
        if h.betti.keys().chain(h.torsion.keys()).any(|&d| d != s) {
            concentrated = false;
        }
        columns.insert(s, h);
    }
    Ok(ArityReport { columns, concentrated })
}

/// The bar-homology criterion: H_d(B̄_*(P)_(s)) = 0 for d ≠ s, checked up
/// to `max_arity` over `ring`.
pub fn is_koszul(p: &OperadStructure, max_arity: usize, ring: CoefficientRing) -> Result<KoszulReport> {
    let q = p.change_ring(ring)?;
    let arities = (1..=max_arity)
        .map(|n| Ok((n, koszul_arity_report(&q, n)?)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    let koszul = arities.values().all(|a| a.concentrated);
    Ok(KoszulReport {
        operad: p.name().to_string(),
        ring,
        arities,
        koszul,
    })
}

/// Per arity and weight, the pair (dim K̄^c(K̄(P))_(s)(n), dim P_(s)(n)).
/// The left side is the cokernel of the dual bar boundary of the quadratic
/// dual in its lowest degree. Needs a field.
pub fn koszul_dual_round_trip(
    pres: &QuadraticPresentation,
    ring: CoefficientRing,
    max_arity: usize,
) -> Result<BTreeMap<usize, BTreeMap<i64, (usize, usize)>>> {
    if !ring.is_field() {
        return Err(OpkError::arg("the dimensional round trip is computed over a field"));
    }
    let p = quadratic_quotient(pres, ring, max_arity)?;
    let q = quadratic_quotient(&quadratic_dual(pres)?, ring, max_arity)?;
    let mut out = BTreeMap::new();
    for n in 1..=max_arity {
        let dual = dualize_complex(bar_complex(&q, n)?.complex());
        let mut row = BTreeMap::new();
        for (s, rhs) in p.weight_ranks(n) {
            let h = homology(&dual.weight_column(s)?);
            row.insert(s, (h.betti(-s), rhs));
        }
        out.insert(n, row);
    }
    Ok(out)
}
