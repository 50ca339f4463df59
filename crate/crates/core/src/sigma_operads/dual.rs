//! Quadratic duality for binary presentations.

use super::free::{FreeBasisElem, FreeOperad};
use super::presentation::{GeneratorDecl, QuadraticPresentation, Relation, Symmetry};
use crate::error::{OpkError, Result};
use crate::exact_linalg::{kernel_basis, CoefficientRing, ExactMatrix};

const Q: CoefficientRing = CoefficientRing::Rationals;

/// Sign attached to a 2-vertex tree of arity 3 in the pairing of
/// F_(2)(M)(3) with F_(2)(M^∨ ⊗ sgn)(3): +1 when entry 3 sits at the root,
/// −1 otherwise.
pub(crate) fn pairing_sign(e: &FreeBasisElem) -> i64 {
    if e.tree.mask(1) == 0b011 {
        1
    } else {
        -1
    }
}

fn dual_symmetry(s: &Symmetry) -> Symmetry {
    match s {
        Symmetry::Trivial => Symmetry::Sign,
        Symmetry::Sign => Symmetry::Trivial,
        Symmetry::Regular => Symmetry::Explicit {
            dim: 2,
            matrices: vec![vec![vec![0, -1], vec![-1, 0]]],
        },
        Symmetry::Explicit { dim, matrices } => Symmetry::Explicit {
            dim: *dim,
            matrices: matrices
                .iter()
                .map(|a| (0..*dim).map(|i| (0..*dim).map(|j| -a[j][i]).collect()).collect())
                .collect(),
        },
    }
}

fn dual_name(name: &str) -> String {
    match name.strip_suffix('!') {
        Some(base) => base.to_string(),
        None => format!("{name}!"),
    }
}

/// The quadratic dual: generators M(2)^∨ ⊗ sgn, relations the annihilator
/// of the Σ_3-closed relation space under the signed pairing.
pub fn quadratic_dual(pres: &QuadraticPresentation) -> Result<QuadraticPresentation> {
    if let Some(g) = pres.generators().iter().find(|g| g.arity != 2) {
        return Err(OpkError::arg(format!("quadratic duality needs binary generators, {} has arity {}", g.name, g.arity)));
    }
    let gens: Vec<GeneratorDecl> = pres
        .generators()
        .iter()
        .map(|g| GeneratorDecl {
            name: g.name.clone(),
            arity: 2,
            symmetry: dual_symmetry(&g.symmetry),
        })
        .collect();
    let free = FreeOperad::new(pres.generator_module(Q, 3)?, 3)?;
    let comp = free.component(3, 2);
    let span = pres.relation_span(&free, 3)?;
    let entries = span.iter().enumerate().flat_map(|(row, r)| {
        r.iter().map(move |&(j, c)| {
            let c = if pairing_sign(&comp.elems()[j]) < 0 { Q.neg(c) } else { c };
            (row, j, c)
        })
    });
    let pairing = ExactMatrix::from_entries(Q, span.len(), comp.len(), entries);
    let relations = kernel_basis(&pairing)
        .columns()
        .iter()
        .map(|v| Relation {
            arity: 3,
            terms: v.iter().map(|&(j, c)| (comp.elems()[j].clone(), c)).collect(),
        })
        .collect();
    QuadraticPresentation::new(dual_name(pres.name()), gens, relations)
}
