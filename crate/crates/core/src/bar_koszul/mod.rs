//! Reduced bar complexes, Koszul constructions and the twisted complexes
//! B(I,P,P), B(P,P,I), K(I,P,P), K(P,P,I).

mod bar;
mod koszul;
mod twisted;

pub(crate) use bar::parity;
pub use bar::{bar_action, bar_complex, bar_differential, cobar_complex, BarBasis, BarComplex};
pub use koszul::{
    is_koszul, koszul_arity_report, koszul_construction, koszul_dual_round_trip, ArityReport, KoszulComponent, KoszulModule, KoszulReport,
};
pub use twisted::{twisted_complex, TwistedComplex, TwistedKind};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_linalg::{homology, CoefficientRing};
    use crate::sigma_operads::{preset, quadratic_quotient, OperadStructure};

    fn operad(name: &str, ring: CoefficientRing, max: usize) -> OperadStructure {
        quadratic_quotient(&preset(name).unwrap(), ring, max).unwrap()
    }

    #[test]
    fn bar_dimensions() {
        let com = operad("com", CoefficientRing::Integers, 4);
        let b = bar_complex(&com, 3).unwrap();
        assert_eq!(b.dims(), &[1, 3]);
        let h = homology(b.complex());
        assert_eq!(h.betti(2), 2);
        assert_eq!(h.total_rank(), 2);
        assert_eq!(bar_complex(&com, 2).unwrap().dims(), &[1]);
        assert_eq!(bar_complex(&com, 1).unwrap().dims(), &[1]);
        let assoc = operad("assoc", CoefficientRing::Rationals, 4);
        assert_eq!(bar_complex(&assoc, 4).unwrap().dims(), &[24, 120, 120]);
    }

    #[test]
    fn cobar_is_the_dual_bar_complex() {
        for name in ["com", "lie", "assoc"] {
            let p = operad(name, CoefficientRing::Integers, 5);
            for n in 2..=5 {
                let cobar = cobar_complex(&p, n).unwrap();
                let dual = crate::exact_linalg::dualize_complex(bar_complex(&p, n).unwrap().complex());
                assert_eq!(cobar.dims(), dual.dims());
                for d in cobar.degrees() {
                    assert_eq!(cobar.boundary(d), dual.boundary(d), "{name} arity {n} degree {d}");
                }
            }
        }
    }

    #[test]
    fn koszul_ranks() {
        let com = operad("com", CoefficientRing::Integers, 5);
        let k = koszul_construction(&com, 5).unwrap();
        assert!(k.check_cycles());
        assert!(k.check_saturated().unwrap());
        for (r, f) in [(1, 1), (2, 1), (3, 2), (4, 6), (5, 24)] {
            assert_eq!(k.rank(r), f, "arity {r}");
        }
        let lie = operad("lie", CoefficientRing::Integers, 5);
        let k = koszul_construction(&lie, 5).unwrap();
        for r in 1..=5 {
            assert_eq!(k.rank(r), 1, "arity {r}");
        }
    }

    #[test]
    fn twisted_complexes_are_acyclic() {
        for name in ["com", "lie", "assoc"] {
            let p = operad(name, CoefficientRing::Integers, 4);
            for kind in TwistedKind::ALL {
                let one = twisted_complex(&p, kind, 1).unwrap();
                assert_eq!(homology(&one.complex).betti, [(0, 1)].into_iter().collect());
                for n in 2..=4 {
                    let c = twisted_complex(&p, kind, n).unwrap();
                    let h = homology(&c.complex);
                    assert!(h.is_zero(), "{name} {kind} arity {n}: {h:?}");
                }
            }
        }
    }
}
