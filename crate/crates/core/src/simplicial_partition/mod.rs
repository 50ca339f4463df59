//! The simplicial bar construction on trees with levels, the partition
//! complex and its identification with N̄(Com), the extra degeneracy of
//! C(I,P,P), and the levelization map B̄(P) → N̄(P).

mod levelization;
mod partition;
mod simplicial;

pub use levelization::{levelization, levelize_elem, LevelizationMap, LevelizationReport};
pub use partition::{partition_complex, PartitionComplex};
pub use simplicial::{
    check_simplicial_identities, extra_degeneracy_check, simplicial_bar, ExtraDegeneracyCheck, LevelCell,
    SimplicialBarComplex,
};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::{mobius_bottom_top, Permutation};
    use crate::exact_linalg::{homology, CoefficientRing};
    use crate::sigma_operads::{preset, quadratic_quotient, OperadStructure};

    fn operad(name: &str, max: usize) -> OperadStructure {
        quadratic_quotient(&preset(name).unwrap(), CoefficientRing::Integers, max).unwrap()
    }

    #[test]
    fn simplicial_dimensions() {
        let com = operad("com", 4);
        let s = simplicial_bar(&com, 3, 2).unwrap();
        assert_eq!(s.dims(), &[1, 3]);
        let h = homology(s.complex());
        assert_eq!(h.betti(2), 2);
        assert_eq!(h.total_rank(), 2);
        let assoc = operad("assoc", 4);
        assert_eq!(simplicial_bar(&assoc, 4, 3).unwrap().dims(), &[24, 144, 144]);
        for name in ["com", "assoc", "lie"] {
            let p = operad(name, 2);
            let s = simplicial_bar(&p, 2, 3).unwrap();
            assert_eq!(s.dims(), &[p.rank(2)]);
            assert!(s.complex().boundary(1).unwrap().is_zero());
        }
        assert!(simplicial_bar(&com, 3, 0).is_err());
    }

    #[test]
    fn simplicial_identities() {
        for name in ["com", "assoc", "lie"] {
            let p = operad(name, 4);
            for n in 1..=4 {
                check_simplicial_identities(&p, n, 4).unwrap();
            }
        }
    }

    #[test]
    fn extra_degeneracy() {
        for name in ["com", "assoc", "lie"] {
            let p = operad(name, 4);
            for n in 1..=4 {
                let c = extra_degeneracy_check(&p, n).unwrap();
                assert!(c.holds, "{name} {n}: {:?}", c.counterexample);
            }
        }
    }

    #[test]
    fn partition_complexes() {
        let k2 = partition_complex(2).unwrap();
        assert_eq!(k2.complex().dims(), &[1]);
        assert_eq!(homology(k2.complex()).betti(1), 1);
        let k3 = partition_complex(3).unwrap();
        assert_eq!(k3.complex().dims(), &[1, 3]);
        let h = homology(k3.complex());
        assert_eq!(h.betti(2), 2);
        assert!(h.torsion.is_empty());
        for r in 2..=5 {
            let k = partition_complex(r).unwrap();
            let h = homology(k.complex());
            let fact: usize = (1..r).product();
            assert_eq!(h.betti((r - 1) as i64), fact);
            assert_eq!(h.total_rank(), fact);
            assert!(h.torsion.is_empty());
            let chi = k.complex().euler_characteristic();
            assert_eq!(chi, if r % 2 == 0 { -(fact as i64) } else { fact as i64 });
            assert_eq!(chi, mobius_bottom_top(r).unwrap());
        }
        assert!(partition_complex(1).is_err());
    }

    /// sgn ⊗ Lie(r): χ(w) = sgn(w) μ(k) (r/k − 1)! k^{r/k − 1} when all
    /// cycles of w have length k, and 0 otherwise.
    fn lie_sign_character(w: &Permutation) -> i64 {
        let r = w.len();
        let ct = w.cycle_type();
        let k = ct[0];
        if ct.iter().any(|&c| c != k) {
            return 0;
        }
        let mu = |mut m: usize| {
            let mut out = 1i64;
            let mut q = 2;
            while m > 1 {
                if m % q == 0 {
                    m /= q;
                    if m % q == 0 {
                        return 0;
                    }
                    out = -out;
                }
                q += 1;
            }
            out
        };
        let m = r / k;
        let fact: i64 = (1..m as i64).product();
        w.sign() * mu(k) * fact * (k as i64).pow(m as u32 - 1)
    }

    #[test]
    fn top_homology_character() {
        for r in 2..=5 {
            let k = partition_complex(r).unwrap();
            for (_, w) in crate::combinatorics::conjugacy_class_representatives(r) {
                let chi = k.top_homology_character(&w).unwrap();
                assert_eq!(chi, CoefficientRing::Rationals.from_int(lie_sign_character(&w)), "r={r} {w:?}");
            }
        }
    }

    #[test]
    fn partition_complex_is_normalized_com_bar() {
        for r in 2..=5 {
            let k = partition_complex(r).unwrap();
            let s = simplicial_bar(&operad("com", r), r, r - 1).unwrap();
            assert_eq!(k.complex().dims(), s.dims());
            for d in 1..r {
                let phi = k.isomorphism(&s, d);
                assert_eq!(crate::exact_linalg::rank(&phi), phi.cols());
                if d > 1 {
                    let lhs = s.complex().boundary(d as i64).unwrap().mul(&phi).unwrap();
                    let rhs = k.isomorphism(&s, d - 1).mul(k.complex().boundary(d as i64).unwrap()).unwrap();
                    assert_eq!(lhs, rhs);
                }
                let com = operad("com", r);
                for w in [Permutation::from_cycles(r, &[(1..=r).collect()]).unwrap(), Permutation::simple(r, 1).unwrap()] {
                    let lhs = s.action(&com, d, &w).mul(&phi).unwrap();
                    let rhs = phi.mul(&k.action(d, &w).unwrap()).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn levelization_is_a_quasi_isomorphism() {
        for name in ["com", "assoc", "lie"] {
            let p = operad(name, 5);
            for n in 1..=5 {
                let l = levelization(&p, n).unwrap();
                let r = l.report().unwrap();
                assert!(r.chain_map, "{name} {n}");
                assert!(r.injective, "{name} {n}");
                assert!(r.quasi_isomorphism, "{name} {n}");
                assert_eq!(r.bar_homology, r.simplicial_homology);
            }
        }
    }
}
