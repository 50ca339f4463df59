mod common;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use opk_core::bar_koszul::{bar_complex, twisted_complex, TwistedKind};
use opk_core::combinatorics::Permutation;
use opk_core::exact_linalg::{homology, smith_normal_form, ChainComplexData, CoefficientRing, ExactMatrix};
use opk_core::sigma_operads::{preset, quadratic_quotient, OperadStructure};
use opk_core::simplicial_partition::{check_simplicial_identities, partition_complex, simplicial_bar};
use proptest::prelude::*;

const Z: CoefficientRing = CoefficientRing::Integers;
const Q: CoefficientRing = CoefficientRing::Rationals;

fn permutation(max: usize) -> impl Strategy<Value = Permutation> {
    (1..=max).prop_flat_map(|n| Just((1..=n).collect::<Vec<usize>>()).prop_shuffle())
        .prop_map(|images| Permutation::new(&images).unwrap())
}

fn same_size_triple(max: usize) -> impl Strategy<Value = (Permutation, Permutation, Permutation)> {
    (1..=max).prop_flat_map(|n| {
        let one = Just((1..=n).collect::<Vec<usize>>()).prop_shuffle();
        (one.clone(), one.clone(), one)
    })
    .prop_map(|(a, b, c)| (Permutation::new(&a).unwrap(), Permutation::new(&b).unwrap(), Permutation::new(&c).unwrap()))
}

fn inversion_sign(w: &Permutation) -> i64 {
    let im = w.images();
    let inversions = (0..im.len()).flat_map(|i| (i + 1..im.len()).map(move |j| (i, j))).filter(|&(i, j)| im[i] > im[j]).count();
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

fn integer_matrix(max: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1..=max, 1..=max).prop_flat_map(|(m, n)| prop::collection::vec(prop::collection::vec(-5i64..=5, n), m))
}

fn big_product(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| (0..cols).map(|j| row.iter().zip(b).map(|(x, r)| x * &r[j]).sum()).collect())
        .collect()
}

fn operad(name: &str, ring: CoefficientRing, max: usize) -> OperadStructure {
    quadratic_quotient(&preset(name).unwrap(), ring, max).unwrap()
}

fn square_zero(c: &ChainComplexData) -> bool {
    c.degrees().skip(1).all(|d| c.boundary(d - 1).unwrap().mul(c.boundary(d).unwrap()).unwrap().is_zero())
}

fn ring() -> impl Strategy<Value = CoefficientRing> {
    prop_oneof![
        Just(Z),
        Just(Q),
        Just(CoefficientRing::PrimeField(2)),
        Just(CoefficientRing::PrimeField(3)),
        Just(CoefficientRing::PrimeField(5)),
    ]
}

fn preset_name() -> impl Strategy<Value = &'static str> {
    prop_oneof![Just("com"), Just("assoc"), Just("lie")]
}

fn twisted_kind() -> impl Strategy<Value = TwistedKind> {
    prop_oneof![
        Just(TwistedKind::BarRight),
        Just(TwistedKind::BarLeft),
        Just(TwistedKind::KoszulRight),
        Just(TwistedKind::KoszulLeft),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn permutations_form_a_group((u, v, w) in same_size_triple(8)) {
        let uv_w = u.compose(&v).unwrap().compose(&w).unwrap();
        let u_vw = u.compose(&v.compose(&w).unwrap()).unwrap();
        prop_assert_eq!(uv_w, u_vw);
        prop_assert!(u.compose(&u.inverse()).unwrap().is_identity());
        prop_assert!(u.inverse().compose(&u).unwrap().is_identity());
        prop_assert_eq!(u.compose(&v).unwrap().sign(), u.sign() * v.sign());
    }

    #[test]
    fn sign_and_cycle_type(w in permutation(9)) {
        prop_assert_eq!(w.sign(), inversion_sign(&w));
        let shape = w.cycle_type();
        prop_assert_eq!(shape.iter().sum::<usize>(), w.len());
        let parity = shape.iter().map(|k| k - 1).sum::<usize>() % 2;
        prop_assert_eq!(w.sign(), if parity == 0 { 1 } else { -1 });
        prop_assert!(shape.windows(2).all(|p| p[0] >= p[1]));
        prop_assert_eq!(w.inverse().cycle_type(), shape);
    }

    #[test]
    fn field_arithmetic(p in prop_oneof![Just(2u64), Just(3), Just(7), Just(101)], a in -50i64..50, b in -50i64..50, c in -50i64..50) {
        for ring in [CoefficientRing::prime_field(p).unwrap(), Q] {
            let (x, y, z) = (ring.from_int(a), ring.from_int(b), ring.from_int(c));
            prop_assert_eq!(ring.mul(x, ring.add(y, z)), ring.add(ring.mul(x, y), ring.mul(x, z)));
            prop_assert_eq!(ring.add(x, ring.neg(x)), ring.zero());
            if let Some(inv) = ring.inv(x) {
                prop_assert_eq!(ring.mul(x, inv), ring.one());
            } else {
                prop_assert!(x.is_zero());
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn smith_normal_form_identity(rows in integer_matrix(30)) {
        let f = smith_normal_form(&ExactMatrix::from_rows_i64(Z, &rows)).unwrap();
        let a: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        let (u, d, v) = (f.u.to_rows(), f.d.to_rows(), f.v.to_rows());
        prop_assert_eq!(&big_product(&big_product(u, &a), v), d);
        prop_assert!(common::determinant(u).abs().is_one());
        prop_assert!(common::determinant(v).abs().is_one());
        for (i, row) in d.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                prop_assert!(i == j || x.is_zero());
            }
        }
        let factors = f.invariant_factors();
        prop_assert!(factors.iter().all(|x| x.is_positive()));
        prop_assert!(factors.windows(2).all(|w| (&w[1] % &w[0]).is_zero()));
        // Rank modulo p counts the invariant factors that p does not divide.
        let p = BigInt::from(common::ORACLE_PRIME);
        let mod_p = factors.iter().filter(|x| !(*x % &p).is_zero()).count();
        prop_assert_eq!(mod_p, common::rank_mod_p(&rows, rows[0].len()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn constructed_complexes_square_to_zero(name in preset_name(), ring in ring(), n in 1usize..=4, kind in twisted_kind()) {
        let p = operad(name, ring, 4);
        let bar = bar_complex(&p, n).unwrap();
        prop_assert!(square_zero(bar.complex()));
        let t = twisted_complex(&p, kind, n).unwrap();
        prop_assert!(square_zero(&t.complex));
        let s = simplicial_bar(&p, n, 4).unwrap();
        prop_assert!(square_zero(s.complex()));
        // Euler characteristics of chains and of homology agree over a field.
        if ring.is_field() {
            for c in [bar.complex(), &t.complex, s.complex()] {
                let h = homology(c);
                let chi: i64 = h.betti.iter().map(|(&d, &b)| if d % 2 == 0 { b as i64 } else { -(b as i64) }).sum();
                prop_assert_eq!(chi, c.euler_characteristic());
            }
        }
    }

    #[test]
    fn simplicial_identities_hold(name in preset_name(), ring in ring(), n in 1usize..=4, max_dim in 1usize..=4) {
        let p = operad(name, ring, 4);
        prop_assert_eq!(check_simplicial_identities(&p, n, max_dim), Ok(()));
    }

    #[test]
    fn operad_equivariance_on_random_permutations(name in preset_name(), perms in prop::collection::vec(permutation(4), 1..4)) {
        let p = operad(name, Z, 4);
        prop_assert_eq!(p.check_equivariance(&perms), Ok(()));
        prop_assert_eq!(p.check_associativity(), Ok(()));
    }

    #[test]
    fn partition_action_is_a_representation(r in 2usize..=5, seed in any::<u64>()) {
        let k = partition_complex(r).unwrap();
        let mut images: Vec<usize> = (1..=r).collect();
        let mut rng = seed;
        for i in (1..r).rev() {
            rng = rng.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            images.swap(i, (rng >> 33) as usize % (i + 1));
        }
        let w = Permutation::new(&images).unwrap();
        for d in 1..r {
            let a = k.action(d, &w).unwrap();
            let back = k.action(d, &w.inverse()).unwrap();
            prop_assert!(a.mul(&back).unwrap() == ExactMatrix::identity(Z, a.rows()));
            if d > 1 {
                // Equivariant boundary.
                let b = k.complex().boundary(d as i64).unwrap();
                let lower = k.action(d - 1, &w).unwrap();
                prop_assert_eq!(b.mul(&a).unwrap(), lower.mul(b).unwrap());
            }
        }
    }
}
