mod common;

use std::time::Instant;

use opk_core::combinatorics::{conjugacy_class_representatives, Permutation};
use opk_core::exact_linalg::CoefficientRing;
use opk_core::sigma_operads::{
    compose_modules, free_operad, preset, quadratic_dual, quadratic_quotient, SymSequence,
};
use opk_core::OpkError;

const Q: CoefficientRing = CoefficientRing::Rationals;
const Z: CoefficientRing = CoefficientRing::Integers;

fn ranks(name: &str, ring: CoefficientRing, max: usize) -> Vec<usize> {
    let p = quadratic_quotient(&preset(name).unwrap(), ring, max).unwrap();
    (1..=max).map(|n| p.rank(n)).collect()
}

#[test]
fn classical_dimensions() {
    let t = Instant::now();
    assert_eq!(ranks("com", Z, 6), vec![1; 6]);
    assert_eq!(ranks("lie", Z, 5), vec![1, 1, 2, 6, 24]);
    assert_eq!(ranks("assoc", Z, 5), vec![1, 2, 6, 24, 120]);
    let lie = ranks("lie", Q, 6);
    let oracle: Vec<usize> = (1..=6).map(common::lie_dimension_oracle).collect();
    assert_eq!(lie, oracle);
    eprintln!("classical dimensions in {:?}", t.elapsed());
}

#[test]
fn associative_arity_six() {
    let t = Instant::now();
    assert_eq!(ranks("assoc", Q, 6)[5], 720);
    eprintln!("assoc(6) in {:?}", t.elapsed());
}

#[test]
fn composition_axioms_on_presets() {
    for (name, max) in [("com", 5), ("assoc", 4), ("lie", 5)] {
        let p = quadratic_quotient(&preset(name).unwrap(), Q, max).unwrap();
        assert_eq!(p.check_associativity(), Ok(()), "{name}");
        assert_eq!(p.check_equivariance(&[]), Ok(()), "{name}");
        assert!(p.check_weights(), "{name}");
        assert!((1..=max).all(|n| p.module().satisfies_coxeter(n)));
    }
}

#[test]
fn lie_characters() {
    let lie = quadratic_quotient(&preset("lie").unwrap(), Q, 4).unwrap();
    let c3 = Permutation::from_cycles(3, &[vec![1, 2, 3]]).unwrap();
    assert_eq!(lie.character(3, &c3).unwrap(), Q.from_int(-1));
    assert_eq!(lie.character(3, &Permutation::simple(3, 1).unwrap()).unwrap(), Q.from_int(0));
    // Lie(4): character values 6, 0, −2, 0, 2 on cycle types (1111), (211), (22), (31), (4).
    let expected = [(vec![4], 0), (vec![3, 1], 0), (vec![2, 2], -2), (vec![2, 1, 1], 0), (vec![1, 1, 1, 1], 6)];
    for (ty, w) in conjugacy_class_representatives(4) {
        let want = expected.iter().find(|(t, _)| *t == ty).unwrap().1;
        assert_eq!(lie.character(4, &w).unwrap(), Q.from_int(want), "{ty:?}");
    }
}

#[test]
fn quadratic_duals() {
    let com = preset("com").unwrap();
    let lie = preset("lie").unwrap();
    let assoc = preset("assoc").unwrap();
    let dc = quadratic_dual(&com).unwrap();
    assert_eq!(dc.relation_dimensions().unwrap()[&3], 1);
    assert_eq!(
        (1..=5).map(|n| quadratic_quotient(&dc, Q, 5).unwrap().rank(n)).collect::<Vec<_>>(),
        vec![1, 1, 2, 6, 24]
    );
    let dl = quadratic_dual(&lie).unwrap();
    assert_eq!(dl.relation_dimensions().unwrap()[&3], 2);
    assert_eq!((1..=5).map(|n| quadratic_quotient(&dl, Q, 5).unwrap().rank(n)).collect::<Vec<_>>(), vec![1; 5]);
    let da = quadratic_dual(&assoc).unwrap();
    assert_eq!(da.relation_dimensions().unwrap()[&3], 6);
    assert_eq!(
        (1..=5).map(|n| quadratic_quotient(&da, Q, 5).unwrap().rank(n)).collect::<Vec<_>>(),
        vec![1, 2, 6, 24, 120]
    );
    for p in [&com, &lie, &assoc] {
        let dd = quadratic_dual(&quadratic_dual(p).unwrap()).unwrap();
        assert_eq!(dd.relation_dimensions().unwrap(), p.relation_dimensions().unwrap());
        assert_eq!(dd.generators().len(), p.generators().len());
        assert_eq!(dd.name(), p.name());
    }
    let text = dc.to_dsl();
    assert_eq!(opk_core::sigma_operads::parse_presentation(&text).unwrap(), dc);
}

#[test]
fn non_binary_dual_is_rejected() {
    let p = opk_core::sigma_operads::parse_presentation("gen t arity 3 trivial").unwrap();
    assert!(matches!(quadratic_dual(&p), Err(OpkError::InvalidArgument(_))));
}

#[test]
fn free_operad_dimensions() {
    let m = SymSequence::regular(Q, 2, 4).unwrap();
    let f = free_operad(&m, 4).unwrap();
    // 2^(n−1) labelings of each of the (2n−3)!! binary trees.
    assert_eq!((1..=4).map(|n| f.rank(n)).collect::<Vec<_>>(), vec![1, 2, 12, 120]);
    assert_eq!(f.weight_ranks(3).into_iter().collect::<Vec<_>>(), vec![(2, 12)]);
    assert!(f.check_associativity().is_ok());
}

#[test]
fn composite_dimension_formula() {
    // Brute force: sum over set partitions of {1..n} of rank M(#blocks) · Π rank N(|block|).
    fn brute(n: usize, m: &[usize], k: &[usize]) -> usize {
        fn go(i: usize, n: usize, sizes: &mut Vec<usize>, m: &[usize], k: &[usize]) -> usize {
            if i == n {
                return m[sizes.len()] * sizes.iter().map(|&s| k[s]).product::<usize>();
            }
            let mut total = 0;
            for b in 0..sizes.len() {
                sizes[b] += 1;
                total += go(i + 1, n, sizes, m, k);
                sizes[b] -= 1;
            }
            sizes.push(1);
            total += go(i + 1, n, sizes, m, k);
            sizes.pop();
            total
        }
        go(0, n, &mut Vec::new(), m, k)
    }
    let max = 6;
    let fixtures: Vec<SymSequence> = vec![
        (1..=max).fold(SymSequence::zero(Q, max), |acc, r| acc.direct_sum(&SymSequence::trivial(Q, r, max).unwrap()).unwrap()),
        SymSequence::regular(Q, 2, max).unwrap().direct_sum(&SymSequence::sign(Q, 3, max).unwrap()).unwrap(),
        SymSequence::unit(Q, max).unwrap().direct_sum(&SymSequence::regular(Q, 3, max).unwrap()).unwrap(),
    ];
    for a in &fixtures {
        for b in &fixtures {
            let c = compose_modules(a, b).unwrap();
            for n in 1..=max {
                assert_eq!(c.rank(n), brute(n, &a.ranks(), &b.ranks()), "n = {n}");
            }
            assert!((1..=4).all(|n| c.satisfies_coxeter(n)));
        }
    }
}
