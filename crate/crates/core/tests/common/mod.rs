//! Independent oracles shared by the integration tests. Nothing here calls
//! into the library's linear algebra or tree code.
#![allow(dead_code)]

use std::collections::HashMap;

pub const ORACLE_PRIME: i64 = 1_000_000_007;

pub fn factorial(n: usize) -> usize {
    (1..=n).product()
}

/// Rank of an integer matrix (list of rows) modulo `ORACLE_PRIME`, by
/// dense Gaussian elimination.
pub fn rank_mod_p(rows: &[Vec<i64>], cols: usize) -> usize {
    let p = ORACLE_PRIME;
    let pow = |mut b: i64, mut e: i64| {
        let mut r = 1i64;
        b = b.rem_euclid(p);
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        r
    };
    let mut m: Vec<Vec<i64>> = rows.iter().map(|r| r.iter().map(|x| x.rem_euclid(p)).collect()).collect();
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..m.len()).find(|&i| m[i][c] != 0) else { continue };
        m.swap(rank, piv);
        let inv = pow(m[rank][c], p - 2);
        for x in m[rank].iter_mut() {
            *x = *x * inv % p;
        }
        let pivot_row = m[rank].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != rank && row[c] != 0 {
                let f = row[c];
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x = (*x - f * y).rem_euclid(p);
                }
            }
        }
        rank += 1;
    }
    rank
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Word {
    Leaf(u8),
    Br(Box<Word>, Box<Word>),
}

impl Word {
    fn min(&self) -> u8 {
        match self {
            Word::Leaf(x) => *x,
            Word::Br(a, b) => a.min().min(b.min()),
        }
    }

    /// Normal form under antisymmetry: in every bracket the left factor
    /// holds the smaller letter. Returns the sign.
    fn normalize(self) -> (Word, i64) {
        match self {
            Word::Leaf(x) => (Word::Leaf(x), 1),
            Word::Br(a, b) => {
                let (a, s) = a.normalize();
                let (b, t) = b.normalize();
                if a.min() < b.min() {
                    (Word::Br(Box::new(a), Box::new(b)), s * t)
                } else {
                    (Word::Br(Box::new(b), Box::new(a)), -s * t)
                }
            }
        }
    }

    fn br(a: Word, b: Word) -> Word {
        Word::Br(Box::new(a), Box::new(b))
    }
}

fn words_on(letters: &[u8]) -> Vec<Word> {
    if letters.len() == 1 {
        return vec![Word::Leaf(letters[0])];
    }
    let mut out = Vec::new();
    let rest = &letters[1..];
    // Left part contains the first letter.
    for mask in 0..(1u32 << rest.len()) {
        if mask == (1u32 << rest.len()) - 1 {
            continue;
        }
        let mut left = vec![letters[0]];
        let mut right = Vec::new();
        for (k, &x) in rest.iter().enumerate() {
            if mask >> k & 1 == 1 {
                left.push(x);
            } else {
                right.push(x);
            }
        }
        for a in words_on(&left) {
            for b in words_on(&right) {
                out.push(Word::br(a.clone(), b));
            }
        }
    }
    out
}

/// All ways to rewrite one bracket [a, [b, c]] or [[b, c], a] of `w` by the
/// three Jacobi terms; each result is a list of (word, sign).
fn jacobi_rewrites(w: &Word) -> Vec<Vec<(Word, i64)>> {
    let mut out = Vec::new();
    if let Word::Br(x, y) = w {
        let mut here = |a: &Word, b: &Word, c: &Word| {
            out.push(vec![
                (Word::br(a.clone(), Word::br(b.clone(), c.clone())), 1),
                (Word::br(b.clone(), Word::br(c.clone(), a.clone())), 1),
                (Word::br(c.clone(), Word::br(a.clone(), b.clone())), 1),
            ]);
        };
        if let Word::Br(b, c) = y.as_ref() {
            here(x, b, c);
        }
        if let Word::Br(b, c) = x.as_ref() {
            here(y, b, c);
        }
        for r in jacobi_rewrites(x) {
            out.push(r.into_iter().map(|(t, s)| (Word::br(t, y.as_ref().clone()), s)).collect());
        }
        for r in jacobi_rewrites(y) {
            out.push(r.into_iter().map(|(t, s)| (Word::br(x.as_ref().clone(), t), s)).collect());
        }
    }
    out
}

/// dim Lie(r): multilinear bracket words in x1..xr modulo antisymmetry and
/// the Jacobi identity at every position.
pub fn lie_dimension_oracle(r: usize) -> usize {
    if r == 1 {
        return 1;
    }
    let letters: Vec<u8> = (1..=r as u8).collect();
    let basis = words_on(&letters);
    let index: HashMap<Word, usize> = basis.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
    let mut rows = Vec::new();
    for w in &basis {
        for rel in jacobi_rewrites(w) {
            let mut row = vec![0i64; basis.len()];
            for (t, s) in rel {
                let (t, s2) = t.normalize();
                row[index[&t]] += s * s2;
            }
            if row.iter().any(|&x| x != 0) {
                rows.push(row);
            }
        }
    }
    basis.len() - rank_mod_p(&rows, basis.len())
}

/// Numbers of planar trees with n leaves and k = 1..n−1 internal vertices,
/// every vertex having at least two inputs.
pub fn planar_tree_counts(n: usize) -> Vec<usize> {
    // t[m][k]: planar trees with m leaves and k vertices (a bare leaf has 0);
    // f[c][m][k]: ordered forests of c such trees.
    let mut t = vec![vec![0usize; n + 1]; n + 1];
    t[1][0] = 1;
    for m in 2..=n {
        // forests of c ≥ 2 trees on m leaves with k vertices
        let mut f = vec![vec![vec![0usize; n + 1]; m + 1]; m + 1];
        f[0][0][0] = 1;
        for c in 1..=m {
            for lm in 0..=m {
                for lk in 0..=n {
                    if f[c - 1][lm][lk] == 0 {
                        continue;
                    }
                    for a in 1..=m - lm {
                        for b in 0..=n - lk {
                            f[c][lm + a][lk + b] += f[c - 1][lm][lk] * t[a][b];
                        }
                    }
                }
            }
        }
        for k in 1..=n {
            t[m][k] = (2..=m).map(|c| f[c][m][k - 1]).sum();
        }
    }
    (1..n).map(|k| t[n][k]).collect()
}

/// Numbers of ordered set partitions of {1..m} into d = 1..m blocks.
pub fn ordered_set_partition_counts(m: usize) -> Vec<usize> {
    // Surjections onto d labelled blocks: d! S(m, d).
    let mut s = vec![vec![0usize; m + 1]; m + 1];
    s[0][0] = 1;
    for i in 1..=m {
        for d in 1..=i {
            s[i][d] = d * s[i - 1][d] + s[i - 1][d - 1];
        }
    }
    (1..=m).map(|d| factorial(d) * s[m][d]).collect()
}

/// Determinant of a square integer matrix by fraction-free (Bareiss)
/// elimination in arbitrary precision.
pub fn determinant(rows: &[Vec<num_bigint::BigInt>]) -> num_bigint::BigInt {
    use num_bigint::BigInt;
    use num_traits::{One, Zero};
    let n = rows.len();
    let mut m: Vec<Vec<BigInt>> = rows.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        let Some(piv) = (k..n).find(|&i| !m[i][k].is_zero()) else {
            return BigInt::zero();
        };
        if piv != k {
            m.swap(piv, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    if n == 0 {
        return BigInt::one();
    }
    sign * &m[n - 1][n - 1]
}
