//! Sparse vectors as sorted `(index, value)` lists without zero entries.

use std::collections::HashMap;

use super::ring::{CoefficientRing, Scalar};

pub type SparseVec = Vec<(usize, Scalar)>;

/// Builds a normalized sparse vector from unsorted, possibly repeated terms.
pub fn collect<I>(ring: CoefficientRing, terms: I) -> SparseVec
where
    I: IntoIterator<Item = (usize, Scalar)>,
{
    let mut acc: HashMap<usize, Scalar> = HashMap::new();
    for (i, c) in terms {
        if c.is_zero() {
            continue;
        }
        let e = acc.entry(i).or_insert(Scalar::ZERO);
        *e = ring.add(*e, c);
    }
    let mut v: SparseVec = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
    v.sort_unstable_by_key(|&(i, _)| i);
    v
}

/// Returns `x + a·y`.
pub fn axpy(ring: CoefficientRing, x: &[(usize, Scalar)], a: Scalar, y: &[(usize, Scalar)]) -> SparseVec {
    if a.is_zero() {
        return x.to_vec();
    }
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        if j == y.len() || (i < x.len() && x[i].0 < y[j].0) {
            out.push(x[i]);
            i += 1;
        } else if i == x.len() || y[j].0 < x[i].0 {
            out.push((y[j].0, ring.mul(a, y[j].1)));
            j += 1;
        } else {
            let c = ring.add(x[i].1, ring.mul(a, y[j].1));
            if !c.is_zero() {
                out.push((x[i].0, c));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Returns `a·x + b·y`.
pub fn lin_comb(
    ring: CoefficientRing,
    a: Scalar,
    x: &[(usize, Scalar)],
    b: Scalar,
    y: &[(usize, Scalar)],
) -> SparseVec {
    let ax = scale(ring, a, x);
    axpy(ring, &ax, b, y)
}

pub fn scale(ring: CoefficientRing, a: Scalar, x: &[(usize, Scalar)]) -> SparseVec {
    if a.is_zero() {
        return Vec::new();
    }
    x.iter()
        .map(|&(i, c)| (i, ring.mul(a, c)))
        .filter(|(_, c)| !c.is_zero())
        .collect()
}

pub fn neg(ring: CoefficientRing, x: &[(usize, Scalar)]) -> SparseVec {
    x.iter().map(|&(i, c)| (i, ring.neg(c))).collect()
}

pub fn get(x: &[(usize, Scalar)], i: usize) -> Scalar {
    match x.binary_search_by_key(&i, |&(k, _)| k) {
        Ok(pos) => x[pos].1,
        Err(_) => Scalar::ZERO,
    }
}

/// Dot product of two sparse vectors.
pub fn dot(ring: CoefficientRing, x: &[(usize, Scalar)], y: &[(usize, Scalar)]) -> Scalar {
    let (mut i, mut j) = (0, 0);
    let mut s = Scalar::ZERO;
    while i < x.len() && j < y.len() {
        match x[i].0.cmp(&y[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                s = ring.add(s, ring.mul(x[i].1, y[j].1));
                i += 1;
                j += 1;
            }
        }
    }
    s
}
