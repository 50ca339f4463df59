use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{OpkError, Result};

/// A permutation of {1..n}. Stored 0-based; every public index is 1-based.
///
/// Composition is `(v * w)(k) = v(w(k))`. The operad action convention is
/// `w_*(p)(x_1, …, x_r) = p(x_{w(1)}, …, x_{w(r)})`, which makes
/// `(v w)_* = v_* w_*`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    /// From 1-based images `w(1), …, w(n)`.
    pub fn new(images: &[usize]) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in images {
            if x == 0 || x > n || seen[x - 1] {
                return Err(OpkError::arg(format!("{images:?} is not a permutation of 1..{n}")));
            }
            seen[x - 1] = true;
        }
        Ok(Permutation {
            images: images.iter().map(|&x| (x - 1) as u32).collect(),
        })
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n as u32).collect(),
        }
    }

    /// The simple transposition s_i = (i i+1), 1 ≤ i < n.
    pub fn simple(n: usize, i: usize) -> Result<Self> {
        if i == 0 || i >= n {
            return Err(OpkError::arg(format!("no simple transposition s_{i} in Σ_{n}")));
        }
        let mut images: Vec<u32> = (0..n as u32).collect();
        images.swap(i - 1, i);
        Ok(Permutation { images })
    }

    /// Product of disjoint cycles given with 1-based entries.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut images: Vec<usize> = (1..=n).collect();
        let mut used = vec![false; n + 1];
        for c in cycles {
            for (k, &a) in c.iter().enumerate() {
                if a == 0 || a > n || used[a] {
                    return Err(OpkError::arg(format!("invalid cycle {c:?} in Σ_{n}")));
                }
                used[a] = true;
                images[a - 1] = c[(k + 1) % c.len()];
            }
        }
        Permutation::new(&images)
    }

    /// The permutation sending position k to the rank of `keys[k]` among
    /// all keys (keys must be distinct).
    pub fn ranking<K: Ord>(keys: &[K]) -> Self {
        let mut order: Vec<usize> = (0..keys.len()).collect();
        order.sort_by(|&a, &b| keys[a].cmp(&keys[b]));
        let mut images = vec![0u32; keys.len()];
        for (rank, &k) in order.iter().enumerate() {
            images[k] = rank as u32;
        }
        Permutation { images }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    /// w(k), 1-based.
    pub fn apply(&self, k: usize) -> usize {
        self.images[k - 1] as usize + 1
    }

    pub(crate) fn at(&self, k: usize) -> usize {
        self.images[k] as usize
    }

    /// Images w(1), …, w(n), 1-based.
    pub fn images(&self) -> Vec<usize> {
        self.images.iter().map(|&x| x as usize + 1).collect()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.len() != other.len() {
            return Err(OpkError::arg("composing permutations of different sizes"));
        }
        Ok(Permutation {
            images: other.images.iter().map(|&x| self.images[x as usize]).collect(),
        })
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0u32; self.len()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x as usize] = i as u32;
        }
        Permutation { images }
    }

    /// Cycle lengths in decreasing order.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for s in 0..self.len() {
            if seen[s] {
                continue;
            }
            let mut len = 0;
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                x = self.images[x] as usize;
                len += 1;
            }
            out.push(len);
        }
        out.sort_unstable_by(|a, b| b.cmp(a));
        out
    }

    pub fn sign(&self) -> i64 {
        let odd = self.cycle_type().iter().filter(|&&l| l % 2 == 0).count();
        if odd % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Indices a_1, …, a_m with w = s_{a_1} ∘ ⋯ ∘ s_{a_m} (a reduced word).
    pub fn simple_factorization(&self) -> Vec<usize> {
        // Bubble-sort the image list; swapping positions (i, i+1) replaces w by
        // w ∘ s_i, so the swaps read backwards give w.
        let mut a = self.images.clone();
        let mut word = Vec::new();
        let n = a.len();
        for end in (1..n).rev() {
            for i in 0..end {
                if a[i] > a[i + 1] {
                    a.swap(i, i + 1);
                    word.push(i + 1);
                }
            }
        }
        word.reverse();
        word
    }

    /// All permutations of {1..n} in lexicographic order of images.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut cur: Vec<u32> = (0..n as u32).collect();
        let mut out = vec![Permutation { images: cur.clone() }];
        loop {
            let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
                return out;
            };
            let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).expect("successor exists");
            cur.swap(i - 1, j);
            cur[i..].reverse();
            out.push(Permutation { images: cur.clone() });
        }
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm{:?}", self.images())
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.images().iter().map(|x| x.to_string()).collect();
        write!(f, "[{}]", s.join(" "))
    }
}

/// Integer partitions of n, each in decreasing order, reverse lexicographic.
pub fn integer_partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        for k in (1..=max.min(n)).rev() {
            cur.push(k);
            go(n - k, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// One permutation per conjugacy class of Σ_n, built from consecutive cycles,
/// paired with its cycle type.
pub fn conjugacy_class_representatives(n: usize) -> Vec<(Vec<usize>, Permutation)> {
    integer_partitions(n)
        .into_iter()
        .map(|shape| {
            let mut images = vec![0u32; n];
            let mut start = 0;
            for &len in &shape {
                for k in 0..len {
                    images[start + k] = (start + (k + 1) % len) as u32;
                }
                start += len;
            }
            (shape, Permutation { images })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn signs_and_inverse() {
        let w = Permutation::new(&[2, 3, 1]).unwrap();
        assert_eq!(w.sign(), 1);
        assert_eq!(w.cycle_type(), vec![3]);
        assert!(w.compose(&w.inverse()).unwrap().is_identity());
        assert_eq!(Permutation::simple(3, 2).unwrap().sign(), -1);
        assert!(Permutation::new(&[1, 1]).is_err());
    }

    #[test]
    fn factorization_recovers_the_permutation() {
        for w in Permutation::all(5) {
            let mut p = Permutation::identity(5);
            for &i in &w.simple_factorization() {
                p = p.compose(&Permutation::simple(5, i).unwrap()).unwrap();
            }
            assert_eq!(p, w);
            assert_eq!(w.sign(), if w.simple_factorization().len() % 2 == 0 { 1 } else { -1 });
        }
    }

    #[test]
    fn class_counts() {
        assert_eq!(Permutation::all(4).len(), 24);
        assert_eq!(integer_partitions(5).len(), 7);
        let reps = conjugacy_class_representatives(4);
        assert!(reps.iter().all(|(t, w)| &w.cycle_type() == t));
        let r = Permutation::ranking(&[30, 10, 20]);
        assert_eq!(r.images(), vec![3, 1, 2]);
    }
}
