use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::matrix::ExactMatrix;
use super::ring::{CoefficientRing, Scalar};
use crate::error::{OpkError, Result};

/// A dense integer matrix with arbitrary-precision entries.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<BigInt>>,
}

impl IntMatrix {
    pub fn from_exact(a: &ExactMatrix) -> Result<Self> {
        if a.ring() != CoefficientRing::Integers {
            return Err(OpkError::NotIntegers(a.ring().name()));
        }
        let entries = a
            .to_dense()
            .into_iter()
            .map(|row| row.into_iter().map(|x| BigInt::from(x.numer())).collect())
            .collect();
        Ok(IntMatrix {
            rows: a.rows(),
            cols: a.cols(),
            entries,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.entries[r][c]
    }

    pub fn to_rows(&self) -> &[Vec<BigInt>] {
        &self.entries
    }

    /// The same matrix over ℤ with 64-bit entries, if they fit.
    pub fn to_exact(&self) -> Result<ExactMatrix> {
        let mut entries = Vec::new();
        for (i, row) in self.entries.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                let x = x
                    .to_i64()
                    .ok_or_else(|| OpkError::Unsupported(format!("entry {x} does not fit in 64 bits")))?;
                entries.push((i, j, Scalar::int(x)));
            }
        }
        Ok(ExactMatrix::from_entries(CoefficientRing::Integers, self.rows, self.cols, entries))
    }
}

/// Smith normal form `U·A·V = D` of an integer matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    /// The nonzero diagonal entries d_1 | d_2 | … of D.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.d.rows.min(self.d.cols))
            .map(|i| self.d.entries[i][i].clone())
            .take_while(|x| !x.is_zero())
            .collect()
    }
}

/// Computes the Smith normal form of an integer matrix, with transforms.
pub fn smith_normal_form(a: &ExactMatrix) -> Result<SmithForm> {
    let a = IntMatrix::from_exact(a)?;
    let (m, n) = (a.rows, a.cols);
    let (d, u, v) = smith(a.entries, m, n, true);
    let wrap = |entries, rows, cols| IntMatrix { rows, cols, entries };
    Ok(SmithForm {
        u: wrap(u, m, m),
        d: wrap(d, m, n),
        v: wrap(v, n, n),
    })
}

/// Nonzero invariant factors of a dense integer matrix (no transforms).
pub(crate) fn dense_invariant_factors(a: Vec<Vec<i64>>, cols: usize) -> Vec<i64> {
    let rows = a.len();
    let a = a.into_iter().map(|r| r.into_iter().map(BigInt::from).collect()).collect();
    let (d, _, _) = smith(a, rows, cols, false);
    (0..rows.min(cols))
        .map(|i| &d[i][i])
        .take_while(|x| !x.is_zero())
        .map(|x| x.to_i64().unwrap_or_else(|| panic!("invariant factor {x} does not fit in 64 bits")))
        .collect()
}

fn identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

fn transpose(a: Vec<Vec<BigInt>>, cols: usize) -> Vec<Vec<BigInt>> {
    let mut out: Vec<Vec<BigInt>> = (0..cols).map(|_| Vec::with_capacity(a.len())).collect();
    for row in a {
        for (j, x) in row.into_iter().enumerate() {
            out[j].push(x);
        }
    }
    out
}

fn is_diagonal(a: &[Vec<BigInt>]) -> bool {
    a.iter().enumerate().all(|(i, row)| row.iter().enumerate().all(|(j, x)| i == j || x.is_zero()))
}

/// Row operations on a dense matrix, repeated on a left transform.
struct RowOps {
    a: Vec<Vec<BigInt>>,
    u: Option<Vec<Vec<BigInt>>>,
    cols: usize,
}

impl RowOps {
    fn each(&mut self, f: impl Fn(&mut Vec<Vec<BigInt>>)) {
        f(&mut self.a);
        if let Some(u) = &mut self.u {
            f(u);
        }
    }

    fn swap(&mut self, i: usize, j: usize) {
        self.each(|m| m.swap(i, j));
    }

    fn negate(&mut self, i: usize) {
        self.each(|m| {
            for x in &mut m[i] {
                *x = -std::mem::take(x);
            }
        });
    }

    /// row_i += q·row_j
    fn add(&mut self, i: usize, j: usize, q: &BigInt) {
        self.each(|m| {
            let (src, dst) = if i < j {
                let (lo, hi) = m.split_at_mut(j);
                (&hi[0], &mut lo[i])
            } else {
                let (lo, hi) = m.split_at_mut(i);
                (&lo[j], &mut hi[0])
            };
            for (x, y) in dst.iter_mut().zip(src) {
                if !y.is_zero() {
                    *x += q * y;
                }
            }
        });
    }

    /// (row_i, row_j) ← (s·row_i + t·row_j, x·row_i + y·row_j), with sy − tx = 1.
    fn combine(&mut self, i: usize, j: usize, [s, t, x, y]: [&BigInt; 4]) {
        self.each(|m| {
            for k in 0..m[i].len() {
                let (p, q) = (&m[i][k], &m[j][k]);
                let (ni, nj) = (s * p + t * q, x * p + y * q);
                m[i][k] = ni;
                m[j][k] = nj;
            }
        });
    }

    /// Row echelon form with positive pivots and the entries above each
    /// pivot reduced into [0, pivot). Returns the rank.
    fn hermite(&mut self) -> usize {
        let m = self.a.len();
        let mut r = 0;
        for c in 0..self.cols {
            if r == m {
                break;
            }
            // Start from the smallest entry of the column.
            let best = (r..m)
                .filter(|&i| !self.a[i][c].is_zero())
                .min_by_key(|&i| self.a[i][c].magnitude().clone());
            let Some(best) = best else { continue };
            self.swap(r, best);
            for i in r + 1..m {
                if self.a[i][c].is_zero() {
                    continue;
                }
                let (p, b) = (self.a[r][c].clone(), self.a[i][c].clone());
                if (&b % &p).is_zero() {
                    self.add(i, r, &-(b / p));
                    continue;
                }
                let e = p.extended_gcd(&b);
                let (x, y) = (-(&b / &e.gcd), &p / &e.gcd);
                self.combine(r, i, [&e.x, &e.y, &x, &y]);
            }
            if self.a[r][c].is_negative() {
                self.negate(r);
            }
            for k in 0..r {
                let q = self.a[k][c].div_floor(&self.a[r][c]);
                if !q.is_zero() {
                    self.add(k, r, &-q);
                }
            }
            r += 1;
        }
        r
    }
}

/// Returns (D, U, V) with U·A·V = D; the transforms are empty unless
/// `track` is set.
fn smith(a: Vec<Vec<BigInt>>, m: usize, n: usize, track: bool) -> (Vec<Vec<BigInt>>, Vec<Vec<BigInt>>, Vec<Vec<BigInt>>) {
    let mut left = RowOps {
        a,
        u: track.then(|| identity(m)),
        cols: n,
    };
    // Vᵀ, so that column operations are row operations on the transpose.
    let mut right_t = track.then(|| identity(n));
    // Alternate row and column Hermite reductions until diagonal.
    loop {
        left.hermite();
        if is_diagonal(&left.a) {
            break;
        }
        let mut cols = RowOps {
            a: transpose(std::mem::take(&mut left.a), n),
            u: right_t.take(),
            cols: m,
        };
        cols.hermite();
        right_t = cols.u;
        left.a = transpose(cols.a, m);
        if is_diagonal(&left.a) {
            break;
        }
    }
    // Replace diagonal pairs by (gcd, lcm) until each entry divides the next.
    let rank = (0..m.min(n)).take_while(|&i| !left.a[i][i].is_zero()).count();
    for i in 0..rank {
        for j in i + 1..rank {
            let (p, q) = (left.a[i][i].clone(), left.a[j][j].clone());
            if (&q % &p).is_zero() {
                continue;
            }
            let e = p.extended_gcd(&q);
            let (pg, qg) = (&p / &e.gcd, &q / &e.gcd);
            left.combine(i, j, [&e.x, &e.y, &-&qg, &pg]);
            // Columns (i, j) ← (col_i + col_j, −t(q/g)·col_i + s(p/g)·col_j).
            let mut cols = RowOps {
                a: transpose(std::mem::take(&mut left.a), n),
                u: right_t.take(),
                cols: m,
            };
            cols.combine(i, j, [&BigInt::one(), &BigInt::one(), &-(&e.y * &qg), &(&e.x * &pg)]);
            right_t = cols.u;
            left.a = transpose(cols.a, m);
        }
    }
    for i in 0..rank {
        if left.a[i][i].is_negative() {
            left.negate(i);
        }
    }
    let v = right_t.map(|vt| transpose(vt, n)).unwrap_or_default();
    (left.a, left.u.unwrap_or_default(), v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(rows: &[Vec<i64>]) -> ExactMatrix {
        ExactMatrix::from_rows_i64(CoefficientRing::Integers, rows)
    }

    #[test]
    fn diag_2_3() {
        let s = smith_normal_form(&z(&[vec![2, 0], vec![0, 3]])).unwrap();
        assert_eq!(s.d.to_exact().unwrap(), z(&[vec![1, 0], vec![0, 6]]));
    }

    #[test]
    fn zero_and_rank_one() {
        let s = smith_normal_form(&z(&[vec![0, 0], vec![0, 0]])).unwrap();
        assert!(s.d.to_exact().unwrap().is_zero());
        let s = smith_normal_form(&z(&[vec![1, 1], vec![1, 1]])).unwrap();
        assert_eq!(s.d.to_exact().unwrap(), z(&[vec![1, 0], vec![0, 0]]));
    }

    #[test]
    fn transforms_reproduce_d() {
        let a = z(&[vec![4, 6, 2], vec![6, 9, 3], vec![2, -1, 7]]);
        let s = smith_normal_form(&a).unwrap();
        let (u, d, v) = (s.u.to_exact().unwrap(), s.d.to_exact().unwrap(), s.v.to_exact().unwrap());
        assert_eq!(u.mul(&a).unwrap().mul(&v).unwrap(), d);
        assert_eq!(s.invariant_factors(), vec![BigInt::from(1), BigInt::from(2)]);
    }

    #[test]
    fn rejects_fields() {
        let a = ExactMatrix::identity(CoefficientRing::Rationals, 2);
        assert!(matches!(smith_normal_form(&a), Err(OpkError::NotIntegers(_))));
    }
}
