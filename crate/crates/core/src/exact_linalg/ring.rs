use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{OpkError, Result};

/// A ring element, stored as a reduced fraction with positive denominator.
///
/// Over ℤ and F_p the denominator is always 1, and over F_p the numerator
/// lies in `0..p`. Arithmetic goes through [`CoefficientRing`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Scalar {
    num: i64,
    den: i64,
}

impl Scalar {
    pub const ZERO: Scalar = Scalar { num: 0, den: 1 };
    pub const ONE: Scalar = Scalar { num: 1, den: 1 };

    /// An integer value. Not reduced modulo any prime.
    pub const fn int(n: i64) -> Scalar {
        Scalar { num: n, den: 1 }
    }

    pub fn numer(self) -> i64 {
        self.num
    }

    pub fn denom(self) -> i64 {
        self.den
    }

    pub fn is_zero(self) -> bool {
        self.num == 0
    }

    pub fn is_integer(self) -> bool {
        self.den == 1
    }

    fn frac(num: i128, den: i128) -> Scalar {
        debug_assert!(den != 0);
        let g = gcd_i128(num, den);
        let (mut n, mut d) = (num / g, den / g);
        if d < 0 {
            n = -n;
            d = -d;
        }
        Scalar {
            num: narrow(n),
            den: narrow(d),
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

fn narrow(v: i128) -> i64 {
    i64::try_from(v).unwrap_or_else(|_| panic!("coefficient overflow: {v} does not fit in 64 bits"))
}

fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    if a == 0 {
        1
    } else {
        a
    }
}

pub(crate) fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a as i64
}

/// Extended gcd: returns (g, x, y) with g = x·a + y·b and g ≥ 0.
pub(crate) fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut r0, mut r1) = (a as i128, b as i128);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (r0, s0, t0) = (-r0, -s0, -t0);
    }
    (narrow(r0), narrow(s0), narrow(t0))
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// The coefficient ring 𝕂: ℤ, ℚ or a prime field.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum CoefficientRing {
    Integers,
    Rationals,
    PrimeField(u64),
}

impl CoefficientRing {
    /// The prime field F_p. Fails unless `p` is prime and fits the
    /// arithmetic (products of residues must fit in 64 bits).
    pub fn prime_field(p: u64) -> Result<Self> {
        if !is_prime(p) || p >= (1 << 31) {
            return Err(OpkError::InvalidRing(format!("{p} is not a supported prime")));
        }
        Ok(CoefficientRing::PrimeField(p))
    }

    pub fn is_field(self) -> bool {
        !matches!(self, CoefficientRing::Integers)
    }

    pub fn prime(self) -> Option<u64> {
        match self {
            CoefficientRing::PrimeField(p) => Some(p),
            _ => None,
        }
    }

    pub fn characteristic(self) -> u64 {
        self.prime().unwrap_or(0)
    }

    pub fn name(self) -> String {
        match self {
            CoefficientRing::Integers => "Z".into(),
            CoefficientRing::Rationals => "Q".into(),
            CoefficientRing::PrimeField(p) => format!("F{p}"),
        }
    }

    pub fn zero(self) -> Scalar {
        Scalar::ZERO
    }

    pub fn one(self) -> Scalar {
        Scalar::ONE
    }

    pub fn from_int(self, n: i64) -> Scalar {
        match self {
            CoefficientRing::PrimeField(p) => Scalar::int(n.rem_euclid(p as i64)),
            _ => Scalar::int(n),
        }
    }

    /// Maps a rational literal into the ring. Fails over ℤ for proper
    /// fractions and over F_p when the denominator vanishes.
    pub fn from_fraction(self, num: i64, den: i64) -> Result<Scalar> {
        if den == 0 {
            return Err(OpkError::InvalidRing("zero denominator".into()));
        }
        let q = Scalar::frac(num as i128, den as i128);
        match self {
            CoefficientRing::Rationals => Ok(q),
            CoefficientRing::Integers => {
                if q.den == 1 {
                    Ok(q)
                } else {
                    Err(OpkError::InvalidRing(format!("{q} is not an integer")))
                }
            }
            CoefficientRing::PrimeField(_) => {
                let d = self.from_int(q.den);
                let inv = self
                    .inv(d)
                    .ok_or_else(|| OpkError::InvalidRing(format!("{q} has no image in {}", self.name())))?;
                Ok(self.mul(self.from_int(q.num), inv))
            }
        }
    }

    /// True when `a` is a valid normalized element of this ring.
    pub fn contains(self, a: Scalar) -> bool {
        match self {
            CoefficientRing::Integers => a.den == 1,
            CoefficientRing::Rationals => true,
            CoefficientRing::PrimeField(p) => a.den == 1 && a.num >= 0 && (a.num as u64) < p,
        }
    }

    pub fn add(self, a: Scalar, b: Scalar) -> Scalar {
        match self {
            CoefficientRing::Integers => Scalar::int(
                a.num
                    .checked_add(b.num)
                    .unwrap_or_else(|| panic!("coefficient overflow in {a} + {b}")),
            ),
            CoefficientRing::PrimeField(p) => Scalar::int(((a.num + b.num) as u64 % p) as i64),
            CoefficientRing::Rationals => {
                if a.den == 1 && b.den == 1 {
                    return Scalar::int(narrow(a.num as i128 + b.num as i128));
                }
                Scalar::frac(
                    a.num as i128 * b.den as i128 + b.num as i128 * a.den as i128,
                    a.den as i128 * b.den as i128,
                )
            }
        }
    }

    pub fn neg(self, a: Scalar) -> Scalar {
        match self {
            CoefficientRing::PrimeField(p) => {
                if a.num == 0 {
                    a
                } else {
                    Scalar::int(p as i64 - a.num)
                }
            }
            _ => Scalar {
                num: a.num.checked_neg().expect("coefficient overflow in negation"),
                den: a.den,
            },
        }
    }

    pub fn sub(self, a: Scalar, b: Scalar) -> Scalar {
        self.add(a, self.neg(b))
    }

    pub fn mul(self, a: Scalar, b: Scalar) -> Scalar {
        match self {
            CoefficientRing::Integers => Scalar::int(narrow(a.num as i128 * b.num as i128)),
            CoefficientRing::PrimeField(p) => Scalar::int(((a.num as u64 * b.num as u64) % p) as i64),
            CoefficientRing::Rationals => {
                if a.den == 1 && b.den == 1 {
                    return Scalar::int(narrow(a.num as i128 * b.num as i128));
                }
                Scalar::frac(a.num as i128 * b.num as i128, a.den as i128 * b.den as i128)
            }
        }
    }

    /// Multiplicative inverse, if `a` is a unit.
    pub fn inv(self, a: Scalar) -> Option<Scalar> {
        if a.is_zero() {
            return None;
        }
        match self {
            CoefficientRing::Integers => (a.num.abs() == 1).then_some(a),
            CoefficientRing::Rationals => Some(Scalar::frac(a.den as i128, a.num as i128)),
            CoefficientRing::PrimeField(p) => {
                let (_, x, _) = ext_gcd(a.num, p as i64);
                Some(self.from_int(x))
            }
        }
    }

    /// Exact quotient a / b, if it exists in the ring.
    pub fn div(self, a: Scalar, b: Scalar) -> Option<Scalar> {
        match self {
            CoefficientRing::Integers => {
                if b.num == 0 || a.num % b.num != 0 {
                    None
                } else {
                    Some(Scalar::int(a.num / b.num))
                }
            }
            _ => self.inv(b).map(|bi| self.mul(a, bi)),
        }
    }

    pub fn is_unit(self, a: Scalar) -> bool {
        match self {
            CoefficientRing::Integers => a.num.abs() == 1,
            _ => !a.is_zero(),
        }
    }

    /// `(-1)^k` as a ring element.
    pub fn sign(self, negative: bool) -> Scalar {
        if negative {
            self.neg(Scalar::ONE)
        } else {
            Scalar::ONE
        }
    }
}

impl fmt::Display for CoefficientRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_arithmetic() {
        let f = CoefficientRing::prime_field(7).unwrap();
        let a = f.from_int(-3);
        assert_eq!(a, Scalar::int(4));
        assert_eq!(f.mul(a, f.inv(a).unwrap()), Scalar::ONE);
        assert_eq!(f.add(a, Scalar::int(3)), Scalar::ZERO);
        assert!(CoefficientRing::prime_field(9).is_err());
    }

    #[test]
    fn rational_arithmetic() {
        let q = CoefficientRing::Rationals;
        let half = q.from_fraction(1, 2).unwrap();
        let third = q.from_fraction(-2, -6).unwrap();
        assert_eq!(q.add(half, third), q.from_fraction(5, 6).unwrap());
        assert_eq!(q.div(half, third), Some(q.from_fraction(3, 2).unwrap()));
        assert_eq!(q.mul(q.from_fraction(2, 3).unwrap(), Scalar::int(3)), Scalar::int(2));
    }

    #[test]
    fn integer_division_is_exact() {
        let z = CoefficientRing::Integers;
        assert_eq!(z.div(Scalar::int(6), Scalar::int(-3)), Some(Scalar::int(-2)));
        assert_eq!(z.div(Scalar::int(5), Scalar::int(2)), None);
        assert!(z.from_fraction(1, 2).is_err());
        assert_eq!(z.inv(Scalar::int(-1)), Some(Scalar::int(-1)));
    }

    #[test]
    fn extended_gcd() {
        for (a, b) in [(12, 18), (-4, 6), (7, 0), (0, -5), (35, 64)] {
            let (g, x, y) = ext_gcd(a, b);
            assert_eq!(g, gcd(a, b));
            assert_eq!(x * a + y * b, g);
        }
    }
}
