//! Arithmetic in the binary fields `F_{2^p}` for `1 <= p <= 16`.
//!
//! Elements are stored in the polynomial basis `{1, X, ..., X^{p-1}}` as a
//! bitmask, bit `k` holding the coefficient of `X^k`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported extension degree.
pub const MAX_DEGREE: u32 = 16;

/// An element of some `F_{2^p}`, as polynomial-basis coordinates.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Elem(pub u16);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn bits(self) -> u16 {
        self.0
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::ops::Add for Elem {
    type Output = Elem;

    #[inline]
    fn add(self, rhs: Elem) -> Elem {
        Elem(self.0 ^ rhs.0)
    }
}

impl std::ops::AddAssign for Elem {
    #[inline]
    fn add_assign(&mut self, rhs: Elem) {
        self.0 ^= rhs.0;
    }
}

/// Binary field operation selector, mirroring the command-line surface.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Mul,
    Inv,
    Pow(u64),
}

/// Descriptor of `F_{2^p}`: extension degree and defining modulus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "FieldSpec")]
pub struct Field {
    p: u32,
    modulus: u32,
}

/// Unvalidated wire form of a [`Field`]: `{"p": 2, "modulus": 7}`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u32,
    #[serde(default)]
    pub modulus: Option<u32>,
}

impl TryFrom<FieldSpec> for Field {
    type Error = Error;

    fn try_from(spec: FieldSpec) -> Result<Field> {
        Field::new(spec.p, spec.modulus)
    }
}

/// Degree of a nonzero polynomial encoded as a bitmask.
#[inline]
fn bit_degree(x: u32) -> i32 {
    31 - x.leading_zeros() as i32
}

/// Carry-less remainder of `a` modulo `m` (both small bitmask polynomials).
fn small_rem(mut a: u32, m: u32) -> u32 {
    let dm = bit_degree(m);
    while a != 0 && bit_degree(a) >= dm {
        a ^= m << (bit_degree(a) - dm);
    }
    a
}

/// Trial-division irreducibility test for polynomials of degree <= 16.
pub(crate) fn is_irreducible_small(m: u32) -> bool {
    let d = bit_degree(m);
    if d < 1 {
        return false;
    }
    if d == 1 {
        return true;
    }
    // Any factorization has a factor of degree <= d/2.
    let max = 1u32 << (d / 2 + 1);
    (2u32..max).all(|f| small_rem(m, f) != 0)
}

impl Field {
    /// The prime field `F_2` with modulus `X`.
    pub const F2: Field = Field { p: 1, modulus: 0b10 };

    /// Builds `F_{2^p}`. When `modulus` is omitted the smallest irreducible
    /// bitmask of degree `p` is used.
    pub fn new(p: u32, modulus: Option<u32>) -> Result<Field> {
        if p == 0 || p > MAX_DEGREE {
            return Err(Error::UnsupportedDegree(p));
        }
        let modulus = match modulus {
            Some(m) => {
                if m == 0 || bit_degree(m) != p as i32 {
                    return Err(Error::RejectedModulus {
                        degree: p,
                        modulus: m,
                        reason: "wrong degree",
                    });
                }
                if !is_irreducible_small(m) {
                    return Err(Error::RejectedModulus {
                        degree: p,
                        modulus: m,
                        reason: "reducible over F2",
                    });
                }
                m
            }
            None => ((1u32 << p)..(1u32 << (p + 1)))
                .find(|&m| is_irreducible_small(m))
                .expect("irreducible polynomials exist in every degree"),
        };
        Ok(Field { p, modulus })
    }

    /// Extension degree over `F_2`.
    #[inline]
    pub fn degree(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    /// Number of elements, `2^p`.
    #[inline]
    pub fn order(&self) -> u32 {
        1 << self.p
    }

    #[inline]
    pub fn is_prime(&self) -> bool {
        self.p == 1
    }

    #[inline]
    pub fn contains(&self, a: Elem) -> bool {
        (a.0 as u32) < self.order()
    }

    /// All field elements in bitmask order.
    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.order()).map(|b| Elem(b as u16))
    }

    /// The `F_2`-basis `{1, X, ..., X^{p-1}}` used for restriction of scalars.
    pub fn basis(&self) -> impl Iterator<Item = Elem> {
        (0..self.p).map(|k| Elem(1 << k))
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        a + b
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        let (mut a, mut b) = (a.0 as u32, b.0 as u32);
        let mut acc = 0u32;
        let top = 1u32 << self.p;
        while b != 0 {
            if b & 1 == 1 {
                acc ^= a;
            }
            b >>= 1;
            a <<= 1;
            if a & top != 0 {
                a ^= self.modulus;
            }
        }
        Elem(acc as u16)
    }

    #[inline]
    pub fn square(&self, a: Elem) -> Elem {
        self.mul(a, a)
    }

    pub fn pow(&self, a: Elem, mut e: u64) -> Elem {
        let mut base = a;
        let mut acc = Elem::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.square(base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse, via `a^{2^p - 2}`.
    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(a, (self.order() - 2) as u64))
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Dispatches one of the four basic operations.
    pub fn arith(&self, a: Elem, b: Elem, op: FieldOp) -> Result<Elem> {
        match op {
            FieldOp::Add => Ok(self.add(a, b)),
            FieldOp::Mul => Ok(self.mul(a, b)),
            FieldOp::Inv => self.inv(a),
            FieldOp::Pow(e) => Ok(self.pow(a, e)),
        }
    }

    /// `a^{2^k}`.
    pub fn frobenius(&self, a: Elem, k: u64) -> Elem {
        let k = k % self.p as u64;
        (0..k).fold(a, |x, _| self.square(x))
    }

    /// Inverse of [`Field::frobenius`]: the unique `b` with `b^{2^k} = a`.
    pub fn frobenius_inverse(&self, a: Elem, k: u64) -> Elem {
        let p = self.p as u64;
        let k = k % p;
        self.frobenius(a, (p - k) % p)
    }

    /// Whether `a` lies in the subfield `F_{2^m}`, i.e. `a^{2^m} = a`.
    pub fn in_subfield(&self, a: Elem, m: u32) -> bool {
        self.frobenius(a, m as u64) == a
    }

    /// `F_2`-coordinates of multiplication by `a`: column `j` is `a * X^j`.
    pub fn mul_matrix_columns(&self, a: Elem) -> Vec<Elem> {
        self.basis().map(|b| self.mul(a, b)).collect()
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", 1u32 << self.p)
    }
}

/// `F_{2^p}` is a subfield of `F_{2^m}` iff `p | m`.
pub fn is_subfield(p: u32, m: u32) -> bool {
    p >= 1 && m >= 1 && m % p == 0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f4() -> Field {
        Field::new(2, Some(0b111)).unwrap()
    }

    #[test]
    fn construction() {
        assert_eq!(f4().modulus(), 7);
        assert!(matches!(
            Field::new(2, Some(0b101)),
            Err(Error::RejectedModulus { .. })
        ));
        assert!(matches!(
            Field::new(3, Some(0b111)),
            Err(Error::RejectedModulus { .. })
        ));
        let f2 = Field::new(1, None).unwrap();
        assert_eq!(f2, Field::F2);
        assert_eq!(Field::new(3, None).unwrap().modulus(), 0b1011);
        assert_eq!(Field::new(4, None).unwrap().modulus(), 0b10011);
        assert!(Field::new(0, None).is_err());
        assert!(Field::new(17, None).is_err());
    }

    #[test]
    fn default_modulus_is_smallest_irreducible() {
        for p in 1..=MAX_DEGREE {
            let f = Field::new(p, None).unwrap();
            for m in (1u32 << p)..f.modulus() {
                assert!(!is_irreducible_small(m), "p={p} m={m:#b}");
            }
        }
    }

    #[test]
    fn f4_arithmetic() {
        let f = f4();
        let a = Elem(2);
        assert_eq!(f.mul(a, a), Elem(3));
        assert_eq!(f.inv(a).unwrap(), Elem(3));
        assert_eq!(f.frobenius(a, 1), Elem(3));
        assert_eq!(f.frobenius(a, 2), a);
        assert_eq!(f.add(a, a), Elem::ZERO);
        assert_eq!(f.inv(Elem::ZERO), Err(Error::DivisionByZero));
        assert_eq!(f.arith(a, a, FieldOp::Pow(3)).unwrap(), Elem::ONE);
    }

    #[test]
    fn prime_field_frobenius_is_identity() {
        let f = Field::F2;
        for x in f.elements() {
            for k in 0..5 {
                assert_eq!(f.frobenius(x, k), x);
            }
        }
    }

    #[test]
    fn subfield_rule() {
        assert!(is_subfield(1, 5));
        assert!(is_subfield(2, 6));
        assert!(!is_subfield(2, 3));
    }

    #[test]
    fn exhaustive_laws_up_to_degree_8() {
        for p in 1..=8 {
            let f = Field::new(p, None).unwrap();
            let mut seen = vec![false; f.order() as usize];
            for a in f.elements() {
                assert_eq!(f.frobenius(a, p as u64), a);
                assert_eq!(f.pow(a, 1u64 << p), a);
                let sq = f.square(a);
                assert!(!seen[sq.0 as usize]);
                seen[sq.0 as usize] = true;
                assert_eq!(f.frobenius_inverse(f.frobenius(a, 1), 1), a);
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), Elem::ONE);
                }
            }
        }
    }

    #[test]
    fn frobenius_is_additive() {
        let f = Field::new(5, None).unwrap();
        for a in f.elements() {
            for b in f.elements() {
                assert_eq!(f.frobenius(a + b, 1), f.frobenius(a, 1) + f.frobenius(b, 1));
            }
        }
    }
}
