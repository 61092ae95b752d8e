//! Polynomials over `F_2`, packed as little-endian bit vectors.
//!
//! Besides ring arithmetic this module factors polynomials (square-free,
//! distinct-degree, then trace-based equal-degree splitting), computes the
//! multiplicative order of `X` modulo a polynomial, the striction of a
//! polynomial, and the compatible partitions/subdivisions of a train
//! polynomial's irreducible factors.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numtheory::{factor_u64, gcd_u64};

/// Degree cap accepted from external input.
pub const MAX_DEGREE: usize = 1 << 16;

/// A polynomial over `F_2`; bit `k` is the coefficient of `X^k`.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Poly2 {
    words: Vec<u64>,
}

impl Poly2 {
    pub fn zero() -> Self {
        Poly2 { words: Vec::new() }
    }

    pub fn one() -> Self {
        Poly2 { words: vec![1] }
    }

    pub fn x() -> Self {
        Poly2 { words: vec![2] }
    }

    pub fn monomial(k: usize) -> Self {
        let mut p = Poly2::zero();
        p.set_coeff(k, true);
        p
    }

    /// `X^k + 1`.
    pub fn x_pow_plus_one(k: usize) -> Self {
        let mut p = Poly2::monomial(k);
        p.flip_coeff(0);
        p
    }

    pub fn from_u64(bits: u64) -> Self {
        let mut p = Poly2 { words: vec![bits] };
        p.normalize();
        p
    }

    pub fn from_u128(bits: u128) -> Self {
        let mut p = Poly2 {
            words: vec![bits as u64, (bits >> 64) as u64],
        };
        p.normalize();
        p
    }

    pub fn from_exponents(exps: &[usize]) -> Self {
        let mut p = Poly2::zero();
        for &e in exps {
            p.flip_coeff(e);
        }
        p
    }

    /// Bitmask value when the degree is below 64.
    pub fn to_u64(&self) -> Option<u64> {
        match self.words.len() {
            0 => Some(0),
            1 => Some(self.words[0]),
            _ => None,
        }
    }

    fn normalize(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.words.is_empty()
    }

    #[inline]
    pub fn is_one(&self) -> bool {
        self.words.len() == 1 && self.words[0] == 1
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        let last = *self.words.last()?;
        Some((self.words.len() - 1) * 64 + 63 - last.leading_zeros() as usize)
    }

    /// Degree with the convention `deg 0 = 0`, for callers that have
    /// already excluded zero.
    fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    /// Smallest exponent carrying a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(k, w)| k * 64 + w.trailing_zeros() as usize)
    }

    pub fn coeff(&self, k: usize) -> bool {
        self.words
            .get(k / 64)
            .is_some_and(|w| (w >> (k % 64)) & 1 == 1)
    }

    pub fn set_coeff(&mut self, k: usize, value: bool) {
        if self.words.len() <= k / 64 {
            if !value {
                return;
            }
            self.words.resize(k / 64 + 1, 0);
        }
        let mask = 1u64 << (k % 64);
        if value {
            self.words[k / 64] |= mask;
        } else {
            self.words[k / 64] &= !mask;
            self.normalize();
        }
    }

    pub fn flip_coeff(&mut self, k: usize) {
        if self.words.len() <= k / 64 {
            self.words.resize(k / 64 + 1, 0);
        }
        self.words[k / 64] ^= 1u64 << (k % 64);
        self.normalize();
    }

    /// Exponents with nonzero coefficient, ascending.
    pub fn exponents(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (k, &w) in self.words.iter().enumerate() {
            let mut w = w;
            while w != 0 {
                out.push(k * 64 + w.trailing_zeros() as usize);
                w &= w - 1;
            }
        }
        out
    }

    pub fn term_count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Value at `X = 0`.
    pub fn constant_term(&self) -> bool {
        self.coeff(0)
    }

    fn xor_shifted(&mut self, other: &Poly2, shift: usize) {
        if other.is_zero() {
            return;
        }
        let ws = shift / 64;
        let bs = shift % 64;
        let need = other.words.len() + ws + 1;
        if self.words.len() < need {
            self.words.resize(need, 0);
        }
        for (i, &w) in other.words.iter().enumerate() {
            self.words[i + ws] ^= w << bs;
            if bs != 0 {
                self.words[i + ws + 1] ^= w >> (64 - bs);
            }
        }
        self.normalize();
    }

    pub fn shl(&self, k: usize) -> Poly2 {
        let mut out = Poly2::zero();
        out.xor_shifted(self, k);
        out
    }

    pub fn mul(&self, other: &Poly2) -> Poly2 {
        let (a, b) = if self.term_count() <= other.term_count() {
            (self, other)
        } else {
            (other, self)
        };
        let mut out = Poly2::zero();
        for e in a.exponents() {
            out.xor_shifted(b, e);
        }
        out
    }

    pub fn square(&self) -> Poly2 {
        Poly2::from_exponents(&self.exponents().iter().map(|e| 2 * e).collect::<Vec<_>>())
    }

    pub fn pow(&self, mut e: u64) -> Poly2 {
        let mut acc = Poly2::one();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.square();
            }
        }
        acc
    }

    /// Euclidean division; errors on a zero divisor.
    pub fn divmod(&self, d: &Poly2) -> Result<(Poly2, Poly2)> {
        let dd = d.degree().ok_or(Error::DivisionByZero)?;
        let mut r = self.clone();
        let mut q = Poly2::zero();
        while let Some(dr) = r.degree() {
            if dr < dd {
                break;
            }
            q.set_coeff(dr - dd, true);
            r.xor_shifted(d, dr - dd);
        }
        Ok((q, r))
    }

    pub fn rem(&self, d: &Poly2) -> Result<Poly2> {
        let dd = d.degree().ok_or(Error::DivisionByZero)?;
        let mut r = self.clone();
        while let Some(dr) = r.degree() {
            if dr < dd {
                break;
            }
            r.xor_shifted(d, dr - dd);
        }
        Ok(r)
    }

    /// Exact quotient; panics if `d` does not divide `self`.
    pub fn exact_div(&self, d: &Poly2) -> Poly2 {
        let (q, r) = self.divmod(d).expect("nonzero divisor");
        assert!(r.is_zero(), "inexact division");
        q
    }

    pub fn divides(&self, other: &Poly2) -> bool {
        !self.is_zero() && other.rem(self).map(|r| r.is_zero()).unwrap_or(false)
    }

    pub fn gcd(&self, other: &Poly2) -> Poly2 {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero");
            a = b;
            b = r;
        }
        a
    }

    pub fn lcm(&self, other: &Poly2) -> Poly2 {
        if self.is_zero() || other.is_zero() {
            return Poly2::zero();
        }
        self.exact_div(&self.gcd(other)).mul(other)
    }

    /// Formal derivative; in characteristic 2 only odd exponents survive.
    pub fn derivative(&self) -> Poly2 {
        let exps: Vec<usize> = self
            .exponents()
            .into_iter()
            .filter(|e| e % 2 == 1)
            .map(|e| e - 1)
            .collect();
        Poly2::from_exponents(&exps)
    }

    /// Square root of a polynomial with only even exponents.
    pub fn sqrt(&self) -> Option<Poly2> {
        let exps = self.exponents();
        if exps.iter().any(|e| e % 2 == 1) {
            return None;
        }
        Some(Poly2::from_exponents(
            &exps.iter().map(|e| e / 2).collect::<Vec<_>>(),
        ))
    }

    pub fn mulmod(&self, other: &Poly2, m: &Poly2) -> Poly2 {
        self.mul(other).rem(m).expect("nonzero modulus")
    }

    /// `self^e mod m`.
    pub fn powmod(&self, mut e: u128, m: &Poly2) -> Poly2 {
        let mut acc = Poly2::one().rem(m).expect("nonzero modulus");
        let mut base = self.rem(m).expect("nonzero modulus");
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mulmod(&base, m);
            }
            e >>= 1;
            if e > 0 {
                base = base.mulmod(&base, m);
            }
        }
        acc
    }

    /// Evaluates the polynomial at a point of a commutative ring given by
    /// its `zero`, `one`, addition and multiplication (Horner scheme).
    pub fn eval_with<T: Clone>(&self, at: &T, zero: T, one: T, add: impl Fn(&T, &T) -> T, mul: impl Fn(&T, &T) -> T) -> T {
        let Some(n) = self.degree() else {
            return zero;
        };
        let mut acc = zero.clone();
        for k in (0..=n).rev() {
            acc = mul(&acc, at);
            if self.coeff(k) {
                acc = add(&acc, &one);
            }
        }
        acc
    }

    /// Parses a bitmask: decimal, `0b` binary or `0x` hexadecimal.
    pub fn parse_bits(s: &str) -> Result<Poly2> {
        let s = s.trim().replace('_', "");
        let bad = || Error::InvalidInput(format!("not a polynomial bitmask: {s:?}"));
        let p = if let Some(bin) = s.strip_prefix("0b") {
            if bin.is_empty() || !bin.bytes().all(|b| b == b'0' || b == b'1') {
                return Err(bad());
            }
            let exps: Vec<usize> = bin
                .bytes()
                .rev()
                .enumerate()
                .filter(|(_, b)| *b == b'1')
                .map(|(i, _)| i)
                .collect();
            Poly2::from_exponents(&exps)
        } else if let Some(hex) = s.strip_prefix("0x") {
            let mut exps = Vec::new();
            for (i, c) in hex.chars().rev().enumerate() {
                let v = c.to_digit(16).ok_or_else(bad)? as usize;
                for b in 0..4 {
                    if (v >> b) & 1 == 1 {
                        exps.push(4 * i + b);
                    }
                }
            }
            Poly2::from_exponents(&exps)
        } else {
            Poly2::from_u128(s.parse::<u128>().map_err(|_| bad())?)
        };
        if p.degree().unwrap_or(0) > MAX_DEGREE {
            return Err(Error::InvalidInput(format!(
                "degree exceeds the cap of {MAX_DEGREE}"
            )));
        }
        Ok(p)
    }

    /// Decimal bitmask when it fits in 128 bits, `0x` hex otherwise.
    pub fn to_bits_string(&self) -> String {
        if self.words.len() <= 2 {
            let lo = self.words.first().copied().unwrap_or(0) as u128;
            let hi = self.words.get(1).copied().unwrap_or(0) as u128;
            return (lo | hi << 64).to_string();
        }
        let mut s = String::from("0x");
        for (i, w) in self.words.iter().rev().enumerate() {
            if i == 0 {
                s.push_str(&format!("{w:x}"));
            } else {
                s.push_str(&format!("{w:016x}"));
            }
        }
        s
    }

    pub fn is_irreducible(&self) -> bool {
        match self.degree() {
            None | Some(0) => false,
            Some(_) => {
                let f = self.factor().expect("degree >= 1");
                f.len() == 1 && f[0].1 == 1
            }
        }
    }

    /// Full factorization into irreducibles with multiplicities, sorted by
    /// degree and then bitmask.
    pub fn factor(&self) -> Result<Vec<(Poly2, u32)>> {
        if self.degree().unwrap_or(0) == 0 {
            return Err(Error::InvalidInput(
                "cannot factor a constant polynomial".into(),
            ));
        }
        let mut out: Vec<(Poly2, u32)> = Vec::new();
        for (sqfree, mult) in self.square_free_decomposition() {
            for (block, d) in sqfree.distinct_degree() {
                for g in block.equal_degree(d) {
                    match out.iter_mut().find(|(h, _)| *h == g) {
                        Some(entry) => entry.1 += mult,
                        None => out.push((g, mult)),
                    }
                }
            }
        }
        out.sort_by(|a, b| a.0.cmp(&b.0));
        Ok(out)
    }

    /// Pairs `(g, m)` with each `g` square-free and `self = prod g^m`.
    pub fn square_free_decomposition(&self) -> Vec<(Poly2, u32)> {
        fn go(f: &Poly2, scale: u32, out: &mut Vec<(Poly2, u32)>) {
            if f.deg() == 0 {
                return;
            }
            let d = f.derivative();
            if d.is_zero() {
                // Only even exponents: f is a perfect square.
                go(&f.sqrt().expect("even exponents"), scale * 2, out);
                return;
            }
            let mut c = f.gcd(&d);
            let mut w = f.exact_div(&c);
            let mut i = 1;
            while w.deg() > 0 {
                let y = w.gcd(&c);
                let z = w.exact_div(&y);
                if z.deg() > 0 {
                    out.push((z, i * scale));
                }
                i += 1;
                c = c.exact_div(&y);
                w = y;
            }
            if c.deg() > 0 {
                go(&c.sqrt().expect("remaining cofactor is a square"), scale * 2, out);
            }
        }
        let mut out = Vec::new();
        go(self, 1, &mut out);
        out
    }

    /// Splits a square-free polynomial into products of irreducibles of
    /// equal degree, returned with that degree.
    pub fn distinct_degree(&self) -> Vec<(Poly2, usize)> {
        let mut out = Vec::new();
        let mut f = self.clone();
        let mut h = Poly2::x().rem(&f).expect("nonzero");
        let mut d = 0;
        while f.deg() > 0 {
            d += 1;
            if f.deg() < 2 * d {
                out.push((f.clone(), f.deg()));
                break;
            }
            h = h.mulmod(&h, &f);
            let g = f.gcd(&h.add(&Poly2::x()));
            if g.deg() > 0 {
                f = f.exact_div(&g);
                h = h.rem(&f).expect("nonzero");
                out.push((g, d));
            }
        }
        out
    }

    /// Splits a square-free product of irreducibles of degree `d`.
    ///
    /// Uses the absolute trace `a + a^2 + ... + a^{2^{d-1}}` for the
    /// deterministic sequence `a = X^j`; the trace map separates any two
    /// distinct factors on some element of the monomial basis, so the
    /// sequence always completes the split.
    pub fn equal_degree(&self, d: usize) -> Vec<Poly2> {
        let n = self.deg();
        if n == d {
            return vec![self.clone()];
        }
        for j in 1..n {
            let a = Poly2::monomial(j).rem(self).expect("nonzero");
            let mut t = a.clone();
            let mut acc = a;
            for _ in 1..d {
                t = t.mulmod(&t, self);
                acc = acc.add(&t);
            }
            let g = self.gcd(&acc);
            let dg = g.deg();
            if dg > 0 && dg < n {
                let mut left = g.equal_degree(d);
                left.extend(self.exact_div(&g).equal_degree(d));
                return left;
            }
        }
        unreachable!("trace splitting over the monomial basis always succeeds")
    }

    /// Striction data: exponent set, gcd of exponent gaps, valuation, degree.
    pub fn striction(&self) -> Result<StrictionReport> {
        StrictionReport::from_exponents(self.exponents())
    }

    /// Least `p >= 1` with `self | X^p + 1`.
    ///
    /// Requires a nonzero constant term. For each irreducible factor `f^e`
    /// the order of `X` modulo `f` is extracted from the prime factorization
    /// of `2^{deg f} - 1`, then multiplied by the least power of two `>= e`.
    pub fn order_mod(&self) -> Result<u64> {
        if self.deg() == 0 || !self.constant_term() {
            return Err(Error::InvalidInput(
                "order modulo g needs deg g >= 1 and g(0) = 1".into(),
            ));
        }
        let mut total: u128 = 1;
        for (f, e) in self.factor()? {
            let d = f.deg();
            if d > 64 {
                return Err(Error::Unsupported(format!(
                    "irreducible factor of degree {d} (> 64) in order computation"
                )));
            }
            let group = if d == 64 { u64::MAX } else { (1u64 << d) - 1 };
            let mut ord = group;
            for (q, _) in factor_u64(group) {
                while ord % q == 0 && Poly2::x().powmod((ord / q) as u128, &f).is_one() {
                    ord /= q;
                }
            }
            let mut two_power = 1u128;
            while two_power < e as u128 {
                two_power *= 2;
            }
            let local = ord as u128 * two_power;
            total = total / gcd_u128(total, local) * local;
            if total > u64::MAX as u128 {
                return Err(Error::Unsupported("period exceeds 64 bits".into()));
            }
        }
        Ok(total as u64)
    }
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl Ord for Poly2 {
    /// Numeric order of the bitmasks: by degree, then lexicographically.
    fn cmp(&self, other: &Self) -> Ordering {
        self.words
            .len()
            .cmp(&other.words.len())
            .then_with(|| self.words.iter().rev().cmp(other.words.iter().rev()))
    }
}

impl PartialOrd for Poly2 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &Poly2 {
    type Output = Poly2;

    fn add(self, rhs: &Poly2) -> Poly2 {
        let mut out = self.clone();
        if out.words.len() < rhs.words.len() {
            out.words.resize(rhs.words.len(), 0);
        }
        for (a, b) in out.words.iter_mut().zip(&rhs.words) {
            *a ^= b;
        }
        out.normalize();
        out
    }
}

impl Poly2 {
    pub fn add(&self, rhs: &Poly2) -> Poly2 {
        self + rhs
    }
}

impl Mul for &Poly2 {
    type Output = Poly2;

    fn mul(self, rhs: &Poly2) -> Poly2 {
        Poly2::mul(self, rhs)
    }
}

impl fmt::Display for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .exponents()
            .into_iter()
            .rev()
            .map(|e| match e {
                0 => "1".to_string(),
                1 => "X".to_string(),
                _ => format!("X^{e}"),
            })
            .collect();
        write!(f, "{}", terms.join("+"))
    }
}

impl fmt::Debug for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly2({self})")
    }
}

impl Serialize for Poly2 {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_bits_string())
    }
}

impl<'de> Deserialize<'de> for Poly2 {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Poly2::parse_bits(&s).map_err(serde::de::Error::custom)
    }
}

/// Exponent structure of a polynomial that is not a monomial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrictionReport {
    pub exponents: Vec<usize>,
    pub sigma: usize,
    pub valuation: usize,
    pub degree: usize,
}

impl StrictionReport {
    /// `exps` must be the ascending exponent set of a polynomial.
    pub fn from_exponents(exps: Vec<usize>) -> Result<Self> {
        if exps.len() < 2 {
            return Err(Error::MonomialInput);
        }
        let valuation = exps[0];
        let degree = *exps.last().unwrap();
        let sigma = exps[1..]
            .iter()
            .fold(0u64, |g, &k| gcd_u64(g, (k - valuation) as u64)) as usize;
        Ok(StrictionReport {
            exponents: exps,
            sigma,
            valuation,
            degree,
        })
    }
}

/// Odd `b`: the factors `Phi_d` (`d | b`) of `X^b + 1` over `F_2`.
pub fn cyclotomic_product(b: u64) -> Result<Vec<(u64, Poly2)>> {
    if b == 0 || b % 2 == 0 {
        return Err(Error::InvalidInput(format!(
            "cyclotomic decomposition needs an odd exponent, got {b}"
        )));
    }
    if b as usize > MAX_DEGREE {
        return Err(Error::InvalidInput(format!(
            "degree exceeds the cap of {MAX_DEGREE}"
        )));
    }
    let mut out: Vec<(u64, Poly2)> = Vec::new();
    for d in (1..=b).filter(|d| b % d == 0) {
        let mut phi = Poly2::x_pow_plus_one(d as usize);
        for (e, pe) in &out {
            if d % e == 0 {
                phi = phi.exact_div(pe);
            }
        }
        out.push((d, phi));
    }
    Ok(out)
}

/// Partition of a train polynomial's irreducible factors into blocks whose
/// products have striction divisible by `p`, with divisor chains per block.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompatibleStructure {
    /// Target field degree.
    pub p: u32,
    /// Valuation `v` of the train polynomial (the `X^v` part).
    pub valuation: usize,
    /// Irreducible factors with `f(0) = 1` and their multiplicities.
    pub factors: Vec<(Poly2, u32)>,
    /// Blocks of 0-based factor indices.
    pub partition: Vec<Vec<usize>>,
    /// For each block, every maximal divisibility chain (ascending) of
    /// qualifying divisors ending at the block product.
    pub subdivisions: Vec<Vec<Vec<Poly2>>>,
}

impl CompatibleStructure {
    /// Full-multiplicity product of a block.
    pub fn block_product(&self, block: usize) -> Poly2 {
        block_product(&self.factors, &self.partition[block])
    }
}

fn block_product(factors: &[(Poly2, u32)], block: &[usize]) -> Poly2 {
    block.iter().fold(Poly2::one(), |acc, &i| {
        acc.mul(&factors[i].0.pow(factors[i].1 as u64))
    })
}

fn striction_divisible(f: &Poly2, p: u32) -> bool {
    f.striction()
        .map(|r| r.sigma % p as usize == 0)
        .unwrap_or(false)
}

/// Largest number of irreducible factors handled by the exhaustive
/// partition search.
pub const MAX_PARTITION_FACTORS: usize = 10;

/// Largest divisor lattice enumerated per block.
pub const MAX_BLOCK_DIVISORS: usize = 1 << 14;

/// Compatible partition and maximal divisor chains of `t` for `F_{2^p}`.
///
/// The partition is the finest one (most blocks) in which every block
/// product has striction divisible by `p`; ties go to the partition whose
/// restricted-growth string is lexicographically least, which merges
/// low-index factors first.
pub fn compatible_structure(t: &Poly2, p: u32) -> Result<CompatibleStructure> {
    if p == 0 {
        return Err(Error::InvalidInput("field degree must be >= 1".into()));
    }
    let sigma = t.striction()?.sigma;
    if sigma % p as usize != 0 {
        return Err(Error::IncompatibleField {
            field_degree: p,
            detail: format!("{p} does not divide the striction {sigma} of {t}"),
        });
    }
    let valuation = t.valuation().expect("nonzero");
    let core = t.exact_div(&Poly2::monomial(valuation));
    let factors = core.factor()?;
    let m = factors.len();
    if m > MAX_PARTITION_FACTORS {
        return Err(Error::Unsupported(format!(
            "{m} distinct irreducible factors (limit {MAX_PARTITION_FACTORS})"
        )));
    }

    let mut best: Option<Vec<Vec<usize>>> = None;
    for_each_partition(m, &mut |rgs| {
        let blocks = blocks_of(rgs);
        if best.as_ref().is_some_and(|b| b.len() >= blocks.len()) {
            return;
        }
        if blocks
            .iter()
            .all(|b| striction_divisible(&block_product(&factors, b), p))
        {
            best = Some(blocks);
        }
    });
    let partition = best.expect("the one-block partition is always compatible");

    let mut subdivisions = Vec::with_capacity(partition.len());
    for block in &partition {
        subdivisions.push(maximal_chains(&factors, block, p)?);
    }
    Ok(CompatibleStructure {
        p,
        valuation,
        factors,
        partition,
        subdivisions,
    })
}

/// Visits restricted-growth strings of length `m` in lexicographic order.
fn for_each_partition(m: usize, visit: &mut impl FnMut(&[usize])) {
    fn rec(rgs: &mut Vec<usize>, m: usize, max: usize, visit: &mut impl FnMut(&[usize])) {
        if rgs.len() == m {
            visit(rgs);
            return;
        }
        let next_max = if rgs.is_empty() { 0 } else { max + 1 };
        for b in 0..=next_max {
            rgs.push(b);
            rec(rgs, m, max.max(b), visit);
            rgs.pop();
        }
    }
    if m == 0 {
        visit(&[]);
        return;
    }
    rec(&mut Vec::with_capacity(m), m, 0, visit);
}

fn blocks_of(rgs: &[usize]) -> Vec<Vec<usize>> {
    let nblocks = rgs.iter().copied().max().map_or(0, |b| b + 1);
    let mut blocks = vec![Vec::new(); nblocks];
    for (i, &b) in rgs.iter().enumerate() {
        blocks[b].push(i);
    }
    blocks
}

/// Every divisor of a block product, as exponent vectors over the block's
/// factors, keeping those of degree >= 1 whose striction `p` divides.
fn qualifying_divisors(factors: &[(Poly2, u32)], block: &[usize], p: u32) -> Result<Vec<(Vec<u32>, Poly2)>> {
    let count: usize = block
        .iter()
        .map(|&i| factors[i].1 as usize + 1)
        .product();
    if count > MAX_BLOCK_DIVISORS {
        return Err(Error::Unsupported(format!(
            "block has {count} divisors (limit {MAX_BLOCK_DIVISORS})"
        )));
    }
    let mut out = Vec::new();
    let mut exps = vec![0u32; block.len()];
    loop {
        let d = block
            .iter()
            .zip(&exps)
            .fold(Poly2::one(), |acc, (&i, &e)| acc.mul(&factors[i].0.pow(e as u64)));
        if d.deg() >= 1 && striction_divisible(&d, p) {
            out.push((exps.clone(), d));
        }
        // Odometer increment.
        let mut k = 0;
        loop {
            if k == block.len() {
                return Ok(out);
            }
            if exps[k] < factors[block[k]].1 {
                exps[k] += 1;
                break;
            }
            exps[k] = 0;
            k += 1;
        }
    }
}

fn maximal_chains(factors: &[(Poly2, u32)], block: &[usize], p: u32) -> Result<Vec<Vec<Poly2>>> {
    let mut divs = qualifying_divisors(factors, block, p)?;
    divs.sort_by(|a, b| a.1.cmp(&b.1));
    let divides = |a: &[u32], b: &[u32]| a.iter().zip(b).all(|(x, y)| x <= y);
    let strictly = |a: &[u32], b: &[u32]| a != b && divides(a, b);
    let top: Vec<u32> = block.iter().map(|&i| factors[i].1).collect();
    let top_idx = divs
        .iter()
        .position(|(e, _)| *e == top)
        .expect("block product qualifies");

    // Covers below each element inside the qualifying set.
    let covers = |k: usize| -> Vec<usize> {
        let below: Vec<usize> = (0..divs.len())
            .filter(|&j| strictly(&divs[j].0, &divs[k].0))
            .collect();
        below
            .iter()
            .copied()
            .filter(|&j| !below.iter().any(|&l| strictly(&divs[j].0, &divs[l].0)))
            .collect()
    };

    let mut chains = Vec::new();
    let mut stack = vec![(top_idx, vec![top_idx])];
    while let Some((k, path)) = stack.pop() {
        let cs = covers(k);
        if cs.is_empty() {
            let mut chain: Vec<Poly2> = path.iter().rev().map(|&i| divs[i].1.clone()).collect();
            chain.shrink_to_fit();
            chains.push(chain);
            continue;
        }
        for c in cs.into_iter().rev() {
            let mut next = path.clone();
            next.push(c);
            stack.push((c, next));
        }
    }
    chains.sort();
    Ok(chains)
}

/// Checks a user-supplied subdivision against `t` and `F_{2^p}`: each chain
/// is non-empty, totally ordered by divisibility, made of divisors of
/// degree >= 1 of its block product with striction divisible by `p`.
pub fn validate_subdivision(structure: &CompatibleStructure, chains: &[Vec<Poly2>]) -> Result<()> {
    if chains.len() != structure.partition.len() {
        return Err(Error::Shape(format!(
            "{} chains given for {} blocks",
            chains.len(),
            structure.partition.len()
        )));
    }
    for (k, chain) in chains.iter().enumerate() {
        let product = structure.block_product(k);
        if chain.is_empty() {
            return Err(Error::Shape(format!("chain {k} is empty")));
        }
        for (i, d) in chain.iter().enumerate() {
            if d.deg() == 0 || !d.divides(&product) {
                return Err(Error::Shape(format!(
                    "{d} is not a divisor of degree >= 1 of {product}"
                )));
            }
            if !striction_divisible(d, structure.p) {
                return Err(Error::IncompatibleField {
                    field_degree: structure.p,
                    detail: format!("striction of {d} not divisible by {}", structure.p),
                });
            }
            if i > 0 && !chain[i - 1].divides(d) {
                return Err(Error::Shape(format!(
                    "chain {k} is not ordered by divisibility at {d}"
                )));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(bits: u64) -> Poly2 {
        Poly2::from_u64(bits)
    }

    /// Brute-force irreducibility: no divisor of degree 1..=deg/2.
    fn brute_irreducible(f: u64) -> bool {
        let d = 63 - f.leading_zeros() as u64;
        if d == 0 {
            return false;
        }
        (2u64..(1 << (d / 2 + 1))).all(|g| !p(g).divides(&p(f)) || g == f)
    }

    #[test]
    fn basic_arithmetic() {
        assert_eq!(p(0b11).mul(&p(0b111)), p(0b1001));
        assert_eq!(p(0b1001).gcd(&p(0b101)), p(0b11));
        let (_, r) = Poly2::from_exponents(&[8, 1]).divmod(&p(0b1101)).unwrap();
        assert!(r.is_zero());
        assert_eq!(p(0b1101).divmod(&Poly2::zero()), Err(Error::DivisionByZero));
        assert_eq!(p(0b11).lcm(&p(0b101)), p(0b101));
    }

    #[test]
    fn gcd_by_exhaustive_common_divisors() {
        // Brute force: the largest-degree polynomial dividing both.
        let (a, b) = (p(0b1001), p(0b101));
        let best = (1u64..16)
            .filter(|&g| p(g).divides(&a) && p(g).divides(&b))
            .max_by_key(|&g| p(g).degree())
            .unwrap();
        assert_eq!(a.gcd(&b), p(best));
    }

    #[test]
    fn paper_factorizations() {
        let t = Poly2::from_exponents(&[12, 10, 4, 0]);
        assert_eq!(
            t.factor().unwrap(),
            vec![(p(0b11), 2), (p(0b111), 2), (p(0b1101), 2)]
        );
        assert_eq!(
            Poly2::x_pow_plus_one(6).factor().unwrap(),
            vec![(p(0b11), 2), (p(0b111), 2)]
        );
        assert_eq!(p(0b100).factor().unwrap(), vec![(p(0b10), 2)]);
        assert!(Poly2::one().factor().is_err());
    }

    #[test]
    fn stricture_values() {
        assert_eq!(Poly2::from_exponents(&[12, 10, 4, 0]).striction().unwrap().sigma, 2);
        assert_eq!(Poly2::x_pow_plus_one(6).striction().unwrap().sigma, 6);
        assert_eq!(Poly2::from_exponents(&[12, 9, 3, 0]).striction().unwrap().sigma, 3);
        assert_eq!(p(0b1000).striction(), Err(Error::MonomialInput));
        let r = Poly2::from_exponents(&[12, 10, 4, 0]).striction().unwrap();
        assert_eq!(r.exponents, vec![0, 4, 10, 12]);
        assert_eq!(Poly2::parse_bits("5137").unwrap(), Poly2::from_exponents(&[12, 10, 4, 0]));
    }

    #[test]
    fn orders_against_brute_force() {
        assert_eq!(p(0b11).order_mod().unwrap(), 1);
        assert_eq!(p(0b111).order_mod().unwrap(), 3);
        assert_eq!(p(0b1101).order_mod().unwrap(), 7);
        assert!(p(0b110).order_mod().is_err());
        for g in (3u64..1 << 11).step_by(2) {
            let g = p(g);
            let brute = (1..).find(|&k| g.divides(&Poly2::x_pow_plus_one(k))).unwrap() as u64;
            assert_eq!(g.order_mod().unwrap(), brute, "{g}");
        }
    }

    #[test]
    fn irreducibility_against_trial_division() {
        for f in 2u64..1 << 10 {
            assert_eq!(p(f).is_irreducible(), brute_irreducible(f), "{f:#b}");
        }
    }

    #[test]
    fn cyclotomic() {
        let c3 = cyclotomic_product(3).unwrap();
        assert_eq!(c3, vec![(1, p(0b11)), (3, p(0b111))]);
        assert_eq!(cyclotomic_product(1).unwrap(), vec![(1, p(0b11))]);
        let c7 = cyclotomic_product(7).unwrap();
        assert_eq!(c7[1].1, p(0b1111111));
        let f = c7[1].1.factor().unwrap();
        assert_eq!(f, vec![(p(0b1011), 1), (p(0b1101), 1)]);
        assert!(cyclotomic_product(4).is_err());
        for b in [5u64, 9, 15, 21] {
            let prod = cyclotomic_product(b)
                .unwrap()
                .iter()
                .fold(Poly2::one(), |acc, (_, f)| acc.mul(f));
            assert_eq!(prod, Poly2::x_pow_plus_one(b as usize));
        }
    }

    #[test]
    fn compatible_example_one() {
        let t = Poly2::from_exponents(&[12, 10, 4, 0]);
        let s2 = compatible_structure(&t, 2).unwrap();
        assert_eq!(s2.partition, vec![vec![0], vec![1], vec![2]]);
        assert_eq!(
            s2.subdivisions,
            vec![
                vec![vec![p(0b11).square()]],
                vec![vec![p(0b111).square()]],
                vec![vec![p(0b1101).square()]],
            ]
        );
        let s1 = compatible_structure(&t, 1).unwrap();
        assert_eq!(s1.partition, vec![vec![0], vec![1], vec![2]]);
        for (k, f) in [p(0b11), p(0b111), p(0b1101)].into_iter().enumerate() {
            assert_eq!(s1.subdivisions[k], vec![vec![f.clone(), f.square()]]);
        }
        assert!(matches!(
            compatible_structure(&t, 3),
            Err(Error::IncompatibleField { .. })
        ));
    }

    #[test]
    fn compatible_example_three() {
        let t = Poly2::from_exponents(&[12, 9, 3, 0]);
        let s = compatible_structure(&t, 3).unwrap();
        assert_eq!(s.partition, vec![vec![0, 1], vec![2]]);
        let f1f2 = p(0b1001);
        assert_eq!(s.subdivisions[0], vec![vec![f1f2.clone(), f1f2.square()]]);
        assert_eq!(s.subdivisions[1], vec![vec![p(0b1001001)]]);
        validate_subdivision(&s, &[vec![f1f2.square()], vec![p(0b1001001)]]).unwrap();
        assert!(validate_subdivision(&s, &[vec![p(0b11)], vec![p(0b1001001)]]).is_err());
    }

    #[test]
    fn compatible_example_two() {
        let t = Poly2::x_pow_plus_one(6);
        let s = compatible_structure(&t, 3).unwrap();
        assert_eq!(s.partition, vec![vec![0, 1]]);
        assert_eq!(s.subdivisions[0], vec![vec![p(0b1001), p(0b1000001)]]);
        let s2 = compatible_structure(&t, 2).unwrap();
        assert_eq!(s2.partition, vec![vec![0], vec![1]]);
    }

    #[test]
    fn valuation_part_is_set_aside() {
        let t = Poly2::from_exponents(&[5, 3, 1]);
        let s = compatible_structure(&t, 1).unwrap();
        assert_eq!(s.valuation, 1);
        let prod = (0..s.partition.len()).fold(Poly2::monomial(1), |a, k| a.mul(&s.block_product(k)));
        assert_eq!(prod, t);
    }

    #[test]
    fn bits_roundtrip_and_display() {
        let t = Poly2::from_exponents(&[200, 3, 0]);
        assert_eq!(Poly2::parse_bits(&t.to_bits_string()).unwrap(), t);
        assert_eq!(Poly2::parse_bits("0b1101").unwrap().to_string(), "X^3+X^2+1");
        assert!(Poly2::parse_bits("12z").is_err());
    }
}
