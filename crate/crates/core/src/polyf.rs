//! Polynomials with coefficients in a binary field `F_{2^p}`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::poly2::{Poly2, StrictionReport};

/// Coefficient of `X^k` at index `k`; no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PolyF {
    pub field: Field,
    coeffs: Vec<Elem>,
}

impl PolyF {
    pub fn new(field: Field, coeffs: Vec<Elem>) -> Result<Self> {
        if let Some(bad) = coeffs.iter().find(|c| !field.contains(**c)) {
            return Err(Error::InvalidInput(format!(
                "coefficient {bad} is not an element of {field}"
            )));
        }
        let mut p = PolyF { field, coeffs };
        p.normalize();
        Ok(p)
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn zero(field: Field) -> Self {
        PolyF {
            field,
            coeffs: Vec::new(),
        }
    }

    /// Lifts a polynomial over `F_2` into `F[X]`.
    pub fn from_poly2(field: Field, p: &Poly2) -> Self {
        let n = p.degree().map_or(0, |d| d + 1);
        let coeffs = (0..n)
            .map(|k| if p.coeff(k) { Elem::ONE } else { Elem::ZERO })
            .collect();
        PolyF { field, coeffs }
    }

    /// The `F_2` polynomial with the same coefficients, if they all lie in `F_2`.
    pub fn to_poly2(&self) -> Option<Poly2> {
        if self.coeffs.iter().any(|c| c.0 > 1) {
            return None;
        }
        Some(Poly2::from_exponents(&self.exponents()))
    }

    /// Parses comma-separated coefficient bitmasks, lowest degree first.
    pub fn parse(field: Field, s: &str) -> Result<Self> {
        let coeffs = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u16>()
                    .map(Elem)
                    .map_err(|_| Error::InvalidInput(format!("bad coefficient {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        PolyF::new(field, coeffs)
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Elem {
        self.coeffs.get(k).copied().unwrap_or(Elem::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&Elem::ONE)
    }

    pub fn exponents(&self) -> Vec<usize> {
        (0..self.coeffs.len())
            .filter(|&k| !self.coeffs[k].is_zero())
            .collect()
    }

    pub fn valuation(&self) -> Option<usize> {
        self.exponents().first().copied()
    }

    pub fn striction(&self) -> Result<StrictionReport> {
        StrictionReport::from_exponents(self.exponents())
    }

    pub fn add(&self, other: &PolyF) -> Result<PolyF> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) + other.coeff(k)).collect();
        let mut p = PolyF {
            field: self.field,
            coeffs,
        };
        p.normalize();
        Ok(p)
    }

    pub fn mul(&self, other: &PolyF) -> Result<PolyF> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if self.is_zero() || other.is_zero() {
            return Ok(PolyF::zero(self.field));
        }
        let mut coeffs = vec![Elem::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += self.field.mul(a, b);
            }
        }
        let mut p = PolyF {
            field: self.field,
            coeffs,
        };
        p.normalize();
        Ok(p)
    }
}

impl fmt::Display for PolyF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for k in (0..self.coeffs.len()).rev() {
            let c = self.coeffs[k];
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            let scalar = if c == Elem::ONE { String::new() } else { format!("[{c}]") };
            match k {
                0 if c == Elem::ONE => write!(f, "1")?,
                0 => write!(f, "{scalar}")?,
                1 => write!(f, "{scalar}X")?,
                _ => write!(f, "{scalar}X^{k}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for PolyF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PolyF<{}>({self})", self.field)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        let f4 = Field::new(2, None).unwrap();
        let p = PolyF::parse(f4, "1,2,0,1").unwrap();
        assert_eq!(p.to_string(), "X^3+[2]X+1");
        assert_eq!(p.degree(), Some(3));
        assert!(p.is_monic());
        assert!(p.to_poly2().is_none());
        assert!(PolyF::parse(f4, "1,4").is_err());
        let q = PolyF::from_poly2(f4, &Poly2::from_u64(0b1101));
        assert_eq!(q.to_poly2().unwrap(), Poly2::from_u64(0b1101));
    }

    #[test]
    fn product_matches_poly2() {
        let f2 = Field::F2;
        let a = Poly2::from_u64(0b11);
        let b = Poly2::from_u64(0b111);
        let prod = PolyF::from_poly2(f2, &a).mul(&PolyF::from_poly2(f2, &b)).unwrap();
        assert_eq!(prod.to_poly2().unwrap(), a.mul(&b));
    }
}
