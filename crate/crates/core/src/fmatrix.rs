//! Dense matrices over `F_{2^p}`, used for the structure matrix `S` and its
//! Hadamard-power composites.

use std::fmt;

use crate::field::{Elem, Field};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FMatrix {
    pub field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl FMatrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        FMatrix {
            field,
            rows,
            cols,
            data: vec![Elem::ZERO; rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = FMatrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, Elem::ONE);
        }
        m
    }

    /// Builds a square matrix whose column `j` is `columns[j]`.
    pub fn from_columns(field: Field, columns: &[Vec<Elem>]) -> Self {
        let n = columns.len();
        let mut m = FMatrix::zeros(field, n, n);
        for (j, col) in columns.iter().enumerate() {
            for (i, &v) in col.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<Elem> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| e.is_zero())
    }

    pub fn mul(&self, other: &FMatrix) -> FMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let f = self.field;
        let mut out = FMatrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += f.mul(a, b);
                    }
                }
            }
        }
        out
    }

    pub fn apply(&self, x: &[Elem]) -> Vec<Elem> {
        assert_eq!(x.len(), self.cols, "shape mismatch");
        (0..self.rows)
            .map(|i| {
                x.iter().enumerate().fold(Elem::ZERO, |acc, (j, &xj)| {
                    acc + self.field.mul(self.get(i, j), xj)
                })
            })
            .collect()
    }

    /// Entrywise `a ↦ a^{2^k}`, the Hadamard power `S^{⊙2^k}`.
    pub fn hadamard_frobenius(&self, k: u64) -> FMatrix {
        let mut out = self.clone();
        for e in out.data.iter_mut() {
            *e = self.field.frobenius(*e, k);
        }
        out
    }
}

/// `S · S^{⊙2} · S^{⊙4} ⋯ S^{⊙2^{k-1}}` (`k` factors), so that
/// `V^k(x) = composite · Frob^k(x)` on coordinates. `k = 0` gives the identity.
pub fn hadamard_composite(s: &FMatrix, k: usize) -> FMatrix {
    let mut acc = FMatrix::identity(s.field, s.rows());
    for j in 0..k {
        acc = acc.mul(&s.hadamard_frobenius(j as u64));
    }
    acc
}

impl fmt::Debug for FMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FMatrix<{}> {}x{}", self.field, self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  {}", row.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn composite_over_f2_is_power() {
        let f = Field::F2;
        let s = FMatrix::from_columns(
            f,
            &[
                vec![Elem(0), Elem(1), Elem(1)],
                vec![Elem(1), Elem(0), Elem(1)],
                vec![Elem(1), Elem(1), Elem(0)],
            ],
        );
        assert_eq!(hadamard_composite(&s, 1), s);
        assert_eq!(hadamard_composite(&s, 3), s.mul(&s).mul(&s));
    }
}
