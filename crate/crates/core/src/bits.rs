//! Dense linear algebra over `F_2` with word-packed rows.

use std::fmt;

const WORD: usize = 64;

#[inline]
fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD)
}

/// A fixed-length vector over `F_2`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i, true);
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            v.set(i, b);
        }
        v
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    /// Inner product over `F_2`.
    pub fn dot(&self, other: &BitVec) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
            & 1
            == 1
    }

    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(k, w)| k * WORD + w.trailing_zeros() as usize)
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            write!(f, "{}", self.get(i) as u8)?;
        }
        Ok(())
    }
}

/// A dense matrix over `F_2`, stored row-major with each row packed into
/// 64-bit words.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        BitMatrix {
            rows,
            cols,
            stride,
            data: vec![0; rows * stride],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(rows: usize, columns: &[BitVec]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            debug_assert_eq!(c.len(), rows);
            for i in c.ones() {
                m.set(i, j, true);
            }
        }
        m
    }

    pub fn from_rows(cols: usize, rows: &[BitVec]) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            debug_assert_eq!(r.len(), cols);
            m.row_words_mut(i).copy_from_slice(r.words());
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
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        (self.data[i * self.stride + j / WORD] >> (j % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        let w = &mut self.data[i * self.stride + j / WORD];
        let mask = 1u64 << (j % WORD);
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    #[inline]
    fn row_words(&self, i: usize) -> &[u64] {
        &self.data[i * self.stride..(i + 1) * self.stride]
    }

    #[inline]
    fn row_words_mut(&mut self, i: usize) -> &mut [u64] {
        &mut self.data[i * self.stride..(i + 1) * self.stride]
    }

    pub fn row(&self, i: usize) -> BitVec {
        BitVec {
            len: self.cols,
            words: self.row_words(i).to_vec(),
        }
    }

    pub fn column(&self, j: usize) -> BitVec {
        let mut v = BitVec::zeros(self.rows);
        for i in 0..self.rows {
            if self.get(i, j) {
                v.set(i, true);
            }
        }
        v
    }

    /// `row[dst] ^= row[src]`.
    fn xor_row_into(&mut self, src: usize, dst: usize) {
        debug_assert_ne!(src, dst);
        let s = self.stride;
        let (a, b) = if src < dst {
            let (lo, hi) = self.data.split_at_mut(dst * s);
            (&lo[src * s..(src + 1) * s], &mut hi[..s])
        } else {
            let (lo, hi) = self.data.split_at_mut(src * s);
            (&hi[..s] as &[u64], &mut lo[dst * s..(dst + 1) * s])
        };
        for (d, x) in b.iter_mut().zip(a) {
            *d ^= x;
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for k in 0..self.stride {
            self.data.swap(a * self.stride + k, b * self.stride + k);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    pub fn add(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn add_assign(&mut self, other: &BitMatrix) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a ^= b;
        }
    }

    /// Matrix product; row `i` of the result is the XOR of the rows of
    /// `other` selected by the set bits of row `i` of `self`.
    pub fn mul(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let mut out = BitMatrix::zeros(self.rows, other.cols);
        let s = other.stride;
        for i in 0..self.rows {
            let dst = &mut out.data[i * s..(i + 1) * s];
            for (wk, &word) in self.row_words(i).iter().enumerate() {
                let mut w = word;
                while w != 0 {
                    let k = wk * WORD + w.trailing_zeros() as usize;
                    w &= w - 1;
                    for (d, x) in dst.iter_mut().zip(other.row_words(k)) {
                        *d ^= x;
                    }
                }
            }
        }
        out
    }

    pub fn pow(&self, mut e: u64) -> BitMatrix {
        assert!(self.is_square());
        let mut acc = BitMatrix::identity(self.rows);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn apply(&self, x: &BitVec) -> BitVec {
        assert_eq!(x.len(), self.cols);
        let mut y = BitVec::zeros(self.rows);
        for i in 0..self.rows {
            let parity = self
                .row_words(i)
                .iter()
                .zip(x.words())
                .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones());
            if parity & 1 == 1 {
                y.set(i, true);
            }
        }
        y
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                if self.get(i, j) {
                    t.set(j, i, true);
                }
            }
        }
        t
    }

    /// Reduced row echelon form in place; returns pivot columns.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| self.get(i, c)) else {
                continue;
            };
            self.swap_rows(p, r);
            for i in 0..self.rows {
                if i != r && self.get(i, c) {
                    self.xor_row_into(r, i);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref_in_place().len()
    }

    /// Basis of the right kernel `{x : M x = 0}`.
    pub fn kernel(&self) -> Vec<BitVec> {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        (0..self.cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut v = BitVec::unit(self.cols, f);
                for (r, &c) in pivots.iter().enumerate() {
                    if m.get(r, f) {
                        v.set(c, true);
                    }
                }
                v
            })
            .collect()
    }

    /// One solution of `M x = b`, if any.
    pub fn solve(&self, b: &BitVec) -> Option<BitVec> {
        assert_eq!(b.len(), self.rows);
        // Augment with b as an extra column.
        let mut aug = BitMatrix::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                if self.get(i, j) {
                    aug.set(i, j, true);
                }
            }
            if b.get(i) {
                aug.set(i, self.cols, true);
            }
        }
        let pivots = aug.rref_in_place();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = BitVec::zeros(self.cols);
        for (r, &c) in pivots.iter().enumerate() {
            if aug.get(r, self.cols) {
                x.set(c, true);
            }
        }
        Some(x)
    }

    /// Nullity of `M^k`, for `k = 0, 1, ...` until it stabilizes.
    pub fn kernel_dims_of_powers(&self) -> Vec<usize> {
        let n = self.rows;
        let mut dims = vec![0];
        let mut p = BitMatrix::identity(n);
        loop {
            p = p.mul(self);
            let d = n - p.rank();
            if d == *dims.last().unwrap() {
                return dims;
            }
            dims.push(d);
        }
    }

    /// Block-diagonal direct sum.
    pub fn direct_sum(blocks: &[BitMatrix]) -> BitMatrix {
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let m: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = BitMatrix::zeros(n, m);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    if b.get(i, j) {
                        out.set(r0 + i, c0 + j, true);
                    }
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            for j in 0..self.cols {
                write!(f, "{}", self.get(i, j) as u8)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Incremental Gaussian elimination over `F_2` that remembers, for every
/// stored basis vector, which inserted vectors it is a combination of.
#[derive(Clone, Debug)]
pub struct Eliminator {
    len: usize,
    basis: Vec<(usize, BitVec, BitVec)>,
    inserted: usize,
    tag_capacity: usize,
}

impl Eliminator {
    pub fn new(len: usize, tag_capacity: usize) -> Self {
        Eliminator {
            len,
            basis: Vec::new(),
            inserted: 0,
            tag_capacity,
        }
    }

    /// An eliminator that only tracks the span, not combinations.
    pub fn span_only(len: usize) -> Self {
        Eliminator::new(len, 0)
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Reduces `v` against the basis, returning the residue and the
    /// combination of inserted vectors that was subtracted.
    pub fn reduce(&self, v: &BitVec) -> (BitVec, BitVec) {
        debug_assert_eq!(v.len(), self.len);
        let mut v = v.clone();
        let mut combo = BitVec::zeros(self.tag_capacity);
        for (pivot, b, tag) in &self.basis {
            if v.get(*pivot) {
                v.xor_assign(b);
                combo.xor_assign(tag);
            }
        }
        (v, combo)
    }

    /// Inserts `v`; returns `Err(combo)` when `v` is already in the span,
    /// where `combo` lists the inserted vectors summing to `v`.
    pub fn insert(&mut self, v: &BitVec) -> Result<(), BitVec> {
        let id = self.inserted;
        let tracked = self.tag_capacity > 0;
        assert!(!tracked || id < self.tag_capacity, "eliminator tag capacity exceeded");
        self.inserted += 1;
        let (res, mut combo) = self.reduce(v);
        match res.first_one() {
            None => Err(combo),
            Some(pivot) => {
                if tracked {
                    combo.flip(id);
                }
                // Keep the basis fully reduced on pivot columns.
                for (_, b, tag) in self.basis.iter_mut() {
                    if b.get(pivot) {
                        b.xor_assign(&res);
                        tag.xor_assign(&combo);
                    }
                }
                self.basis.push((pivot, res, combo));
                Ok(())
            }
        }
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        self.reduce(v).0.is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&str]) -> BitMatrix {
        let cols = rows[0].len();
        let rs: Vec<BitVec> = rows
            .iter()
            .map(|r| BitVec::from_bools(&r.bytes().map(|b| b == b'1').collect::<Vec<_>>()))
            .collect();
        BitMatrix::from_rows(cols, &rs)
    }

    #[test]
    fn product_matches_naive() {
        let a = mat(&["101", "011", "110"]);
        let b = mat(&["100", "111", "001"]);
        let c = a.mul(&b);
        for i in 0..3 {
            for j in 0..3 {
                let naive = (0..3).fold(false, |acc, k| acc ^ (a.get(i, k) & b.get(k, j)));
                assert_eq!(c.get(i, j), naive);
            }
        }
    }

    #[test]
    fn wide_rows_cross_word_boundaries() {
        let n = 130;
        let mut m = BitMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, (i + 1) % n, true);
        }
        assert_eq!(m.pow(n as u64), BitMatrix::identity(n));
        assert_ne!(m.pow(n as u64 - 1), BitMatrix::identity(n));
        assert_eq!(m.transpose().mul(&m), BitMatrix::identity(n));
    }

    #[test]
    fn kernel_and_solve() {
        let m = mat(&["110", "011"]);
        let k = m.kernel();
        assert_eq!(k.len(), 1);
        assert!(m.apply(&k[0]).is_zero());
        let b = BitVec::from_bools(&[true, false]);
        let x = m.solve(&b).unwrap();
        assert_eq!(m.apply(&x), b);
        let singular = mat(&["11", "11"]);
        assert!(singular.solve(&BitVec::from_bools(&[true, false])).is_none());
    }

    #[test]
    fn nilpotent_kernel_dims() {
        // Single Jordan block of size 3.
        let m = mat(&["010", "001", "000"]);
        assert_eq!(m.kernel_dims_of_powers(), vec![0, 1, 2, 3]);
    }

    #[test]
    fn eliminator_tracks_combinations() {
        let mut e = Eliminator::new(3, 4);
        let v = [
            BitVec::from_bools(&[true, true, false]),
            BitVec::from_bools(&[false, true, true]),
            BitVec::from_bools(&[true, false, true]),
        ];
        e.insert(&v[0]).unwrap();
        e.insert(&v[1]).unwrap();
        let combo = e.insert(&v[2]).unwrap_err();
        assert_eq!(combo.ones().collect::<Vec<_>>(), vec![0, 1]);
    }
}
