//! Dense bit-packed matrices over GF(2).
//!
//! Rows are stored as runs of `u64` words, 64 entries per word, least
//! significant bit first. Pad bits past `cols` in the last word of each row
//! are always zero.

use std::fmt;

use crate::error::{Error, Result};

const WORD: usize = 64;

fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD)
}

/// A GF(2) vector of fixed length.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
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
        let mut v = BitVec::zeros(len);
        v.set(i, true);
        v
    }

    pub fn from_indices(len: usize, ones: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut v = BitVec::zeros(len);
        for i in ones {
            if i >= len {
                return Err(Error::IndexOutOfRange { index: i, bound: len });
            }
            v.flip(i);
        }
        Ok(v)
    }

    pub(crate) fn from_words(len: usize, mut words: Vec<u64>) -> Self {
        words.resize(words_for(len), 0);
        if !len.is_multiple_of(WORD) {
            if let Some(last) = words.last_mut() {
                *last &= (1u64 << (len % WORD)) - 1;
            }
        }
        BitVec { len, words }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        assert_eq!(self.len, other.len, "bit vector length mismatch");
        xor_words(&mut self.words, &other.words);
    }

    /// Indices of set bits, ascending.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * WORD + b)
            })
        })
    }

    pub fn dot(&self, other: &BitVec) -> bool {
        assert_eq!(self.len, other.len, "bit vector length mismatch");
        parity_of_and(&self.words, &other.words)
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

#[inline]
fn xor_words(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= s;
    }
}

#[inline]
fn parity_of_and(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).fold(0u32, |acc, (x, y)| acc ^ (x & y).count_ones()) & 1 == 1
}

/// Row-major bit-packed GF(2) matrix.
#[derive(Clone, PartialEq, Eq)]
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
        let mut m = BitMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// One row per index set; repeated indices within a set cancel.
    pub fn from_rows<I, R>(cols: usize, rows: I) -> Result<Self>
    where
        I: IntoIterator<Item = R>,
        R: IntoIterator<Item = usize>,
    {
        let stride = words_for(cols);
        let mut data = Vec::new();
        let mut count = 0;
        for row in rows {
            let start = data.len();
            data.resize(start + stride, 0);
            for c in row {
                if c >= cols {
                    return Err(Error::IndexOutOfRange { index: c, bound: cols });
                }
                data[start + c / WORD] ^= 1u64 << (c % WORD);
            }
            count += 1;
        }
        Ok(BitMatrix {
            rows: count,
            cols,
            stride,
            data,
        })
    }

    pub fn from_bitvecs(cols: usize, rows: &[BitVec]) -> Self {
        let mut m = BitMatrix::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "row length mismatch");
            m.row_words_mut(i).copy_from_slice(r.words());
        }
        m
    }

    /// The matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[BitVec]) -> Self {
        let mut m = BitMatrix::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length mismatch");
            for i in c.ones() {
                m.set(i, j, true);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        assert!(r < self.rows && c < self.cols, "entry ({r}, {c}) out of range");
        (self.data[r * self.stride + c / WORD] >> (c % WORD)) & 1 == 1
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        assert!(r < self.rows && c < self.cols, "entry ({r}, {c}) out of range");
        let w = &mut self.data[r * self.stride + c / WORD];
        let mask = 1u64 << (c % WORD);
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    pub(crate) fn row_words(&self, r: usize) -> &[u64] {
        &self.data[r * self.stride..(r + 1) * self.stride]
    }

    fn row_words_mut(&mut self, r: usize) -> &mut [u64] {
        &mut self.data[r * self.stride..(r + 1) * self.stride]
    }

    pub fn row(&self, r: usize) -> BitVec {
        BitVec::from_words(self.cols, self.row_words(r).to_vec())
    }

    pub fn push_row(&mut self, row: &BitVec) {
        assert_eq!(row.len(), self.cols, "row length mismatch");
        self.data.extend_from_slice(row.words());
        self.rows += 1;
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in self.row(r).ones() {
                t.set(c, r, true);
            }
        }
        t
    }

    /// `self · v` for a column vector `v`.
    pub fn mul_vec(&self, v: &BitVec) -> BitVec {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        let mut out = BitVec::zeros(self.rows);
        for r in 0..self.rows {
            if parity_of_and(self.row_words(r), v.words()) {
                out.set(r, true);
            }
        }
        out
    }

    /// Swaps two rows in place.
    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let s = self.stride;
        let (head, tail) = self.data.split_at_mut(hi * s);
        head[lo * s..(lo + 1) * s].swap_with_slice(&mut tail[..s]);
    }

    /// `row[dst] ^= row[src]`, touching only words from `from_word` on.
    fn xor_row_into(&mut self, src: usize, dst: usize, from_word: usize) {
        let s = self.stride;
        debug_assert_ne!(src, dst);
        if src < dst {
            let (head, tail) = self.data.split_at_mut(dst * s);
            xor_words(&mut tail[from_word..s], &head[src * s + from_word..(src + 1) * s]);
        } else {
            let (head, tail) = self.data.split_at_mut(src * s);
            xor_words(&mut head[dst * s + from_word..(dst + 1) * s], &tail[from_word..s]);
        }
    }

    pub fn rank(&self) -> usize {
        self.clone().into_echelon().rank()
    }

    pub fn rref(&self) -> EchelonForm {
        self.clone().into_echelon()
    }

    /// Gauss-Jordan elimination consuming the matrix. Zero rows are dropped
    /// from the result.
    pub fn into_echelon(mut self) -> EchelonForm {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let w = c / WORD;
            let mask = 1u64 << (c % WORD);
            let Some(p) = (r..self.rows).find(|&i| self.data[i * self.stride + w] & mask != 0) else {
                continue;
            };
            self.swap_rows(p, r);
            for i in 0..self.rows {
                if i != r && self.data[i * self.stride + w] & mask != 0 {
                    // the pivot row is zero left of c, so earlier words are untouched
                    self.xor_row_into(r, i, w);
                }
            }
            pivots.push(c);
            r += 1;
        }
        self.data.truncate(r * self.stride);
        self.rows = r;
        EchelonForm {
            reduced: self,
            pivot_cols: pivots,
        }
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "{:?}", self.row(r))?;
        }
        Ok(())
    }
}

/// Reduced row echelon form: only the nonzero rows are kept, and row `i`
/// has its pivot at `pivot_cols[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EchelonForm {
    reduced: BitMatrix,
    pivot_cols: Vec<usize>,
}

impl EchelonForm {
    pub fn rank(&self) -> usize {
        self.pivot_cols.len()
    }

    pub fn cols(&self) -> usize {
        self.reduced.cols
    }

    pub fn pivot_cols(&self) -> &[usize] {
        &self.pivot_cols
    }

    pub fn reduced_rows(&self) -> &BitMatrix {
        &self.reduced
    }

    /// Columns without a pivot, ascending.
    pub fn free_cols(&self) -> Vec<usize> {
        let mut free = Vec::with_capacity(self.cols() - self.rank());
        let mut pivots = self.pivot_cols.iter().peekable();
        for c in 0..self.cols() {
            if pivots.peek() == Some(&&c) {
                pivots.next();
            } else {
                free.push(c);
            }
        }
        free
    }

    /// Reduces `v` against the pivot rows; the result is zero iff `v` lies in the row space.
    pub fn reduce_vector(&self, v: &BitVec) -> BitVec {
        let mut v = v.clone();
        for (i, &p) in self.pivot_cols.iter().enumerate() {
            if v.get(p) {
                xor_words(&mut v.words, self.reduced.row_words(i));
            }
        }
        v
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        self.reduce_vector(v).is_zero()
    }

    pub fn row_space_basis(&self) -> Vec<BitVec> {
        (0..self.rank()).map(|i| self.reduced.row(i)).collect()
    }

    /// One kernel vector per free column `f`: `e_f` plus, on each pivot column,
    /// the entry of its row at `f`.
    pub fn kernel_basis(&self) -> Vec<BitVec> {
        let cols = self.cols();
        self.free_cols()
            .into_iter()
            .map(|f| {
                let mut v = BitVec::unit(cols, f);
                for (i, &p) in self.pivot_cols.iter().enumerate() {
                    if self.reduced.get(i, f) {
                        v.set(p, true);
                    }
                }
                v
            })
            .collect()
    }
}

pub fn rref(m: &BitMatrix) -> EchelonForm {
    m.rref()
}

/// Basis of `{v : m v = 0}`. Rank-nullity and `m v = 0` are checked on every call.
pub fn kernel_basis(m: &BitMatrix) -> Vec<BitVec> {
    let ech = m.rref();
    let kernel = ech.kernel_basis();
    assert_eq!(
        m.cols(),
        ech.rank() + kernel.len(),
        "rank-nullity violated for a {}x{} matrix",
        m.rows(),
        m.cols()
    );
    for v in &kernel {
        assert!(m.mul_vec(v).is_zero(), "kernel vector is not annihilated");
    }
    kernel
}

pub fn row_space_basis(m: &BitMatrix) -> Vec<BitVec> {
    m.rref().row_space_basis()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn parse(rows: &[&str]) -> BitMatrix {
        let cols = rows.first().map_or(0, |r| r.len());
        BitMatrix::from_rows(
            cols,
            rows.iter()
                .map(|r| r.chars().enumerate().filter(|(_, ch)| *ch == '1').map(|(i, _)| i).collect::<Vec<_>>()),
        )
        .unwrap()
    }

    #[test]
    fn from_rows_examples() {
        let m = BitMatrix::from_rows(3, [vec![0, 2]]).unwrap();
        assert_eq!((m.rows(), m.cols()), (1, 3));
        assert_eq!(format!("{:?}", m.row(0)), "101");
        let empty = BitMatrix::from_rows(4, Vec::<Vec<usize>>::new()).unwrap();
        assert_eq!((empty.rows(), empty.cols()), (0, 4));
        assert!(matches!(
            BitMatrix::from_rows(3, [vec![3]]),
            Err(Error::IndexOutOfRange { index: 3, bound: 3 })
        ));
    }

    #[test]
    fn rref_examples() {
        let e = BitMatrix::identity(3).rref();
        assert_eq!((e.rank(), e.pivot_cols()), (3, &[0, 1, 2][..]));
        let e = parse(&["110", "011", "101"]).rref();
        assert_eq!(e.rank(), 2);
        assert_eq!(e.pivot_cols(), &[0, 1]);
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(kernel_basis(&BitMatrix::zeros(2, 3)).len(), 3);
        let k = kernel_basis(&parse(&["11"]));
        assert_eq!(k, vec![BitVec::from_indices(2, [0, 1]).unwrap()]);
        assert_eq!(row_space_basis(&parse(&["1011", "1011"])).len(), 1);
        // no rows at all: everything is kernel
        assert_eq!(kernel_basis(&BitMatrix::zeros(0, 5)).len(), 5);
    }

    #[test]
    fn wide_rows_cross_word_boundaries() {
        let m = BitMatrix::from_rows(130, [vec![0, 64, 129], vec![64, 129], vec![1, 128]]).unwrap();
        let e = m.rref();
        assert_eq!(e.rank(), 3);
        assert_eq!(e.pivot_cols(), &[0, 1, 64]);
        assert_eq!(kernel_basis(&m).len(), 127);
        assert_eq!(m.transpose().transpose(), m);
    }

    /// Textbook elimination on `Vec<Vec<bool>>`, kept deliberately unoptimized.
    fn naive_rref(rows: &[Vec<bool>], cols: usize) -> (Vec<Vec<bool>>, Vec<usize>) {
        let mut a: Vec<Vec<bool>> = rows.to_vec();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            let Some(p) = (r..a.len()).find(|&i| a[i][c]) else { continue };
            a.swap(r, p);
            for i in 0..a.len() {
                if i != r && a[i][c] {
                    for j in 0..cols {
                        let bit = a[r][j];
                        a[i][j] ^= bit;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        a.truncate(r);
        (a, pivots)
    }

    fn arb_matrix() -> impl Strategy<Value = (usize, Vec<Vec<bool>>)> {
        (1usize..=64, 0usize..=64).prop_flat_map(|(cols, rows)| {
            (
                Just(cols),
                prop::collection::vec(prop::collection::vec(prop::bool::weighted(0.3), cols), rows),
            )
        })
    }

    proptest! {
        #[test]
        fn rref_matches_naive((cols, rows) in arb_matrix()) {
            let m = BitMatrix::from_rows(
                cols,
                rows.iter().map(|r| r.iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| i).collect::<Vec<_>>()),
            ).unwrap();
            let ech = m.rref();
            let (naive, pivots) = naive_rref(&rows, cols);
            prop_assert_eq!(ech.pivot_cols(), &pivots[..]);
            for (i, row) in naive.iter().enumerate() {
                for (j, &b) in row.iter().enumerate() {
                    prop_assert_eq!(ech.reduced_rows().get(i, j), b);
                }
            }
            prop_assert!(ech.rank() <= rows.len().min(cols));
            prop_assert_eq!(ech.reduced_rows().rank(), ech.rank());
            // idempotent
            prop_assert_eq!(ech.reduced_rows().rref(), ech.clone());
            let kernel = kernel_basis(&m);
            prop_assert_eq!(kernel.len() + ech.rank(), cols);
            for r in 0..m.rows() {
                prop_assert!(ech.contains(&m.row(r)));
            }
        }
    }
}
