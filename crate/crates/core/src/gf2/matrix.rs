use super::vector::{word_count, GF2Vector};
use crate::error::{Error, Result};

/// Dense row-major bit matrix over GF(2).
#[derive(Clone, PartialEq, Eq)]
pub struct GF2Matrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

/// Reduced row echelon form of a matrix together with its pivot columns.
#[derive(Clone, Debug)]
pub struct RowEchelon {
    pub matrix: GF2Matrix,
    /// `pivots[i]` is the pivot column of row `i`, increasing.
    pub pivots: Vec<usize>,
}

impl GF2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = word_count(cols);
        Self {
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

    /// Stacks `rows` as the rows of a matrix with `cols` columns.
    pub fn from_rows(cols: usize, rows: &[GF2Vector]) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "row {i} has wrong length");
            m.row_words_mut(i).copy_from_slice(r.words());
        }
        m
    }

    /// Uses `columns` as the columns of a matrix with `rows` rows.
    pub fn from_columns(rows: usize, columns: &[GF2Vector]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column {j} has wrong length");
            for i in c.iter_ones() {
                m.set(i, j, true);
            }
        }
        m
    }

    /// Parses rows of 0/1 integers.
    pub fn from_int_rows(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let vecs: Vec<GF2Vector> = rows.iter().map(|r| GF2Vector::from_ints(r)).collect();
        Self::from_rows(cols, &vecs)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        debug_assert!(r < self.rows && c < self.cols);
        (self.data[r * self.stride + c / 64] >> (c % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        debug_assert!(r < self.rows && c < self.cols);
        let w = &mut self.data[r * self.stride + c / 64];
        let mask = 1u64 << (c % 64);
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, r: usize, c: usize) {
        debug_assert!(r < self.rows && c < self.cols);
        self.data[r * self.stride + c / 64] ^= 1u64 << (c % 64);
    }

    fn row_words(&self, r: usize) -> &[u64] {
        &self.data[r * self.stride..(r + 1) * self.stride]
    }

    fn row_words_mut(&mut self, r: usize) -> &mut [u64] {
        &mut self.data[r * self.stride..(r + 1) * self.stride]
    }

    pub fn row(&self, r: usize) -> GF2Vector {
        let mut v = GF2Vector::zeros(self.cols);
        for c in 0..self.cols {
            if self.get(r, c) {
                v.set(c, true);
            }
        }
        v
    }

    pub fn column(&self, c: usize) -> GF2Vector {
        GF2Vector::from_indices(self.rows, (0..self.rows).filter(|&r| self.get(r, c)))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.data.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in self.row_ones(r) {
                t.set(c, r, true);
            }
        }
        t
    }

    fn row_ones(&self, r: usize) -> impl Iterator<Item = usize> + '_ {
        self.row_words(r).iter().enumerate().flat_map(|(k, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    None
                } else {
                    let t = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    Some(k * 64 + t)
                }
            })
        })
    }

    pub fn mul_vec(&self, x: &GF2Vector) -> Result<GF2Vector> {
        if x.len() != self.cols {
            return Err(Error::contract(format!(
                "matrix with {} columns applied to vector of length {}",
                self.cols,
                x.len()
            )));
        }
        let mut out = GF2Vector::zeros(self.rows);
        for r in 0..self.rows {
            let parity = self
                .row_words(r)
                .iter()
                .zip(x.words())
                .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones());
            if parity & 1 == 1 {
                out.set(r, true);
            }
        }
        Ok(out)
    }

    /// Matrix product `self * other`. Each output row is the XOR of the rows of
    /// `other` selected by the ones of the matching row of `self`, so the cost
    /// scales with the number of ones in `self`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::contract(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            let start = r * out.stride;
            for k in self.row_ones(r) {
                let src = other.row_words(k);
                for (d, s) in out.data[start..start + out.stride].iter_mut().zip(src) {
                    *d ^= s;
                }
            }
        }
        Ok(out)
    }

    fn xor_rows_from(&mut self, dst: usize, src: usize, from_word: usize) {
        debug_assert_ne!(dst, src);
        let s = self.stride;
        let (lo, hi) = if dst < src { (dst, src) } else { (src, dst) };
        let (head, tail) = self.data.split_at_mut(hi * s);
        let lo_row = &mut head[lo * s..(lo + 1) * s];
        let hi_row = &mut tail[..s];
        let (d, r) = if dst < src {
            (lo_row, &*hi_row)
        } else {
            (hi_row, &*lo_row)
        };
        for k in from_word..s {
            d[k] ^= r[k];
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let s = self.stride;
        for k in 0..s {
            self.data.swap(a * s + k, b * s + k);
        }
    }

    /// GF(2) rank by forward elimination on a private copy.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.forward_eliminate(false).len()
    }

    /// Gaussian elimination in place. With `full`, rows above each pivot are
    /// cleared too (reduced echelon form). Returns pivot columns, one per row.
    fn forward_eliminate(&mut self, full: bool) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut next = 0;
        for c in 0..self.cols {
            if next == self.rows {
                break;
            }
            let w = c / 64;
            let mask = 1u64 << (c % 64);
            let Some(p) = (next..self.rows).find(|&r| self.data[r * self.stride + w] & mask != 0)
            else {
                continue;
            };
            self.swap_rows(p, next);
            let lower = if full { 0 } else { next + 1 };
            for r in lower..self.rows {
                if r != next && self.data[r * self.stride + w] & mask != 0 {
                    self.xor_rows_from(r, next, w);
                }
            }
            pivots.push(c);
            next += 1;
        }
        pivots
    }

    pub fn row_echelon(&self) -> RowEchelon {
        let mut m = self.clone();
        let pivots = m.forward_eliminate(true);
        RowEchelon { matrix: m, pivots }
    }

    /// Basis of `{x : A x = 0}` read off the reduced echelon form: one vector per
    /// free column, in increasing column order.
    pub fn kernel_basis(&self) -> Vec<GF2Vector> {
        let ech = self.row_echelon();
        let mut is_pivot = vec![false; self.cols];
        for &p in &ech.pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut v = GF2Vector::zeros(self.cols);
                v.set(f, true);
                for (i, &p) in ech.pivots.iter().enumerate() {
                    if ech.matrix.get(i, f) {
                        v.set(p, true);
                    }
                }
                v
            })
            .collect()
    }

    /// Solves `A x = b`. Free variables are set to zero, pivots are chosen
    /// leftmost-first, so the returned solution is deterministic.
    pub fn solve_affine(&self, b: &GF2Vector) -> Result<Option<GF2Vector>> {
        if b.len() != self.rows {
            return Err(Error::contract(format!(
                "right-hand side of length {} for a matrix with {} rows",
                b.len(),
                self.rows
            )));
        }
        let mut aug = Self::zeros(self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in self.row_ones(r) {
                aug.set(r, c, true);
            }
            if b.get(r) {
                aug.set(r, self.cols, true);
            }
        }
        let pivots = aug.forward_eliminate(true);
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = GF2Vector::zeros(self.cols);
        for (i, &p) in pivots.iter().enumerate() {
            if aug.get(i, self.cols) {
                x.set(p, true);
            }
        }
        Ok(Some(x))
    }
}

impl std::fmt::Debug for GF2Matrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "GF2Matrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows.min(32) {
            let line: String = (0..self.cols.min(96))
                .map(|c| if self.get(r, c) { '1' } else { '.' })
                .collect();
            writeln!(f, "  {line}")?;
        }
        Ok(())
    }
}
