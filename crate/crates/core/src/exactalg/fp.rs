//! Dense matrices over a prime field `F_p`.
//!
//! Entries are stored row-major as canonical residues `0..p`. Column vectors
//! are plain `Vec<u32>` slices of length `rows` / `cols`.

use std::fmt;

use crate::error::{Error, Result};

/// Largest prime accepted as a field characteristic; products of two
/// residues must fit in a `u64`.
pub const MAX_PRIME: u32 = (1 << 31) - 1;

pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p as u64 {
        if p as u64 % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub fn check_prime(p: u32) -> Result<()> {
    if p > MAX_PRIME || !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    Ok(())
}

#[inline]
pub(crate) fn mul_mod(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 * b as u64) % p as u64) as u32
}

#[inline]
pub(crate) fn add_mod(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 + b as u64) % p as u64) as u32
}

#[inline]
pub(crate) fn neg_mod(a: u32, p: u32) -> u32 {
    if a == 0 {
        0
    } else {
        p - a
    }
}

pub(crate) fn inv_mod(a: u32, p: u32) -> u32 {
    debug_assert!(a % p != 0);
    // Fermat: a^(p-2).
    let mut base = a as u64 % p as u64;
    let mut exp = p as u64 - 2;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        exp >>= 1;
    }
    acc as u32
}

/// Reduce a signed integer into `0..p`.
#[inline]
pub fn reduce(value: i64, p: u32) -> u32 {
    value.rem_euclid(p as i64) as u32
}

/// `target += factor * source` entrywise, only touching the listed support of `source`.
#[inline]
fn axpy_on_support(target: &mut [u32], source: &[u32], support: &[usize], factor: u32, p: u32) {
    let p64 = p as u64;
    let f = factor as u64;
    for &j in support {
        target[j] = ((target[j] as u64 + f * source[j] as u64) % p64) as u32;
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FpMatrix {
    p: u32,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

/// Reduced row echelon form together with the pivot column of each nonzero row.
#[derive(Clone, Debug)]
pub struct Rref {
    pub matrix: FpMatrix,
    pub pivots: Vec<usize>,
}

impl FpMatrix {
    pub fn zeros(p: u32, rows: usize, cols: usize) -> Self {
        FpMatrix {
            p,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(p: u32, n: usize) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1 % p;
        }
        m
    }

    /// Builds a matrix from signed integer rows, reducing every entry mod `p`.
    pub fn from_rows(p: u32, rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(p, rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            for (j, &v) in row.iter().enumerate() {
                m.data[i * cols + j] = reduce(v, p);
            }
        }
        Ok(m)
    }

    pub fn from_fn(p: u32, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> i64) -> Self {
        let mut m = Self::zeros(p, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.data[i * cols + j] = reduce(f(i, j), p);
            }
        }
        m
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(p: u32, rows: usize, columns: &[Vec<u32>]) -> Self {
        let mut m = Self::zeros(p, rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            debug_assert_eq!(col.len(), rows);
            for (i, &v) in col.iter().enumerate() {
                m.data[i * m.cols + j] = v % p;
            }
        }
        m
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v % self.p;
    }

    #[inline]
    pub fn add_at(&mut self, i: usize, j: usize, v: u32) {
        let idx = i * self.cols + j;
        self.data[idx] = add_mod(self.data[idx], v, self.p);
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<u32> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn columns(&self) -> Vec<Vec<u32>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..self.cols).all(|j| self.get(i, j) == u32::from(i == j)))
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.p, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        t
    }

    /// Matrix product; skips zero entries of `self`, which keeps the cost
    /// proportional to its support for the sparse differentials built here.
    pub fn mul(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        assert_eq!(self.p, other.p);
        let p = self.p;
        let mut out = FpMatrix::zeros(p, self.rows, other.cols);
        let mut acc = vec![0u64; other.cols];
        for i in 0..self.rows {
            acc.iter_mut().for_each(|a| *a = 0);
            let mut touched = false;
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k] as u64;
                if a == 0 {
                    continue;
                }
                touched = true;
                let brow = other.row(k);
                for (slot, &b) in acc.iter_mut().zip(brow) {
                    if b != 0 {
                        *slot = (*slot + a * b as u64) % p as u64;
                    }
                }
            }
            if touched {
                for (j, &v) in acc.iter().enumerate() {
                    out.data[i * other.cols + j] = v as u32;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(self.cols, v.len());
        let p = self.p as u64;
        (0..self.rows)
            .map(|i| {
                let mut acc = 0u64;
                for (a, &b) in self.row(i).iter().zip(v) {
                    if *a != 0 && b != 0 {
                        acc = (acc + *a as u64 * b as u64) % p;
                    }
                }
                acc as u32
            })
            .collect()
    }

    pub fn add(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let p = self.p;
        FpMatrix {
            p,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| add_mod(a, b, p)).collect(),
        }
    }

    pub fn sub(&self, other: &FpMatrix) -> FpMatrix {
        self.add(&other.scale(neg_mod(1 % self.p, self.p)))
    }

    pub fn scale(&self, c: u32) -> FpMatrix {
        let p = self.p;
        FpMatrix {
            p,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| mul_mod(a, c % p, p)).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> FpMatrix {
        assert_eq!(self.rows, self.cols);
        let mut base = self.clone();
        let mut acc = FpMatrix::identity(self.p, self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Adds `sign * block` with its top-left corner at `(row, col)`.
    pub fn add_block(&mut self, row: usize, col: usize, block: &FpMatrix, sign: i64) {
        assert!(row + block.rows <= self.rows && col + block.cols <= self.cols);
        let p = self.p;
        let s = reduce(sign, p);
        if s == 0 {
            return;
        }
        for i in 0..block.rows {
            for j in 0..block.cols {
                let b = block.data[i * block.cols + j];
                if b != 0 {
                    self.add_at(row + i, col + j, mul_mod(b, s, p));
                }
            }
        }
    }

    pub fn add_identity_block(&mut self, row: usize, col: usize, n: usize, sign: i64) {
        let s = reduce(sign, self.p);
        for i in 0..n {
            self.add_at(row + i, col + i, s);
        }
    }

    pub fn hstack(p: u32, rows: usize, blocks: &[&FpMatrix]) -> FpMatrix {
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = FpMatrix::zeros(p, rows, cols);
        let mut c = 0;
        for b in blocks {
            assert_eq!(b.rows, rows);
            out.add_block(0, c, b, 1);
            c += b.cols;
        }
        out
    }

    pub fn block_diagonal(p: u32, blocks: &[&FpMatrix]) -> FpMatrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = FpMatrix::zeros(p, rows, cols);
        let (mut r, mut c) = (0, 0);
        for b in blocks {
            out.add_block(r, c, b, 1);
            r += b.rows;
            c += b.cols;
        }
        out
    }

    pub fn select(&self, rows: &[usize], cols: &[usize]) -> FpMatrix {
        let mut out = FpMatrix::zeros(self.p, rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                out.data[a * cols.len() + b] = self.get(i, j);
            }
        }
        out
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> FpMatrix {
        let r: Vec<usize> = rows.collect();
        let c: Vec<usize> = cols.collect();
        self.select(&r, &c)
    }

    /// Gauss-Jordan elimination to reduced row echelon form.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let pivots = m.eliminate(true);
        Rref { matrix: m, pivots }
    }

    /// In-place elimination; returns pivot columns. With `full`, rows above
    /// each pivot are cleared too (RREF); otherwise only rows below.
    fn eliminate(&mut self, full: bool) -> Vec<usize> {
        let p = self.p;
        let (rows, cols) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut r = 0;
        let mut support = Vec::with_capacity(cols);
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(pr) = (r..rows).find(|&i| self.data[i * cols + c] != 0) else {
                continue;
            };
            if pr != r {
                for j in 0..cols {
                    self.data.swap(pr * cols + j, r * cols + j);
                }
            }
            let inv = inv_mod(self.data[r * cols + c], p);
            support.clear();
            for j in c..cols {
                let idx = r * cols + j;
                if self.data[idx] != 0 {
                    self.data[idx] = mul_mod(self.data[idx], inv, p);
                    support.push(j);
                }
            }
            let pivot_row: Vec<u32> = self.data[r * cols..(r + 1) * cols].to_vec();
            let start = if full { 0 } else { r + 1 };
            for i in start..rows {
                if i == r {
                    continue;
                }
                let a = self.data[i * cols + c];
                if a == 0 {
                    continue;
                }
                let factor = neg_mod(a, p);
                axpy_on_support(&mut self.data[i * cols..(i + 1) * cols], &pivot_row, &support, factor, p);
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        // Eliminate along the shorter side.
        if self.rows > self.cols {
            self.transpose().eliminate(false).len()
        } else {
            self.clone().eliminate(false).len()
        }
    }

    /// Basis of the null space, as the columns of a `cols x k` matrix.
    ///
    /// One basis vector per free column `j` of the RREF, with a 1 in
    /// position `j` and zeros in every other free position.
    pub fn kernel(&self) -> FpMatrix {
        let Rref { matrix, pivots } = self.rref();
        let p = self.p;
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let free: Vec<usize> = (0..self.cols).filter(|&j| !is_pivot[j]).collect();
        let mut k = FpMatrix::zeros(p, self.cols, free.len());
        for (b, &j) in free.iter().enumerate() {
            k.data[j * free.len() + b] = 1 % p;
            for (r, &pc) in pivots.iter().enumerate() {
                let v = matrix.get(r, j);
                if v != 0 {
                    k.data[pc * free.len() + b] = neg_mod(v, p);
                }
            }
        }
        k
    }

    /// Basis of the column space: the pivot columns of `self`.
    pub fn image(&self) -> FpMatrix {
        let pivots = self.rref().pivots;
        let all: Vec<usize> = (0..self.rows).collect();
        self.select(&all, &pivots)
    }

    /// A solution of `self * x = b`, with all free variables set to zero.
    pub fn solve(&self, b: &[u32]) -> Option<Vec<u32>> {
        assert_eq!(b.len(), self.rows);
        let bcol = FpMatrix::from_columns(self.p, self.rows, &[b.to_vec()]);
        let aug = FpMatrix::hstack(self.p, self.rows, &[self, &bcol]);
        let Rref { matrix, pivots } = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![0u32; self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = matrix.get(r, self.cols);
        }
        Some(x)
    }

    /// Solves `self * X = B` column by column with one elimination.
    pub fn solve_many(&self, b: &FpMatrix) -> Option<FpMatrix> {
        assert_eq!(b.rows, self.rows);
        let aug = FpMatrix::hstack(self.p, self.rows, &[self, b]);
        let Rref { matrix, pivots } = aug.rref();
        if pivots.iter().any(|&c| c >= self.cols) {
            return None;
        }
        let mut x = FpMatrix::zeros(self.p, self.cols, b.cols);
        for (r, &c) in pivots.iter().enumerate() {
            for j in 0..b.cols {
                x.data[c * b.cols + j] = matrix.get(r, self.cols + j);
            }
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<FpMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let inv = self.solve_many(&FpMatrix::identity(self.p, self.rows))?;
        (self.rank() == self.rows).then_some(inv)
    }

    /// Entries as signed integers, for serialization.
    pub fn to_i64_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|i| self.row(i).iter().map(|&v| v as i64).collect()).collect()
    }
}

impl fmt::Debug for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FpMatrix(p={}, {}x{}) [", self.p, self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "{:?}", self.row(i))?;
            if i + 1 < self.rows {
                write!(f, ", ")?;
            }
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_matrix_has_full_kernel() {
        let z = FpMatrix::zeros(5, 3, 3);
        assert_eq!(z.rank(), 0);
        assert_eq!(z.kernel(), FpMatrix::identity(5, 3));
    }

    #[test]
    fn identity_has_trivial_kernel() {
        for n in 0..5 {
            let id = FpMatrix::identity(7, n);
            assert_eq!(id.rank(), n);
            assert_eq!(id.kernel().cols(), 0);
        }
    }

    #[test]
    fn kernel_vectors_are_annihilated() {
        let m = FpMatrix::from_rows(3, &[vec![1, 2, 0, 1], vec![2, 1, 0, 2], vec![0, 0, 1, 1]]).unwrap();
        let k = m.kernel();
        assert_eq!(k.cols() + m.rank(), m.cols());
        assert!(m.mul(&k).is_zero());
    }

    #[test]
    fn solve_and_inverse() {
        let m = FpMatrix::from_rows(5, &[vec![2, 1], vec![1, 4]]).unwrap();
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).is_identity());
        let x = m.solve(&[1, 0]).unwrap();
        assert_eq!(m.mul_vec(&x), vec![1, 0]);
        let singular = FpMatrix::from_rows(5, &[vec![1, 2], vec![2, 4]]).unwrap();
        assert!(singular.inverse().is_none());
        assert!(singular.solve(&[0, 1]).is_none());
    }

    #[test]
    fn primes() {
        assert!(is_prime(2) && is_prime(5) && is_prime(MAX_PRIME));
        assert!(!is_prime(1) && !is_prime(9) && !is_prime(0));
        assert!(check_prime(4).is_err());
    }
}
