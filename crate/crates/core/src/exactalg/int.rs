//! Integer matrices with arbitrary-precision entries and Smith normal form.

use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            for (j, &v) in row.iter().enumerate() {
                m.data[i * cols + j] = BigInt::from(v);
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let v = self.get(i, j);
                    if i == j {
                        v.is_one()
                    } else {
                        v.is_zero()
                    }
                })
            })
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn add_block(&mut self, row: usize, col: usize, block: &IntMatrix, sign: i64) {
        assert!(row + block.rows <= self.rows && col + block.cols <= self.cols);
        if sign == 0 {
            return;
        }
        let s = BigInt::from(sign);
        for i in 0..block.rows {
            for j in 0..block.cols {
                let b = block.get(i, j);
                if !b.is_zero() {
                    self.data[(row + i) * self.cols + col + j] += b * &s;
                }
            }
        }
    }

    pub fn add_identity_block(&mut self, row: usize, col: usize, n: usize, sign: i64) {
        for i in 0..n {
            self.data[(row + i) * self.cols + col + i] += sign;
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// `row[target] += factor * row[source]`.
    pub fn add_row_multiple(&mut self, target: usize, source: usize, factor: &BigInt) {
        if factor.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = &self.data[source * self.cols + j] * factor;
            self.data[target * self.cols + j] += v;
        }
    }

    /// `col[target] += factor * col[source]`.
    pub fn add_col_multiple(&mut self, target: usize, source: usize, factor: &BigInt) {
        if factor.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = &self.data[i * self.cols + source] * factor;
            self.data[i * self.cols + target] += v;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let v = -std::mem::take(&mut self.data[r * self.cols + j]);
            self.data[r * self.cols + j] = v;
        }
    }

    /// Rank over the rationals by fraction-free elimination.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut rank = 0;
        let mut prev = BigInt::one();
        for c in 0..m.cols {
            if rank == m.rows {
                break;
            }
            let Some(pr) = (rank..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(pr, rank);
            let pivot = m.get(rank, c).clone();
            for i in rank + 1..m.rows {
                let a = m.get(i, c).clone();
                for j in c..m.cols {
                    let v = (&pivot * m.get(i, j) - &a * m.get(rank, j)) / &prev;
                    m.set(i, j, v);
                }
            }
            prev = pivot;
            rank += 1;
        }
        rank
    }

    /// Determinant by Bareiss elimination.
    pub fn determinant(&self) -> Option<BigInt> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        if n == 0 {
            return Some(BigInt::one());
        }
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if m.get(k, k).is_zero() {
                let Some(pr) = (k + 1..n).find(|&i| !m.get(i, k).is_zero()) else {
                    return Some(BigInt::zero());
                };
                m.swap_rows(pr, k);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (m.get(k, k) * m.get(i, j) - m.get(i, k) * m.get(k, j)) / &prev;
                    m.set(i, j, v);
                }
            }
            prev = m.get(k, k).clone();
        }
        Some(sign * m.get(n - 1, n - 1).clone())
    }

    pub fn is_unimodular(&self) -> bool {
        self.determinant().is_some_and(|d| d.abs().is_one())
    }

    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).to_i64()).collect())
            .collect()
    }

    pub fn to_string_rows(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).to_string()).collect())
            .collect()
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix({}x{}) {:?}", self.rows, self.cols, self.to_string_rows())
    }
}

/// `U * A * V = D` with `U`, `V` unimodular and `D` diagonal with `d_1 | d_2 | ...`.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub left: IntMatrix,
    pub diagonal: IntMatrix,
    pub right: IntMatrix,
}

impl SmithForm {
    /// Nonzero diagonal entries, each positive, in divisibility order.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        let d = &self.diagonal;
        (0..d.rows.min(d.cols))
            .map(|i| d.get(i, i).clone())
            .take_while(|v| !v.is_zero())
            .collect()
    }
}

pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    let (m, n) = (a.rows, a.cols);
    let mut d = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);
    let mut t = 0;
    while t < m.min(n) {
        // Smallest nonzero entry of the trailing block becomes the pivot.
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                let x = d.get(i, j);
                if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < d.get(bi, bj).abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);

        loop {
            let mut clean = true;
            for i in t + 1..m {
                if d.get(i, t).is_zero() {
                    continue;
                }
                let q = -d.get(i, t).div_floor(d.get(t, t));
                d.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                if !d.get(i, t).is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..n {
                if d.get(t, j).is_zero() {
                    continue;
                }
                let q = -d.get(t, j).div_floor(d.get(t, t));
                d.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                if !d.get(t, j).is_zero() {
                    clean = false;
                }
            }
            if !clean {
                // A remainder smaller than the pivot survived; promote it.
                let mut best = (t, t);
                for i in t + 1..m {
                    let x = d.get(i, t);
                    if !x.is_zero() && x.abs() < d.get(best.0, best.1).abs() {
                        best = (i, t);
                    }
                }
                for j in t + 1..n {
                    let x = d.get(t, j);
                    if !x.is_zero() && x.abs() < d.get(best.0, best.1).abs() {
                        best = (t, j);
                    }
                }
                d.swap_rows(t, best.0);
                u.swap_rows(t, best.0);
                d.swap_cols(t, best.1);
                v.swap_cols(t, best.1);
                continue;
            }
            // Row and column are clear; enforce divisibility of the trailing block.
            let pivot = d.get(t, t).clone();
            let offender = (t + 1..m).find(|&i| (t + 1..n).any(|j| !d.get(i, j).is_multiple_of(&pivot)));
            match offender {
                Some(i) => {
                    let one = BigInt::one();
                    d.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if d.get(t, t).sign() == Sign::Minus {
            d.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }
    SmithForm {
        left: u,
        diagonal: d,
        right: v,
    }
}

/// A finitely generated abelian group `Z^rank ⊕ Z/d_1 ⊕ ... ⊕ Z/d_k`, `d_i | d_{i+1}`, `d_i ≥ 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FgAbelianGroup {
    pub rank: usize,
    #[serde(serialize_with = "serialize_factors")]
    pub torsion: Vec<BigUint>,
}

fn serialize_factors<S: Serializer>(factors: &[BigUint], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(factors.len()))?;
    for f in factors {
        match f.to_u64() {
            Some(v) => seq.serialize_element(&v)?,
            None => seq.serialize_element(&f.to_string())?,
        }
    }
    seq.end()
}

impl FgAbelianGroup {
    pub fn zero() -> Self {
        FgAbelianGroup {
            rank: 0,
            torsion: Vec::new(),
        }
    }

    pub fn free(rank: usize) -> Self {
        FgAbelianGroup {
            rank,
            torsion: Vec::new(),
        }
    }

    /// Canonical form from arbitrary cyclic factors: units dropped, chain by SNF.
    pub fn new(rank: usize, factors: &[u64]) -> Self {
        let n = factors.len();
        let mut diag = IntMatrix::zeros(n, n);
        for (i, &f) in factors.iter().enumerate() {
            diag.set(i, i, BigInt::from(f));
        }
        let snf = smith_normal_form(&diag);
        let mut rank = rank;
        let mut torsion = Vec::new();
        for i in 0..n {
            let d = snf.diagonal.get(i, i);
            if d.is_zero() {
                rank += 1;
            } else if !d.is_one() {
                torsion.push(d.magnitude().clone());
            }
        }
        FgAbelianGroup { rank, torsion }
    }

    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }

    /// Cokernel of `m: Z^cols -> Z^rows`.
    pub fn cokernel(m: &IntMatrix) -> Self {
        let factors = smith_normal_form(m).invariant_factors();
        FgAbelianGroup {
            rank: m.rows - factors.len(),
            torsion: factors
                .into_iter()
                .filter(|d| !d.is_one())
                .map(|d| d.magnitude().clone())
                .collect(),
        }
    }
}

impl fmt::Display for FgAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factors(m: &IntMatrix) -> Vec<i64> {
        smith_normal_form(m)
            .invariant_factors()
            .iter()
            .map(|v| v.to_i64().unwrap())
            .collect()
    }

    fn check(m: &IntMatrix) {
        let s = smith_normal_form(m);
        assert_eq!(s.left.mul(m).mul(&s.right), s.diagonal);
        assert!(s.left.is_unimodular() && s.right.is_unimodular());
        let f = s.invariant_factors();
        for w in f.windows(2) {
            assert!(w[1].is_multiple_of(&w[0]));
        }
    }

    #[test]
    fn diag_two_three() {
        let m = IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]).unwrap();
        assert_eq!(factors(&m), vec![1, 6]);
        check(&m);
    }

    #[test]
    fn identity_is_its_own_form() {
        let m = IntMatrix::identity(3);
        assert_eq!(smith_normal_form(&m).diagonal, m);
    }

    #[test]
    fn two_minus_two_has_cokernel_z2() {
        let m = IntMatrix::from_rows(&[vec![2, -2]]).unwrap();
        assert_eq!(factors(&m), vec![2]);
        check(&m);
        assert_eq!(FgAbelianGroup::cokernel(&m), FgAbelianGroup::new(0, &[2]));
    }

    #[test]
    fn rank_and_determinant() {
        let m = IntMatrix::from_rows(&[vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 9]]).unwrap();
        assert_eq!(m.rank(), 2);
        assert_eq!(m.determinant().unwrap(), BigInt::zero());
        let u = IntMatrix::from_rows(&[vec![2, 1], vec![1, 1]]).unwrap();
        assert!(u.is_unimodular());
        check(&m);
    }

    #[test]
    fn canonical_group_form() {
        let g = FgAbelianGroup::new(1, &[4, 6, 1]);
        assert_eq!(g.rank, 1);
        assert_eq!(g.torsion, vec![BigUint::from(2u32), BigUint::from(12u32)]);
        assert_eq!(g.to_string(), "Z + Z/2 + Z/12");
        assert_eq!(FgAbelianGroup::new(0, &[0]), FgAbelianGroup::free(1));
    }
}
