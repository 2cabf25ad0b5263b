//! Subspaces of `F_p^n` in canonical form, and subquotients `Z / B`.

use super::fp::{mul_mod, neg_mod, FpMatrix};
use crate::error::{Error, Result};

/// A subspace held by its reduced row echelon basis.
///
/// The basis vector in row `i` has a 1 at `pivots[i]` and zeros at every
/// other pivot, so coordinates of a member vector are read off its pivot
/// entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    p: u32,
    ambient: usize,
    basis: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(p: u32, ambient: usize) -> Self {
        Subspace {
            p,
            ambient,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(p: u32, ambient: usize) -> Self {
        Self::column_span(&FpMatrix::identity(p, ambient))
    }

    /// Span of arbitrary vectors of length `ambient`.
    pub fn span<'a>(p: u32, ambient: usize, vectors: impl IntoIterator<Item = &'a [u32]>) -> Self {
        let rows: Vec<Vec<i64>> = vectors
            .into_iter()
            .map(|v| {
                debug_assert_eq!(v.len(), ambient);
                v.iter().map(|&x| x as i64).collect()
            })
            .collect();
        if rows.is_empty() {
            return Self::zero(p, ambient);
        }
        let m = FpMatrix::from_rows(p, &rows).expect("rows have equal length");
        Self::from_row_matrix(&m)
    }

    /// Span of the columns of `m`.
    pub fn column_span(m: &FpMatrix) -> Self {
        Self::from_row_matrix(&m.transpose())
    }

    fn from_row_matrix(m: &FpMatrix) -> Self {
        let rref = m.rref();
        let basis = (0..rref.pivots.len()).map(|i| rref.matrix.row(i).to_vec()).collect();
        Subspace {
            p: m.prime(),
            ambient: m.cols(),
            basis,
            pivots: rref.pivots,
        }
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<u32>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// The basis as columns of an `ambient x dim` matrix.
    pub fn basis_matrix(&self) -> FpMatrix {
        FpMatrix::from_columns(self.p, self.ambient, &self.basis)
    }

    /// `v` minus its projection along the pivot coordinates.
    fn residual(&self, v: &[u32]) -> Vec<u32> {
        let p = self.p as u64;
        let mut r = v.to_vec();
        for (row, &pc) in self.basis.iter().zip(&self.pivots) {
            let c = r[pc];
            if c == 0 {
                continue;
            }
            let f = neg_mod(c, self.p) as u64;
            for (x, &b) in r.iter_mut().zip(row) {
                if b != 0 {
                    *x = ((*x as u64 + f * b as u64) % p) as u32;
                }
            }
        }
        r
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        self.residual(v).iter().all(|&x| x == 0)
    }

    /// Coordinates of `v` in the canonical basis, or `None` if `v` is not a member.
    pub fn coords(&self, v: &[u32]) -> Option<Vec<u32>> {
        self.contains(v).then(|| self.pivots.iter().map(|&pc| v[pc]).collect())
    }

    pub fn combine(&self, coords: &[u32]) -> Vec<u32> {
        let mut out = vec![0u32; self.ambient];
        for (row, &c) in self.basis.iter().zip(coords) {
            if c == 0 {
                continue;
            }
            for (x, &b) in out.iter_mut().zip(row) {
                *x = ((*x as u64 + mul_mod(b, c, self.p) as u64) % self.p as u64) as u32;
            }
        }
        out
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient);
        Subspace::span(
            self.p,
            self.ambient,
            self.basis.iter().chain(&other.basis).map(Vec::as_slice),
        )
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.basis.iter().all(|v| other.contains(v))
    }
}

/// A subquotient `Z / B` with `B ⊆ Z ⊆ F_p^n` and a chosen section.
///
/// Working in the coordinates of `Z`'s canonical basis, `B` becomes a
/// subspace of `F_p^{dim Z}`; the coordinate positions that are not pivots of
/// `B` index a complement, and the corresponding basis vectors of `Z` form the
/// section.
#[derive(Clone, Debug)]
pub struct Subquotient {
    cycles: Subspace,
    boundaries: Subspace,
    boundaries_in_cycles: Subspace,
    free_positions: Vec<usize>,
}

impl Subquotient {
    pub fn new(cycles: Subspace, boundaries: Subspace) -> Result<Self> {
        assert_eq!(cycles.ambient, boundaries.ambient);
        let mut coords = Vec::with_capacity(boundaries.dim());
        for b in &boundaries.basis {
            let c = cycles.coords(b).ok_or_else(|| {
                Error::Internal("subquotient: boundary space is not contained in cycle space".into())
            })?;
            coords.push(c);
        }
        let boundaries_in_cycles =
            Subspace::span(cycles.p, cycles.dim(), coords.iter().map(Vec::as_slice));
        let mut is_pivot = vec![false; cycles.dim()];
        for &pc in &boundaries_in_cycles.pivots {
            is_pivot[pc] = true;
        }
        let free_positions = (0..cycles.dim()).filter(|&j| !is_pivot[j]).collect();
        Ok(Subquotient {
            cycles,
            boundaries,
            boundaries_in_cycles,
            free_positions,
        })
    }

    pub fn dim(&self) -> usize {
        self.free_positions.len()
    }

    pub fn cycles(&self) -> &Subspace {
        &self.cycles
    }

    pub fn boundaries(&self) -> &Subspace {
        &self.boundaries
    }

    /// Representatives in the ambient space of a basis of `Z / B`.
    pub fn section(&self) -> Vec<Vec<u32>> {
        self.free_positions.iter().map(|&j| self.cycles.basis[j].clone()).collect()
    }

    /// Coordinates of the class of `v` in the section basis; `None` if `v ∉ Z`.
    pub fn class_coords(&self, v: &[u32]) -> Option<Vec<u32>> {
        let c = self.cycles.coords(v)?;
        let r = self.boundaries_in_cycles.residual(&c);
        Some(self.free_positions.iter().map(|&j| r[j]).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coords_round_trip() {
        let s = Subspace::span(5, 3, [[1u32, 2, 0].as_slice(), &[0, 1, 1]]);
        assert_eq!(s.dim(), 2);
        let w = s.combine(&[3, 4]);
        assert_eq!(s.coords(&w).unwrap(), vec![3, 4]);
        assert!(!s.contains(&[0, 0, 1]));
        assert!(s.coords(&[0, 0, 1]).is_none());
    }

    #[test]
    fn quotient_of_plane_by_line() {
        let z = Subspace::full(2, 2);
        let b = Subspace::span(2, 2, [[1u32, 1].as_slice()]);
        let q = Subquotient::new(z, b).unwrap();
        assert_eq!(q.dim(), 1);
        assert_eq!(q.class_coords(&[1, 1]).unwrap(), vec![0]);
        assert_eq!(q.class_coords(&[1, 0]).unwrap(), q.class_coords(&[0, 1]).unwrap());
        let s = q.section();
        assert_eq!(q.class_coords(&s[0]).unwrap(), vec![1]);
    }

    #[test]
    fn boundaries_outside_cycles_rejected() {
        let z = Subspace::span(3, 2, [[1u32, 0].as_slice()]);
        let b = Subspace::span(3, 2, [[0u32, 1].as_slice()]);
        assert!(Subquotient::new(z, b).is_err());
    }
}
