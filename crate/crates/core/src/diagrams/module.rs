use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::{check_prime, FpMatrix, Subspace};

/// `R = F_p[x]/(x^m)`; `m = 1` is the field `F_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct CoeffAlgebra {
    pub p: u32,
    pub m: usize,
}

impl CoeffAlgebra {
    pub fn new(p: u32, m: usize) -> Result<Self> {
        check_prime(p)?;
        if m == 0 {
            return Err(Error::InvalidAlgebra("nilpotency degree m must be at least 1".into()));
        }
        Ok(CoeffAlgebra { p, m })
    }

    pub fn field(p: u32) -> Result<Self> {
        Self::new(p, 1)
    }

    pub fn is_field(&self) -> bool {
        self.m == 1
    }
}

impl fmt::Display for CoeffAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.m == 1 {
            write!(f, "F_{}", self.p)
        } else {
            write!(f, "F_{}[x]/(x^{})", self.p, self.m)
        }
    }
}

/// A finite-dimensional `R`-module: an `F_p`-space with the action of `x`.
///
/// Free modules built by [`RModule::free`] use the generator-major basis
/// `e_1, x e_1, ..., x^{m-1} e_1, e_2, ...`, and remember their rank.
#[derive(Clone, Debug)]
pub struct RModule {
    alg: CoeffAlgebra,
    x: FpMatrix,
    free_rank: Option<usize>,
}

impl PartialEq for RModule {
    fn eq(&self, other: &Self) -> bool {
        self.alg == other.alg && self.x == other.x
    }
}

impl Eq for RModule {}

impl RModule {
    pub fn new(alg: CoeffAlgebra, x: FpMatrix) -> Result<Self> {
        if x.rows() != x.cols() {
            return Err(Error::DimensionMismatch("x-action must be square".into()));
        }
        if x.prime() != alg.p {
            return Err(Error::InvalidAlgebra(format!(
                "x-action over F_{} for an algebra over F_{}",
                x.prime(),
                alg.p
            )));
        }
        if !x.pow(alg.m as u32).is_zero() {
            return Err(Error::InvalidDiagram(format!("x-action does not satisfy x^{} = 0", alg.m)));
        }
        Ok(RModule {
            alg,
            x,
            free_rank: None,
        })
    }

    /// A vector space with `x` acting by zero.
    pub fn trivial(alg: CoeffAlgebra, dim: usize) -> Self {
        RModule {
            alg,
            x: FpMatrix::zeros(alg.p, dim, dim),
            free_rank: if alg.m == 1 { Some(dim) } else { None },
        }
    }

    pub fn zero(alg: CoeffAlgebra) -> Self {
        RModule {
            alg,
            x: FpMatrix::zeros(alg.p, 0, 0),
            free_rank: Some(0),
        }
    }

    pub fn free(alg: CoeffAlgebra, rank: usize) -> Self {
        let m = alg.m;
        let dim = rank * m;
        let mut x = FpMatrix::zeros(alg.p, dim, dim);
        for g in 0..rank {
            for k in 0..m - 1 {
                x.set(g * m + k + 1, g * m + k, 1);
            }
        }
        RModule {
            alg,
            x,
            free_rank: Some(rank),
        }
    }

    pub fn alg(&self) -> CoeffAlgebra {
        self.alg
    }

    pub fn prime(&self) -> u32 {
        self.alg.p
    }

    pub fn dim(&self) -> usize {
        self.x.rows()
    }

    pub fn x(&self) -> &FpMatrix {
        &self.x
    }

    /// Rank when the module carries the standard free basis.
    pub fn free_rank(&self) -> Option<usize> {
        self.free_rank
    }

    /// Number of generators of a projective cover, `dim A/xA`.
    pub fn top_dim(&self) -> usize {
        self.dim() - self.x.rank()
    }

    pub fn is_free(&self) -> bool {
        self.free_rank.is_some() || self.dim() == self.alg.m * self.top_dim()
    }

    /// Direct sum with the bases concatenated in order.
    pub fn direct_sum(alg: CoeffAlgebra, parts: &[&RModule]) -> RModule {
        let blocks: Vec<&FpMatrix> = parts.iter().map(|m| &m.x).collect();
        let free_rank = parts.iter().map(|m| m.free_rank).sum::<Option<usize>>();
        RModule {
            alg,
            x: FpMatrix::block_diagonal(alg.p, &blocks),
            free_rank,
        }
    }

    /// Whether `phi: self → target` commutes with `x`.
    pub fn is_hom_to(&self, target: &RModule, phi: &FpMatrix) -> bool {
        phi.rows() == target.dim()
            && phi.cols() == self.dim()
            && target.x.mul(phi) == phi.mul(&self.x)
    }

    /// The submodule spanned by the columns of `basis` (which must be
    /// `x`-stable), with its induced action.
    pub fn submodule(&self, basis: &FpMatrix) -> Result<RModule> {
        let xb = self.x.mul(basis);
        let action = basis
            .solve_many(&xb)
            .ok_or_else(|| Error::Internal("subspace is not x-stable".into()))?;
        RModule::new(self.alg, action)
    }

    /// The same module with its basis changed by the invertible `s`
    /// (new coordinates = `s` · old coordinates).
    pub fn change_basis(&self, s: &FpMatrix, s_inv: &FpMatrix) -> RModule {
        RModule {
            alg: self.alg,
            x: s.mul(&self.x).mul(s_inv),
            free_rank: None,
        }
    }
}

/// `Hom_R(A, B)` as an `F_p`-space with a fixed basis.
#[derive(Clone, Debug)]
pub struct HomSpace {
    p: u32,
    source_dim: usize,
    target_dim: usize,
    kind: HomKind,
}

#[derive(Clone, Debug)]
enum HomKind {
    /// Source free of rank `rank`: a map is the image of each generator.
    Free { rank: usize, m: usize, target_x: FpMatrix },
    /// Maps as row-major vectors in the kernel of `φ ↦ X_B φ − φ X_A`.
    General(Subspace),
}

impl HomSpace {
    pub fn new(source: &RModule, target: &RModule) -> Self {
        let p = source.prime();
        let (da, db) = (source.dim(), target.dim());
        let kind = if let Some(rank) = source.free_rank {
            HomKind::Free {
                rank,
                m: source.alg.m,
                target_x: target.x.clone(),
            }
        } else if source.alg.m == 1 {
            HomKind::General(Subspace::full(p, da * db))
        } else {
            let mut eq = FpMatrix::zeros(p, da * db, da * db);
            let neg = |v: u32| if v == 0 { 0 } else { p - v };
            for i in 0..db {
                for j in 0..da {
                    let row = i * da + j;
                    for k in 0..db {
                        eq.add_at(row, k * da + j, target.x.get(i, k));
                    }
                    for k in 0..da {
                        eq.add_at(row, i * da + k, neg(source.x.get(k, j)));
                    }
                }
            }
            HomKind::General(Subspace::column_span(&eq.kernel()))
        };
        HomSpace {
            p,
            source_dim: da,
            target_dim: db,
            kind,
        }
    }

    pub fn dim(&self) -> usize {
        match &self.kind {
            HomKind::Free { rank, .. } => rank * self.target_dim,
            HomKind::General(s) => s.dim(),
        }
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    pub fn source_dim(&self) -> usize {
        self.source_dim
    }

    pub fn target_dim(&self) -> usize {
        self.target_dim
    }

    /// The `i`-th basis map as a `target × source` matrix.
    pub fn element(&self, i: usize) -> FpMatrix {
        match &self.kind {
            HomKind::Free { m, target_x, .. } => {
                let (g, v) = (i / self.target_dim, i % self.target_dim);
                let mut phi = FpMatrix::zeros(self.p, self.target_dim, self.source_dim);
                let mut col = vec![0u32; self.target_dim];
                col[v] = 1;
                for k in 0..*m {
                    for (r, &c) in col.iter().enumerate() {
                        phi.set(r, g * m + k, c);
                    }
                    col = target_x.mul_vec(&col);
                }
                phi
            }
            HomKind::General(s) => {
                let v = &s.basis()[i];
                FpMatrix::from_fn(self.p, self.target_dim, self.source_dim, |r, c| {
                    v[r * self.source_dim + c] as i64
                })
            }
        }
    }

    /// Coordinates of an `R`-linear map in this basis.
    pub fn coords(&self, phi: &FpMatrix) -> Option<Vec<u32>> {
        debug_assert_eq!((phi.rows(), phi.cols()), (self.target_dim, self.source_dim));
        match &self.kind {
            HomKind::Free { rank, m, .. } => {
                let mut out = Vec::with_capacity(rank * self.target_dim);
                for g in 0..*rank {
                    out.extend(phi.column(g * m));
                }
                Some(out)
            }
            HomKind::General(s) => {
                let v: Vec<u32> = (0..self.target_dim)
                    .flat_map(|r| phi.row(r).to_vec())
                    .collect();
                s.coords(&v)
            }
        }
    }

    /// Matrix of a linear operation `Hom(A, B) → Hom(A', B')` in the two bases.
    pub fn induced(&self, target: &HomSpace, mut op: impl FnMut(&FpMatrix) -> FpMatrix) -> FpMatrix {
        let columns: Vec<Vec<u32>> = (0..self.dim())
            .map(|i| {
                target
                    .coords(&op(&self.element(i)))
                    .expect("induced map leaves the space of R-linear maps")
            })
            .collect();
        FpMatrix::from_columns(self.p, target.dim(), &columns)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r2() -> CoeffAlgebra {
        CoeffAlgebra::new(2, 2).unwrap()
    }

    #[test]
    fn free_module_action_is_nilpotent() {
        for m in 1..4 {
            let alg = CoeffAlgebra::new(3, m).unwrap();
            let f = RModule::free(alg, 2);
            assert_eq!(f.dim(), 2 * m);
            assert!(f.x().pow(m as u32).is_zero());
            assert_eq!(f.top_dim(), 2);
            assert!(RModule::new(alg, f.x().clone()).unwrap().is_free());
        }
    }

    #[test]
    fn rejects_non_nilpotent_action() {
        let x = FpMatrix::identity(2, 1);
        assert!(RModule::new(r2(), x).is_err());
        assert!(CoeffAlgebra::new(4, 1).is_err());
        assert!(CoeffAlgebra::new(2, 0).is_err());
    }

    #[test]
    fn hom_from_r_to_k_is_one_dimensional() {
        let alg = r2();
        let r = RModule::free(alg, 1);
        let k = RModule::trivial(alg, 1);
        assert_eq!(HomSpace::new(&r, &k).dim(), 1);
        // Same answer through the general kernel computation.
        let r_general = RModule::new(alg, r.x().clone()).unwrap();
        assert_eq!(HomSpace::new(&r_general, &k).dim(), 1);
        assert_eq!(HomSpace::new(&k, &r).dim(), 1);
        assert_eq!(HomSpace::new(&r, &r).dim(), 2);
    }

    #[test]
    fn hom_elements_round_trip() {
        let alg = CoeffAlgebra::new(3, 3).unwrap();
        let a = RModule::free(alg, 2);
        let b = RModule::direct_sum(alg, &[&RModule::trivial(alg, 1), &RModule::free(alg, 1)]);
        for h in [HomSpace::new(&a, &b), HomSpace::new(&b, &a), HomSpace::new(&b, &b)] {
            for i in 0..h.dim() {
                let phi = h.element(i);
                let mut e = vec![0; h.dim()];
                e[i] = 1;
                assert_eq!(h.coords(&phi).unwrap(), e);
            }
        }
    }

    #[test]
    fn hom_elements_are_equivariant() {
        let alg = r2();
        let a = RModule::direct_sum(alg, &[&RModule::trivial(alg, 1), &RModule::free(alg, 1)]);
        let h = HomSpace::new(&a, &a);
        for i in 0..h.dim() {
            assert!(a.is_hom_to(&a, &h.element(i)));
        }
        // End(k ⊕ R) over k[x]/(x²): k→k, k→R (onto socle), R→k, R→R (two).
        assert_eq!(h.dim(), 5);
    }
}
