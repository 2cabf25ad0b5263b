//! Exact linear algebra over prime fields and the integers.

mod fp;
mod int;
mod subspace;

use std::fmt;

use serde::Serialize;

pub use fp::{check_prime, is_prime, reduce, FpMatrix, Rref, MAX_PRIME};
pub use int::{smith_normal_form, FgAbelianGroup, IntMatrix, SmithForm};
pub use subspace::{Subquotient, Subspace};

#[allow(unused_imports)]
pub(crate) use fp::{add_mod, inv_mod, mul_mod, neg_mod};

use crate::error::{Error, Result};

/// Scalars a matrix lives over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Ring {
    Integers,
    PrimeField(u32),
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::Integers => write!(f, "Z"),
            Ring::PrimeField(p) => write!(f, "F_{p}"),
        }
    }
}

/// Cohomology of one degree: a group over `Z`, a dimension over `F_p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Homology {
    Group { group: FgAbelianGroup },
    Vector { dim: usize },
}

impl Homology {
    pub fn is_zero(&self) -> bool {
        match self {
            Homology::Group { group } => group.is_zero(),
            Homology::Vector { dim } => *dim == 0,
        }
    }

    /// Dimension over `F_p`, or the free rank for groups.
    pub fn rank(&self) -> usize {
        match self {
            Homology::Group { group } => group.rank,
            Homology::Vector { dim } => *dim,
        }
    }
}

impl fmt::Display for Homology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Homology::Group { group } => write!(f, "{group}"),
            Homology::Vector { dim } => write!(f, "dim {dim}"),
        }
    }
}

/// Matrices the cochain-complex builders can be generic over.
pub trait ExactMatrix: Clone + fmt::Debug + PartialEq + Send + Sync + 'static {
    fn ring(&self) -> Ring;
    fn zeros_like(ring: Ring, rows: usize, cols: usize) -> Self;
    fn identity_like(ring: Ring, n: usize) -> Self;
    fn nrows(&self) -> usize;
    fn ncols(&self) -> usize;
    fn product(&self, other: &Self) -> Self;
    fn transposed(&self) -> Self;
    fn is_zero_matrix(&self) -> bool;
    fn add_block_at(&mut self, row: usize, col: usize, block: &Self, sign: i64);
    fn add_identity_at(&mut self, row: usize, col: usize, n: usize, sign: i64);
    fn matrix_rank(&self) -> usize;
    /// `ker(d_out) / im(d_in)`; requires `d_out * d_in = 0`.
    fn homology(d_in: &Self, d_out: &Self) -> Result<Homology>;
    fn to_matrix(&self) -> Matrix;
}

impl ExactMatrix for FpMatrix {
    fn ring(&self) -> Ring {
        Ring::PrimeField(self.prime())
    }

    fn zeros_like(ring: Ring, rows: usize, cols: usize) -> Self {
        FpMatrix::zeros(expect_prime(ring), rows, cols)
    }

    fn identity_like(ring: Ring, n: usize) -> Self {
        FpMatrix::identity(expect_prime(ring), n)
    }

    fn nrows(&self) -> usize {
        self.rows()
    }

    fn ncols(&self) -> usize {
        self.cols()
    }

    fn product(&self, other: &Self) -> Self {
        self.mul(other)
    }

    fn transposed(&self) -> Self {
        self.transpose()
    }

    fn is_zero_matrix(&self) -> bool {
        self.is_zero()
    }

    fn add_block_at(&mut self, row: usize, col: usize, block: &Self, sign: i64) {
        self.add_block(row, col, block, sign)
    }

    fn add_identity_at(&mut self, row: usize, col: usize, n: usize, sign: i64) {
        self.add_identity_block(row, col, n, sign)
    }

    fn matrix_rank(&self) -> usize {
        self.rank()
    }

    fn homology(d_in: &Self, d_out: &Self) -> Result<Homology> {
        check_composable(d_in.rows(), d_out.cols())?;
        if !d_out.mul(d_in).is_zero() {
            return Err(Error::CompositionNonzero);
        }
        let n = d_out.cols();
        Ok(Homology::Vector {
            dim: n - d_out.rank() - d_in.rank(),
        })
    }

    fn to_matrix(&self) -> Matrix {
        Matrix::Fp(self.clone())
    }
}

impl ExactMatrix for IntMatrix {
    fn ring(&self) -> Ring {
        Ring::Integers
    }

    fn zeros_like(_ring: Ring, rows: usize, cols: usize) -> Self {
        IntMatrix::zeros(rows, cols)
    }

    fn identity_like(_ring: Ring, n: usize) -> Self {
        IntMatrix::identity(n)
    }

    fn nrows(&self) -> usize {
        self.rows()
    }

    fn ncols(&self) -> usize {
        self.cols()
    }

    fn product(&self, other: &Self) -> Self {
        self.mul(other)
    }

    fn transposed(&self) -> Self {
        self.transpose()
    }

    fn is_zero_matrix(&self) -> bool {
        self.is_zero()
    }

    fn add_block_at(&mut self, row: usize, col: usize, block: &Self, sign: i64) {
        self.add_block(row, col, block, sign)
    }

    fn add_identity_at(&mut self, row: usize, col: usize, n: usize, sign: i64) {
        self.add_identity_block(row, col, n, sign)
    }

    fn matrix_rank(&self) -> usize {
        self.rank()
    }

    fn homology(d_in: &Self, d_out: &Self) -> Result<Homology> {
        check_composable(d_in.rows(), d_out.cols())?;
        if !d_out.mul(d_in).is_zero() {
            return Err(Error::CompositionNonzero);
        }
        // ker(d_out) is saturated in Z^n, so the torsion of Z^n / im(d_in)
        // already lies in ker(d_out) / im(d_in).
        let n = d_out.cols();
        let incoming = FgAbelianGroup::cokernel(d_in);
        let image_rank = n - incoming.rank;
        Ok(Homology::Group {
            group: FgAbelianGroup {
                rank: n - d_out.rank() - image_rank,
                torsion: incoming.torsion,
            },
        })
    }

    fn to_matrix(&self) -> Matrix {
        Matrix::Int(self.clone())
    }
}

fn expect_prime(ring: Ring) -> u32 {
    match ring {
        Ring::PrimeField(p) => p,
        Ring::Integers => panic!("F_p matrix requested over Z"),
    }
}

fn check_composable(d_in_rows: usize, d_out_cols: usize) -> Result<()> {
    if d_in_rows != d_out_cols {
        return Err(Error::DimensionMismatch(format!(
            "incoming differential lands in dimension {d_in_rows}, outgoing starts in {d_out_cols}"
        )));
    }
    Ok(())
}

/// `ker(d_out) / im(d_in)` over either ring.
pub fn homology_at<M: ExactMatrix>(d_in: &M, d_out: &M) -> Result<Homology> {
    M::homology(d_in, d_out)
}

/// Field-case homology with a chosen basis section.
pub fn fp_homology_at(d_in: &FpMatrix, d_out: &FpMatrix) -> Result<Subquotient> {
    check_composable(d_in.rows(), d_out.cols())?;
    if !d_out.mul(d_in).is_zero() {
        return Err(Error::CompositionNonzero);
    }
    let cycles = Subspace::column_span(&d_out.kernel());
    let boundaries = Subspace::column_span(d_in);
    Subquotient::new(cycles, boundaries)
}

/// A ring-tagged matrix, as carried inside reports.
#[derive(Clone, Debug, PartialEq)]
pub enum Matrix {
    Fp(FpMatrix),
    Int(IntMatrix),
}

impl Matrix {
    pub fn ring(&self) -> Ring {
        match self {
            Matrix::Fp(m) => m.ring(),
            Matrix::Int(_) => Ring::Integers,
        }
    }

    pub fn rows(&self) -> usize {
        match self {
            Matrix::Fp(m) => m.rows(),
            Matrix::Int(m) => m.rows(),
        }
    }

    pub fn cols(&self) -> usize {
        match self {
            Matrix::Fp(m) => m.cols(),
            Matrix::Int(m) => m.cols(),
        }
    }

    pub fn rank(&self) -> usize {
        match self {
            Matrix::Fp(m) => m.rank(),
            Matrix::Int(m) => m.rank(),
        }
    }

    pub fn kernel_dim(&self) -> usize {
        self.cols() - self.rank()
    }
}

impl Serialize for Matrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Matrix", 4)?;
        st.serialize_field("ring", &self.ring().to_string())?;
        st.serialize_field("rows", &self.rows())?;
        st.serialize_field("cols", &self.cols())?;
        match self {
            Matrix::Fp(m) => st.serialize_field("entries", &m.to_rows())?,
            Matrix::Int(m) => match m.to_i64_rows() {
                Some(rows) => st.serialize_field("entries", &rows)?,
                None => st.serialize_field("entries", &m.to_string_rows())?,
            },
        }
        st.end()
    }
}
