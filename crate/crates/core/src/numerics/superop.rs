//! Superoperators acting on column-stacked operators.
//!
//! Vectorization stacks columns: entry `(r, c)` of a `D×D` operator lands at
//! index `r + D·c`. Under this convention `X ↦ A·X·B` is the matrix
//! `Bᵀ ⊗ A`. Every superoperator in the crate uses it.

use std::ops::{Add, Sub};

use crate::error::{Error, Result};
use crate::numerics::matrix::{DenseMatrix, C64};

/// Linear map on `D×D` operators, stored as a `D²×D²` matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct SuperOperator {
    dim: usize,
    matrix: DenseMatrix,
}

impl SuperOperator {
    pub fn new(dim: usize, matrix: DenseMatrix) -> Result<Self> {
        let n = dim * dim;
        if matrix.shape() != (n, n) {
            return Err(Error::Dimension(format!(
                "superoperator on dimension {dim} needs a {n}x{n} matrix, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        Ok(Self { dim, matrix })
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            matrix: DenseMatrix::zeros(dim * dim, dim * dim),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            dim,
            matrix: DenseMatrix::identity(dim * dim),
        }
    }

    /// Hilbert-space dimension `D`.
    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn matrix(&self) -> &DenseMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> DenseMatrix {
        self.matrix
    }

    /// Applies the map to an operator.
    pub fn apply(&self, x: &DenseMatrix) -> Result<DenseMatrix> {
        let v = vectorize(x)?;
        if v.len() != self.matrix.cols() {
            return Err(Error::Dimension(format!(
                "operator of dimension {} given to superoperator on dimension {}",
                x.rows(),
                self.dim
            )));
        }
        devectorize(&self.matrix.matvec(&v), self.dim)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &SuperOperator) -> Result<SuperOperator> {
        self.check_same(other)?;
        Ok(Self {
            dim: self.dim,
            matrix: self.matrix.matmul(&other.matrix),
        })
    }

    pub fn scale(&self, s: f64) -> SuperOperator {
        Self {
            dim: self.dim,
            matrix: self.matrix.scale_real(s),
        }
    }

    pub fn try_add(&self, other: &SuperOperator) -> Result<SuperOperator> {
        self.check_same(other)?;
        Ok(Self {
            dim: self.dim,
            matrix: &self.matrix + &other.matrix,
        })
    }

    pub fn try_sub(&self, other: &SuperOperator) -> Result<SuperOperator> {
        self.check_same(other)?;
        Ok(Self {
            dim: self.dim,
            matrix: &self.matrix - &other.matrix,
        })
    }

    /// Row functional `X ↦ Tr X` composed with the map, minus the trace
    /// itself. Zero for trace-preserving maps.
    pub fn trace_defect(&self) -> Vec<C64> {
        let d = self.dim;
        let n = d * d;
        let mut out = vec![C64::new(0.0, 0.0); n];
        for i in 0..d {
            let row = self.matrix.row(i + d * i);
            for (o, v) in out.iter_mut().zip(row) {
                *o += v;
            }
        }
        for i in 0..d {
            out[i + d * i] -= 1.0;
        }
        out
    }

    /// Row functional `X ↦ Tr(map(X))`. Zero for trace-annihilating maps.
    pub fn trace_functional(&self) -> Vec<C64> {
        let d = self.dim;
        let n = d * d;
        let mut out = vec![C64::new(0.0, 0.0); n];
        for i in 0..d {
            let row = self.matrix.row(i + d * i);
            for (o, v) in out.iter_mut().zip(row) {
                *o += v;
            }
        }
        out
    }

    fn check_same(&self, other: &SuperOperator) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::Dimension(format!(
                "superoperators on dimensions {} and {}",
                self.dim, other.dim
            )));
        }
        Ok(())
    }
}

impl Add for &SuperOperator {
    type Output = SuperOperator;
    fn add(self, rhs: &SuperOperator) -> SuperOperator {
        self.try_add(rhs).expect("superoperator dimension mismatch")
    }
}

impl Sub for &SuperOperator {
    type Output = SuperOperator;
    fn sub(self, rhs: &SuperOperator) -> SuperOperator {
        self.try_sub(rhs).expect("superoperator dimension mismatch")
    }
}

/// Column-stacks a square operator.
pub fn vectorize(x: &DenseMatrix) -> Result<Vec<C64>> {
    if !x.is_square() {
        return Err(Error::Dimension(format!(
            "vectorize needs a square operator, got {}x{}",
            x.rows(),
            x.cols()
        )));
    }
    let d = x.rows();
    let mut v = Vec::with_capacity(d * d);
    for c in 0..d {
        for r in 0..d {
            v.push(x[(r, c)]);
        }
    }
    Ok(v)
}

/// Inverse of [`vectorize`].
pub fn devectorize(v: &[C64], dim: usize) -> Result<DenseMatrix> {
    if v.len() != dim * dim {
        return Err(Error::Dimension(format!(
            "vector of length {} cannot be a {dim}x{dim} operator",
            v.len()
        )));
    }
    Ok(DenseMatrix::from_fn(dim, dim, |r, c| v[r + dim * c]))
}

/// Superoperator of `X ↦ a·X·b`.
pub fn sandwich_super(a: &DenseMatrix, b: &DenseMatrix) -> Result<SuperOperator> {
    if !a.is_square() || !b.is_square() || a.rows() != b.rows() {
        return Err(Error::Dimension(format!(
            "sandwich needs square operators of equal size, got {}x{} and {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    SuperOperator::new(a.rows(), b.transpose().kron(a))
}

/// `X ↦ a·X`.
pub fn left_super(a: &DenseMatrix) -> Result<SuperOperator> {
    sandwich_super(a, &DenseMatrix::identity(a.rows()))
}

/// `X ↦ X·b`.
pub fn right_super(b: &DenseMatrix) -> Result<SuperOperator> {
    sandwich_super(&DenseMatrix::identity(b.rows()), b)
}
