//! LU factorization with partial pivoting.

use crate::error::{Error, Result};
use crate::numerics::matrix::{DenseMatrix, C64};

/// `P·A = L·U`, packed in one matrix with unit-diagonal `L` below.
#[derive(Clone, Debug)]
pub struct Lu {
    n: usize,
    lu: Vec<C64>,
    perm: Vec<usize>,
}

impl Lu {
    /// Factorizes a square matrix. Pivots below `1e-300` or below
    /// `n·ε·max|A|` are treated as exact zeros.
    pub fn factor(a: &DenseMatrix) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::Dimension(format!(
                "LU needs a square matrix, got {}x{}",
                a.rows(),
                a.cols()
            )));
        }
        let n = a.rows();
        let mut lu = a.as_slice().to_vec();
        let mut perm: Vec<usize> = (0..n).collect();
        let floor = (a.max_abs() * n as f64 * f64::EPSILON).max(1e-300);

        for k in 0..n {
            let (p, pmax) = (k..n)
                .map(|r| (r, lu[r * n + k].norm()))
                .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if pmax <= floor {
                return Err(Error::Singular);
            }
            if p != k {
                for c in 0..n {
                    lu.swap(k * n + c, p * n + c);
                }
                perm.swap(k, p);
            }
            let pivot = lu[k * n + k];
            for r in k + 1..n {
                let f = lu[r * n + k] / pivot;
                lu[r * n + k] = f;
                if f.norm_sqr() == 0.0 {
                    continue;
                }
                let (upper, lower) = lu.split_at_mut(r * n);
                let krow = &upper[k * n + k + 1..k * n + n];
                for (x, &u) in lower[k + 1..n].iter_mut().zip(krow) {
                    *x -= f * u;
                }
            }
        }
        Ok(Self { n, lu, perm })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Solves `A·x = b` for one right-hand side.
    pub fn solve_vec(&self, b: &[C64]) -> Result<Vec<C64>> {
        let n = self.n;
        if b.len() != n {
            return Err(Error::Dimension(format!("rhs length {} for {n}x{n} system", b.len())));
        }
        let mut x: Vec<C64> = self.perm.iter().map(|&p| b[p]).collect();
        for r in 0..n {
            let mut s = x[r];
            for (l, xc) in self.lu[r * n..r * n + r].iter().zip(&x[..r]) {
                s -= l * xc;
            }
            x[r] = s;
        }
        for r in (0..n).rev() {
            let mut s = x[r];
            for (u, xc) in self.lu[r * n + r + 1..(r + 1) * n].iter().zip(&x[r + 1..]) {
                s -= u * xc;
            }
            x[r] = s / self.lu[r * n + r];
        }
        Ok(x)
    }

    /// Solves `A·X = B`.
    pub fn solve(&self, b: &DenseMatrix) -> Result<DenseMatrix> {
        let n = self.n;
        if b.rows() != n {
            return Err(Error::Dimension(format!(
                "rhs has {} rows for {n}x{n} system",
                b.rows()
            )));
        }
        let m = b.cols();
        let bs = b.as_slice();
        let mut x = vec![C64::new(0.0, 0.0); n * m];
        for (r, &p) in self.perm.iter().enumerate() {
            x[r * m..(r + 1) * m].copy_from_slice(&bs[p * m..(p + 1) * m]);
        }
        // Row-oriented substitution keeps the inner loops contiguous.
        for r in 0..n {
            let (done, rest) = x.split_at_mut(r * m);
            let row = &mut rest[..m];
            for c in 0..r {
                let f = self.lu[r * n + c];
                if f.norm_sqr() == 0.0 {
                    continue;
                }
                for (xv, &dv) in row.iter_mut().zip(&done[c * m..(c + 1) * m]) {
                    *xv -= f * dv;
                }
            }
        }
        for r in (0..n).rev() {
            let (head, tail) = x.split_at_mut((r + 1) * m);
            let row = &mut head[r * m..];
            for c in r + 1..n {
                let f = self.lu[r * n + c];
                if f.norm_sqr() == 0.0 {
                    continue;
                }
                let off = (c - r - 1) * m;
                for (xv, &dv) in row.iter_mut().zip(&tail[off..off + m]) {
                    *xv -= f * dv;
                }
            }
            let inv = C64::new(1.0, 0.0) / self.lu[r * n + r];
            for xv in row.iter_mut() {
                *xv *= inv;
            }
        }
        DenseMatrix::from_vec(n, m, x)
    }

    pub fn inverse(&self) -> Result<DenseMatrix> {
        self.solve(&DenseMatrix::identity(self.n))
    }

    pub fn determinant(&self) -> C64 {
        let n = self.n;
        let mut det = C64::new(1.0, 0.0);
        for i in 0..n {
            det *= self.lu[i * n + i];
        }
        // Sign of the permutation from its cycle structure.
        let mut seen = vec![false; n];
        let mut odd = false;
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut len = 0;
            let mut j = s;
            while !seen[j] {
                seen[j] = true;
                j = self.perm[j];
                len += 1;
            }
            if len % 2 == 0 {
                odd = !odd;
            }
        }
        if odd {
            -det
        } else {
            det
        }
    }
}

/// Solves `A·X = B`.
pub fn solve(a: &DenseMatrix, b: &DenseMatrix) -> Result<DenseMatrix> {
    Lu::factor(a)?.solve(b)
}

pub fn inverse(a: &DenseMatrix) -> Result<DenseMatrix> {
    Lu::factor(a)?.inverse()
}
