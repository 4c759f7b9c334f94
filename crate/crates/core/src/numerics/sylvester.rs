//! Sylvester equations `A·X − X·B = C`.

use crate::error::{Error, Result};
use crate::numerics::matrix::{DenseMatrix, C64};
use crate::numerics::schur::schur;

/// Solves `T₁·X − X·T₂ = C` for upper-triangular `T₁` (m×m) and `T₂` (n×n).
///
/// Fails with [`Error::SpectraOverlap`] if a diagonal pair `T₁[i,i]`, `T₂[j,j]`
/// is closer than `sep_tol`.
pub fn solve_triangular_sylvester(
    t1: &DenseMatrix,
    t2: &DenseMatrix,
    c: &DenseMatrix,
    sep_tol: f64,
) -> Result<DenseMatrix> {
    let m = t1.rows();
    let n = t2.rows();
    if !t1.is_square() || !t2.is_square() || c.shape() != (m, n) {
        return Err(Error::Dimension(format!(
            "Sylvester shapes {}x{}, {}x{}, {}x{}",
            t1.rows(),
            t1.cols(),
            t2.rows(),
            t2.cols(),
            c.rows(),
            c.cols()
        )));
    }
    let mut x = DenseMatrix::zeros(m, n);
    let mut rhs = vec![C64::new(0.0, 0.0); m];
    for j in 0..n {
        let shift = t2[(j, j)];
        for (r, v) in rhs.iter_mut().enumerate() {
            let mut s = c[(r, j)];
            for i in 0..j {
                s += x[(r, i)] * t2[(i, j)];
            }
            *v = s;
        }
        for r in (0..m).rev() {
            let mut s = rhs[r];
            for k in r + 1..m {
                s -= t1[(r, k)] * x[(k, j)];
            }
            let d = t1[(r, r)] - shift;
            if d.norm() <= sep_tol {
                return Err(Error::SpectraOverlap { separation: d.norm() });
            }
            x[(r, j)] = s / d;
        }
    }
    Ok(x)
}

/// Solves `A·X − X·B = C` by Bartels–Stewart.
pub fn solve_sylvester(a: &DenseMatrix, b: &DenseMatrix, c: &DenseMatrix) -> Result<DenseMatrix> {
    let sa = schur(a)?;
    let sb = schur(b)?;
    let scale = a.max_abs().max(b.max_abs()).max(f64::MIN_POSITIVE);
    let cc = sa.q.adjoint().matmul(c).matmul(&sb.q);
    let y = solve_triangular_sylvester(&sa.t, &sb.t, &cc, 1e3 * f64::EPSILON * scale)?;
    Ok(sa.q.matmul(&y).matmul(&sb.q.adjoint()))
}
