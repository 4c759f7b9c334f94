//! Hermitian eigenproblems and the norms built on them.

use crate::error::{Error, Result};
use crate::numerics::matrix::{DenseMatrix, C64};

const EPS: f64 = f64::EPSILON;

fn check_hermitian(a: &DenseMatrix, tol: f64) -> Result<()> {
    if !a.is_square() {
        return Err(Error::Dimension(format!(
            "Hermitian eigenproblem needs a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let dev = a.hermiticity_defect();
    if dev > tol * a.max_abs().max(1.0) {
        return Err(Error::NotHermitian { deviation: dev });
    }
    Ok(())
}

/// Eigenvalues of a Hermitian matrix in ascending order.
///
/// Householder tridiagonalization followed by implicit QL.
pub fn eigvalsh(a: &DenseMatrix) -> Result<Vec<f64>> {
    check_hermitian(a, 1e-10)?;
    let n = a.rows();
    if n == 0 {
        return Ok(Vec::new());
    }
    let (mut d, mut e) = tridiagonalize(a);
    tql(&mut d, &mut e)?;
    d.sort_by(f64::total_cmp);
    Ok(d)
}

/// Returns the diagonal and the moduli of the off-diagonal (`e[i]` couples
/// `i` and `i + 1`; the last entry is zero).
fn tridiagonalize(a: &DenseMatrix) -> (Vec<f64>, Vec<f64>) {
    let n = a.rows();
    // Work on a row-major copy, only the trailing block is ever touched.
    let mut b = a.as_slice().to_vec();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    let mut v = vec![C64::new(0.0, 0.0); n];
    let mut p = vec![C64::new(0.0, 0.0); n];

    for k in 0..n.saturating_sub(1) {
        d[k] = b[k * n + k].re;
        let len = n - k - 1;
        let x = |i: usize| b[(k + 1 + i) * n + k];
        let xnorm = (0..len).map(|i| x(i).norm_sqr()).sum::<f64>().sqrt();
        if len == 1 || xnorm == 0.0 {
            e[k] = xnorm;
            continue;
        }
        let x0 = x(0);
        let phase = if x0.norm() > 0.0 { x0 / x0.norm() } else { C64::new(1.0, 0.0) };
        let alpha = -phase * xnorm;
        for (i, vi) in v[..len].iter_mut().enumerate() {
            *vi = x(i);
        }
        v[0] -= alpha;
        let vnorm = v[..len].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        e[k] = xnorm;
        if vnorm == 0.0 {
            continue;
        }
        for vi in v[..len].iter_mut() {
            *vi /= vnorm;
        }
        let off = k + 1;
        // p = B·v on the trailing block
        for i in 0..len {
            let row = &b[(off + i) * n + off..(off + i) * n + n];
            p[i] = row.iter().zip(&v[..len]).map(|(x, y)| x * y).sum();
        }
        let kk: C64 = v[..len].iter().zip(&p[..len]).map(|(x, y)| x.conj() * y).sum();
        for i in 0..len {
            p[i] -= kk * v[i];
        }
        // B ← B − 2·v·w† − 2·w·v†
        for i in 0..len {
            let (vi, wi) = (v[i] * 2.0, p[i] * 2.0);
            let row = &mut b[(off + i) * n + off..(off + i) * n + n];
            for (j, bij) in row.iter_mut().enumerate() {
                *bij -= vi * p[j].conj() + wi * v[j].conj();
            }
        }
    }
    d[n - 1] = b[n * n - 1].re;
    (d, e)
}

/// Implicit QL on a real symmetric tridiagonal matrix; eigenvalues land in `d`.
fn tql(d: &mut [f64], e: &mut [f64]) -> Result<()> {
    let n = d.len();
    // Deflate relative to the whole matrix as well, so blocks of negligible
    // entries next to a much larger block split off.
    let anorm = (0..n).map(|i| d[i].abs() + e[i].abs()).fold(0.0, f64::max);
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= EPS * dd.max(anorm) {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::NoConvergence { iterations: iter });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut early = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    early = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if early {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// Eigen-decomposition of a Hermitian matrix by cyclic Jacobi rotations.
///
/// Returns ascending eigenvalues and the unitary whose columns are the
/// matching eigenvectors. Meant for small matrices.
pub fn eigh(a: &DenseMatrix) -> Result<(Vec<f64>, DenseMatrix)> {
    check_hermitian(a, 1e-10)?;
    let n = a.rows();
    let mut m = (a + &a.adjoint()).scale_real(0.5);
    let mut v = DenseMatrix::identity(n);
    let scale = m.frobenius_norm();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|r| (0..n).filter(move |&c| c != r).map(move |c| (r, c)))
            .map(|(r, c)| m[(r, c)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= EPS * scale || scale == 0.0 {
            let mut pairs: Vec<(f64, usize)> = (0..n).map(|i| (m[(i, i)].re, i)).collect();
            pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
            let vals = pairs.iter().map(|p| p.0).collect();
            let vecs = DenseMatrix::from_fn(n, n, |r, c| v[(r, pairs[c].1)]);
            return Ok((vals, vecs));
        }
        for p in 0..n {
            for q in p + 1..n {
                let g = m[(p, q)];
                let ag = g.norm();
                if ag <= EPS * EPS * scale {
                    continue;
                }
                let ph = g / ag;
                let theta = (m[(q, q)].re - m[(p, p)].re) / (2.0 * ag);
                let t = theta.signum() / (theta.abs() + theta.hypot(1.0));
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / t.hypot(1.0);
                let s = t * c;
                // U = diag(1, conj(ph))·R with R = [[c, s], [−s, c]]
                let u = [
                    [C64::new(c, 0.0), C64::new(s, 0.0)],
                    [-ph.conj() * s, ph.conj() * c],
                ];
                for mm in [&mut m, &mut v] {
                    for r in 0..n {
                        let (x, y) = (mm[(r, p)], mm[(r, q)]);
                        mm[(r, p)] = x * u[0][0] + y * u[1][0];
                        mm[(r, q)] = x * u[0][1] + y * u[1][1];
                    }
                }
                for col in 0..n {
                    let (x, y) = (m[(p, col)], m[(q, col)]);
                    m[(p, col)] = u[0][0].conj() * x + u[1][0].conj() * y;
                    m[(q, col)] = u[0][1].conj() * x + u[1][1].conj() * y;
                }
                m[(p, q)] = C64::new(0.0, 0.0);
                m[(q, p)] = C64::new(0.0, 0.0);
            }
        }
    }
    Err(Error::NoConvergence { iterations: 100 })
}

/// Largest singular value.
pub fn spectral_norm(a: &DenseMatrix) -> Result<f64> {
    if a.rows() == 0 || a.cols() == 0 {
        return Ok(0.0);
    }
    let ah = a.adjoint();
    let gram = if a.rows() >= a.cols() { ah.matmul(a) } else { a.matmul(&ah) };
    // Exact Hermitian symmetry avoids rejection on rounding noise.
    let gram = (&gram + &gram.adjoint()).scale_real(0.5);
    let ev = eigvalsh(&gram)?;
    Ok(ev.last().copied().unwrap_or(0.0).max(0.0).sqrt())
}

/// Sum of absolute eigenvalues of a Hermitian matrix.
pub fn trace_norm_hermitian(a: &DenseMatrix) -> Result<f64> {
    Ok(eigvalsh(a)?.iter().map(|x| x.abs()).sum())
}

/// Principal square root of a positive semidefinite matrix. Negative
/// eigenvalues from rounding are clamped to zero.
pub fn sqrt_psd(a: &DenseMatrix) -> Result<DenseMatrix> {
    let (vals, vecs) = eigh(a)?;
    let floor = -1e-8 * vals.iter().fold(1.0f64, |m, x| m.max(x.abs()));
    if let Some(&bad) = vals.iter().find(|&&x| x < floor) {
        return Err(Error::InvalidArgument(format!(
            "matrix is not positive semidefinite (eigenvalue {bad:.3e})"
        )));
    }
    let root: Vec<C64> = vals.iter().map(|&x| C64::new(x.max(0.0).sqrt(), 0.0)).collect();
    Ok(vecs.matmul(&DenseMatrix::from_diagonal(&root)).matmul(&vecs.adjoint()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::testing::{random_hermitian, random_matrix};
    use proptest::prelude::*;

    /// Power iteration on `A†A`, an independent estimate of the 2-norm.
    fn power_norm(a: &DenseMatrix) -> f64 {
        let g = a.adjoint().matmul(a);
        let mut x = vec![C64::new(1.0, 0.3); a.cols()];
        let mut lam = 0.0;
        for _ in 0..5000 {
            let y = g.matvec(&x);
            let nrm = y.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if nrm == 0.0 {
                return 0.0;
            }
            lam = nrm / x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            x = y.into_iter().map(|z| z / nrm).collect();
        }
        lam.sqrt()
    }

    #[test]
    fn pauli_y_eigenvalues() {
        let sy = DenseMatrix::from_vec(
            2,
            2,
            vec![C64::new(0.0, 0.0), C64::new(0.0, -1.0), C64::new(0.0, 1.0), C64::new(0.0, 0.0)],
        )
        .unwrap();
        let ev = eigvalsh(&sy).unwrap();
        assert!((ev[0] + 1.0).abs() < 1e-15 && (ev[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn not_hermitian_rejected() {
        let a = DenseMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(eigvalsh(&a), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn eigvalsh_agrees_with_jacobi() {
        for seed in 0..6 {
            let a = random_hermitian(9, seed);
            let ql = eigvalsh(&a).unwrap();
            let (jac, _) = eigh(&a).unwrap();
            for (x, y) in ql.iter().zip(&jac) {
                assert!((x - y).abs() < 1e-12, "{x} vs {y}");
            }
        }
    }

    #[test]
    fn eigh_reconstructs() {
        let a = random_hermitian(6, 11);
        let (vals, vecs) = eigh(&a).unwrap();
        let d: Vec<C64> = vals.iter().map(|&x| C64::new(x, 0.0)).collect();
        let rec = vecs.matmul(&DenseMatrix::from_diagonal(&d)).matmul(&vecs.adjoint());
        assert!(rec.max_abs_diff(&a) < 1e-13);
        assert!(vecs.adjoint().matmul(&vecs).max_abs_diff(&DenseMatrix::identity(6)) < 1e-13);
    }

    #[test]
    fn spectral_norm_of_diagonal() {
        let a = DenseMatrix::from_diagonal(&[C64::new(0.0, -3.0), C64::new(2.0, 0.0)]);
        assert!((spectral_norm(&a).unwrap() - 3.0).abs() < 1e-14);
        assert_eq!(spectral_norm(&DenseMatrix::zeros(3, 3)).unwrap(), 0.0);
    }

    #[test]
    fn spectral_norm_matches_power_iteration() {
        for (seed, (r, c)) in [(4, 4), (5, 3), (2, 7), (12, 12)].into_iter().enumerate() {
            let a = random_matrix(r, c, seed as u64 + 40);
            let s = spectral_norm(&a).unwrap();
            let p = power_norm(&a);
            assert!((s - p).abs() < 1e-10 * p, "{s} vs {p}");
        }
    }

    #[test]
    fn trace_norm_of_pure_state_difference() {
        // |0⟩⟨0| − |1⟩⟨1| has trace norm 2.
        let a = DenseMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, -1.0]).unwrap();
        assert!((trace_norm_hermitian(&a).unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn sqrt_psd_squares_back() {
        let b = random_matrix(4, 4, 9);
        let a = b.matmul(&b.adjoint());
        let r = sqrt_psd(&a).unwrap();
        assert!(r.matmul(&r).max_abs_diff(&a) < 1e-12);
        assert!(r.is_hermitian(1e-13));
    }

    #[test]
    fn sqrt_psd_rejects_indefinite() {
        let a = DenseMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, -1.0]).unwrap();
        assert!(sqrt_psd(&a).is_err());
    }

    proptest! {
        #[test]
        fn eigenvalue_sum_is_trace(seed in 0u64..10_000, n in 1usize..16) {
            let a = random_hermitian(n, seed);
            let ev = eigvalsh(&a).unwrap();
            let s: f64 = ev.iter().sum();
            prop_assert!((s - a.trace().re).abs() < 1e-11);
            prop_assert!(ev.windows(2).all(|w| w[0] <= w[1]));
        }

        #[test]
        fn spectral_norm_bounds(seed in 0u64..10_000, r in 1usize..8, c in 1usize..8) {
            let a = random_matrix(r, c, seed);
            let s = spectral_norm(&a).unwrap();
            let f = a.frobenius_norm();
            prop_assert!(s <= f * (1.0 + 1e-12));
            prop_assert!(s * (r.min(c) as f64).sqrt() >= f * (1.0 - 1e-12));
            prop_assert!(s >= a.max_abs() * (1.0 - 1e-12));
        }
    }
}
