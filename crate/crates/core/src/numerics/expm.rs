//! Matrix exponential by scaling and squaring with Padé approximants.

use crate::error::{Error, Result};
use crate::numerics::lu;
use crate::numerics::matrix::{gemm_into, DenseMatrix, C64};

const THETA: [f64; 5] = [
    1.495585217958292e-2,
    2.53939833006323e-1,
    9.504178996162932e-1,
    2.097847961257068e0,
    5.371920351148152e0,
];

const B3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const B5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const B7: [f64; 8] = [17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0];
const B9: [f64; 10] = [
    17643225600.0,
    8821612800.0,
    2075673600.0,
    302702400.0,
    30270240.0,
    2162160.0,
    110880.0,
    3960.0,
    90.0,
    1.0,
];
const B13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

/// `e^A` for a square matrix.
pub fn expm(a: &DenseMatrix) -> Result<DenseMatrix> {
    if !a.is_square() {
        return Err(Error::Dimension(format!(
            "expm needs a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    if !a.is_finite() {
        return Err(Error::InvalidArgument("expm argument has non-finite entries".into()));
    }
    let n = a.rows();
    if n == 0 {
        return Ok(a.clone());
    }
    let norm = a.norm_one();
    if norm == 0.0 {
        return Ok(DenseMatrix::identity(n));
    }

    for (m, (&theta, coeffs)) in THETA[..4]
        .iter()
        .zip([&B3[..], &B5[..], &B7[..], &B9[..]])
        .enumerate()
    {
        if norm <= theta {
            log::trace!("expm: Padé order {} for norm {norm:.3e}", 2 * m + 3);
            return pade_low(a, coeffs);
        }
    }

    let s = ((norm / THETA[4]).log2().ceil()).max(0.0) as i32;
    let scaled = a.scale_real(0.5f64.powi(s));
    let mut r = pade13(&scaled)?;
    for _ in 0..s {
        r = r.matmul(&r);
    }
    Ok(r)
}

fn pade_low(a: &DenseMatrix, b: &[f64]) -> Result<DenseMatrix> {
    let n = a.rows();
    let id = DenseMatrix::identity(n);
    let a2 = a.matmul(a);
    // Even powers A^0, A^2, A^4, ...
    let mut pows = vec![id, a2.clone()];
    while pows.len() < b.len() / 2 {
        let next = pows.last().expect("nonempty").matmul(&a2);
        pows.push(next);
    }
    let mut u_inner = DenseMatrix::zeros(n, n);
    let mut v = DenseMatrix::zeros(n, n);
    for (k, p) in pows.iter().enumerate() {
        axpy(&mut u_inner, b[2 * k + 1], p);
        axpy(&mut v, b[2 * k], p);
    }
    let u = a.matmul(&u_inner);
    finish(&u, &v)
}

fn pade13(a: &DenseMatrix) -> Result<DenseMatrix> {
    let n = a.rows();
    let b = &B13;
    let id = DenseMatrix::identity(n);
    let a2 = a.matmul(a);
    let a4 = a2.matmul(&a2);
    let a6 = a4.matmul(&a2);

    let mut w1 = DenseMatrix::zeros(n, n);
    axpy(&mut w1, b[13], &a6);
    axpy(&mut w1, b[11], &a4);
    axpy(&mut w1, b[9], &a2);
    let mut w2 = DenseMatrix::zeros(n, n);
    axpy(&mut w2, b[7], &a6);
    axpy(&mut w2, b[5], &a4);
    axpy(&mut w2, b[3], &a2);
    axpy(&mut w2, b[1], &id);
    gemm_into(C64::new(1.0, 0.0), &a6, &w1, C64::new(1.0, 0.0), &mut w2);
    let u = a.matmul(&w2);

    let mut z1 = DenseMatrix::zeros(n, n);
    axpy(&mut z1, b[12], &a6);
    axpy(&mut z1, b[10], &a4);
    axpy(&mut z1, b[8], &a2);
    let mut v = DenseMatrix::zeros(n, n);
    axpy(&mut v, b[6], &a6);
    axpy(&mut v, b[4], &a4);
    axpy(&mut v, b[2], &a2);
    axpy(&mut v, b[0], &id);
    gemm_into(C64::new(1.0, 0.0), &a6, &z1, C64::new(1.0, 0.0), &mut v);
    finish(&u, &v)
}

/// `(V − U)⁻¹ (V + U)`.
fn finish(u: &DenseMatrix, v: &DenseMatrix) -> Result<DenseMatrix> {
    lu::solve(&(v - u), &(v + u))
}

fn axpy(y: &mut DenseMatrix, alpha: f64, x: &DenseMatrix) {
    for (yv, xv) in y.as_mut_slice().iter_mut().zip(x.as_slice()) {
        *yv += xv * alpha;
    }
}
