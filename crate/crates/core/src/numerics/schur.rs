//! Complex Schur decomposition `A = Q·T·Q†` with eigenvalue reordering.
//!
//! Hessenberg reduction by Householder reflectors, then single-shift QR with
//! Wilkinson shifts and Givens rotations. Rotations have the form
//! `G = [[c, s], [−s̄, c]]` with real `c`; rows are updated with `G` and
//! columns (and `Q`) with `G†`.

use crate::error::{Error, Result};
use crate::numerics::matrix::{DenseMatrix, C64};

const EPS: f64 = f64::EPSILON;
const MAX_SWEEPS_PER_EIGENVALUE: usize = 60;

/// Unitary `q` and upper-triangular `t` with `a = q·t·q†`.
#[derive(Clone, Debug)]
pub struct Schur {
    pub q: DenseMatrix,
    pub t: DenseMatrix,
}

impl Schur {
    pub fn eigenvalues(&self) -> Vec<C64> {
        self.t.diagonal()
    }

    /// Moves every eigenvalue satisfying `pred` to the leading block,
    /// keeping relative order otherwise. Returns the size of that block.
    pub fn reorder(&mut self, mut pred: impl FnMut(C64) -> bool) -> usize {
        let n = self.t.rows();
        let mut front = 0;
        for j in 0..n {
            if pred(self.t[(j, j)]) {
                let mut k = j;
                while k > front {
                    swap_adjacent(&mut self.t, &mut self.q, k - 1);
                    k -= 1;
                }
                front += 1;
            }
        }
        front
    }

    /// Reassembles `q·t·q†`.
    pub fn reconstruct(&self) -> DenseMatrix {
        self.q.matmul(&self.t).matmul(&self.q.adjoint())
    }
}

/// Schur decomposition of a square matrix.
pub fn schur(a: &DenseMatrix) -> Result<Schur> {
    if !a.is_square() {
        return Err(Error::Dimension(format!(
            "Schur decomposition needs a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    if !a.is_finite() {
        return Err(Error::InvalidArgument("matrix has non-finite entries".into()));
    }
    let n = a.rows();
    let mut h = a.clone();
    let mut q = DenseMatrix::identity(n);
    hessenberg(&mut h, &mut q);
    qr_iterate(&mut h, &mut q)?;
    // Clear the strictly lower part left over from deflation.
    for r in 1..n {
        for c in 0..r {
            h[(r, c)] = C64::new(0.0, 0.0);
        }
    }
    Ok(Schur { q, t: h })
}

/// Schur decomposition with the eigenvalues satisfying `pred` leading.
pub fn schur_sorted(a: &DenseMatrix, pred: impl FnMut(C64) -> bool) -> Result<(Schur, usize)> {
    let mut s = schur(a)?;
    let k = s.reorder(pred);
    Ok((s, k))
}

/// `(c, s)` such that `[[c, s], [−s̄, c]]·[x, y]ᵀ = [r, 0]ᵀ`.
pub(crate) fn givens(x: C64, y: C64) -> (f64, C64) {
    let ay = y.norm();
    if ay == 0.0 {
        return (1.0, C64::new(0.0, 0.0));
    }
    let ax = x.norm();
    if ax == 0.0 {
        return (0.0, y.conj() / ay);
    }
    let r = ax.hypot(ay);
    (ax / r, (x / ax) * y.conj() / r)
}

fn rotate_rows(m: &mut DenseMatrix, k: usize, c: f64, s: C64, cols: std::ops::Range<usize>) {
    let n = m.cols();
    let data = m.as_mut_slice();
    let (top, bottom) = data.split_at_mut((k + 1) * n);
    let rk = &mut top[k * n..];
    let rk1 = &mut bottom[..n];
    for j in cols {
        let (u, w) = (rk[j], rk1[j]);
        rk[j] = u * c + s * w;
        rk1[j] = w * c - s.conj() * u;
    }
}

fn rotate_cols(m: &mut DenseMatrix, k: usize, c: f64, s: C64, rows: std::ops::Range<usize>) {
    let sc = s.conj();
    for i in rows {
        let (u, w) = (m[(i, k)], m[(i, k + 1)]);
        m[(i, k)] = u * c + w * sc;
        m[(i, k + 1)] = w * c - u * s;
    }
}

fn hessenberg(h: &mut DenseMatrix, q: &mut DenseMatrix) {
    let n = h.rows();
    if n < 3 {
        return;
    }
    for k in 0..n - 2 {
        let mut v: Vec<C64> = (k + 1..n).map(|r| h[(r, k)]).collect();
        let xnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if xnorm == 0.0 {
            continue;
        }
        let phase = if v[0].norm() > 0.0 { v[0] / v[0].norm() } else { C64::new(1.0, 0.0) };
        let alpha = -phase * xnorm;
        v[0] -= alpha;
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            continue;
        }
        for z in v.iter_mut() {
            *z /= vnorm;
        }
        // H ← (I − 2vv†)·H on rows k+1.., columns k..
        for c in k..n {
            let mut dot = C64::new(0.0, 0.0);
            for (i, vi) in v.iter().enumerate() {
                dot += vi.conj() * h[(k + 1 + i, c)];
            }
            let f = dot * 2.0;
            for (i, vi) in v.iter().enumerate() {
                h[(k + 1 + i, c)] -= vi * f;
            }
        }
        // H ← H·(I − 2vv†) and Q ← Q·(I − 2vv†) on columns k+1..
        for m in [&mut *h, &mut *q] {
            for r in 0..n {
                let mut dot = C64::new(0.0, 0.0);
                for (i, vi) in v.iter().enumerate() {
                    dot += m[(r, k + 1 + i)] * vi;
                }
                let f = dot * 2.0;
                for (i, vi) in v.iter().enumerate() {
                    m[(r, k + 1 + i)] -= f * vi.conj();
                }
            }
        }
        h[(k + 1, k)] = alpha;
        for r in k + 2..n {
            h[(r, k)] = C64::new(0.0, 0.0);
        }
    }
}

fn qr_iterate(h: &mut DenseMatrix, q: &mut DenseMatrix) -> Result<()> {
    let n = h.rows();
    if n < 2 {
        return Ok(());
    }
    let norm = h.frobenius_norm();
    if norm == 0.0 {
        return Ok(());
    }
    let small = f64::MIN_POSITIVE * (n as f64 / EPS);
    let mut hi = n - 1;
    let mut iter = 0usize;
    let mut total = 0usize;
    let budget = MAX_SWEEPS_PER_EIGENVALUE * n;

    while hi > 0 {
        let mut l = hi;
        while l > 0 {
            let sub = h[(l, l - 1)].norm();
            let mut s = h[(l - 1, l - 1)].norm() + h[(l, l)].norm();
            if s == 0.0 {
                s = norm;
            }
            if sub <= EPS * s || sub <= small || sub <= EPS * EPS * norm {
                h[(l, l - 1)] = C64::new(0.0, 0.0);
                break;
            }
            l -= 1;
        }
        if l == hi {
            hi -= 1;
            iter = 0;
            continue;
        }

        iter += 1;
        total += 1;
        if total > budget {
            return Err(Error::NoConvergence { iterations: total });
        }

        let mu = if iter.is_multiple_of(11) {
            // Exceptional shift to break cycles.
            h[(hi, hi)] + h[(hi, hi - 1)].norm() * 0.75
        } else {
            wilkinson_shift(
                h[(hi - 1, hi - 1)],
                h[(hi - 1, hi)],
                h[(hi, hi - 1)],
                h[(hi, hi)],
            )
        };

        for k in l..hi {
            let (x, y) = if k == l {
                (h[(l, l)] - mu, h[(l + 1, l)])
            } else {
                (h[(k, k - 1)], h[(k + 1, k - 1)])
            };
            let (c, s) = givens(x, y);
            let c0 = if k == l { l } else { k - 1 };
            rotate_rows(h, k, c, s, c0..n);
            let r1 = (k + 3).min(hi + 1);
            rotate_cols(h, k, c, s, 0..r1);
            rotate_cols(q, k, c, s, 0..n);
            if k > l {
                h[(k + 1, k - 1)] = C64::new(0.0, 0.0);
            }
        }
    }
    Ok(())
}

/// Eigenvalue of `[[a, b], [c, d]]` closest to `d`.
fn wilkinson_shift(a: C64, b: C64, c: C64, d: C64) -> C64 {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let m = (a + d) * 0.5;
    let (l1, l2) = (m + disc, m - disc);
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// Exchanges the diagonal entries `k` and `k + 1` of an upper-triangular `t`.
fn swap_adjacent(t: &mut DenseMatrix, q: &mut DenseMatrix, k: usize) {
    let n = t.rows();
    let t11 = t[(k, k)];
    let t22 = t[(k + 1, k + 1)];
    if t11 == t22 {
        return;
    }
    let (c, s) = givens(t[(k, k + 1)], t22 - t11);
    if k + 2 < n {
        rotate_rows(t, k, c, s, k + 2..n);
    }
    rotate_cols(t, k, c, s, 0..k);
    t[(k, k)] = t22;
    t[(k + 1, k + 1)] = t11;
    rotate_cols(q, k, c, s, 0..n);
}
