//! State metrics: validity checks, coherence, concurrence and distances.

use crate::error::{Error, Result};
use crate::numerics::hermitian::{eigvalsh, sqrt_psd, trace_norm_hermitian};
use crate::numerics::matrix::{DenseMatrix, C64};
use crate::spaces::{pauli, Pauli};

const STATE_TOL: f64 = 1e-9;

/// Checks trace one, Hermiticity and positivity to `1e-9`.
pub fn check_state(rho: &DenseMatrix) -> Result<()> {
    if !rho.is_square() {
        return Err(Error::InvalidState(format!("{}x{} is not square", rho.rows(), rho.cols())));
    }
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > STATE_TOL || tr.im.abs() > STATE_TOL {
        return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
    }
    let herm = rho.hermiticity_defect();
    if herm > STATE_TOL {
        return Err(Error::InvalidState(format!("Hermiticity defect {herm:.3e}")));
    }
    let min = eigvalsh(&hermitian_part(rho))?[0];
    if min < -STATE_TOL {
        return Err(Error::InvalidState(format!("negative eigenvalue {min:.3e}")));
    }
    Ok(())
}

fn hermitian_part(x: &DenseMatrix) -> DenseMatrix {
    (x + &x.adjoint()).scale_real(0.5)
}

/// `C = Σ_{i≠j} |ρᵢⱼ|`, in the basis given by the columns of `basis` if any.
pub fn coherence(rho: &DenseMatrix, basis: Option<&DenseMatrix>) -> Result<f64> {
    check_state(rho)?;
    let r = match basis {
        Some(b) => {
            if b.rows() != rho.rows() || b.cols() != rho.rows() {
                return Err(Error::Dimension(format!(
                    "basis is {}x{} for a {}-dimensional state",
                    b.rows(),
                    b.cols(),
                    rho.rows()
                )));
            }
            b.adjoint().matmul(rho).matmul(b)
        }
        None => rho.clone(),
    };
    let mut c = 0.0;
    for i in 0..r.rows() {
        for j in 0..r.cols() {
            if i != j {
                c += r[(i, j)].norm();
            }
        }
    }
    Ok(c)
}

/// Two-qubit concurrence `max(0, λ₁ − λ₂ − λ₃ − λ₄)` with `λ` the decreasing
/// eigenvalues of `√(√ρ ρ̃ √ρ)`, `ρ̃ = (σʸ⊗σʸ) ρ* (σʸ⊗σʸ)`.
pub fn concurrence(rho: &DenseMatrix) -> Result<f64> {
    if rho.shape() != (4, 4) {
        return Err(Error::InvalidState(format!(
            "concurrence needs a 4x4 state, got {}x{}",
            rho.rows(),
            rho.cols()
        )));
    }
    check_state(rho)?;
    let rho = hermitian_part(rho);
    let yy = pauli(Pauli::Y).kron(&pauli(Pauli::Y));
    let flipped = yy.matmul(&rho.conj()).matmul(&yy);
    let root = sqrt_psd(&rho)?;
    let m = hermitian_part(&root.matmul(&flipped).matmul(&root));
    let mut lam: Vec<f64> = eigvalsh(&m)?.into_iter().map(|x| x.max(0.0).sqrt()).collect();
    lam.sort_by(|a, b| b.total_cmp(a));
    Ok((lam[0] - lam[1] - lam[2] - lam[3]).max(0.0))
}

/// `½‖ρ − σ‖₁` for Hermitian arguments.
pub fn trace_distance(rho: &DenseMatrix, sigma: &DenseMatrix) -> Result<f64> {
    if rho.shape() != sigma.shape() {
        return Err(Error::Dimension(format!(
            "states of shapes {:?} and {:?}",
            rho.shape(),
            sigma.shape()
        )));
    }
    Ok(0.5 * trace_norm_hermitian(&hermitian_part(&(rho - sigma)))?)
}

/// `1 − ⟨ψ|ρ|ψ⟩`.
pub fn infidelity(rho: &DenseMatrix, psi: &[C64]) -> Result<f64> {
    if psi.len() != rho.rows() {
        return Err(Error::Dimension(format!(
            "state vector of length {} for a {}-dimensional state",
            psi.len(),
            rho.rows()
        )));
    }
    let rp = rho.matvec(psi);
    let overlap: C64 = psi.iter().zip(&rp).map(|(a, b)| a.conj() * b).sum();
    Ok(1.0 - overlap.re)
}
