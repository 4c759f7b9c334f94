//! Liouvillians in Lindblad form and their exact propagators.

use crate::error::{Error, Result};
use crate::numerics::expm::expm;
use crate::numerics::matrix::{DenseMatrix, C64};
use crate::numerics::superop::{left_super, right_super, sandwich_super, SuperOperator};

const HERMITIAN_TOL: f64 = 1e-10;

/// `ρ ↦ Σₖ rₖ (Lₖ ρ Lₖ† − ½{Lₖ†Lₖ, ρ})`.
pub fn dissipator(ops: &[(DenseMatrix, f64)]) -> Result<SuperOperator> {
    let Some((first, _)) = ops.first() else {
        return Err(Error::InvalidArgument("dissipator needs at least one operator".into()));
    };
    let d = first.rows();
    let mut out = SuperOperator::zeros(d);
    for (l, rate) in ops {
        if !l.is_square() || l.rows() != d {
            return Err(Error::Dimension(format!(
                "Lindblad operator is {}x{}, expected {d}x{d}",
                l.rows(),
                l.cols()
            )));
        }
        if !(*rate >= 0.0 && rate.is_finite()) {
            return Err(Error::InvalidArgument(format!("dissipation rate {rate} must be finite and non-negative")));
        }
        if *rate == 0.0 {
            continue;
        }
        out = &out + &single_dissipator(l, *rate)?;
    }
    Ok(out)
}

fn single_dissipator(l: &DenseMatrix, rate: f64) -> Result<SuperOperator> {
    let ld = l.adjoint();
    let ldl = ld.matmul(l);
    let jump = sandwich_super(l, &ld)?;
    let anti = &left_super(&ldl)? + &right_super(&ldl)?;
    Ok((&jump - &anti.scale(0.5)).scale(rate))
}

/// `X ↦ −i[K, X]` for Hermitian `K`.
pub fn hamiltonian_super(k: &DenseMatrix) -> Result<SuperOperator> {
    if !k.is_square() {
        return Err(Error::Dimension(format!(
            "Hamiltonian must be square, got {}x{}",
            k.rows(),
            k.cols()
        )));
    }
    let dev = k.hermiticity_defect();
    if dev > HERMITIAN_TOL * k.max_abs().max(1.0) {
        return Err(Error::NotHermitian { deviation: dev });
    }
    let comm = &left_super(k)? - &right_super(k)?;
    SuperOperator::new(k.rows(), comm.into_matrix().scale(C64::new(0.0, -1.0)))
}

/// Hamiltonian plus rate-weighted Lindblad operators, with the assembled generator.
#[derive(Clone, Debug)]
pub struct Liouvillian {
    dim: usize,
    hamiltonian: Option<DenseMatrix>,
    dissipators: Vec<(DenseMatrix, f64)>,
    assembled: SuperOperator,
}

impl Liouvillian {
    pub fn new(hamiltonian: Option<DenseMatrix>, dissipators: Vec<(DenseMatrix, f64)>) -> Result<Self> {
        let dim = match (&hamiltonian, dissipators.first()) {
            (Some(h), _) => h.rows(),
            (None, Some((l, _))) => l.rows(),
            (None, None) => {
                return Err(Error::InvalidArgument(
                    "Liouvillian needs a Hamiltonian or a dissipator".into(),
                ))
            }
        };
        let mut assembled = match &hamiltonian {
            Some(h) => hamiltonian_super(h)?,
            None => SuperOperator::zeros(dim),
        };
        if !dissipators.is_empty() {
            let d = dissipator(&dissipators)?;
            assembled = assembled.try_add(&d)?;
        }
        Ok(Self {
            dim,
            hamiltonian,
            dissipators,
            assembled,
        })
    }

    /// Purely dissipative generator.
    pub fn dissipative(dissipators: Vec<(DenseMatrix, f64)>) -> Result<Self> {
        Self::new(None, dissipators)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn hamiltonian(&self) -> Option<&DenseMatrix> {
        self.hamiltonian.as_ref()
    }

    pub fn dissipators(&self) -> &[(DenseMatrix, f64)] {
        &self.dissipators
    }

    pub fn assembled(&self) -> &SuperOperator {
        &self.assembled
    }

    /// Largest deviation of `Tr ∘ 𝓛` from zero.
    pub fn trace_defect(&self) -> f64 {
        self.assembled
            .trace_functional()
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// `e^{T𝓛}`.
    pub fn propagate(&self, t: f64) -> Result<SuperOperator> {
        propagate(&self.assembled, t)
    }
}

/// `e^{T·generator}` for `T ≥ 0`.
pub fn propagate(generator: &SuperOperator, t: f64) -> Result<SuperOperator> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::InvalidArgument(format!("propagation time {t} must be finite and non-negative")));
    }
    SuperOperator::new(generator.dim(), expm(&generator.matrix().scale_real(t))?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::hermitian::eigvalsh;
    use crate::numerics::matrix::ONE;
    use crate::numerics::testing::{random_hermitian, random_matrix};
    use crate::spaces::{collective, dfs_basis, pauli, Pauli};
    use proptest::prelude::*;

    fn ket_bra(d: usize, r: usize, c: usize) -> DenseMatrix {
        let mut m = DenseMatrix::zeros(d, d);
        m[(r, c)] = ONE;
        m
    }

    fn damping(rate: f64) -> Liouvillian {
        Liouvillian::dissipative(vec![(pauli(Pauli::Minus), rate)]).unwrap()
    }

    #[test]
    fn amplitude_damping_hand_evaluation() {
        let l = damping(1.0);
        let out = l.assembled().apply(&ket_bra(2, 1, 1)).unwrap();
        let expect = DenseMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, -1.0]).unwrap();
        assert!(out.max_abs_diff(&expect) < 1e-15);
        assert_eq!(l.assembled().apply(&ket_bra(2, 0, 0)).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn dfs_state_is_dark() {
        let l = Liouvillian::dissipative(vec![(collective(Pauli::Minus, 2).unwrap(), 1.0)]).unwrap();
        let b = dfs_basis(2).unwrap();
        let s = b.state(0);
        let rho = DenseMatrix::outer(&s, &s);
        assert!(l.assembled().apply(&rho).unwrap().max_abs() < 1e-15);
    }

    #[test]
    fn hamiltonian_super_cases() {
        assert_eq!(hamiltonian_super(&DenseMatrix::zeros(2, 2)).unwrap(), SuperOperator::zeros(2));
        let k = hamiltonian_super(&pauli(Pauli::Z)).unwrap();
        let out = k.apply(&ket_bra(2, 0, 1)).unwrap();
        assert!(out.max_abs_diff(&ket_bra(2, 0, 1).scale(C64::new(0.0, 2.0))) < 1e-15);
        let x = random_matrix(4, 4, 7);
        let h = hamiltonian_super(&random_hermitian(4, 8)).unwrap();
        assert!(h.apply(&x).unwrap().trace().norm() < 1e-14);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            hamiltonian_super(&pauli(Pauli::Plus)),
            Err(Error::NotHermitian { .. })
        ));
        assert!(dissipator(&[(pauli(Pauli::Minus), -1.0)]).is_err());
        assert!(dissipator(&[(pauli(Pauli::Minus), 1.0), (DenseMatrix::identity(3), 1.0)]).is_err());
        assert!(propagate(&SuperOperator::zeros(2), -1.0).is_err());
    }

    #[test]
    fn propagation_limits() {
        let l = damping(1.0);
        assert!(l.propagate(0.0).unwrap().matrix().max_abs_diff(&DenseMatrix::identity(4)) < 1e-15);
        let e = l.propagate(60.0).unwrap();
        let plus = DenseMatrix::from_real(2, 2, &[0.5, 0.5, 0.5, 0.5]).unwrap();
        assert!(e.apply(&plus).unwrap().max_abs_diff(&ket_bra(2, 0, 0)) < 1e-12);
    }

    #[test]
    fn semigroup_property() {
        let h = random_hermitian(3, 1);
        let ls = vec![(random_matrix(3, 3, 2), 0.7), (random_matrix(3, 3, 3), 1.3)];
        let l = Liouvillian::new(Some(h), ls).unwrap();
        let a = l.propagate(0.8).unwrap().compose(&l.propagate(1.7).unwrap()).unwrap();
        let b = l.propagate(2.5).unwrap();
        assert!(a.matrix().max_abs_diff(b.matrix()) < 1e-9);
    }

    #[test]
    fn linear_assembly() {
        let h = random_hermitian(3, 4);
        let ops = vec![(random_matrix(3, 3, 5), 2.0)];
        let full = Liouvillian::new(Some(h.clone()), ops.clone()).unwrap();
        let sum = &hamiltonian_super(&h).unwrap() + &dissipator(&ops).unwrap();
        assert_eq!(full.assembled(), &sum);
        assert!(full.trace_defect() < 1e-13);
    }

    proptest! {
        #[test]
        fn propagator_is_cptp_on_states(seed in 0u64..10_000, t in 0.0f64..1000.0) {
            let h = random_hermitian(3, seed);
            let l = Liouvillian::new(Some(h), vec![(random_matrix(3, 3, seed ^ 1), 1.0)]).unwrap();
            let e = l.propagate(t).unwrap();
            let a = random_matrix(3, 3, seed ^ 2);
            let rho0 = a.matmul(&a.adjoint());
            let rho0 = rho0.scale_real(1.0 / rho0.trace().re);
            let rho = e.apply(&rho0).unwrap();
            prop_assert!((rho.trace() - ONE).norm() < 1e-9);
            prop_assert!(rho.hermiticity_defect() < 1e-10);
            let herm = (&rho + &rho.adjoint()).scale_real(0.5);
            prop_assert!(eigvalsh(&herm).unwrap()[0] > -1e-9);
        }
    }
}
