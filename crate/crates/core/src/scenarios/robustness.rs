//! Error terms that leak logical states of two DFS modules out of the DFS.
//!
//! `V = Σ ζ_{αβij} |α⟩⟨ī| ⊗ |β⟩⟨j̄| + h.c.` with `α, β` the leakage states
//! `|e₀⟩ = (|01⟩+|10⟩)/√2`, `|e₁⟩ = |11⟩`. Such terms project to zero at first
//! order, so the error stays linear in `1/T`.

use std::f64::consts::{FRAC_1_SQRT_2, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::effective::{first_order_generator, scaling_sweep, Order, ProjectedModel, SweepResult};
use crate::error::{Error, Result};
use crate::lindblad::hamiltonian_super;
use crate::network::CouplingKind;
use crate::numerics::matrix::{DenseMatrix, C64};
use crate::numerics::superop::{left_super, right_super, sandwich_super, SuperOperator};
use crate::projector::SteadyStructure;
use crate::scenarios::dfs::dfs_network;
use crate::spaces::dfs_basis;

/// Which kind of error term is injected.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PerturbationKind {
    Hamiltonian,
    Lindbladian,
}

/// Default error magnitudes in units of the hop strength `g̃`. Weak
/// dissipative errors can lower the error through a cross term with the hop,
/// so the Lindbladian pair sits higher.
pub fn default_magnitudes(kind: PerturbationKind) -> [f64; 2] {
    match kind {
        PerturbationKind::Hamiltonian => [0.25, 0.5],
        PerturbationKind::Lindbladian => [0.625, 0.75],
    }
}

/// Coefficients `ζ_{αβij}` of fixed magnitude and random phase.
#[derive(Clone, Debug, PartialEq)]
pub struct ErrorMatrix {
    zeta: [C64; 16],
    pub magnitude: f64,
    pub seed: u64,
}

impl ErrorMatrix {
    pub fn zero() -> Self {
        Self {
            zeta: [C64::new(0.0, 0.0); 16],
            magnitude: 0.0,
            seed: 0,
        }
    }

    /// Entries `r e^{iφ}` with `φ` uniform on `[0, 2π)`, drawn from stream
    /// `stream` of a ChaCha8 generator seeded with `seed`.
    pub fn sample(magnitude: f64, seed: u64, stream: u64) -> Result<Self> {
        if !(magnitude >= 0.0 && magnitude.is_finite()) {
            return Err(Error::InvalidArgument(format!("error magnitude {magnitude} must be non-negative")));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        let mut zeta = [C64::new(0.0, 0.0); 16];
        for z in zeta.iter_mut() {
            *z = C64::from_polar(magnitude, TAU * rng.random::<f64>());
        }
        Ok(Self { zeta, magnitude, seed })
    }

    /// `ζ_{αβij}`.
    pub fn entry(&self, alpha: usize, beta: usize, i: usize, j: usize) -> C64 {
        self.zeta[((alpha * 2 + beta) * 2 + i) * 2 + j]
    }
}

/// `|e₀⟩`, `|e₁⟩` as columns.
pub fn leakage_states() -> DenseMatrix {
    let mut m = DenseMatrix::zeros(4, 2);
    m[(0b01, 0)] = C64::new(FRAC_1_SQRT_2, 0.0);
    m[(0b10, 0)] = C64::new(FRAC_1_SQRT_2, 0.0);
    m[(0b11, 1)] = C64::new(1.0, 0.0);
    m
}

/// Error Hamiltonian `V` on the two-module space.
pub fn hamiltonian_error(z: &ErrorMatrix) -> Result<DenseMatrix> {
    let logical = dfs_basis(2)?.isometry().clone();
    let leak = leakage_states();
    let mut v = DenseMatrix::zeros(16, 16);
    for a in 0..2 {
        for b in 0..2 {
            for i in 0..2 {
                for j in 0..2 {
                    let za = DenseMatrix::outer(&leak.col_vec(a), &logical.col_vec(i));
                    let zb = DenseMatrix::outer(&leak.col_vec(b), &logical.col_vec(j));
                    v += &za.kron(&zb).scale(z.entry(a, b, i, j));
                }
            }
        }
    }
    Ok(&v + &v.adjoint())
}

fn collective_lowerings() -> Result<Vec<DenseMatrix>> {
    let net = dfs_network(2, &[1.0, 1.0])?;
    Ok(net.global_dissipators()?.into_iter().map(|(l, _)| l).collect())
}

/// `𝓛₁(ρ) = Σᵢ (ηρLᵢ† − ½{Lᵢ†η, ρ}) + h.c.` with `η = V` and `Lᵢ` the two
/// collective lowerings, rates set to one.
pub fn lindblad_error(z: &ErrorMatrix) -> Result<SuperOperator> {
    let eta = hamiltonian_error(z)?;
    let eta_d = eta.adjoint();
    let mut out = SuperOperator::zeros(16);
    for l in collective_lowerings()? {
        let ld = l.adjoint();
        let ldeta = ld.matmul(&eta);
        let etadl = eta_d.matmul(&l);
        let fwd = &sandwich_super(&eta, &ld)? - &(&left_super(&ldeta)? + &right_super(&ldeta)?).scale(0.5);
        let back = &sandwich_super(&l, &eta_d)? - &(&left_super(&etadl)? + &right_super(&etadl)?).scale(0.5);
        out = &(&out + &fwd) + &back;
    }
    Ok(out)
}

/// The error term as a superoperator.
pub fn error_super(kind: PerturbationKind, z: &ErrorMatrix) -> Result<SuperOperator> {
    match kind {
        PerturbationKind::Hamiltonian => hamiltonian_super(&hamiltonian_error(z)?),
        PerturbationKind::Lindbladian => lindblad_error(z),
    }
}

/// Two DFS modules with the hop `𝓚̃ = −i[g̃(σ₂⁺⊗σ₁⁻ + h.c.), ·]`.
#[derive(Clone, Debug)]
pub struct RobustnessSetup {
    l0: SuperOperator,
    k_tilde: SuperOperator,
    steady: SteadyStructure,
    reference: SuperOperator,
}

impl RobustnessSetup {
    pub fn new(tau1: f64, tau2: f64, g_tilde: f64) -> Result<Self> {
        let mut net = dfs_network(2, &[tau1, tau2])?;
        net.connect(0, 1, CouplingKind::Hop, g_tilde)?;
        let l0 = net.unperturbed_liouvillian()?.assembled().clone();
        let steady = SteadyStructure::with_default_tol(&l0)?;
        let k_tilde = net.perturbation_super()?;
        let reference = first_order_generator(&k_tilde, &steady.p0)?;
        Ok(Self {
            l0,
            k_tilde,
            steady,
            reference,
        })
    }

    pub fn steady(&self) -> &SteadyStructure {
        &self.steady
    }

    /// Sweep model with the error term added to `𝓚̃`, measured against the
    /// unperturbed effective generator.
    pub fn model(&self, extra: &SuperOperator) -> Result<ProjectedModel> {
        let k = self.k_tilde.try_add(extra)?;
        ProjectedModel::with_reference(&self.l0, &k, &self.steady, Order::First, &self.reference)
    }
}

/// One sweep per magnitude, preceded by the `ζ = 0` reference. Magnitude `k`
/// (counting from one) draws its phases from stream `k` of `seed`.
pub fn robustness_sweep(
    setup: &RobustnessSetup,
    kind: PerturbationKind,
    magnitudes: &[f64],
    seed: u64,
    t_list: &[f64],
    fit_points: Option<usize>,
) -> Result<Vec<(f64, SweepResult)>> {
    let mut cases = vec![(0.0, ErrorMatrix::zero())];
    for (k, &m) in magnitudes.iter().enumerate() {
        cases.push((m, ErrorMatrix::sample(m, seed, k as u64 + 1)?));
    }
    cases
        .par_iter()
        .map(|(m, z)| {
            let model = setup.model(&error_super(kind, z)?)?;
            Ok((*m, scaling_sweep(&model, t_list, fit_points)?))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::effective::{log_points, SweepModel};
    use crate::scenarios::dfs::logical_isometry;

    #[test]
    fn sampled_entries_have_fixed_magnitude() {
        let z = ErrorMatrix::sample(0.5, 7, 1).unwrap();
        for a in 0..2 {
            for b in 0..2 {
                for i in 0..2 {
                    for j in 0..2 {
                        assert!((z.entry(a, b, i, j).norm() - 0.5).abs() < 1e-15);
                    }
                }
            }
        }
        assert_eq!(z, ErrorMatrix::sample(0.5, 7, 1).unwrap());
        assert_ne!(z, ErrorMatrix::sample(0.5, 7, 2).unwrap());
        assert!(ErrorMatrix::sample(-1.0, 7, 1).is_err());
    }

    #[test]
    fn structural_zeros() {
        let z = ErrorMatrix::sample(0.5, 3, 1).unwrap();
        let v = hamiltonian_error(&z).unwrap();
        assert!(v.is_hermitian(1e-15));
        let pi = logical_isometry(2, 2).unwrap();
        let proj = pi.matmul(&pi.adjoint());
        assert!(proj.matmul(&v).matmul(&proj).max_abs() < 1e-15);
        let setup = RobustnessSetup::new(1.0, 1.0, 2.0).unwrap();
        let p0 = &setup.steady().p0;
        let l1 = lindblad_error(&z).unwrap();
        assert!(first_order_generator(&l1, p0).unwrap().matrix().max_abs() < 1e-10);
        let hv = hamiltonian_super(&v).unwrap();
        assert!(first_order_generator(&hv, p0).unwrap().matrix().max_abs() < 1e-10);
    }

    #[test]
    fn zero_error_is_zero() {
        let z = ErrorMatrix::zero();
        assert_eq!(hamiltonian_error(&z).unwrap().max_abs(), 0.0);
        assert_eq!(lindblad_error(&z).unwrap().matrix().max_abs(), 0.0);
    }

    #[test]
    fn lindblad_error_preserves_trace_and_hermiticity() {
        let l1 = lindblad_error(&ErrorMatrix::sample(1.0, 11, 1).unwrap()).unwrap();
        assert!(l1.trace_functional().iter().all(|z| z.norm() < 1e-12));
        let x = crate::numerics::testing::random_hermitian(16, 2);
        assert!(l1.apply(&x).unwrap().hermiticity_defect() < 1e-12);
    }

    #[test]
    fn hamiltonian_error_raises_error() {
        let setup = RobustnessSetup::new(1.0, 1.0, 2.0).unwrap();
        let base = setup.model(&SuperOperator::zeros(16)).unwrap();
        let z = ErrorMatrix::sample(0.5, 1, 1).unwrap();
        let pert = setup.model(&error_super(PerturbationKind::Hamiltonian, &z).unwrap()).unwrap();
        for t in log_points(10.0, 1000.0, 4).unwrap() {
            assert!(pert.error_at(t).unwrap() >= base.error_at(t).unwrap());
        }
    }

    #[test]
    fn weak_lindbladian_error_can_lower_error() {
        // A linear cross term between 𝓛₁ and the hop can reduce the O(1/T)
        // error for weak ζ; ordering is only expected at larger magnitudes.
        let setup = RobustnessSetup::new(1.0, 1.0, 2.0).unwrap();
        let base = setup.model(&SuperOperator::zeros(16)).unwrap();
        let t = 1000.0;
        let b = base.error_at(t).unwrap();
        let lowered = (1..=8u64).any(|s| {
            let z = ErrorMatrix::sample(0.25, s, 1).unwrap();
            let m = setup.model(&lindblad_error(&z).unwrap()).unwrap();
            m.error_at(t).unwrap() < b
        });
        assert!(lowered);
    }
}
