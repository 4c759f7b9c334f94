//! Two single-qubit modules under collective z-dephasing, coupled by a hop.
//!
//! The steady states are the z-diagonal states, so the hop vanishes at first
//! order and the second-order generator mixes `|01⟩` and `|10⟩` populations.

use crate::effective::second_order_generator;
use crate::error::{Error, Result};
use crate::lindblad::{hamiltonian_super, Liouvillian};
use crate::network::{CouplingKind, DgmNetwork, Vertex, VertexKind};
use crate::numerics::expm::expm;
use crate::numerics::matrix::{DenseMatrix, C64};
use crate::numerics::superop::{devectorize, vectorize, SuperOperator};
use crate::projector::SteadyStructure;
use crate::scenarios::metrics::trace_distance;

/// `|0⟩⟨0| ⊗ |1⟩⟨1|`.
pub fn initial_state() -> DenseMatrix {
    let mut m = DenseMatrix::zeros(4, 4);
    m[(1, 1)] = C64::new(1.0, 0.0);
    m
}

/// Populations `(1 ± e^{−2Tg²τ})/2` on `|01⟩` and `|10⟩`.
pub fn analytic_state(g: f64, tau: f64, t: f64) -> DenseMatrix {
    let x = (-2.0 * t * g * g * tau).exp();
    let mut m = DenseMatrix::zeros(4, 4);
    m[(1, 1)] = C64::new(0.5 * (1.0 + x), 0.0);
    m[(2, 2)] = C64::new(0.5 * (1.0 - x), 0.0);
    m
}

/// `ρ ↦ −τg²(a − b)(|01⟩⟨01| − |10⟩⟨10|)` with `a`, `b` the `|01⟩`, `|10⟩` populations.
pub fn analytic_generator_on(rho: &DenseMatrix, g: f64, tau: f64) -> DenseMatrix {
    let diff = rho[(1, 1)] - rho[(2, 2)];
    let mut m = DenseMatrix::zeros(4, 4);
    m[(1, 1)] = diff * (-tau * g * g);
    m[(2, 2)] = diff * (tau * g * g);
    m
}

/// Unperturbed generator, unit-strength hop and the derived structure.
#[derive(Clone, Debug)]
pub struct ZDephasing {
    tau: f64,
    l0: SuperOperator,
    hop: SuperOperator,
    steady: SteadyStructure,
}

impl ZDephasing {
    pub fn new(tau: f64) -> Result<Self> {
        let v = Vertex::new(VertexKind::Dephasing { qubits: 1 }, tau)?;
        let mut net = DgmNetwork::new(vec![v.clone(), v])?;
        net.connect(0, 1, CouplingKind::CollectiveHop, 1.0)?;
        let l0 = net.unperturbed_liouvillian()?.assembled().clone();
        let hop = hamiltonian_super(&net.perturbation()?)?;
        let steady = SteadyStructure::with_default_tol(&l0)?;
        Ok(Self { tau, l0, hop, steady })
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn l0(&self) -> &SuperOperator {
        &self.l0
    }

    pub fn steady(&self) -> &SteadyStructure {
        &self.steady
    }

    /// Second-order generator for hop strength `g`.
    pub fn effective_generator(&self, g: f64) -> Result<SuperOperator> {
        let k = self.hop.scale(g);
        second_order_generator(&k, &self.steady.p0, &self.steady.s)
    }

    /// `e^{T𝓛_eff}` applied to the initial state.
    pub fn effective_state(&self, g: f64, t: f64) -> Result<DenseMatrix> {
        let gen = self.effective_generator(g)?;
        let e = expm(&gen.matrix().scale_real(t))?;
        devectorize(&e.matvec(&vectorize(&initial_state())?), 4)
    }

    /// Full generator with hop strength `g`.
    pub fn full_liouvillian(&self, g: f64) -> Result<SuperOperator> {
        self.l0.try_add(&self.hop.scale(g))
    }

    /// Trace distance at total time `T` between the full dynamics with
    /// `𝓚 = 𝓚̃/√T` and the effective state of `𝓚̃`, for `𝓚̃` of strength `g_tilde`.
    pub fn distance(&self, g_tilde: f64, t: f64) -> Result<f64> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::InvalidArgument(format!("evolution time {t} must be positive")));
        }
        let full = self.full_liouvillian(g_tilde / t.sqrt())?;
        let e = expm(&full.matrix().scale_real(t))?;
        let rho = devectorize(&e.matvec(&vectorize(&initial_state())?), 4)?;
        trace_distance(&rho, &self.effective_state(g_tilde, 1.0)?)
    }
}

/// Full generator with hop `g` and the effective state at time `T`.
pub fn zdephasing_scenario(g: f64, tau: f64, t: f64) -> Result<(Liouvillian, DenseMatrix)> {
    for (name, v) in [("g", g), ("tau", tau), ("T", t)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::InvalidArgument(format!("{name} = {v} must be positive")));
        }
    }
    let z = ZDephasing::new(tau)?;
    let v = Vertex::new(VertexKind::Dephasing { qubits: 1 }, tau)?;
    let mut net = DgmNetwork::new(vec![v.clone(), v])?;
    net.connect(0, 1, CouplingKind::CollectiveHop, g)?;
    Ok((net.global_liouvillian()?, z.effective_state(g, t)?))
}
