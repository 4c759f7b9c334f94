//! CNOT synthesis from seven dissipatively projected segments and Bell-state preparation.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

use rayon::prelude::*;

use crate::effective::{first_order_generator, SweepResult};
use crate::error::{Error, Result};
use crate::lindblad::{hamiltonian_super, propagate};
use crate::network::CouplingKind;
use crate::numerics::expm::expm;
use crate::numerics::matrix::{DenseMatrix, C64, ZERO};
use crate::numerics::superop::SuperOperator;
use crate::projector::SteadyStructure;
use crate::scenarios::dfs::{dfs_network, logical_isometry};
use crate::scenarios::metrics::{infidelity, trace_distance};
use crate::spaces::{embed, pauli, Pauli};

/// Logical gate of one segment.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Gate {
    /// `exp(−iθX/2)` on module 1 or 2.
    X { module: usize, theta: f64 },
    /// `exp(−iθY/2)` with `Y = [[0, −i], [i, 0]]` in the logical basis.
    Y { module: usize, theta: f64 },
    Sqisw,
}

impl Gate {
    pub fn label(&self) -> String {
        match self {
            Gate::X { module, theta } => format!("X{module}({theta:+.4})"),
            Gate::Y { module, theta } => format!("Y{module}({theta:+.4})"),
            Gate::Sqisw => "SQiSW".into(),
        }
    }

    /// Ideal 4×4 logical unitary.
    pub fn ideal(&self) -> DenseMatrix {
        let rot = |m: &DenseMatrix, module: usize, theta: f64| {
            let u = expm(&m.scale(C64::new(0.0, -theta / 2.0))).expect("2x2 exponential");
            let i2 = DenseMatrix::identity(2);
            if module == 1 {
                u.kron(&i2)
            } else {
                i2.kron(&u)
            }
        };
        match *self {
            Gate::X { module, theta } => rot(&pauli(Pauli::X), module, theta),
            Gate::Y { module, theta } => rot(&logical_y(), module, theta),
            Gate::Sqisw => sqisw(),
        }
    }

    /// Physical Hamiltonian on the two-module space whose projected
    /// generator equals `−iK_eff` with `e^{−iK_eff}` the ideal gate.
    pub fn physical(&self) -> Result<DenseMatrix> {
        let net = dfs_network(2, &[1.0, 1.0])?;
        let layout = net.layout();
        let local = |m: DenseMatrix, module: usize, theta: f64| {
            let pos = layout.position(module - 1, 1)?;
            embed(&m.scale_real(theta / 2.0 * 2f64.sqrt()), &[pos], layout)
        };
        match *self {
            Gate::X { module, theta } => local(pauli(Pauli::X), module, theta),
            Gate::Y { module, theta } => local(pauli(Pauli::Y), module, theta),
            Gate::Sqisw => {
                let mut n = net.clone();
                n.connect(0, 1, CouplingKind::Hop, -FRAC_PI_2)?;
                n.perturbation()
            }
        }
    }
}

/// `[[0, −i], [i, 0]]`, the logical image of `√2·I⊗σʸ`.
pub fn logical_y() -> DenseMatrix {
    let mut m = DenseMatrix::zeros(2, 2);
    m[(0, 1)] = C64::new(0.0, -1.0);
    m[(1, 0)] = C64::new(0.0, 1.0);
    m
}

/// Square root of iSWAP.
pub fn sqisw() -> DenseMatrix {
    let mut m = DenseMatrix::identity(4);
    let c = C64::new(FRAC_1_SQRT_2, 0.0);
    let s = C64::new(0.0, -FRAC_1_SQRT_2);
    m[(1, 1)] = c;
    m[(2, 2)] = c;
    m[(1, 2)] = s;
    m[(2, 1)] = s;
    m
}

pub fn cnot() -> DenseMatrix {
    DenseMatrix::from_real(
        4,
        4,
        &[1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 1.0, 0.0],
    )
    .expect("4x4")
}

/// The seven segments in application order, each lasting `T/7`.
pub fn cnot_sequence() -> Vec<Gate> {
    vec![
        Gate::Y { module: 1, theta: PI / 2.0 },
        Gate::Sqisw,
        Gate::X { module: 1, theta: PI },
        Gate::Sqisw,
        Gate::X { module: 1, theta: PI / 2.0 },
        Gate::X { module: 2, theta: -PI / 2.0 },
        Gate::Y { module: 1, theta: -PI / 2.0 },
    ]
}

/// Ordered product of the ideal gates.
pub fn ideal_product(gates: &[Gate]) -> DenseMatrix {
    gates
        .iter()
        .fold(DenseMatrix::identity(4), |acc, g| g.ideal().matmul(&acc))
}

/// `|Tr(A†B)| / d`.
pub fn gate_fidelity(a: &DenseMatrix, b: &DenseMatrix) -> f64 {
    a.adjoint().matmul(b).trace().norm() / a.rows() as f64
}

/// Distances of the prepared state from the Bell target.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BellError {
    pub trace_distance: f64,
    pub infidelity: f64,
}

/// Two DFS modules driving `((|0̄⟩+|1̄⟩)/√2)|0̄⟩` towards `(|0̄0̄⟩+|1̄1̄⟩)/√2`.
#[derive(Clone, Debug)]
pub struct BellPrep {
    l0: SuperOperator,
    segments: Vec<SuperOperator>,
    steady: SteadyStructure,
    rho0: DenseMatrix,
    target: Vec<C64>,
}

impl BellPrep {
    pub fn new(tau1: f64, tau2: f64) -> Result<Self> {
        let net = dfs_network(2, &[tau1, tau2])?;
        let l0 = net.unperturbed_liouvillian()?.assembled().clone();
        let steady = SteadyStructure::with_default_tol(&l0)?;
        let segments = cnot_sequence()
            .iter()
            .map(|g| hamiltonian_super(&g.physical()?))
            .collect::<Result<Vec<_>>>()?;
        let v = logical_isometry(2, 2)?;
        let s = FRAC_1_SQRT_2;
        let logical0 = [s, 0.0, s, 0.0];
        let bell = [s, 0.0, 0.0, s];
        let lift = |a: &[f64]| -> Vec<C64> {
            let c: Vec<C64> = a.iter().map(|&x| C64::new(x, 0.0)).collect();
            v.matvec(&c)
        };
        let psi0 = lift(&logical0);
        Ok(Self {
            l0,
            segments,
            steady,
            rho0: DenseMatrix::outer(&psi0, &psi0),
            target: lift(&bell),
        })
    }

    pub fn initial_state(&self) -> &DenseMatrix {
        &self.rho0
    }

    pub fn target(&self) -> &[C64] {
        &self.target
    }

    /// State after the seven exact segments of total duration `T`.
    pub fn evolve(&self, t: f64) -> Result<DenseMatrix> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::InvalidArgument(format!("evolution time {t} must be positive")));
        }
        let dt = t / 7.0;
        let mut rho = self.rho0.clone();
        for k in &self.segments {
            // e^{dt·𝓛₀ + 𝓚}: the segment Hamiltonian carries its own 1/dt.
            let gen = self.l0.scale(dt).try_add(k)?;
            rho = propagate(&gen, 1.0)?.apply(&rho)?;
        }
        Ok(rho)
    }

    /// State after the seven ideal projected segments `e^{𝓟₀𝓚𝓟₀}`.
    pub fn evolve_ideal(&self) -> Result<DenseMatrix> {
        let mut rho = self.rho0.clone();
        for k in &self.segments {
            let g = first_order_generator(k, &self.steady.p0)?;
            rho = propagate(&g, 1.0)?.apply(&rho)?;
        }
        Ok(rho)
    }

    pub fn error_of(&self, rho: &DenseMatrix) -> Result<BellError> {
        let target = DenseMatrix::outer(&self.target, &self.target);
        Ok(BellError {
            trace_distance: trace_distance(rho, &target)?,
            infidelity: infidelity(rho, &self.target)?,
        })
    }

    pub fn error_at(&self, t: f64) -> Result<BellError> {
        self.error_of(&self.evolve(t)?)
    }

    /// Trace-distance and infidelity sweeps, each fitted on the `fit_points` largest `T`.
    pub fn sweep(&self, t_list: &[f64], fit_points: usize) -> Result<(SweepResult, SweepResult)> {
        if t_list.len() < 5 {
            return Err(Error::InvalidArgument(format!(
                "sweep needs at least 5 times, got {}",
                t_list.len()
            )));
        }
        let errs = t_list
            .par_iter()
            .map(|&t| self.error_at(t).map(|e| (t, e)))
            .collect::<Result<Vec<_>>>()?;
        let td = errs.iter().map(|(t, e)| (*t, e.trace_distance)).collect();
        let inf = errs.iter().map(|(t, e)| (*t, e.infidelity)).collect();
        Ok((
            SweepResult::from_samples(td, Some(fit_points))?,
            SweepResult::from_samples(inf, Some(fit_points))?,
        ))
    }
}

/// `|ψ⁺⟩` in the logical basis.
pub fn logical_bell() -> Vec<C64> {
    let s = C64::new(FRAC_1_SQRT_2, 0.0);
    vec![s, ZERO, ZERO, s]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenarios::dfs::logical_restriction;

    #[test]
    fn ideal_product_is_cnot() {
        let u = ideal_product(&cnot_sequence());
        assert!((gate_fidelity(&cnot(), &u) - 1.0).abs() < 1e-12);
        assert_eq!(cnot_sequence().len(), 7);
    }

    #[test]
    fn sqisw_properties() {
        let s = sqisw();
        assert!(s.adjoint().matmul(&s).max_abs_diff(&DenseMatrix::identity(4)) < 1e-15);
        let mut iswap = DenseMatrix::identity(4);
        iswap[(1, 1)] = ZERO;
        iswap[(2, 2)] = ZERO;
        iswap[(1, 2)] = C64::new(0.0, -1.0);
        iswap[(2, 1)] = C64::new(0.0, -1.0);
        assert!(s.matmul(&s).max_abs_diff(&iswap) < 1e-15);
    }

    #[test]
    fn segments_restrict_to_ideal_gates() {
        let net = dfs_network(2, &[1.0, 1.0]).unwrap();
        let steady = SteadyStructure::with_default_tol(net.unperturbed_liouvillian().unwrap().assembled()).unwrap();
        let v = logical_isometry(2, 2).unwrap();
        for gate in cnot_sequence() {
            let k = hamiltonian_super(&gate.physical().unwrap()).unwrap();
            let g = logical_restriction(&first_order_generator(&k, &steady.p0).unwrap(), &v).unwrap();
            let channel = expm(g.matrix()).unwrap();
            let u = gate.ideal();
            let want = crate::numerics::superop::sandwich_super(&u, &u.adjoint()).unwrap();
            assert!(channel.max_abs_diff(want.matrix()) < 1e-9, "{}", gate.label());
        }
    }

    #[test]
    fn ideal_circuit_prepares_bell_state() {
        let u = ideal_product(&cnot_sequence());
        let s = C64::new(FRAC_1_SQRT_2, 0.0);
        let out = u.matvec(&[s, ZERO, s, ZERO]);
        let overlap: C64 = out.iter().zip(logical_bell()).map(|(a, b)| a.conj() * b).sum();
        assert!((overlap.norm() - 1.0).abs() < 1e-12);
        let prep = BellPrep::new(1.0, 1.0).unwrap();
        let e = prep.error_of(&prep.evolve_ideal().unwrap()).unwrap();
        assert!(e.trace_distance < 1e-10 && e.infidelity.abs() < 1e-10);
    }

    #[test]
    fn exact_error_shrinks_with_time() {
        let prep = BellPrep::new(1.0, 1.0).unwrap();
        let a = prep.error_at(100.0).unwrap();
        let b = prep.error_at(1000.0).unwrap();
        assert!(b.trace_distance < a.trace_distance / 5.0);
        assert!(prep.evolve(-1.0).is_err());
    }
}
