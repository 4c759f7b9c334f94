//! Collective-damping DFS modules: logical generators and first-order sweeps.
//!
//! Logical product states are ordered with module A most significant, so
//! `|āb̄⟩` has index `a·d + b` for `d` logical levels per module.

use crate::effective::{Order, ProjectedModel};
use crate::error::{Error, Result};
use crate::lindblad::hamiltonian_super;
use crate::network::{CouplingKind, DgmNetwork, Vertex, VertexKind};
use crate::numerics::matrix::{DenseMatrix, C64, ZERO};
use crate::numerics::superop::SuperOperator;
use crate::projector::SteadyStructure;
use crate::spaces::{dfs_basis, embed, pauli, Pauli};

/// Network of collective-damping modules with `qubits` qubits each.
pub fn dfs_network(qubits: usize, taus: &[f64]) -> Result<DgmNetwork> {
    let vertices = taus
        .iter()
        .map(|&t| Vertex::new(VertexKind::CollectiveDamping { qubits }, t))
        .collect::<Result<Vec<_>>>()?;
    DgmNetwork::new(vertices)
}

/// Isometry onto the product of the module DFS bases.
pub fn logical_isometry(qubits: usize, modules: usize) -> Result<DenseMatrix> {
    let v = dfs_basis(qubits)?.isometry().clone();
    let mut out = DenseMatrix::identity(1);
    for _ in 0..modules {
        out = out.kron(&v);
    }
    Ok(out)
}

/// `X ↦ V† 𝓖(V X V†) V` on the logical operator space.
pub fn logical_restriction(gen: &SuperOperator, iso: &DenseMatrix) -> Result<SuperOperator> {
    if iso.rows() != gen.dim() {
        return Err(Error::Dimension(format!(
            "isometry has {} rows for a generator on dimension {}",
            iso.rows(),
            gen.dim()
        )));
    }
    restrict_with(iso, |x| gen.apply(x))
}

/// Same restriction for a generator given only by its action.
pub fn restrict_with<F>(iso: &DenseMatrix, gen: F) -> Result<SuperOperator>
where
    F: Fn(&DenseMatrix) -> Result<DenseMatrix>,
{
    let d = iso.cols();
    let vd = iso.adjoint();
    let mut m = DenseMatrix::zeros(d * d, d * d);
    for c in 0..d {
        for r in 0..d {
            let mut e = DenseMatrix::zeros(d, d);
            e[(r, c)] = C64::new(1.0, 0.0);
            let y = vd.matmul(&gen(&iso.matmul(&e).matmul(&vd))?).matmul(iso);
            for cc in 0..d {
                for rr in 0..d {
                    m[(rr + d * cc, r + d * c)] = y[(rr, cc)];
                }
            }
        }
    }
    SuperOperator::new(d, m)
}

/// Physical coupling, its network and the logical Hamiltonian it should induce.
#[derive(Clone, Debug)]
pub struct LogicalCase {
    pub label: &'static str,
    pub network: DgmNetwork,
    pub qubits: usize,
    /// Physical Hamiltonian on the network space.
    pub physical: DenseMatrix,
    /// Expected logical Hamiltonian on the product of the module DFS bases.
    pub expected: DenseMatrix,
}

impl LogicalCase {
    pub fn isometry(&self) -> Result<DenseMatrix> {
        logical_isometry(self.qubits, self.network.vertices().len())
    }

    /// `P₀𝓚P₀` restricted to the logical operator space.
    pub fn restricted_generator(&self) -> Result<SuperOperator> {
        let p0 = self.network.global_projector()?;
        let h = &self.physical;
        restrict_with(&self.isometry()?, |x| {
            let y = p0.apply(x)?;
            let k = &h.matmul(&y) - &y.matmul(h);
            p0.apply(&k.scale(C64::new(0.0, -1.0)))
        })
    }

    /// `V† K V`.
    pub fn restricted_hamiltonian(&self) -> Result<DenseMatrix> {
        let v = self.isometry()?;
        Ok(v.adjoint().matmul(&self.physical).matmul(&v))
    }

    /// Largest entrywise deviation of the restricted generator from `−i[K_expected, ·]`.
    pub fn generator_deviation(&self) -> Result<f64> {
        let got = self.restricted_generator()?;
        let want = hamiltonian_super(&self.expected)?;
        Ok(got.matrix().max_abs_diff(want.matrix()))
    }
}

fn ket_bra_sym(d: usize, pairs: &[(usize, usize, f64)]) -> DenseMatrix {
    let mut m = DenseMatrix::zeros(d, d);
    for &(r, c, v) in pairs {
        m[(r, c)] += C64::new(v, 0.0);
        if r != c {
            m[(c, r)] += C64::new(v, 0.0);
        }
    }
    m
}

fn edge_case(label: &'static str, qubits: usize, kind: CouplingKind, g: f64, expected: DenseMatrix) -> Result<LogicalCase> {
    let mut network = dfs_network(qubits, &[1.0, 1.0])?;
    network.connect(0, 1, kind, g)?;
    let physical = network.perturbation()?;
    Ok(LogicalCase {
        label,
        network,
        qubits,
        physical,
        expected,
    })
}

/// Single-module `X̄`, `Z̄` generators and the two-module hop and `zz` couplings.
///
/// * `g√2 · I⊗σˣ` gives `g σ̄ˣ`.
/// * `g σᶻ⊗σᶻ` gives `g σ̄ᶻ`.
/// * `g(σ₂⁺⊗σ₁⁻ + h.c.)` gives `−(g/2)(|0̄1̄⟩⟨1̄0̄| + h.c.)`.
/// * `g σ₂ᶻ⊗σ₁ᶻ` gives `g |1̄1̄⟩⟨1̄1̄|`.
pub fn logical_generators(g: f64) -> Result<Vec<LogicalCase>> {
    let single = dfs_network(2, &[1.0])?;
    let layout = single.layout().clone();
    let x = embed(&pauli(Pauli::X).scale_real(g * 2f64.sqrt()), &[1], &layout)?;
    let z = pauli(Pauli::Z);
    let zz = z.kron(&z).scale_real(g);
    Ok(vec![
        LogicalCase {
            label: "x",
            network: single.clone(),
            qubits: 2,
            physical: x,
            expected: pauli(Pauli::X).scale_real(g),
        },
        LogicalCase {
            label: "z",
            network: single,
            qubits: 2,
            physical: zz,
            expected: pauli(Pauli::Z).scale_real(g),
        },
        edge_case("hop", 2, CouplingKind::Hop, g, ket_bra_sym(4, &[(1, 2, -g / 2.0)]))?,
        edge_case("zz", 2, CouplingKind::Zz, g, ket_bra_sym(4, &[(3, 3, g)]))?,
    ])
}

/// `g(σ₃⁺⊗σ₁⁻ + h.c.)` between two three-qubit modules: `g/√3` on
/// `|2̄0̄⟩↔|1̄2̄⟩` and `−g/3` on `|2̄1̄⟩↔|1̄2̄⟩`.
pub fn three_qubit_coupling(g: f64) -> Result<LogicalCase> {
    let expected = ket_bra_sym(9, &[(6, 5, g / 3f64.sqrt()), (7, 5, -g / 3.0)]);
    edge_case("three-qubit hop", 3, CouplingKind::Hop, g, expected)
}

/// First-order sweep model for two DFS modules joined by one edge.
pub fn two_module_model(kind: CouplingKind, g: f64, tau1: f64, tau2: f64) -> Result<(ProjectedModel, SteadyStructure)> {
    let mut net = dfs_network(2, &[tau1, tau2])?;
    net.connect(0, 1, kind, g)?;
    let l0 = net.unperturbed_liouvillian()?;
    let steady = SteadyStructure::with_default_tol(l0.assembled())?;
    let k = net.perturbation_super()?;
    let model = ProjectedModel::new(l0.assembled(), &k, &steady, Order::First)?;
    Ok((model, steady))
}

/// Checks that a Hermitian matrix has no entries outside the listed support.
pub fn support_is(m: &DenseMatrix, support: &[(usize, usize)]) -> bool {
    (0..m.rows()).all(|r| {
        (0..m.cols()).all(|c| support.contains(&(r, c)) || support.contains(&(c, r)) || m[(r, c)] == ZERO)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::effective::SweepModel;
    use crate::numerics::expm::expm;

    #[test]
    fn generators_match_closed_forms() {
        for g in [1.0, 0.37] {
            for case in logical_generators(g).unwrap() {
                let dev = case.generator_deviation().unwrap();
                assert!(dev < 1e-9, "{}: {dev:e}", case.label);
                let h = case.restricted_hamiltonian().unwrap();
                assert!(h.max_abs_diff(&case.expected) < 1e-12, "{}", case.label);
            }
        }
    }

    #[test]
    fn three_qubit_coefficients() {
        let case = three_qubit_coupling(1.0).unwrap();
        assert!(case.generator_deviation().unwrap() < 1e-9);
        let h = case.restricted_hamiltonian().unwrap();
        assert!((h[(6, 5)].re - 1.0 / 3f64.sqrt()).abs() < 1e-12);
        assert!((h[(7, 5)].re + 1.0 / 3.0).abs() < 1e-12);
        assert!(h.is_hermitian(1e-14));
        assert!(three_qubit_coupling(0.0).unwrap().restricted_hamiltonian().unwrap().max_abs() == 0.0);
    }

    #[test]
    fn restriction_of_identity_generator() {
        let v = logical_isometry(2, 1).unwrap();
        let r = logical_restriction(&SuperOperator::identity(4), &v).unwrap();
        assert!(r.matrix().max_abs_diff(&DenseMatrix::identity(4)) < 1e-15);
    }

    #[test]
    fn logical_gate_is_exact_unitary_channel() {
        let case = &logical_generators(1.0).unwrap()[0];
        let g = case.restricted_generator().unwrap();
        let t = 0.7;
        let channel = expm(&g.matrix().scale_real(t)).unwrap();
        let u = expm(&case.expected.scale(C64::new(0.0, -t))).unwrap();
        let ideal = crate::numerics::superop::sandwich_super(&u, &u.adjoint()).unwrap();
        assert!(channel.max_abs_diff(ideal.matrix()) < 1e-9);
    }

    #[test]
    fn first_order_error_halves_when_time_doubles() {
        let (model, steady) = two_module_model(CouplingKind::Hop, 1.0, 1.0, 0.5).unwrap();
        assert_eq!(steady.kernel_dim, 16);
        let a = model.error_at(1000.0).unwrap();
        let b = model.error_at(2000.0).unwrap();
        assert!((b / a - 0.5).abs() < 0.1, "ratio {}", b / a);
    }

    #[test]
    fn support_helper() {
        let m = ket_bra_sym(3, &[(0, 2, 1.0)]);
        assert!(support_is(&m, &[(0, 2)]));
        assert!(!support_is(&m, &[(1, 2)]));
    }
}
