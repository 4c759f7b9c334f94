//! Networks of dissipative modules coupled along graph edges.
//!
//! Each vertex carries its own dissipation; edges carry coupling
//! Hamiltonians stored un-embedded together with `(module, subsystem)`
//! anchors. Embedding happens when the global generator is assembled.

use std::collections::BTreeSet;
use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::lindblad::{hamiltonian_super, Liouvillian};
use crate::numerics::matrix::DenseMatrix;
use crate::numerics::superop::SuperOperator;
use crate::projector::{SteadyStructure, DEFAULT_ZERO_TOL};
use crate::spaces::{
    apply_embedded_super, collective, embed, embed_super, ladder, pauli, EmbedTables, ModuleSpace,
    Pauli, SpaceLayout,
};

/// Local dissipation model of one module.
#[derive(Clone, Debug, PartialEq)]
pub enum VertexKind {
    /// `N` qubits under collective amplitude damping `τ⁻¹ D[S⁻]`.
    CollectiveDamping { qubits: usize },
    /// Qubits plus a boson mode damped as `τ⁻¹ D[c]`, with the qubit-boson
    /// exchange `g(c S⁺ + c† S⁻)` as the local perturbation.
    Cavity { qubits: usize, n_max: usize, g: f64 },
    /// `N` qubits under collective dephasing `2τ⁻¹ D[Sᶻ]`; `τ` is then the
    /// dissipative time-scale of the module.
    Dephasing { qubits: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Vertex {
    pub kind: VertexKind,
    pub tau: f64,
}

impl Vertex {
    pub fn new(kind: VertexKind, tau: f64) -> Result<Self> {
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(Error::InvalidArgument(format!("vertex time-scale {tau} must be positive")));
        }
        let qubits = match &kind {
            VertexKind::CollectiveDamping { qubits }
            | VertexKind::Dephasing { qubits }
            | VertexKind::Cavity { qubits, .. } => *qubits,
        };
        if qubits == 0 {
            return Err(Error::InvalidArgument("vertex needs at least one qubit".into()));
        }
        if let VertexKind::Cavity { n_max, g, .. } = &kind {
            if *n_max < 1 {
                return Err(Error::InvalidArgument("cavity truncation must be at least 1".into()));
            }
            if !g.is_finite() {
                return Err(Error::InvalidArgument(format!("cavity coupling {g} is not finite")));
            }
        }
        Ok(Self { kind, tau })
    }

    pub fn qubits(&self) -> usize {
        match &self.kind {
            VertexKind::CollectiveDamping { qubits }
            | VertexKind::Dephasing { qubits }
            | VertexKind::Cavity { qubits, .. } => *qubits,
        }
    }

    pub fn space(&self) -> Result<ModuleSpace> {
        match &self.kind {
            VertexKind::Cavity { qubits, n_max, .. } => ModuleSpace::qubits_with_boson(*qubits, *n_max),
            _ => ModuleSpace::qubits(self.qubits()),
        }
    }

    /// Boson annihilation operator on the module, if it has a mode.
    fn boson(&self) -> Result<Option<DenseMatrix>> {
        match &self.kind {
            VertexKind::Cavity { qubits, n_max, .. } => {
                Ok(Some(DenseMatrix::identity(1 << qubits).kron(&ladder(*n_max)?)))
            }
            _ => Ok(None),
        }
    }

    /// Collective qubit operator on the full module space.
    fn collective_op(&self, kind: Pauli) -> Result<DenseMatrix> {
        let s = collective(kind, self.qubits())?;
        match &self.kind {
            VertexKind::Cavity { n_max, .. } => Ok(s.kron(&DenseMatrix::identity(n_max + 1))),
            _ => Ok(s),
        }
    }

    /// Lindblad operators with rates, on the module space.
    pub fn local_dissipators(&self) -> Result<Vec<(DenseMatrix, f64)>> {
        let rate = 1.0 / self.tau;
        Ok(match &self.kind {
            VertexKind::CollectiveDamping { .. } => vec![(self.collective_op(Pauli::Minus)?, rate)],
            VertexKind::Dephasing { .. } => vec![(self.collective_op(Pauli::Z)?, 2.0 * rate)],
            VertexKind::Cavity { .. } => vec![(self.boson()?.expect("cavity has a mode"), rate)],
        })
    }

    /// Unperturbed local generator.
    pub fn local_liouvillian(&self) -> Result<Liouvillian> {
        Liouvillian::dissipative(self.local_dissipators()?)
    }

    /// Local perturbation Hamiltonian (nonzero only for cavities).
    pub fn local_perturbation(&self) -> Result<Option<DenseMatrix>> {
        match &self.kind {
            VertexKind::Cavity { g, .. } => {
                let c = self.boson()?.expect("cavity has a mode");
                let sp = self.collective_op(Pauli::Plus)?;
                let term = c.matmul(&sp);
                Ok(Some((&term + &term.adjoint()).scale_real(*g)))
            }
            _ => Ok(None),
        }
    }
}

/// Named edge couplings.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CouplingKind {
    /// `σ⁺_last(i) σ⁻_first(j) + h.c.`
    Hop,
    /// `σᶻ_last(i) σᶻ_first(j)`
    Zz,
    /// `S⁺_i S⁻_j + h.c.`
    CollectiveHop,
    /// `c_i† c_j + h.c.`; part of the unperturbed generator.
    BosonHop,
}

#[derive(Clone, Debug)]
pub struct Edge {
    pub i: usize,
    pub j: usize,
    pub strength: f64,
    /// Unit-strength operator on the anchored subsystems, in anchor order.
    pub operator: DenseMatrix,
    /// `(module, local subsystem)` pairs the operator acts on.
    pub anchors: Vec<(usize, usize)>,
    /// Whether the edge belongs to the unperturbed generator rather than the perturbation.
    pub unperturbed: bool,
    pub label: String,
}

impl Edge {
    /// Arbitrary Hermitian coupling on anchored subsystems.
    pub fn custom(
        i: usize,
        j: usize,
        operator: DenseMatrix,
        anchors: Vec<(usize, usize)>,
        strength: f64,
        unperturbed: bool,
    ) -> Result<Self> {
        if anchors.iter().any(|a| a.0 != i && a.0 != j) {
            return Err(Error::InvalidArgument(format!(
                "edge ({i}, {j}) anchored outside its end points"
            )));
        }
        if !operator.is_hermitian(1e-10) {
            return Err(Error::NotHermitian {
                deviation: operator.hermiticity_defect(),
            });
        }
        Ok(Self {
            i,
            j,
            strength,
            operator,
            anchors,
            unperturbed,
            label: "custom".into(),
        })
    }

    /// Hamiltonian `strength · operator`.
    pub fn hamiltonian(&self) -> DenseMatrix {
        self.operator.scale_real(self.strength)
    }
}

/// Graph of modules with local dissipation and coupling edges.
#[derive(Clone, Debug)]
pub struct DgmNetwork {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    layout: SpaceLayout,
}

impl DgmNetwork {
    pub fn new(vertices: Vec<Vertex>) -> Result<Self> {
        let layout = SpaceLayout::new(vertices.iter().map(Vertex::space).collect::<Result<_>>()?)?;
        Ok(Self {
            vertices,
            edges: Vec::new(),
            layout,
        })
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn layout(&self) -> &SpaceLayout {
        &self.layout
    }

    pub fn dim(&self) -> usize {
        self.layout.dim()
    }

    fn check_pair(&self, i: usize, j: usize) -> Result<()> {
        let n = self.vertices.len();
        if i >= n || j >= n {
            return Err(Error::InvalidArgument(format!("edge ({i}, {j}) outside {n} vertices")));
        }
        if i == j {
            return Err(Error::InvalidArgument(format!("self-loop on vertex {i}")));
        }
        let key = (i.min(j), i.max(j));
        if self.edges.iter().any(|e| (e.i.min(e.j), e.i.max(e.j)) == key) {
            return Err(Error::InvalidArgument(format!("duplicate edge ({i}, {j})")));
        }
        Ok(())
    }

    /// Adds a named coupling between vertices `i` and `j`.
    pub fn connect(&mut self, i: usize, j: usize, kind: CouplingKind, strength: f64) -> Result<()> {
        self.check_pair(i, j)?;
        if !strength.is_finite() {
            return Err(Error::InvalidArgument(format!("edge strength {strength} is not finite")));
        }
        let (vi, vj) = (&self.vertices[i], &self.vertices[j]);
        let last_i = vi.qubits() - 1;
        let (sp, sm) = (pauli(Pauli::Plus), pauli(Pauli::Minus));
        let (operator, anchors, unperturbed) = match kind {
            CouplingKind::Hop => {
                let t = sp.kron(&sm);
                (&t + &t.adjoint(), vec![(i, last_i), (j, 0)], false)
            }
            CouplingKind::Zz => {
                let z = pauli(Pauli::Z);
                (z.kron(&z), vec![(i, last_i), (j, 0)], false)
            }
            CouplingKind::CollectiveHop => {
                let t = collective(Pauli::Plus, vi.qubits())?.kron(&collective(Pauli::Minus, vj.qubits())?);
                let anchors = (0..vi.qubits()).map(|q| (i, q)).chain((0..vj.qubits()).map(|q| (j, q))).collect();
                (&t + &t.adjoint(), anchors, false)
            }
            CouplingKind::BosonHop => {
                let (VertexKind::Cavity { n_max: ni, .. }, VertexKind::Cavity { n_max: nj, .. }) =
                    (&vi.kind, &vj.kind)
                else {
                    return Err(Error::InvalidArgument(format!(
                        "boson hop between vertices {i} and {j} needs two cavities"
                    )));
                };
                let t = ladder(*ni)?.adjoint().kron(&ladder(*nj)?);
                let anchors = vec![(i, vi.qubits()), (j, vj.qubits())];
                (&t + &t.adjoint(), anchors, true)
            }
        };
        self.edges.push(Edge {
            i,
            j,
            strength,
            operator,
            anchors,
            unperturbed,
            label: format!("{kind:?}").to_lowercase(),
        });
        Ok(())
    }

    /// Adds a pre-built edge.
    pub fn add_edge(&mut self, edge: Edge) -> Result<()> {
        self.check_pair(edge.i, edge.j)?;
        let expect: usize = edge
            .anchors
            .iter()
            .map(|&(m, l)| self.layout.modules()[m].dims().get(l).copied().unwrap_or(0))
            .product();
        if expect != edge.operator.rows() {
            return Err(Error::Dimension(format!(
                "edge operator is {}x{} but anchors span {expect}",
                edge.operator.rows(),
                edge.operator.cols()
            )));
        }
        self.edges.push(edge);
        Ok(())
    }

    fn positions(&self, anchors: &[(usize, usize)]) -> Result<Vec<usize>> {
        anchors.iter().map(|&(m, l)| self.layout.position(m, l)).collect()
    }

    /// Edge Hamiltonian embedded in the global space.
    pub fn embedded_edge(&self, e: &Edge) -> Result<DenseMatrix> {
        embed(&e.hamiltonian(), &self.positions(&e.anchors)?, &self.layout)
    }

    fn embedded_local(&self, v: usize, op: &DenseMatrix) -> Result<DenseMatrix> {
        embed(op, &self.layout.module_positions(v)?, &self.layout)
    }

    /// Global Lindblad operators of every vertex.
    pub fn global_dissipators(&self) -> Result<Vec<(DenseMatrix, f64)>> {
        let mut out = Vec::new();
        for (v, vert) in self.vertices.iter().enumerate() {
            for (l, r) in vert.local_dissipators()? {
                out.push((self.embedded_local(v, &l)?, r));
            }
        }
        Ok(out)
    }

    /// Hamiltonian part of the unperturbed generator (unperturbed edges only).
    pub fn unperturbed_hamiltonian(&self) -> Result<Option<DenseMatrix>> {
        let mut h: Option<DenseMatrix> = None;
        for e in self.edges.iter().filter(|e| e.unperturbed) {
            let term = self.embedded_edge(e)?;
            h = Some(match h {
                Some(acc) => &acc + &term,
                None => term,
            });
        }
        Ok(h)
    }

    /// Perturbation Hamiltonian `K`: perturbing edges plus local cavity exchange.
    pub fn perturbation(&self) -> Result<DenseMatrix> {
        let mut k = DenseMatrix::zeros(self.dim(), self.dim());
        for e in self.edges.iter().filter(|e| !e.unperturbed) {
            k += &self.embedded_edge(e)?;
        }
        for (v, vert) in self.vertices.iter().enumerate() {
            if let Some(op) = vert.local_perturbation()? {
                k += &self.embedded_local(v, &op)?;
            }
        }
        Ok(k)
    }

    /// `𝓛₀`: local dissipation plus unperturbed edges.
    pub fn unperturbed_liouvillian(&self) -> Result<Liouvillian> {
        Liouvillian::new(self.unperturbed_hamiltonian()?, self.global_dissipators()?)
    }

    /// `𝓚 = −i[K, ·]`.
    pub fn perturbation_super(&self) -> Result<SuperOperator> {
        hamiltonian_super(&self.perturbation()?)
    }

    /// Full generator with every edge and local perturbation switched on.
    pub fn global_liouvillian(&self) -> Result<Liouvillian> {
        let k = self.perturbation()?;
        let h = match self.unperturbed_hamiltonian()? {
            Some(h0) => &h0 + &k,
            None => k,
        };
        Liouvillian::new(Some(h), self.global_dissipators()?)
    }

    /// Tensor product of the local steady projectors.
    ///
    /// Fails when an unperturbed edge couples modules, since the projector
    /// then no longer factorizes.
    pub fn global_projector(&self) -> Result<FactorizedSuper> {
        self.global_projector_with_tol(DEFAULT_ZERO_TOL)
    }

    pub fn global_projector_with_tol(&self, tol: f64) -> Result<FactorizedSuper> {
        if self.edges.iter().any(|e| e.unperturbed) {
            return Err(Error::InvalidArgument(
                "unperturbed edges couple modules; the steady projector does not factorize".into(),
            ));
        }
        let mut factors = Vec::with_capacity(self.vertices.len());
        let mut kernel_dim = 1;
        for (v, vert) in self.vertices.iter().enumerate() {
            let l = vert.local_liouvillian()?;
            let st = SteadyStructure::new(l.assembled(), tol)?;
            kernel_dim *= st.kernel_dim;
            let positions = self.layout.module_positions(v)?;
            let tables = EmbedTables::new(&positions, &self.layout)?;
            factors.push(Factor {
                local: st.p0,
                positions,
                tables,
            });
        }
        Ok(FactorizedSuper {
            layout: self.layout.clone(),
            factors,
            kernel_dim,
        })
    }

    /// `J_max · |E| · τ_max` over perturbing edges.
    pub fn error_budget(&self) -> f64 {
        let pert: Vec<&Edge> = self.edges.iter().filter(|e| !e.unperturbed).collect();
        if pert.is_empty() {
            return 0.0;
        }
        let j_max = pert.iter().map(|e| e.strength.abs()).fold(0.0, f64::max);
        let tau = self.vertices.iter().map(|v| v.tau).fold(0.0, f64::max);
        j_max * pert.len() as f64 * tau
    }
}

#[derive(Clone, Debug)]
struct Factor {
    local: SuperOperator,
    positions: Vec<usize>,
    tables: EmbedTables,
}

/// Tensor product of superoperators acting on disjoint modules.
#[derive(Clone, Debug)]
pub struct FactorizedSuper {
    layout: SpaceLayout,
    factors: Vec<Factor>,
    kernel_dim: usize,
}

impl FactorizedSuper {
    /// Product of the local kernel dimensions.
    pub fn kernel_dim(&self) -> usize {
        self.kernel_dim
    }

    pub fn layout(&self) -> &SpaceLayout {
        &self.layout
    }

    pub fn local(&self, v: usize) -> Option<&SuperOperator> {
        self.factors.get(v).map(|f| &f.local)
    }

    /// Applies every local factor in turn without forming the global matrix.
    pub fn apply(&self, x: &DenseMatrix) -> Result<DenseMatrix> {
        let mut y = x.clone();
        for f in &self.factors {
            y = apply_embedded_super(&f.local, &f.tables, &y)?;
        }
        Ok(y)
    }

    /// Dense global superoperator.
    pub fn to_dense(&self) -> Result<SuperOperator> {
        let mut out = SuperOperator::identity(self.layout.dim());
        for f in &self.factors {
            out = embed_super(&f.local, &f.positions, &self.layout)?.compose(&out)?;
        }
        Ok(out)
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct NetworkFile {
    #[serde(default, rename = "vertex")]
    vertices: Vec<VertexConfig>,
    #[serde(default, rename = "edge")]
    edges: Vec<EdgeConfig>,
}

#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum VertexType {
    Dfs2,
    Dfs3,
    Jc,
    Zdephase,
}

/// One `[[vertex]]` table.
#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct VertexConfig {
    pub kind: VertexType,
    pub tau: f64,
    /// Boson truncation for `jc` vertices (default 2).
    pub n_max: Option<usize>,
    /// Qubit-boson exchange for `jc` vertices (default 1).
    pub g: Option<f64>,
    /// Qubit count for `jc` and `zdephase` vertices (default 1).
    pub qubits: Option<usize>,
}

/// One `[[edge]]` table.
#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct EdgeConfig {
    pub i: usize,
    pub j: usize,
    pub coupling: CouplingKind,
    pub strength: f64,
}

/// Parsed network description.
#[derive(Clone, Debug, PartialEq)]
pub struct NetworkConfig {
    pub vertices: Vec<VertexConfig>,
    pub edges: Vec<EdgeConfig>,
}

impl NetworkConfig {
    pub fn from_toml_str(s: &str) -> Result<Self> {
        let f: NetworkFile = toml::from_str(s).map_err(|e| Error::Config(e.to_string()))?;
        Ok(Self {
            vertices: f.vertices,
            edges: f.edges,
        })
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let s = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml_str(&s)
    }

    pub fn build(&self) -> Result<DgmNetwork> {
        if self.vertices.is_empty() {
            return Err(Error::Config("network has no vertices".into()));
        }
        let vertices = self
            .vertices
            .iter()
            .map(|v| {
                let kind = match v.kind {
                    VertexType::Dfs2 => VertexKind::CollectiveDamping { qubits: 2 },
                    VertexType::Dfs3 => VertexKind::CollectiveDamping { qubits: 3 },
                    VertexType::Zdephase => VertexKind::Dephasing {
                        qubits: v.qubits.unwrap_or(1),
                    },
                    VertexType::Jc => VertexKind::Cavity {
                        qubits: v.qubits.unwrap_or(1),
                        n_max: v.n_max.unwrap_or(2),
                        g: v.g.unwrap_or(1.0),
                    },
                };
                Vertex::new(kind, v.tau)
            })
            .collect::<Result<Vec<_>>>()
            .map_err(|e| Error::Config(e.to_string()))?;
        let mut net = DgmNetwork::new(vertices)?;
        let mut seen = BTreeSet::new();
        for e in &self.edges {
            if !seen.insert((e.i.min(e.j), e.i.max(e.j))) {
                return Err(Error::Config(format!("duplicate edge ({}, {})", e.i, e.j)));
            }
            net.connect(e.i, e.j, e.coupling, e.strength)
                .map_err(|err| Error::Config(err.to_string()))?;
        }
        Ok(net)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lindblad::propagate;
    use crate::numerics::hermitian::spectral_norm;
    use crate::numerics::testing::random_matrix;
    use crate::projector::steady_projector;

    fn dfs_pair(g: f64) -> DgmNetwork {
        let mut net = DgmNetwork::new(vec![
            Vertex::new(VertexKind::CollectiveDamping { qubits: 2 }, 1.0).unwrap(),
            Vertex::new(VertexKind::CollectiveDamping { qubits: 2 }, 0.5).unwrap(),
        ])
        .unwrap();
        net.connect(0, 1, CouplingKind::Hop, g).unwrap();
        net
    }

    #[test]
    fn single_vertex_is_local_liouvillian() {
        let v = Vertex::new(VertexKind::CollectiveDamping { qubits: 2 }, 2.0).unwrap();
        let net = DgmNetwork::new(vec![v.clone()]).unwrap();
        let a = net.unperturbed_liouvillian().unwrap();
        assert_eq!(a.assembled(), v.local_liouvillian().unwrap().assembled());
    }

    #[test]
    fn hop_edge_anchors_last_and_first_qubit() {
        let net = dfs_pair(1.0);
        let k = net.perturbation().unwrap();
        let i2 = DenseMatrix::identity(2);
        let (sp, sm) = (pauli(Pauli::Plus), pauli(Pauli::Minus));
        let t = i2.kron(&sp).kron(&sm).kron(&i2);
        assert!(k.max_abs_diff(&(&t + &t.adjoint())) < 1e-15);
        assert_eq!(net.dim(), 16);
    }

    #[test]
    fn disconnected_propagator_factorizes() {
        let net = DgmNetwork::new(vec![
            Vertex::new(VertexKind::CollectiveDamping { qubits: 2 }, 1.0).unwrap(),
            Vertex::new(VertexKind::Dephasing { qubits: 1 }, 0.7).unwrap(),
        ])
        .unwrap();
        let e = net.unperturbed_liouvillian().unwrap().propagate(0.9).unwrap();
        let ea = net.vertices()[0].local_liouvillian().unwrap().propagate(0.9).unwrap();
        let eb = net.vertices()[1].local_liouvillian().unwrap().propagate(0.9).unwrap();
        let xa = random_matrix(4, 4, 1);
        let xb = random_matrix(2, 2, 2);
        let joint = e.apply(&xa.kron(&xb)).unwrap();
        let sep = ea.apply(&xa).unwrap().kron(&eb.apply(&xb).unwrap());
        assert!(joint.max_abs_diff(&sep) < 1e-12);
    }

    #[test]
    fn factorized_projector_matches_global() {
        let net = dfs_pair(1.0);
        let fp = net.global_projector().unwrap();
        assert_eq!(fp.kernel_dim(), 16);
        let l0 = net.unperturbed_liouvillian().unwrap();
        let (p_glob, k) = steady_projector(l0.assembled(), DEFAULT_ZERO_TOL).unwrap();
        assert_eq!(k, 16);
        let dense = fp.to_dense().unwrap();
        assert!(spectral_norm(&(dense.matrix() - p_glob.matrix())).unwrap() < 1e-9);
        let x = random_matrix(16, 16, 4);
        assert!(fp.apply(&x).unwrap().max_abs_diff(&dense.apply(&x).unwrap()) < 1e-12);
        let comm = &dense.matrix().matmul(l0.assembled().matrix()) - &l0.assembled().matrix().matmul(dense.matrix());
        assert!(comm.max_abs() < 1e-9);
        // Idempotent and trace preserving.
        assert!(dense.compose(&dense).unwrap().matrix().max_abs_diff(dense.matrix()) < 1e-12);
        assert!(dense.trace_defect().iter().all(|z| z.norm() < 1e-12));
    }

    #[test]
    fn projector_fixes_product_of_steady_states() {
        let net = dfs_pair(1.0);
        let fp = net.global_projector().unwrap();
        let la = net.vertices()[0].local_liouvillian().unwrap();
        let lb = net.vertices()[1].local_liouvillian().unwrap();
        let seed = DenseMatrix::identity(4).scale_real(0.25);
        let ra = propagate(la.assembled(), 50.0).unwrap().apply(&seed).unwrap();
        let rb = propagate(lb.assembled(), 50.0).unwrap().apply(&seed).unwrap();
        let rho = ra.kron(&rb);
        assert!(fp.apply(&rho).unwrap().max_abs_diff(&rho) < 1e-10);
    }

    #[test]
    fn error_budget_cases() {
        let lone = DgmNetwork::new(vec![Vertex::new(VertexKind::CollectiveDamping { qubits: 2 }, 1.0).unwrap()]).unwrap();
        assert_eq!(lone.error_budget(), 0.0);
        let net = dfs_pair(0.3);
        assert!((net.error_budget() - 0.3).abs() < 1e-15);
        let mut three = DgmNetwork::new(vec![
            Vertex::new(VertexKind::CollectiveDamping { qubits: 2 }, 1.0).unwrap(),
            Vertex::new(VertexKind::CollectiveDamping { qubits: 2 }, 1.0).unwrap(),
            Vertex::new(VertexKind::CollectiveDamping { qubits: 2 }, 1.0).unwrap(),
        ])
        .unwrap();
        three.connect(0, 1, CouplingKind::Hop, 0.3).unwrap();
        let one = three.error_budget();
        three.connect(1, 2, CouplingKind::Hop, 0.3).unwrap();
        assert!((three.error_budget() - 2.0 * one).abs() < 1e-15);
    }

    #[test]
    fn invalid_edges_rejected() {
        let mut net = dfs_pair(1.0);
        assert!(net.connect(0, 1, CouplingKind::Zz, 1.0).is_err());
        assert!(net.connect(1, 0, CouplingKind::Zz, 1.0).is_err());
        assert!(net.connect(0, 0, CouplingKind::Zz, 1.0).is_err());
        assert!(net.connect(0, 5, CouplingKind::Zz, 1.0).is_err());
        let mut other = DgmNetwork::new(net.vertices().to_vec()).unwrap();
        assert!(other.connect(0, 1, CouplingKind::BosonHop, 1.0).is_err());
    }

    #[test]
    fn cavity_network_does_not_factorize() {
        let cav = |g| Vertex::new(VertexKind::Cavity { qubits: 1, n_max: 2, g }, 1.0).unwrap();
        let mut net = DgmNetwork::new(vec![cav(1.0), cav(0.5)]).unwrap();
        net.connect(0, 1, CouplingKind::BosonHop, 0.5).unwrap();
        assert_eq!(net.dim(), 36);
        assert!(net.global_projector().is_err());
        assert_eq!(net.error_budget(), 0.0);
        let l = net.global_liouvillian().unwrap();
        assert!(l.trace_defect() < 1e-12);
    }

    #[test]
    fn config_round_trip() {
        let cfg = NetworkConfig::from_toml_str(
            r#"
            [[vertex]]
            kind = "dfs2"
            tau = 1.0

            [[vertex]]
            kind = "dfs2"
            tau = 0.5

            [[edge]]
            i = 0
            j = 1
            coupling = "hop"
            strength = 1.0
            "#,
        )
        .unwrap();
        let net = cfg.build().unwrap();
        assert!(net.perturbation().unwrap().max_abs_diff(&dfs_pair(1.0).perturbation().unwrap()) < 1e-15);
        assert!(NetworkConfig::from_toml_str("[[vertex]]\nkind = \"dfs2\"\ntau = 1.0\ncolour = 3\n").is_err());
        assert!(NetworkConfig::from_toml_str("[[vertex]]\nkind = \"dfs9\"\ntau = 1.0\n").is_err());
        let bad_tau = NetworkConfig::from_toml_str("[[vertex]]\nkind = \"dfs2\"\ntau = -1.0\n").unwrap();
        assert!(matches!(bad_tau.build(), Err(Error::Config(_))));
    }
}
