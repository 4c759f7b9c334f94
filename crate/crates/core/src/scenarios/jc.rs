//! Two coupled Jaynes-Cummings cavities with damped, hopping modes.
//!
//! The unperturbed generator is the boson hop `J(c_A†c_B + h.c.)` plus
//! `τ⁻¹D[c_α]`; the perturbation is `Σ g_α(c_α S_α⁺ + h.c.)` plus the optional
//! free part `Σ ω^q_α S^z_α + ω_α c_α†c_α`. The steady sector is
//! (qubits) ⊗ vacuum, so the effective dynamics live on the qubits alone.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lindblad::{hamiltonian_super, Liouvillian};
use crate::numerics::matrix::{DenseMatrix, C64};
use crate::numerics::superop::{devectorize, vectorize, SuperOperator};
use crate::projector::{SpectralResiduals, SteadyStructure};
use crate::scenarios::metrics::{coherence, concurrence};
use crate::spaces::{
    apply_embedded_super, collective, embed, ladder, partial_trace, EmbedTables, ModuleSpace, Pauli,
    SpaceLayout,
};

/// Parameters of the coupled-cavity model, in arbitrary units.
#[derive(Clone, Debug, PartialEq)]
pub struct JcParams {
    pub g_a: f64,
    pub g_b: f64,
    /// Boson hopping strength.
    pub j: f64,
    /// Cavity decay time.
    pub tau: f64,
    /// Mode frequencies.
    pub omega_a: f64,
    pub omega_b: f64,
    /// Qubit frequencies.
    pub omega_q_a: f64,
    pub omega_q_b: f64,
    /// Qubits per cavity; module B may be a bare cavity.
    pub n_a: usize,
    pub n_b: usize,
    pub n_max: usize,
}

impl Default for JcParams {
    fn default() -> Self {
        Self {
            g_a: 1.0,
            g_b: 1.0,
            j: 0.5,
            tau: 1.0,
            omega_a: 0.0,
            omega_b: 0.0,
            omega_q_a: 0.0,
            omega_q_b: 0.0,
            n_a: 1,
            n_b: 1,
            n_max: 2,
        }
    }
}

impl JcParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.tau > 0.0 && self.tau.is_finite()) {
            return Err(Error::InvalidArgument(format!("cavity decay time {} must be positive", self.tau)));
        }
        if self.n_max < 2 {
            return Err(Error::InvalidArgument(format!(
                "boson truncation {} too small, need at least 2",
                self.n_max
            )));
        }
        if self.n_a == 0 {
            return Err(Error::InvalidArgument("cavity A needs at least one qubit".into()));
        }
        let vals = [self.g_a, self.g_b, self.j, self.omega_a, self.omega_b, self.omega_q_a, self.omega_q_b];
        if vals.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("non-finite JC parameter".into()));
        }
        Ok(())
    }

    /// Qubit-space dimension `2^{N_A + N_B}`.
    pub fn qubit_dim(&self) -> usize {
        1 << (self.n_a + self.n_b)
    }
}

/// Closed-form effective rates and coupling.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JcAnalytic {
    /// `τ_eff,α⁻¹ = 4τg_α² / (1 + 4J²τ²)`.
    pub tau_eff_inv: [f64; 2],
    /// `J_eff = −4J g_A g_B τ² / (1 + 4J²τ²)`.
    pub j_eff: f64,
}

pub fn jc_effective_analytic(p: &JcParams) -> JcAnalytic {
    let den = 1.0 + 4.0 * (p.j * p.tau).powi(2);
    JcAnalytic {
        tau_eff_inv: [4.0 * p.tau * p.g_a * p.g_a / den, 4.0 * p.tau * p.g_b * p.g_b / den],
        j_eff: -4.0 * p.j * p.g_a * p.g_b * p.tau * p.tau / den,
    }
}

fn qubit_collective(kind: Pauli, module: usize, p: &JcParams) -> Result<DenseMatrix> {
    let (na, nb) = (p.n_a, p.n_b);
    let id = |n: usize| DenseMatrix::identity(1 << n);
    Ok(if module == 0 {
        collective(kind, na)?.kron(&id(nb))
    } else {
        id(na).kron(&collective(kind, nb)?)
    })
}

/// Effective Liouvillian on the qubits:
/// `−i[J_eff(S_A⁺S_B⁻ + h.c.) + Σ ω^q_α S^z_α, ·] + Σ τ_eff,α⁻¹ D[S_α⁻]`.
pub fn jc_analytic_liouvillian(p: &JcParams) -> Result<Liouvillian> {
    p.validate()?;
    let a = jc_effective_analytic(p);
    let mut h = qubit_collective(Pauli::Z, 0, p)?.scale_real(p.omega_q_a);
    let mut ops = vec![(qubit_collective(Pauli::Minus, 0, p)?, a.tau_eff_inv[0])];
    if p.n_b > 0 {
        let hop = qubit_collective(Pauli::Plus, 0, p)?.matmul(&qubit_collective(Pauli::Minus, 1, p)?);
        h += &(&hop + &hop.adjoint()).scale_real(a.j_eff);
        h += &qubit_collective(Pauli::Z, 1, p)?.scale_real(p.omega_q_b);
        ops.push((qubit_collective(Pauli::Minus, 1, p)?, a.tau_eff_inv[1]));
    }
    Liouvillian::new(Some(h), ops)
}

/// Truncated full model with structured access to `𝓟₀` and `𝓢`.
#[derive(Clone, Debug)]
pub struct JcModel {
    params: JcParams,
    layout: SpaceLayout,
    qubit_pos: Vec<usize>,
    boson_pos: Vec<usize>,
    boson_tables: EmbedTables,
    boson_l0: SuperOperator,
    boson_steady: SteadyStructure,
    h_ab: DenseMatrix,
    k_int: DenseMatrix,
    k_free: DenseMatrix,
    c: [DenseMatrix; 2],
}

impl JcModel {
    pub fn new(p: &JcParams) -> Result<Self> {
        p.validate()?;
        let nb_dim = p.n_max + 1;
        let mut dims_a = vec![2; p.n_a];
        dims_a.push(nb_dim);
        let mut dims_b = vec![2; p.n_b];
        dims_b.push(nb_dim);
        let layout = SpaceLayout::new(vec![ModuleSpace::new(dims_a)?, ModuleSpace::new(dims_b)?])?;
        let qubit_pos: Vec<usize> = (0..p.n_a).chain(p.n_a + 1..p.n_a + 1 + p.n_b).collect();
        let boson_pos = vec![p.n_a, p.n_a + 1 + p.n_b];

        // Boson pair on its own: hop plus damping.
        let c = ladder(p.n_max)?;
        let idb = DenseMatrix::identity(nb_dim);
        let (ca, cb) = (c.kron(&idb), idb.kron(&c));
        let hop_b = ca.adjoint().matmul(&cb);
        let h_pair = (&hop_b + &hop_b.adjoint()).scale_real(p.j);
        let rate = 1.0 / p.tau;
        let pair = Liouvillian::new(Some(h_pair.clone()), vec![(ca.clone(), rate), (cb.clone(), rate)])?;
        let boson_steady = SteadyStructure::with_default_tol(pair.assembled())?;
        if boson_steady.kernel_dim != 1 {
            return Err(Error::InvalidArgument(format!(
                "boson pair has {} steady states, expected the vacuum only",
                boson_steady.kernel_dim
            )));
        }

        let on_bosons = |x: &DenseMatrix| embed(x, &boson_pos, &layout);
        let c_full = [on_bosons(&ca)?, on_bosons(&cb)?];
        let h_ab = on_bosons(&h_pair)?;
        let q_op = |kind, module| -> Result<DenseMatrix> {
            embed(&qubit_collective(kind, module, p)?, &qubit_pos, &layout)
        };
        let mut k_int = DenseMatrix::zeros(layout.dim(), layout.dim());
        let mut k_free = on_bosons(&(&ca.adjoint().matmul(&ca).scale_real(p.omega_a)
            + &cb.adjoint().matmul(&cb).scale_real(p.omega_b)))?;
        for (m, g, wq, n) in [(0, p.g_a, p.omega_q_a, p.n_a), (1, p.g_b, p.omega_q_b, p.n_b)] {
            if n == 0 {
                continue;
            }
            let t = c_full[m].matmul(&q_op(Pauli::Plus, m)?);
            k_int += &(&t + &t.adjoint()).scale_real(g);
            k_free += &q_op(Pauli::Z, m)?.scale_real(wq);
        }
        let boson_tables = EmbedTables::new(&boson_pos, &layout)?;
        Ok(Self {
            params: p.clone(),
            layout,
            qubit_pos,
            boson_pos,
            boson_tables,
            boson_l0: pair.assembled().clone(),
            boson_steady,
            h_ab,
            k_int,
            k_free,
            c: c_full,
        })
    }

    pub fn params(&self) -> &JcParams {
        &self.params
    }

    pub fn layout(&self) -> &SpaceLayout {
        &self.layout
    }

    pub fn dim(&self) -> usize {
        self.layout.dim()
    }

    /// Spectral identities of the boson-pair generator. The full `𝓛₀` is the
    /// identity on the qubits tensored with it, so the residuals coincide.
    pub fn boson_residuals(&self) -> Result<SpectralResiduals> {
        self.boson_steady.residuals(&self.boson_l0)
    }

    pub fn boson_steady(&self) -> &SteadyStructure {
        &self.boson_steady
    }

    /// Dense full `𝓛₀` on the whole layout.
    pub fn unperturbed_liouvillian(&self) -> Result<Liouvillian> {
        let rate = 1.0 / self.params.tau;
        Liouvillian::new(
            Some(self.h_ab.clone()),
            vec![(self.c[0].clone(), rate), (self.c[1].clone(), rate)],
        )
    }

    /// Interaction `Σ g_α(c_α S_α⁺ + h.c.)`.
    pub fn interaction(&self) -> &DenseMatrix {
        &self.k_int
    }

    /// Free part `Σ ω^q_α S^z_α + ω_α c_α†c_α`.
    pub fn free_part(&self) -> &DenseMatrix {
        &self.k_free
    }

    /// `x ⊗ |vac⟩⟨vac|` for a qubit operator `x`.
    pub fn lift(&self, x: &DenseMatrix) -> Result<DenseMatrix> {
        let nb = self.params.n_max + 1;
        let mut vac = DenseMatrix::zeros(nb * nb, nb * nb);
        vac[(0, 0)] = C64::new(1.0, 0.0);
        let xq = embed(x, &self.qubit_pos, &self.layout)?;
        Ok(xq.matmul(&embed(&vac, &self.boson_pos, &self.layout)?))
    }

    /// Partial trace over both modes.
    pub fn lower(&self, x: &DenseMatrix) -> Result<DenseMatrix> {
        partial_trace(x, &self.qubit_pos, &self.layout)
    }

    pub fn apply_p0(&self, x: &DenseMatrix) -> Result<DenseMatrix> {
        apply_embedded_super(&self.boson_steady.p0, &self.boson_tables, x)
    }

    pub fn apply_s(&self, x: &DenseMatrix) -> Result<DenseMatrix> {
        apply_embedded_super(&self.boson_steady.s, &self.boson_tables, x)
    }

    fn commutator(k: &DenseMatrix, x: &DenseMatrix) -> DenseMatrix {
        k.commutator(x).scale(C64::new(0.0, -1.0))
    }

    /// Qubit-space superoperator built column by column from `f(lift(E_rc))`, lowered.
    fn qubit_super<F>(&self, f: F) -> Result<SuperOperator>
    where
        F: Fn(&DenseMatrix) -> Result<DenseMatrix> + Sync,
    {
        let d = self.params.qubit_dim();
        let cols = (0..d * d)
            .into_par_iter()
            .map(|k| {
                let mut e = DenseMatrix::zeros(d, d);
                e[(k % d, k / d)] = C64::new(1.0, 0.0);
                vectorize(&self.lower(&f(&self.lift(&e)?)?)?)
            })
            .collect::<Result<Vec<_>>>()?;
        let mut m = DenseMatrix::zeros(d * d, d * d);
        for (k, col) in cols.iter().enumerate() {
            for (r, v) in col.iter().enumerate() {
                m[(r, k)] = *v;
            }
        }
        SuperOperator::new(d, m)
    }

    /// `𝓟₀𝓚₀𝓟₀ − 𝓟₀𝓚_int𝓢𝓚_int𝓟₀` restricted to the qubits.
    pub fn numeric_effective(&self) -> Result<SuperOperator> {
        self.qubit_super(|x| {
            let y = Self::commutator(&self.k_int, &self.apply_s(&Self::commutator(&self.k_int, x))?);
            let first = Self::commutator(&self.k_free, x);
            self.apply_p0(&(&first - &y))
        })
    }

    /// `𝓟₀𝓚_int𝓟₀` restricted to the qubits; vanishes identically.
    pub fn first_order_part(&self) -> Result<SuperOperator> {
        self.qubit_super(|x| self.apply_p0(&Self::commutator(&self.k_int, x)))
    }
}

/// Numeric second-order generator on the qubits for the given parameters.
pub fn jc_numeric_effective(p: &JcParams) -> Result<SuperOperator> {
    JcModel::new(p)?.numeric_effective()
}

/// `‖numeric − analytic‖₂ / ‖analytic‖₂`.
pub fn jc_relative_deviation(p: &JcParams) -> Result<f64> {
    let num = jc_numeric_effective(p)?;
    let ana = jc_analytic_liouvillian(p)?;
    let diff = num.matrix() - ana.assembled().matrix();
    let scale = crate::numerics::hermitian::spectral_norm(ana.assembled().matrix())?;
    Ok(crate::numerics::hermitian::spectral_norm(&diff)? / scale.max(f64::MIN_POSITIVE))
}

fn plus_state() -> DenseMatrix {
    DenseMatrix::from_real(2, 2, &[0.5, 0.5, 0.5, 0.5]).expect("2x2")
}

fn bell_state() -> DenseMatrix {
    let mut m = DenseMatrix::zeros(4, 4);
    for (r, c) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
        m[(r, c)] = C64::new(0.5, 0.0);
    }
    m
}

/// Qubit state after the effective dynamics over time `T`.
pub fn effective_state(p: &JcParams, rho0: &DenseMatrix, t: f64) -> Result<DenseMatrix> {
    jc_analytic_liouvillian(p)?.propagate(t)?.apply(rho0)
}

/// Coherence of qubit A, started in `|+⟩`, after the effective dynamics with
/// `Tg_A² = tg2`, one point per `J`.
pub fn coherence_curve(j_list: &[f64], tau: f64, tg2: f64) -> Result<Vec<(f64, f64)>> {
    j_list
        .iter()
        .map(|&j| {
            let p = JcParams {
                g_a: tg2.sqrt(),
                g_b: 0.0,
                j,
                tau,
                n_b: 0,
                ..JcParams::default()
            };
            Ok((j, coherence(&effective_state(&p, &plus_state(), 1.0)?, None)?))
        })
        .collect()
}

/// Concurrence of the two qubits, started in `(|00⟩+|11⟩)/√2`, after the
/// effective dynamics with `Tg_A² = Tg_B² = tg2`.
pub fn concurrence_curve(j_list: &[f64], tau: f64, tg2: f64) -> Result<Vec<(f64, f64)>> {
    j_list
        .iter()
        .map(|&j| {
            let g = tg2.sqrt();
            let p = JcParams {
                g_a: g,
                g_b: g,
                j,
                tau,
                ..JcParams::default()
            };
            Ok((j, concurrence(&effective_state(&p, &bell_state(), 1.0)?)?))
        })
        .collect()
}

/// Full single-qubit cavity chain (qubit A, modes A and B) for the
/// full-against-effective comparison, with `𝓚 = 𝓚̃/√T`.
#[derive(Clone, Debug)]
pub struct CoherenceComparison {
    model: JcModel,
    l0: SuperOperator,
    k_tilde: SuperOperator,
    rho0: DenseMatrix,
    params: JcParams,
}

impl CoherenceComparison {
    pub fn new(g_a: f64, j: f64, tau: f64, n_max: usize) -> Result<Self> {
        let params = JcParams {
            g_a,
            g_b: 0.0,
            j,
            tau,
            n_b: 0,
            n_max,
            ..JcParams::default()
        };
        let model = JcModel::new(&params)?;
        let l0 = model.unperturbed_liouvillian()?.assembled().clone();
        let k_tilde = hamiltonian_super(model.interaction())?;
        let rho0 = model.lift(&plus_state())?;
        Ok(Self {
            model,
            l0,
            k_tilde,
            rho0,
            params,
        })
    }

    /// Effective qubit state, i.e. `e^{𝓛_eff[𝓚̃]}` applied to `|+⟩`.
    pub fn effective(&self) -> Result<DenseMatrix> {
        effective_state(&self.params, &plus_state(), 1.0)
    }

    /// Full state at time `T`.
    pub fn full(&self, t: f64) -> Result<DenseMatrix> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::InvalidArgument(format!("evolution time {t} must be positive")));
        }
        let gen = self.l0.scale(t).try_add(&self.k_tilde.scale(t.sqrt()))?;
        let e = crate::numerics::expm::expm(gen.matrix())?;
        devectorize(&e.matvec(&vectorize(&self.rho0)?), self.model.dim())
    }

    /// Trace distance between the full state and the lifted effective state.
    pub fn distance(&self, t: f64) -> Result<f64> {
        let eff = self.model.lift(&self.effective()?)?;
        crate::scenarios::metrics::trace_distance(&self.full(t)?, &eff)
    }
}
