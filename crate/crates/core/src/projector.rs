//! Zero-eigenvalue spectral projector, reduced resolvent and the
//! dissipative time-scale of a Liouvillian.

use crate::error::{Error, Result};
use crate::lindblad::propagate;
use crate::numerics::hermitian::spectral_norm;
use crate::numerics::lu::solve;
use crate::numerics::matrix::{DenseMatrix, C64};
use crate::numerics::schur::{schur_sorted, Schur};
use crate::numerics::superop::SuperOperator;
use crate::numerics::sylvester::solve_triangular_sylvester;

/// Default zero-cluster tolerance, relative to `‖𝓛₀‖₂`.
pub const DEFAULT_ZERO_TOL: f64 = 1e-9;

/// Sorted Schur form of `𝓛₀` with the zero cluster leading.
#[derive(Clone, Debug)]
pub struct ZeroCluster {
    schur: Schur,
    kernel_dim: usize,
    norm: f64,
}

impl ZeroCluster {
    pub fn new(l0: &SuperOperator, tol: f64) -> Result<Self> {
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(Error::InvalidArgument(format!("zero-cluster tolerance {tol} must be positive")));
        }
        let m = l0.matrix();
        let norm = spectral_norm(m)?;
        let cut = tol * norm;
        let (schur, kernel_dim) = schur_sorted(m, |z| z.norm() <= cut)?;
        log::debug!(
            "zero cluster: {} of {} eigenvalues within {:.3e}",
            kernel_dim,
            m.rows(),
            cut
        );
        Ok(Self {
            schur,
            kernel_dim,
            norm,
        })
    }

    pub fn kernel_dim(&self) -> usize {
        self.kernel_dim
    }

    /// `‖𝓛₀‖₂`.
    pub fn norm(&self) -> f64 {
        self.norm
    }

    pub fn eigenvalues(&self) -> Vec<C64> {
        self.schur.eigenvalues()
    }

    /// Spectral projector onto the leading cluster.
    pub fn projector(&self) -> Result<DenseMatrix> {
        let n = self.schur.t.rows();
        let k = self.kernel_dim;
        if k == 0 {
            return Err(Error::EmptyZeroCluster);
        }
        let q = &self.schur.q;
        if k == n {
            return Ok(DenseMatrix::identity(n));
        }
        let t = &self.schur.t;
        let t11 = t.block(0, 0, k, k);
        let t22 = t.block(k, k, n - k, n - k);
        let t12 = t.block(0, k, k, n - k);
        let sep = f64::EPSILON * self.norm.max(f64::MIN_POSITIVE) * n as f64;
        let x = solve_triangular_sylvester(&t11, &t22, &t12.scale_real(-1.0), sep)?;
        // P₀ = Q·[[I, −X], [0, 0]]·Q† = Q₁·(Q₁† − X·Q₂†)
        let q1 = q.block(0, 0, n, k);
        let q2 = q.block(0, k, n, n - k);
        let right = &q1.adjoint() - &x.matmul(&q2.adjoint());
        Ok(q1.matmul(&right))
    }

    /// `1 / min |Re λ|` over eigenvalues outside the cluster.
    pub fn timescale(&self) -> Result<f64> {
        let ev = self.eigenvalues();
        let slowest = ev[self.kernel_dim..]
            .iter()
            .map(|z| z.re.abs())
            .fold(f64::INFINITY, f64::min);
        if !slowest.is_finite() || slowest == 0.0 {
            return Err(Error::NoSpectralGap);
        }
        Ok(1.0 / slowest)
    }
}

/// Spectral projector of `𝓛₀` onto its zero cluster, and the cluster size.
pub fn steady_projector(l0: &SuperOperator, tol: f64) -> Result<(SuperOperator, usize)> {
    let zc = ZeroCluster::new(l0, tol)?;
    Ok((SuperOperator::new(l0.dim(), zc.projector()?)?, zc.kernel_dim()))
}

/// `𝓢 = 𝓠₀(𝓛₀ + 𝓟₀)⁻¹𝓠₀`.
pub fn reduced_resolvent(l0: &SuperOperator, p0: &SuperOperator) -> Result<SuperOperator> {
    if l0.dim() != p0.dim() {
        return Err(Error::Dimension(format!(
            "generator on {} and projector on {}",
            l0.dim(),
            p0.dim()
        )));
    }
    let n = l0.matrix().rows();
    let q0 = &DenseMatrix::identity(n) - p0.matrix();
    let shifted = l0.matrix() + p0.matrix();
    let inner = solve(&shifted, &q0)?;
    SuperOperator::new(l0.dim(), q0.matmul(&inner))
}

/// `τ = 1 / min_{λ ∉ zero cluster} |Re λ|`.
pub fn dissipative_timescale(l0: &SuperOperator, tol: f64) -> Result<f64> {
    ZeroCluster::new(l0, tol)?.timescale()
}

/// Trapezoidal time average of `e^{t𝓛₀}` over `[0, T_avg]` on `samples` intervals.
pub fn ergodic_projector(l0: &SuperOperator, t_avg: f64, samples: usize) -> Result<SuperOperator> {
    if !(t_avg > 0.0 && t_avg.is_finite()) || samples == 0 {
        return Err(Error::InvalidArgument(format!(
            "ergodic average needs T_avg > 0 and samples > 0 (got {t_avg}, {samples})"
        )));
    }
    let h = t_avg / samples as f64;
    let step = propagate(l0, h)?.into_matrix();
    let n = step.rows();
    let mut cur = DenseMatrix::identity(n);
    let mut acc = cur.scale_real(0.5);
    for k in 1..=samples {
        cur = step.matmul(&cur);
        if k == samples {
            acc += &cur.scale_real(0.5);
        } else {
            acc += &cur;
        }
    }
    SuperOperator::new(l0.dim(), acc.scale_real(1.0 / samples as f64))
}

/// `𝓟₀`, `𝓠₀`, `𝓢` and `τ` of one unperturbed generator.
#[derive(Clone, Debug)]
pub struct SteadyStructure {
    pub p0: SuperOperator,
    pub q0: SuperOperator,
    pub s: SuperOperator,
    /// Dissipative time-scale; infinite when the whole spectrum sits in the zero cluster.
    pub tau: f64,
    pub kernel_dim: usize,
    /// `‖𝓛₀‖₂`.
    pub l0_norm: f64,
}

impl SteadyStructure {
    pub fn new(l0: &SuperOperator, tol: f64) -> Result<Self> {
        let zc = ZeroCluster::new(l0, tol)?;
        let p0 = SuperOperator::new(l0.dim(), zc.projector()?)?;
        let n = p0.matrix().rows();
        let q0 = SuperOperator::new(l0.dim(), &DenseMatrix::identity(n) - p0.matrix())?;
        let tau = match zc.timescale() {
            Ok(t) => t,
            Err(Error::NoSpectralGap) if zc.kernel_dim() == n => f64::INFINITY,
            Err(e) => return Err(e),
        };
        let s = if zc.kernel_dim() == n {
            SuperOperator::zeros(l0.dim())
        } else {
            reduced_resolvent(l0, &p0)?
        };
        Ok(Self {
            p0,
            q0,
            s,
            tau,
            kernel_dim: zc.kernel_dim(),
            l0_norm: zc.norm(),
        })
    }

    pub fn with_default_tol(l0: &SuperOperator) -> Result<Self> {
        Self::new(l0, DEFAULT_ZERO_TOL)
    }

    /// Spectral-identity residuals against the generator this was built from.
    pub fn residuals(&self, l0: &SuperOperator) -> Result<SpectralResiduals> {
        let l = l0.matrix();
        let p = self.p0.matrix();
        let q = self.q0.matrix();
        let s = self.s.matrix();
        let scale = if self.l0_norm > 0.0 { self.l0_norm } else { 1.0 };
        let norm = |m: DenseMatrix| spectral_norm(&m);
        let trace_row = self.p0.trace_defect().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        Ok(SpectralResiduals {
            idempotence: norm(&p.matmul(p) - p)?,
            p0_l0: norm(p.matmul(l))? / scale,
            l0_p0: norm(l.matmul(p))? / scale,
            s_l0: norm(&s.matmul(l) - q)?,
            l0_s: norm(&l.matmul(s) - q)?,
            s_p0: norm(s.matmul(p))? * scale,
            p0_s: norm(p.matmul(s))? * scale,
            trace: trace_row,
        })
    }
}

/// Residual norms of the identities `𝓟₀² = 𝓟₀`, `𝓟₀𝓛₀ = 𝓛₀𝓟₀ = 0`,
/// `𝓢𝓛₀ = 𝓛₀𝓢 = 𝓠₀`, `𝓢𝓟₀ = 𝓟₀𝓢 = 0` and `Tr ∘ 𝓟₀ = Tr`.
/// Dimensionful entries are made dimensionless with `‖𝓛₀‖₂`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectralResiduals {
    pub idempotence: f64,
    pub p0_l0: f64,
    pub l0_p0: f64,
    pub s_l0: f64,
    pub l0_s: f64,
    pub s_p0: f64,
    pub p0_s: f64,
    pub trace: f64,
}

impl SpectralResiduals {
    pub fn entries(&self) -> [(&'static str, f64); 8] {
        [
            ("P0^2 - P0", self.idempotence),
            ("P0 L0", self.p0_l0),
            ("L0 P0", self.l0_p0),
            ("S L0 - Q0", self.s_l0),
            ("L0 S - Q0", self.l0_s),
            ("S P0", self.s_p0),
            ("P0 S", self.p0_s),
            ("Tr P0 - Tr", self.trace),
        ]
    }

    pub fn max(&self) -> f64 {
        self.entries().iter().map(|e| e.1).fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lindblad::Liouvillian;
    use crate::numerics::matrix::ONE;
    use crate::numerics::testing::{random_hermitian, random_matrix};
    use crate::spaces::{collective, pauli, Pauli};

    fn damping(rate: f64) -> SuperOperator {
        Liouvillian::dissipative(vec![(pauli(Pauli::Minus), rate)])
            .unwrap()
            .assembled()
            .clone()
    }

    fn collective_module() -> SuperOperator {
        Liouvillian::dissipative(vec![(collective(Pauli::Minus, 2).unwrap(), 1.0)])
            .unwrap()
            .assembled()
            .clone()
    }

    #[test]
    fn amplitude_damping_projector() {
        let l0 = damping(1.0);
        let (p0, k) = steady_projector(&l0, DEFAULT_ZERO_TOL).unwrap();
        assert_eq!(k, 1);
        let x = random_matrix(2, 2, 3);
        let mut expect = DenseMatrix::zeros(2, 2);
        expect[(0, 0)] = x.trace();
        assert!(p0.apply(&x).unwrap().max_abs_diff(&expect) < 1e-13);
        let long = propagate(&l0, 80.0).unwrap();
        assert!(long.matrix().max_abs_diff(p0.matrix()) < 1e-12);
    }

    #[test]
    fn collective_module_has_qubit_kernel() {
        let l0 = collective_module();
        let st = SteadyStructure::with_default_tol(&l0).unwrap();
        assert_eq!(st.kernel_dim, 4);
        assert!(st.residuals(&l0).unwrap().max() < 1e-10);
    }

    #[test]
    fn zero_generator_gives_identity() {
        let l0 = SuperOperator::zeros(2);
        let (p0, k) = steady_projector(&l0, DEFAULT_ZERO_TOL).unwrap();
        assert_eq!(k, 4);
        assert_eq!(p0, SuperOperator::identity(2));
        assert_eq!(dissipative_timescale(&l0, DEFAULT_ZERO_TOL).unwrap_err(), Error::NoSpectralGap);
        let e = ergodic_projector(&l0, 5.0, 10).unwrap();
        assert!(e.matrix().max_abs_diff(&DenseMatrix::identity(4)) < 1e-14);
        let st = SteadyStructure::with_default_tol(&l0).unwrap();
        assert!(st.tau.is_infinite());
    }

    #[test]
    fn purely_unitary_generator_has_no_empty_cluster() {
        // −i[σᶻ, ·] keeps diagonal operators fixed.
        let l0 = crate::lindblad::hamiltonian_super(&pauli(Pauli::Z)).unwrap();
        let (_, k) = steady_projector(&l0, DEFAULT_ZERO_TOL).unwrap();
        assert_eq!(k, 2);
    }

    #[test]
    fn invertible_generator_reports_empty_cluster() {
        let l0 = SuperOperator::identity(2).scale(-1.0);
        assert_eq!(steady_projector(&l0, DEFAULT_ZERO_TOL).unwrap_err(), Error::EmptyZeroCluster);
    }

    #[test]
    fn damping_timescale_is_twice_inverse_rate() {
        for gamma in [0.5, 1.0, 3.0] {
            let tau = dissipative_timescale(&damping(gamma), DEFAULT_ZERO_TOL).unwrap();
            assert!((tau - 2.0 / gamma).abs() < 1e-12);
        }
        let l0 = collective_module();
        let t1 = dissipative_timescale(&l0, DEFAULT_ZERO_TOL).unwrap();
        let t2 = dissipative_timescale(&l0.scale(4.0), DEFAULT_ZERO_TOL).unwrap();
        assert!((t1 / t2 - 4.0).abs() < 1e-10);
    }

    #[test]
    fn resolvent_identities_and_size() {
        let l0 = damping(1.0);
        let (p0, _) = steady_projector(&l0, DEFAULT_ZERO_TOL).unwrap();
        let s = reduced_resolvent(&l0, &p0).unwrap();
        let q0 = &DenseMatrix::identity(4) - p0.matrix();
        assert!(s.matrix().matmul(l0.matrix()).max_abs_diff(&q0) < 1e-13);
        assert!(s.matrix().matmul(p0.matrix()).max_abs() < 1e-13);
        // ‖S‖ is of order τ.
        let sn = spectral_norm(s.matrix()).unwrap();
        assert!(sn > 0.5 && sn < 4.0, "{sn}");
    }

    #[test]
    fn non_normal_generator_with_hamiltonian() {
        // Driven damped qubit: unique non-trivial steady state.
        let h = pauli(Pauli::X).scale_real(0.7);
        let l = Liouvillian::new(Some(h), vec![(pauli(Pauli::Minus), 1.0)]).unwrap();
        let st = SteadyStructure::with_default_tol(l.assembled()).unwrap();
        assert_eq!(st.kernel_dim, 1);
        assert!(st.residuals(l.assembled()).unwrap().max() < 1e-10);
        let rho = st.p0.apply(&DenseMatrix::identity(2).scale_real(0.5)).unwrap();
        assert!((rho.trace() - ONE).norm() < 1e-12);
        assert!(l.assembled().apply(&rho).unwrap().max_abs() < 1e-12);
    }

    #[test]
    fn random_lindbladian_identities() {
        let l = Liouvillian::new(
            Some(random_hermitian(3, 9)),
            vec![(random_matrix(3, 3, 10), 1.0), (random_matrix(3, 3, 11), 0.4)],
        )
        .unwrap();
        let st = SteadyStructure::with_default_tol(l.assembled()).unwrap();
        assert_eq!(st.kernel_dim, 1);
        assert!(st.residuals(l.assembled()).unwrap().max() < 1e-9);
    }

    #[test]
    fn ergodic_average_approaches_projector() {
        let l0 = damping(1.0);
        let (p0, _) = steady_projector(&l0, DEFAULT_ZERO_TOL).unwrap();
        let mut prev = f64::INFINITY;
        for t in [10.0, 100.0, 1000.0] {
            let e = ergodic_projector(&l0, t, 20_000).unwrap();
            let d = spectral_norm(&(e.matrix() - p0.matrix())).unwrap();
            assert!(d < prev);
            prev = d;
        }
        assert!(prev < 1e-2);
        assert!(ergodic_projector(&l0, 0.0, 10).is_err());
    }
}
