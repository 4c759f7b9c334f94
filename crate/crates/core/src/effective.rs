//! Effective generators inside the steady sector and error-scaling sweeps.
//!
//! Callers hand over the O(1) perturbation `𝓚̃`. First-order runs use
//! `𝓚 = 𝓚̃/T`, second-order runs `𝓚 = 𝓚̃/√T`; the sweep owns that rescaling.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numerics::expm::expm;
use crate::numerics::hermitian::spectral_norm;
use crate::numerics::matrix::DenseMatrix;
use crate::numerics::superop::SuperOperator;
use crate::projector::SteadyStructure;

/// Order of the effective description.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Order {
    /// `𝓟₀𝓚𝓟₀`, error `O(τ/T)`.
    First,
    /// `−𝓟₀𝓚𝓢𝓚𝓟₀`, error `O(√(τ/T))`.
    Second,
}

impl Order {
    /// Factor turning `𝓚̃` into `𝓚` at total time `T`.
    pub fn coupling_scale(self, t: f64) -> f64 {
        match self {
            Order::First => 1.0 / t,
            Order::Second => 1.0 / t.sqrt(),
        }
    }

    /// Slope of log error against log(1/T) expected asymptotically.
    pub fn expected_slope(self) -> f64 {
        match self {
            Order::First => 1.0,
            Order::Second => 0.5,
        }
    }
}

fn check_dims(ops: &[&SuperOperator]) -> Result<()> {
    let d = ops[0].dim();
    if let Some(o) = ops.iter().find(|o| o.dim() != d) {
        return Err(Error::Dimension(format!(
            "superoperators on dimensions {d} and {}",
            o.dim()
        )));
    }
    Ok(())
}

/// `𝓟₀𝓚𝓟₀`.
pub fn first_order_generator(k: &SuperOperator, p0: &SuperOperator) -> Result<SuperOperator> {
    check_dims(&[k, p0])?;
    p0.compose(k)?.compose(p0)
}

/// `−𝓟₀𝓚𝓢𝓚𝓟₀`. Logs a warning when the first-order part does not vanish.
pub fn second_order_generator(
    k: &SuperOperator,
    p0: &SuperOperator,
    s: &SuperOperator,
) -> Result<SuperOperator> {
    check_dims(&[k, p0, s])?;
    let pk = p0.compose(k)?;
    let first = pk.compose(p0)?;
    let scale = k.matrix().max_abs().max(f64::MIN_POSITIVE);
    let leak = first.matrix().max_abs() / scale;
    if leak > 1e-9 {
        log::warn!("first-order generator does not vanish (relative size {leak:.3e})");
    }
    Ok(pk.compose(s)?.compose(k)?.compose(p0)?.scale(-1.0))
}

/// Effective generator of the requested order.
pub fn effective_generator(
    order: Order,
    k: &SuperOperator,
    steady: &SteadyStructure,
) -> Result<SuperOperator> {
    match order {
        Order::First => first_order_generator(k, &steady.p0),
        Order::Second => second_order_generator(k, &steady.p0, &steady.s),
    }
}

/// `‖(e^{T𝓛} − e^{𝓖})𝓟₀‖₂` with `𝓛` already carrying the scaled coupling.
pub fn projected_error(
    l_full: &SuperOperator,
    g_eff: &SuperOperator,
    p0: &SuperOperator,
    t: f64,
) -> Result<f64> {
    check_dims(&[l_full, g_eff, p0])?;
    let target = expm(g_eff.matrix())?.matmul(p0.matrix());
    projected_error_against(l_full, &target, p0, t)
}

/// `‖e^{T𝓛}𝓟₀ − target‖₂` for a precomputed `target = e^{𝓖}𝓟₀`.
pub fn projected_error_against(
    l_full: &SuperOperator,
    target: &DenseMatrix,
    p0: &SuperOperator,
    t: f64,
) -> Result<f64> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::InvalidArgument(format!("evolution time {t} must be positive")));
    }
    let e = expm(&l_full.matrix().scale_real(t))?;
    spectral_norm(&(&e.matmul(p0.matrix()) - target))
}

/// Something whose error can be evaluated at a total time `T`.
pub trait SweepModel: Sync {
    fn error_at(&self, t: f64) -> Result<f64>;
}

impl<F> SweepModel for F
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    fn error_at(&self, t: f64) -> Result<f64> {
        self(t)
    }
}

/// `‖(e^{T(𝓛₀ + c(T)𝓚̃)} − e^{𝓖̃})𝓟₀‖₂` with `𝓖̃` the effective generator of `𝓚̃`.
#[derive(Clone, Debug)]
pub struct ProjectedModel {
    l0: SuperOperator,
    k_tilde: SuperOperator,
    p0: SuperOperator,
    order: Order,
    target: DenseMatrix,
}

impl ProjectedModel {
    /// Compares against the effective generator built from `k_tilde` itself.
    pub fn new(
        l0: &SuperOperator,
        k_tilde: &SuperOperator,
        steady: &SteadyStructure,
        order: Order,
    ) -> Result<Self> {
        let g = effective_generator(order, k_tilde, steady)?;
        Self::with_reference(l0, k_tilde, steady, order, &g)
    }

    /// Compares against an explicitly supplied effective generator, e.g. the
    /// unperturbed one when `k_tilde` carries extra error terms.
    pub fn with_reference(
        l0: &SuperOperator,
        k_tilde: &SuperOperator,
        steady: &SteadyStructure,
        order: Order,
        g_eff: &SuperOperator,
    ) -> Result<Self> {
        check_dims(&[l0, k_tilde, &steady.p0, g_eff])?;
        let target = expm(g_eff.matrix())?.matmul(steady.p0.matrix());
        Ok(Self {
            l0: l0.clone(),
            k_tilde: k_tilde.clone(),
            p0: steady.p0.clone(),
            order,
            target,
        })
    }

    pub fn order(&self) -> Order {
        self.order
    }
}

impl SweepModel for ProjectedModel {
    fn error_at(&self, t: f64) -> Result<f64> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::InvalidArgument(format!("evolution time {t} must be positive")));
        }
        // T·(𝓛₀ + c𝓚̃) assembled directly to avoid an extra temporary.
        let c = t * self.order.coupling_scale(t);
        let mut m = self.l0.matrix().scale_real(t);
        for (x, k) in m.as_mut_slice().iter_mut().zip(self.k_tilde.matrix().as_slice()) {
            *x += k * c;
        }
        let e = expm(&m)?;
        spectral_norm(&(&e.matmul(self.p0.matrix()) - &self.target))
    }
}

/// Sampled errors and their log-log fit.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepResult {
    /// `(T, error)` sorted by `T`.
    pub samples: Vec<(f64, f64)>,
    /// Slope of `log₁₀ error` against `log₁₀(1/T)`.
    pub slope: f64,
    pub intercept: f64,
    /// Number of largest-`T` samples used in the fit.
    pub fit_points: usize,
}

impl SweepResult {
    /// Fits the `fit_points` largest-`T` samples, or all when `None`.
    pub fn from_samples(mut samples: Vec<(f64, f64)>, fit_points: Option<usize>) -> Result<Self> {
        samples.sort_by(|a, b| a.0.total_cmp(&b.0));
        let n = fit_points.unwrap_or(samples.len());
        if n > samples.len() {
            return Err(Error::InvalidArgument(format!(
                "fit over {n} points requested but only {} samples",
                samples.len()
            )));
        }
        let (slope, intercept) = fit_loglog(&samples[samples.len() - n..])?;
        Ok(Self {
            samples,
            slope,
            intercept,
            fit_points: n,
        })
    }

    pub fn times(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.0).collect()
    }

    pub fn errors(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.1).collect()
    }

    /// True when the error strictly decreases across all samples with `T ≥ t_min`.
    pub fn decreasing_from(&self, t_min: f64) -> bool {
        let tail: Vec<f64> = self.samples.iter().filter(|s| s.0 >= t_min).map(|s| s.1).collect();
        tail.windows(2).all(|w| w[1] < w[0])
    }

    /// True when the last `n` samples decrease strictly.
    pub fn decreasing_last(&self, n: usize) -> bool {
        let k = self.samples.len().saturating_sub(n);
        self.samples[k..].windows(2).all(|w| w[1].1 < w[0].1)
    }
}

/// Least-squares line through `(log₁₀(1/T), log₁₀ error)`; returns `(slope, intercept)`.
pub fn fit_loglog(samples: &[(f64, f64)]) -> Result<(f64, f64)> {
    if samples.len() < 2 {
        return Err(Error::DegenerateFit(format!("{} samples", samples.len())));
    }
    let mut pts = Vec::with_capacity(samples.len());
    for &(t, e) in samples {
        if !(t > 0.0 && e > 0.0 && t.is_finite() && e.is_finite()) {
            return Err(Error::DegenerateFit(format!("sample (T = {t}, error = {e}) has no logarithm")));
        }
        pts.push((-t.log10(), e.log10()));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx <= 0.0 {
        return Err(Error::DegenerateFit("all sample times coincide".into()));
    }
    let slope = sxy / sxx;
    Ok((slope, my - slope * mx))
}

/// `per_decade` log-spaced points per decade from `t_min` to `t_max`, both included.
pub fn log_grid(t_min: f64, t_max: f64, per_decade: usize) -> Result<Vec<f64>> {
    if !(t_min > 0.0 && t_max > t_min && t_max.is_finite()) || per_decade == 0 {
        return Err(Error::InvalidArgument(format!(
            "log grid needs 0 < t_min < t_max and per_decade > 0 (got {t_min}, {t_max}, {per_decade})"
        )));
    }
    let (a, b) = (t_min.log10(), t_max.log10());
    let steps = ((b - a) * per_decade as f64).round().max(1.0) as usize;
    Ok((0..=steps)
        .map(|i| 10f64.powf(a + (b - a) * i as f64 / steps as f64))
        .collect())
}

/// `n` log-spaced points from `t_min` to `t_max`, both included.
pub fn log_points(t_min: f64, t_max: f64, n: usize) -> Result<Vec<f64>> {
    if !(t_min > 0.0 && t_max > t_min && t_max.is_finite()) || n < 2 {
        return Err(Error::InvalidArgument(format!(
            "log grid needs 0 < t_min < t_max and at least 2 points (got {t_min}, {t_max}, {n})"
        )));
    }
    let (a, b) = (t_min.log10(), t_max.log10());
    Ok((0..n)
        .map(|i| 10f64.powf(a + (b - a) * i as f64 / (n - 1) as f64))
        .collect())
}

/// Evaluates `model` on every `T` in parallel and fits the result.
pub fn scaling_sweep(
    model: &dyn SweepModel,
    t_list: &[f64],
    fit_points: Option<usize>,
) -> Result<SweepResult> {
    if t_list.len() < 5 {
        return Err(Error::InvalidArgument(format!(
            "sweep needs at least 5 times, got {}",
            t_list.len()
        )));
    }
    if let Some(&bad) = t_list.iter().find(|t| !(**t > 0.0 && t.is_finite())) {
        return Err(Error::InvalidArgument(format!("sweep time {bad} must be positive")));
    }
    if let Some(n) = fit_points {
        if n > t_list.len() {
            return Err(Error::InvalidArgument(format!(
                "fit over {n} points requested but only {} times",
                t_list.len()
            )));
        }
    }
    let samples = t_list
        .par_iter()
        .map(|&t| model.error_at(t).map(|e| (t, e)))
        .collect::<Result<Vec<_>>>()?;
    SweepResult::from_samples(samples, fit_points)
}
