//! C ABI over `dgm_core`.
//!
//! Matrices cross the boundary as row-major arrays of interleaved complex
//! doubles: entry `(r, c)` of an `n × n` matrix occupies `re, im` at
//! `2·(r·n + c)`. Every fallible call returns a [`DgmStatus`]; on failure the
//! message is kept per thread and read with [`dgm_last_error_message`].
//! Handles are created by `*_new` style calls and released with the matching
//! `*_free`, which accepts null.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use dgm_core::lindblad::Liouvillian;
use dgm_core::network::NetworkConfig;
use dgm_core::numerics::matrix::{DenseMatrix, C64};
use dgm_core::projector::{SteadyStructure, DEFAULT_ZERO_TOL};
use dgm_core::scenarios::jc::{jc_effective_analytic, JcParams};
use dgm_core::scenarios::metrics::concurrence;
use dgm_core::scenarios::zdephase::analytic_state;
use dgm_core::Error;

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DgmStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DimensionMismatch = 3,
    NumericalFailure = 4,
    ConfigError = 5,
    InvalidState = 6,
    Panic = 7,
}

/// Generator `𝓛` on an `n`-level system.
pub struct DgmLiouvillian {
    inner: Liouvillian,
}

/// Steady projector, reduced resolvent and time-scale of a generator.
pub struct DgmSteady {
    inner: SteadyStructure,
}

/// Network of modules read from a TOML description.
pub struct DgmNetwork {
    inner: dgm_core::network::DgmNetwork,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let s = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(s).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(e: &Error) -> DgmStatus {
    match e {
        Error::Dimension(_) => DgmStatus::DimensionMismatch,
        Error::InvalidArgument(_) | Error::NotHermitian { .. } => DgmStatus::InvalidArgument,
        Error::InvalidState(_) => DgmStatus::InvalidState,
        Error::Config(_) => DgmStatus::ConfigError,
        _ if e.is_numerical() => DgmStatus::NumericalFailure,
        _ => DgmStatus::InvalidArgument,
    }
}

/// Runs `f`, recording any error or panic as the thread's last error.
fn guard<F>(f: F) -> DgmStatus
where
    F: FnOnce() -> Result<(), Fail>,
{
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => DgmStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside dgm library");
            DgmStatus::Panic
        }
    }
}

struct Fail(DgmStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(name: &str) -> Fail {
    Fail(DgmStatus::NullPointer, format!("{name} is null"))
}

unsafe fn read_matrix(p: *const f64, n: usize, name: &str) -> Result<DenseMatrix, Fail> {
    if p.is_null() {
        return Err(null(name));
    }
    let s = std::slice::from_raw_parts(p, 2 * n * n);
    Ok(DenseMatrix::from_fn(n, n, |r, c| {
        let k = 2 * (r * n + c);
        C64::new(s[k], s[k + 1])
    }))
}

unsafe fn write_matrix(m: &DenseMatrix, p: *mut f64, name: &str) -> Result<(), Fail> {
    if p.is_null() {
        return Err(null(name));
    }
    let n = m.rows();
    let s = std::slice::from_raw_parts_mut(p, 2 * n * n);
    for r in 0..n {
        for c in 0..n {
            let k = 2 * (r * n + c);
            s[k] = m[(r, c)].re;
            s[k + 1] = m[(r, c)].im;
        }
    }
    Ok(())
}

unsafe fn out<T>(p: *mut T, v: T, name: &str) -> Result<(), Fail> {
    if p.is_null() {
        return Err(null(name));
    }
    *p = v;
    Ok(())
}

unsafe fn handle<'a, T>(p: *const T, name: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(name))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn dgm_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Length in bytes of the last error message on this thread, excluding the NUL; 0 when none.
#[no_mangle]
pub extern "C" fn dgm_last_error_length() -> usize {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(0, |s| s.as_bytes().len()))
}

/// Copies the last error message into `buf` (NUL-terminated, truncated to `len`).
/// Returns the number of bytes written excluding the NUL, or -1 if `buf` is
/// null or `len` is 0.
///
/// # Safety
/// `buf` must point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn dgm_last_error_message(buf: *mut c_char, len: usize) -> isize {
    if buf.is_null() || len == 0 {
        return -1;
    }
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        let bytes = e.as_ref().map_or(&[][..], |s| s.as_bytes());
        let n = bytes.len().min(len - 1);
        ptr::copy_nonoverlapping(bytes.as_ptr().cast(), buf, n);
        *buf.add(n) = 0;
        n as isize
    })
}

/// Builds `𝓛(ρ) = −i[H, ρ] + Σₖ γₖ D[Lₖ](ρ)` on `dim` levels. `hamiltonian`
/// may be null; `jumps` holds `n_jumps` matrices back to back and `rates`
/// their `n_jumps` rates.
///
/// # Safety
/// Non-null pointers must reference arrays of the documented sizes; `out`
/// must be writable.
#[no_mangle]
pub unsafe extern "C" fn dgm_liouvillian_new(
    dim: usize,
    hamiltonian: *const f64,
    n_jumps: usize,
    jumps: *const f64,
    rates: *const f64,
    out_handle: *mut *mut DgmLiouvillian,
) -> DgmStatus {
    guard(|| {
        if out_handle.is_null() {
            return Err(null("out"));
        }
        if dim == 0 {
            return Err(Fail(DgmStatus::InvalidArgument, "dimension must be positive".into()));
        }
        let h = if hamiltonian.is_null() {
            None
        } else {
            Some(read_matrix(hamiltonian, dim, "hamiltonian")?)
        };
        let mut ops = Vec::with_capacity(n_jumps);
        if n_jumps > 0 {
            if jumps.is_null() {
                return Err(null("jumps"));
            }
            if rates.is_null() {
                return Err(null("rates"));
            }
            let rates = std::slice::from_raw_parts(rates, n_jumps);
            for (k, &rate) in rates.iter().enumerate() {
                let m = read_matrix(jumps.add(2 * dim * dim * k), dim, "jumps")?;
                ops.push((m, rate));
            }
        }
        let inner = Liouvillian::new(h, ops)?;
        *out_handle = Box::into_raw(Box::new(DgmLiouvillian { inner }));
        Ok(())
    })
}

/// # Safety
/// `l` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn dgm_liouvillian_free(l: *mut DgmLiouvillian) {
    if !l.is_null() {
        drop(Box::from_raw(l));
    }
}

/// # Safety
/// `l` must be a live handle and `dim` writable.
#[no_mangle]
pub unsafe extern "C" fn dgm_liouvillian_dim(l: *const DgmLiouvillian, dim: *mut usize) -> DgmStatus {
    guard(|| out(dim, handle(l, "liouvillian")?.inner.dim(), "dim"))
}

/// `rho_out = 𝓛(rho_in)`.
///
/// # Safety
/// `l` must be a live handle; both arrays hold `dim × dim` complex entries.
#[no_mangle]
pub unsafe extern "C" fn dgm_liouvillian_apply(
    l: *const DgmLiouvillian,
    rho_in: *const f64,
    rho_out: *mut f64,
) -> DgmStatus {
    guard(|| {
        let l = handle(l, "liouvillian")?;
        let x = read_matrix(rho_in, l.inner.dim(), "rho_in")?;
        write_matrix(&l.inner.assembled().apply(&x)?, rho_out, "rho_out")
    })
}

/// `rho_out = e^{t𝓛}(rho_in)`.
///
/// # Safety
/// As for [`dgm_liouvillian_apply`].
#[no_mangle]
pub unsafe extern "C" fn dgm_liouvillian_propagate(
    l: *const DgmLiouvillian,
    t: f64,
    rho_in: *const f64,
    rho_out: *mut f64,
) -> DgmStatus {
    guard(|| {
        let l = handle(l, "liouvillian")?;
        let x = read_matrix(rho_in, l.inner.dim(), "rho_in")?;
        write_matrix(&l.inner.propagate(t)?.apply(&x)?, rho_out, "rho_out")
    })
}

/// Steady structure of `l`. `tol ≤ 0` selects the default zero-cluster tolerance.
///
/// # Safety
/// `l` must be a live handle and `out_handle` writable.
#[no_mangle]
pub unsafe extern "C" fn dgm_steady_new(
    l: *const DgmLiouvillian,
    tol: f64,
    out_handle: *mut *mut DgmSteady,
) -> DgmStatus {
    guard(|| {
        let l = handle(l, "liouvillian")?;
        if out_handle.is_null() {
            return Err(null("out"));
        }
        let tol = if tol > 0.0 { tol } else { DEFAULT_ZERO_TOL };
        let inner = SteadyStructure::new(l.inner.assembled(), tol)?;
        *out_handle = Box::into_raw(Box::new(DgmSteady { inner }));
        Ok(())
    })
}

/// # Safety
/// `s` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dgm_steady_free(s: *mut DgmSteady) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Dimension of the steady (zero-eigenvalue) subspace of the generator.
///
/// # Safety
/// `s` must be a live handle and `dim` writable.
#[no_mangle]
pub unsafe extern "C" fn dgm_steady_kernel_dim(s: *const DgmSteady, dim: *mut usize) -> DgmStatus {
    guard(|| out(dim, handle(s, "steady")?.inner.kernel_dim, "kernel_dim"))
}

/// Dissipative time-scale (inverse spectral gap); infinite for a zero generator.
///
/// # Safety
/// `s` must be a live handle and `tau` writable.
#[no_mangle]
pub unsafe extern "C" fn dgm_steady_timescale(s: *const DgmSteady, tau: *mut f64) -> DgmStatus {
    guard(|| out(tau, handle(s, "steady")?.inner.tau, "tau"))
}

/// `rho_out = 𝓟₀(rho_in)`.
///
/// # Safety
/// `s` must be a live handle; arrays hold `dim × dim` complex entries.
#[no_mangle]
pub unsafe extern "C" fn dgm_steady_project(s: *const DgmSteady, rho_in: *const f64, rho_out: *mut f64) -> DgmStatus {
    guard(|| {
        let s = handle(s, "steady")?;
        let x = read_matrix(rho_in, s.inner.p0.dim(), "rho_in")?;
        write_matrix(&s.inner.p0.apply(&x)?, rho_out, "rho_out")
    })
}

/// Largest spectral-identity residual of `s` against the generator `l`.
///
/// # Safety
/// Both handles must be live and `residual` writable.
#[no_mangle]
pub unsafe extern "C" fn dgm_steady_max_residual(
    s: *const DgmSteady,
    l: *const DgmLiouvillian,
    residual: *mut f64,
) -> DgmStatus {
    guard(|| {
        let s = handle(s, "steady")?;
        let l = handle(l, "liouvillian")?;
        out(residual, s.inner.residuals(l.inner.assembled())?.max(), "residual")
    })
}

/// Network from a NUL-terminated TOML description.
///
/// # Safety
/// `toml` must be a valid C string and `out_handle` writable.
#[no_mangle]
pub unsafe extern "C" fn dgm_network_from_toml(toml: *const c_char, out_handle: *mut *mut DgmNetwork) -> DgmStatus {
    guard(|| {
        if toml.is_null() {
            return Err(null("toml"));
        }
        if out_handle.is_null() {
            return Err(null("out"));
        }
        let text = CStr::from_ptr(toml)
            .to_str()
            .map_err(|_| Fail(DgmStatus::ConfigError, "config is not UTF-8".into()))?;
        let inner = NetworkConfig::from_toml_str(text)?.build()?;
        *out_handle = Box::into_raw(Box::new(DgmNetwork { inner }));
        Ok(())
    })
}

/// # Safety
/// `n` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dgm_network_free(n: *mut DgmNetwork) {
    if !n.is_null() {
        drop(Box::from_raw(n));
    }
}

/// Hilbert-space dimension of the whole network.
///
/// # Safety
/// `n` must be a live handle and `dim` writable.
#[no_mangle]
pub unsafe extern "C" fn dgm_network_dim(n: *const DgmNetwork, dim: *mut usize) -> DgmStatus {
    guard(|| out(dim, handle(n, "network")?.inner.dim(), "dim"))
}

/// `J_max·|E|·τ_max`.
///
/// # Safety
/// `n` must be a live handle and `budget` writable.
#[no_mangle]
pub unsafe extern "C" fn dgm_network_error_budget(n: *const DgmNetwork, budget: *mut f64) -> DgmStatus {
    guard(|| out(budget, handle(n, "network")?.inner.error_budget(), "budget"))
}

/// Steady-subspace dimension of the edge-free generator, from the product of local projectors.
///
/// # Safety
/// `n` must be a live handle and `dim` writable.
#[no_mangle]
pub unsafe extern "C" fn dgm_network_kernel_dim(n: *const DgmNetwork, dim: *mut usize) -> DgmStatus {
    guard(|| {
        let p = handle(n, "network")?.inner.global_projector()?;
        out(dim, p.kernel_dim(), "kernel_dim")
    })
}

/// Full generator of the network (dissipators and all edges) as a new handle.
///
/// # Safety
/// `n` must be a live handle and `out_handle` writable.
#[no_mangle]
pub unsafe extern "C" fn dgm_network_liouvillian(
    n: *const DgmNetwork,
    out_handle: *mut *mut DgmLiouvillian,
) -> DgmStatus {
    guard(|| {
        let n = handle(n, "network")?;
        if out_handle.is_null() {
            return Err(null("out"));
        }
        let inner = n.inner.global_liouvillian()?;
        *out_handle = Box::into_raw(Box::new(DgmLiouvillian { inner }));
        Ok(())
    })
}

/// Closed-form effective rates of two coupled cavities with one qubit each:
/// `tau_eff_inv[α] = 4τg_α²/(1+4J²τ²)`, `j_eff = −4Jg_Ag_Bτ²/(1+4J²τ²)`.
///
/// # Safety
/// `tau_eff_inv` must hold 2 doubles and `j_eff` be writable.
#[no_mangle]
pub unsafe extern "C" fn dgm_jc_effective_rates(
    g_a: f64,
    g_b: f64,
    j: f64,
    tau: f64,
    tau_eff_inv: *mut f64,
    j_eff: *mut f64,
) -> DgmStatus {
    guard(|| {
        let p = JcParams {
            g_a,
            g_b,
            j,
            tau,
            ..JcParams::default()
        };
        p.validate()?;
        let a = jc_effective_analytic(&p);
        if tau_eff_inv.is_null() {
            return Err(null("tau_eff_inv"));
        }
        ptr::copy_nonoverlapping(a.tau_eff_inv.as_ptr(), tau_eff_inv, 2);
        out(j_eff, a.j_eff, "j_eff")
    })
}

/// Effective `|01⟩`, `|10⟩` populations of two z-dephasing qubits started in `|01⟩`.
///
/// # Safety
/// `populations` must hold 2 doubles.
#[no_mangle]
pub unsafe extern "C" fn dgm_zdephase_populations(g: f64, tau: f64, t: f64, populations: *mut f64) -> DgmStatus {
    guard(|| {
        for (name, v) in [("g", g), ("tau", tau)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Fail(DgmStatus::InvalidArgument, format!("{name} = {v} must be positive")));
            }
        }
        if !(t >= 0.0 && t.is_finite()) {
            return Err(Fail(DgmStatus::InvalidArgument, format!("T = {t} must be non-negative")));
        }
        if populations.is_null() {
            return Err(null("populations"));
        }
        let rho = analytic_state(g, tau, t);
        *populations = rho[(1, 1)].re;
        *populations.add(1) = rho[(2, 2)].re;
        Ok(())
    })
}

/// Concurrence of a two-qubit density matrix (4 × 4).
///
/// # Safety
/// `rho` must hold 16 complex entries and `value` be writable.
#[no_mangle]
pub unsafe extern "C" fn dgm_concurrence(rho: *const f64, value: *mut f64) -> DgmStatus {
    guard(|| {
        let m = read_matrix(rho, 4, "rho")?;
        out(value, concurrence(&m)?, "value")
    })
}
