//! C ABI over `ptmodel`.
//!
//! Every entry point returns a [`PtmStatus`]; on failure the message is kept
//! per thread and can be copied out with [`ptm_last_error_message`]. Matrices
//! are written row-major into caller buffers of at least `n * n` doubles.
//! Objects that are expensive to build (the metric polynomial, the Dyson map,
//! an evolution trajectory) are returned as opaque handles that the caller
//! releases with the matching `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ptmodel::dense::{Complex, ComplexMatrix, ComplexVector, RealMatrix};
use ptmodel::evolution::{self, EvolutionConfig, EvolutionTrajectory, Frame};
use ptmodel::maps::DysonMap;
use ptmodel::metric::{self, MetricPolynomial};
use ptmodel::{model, Error};

/// Result code of every call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PtmStatus {
    Ok = 0,
    Argument = 1,
    Domain = 2,
    Contract = 3,
    Singular = 4,
    Degenerate = 5,
    NotPositive = 6,
    NotTabulated = 7,
    Ambiguous = 8,
    Inconsistent = 9,
    NoConvergence = 10,
    Unstable = 11,
    NullPointer = 12,
    BufferTooSmall = 13,
    Panic = 14,
}

/// Integration frame, see `ptm_evolve`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PtmFrame {
    SFull = 0,
    SAdiabatic = 1,
    PFrame = 2,
}

impl From<PtmFrame> for Frame {
    fn from(f: PtmFrame) -> Self {
        match f {
            PtmFrame::SFull => Frame::SFull,
            PtmFrame::SAdiabatic => Frame::SAdiabatic,
            PtmFrame::PFrame => Frame::PFrame,
        }
    }
}

/// Solved metric polynomial for one dimension.
pub struct PtmMetricPolynomial(MetricPolynomial);

/// Time-independent part of the Dyson map for one dimension.
pub struct PtmDysonMap(DysonMap);

/// Sampled evolution: times, states and physical norms.
pub struct PtmTrajectory(EvolutionTrajectory);

thread_local! {
    static LAST_ERROR: RefCell<Vec<u8>> = const { RefCell::new(Vec::new()) };
}

struct Failure(PtmStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Argument(_) => PtmStatus::Argument,
            Error::Domain(_) => PtmStatus::Domain,
            Error::Contract(_) => PtmStatus::Contract,
            Error::Singular(_) => PtmStatus::Singular,
            Error::Degenerate(_) => PtmStatus::Degenerate,
            Error::NotPositive(_) => PtmStatus::NotPositive,
            Error::NotTabulated { .. } => PtmStatus::NotTabulated,
            Error::Ambiguous(_) => PtmStatus::Ambiguous,
            Error::Inconsistent(_) => PtmStatus::Inconsistent,
            Error::NoConvergence { .. } => PtmStatus::NoConvergence,
            Error::Unstable { .. } => PtmStatus::Unstable,
        };
        Failure(status, e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn set_error(msg: &str) {
    LAST_ERROR.with(|e| {
        let mut e = e.borrow_mut();
        e.clear();
        e.extend(msg.bytes().filter(|&b| b != 0));
    });
}

fn guard(f: impl FnOnce() -> Outcome) -> PtmStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            PtmStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            PtmStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(PtmStatus::NullPointer, format!("{what} is null"))
}

/// Borrow `len` elements behind `out`, checking that `need` fit.
unsafe fn out_slice<'a, T>(out: *mut T, len: usize, need: usize, what: &str) -> Result<&'a mut [T], Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    if len < need {
        return Err(Failure(PtmStatus::BufferTooSmall, format!("{what} holds {len} elements, {need} needed")));
    }
    Ok(std::slice::from_raw_parts_mut(out, need))
}

unsafe fn handle<'a, T>(h: *const T, what: &str) -> Result<&'a T, Failure> {
    h.as_ref().ok_or_else(|| null(what))
}

fn write_real(m: &RealMatrix, out: &mut [f64]) {
    let n = m.ncols();
    for (idx, slot) in out.iter_mut().enumerate() {
        *slot = m[(idx / n, idx % n)];
    }
}

fn write_complex(m: &ComplexMatrix, re: &mut [f64], im: &mut [f64]) {
    let n = m.ncols();
    for idx in 0..re.len() {
        let z = m[(idx / n, idx % n)];
        re[idx] = z.re;
        im[idx] = z.im;
    }
}

fn write_box<T>(out: *mut *mut T, value: T) -> Outcome {
    if out.is_null() {
        return Err(null("out"));
    }
    unsafe { *out = Box::into_raw(Box::new(value)) };
    Ok(())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ptm_version() -> *const c_char {
    static VERSION: &CStr = match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
        Ok(v) => v,
        Err(_) => panic!("version contains a NUL byte"),
    };
    VERSION.as_ptr()
}

/// Copies the last error message of this thread into `buf` (truncated and
/// NUL-terminated) and returns the full message length in bytes, excluding
/// the terminator. `buf` may be null to query the length.
///
/// # Safety
/// `buf` must be null or valid for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn ptm_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        if !buf.is_null() && len > 0 {
            let count = e.len().min(len - 1);
            ptr::copy_nonoverlapping(e.as_ptr() as *const c_char, buf, count);
            *buf.add(count) = 0;
        }
        e.len()
    })
}

/// Hamiltonian H(τ) of dimension `n`.
///
/// # Safety
/// `out` must be valid for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn ptm_hamiltonian(n: usize, tau: f64, out: *mut f64, len: usize) -> PtmStatus {
    guard(|| {
        let h = model::build_hamiltonian(n, tau)?;
        write_real(&h, out_slice(out, len, n * n, "out")?);
        Ok(())
    })
}

/// The `n` energies at τ ∈ [0, 1], ascending.
///
/// # Safety
/// `out` must be valid for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn ptm_energies(n: usize, tau: f64, out: *mut f64, len: usize) -> PtmStatus {
    guard(|| {
        let e = model::energies(n, tau)?;
        out_slice(out, len, n, "out")?.copy_from_slice(&e.levels);
        Ok(())
    })
}

/// Closed-form metric eigenvalues at τ ∈ [0, 1], ascending.
///
/// # Safety
/// `out` must be valid for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn ptm_metric_eigenvalues(n: usize, tau: f64, out: *mut f64, len: usize) -> PtmStatus {
    guard(|| {
        let v = metric::metric_eigenvalues_closed(n, tau)?;
        out_slice(out, len, n, "out")?.copy_from_slice(&v);
        Ok(())
    })
}

/// Row `k` (1-based) of the integer coefficient table of dimension `n`.
///
/// # Safety
/// `out` must be valid for `len` integers.
#[no_mangle]
pub unsafe extern "C" fn ptm_pascal_row(n: usize, k: usize, out: *mut i64, len: usize) -> PtmStatus {
    guard(|| {
        let table = metric::pascal_table(n)?;
        if !(1..=n).contains(&k) {
            return Err(Failure(PtmStatus::Argument, format!("k must lie in 1..={n}")));
        }
        out_slice(out, len, n, "out")?.copy_from_slice(table.row(k));
        Ok(())
    })
}

/// Solves the metric polynomial of dimension `n`.
///
/// # Safety
/// `out` must be valid for one pointer write.
#[no_mangle]
pub unsafe extern "C" fn ptm_metric_polynomial_solve(n: usize, out: *mut *mut PtmMetricPolynomial) -> PtmStatus {
    guard(|| write_box(out, PtmMetricPolynomial(MetricPolynomial::solve(n)?)))
}

/// # Safety
/// `poly` must be null or a handle from `ptm_metric_polynomial_solve` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ptm_metric_polynomial_free(poly: *mut PtmMetricPolynomial) {
    if !poly.is_null() {
        drop(Box::from_raw(poly));
    }
}

/// Metric Θ(τ).
///
/// # Safety
/// `poly` must be a live handle; `out` valid for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn ptm_metric_polynomial_evaluate(
    poly: *const PtmMetricPolynomial,
    tau: f64,
    out: *mut f64,
    len: usize,
) -> PtmStatus {
    guard(|| {
        let p = &handle(poly, "poly")?.0;
        let n = p.n;
        write_real(&p.evaluate(tau), out_slice(out, len, n * n, "out")?);
        Ok(())
    })
}

/// Builds the Dyson map of dimension `n`.
///
/// # Safety
/// `out` must be valid for one pointer write.
#[no_mangle]
pub unsafe extern "C" fn ptm_dyson_map_new(n: usize, out: *mut *mut PtmDysonMap) -> PtmStatus {
    guard(|| write_box(out, PtmDysonMap(DysonMap::new(n)?)))
}

/// # Safety
/// `map` must be null or a handle from `ptm_dyson_map_new` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ptm_dyson_map_free(map: *mut PtmDysonMap) {
    if !map.is_null() {
        drop(Box::from_raw(map));
    }
}

/// Dimension of a Dyson map handle, 0 for null.
///
/// # Safety
/// `map` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ptm_dyson_map_dim(map: *const PtmDysonMap) -> usize {
    map.as_ref().map_or(0, |m| m.0.n)
}

/// Ω(τ) for τ ∈ [0, 1).
///
/// # Safety
/// `map` must be a live handle; `out` valid for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn ptm_dyson_map_omega(map: *const PtmDysonMap, tau: f64, out: *mut f64, len: usize) -> PtmStatus {
    guard(|| {
        let m = &handle(map, "map")?.0;
        let omega = m.omega(tau)?;
        write_real(&omega, out_slice(out, len, m.n * m.n, "out")?);
        Ok(())
    })
}

/// Hermitian image ΩHΩ⁻¹ at τ ∈ [0, 1).
///
/// # Safety
/// `map` must be a live handle; `out` valid for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn ptm_dyson_map_hermitian(map: *const PtmDysonMap, tau: f64, out: *mut f64, len: usize) -> PtmStatus {
    guard(|| {
        let m = &handle(map, "map")?.0;
        let h = m.dyson_hamiltonian(tau)?;
        write_real(&h, out_slice(out, len, m.n * m.n, "out")?);
        Ok(())
    })
}

/// Coriolis term Σ(τ), split into real and imaginary parts.
///
/// # Safety
/// `map` must be a live handle; `re` and `im` valid for `len` doubles each.
#[no_mangle]
pub unsafe extern "C" fn ptm_dyson_map_coriolis(
    map: *const PtmDysonMap,
    tau: f64,
    re: *mut f64,
    im: *mut f64,
    len: usize,
) -> PtmStatus {
    guard(|| {
        let m = &handle(map, "map")?.0;
        let sigma = m.coriolis(tau)?.sigma;
        let need = m.n * m.n;
        write_complex(&sigma, out_slice(re, len, need, "re")?, out_slice(im, len, need, "im")?);
        Ok(())
    })
}

/// Integrates from `tau0` to `tau1` with RK4 steps of `step` in `frame`.
/// With `psi0_re`/`psi0_im` both null the ground state of H(`tau0`) is used
/// (mapped by Ω in the P frame); otherwise both must hold `n` doubles.
///
/// # Safety
/// Non-null pointers must be valid as described; `out` valid for one pointer write.
#[no_mangle]
pub unsafe extern "C" fn ptm_evolve(
    n: usize,
    tau0: f64,
    tau1: f64,
    step: f64,
    frame: PtmFrame,
    psi0_re: *const f64,
    psi0_im: *const f64,
    out: *mut *mut PtmTrajectory,
) -> PtmStatus {
    guard(|| {
        let config = EvolutionConfig { n, tau0, tau1, step, frame: frame.into() };
        config.validate()?;
        let map = DysonMap::new(n)?;
        let psi0 = match (psi0_re.is_null(), psi0_im.is_null()) {
            (true, true) => evolution::default_initial_state(&map, tau0, config.frame)?,
            (false, false) => {
                let re = std::slice::from_raw_parts(psi0_re, n);
                let im = std::slice::from_raw_parts(psi0_im, n);
                ComplexVector::from_iterator(n, re.iter().zip(im).map(|(&r, &i)| Complex::new(r, i)))
            }
            _ => return Err(null("one of psi0_re, psi0_im")),
        };
        write_box(out, PtmTrajectory(evolution::evolve_with(&map, &config, &psi0)?))
    })
}

/// # Safety
/// `traj` must be null or a handle from `ptm_evolve` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ptm_trajectory_free(traj: *mut PtmTrajectory) {
    if !traj.is_null() {
        drop(Box::from_raw(traj));
    }
}

/// Number of samples, 0 for null.
///
/// # Safety
/// `traj` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ptm_trajectory_len(traj: *const PtmTrajectory) -> usize {
    traj.as_ref().map_or(0, |t| t.0.taus.len())
}

/// max |norm(τ) − norm(τ₀)| over the trajectory, NaN for null.
///
/// # Safety
/// `traj` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ptm_trajectory_norm_drift(traj: *const PtmTrajectory) -> f64 {
    traj.as_ref().map_or(f64::NAN, |t| t.0.norm_drift())
}

/// Sample `index`: its τ, physical norm and state (`n` doubles each part).
/// Any output pointer may be null to skip it.
///
/// # Safety
/// `traj` must be a live handle; non-null outputs valid for the sizes above.
#[no_mangle]
pub unsafe extern "C" fn ptm_trajectory_sample(
    traj: *const PtmTrajectory,
    index: usize,
    tau: *mut f64,
    phys_norm: *mut f64,
    re: *mut f64,
    im: *mut f64,
) -> PtmStatus {
    guard(|| {
        let t = &handle(traj, "traj")?.0;
        if index >= t.taus.len() {
            return Err(Failure(PtmStatus::Argument, format!("index {index} out of range 0..{}", t.taus.len())));
        }
        if !tau.is_null() {
            *tau = t.taus[index];
        }
        if !phys_norm.is_null() {
            *phys_norm = t.phys_norm[index];
        }
        let state = &t.states[index];
        if !re.is_null() {
            std::slice::from_raw_parts_mut(re, t.n).iter_mut().zip(state.iter()).for_each(|(o, z)| *o = z.re);
        }
        if !im.is_null() {
            std::slice::from_raw_parts_mut(im, t.n).iter_mut().zip(state.iter()).for_each(|(o, z)| *o = z.im);
        }
        Ok(())
    })
}
