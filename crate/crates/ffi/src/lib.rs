//! C ABI for `qwalk`.
//!
//! Objects are opaque heap handles created by `qw_*_new` and released by the
//! matching `qw_*_free`. Every fallible call returns a [`QwStatus`]; on
//! failure `qw_last_error()` describes the problem until the next failing
//! call on the same thread. Band indices are `1` (lower) and `2` (upper).
//! Amplitude buffers are split into real and imaginary arrays of length
//! `2N`, indexed `2x + c`.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use qwalk::bloch::eigenstate_bloch;
use qwalk::eigensystem::full_eigenbasis;
use qwalk::spectrum::{degeneracy_report, eigenphase, full_spectrum};
use qwalk::{Band, Basis, CoinParams, Complex64, EigenBasis, Error, GaugePolicy, StateVector, StepOperator};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QwStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    OutOfRange = 3,
    BufferTooSmall = 4,
    DegeneratePair = 5,
    Internal = 6,
}

/// Coin parameters and lattice size.
pub struct QwWalk {
    params: CoinParams,
}

/// A walker state in the position basis.
pub struct QwState {
    inner: StateVector,
}

/// Complete eigenbasis with the equal-weight gauge for degenerate pairs.
pub struct QwEigenBasis {
    inner: EigenBasis,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct QwBloch {
    pub rx: f64,
    pub ry: f64,
    pub rz: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).expect("NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn fail(status: QwStatus, msg: impl Into<String>) -> QwStatus {
    set_error(msg);
    status
}

fn from_error(e: Error) -> QwStatus {
    let status = match &e {
        Error::IndexOutOfRange { .. } => QwStatus::OutOfRange,
        Error::DegeneratePair { .. } => QwStatus::DegeneratePair,
        Error::Eigensolver(_) | Error::Consistency(_) => QwStatus::Internal,
        _ => QwStatus::InvalidArgument,
    };
    fail(status, e.to_string())
}

/// Runs `f`, turning panics into `Internal`.
fn guard(f: impl FnOnce() -> QwStatus) -> QwStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| fail(QwStatus::Internal, "panic inside qwalk"))
}

macro_rules! deref {
    ($p:expr) => {
        match unsafe { $p.as_ref() } {
            Some(v) => v,
            None => return fail(QwStatus::NullPointer, concat!(stringify!($p), " is null")),
        }
    };
}

macro_rules! deref_mut {
    ($p:expr) => {
        match unsafe { $p.as_mut() } {
            Some(v) => v,
            None => return fail(QwStatus::NullPointer, concat!(stringify!($p), " is null")),
        }
    };
}

macro_rules! check_out {
    ($p:expr) => {
        if $p.is_null() {
            return fail(QwStatus::NullPointer, concat!(stringify!($p), " is null"));
        }
    };
}

fn band(z: u8) -> Result<Band, QwStatus> {
    Band::from_index(z).map_err(from_error)
}

fn boxed<T>(value: T, out: *mut *mut T) -> QwStatus {
    unsafe { *out = Box::into_raw(Box::new(value)) };
    QwStatus::Ok
}

unsafe fn release<T>(p: *mut T) {
    if !p.is_null() {
        drop(unsafe { Box::from_raw(p) });
    }
}

/// Message for the most recent failure on this thread, or NULL.
/// The pointer stays valid until the next failing call on the thread.
#[no_mangle]
pub extern "C" fn qw_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

#[no_mangle]
pub extern "C" fn qw_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Walk on `sites` sites with coin `(r, alpha, beta)`.
///
/// # Safety
/// `out` must be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn qw_walk_new(sites: usize, r: f64, alpha: f64, beta: f64, out: *mut *mut QwWalk) -> QwStatus {
    check_out!(out);
    guard(|| match CoinParams::new(sites, r, alpha, beta) {
        Ok(params) => boxed(QwWalk { params }, out),
        Err(e) => from_error(e),
    })
}

/// Walk with the lattice angle `alpha = alpha_n * pi / sites`, exactly.
///
/// # Safety
/// `out` must be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn qw_walk_new_alpha_n(
    sites: usize,
    r: f64,
    alpha_n: i64,
    beta: f64,
    out: *mut *mut QwWalk,
) -> QwStatus {
    check_out!(out);
    guard(|| match CoinParams::with_alpha_index(sites, r, alpha_n, beta) {
        Ok(params) => boxed(QwWalk { params }, out),
        Err(e) => from_error(e),
    })
}

/// # Safety
/// `walk` must come from `qw_walk_new*` and not be used afterwards. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn qw_walk_free(walk: *mut QwWalk) {
    unsafe { release(walk) }
}

/// Number of sites, or 0 for NULL.
///
/// # Safety
/// `walk` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qw_walk_sites(walk: *const QwWalk) -> usize {
    unsafe { walk.as_ref() }.map_or(0, |w| w.params.sites())
}

/// Eigenphase `lambda(k, z)` in `[-pi, pi)`.
///
/// # Safety
/// `walk` must be a live handle and `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn qw_eigenphase(walk: *const QwWalk, k: usize, z: u8, out: *mut f64) -> QwStatus {
    let walk = deref!(walk);
    check_out!(out);
    guard(|| {
        let z = match band(z) {
            Ok(z) => z,
            Err(s) => return s,
        };
        match eigenphase(&walk.params, k, z) {
            Ok(lambda) => {
                unsafe { *out = lambda };
                QwStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// All `2N` eigenphases ordered by `k`, then band. `partners` may be NULL;
/// otherwise it receives the conjugate wavenumber or -1.
///
/// # Safety
/// `lambdas` (and `partners` when non-NULL) must hold `len` elements.
#[no_mangle]
pub unsafe extern "C" fn qw_spectrum(walk: *const QwWalk, lambdas: *mut f64, partners: *mut i64, len: usize) -> QwStatus {
    let walk = deref!(walk);
    check_out!(lambdas);
    guard(|| {
        let points = full_spectrum(&walk.params);
        if len < points.len() {
            return fail(QwStatus::BufferTooSmall, format!("need {} entries, got {len}", points.len()));
        }
        let lambdas = unsafe { std::slice::from_raw_parts_mut(lambdas, len) };
        for (slot, p) in lambdas.iter_mut().zip(&points) {
            *slot = p.lambda;
        }
        if !partners.is_null() {
            let partners = unsafe { std::slice::from_raw_parts_mut(partners, len) };
            for (slot, p) in partners.iter_mut().zip(&points) {
                *slot = p.partner_k.map_or(-1, |k| k as i64);
            }
        }
        QwStatus::Ok
    })
}

/// Degeneracy structure. `n` receives the lattice index or -1. Up to
/// `unique_cap` unique wavenumbers are written; `unique_len` receives the
/// total count (at most 2), so a short buffer can be detected.
///
/// # Safety
/// Output pointers must be valid; `unique_ks` must hold `unique_cap` elements.
#[no_mangle]
pub unsafe extern "C" fn qw_degeneracy(
    walk: *const QwWalk,
    is_degenerate: *mut bool,
    n: *mut i64,
    unique_ks: *mut usize,
    unique_cap: usize,
    unique_len: *mut usize,
) -> QwStatus {
    let walk = deref!(walk);
    check_out!(is_degenerate);
    check_out!(n);
    check_out!(unique_len);
    if unique_cap > 0 {
        check_out!(unique_ks);
    }
    guard(|| {
        let report = degeneracy_report(&walk.params);
        unsafe {
            *is_degenerate = report.is_degenerate;
            *n = report.n.map_or(-1, |v| v as i64);
            *unique_len = report.unique_ks.len();
            for (i, &k) in report.unique_ks.iter().take(unique_cap).enumerate() {
                *unique_ks.add(i) = k;
            }
        }
        if unique_cap < report.unique_ks.len() {
            return fail(QwStatus::BufferTooSmall, "unique_ks buffer too small");
        }
        QwStatus::Ok
    })
}

/// The basis state `|x>|c>`.
///
/// # Safety
/// `out` must be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn qw_state_new_basis(sites: usize, x: usize, c: usize, out: *mut *mut QwState) -> QwStatus {
    check_out!(out);
    guard(|| match StateVector::basis_state(sites, x, c) {
        Ok(inner) => boxed(QwState { inner }, out),
        Err(e) => from_error(e),
    })
}

/// A state from `2 * sites` amplitudes, used as given (not normalized).
///
/// # Safety
/// `re` and `im` must each hold `2 * sites` elements; `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn qw_state_new(sites: usize, re: *const f64, im: *const f64, out: *mut *mut QwState) -> QwStatus {
    check_out!(re);
    check_out!(im);
    check_out!(out);
    guard(|| {
        let len = 2 * sites;
        let (re, im) = unsafe { (std::slice::from_raw_parts(re, len), std::slice::from_raw_parts(im, len)) };
        let amps = re.iter().zip(im).map(|(&a, &b)| Complex64::new(a, b)).collect();
        match StateVector::new(sites, Basis::Position, amps) {
            Ok(inner) => boxed(QwState { inner }, out),
            Err(e) => from_error(e),
        }
    })
}

/// # Safety
/// `state` must come from `qw_state_new*` and not be used afterwards. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn qw_state_free(state: *mut QwState) {
    unsafe { release(state) }
}

fn write_amplitudes(amps: &[Complex64], re: *mut f64, im: *mut f64, len: usize) -> QwStatus {
    if re.is_null() || im.is_null() {
        return fail(QwStatus::NullPointer, "amplitude buffer is null");
    }
    if len < amps.len() {
        return fail(QwStatus::BufferTooSmall, format!("need {} entries, got {len}", amps.len()));
    }
    for (i, a) in amps.iter().enumerate() {
        unsafe {
            *re.add(i) = a.re;
            *im.add(i) = a.im;
        }
    }
    QwStatus::Ok
}

/// Copies the `2N` position-basis amplitudes out.
///
/// # Safety
/// `re` and `im` must hold `len` elements.
#[no_mangle]
pub unsafe extern "C" fn qw_state_amplitudes(state: *const QwState, re: *mut f64, im: *mut f64, len: usize) -> QwStatus {
    let state = deref!(state);
    guard(|| write_amplitudes(state.inner.amplitudes(), re, im, len))
}

/// Applies one step of `walk` to `state` in place.
///
/// # Safety
/// Both handles must be live.
#[no_mangle]
pub unsafe extern "C" fn qw_apply_step(walk: *const QwWalk, state: *mut QwState) -> QwStatus {
    let walk = deref!(walk);
    let state = deref_mut!(state);
    guard(|| match StepOperator::new(&walk.params).apply_step(&state.inner) {
        Ok(next) => {
            state.inner = next;
            QwStatus::Ok
        }
        Err(e) => from_error(e),
    })
}

/// Applies `len` steps, step `t` using bias `rs[t]` with the walk's `alpha` and `beta`.
///
/// # Safety
/// Both handles must be live; `rs` must hold `len` elements.
#[no_mangle]
pub unsafe extern "C" fn qw_evolve_r_sequence(
    walk: *const QwWalk,
    state: *mut QwState,
    rs: *const f64,
    len: usize,
) -> QwStatus {
    let walk = deref!(walk);
    let state = deref_mut!(state);
    if len > 0 {
        check_out!(rs);
    }
    guard(|| {
        let rs = if len == 0 { &[][..] } else { unsafe { std::slice::from_raw_parts(rs, len) } };
        let sequence: Result<Vec<CoinParams>, _> = rs.iter().map(|&r| walk.params.with_r(r)).collect();
        match sequence.and_then(|seq| qwalk::operator::evolve(&seq, &state.inner)) {
            Ok(next) => {
                state.inner = next;
                QwStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Closed-form eigenbasis, ordered by `k` then band.
///
/// # Safety
/// `walk` must be live and `out` valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn qw_eigenbasis_new(walk: *const QwWalk, out: *mut *mut QwEigenBasis) -> QwStatus {
    let walk = deref!(walk);
    check_out!(out);
    guard(|| match full_eigenbasis(&walk.params, &GaugePolicy::default()) {
        Ok(inner) => boxed(QwEigenBasis { inner }, out),
        Err(e) => from_error(e),
    })
}

/// # Safety
/// `basis` must come from `qw_eigenbasis_new` and not be used afterwards. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn qw_eigenbasis_free(basis: *mut QwEigenBasis) {
    unsafe { release(basis) }
}

/// Number of basis vectors (`2N`), or 0 for NULL.
///
/// # Safety
/// `basis` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qw_eigenbasis_len(basis: *const QwEigenBasis) -> usize {
    unsafe { basis.as_ref() }.map_or(0, |b| b.inner.len())
}

/// Label of basis vector `index`.
///
/// # Safety
/// `basis` must be live; output pointers valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qw_eigenbasis_label(
    basis: *const QwEigenBasis,
    index: usize,
    k: *mut usize,
    z: *mut u8,
    lambda: *mut f64,
) -> QwStatus {
    let basis = deref!(basis);
    check_out!(k);
    check_out!(z);
    check_out!(lambda);
    let Some(state) = basis.inner.states().get(index) else {
        return fail(QwStatus::OutOfRange, format!("index {index} outside basis of {}", basis.inner.len()));
    };
    unsafe {
        *k = state.k;
        *z = state.z.index();
        *lambda = state.lambda;
    }
    QwStatus::Ok
}

/// Position-basis amplitudes of basis vector `index`.
///
/// # Safety
/// `basis` must be live; `re` and `im` must hold `len` elements.
#[no_mangle]
pub unsafe extern "C" fn qw_eigenbasis_vector(
    basis: *const QwEigenBasis,
    index: usize,
    re: *mut f64,
    im: *mut f64,
    len: usize,
) -> QwStatus {
    let basis = deref!(basis);
    let Some(state) = basis.inner.states().get(index) else {
        return fail(QwStatus::OutOfRange, format!("index {index} outside basis of {}", basis.inner.len()));
    };
    guard(|| write_amplitudes(state.vector.clone().into_position().amplitudes(), re, im, len))
}

/// Bloch vector of the reduced coin state of eigenstate `(k, z)`,
/// equal-weight gauge for degenerate pairs.
///
/// # Safety
/// `walk` must be live and `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn qw_bloch_eigenstate(walk: *const QwWalk, k: usize, z: u8, out: *mut QwBloch) -> QwStatus {
    let walk = deref!(walk);
    check_out!(out);
    guard(|| {
        let z = match band(z) {
            Ok(z) => z,
            Err(s) => return s,
        };
        match eigenstate_bloch(&walk.params, k, z, &GaugePolicy::default()) {
            Ok(b) => {
                unsafe {
                    *out = QwBloch {
                        rx: b.rx,
                        ry: b.ry,
                        rz: b.rz,
                    }
                };
                QwStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}
