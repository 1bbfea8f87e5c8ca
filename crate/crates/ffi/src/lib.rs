//! C ABI over the `entroq` core crate.
//!
//! States and ciphers are opaque heap handles created by `entroq_*` calls and
//! released with the matching `_free`. Every fallible call returns an
//! [`EntroqStatus`] and writes its result through an out-pointer; on failure
//! `entroq_last_error` gives a message for the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use entroq::cipher::{make_ambainis_smith, make_full_pad, make_xor_universal_default, KeyedCipher};
use entroq::gf2::{aghp_with_degree, measure_bias};
use entroq::harness::indist_distance;
use entroq::linalg::{max_entangled, random_state, CMatrix, C64};
use entroq::minentropy::{cond_min_entropy, SolverOptions};
use entroq::{DensityOperator, Error, Layout};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EntroqStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DimensionMismatch = 3,
    TooLarge = 4,
    NotAState = 5,
    NonConvergence = 6,
    Internal = 7,
}

/// Density operator on `A (x) E`.
pub struct EntroqState(DensityOperator);

/// Keyed quantum cipher acting on subsystem `A`.
pub struct EntroqCipher(KeyedCipher);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> EntroqStatus {
    match e {
        Error::DimensionMismatch(_) | Error::UnknownLabel(_) | Error::DuplicateLabel(_) => {
            EntroqStatus::DimensionMismatch
        }
        Error::TooLarge(_) | Error::SetTooLarge(_) => EntroqStatus::TooLarge,
        Error::NotHermitian(_) | Error::NotAState(_) => EntroqStatus::NotAState,
        Error::NonConvergence { .. } => EntroqStatus::NonConvergence,
        _ => EntroqStatus::InvalidArgument,
    }
}

/// Runs `f`, storing its value in `out`, mapping errors and panics to codes.
fn guard<T>(out: *mut T, f: impl FnOnce() -> entroq::Result<T>) -> EntroqStatus {
    if out.is_null() {
        set_error("null output pointer");
        return EntroqStatus::NullPointer;
    }
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(v)) => {
            // SAFETY: checked non-null; the caller provides writable storage.
            unsafe { out.write(v) };
            EntroqStatus::Ok
        }
        Ok(Err(e)) => {
            set_error(&e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic");
            EntroqStatus::Internal
        }
    }
}

fn null_arg(name: &str) -> Error {
    Error::InvalidArgument(format!("`{name}` is null"))
}

/// # Safety
/// `p` must be null or a live handle from this library.
unsafe fn deref<'a, T>(p: *const T, name: &str) -> entroq::Result<&'a T> {
    p.as_ref().ok_or_else(|| null_arg(name))
}

fn boxed<T>(v: T) -> *mut T {
    Box::into_raw(Box::new(v))
}

/// Message for the last failed call on this thread. The pointer stays valid
/// until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn entroq_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Random state on `n_a` plus `n_e` qubits with the given rank, seeded.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn entroq_state_random(
    n_a: usize,
    n_e: usize,
    rank: usize,
    seed: u64,
    out: *mut *mut EntroqState,
) -> EntroqStatus {
    guard(out, || {
        if n_a == 0 || n_a > 8 || n_e > 8 {
            return Err(Error::InvalidArgument(format!("qubit counts {n_a}, {n_e} out of range")));
        }
        let layout = Layout::new([("A", 1 << n_a), ("E", 1 << n_e)])?;
        Ok(boxed(EntroqState(random_state(layout, rank, seed)?)))
    })
}

/// Maximally entangled state between `n`-qubit `A` and `E`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn entroq_state_max_entangled(n: usize, out: *mut *mut EntroqState) -> EntroqStatus {
    guard(out, || Ok(boxed(EntroqState(max_entangled(n)?))))
}

/// State on `A (x) E` from a row-major complex matrix of side `dim_a * dim_e`
/// given as separate real and imaginary arrays.
///
/// # Safety
/// `re` and `im` must each point to `(dim_a * dim_e)^2` doubles; `out` must be
/// valid for writes.
#[no_mangle]
pub unsafe extern "C" fn entroq_state_from_matrix(
    re: *const f64,
    im: *const f64,
    dim_a: usize,
    dim_e: usize,
    out: *mut *mut EntroqState,
) -> EntroqStatus {
    guard(out, || {
        if re.is_null() || im.is_null() {
            return Err(null_arg("re/im"));
        }
        let layout = Layout::new([("A", dim_a), ("E", dim_e)])?;
        let d = layout.total_dim();
        if d > entroq::tol::MAX_JOINT_DIM {
            return Err(Error::TooLarge(d));
        }
        let re = std::slice::from_raw_parts(re, d * d);
        let im = std::slice::from_raw_parts(im, d * d);
        let m = CMatrix::from_fn(d, d, |i, j| C64::new(re[i * d + j], im[i * d + j]));
        Ok(boxed(EntroqState(DensityOperator::new(m, layout)?)))
    })
}

/// Joint dimension of the state, or 0 for a null handle.
///
/// # Safety
/// `state` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn entroq_state_dim(state: *const EntroqState) -> usize {
    state.as_ref().map_or(0, |s| s.0.as_hermitian().dim())
}

/// # Safety
/// `state` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn entroq_state_free(state: *mut EntroqState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// `H_min(A|E)` in bits, certified to within `tol_bits` (0 selects the
/// default tolerance).
///
/// # Safety
/// `state` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn entroq_cond_min_entropy(
    state: *const EntroqState,
    tol_bits: f64,
    out: *mut f64,
) -> EntroqStatus {
    guard(out, || {
        let s = deref(state, "state")?;
        let opts = if tol_bits > 0.0 { SolverOptions::with_tol(tol_bits) } else { SolverOptions::default() };
        Ok(cond_min_entropy(&s.0, &["A"], &opts)?.value)
    })
}

/// Uniform Pauli one-time pad on `n` qubits.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn entroq_cipher_full_pad(n: usize, out: *mut *mut EntroqCipher) -> EntroqStatus {
    guard(out, || Ok(boxed(EntroqCipher(make_full_pad(n)?))))
}

/// Pauli cipher keyed by the AGHP small-bias set on `2n` bits with field
/// degree `m`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn entroq_cipher_ambainis_smith(
    n: usize,
    m: u32,
    out: *mut *mut EntroqCipher,
) -> EntroqStatus {
    guard(out, || {
        let set = aghp_with_degree(2 * n, m)?;
        Ok(boxed(EntroqCipher(make_ambainis_smith(n, &set)?)))
    })
}

/// XOR-universal cipher on `n` qubits with the first `key_count` keys.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn entroq_cipher_xor_universal(
    n: usize,
    key_count: u64,
    out: *mut *mut EntroqCipher,
) -> EntroqStatus {
    guard(out, || Ok(boxed(EntroqCipher(make_xor_universal_default(n, key_count)?))))
}

/// Number of keys, or 0 for a null handle.
///
/// # Safety
/// `cipher` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn entroq_cipher_key_count(cipher: *const EntroqCipher) -> u64 {
    cipher.as_ref().map_or(0, |c| c.0.key_count() as u64)
}

/// # Safety
/// `cipher` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn entroq_cipher_free(cipher: *mut EntroqCipher) {
    if !cipher.is_null() {
        drop(Box::from_raw(cipher));
    }
}

/// Trace distance between the key-averaged ciphertext of `state` and
/// `Omega (x) rho^E`.
///
/// # Safety
/// Both handles must be live and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn entroq_indist_distance(
    cipher: *const EntroqCipher,
    state: *const EntroqState,
    out: *mut f64,
) -> EntroqStatus {
    guard(out, || indist_distance(&deref(cipher, "cipher")?.0, &deref(state, "state")?.0))
}

/// Measured bias and nominal bound `(n-1)/2^m` of the AGHP set on `n` bits.
///
/// # Safety
/// `measured` and `bound` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn entroq_aghp_bias(n: usize, m: u32, measured: *mut f64, bound: *mut f64) -> EntroqStatus {
    if bound.is_null() {
        set_error("null output pointer");
        return EntroqStatus::NullPointer;
    }
    let mut nominal = 0.0;
    let status = guard(measured, || {
        let set = aghp_with_degree(n, m)?;
        nominal = set.delta_bound();
        measure_bias(set.strings())
    });
    if status == EntroqStatus::Ok {
        bound.write(nominal);
    }
    status
}
