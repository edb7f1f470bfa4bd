//! C ABI over `bpqn`.
//!
//! Circuits cross the boundary as opaque `BpqnCircuit*` handles owned by the
//! caller and released with `bpqn_circuit_free`. Strings returned by the
//! library are released with `bpqn_string_free`. Every fallible call returns
//! a `BpqnStatus`; on failure `bpqn_last_error` describes it.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use bpqn::matrices::build_matrix;
use bpqn::synthesis::{recurrence_cost, synth};
use bpqn::verification::verify_circuit;
use bpqn::{Circuit, Error};

/// Result of every fallible call.
#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum BpqnStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    /// n < p + q
    NotRepresentable = 3,
    Parse = 4,
    /// Labels disagree, or a circuit cannot be transposed.
    Structural = 5,
    /// The value does not fit the output type.
    Overflow = 6,
    Panic = 7,
}

/// Opaque circuit handle.
pub struct BpqnCircuit {
    inner: Circuit,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn status_of(e: &Error) -> BpqnStatus {
    match e {
        Error::NotRepresentable => BpqnStatus::NotRepresentable,
        Error::Parse { .. } | Error::Malformed(_) => BpqnStatus::Parse,
        Error::NotReduced(_) | Error::LabelMismatch(_) => BpqnStatus::Structural,
        _ => BpqnStatus::InvalidArgument,
    }
}

fn guard(f: impl FnOnce() -> Result<(), (BpqnStatus, String)>) -> BpqnStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            BpqnStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            BpqnStatus::Panic
        }
    }
}

fn lib_err(e: Error) -> (BpqnStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (BpqnStatus, String) {
    (BpqnStatus::NullPointer, format!("{what} is null"))
}

unsafe fn circuit_ref<'a>(c: *const BpqnCircuit) -> Result<&'a Circuit, (BpqnStatus, String)> {
    // SAFETY: caller passes null or a live handle from this library.
    unsafe { c.as_ref() }.map(|h| &h.inner).ok_or_else(|| null("circuit"))
}

unsafe fn put_circuit(out: *mut *mut BpqnCircuit, c: Circuit) {
    // SAFETY: `out` was checked non-null by the caller.
    unsafe { *out = Box::into_raw(Box::new(BpqnCircuit { inner: c })) };
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), (BpqnStatus, String)> {
    let c = CString::new(s).map_err(|_| (BpqnStatus::Panic, "interior NUL".to_string()))?;
    // SAFETY: `out` was checked non-null by the caller.
    unsafe { *out = c.into_raw() };
    Ok(())
}

/// Message for the last failed call on this thread, or NULL. Valid until the
/// next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn bpqn_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Builds the circuit for B(p,q,n) into `*out`.
///
/// # Safety
/// `out` must be null or valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn bpqn_synth(p: usize, q: usize, n: usize, out: *mut *mut BpqnCircuit) -> BpqnStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let s = synth(p, q, n).map_err(lib_err)?;
        unsafe { put_circuit(out, s.circuit) };
        Ok(())
    })
}

/// Parses SLP text into `*out`.
///
/// # Safety
/// `text` must be null or a NUL-terminated string; `out` as in `bpqn_synth`.
#[no_mangle]
pub unsafe extern "C" fn bpqn_circuit_parse(text: *const c_char, out: *mut *mut BpqnCircuit) -> BpqnStatus {
    guard(|| {
        if text.is_null() {
            return Err(null("text"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        // SAFETY: checked non-null; caller guarantees NUL termination.
        let text = unsafe { CStr::from_ptr(text) }
            .to_str()
            .map_err(|_| (BpqnStatus::Parse, "text is not UTF-8".to_string()))?;
        let c = Circuit::parse_slp(text).map_err(lib_err)?;
        unsafe { put_circuit(out, c) };
        Ok(())
    })
}

/// Releases a handle. NULL is ignored.
///
/// # Safety
/// `c` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bpqn_circuit_free(c: *mut BpqnCircuit) {
    if !c.is_null() {
        // SAFETY: caller guarantees ownership of a live handle.
        drop(unsafe { Box::from_raw(c) });
    }
}

/// Number of gates, or 0 for NULL.
///
/// # Safety
/// `c` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bpqn_circuit_gate_count(c: *const BpqnCircuit) -> usize {
    unsafe { circuit_ref(c) }.map_or(0, Circuit::gate_count)
}

/// Number of inputs, or 0 for NULL.
///
/// # Safety
/// `c` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bpqn_circuit_input_count(c: *const BpqnCircuit) -> usize {
    unsafe { circuit_ref(c) }.map_or(0, |c| c.inputs().len())
}

/// Number of outputs, or 0 for NULL.
///
/// # Safety
/// `c` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bpqn_circuit_output_count(c: *const BpqnCircuit) -> usize {
    unsafe { circuit_ref(c) }.map_or(0, |c| c.outputs().len())
}

/// Writes the SLP text to `*out`; free it with `bpqn_string_free`.
///
/// # Safety
/// `c` must be null or a live handle; `out` null or writable.
#[no_mangle]
pub unsafe extern "C" fn bpqn_circuit_to_slp(c: *const BpqnCircuit, out: *mut *mut c_char) -> BpqnStatus {
    guard(|| {
        let c = unsafe { circuit_ref(c) }?;
        if out.is_null() {
            return Err(null("out"));
        }
        unsafe { put_string(out, c.to_slp()) }
    })
}

/// Writes Graphviz DOT to `*out`; free it with `bpqn_string_free`.
///
/// # Safety
/// As for `bpqn_circuit_to_slp`.
#[no_mangle]
pub unsafe extern "C" fn bpqn_circuit_to_dot(c: *const BpqnCircuit, out: *mut *mut c_char) -> BpqnStatus {
    guard(|| {
        let c = unsafe { circuit_ref(c) }?;
        if out.is_null() {
            return Err(null("out"));
        }
        unsafe { put_string(out, c.to_dot()) }
    })
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must be null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bpqn_string_free(s: *mut c_char) {
    if !s.is_null() {
        // SAFETY: allocated by `CString::into_raw` in `put_string`.
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Transposed circuit into `*out` as a new handle.
///
/// # Safety
/// `c` must be null or a live handle; `out` null or writable.
#[no_mangle]
pub unsafe extern "C" fn bpqn_circuit_transpose(c: *const BpqnCircuit, out: *mut *mut BpqnCircuit) -> BpqnStatus {
    guard(|| {
        let c = unsafe { circuit_ref(c) }?;
        if out.is_null() {
            return Err(null("out"));
        }
        let t = c.transpose().map_err(lib_err)?;
        unsafe { put_circuit(out, t) };
        Ok(())
    })
}

/// Sets `*passed` to whether `c` computes B(p,q,n) with exact coefficients.
/// Label disagreement is reported as `BPQN_STATUS_STRUCTURAL`.
///
/// # Safety
/// `c` must be null or a live handle; `passed` null or writable.
#[no_mangle]
pub unsafe extern "C" fn bpqn_verify(
    c: *const BpqnCircuit,
    p: usize,
    q: usize,
    n: usize,
    passed: *mut bool,
) -> BpqnStatus {
    guard(|| {
        let c = unsafe { circuit_ref(c) }?;
        if passed.is_null() {
            return Err(null("passed"));
        }
        let m = build_matrix(p, q, n).map_err(lib_err)?;
        let r = verify_circuit(c, &m).map_err(lib_err)?;
        unsafe { *passed = r.passed };
        Ok(())
    })
}

/// Predicted gate count of `bpqn_synth(p, q, n)`.
///
/// # Safety
/// `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn bpqn_recurrence_cost(p: usize, q: usize, n: usize, out: *mut u64) -> BpqnStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let cost = recurrence_cost(p, q, n).map_err(lib_err)?;
        let v = u64::try_from(&cost).map_err(|_| (BpqnStatus::Overflow, format!("cost {cost} exceeds u64")))?;
        unsafe { *out = v };
        Ok(())
    })
}

/// Rank of B(p,q,n) over GF(prime).
///
/// # Safety
/// `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn bpqn_rank_mod_prime(p: usize, q: usize, n: usize, prime: u64, out: *mut usize) -> BpqnStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let m = build_matrix(p, q, n).map_err(lib_err)?;
        let r = m.rank_mod_prime(prime).map_err(lib_err)?;
        unsafe { *out = r };
        Ok(())
    })
}
