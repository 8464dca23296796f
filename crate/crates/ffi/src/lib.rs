//! C ABI over the tenper library: opaque tensor handles, status codes, and
//! exact rational results rendered as strings. The generated header lives at
//! `include/tenper.h`.
//!
//! Every function that can fail returns a [`TpStatus`]; the detail text of
//! the most recent failure on the calling thread is available through
//! [`tp_last_error_message`]. Strings handed out by this library must be
//! released with [`tp_string_free`], tensors with [`tp_tensor_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::ptr;

use tenper::error::Error;
use tenper::{bounds, combinat, genfun, ht, permanent, polytope};

/// Status code returned by every fallible call.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TpStatus {
    /// Success.
    Ok = 0,
    /// Domain error: bad shape, level out of range, precondition violated.
    Domain = 1,
    /// A resource guard stopped the computation.
    Resource = 2,
    /// Malformed input text.
    Parse = 3,
    /// A required pointer argument was null.
    NullArgument = 4,
    /// A string argument was not valid UTF-8.
    Utf8 = 5,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg).unwrap_or_else(|_| CString::new("invalid error text").unwrap());
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn fail(e: Error) -> TpStatus {
    let status = match &e {
        Error::Parse { .. } => TpStatus::Parse,
        Error::ResourceGuard { .. } | Error::DimensionGuard { .. } => TpStatus::Resource,
        _ => TpStatus::Domain,
    };
    set_error(e.to_string());
    status
}

/// Detail text of the most recent failure on this thread, or null. The
/// pointer stays valid until the next failing call on the same thread; do
/// not free it.
#[no_mangle]
pub extern "C" fn tp_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow()
            .as_ref()
            .map_or(ptr::null(), |c| c.as_ptr())
    })
}

pub struct TpTensor {
    inner: tenper::Tensor,
}

unsafe fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, TpStatus> {
    if ptr.is_null() {
        set_error("null string argument".into());
        return Err(TpStatus::NullArgument);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_error("string argument is not valid UTF-8".into());
        TpStatus::Utf8
    })
}

fn give_tensor(out: *mut *mut TpTensor, t: tenper::Tensor) -> TpStatus {
    if out.is_null() {
        set_error("null output pointer".into());
        return TpStatus::NullArgument;
    }
    let boxed = Box::new(TpTensor { inner: t });
    unsafe { *out = Box::into_raw(boxed) };
    TpStatus::Ok
}

fn give_string(out: *mut *mut c_char, s: String) -> TpStatus {
    if out.is_null() {
        set_error("null output pointer".into());
        return TpStatus::NullArgument;
    }
    match CString::new(s) {
        Ok(c) => {
            unsafe { *out = c.into_raw() };
            TpStatus::Ok
        }
        Err(_) => {
            set_error("result contained an interior NUL".into());
            TpStatus::Domain
        }
    }
}

unsafe fn borrow<'a>(t: *const TpTensor) -> Result<&'a tenper::Tensor, TpStatus> {
    if t.is_null() {
        set_error("null tensor handle".into());
        return Err(TpStatus::NullArgument);
    }
    Ok(&(*t).inner)
}

/// Parses hypermatrix text (.ht format) into a tensor handle.
///
/// # Safety
/// `text` must point to a NUL-terminated string and `out` to writable
/// pointer storage.
#[no_mangle]
pub unsafe extern "C" fn tp_tensor_parse(
    text: *const c_char,
    out: *mut *mut TpTensor,
) -> TpStatus {
    let text = match read_str(text) {
        Ok(s) => s,
        Err(e) => return e,
    };
    match ht::parse(text) {
        Ok(t) => give_tensor(out, t),
        Err(e) => fail(e),
    }
}

/// Identity tensor of dimension `n` and order `d`.
///
/// # Safety
/// `out` must point to writable pointer storage.
#[no_mangle]
pub unsafe extern "C" fn tp_tensor_identity(
    n: usize,
    d: usize,
    out: *mut *mut TpTensor,
) -> TpStatus {
    if n == 0 || d == 0 {
        return fail(Error::ZeroExtent);
    }
    give_tensor(out, tenper::Tensor::identity(n, d))
}

/// All-ones tensor of dimension `n` and order `d`.
///
/// # Safety
/// `out` must point to writable pointer storage.
#[no_mangle]
pub unsafe extern "C" fn tp_tensor_ones(n: usize, d: usize, out: *mut *mut TpTensor) -> TpStatus {
    if n == 0 || d == 0 {
        return fail(Error::ZeroExtent);
    }
    give_tensor(out, tenper::Tensor::ones(n, d))
}

/// Builds a named builtin tensor ("C" or "D").
///
/// # Safety
/// `name` must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tp_tensor_builtin(
    name: *const c_char,
    out: *mut *mut TpTensor,
) -> TpStatus {
    let name = match read_str(name) {
        Ok(s) => s,
        Err(e) => return e,
    };
    match polytope::builtin_tensor(name) {
        Ok(t) => give_tensor(out, t),
        Err(e) => fail(e),
    }
}

/// Releases a tensor handle; null is ignored.
///
/// # Safety
/// `t` must have come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn tp_tensor_free(t: *mut TpTensor) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// Releases a string produced by this library; null is ignored.
///
/// # Safety
/// `s` must have come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn tp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Order (number of indices) of the tensor; 0 for a null handle.
///
/// # Safety
/// `t` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn tp_tensor_order(t: *const TpTensor) -> usize {
    match borrow(t) {
        Ok(t) => t.order(),
        Err(_) => 0,
    }
}

/// Extent along a 1-based axis; 0 for a null handle or bad axis.
///
/// # Safety
/// `t` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn tp_tensor_dim(t: *const TpTensor, axis: usize) -> usize {
    match borrow(t) {
        Ok(t) if axis >= 1 && axis <= t.order() => t.dims()[axis - 1],
        _ => 0,
    }
}

/// Serializes the tensor back into .ht text.
///
/// # Safety
/// `t` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tp_tensor_to_text(
    t: *const TpTensor,
    out: *mut *mut c_char,
) -> TpStatus {
    let t = match borrow(t) {
        Ok(t) => t,
        Err(e) => return e,
    };
    give_string(out, ht::to_text(t))
}

/// k-permanent as an exact rational string ("36", "-5/2"). k = 1 is the
/// injection-sum permanent; higher k need a cubical tensor.
///
/// # Safety
/// `t` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tp_per(t: *const TpTensor, k: usize, out: *mut *mut c_char) -> TpStatus {
    let t = match borrow(t) {
        Ok(t) => t,
        Err(e) => return e,
    };
    let value = if k == 1 {
        permanent::per1(t)
    } else {
        permanent::kper(t, k)
    };
    match value {
        Ok(v) => give_string(out, v.to_string()),
        Err(e) => fail(e),
    }
}

/// The modified permanent anchored at the first minimum-extent axis.
///
/// # Safety
/// `t` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tp_per_min(t: *const TpTensor, out: *mut *mut c_char) -> TpStatus {
    let t = match borrow(t) {
        Ok(t) => t,
        Err(e) => return e,
    };
    match permanent::per1_min(t) {
        Ok(v) => give_string(out, v.to_string()),
        Err(e) => fail(e),
    }
}

/// Combinatorial hyperdeterminant as an exact rational string.
///
/// # Safety
/// `t` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tp_hyperdet(t: *const TpTensor, out: *mut *mut c_char) -> TpStatus {
    let t = match borrow(t) {
        Ok(t) => t,
        Err(e) => return e,
    };
    match genfun::hyperdet(t) {
        Ok(v) => give_string(out, v.to_string()),
        Err(e) => fail(e),
    }
}

/// Whether every k-plane of the tensor sums to exactly 1.
///
/// # Safety
/// `t` must be a live handle; `out` must point to writable bool storage.
#[no_mangle]
pub unsafe extern "C" fn tp_is_k_stochastic(
    t: *const TpTensor,
    k: usize,
    out: *mut bool,
) -> TpStatus {
    let t = match borrow(t) {
        Ok(t) => t,
        Err(e) => return e,
    };
    if out.is_null() {
        set_error("null output pointer".into());
        return TpStatus::NullArgument;
    }
    match polytope::is_k_stochastic(t, k) {
        Ok(v) => {
            *out = v;
            TpStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Number of Latin squares of order `n` (guarded at n <= 5).
///
/// # Safety
/// `out` must point to writable u64 storage.
#[no_mangle]
pub unsafe extern "C" fn tp_latin_count(n: usize, out: *mut u64) -> TpStatus {
    if out.is_null() {
        set_error("null output pointer".into());
        return TpStatus::NullArgument;
    }
    match combinat::count_latin_squares(n) {
        Ok(c) => {
            *out = c;
            TpStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Number of k-per index patterns of order-d dimension-n tensors.
///
/// # Safety
/// `out` must point to writable u64 storage.
#[no_mangle]
pub unsafe extern "C" fn tp_pattern_count(
    d: usize,
    n: usize,
    k: usize,
    out: *mut u64,
) -> TpStatus {
    if out.is_null() {
        set_error("null output pointer".into());
        return TpStatus::NullArgument;
    }
    let stream = match combinat::diagonal_patterns(d, n, k) {
        Ok(s) => s,
        Err(e) => return fail(e),
    };
    let mut count = 0u64;
    for item in stream {
        if let Err(e) = item {
            return fail(e);
        }
        count += 1;
    }
    *out = count;
    TpStatus::Ok
}

/// Exact vertex counts of a stochastic-tensor polytope. `kind` is "line" or
/// "plane"; `d` is 2 (doubly stochastic baseline, line only) or 3.
///
/// # Safety
/// `kind` must be NUL-terminated; `total` and `zero_one` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tp_vertex_counts(
    kind: *const c_char,
    n: usize,
    d: usize,
    total: *mut u64,
    zero_one: *mut u64,
) -> TpStatus {
    let kind = match read_str(kind) {
        Ok(s) => s,
        Err(e) => return e,
    };
    if total.is_null() || zero_one.is_null() {
        set_error("null output pointer".into());
        return TpStatus::NullArgument;
    }
    let kind = match kind {
        "line" => polytope::StochKind::Line,
        "plane" => polytope::StochKind::Plane,
        other => {
            return fail(Error::Precondition(format!(
                "kind must be line or plane, got {other:?}"
            )))
        }
    };
    let spec = match polytope::PolytopeSpec::new(d, n, kind) {
        Ok(s) => s,
        Err(e) => return fail(e),
    };
    match polytope::enumerate_vertices(&spec) {
        Ok(set) => {
            *total = set.total() as u64;
            *zero_one = set.zero_one_count() as u64;
            TpStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Minimum 1-permanent over seeded random convex combinations of
/// line-permutation tensors, as an exact rational string.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tp_probe_min_per(
    d: usize,
    n: usize,
    samples: usize,
    seed: u64,
    out: *mut *mut c_char,
) -> TpStatus {
    match bounds::probe_conjectures(d, n, samples, seed, bounds::ProbeSampler::ConvexCombination)
    {
        Ok(report) => match report.min_per {
            Some(v) => give_string(out, v.to_string()),
            None => give_string(out, "none".to_string()),
        },
        Err(e) => fail(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    unsafe fn parse(text: &str) -> *mut TpTensor {
        let c = CString::new(text).unwrap();
        let mut out: *mut TpTensor = ptr::null_mut();
        assert_eq!(tp_tensor_parse(c.as_ptr(), &mut out), TpStatus::Ok);
        out
    }

    unsafe fn take_string(s: *mut c_char) -> String {
        let text = CStr::from_ptr(s).to_str().unwrap().to_string();
        tp_string_free(s);
        text
    }

    #[test]
    fn parse_compute_roundtrip() {
        unsafe {
            let mut j3: *mut TpTensor = ptr::null_mut();
            assert_eq!(tp_tensor_ones(3, 3, &mut j3), TpStatus::Ok);
            assert_eq!(tp_tensor_order(j3), 3);
            assert_eq!(tp_tensor_dim(j3, 2), 3);
            assert_eq!(tp_tensor_dim(j3, 4), 0);

            let mut s: *mut c_char = ptr::null_mut();
            assert_eq!(tp_per(j3, 1, &mut s), TpStatus::Ok);
            assert_eq!(take_string(s), "36");
            let mut s: *mut c_char = ptr::null_mut();
            assert_eq!(tp_per(j3, 2, &mut s), TpStatus::Ok);
            assert_eq!(take_string(s), "12");

            let mut text: *mut c_char = ptr::null_mut();
            assert_eq!(tp_tensor_to_text(j3, &mut text), TpStatus::Ok);
            let round = take_string(text);
            let again = parse(&round);
            let mut s: *mut c_char = ptr::null_mut();
            assert_eq!(tp_per(again, 1, &mut s), TpStatus::Ok);
            assert_eq!(take_string(s), "36");
            tp_tensor_free(again);
            tp_tensor_free(j3);
        }
    }

    #[test]
    fn status_codes_and_last_error() {
        unsafe {
            let bad = CString::new("ht1\norder 2\ndims 2 2\n1 2 3\n").unwrap();
            let mut out: *mut TpTensor = ptr::null_mut();
            assert_eq!(tp_tensor_parse(bad.as_ptr(), &mut out), TpStatus::Parse);
            let msg = tp_last_error_message();
            assert!(!msg.is_null());
            let text = CStr::from_ptr(msg).to_str().unwrap();
            assert!(text.contains("line"), "{text}");

            assert_eq!(
                tp_tensor_parse(ptr::null(), &mut out),
                TpStatus::NullArgument
            );

            let mut count = 0u64;
            assert_eq!(tp_latin_count(6, &mut count), TpStatus::Resource);
            assert_eq!(tp_latin_count(4, &mut count), TpStatus::Ok);
            assert_eq!(count, 576);

            // k out of range is a domain error
            let t = parse("ht1\norder 2\ndims 2 2\n1 0 0 1\n");
            let mut s: *mut c_char = ptr::null_mut();
            assert_eq!(tp_per(t, 5, &mut s), TpStatus::Domain);
            tp_tensor_free(t);
        }
    }

    #[test]
    fn stochastic_and_counts() {
        unsafe {
            let mut d: *mut TpTensor = ptr::null_mut();
            let name = CString::new("D").unwrap();
            assert_eq!(tp_tensor_builtin(name.as_ptr(), &mut d), TpStatus::Ok);
            let mut flag = false;
            assert_eq!(tp_is_k_stochastic(d, 1, &mut flag), TpStatus::Ok);
            assert!(flag);
            assert_eq!(tp_is_k_stochastic(d, 2, &mut flag), TpStatus::Ok);
            assert!(!flag);
            tp_tensor_free(d);

            let mut count = 0u64;
            assert_eq!(tp_pattern_count(4, 2, 2, &mut count), TpStatus::Ok);
            assert_eq!(count, 0);
            assert_eq!(tp_pattern_count(3, 3, 2, &mut count), TpStatus::Ok);
            assert_eq!(count, 12);

            let kind = CString::new("plane").unwrap();
            let (mut total, mut zo) = (0u64, 0u64);
            assert_eq!(
                tp_vertex_counts(kind.as_ptr(), 2, 3, &mut total, &mut zo),
                TpStatus::Ok
            );
            assert_eq!((total, zo), (6, 4));

            let mut s: *mut c_char = ptr::null_mut();
            assert_eq!(tp_probe_min_per(3, 2, 4, 0, &mut s), TpStatus::Ok);
            let text = take_string(s);
            assert!(!text.is_empty());
        }
    }

    #[test]
    fn header_was_generated() {
        let header = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
            .join("include")
            .join("tenper.h");
        let text = std::fs::read_to_string(header).unwrap();
        assert!(text.contains("typedef struct TpTensor TpTensor;"));
        assert!(text.contains("tp_per"));
        assert!(text.contains("TpStatus"));
    }
}
