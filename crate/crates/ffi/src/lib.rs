//! C bindings for plane partition counts, the polynomials P_n, their
//! largest zeros, and Wright's estimate.
//!
//! Every function returns a `PpStatus`. Results are written through out
//! pointers; strings go into caller buffers as NUL-terminated UTF-8. On a
//! non-OK status the thread's last error message is set and can be read
//! with `pp_last_error_message`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};

use num_rational::BigRational;
use planepart::error::Error;
use planepart::family::{generate_family_capped, PolyFamily};
use planepart::partitions::{pp_exact_capped, PPTable, DEFAULT_MEM_CAP};

/// Status codes returned by every entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PpStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    ResourceLimit = 3,
    Inconclusive = 4,
    BufferTooSmall = 5,
    Io = 6,
    Internal = 7,
}

/// Table of pp(0..=n).
pub struct PpTable(PPTable);

/// The polynomials P_0..P_n.
pub struct PpFamily(PolyFamily);

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn fail(status: PpStatus, msg: impl Into<String>) -> PpStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg.into());
    status
}

fn from_error(e: Error) -> PpStatus {
    let status = match &e {
        Error::InvalidArgument(_) | Error::ZeroPolynomial | Error::InsufficientSequence { .. } => {
            PpStatus::InvalidArgument
        }
        Error::ResourceLimit { .. } => PpStatus::ResourceLimit,
        Error::Inconclusive(_) => PpStatus::Inconclusive,
        Error::Cache(_) | Error::Io(_) | Error::Json(_) => PpStatus::Io,
    };
    fail(status, e.to_string())
}

/// Runs `f`, turning panics into `Internal`.
fn guard(f: impl FnOnce() -> PpStatus) -> PpStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(PpStatus::Internal, "internal panic"),
    }
}

/// Copies `s` plus a NUL into `buf`. `out_len` always receives the length
/// without the NUL, so a caller can retry with a larger buffer.
unsafe fn write_str(s: &str, buf: *mut c_char, cap: usize, out_len: *mut usize) -> PpStatus {
    if !out_len.is_null() {
        *out_len = s.len();
    }
    if buf.is_null() {
        return fail(PpStatus::NullPointer, "output buffer is null");
    }
    if cap < s.len() + 1 {
        return fail(PpStatus::BufferTooSmall, format!("need {} bytes, buffer has {cap}", s.len() + 1));
    }
    std::ptr::copy_nonoverlapping(s.as_ptr(), buf.cast::<u8>(), s.len());
    *buf.add(s.len()) = 0;
    PpStatus::Ok
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, PpStatus> {
    if s.is_null() {
        return Err(fail(PpStatus::NullPointer, "string argument is null"));
    }
    CStr::from_ptr(s).to_str().map_err(|_| fail(PpStatus::InvalidArgument, "string argument is not UTF-8"))
}

fn mem_cap(cap: u64) -> u64 {
    if cap == 0 {
        DEFAULT_MEM_CAP
    } else {
        cap
    }
}

/// Copies the last error message of this thread into `buf`.
///
/// # Safety
/// `buf` must point to `cap` writable bytes; `out_len` may be null.
#[no_mangle]
pub unsafe extern "C" fn pp_last_error_message(buf: *mut c_char, cap: usize, out_len: *mut usize) -> PpStatus {
    let msg = LAST_ERROR.with(|e| e.borrow().clone());
    write_str(&msg, buf, cap, out_len)
}

/// Computes pp(0..=n). A `mem_cap` of 0 selects the default cap.
///
/// # Safety
/// `out` must be a valid pointer; the handle is released with `pp_table_free`.
#[no_mangle]
pub unsafe extern "C" fn pp_table_new(n: usize, mem_cap_bytes: u64, out: *mut *mut PpTable) -> PpStatus {
    if out.is_null() {
        return fail(PpStatus::NullPointer, "out is null");
    }
    guard(|| match pp_exact_capped(n, mem_cap(mem_cap_bytes)) {
        Ok(t) => {
            *out = Box::into_raw(Box::new(PpTable(t)));
            PpStatus::Ok
        }
        Err(e) => from_error(e),
    })
}

/// # Safety
/// `table` must come from `pp_table_new` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn pp_table_free(table: *mut PpTable) {
    if !table.is_null() {
        drop(Box::from_raw(table));
    }
}

/// Largest index held by the table.
///
/// # Safety
/// `table` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pp_table_n_max(table: *const PpTable, out: *mut usize) -> PpStatus {
    if table.is_null() || out.is_null() {
        return fail(PpStatus::NullPointer, "null argument");
    }
    *out = (*table).0.n_max();
    PpStatus::Ok
}

/// pp(n) in decimal.
///
/// # Safety
/// `table` must be a live handle; `buf` must point to `cap` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn pp_table_get(
    table: *const PpTable,
    n: usize,
    buf: *mut c_char,
    cap: usize,
    out_len: *mut usize,
) -> PpStatus {
    if table.is_null() {
        return fail(PpStatus::NullPointer, "table is null");
    }
    let t = &(*table).0;
    if n > t.n_max() {
        return fail(PpStatus::InvalidArgument, format!("index {n} beyond table end {}", t.n_max()));
    }
    write_str(&t.get(n).to_string(), buf, cap, out_len)
}

/// Generates P_0..P_n. A `mem_cap` of 0 selects the default cap.
///
/// # Safety
/// `out` must be a valid pointer; the handle is released with `pp_family_free`.
#[no_mangle]
pub unsafe extern "C" fn pp_family_new(n: usize, mem_cap_bytes: u64, out: *mut *mut PpFamily) -> PpStatus {
    if out.is_null() {
        return fail(PpStatus::NullPointer, "out is null");
    }
    guard(|| match generate_family_capped(n, mem_cap(mem_cap_bytes)) {
        Ok(f) => {
            *out = Box::into_raw(Box::new(PpFamily(f)));
            PpStatus::Ok
        }
        Err(e) => from_error(e),
    })
}

/// # Safety
/// `family` must come from `pp_family_new` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn pp_family_free(family: *mut PpFamily) {
    if !family.is_null() {
        drop(Box::from_raw(family));
    }
}

/// P_n(x) for a rational `x` written as "p/q" or an integer, returned in
/// the same form.
///
/// # Safety
/// `family` must be a live handle, `x` a NUL-terminated string, `buf` must
/// point to `cap` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn pp_family_eval(
    family: *const PpFamily,
    n: usize,
    x: *const c_char,
    buf: *mut c_char,
    cap: usize,
    out_len: *mut usize,
) -> PpStatus {
    if family.is_null() {
        return fail(PpStatus::NullPointer, "family is null");
    }
    let x = match read_str(x) {
        Ok(s) => s,
        Err(s) => return s,
    };
    let x: BigRational = match x.trim().parse() {
        Ok(v) => v,
        Err(_) => return fail(PpStatus::InvalidArgument, format!("not a rational: {x:?}")),
    };
    let f = &(*family).0;
    if n > f.n_max() {
        return fail(PpStatus::InvalidArgument, format!("index {n} beyond family end {}", f.n_max()));
    }
    let v = match catch_unwind(AssertUnwindSafe(|| f.eval(n, &x))) {
        Ok(v) => v,
        Err(_) => return fail(PpStatus::Internal, "internal panic"),
    };
    write_str(&v.to_string(), buf, cap, out_len)
}

/// Largest real zero of P_a·P_b − P_{a+b}, rounded to `decimals` places.
/// Writes an empty string when there is none.
///
/// # Safety
/// `family` must be a live handle; `buf` must point to `cap` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn pp_bo_largest_zero(
    family: *const PpFamily,
    a: usize,
    b: usize,
    decimals: usize,
    buf: *mut c_char,
    cap: usize,
    out_len: *mut usize,
) -> PpStatus {
    if family.is_null() {
        return fail(PpStatus::NullPointer, "family is null");
    }
    let f = &(*family).0;
    let mut text = String::new();
    let status = guard(|| {
        let r = planepart::lab::bo_poly(f, a, b)
            .and_then(|p| planepart::roots::largest_root_decimal(&p, decimals, false));
        match r {
            Ok(v) => {
                text = v.unwrap_or_default();
                PpStatus::Ok
            }
            Err(e) => from_error(e),
        }
    });
    if status != PpStatus::Ok {
        return status;
    }
    write_str(&text, buf, cap, out_len)
}

/// Wright's estimate of pp(n) in scientific notation with `digits`
/// significant digits.
///
/// # Safety
/// `buf` must point to `cap` writable bytes; `out_len` may be null.
#[no_mangle]
pub unsafe extern "C" fn pp_wright_estimate(
    n: u64,
    digits: usize,
    buf: *mut c_char,
    cap: usize,
    out_len: *mut usize,
) -> PpStatus {
    let mut text = String::new();
    let status = guard(|| match planepart::asymptotics::wright_estimate(n, digits) {
        Ok(e) => {
            text = e.estimate.mid().to_sci(digits, planepart::ball::RoundDir::Down);
            PpStatus::Ok
        }
        Err(e) => from_error(e),
    });
    if status != PpStatus::Ok {
        return status;
    }
    write_str(&text, buf, cap, out_len)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ptr;

    fn text(buf: &[u8]) -> &str {
        CStr::from_bytes_until_nul(buf).unwrap().to_str().unwrap()
    }

    #[test]
    fn table_round_trip() {
        unsafe {
            let mut t = ptr::null_mut();
            assert_eq!(pp_table_new(20, 0, &mut t), PpStatus::Ok);
            let mut n = 0;
            assert_eq!(pp_table_n_max(t, &mut n), PpStatus::Ok);
            assert_eq!(n, 20);
            let mut buf = [0u8; 32];
            let mut len = 0;
            assert_eq!(pp_table_get(t, 10, buf.as_mut_ptr().cast(), buf.len(), &mut len), PpStatus::Ok);
            assert_eq!(text(&buf), "500");
            assert_eq!(len, 3);
            assert_eq!(pp_table_get(t, 21, buf.as_mut_ptr().cast(), buf.len(), &mut len), PpStatus::InvalidArgument);
            pp_table_free(t);
        }
    }

    #[test]
    fn small_buffer_reports_length() {
        unsafe {
            let mut t = ptr::null_mut();
            assert_eq!(pp_table_new(10, 0, &mut t), PpStatus::Ok);
            let mut buf = [0u8; 3];
            let mut len = 0;
            assert_eq!(pp_table_get(t, 10, buf.as_mut_ptr().cast(), buf.len(), &mut len), PpStatus::BufferTooSmall);
            assert_eq!(len, 3);
            pp_table_free(t);
        }
    }

    #[test]
    fn errors_set_message() {
        unsafe {
            let mut t = ptr::null_mut();
            assert_eq!(pp_table_new(1_000_000, 1024, &mut t), PpStatus::ResourceLimit);
            assert!(t.is_null());
            let mut buf = [0u8; 256];
            assert_eq!(pp_last_error_message(buf.as_mut_ptr().cast(), buf.len(), ptr::null_mut()), PpStatus::Ok);
            assert!(text(&buf).contains("exceeds the cap"));
            assert_eq!(pp_table_new(5, 0, ptr::null_mut()), PpStatus::NullPointer);
        }
    }
}
