//! C ABI for the charvar library: opaque handles, status codes, and
//! JSON-string outputs, so other languages can drive the splice analysis.
//!
//! Conventions: every function returns a [`CharvarStatus`]; results come
//! back through out-pointers. Strings are NUL-terminated, allocated by
//! this library, and must be released with [`charvar_string_free`];
//! handles with [`charvar_census_free`]. All entry points catch panics.

use charvar::arcs::KnotSide;
use charvar::presentation::GluingMatrix;
use charvar::splice::{CensusReport, SpliceAnalysis};
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, UnwindSafe};

/// Result code of every FFI entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CharvarStatus {
    Ok = 0,
    InvalidInput = 1,
    InternalError = 2,
    NullArgument = 3,
    Panic = 4,
}

/// Opaque census handle.
pub struct CharvarCensus {
    report: CensusReport,
}

fn status_of(e: &charvar::Error) -> CharvarStatus {
    match e {
        charvar::Error::InvalidInput(_) | charvar::Error::Precondition(_) => {
            CharvarStatus::InvalidInput
        }
        charvar::Error::Internal(_) => CharvarStatus::InternalError,
    }
}

fn guarded(f: impl FnOnce() -> CharvarStatus + UnwindSafe) -> CharvarStatus {
    catch_unwind(f).unwrap_or(CharvarStatus::Panic)
}

/// # Safety
/// `ptr` must point to `2 * pairs` readable `int32_t`s.
unsafe fn read_pairs(ptr: *const i32, pairs: usize) -> Vec<(i64, i64)> {
    let flat = std::slice::from_raw_parts(ptr, 2 * pairs);
    flat.chunks(2).map(|c| (c[0] as i64, c[1] as i64)).collect()
}

fn export_string(s: String, out: *mut *mut c_char) -> CharvarStatus {
    match CString::new(s) {
        Ok(c) => {
            unsafe { *out = c.into_raw() };
            CharvarStatus::Ok
        }
        Err(_) => CharvarStatus::InternalError,
    }
}

/// Runs the full splice census.
///
/// `left_pq` and `right_pq` are flat arrays of torus-knot pairs
/// p1,q1,p2,q2,…; `matrix` is the gluing matrix a,b,c,d acting by
/// μ ↦ μ^a λ^b, λ ↦ μ^c λ^d. On success `*out` owns the census.
///
/// # Safety
/// The array pointers must be valid for the stated lengths and `out`
/// must be a valid pointer to writable storage.
#[no_mangle]
pub unsafe extern "C" fn charvar_census_run(
    left_pq: *const i32,
    left_pairs: usize,
    right_pq: *const i32,
    right_pairs: usize,
    matrix: *const i32,
    out: *mut *mut CharvarCensus,
) -> CharvarStatus {
    if left_pq.is_null() || right_pq.is_null() || matrix.is_null() || out.is_null() {
        return CharvarStatus::NullArgument;
    }
    if left_pairs == 0 || right_pairs == 0 {
        return CharvarStatus::InvalidInput;
    }
    let left = read_pairs(left_pq, left_pairs);
    let right = read_pairs(right_pq, right_pairs);
    let m = std::slice::from_raw_parts(matrix, 4).to_vec();
    guarded(move || {
        let run = || -> charvar::Result<CensusReport> {
            let h = GluingMatrix::new(m[0] as i64, m[1] as i64, m[2] as i64, m[3] as i64)?;
            let analysis =
                SpliceAnalysis::new(KnotSide::new(&left)?, KnotSide::new(&right)?, h)?;
            Ok(analysis.census())
        };
        match run() {
            Ok(report) => {
                let handle = Box::new(CharvarCensus { report });
                unsafe { *out = Box::into_raw(handle) };
                CharvarStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Serializes a census to its JSON report.
///
/// # Safety
/// `census` must be a live handle from [`charvar_census_run`]; `out`
/// must be writable. The returned string is released with
/// [`charvar_string_free`].
#[no_mangle]
pub unsafe extern "C" fn charvar_census_json(
    census: *const CharvarCensus,
    out: *mut *mut c_char,
) -> CharvarStatus {
    if census.is_null() || out.is_null() {
        return CharvarStatus::NullArgument;
    }
    let report = &(*census).report;
    match serde_json::to_string_pretty(report) {
        Ok(text) => export_string(text, out),
        Err(_) => CharvarStatus::InternalError,
    }
}

/// Number of isolated components with the given Zariski tangent
/// dimension (the trivial character excluded).
///
/// # Safety
/// `census` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn charvar_census_isolated_count(
    census: *const CharvarCensus,
    zariski_dim: usize,
    out: *mut usize,
) -> CharvarStatus {
    if census.is_null() || out.is_null() {
        return CharvarStatus::NullArgument;
    }
    let report = &(*census).report;
    *out = report.counts.isolated_by_zariski.get(&zariski_dim).copied().unwrap_or(0);
    CharvarStatus::Ok
}

/// Number of circle components.
///
/// # Safety
/// `census` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn charvar_census_circle_count(
    census: *const CharvarCensus,
    out: *mut usize,
) -> CharvarStatus {
    if census.is_null() || out.is_null() {
        return CharvarStatus::NullArgument;
    }
    *out = (*census).report.counts.circles;
    CharvarStatus::Ok
}

/// Number of components whose local structure is not a manifold.
///
/// # Safety
/// `census` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn charvar_census_non_manifold_count(
    census: *const CharvarCensus,
    out: *mut usize,
) -> CharvarStatus {
    if census.is_null() || out.is_null() {
        return CharvarStatus::NullArgument;
    }
    *out = (*census).report.counts.non_manifold_components;
    CharvarStatus::Ok
}

/// Releases a census handle.
///
/// # Safety
/// `census` must be null or a handle from [`charvar_census_run`] not yet
/// freed.
#[no_mangle]
pub unsafe extern "C" fn charvar_census_free(census: *mut CharvarCensus) {
    if !census.is_null() {
        drop(Box::from_raw(census));
    }
}

/// JSON report of the strata of the (p, q) torus-knot exterior.
///
/// # Safety
/// `out` must be writable; release the string with
/// [`charvar_string_free`].
#[no_mangle]
pub unsafe extern "C" fn charvar_arcs_json(
    p: i32,
    q: i32,
    out: *mut *mut c_char,
) -> CharvarStatus {
    if out.is_null() {
        return CharvarStatus::NullArgument;
    }
    guarded(move || {
        match charvar::arcs::knot_strata(p as i64, q as i64) {
            Ok(strata) => match serde_json::to_string_pretty(&strata) {
                Ok(text) => export_string(text, out),
                Err(_) => CharvarStatus::InternalError,
            },
            Err(e) => status_of(&e),
        }
    })
}

/// Runs the verification suite; `*out_failed` receives the number of
/// failed criteria (0 on full success).
///
/// # Safety
/// `out_failed` must be writable.
#[no_mangle]
pub unsafe extern "C" fn charvar_verify(
    homology_only: bool,
    out_failed: *mut usize,
) -> CharvarStatus {
    if out_failed.is_null() {
        return CharvarStatus::NullArgument;
    }
    guarded(move || {
        let results = if homology_only {
            charvar::acceptance::run_homology_only()
        } else {
            charvar::acceptance::run_all()
        };
        let failed = results.iter().filter(|r| !r.passed).count();
        unsafe { *out_failed = failed };
        CharvarStatus::Ok
    })
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must be null or a string returned by this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn charvar_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ffi::CStr;
    use std::ptr;

    #[test]
    fn census_roundtrip_through_the_c_abi() {
        let left = [3i32, 5];
        let right = [2i32, 7];
        let matrix = [1i32, 0, -1, -1];
        let mut handle: *mut CharvarCensus = ptr::null_mut();
        let status = unsafe {
            charvar_census_run(left.as_ptr(), 1, right.as_ptr(), 1, matrix.as_ptr(), &mut handle)
        };
        assert_eq!(status, CharvarStatus::Ok);
        assert!(!handle.is_null());

        let mut n = 0usize;
        assert_eq!(
            unsafe { charvar_census_isolated_count(handle, 0, &mut n) },
            CharvarStatus::Ok
        );
        assert_eq!(n, 22);
        assert_eq!(
            unsafe { charvar_census_isolated_count(handle, 2, &mut n) },
            CharvarStatus::Ok
        );
        assert_eq!(n, 6);
        assert_eq!(unsafe { charvar_census_circle_count(handle, &mut n) }, CharvarStatus::Ok);
        assert_eq!(n, 62);

        let mut json: *mut c_char = ptr::null_mut();
        assert_eq!(unsafe { charvar_census_json(handle, &mut json) }, CharvarStatus::Ok);
        let text = unsafe { CStr::from_ptr(json) }.to_str().unwrap();
        let v: serde_json::Value = serde_json::from_str(text).unwrap();
        assert_eq!(v["counts"]["isolated_by_zariski"]["0"], 22);
        unsafe {
            charvar_string_free(json);
            charvar_census_free(handle);
        }
    }

    #[test]
    fn composite_census_finds_the_wedge() {
        let left = [3i32, 5];
        let right = [-2i32, 7, -2, 7];
        let matrix = [1i32, 0, -1, -1];
        let mut handle: *mut CharvarCensus = ptr::null_mut();
        let status = unsafe {
            charvar_census_run(left.as_ptr(), 1, right.as_ptr(), 2, matrix.as_ptr(), &mut handle)
        };
        assert_eq!(status, CharvarStatus::Ok);
        let mut n = 0usize;
        assert_eq!(
            unsafe { charvar_census_non_manifold_count(handle, &mut n) },
            CharvarStatus::Ok
        );
        assert!(n >= 1);
        unsafe { charvar_census_free(handle) };
    }

    #[test]
    fn invalid_inputs_are_rejected() {
        let left = [2i32, 4]; // not coprime
        let right = [2i32, 7];
        let matrix = [1i32, 0, -1, -1];
        let mut handle: *mut CharvarCensus = ptr::null_mut();
        let status = unsafe {
            charvar_census_run(left.as_ptr(), 1, right.as_ptr(), 1, matrix.as_ptr(), &mut handle)
        };
        assert_eq!(status, CharvarStatus::InvalidInput);
        let bad_matrix = [2i32, 0, 0, 1];
        let ok_left = [3i32, 5];
        let status = unsafe {
            charvar_census_run(ok_left.as_ptr(), 1, right.as_ptr(), 1, bad_matrix.as_ptr(), &mut handle)
        };
        assert_eq!(status, CharvarStatus::InvalidInput);
        let status = unsafe {
            charvar_census_run(ptr::null(), 1, right.as_ptr(), 1, matrix.as_ptr(), &mut handle)
        };
        assert_eq!(status, CharvarStatus::NullArgument);
    }

    #[test]
    fn arcs_json_through_the_c_abi() {
        let mut json: *mut c_char = ptr::null_mut();
        assert_eq!(unsafe { charvar_arcs_json(3, 5, &mut json) }, CharvarStatus::Ok);
        let text = unsafe { CStr::from_ptr(json) }.to_str().unwrap();
        let v: serde_json::Value = serde_json::from_str(text).unwrap();
        assert_eq!(v.as_array().unwrap().len(), 5);
        unsafe { charvar_string_free(json) };
        assert_eq!(
            unsafe { charvar_arcs_json(2, 4, &mut json) },
            CharvarStatus::InvalidInput
        );
    }

    #[test]
    fn verify_through_the_c_abi() {
        let mut failed = usize::MAX;
        assert_eq!(unsafe { charvar_verify(true, &mut failed) }, CharvarStatus::Ok);
        assert_eq!(failed, 0);
    }

    #[test]
    fn header_was_generated() {
        let header = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
            .join("include")
            .join("charvar.h");
        let text = std::fs::read_to_string(header).expect("cbindgen header");
        for name in [
            "charvar_census_run",
            "charvar_census_json",
            "charvar_census_isolated_count",
            "charvar_census_free",
            "charvar_arcs_json",
            "charvar_verify",
            "charvar_string_free",
            "CharvarStatus",
            "CharvarCensus",
        ] {
            assert!(text.contains(name), "missing {name} in header");
        }
    }
}
