//! C ABI for the tower library: opaque handles around parsed tower files
//! and flat status codes, so other languages can drive the pipeline
//! (parse, orientability, Gram matrices, triality, psi, construction).
//!
//! Every returned string is allocated by Rust and must be released with
//! `twr_string_free`; every handle with `twr_tower_free`. All functions
//! catch panics and report `TWR_INTERNAL` instead of unwinding across
//! the boundary. The header lives in `include/twr.h`.

use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use twr_core::ngonal::{is_orientable, split, triality_check};
use twr_core::prym::{prym_isomorphism_check, prym_lattice};
use twr_core::towerio::{parse_tower, serialize_tower, TowerFile};

/// Status codes shared with the C header.
pub const TWR_OK: c_int = 0;
pub const TWR_PARSE_ERROR: c_int = 1;
pub const TWR_INVALID_ARGUMENT: c_int = 2;
pub const TWR_NOT_APPLICABLE: c_int = 3;
pub const TWR_CHECK_FAILED: c_int = 4;
pub const TWR_INTERNAL: c_int = 5;

/// Opaque tower handle.
pub struct TwrTower {
    file: TowerFile,
}

fn to_cstring(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).map_or(std::ptr::null_mut(), CString::into_raw)
}

unsafe fn set_out(out: *mut *mut c_char, s: String) {
    if !out.is_null() {
        *out = to_cstring(s);
    }
}

/// Library version as a static string; do not free.
#[no_mangle]
pub extern "C" fn twr_version() -> *const c_char {
    static VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    VERSION.as_ptr() as *const c_char
}

/// Parses and validates a tower file. Returns NULL on failure and, when
/// `error_out` is non-NULL, stores a diagnostic string there.
///
/// # Safety
/// `text` must be a valid NUL-terminated UTF-8 string; `error_out`, if
/// non-NULL, must point to writable memory for one pointer.
#[no_mangle]
pub unsafe extern "C" fn twr_parse(
    text: *const c_char,
    error_out: *mut *mut c_char,
) -> *mut TwrTower {
    if !error_out.is_null() {
        *error_out = std::ptr::null_mut();
    }
    if text.is_null() {
        set_out(error_out, "null input".to_string());
        return std::ptr::null_mut();
    }
    let Ok(text) = CStr::from_ptr(text).to_str() else {
        set_out(error_out, "input is not valid UTF-8".to_string());
        return std::ptr::null_mut();
    };
    let result = catch_unwind(|| parse_tower(text));
    match result {
        Ok(Ok(file)) => Box::into_raw(Box::new(TwrTower { file })),
        Ok(Err(diags)) => {
            let msg = diags
                .iter()
                .map(|d| d.to_string())
                .collect::<Vec<_>>()
                .join("\n");
            set_out(error_out, msg);
            std::ptr::null_mut()
        }
        Err(_) => {
            set_out(error_out, "internal error".to_string());
            std::ptr::null_mut()
        }
    }
}

/// Releases a tower handle.
///
/// # Safety
/// `t` must be a pointer returned by `twr_parse` (or NULL), not yet freed.
#[no_mangle]
pub unsafe extern "C" fn twr_tower_free(t: *mut TwrTower) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must be a pointer returned by one of these functions (or NULL),
/// not yet freed.
#[no_mangle]
pub unsafe extern "C" fn twr_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

unsafe fn with_tower<R>(
    t: *const TwrTower,
    f: impl FnOnce(&TowerFile) -> Result<R, (c_int, String)>,
    ok: impl FnOnce(R),
    error_out: *mut *mut c_char,
) -> c_int {
    if t.is_null() {
        set_out(error_out, "null handle".into());
        return TWR_INVALID_ARGUMENT;
    }
    let file = &(*t).file;
    match catch_unwind(AssertUnwindSafe(|| f(file))) {
        Ok(Ok(r)) => {
            ok(r);
            TWR_OK
        }
        Ok(Err((code, msg))) => {
            set_out(error_out, msg);
            code
        }
        Err(_) => {
            set_out(error_out, "internal error".into());
            TWR_INTERNAL
        }
    }
}

/// Writes 1 to `out` when the tower is orientable, 0 otherwise.
///
/// # Safety
/// `t` from `twr_parse`; `out` non-NULL writable; `error_out` NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn twr_orientable(
    t: *const TwrTower,
    out: *mut c_int,
    error_out: *mut *mut c_char,
) -> c_int {
    with_tower(
        t,
        |file| is_orientable(&file.tower).map_err(|e| (TWR_NOT_APPLICABLE, e.to_string())),
        |b| {
            if !out.is_null() {
                *out = c_int::from(b);
            }
        },
        error_out,
    )
}

/// Renders a Prym Gram matrix: `which` selects the input tower (0) or one
/// of the two split outputs (1, 2).
///
/// # Safety
/// `t` from `twr_parse`; `gram_out` non-NULL writable; `error_out` NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn twr_gram(
    t: *const TwrTower,
    which: c_int,
    gram_out: *mut *mut c_char,
    error_out: *mut *mut c_char,
) -> c_int {
    if gram_out.is_null() {
        return TWR_INVALID_ARGUMENT;
    }
    with_tower(
        t,
        |file| {
            let gram = match which {
                0 => prym_lattice(&file.tower).map(|p| p.gram),
                1 | 2 => split(&file.tower)
                    .map_err(|e| twr_core::prym::PrymError::ValidationFailure(e.to_string()))
                    .and_then(|(a, b)| {
                        prym_lattice(if which == 1 { &a.tower } else { &b.tower }).map(|p| p.gram)
                    }),
                _ => return Err((TWR_INVALID_ARGUMENT, format!("bad selector {which}"))),
            }
            .map_err(|e| (TWR_NOT_APPLICABLE, e.to_string()))?;
            Ok(gram.render(&file.vars))
        },
        |s| set_out(gram_out, s),
        error_out,
    )
}

/// Runs the triality verification; writes 1 to `passed` on success.
///
/// # Safety
/// `t` from `twr_parse`; `passed` non-NULL writable; `error_out` NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn twr_triality(
    t: *const TwrTower,
    passed: *mut c_int,
    error_out: *mut *mut c_char,
) -> c_int {
    with_tower(
        t,
        |file| triality_check(&file.tower).map_err(|e| (TWR_NOT_APPLICABLE, e.to_string())),
        |rep| {
            if !passed.is_null() {
                *passed = c_int::from(rep.passed);
            }
        },
        error_out,
    )
}

/// Factors the correspondences through multiplication by 2 on both
/// outputs. Returns TWR_OK with a report when both factorizations exist,
/// TWR_CHECK_FAILED with the diagnosis otherwise.
///
/// # Safety
/// `t` from `twr_parse`; `report_out` non-NULL writable; `error_out` NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn twr_psi(
    t: *const TwrTower,
    report_out: *mut *mut c_char,
    error_out: *mut *mut c_char,
) -> c_int {
    if report_out.is_null() {
        return TWR_INVALID_ARGUMENT;
    }
    with_tower(
        t,
        |file| {
            let rep = prym_isomorphism_check(&file.tower).map_err(|e| (TWR_NOT_APPLICABLE, e))?;
            let mut lines = Vec::new();
            let mut ok = true;
            for (i, psi) in rep.psi.iter().enumerate() {
                match psi {
                    Ok(m) => lines.push(format!("psi out{}: {}", i + 1, m.render())),
                    Err(e) => {
                        ok = false;
                        lines.push(format!("psi out{}: {}", i + 1, e));
                    }
                }
            }
            let text = lines.join("\n");
            if ok {
                Ok(text)
            } else {
                Err((TWR_CHECK_FAILED, text))
            }
        },
        |s| set_out(report_out, s),
        error_out,
    )
}

/// Runs the tetragonal construction and splits it; the two output towers
/// are returned serialized in the tower file format.
///
/// # Safety
/// `t` from `twr_parse`; `out1`/`out2` non-NULL writable; `error_out` NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn twr_construct_split(
    t: *const TwrTower,
    out1: *mut *mut c_char,
    out2: *mut *mut c_char,
    error_out: *mut *mut c_char,
) -> c_int {
    if out1.is_null() || out2.is_null() {
        return TWR_INVALID_ARGUMENT;
    }
    with_tower(
        t,
        |file| {
            let (a, b) = split(&file.tower).map_err(|e| (TWR_NOT_APPLICABLE, e.to_string()))?;
            let ser = |half: twr_core::ngonal::SplitHalf, i: usize| {
                serialize_tower(&TowerFile {
                    vars: file.vars.clone(),
                    tower: half.tower,
                    tower_name: format!("OUT{i}"),
                    base_name: file.base_name.clone(),
                    mid_name: format!("C{i}"),
                    top_name: format!("C{i}t"),
                })
            };
            Ok((ser(a, 1), ser(b, 2)))
        },
        |(a, b)| {
            set_out(out1, a);
            set_out(out2, b);
        },
        error_out,
    )
}
