//! C interface to `lassotree`.
//!
//! Trees and cord sets are opaque handles created by `*_parse` functions and
//! released with the matching `*_free`. Every fallible function returns an
//! [`LtStatus`]; on failure a description is available from
//! [`lt_last_error_message`] on the same thread. Strings handed out by the
//! library must be released with [`lt_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use lassotree::builders;
use lassotree::io::{parse_newick, print_newick, read_cords, write_cords};
use lassotree::oracle::{Oracle, OracleError, MAX_EXHAUSTIVE_LEAVES};
use lassotree::{classify, CordSet, XTree};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LtStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidInput = 4,
    TooLarge = 5,
    Panic = 6,
}

/// Opaque X-tree handle.
pub struct LtTree {
    tree: XTree,
}

/// Opaque cord-set handle.
pub struct LtCords {
    cords: CordSet,
}

/// Lasso flags for one tree and cord set.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LtReport {
    pub equidistant: bool,
    pub weak: bool,
    pub topological: bool,
    pub strong: bool,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LtBuildKind {
    Equidistant = 0,
    Weak = 1,
    Topological = 2,
    Circular = 3,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: impl Into<String>) {
    let text = message.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).expect("interior NULs removed"));
}

struct Failure(LtStatus, String);

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        let status = match e {
            OracleError::TooManyLeaves { .. } => LtStatus::TooLarge,
            _ => LtStatus::InvalidInput,
        };
        Failure(status, e.to_string())
    }
}

fn invalid(e: impl std::fmt::Display) -> Failure {
    Failure(LtStatus::InvalidInput, e.to_string())
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> LtStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_error("");
            LtStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal panic");
            LtStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(LtStatus::NullPointer, "null string argument".into()));
    }
    CStr::from_ptr(p).to_str().map_err(|e| Failure(LtStatus::InvalidUtf8, e.to_string()))
}

unsafe fn deref<'a, T>(p: *const T) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| Failure(LtStatus::NullPointer, "null handle".into()))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure(LtStatus::NullPointer, "null output pointer".into()));
    }
    out.write(value);
    Ok(())
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).expect("library output has no NUL bytes").into_raw()
}

/// Message describing the last failure on this thread; empty after a
/// successful call. Valid until the next call into the library.
#[no_mangle]
pub extern "C" fn lt_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn lt_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses a Newick string; edge weights, if present, are ignored.
///
/// # Safety
/// `newick` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn lt_tree_parse(newick: *const c_char, out: *mut *mut LtTree) -> LtStatus {
    guard(|| {
        let text = read_str(newick)?;
        let parsed = parse_newick(text).map_err(|e| Failure(LtStatus::ParseError, e.to_string()))?;
        write_out(out, Box::into_raw(Box::new(LtTree { tree: parsed.tree })))
    })
}

/// # Safety
/// `tree` must come from [`lt_tree_parse`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn lt_tree_free(tree: *mut LtTree) {
    if !tree.is_null() {
        drop(Box::from_raw(tree));
    }
}

/// # Safety
/// `tree` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lt_tree_leaf_count(tree: *const LtTree, out: *mut usize) -> LtStatus {
    guard(|| write_out(out, deref(tree)?.tree.leaf_count()))
}

/// Canonical Newick form; release with [`lt_string_free`].
///
/// # Safety
/// `tree` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lt_tree_to_newick(tree: *const LtTree, out: *mut *mut c_char) -> LtStatus {
    guard(|| write_out(out, into_c_string(print_newick(&deref(tree)?.tree, None))))
}

/// Parses a cord file (`a b` per line, `#` comments) against the leaves of
/// `tree`.
///
/// # Safety
/// `tree` must be a live handle, `text` NUL-terminated, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lt_cords_parse(tree: *const LtTree, text: *const c_char, out: *mut *mut LtCords) -> LtStatus {
    guard(|| {
        let tree = deref(tree)?;
        let text = read_str(text)?;
        let cords = read_cords(text, Some(tree.tree.labels())).map_err(|e| Failure(LtStatus::ParseError, e.to_string()))?;
        write_out(out, Box::into_raw(Box::new(LtCords { cords })))
    })
}

/// # Safety
/// `cords` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn lt_cords_free(cords: *mut LtCords) {
    if !cords.is_null() {
        drop(Box::from_raw(cords));
    }
}

/// # Safety
/// `cords` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lt_cords_len(cords: *const LtCords, out: *mut usize) -> LtStatus {
    guard(|| write_out(out, deref(cords)?.cords.len()))
}

/// Cord-file text; release with [`lt_string_free`].
///
/// # Safety
/// `cords` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lt_cords_to_text(cords: *const LtCords, out: *mut *mut c_char) -> LtStatus {
    guard(|| write_out(out, into_c_string(write_cords(&deref(cords)?.cords))))
}

/// Lasso flags from the child-edge-graph characterizations.
///
/// # Safety
/// Handles must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lt_classify(tree: *const LtTree, cords: *const LtCords, out: *mut LtReport) -> LtStatus {
    guard(|| {
        let r = classify(&deref(tree)?.tree, &deref(cords)?.cords).map_err(invalid)?;
        write_out(out, LtReport { equidistant: r.equidistant, weak: r.weak, topological: r.topological, strong: r.strong })
    })
}

/// Lasso flags from the exhaustive definition-level checks. Returns
/// `TooLarge` above five leaves.
///
/// # Safety
/// Handles must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lt_oracle_check(tree: *const LtTree, cords: *const LtCords, out: *mut LtReport) -> LtStatus {
    guard(|| {
        let tree = &deref(tree)?.tree;
        let cords = &deref(cords)?.cords;
        if tree.leaf_count() > MAX_EXHAUSTIVE_LEAVES {
            return Err(OracleError::TooManyLeaves { max: MAX_EXHAUSTIVE_LEAVES, found: tree.leaf_count() }.into());
        }
        let r = Oracle::new(tree.labels())?.check(tree, cords)?;
        write_out(
            out,
            LtReport {
                equidistant: r.equidistant.holds,
                weak: r.weak.holds,
                topological: r.topological.holds,
                strong: r.strong,
            },
        )
    })
}

/// Builds a cord set of the requested kind for `tree`.
///
/// # Safety
/// `tree` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lt_build(tree: *const LtTree, kind: LtBuildKind, out: *mut *mut LtCords) -> LtStatus {
    guard(|| {
        let tree = &deref(tree)?.tree;
        let cords = match kind {
            LtBuildKind::Equidistant => builders::min_equidistant_lasso(tree).map_err(invalid)?,
            LtBuildKind::Weak => builders::min_weak_lasso(tree).map_err(invalid)?,
            LtBuildKind::Topological => builders::min_topological_lasso(tree).map_err(invalid)?,
            LtBuildKind::Circular => {
                let order = builders::circular_order(tree, builders::ChildOrder::Canonical);
                builders::circular_lasso(&order).map_err(invalid)?
            }
        };
        write_out(out, Box::into_raw(Box::new(LtCords { cords })))
    })
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn lt_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
