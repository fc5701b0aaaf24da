//! C ABI for `lamnorm`.
//!
//! Terms cross the boundary as opaque [`LnTerm`] handles owned by the caller
//! and released with [`ln_term_free`]. Strings returned by the library are
//! released with [`ln_string_free`]. Every fallible function returns an
//! [`LnStatus`]; the numeric values of the first four agree with the exit
//! codes of the `lamnorm` command. After a failure, [`ln_last_error`]
//! describes it.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use lamnorm::cps::{cps, CpsVariant};
use lamnorm::syntax::is_normal;
use lamnorm::{church, normalize, oracle_normalize, parse, parse_generated, Budget, NormOutcome, Strategy, Term};

/// A lambda term.
pub struct LnTerm(Term);

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LnStatus {
    Ok = 0,
    ParseError = 1,
    Diverged = 2,
    NotCps = 3,
    NullArgument = 10,
    InvalidUtf8 = 11,
    NotNumeral = 12,
    InvalidArgument = 13,
    Panic = 14,
}

/// Normalization strategies, for [`ln_normalize`].
pub type LnStrategy = u32;
pub const LN_STRATEGY_WHNF: LnStrategy = 0;
pub const LN_STRATEGY_CBN: LnStrategy = 1;
pub const LN_STRATEGY_CBV: LnStrategy = 2;
pub const LN_STRATEGY_CPS: LnStrategy = 3;
pub const LN_STRATEGY_NBE: LnStrategy = 4;

/// CPS transforms, for [`ln_cps`].
pub type LnCpsVariant = u32;
pub const LN_CPS_BY_NAME: LnCpsVariant = 0;
pub const LN_CPS_BY_VALUE: LnCpsVariant = 1;

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

struct Failure(LnStatus, String);

fn fail<T>(status: LnStatus, message: impl Into<String>) -> Result<T, Failure> {
    Err(Failure(status, message.into()))
}

fn set_last_error(message: &str) {
    let message = CString::new(message.replace('\0', "\\0")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = message);
}

/// Runs `f`, turning failures and panics into a status and a recorded message.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> LnStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_last_error("");
            LnStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_last_error(&message);
            status
        }
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".to_owned());
            set_last_error(&format!("internal error: {message}"));
            LnStatus::Panic
        }
    }
}

unsafe fn term<'a>(t: *const LnTerm) -> Result<&'a Term, Failure> {
    match t.as_ref() {
        Some(t) => Ok(&t.0),
        None => fail(LnStatus::NullArgument, "term handle is NULL"),
    }
}

unsafe fn writable<'a, T>(p: *mut T) -> Result<&'a mut T, Failure> {
    match p.as_mut() {
        Some(p) => Ok(p),
        None => fail(LnStatus::NullArgument, "output pointer is NULL"),
    }
}

fn handle(t: Term) -> *mut LnTerm {
    Box::into_raw(Box::new(LnTerm(t)))
}

fn finish(outcome: NormOutcome, out: &mut *mut LnTerm, steps: *mut u64) -> Result<(), Failure> {
    if let Some(steps) = unsafe { steps.as_mut() } {
        *steps = outcome.steps();
    }
    match outcome {
        NormOutcome::Normalized { term, .. } => {
            *out = handle(term);
            Ok(())
        }
        NormOutcome::Diverged { steps } => fail(LnStatus::Diverged, format!("no normal form within {steps} beta steps")),
    }
}

unsafe fn parse_with(text: *const c_char, out: *mut *mut LnTerm, parser: fn(&str) -> Result<Term, lamnorm::ParseError>) -> LnStatus {
    guard(|| {
        let out = writable(out)?;
        *out = ptr::null_mut();
        if text.is_null() {
            return fail(LnStatus::NullArgument, "text is NULL");
        }
        let Ok(text) = CStr::from_ptr(text).to_str() else {
            return fail(LnStatus::InvalidUtf8, "text is not valid UTF-8");
        };
        match parser(text) {
            Ok(t) => {
                *out = handle(t);
                Ok(())
            }
            Err(e) => fail(LnStatus::ParseError, e.to_string()),
        }
    })
}

/// Parses a term. Names starting with `_` are rejected.
///
/// # Safety
/// `text` must be NULL or a NUL-terminated string, and `out` NULL or valid
/// for writes.
#[no_mangle]
pub unsafe extern "C" fn ln_term_parse(text: *const c_char, out: *mut *mut LnTerm) -> LnStatus {
    parse_with(text, out, parse)
}

/// Parses a term that may contain the `_` names the library generates, such
/// as a string returned by [`ln_term_to_string`].
///
/// # Safety
/// As for [`ln_term_parse`].
#[no_mangle]
pub unsafe extern "C" fn ln_term_parse_generated(text: *const c_char, out: *mut *mut LnTerm) -> LnStatus {
    parse_with(text, out, parse_generated)
}

/// Releases a term. NULL is ignored.
///
/// # Safety
/// `t` must be NULL or a handle returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ln_term_free(t: *mut LnTerm) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// Prints a term in ASCII syntax. Returns NULL if `t` is NULL.
///
/// # Safety
/// `t` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ln_term_to_string(t: *const LnTerm) -> *mut c_char {
    let mut result = ptr::null_mut();
    guard(|| {
        let text = lamnorm::pretty(term(t)?);
        result = CString::new(text).expect("printed terms contain no NUL").into_raw();
        Ok(())
    });
    result
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must be NULL or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ln_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Normalizes `t` with at most `fuel` beta steps.
///
/// On `LN_STATUS_OK` a new handle is stored in `out`. `steps` may be NULL;
/// otherwise it receives the beta steps used, also when the term diverges.
///
/// # Safety
/// `t` must be a live handle, `out` valid for writes, `steps` NULL or valid
/// for writes.
#[no_mangle]
pub unsafe extern "C" fn ln_normalize(
    t: *const LnTerm,
    strategy: LnStrategy,
    fuel: u64,
    out: *mut *mut LnTerm,
    steps: *mut u64,
) -> LnStatus {
    guard(|| {
        let out = writable(out)?;
        *out = ptr::null_mut();
        let t = term(t)?;
        let strategy = match strategy {
            LN_STRATEGY_WHNF => Strategy::Whnf,
            LN_STRATEGY_CBN => Strategy::Cbn,
            LN_STRATEGY_CBV => Strategy::Cbv,
            LN_STRATEGY_CPS => Strategy::Cps,
            LN_STRATEGY_NBE => Strategy::Nbe,
            other => return fail(LnStatus::InvalidArgument, format!("unknown strategy {other}")),
        };
        match normalize(t, strategy, &Budget::new(fuel)) {
            Ok(outcome) => finish(outcome, out, steps),
            Err(e) => fail(LnStatus::NotCps, e.to_string()),
        }
    })
}

/// Normalizes `t` by leftmost-outermost substitution, the reference the
/// other strategies are checked against. Arguments as for [`ln_normalize`].
///
/// # Safety
/// As for [`ln_normalize`].
#[no_mangle]
pub unsafe extern "C" fn ln_oracle_normalize(t: *const LnTerm, fuel: u64, out: *mut *mut LnTerm, steps: *mut u64) -> LnStatus {
    guard(|| {
        let out = writable(out)?;
        *out = ptr::null_mut();
        finish(oracle_normalize(term(t)?, &Budget::new(fuel)), out, steps)
    })
}

/// True when the terms are equal up to renaming of bound variables. False if
/// either is NULL.
///
/// # Safety
/// Each argument must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ln_alpha_eq(a: *const LnTerm, b: *const LnTerm) -> bool {
    let mut result = false;
    guard(|| {
        result = lamnorm::alpha_eq(term(a)?, term(b)?);
        Ok(())
    });
    result
}

/// True when `t` contains no beta redex. False if `t` is NULL.
///
/// # Safety
/// `t` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ln_is_normal(t: *const LnTerm) -> bool {
    let mut result = false;
    guard(|| {
        result = is_normal(term(t)?);
        Ok(())
    });
    result
}

/// CPS-transforms `t`, storing a new handle in `out`.
///
/// # Safety
/// `t` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ln_cps(t: *const LnTerm, variant: LnCpsVariant, out: *mut *mut LnTerm) -> LnStatus {
    guard(|| {
        let out = writable(out)?;
        *out = ptr::null_mut();
        let variant = match variant {
            LN_CPS_BY_NAME => CpsVariant::ByName,
            LN_CPS_BY_VALUE => CpsVariant::ByValue,
            other => return fail(LnStatus::InvalidArgument, format!("unknown CPS variant {other}")),
        };
        *out = handle(cps(term(t)?, variant));
        Ok(())
    })
}

/// The Church numeral `\f.\x. f (... (f x))` with `n` applications.
#[no_mangle]
pub extern "C" fn ln_church_encode(n: u64) -> *mut LnTerm {
    handle(church::encode(n))
}

/// Reads a Church numeral back as an integer.
///
/// # Safety
/// `t` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ln_church_decode(t: *const LnTerm, out: *mut u64) -> LnStatus {
    guard(|| {
        let out = writable(out)?;
        match church::decode(term(t)?) {
            Ok(n) => {
                *out = n;
                Ok(())
            }
            Err(e) => fail(LnStatus::NotNumeral, e.to_string()),
        }
    })
}

/// Message for the most recent failure on the calling thread, or an empty
/// string after a success. Owned by the library; valid until the next call
/// on the same thread.
#[no_mangle]
pub extern "C" fn ln_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}
