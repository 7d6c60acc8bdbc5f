//! C ABI for the pellforms library.
//!
//! Conventions: exact values cross the boundary as NUL-terminated strings
//! in the library's text syntax (arbitrary precision survives the trip);
//! conics are opaque handles; every function returns a [`PfStatus`] and
//! writes results through out-pointers. Returned strings are freed with
//! [`pf_string_free`], handles with [`pf_conic_free`]. The most recent
//! error message is retrievable per thread via [`pf_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::str::FromStr;

use num_bigint::BigInt;

use pellforms::classgroup::{narrow_class_group, reduce, sha_census};
use pellforms::conic::{ConicPoint, PellConic};
use pellforms::error::Error;
use pellforms::forms::{F2Class, FClass, Form};
use pellforms::primitive::{analyze_point, decompose_kernel, phi, phi_inv};
use pellforms::torsor::{circ, mu, nu, on_torsor, xi_cocycle, TorsorPoint};

/// Status codes returned by every entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PfStatus {
    /// Success.
    Ok = 0,
    /// Malformed textual input.
    ParseError = 1,
    /// A domain precondition failed (see `pf_last_error`).
    DomainError = 2,
    /// A required pointer argument was NULL.
    NullPointer = 3,
    /// Input bytes were not valid UTF-8.
    Utf8Error = 4,
    /// The point is not primitive, so no data is attached.
    NotPrimitive = 5,
    /// Internal invariant violation; see `pf_last_error`.
    InternalError = 6,
}

/// Opaque handle to a Pell conic of fundamental discriminant.
pub struct PfConic {
    inner: PellConic,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn set_error(msg: &str) {
    let sanitized = msg.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

fn status_of(err: &Error) -> PfStatus {
    match err {
        Error::Parse(_) => PfStatus::ParseError,
        _ => PfStatus::DomainError,
    }
}

fn fail(err: &Error) -> PfStatus {
    set_error(&err.to_string());
    status_of(err)
}

/// Most recent error message on this thread. Valid until the next failing
/// call; do not free.
#[no_mangle]
pub extern "C" fn pf_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Library version as a static string; do not free.
#[no_mangle]
pub extern "C" fn pf_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Free a string returned by this library. NULL is ignored.
#[no_mangle]
pub extern "C" fn pf_string_free(s: *mut c_char) {
    if !s.is_null() {
        unsafe {
            drop(CString::from_raw(s));
        }
    }
}

unsafe fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, PfStatus> {
    if ptr.is_null() {
        set_error("null pointer argument");
        return Err(PfStatus::NullPointer);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_error("input is not valid UTF-8");
        PfStatus::Utf8Error
    })
}

fn write_string(out: *mut *mut c_char, value: String) -> PfStatus {
    if out.is_null() {
        set_error("null output pointer");
        return PfStatus::NullPointer;
    }
    match CString::new(value) {
        Ok(c) => {
            unsafe { *out = c.into_raw() };
            PfStatus::Ok
        }
        Err(_) => {
            set_error("output contained an interior NUL byte");
            PfStatus::InternalError
        }
    }
}

fn guarded(body: impl FnOnce() -> PfStatus) -> PfStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic");
            PfStatus::InternalError
        }
    }
}

fn parse_delta(s: &str) -> Result<BigInt, PfStatus> {
    BigInt::from_str(s.trim()).map_err(|_| {
        set_error("discriminant is not an integer");
        PfStatus::ParseError
    })
}

/// Create a conic handle for a fundamental discriminant given in decimal.
#[no_mangle]
pub extern "C" fn pf_conic_new(delta: *const c_char, out: *mut *mut PfConic) -> PfStatus {
    guarded(|| {
        let text = match unsafe { read_str(delta) } {
            Ok(t) => t,
            Err(s) => return s,
        };
        if out.is_null() {
            set_error("null output pointer");
            return PfStatus::NullPointer;
        }
        let value = match parse_delta(text) {
            Ok(v) => v,
            Err(s) => return s,
        };
        match PellConic::new(value) {
            Ok(conic) => {
                unsafe { *out = Box::into_raw(Box::new(PfConic { inner: conic })) };
                PfStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Destroy a conic handle. NULL is ignored.
#[no_mangle]
pub extern "C" fn pf_conic_free(conic: *mut PfConic) {
    if !conic.is_null() {
        unsafe {
            drop(Box::from_raw(conic));
        }
    }
}

unsafe fn conic_ref<'a>(ptr: *const PfConic) -> Result<&'a PellConic, PfStatus> {
    if ptr.is_null() {
        set_error("null conic handle");
        return Err(PfStatus::NullPointer);
    }
    Ok(&(*ptr).inner)
}

/// The discriminant of the conic, in decimal.
#[no_mangle]
pub extern "C" fn pf_conic_delta(conic: *const PfConic, out: *mut *mut c_char) -> PfStatus {
    guarded(|| {
        let c = match unsafe { conic_ref(conic) } {
            Ok(c) => c,
            Err(s) => return s,
        };
        write_string(out, c.delta().to_string())
    })
}

fn parse_point_on(conic: &PellConic, text: &str) -> Result<ConicPoint, PfStatus> {
    let p: ConicPoint = text.parse().map_err(|e: Error| fail(&e))?;
    if !conic.contains(&p) {
        let e = Error::NotOnConic(p.to_string());
        return Err(fail(&e));
    }
    Ok(p)
}

/// Exact membership test for a point in the `(x ; y)` syntax.
#[no_mangle]
pub extern "C" fn pf_conic_contains(
    conic: *const PfConic,
    point: *const c_char,
    out: *mut bool,
) -> PfStatus {
    guarded(|| {
        let c = match unsafe { conic_ref(conic) } {
            Ok(c) => c,
            Err(s) => return s,
        };
        let text = match unsafe { read_str(point) } {
            Ok(t) => t,
            Err(s) => return s,
        };
        if out.is_null() {
            set_error("null output pointer");
            return PfStatus::NullPointer;
        }
        match text.parse::<ConicPoint>() {
            Ok(p) => {
                unsafe { *out = c.contains(&p) };
                PfStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

fn conic_binop(
    conic: *const PfConic,
    first: *const c_char,
    second: *const c_char,
    out: *mut *mut c_char,
    op: impl Fn(&PellConic, &ConicPoint, &ConicPoint) -> pellforms::Result<ConicPoint>,
) -> PfStatus {
    guarded(|| {
        let c = match unsafe { conic_ref(conic) } {
            Ok(c) => c,
            Err(s) => return s,
        };
        let t1 = match unsafe { read_str(first) } {
            Ok(t) => t,
            Err(s) => return s,
        };
        let t2 = match unsafe { read_str(second) } {
            Ok(t) => t,
            Err(s) => return s,
        };
        let p1 = match parse_point_on(c, t1) {
            Ok(p) => p,
            Err(s) => return s,
        };
        let p2 = match parse_point_on(c, t2) {
            Ok(p) => p,
            Err(s) => return s,
        };
        match op(c, &p1, &p2) {
            Ok(p) => write_string(out, p.to_string()),
            Err(e) => fail(&e),
        }
    })
}

/// Group law: add two on-conic points, returning the sum in point syntax.
#[no_mangle]
pub extern "C" fn pf_conic_add(
    conic: *const PfConic,
    first: *const c_char,
    second: *const c_char,
    out: *mut *mut c_char,
) -> PfStatus {
    conic_binop(conic, first, second, out, |c, p1, p2| c.add(p1, p2))
}

/// Group law: subtract the second point from the first.
#[no_mangle]
pub extern "C" fn pf_conic_sub(
    conic: *const PfConic,
    first: *const c_char,
    second: *const c_char,
    out: *mut *mut c_char,
) -> PfStatus {
    conic_binop(conic, first, second, out, |c, p1, p2| c.sub(p1, p2))
}

/// Group law: invert an on-conic point.
#[no_mangle]
pub extern "C" fn pf_conic_neg(
    conic: *const PfConic,
    point: *const c_char,
    out: *mut *mut c_char,
) -> PfStatus {
    guarded(|| {
        let c = match unsafe { conic_ref(conic) } {
            Ok(c) => c,
            Err(s) => return s,
        };
        let t = match unsafe { read_str(point) } {
            Ok(t) => t,
            Err(s) => return s,
        };
        let p = match parse_point_on(c, t) {
            Ok(p) => p,
            Err(s) => return s,
        };
        write_string(out, c.neg(&p).to_string())
    })
}

/// Analyze a point: JSON with `A`, `beta`, `quotient`, `numerator`,
/// `form`, `ideal`. Returns `NotPrimitive` when the point carries no data.
#[no_mangle]
pub extern "C" fn pf_point_analyze(
    conic: *const PfConic,
    point: *const c_char,
    out: *mut *mut c_char,
) -> PfStatus {
    guarded(|| {
        let c = match unsafe { conic_ref(conic) } {
            Ok(c) => c,
            Err(s) => return s,
        };
        let t = match unsafe { read_str(point) } {
            Ok(t) => t,
            Err(s) => return s,
        };
        let p = match parse_point_on(c, t) {
            Ok(p) => p,
            Err(s) => return s,
        };
        match analyze_point(c, &p) {
            Some(data) => write_string(out, data.to_json().to_string()),
            None => {
                set_error("point is not primitive");
                PfStatus::NotPrimitive
            }
        }
    })
}

/// Map a primitive point to its torsor point `(T ; U)` and attached class.
/// JSON: `{"t": "...", "u": "...", "class": "F2[A,beta]"}`.
#[no_mangle]
pub extern "C" fn pf_point_phi(
    conic: *const PfConic,
    point: *const c_char,
    out: *mut *mut c_char,
) -> PfStatus {
    guarded(|| {
        let c = match unsafe { conic_ref(conic) } {
            Ok(c) => c,
            Err(s) => return s,
        };
        let t = match unsafe { read_str(point) } {
            Ok(t) => t,
            Err(s) => return s,
        };
        let p = match parse_point_on(c, t) {
            Ok(p) => p,
            Err(s) => return s,
        };
        match analyze_point(c, &p) {
            Some(data) => {
                let q = phi(&data);
                let mut v = q.to_json();
                v["class"] = serde_json::Value::String(data.form_class().to_string());
                write_string(out, v.to_string())
            }
            None => {
                set_error("point is not primitive");
                PfStatus::NotPrimitive
            }
        }
    })
}

/// Pull an integral torsor point of `F2[A,beta]` back to the conic.
#[no_mangle]
pub extern "C" fn pf_point_phi_inv(
    conic: *const PfConic,
    class: *const c_char,
    point: *const c_char,
    out: *mut *mut c_char,
) -> PfStatus {
    guarded(|| {
        let c = match unsafe { conic_ref(conic) } {
            Ok(c) => c,
            Err(s) => return s,
        };
        let class_text = match unsafe { read_str(class) } {
            Ok(t) => t,
            Err(s) => return s,
        };
        let point_text = match unsafe { read_str(point) } {
            Ok(t) => t,
            Err(s) => return s,
        };
        let f2 = match F2Class::parse(class_text, c.delta()) {
            Ok(f) => f,
            Err(e) => return fail(&e),
        };
        let q: TorsorPoint = match point_text.parse() {
            Ok(q) => q,
            Err(e) => return fail(&e),
        };
        if !on_torsor(&f2, &q) || !q.is_integral() {
            let e = Error::NotOnTorsor(q.to_string(), f2.form().to_string());
            return fail(&e);
        }
        match phi_inv(&f2, &q) {
            Ok(p) => write_string(out, p.to_string()),
            Err(e) => fail(&e),
        }
    })
}

/// Split a kernel point into rational and integral parts.
/// JSON: `{"rational": "(x ; y)", "integral": "(x ; y)"}`, or `null` when
/// the attached class is nonprincipal.
#[no_mangle]
pub extern "C" fn pf_point_decompose(
    conic: *const PfConic,
    point: *const c_char,
    out: *mut *mut c_char,
) -> PfStatus {
    guarded(|| {
        let c = match unsafe { conic_ref(conic) } {
            Ok(c) => c,
            Err(s) => return s,
        };
        let t = match unsafe { read_str(point) } {
            Ok(t) => t,
            Err(s) => return s,
        };
        let p = match parse_point_on(c, t) {
            Ok(p) => p,
            Err(s) => return s,
        };
        let Some(data) = analyze_point(c, &p) else {
            set_error("point is not primitive");
            return PfStatus::NotPrimitive;
        };
        match decompose_kernel(c, &p, &data) {
            Ok(Some((r, z))) => write_string(
                out,
                serde_json::json!({
                    "rational": r.to_string(),
                    "integral": z.to_string(),
                })
                .to_string(),
            ),
            Ok(None) => write_string(out, "null".to_string()),
            Err(e) => fail(&e),
        }
    })
}

/// The cocycle of a primitive point: JSON with the torsor point used and
/// the values at the identity and at conjugation.
#[no_mangle]
pub extern "C" fn pf_point_cocycle(
    conic: *const PfConic,
    point: *const c_char,
    out: *mut *mut c_char,
) -> PfStatus {
    guarded(|| {
        let c = match unsafe { conic_ref(conic) } {
            Ok(c) => c,
            Err(s) => return s,
        };
        let t = match unsafe { read_str(point) } {
            Ok(t) => t,
            Err(s) => return s,
        };
        let p = match parse_point_on(c, t) {
            Ok(p) => p,
            Err(s) => return s,
        };
        let Some(data) = analyze_point(c, &p) else {
            set_error("point is not primitive");
            return PfStatus::NotPrimitive;
        };
        let q = phi(&data);
        match xi_cocycle(&data, &q) {
            Ok(xi) => write_string(
                out,
                serde_json::json!({
                    "torsor_point": q.to_string(),
                    "at_identity": xi.at_identity.to_string(),
                    "at_conj": xi.at_conj.to_string(),
                })
                .to_string(),
            ),
            Err(e) => fail(&e),
        }
    })
}

/// Compose two classes given as `F[A,beta]` or `F2[A,beta]` (both of the
/// same kind) over the decimal discriminant; returns the composed class in
/// the same syntax.
#[no_mangle]
pub extern "C" fn pf_form_compose(
    delta: *const c_char,
    first: *const c_char,
    second: *const c_char,
    out: *mut *mut c_char,
) -> PfStatus {
    guarded(|| {
        let d = match unsafe { read_str(delta) }.and_then(parse_delta) {
            Ok(d) => d,
            Err(s) => return s,
        };
        let t1 = match unsafe { read_str(first) } {
            Ok(t) => t,
            Err(s) => return s,
        };
        let t2 = match unsafe { read_str(second) } {
            Ok(t) => t,
            Err(s) => return s,
        };
        if t1.trim_start().starts_with("F2") {
            let q1 = match F2Class::parse(t1, &d) {
                Ok(q) => q,
                Err(e) => return fail(&e),
            };
            let q2 = match F2Class::parse(t2, &d) {
                Ok(q) => q,
                Err(e) => return fail(&e),
            };
            match q1.compose(&q2) {
                Ok(c) => write_string(out, c.to_string()),
                Err(e) => fail(&e),
            }
        } else {
            let q1 = match FClass::parse(t1, &d) {
                Ok(q) => q,
                Err(e) => return fail(&e),
            };
            let q2 = match FClass::parse(t2, &d) {
                Ok(q) => q,
                Err(e) => return fail(&e),
            };
            match q1.compose(&q2) {
                Ok(c) => write_string(out, c.to_string()),
                Err(e) => fail(&e),
            }
        }
    })
}

/// Square an `F[A,beta]` class into the square-coefficient subgroup,
/// returning `F2[A,beta3]`.
#[no_mangle]
pub extern "C" fn pf_form_square(
    delta: *const c_char,
    class: *const c_char,
    out: *mut *mut c_char,
) -> PfStatus {
    guarded(|| {
        let d = match unsafe { read_str(delta) }.and_then(parse_delta) {
            Ok(d) => d,
            Err(s) => return s,
        };
        let t = match unsafe { read_str(class) } {
            Ok(t) => t,
            Err(s) => return s,
        };
        let q = match FClass::parse(t, &d) {
            Ok(q) => q,
            Err(e) => return fail(&e),
        };
        match q.square() {
            Ok(sq) => write_string(out, sq.to_string()),
            Err(e) => fail(&e),
        }
    })
}

/// Reduce a form `(a,b,c)`; JSON with the reduced form and the unimodular
/// certificate matrix.
#[no_mangle]
pub extern "C" fn pf_form_reduce(form: *const c_char, out: *mut *mut c_char) -> PfStatus {
    guarded(|| {
        let t = match unsafe { read_str(form) } {
            Ok(t) => t,
            Err(s) => return s,
        };
        let f: Form = match t.parse() {
            Ok(f) => f,
            Err(e) => return fail(&e),
        };
        let delta = f.discriminant();
        match reduce(&f, &delta) {
            Ok(red) => write_string(
                out,
                serde_json::json!({
                    "form": red.form.to_string(),
                    "matrix": [
                        [red.certificate.a.to_string(), red.certificate.b.to_string()],
                        [red.certificate.c.to_string(), red.certificate.d.to_string()],
                    ],
                })
                .to_string(),
            ),
            Err(e) => fail(&e),
        }
    })
}

/// Order of the narrow class group (or of its squares subgroup).
#[no_mangle]
pub extern "C" fn pf_classgroup_order(
    delta: *const c_char,
    squares: bool,
    out: *mut u64,
) -> PfStatus {
    guarded(|| {
        let d = match unsafe { read_str(delta) }.and_then(parse_delta) {
            Ok(d) => d,
            Err(s) => return s,
        };
        if out.is_null() {
            set_error("null output pointer");
            return PfStatus::NullPointer;
        }
        match narrow_class_group(&d) {
            Ok(group) => {
                let order = if squares {
                    group.squares_subgroup().order()
                } else {
                    group.order()
                };
                unsafe { *out = order as u64 };
                PfStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Obstruction census as newline-delimited JSON records (empty string when
/// the census is empty).
#[no_mangle]
pub extern "C" fn pf_sha_census(delta: *const c_char, out: *mut *mut c_char) -> PfStatus {
    guarded(|| {
        let d = match unsafe { read_str(delta) }.and_then(parse_delta) {
            Ok(d) => d,
            Err(s) => return s,
        };
        match sha_census(&d) {
            Ok(records) => {
                let lines: Vec<String> = records.iter().map(|r| r.to_json().to_string()).collect();
                write_string(out, lines.join("\n"))
            }
            Err(e) => fail(&e),
        }
    })
}

/// Torsor action `mu(q, P)` for the class `F2[A,beta]` over the conic's
/// discriminant.
#[no_mangle]
pub extern "C" fn pf_torsor_mu(
    conic: *const PfConic,
    class: *const c_char,
    torsor_point: *const c_char,
    conic_point: *const c_char,
    out: *mut *mut c_char,
) -> PfStatus {
    guarded(|| {
        let c = match unsafe { conic_ref(conic) } {
            Ok(c) => c,
            Err(s) => return s,
        };
        let class_text = match unsafe { read_str(class) } {
            Ok(t) => t,
            Err(s) => return s,
        };
        let q_text = match unsafe { read_str(torsor_point) } {
            Ok(t) => t,
            Err(s) => return s,
        };
        let p_text = match unsafe { read_str(conic_point) } {
            Ok(t) => t,
            Err(s) => return s,
        };
        let f2 = match F2Class::parse(class_text, c.delta()) {
            Ok(f) => f,
            Err(e) => return fail(&e),
        };
        let q: TorsorPoint = match q_text.parse() {
            Ok(q) => q,
            Err(e) => return fail(&e),
        };
        if !on_torsor(&f2, &q) {
            let e = Error::NotOnTorsor(q.to_string(), f2.form().to_string());
            return fail(&e);
        }
        let p = match parse_point_on(c, p_text) {
            Ok(p) => p,
            Err(s) => return s,
        };
        match mu(&f2, &q, &p) {
            Ok(moved) => write_string(out, moved.to_string()),
            Err(e) => fail(&e),
        }
    })
}

/// Torsor difference `nu(q2, q1)`, an on-conic point.
#[no_mangle]
pub extern "C" fn pf_torsor_nu(
    conic: *const PfConic,
    class: *const c_char,
    second: *const c_char,
    first: *const c_char,
    out: *mut *mut c_char,
) -> PfStatus {
    guarded(|| {
        let c = match unsafe { conic_ref(conic) } {
            Ok(c) => c,
            Err(s) => return s,
        };
        let class_text = match unsafe { read_str(class) } {
            Ok(t) => t,
            Err(s) => return s,
        };
        let f2 = match F2Class::parse(class_text, c.delta()) {
            Ok(f) => f,
            Err(e) => return fail(&e),
        };
        let parse_q = |ptr: *const c_char| -> Result<TorsorPoint, PfStatus> {
            let text = unsafe { read_str(ptr) }?;
            let q: TorsorPoint = text.parse().map_err(|e: Error| fail(&e))?;
            if !on_torsor(&f2, &q) {
                let e = Error::NotOnTorsor(q.to_string(), f2.form().to_string());
                return Err(fail(&e));
            }
            Ok(q)
        };
        let q2 = match parse_q(second) {
            Ok(q) => q,
            Err(s) => return s,
        };
        let q1 = match parse_q(first) {
            Ok(q) => q,
            Err(s) => return s,
        };
        match nu(&f2, &q2, &q1) {
            Ok(p) => write_string(out, p.to_string()),
            Err(e) => fail(&e),
        }
    })
}

/// Bilinear composition of torsor points across two classes; JSON with the
/// composed class and point.
#[no_mangle]
pub extern "C" fn pf_torsor_circ(
    delta: *const c_char,
    first_class: *const c_char,
    first_point: *const c_char,
    second_class: *const c_char,
    second_point: *const c_char,
    out: *mut *mut c_char,
) -> PfStatus {
    guarded(|| {
        let d = match unsafe { read_str(delta) }.and_then(parse_delta) {
            Ok(d) => d,
            Err(s) => return s,
        };
        let parse_class = |ptr: *const c_char| -> Result<F2Class, PfStatus> {
            let text = unsafe { read_str(ptr) }?;
            F2Class::parse(text, &d).map_err(|e| fail(&e))
        };
        let c1 = match parse_class(first_class) {
            Ok(c) => c,
            Err(s) => return s,
        };
        let c2 = match parse_class(second_class) {
            Ok(c) => c,
            Err(s) => return s,
        };
        let parse_q = |ptr: *const c_char, class: &F2Class| -> Result<TorsorPoint, PfStatus> {
            let text = unsafe { read_str(ptr) }?;
            let q: TorsorPoint = text.parse().map_err(|e: Error| fail(&e))?;
            if !on_torsor(class, &q) {
                let e = Error::NotOnTorsor(q.to_string(), class.form().to_string());
                return Err(fail(&e));
            }
            Ok(q)
        };
        let q1 = match parse_q(first_point, &c1) {
            Ok(q) => q,
            Err(s) => return s,
        };
        let q2 = match parse_q(second_point, &c2) {
            Ok(q) => q,
            Err(s) => return s,
        };
        match circ(&c1, &q1, &c2, &q2) {
            Ok((c3, q3)) => write_string(
                out,
                serde_json::json!({
                    "class": c3.to_string(),
                    "point": q3.to_string(),
                })
                .to_string(),
            ),
            Err(e) => fail(&e),
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cs(s: &str) -> CString {
        CString::new(s).unwrap()
    }

    fn take_string(ptr: *mut c_char) -> String {
        assert!(!ptr.is_null());
        let s = unsafe { CStr::from_ptr(ptr) }.to_str().unwrap().to_string();
        pf_string_free(ptr);
        s
    }

    fn new_conic(delta: &str) -> *mut PfConic {
        let mut handle: *mut PfConic = std::ptr::null_mut();
        let status = pf_conic_new(cs(delta).as_ptr(), &mut handle);
        assert_eq!(status, PfStatus::Ok);
        handle
    }

    #[test]
    fn conic_lifecycle_and_addition() {
        let conic = new_conic("5");
        let mut out: *mut c_char = std::ptr::null_mut();
        let status = pf_conic_add(
            conic,
            cs("(1 ; 1)").as_ptr(),
            cs("(1 ; 1)").as_ptr(),
            &mut out,
        );
        assert_eq!(status, PfStatus::Ok);
        assert_eq!(take_string(out), "(2 ; 3)");
        pf_conic_free(conic);
    }

    #[test]
    fn invalid_discriminant_reports_domain_error() {
        let mut handle: *mut PfConic = std::ptr::null_mut();
        let status = pf_conic_new(cs("7").as_ptr(), &mut handle);
        assert_eq!(status, PfStatus::DomainError);
        let msg = unsafe { CStr::from_ptr(pf_last_error()) }.to_str().unwrap();
        assert!(msg.contains("NotFundamental"), "{msg}");
    }

    #[test]
    fn analyze_worked_example() {
        let conic = new_conic("229");
        let mut out: *mut c_char = std::ptr::null_mut();
        let status = pf_point_analyze(
            conic,
            cs("((0+1*sqrt(-1))/5 ; (0-2*sqrt(-1))/15)").as_ptr(),
            &mut out,
        );
        assert_eq!(status, PfStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
        assert_eq!(v["A"], 15);
        assert_eq!(v["beta"], 111);
        pf_conic_free(conic);
    }

    #[test]
    fn analyze_rejects_non_primitive() {
        let conic = new_conic("8");
        let mut out: *mut c_char = std::ptr::null_mut();
        let status = pf_point_analyze(conic, cs("(sqrt(2) ; sqrt(2)/2)").as_ptr(), &mut out);
        assert_eq!(status, PfStatus::NotPrimitive);
        pf_conic_free(conic);
    }

    #[test]
    fn phi_and_inverse_round_trip() {
        let conic = new_conic("229");
        let mut out: *mut c_char = std::ptr::null_mut();
        let status = pf_point_phi(
            conic,
            cs("((0+1*sqrt(-1))/5 ; (0-2*sqrt(-1))/15)").as_ptr(),
            &mut out,
        );
        assert_eq!(status, PfStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
        assert_eq!(v["class"], "F2[15,111]");

        let mut back: *mut c_char = std::ptr::null_mut();
        let status = pf_point_phi_inv(
            conic,
            cs("F2[15,111]").as_ptr(),
            cs("(sqrt(-1) ; -2*sqrt(-1))").as_ptr(),
            &mut back,
        );
        assert_eq!(status, PfStatus::Ok);
        assert_eq!(take_string(back), "((0+1*sqrt(-1))/5 ; (0-2*sqrt(-1))/15)");
        pf_conic_free(conic);
    }

    #[test]
    fn form_operations() {
        let mut out: *mut c_char = std::ptr::null_mut();
        let status = pf_form_square(cs("229").as_ptr(), cs("F[3,6]").as_ptr(), &mut out);
        assert_eq!(status, PfStatus::Ok);
        assert_eq!(take_string(out), "F2[3,3]");

        let mut out: *mut c_char = std::ptr::null_mut();
        let status = pf_form_compose(
            cs("229").as_ptr(),
            cs("F2[15,111]").as_ptr(),
            cs("F2[15,111]").as_ptr(),
            &mut out,
        );
        assert_eq!(status, PfStatus::Ok);
        assert_eq!(take_string(out), "F2[225,31611]");

        let mut out: *mut c_char = std::ptr::null_mut();
        let status = pf_form_reduce(cs("(50625,63223,19739)").as_ptr(), &mut out);
        assert_eq!(status, PfStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
        assert!(v["form"].is_string());
        assert!(v["matrix"].is_array());
    }

    #[test]
    fn classgroup_and_census() {
        let mut order = 0u64;
        assert_eq!(
            pf_classgroup_order(cs("229").as_ptr(), false, &mut order),
            PfStatus::Ok
        );
        assert_eq!(order, 3);
        assert_eq!(
            pf_classgroup_order(cs("229").as_ptr(), true, &mut order),
            PfStatus::Ok
        );
        assert_eq!(order, 3);

        let mut out: *mut c_char = std::ptr::null_mut();
        assert_eq!(pf_sha_census(cs("229").as_ptr(), &mut out), PfStatus::Ok);
        let text = take_string(out);
        assert_eq!(text.lines().count(), 2);

        let mut out: *mut c_char = std::ptr::null_mut();
        assert_eq!(pf_sha_census(cs("5").as_ptr(), &mut out), PfStatus::Ok);
        assert!(take_string(out).is_empty());
    }

    #[test]
    fn torsor_round_trip() {
        let conic = new_conic("229");
        let mut out: *mut c_char = std::ptr::null_mut();
        let status = pf_torsor_mu(
            conic,
            cs("F2[15,111]").as_ptr(),
            cs("(1/15 ; 0)").as_ptr(),
            cs("((0+1*sqrt(-1))/5 ; (0-2*sqrt(-1))/15)").as_ptr(),
            &mut out,
        );
        assert_eq!(status, PfStatus::Ok);
        assert_eq!(take_string(out), "((0+1*sqrt(-1)) ; (0-2*sqrt(-1)))");

        let mut out: *mut c_char = std::ptr::null_mut();
        let status = pf_torsor_nu(
            conic,
            cs("F2[15,111]").as_ptr(),
            cs("(sqrt(-1) ; -2*sqrt(-1))").as_ptr(),
            cs("(sqrt(-1) ; -2*sqrt(-1))").as_ptr(),
            &mut out,
        );
        assert_eq!(status, PfStatus::Ok);
        assert_eq!(take_string(out), "(1 ; 0)");

        let mut out: *mut c_char = std::ptr::null_mut();
        let status = pf_torsor_circ(
            cs("229").as_ptr(),
            cs("F2[15,111]").as_ptr(),
            cs("(sqrt(-1) ; -2*sqrt(-1))").as_ptr(),
            cs("F2[15,111]").as_ptr(),
            cs("(sqrt(-1) ; -2*sqrt(-1))").as_ptr(),
            &mut out,
        );
        assert_eq!(status, PfStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
        assert_eq!(v["class"], "F2[225,31611]");
        assert_eq!(v["point"], "(-5 ; 8)");
        pf_conic_free(conic);
    }

    #[test]
    fn null_pointers_are_rejected() {
        let mut out: *mut c_char = std::ptr::null_mut();
        assert_eq!(
            pf_point_analyze(std::ptr::null(), cs("(1 ; 0)").as_ptr(), &mut out),
            PfStatus::NullPointer
        );
        let conic = new_conic("5");
        assert_eq!(
            pf_conic_add(conic, std::ptr::null(), cs("(1 ; 1)").as_ptr(), &mut out),
            PfStatus::NullPointer
        );
        pf_conic_free(conic);
        pf_conic_free(std::ptr::null_mut()); // no-op
        pf_string_free(std::ptr::null_mut()); // no-op
    }

    #[test]
    fn version_is_exposed() {
        let v = unsafe { CStr::from_ptr(pf_version()) }.to_str().unwrap();
        assert!(!v.is_empty());
    }

    #[test]
    fn decompose_and_cocycle() {
        let conic = new_conic("229");
        let mut out: *mut c_char = std::ptr::null_mut();
        let status = pf_point_decompose(
            conic,
            cs("((0+1*sqrt(-1))/5 ; (0-2*sqrt(-1))/15)").as_ptr(),
            &mut out,
        );
        assert_eq!(status, PfStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
        assert!(v["rational"].is_string());
        assert!(v["integral"].is_string());

        let mut out: *mut c_char = std::ptr::null_mut();
        let status = pf_point_cocycle(
            conic,
            cs("((0+1*sqrt(-1))/5 ; (0-2*sqrt(-1))/15)").as_ptr(),
            &mut out,
        );
        assert_eq!(status, PfStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
        assert_eq!(v["at_conj"], "(-1 ; 0)");
        pf_conic_free(conic);
    }
}
