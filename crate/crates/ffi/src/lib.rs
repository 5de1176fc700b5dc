//! C ABI over the qdecay library: opaque model handles, integer status
//! codes, and a thread-local last-error message. Every function is a thin
//! argument-checking shim; the numerics live in the core crate.

use num_complex::Complex64;
use qdecay::observables::DecayModel;
use qdecay::propagator::PropagatorForm;
use qdecay::special;
use qdecay::two_particle::{self, InitialStateKind, InitialStateSpec};
use qdecay::{Error, ModelParams, ResonantBasis};
use std::cell::RefCell;
use std::os::raw::c_char;

/// Status code returned by every fallible entry point.
#[repr(i32)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QdStatus {
    /// Success.
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// Arguments were rejected before any computation (bad kind, bad spec,
    /// out-of-range r or t, non-finite input).
    InvalidArgument = 2,
    /// The computation itself failed (pole solver, degenerate state, fit).
    Numerical = 3,
}

/// Initial-state kind selector for `qd_model_new`.
#[repr(i32)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QdKind {
    /// Both particles in box level alpha; beta is ignored.
    FactorizedSymmetric = 0,
    /// Symmetrized combination of distinct levels alpha and beta.
    EntangledSymmetric = 1,
    /// Antisymmetrized combination of distinct levels alpha and beta.
    EntangledAntisymmetric = 2,
}

/// Opaque handle holding the pole table and coefficient matrices for one
/// (lambda, a, N, initial state) configuration.
pub struct QdModel {
    model: DecayModel,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: impl Into<String>) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg.into());
}

fn status_of(err: &Error) -> QdStatus {
    match err {
        Error::NonFinite(_) | Error::Domain(_) | Error::InvalidSpec(_) | Error::Config(_) => {
            QdStatus::InvalidArgument
        }
        _ => QdStatus::Numerical,
    }
}

fn fail(err: Error) -> QdStatus {
    let code = status_of(&err);
    set_error(err.to_string());
    code
}

macro_rules! non_null {
    ($($p:ident),+) => {
        $(if $p.is_null() {
            set_error(format!("null pointer argument '{}'", stringify!($p)));
            return QdStatus::NullPointer;
        })+
    };
}

/// Copy the message of the most recent error on this thread into `buf`
/// (NUL-terminated, truncated to `len` bytes). Returns the full message
/// length in bytes, or -1 if `buf` is null and `len` nonzero.
#[no_mangle]
pub extern "C" fn qd_last_error_message(buf: *mut c_char, len: usize) -> i64 {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if len > 0 {
            if buf.is_null() {
                return -1;
            }
            let n = msg.len().min(len - 1);
            unsafe {
                std::ptr::copy_nonoverlapping(msg.as_ptr(), buf as *mut u8, n);
                *buf.add(n) = 0;
            }
        }
        msg.len() as i64
    })
}

/// Build a model. `beta` is ignored for the factorized kind. On success
/// writes an owned handle to `out`; release it with `qd_model_free`.
#[no_mangle]
pub extern "C" fn qd_model_new(
    lambda: f64,
    a: f64,
    n_poles: usize,
    kind: QdKind,
    alpha: usize,
    beta: usize,
    out: *mut *mut QdModel,
) -> QdStatus {
    non_null!(out);
    let spec = match kind {
        QdKind::FactorizedSymmetric => InitialStateSpec::factorized(alpha),
        QdKind::EntangledSymmetric => {
            InitialStateSpec::new(InitialStateKind::EntangledSymmetric, alpha, beta)
        }
        QdKind::EntangledAntisymmetric => {
            InitialStateSpec::new(InitialStateKind::EntangledAntisymmetric, alpha, beta)
        }
    };
    let built = ModelParams::new(lambda, a, n_poles)
        .and_then(ResonantBasis::build)
        .and_then(|basis| spec.and_then(|s| DecayModel::new(basis, s)));
    match built {
        Ok(model) => {
            unsafe { *out = Box::into_raw(Box::new(QdModel { model })) };
            QdStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Release a handle returned by `qd_model_new`. Null is a no-op.
#[no_mangle]
pub extern "C" fn qd_model_free(model: *mut QdModel) {
    if !model.is_null() {
        drop(unsafe { Box::from_raw(model) });
    }
}

/// Number of proper poles in the model's basis.
#[no_mangle]
pub extern "C" fn qd_pole_count(model: *const QdModel, out: *mut usize) -> QdStatus {
    non_null!(model, out);
    unsafe { *out = (*model).model.basis.len() };
    QdStatus::Ok
}

/// Complex wave number kappa_p of proper pole p (1-based).
#[no_mangle]
pub extern "C" fn qd_pole(
    model: *const QdModel,
    p: usize,
    out_re: *mut f64,
    out_im: *mut f64,
) -> QdStatus {
    non_null!(model, out_re, out_im);
    let basis = unsafe { &(*model).model.basis };
    if p == 0 || p > basis.len() {
        set_error(format!("pole index {p} outside 1..={}", basis.len()));
        return QdStatus::InvalidArgument;
    }
    let kappa = basis.state(p).pole.kappa;
    unsafe {
        *out_re = kappa.re;
        *out_im = kappa.im;
    }
    QdStatus::Ok
}

/// Lifetime 1/Gamma_1 of the longest-lived resonance.
#[no_mangle]
pub extern "C" fn qd_tau1(model: *const QdModel, out: *mut f64) -> QdStatus {
    non_null!(model, out);
    unsafe { *out = (*model).model.tau1() };
    QdStatus::Ok
}

/// Survival probability S(t), switching from the exact coefficient sums to
/// the asymptotic form at the model's switch time.
#[no_mangle]
pub extern "C" fn qd_survival(model: *const QdModel, t: f64, out: *mut f64) -> QdStatus {
    non_null!(model, out);
    match unsafe { &(*model).model }.probabilities(t) {
        Ok((s, _, _)) => {
            unsafe { *out = s };
            QdStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Nonescape probability P(t), with the same switch policy as S(t).
#[no_mangle]
pub extern "C" fn qd_nonescape(model: *const QdModel, t: f64, out: *mut f64) -> QdStatus {
    non_null!(model, out);
    match unsafe { &(*model).model }.probabilities(t) {
        Ok((_, p, _)) => {
            unsafe { *out = p };
            QdStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Two-particle wave function Psi(r1, r2; t) in the exact Moshinsky form.
#[no_mangle]
pub extern "C" fn qd_psi_exact(
    model: *const QdModel,
    r1: f64,
    r2: f64,
    t: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> QdStatus {
    non_null!(model, out_re, out_im);
    let m = unsafe { &(*model).model };
    match two_particle::psi_exact(&m.basis, &m.spec, r1, r2, t) {
        Ok(v) => {
            unsafe {
                *out_re = v.re;
                *out_im = v.im;
            }
            QdStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Single-particle wave function psi_s(r; t) in the exact expansion, for
/// the model's potential and box level s.
#[no_mangle]
pub extern "C" fn qd_psi_single(
    model: *const QdModel,
    s: usize,
    r: f64,
    t: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> QdStatus {
    non_null!(model, out_re, out_im);
    let m = unsafe { &(*model).model };
    match qdecay::propagator::evolve_single(&m.basis, s, r, t, PropagatorForm::Exact) {
        Ok(v) => {
            unsafe {
                *out_re = v.re;
                *out_im = v.im;
            }
            QdStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Faddeyeva function w(z) = exp(-z^2) erfc(-iz).
#[no_mangle]
pub extern "C" fn qd_faddeyeva(
    z_re: f64,
    z_im: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> QdStatus {
    non_null!(out_re, out_im);
    match special::faddeyeva(Complex64::new(z_re, z_im)) {
        Ok(w) => {
            unsafe {
                *out_re = w.re;
                *out_im = w.im;
            }
            QdStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Moshinsky function M(kappa, t) = w(iz)/2 at z = -exp(-i pi/4) kappa sqrt(t).
#[no_mangle]
pub extern "C" fn qd_moshinsky(
    kappa_re: f64,
    kappa_im: f64,
    t: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> QdStatus {
    non_null!(out_re, out_im);
    match special::moshinsky(Complex64::new(kappa_re, kappa_im), t) {
        Ok(m) => {
            unsafe {
                *out_re = m.re;
                *out_im = m.im;
            }
            QdStatus::Ok
        }
        Err(e) => fail(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ptr;

    fn new_model(kind: QdKind, alpha: usize, beta: usize) -> *mut QdModel {
        let mut h: *mut QdModel = ptr::null_mut();
        let st = qd_model_new(6.0, 1.0, 20, kind, alpha, beta, &mut h);
        assert_eq!(st, QdStatus::Ok);
        assert!(!h.is_null());
        h
    }

    fn last_error() -> String {
        let mut buf = [0i8; 256];
        let n = qd_last_error_message(buf.as_mut_ptr(), buf.len());
        assert!(n >= 0);
        let bytes: Vec<u8> = buf.iter().take(n as usize).map(|&c| c as u8).collect();
        String::from_utf8(bytes).unwrap()
    }

    #[test]
    fn model_round_trip() {
        let h = new_model(QdKind::FactorizedSymmetric, 6, 0);
        let mut n = 0usize;
        assert_eq!(qd_pole_count(h, &mut n), QdStatus::Ok);
        assert_eq!(n, 20);
        let (mut re, mut im) = (0.0, 0.0);
        assert_eq!(qd_pole(h, 1, &mut re, &mut im), QdStatus::Ok);
        assert!((re - 2.757_938_321_294_924_7).abs() < 1e-10);
        assert!((im + 0.140_432_732_466_233_3).abs() < 1e-10);
        let mut tau = 0.0;
        assert_eq!(qd_tau1(h, &mut tau), QdStatus::Ok);
        assert!((tau - 0.645_486_424_861_852_1).abs() < 1e-12);
        qd_model_free(h);
    }

    #[test]
    fn probabilities_and_wavefunctions() {
        let h = new_model(QdKind::EntangledAntisymmetric, 1, 6);
        let (mut s, mut p) = (0.0, 0.0);
        assert_eq!(qd_survival(h, 0.0, &mut s), QdStatus::Ok);
        assert_eq!(qd_nonescape(h, 0.0, &mut p), QdStatus::Ok);
        assert!((s - 1.0).abs() < 5e-3);
        assert!(p >= s - 1e-12);
        let (mut re, mut im) = (0.0, 0.0);
        assert_eq!(qd_psi_exact(h, 0.4, 0.4, 1.0, &mut re, &mut im), QdStatus::Ok);
        assert!(re.abs() < 1e-12 && im.abs() < 1e-12); // Pauli diagonal zero
        assert_eq!(qd_psi_single(h, 1, 0.5, 0.0, &mut re, &mut im), QdStatus::Ok);
        assert!((Complex64::new(re, im) - 2.0f64.sqrt() * (std::f64::consts::PI * 0.5).sin()).norm() < 0.05);
        qd_model_free(h);
    }

    #[test]
    fn special_function_entry_points() {
        let (mut re, mut im) = (0.0, 0.0);
        assert_eq!(qd_faddeyeva(0.0, 1.0, &mut re, &mut im), QdStatus::Ok);
        assert!((re - 0.427_583_576_155_807).abs() < 1e-13 && im.abs() < 1e-13);
        assert_eq!(qd_moshinsky(3.0, -0.5, 0.0, &mut re, &mut im), QdStatus::Ok);
        assert!((re - 0.5).abs() < 1e-14);
    }

    #[test]
    fn error_paths() {
        let mut h: *mut QdModel = ptr::null_mut();
        // antisymmetric state needs distinct levels
        let st = qd_model_new(6.0, 1.0, 20, QdKind::EntangledAntisymmetric, 3, 3, &mut h);
        assert_eq!(st, QdStatus::InvalidArgument);
        assert!(last_error().contains("alpha = beta"), "message: {}", last_error());
        assert_eq!(
            qd_model_new(6.0, 1.0, 20, QdKind::FactorizedSymmetric, 6, 0, ptr::null_mut()),
            QdStatus::NullPointer
        );
        let good = new_model(QdKind::FactorizedSymmetric, 6, 0);
        let (mut re, mut im) = (0.0, 0.0);
        assert_eq!(qd_pole(good, 0, &mut re, &mut im), QdStatus::InvalidArgument);
        assert_eq!(qd_pole(good, 21, &mut re, &mut im), QdStatus::InvalidArgument);
        assert_eq!(qd_psi_exact(good, 1.5, 0.5, 1.0, &mut re, &mut im), QdStatus::InvalidArgument);
        let mut s = 0.0;
        assert_eq!(qd_survival(good, f64::NAN, &mut s), QdStatus::InvalidArgument);
        qd_model_free(good);
        qd_model_free(ptr::null_mut());
    }
}
