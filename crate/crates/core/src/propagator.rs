//! Single-particle retarded propagator in three forms: the full pole sum
//! over mirrored poles, the proper-pole exponential sum plus its integral
//! remainder, and the long-time steepest-descent expansion around k = 0.

use crate::error::{Error, Result};
use crate::greens::{greens_derivatives_at_zero, AsymptoticCoefficients};
use crate::overlaps::{moment_d, overlap_c};
use crate::poles::ResonantBasis;
use crate::special::{moshinsky, moshinsky_pair};
use crate::C64;

/// Which evaluation of the propagator produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PropagatorForm {
    Exact,
    Split,
    Asymptotic,
}

impl std::fmt::Display for PropagatorForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PropagatorForm::Exact => write!(f, "exact"),
            PropagatorForm::Split => write!(f, "split"),
            PropagatorForm::Asymptotic => write!(f, "asymptotic"),
        }
    }
}

fn check_interior(r: f64, rp: f64, a: f64) -> Result<()> {
    if !(0.0..=a).contains(&r) || !(0.0..=a).contains(&rp) {
        return Err(Error::Domain(format!("(r, r') = ({r}, {rp}) outside [0, {a}]^2")));
    }
    if r == a && rp == a {
        return Err(Error::Domain("the point r = r' = a is excluded".into()));
    }
    Ok(())
}

/// g(r, r'; t) as the sum over the full mirrored pole set,
/// sum_p u_p(r) u_p(r') M(z_p).
pub fn propagator_exact(basis: &ResonantBasis, r: f64, rp: f64, t: f64) -> Result<C64> {
    check_interior(r, rp, basis.params.a)?;
    let mut acc = C64::new(0.0, 0.0);
    for p in basis.signed_indices() {
        acc += basis.u(p, r) * basis.u(p, rp) * moshinsky(basis.kappa(p), t)?;
    }
    Ok(acc)
}

/// The two pieces of the split representation: the proper-pole exponential
/// sum and the integral remainder I(r, r'; t).
#[derive(Debug, Clone, Copy)]
pub struct SplitParts {
    pub exponential: C64,
    pub integral: C64,
}

impl SplitParts {
    pub fn total(&self) -> C64 {
        self.exponential + self.integral
    }
}

/// g(r, r'; t) regrouped through the Moshinsky pairing identity into
/// sum_{p>=1} u_p u_p' exp(-i E_p t) plus the remainder
/// I = sum_{p>=1} [u_p* u_p'* M(z_{-p}) - u_p u_p' M(-z_p)].
pub fn propagator_split(basis: &ResonantBasis, r: f64, rp: f64, t: f64) -> Result<SplitParts> {
    check_interior(r, rp, basis.params.a)?;
    let mut exponential = C64::new(0.0, 0.0);
    let mut integral = C64::new(0.0, 0.0);
    for s in basis.states() {
        if !s.pole.is_proper() {
            return Err(Error::Representation(format!(
                "pole {} is not proper; the split form is invalid",
                s.pole.kappa
            )));
        }
        let up = s.value_unchecked(r) * s.value_unchecked(rp);
        let pair = moshinsky_pair(s.pole.kappa, t)?;
        let m_mirror = moshinsky(-s.pole.kappa.conj(), t)?;
        exponential += up * pair.phase;
        integral += up.conj() * m_mirror - up * pair.m_minus;
    }
    Ok(SplitParts { exponential, integral })
}

/// g(r, r'; t) at long times: the proper-pole exponential sum plus the
/// steepest-descent terms eta_m t^{-(2m+1)/2} d^{2m-1}G+/dk^{2m-1}|_0,
/// m = 1..m_max.
pub fn propagator_asymptotic(
    basis: &ResonantBasis,
    r: f64,
    rp: f64,
    t: f64,
    m_max: usize,
) -> Result<C64> {
    check_interior(r, rp, basis.params.a)?;
    if !(1..=3).contains(&m_max) {
        return Err(Error::Domain(format!("m_max must be in 1..=3, got {m_max}")));
    }
    if !(t > 0.0) {
        return Err(Error::Domain(format!("asymptotic form requires t > 0, got {t}")));
    }
    let mut acc = C64::new(0.0, 0.0);
    for s in basis.states() {
        let pair = moshinsky_pair(s.pole.kappa, t)?;
        acc += s.value_unchecked(r) * s.value_unchecked(rp) * pair.phase;
    }
    let d = greens_derivatives_at_zero(r, rp, &basis.params)?;
    let eta = AsymptoticCoefficients::standard();
    let derivs = [d.d1, d.d3, d.d5];
    for m in 1..=m_max {
        acc += eta.eta(m) * derivs[m - 1] / t.powf((2 * m + 1) as f64 / 2.0);
    }
    Ok(acc)
}

/// Psi(r, t) for a box initial state s, with the r'-integral absorbed into
/// the closed-form coefficients C_{p,s}.
pub fn evolve_single(
    basis: &ResonantBasis,
    s: usize,
    r: f64,
    t: f64,
    form: PropagatorForm,
) -> Result<C64> {
    let a = basis.params.a;
    if !(0.0..=a).contains(&r) {
        return Err(Error::Domain(format!("r = {r} outside [0, {a}]")));
    }
    match form {
        PropagatorForm::Exact => {
            let mut acc = C64::new(0.0, 0.0);
            for p in basis.signed_indices() {
                acc += overlap_c(basis, p, s) * basis.u(p, r) * moshinsky(basis.kappa(p), t)?;
            }
            Ok(acc)
        }
        PropagatorForm::Split => {
            let mut acc = C64::new(0.0, 0.0);
            for p in 1..=basis.len() as i32 {
                let cu = overlap_c(basis, p, s) * basis.u(p, r);
                let pair = moshinsky_pair(basis.kappa(p), t)?;
                let m_mirror = moshinsky(basis.kappa(-p), t)?;
                acc += cu * pair.phase + cu.conj() * m_mirror - cu * pair.m_minus;
            }
            Ok(acc)
        }
        PropagatorForm::Asymptotic => {
            if !(t > 0.0) {
                return Err(Error::Domain("asymptotic form requires t > 0".into()));
            }
            let mut acc = C64::new(0.0, 0.0);
            for p in 1..=basis.len() as i32 {
                let pair = moshinsky_pair(basis.kappa(p), t)?;
                acc += overlap_c(basis, p, s) * basis.u(p, r) * pair.phase;
            }
            let eta = AsymptoticCoefficients::standard();
            let h1 = (1.0 + basis.params.lambda * a).powi(2);
            let i = C64::new(0.0, 1.0);
            acc -= i * eta.eta1 * r * moment_d(s, a) / (h1 * t.powf(1.5));
            Ok(acc)
        }
    }
}
