//! Two-particle wave functions for the three initial-state classes, in the
//! exact Moshinsky form and in the long-time asymptotic form.

use crate::error::{Error, Result};
use crate::greens::AsymptoticCoefficients;
use crate::overlaps::{box_state_value, moment_d, moment_g, overlap_c};
use crate::poles::ResonantBasis;
use crate::special::{moshinsky, moshinsky_pair};
use crate::C64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialStateKind {
    FactorizedSymmetric,
    EntangledSymmetric,
    EntangledAntisymmetric,
}

impl InitialStateKind {
    /// Exchange parity of the state: +1 for the symmetric kinds, -1 for the
    /// antisymmetric one.
    pub fn parity(&self) -> f64 {
        match self {
            InitialStateKind::EntangledAntisymmetric => -1.0,
            _ => 1.0,
        }
    }
}

impl std::fmt::Display for InitialStateKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            InitialStateKind::FactorizedSymmetric => write!(f, "factorized_symmetric"),
            InitialStateKind::EntangledSymmetric => write!(f, "entangled_symmetric"),
            InitialStateKind::EntangledAntisymmetric => write!(f, "entangled_antisymmetric"),
        }
    }
}

/// Which two-particle initial state to evolve, over infinite-box quantum
/// numbers alpha (and beta for the entangled kinds).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct InitialStateSpec {
    pub kind: InitialStateKind,
    pub alpha: usize,
    pub beta: usize,
}

impl InitialStateSpec {
    pub fn factorized(alpha: usize) -> Result<Self> {
        Self::new(InitialStateKind::FactorizedSymmetric, alpha, alpha)
    }

    pub fn new(kind: InitialStateKind, alpha: usize, beta: usize) -> Result<Self> {
        let spec = Self { kind, alpha, beta };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.alpha < 1 || self.beta < 1 {
            return Err(Error::InvalidSpec(format!(
                "box indices must be >= 1, got alpha = {}, beta = {}",
                self.alpha, self.beta
            )));
        }
        if self.kind == InitialStateKind::EntangledAntisymmetric && self.alpha == self.beta {
            return Err(Error::InvalidSpec(
                "antisymmetric state vanishes identically for alpha = beta".into(),
            ));
        }
        Ok(())
    }
}

/// Psi(y1, y2, 0) for the given spec.
pub fn initial_wavefunction(spec: &InitialStateSpec, y1: f64, y2: f64, a: f64) -> Result<f64> {
    spec.validate()?;
    let pa1 = box_state_value(spec.alpha, y1, a)?;
    let pa2 = box_state_value(spec.alpha, y2, a)?;
    match spec.kind {
        InitialStateKind::FactorizedSymmetric => Ok(pa1 * pa2),
        InitialStateKind::EntangledSymmetric | InitialStateKind::EntangledAntisymmetric => {
            let pb1 = box_state_value(spec.beta, y1, a)?;
            let pb2 = box_state_value(spec.beta, y2, a)?;
            let sign = spec.kind.parity();
            Ok((pa1 * pb2 + sign * pb1 * pa2) / 2.0f64.sqrt())
        }
    }
}

/// Expansion coefficient B_{pq} of the two-particle state over the signed
/// pole pair (p, q): C_p C_q for the factorized kind and
/// (C_{p,alpha} C_{q,beta} +/- C_{p,beta} C_{q,alpha})/sqrt(2) otherwise.
pub fn b_coefficient(basis: &ResonantBasis, spec: &InitialStateSpec, p: i32, q: i32) -> C64 {
    match spec.kind {
        InitialStateKind::FactorizedSymmetric => {
            overlap_c(basis, p, spec.alpha) * overlap_c(basis, q, spec.alpha)
        }
        InitialStateKind::EntangledSymmetric | InitialStateKind::EntangledAntisymmetric => {
            let sign = spec.kind.parity();
            (overlap_c(basis, p, spec.alpha) * overlap_c(basis, q, spec.beta)
                + sign * overlap_c(basis, p, spec.beta) * overlap_c(basis, q, spec.alpha))
                / 2.0f64.sqrt()
        }
    }
}

/// Single-particle exact sum F_s(r, t) = sum_{p signed} C_{p,s} u_p(r) M(z_p).
fn exact_sum(basis: &ResonantBasis, s: usize, r: f64, t: f64) -> Result<C64> {
    let mut acc = C64::new(0.0, 0.0);
    for p in basis.signed_indices() {
        acc += overlap_c(basis, p, s) * basis.u(p, r) * moshinsky(basis.kappa(p), t)?;
    }
    Ok(acc)
}

/// Proper-pole exponential sum E_s(r, t) = sum_{p>=1} C_{p,s} u_p(r)
/// exp(-i E_p t).
fn exponential_sum(basis: &ResonantBasis, s: usize, r: f64, t: f64) -> Result<C64> {
    let mut acc = C64::new(0.0, 0.0);
    for p in 1..=basis.len() as i32 {
        let pair = moshinsky_pair(basis.kappa(p), t)?;
        acc += overlap_c(basis, p, s) * basis.u(p, r) * pair.phase;
    }
    Ok(acc)
}

fn check_domain(r1: f64, r2: f64, a: f64) -> Result<()> {
    if !(0.0..=a).contains(&r1) || !(0.0..=a).contains(&r2) {
        return Err(Error::Domain(format!("(r1, r2) = ({r1}, {r2}) outside [0, {a}]^2")));
    }
    Ok(())
}

/// Psi(r1, r2, t) from the full mirrored pole expansion. The double sum
/// factorizes into products of single-particle sums for every kind, which
/// brings the cost per point down to O(N).
pub fn psi_exact(
    basis: &ResonantBasis,
    spec: &InitialStateSpec,
    r1: f64,
    r2: f64,
    t: f64,
) -> Result<C64> {
    spec.validate()?;
    check_domain(r1, r2, basis.params.a)?;
    match spec.kind {
        InitialStateKind::FactorizedSymmetric => {
            Ok(exact_sum(basis, spec.alpha, r1, t)? * exact_sum(basis, spec.alpha, r2, t)?)
        }
        InitialStateKind::EntangledSymmetric | InitialStateKind::EntangledAntisymmetric => {
            let sign = spec.kind.parity();
            let fa1 = exact_sum(basis, spec.alpha, r1, t)?;
            let fb2 = exact_sum(basis, spec.beta, r2, t)?;
            let fb1 = exact_sum(basis, spec.beta, r1, t)?;
            let fa2 = exact_sum(basis, spec.alpha, r2, t)?;
            Ok((fa1 * fb2 + sign * fb1 * fa2) / 2.0f64.sqrt())
        }
    }
}

/// The literal double sum over B_{pq}; kept as the cross-check for the
/// factorized product evaluation.
pub fn psi_exact_double_sum(
    basis: &ResonantBasis,
    spec: &InitialStateSpec,
    r1: f64,
    r2: f64,
    t: f64,
) -> Result<C64> {
    spec.validate()?;
    check_domain(r1, r2, basis.params.a)?;
    let signed: Vec<i32> = basis.signed_indices().collect();
    let m: Vec<C64> = signed
        .iter()
        .map(|&p| moshinsky(basis.kappa(p), t))
        .collect::<Result<_>>()?;
    let mut acc = C64::new(0.0, 0.0);
    for (i, &p) in signed.iter().enumerate() {
        let u1 = basis.u(p, r1);
        for (j, &q) in signed.iter().enumerate() {
            acc += b_coefficient(basis, spec, p, q) * u1 * basis.u(q, r2) * m[i] * m[j];
        }
    }
    Ok(acc)
}

/// The three long-time contributions kept separate: the proper-pole
/// exponential double sum, the pure inverse-power term (t^-3 for the
/// symmetric kinds, t^-5 for the antisymmetric one) and the mixed
/// exponential-times-power term.
#[derive(Debug, Clone, Copy)]
pub struct AsymptoticTerms {
    pub exponential: C64,
    pub pure_power: C64,
    pub mixed: C64,
}

impl AsymptoticTerms {
    pub fn total(&self) -> C64 {
        self.exponential + self.pure_power + self.mixed
    }
}

/// Psi(r1, r2, t) in the long-time form.
pub fn psi_asymptotic(
    basis: &ResonantBasis,
    spec: &InitialStateSpec,
    r1: f64,
    r2: f64,
    t: f64,
) -> Result<C64> {
    Ok(psi_asymptotic_terms(basis, spec, r1, r2, t)?.total())
}

pub fn psi_asymptotic_terms(
    basis: &ResonantBasis,
    spec: &InitialStateSpec,
    r1: f64,
    r2: f64,
    t: f64,
) -> Result<AsymptoticTerms> {
    spec.validate()?;
    check_domain(r1, r2, basis.params.a)?;
    if !(t > 0.0) {
        return Err(Error::Domain(format!("asymptotic form requires t > 0, got {t}")));
    }
    let a = basis.params.a;
    let h1 = (1.0 + basis.params.lambda * a).powi(2);
    let eta = AsymptoticCoefficients::standard();
    let i = C64::new(0.0, 1.0);
    let sqrt2 = 2.0f64.sqrt();
    match spec.kind {
        InitialStateKind::FactorizedSymmetric => {
            let da = moment_d(spec.alpha, a);
            let ea1 = exponential_sum(basis, spec.alpha, r1, t)?;
            let ea2 = exponential_sum(basis, spec.alpha, r2, t)?;
            Ok(AsymptoticTerms {
                exponential: ea1 * ea2,
                pure_power: -r1 * r2 * da * da * eta.eta1 * eta.eta1 / (h1 * h1 * t.powi(3)),
                mixed: -i * eta.eta1 * da / (h1 * t.powf(1.5)) * (r2 * ea1 + r1 * ea2),
            })
        }
        InitialStateKind::EntangledSymmetric => {
            let da = moment_d(spec.alpha, a);
            let db = moment_d(spec.beta, a);
            let ea1 = exponential_sum(basis, spec.alpha, r1, t)?;
            let ea2 = exponential_sum(basis, spec.alpha, r2, t)?;
            let eb1 = exponential_sum(basis, spec.beta, r1, t)?;
            let eb2 = exponential_sum(basis, spec.beta, r2, t)?;
            Ok(AsymptoticTerms {
                exponential: (ea1 * eb2 + eb1 * ea2) / sqrt2,
                pure_power: -sqrt2 * r1 * r2 * da * db * eta.eta1 * eta.eta1
                    / (h1 * h1 * t.powi(3)),
                mixed: -i * eta.eta1 / (sqrt2 * h1 * t.powf(1.5))
                    * (r2 * (db * ea1 + da * eb1) + r1 * (db * ea2 + da * eb2)),
            })
        }
        InitialStateKind::EntangledAntisymmetric => {
            let da = moment_d(spec.alpha, a);
            let db = moment_d(spec.beta, a);
            let ga = moment_g(spec.alpha, a);
            let gb = moment_g(spec.beta, a);
            let ea1 = exponential_sum(basis, spec.alpha, r1, t)?;
            let ea2 = exponential_sum(basis, spec.alpha, r2, t)?;
            let eb1 = exponential_sum(basis, spec.beta, r1, t)?;
            let eb2 = exponential_sum(basis, spec.beta, r2, t)?;
            let combo = eta.eta2 * eta.eta2 - 10.0 * eta.eta1 * eta.eta3 / 3.0;
            Ok(AsymptoticTerms {
                exponential: (ea1 * eb2 - eb1 * ea2) / sqrt2,
                pure_power: combo * (r1.powi(3) * r2 - r2.powi(3) * r1) * (db * ga - gb * da)
                    / (sqrt2 * h1 * h1 * t.powi(5)),
                mixed: -i * eta.eta1 / (sqrt2 * h1 * t.powf(1.5))
                    * (r2 * (db * ea1 - da * eb1) - r1 * (db * ea2 - da * eb2)),
            })
        }
    }
}
