//! Free evolution (lambda = 0) on the half line via the image-charge
//! propagator; the analytic benchmark for the no-potential limit.

use crate::error::{Error, Result};
use crate::overlaps::box_state_value;
use crate::quad::Rule;
use crate::two_particle::{InitialStateKind, InitialStateSpec};
use crate::C64;
use std::f64::consts::PI;

fn gaussian_kernel(x: f64, t: f64) -> C64 {
    // exp(i x^2 / 4t) / sqrt(4 pi i t)
    C64::from_polar(1.0 / (4.0 * PI * t).sqrt(), x * x / (4.0 * t) - PI / 4.0)
}

/// Half-line free propagator with a Dirichlet wall at the origin.
pub fn free_propagator(r: f64, rp: f64, t: f64) -> Result<C64> {
    if !(t > 0.0) {
        return Err(Error::Domain(format!("free propagator needs t > 0, got {t}")));
    }
    Ok(gaussian_kernel(r - rp, t) - gaussian_kernel(r + rp, t))
}

/// Free evolution of a box state, by quadrature of the image kernel.
pub fn evolve_free_single(s: usize, a: f64, r: f64, t: f64) -> Result<C64> {
    let rule = Rule::on(96, 0.0, a);
    let mut err = None;
    let v = rule.integrate(|y| {
        let psi = box_state_value(s, y, a).unwrap();
        match free_propagator(r, y, t) {
            Ok(g) => g * psi,
            Err(e) => {
                err = Some(e);
                C64::new(0.0, 0.0)
            }
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(v),
    }
}

/// Exact free two-particle wave function for an initial-state spec, as the
/// kind-appropriate combination of single-particle free evolutions.
pub fn psi_free_two(spec: &InitialStateSpec, a: f64, r1: f64, r2: f64, t: f64) -> Result<C64> {
    spec.validate()?;
    let fa1 = evolve_free_single(spec.alpha, a, r1, t)?;
    let fa2 = evolve_free_single(spec.alpha, a, r2, t)?;
    match spec.kind {
        InitialStateKind::FactorizedSymmetric => Ok(fa1 * fa2),
        InitialStateKind::EntangledSymmetric | InitialStateKind::EntangledAntisymmetric => {
            let fb1 = evolve_free_single(spec.beta, a, r1, t)?;
            let fb2 = evolve_free_single(spec.beta, a, r2, t)?;
            Ok((fa1 * fb2 + spec.kind.parity() * fb1 * fa2) / 2.0f64.sqrt())
        }
    }
}

/// Single-particle free survival probability by 2-D quadrature of the
/// kernel against the box state.
pub fn free_survival_single(s: usize, a: f64, t: f64) -> Result<f64> {
    let rule = Rule::on(96, 0.0, a);
    let mut err = None;
    let amp = rule.integrate_2d(|r, y| {
        let pr = box_state_value(s, r, a).unwrap();
        let py = box_state_value(s, y, a).unwrap();
        match free_propagator(r, y, t) {
            Ok(g) => pr * g * py,
            Err(e) => {
                err = Some(e);
                C64::new(0.0, 0.0)
            }
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(amp.norm_sqr()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poles::{ModelParams, ResonantBasis};
    use crate::two_particle::psi_asymptotic;

    #[test]
    fn short_time_keeps_state_in_place() {
        // at small t the evolved state stays close to the initial one; t is
        // kept large enough that the 96-point rule resolves the kernel phase
        let v = evolve_free_single(1, 1.0, 0.5, 5e-3).unwrap();
        let target = box_state_value(1, 0.5, 1.0).unwrap();
        assert!((v - C64::new(target, 0.0)).norm() < 0.1, "got {v} vs {target}");
    }

    #[test]
    fn dirichlet_wall_respected() {
        let v = evolve_free_single(2, 1.0, 0.0, 0.7).unwrap();
        assert!(v.norm() < 1e-14);
    }

    #[test]
    fn asymptotic_free_forms_match_kernel_quadrature() {
        let free = ResonantBasis::build(ModelParams::new(0.0, 1.0, 1).unwrap()).unwrap();
        let (r1, r2, t) = (0.3, 0.6, 300.0);
        let sym = InitialStateSpec::new(InitialStateKind::EntangledSymmetric, 1, 6).unwrap();
        let anti = InitialStateSpec::new(InitialStateKind::EntangledAntisymmetric, 1, 6).unwrap();
        for (spec, tol) in [(sym, 0.02), (anti, 0.05)] {
            let asym = psi_asymptotic(&free, &spec, r1, r2, t).unwrap();
            let exact = psi_free_two(&spec, 1.0, r1, r2, t).unwrap();
            let rel = (asym - exact).norm() / exact.norm();
            assert!(rel < tol, "{:?}: relative deviation {rel}", spec.kind);
        }
    }

    #[test]
    fn free_survival_decays_as_t_cubed() {
        let s1 = free_survival_single(1, 1.0, 200.0).unwrap();
        let s2 = free_survival_single(1, 1.0, 800.0).unwrap();
        let slope = (s2 / s1).ln() / 4.0f64.ln();
        assert!((slope + 3.0).abs() < 0.05, "loglog slope {slope}");
    }
}
