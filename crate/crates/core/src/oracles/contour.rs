//! Contour-quadrature oracles along the 45-degree steepest-descent line
//! k = exp(-i pi/4) s. On that line exp(-i k^2 t) = exp(-s^2 t), so both
//! integrals below become rapidly converging Gaussian quadratures.

use crate::error::{Error, Result};
use crate::greens::greens_outgoing;
use crate::overlaps::{box_state_value, overlap_c};
use crate::poles::{ModelParams, ResonantBasis};
use crate::quad::Rule;
use crate::special::exp_neg_z_sq;
use crate::C64;
use std::f64::consts::PI;

fn line_direction() -> C64 {
    C64::from_polar(1.0, -PI / 4.0)
}

fn half_width(t: f64) -> f64 {
    (46.0 / t).sqrt()
}

/// M(z) for the pole kappa by direct quadrature of its defining integral
/// (i/2pi) int exp(-i k^2 t)/(k - kappa) dk, rotated onto the 45-degree
/// line. Rotating past a pole in the sector -pi/4 < arg kappa < 0 (a proper
/// pole) picks up its residue, which contributes exp(-i kappa^2 t).
pub fn moshinsky_quadrature(kappa: C64, t: f64, n: usize) -> Result<C64> {
    if !(t > 0.0) {
        return Err(Error::Domain(format!("contour quadrature needs t > 0, got {t}")));
    }
    let e = line_direction();
    let w = half_width(t);
    let rule = Rule::on(n, -w, w);
    let line = rule.integrate(|s| {
        let k = e * s;
        e * (-s * s * t).exp() / (k - kappa)
    });
    let mut m = C64::new(0.0, 1.0) / (2.0 * PI) * line;
    let crossed = kappa.re > 0.0 && kappa.im < 0.0 && kappa.re > -kappa.im;
    if crossed {
        // exp(-i kappa^2 t) without forming the exponent naively
        let i = C64::new(0.0, 1.0);
        let z = -e * kappa * t.sqrt();
        m += exp_neg_z_sq(i * z);
    }
    Ok(m)
}

/// The integral remainder I(r, r'; t) of the split propagator as a contour
/// integral: (i/2pi) int_Cl G+(r, r'; k) exp(-i k^2 t) 2k dk.
pub fn integral_term_quadrature(
    params: &ModelParams,
    r: f64,
    rp: f64,
    t: f64,
    n: usize,
) -> Result<C64> {
    if !(t > 0.0) {
        return Err(Error::Domain(format!("contour quadrature needs t > 0, got {t}")));
    }
    let e = line_direction();
    let w = half_width(t);
    let rule = Rule::on(n, -w, w);
    let mut err = None;
    let line = rule.integrate(|s| {
        let k = e * s;
        match greens_outgoing(r, rp, k, params) {
            Ok(g) => e * g * (-s * s * t).exp() * 2.0 * k,
            Err(x) => {
                err = Some(x);
                C64::new(0.0, 0.0)
            }
        }
    });
    match err {
        Some(x) => Err(x),
        None => Ok(C64::new(0.0, 1.0) / (2.0 * PI) * line),
    }
}

/// Single-particle evolution of box state s by the truncation-free contour
/// route: proper-pole exponentials plus the quadrature of the remainder
/// integral with the box state folded in under the closed-form Green's
/// function. Unlike the resonant expansions this has no basis-size error,
/// which makes it the long-time reference.
pub fn evolve_single_contour(
    basis: &ResonantBasis,
    s: usize,
    r: f64,
    t: f64,
    n: usize,
) -> Result<C64> {
    if !(t > 0.0) {
        return Err(Error::Domain(format!("contour quadrature needs t > 0, got {t}")));
    }
    let params = &basis.params;
    let i = C64::new(0.0, 1.0);
    let e = line_direction();
    let mut psi = C64::new(0.0, 0.0);
    for p in 1..=basis.len() as i32 {
        let kappa = basis.kappa(p);
        let z = -e * kappa * t.sqrt();
        psi += overlap_c(basis, p, s) * basis.u(p, r) * exp_neg_z_sq(i * z);
    }
    let inner = Rule::on(96, 0.0, params.a);
    let w = half_width(t);
    let rule = Rule::on(n, -w, w);
    let mut err = None;
    let line = rule.integrate(|sigma| {
        let k = e * sigma;
        let folded = inner.integrate(|y| {
            let state = box_state_value(s, y, params.a).unwrap();
            match greens_outgoing(r, y, k, params) {
                Ok(g) => g * state,
                Err(x) => {
                    err = Some(x);
                    C64::new(0.0, 0.0)
                }
            }
        });
        e * folded * (-sigma * sigma * t).exp() * 2.0 * k
    });
    match err {
        Some(x) => Err(x),
        None => Ok(psi + i / (2.0 * PI) * line),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use super::super::free::{evolve_free_single, free_propagator};
    use crate::poles::{ModelParams, ResonantBasis};
    use crate::propagator::{evolve_single, propagator_split, PropagatorForm};
    use crate::special::moshinsky;

    #[test]
    fn moshinsky_quadrature_matches_faddeyeva_route() {
        let basis = ResonantBasis::build(ModelParams::new(6.0, 1.0, 20).unwrap()).unwrap();
        let t = 10.0 * basis.tau1();
        for p in [1i32, 2, -1] {
            let kappa = basis.kappa(p);
            let direct = moshinsky(kappa, t).unwrap();
            let quad = moshinsky_quadrature(kappa, t, 600).unwrap();
            assert!(
                (direct - quad).norm() <= 1e-12 * direct.norm().max(1e-15),
                "pole {p}: {direct} vs {quad}"
            );
        }
    }

    #[test]
    fn free_case_reproduces_image_kernel() {
        // lambda = 0 has no poles, so the contour integral is the entire
        // propagator; this pins the i/(2 pi) prefactor exactly
        let params = ModelParams::new(0.0, 1.0, 1).unwrap();
        for &(r, rp, t) in &[(0.3, 0.7, 2.0), (0.5, 0.2, 0.8)] {
            let contour = integral_term_quadrature(&params, r, rp, t, 800).unwrap();
            let exact = free_propagator(r, rp, t).unwrap();
            assert!(
                (contour - exact).norm() <= 1e-12 * exact.norm(),
                "({r},{rp},{t}): {contour} vs {exact}"
            );
        }
    }

    #[test]
    fn contour_evolution_free_limit() {
        let free = ResonantBasis::build(ModelParams::new(0.0, 1.0, 1).unwrap()).unwrap();
        for &(s, r, t) in &[(1usize, 0.4, 1.5), (6, 0.7, 3.0)] {
            let contour = evolve_single_contour(&free, s, r, t, 800).unwrap();
            let kernel = evolve_free_single(s, 1.0, r, t).unwrap();
            assert!(
                (contour - kernel).norm() <= 1e-10 * kernel.norm().max(1e-12),
                "(s={s}, r={r}, t={t}): {contour} vs {kernel}"
            );
        }
    }

    #[test]
    fn contour_evolution_matches_pole_expansion_at_moderate_time() {
        // at one lifetime the truncated expansion is still accurate, so the
        // two independent routes must meet there
        let basis = ResonantBasis::build(ModelParams::new(6.0, 1.0, 20).unwrap()).unwrap();
        let t = basis.tau1();
        for &(s, r) in &[(1usize, 0.4), (6, 0.7)] {
            let contour = evolve_single_contour(&basis, s, r, t, 800).unwrap();
            let expansion = evolve_single(&basis, s, r, t, PropagatorForm::Exact).unwrap();
            let rel = (contour - expansion).norm() / contour.norm();
            assert!(rel <= 2e-3, "(s={s}, r={r}): relative deviation {rel}");
        }
    }

    #[test]
    fn split_remainder_converges_toward_contour_value() {
        // the truncated pole-sum form of I converges slowly in N; the check
        // is the monotone trend toward the contour value, not pointwise
        // equality at N = 20
        let (r, rp, t) = (0.37, 0.81, 2.0);
        let contour = {
            let params = ModelParams::new(6.0, 1.0, 20).unwrap();
            integral_term_quadrature(&params, r, rp, t, 800).unwrap()
        };
        let mut prev = f64::INFINITY;
        for n in [20usize, 100, 400] {
            let basis = ResonantBasis::build(ModelParams::new(6.0, 1.0, n).unwrap()).unwrap();
            let split = propagator_split(&basis, r, rp, t).unwrap().integral;
            let rel = (split - contour).norm() / contour.norm();
            assert!(rel < prev, "no improvement at N = {n}: {rel} after {prev}");
            prev = rel;
        }
    }
}
