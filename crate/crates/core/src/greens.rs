//! Analytic outgoing Green's function of the delta-shell potential, its odd
//! k-derivatives at k = 0, and the steepest-descent prefactors eta_m that
//! multiply those derivatives in the long-time expansion.

use crate::error::{Error, Result};
use crate::poles::ModelParams;
use crate::C64;
use std::f64::consts::PI;

/// G+(r, r'; k) for the delta shell, interior arguments. The printed formula
/// assumes r <= r'; symmetry of Green's functions is the contract, so the
/// arguments are ordered internally.
pub fn greens_outgoing(r: f64, rp: f64, k: C64, params: &ModelParams) -> Result<C64> {
    let a = params.a;
    if !(0.0..=a).contains(&r) || !(0.0..=a).contains(&rp) {
        return Err(Error::Domain(format!("(r, r') = ({r}, {rp}) outside [0, {a}]^2")));
    }
    if r == a && rp == a {
        return Err(Error::Domain("the point r = r' = a is excluded".into()));
    }
    let (lo, hi) = if r <= rp { (r, rp) } else { (rp, r) };
    let lam = params.lambda;
    let i = C64::new(0.0, 1.0);
    let eika = (i * k * a).exp();
    let den = 1.0 + (lam / k) * (k * a).sin() * eika;
    if den.norm() < 1e-13 {
        return Err(Error::Domain(format!("k = {k} within 1e-13 of a pole of G+")));
    }
    let num = (i * k * hi).exp() - (lam / k) * (k * (hi - a)).sin() * eika;
    Ok(-(k * lo).sin() / k * (num / den))
}

/// Denominator of G+; its zeros coincide with the pole-equation roots.
pub fn greens_denominator(k: C64, params: &ModelParams) -> C64 {
    let i = C64::new(0.0, 1.0);
    1.0 + (params.lambda / k) * (k * params.a).sin() * (i * k * params.a).exp()
}

/// First, third and fifth k-derivatives of G+ at k = 0 for fixed (r, r'),
/// with the polynomial coefficients h1..h4 in lambda and a.
#[derive(Debug, Clone, Copy)]
pub struct GreensDerivatives {
    pub d1: C64,
    pub d3: C64,
    pub d5: C64,
    pub h1: f64,
    pub h2: f64,
    pub h3: f64,
    pub h4: f64,
}

pub fn h_coefficients(params: &ModelParams) -> (f64, f64, f64, f64) {
    let (l, a) = (params.lambda, params.a);
    let h1 = (1.0 + l * a).powi(2);
    let h2 = 8.0 * l * a.powi(3) + 2.0 * l * l * a.powi(4);
    let h3 = -120.0 * l.powi(3) * a.powi(5)
        - 80.0 * l * a.powi(3)
        - 20.0 * l.powi(4) * a.powi(6)
        - 180.0 * l * l * a.powi(4);
    let h4 = 192.0 * l.powi(3) * a.powi(7) - 96.0 * l * a.powi(5)
        + 24.0 * l.powi(4) * a.powi(8)
        + 432.0 * l * l * a.powi(6);
    (h1, h2, h3, h4)
}

pub fn greens_derivatives_at_zero(r: f64, rp: f64, params: &ModelParams) -> Result<GreensDerivatives> {
    let a = params.a;
    if !(0.0..=a).contains(&r) || !(0.0..=a).contains(&rp) {
        return Err(Error::Domain(format!("(r, r') = ({r}, {rp}) outside [0, {a}]^2")));
    }
    if r == a && rp == a {
        return Err(Error::Domain("the point r = r' = a is excluded".into()));
    }
    let (h1, h2, h3, h4) = h_coefficients(params);
    let i = C64::new(0.0, 1.0);
    let rr = r * rp;
    let sq = r * r + rp * rp;
    let d1 = -i * rr / h1;
    let d3 = i * rr * (h1 * sq - h2) / (h1 * h1);
    let d5 = -i * rr / (3.0 * h1.powi(3))
        * (h1 * h1 * (3.0 * r.powi(4) + 3.0 * rp.powi(4) + 10.0 * rr * rr) + h3 * sq + h4);
    Ok(GreensDerivatives { d1, d3, d5, h1, h2, h3, h4 })
}

/// Steepest-descent prefactors of the t^{-(2m+1)/2} terms:
/// eta_1 = 1/sqrt(4 pi i), eta_2 = -sqrt(i/(64 pi)),
/// eta_3 = -1/sqrt(4096 pi i), all on the principal square-root branch.
#[derive(Debug, Clone, Copy)]
pub struct AsymptoticCoefficients {
    pub eta1: C64,
    pub eta2: C64,
    pub eta3: C64,
}

impl AsymptoticCoefficients {
    pub fn standard() -> Self {
        let sp = PI.sqrt();
        AsymptoticCoefficients {
            eta1: C64::from_polar(1.0 / (2.0 * sp), -PI / 4.0),
            eta2: -C64::from_polar(1.0 / (8.0 * sp), PI / 4.0),
            eta3: -C64::from_polar(1.0 / (64.0 * sp), -PI / 4.0),
        }
    }

    pub fn eta(&self, m: usize) -> C64 {
        match m {
            1 => self.eta1,
            2 => self.eta2,
            3 => self.eta3,
            _ => panic!("eta_m defined for m in 1..=3"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poles::{solve_poles, ModelParams};

    fn delta_shell() -> ModelParams {
        ModelParams::new(6.0, 1.0, 20).unwrap()
    }

    #[test]
    fn free_particle_limit() {
        let free = ModelParams::new(0.0, 1.0, 1).unwrap();
        for &(r, rp) in &[(0.2, 0.9), (0.9, 0.2), (0.5, 0.5)] {
            let k = C64::new(1.7, 0.3);
            let g = greens_outgoing(r, rp, k, &free).unwrap();
            let (lo, hi) = if r <= rp { (r, rp) } else { (rp, r) };
            let i = C64::new(0.0, 1.0);
            let expect = -(k * lo).sin() * (i * k * hi).exp() / k;
            assert!((g - expect).norm() < 1e-14 * expect.norm());
        }
    }

    #[test]
    fn symmetry_in_arguments() {
        let params = delta_shell();
        let k = C64::new(2.3, -0.4);
        let g1 = greens_outgoing(0.25, 0.85, k, &params).unwrap();
        let g2 = greens_outgoing(0.85, 0.25, k, &params).unwrap();
        assert_eq!(g1, g2);
    }

    #[test]
    fn fixture_at_real_k() {
        // frozen after cross-checking against the pole-sum representation
        let g = greens_outgoing(0.3, 0.7, C64::new(2.0, 0.0), &delta_shell()).unwrap();
        let expect = C64::new(-0.289_930_975_982_411_4, -0.045_084_085_408_580_936);
        assert!((g - expect).norm() < 1e-12);
    }

    #[test]
    fn denominator_zeros_are_pole_roots() {
        let params = delta_shell();
        let poles = solve_poles(&params).unwrap();
        for p in poles.iter().take(6) {
            let den = greens_denominator(p.kappa, &params);
            assert!(den.norm() < 1e-10, "denominator {den} at pole {}", p.kappa);
        }
        // and evaluation right at a pole is rejected
        assert!(greens_outgoing(0.3, 0.7, poles[0].kappa, &params).is_err());
    }

    #[test]
    fn domain_violations_rejected() {
        let params = delta_shell();
        let k = C64::new(1.0, 0.0);
        assert!(greens_outgoing(-0.1, 0.5, k, &params).is_err());
        assert!(greens_outgoing(0.5, 1.2, k, &params).is_err());
        assert!(greens_outgoing(1.0, 1.0, k, &params).is_err());
        assert!(greens_derivatives_at_zero(1.0, 1.0, &params).is_err());
    }

    #[test]
    fn first_derivative_closed_form() {
        let params = delta_shell();
        let h1 = (1.0 + params.lambda * params.a).powi(2);
        for &(r, rp) in &[(0.17, 0.62), (0.8, 0.33), (0.5, 0.5)] {
            let d = greens_derivatives_at_zero(r, rp, &params).unwrap();
            let scaled = d.d1 * h1 / (r * rp);
            assert!((scaled - C64::new(0.0, -1.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn third_derivative_free_limit() {
        let free = ModelParams::new(0.0, 1.0, 1).unwrap();
        let (r, rp) = (0.4, 0.7);
        let d = greens_derivatives_at_zero(r, rp, &free).unwrap();
        assert_eq!(d.h1, 1.0);
        assert_eq!(d.h2, 0.0);
        let expect = C64::new(0.0, 1.0) * r * rp * (r * r + rp * rp);
        assert!((d.d3 - expect).norm() < 1e-14);
    }

    #[test]
    fn derivatives_match_finite_differences() {
        // Richardson-extrapolated central differences of G+ in k around 0
        let params = delta_shell();
        let pairs = [(0.31, 0.67), (0.12, 0.88), (0.55, 0.44)];
        for &(r, rp) in &pairs {
            let d = greens_derivatives_at_zero(r, rp, &params).unwrap();
            let g = |k: f64| greens_outgoing(r, rp, C64::new(k, 0.0), &params).unwrap();
            let fd1 = |h: f64| (g(h) - g(-h)) / (2.0 * h);
            let fd3 = |h: f64| (g(2.0 * h) - 2.0 * g(h) + 2.0 * g(-h) - g(-2.0 * h)) / (2.0 * h.powi(3));
            let rich = |f: &dyn Fn(f64) -> C64, h: f64| {
                // two-level Richardson for O(h^2) central stencils
                (4.0 * f(h / 2.0) - f(h)) / 3.0
            };
            let e1 = (rich(&fd1, 1e-3) - d.d1).norm() / d.d1.norm();
            let e3 = (rich(&fd3, 2e-2) - d.d3).norm() / d.d3.norm();
            assert!(e1 < 1e-8, "d1 relative error {e1} at ({r},{rp})");
            assert!(e3 < 1e-6, "d3 relative error {e3} at ({r},{rp})");
        }
    }

    #[test]
    fn eta_constants() {
        let eta = AsymptoticCoefficients::standard();
        assert!((eta.eta1.norm() - 1.0 / (4.0 * PI).sqrt()).abs() < 1e-16);
        // eta_1^2 = 1/(4 pi i) = -i/(4 pi)
        let sq = eta.eta1 * eta.eta1;
        assert!((sq - C64::new(0.0, -1.0 / (4.0 * PI))).norm() < 1e-17);
        // eta_2^2 = i/(64 pi)
        let sq2 = eta.eta2 * eta.eta2;
        assert!((sq2 - C64::new(0.0, 1.0 / (64.0 * PI))).norm() < 1e-17);
        // eta_3^2 = 1/(4096 pi i) = -i/(4096 pi)
        let sq3 = eta.eta3 * eta.eta3;
        assert!((sq3 - C64::new(0.0, -1.0 / (4096.0 * PI))).norm() < 1e-18);
        // the antisymmetric t^-5 prefactor collapses to -i/(96 pi)
        let combo = eta.eta2 * eta.eta2 - 10.0 * eta.eta1 * eta.eta3 / 3.0;
        assert!((combo - C64::new(0.0, -1.0 / (96.0 * PI))).norm() < 1e-17);
    }
}
