//! Extended-precision Faddeyeva reference, independent of the production
//! trapezoidal-rule evaluation. Small arguments use the entire-function
//! series w(z) = exp(-z^2) + sum_m (iz)^(2m+1) / Gamma(m + 3/2) carried in
//! double-double arithmetic to absorb its cancellation; large arguments use
//! the Laplace continued fraction.

use super::dd::{Cdd, Dd};
use crate::error::{Error, Result};
use crate::C64;

const SERIES_RADIUS: f64 = 6.0;
const CF_DEPTH: usize = 240;

fn dd_pi() -> Dd {
    Dd::new(std::f64::consts::PI, 1.224_646_799_147_353_2e-16)
}

fn w_series(z: Cdd) -> Cdd {
    let iz = Cdd::new(-z.im, z.re);
    let neg_z_sq = -(z * z);
    let mut sum = neg_z_sq.exp();
    // odd part: term_0 = iz * 2/sqrt(pi), term_{m+1} = term_m * (-z^2)/(m+3/2)
    let two_over_sqrt_pi = (Dd::from_f64(4.0) / dd_pi()).sqrt();
    let mut term = iz.scale(two_over_sqrt_pi);
    for m in 0..400 {
        sum = sum + term;
        term = term * neg_z_sq;
        term = term.scale(Dd::ONE / Dd::from_f64(m as f64 + 1.5));
        if term.norm_sqr_f64() < 1e-76 * sum.norm_sqr_f64().max(1e-300) {
            break;
        }
    }
    sum
}

fn w_continued_fraction(z: Cdd) -> Cdd {
    let mut f = Cdd::ZERO;
    for n in (1..=CF_DEPTH).rev() {
        f = Cdd::new(Dd::from_f64(n as f64 * 0.5), Dd::ZERO) / (z - f);
    }
    let i_over_sqrt_pi = Cdd::new(Dd::ZERO, Dd::ONE / dd_pi().sqrt());
    i_over_sqrt_pi / (z - f)
}

fn w_upper_ref(z: Cdd) -> Cdd {
    // Near the imaginary axis exp(-z^2) grows like exp(y^2 - x^2) and its
    // double-double rounding dominates the series error, so that wedge goes
    // to the continued fraction too; there |z| >= sqrt(20), where the
    // fraction has fully converged.
    let (x, y) = (z.re.to_f64(), z.im.to_f64());
    let exp_growth = (y - x) * (y + x);
    if z.norm_sqr_f64() <= SERIES_RADIUS * SERIES_RADIUS && exp_growth < 20.0 {
        w_series(z)
    } else {
        w_continued_fraction(z)
    }
}

/// Reference w(z) accurate to ~1e-15 relative or better.
pub fn faddeyeva_reference(z: C64) -> Result<C64> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::NonFinite("faddeyeva_reference"));
    }
    let zd = Cdd::from_c64(z);
    let w = if z.im >= 0.0 {
        w_upper_ref(zd)
    } else {
        // w(z) = 2 exp(-z^2) - w(-z)
        let refl = (-(zd * zd)).exp().scale(Dd::from_f64(2.0));
        refl - w_upper_ref(-zd)
    };
    Ok(w.to_c64())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_residual_extended_precision() {
        for &(x, y) in &[(0.3, 0.2), (2.0, 1.0), (4.5, 0.01), (5.9, -0.5), (9.0, 0.1), (0.05, 8.0)] {
            let z = C64::new(x, y);
            let wp = faddeyeva_reference(z).unwrap();
            let wm = faddeyeva_reference(-z).unwrap();
            let zd = Cdd::from_c64(z);
            let rhs = (-(zd * zd)).exp().scale(Dd::from_f64(2.0)).to_c64();
            // the identity cancels two O(|w|) values, so rounding of the
            // returned doubles bounds the residual by ulps of |w|, not |rhs|
            let scale = wp.norm().max(wm.norm()).max(rhs.norm());
            assert!(
                ((wp + wm) - rhs).norm() <= 1e-14 * scale,
                "identity residual too large at {z}"
            );
        }
    }

    #[test]
    fn series_and_cf_agree_at_region_boundary() {
        // radius handoff, at angles outside the exp-growth wedge (there the
        // series hits the rounding of the huge exp(-z^2) and is not used)
        for arg_deg in [3.0f64, 40.0, 130.0, 178.0] {
            let th = arg_deg.to_radians();
            let z = Cdd::from_c64(C64::from_polar(6.3, th));
            let s = w_series(z).to_c64();
            let c = w_continued_fraction(z).to_c64();
            assert!((s - c).norm() <= 2e-14 * c.norm(), "mismatch at arg {arg_deg}");
        }
        // wedge handoff: points just inside the series side of y^2 - x^2 = 20
        for x in [0.5f64, 1.0, 2.0] {
            let z = Cdd::from_c64(C64::new(x, (x * x + 19.0).sqrt()));
            let s = w_series(z).to_c64();
            let c = w_continued_fraction(z).to_c64();
            assert!((s - c).norm() <= 5e-14 * c.norm(), "mismatch at x = {x}");
        }
    }

    #[test]
    fn known_values() {
        let w0 = faddeyeva_reference(C64::new(0.0, 0.0)).unwrap();
        assert!((w0 - C64::new(1.0, 0.0)).norm() < 1e-16);
        // w(i) = e * erfc(1)
        let wi = faddeyeva_reference(C64::new(0.0, 1.0)).unwrap();
        assert!((wi - C64::new(0.427_583_576_155_807, 0.0)).norm() < 1e-15);
    }
}
