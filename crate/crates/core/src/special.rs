//! Faddeyeva (complex error) function and the Moshinsky function built on it.
//!
//! The Faddeyeva function w(z) = exp(-z^2) erfc(-iz) is evaluated in the
//! upper half plane by the trapezoidal discretization of its Cauchy-integral
//! representation with a residue correction for the pole near the real axis.
//! Two interleaved node families (integer and half-integer multiples of the
//! step) are used so that the evaluation point is never close to a node.
//! The lower half plane uses the reflection w(z) = 2 exp(-z^2) - w(-z).

use crate::error::{Error, Result};
use crate::C64;
use std::f64::consts::PI;

/// Number of node pairs of the trapezoidal rule.
const M: usize = 16;

fn step() -> f64 {
    (PI / (M as f64 + 1.0)).sqrt()
}

/// exp(-z^2) with the real and imaginary parts of the exponent handled
/// separately, so that phase accuracy survives |Im z^2| up to ~1e15 and the
/// magnitude only overflows where the true value does.
pub fn exp_neg_z_sq(z: C64) -> C64 {
    let (x, y) = (z.re, z.im);
    // Re(-z^2) = (y-x)(y+x), Im(-z^2) = -2xy
    let re = (y - x) * (y + x);
    let im = -2.0 * x * y;
    let mag = re.exp();
    C64::new(mag * im.cos(), mag * im.sin())
}

fn w_upper(z: C64) -> C64 {
    let h = step();
    let (x, y) = (z.re, z.im);
    debug_assert!(y >= 0.0);
    // Pick the node family farther from Re z.
    let s = x / h;
    let near_integer_node = (s - s.round()).abs() < 0.25;
    let mut sum = C64::new(0.0, 0.0);
    if near_integer_node {
        // midpoint nodes (k + 1/2) h
        for k in 0..M {
            let t = (k as f64 + 0.5) * h;
            let g = (-t * t).exp();
            sum += g / (z - t) + g / (z + t);
        }
    } else {
        // integer nodes k h
        sum += 1.0 / z;
        for k in 1..=M {
            let t = k as f64 * h;
            let g = (-t * t).exp();
            sum += g / (z - t) + g / (z + t);
        }
    }
    let mut w = C64::new(0.0, h / PI) * sum;
    // Residue correction for the pole of the integrand between the real axis
    // and the shifted contour of the error analysis; beyond y = pi/h it is
    // absent (and would overflow if formed naively).
    if y < PI / h {
        let expo = C64::new(0.0, -2.0 * PI / h) * z;
        let den = if near_integer_node {
            1.0 + expo.exp()
        } else {
            1.0 - expo.exp()
        };
        w += 2.0 * exp_neg_z_sq(z) / den;
    }
    w
}

/// Faddeyeva function w(z) = exp(-z^2) erfc(-iz).
pub fn faddeyeva(z: C64) -> Result<C64> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::NonFinite("faddeyeva"));
    }
    if z.im >= 0.0 {
        Ok(w_upper(z))
    } else {
        Ok(2.0 * exp_neg_z_sq(z) - w_upper(-z))
    }
}

/// Argument bundle of the Moshinsky function: z = -exp(-i pi/4) kappa sqrt(t).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MoshinskyArgument {
    pub kappa: C64,
    pub t: f64,
    pub z: C64,
}

impl MoshinskyArgument {
    pub fn new(kappa: C64, t: f64) -> Result<Self> {
        if !(t >= 0.0) {
            return Err(Error::Domain(format!("moshinsky requires t >= 0, got {t}")));
        }
        Ok(Self { kappa, t, z: Self::z_of(kappa, t) })
    }

    pub fn z_of(kappa: C64, t: f64) -> C64 {
        -C64::from_polar(1.0, -PI / 4.0) * kappa * t.sqrt()
    }

    /// Residual of the arg-consistency invariant.
    pub fn consistency_defect(&self) -> f64 {
        (self.z - Self::z_of(self.kappa, self.t)).norm()
    }
}

/// Moshinsky function M(z) = w(iz)/2 at z = -exp(-i pi/4) kappa sqrt(t).
pub fn moshinsky(kappa: C64, t: f64) -> Result<C64> {
    let arg = MoshinskyArgument::new(kappa, t)?;
    moshinsky_at(arg.z)
}

/// M evaluated directly at a given argument z.
pub fn moshinsky_at(z: C64) -> Result<C64> {
    Ok(0.5 * faddeyeva(C64::new(0.0, 1.0) * z)?)
}

/// The pieces of the pairing identity M(z) + M(-z) = exp(-i kappa^2 t),
/// returned together so callers can regroup the propagator without
/// catastrophic cancellation: (M(z), exp(-i kappa^2 t), M(-z)).
pub struct MoshinskyPair {
    pub m_plus: C64,
    pub phase: C64,
    pub m_minus: C64,
}

pub fn moshinsky_pair(kappa: C64, t: f64) -> Result<MoshinskyPair> {
    let arg = MoshinskyArgument::new(kappa, t)?;
    let m_plus = moshinsky_at(arg.z)?;
    let m_minus = moshinsky_at(-arg.z)?;
    // exp(-i kappa^2 t) = exp(z^2)
    let phase = exp_neg_z_sq(C64::new(0.0, 1.0) * arg.z);
    Ok(MoshinskyPair { m_plus, phase, m_minus })
}
