//! Infinite-box initial states and the closed-form overlap coefficients the
//! resonance expansions need: C_{n,s}, the moments D_s and G_s, the pairwise
//! resonant overlaps U_{pq} and the coefficient sum rule.

use crate::error::{Error, Result};
use crate::poles::ResonantBasis;
use crate::C64;
use std::collections::BTreeMap;
use std::f64::consts::PI;

/// Box eigenstate sqrt(2/a) sin(s pi y / a) on [0, a].
pub fn box_state_value(s: usize, y: f64, a: f64) -> Result<f64> {
    if s < 1 {
        return Err(Error::Domain("box index must be >= 1".into()));
    }
    if !(0.0..=a).contains(&y) {
        return Err(Error::Domain(format!("y = {y} outside [0, {a}]")));
    }
    Ok((2.0 / a).sqrt() * (s as f64 * PI * y / a).sin())
}

/// sin(x a) / (2 x) with the removable singularity at x = 0 expanded in
/// series when |x a| < 1e-4; the series error there is below 1e-13.
fn sinratio(x: C64, a: f64) -> C64 {
    let xa = x * a;
    if xa.norm() < 1e-4 {
        let w = xa * xa;
        0.5 * a * (1.0 - w / 6.0 + w * w / 120.0)
    } else {
        xa.sin() / (2.0 * x)
    }
}

/// C_{p,s} = int_0^a u_p(y) psi_s(y) dy in closed form, signed pole index.
pub fn overlap_c(basis: &ResonantBasis, p: i32, s: usize) -> C64 {
    let a = basis.params.a;
    let omega = C64::new(s as f64 * PI / a, 0.0);
    let kappa = basis.kappa(p);
    basis.amplitude(p) * (2.0 / a).sqrt() * (sinratio(kappa - omega, a) - sinratio(kappa + omega, a))
}

/// D_s = int_0^a y psi_s(y) dy = sqrt(2/a) a^2 (-1)^{s+1} / (s pi).
pub fn moment_d(s: usize, a: f64) -> f64 {
    let sign = if s % 2 == 1 { 1.0 } else { -1.0 };
    (2.0 / a).sqrt() * a * a * sign / (s as f64 * PI)
}

/// G_s = int_0^a y^3 psi_s(y) dy = sqrt(2/a) (-1)^{s+1} (a^3/w - 6a/w^3),
/// w = s pi / a.
pub fn moment_g(s: usize, a: f64) -> f64 {
    let sign = if s % 2 == 1 { 1.0 } else { -1.0 };
    let w = s as f64 * PI / a;
    (2.0 / a).sqrt() * sign * (a.powi(3) / w - 6.0 * a / w.powi(3))
}

/// U_{pq} = int_0^a u_p(r) u_q(r) dr in closed form, signed pole indices;
/// the p = q limit is covered by the sinratio series branch.
pub fn overlap_u(basis: &ResonantBasis, p: i32, q: i32) -> C64 {
    let a = basis.params.a;
    let (kp, kq) = (basis.kappa(p), basis.kappa(q));
    basis.amplitude(p) * basis.amplitude(q) * (sinratio(kp - kq, a) - sinratio(kp + kq, a))
}

/// |Re sum_{n=1}^N C_{n,s}^2 - 1|, the truncation diagnostic of the
/// coefficient sum rule (C-bar = C for real box states).
pub fn sum_rule_defect(basis: &ResonantBasis, s: usize) -> f64 {
    let total: C64 = (1..=basis.len() as i32).map(|p| {
        let c = overlap_c(basis, p, s);
        c * c
    }).sum();
    (total.re - 1.0).abs()
}

/// Imaginary part of the truncated sum-rule sum, reported as a diagnostic
/// only; no tolerance is asserted on it.
pub fn sum_rule_imaginary(basis: &ResonantBasis, s: usize) -> f64 {
    let total: C64 = (1..=basis.len() as i32).map(|p| {
        let c = overlap_c(basis, p, s);
        c * c
    }).sum();
    total.im
}

/// Cached overlap tables over the signed pole set; immutable once built.
#[derive(Debug, Clone)]
pub struct OverlapSet {
    n: usize,
    c: BTreeMap<usize, Vec<C64>>,
    u: Vec<C64>,
}

impl OverlapSet {
    /// Array slot of signed index p in the order -N..-1, 1..N.
    fn slot(&self, p: i32) -> usize {
        debug_assert!(p != 0 && p.unsigned_abs() as usize <= self.n);
        if p < 0 {
            (p + self.n as i32) as usize
        } else {
            self.n + p as usize - 1
        }
    }

    pub fn build(basis: &ResonantBasis, box_indices: &[usize]) -> Self {
        let n = basis.len();
        let mut set = OverlapSet { n, c: BTreeMap::new(), u: vec![C64::new(0.0, 0.0); (2 * n) * (2 * n)] };
        let signed: Vec<i32> = basis.signed_indices().collect();
        for &s in box_indices {
            let col: Vec<C64> = signed.iter().map(|&p| overlap_c(basis, p, s)).collect();
            set.c.insert(s, col);
        }
        for &p in &signed {
            for &q in &signed {
                let (i, j) = (set.slot(p), set.slot(q));
                set.u[i * 2 * n + j] = overlap_u(basis, p, q);
            }
        }
        set
    }

    pub fn n_poles(&self) -> usize {
        self.n
    }

    pub fn c(&self, p: i32, s: usize) -> C64 {
        self.c[&s][self.slot(p)]
    }

    pub fn u(&self, p: i32, q: i32) -> C64 {
        self.u[self.slot(p) * 2 * self.n + self.slot(q)]
    }

    /// int_0^a u_p conj(u_q) dr = U_{p,-q}, the kernel of the nonescape
    /// contraction; Hermitian in (p, q).
    pub fn k(&self, p: i32, q: i32) -> C64 {
        self.u(p, -q)
    }
}
