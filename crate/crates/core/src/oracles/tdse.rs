//! Crank-Nicolson grid solution of the time-dependent Schrodinger equation
//! with the delta shell regularized as a narrow rectangular barrier; the
//! cross-method check that is fully independent of the resonance formalism.

use crate::error::{Error, Result};
use crate::overlaps::box_state_value;
use crate::poles::ModelParams;
use crate::C64;
use std::f64::consts::PI;

/// Grid and regularization parameters of the solver.
#[derive(Debug, Clone, Copy)]
pub struct GridTdseSpec {
    pub domain_length: f64,
    pub dx: f64,
    pub dt: f64,
    /// Width of the rectangular barrier standing in for the delta; its
    /// height is lambda / width so the integrated strength is lambda.
    pub barrier_width: f64,
}

impl GridTdseSpec {
    pub fn validate(&self, params: &ModelParams, s: usize, t_max: f64) -> Result<()> {
        if !(self.dx > 0.0 && self.dt > 0.0 && self.barrier_width > 0.0) {
            return Err(Error::InvalidSpec("grid steps and width must be positive".into()));
        }
        if self.barrier_width < 2.0 * self.dx {
            return Err(Error::InvalidSpec(format!(
                "barrier width {} under-resolved at dx = {}",
                self.barrier_width, self.dx
            )));
        }
        // keep the escaping flux from reflecting back off the far wall
        let k_max = (s as f64 + 2.0) * PI / params.a;
        let needed = params.a + 2.0 * k_max * t_max;
        if self.domain_length < needed {
            return Err(Error::InvalidSpec(format!(
                "domain length {} too short; reflections reach r <= a before t = {t_max} \
                 (need >= {needed:.1})",
                self.domain_length
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct TdseResult {
    pub times: Vec<f64>,
    pub survival: Vec<f64>,
}

/// Evolve a box initial state s under the regularized delta shell and
/// sample the single-particle survival probability at the given times.
pub fn tdse_single_particle(
    params: &ModelParams,
    s: usize,
    spec: &GridTdseSpec,
    t_samples: &[f64],
) -> Result<TdseResult> {
    let t_max = t_samples.iter().cloned().fold(0.0, f64::max);
    spec.validate(params, s, t_max)?;
    let a = params.a;
    let n = (spec.domain_length / spec.dx).round() as usize;
    let dx = spec.domain_length / n as f64;
    let m = n - 1; // interior points, Dirichlet walls at both ends
    let half_w = spec.barrier_width / 2.0;
    let height = params.lambda / spec.barrier_width;

    let mut psi = vec![C64::new(0.0, 0.0); m];
    let mut v = vec![0.0f64; m];
    for j in 0..m {
        let r = (j + 1) as f64 * dx;
        if r <= a {
            psi[j] = C64::new(box_state_value(s, r, a)?, 0.0);
        }
        if (r - a).abs() <= half_w {
            v[j] = height;
        }
    }
    let norm0: f64 = psi.iter().map(|p| p.norm_sqr()).sum::<f64>() * dx;
    let scale = norm0.sqrt();
    for p in psi.iter_mut() {
        *p /= scale;
    }
    let psi0: Vec<f64> = psi.iter().map(|p| p.re).collect();

    // Crank-Nicolson: (I + i dt/2 H) psi' = (I - i dt/2 H) psi with H the
    // standard three-point Laplacian plus the barrier. The left matrix is
    // constant, so its Thomas elimination coefficients are precomputed.
    let alpha = C64::new(0.0, spec.dt / 2.0);
    let off = -alpha / (dx * dx);
    let diag: Vec<C64> = v.iter().map(|&vj| 1.0 + alpha * (2.0 / (dx * dx) + vj)).collect();
    let bdiag: Vec<C64> = v.iter().map(|&vj| 1.0 - alpha * (2.0 / (dx * dx) + vj)).collect();
    let boff = -off;
    let mut cprime = vec![C64::new(0.0, 0.0); m];
    let mut denom = vec![C64::new(0.0, 0.0); m];
    denom[0] = diag[0];
    cprime[0] = off / denom[0];
    for j in 1..m {
        denom[j] = diag[j] - off * cprime[j - 1];
        cprime[j] = off / denom[j];
    }

    let survival = |psi: &[C64]| -> f64 {
        let mut amp = C64::new(0.0, 0.0);
        for j in 0..m {
            let r = (j + 1) as f64 * dx;
            if r > a {
                break;
            }
            amp += psi0[j] * psi[j];
        }
        (amp * dx).norm_sqr()
    };

    let mut samples: Vec<f64> = t_samples.to_vec();
    samples.sort_by(f64::total_cmp);
    let mut out = TdseResult { times: Vec::new(), survival: Vec::new() };
    let mut rhs = vec![C64::new(0.0, 0.0); m];
    let mut dprime = vec![C64::new(0.0, 0.0); m];
    let mut t = 0.0;
    let mut norm_prev = dx * psi.iter().map(|p| p.norm_sqr()).sum::<f64>();
    let mut next = 0usize;
    while next < samples.len() {
        if t + 0.5 * spec.dt >= samples[next] {
            out.times.push(t);
            out.survival.push(survival(&psi));
            next += 1;
            continue;
        }
        for j in 0..m {
            let left = if j > 0 { psi[j - 1] } else { C64::new(0.0, 0.0) };
            let right = if j + 1 < m { psi[j + 1] } else { C64::new(0.0, 0.0) };
            rhs[j] = bdiag[j] * psi[j] + boff * (left + right);
        }
        dprime[0] = rhs[0] / denom[0];
        for j in 1..m {
            dprime[j] = (rhs[j] - off * dprime[j - 1]) / denom[j];
        }
        psi[m - 1] = dprime[m - 1];
        for j in (0..m - 1).rev() {
            psi[j] = dprime[j] - cprime[j] * psi[j + 1];
        }
        t += spec.dt;
        let norm = dx * psi.iter().map(|p| p.norm_sqr()).sum::<f64>();
        if (norm - norm_prev).abs() > 1e-8 {
            return Err(Error::Solver(format!(
                "norm drift {:.3e} in one step at t = {t}",
                (norm - norm_prev).abs()
            )));
        }
        norm_prev = norm;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::free::free_survival_single;

    #[test]
    fn domain_length_guard() {
        let params = ModelParams::new(6.0, 1.0, 1).unwrap();
        let spec = GridTdseSpec { domain_length: 5.0, dx: 0.01, dt: 1e-3, barrier_width: 0.05 };
        assert!(tdse_single_particle(&params, 1, &spec, &[1.0]).is_err());
    }

    #[test]
    fn free_evolution_matches_analytic_survival() {
        let params = ModelParams::new(0.0, 1.0, 1).unwrap();
        let spec = GridTdseSpec { domain_length: 14.0, dx: 0.007, dt: 4e-4, barrier_width: 0.05 };
        let res = tdse_single_particle(&params, 1, &spec, &[0.3]).unwrap();
        let grid = res.survival[0];
        let exact = free_survival_single(1, 1.0, res.times[0]).unwrap();
        let rel = (grid - exact).abs() / exact;
        assert!(rel < 5e-3, "grid {grid} vs analytic {exact}, rel {rel}");
    }
}
