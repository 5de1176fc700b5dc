//! Literal 2-D Gauss-Legendre evaluation of the survival amplitude and the
//! survival/nonescape probabilities against the exact wave function; the
//! independent check of every coefficient-sum contraction.

use crate::error::Result;
use crate::poles::ResonantBasis;
use crate::quad::Rule;
use crate::two_particle::{initial_wavefunction, psi_exact, InitialStateSpec};
use crate::C64;

/// (A, S, P) at time t by quadrature of the defining integrals over [0,a]^2.
pub fn quadrature_observables(
    basis: &ResonantBasis,
    spec: &InitialStateSpec,
    t: f64,
) -> Result<(C64, f64, f64)> {
    let a = basis.params.a;
    let rule = Rule::on(96, 0.0, a);
    let mut amp = C64::new(0.0, 0.0);
    let mut p = 0.0;
    for (&y1, &w1) in rule.nodes.iter().zip(&rule.weights) {
        for (&y2, &w2) in rule.nodes.iter().zip(&rule.weights) {
            let psi = psi_exact(basis, spec, y1, y2, t)?;
            let init = initial_wavefunction(spec, y1, y2, a)?;
            amp += w1 * w2 * init * psi;
            p += w1 * w2 * psi.norm_sqr();
        }
    }
    Ok((amp, amp.norm_sqr(), p))
}
