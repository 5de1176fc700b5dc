//! Complex poles of the delta-shell outgoing Green's function and the
//! normalized resonant states built on them.
//!
//! Poles solve 2 i kappa + lambda (exp(2 i kappa a) - 1) = 0 in the fourth
//! quadrant; the mirror string follows from kappa_{-p} = -conj(kappa_p) and
//! is never solved independently.

use crate::error::{Error, Result};
use crate::C64;
use std::f64::consts::PI;
use std::fmt::Write as _;

/// Potential strength, shell radius and pole count, in units hbar = 2m = 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub lambda: f64,
    pub a: f64,
    pub n_poles: usize,
}

impl ModelParams {
    pub fn new(lambda: f64, a: f64, n_poles: usize) -> Result<Self> {
        let p = Self { lambda, a, n_poles };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda >= 0.0) || !self.lambda.is_finite() {
            return Err(Error::Domain(format!("lambda must be >= 0, got {}", self.lambda)));
        }
        if !(self.a > 0.0) || !self.a.is_finite() {
            return Err(Error::Domain(format!("shell radius must be > 0, got {}", self.a)));
        }
        if self.n_poles < 1 {
            return Err(Error::Domain("n_poles must be >= 1".into()));
        }
        Ok(())
    }
}

/// A single complex-wavenumber pole kappa_p = a_p - i b_p.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pole {
    pub index: i32,
    pub kappa: C64,
}

impl Pole {
    pub fn energy(&self) -> C64 {
        self.kappa * self.kappa
    }

    pub fn resonance_energy(&self) -> f64 {
        self.energy().re
    }

    pub fn width(&self) -> f64 {
        -2.0 * self.energy().im
    }

    pub fn lifetime(&self) -> f64 {
        1.0 / self.width()
    }

    /// kappa_{-p} = -conj(kappa_p)
    pub fn mirror(&self) -> Pole {
        Pole { index: -self.index, kappa: -self.kappa.conj() }
    }

    /// A pole is proper when Re kappa > |Im kappa|, which makes the
    /// exponential+integral split representation valid.
    pub fn is_proper(&self) -> bool {
        self.kappa.re > self.kappa.im.abs()
    }
}

/// Left side of the pole equation 2 i kappa + lambda (e^{2 i kappa a} - 1).
pub fn pole_residual(kappa: C64, params: &ModelParams) -> C64 {
    let i = C64::new(0.0, 1.0);
    2.0 * i * kappa + params.lambda * ((2.0 * i * kappa * params.a).exp() - 1.0)
}

fn residual_derivative(kappa: C64, params: &ModelParams) -> C64 {
    let i = C64::new(0.0, 1.0);
    2.0 * i + 2.0 * i * params.lambda * params.a * (2.0 * i * kappa * params.a).exp()
}

fn residual_scale(kappa: C64, params: &ModelParams) -> f64 {
    2.0 * kappa.norm() + params.lambda + 1.0
}

fn solve_one(n: usize, params: &ModelParams) -> Result<C64> {
    let a = params.a;
    let lambda = params.lambda;
    let base = n as f64 * PI / a;
    let seed = C64::new(base, -0.1 / a);
    let mut kappa = seed;
    // Fixed-point form kappa = n pi/a + Log(1 - 2 i kappa / lambda)/(2 i a)
    // walks the seed to the basin of the Newton iteration for any lambda > 0.
    let i = C64::new(0.0, 1.0);
    for _ in 0..200 {
        let next = base + (1.0 - 2.0 * i * kappa / lambda).ln() / (2.0 * i * a);
        if (next - kappa).norm() < 1e-14 * kappa.norm() {
            kappa = next;
            break;
        }
        kappa = next;
    }
    for _ in 0..60 {
        let f = pole_residual(kappa, params);
        let step = f / residual_derivative(kappa, params);
        kappa -= step;
        if !kappa.re.is_finite() || !kappa.im.is_finite() {
            break;
        }
        // polish until the step itself is at rounding level
        if step.norm() <= 1e-15 * kappa.norm() {
            return Ok(kappa);
        }
    }
    let f = pole_residual(kappa, params);
    if f.norm() <= 1e-12 * residual_scale(kappa, params) {
        return Ok(kappa);
    }
    Err(Error::Solver(format!(
        "Newton did not converge from seed {seed} (n = {n}), residual {:.3e}",
        f.norm()
    )))
}

/// Solve the proper pole string p = 1..n_poles, ordered by increasing Re kappa.
pub fn solve_poles(params: &ModelParams) -> Result<Vec<Pole>> {
    params.validate()?;
    if params.lambda == 0.0 {
        // Free evolution: the pole equation reduces to 2 i kappa = 0 whose
        // only root is the excluded kappa = 0; there are no resonance poles.
        return Ok(Vec::new());
    }
    let mut poles = Vec::with_capacity(params.n_poles);
    for n in 1..=params.n_poles {
        let mut kappa = solve_one(n, params)?;
        // In the strong-coupling box limit the width underflows and Newton
        // rounding may leave Im kappa a hair above zero; clamp that, but
        // reject anything genuinely in the upper half plane.
        if kappa.re <= 0.0 || kappa.im > 1e-12 * kappa.norm() {
            return Err(Error::Solver(format!(
                "root {kappa} from seed n = {n} left the fourth quadrant"
            )));
        }
        kappa.im = kappa.im.min(-0.0);
        poles.push(Pole { index: n as i32, kappa });
    }
    poles.sort_by(|p, q| p.kappa.re.partial_cmp(&q.kappa.re).unwrap());
    for (i, p) in poles.iter_mut().enumerate() {
        p.index = (i + 1) as i32;
    }
    for w in poles.windows(2) {
        if (w[0].kappa - w[1].kappa).norm() < 1e-8 {
            return Err(Error::Solver(format!(
                "duplicate roots {} and {}",
                w[0].kappa, w[1].kappa
            )));
        }
    }
    Ok(poles)
}

/// Search rectangle for the argument-principle zero count, lower half plane:
/// Re kappa in [re_lo, re_hi], Im kappa in [im_lo, im_hi] with im_* < 0.
#[derive(Debug, Clone, Copy)]
pub struct SearchRect {
    pub re_lo: f64,
    pub re_hi: f64,
    pub im_lo: f64,
    pub im_hi: f64,
}

impl SearchRect {
    /// Rectangle that must contain exactly the first N fourth-quadrant poles,
    /// sized from the solved table.
    pub fn enclosing(poles: &[Pole], params: &ModelParams) -> SearchRect {
        let b_min = poles.iter().map(|p| -p.kappa.im).fold(f64::INFINITY, f64::min);
        let b_max = poles.iter().map(|p| -p.kappa.im).fold(0.0, f64::max);
        let a_min = poles.iter().map(|p| p.kappa.re).fold(f64::INFINITY, f64::min);
        SearchRect {
            re_lo: 0.5 * a_min,
            re_hi: (poles.len() as f64 + 0.5) * PI / params.a,
            im_lo: -(1.5 * b_max + 1.0 / params.a),
            im_hi: -0.5 * b_min,
        }
    }
}

/// Number of zeros of the pole equation inside the rectangle, by winding
/// number of the residual along the boundary with adaptive phase tracking.
pub fn argument_principle_count(params: &ModelParams, rect: &SearchRect) -> Result<usize> {
    let corners = [
        C64::new(rect.re_lo, rect.im_hi),
        C64::new(rect.re_hi, rect.im_hi),
        C64::new(rect.re_hi, rect.im_lo),
        C64::new(rect.re_lo, rect.im_lo),
        C64::new(rect.re_lo, rect.im_hi),
    ];
    let mut total = 0.0;
    for seg in corners.windows(2) {
        total += phase_change(seg[0], seg[1], params, 0)?;
    }
    let winding = -total / (2.0 * PI); // boundary walked clockwise in the plane
    let count = winding.round();
    if (winding - count).abs() > 0.05 {
        return Err(Error::Solver(format!("winding number did not settle: {winding}")));
    }
    Ok(count as usize)
}

fn phase_change(z0: C64, z1: C64, params: &ModelParams, depth: usize) -> Result<f64> {
    let f0 = pole_residual(z0, params);
    let f1 = pole_residual(z1, params);
    if f0.norm() == 0.0 || f1.norm() == 0.0 {
        return Err(Error::Solver("zero of the residual on the search contour".into()));
    }
    let d = (f1 / f0).arg();
    if d.abs() < 0.5 * PI {
        if depth < 48 {
            // refine once more to guard against an aliased full turn
            let mid = 0.5 * (z0 + z1);
            if depth < 8 || (z1 - z0).norm() > 1e-6 {
                return Ok(phase_change(z0, mid, params, depth + 1)?
                    + phase_change(mid, z1, params, depth + 1)?);
            }
        }
        return Ok(d);
    }
    if depth >= 60 {
        return Err(Error::Solver("phase tracking failed to resolve the contour".into()));
    }
    let mid = 0.5 * (z0 + z1);
    Ok(phase_change(z0, mid, params, depth + 1)? + phase_change(mid, z1, params, depth + 1)?)
}

/// Resonant state u_p(r) = A_p sin(kappa_p r) on [0, a].
#[derive(Debug, Clone, Copy)]
pub struct ResonantState {
    pub pole: Pole,
    pub amplitude: C64,
}

/// Closed form of the normalization integral
/// int_0^a sin^2(kappa r) dr + i sin^2(kappa a)/(2 kappa).
fn normalization_denominator(kappa: C64, a: f64) -> C64 {
    let i = C64::new(0.0, 1.0);
    let s = (kappa * a).sin();
    a / 2.0 - (2.0 * kappa * a).sin() / (4.0 * kappa) + i * s * s / (2.0 * kappa)
}

/// Fix A_p from the closed form of the normalization condition; the square
/// root branch is chosen with Re A_p > 0 (ties broken by Im A_p > 0).
pub fn normalize_state(pole: Pole, params: &ModelParams) -> Result<ResonantState> {
    let den = normalization_denominator(pole.kappa, params.a);
    if den.norm() < 1e-12 {
        return Err(Error::DegenerateState(pole.kappa));
    }
    let mut amplitude = (1.0 / den).sqrt();
    if amplitude.re < 0.0 || (amplitude.re == 0.0 && amplitude.im < 0.0) {
        amplitude = -amplitude;
    }
    Ok(ResonantState { pole, amplitude })
}

impl ResonantState {
    /// u_p(r) with the interior-domain check.
    pub fn value(&self, r: f64, params: &ModelParams) -> Result<C64> {
        if !(0.0..=params.a).contains(&r) {
            return Err(Error::Domain(format!("r = {r} outside [0, {}]", params.a)));
        }
        Ok(self.value_unchecked(r))
    }

    pub fn value_unchecked(&self, r: f64) -> C64 {
        self.amplitude * (self.pole.kappa * r).sin()
    }

    /// Residual of the closed-form normalization condition; zero by
    /// construction up to rounding.
    pub fn normalization_defect(&self, params: &ModelParams) -> f64 {
        let den = normalization_denominator(self.pole.kappa, params.a);
        (self.amplitude * self.amplitude * den - 1.0).norm()
    }
}

/// Solved and normalized pole table plus signed-index access to the mirror
/// set; immutable once built.
#[derive(Debug, Clone)]
pub struct ResonantBasis {
    pub params: ModelParams,
    states: Vec<ResonantState>,
}

impl ResonantBasis {
    pub fn build(params: ModelParams) -> Result<Self> {
        let poles = solve_poles(&params)?;
        let states = poles
            .into_iter()
            .map(|p| normalize_state(p, &params))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { params, states })
    }

    pub fn from_states(params: ModelParams, states: Vec<ResonantState>) -> Self {
        Self { params, states }
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[ResonantState] {
        &self.states
    }

    pub fn state(&self, p: usize) -> &ResonantState {
        &self.states[p - 1]
    }

    /// Signed pole indices -N..-1, 1..N in ascending order.
    pub fn signed_indices(&self) -> impl Iterator<Item = i32> {
        let n = self.states.len() as i32;
        (-n..=n).filter(|&p| p != 0)
    }

    pub fn kappa(&self, p: i32) -> C64 {
        debug_assert!(p != 0);
        let k = self.states[(p.unsigned_abs() as usize) - 1].pole.kappa;
        if p > 0 {
            k
        } else {
            -k.conj()
        }
    }

    /// A_{-p} = -conj(A_p): with kappa_{-p} = -conj(kappa_p) the sine flips
    /// sign under conjugation, so the minus keeps u_{-p}(r) = conj(u_p(r)).
    pub fn amplitude(&self, p: i32) -> C64 {
        let a = self.states[(p.unsigned_abs() as usize) - 1].amplitude;
        if p > 0 {
            a
        } else {
            -a.conj()
        }
    }

    /// u_p(r) for signed p; u_{-p}(r) = conj(u_p(r)) for real r.
    pub fn u(&self, p: i32, r: f64) -> C64 {
        let v = self.states[(p.unsigned_abs() as usize) - 1].value_unchecked(r);
        if p > 0 {
            v
        } else {
            v.conj()
        }
    }

    /// Shortest width sets the system lifetime tau_1 = 1/Gamma_1.
    pub fn tau1(&self) -> f64 {
        self.states
            .iter()
            .map(|s| s.pole.width())
            .fold(f64::INFINITY, f64::min)
            .recip()
    }

    pub fn max_residual(&self) -> f64 {
        self.states
            .iter()
            .map(|s| pole_residual(s.pole.kappa, &self.params).norm())
            .fold(0.0, f64::max)
    }
}

/// CSV export of the pole table, 17 significant digits.
pub fn pole_table_csv(basis: &ResonantBasis) -> String {
    let mut out = String::from("p,re_kappa,im_kappa,resonance_energy,width,lifetime,re_amplitude,im_amplitude\n");
    for s in basis.states() {
        let p = s.pole;
        writeln!(
            out,
            "{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            p.index,
            p.kappa.re,
            p.kappa.im,
            p.resonance_energy(),
            p.width(),
            p.lifetime(),
            s.amplitude.re,
            s.amplitude.im
        )
        .unwrap();
    }
    out
}
