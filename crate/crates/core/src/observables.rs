//! Survival and nonescape probabilities of the two-particle system as
//! coefficient sums, an asymptotic-form continuation for very long times,
//! and slope extraction over the exponential and power-law regimes.

use crate::error::{Error, Result};
use crate::greens::AsymptoticCoefficients;
use crate::overlaps::{moment_d, overlap_c, OverlapSet};
use crate::poles::ResonantBasis;
use crate::propagator::PropagatorForm;
use crate::quad::Rule;
use crate::special::{moshinsky, moshinsky_pair};
use crate::two_particle::{
    b_coefficient, initial_wavefunction, psi_asymptotic, psi_asymptotic_terms, InitialStateSpec,
};
use crate::C64;

/// Values below this floor are excluded from every fit; the asymptotic
/// analytic form keeps the series meaningful past f64 underflow of the
/// exact coefficient sums.
pub const FIT_FLOOR: f64 = 1e-250;

/// Immutable bundle of everything needed to evaluate S(t) and P(t):
/// pole table, initial-state spec, coefficient matrices, and the policy
/// for switching from the exact to the asymptotic evaluation.
pub struct DecayModel {
    pub basis: ResonantBasis,
    pub spec: InitialStateSpec,
    pub overlaps: OverlapSet,
    signed: Vec<i32>,
    b: Vec<C64>,
    k: Vec<C64>,
    /// Absolute time beyond which S and P come from 2-D quadrature of the
    /// asymptotic wave function instead of the exact coefficient sums.
    pub switch_time: f64,
    rule: Rule,
}

impl DecayModel {
    pub fn new(basis: ResonantBasis, spec: InitialStateSpec) -> Result<Self> {
        spec.validate()?;
        if basis.is_empty() {
            return Err(Error::InvalidSpec(
                "observables need at least one pole; the free case is handled by the \
                 asymptotic wave functions directly"
                    .into(),
            ));
        }
        let overlaps = OverlapSet::build(&basis, &[spec.alpha, spec.beta]);
        let signed: Vec<i32> = basis.signed_indices().collect();
        let n2 = signed.len();
        let mut b = vec![C64::new(0.0, 0.0); n2 * n2];
        for (i, &p) in signed.iter().enumerate() {
            for (j, &q) in signed.iter().enumerate() {
                b[i * n2 + j] = b_coefficient(&basis, &spec, p, q);
            }
        }
        let mut k = vec![C64::new(0.0, 0.0); n2 * n2];
        for (i, &p) in signed.iter().enumerate() {
            for (j, &q) in signed.iter().enumerate() {
                k[i * n2 + j] = overlaps.k(p, q);
            }
        }
        // The truncated coefficient sums pick up a spurious tail from the
        // missing high poles that grows relative to the signal with t, while
        // the asymptotic form (full exponential part plus analytic power
        // terms) already tracks a truncation-free contour reference to a few
        // percent from half a lifetime on; switch there.
        let switch_time = 0.5 * basis.tau1();
        let rule = Rule::on(64, 0.0, basis.params.a);
        Ok(Self { basis, spec, overlaps, signed, b, k, switch_time, rule })
    }

    pub fn with_switch_time(mut self, t: f64) -> Self {
        self.switch_time = t;
        self
    }

    pub fn tau1(&self) -> f64 {
        self.basis.tau1()
    }

    fn moshinsky_vector(&self, t: f64) -> Result<Vec<C64>> {
        self.signed
            .iter()
            .map(|&p| moshinsky(self.basis.kappa(p), t))
            .collect()
    }

    /// Time factors of the purely exponential contribution: exp(-i E_p t)
    /// on the proper poles, zero on the mirror set.
    fn phase_vector(&self, t: f64) -> Result<Vec<C64>> {
        self.signed
            .iter()
            .map(|&p| {
                if p > 0 {
                    Ok(moshinsky_pair(self.basis.kappa(p), t)?.phase)
                } else {
                    Ok(C64::new(0.0, 0.0))
                }
            })
            .collect()
    }

    /// A(t) = sum_{pq} B_pq^2 m_p m_q; for the real box initial states the
    /// conjugate-state coefficients equal B, so the matrix enters squared
    /// elementwise.
    fn amplitude_from(&self, m: &[C64]) -> C64 {
        let n2 = self.signed.len();
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..n2 {
            for j in 0..n2 {
                let b = self.b[i * n2 + j];
                acc += b * b * m[i] * m[j];
            }
        }
        acc
    }

    /// P(t) = sum conj(Y) .* (K^T Y K) with Y = diag(m) B diag(m) and
    /// K_{pq} = int u_p conj(u_q) dr.
    fn nonescape_from(&self, m: &[C64]) -> f64 {
        let n2 = self.signed.len();
        let mut y = vec![C64::new(0.0, 0.0); n2 * n2];
        for i in 0..n2 {
            for j in 0..n2 {
                y[i * n2 + j] = m[i] * self.b[i * n2 + j] * m[j];
            }
        }
        // z1 = K^T y
        let mut z1 = vec![C64::new(0.0, 0.0); n2 * n2];
        for i in 0..n2 {
            for j in 0..n2 {
                let mut acc = C64::new(0.0, 0.0);
                for l in 0..n2 {
                    acc += self.k[l * n2 + i] * y[l * n2 + j];
                }
                z1[i * n2 + j] = acc;
            }
        }
        let mut total = C64::new(0.0, 0.0);
        for i in 0..n2 {
            for j in 0..n2 {
                let mut acc = C64::new(0.0, 0.0);
                for l in 0..n2 {
                    acc += z1[i * n2 + l] * self.k[l * n2 + j];
                }
                total += y[i * n2 + j].conj() * acc;
            }
        }
        total.re
    }

    pub fn survival_amplitude(&self, t: f64) -> Result<C64> {
        Ok(self.amplitude_from(&self.moshinsky_vector(t)?))
    }

    pub fn survival_probability_exact(&self, t: f64) -> Result<f64> {
        Ok(self.survival_amplitude(t)?.norm_sqr())
    }

    pub fn nonescape_probability_exact(&self, t: f64) -> Result<f64> {
        Ok(self.nonescape_from(&self.moshinsky_vector(t)?))
    }

    pub fn survival_probability_asymptotic(&self, t: f64) -> Result<f64> {
        let a = self.basis.params.a;
        let spec = self.spec;
        let mut err = None;
        let amp = self.rule.integrate_2d(|y1, y2| {
            let init = initial_wavefunction(&spec, y1, y2, a).unwrap();
            match psi_asymptotic(&self.basis, &spec, y1, y2, t) {
                Ok(v) => init * v,
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

    pub fn nonescape_probability_asymptotic(&self, t: f64) -> Result<f64> {
        let spec = self.spec;
        let mut err = None;
        let p = self.rule.integrate_2d_real(|y1, y2| {
            match psi_asymptotic(&self.basis, &spec, y1, y2, t) {
                Ok(v) => v.norm_sqr(),
                Err(e) => {
                    err = Some(e);
                    0.0
                }
            }
        });
        match err {
            Some(e) => Err(e),
            None => Ok(p),
        }
    }

    /// (S, P, form) with the exact/asymptotic switch applied.
    pub fn probabilities(&self, t: f64) -> Result<(f64, f64, PropagatorForm)> {
        if t <= self.switch_time {
            Ok((
                self.survival_probability_exact(t)?,
                self.nonescape_probability_exact(t)?,
                PropagatorForm::Exact,
            ))
        } else {
            Ok((
                self.survival_probability_asymptotic(t)?,
                self.nonescape_probability_asymptotic(t)?,
                PropagatorForm::Asymptotic,
            ))
        }
    }

    /// S and P built from the purely exponential pole contributions alone,
    /// the solid inset curves of the figures.
    pub fn exponential_contributions(&self, t: f64) -> Result<(f64, f64)> {
        let m = self.phase_vector(t)?;
        Ok((self.amplitude_from(&m).norm_sqr(), self.nonescape_from(&m)))
    }

    /// S and P from the exponential plus mixed asymptotic terms, with the
    /// pure inverse-power term left out; the other inset variant.
    pub fn exp_mixed_contributions(&self, t: f64) -> Result<(f64, f64)> {
        let a = self.basis.params.a;
        let spec = self.spec;
        let mut err = None;
        let mut psi = |y1: f64, y2: f64| -> C64 {
            match psi_asymptotic_terms(&self.basis, &spec, y1, y2, t) {
                Ok(terms) => terms.exponential + terms.mixed,
                Err(e) => {
                    err = Some(e);
                    C64::new(0.0, 0.0)
                }
            }
        };
        let amp = self
            .rule
            .integrate_2d(|y1, y2| initial_wavefunction(&spec, y1, y2, a).unwrap() * psi(y1, y2));
        let p = self.rule.integrate_2d_real(|y1, y2| psi(y1, y2).norm_sqr());
        match err {
            Some(e) => Err(e),
            None => Ok((amp.norm_sqr(), p)),
        }
    }
}

/// Single-particle survival probability |A_1(t)|^2 for a box initial
/// state s.
pub fn single_particle_survival(
    basis: &ResonantBasis,
    s: usize,
    t: f64,
    form: PropagatorForm,
) -> Result<f64> {
    match form {
        PropagatorForm::Exact | PropagatorForm::Split => {
            let mut amp = C64::new(0.0, 0.0);
            for p in basis.signed_indices() {
                let c = overlap_c(basis, p, s);
                amp += c * c * moshinsky(basis.kappa(p), t)?;
            }
            Ok(amp.norm_sqr())
        }
        PropagatorForm::Asymptotic => {
            if !(t > 0.0) {
                return Err(Error::Domain("asymptotic form requires t > 0".into()));
            }
            let a = basis.params.a;
            let h1 = (1.0 + basis.params.lambda * a).powi(2);
            let d = moment_d(s, a);
            let eta = AsymptoticCoefficients::standard();
            let mut amp = C64::new(0.0, 0.0);
            for p in 1..=basis.len() as i32 {
                let c = overlap_c(basis, p, s);
                amp += c * c * moshinsky_pair(basis.kappa(p), t)?.phase;
            }
            amp -= C64::new(0.0, 1.0) * eta.eta1 * d * d / (h1 * t.powf(1.5));
            Ok(amp.norm_sqr())
        }
    }
}

/// Computed S(t), P(t) over a time grid with the form tag per row.
#[derive(Debug, Clone)]
pub struct DecaySeries {
    pub times: Vec<f64>,
    pub t_over_tau1: Vec<f64>,
    pub s: Vec<f64>,
    pub p: Vec<f64>,
    pub form: Vec<PropagatorForm>,
}

impl DecaySeries {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// Strictly increasing log-spaced grid.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi > lo && n >= 2);
    let ratio = (hi / lo).ln();
    (0..n)
        .map(|i| lo * (ratio * i as f64 / (n - 1) as f64).exp())
        .collect()
}

/// Evaluate S and P over a grid; the Cauchy-Schwarz ordering P >= S is a
/// hard data-integrity check on every row.
pub fn decay_series(model: &DecayModel, grid: &[f64]) -> Result<DecaySeries> {
    let tau1 = model.tau1();
    let mut series = DecaySeries {
        times: Vec::with_capacity(grid.len()),
        t_over_tau1: Vec::with_capacity(grid.len()),
        s: Vec::with_capacity(grid.len()),
        p: Vec::with_capacity(grid.len()),
        form: Vec::with_capacity(grid.len()),
    };
    for &t in grid {
        let (s, p, form) = model.probabilities(t)?;
        if p < s - 1e-12 {
            return Err(Error::DataIntegrity(format!(
                "P(t) = {p:.17e} < S(t) = {s:.17e} at t = {t}"
            )));
        }
        // P may overshoot 1 near t = 0 by the basis-truncation defect of the
        // reconstructed initial state; S is a projection and stays below 1.
        if !(-1e-12..=1.0 + 1e-9).contains(&s) || !(-1e-12..=1.2).contains(&p) {
            return Err(Error::DataIntegrity(format!(
                "probability outside [0, 1] at t = {t}: S = {s}, P = {p}"
            )));
        }
        series.times.push(t);
        series.t_over_tau1.push(t / tau1);
        series.s.push(s);
        series.p.push(p);
        series.form.push(form);
    }
    Ok(series)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitAxis {
    Semilog,
    Loglog,
}

/// Least-squares slope over a time window.
#[derive(Debug, Clone, Copy)]
pub struct SlopeFit {
    pub t_lo: f64,
    pub t_hi: f64,
    pub axis: FitAxis,
    pub slope: f64,
    pub stderr: f64,
    pub n_points: usize,
}

fn window_points(
    times: &[f64],
    values: &[f64],
    window: (f64, f64),
) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (&t, &v) in times.iter().zip(values) {
        if t < window.0 || t > window.1 {
            continue;
        }
        if v < 0.0 {
            return Err(Error::Fit(format!("negative value {v} at t = {t}")));
        }
        if v < FIT_FLOOR {
            continue;
        }
        xs.push(t);
        ys.push(v.ln());
    }
    if xs.len() < 8 {
        return Err(Error::Fit(format!(
            "window [{}, {}] holds {} usable points, need >= 8",
            window.0,
            window.1,
            xs.len()
        )));
    }
    Ok((xs, ys))
}

/// OLS slope of ln(value) against t (semilog) or ln t (loglog) over the
/// window, with its standard error.
pub fn fit_slope(
    times: &[f64],
    values: &[f64],
    window: (f64, f64),
    axis: FitAxis,
) -> Result<SlopeFit> {
    let (ts, ys) = window_points(times, values, window)?;
    let xs: Vec<f64> = match axis {
        FitAxis::Semilog => ts.clone(),
        FitAxis::Loglog => ts.iter().map(|t| t.ln()).collect(),
    };
    let n = xs.len() as f64;
    let xbar = xs.iter().sum::<f64>() / n;
    let ybar = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - xbar).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - xbar) * (y - ybar)).sum();
    let slope = sxy / sxx;
    let intercept = ybar - slope * xbar;
    let ss_res: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    let stderr = (ss_res / (n - 2.0) / sxx).sqrt();
    Ok(SlopeFit {
        t_lo: *ts.first().unwrap(),
        t_hi: *ts.last().unwrap(),
        axis,
        slope,
        stderr,
        n_points: xs.len(),
    })
}

/// Composite fit ln(value) = c + s t + q ln t over a window; separates a
/// genuine exponential rate s from an inverse-power correction q, which is
/// what distinguishes the mixed regime from a pure exponential segment.
#[derive(Debug, Clone, Copy)]
pub struct ExpPowerFit {
    pub t_lo: f64,
    pub t_hi: f64,
    pub rate: f64,
    pub power: f64,
    pub rms_residual: f64,
    pub n_points: usize,
}

pub fn fit_exp_power(times: &[f64], values: &[f64], window: (f64, f64)) -> Result<ExpPowerFit> {
    let (ts, ys) = window_points(times, values, window)?;
    // normal equations for regressors [1, t, ln t]
    let mut a = [[0.0f64; 3]; 3];
    let mut rhs = [0.0f64; 3];
    for (&t, &y) in ts.iter().zip(&ys) {
        let row = [1.0, t, t.ln()];
        for i in 0..3 {
            for j in 0..3 {
                a[i][j] += row[i] * row[j];
            }
            rhs[i] += row[i] * y;
        }
    }
    let sol = solve3(a, rhs).ok_or_else(|| Error::Fit("singular composite-fit system".into()))?;
    let mut ss = 0.0;
    for (&t, &y) in ts.iter().zip(&ys) {
        ss += (y - sol[0] - sol[1] * t - sol[2] * t.ln()).powi(2);
    }
    Ok(ExpPowerFit {
        t_lo: *ts.first().unwrap(),
        t_hi: *ts.last().unwrap(),
        rate: sol[1],
        power: sol[2],
        rms_residual: (ss / ts.len() as f64).sqrt(),
        n_points: ts.len(),
    })
}

fn solve3(mut a: [[f64; 3]; 3], mut b: [f64; 3]) -> Option<[f64; 3]> {
    for col in 0..3 {
        let pivot = (col..3).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[pivot][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in 0..3 {
            if row == col {
                continue;
            }
            let f = a[row][col] / a[col][col];
            for k in col..3 {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    Some([b[0] / a[0][0], b[1] / a[1][1], b[2] / a[2][2]])
}

/// A detected linear segment of ln(value) against t.
#[derive(Debug, Clone, Copy)]
pub struct Segment {
    pub t_lo: f64,
    pub t_hi: f64,
    pub rate: f64,
    pub power: f64,
    pub relative_error: f64,
}

/// Look for a window of the given log10 width whose composite fit has rate
/// within `tol` (relative) of `target` and power exponent inside
/// `power_band`; windows slide across the whole grid and the best match is
/// returned. `None` means no such segment exists, which is itself a
/// physical statement (used for the missing -2 Gamma_p segments of the
/// antisymmetric state).
pub fn detect_segment(
    times: &[f64],
    values: &[f64],
    target: f64,
    tol: f64,
    log_width: f64,
    power_band: (f64, f64),
) -> Option<Segment> {
    let factor = 10.0f64.powf(log_width);
    let mut best: Option<Segment> = None;
    for &t0 in times {
        let window = (t0, t0 * factor);
        let Ok(fit) = fit_exp_power(times, values, window) else {
            continue;
        };
        if fit.power < power_band.0 || fit.power > power_band.1 {
            continue;
        }
        let rel = (fit.rate - target).abs() / target.abs();
        if rel > tol {
            continue;
        }
        let seg = Segment {
            t_lo: fit.t_lo,
            t_hi: fit.t_hi,
            rate: fit.rate,
            power: fit.power,
            relative_error: rel,
        };
        if best.map_or(true, |b| seg.relative_error < b.relative_error) {
            best = Some(seg);
        }
    }
    best
}

/// Stricter detector for claiming a *pure* exponential segment: plain
/// semilog slope over the window, and the two half-windows must agree with
/// it to the same tolerance. A slope that is merely sweeping through the
/// target value fails the split-window consistency, which is what the
/// composite fit cannot guarantee on short windows where t and ln t are
/// nearly collinear.
pub fn detect_pure_segment(
    times: &[f64],
    values: &[f64],
    target: f64,
    tol: f64,
    log_width: f64,
) -> Option<Segment> {
    let factor = 10.0f64.powf(log_width);
    let half = factor.sqrt();
    let mut best: Option<Segment> = None;
    for &t0 in times {
        let Ok(fit) = fit_slope(times, values, (t0, t0 * factor), FitAxis::Semilog) else {
            continue;
        };
        let rel = (fit.slope - target).abs() / target.abs();
        if rel > tol {
            continue;
        }
        let halves_ok = [(t0, t0 * half), (t0 * half, t0 * factor)].iter().all(|&w| {
            fit_slope(times, values, w, FitAxis::Semilog)
                .map_or(false, |h| (h.slope - fit.slope).abs() <= tol * target.abs())
        });
        if !halves_ok {
            continue;
        }
        let seg = Segment {
            t_lo: fit.t_lo,
            t_hi: fit.t_hi,
            rate: fit.slope,
            power: 0.0,
            relative_error: rel,
        };
        if best.map_or(true, |b| seg.relative_error < b.relative_error) {
            best = Some(seg);
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poles::ModelParams;
    use crate::two_particle::InitialStateKind;

    fn model(kind: InitialStateKind) -> DecayModel {
        let basis = ResonantBasis::build(ModelParams::new(6.0, 1.0, 20).unwrap()).unwrap();
        let spec = match kind {
            InitialStateKind::FactorizedSymmetric => InitialStateSpec::factorized(6).unwrap(),
            k => InitialStateSpec::new(k, 1, 6).unwrap(),
        };
        DecayModel::new(basis, spec).unwrap()
    }

    fn all_models() -> Vec<DecayModel> {
        vec![
            model(InitialStateKind::FactorizedSymmetric),
            model(InitialStateKind::EntangledSymmetric),
            model(InitialStateKind::EntangledAntisymmetric),
        ]
    }

    #[test]
    fn initial_probabilities_near_one() {
        for m in all_models() {
            let s = m.survival_probability_exact(0.0).unwrap();
            let p = m.nonescape_probability_exact(0.0).unwrap();
            assert!((s - 1.0).abs() <= 5e-3, "S(0) = {s} for {:?}", m.spec.kind);
            // the truncated basis over-reconstructs the initial state near
            // the shell, so P(0) overshoots 1 by the truncation defect
            assert!((p - 1.0).abs() <= 0.12, "P(0) = {p} for {:?}", m.spec.kind);
        }
    }

    #[test]
    fn nonescape_dominates_survival() {
        for m in all_models() {
            let grid = log_grid(1e-3 * m.tau1(), 20.0 * m.tau1(), 40);
            for &t in &grid {
                let s = m.survival_probability_exact(t).unwrap();
                let p = m.nonescape_probability_exact(t).unwrap();
                assert!(p >= s - 1e-12, "P {p} < S {s} at t = {t} for {:?}", m.spec.kind);
            }
        }
    }

    #[test]
    fn quadrature_oracle_agreement() {
        // coefficient sums vs literal 2-D quadrature of the exact wave function
        use crate::oracles::quadrature_observables;
        for m in all_models() {
            for &f in &[0.1, 1.0, 5.0] {
                let t = f * m.tau1();
                let (a_q, s_q, p_q) = quadrature_observables(&m.basis, &m.spec, t).unwrap();
                let a = m.survival_amplitude(t).unwrap();
                let s = m.survival_probability_exact(t).unwrap();
                let p = m.nonescape_probability_exact(t).unwrap();
                assert!((a - a_q).norm() <= 1e-8 * a_q.norm(), "A mismatch at t = {t}");
                assert!((s - s_q).abs() <= 1e-8 * s_q, "S {s} vs oracle {s_q} at t = {t}");
                assert!((p - p_q).abs() <= 1e-8 * p_q, "P {p} vs oracle {p_q} at t = {t}");
            }
        }
    }

    #[test]
    fn factorized_amplitude_factorizes() {
        // O(N^2) elementwise-square contraction equals the product of
        // single-particle amplitudes for the factorized kind
        let m = model(InitialStateKind::FactorizedSymmetric);
        for &t in &[0.3, 2.0, 9.0] {
            let a = m.survival_amplitude(t).unwrap();
            let mut single = C64::new(0.0, 0.0);
            for p in m.basis.signed_indices() {
                let c = overlap_c(&m.basis, p, 6);
                single += c * c * moshinsky(m.basis.kappa(p), t).unwrap();
            }
            let prod = single * single;
            // summation-order rounding is amplified when the sums cancel,
            // so the bound is relative to the term magnitudes, not the result
            assert!((a - prod).norm() <= 1e-9 * prod.norm().max(1e-12));
        }
    }

    #[test]
    fn asymptotic_probabilities_match_exact_at_crossover() {
        // at the default switch (half a lifetime) both routes carry a few
        // percent of truncation error in opposite directions, so the seam is
        // continuous only to that level
        for m in all_models() {
            let t = m.switch_time;
            let se = m.survival_probability_exact(t).unwrap();
            let sa = m.survival_probability_asymptotic(t).unwrap();
            assert!(
                (se - sa).abs() <= 0.06 * se,
                "S exact {se} vs asymptotic {sa} for {:?}",
                m.spec.kind
            );
            let pe = m.nonescape_probability_exact(t).unwrap();
            let pa = m.nonescape_probability_asymptotic(t).unwrap();
            assert!(
                (pe - pa).abs() <= 0.06 * pe,
                "P exact {pe} vs asymptotic {pa} for {:?}",
                m.spec.kind
            );
        }
    }

    #[test]
    fn series_is_ordered_and_tagged() {
        let m = model(InitialStateKind::FactorizedSymmetric);
        let grid = log_grid(1e-2 * m.tau1(), 100.0 * m.tau1(), 60);
        let series = decay_series(&m, &grid).unwrap();
        assert_eq!(series.len(), 60);
        for (i, &t) in series.times.iter().enumerate() {
            let expect = if t <= m.switch_time {
                PropagatorForm::Exact
            } else {
                PropagatorForm::Asymptotic
            };
            assert_eq!(series.form[i], expect);
        }
        assert!(series.form.contains(&PropagatorForm::Asymptotic));
    }

    #[test]
    fn survival_below_nonescape_in_exponential_regime() {
        // excited initial states: S much less than P along the exponential
        // decay (the inset observation)
        for m in all_models() {
            let t = 3.0 * m.tau1();
            let (s_exp, p_exp) = m.exponential_contributions(t).unwrap();
            assert!(s_exp < 0.5 * p_exp, "S {s_exp} not << P {p_exp} for {:?}", m.spec.kind);
        }
    }

    #[test]
    fn branch_invariance_of_observables() {
        // flipping every amplitude A_p -> -A_p leaves S and P unchanged
        use crate::poles::{ResonantState, ResonantBasis};
        let m = model(InitialStateKind::EntangledSymmetric);
        let flipped_states: Vec<ResonantState> = m
            .basis
            .states()
            .iter()
            .map(|s| ResonantState { pole: s.pole, amplitude: -s.amplitude })
            .collect();
        let flipped = ResonantBasis::from_states(m.basis.params, flipped_states);
        let mf = DecayModel::new(flipped, m.spec).unwrap();
        for &t in &[0.2, 1.7, 12.0] {
            let s = m.survival_probability_exact(t).unwrap();
            let sf = mf.survival_probability_exact(t).unwrap();
            assert!((s - sf).abs() <= 1e-12 * s.max(1e-12));
            let p = m.nonescape_probability_exact(t).unwrap();
            let pf = mf.nonescape_probability_exact(t).unwrap();
            assert!((p - pf).abs() <= 1e-12 * p.max(1e-12));
        }
    }

    #[test]
    fn single_particle_survival_forms_agree() {
        let b = ResonantBasis::build(ModelParams::new(6.0, 1.0, 20).unwrap()).unwrap();
        let tau1 = b.tau1();
        let t = 60.0 * tau1;
        let e = single_particle_survival(&b, 1, t, PropagatorForm::Exact).unwrap();
        let a = single_particle_survival(&b, 1, t, PropagatorForm::Asymptotic).unwrap();
        assert!((e - a).abs() <= 0.02 * e, "S1 exact {e} vs asymptotic {a}");
    }

    #[test]
    fn fit_slope_on_synthetic_lines() {
        let times = log_grid(0.1, 100.0, 120);
        let exp_vals: Vec<f64> = times.iter().map(|t| (-1.7 * t).exp()).collect();
        let fit = fit_slope(&times, &exp_vals, (0.1, 100.0), FitAxis::Semilog).unwrap();
        assert!((fit.slope + 1.7).abs() < 1e-10);
        assert!(fit.stderr < 1e-10);
        let pow_vals: Vec<f64> = times.iter().map(|t| t.powi(-6)).collect();
        let fit = fit_slope(&times, &pow_vals, (0.1, 100.0), FitAxis::Loglog).unwrap();
        assert!((fit.slope + 6.0).abs() < 1e-10);
    }

    #[test]
    fn fit_slope_rejects_bad_windows() {
        let times = log_grid(0.1, 100.0, 60);
        let vals: Vec<f64> = times.iter().map(|t| (-t).exp()).collect();
        assert!(fit_slope(&times, &vals, (500.0, 600.0), FitAxis::Semilog).is_err());
        let mut bad = vals.clone();
        bad[30] = -1.0;
        assert!(fit_slope(&times, &bad, (0.1, 100.0), FitAxis::Semilog).is_err());
    }

    #[test]
    fn composite_fit_separates_rate_and_power() {
        let times = log_grid(2.0, 40.0, 150);
        let vals: Vec<f64> = times.iter().map(|t| t.powi(-3) * (-1.55 * t).exp()).collect();
        let fit = fit_exp_power(&times, &vals, (2.0, 40.0)).unwrap();
        assert!((fit.rate + 1.55).abs() < 1e-9, "rate {}", fit.rate);
        assert!((fit.power + 3.0).abs() < 1e-9, "power {}", fit.power);
        assert!(fit.rms_residual < 1e-10);
    }

    #[test]
    fn detect_segment_on_synthetic_two_regime_curve() {
        // e^{-130 t} early, e^{-3 t} late
        let times = log_grid(1e-3, 30.0, 400);
        let vals: Vec<f64> = times
            .iter()
            .map(|t| (-130.0 * t).exp() + 1e-4 * (-3.0 * t).exp())
            .collect();
        let early = detect_segment(&times, &vals, -130.0, 0.05, 0.5, (-0.5, 0.5)).unwrap();
        assert!(early.relative_error < 0.02);
        let late = detect_segment(&times, &vals, -3.0, 0.05, 0.5, (-0.5, 0.5)).unwrap();
        assert!(late.t_lo > early.t_hi);
        // a rate nothing in the data sustains
        assert!(detect_segment(&times, &vals, -40.0, 0.05, 0.5, (-0.5, 0.5)).is_none());
    }
}

