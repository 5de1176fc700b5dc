//! Scenario configuration and runner: builds the pole and overlap tables,
//! evaluates the decay series, fits the regime slopes, and writes the CSV
//! and report files deterministically.

use crate::error::{Error, Result};
use crate::observables::{
    decay_series, detect_pure_segment, detect_segment, fit_slope, log_grid, DecayModel,
    DecaySeries, FitAxis, Segment,
};
use crate::overlaps::{sum_rule_defect, sum_rule_imaginary};
use crate::poles::{pole_table_csv, ModelParams, ResonantBasis};
use crate::two_particle::{psi_asymptotic, InitialStateKind, InitialStateSpec};
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::path::Path;

fn default_t_min() -> f64 {
    1e-3
}
fn default_t_max() -> f64 {
    1e3
}
fn default_points() -> usize {
    400
}
fn default_lambda() -> f64 {
    6.0
}
fn default_a() -> f64 {
    1.0
}
fn default_n_poles() -> usize {
    20
}

/// Log-spaced time grid in lifetime units (absolute units for the free
/// scenario, which has no lifetime).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TimeGridSpec {
    #[serde(default = "default_t_min")]
    pub t_min_tau1: f64,
    #[serde(default = "default_t_max")]
    pub t_max_tau1: f64,
    #[serde(default = "default_points")]
    pub points: usize,
}

impl Default for TimeGridSpec {
    fn default() -> Self {
        Self { t_min_tau1: default_t_min(), t_max_tau1: default_t_max(), points: default_points() }
    }
}

impl TimeGridSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.t_min_tau1 > 0.0) || !(self.t_max_tau1 > self.t_min_tau1) {
            return Err(Error::Config(format!(
                "time grid must be strictly increasing: [{}, {}]",
                self.t_min_tau1, self.t_max_tau1
            )));
        }
        if self.points < 16 {
            return Err(Error::Config(format!("grid needs >= 16 points, got {}", self.points)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioKind {
    FactorizedSymmetric,
    EntangledSymmetric,
    EntangledAntisymmetric,
    /// lambda = 0 wave-function decay at a fixed interior point.
    Free,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub name: String,
    #[serde(default = "default_lambda")]
    pub lambda: f64,
    #[serde(default = "default_a")]
    pub a: f64,
    #[serde(default = "default_n_poles")]
    pub n_poles: usize,
    pub kind: ScenarioKind,
    pub alpha: usize,
    pub beta: usize,
    #[serde(default)]
    pub grid: TimeGridSpec,
    /// Exact-to-asymptotic switch in lifetime units.
    #[serde(default)]
    pub switch_tau1: Option<f64>,
}

impl ScenarioConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: ScenarioConfig =
            toml::from_str(text).map_err(|e| Error::Config(format!("config parse error: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn state_spec(&self) -> Result<Option<InitialStateSpec>> {
        let kind = match self.kind {
            ScenarioKind::FactorizedSymmetric => InitialStateKind::FactorizedSymmetric,
            ScenarioKind::EntangledSymmetric => InitialStateKind::EntangledSymmetric,
            ScenarioKind::EntangledAntisymmetric => InitialStateKind::EntangledAntisymmetric,
            ScenarioKind::Free => return Ok(None),
        };
        Ok(Some(InitialStateSpec::new(kind, self.alpha, self.beta)?))
    }

    pub fn validate(&self) -> Result<()> {
        if self.alpha < 1 || self.beta < 1 {
            return Err(Error::Config("box indices must be >= 1".into()));
        }
        self.grid.validate()?;
        ModelParams::new(self.lambda, self.a, self.n_poles)?;
        self.state_spec()?;
        if self.kind == ScenarioKind::Free && self.lambda != 0.0 {
            return Err(Error::Config("the free scenario requires lambda = 0".into()));
        }
        Ok(())
    }
}

/// The four scenarios shipped with the binary.
pub fn builtin_scenarios() -> Vec<ScenarioConfig> {
    let base = TimeGridSpec::default();
    vec![
        ScenarioConfig {
            name: "fig1".into(),
            lambda: 6.0,
            a: 1.0,
            n_poles: 20,
            kind: ScenarioKind::FactorizedSymmetric,
            alpha: 6,
            beta: 6,
            grid: base,
            switch_tau1: None,
        },
        ScenarioConfig {
            name: "fig2".into(),
            lambda: 6.0,
            a: 1.0,
            n_poles: 20,
            kind: ScenarioKind::EntangledSymmetric,
            alpha: 1,
            beta: 6,
            grid: base,
            switch_tau1: None,
        },
        ScenarioConfig {
            name: "fig3".into(),
            lambda: 6.0,
            a: 1.0,
            n_poles: 20,
            kind: ScenarioKind::EntangledAntisymmetric,
            alpha: 1,
            beta: 6,
            grid: base,
            switch_tau1: None,
        },
        ScenarioConfig {
            name: "free".into(),
            lambda: 0.0,
            a: 1.0,
            n_poles: 1,
            kind: ScenarioKind::Free,
            alpha: 1,
            beta: 6,
            grid: TimeGridSpec { t_min_tau1: 1.0, t_max_tau1: 1e4, points: 200 },
            switch_tau1: None,
        },
    ]
}

pub fn builtin(name: &str) -> Result<ScenarioConfig> {
    builtin_scenarios()
        .into_iter()
        .find(|s| s.name == name)
        .ok_or_else(|| Error::Config(format!("unknown builtin scenario '{name}'")))
}

/// One slope expectation and what the data showed.
#[derive(Debug, Clone, Serialize)]
pub struct RegimeCheck {
    pub label: String,
    pub target: f64,
    pub found: Option<FoundSegment>,
    pub pass: bool,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct FoundSegment {
    pub t_lo: f64,
    pub t_hi: f64,
    pub rate: f64,
    pub power: f64,
    pub relative_error: f64,
}

impl From<Segment> for FoundSegment {
    fn from(s: Segment) -> Self {
        FoundSegment {
            t_lo: s.t_lo,
            t_hi: s.t_hi,
            rate: s.rate,
            power: s.power,
            relative_error: s.relative_error,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct InvariantCheck {
    pub label: String,
    pub value: f64,
    pub bound: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScenarioReport {
    pub name: String,
    pub tau1: Option<f64>,
    pub regimes: Vec<RegimeCheck>,
    pub invariants: Vec<InvariantCheck>,
    pub pass: bool,
}

impl ScenarioReport {
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "scenario {}", self.name).unwrap();
        if let Some(tau1) = self.tau1 {
            writeln!(out, "  tau1 = {tau1:.6}").unwrap();
        }
        for r in &self.regimes {
            match &r.found {
                Some(f) => writeln!(
                    out,
                    "  [{}] {}: target {:+.4}, fitted {:+.4} (power {:+.2}) on t in [{:.4}, {:.4}], rel err {:.2}%",
                    if r.pass { "pass" } else { "FAIL" },
                    r.label,
                    r.target,
                    f.rate,
                    f.power,
                    f.t_lo,
                    f.t_hi,
                    100.0 * f.relative_error
                )
                .unwrap(),
                None => writeln!(
                    out,
                    "  [{}] {}: target {:+.4}, no matching segment",
                    if r.pass { "pass" } else { "FAIL" },
                    r.label,
                    r.target
                )
                .unwrap(),
            }
        }
        for c in &self.invariants {
            writeln!(
                out,
                "  [{}] {}: {:.3e} (bound {:.3e})",
                if c.pass { "pass" } else { "FAIL" },
                c.label,
                c.value,
                c.bound
            )
            .unwrap();
        }
        writeln!(out, "  overall: {}", if self.pass { "pass" } else { "FAIL" }).unwrap();
        out
    }
}

pub fn series_csv(series: &DecaySeries) -> String {
    let mut out = String::from("t_abs,t_over_tau1,S,lnS,P,lnP,form\n");
    for i in 0..series.len() {
        writeln!(
            out,
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{}",
            series.times[i],
            series.t_over_tau1[i],
            series.s[i],
            series.s[i].max(1e-300).ln(),
            series.p[i],
            series.p[i].max(1e-300).ln(),
            series.form[i]
        )
        .unwrap();
    }
    out
}

/// Slope targets of the exponential regimes per kind, in time order, plus
/// the power-band each must satisfy (near zero for pure exponentials, near
/// -3 for the mixed-term region of the antisymmetric state).
fn regime_targets(model: &DecayModel) -> Vec<(String, f64, (f64, f64))> {
    let g = |p: usize| model.basis.state(p).pole.width();
    let (g1, g2, g6) = (g(1), g(2), g(6));
    let pure = (-0.8, 0.8);
    match model.spec.kind {
        InitialStateKind::FactorizedSymmetric => vec![
            ("-2*Gamma_6".into(), -2.0 * g6, pure),
            ("-2*Gamma_1".into(), -2.0 * g1, pure),
        ],
        InitialStateKind::EntangledSymmetric => vec![
            ("-(Gamma_1+Gamma_6)".into(), -(g1 + g6), pure),
            ("-2*Gamma_1".into(), -2.0 * g1, pure),
        ],
        InitialStateKind::EntangledAntisymmetric => vec![
            ("-(Gamma_1+Gamma_6)".into(), -(g1 + g6), pure),
            ("-(Gamma_1+Gamma_2)".into(), -(g1 + g2), pure),
            ("-Gamma_1 (mixed term)".into(), -g1, (-4.5, -1.8)),
        ],
    }
}

const SLOPE_TOL: f64 = 0.05;
const SEGMENT_LOG_WIDTH: f64 = 0.5;

/// Locate each expected exponential regime in the survival series and, for
/// the antisymmetric kind, verify that no -2 Gamma_p segment appears.
pub fn exponential_regime_checks(model: &DecayModel, series: &DecaySeries) -> Vec<RegimeCheck> {
    let mut checks = Vec::new();
    let targets = regime_targets(model);
    let mut last_t = 0.0f64;
    for (label, target, band) in &targets {
        let seg = detect_segment(&series.times, &series.s, *target, SLOPE_TOL, SEGMENT_LOG_WIDTH, *band);
        let ordered = seg.map_or(false, |s| s.t_hi > last_t);
        if let Some(s) = seg {
            last_t = last_t.max(s.t_lo);
        }
        checks.push(RegimeCheck {
            label: label.clone(),
            target: *target,
            found: seg.map(Into::into),
            pass: seg.is_some() && ordered,
        });
    }
    if model.spec.kind == InitialStateKind::EntangledAntisymmetric {
        // the Pauli cancellation removes every -2 Gamma_p slope; the claim
        // uses the strict pure-exponential detector, and a hit is excused
        // when the target collides with a legitimate rate within tolerance
        // (e.g. 2 Gamma_4 is within 2% of Gamma_1 + Gamma_6 at lambda = 6)
        // or when a legitimate regime explains the fitted rate better
        for p in 1..=model.basis.len() {
            let target = -2.0 * model.basis.state(p).pole.width();
            let seg = detect_pure_segment(&series.times, &series.s, target, SLOPE_TOL, 0.4);
            let pass = match seg {
                None => true,
                Some(s) => targets.iter().any(|(_, legit, _)| {
                    (legit - target).abs() / target.abs() < SLOPE_TOL
                        || (s.rate - legit).abs() / legit.abs()
                            < (s.rate - target).abs() / target.abs()
                }),
            };
            checks.push(RegimeCheck {
                label: format!("no -2*Gamma_{p} segment"),
                target,
                found: seg.map(Into::into),
                pass,
            });
        }
    }
    checks
}

/// Log-log slope of S and P over the last decade of the grid against the
/// kind's predicted power law.
pub fn power_law_checks(model: &DecayModel, series: &DecaySeries) -> Vec<RegimeCheck> {
    let (target, tol) = match model.spec.kind {
        InitialStateKind::EntangledAntisymmetric => (-10.0, 0.3),
        _ => (-6.0, 0.2),
    };
    let t_hi = *series.times.last().unwrap();
    let window = (t_hi / 10.0, t_hi);
    let mut out = Vec::new();
    for (label, values) in [("S power law", &series.s), ("P power law", &series.p)] {
        let fit = fit_slope(&series.times, values, window, FitAxis::Loglog);
        let check = match fit {
            Ok(f) => RegimeCheck {
                label: label.into(),
                target,
                found: Some(FoundSegment {
                    t_lo: f.t_lo,
                    t_hi: f.t_hi,
                    rate: f.slope,
                    power: f.slope,
                    relative_error: (f.slope - target).abs() / target.abs(),
                }),
                pass: (f.slope - target).abs() <= tol,
            },
            Err(_) => RegimeCheck { label: label.into(), target, found: None, pass: false },
        };
        out.push(check);
    }
    out
}

fn write(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents)?;
    Ok(())
}

/// Run one scenario, writing every output file under `out_dir`.
pub fn run_scenario(config: &ScenarioConfig, out_dir: &Path) -> Result<ScenarioReport> {
    config.validate()?;
    std::fs::create_dir_all(out_dir)?;
    let params = ModelParams::new(config.lambda, config.a, config.n_poles)?;
    let basis = ResonantBasis::build(params)?;
    write(&out_dir.join("poles.csv"), &pole_table_csv(&basis))?;
    match config.state_spec()? {
        Some(spec) => run_decay_scenario(config, basis, spec, out_dir),
        None => run_free_scenario(config, out_dir),
    }
}

fn run_decay_scenario(
    config: &ScenarioConfig,
    basis: ResonantBasis,
    spec: InitialStateSpec,
    out_dir: &Path,
) -> Result<ScenarioReport> {
    let mut model = DecayModel::new(basis, spec)?;
    let tau1 = model.tau1();
    if let Some(s) = config.switch_tau1 {
        model = model.with_switch_time(s * tau1);
    }
    let grid = log_grid(
        config.grid.t_min_tau1 * tau1,
        config.grid.t_max_tau1 * tau1,
        config.grid.points,
    );
    let series = decay_series(&model, &grid)?;
    write(&out_dir.join("series.csv"), &series_csv(&series))?;

    // inset variants: purely exponential pole sums, and exponential + mixed
    let mut variants = String::from("t_abs,t_over_tau1,S_exp,P_exp,S_exp_mixed,P_exp_mixed\n");
    for &t in grid.iter().filter(|&&t| t <= 10.0 * tau1) {
        let (s_e, p_e) = model.exponential_contributions(t)?;
        let (s_m, p_m) = model.exp_mixed_contributions(t.max(1e-6 * tau1))?;
        writeln!(
            variants,
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            t,
            t / tau1,
            s_e,
            p_e,
            s_m,
            p_m
        )
        .unwrap();
    }
    write(&out_dir.join("exp_contributions.csv"), &variants)?;

    let mut regimes = exponential_regime_checks(&model, &series);
    regimes.extend(power_law_checks(&model, &series));

    let mut invariants = Vec::new();
    for s in [model.spec.alpha, model.spec.beta] {
        let defect = sum_rule_defect(&model.basis, s);
        invariants.push(InvariantCheck {
            label: format!("sum-rule defect, s = {s}"),
            value: defect,
            bound: 1e-3,
            pass: defect <= 1e-3,
        });
        invariants.push(InvariantCheck {
            label: format!("sum-rule imaginary part, s = {s} (diagnostic)"),
            value: sum_rule_imaginary(&model.basis, s),
            bound: f64::INFINITY,
            pass: true,
        });
        if model.spec.kind == InitialStateKind::FactorizedSymmetric {
            break;
        }
    }
    let t_switch = model.switch_time;
    let se = model.survival_probability_exact(t_switch)?;
    let sa = model.survival_probability_asymptotic(t_switch)?;
    let dev = (se - sa).abs() / se.max(1e-300);
    invariants.push(InvariantCheck {
        label: "exact vs asymptotic S at the switch time".into(),
        value: dev,
        bound: 0.06,
        pass: dev <= 0.06,
    });

    let pass = regimes.iter().all(|r| r.pass) && invariants.iter().all(|c| c.pass);
    let report = ScenarioReport { name: config.name.clone(), tau1: Some(tau1), regimes, invariants, pass };
    write(&out_dir.join("report.txt"), &report.render_text())?;
    write(
        &out_dir.join("report.json"),
        &serde_json::to_string_pretty(&report).expect("report serialization"),
    )?;
    Ok(report)
}

fn run_free_scenario(config: &ScenarioConfig, out_dir: &Path) -> Result<ScenarioReport> {
    let params = ModelParams::new(0.0, config.a, 1)?;
    let basis = ResonantBasis::build(params)?;
    let (r1, r2) = (0.3 * config.a, 0.6 * config.a);
    let grid = log_grid(config.grid.t_min_tau1, config.grid.t_max_tau1, config.grid.points);
    let sym = InitialStateSpec::new(InitialStateKind::EntangledSymmetric, config.alpha, config.beta)?;
    let anti =
        InitialStateSpec::new(InitialStateKind::EntangledAntisymmetric, config.alpha, config.beta)?;
    let mut csv = String::from("t_abs,abs_psi_symmetric,abs_psi_antisymmetric\n");
    let mut vs = Vec::new();
    let mut va = Vec::new();
    for &t in &grid {
        let s = psi_asymptotic(&basis, &sym, r1, r2, t)?.norm();
        let a = psi_asymptotic(&basis, &anti, r1, r2, t)?.norm();
        writeln!(csv, "{t:.16e},{s:.16e},{a:.16e}").unwrap();
        vs.push(s);
        va.push(a);
    }
    write(&out_dir.join("free_series.csv"), &csv)?;
    let t_hi = *grid.last().unwrap();
    let window = (t_hi / 10.0, t_hi);
    let mut regimes = Vec::new();
    for (label, vals, target) in
        [("symmetric |Psi|", &vs, -3.0), ("antisymmetric |Psi|", &va, -5.0)]
    {
        let fit = fit_slope(&grid, vals, window, FitAxis::Loglog)?;
        regimes.push(RegimeCheck {
            label: label.into(),
            target,
            found: Some(FoundSegment {
                t_lo: fit.t_lo,
                t_hi: fit.t_hi,
                rate: fit.slope,
                power: fit.slope,
                relative_error: (fit.slope - target).abs() / target.abs(),
            }),
            pass: (fit.slope - target).abs() <= 0.1,
        });
    }
    let pass = regimes.iter().all(|r| r.pass);
    let report =
        ScenarioReport { name: config.name.clone(), tau1: None, regimes, invariants: Vec::new(), pass };
    write(&out_dir.join("report.txt"), &report.render_text())?;
    write(
        &out_dir.join("report.json"),
        &serde_json::to_string_pretty(&report).expect("report serialization"),
    )?;
    Ok(report)
}

/// Dry run: parse, validate, and build the pole and overlap tables without
/// writing anything.
pub fn validate_config(config: &ScenarioConfig) -> Result<()> {
    config.validate()?;
    let params = ModelParams::new(config.lambda, config.a, config.n_poles)?;
    let basis = ResonantBasis::build(params)?;
    if let Some(spec) = config.state_spec()? {
        DecayModel::new(basis, spec)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_are_valid() {
        let names: Vec<String> = builtin_scenarios().iter().map(|s| s.name.clone()).collect();
        assert_eq!(names, ["fig1", "fig2", "fig3", "free"]);
        for cfg in builtin_scenarios() {
            cfg.validate().unwrap();
        }
        assert!(builtin("fig2").is_ok());
        assert!(builtin("nope").is_err());
    }

    #[test]
    fn toml_round_trip_and_rejections() {
        let cfg = ScenarioConfig::from_toml(
            r#"
name = "custom"
kind = "entangled_symmetric"
alpha = 1
beta = 6

[grid]
t_min_tau1 = 0.01
t_max_tau1 = 10.0
points = 50
"#,
        )
        .unwrap();
        assert_eq!(cfg.lambda, 6.0);
        assert_eq!(cfg.grid.points, 50);

        let bad_grid = ScenarioConfig::from_toml(
            r#"
name = "x"
kind = "factorized_symmetric"
alpha = 6
beta = 6

[grid]
t_min_tau1 = 10.0
t_max_tau1 = 1.0
"#,
        );
        assert!(bad_grid.is_err());

        let bad_anti = ScenarioConfig::from_toml(
            r#"
name = "x"
kind = "entangled_antisymmetric"
alpha = 3
beta = 3
"#,
        );
        assert!(bad_anti.is_err());
    }

    #[test]
    fn free_scenario_runs() {
        let dir = tempfile::tempdir().unwrap();
        let report = run_scenario(&builtin("free").unwrap(), dir.path()).unwrap();
        assert!(report.pass, "{}", report.render_text());
        assert!(dir.path().join("free_series.csv").exists());
        assert!(dir.path().join("poles.csv").exists());
        assert!(dir.path().join("report.json").exists());
    }

    #[test]
    fn deterministic_outputs() {
        let dir1 = tempfile::tempdir().unwrap();
        let dir2 = tempfile::tempdir().unwrap();
        let cfg = builtin("free").unwrap();
        run_scenario(&cfg, dir1.path()).unwrap();
        run_scenario(&cfg, dir2.path()).unwrap();
        let a = std::fs::read(dir1.path().join("free_series.csv")).unwrap();
        let b = std::fs::read(dir2.path().join("free_series.csv")).unwrap();
        assert_eq!(a, b);
    }
}
