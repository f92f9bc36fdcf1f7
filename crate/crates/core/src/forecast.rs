//! Dynamic out-of-sample forecasts from a fitted levels ARDL.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ardl::{levels_row, ArdlFit};
use crate::frame::{DummyRule, TimePoint};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ForecastError {
    #[error("horizon must be at least 1")]
    ZeroHorizon,
    #[error("scenario is incomplete: {0}")]
    IncompleteScenario(String),
}

pub type Result<T> = std::result::Result<T, ForecastError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum ScenarioKind {
    #[default]
    HoldLast,
    Drift,
    User,
}

impl std::fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ScenarioKind::HoldLast => "hold-last",
            ScenarioKind::Drift => "drift",
            ScenarioKind::User => "user",
        })
    }
}

/// Future values of every regressor (and fixed regressor) over the horizon.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExogScenario {
    pub kind: ScenarioKind,
    pub paths: BTreeMap<String, Vec<f64>>,
    /// Per-regressor monthly increments used by a drift scenario.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub growth: BTreeMap<String, f64>,
    #[serde(default)]
    pub notes: Vec<String>,
}

fn last(v: &[f64]) -> f64 {
    *v.last().expect("non-empty series")
}

fn fixed_paths(
    fit: &ArdlFit,
    horizon: usize,
    rules: &BTreeMap<String, DummyRule>,
    origin: TimePoint,
    notes: &mut Vec<String>,
) -> BTreeMap<String, Vec<f64>> {
    fit.spec
        .fixed
        .iter()
        .zip(&fit.data.fixed)
        .map(|(f, v)| {
            let path = match rules.get(&f.name) {
                Some(rule) => (1..=horizon).map(|h| rule.value_at(origin.add_months(h as i64))).collect(),
                None => {
                    notes.push(format!("{} held at its last value (no rule given)", f.name));
                    vec![last(v); horizon]
                }
            };
            (f.name.clone(), path)
        })
        .collect()
}

pub fn origin(fit: &ArdlFit) -> TimePoint {
    fit.data
        .start
        .unwrap_or(TimePoint { year: 1, month: 1 })
        .add_months(fit.data.len() as i64 - 1)
}

impl ExogScenario {
    /// Every regressor stays at its last observed value.
    pub fn hold_last(fit: &ArdlFit, horizon: usize, rules: &BTreeMap<String, DummyRule>) -> ExogScenario {
        let mut notes = vec!["regressor paths are assumed flat at their last observed values".to_string()];
        let mut paths: BTreeMap<String, Vec<f64>> = fit
            .spec
            .regressors
            .iter()
            .zip(&fit.data.x)
            .map(|(n, x)| (n.clone(), vec![last(x); horizon]))
            .collect();
        paths.extend(fixed_paths(fit, horizon, rules, origin(fit), &mut notes));
        ExogScenario { kind: ScenarioKind::HoldLast, paths, growth: BTreeMap::new(), notes }
    }

    /// Additive monthly increments per regressor; regressors without an
    /// explicit increment use their average in-sample monthly change.
    pub fn drift(
        fit: &ArdlFit,
        horizon: usize,
        growth: &BTreeMap<String, f64>,
        rules: &BTreeMap<String, DummyRule>,
    ) -> ExogScenario {
        let mut notes = Vec::new();
        let mut used = BTreeMap::new();
        let mut paths: BTreeMap<String, Vec<f64>> = BTreeMap::new();
        for (n, x) in fit.spec.regressors.iter().zip(&fit.data.x) {
            let g = match growth.get(n) {
                Some(&g) => g,
                None => {
                    let g = if x.len() > 1 { (last(x) - x[0]) / (x.len() - 1) as f64 } else { 0.0 };
                    notes.push(format!("{n} drifts at its in-sample average monthly change {g:.6}"));
                    g
                }
            };
            used.insert(n.clone(), g);
            paths.insert(n.clone(), (1..=horizon).map(|h| last(x) + g * h as f64).collect());
        }
        paths.extend(fixed_paths(fit, horizon, rules, origin(fit), &mut notes));
        ExogScenario { kind: ScenarioKind::Drift, paths, growth: used, notes }
    }

    pub fn user(paths: BTreeMap<String, Vec<f64>>) -> ExogScenario {
        ExogScenario { kind: ScenarioKind::User, paths, growth: BTreeMap::new(), notes: Vec::new() }
    }

    /// Adds rule-based (or hold-last) paths for fixed regressors the
    /// scenario does not cover.
    pub fn with_fixed_defaults(mut self, fit: &ArdlFit, horizon: usize, rules: &BTreeMap<String, DummyRule>) -> ExogScenario {
        let mut notes = Vec::new();
        for (name, path) in fixed_paths(fit, horizon, rules, origin(fit), &mut notes) {
            if self.paths.contains_key(&name) {
                notes.retain(|n| !n.starts_with(&format!("{name} ")));
            } else {
                self.paths.insert(name, path);
            }
        }
        self.notes.extend(notes);
        self
    }

    fn path(&self, name: &str, horizon: usize) -> Result<&[f64]> {
        match self.paths.get(name) {
            Some(p) if p.len() >= horizon => Ok(&p[..horizon]),
            Some(p) => Err(ForecastError::IncompleteScenario(format!("{name} has {} of {horizon} values", p.len()))),
            None => Err(ForecastError::IncompleteScenario(format!("no path for {name}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Forecast {
    pub origin: TimePoint,
    pub horizon: usize,
    pub times: Vec<TimePoint>,
    pub point: Vec<f64>,
    pub scenario: ExogScenario,
    pub spectral_radius: f64,
    pub stable: bool,
}

/// Largest modulus among the roots of the autoregressive companion matrix.
pub fn spectral_radius(fit: &ArdlFit) -> f64 {
    let p = fit.order.p;
    let a: Vec<f64> = (1..=p)
        .map(|i| fit.levels_fit.coef(&format!("{}(-{i})", fit.spec.dependent)).unwrap_or(0.0))
        .collect();
    if p == 1 {
        return a[0].abs();
    }
    let mut m = DMatrix::<f64>::zeros(p, p);
    for (j, v) in a.iter().enumerate() {
        m[(0, j)] = *v;
    }
    for i in 1..p {
        m[(i, i - 1)] = 1.0;
    }
    m.complex_eigenvalues().iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Iterates the levels equation forward, feeding back its own predictions.
pub fn dynamic_forecast(fit: &ArdlFit, scenario: &ExogScenario, horizon: usize) -> Result<Forecast> {
    if horizon == 0 {
        return Err(ForecastError::ZeroHorizon);
    }
    let mut data = fit.data.clone();
    for (j, name) in fit.spec.regressors.iter().enumerate() {
        data.x[j].extend_from_slice(scenario.path(name, horizon)?);
    }
    for (m, f) in fit.spec.fixed.iter().enumerate() {
        data.fixed[m].extend_from_slice(scenario.path(&f.name, horizon)?);
    }
    let n = fit.data.len();
    let beta = &fit.levels_fit.coefficients;
    let mut point = Vec::with_capacity(horizon);
    for t in n..n + horizon {
        data.y.push(0.0);
        let row = levels_row(&fit.spec, &fit.order, &data, t);
        let v: f64 = row.iter().zip(beta).map(|(a, b)| a * b).sum();
        data.y[t] = v;
        point.push(v);
    }
    let o = origin(fit);
    let rho = spectral_radius(fit);
    Ok(Forecast {
        origin: o,
        horizon,
        times: (1..=horizon).map(|h| o.add_months(h as i64)).collect(),
        point,
        scenario: scenario.clone(),
        spectral_radius: rho,
        stable: rho < 1.0,
    })
}

/// Steady state implied by the final scenario values, when the model has no
/// trend and stable dynamics.
pub fn steady_state(fit: &ArdlFit, scenario: &ExogScenario) -> Option<f64> {
    if fit.spec.trend {
        return None;
    }
    let fit_ = &fit.levels_fit;
    let ar: f64 = (1..=fit.order.p)
        .map(|i| fit_.coef(&format!("{}(-{i})", fit.spec.dependent)).unwrap_or(0.0))
        .sum();
    if (1.0 - ar).abs() < 1e-12 {
        return None;
    }
    let mut num = fit_.coef("C").unwrap_or(0.0);
    let names = fit.spec.regressors.iter().zip(fit.order.q.iter().copied());
    let fixed = fit.spec.fixed.iter().map(|f| (&f.name, f.lags));
    for (name, lags) in names.chain(fixed) {
        let v = *scenario.paths.get(name)?.last()?;
        let s: f64 = (0..=lags)
            .map(|i| fit_.coef(&if i == 0 { name.clone() } else { format!("{name}(-{i})") }).unwrap_or(0.0))
            .sum();
        num += s * v;
    }
    Some(num / (1.0 - ar))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Convergence {
    pub steady_state: f64,
    /// Forecast step from which all regressor inputs are at their final values.
    pub settled_from: usize,
    /// Steps m after `settled_from` until |a1|^m < 0.01.
    pub steps: usize,
    pub initial_gap: f64,
    pub final_gap: f64,
    pub met: bool,
}

/// For ARDL(1, q) under a constant scenario: after step q the gap to the
/// steady state must shrink by at least 99% within m steps, where m is the
/// first integer with |a1|^m < 0.01.
pub fn convergence_check(fit: &ArdlFit, fc: &Forecast) -> Option<Convergence> {
    if fit.order.p != 1 {
        return None;
    }
    let a1 = fit.levels_fit.coef(&format!("{}(-1)", fit.spec.dependent))?;
    if a1.abs() >= 1.0 {
        return None;
    }
    let y_star = steady_state(fit, &fc.scenario)?;
    let settled = fit.order.q.iter().copied().max().unwrap_or(0).max(fit.spec.fixed.iter().map(|f| f.lags).max().unwrap_or(0));
    let steps = if a1 == 0.0 { 1 } else { (0.01f64.ln() / a1.abs().ln()).floor() as usize + 1 };
    let at = |h: usize| if h == 0 { *fit.data.y.last().unwrap() } else { fc.point[h - 1] };
    if settled + steps > fc.horizon {
        return None;
    }
    let initial_gap = (at(settled) - y_star).abs();
    let final_gap = (at(settled + steps) - y_star).abs();
    let met = final_gap < 0.01 * initial_gap || final_gap <= 1e-12 * y_star.abs().max(1.0);
    Some(Convergence { steady_state: y_star, settled_from: settled, steps, initial_gap, final_gap, met })
}
