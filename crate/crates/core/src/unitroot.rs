//! Augmented Dickey-Fuller tests and integration-order classification.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dist::Level;
use crate::ols::{self, DesignMatrix, OlsError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AdfError {
    #[error("series has zero variance")]
    ConstantSeries,
    #[error("series too short: {len} observations, need at least {needed}")]
    SeriesTooShort { len: usize, needed: usize },
    #[error(transparent)]
    Ols(#[from] OlsError),
}

pub type Result<T> = std::result::Result<T, AdfError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Deterministic {
    None,
    #[default]
    Constant,
    ConstantTrend,
}

impl Deterministic {
    fn terms(self) -> usize {
        match self {
            Deterministic::None => 0,
            Deterministic::Constant => 1,
            Deterministic::ConstantTrend => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum LagSelection {
    Fixed(usize),
    #[default]
    Aic,
    Bic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(default)]
pub struct AdfConfig {
    pub deterministic: Deterministic,
    /// `None` uses the Schwert rule.
    pub max_lag: Option<usize>,
    pub selection: LagSelection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdfResult {
    pub statistic: f64,
    pub lags_used: usize,
    pub max_lag: usize,
    pub nobs: usize,
    pub deterministic: Deterministic,
    pub critical_values: BTreeMap<Level, f64>,
    pub reject_unit_root: BTreeMap<Level, bool>,
}

impl AdfResult {
    pub fn rejects(&self, level: Level) -> bool {
        self.statistic < critical_value(self.deterministic, level, self.nobs)
    }
}

/// MacKinnon (2010) response surfaces for the single-series tau statistic:
/// `b_inf + b1/T + b2/T^2 + b3/T^3`, rows 1%, 5%, 10%.
const TAU_NONE: [[f64; 4]; 3] = [
    [-2.56574, -2.2358, -3.627, 0.0],
    [-1.94100, -0.2686, -3.365, 31.223],
    [-1.61682, 0.2656, -2.714, 25.364],
];
const TAU_CONST: [[f64; 4]; 3] = [
    [-3.43035, -6.5393, -16.786, -79.433],
    [-2.86154, -2.8903, -4.234, -40.040],
    [-2.56677, -1.5384, -2.809, 0.0],
];
const TAU_TREND: [[f64; 4]; 3] = [
    [-3.95877, -9.0531, -28.428, -134.155],
    [-3.41049, -4.3904, -9.036, -45.374],
    [-3.12705, -2.5856, -3.925, -22.380],
];

pub const ADF_LEVELS: [Level; 3] = [Level::One, Level::Five, Level::Ten];

/// Finite-sample ADF critical value; `nobs` is the regression sample size.
/// 2.5% is interpolated linearly between the 1% and 5% surfaces.
pub fn critical_value(det: Deterministic, level: Level, nobs: usize) -> f64 {
    let table = match det {
        Deterministic::None => &TAU_NONE,
        Deterministic::Constant => &TAU_CONST,
        Deterministic::ConstantTrend => &TAU_TREND,
    };
    let eval = |row: &[f64; 4]| {
        let t = nobs as f64;
        row[0] + row[1] / t + row[2] / (t * t) + row[3] / (t * t * t)
    };
    match level {
        Level::One => eval(&table[0]),
        Level::Five => eval(&table[1]),
        Level::Ten => eval(&table[2]),
        Level::TwoHalf => 0.625 * eval(&table[1]) + 0.375 * eval(&table[0]),
    }
}

/// Schwert's rule, floor(12 (T/100)^(1/4)).
pub fn schwert_max_lag(n: usize) -> usize {
    (12.0 * (n as f64 / 100.0).powf(0.25)).floor() as usize
}

fn design(y: &[f64], det: Deterministic, p: usize, first: usize) -> (DesignMatrix, Vec<f64>) {
    // rows t = first..n-1 (0-based), regressand dy_t = y_t - y_{t-1}
    let n = y.len();
    let rows = first..n;
    let dy = |t: usize| y[t] - y[t - 1];
    let mut names = vec!["y(-1)".to_string()];
    let mut cols = vec![rows.clone().map(|t| y[t - 1]).collect::<Vec<_>>()];
    if det.terms() >= 1 {
        names.push("const".into());
        cols.push(vec![1.0; n - first]);
    }
    if det.terms() == 2 {
        names.push("trend".into());
        cols.push(rows.clone().map(|t| t as f64).collect());
    }
    for i in 1..=p {
        names.push(format!("dy(-{i})"));
        cols.push(rows.clone().map(|t| dy(t - i)).collect());
    }
    let target = rows.map(dy).collect();
    (DesignMatrix::from_columns(names, cols).expect("aligned columns"), target)
}

/// ADF test on `y` at the configured deterministic case and lag rule.
pub fn adf_test(y: &[f64], cfg: &AdfConfig) -> Result<AdfResult> {
    let n = y.len();
    let det = cfg.deterministic;
    let base = 1 + det.terms();
    // with lag p the sample is n-1-p rows for base+p parameters
    let feasible = |p: usize| n > 2 * p + base + 1 + 1;
    if n < 3 || !feasible(0) {
        return Err(AdfError::SeriesTooShort { len: n, needed: base + 3 });
    }
    let mean = y.iter().sum::<f64>() / n as f64;
    if y.iter().all(|v| (v - mean).abs() <= 1e-14 * mean.abs().max(1.0)) {
        return Err(AdfError::ConstantSeries);
    }
    let max_lag = match (cfg.selection, cfg.max_lag) {
        (LagSelection::Fixed(p), _) => p,
        (_, Some(m)) => m,
        (_, None) => {
            let mut m = schwert_max_lag(n);
            while m > 0 && !feasible(m) {
                m -= 1;
            }
            m
        }
    };
    if !feasible(max_lag) {
        return Err(AdfError::SeriesTooShort { len: n, needed: 2 * max_lag + base + 3 });
    }
    let lags_used = match cfg.selection {
        LagSelection::Fixed(p) => p,
        LagSelection::Aic | LagSelection::Bic => {
            let first = max_lag + 1;
            let mut best: Option<(f64, usize)> = None;
            for p in 0..=max_lag {
                let (x, target) = design(y, det, p, first);
                // a collinear candidate simply drops out of the comparison
                let fit = match ols::fit_ols(&x, &target) {
                    Ok(f) => f,
                    Err(OlsError::RankDeficient(_)) => continue,
                    Err(e) => return Err(e.into()),
                };
                let crit = if cfg.selection == LagSelection::Aic { fit.aic } else { fit.bic };
                if best.is_none_or(|(b, _)| crit < b) {
                    best = Some((crit, p));
                }
            }
            best.map(|(_, p)| p).unwrap_or(0)
        }
    };
    let (x, target) = design(y, det, lags_used, lags_used + 1);
    let fit = ols::fit_ols(&x, &target)?;
    let statistic = fit.t_values[0];
    let nobs = fit.nobs;
    let critical_values: BTreeMap<Level, f64> =
        ADF_LEVELS.iter().map(|&l| (l, critical_value(det, l, nobs))).collect();
    let reject_unit_root = critical_values.iter().map(|(&l, &c)| (l, statistic < c)).collect();
    Ok(AdfResult {
        statistic,
        lags_used,
        max_lag,
        nobs,
        deterministic: det,
        critical_values,
        reject_unit_root,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Order {
    I0,
    I1,
    I2Plus,
}

impl std::fmt::Display for Order {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Order::I0 => "I(0)",
            Order::I1 => "I(1)",
            Order::I2Plus => "I(2+)",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntegrationOrder {
    pub order: Order,
    pub level_result: AdfResult,
    pub diff_result: Option<AdfResult>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ClassifyConfig {
    #[serde(flatten)]
    pub adf: AdfConfig,
    pub level: Level,
}

impl Default for ClassifyConfig {
    fn default() -> Self {
        ClassifyConfig { adf: AdfConfig::default(), level: Level::Five }
    }
}

/// Tests the level and, if a unit root is not rejected, the first difference.
pub fn classify_integration(y: &[f64], cfg: &ClassifyConfig) -> Result<IntegrationOrder> {
    let level_result = adf_test(y, &cfg.adf)?;
    if level_result.rejects(cfg.level) {
        return Ok(IntegrationOrder { order: Order::I0, level_result, diff_result: None });
    }
    let dy: Vec<f64> = y.windows(2).map(|w| w[1] - w[0]).collect();
    let diff_result = adf_test(&dy, &cfg.adf)?;
    let order = if diff_result.rejects(cfg.level) { Order::I1 } else { Order::I2Plus };
    Ok(IntegrationOrder { order, level_result, diff_result: Some(diff_result) })
}
