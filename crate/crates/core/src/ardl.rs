//! ARDL order selection, levels estimation, the conditional error-correction
//! reparameterization, long-run coefficients and the restricted ECM.
//!
//! Conditional ECM layout for ARDL(p, q1..qk):
//!
//! ```text
//! D(y)_t = c [+ d t] + b1 y_{t-1} + sum_j bj L_j
//!          + sum_{i=1}^{p-1} D(y)_{t-i} + sum_j sum_{i=0}^{qj-1} D(x_j)_{t-i} + fixed
//! ```
//!
//! where `L_j = x_{j,t-1}` when `qj >= 1`. For `qj = 0` there is no
//! difference block, and the level column is `x_{j,t}` itself, which keeps
//! the reparameterization exact: fitted values and RSS match the levels fit.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dist;
use crate::frame::{Dataset, TimePoint};
use crate::ols::{self, DesignMatrix, OlsError, OlsFit};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ArdlError {
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("invalid model specification: {0}")]
    InvalidSpec(String),
    #[error("order out of bounds: {0}")]
    OrderOutOfBounds(String),
    #[error("insufficient sample: {nobs} usable observations for {params} parameters")]
    InsufficientSample { nobs: usize, params: usize },
    #[error("order grid has {candidates} candidates, above the cap of {cap}; lower max_lag or the regressor count")]
    GridTooLarge { candidates: u128, cap: u64 },
    #[error("no candidate order could be estimated")]
    NoFeasibleCandidate,
    #[error("adjustment coefficient {0:e} is numerically zero; long-run coefficients undefined")]
    DegenerateAdjustment(f64),
    #[error(transparent)]
    Ols(OlsError),
}

impl From<OlsError> for ArdlError {
    fn from(e: OlsError) -> Self {
        match e {
            OlsError::TooFewObservations { nobs, params } => ArdlError::InsufficientSample { nobs, params },
            other => ArdlError::Ols(other),
        }
    }
}

pub type Result<T> = std::result::Result<T, ArdlError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Criterion {
    #[default]
    Aic,
    Bic,
}

impl Criterion {
    fn value(self, rss: f64, nobs: usize, params: usize) -> f64 {
        let n = nobs as f64;
        let ll = -0.5 * n * (1.0 + (2.0 * std::f64::consts::PI).ln() + (rss / n).ln());
        match self {
            Criterion::Aic => -2.0 * ll + 2.0 * params as f64,
            Criterion::Bic => -2.0 * ll + params as f64 * n.ln(),
        }
    }
}

/// A regressor outside the order search (typically a dummy), entering at
/// lags `0..=lags`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixedRegressor {
    pub name: String,
    #[serde(default)]
    pub lags: usize,
}

pub const DEFAULT_GRID_CAP: u64 = 1_000_000;

fn default_cap() -> u64 {
    DEFAULT_GRID_CAP
}

fn default_true() -> bool {
    true
}

fn default_max_lag() -> usize {
    3
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub dependent: String,
    pub regressors: Vec<String>,
    #[serde(default)]
    pub fixed: Vec<FixedRegressor>,
    #[serde(default = "default_max_lag")]
    pub max_lag: usize,
    #[serde(default)]
    pub criterion: Criterion,
    #[serde(default = "default_true")]
    pub intercept: bool,
    #[serde(default)]
    pub trend: bool,
    #[serde(default = "default_cap")]
    pub grid_cap: u64,
}

impl ModelSpec {
    pub fn new(dependent: impl Into<String>, regressors: &[&str]) -> ModelSpec {
        ModelSpec {
            dependent: dependent.into(),
            regressors: regressors.iter().map(|s| s.to_string()).collect(),
            fixed: Vec::new(),
            max_lag: default_max_lag(),
            criterion: Criterion::Aic,
            intercept: true,
            trend: false,
            grid_cap: DEFAULT_GRID_CAP,
        }
    }

    pub fn with_fixed(mut self, name: impl Into<String>, lags: usize) -> ModelSpec {
        self.fixed.push(FixedRegressor { name: name.into(), lags });
        self
    }

    pub fn with_max_lag(mut self, n: usize) -> ModelSpec {
        self.max_lag = n;
        self
    }

    pub fn with_criterion(mut self, c: Criterion) -> ModelSpec {
        self.criterion = c;
        self
    }

    pub fn k(&self) -> usize {
        self.regressors.len()
    }

    pub fn validate(&self, d: &Dataset) -> Result<()> {
        if self.regressors.iter().any(|r| *r == self.dependent) {
            return Err(ArdlError::InvalidSpec("dependent variable listed as a regressor".into()));
        }
        if self.fixed.iter().any(|f| f.name == self.dependent || self.regressors.contains(&f.name)) {
            return Err(ArdlError::InvalidSpec("fixed regressor overlaps the searched variables".into()));
        }
        let mut all: Vec<&str> = self.regressors.iter().map(String::as_str).collect();
        all.extend(self.fixed.iter().map(|f| f.name.as_str()));
        let mut sorted = all.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != all.len() {
            return Err(ArdlError::InvalidSpec("duplicate regressor names".into()));
        }
        all.push(&self.dependent);
        for name in all {
            if d.get(name).is_none() {
                return Err(ArdlError::UnknownVariable(name.to_string()));
            }
        }
        if self.max_lag == 0 {
            return Err(ArdlError::InvalidSpec("max_lag must be at least 1".into()));
        }
        Ok(())
    }

    fn fixed_depth(&self) -> usize {
        self.fixed.iter().map(|f| f.lags).max().unwrap_or(0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ArdlOrder {
    pub p: usize,
    pub q: Vec<usize>,
}

impl ArdlOrder {
    pub fn new(p: usize, q: &[usize]) -> ArdlOrder {
        ArdlOrder { p, q: q.to_vec() }
    }

    pub fn max_lag(&self) -> usize {
        self.q.iter().copied().chain([self.p]).max().unwrap_or(0)
    }

    /// Number of lag-structure coefficients (excluding deterministics and
    /// fixed regressors).
    pub fn dynamic_params(&self) -> usize {
        self.p + self.q.iter().map(|q| q + 1).sum::<usize>()
    }
}

impl std::fmt::Display for ArdlOrder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ARDL({}", self.p)?;
        for q in &self.q {
            write!(f, ",{q}")?;
        }
        f.write_str(")")
    }
}

/// The raw series a model is built from, aligned on the dataset index.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ModelData {
    pub start: Option<TimePoint>,
    pub y: Vec<f64>,
    pub x: Vec<Vec<f64>>,
    pub fixed: Vec<Vec<f64>>,
}

impl ModelData {
    pub fn from_dataset(d: &Dataset, spec: &ModelSpec) -> Result<ModelData> {
        let get = |n: &str| {
            d.get(n)
                .map(|s| s.values.clone())
                .ok_or_else(|| ArdlError::UnknownVariable(n.to_string()))
        };
        Ok(ModelData {
            start: Some(d.start()),
            y: get(&spec.dependent)?,
            x: spec.regressors.iter().map(|n| get(n)).collect::<Result<_>>()?,
            fixed: spec.fixed.iter().map(|f| get(&f.name)).collect::<Result<_>>()?,
        })
    }

    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }
}

fn lag_name(name: &str, lag: usize) -> String {
    if lag == 0 {
        name.to_string()
    } else {
        format!("{name}(-{lag})")
    }
}

fn diff_name(name: &str, lag: usize) -> String {
    format!("D({})", lag_name(name, lag))
}

/// Column names of the levels regression, in design order.
pub fn levels_names(spec: &ModelSpec, order: &ArdlOrder) -> Vec<String> {
    let mut names = Vec::new();
    if spec.intercept {
        names.push("C".to_string());
    }
    if spec.trend {
        names.push("TREND".to_string());
    }
    for i in 1..=order.p {
        names.push(lag_name(&spec.dependent, i));
    }
    for (j, r) in spec.regressors.iter().enumerate() {
        for i in 0..=order.q[j] {
            names.push(lag_name(r, i));
        }
    }
    for f in &spec.fixed {
        for i in 0..=f.lags {
            names.push(lag_name(&f.name, i));
        }
    }
    names
}

/// One row of the levels regression at dataset index `t`.
pub fn levels_row(spec: &ModelSpec, order: &ArdlOrder, data: &ModelData, t: usize) -> Vec<f64> {
    let mut row = Vec::with_capacity(levels_names(spec, order).len());
    if spec.intercept {
        row.push(1.0);
    }
    if spec.trend {
        row.push((t + 1) as f64);
    }
    for i in 1..=order.p {
        row.push(data.y[t - i]);
    }
    for (j, x) in data.x.iter().enumerate() {
        for i in 0..=order.q[j] {
            row.push(x[t - i]);
        }
    }
    for (f, v) in spec.fixed.iter().zip(&data.fixed) {
        for i in 0..=f.lags {
            row.push(v[t - i]);
        }
    }
    row
}

#[derive(Debug, Clone)]
pub struct ArdlFit {
    pub spec: ModelSpec,
    pub order: ArdlOrder,
    pub levels_fit: OlsFit,
    pub design: DesignMatrix,
    pub target: Vec<f64>,
    /// Dataset index of the first estimation row.
    pub first: usize,
    pub sample_start: Option<TimePoint>,
    pub sample_end: Option<TimePoint>,
    pub data: ModelData,
}

impl ArdlFit {
    pub fn nobs(&self) -> usize {
        self.levels_fit.nobs
    }

    /// Explicit variable-to-lag mapping of the order, dependent first.
    pub fn order_mapping(&self) -> Vec<(String, usize)> {
        std::iter::once((self.spec.dependent.clone(), self.order.p))
            .chain(self.spec.regressors.iter().cloned().zip(self.order.q.iter().copied()))
            .collect()
    }
}

fn check_order(spec: &ModelSpec, order: &ArdlOrder) -> Result<()> {
    if order.q.len() != spec.k() {
        return Err(ArdlError::OrderOutOfBounds(format!(
            "{} regressor lags given for {} regressors",
            order.q.len(),
            spec.k()
        )));
    }
    if order.p < 1 || order.p > spec.max_lag || order.q.iter().any(|&q| q > spec.max_lag) {
        return Err(ArdlError::OrderOutOfBounds(format!("{order} with max_lag {}", spec.max_lag)));
    }
    Ok(())
}

fn build_fit(spec: &ModelSpec, order: &ArdlOrder, data: ModelData, first: usize) -> Result<ArdlFit> {
    let n = data.len();
    let names = levels_names(spec, order);
    if first >= n || n - first <= names.len() {
        return Err(ArdlError::InsufficientSample { nobs: n.saturating_sub(first), params: names.len() });
    }
    let rows: Vec<Vec<f64>> = (first..n).map(|t| levels_row(spec, order, &data, t)).collect();
    let design = DesignMatrix::from_rows(names, &rows)?;
    let target = data.y[first..].to_vec();
    let levels_fit = ols::fit_ols(&design, &target)?;
    let (sample_start, sample_end) = match data.start {
        Some(s) => (Some(s.add_months(first as i64)), Some(s.add_months(n as i64 - 1))),
        None => (None, None),
    };
    Ok(ArdlFit { spec: spec.clone(), order: order.clone(), levels_fit, design, target, first, sample_start, sample_end, data })
}

/// Levels OLS of the ARDL at the given order, on the longest sample the
/// order allows.
pub fn fit_ardl(d: &Dataset, spec: &ModelSpec, order: &ArdlOrder) -> Result<ArdlFit> {
    spec.validate(d)?;
    fit_ardl_data(ModelData::from_dataset(d, spec)?, spec, order)
}

pub fn fit_ardl_data(data: ModelData, spec: &ModelSpec, order: &ArdlOrder) -> Result<ArdlFit> {
    check_order(spec, order)?;
    let first = order.max_lag().max(spec.fixed_depth());
    build_fit(spec, order, data, first)
}

/// Outcome of the exhaustive order search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSearch {
    pub order: ArdlOrder,
    pub criterion: Criterion,
    pub value: f64,
    pub candidates: usize,
    pub rank_deficient: usize,
    pub nobs: usize,
}

fn grid_size(spec: &ModelSpec) -> u128 {
    let n = spec.max_lag as u128;
    (0..spec.k()).fold(n, |acc, _| acc.saturating_mul(n + 1))
}

fn decode(index: usize, spec: &ModelSpec) -> ArdlOrder {
    // lexicographic enumeration: p slowest, last regressor fastest
    let base = spec.max_lag + 1;
    let mut rest = index;
    let mut q = vec![0; spec.k()];
    for j in (0..spec.k()).rev() {
        q[j] = rest % base;
        rest /= base;
    }
    ArdlOrder { p: rest + 1, q }
}

/// Exhaustive search over p in 1..=N and q_j in 0..=N on the common sample
/// starting at max(N, fixed lag depth). Ties: lower criterion, then fewer
/// parameters, then lexicographically smallest order.
pub fn grid_search(d: &Dataset, spec: &ModelSpec) -> Result<GridSearch> {
    spec.validate(d)?;
    grid_search_data(&ModelData::from_dataset(d, spec)?, spec)
}

pub fn grid_search_data(data: &ModelData, spec: &ModelSpec) -> Result<GridSearch> {
    let size = grid_size(spec);
    if size > spec.grid_cap as u128 {
        return Err(ArdlError::GridTooLarge { candidates: size, cap: spec.grid_cap });
    }
    let widest = ArdlOrder { p: spec.max_lag, q: vec![spec.max_lag; spec.k()] };
    let first = spec.max_lag.max(spec.fixed_depth());
    let n = data.len();
    let master_names = levels_names(spec, &widest);
    if first >= n || n - first <= master_names.len() {
        return Err(ArdlError::InsufficientSample {
            nobs: n.saturating_sub(first),
            params: master_names.len(),
        });
    }
    let rows: Vec<Vec<f64>> = (first..n).map(|t| levels_row(spec, &widest, data, t)).collect();
    let master = DesignMatrix::from_rows(master_names, &rows)?;
    let target = &data.y[first..];
    let nobs = n - first;

    let columns_for = |order: &ArdlOrder| -> Vec<usize> {
        let names = levels_names(spec, order);
        names.iter().map(|nm| master.column_index(nm).expect("subset of master")).collect()
    };

    let evaluated: Vec<Option<(f64, usize, usize)>> = (0..size as usize)
        .into_par_iter()
        .map(|i| {
            let order = decode(i, spec);
            let cols = columns_for(&order);
            match ols::rss_only(&master.select(&cols), target) {
                Ok(rss) => Some((spec.criterion.value(rss, nobs, cols.len()), cols.len(), i)),
                Err(_) => None,
            }
        })
        .collect();
    let rank_deficient = evaluated.iter().filter(|e| e.is_none()).count();
    // index order equals lexicographic order of (p, q1, ..., qk)
    let best = evaluated
        .iter()
        .flatten()
        .copied()
        .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)))
        .ok_or(ArdlError::NoFeasibleCandidate)?;
    Ok(GridSearch {
        order: decode(best.2, spec),
        criterion: spec.criterion,
        value: best.0,
        candidates: size as usize,
        rank_deficient,
        nobs,
    })
}

pub fn select_order(d: &Dataset, spec: &ModelSpec) -> Result<ArdlOrder> {
    grid_search(d, spec).map(|g| g.order)
}

/// Role of a column in the conditional ECM.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CecmRole {
    Intercept,
    Trend,
    /// Lagged level; 0 = dependent, j = regressor j.
    Level(usize),
    Diff,
    Fixed(usize),
}

#[derive(Debug, Clone)]
pub struct CecmFit {
    pub fit: OlsFit,
    pub design: DesignMatrix,
    pub target: Vec<f64>,
    pub roles: Vec<CecmRole>,
    /// Levels-form names of the variables, dependent first.
    pub level_names: Vec<String>,
    pub fixed_names: Vec<String>,
    /// y_{t-1} on the estimation rows: levels fitted value = CECM fitted + this.
    pub y_lag: Vec<f64>,
}

impl CecmFit {
    fn indices(&self, pred: impl Fn(CecmRole) -> bool) -> Vec<usize> {
        self.roles.iter().enumerate().filter(|(_, r)| pred(**r)).map(|(i, _)| i).collect()
    }

    /// Columns of the lagged levels, dependent first.
    pub fn level_indices(&self) -> Vec<usize> {
        self.indices(|r| matches!(r, CecmRole::Level(_)))
    }

    pub fn intercept_index(&self) -> Option<usize> {
        self.indices(|r| r == CecmRole::Intercept).first().copied()
    }

    pub fn trend_index(&self) -> Option<usize> {
        self.indices(|r| r == CecmRole::Trend).first().copied()
    }

    pub fn fixed_indices(&self) -> Vec<usize> {
        self.indices(|r| matches!(r, CecmRole::Fixed(_)))
    }

    /// Coefficient on the lagged dependent level.
    pub fn adjustment(&self) -> f64 {
        self.fit.coefficients[self.level_indices()[0]]
    }

    pub fn level_coefficients(&self) -> Vec<f64> {
        self.level_indices().iter().map(|&i| self.fit.coefficients[i]).collect()
    }

    pub fn diff_coefficients(&self) -> Vec<(String, f64)> {
        self.indices(|r| r == CecmRole::Diff)
            .into_iter()
            .map(|i| (self.fit.names[i].clone(), self.fit.coefficients[i]))
            .collect()
    }

    /// Number of level regressors under the bounds-test null (excluding the
    /// dependent).
    pub fn k(&self) -> usize {
        self.level_indices().len() - 1
    }

    /// Fitted values in levels (y_t rather than D(y)_t).
    pub fn fitted_levels(&self) -> Vec<f64> {
        self.fit.fitted.iter().zip(&self.y_lag).map(|(f, l)| f + l).collect()
    }
}

/// Refits the model in conditional-ECM form on the same sample.
pub fn to_cecm(f: &ArdlFit) -> Result<CecmFit> {
    let spec = &f.spec;
    let order = &f.order;
    let data = &f.data;
    let rows = f.first..data.len();
    let mut names = Vec::new();
    let mut roles = Vec::new();
    let mut cols: Vec<Vec<f64>> = Vec::new();
    let mut push = |name: String, role: CecmRole, col: Vec<f64>| {
        names.push(name);
        roles.push(role);
        cols.push(col);
    };
    if spec.intercept {
        push("C".into(), CecmRole::Intercept, vec![1.0; rows.len()]);
    }
    if spec.trend {
        push("TREND".into(), CecmRole::Trend, rows.clone().map(|t| (t + 1) as f64).collect());
    }
    push(lag_name(&spec.dependent, 1), CecmRole::Level(0), rows.clone().map(|t| data.y[t - 1]).collect());
    for (j, r) in spec.regressors.iter().enumerate() {
        let lag = usize::from(order.q[j] >= 1);
        let x = &data.x[j];
        push(lag_name(r, lag), CecmRole::Level(j + 1), rows.clone().map(|t| x[t - lag]).collect());
    }
    let d = |v: &[f64], t: usize| v[t] - v[t - 1];
    for i in 1..order.p {
        push(diff_name(&spec.dependent, i), CecmRole::Diff, rows.clone().map(|t| d(&data.y, t - i)).collect());
    }
    for (j, r) in spec.regressors.iter().enumerate() {
        for i in 0..order.q[j] {
            push(diff_name(r, i), CecmRole::Diff, rows.clone().map(|t| d(&data.x[j], t - i)).collect());
        }
    }
    for (m, (fx, v)) in spec.fixed.iter().zip(&data.fixed).enumerate() {
        for i in 0..=fx.lags {
            push(lag_name(&fx.name, i), CecmRole::Fixed(m), rows.clone().map(|t| v[t - i]).collect());
        }
    }
    let design = DesignMatrix::from_columns(names, cols)?;
    let target: Vec<f64> = rows.clone().map(|t| d(&data.y, t)).collect();
    let y_lag: Vec<f64> = rows.map(|t| data.y[t - 1]).collect();
    let fit = ols::fit_ols(&design, &target)?;
    let mut level_names = vec![spec.dependent.clone()];
    level_names.extend(spec.regressors.iter().cloned());
    Ok(CecmFit {
        fit,
        design,
        target,
        roles,
        level_names,
        fixed_names: spec.fixed.iter().map(|f| f.name.clone()).collect(),
        y_lag,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefRow {
    pub name: String,
    pub estimate: f64,
    pub std_error: f64,
    pub t_value: f64,
    pub p_value: f64,
}

impl CoefRow {
    pub fn from_fit(fit: &OlsFit, i: usize) -> CoefRow {
        CoefRow {
            name: fit.names[i].clone(),
            estimate: fit.coefficients[i],
            std_error: fit.coef_std_errors[i],
            t_value: fit.t_values[i],
            p_value: fit.p_values[i],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LongRunResult {
    pub adjustment: f64,
    /// One row per regressor, in spec order, then fixed regressors and
    /// deterministics.
    pub coefficients: Vec<CoefRow>,
    pub dof: usize,
}

impl LongRunResult {
    pub fn get(&self, name: &str) -> Option<&CoefRow> {
        self.coefficients.iter().find(|c| c.name == name)
    }

    /// The regressor rows only (first k entries).
    pub fn theta(&self, k: usize) -> Vec<f64> {
        self.coefficients[..k].iter().map(|c| c.estimate).collect()
    }
}

/// Long-run value `-sum(b_S)/b1` of a coefficient set and its delta-method
/// standard error.
pub fn long_run_ratio(fit: &OlsFit, set: &[usize], adj: usize) -> (f64, f64) {
    let b1 = fit.coefficients[adj];
    let s: f64 = set.iter().map(|&i| fit.coefficients[i]).sum();
    let theta = -s / b1;
    let k = fit.nparams();
    let mut g = vec![0.0; k];
    for &i in set {
        g[i] -= 1.0 / b1;
    }
    g[adj] += s / (b1 * b1);
    let var: f64 = (0..k)
        .flat_map(|i| (0..k).map(move |j| (i, j)))
        .map(|(i, j)| g[i] * fit.cov(i, j) * g[j])
        .sum();
    (theta, var.max(0.0).sqrt())
}

pub const ADJUSTMENT_TOL: f64 = 1e-12;

/// Long-run coefficients theta_j = -b_j / b1 with delta-method errors.
pub fn long_run(c: &CecmFit) -> Result<LongRunResult> {
    let adj_idx = c.level_indices()[0];
    let b1 = c.fit.coefficients[adj_idx];
    if b1.abs() <= ADJUSTMENT_TOL {
        return Err(ArdlError::DegenerateAdjustment(b1));
    }
    let dof = c.fit.dof;
    let row = |name: String, set: &[usize]| {
        let (est, se) = long_run_ratio(&c.fit, set, adj_idx);
        let t_value = if se > 0.0 { est / se } else { f64::INFINITY * est.signum() };
        CoefRow { name, estimate: est, std_error: se, t_value, p_value: dist::t_two_sided(t_value, dof) }
    };
    let mut coefficients = Vec::new();
    for (j, &i) in c.level_indices()[1..].iter().enumerate() {
        coefficients.push(row(c.level_names[j + 1].clone(), &[i]));
    }
    for (m, name) in c.fixed_names.iter().enumerate() {
        let set = c.indices(|r| r == CecmRole::Fixed(m));
        coefficients.push(row(name.clone(), &set));
    }
    if let Some(i) = c.intercept_index() {
        coefficients.push(row("C".into(), &[i]));
    }
    if let Some(i) = c.trend_index() {
        coefficients.push(row("TREND".into(), &[i]));
    }
    Ok(LongRunResult { adjustment: b1, coefficients, dof })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EcmResult {
    pub short_run: Vec<CoefRow>,
    pub ect_coefficient: f64,
    pub ect_std_error: f64,
    pub ect_p_value: f64,
    pub r_squared: f64,
    pub adj_r_squared: f64,
    pub fit: OlsFit,
}

pub const ECT_NAME: &str = "ECT(-1)";

/// Short-run regression with the long-run relation imposed through
/// ECT_{t-1} = y_{t-1} - sum_j theta_j L_j. Intercept, trend and fixed
/// regressors stay unrestricted, so the ECT coefficient reproduces b1.
pub fn ecm_restricted(c: &CecmFit, lr: &LongRunResult) -> Result<EcmResult> {
    let levels = c.level_indices();
    let k = levels.len() - 1;
    let theta = lr.theta(k);
    let ect: Vec<f64> = (0..c.design.nrows())
        .map(|t| c.design.get(t, levels[0]) - (0..k).map(|j| theta[j] * c.design.get(t, levels[j + 1])).sum::<f64>())
        .collect();
    let keep: Vec<usize> = (0..c.roles.len()).filter(|i| !levels.contains(i)).collect();
    let base = c.design.select(&keep);
    // ECT after the deterministics, before the short-run terms
    let n_det = keep.iter().filter(|&&i| matches!(c.roles[i], CecmRole::Intercept | CecmRole::Trend)).count();
    let mut names: Vec<String> = base.names()[..n_det].to_vec();
    names.push(ECT_NAME.into());
    names.extend(base.names()[n_det..].iter().cloned());
    let mut cols: Vec<Vec<f64>> = (0..n_det).map(|j| base.column(j).to_vec()).collect();
    cols.push(ect);
    cols.extend((n_det..base.ncols()).map(|j| base.column(j).to_vec()));
    let design = DesignMatrix::from_columns(names, cols)?;
    let fit = ols::fit_ols(&design, &c.target)?;
    let e = n_det;
    Ok(EcmResult {
        short_run: (0..fit.nparams()).map(|i| CoefRow::from_fit(&fit, i)).collect(),
        ect_coefficient: fit.coefficients[e],
        ect_std_error: fit.coef_std_errors[e],
        ect_p_value: fit.p_values[e],
        r_squared: fit.r_squared,
        adj_r_squared: fit.adj_r_squared,
        fit,
    })
}
