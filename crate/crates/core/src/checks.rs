//! Residual diagnostics (serial correlation, heteroskedasticity, normality,
//! functional form) and recursive-residual stability tests.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};
use thiserror::Error;

use crate::dist::{self, Level};
use crate::ols::{self, DesignMatrix, OlsError, OlsFit};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CheckError {
    #[error("residuals have zero variance")]
    ZeroVariance,
    #[error("powers of the fitted values are collinear with the regressors")]
    CollinearAugmentation,
    #[error("all recursive residuals are zero")]
    DegenerateResiduals,
    #[error("sample too short: {0}")]
    TooShort(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Ols(#[from] OlsError),
}

pub type Result<T> = std::result::Result<T, CheckError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestResult {
    pub name: String,
    pub statistic: f64,
    pub p_value: f64,
    pub dof: Vec<usize>,
    pub verdict_at_5pct: Verdict,
}

impl TestResult {
    fn new(name: impl Into<String>, statistic: f64, p_value: f64, dof: Vec<usize>) -> TestResult {
        let p_value = p_value.clamp(0.0, 1.0);
        TestResult {
            name: name.into(),
            statistic,
            p_value,
            dof,
            verdict_at_5pct: if p_value > 0.05 { Verdict::Pass } else { Verdict::Fail },
        }
    }

    pub fn passes(&self) -> bool {
        self.verdict_at_5pct == Verdict::Pass
    }
}

/// T R^2 of an auxiliary regression, 0 when the regressand has no variation.
fn lm_statistic(x: &DesignMatrix, dep: &[f64]) -> Result<f64> {
    let ss: f64 = dep.iter().map(|v| v * v).sum();
    let n = dep.len() as f64;
    let mean = dep.iter().sum::<f64>() / n;
    let tss: f64 = dep.iter().map(|v| (v - mean).powi(2)).sum();
    if tss <= 1e-20 * ss || ss == 0.0 {
        return Ok(0.0);
    }
    let aux = ols::fit_ols(x, dep)?;
    Ok(n * aux.r_squared)
}

/// Residuals at rounding-error level relative to the regressand: the
/// auxiliary regressions would only fit noise.
fn negligible_residuals(fit: &OlsFit) -> bool {
    let ss: f64 = fit.fitted.iter().zip(&fit.residuals).map(|(f, e)| (f + e).powi(2)).sum();
    fit.rss <= 1e-20 * ss
}

/// Breusch-Godfrey LM test for serial correlation up to `lags`.
pub fn breusch_godfrey(fit: &OlsFit, x: &DesignMatrix, lags: usize) -> Result<TestResult> {
    if lags == 0 {
        return Err(CheckError::InvalidArgument("lags must be at least 1".into()));
    }
    let t = fit.residuals.len();
    if t <= x.ncols() + lags {
        return Err(CheckError::TooShort(format!("{t} observations for {} regressors and {lags} lags", x.ncols())));
    }
    if negligible_residuals(fit) {
        return Ok(TestResult::new(format!("Breusch-Godfrey LM({lags})"), 0.0, 1.0, vec![lags]));
    }
    let e = &fit.residuals;
    let mut aux = x.clone();
    for l in 1..=lags {
        let col: Vec<f64> = (0..t).map(|i| if i >= l { e[i - l] } else { 0.0 }).collect();
        aux = aux.with_column(format!("resid(-{l})"), &col)?;
    }
    let lm = lm_statistic(&aux, e)?;
    Ok(TestResult::new(format!("Breusch-Godfrey LM({lags})"), lm, dist::chi2_sf(lm, lags), vec![lags]))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HetKind {
    BreuschPagan,
    Arch(usize),
}

/// Breusch-Pagan (squared residuals on X) or ARCH(q) LM test.
pub fn heteroskedasticity_test(fit: &OlsFit, x: &DesignMatrix, kind: HetKind) -> Result<TestResult> {
    let mut e2: Vec<f64> = fit.residuals.iter().map(|e| e * e).collect();
    if negligible_residuals(fit) {
        e2.iter_mut().for_each(|v| *v = 0.0);
    }
    let t = e2.len();
    match kind {
        HetKind::BreuschPagan => {
            let k = x.ncols();
            if k < 2 {
                return Err(CheckError::InvalidArgument("Breusch-Pagan needs at least one non-constant regressor".into()));
            }
            let lm = lm_statistic(x, &e2)?;
            Ok(TestResult::new("Breusch-Pagan LM", lm, dist::chi2_sf(lm, k - 1), vec![k - 1]))
        }
        HetKind::Arch(q) => {
            if q == 0 {
                return Err(CheckError::InvalidArgument("ARCH order must be at least 1".into()));
            }
            if t <= 2 * q + 1 {
                return Err(CheckError::TooShort(format!("{t} residuals for ARCH({q})")));
            }
            let mut names = vec!["C".to_string()];
            let mut cols = vec![vec![1.0; t - q]];
            for l in 1..=q {
                names.push(format!("resid^2(-{l})"));
                cols.push((q..t).map(|i| e2[i - l]).collect());
            }
            let aux = DesignMatrix::from_columns(names, cols)?;
            let lm = lm_statistic(&aux, &e2[q..])?;
            Ok(TestResult::new(format!("ARCH LM({q})"), lm, dist::chi2_sf(lm, q), vec![q]))
        }
    }
}

/// Sample skewness and kurtosis (population moments).
pub fn moments(e: &[f64]) -> Result<(f64, f64)> {
    let n = e.len() as f64;
    let m = e.iter().sum::<f64>() / n;
    let c = |p: i32| e.iter().map(|v| (v - m).powi(p)).sum::<f64>() / n;
    let m2 = c(2);
    if m2 <= 1e-30 * e.iter().map(|v| v * v).sum::<f64>() / n || m2 == 0.0 {
        return Err(CheckError::ZeroVariance);
    }
    Ok((c(3) / m2.powf(1.5), c(4) / (m2 * m2)))
}

/// Jarque-Bera normality test.
pub fn jarque_bera(residuals: &[f64]) -> Result<TestResult> {
    if residuals.len() < 4 {
        return Err(CheckError::TooShort("Jarque-Bera needs at least 4 residuals".into()));
    }
    let (s, k) = moments(residuals)?;
    let n = residuals.len() as f64;
    let jb = n / 6.0 * (s * s + (k - 3.0).powi(2) / 4.0);
    Ok(TestResult::new("Jarque-Bera", jb, dist::chi2_sf(jb, 2), vec![2]))
}

/// Ramsey RESET: F test on powers of the fitted values added to X.
pub fn ramsey_reset(fit: &OlsFit, x: &DesignMatrix, y: &[f64], powers: &[u32]) -> Result<TestResult> {
    if powers.is_empty() || powers.iter().any(|&p| p < 2) {
        return Err(CheckError::InvalidArgument("RESET powers must be >= 2".into()));
    }
    let name = format!("Ramsey RESET({})", powers.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(","));
    let ss: f64 = y.iter().map(|v| v * v).sum();
    if fit.rss <= 1e-20 * ss {
        return Ok(TestResult::new(name, 0.0, 1.0, vec![powers.len(), fit.dof.saturating_sub(powers.len())]));
    }
    let scale = fit.fitted.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        return Err(CheckError::CollinearAugmentation);
    }
    let mut aug = x.clone();
    for &p in powers {
        let col: Vec<f64> = fit.fitted.iter().map(|v| (v / scale).powi(p as i32)).collect();
        aug = aug.with_column(format!("fitted^{p}"), &col)?;
    }
    let ufit = match ols::fit_ols(&aug, y) {
        Ok(f) => f,
        Err(OlsError::RankDeficient(_)) => return Err(CheckError::CollinearAugmentation),
        Err(e) => return Err(e.into()),
    };
    let k = x.ncols();
    let added: Vec<usize> = (k..aug.ncols()).collect();
    let f = ols::wald_f(&ufit, &aug, y, &added)?;
    Ok(TestResult::new(name, f.f_value, f.p_value, vec![f.num_restrictions, f.dof_denominator]))
}

fn default_bg_lags() -> usize {
    12
}
fn default_arch_lags() -> usize {
    4
}
fn default_powers() -> Vec<u32> {
    vec![2, 3]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DiagnosticsConfig {
    #[serde(default = "default_bg_lags")]
    pub bg_lags: usize,
    #[serde(default = "default_arch_lags")]
    pub arch_lags: usize,
    #[serde(default = "default_powers")]
    pub reset_powers: Vec<u32>,
}

impl Default for DiagnosticsConfig {
    fn default() -> Self {
        DiagnosticsConfig { bg_lags: default_bg_lags(), arch_lags: default_arch_lags(), reset_powers: default_powers() }
    }
}

/// The standard battery: BG, BP, ARCH, JB and RESET.
pub fn diagnostics(fit: &OlsFit, x: &DesignMatrix, y: &[f64], cfg: &DiagnosticsConfig) -> Result<Vec<TestResult>> {
    Ok(vec![
        breusch_godfrey(fit, x, cfg.bg_lags)?,
        heteroskedasticity_test(fit, x, HetKind::BreuschPagan)?,
        heteroskedasticity_test(fit, x, HetKind::Arch(cfg.arch_lags))?,
        jarque_bera(&fit.residuals)?,
        ramsey_reset(fit, x, y, &cfg.reset_powers)?,
    ])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StabilityKind {
    Cusum,
    CusumSq,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityResult {
    pub kind: StabilityKind,
    pub level: Level,
    /// Sample index (0-based, relative to the regression rows) of the first
    /// path point.
    pub first: usize,
    pub path: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub within: bool,
}

impl StabilityResult {
    fn build(kind: StabilityKind, level: Level, first: usize, path: Vec<f64>, lower: Vec<f64>, upper: Vec<f64>) -> Self {
        let within = path.iter().zip(&lower).zip(&upper).all(|((p, l), u)| l < p && p < u);
        StabilityResult { kind, level, first, path, lower, upper, within }
    }

    pub fn verdict(&self) -> &'static str {
        if self.within {
            "Stable"
        } else {
            "Unstable"
        }
    }
}

/// Boundary constant `a` of the CUSUM lines: the solution of
/// `1 - Phi(3a) + exp(-4a^2) Phi(a) = alpha / 2`.
pub fn cusum_constant(alpha: f64) -> f64 {
    let n = Normal::standard();
    let g = |a: f64| 1.0 - n.cdf(3.0 * a) + (-4.0 * a * a).exp() * n.cdf(a) - alpha / 2.0;
    let (mut lo, mut hi) = (0.1, 3.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn rms(y: &[f64]) -> f64 {
    (y.iter().map(|v| v * v).sum::<f64>() / y.len().max(1) as f64).sqrt()
}

/// CUSUM of standardized recursive residuals with the straight-line
/// significance boundaries.
pub fn cusum(x: &DesignMatrix, y: &[f64], level: Level) -> Result<StabilityResult> {
    let rr = ols::recursive_residuals_adaptive(x, y)?;
    let w = &rr.values;
    let n = w.len() as f64;
    let mut sigma = (w.iter().map(|v| v * v).sum::<f64>() / n).sqrt();
    if sigma <= 1e-10 * rms(y) {
        sigma = 0.0;
    }
    let mut acc = 0.0;
    let path: Vec<f64> = w
        .iter()
        .map(|v| {
            if sigma > 0.0 {
                acc += v / sigma;
            }
            acc
        })
        .collect();
    let a = cusum_constant(level.alpha());
    let upper: Vec<f64> = (1..=w.len()).map(|r| a * (n.sqrt() + 2.0 * r as f64 / n.sqrt())).collect();
    let lower = upper.iter().map(|u| -u).collect();
    Ok(StabilityResult::build(StabilityKind::Cusum, level, rr.first, path, lower, upper))
}

const C0_SRC: &str = include_str!("../data/cusumsq_c0.txt");

struct C0Table {
    keys: Vec<f64>,
    values: BTreeMap<Level, Vec<f64>>,
}

fn c0_table() -> &'static C0Table {
    static TABLE: OnceLock<C0Table> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut lines = C0_SRC.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines
            .by_ref()
            .find(|l| l.starts_with("# m "))
            .expect("c0 table header");
        let levels: Vec<Level> = header
            .split_whitespace()
            .skip(3)
            .map(|s| Level::parse(s).expect("level column"))
            .collect();
        let mut keys = Vec::new();
        let mut values: BTreeMap<Level, Vec<f64>> = levels.iter().map(|&l| (l, Vec::new())).collect();
        for l in lines.filter(|l| !l.starts_with('#')) {
            let f: Vec<f64> = l.split_whitespace().map(|v| v.parse().expect("numeric c0 row")).collect();
            keys.push(f[0]);
            for (lv, v) in levels.iter().zip(&f[2..]) {
                values.get_mut(lv).unwrap().push(*v);
            }
        }
        C0Table { keys, values }
    })
}

/// Half-width of the CUSUMSQ band for `n` recursive residuals.
pub fn cusumsq_c0(n: usize, level: Level) -> Result<f64> {
    let t = c0_table();
    let col = t
        .values
        .get(&level)
        .ok_or_else(|| CheckError::InvalidArgument(format!("no CUSUMSQ critical values at {level}")))?;
    let m = n as f64 / 2.0 - 1.0;
    let (first, last) = (t.keys[0], *t.keys.last().unwrap());
    if m < first {
        return Err(CheckError::TooShort(format!("CUSUMSQ needs at least {} recursive residuals", 2.0 * (first + 1.0))));
    }
    if m >= last {
        return Ok(col[col.len() - 1] * ((last + 1.0) / (m + 1.0)).sqrt());
    }
    let i = t.keys.partition_point(|&k| k <= m) - 1;
    let (k0, k1) = (t.keys[i], t.keys[i + 1]);
    let w = (m - k0) / (k1 - k0);
    Ok(col[i] + w * (col[i + 1] - col[i]))
}

/// CUSUM of squares: cumulative share of squared recursive residuals with
/// a band of half-width c0 around the line r/n.
pub fn cusumsq(x: &DesignMatrix, y: &[f64], level: Level) -> Result<StabilityResult> {
    let rr = ols::recursive_residuals_adaptive(x, y)?;
    let w2: Vec<f64> = rr.values.iter().map(|v| v * v).collect();
    let mut cum = Vec::with_capacity(w2.len());
    let mut acc = 0.0;
    for v in &w2 {
        acc += v;
        cum.push(acc);
    }
    let total = acc;
    if total <= 1e-20 * y.iter().map(|v| v * v).sum::<f64>() {
        return Err(CheckError::DegenerateResiduals);
    }
    let path: Vec<f64> = cum.iter().map(|c| c / total).collect();
    let n = w2.len();
    let c0 = cusumsq_c0(n, level)?;
    let line = |r: usize| r as f64 / n as f64;
    let lower = (1..=n).map(|r| line(r) - c0).collect();
    let upper = (1..=n).map(|r| line(r) + c0).collect();
    Ok(StabilityResult::build(StabilityKind::CusumSq, level, rr.first, path, lower, upper))
}
