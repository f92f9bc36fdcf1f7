//! Monte Carlo laboratory: synthetic DGPs, rejection studies and simulated
//! bounds critical values.
//!
//! Replication `i` of a study with base seed `s` draws from
//! `rng::stream(s, i)`, so its data does not depend on how many
//! replications run or in which order; parallel and serial runs agree bit
//! for bit.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ardl::{self, ArdlOrder, Criterion, ModelSpec};
use crate::bounds::{self, BoundsOptions, Case, Decision};
use crate::dist::{quantile_sorted, Level};
use crate::frame::{Dataset, Series, TimePoint};
use crate::ols::{self, DesignMatrix};
use crate::rng::{self, SimRng};
use crate::unitroot::{self, AdfConfig};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("invalid simulation config: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, SimError>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DgpKind {
    /// y and k regressors, all independent driftless random walks.
    IndependentRandomWalks { k: usize },
    /// x random walks; Δy_t = a (y_{t-1} − θ'x_{t-1}) + ε_t.
    CointegratedArdl { theta: Vec<f64>, adjustment: f64, noise_sd: f64 },
    /// y_t = Σ ar_i y_{t-i} + Σ exog_j x_{j,t} + ε_t with i.i.d. N(0,1) regressors.
    StableArx { ar: Vec<f64>, exog: Vec<f64>, noise_sd: f64 },
}

pub const DEFAULT_BURN_IN: usize = 200;

fn default_burn_in() -> usize {
    DEFAULT_BURN_IN
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DgpConfig {
    pub kind: DgpKind,
    pub t: usize,
    #[serde(default = "default_burn_in")]
    pub burn_in: usize,
    pub seed: u64,
}

impl DgpConfig {
    pub fn new(kind: DgpKind, t: usize, seed: u64) -> DgpConfig {
        DgpConfig { kind, t, burn_in: DEFAULT_BURN_IN, seed }
    }

    pub fn k(&self) -> usize {
        match &self.kind {
            DgpKind::IndependentRandomWalks { k } => *k,
            DgpKind::CointegratedArdl { theta, .. } => theta.len(),
            DgpKind::StableArx { exog, .. } => exog.len(),
        }
    }

    pub fn regressor_names(&self) -> Vec<String> {
        (1..=self.k()).map(|j| format!("x{j}")).collect()
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(SimError::InvalidConfig(m.to_string()));
        if self.t == 0 {
            return bad("T must be positive");
        }
        match &self.kind {
            DgpKind::IndependentRandomWalks { .. } => {}
            DgpKind::CointegratedArdl { theta, adjustment, noise_sd } => {
                if theta.is_empty() {
                    return bad("theta must have at least one element");
                }
                if !(*adjustment > -1.0 && *adjustment < 0.0) {
                    return bad("adjustment must lie in (-1, 0)");
                }
                if !(*noise_sd >= 0.0) {
                    return bad("noise_sd must be non-negative");
                }
            }
            DgpKind::StableArx { ar, noise_sd, .. } => {
                if !(*noise_sd >= 0.0) {
                    return bad("noise_sd must be non-negative");
                }
                if companion_radius(ar) >= 1.0 {
                    return bad("autoregressive coefficients are not stable");
                }
            }
        }
        Ok(())
    }
}

fn companion_radius(ar: &[f64]) -> f64 {
    let p = ar.len();
    if p == 0 {
        return 0.0;
    }
    let mut m = DMatrix::<f64>::zeros(p, p);
    for (j, a) in ar.iter().enumerate() {
        m[(0, j)] = *a;
    }
    for i in 1..p {
        m[(i, i - 1)] = 1.0;
    }
    m.complex_eigenvalues().iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Raw series (y, regressors) before packaging into a dataset.
fn draw(cfg: &DgpConfig, r: &mut SimRng) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = cfg.t + cfg.burn_in;
    let k = cfg.k();
    let walk = |r: &mut SimRng, sd: f64| {
        let mut acc = 0.0;
        rng::normals(r, n, sd)
            .into_iter()
            .map(|e| {
                acc += e;
                acc
            })
            .collect::<Vec<f64>>()
    };
    let (y, x) = match &cfg.kind {
        DgpKind::IndependentRandomWalks { .. } => {
            let y = walk(r, 1.0);
            let x: Vec<Vec<f64>> = (0..k).map(|_| walk(r, 1.0)).collect();
            (y, x)
        }
        DgpKind::CointegratedArdl { theta, adjustment, noise_sd } => {
            let x: Vec<Vec<f64>> = (0..k).map(|_| walk(r, 1.0)).collect();
            let e = rng::normals(r, n, *noise_sd);
            let mut y = vec![0.0; n];
            for t in 1..n {
                let eq: f64 = theta.iter().zip(&x).map(|(b, xj)| b * xj[t - 1]).sum();
                y[t] = y[t - 1] + adjustment * (y[t - 1] - eq) + e[t];
            }
            (y, x)
        }
        DgpKind::StableArx { ar, exog, noise_sd } => {
            let x: Vec<Vec<f64>> = (0..k).map(|_| rng::normals(r, n, 1.0)).collect();
            let e = rng::normals(r, n, *noise_sd);
            let mut y = vec![0.0; n];
            for t in 0..n {
                let mut v = e[t];
                for (i, a) in ar.iter().enumerate() {
                    if t > i {
                        v += a * y[t - i - 1];
                    }
                }
                for (b, xj) in exog.iter().zip(&x) {
                    v += b * xj[t];
                }
                y[t] = v;
            }
            (y, x)
        }
    };
    let cut = cfg.burn_in;
    (y[cut..].to_vec(), x.into_iter().map(|v| v[cut..].to_vec()).collect())
}

pub fn dataset_start() -> TimePoint {
    TimePoint { year: 2000, month: 1 }
}

fn package(cfg: &DgpConfig, y: Vec<f64>, x: Vec<Vec<f64>>) -> Dataset {
    let start = dataset_start();
    let mut series = vec![Series::new("y", start, y).expect("finite draws")];
    for (name, v) in cfg.regressor_names().into_iter().zip(x) {
        series.push(Series::new(name, start, v).expect("finite draws"));
    }
    Dataset::new(series).expect("aligned series")
}

/// Dataset for replication `rep` of the config's seed.
pub fn gen_dgp_replication(cfg: &DgpConfig, rep: u64) -> Result<Dataset> {
    cfg.validate()?;
    let mut r = rng::stream(cfg.seed, rep);
    let (y, x) = draw(cfg, &mut r);
    Ok(package(cfg, y, x))
}

/// Columns `y, x1, ..., xk`, monthly from 2000-01.
pub fn gen_dgp(cfg: &DgpConfig) -> Result<Dataset> {
    gen_dgp_replication(cfg, 0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrderChoice {
    Fixed(ArdlOrder),
    Select { max_lag: usize, criterion: Criterion },
}

/// A test run once per replication in a rejection study.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StudyTest {
    /// Bounds F against the upper bound at each level.
    Bounds { case: Case, order: OrderChoice },
    /// ADF on the dependent series.
    Adf(AdfConfig),
}

impl StudyTest {
    pub fn name(&self) -> &'static str {
        match self {
            StudyTest::Bounds { .. } => "bounds",
            StudyTest::Adf(_) => "adf",
        }
    }

    fn run(&self, cfg: &DgpConfig, d: &Dataset) -> std::result::Result<BTreeMap<Level, bool>, String> {
        match self {
            StudyTest::Bounds { case, order } => {
                let names = cfg.regressor_names();
                let refs: Vec<&str> = names.iter().map(String::as_str).collect();
                let mut spec = ModelSpec::new("y", &refs);
                spec.trend = case.has_trend();
                let order = match order {
                    OrderChoice::Fixed(o) => {
                        spec.max_lag = spec.max_lag.max(o.max_lag());
                        o.clone()
                    }
                    OrderChoice::Select { max_lag, criterion } => {
                        spec = spec.with_max_lag(*max_lag).with_criterion(*criterion);
                        ardl::select_order(d, &spec).map_err(|e| e.to_string())?
                    }
                };
                let fit = ardl::fit_ardl(d, &spec, &order).map_err(|e| e.to_string())?;
                let c = ardl::to_cecm(&fit).map_err(|e| e.to_string())?;
                let b = bounds::bounds_test(&c, &BoundsOptions { case: *case, dummies_in_null: false })
                    .map_err(|e| e.to_string())?;
                Ok(Level::ALL.iter().map(|&l| (l, b.decision(l) == Decision::Cointegrated)).collect())
            }
            StudyTest::Adf(adf) => {
                let y = &d.require("y").map_err(|e| e.to_string())?.values;
                let r = unitroot::adf_test(y, adf).map_err(|e| e.to_string())?;
                Ok(Level::ALL.iter().map(|&l| (l, r.rejects(l))).collect())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RejectionTable {
    pub test: String,
    pub frequencies: BTreeMap<Level, f64>,
    pub counts: BTreeMap<Level, usize>,
    /// Replications that produced a test result.
    pub replications: usize,
    /// Replications whose test errored; excluded from the frequencies.
    pub failures: usize,
    pub failure_messages: BTreeMap<String, usize>,
    pub seed: u64,
    pub algorithm: String,
}

impl RejectionTable {
    pub fn frequency(&self, level: Level) -> f64 {
        self.frequencies[&level]
    }
}

/// Runs `test` on `reps` independent datasets from `dgp` (its seed replaced
/// by `seed`).
pub fn power_study(test: &StudyTest, dgp: &DgpConfig, reps: usize, seed: u64) -> Result<RejectionTable> {
    if reps == 0 {
        return Err(SimError::InvalidConfig("reps must be positive".into()));
    }
    let cfg = DgpConfig { seed, ..dgp.clone() };
    cfg.validate()?;
    let outcomes: Vec<std::result::Result<BTreeMap<Level, bool>, String>> = (0..reps as u64)
        .into_par_iter()
        .map(|i| {
            let d = gen_dgp_replication(&cfg, i).map_err(|e| e.to_string())?;
            test.run(&cfg, &d)
        })
        .collect();
    let mut counts: BTreeMap<Level, usize> = Level::ALL.iter().map(|&l| (l, 0)).collect();
    let mut failures = 0;
    let mut failure_messages = BTreeMap::new();
    for o in &outcomes {
        match o {
            Ok(m) => {
                for (l, rejected) in m {
                    if *rejected {
                        *counts.get_mut(l).unwrap() += 1;
                    }
                }
            }
            Err(msg) => {
                failures += 1;
                *failure_messages.entry(msg.clone()).or_insert(0) += 1;
            }
        }
    }
    let replications = reps - failures;
    let frequencies = counts
        .iter()
        .map(|(&l, &c)| (l, if replications == 0 { f64::NAN } else { c as f64 / replications as f64 }))
        .collect();
    Ok(RejectionTable {
        test: test.name().to_string(),
        frequencies,
        counts,
        replications,
        failures,
        failure_messages,
        seed,
        algorithm: rng::ALGORITHM.to_string(),
    })
}

/// Bounds F of one replication: Δy on deterministics and lagged levels of y
/// (a driftless random walk) and k regressors that are either random walks
/// (`integrated`) or white noise.
fn pss_replication(k: usize, case: Case, t: usize, r: &mut SimRng) -> (f64, f64) {
    let n = t + 1;
    let ey = rng::normals(r, n, 1.0);
    let ex: Vec<Vec<f64>> = (0..k).map(|_| rng::normals(r, n, 1.0)).collect();
    let mut y = ey.clone();
    for i in 1..n {
        y[i] += y[i - 1];
    }
    let dy: Vec<f64> = (1..n).map(|i| y[i] - y[i - 1]).collect();
    let f_for = |x: &[Vec<f64>]| {
        let mut names = vec!["C".to_string()];
        let mut cols = vec![vec![1.0; t]];
        if case.has_trend() {
            names.push("TREND".into());
            cols.push((1..=t).map(|i| i as f64).collect());
        }
        names.push("y(-1)".into());
        cols.push(y[..t].to_vec());
        for (j, xj) in x.iter().enumerate() {
            names.push(format!("x{}(-1)", j + 1));
            cols.push(xj[..t].to_vec());
        }
        let det = cols.len() - k - 1;
        let mut restricted: Vec<usize> = (det..cols.len()).collect();
        match case {
            Case::II => restricted.insert(0, 0),
            Case::IV => restricted.insert(0, 1),
            _ => {}
        }
        let design = DesignMatrix::from_columns(names, cols).expect("consistent columns");
        let fit = ols::fit_ols(&design, &dy).expect("full rank with probability one");
        ols::wald_f(&fit, &design, &dy, &restricted).expect("valid restriction").f_value
    };
    let walks: Vec<Vec<f64>> = ex
        .iter()
        .map(|e| {
            let mut acc = 0.0;
            e.iter()
                .map(|v| {
                    acc += v;
                    acc
                })
                .collect()
        })
        .collect();
    (f_for(&ex), f_for(&walks))
}

/// Simulated bounds: i0 from I(0) regressors, i1 from I(1) regressors, each
/// the type-7 (1 − level) quantile of the bounds F. Both DGPs share the
/// replication's draws (common random numbers).
pub fn simulate_pss_cv(k: usize, case: Case, t: usize, reps: usize, seed: u64) -> Result<BTreeMap<Level, (f64, f64)>> {
    if reps < 1000 {
        return Err(SimError::InvalidConfig(format!("reps must be at least 1000, got {reps}")));
    }
    if t < 100 {
        return Err(SimError::InvalidConfig(format!("T must be at least 100, got {t}")));
    }
    if k == 0 {
        return Err(SimError::InvalidConfig("k must be at least 1".into()));
    }
    let draws: Vec<(f64, f64)> = (0..reps as u64)
        .into_par_iter()
        .map(|i| pss_replication(k, case, t, &mut rng::stream(seed, i)))
        .collect();
    let mut f0: Vec<f64> = draws.iter().map(|d| d.0).collect();
    let mut f1: Vec<f64> = draws.iter().map(|d| d.1).collect();
    f0.sort_by(f64::total_cmp);
    f1.sort_by(f64::total_cmp);
    Ok(Level::ALL
        .iter()
        .map(|&l| (l, (quantile_sorted(&f0, 1.0 - l.alpha()), quantile_sorted(&f1, 1.0 - l.alpha()))))
        .collect())
}
