//! Bounds F-test for a levels relationship and its three-way decision rule.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ardl::CecmFit;
use crate::dist::Level;
use crate::ols::{self, FStatResult, OlsError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BoundsError {
    #[error("no critical values for k = {k}, case {case}, level {level}")]
    UnsupportedCombination { k: usize, case: Case, level: Level },
    #[error("invalid bounds: lower {0} is not below upper {1}")]
    InvalidBounds(f64, f64),
    #[error("case {case} does not match the model deterministics: {reason}")]
    CaseMismatch { case: Case, reason: String },
    #[error(transparent)]
    Ols(#[from] OlsError),
}

pub type Result<T> = std::result::Result<T, BoundsError>;

/// Deterministic case of the conditional ECM.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, Default)]
pub enum Case {
    /// Restricted intercept, no trend.
    II,
    /// Unrestricted intercept, no trend.
    #[default]
    III,
    /// Unrestricted intercept, restricted trend.
    IV,
    /// Unrestricted intercept and trend.
    V,
}

impl Case {
    pub fn parse(s: &str) -> Option<Case> {
        match s.trim().to_ascii_uppercase().as_str() {
            "II" | "2" => Some(Case::II),
            "III" | "3" => Some(Case::III),
            "IV" | "4" => Some(Case::IV),
            "V" | "5" => Some(Case::V),
            _ => None,
        }
    }

    pub fn has_trend(self) -> bool {
        matches!(self, Case::IV | Case::V)
    }
}

impl std::fmt::Display for Case {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Case::II => "II",
            Case::III => "III",
            Case::IV => "IV",
            Case::V => "V",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Decision {
    Cointegrated,
    Inconclusive,
    NotCointegrated,
}

impl std::fmt::Display for Decision {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Decision::Cointegrated => "Cointegrated",
            Decision::Inconclusive => "Inconclusive",
            Decision::NotCointegrated => "Not cointegrated",
        })
    }
}

const TABLE_SRC: &str = include_str!("../data/pss_bounds.txt");

type Table = BTreeMap<(Case, usize, Level), (f64, f64)>;

fn table() -> &'static Table {
    static TABLE: OnceLock<Table> = OnceLock::new();
    TABLE.get_or_init(|| {
        TABLE_SRC
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(|l| {
                let f: Vec<&str> = l.split_whitespace().collect();
                let parsed = (|| {
                    if f.len() != 5 {
                        return None;
                    }
                    let case = Case::parse(f[0])?;
                    let k: usize = f[1].parse().ok()?;
                    let level = Level::parse(f[2])?;
                    Some((case, k, level, f[3].parse::<f64>().ok()?, f[4].parse::<f64>().ok()?))
                })();
                let (case, k, level, i0, i1) = parsed.unwrap_or_else(|| panic!("malformed critical value row: {l}"));
                ((case, k, level), (i0, i1))
            })
            .collect()
    })
}

pub const MAX_K: usize = 10;

/// Asymptotic (lower, upper) bounds for `k` level regressors.
pub fn pss_critical(k: usize, case: Case, level: Level) -> Result<(f64, f64)> {
    table()
        .get(&(case, k, level))
        .copied()
        .ok_or(BoundsError::UnsupportedCombination { k, case, level })
}

/// Three-way classification; an F equal to either bound is inconclusive.
pub fn decide(f: f64, bounds: (f64, f64)) -> Result<Decision> {
    let (i0, i1) = bounds;
    if !(i0 < i1) {
        return Err(BoundsError::InvalidBounds(i0, i1));
    }
    Ok(classify(f, i0, i1))
}

fn classify(f: f64, i0: f64, i1: f64) -> Decision {
    if f > i1 {
        Decision::Cointegrated
    } else if f < i0 {
        Decision::NotCointegrated
    } else {
        Decision::Inconclusive
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(default)]
pub struct BoundsOptions {
    pub case: Case,
    /// Put fixed regressors (dummies) into the null restriction and into k.
    pub dummies_in_null: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsResult {
    pub f_statistic: f64,
    pub k: usize,
    pub case: Case,
    pub num_restrictions: usize,
    pub dof_denominator: usize,
    pub bounds: BTreeMap<Level, (f64, f64)>,
    pub decisions: BTreeMap<Level, Decision>,
    pub restricted: Vec<String>,
    pub warnings: Vec<String>,
}

impl BoundsResult {
    pub fn decision(&self, level: Level) -> Decision {
        self.decisions[&level]
    }

    /// Stars by the tightest level whose upper bound F exceeds.
    pub fn stars(&self) -> &'static str {
        let above = |l: Level| self.decisions.get(&l) == Some(&Decision::Cointegrated);
        if above(Level::One) {
            "***"
        } else if above(Level::Five) {
            "**"
        } else if above(Level::Ten) {
            "*"
        } else {
            ""
        }
    }
}

fn check_case(c: &CecmFit, case: Case) -> Result<()> {
    let mismatch = |reason: &str| Err(BoundsError::CaseMismatch { case, reason: reason.into() });
    if c.intercept_index().is_none() {
        return mismatch("model has no intercept");
    }
    match (case.has_trend(), c.trend_index().is_some()) {
        (true, false) => mismatch("case requires a trend"),
        (false, true) => mismatch("model has a trend; use case IV or V"),
        _ => Ok(()),
    }
}

/// Columns restricted to zero under the null of no levels relationship.
pub fn restriction_set(c: &CecmFit, opts: &BoundsOptions) -> Result<Vec<usize>> {
    check_case(c, opts.case)?;
    let mut set = c.level_indices();
    match opts.case {
        Case::II => set.extend(c.intercept_index()),
        Case::IV => set.extend(c.trend_index()),
        _ => {}
    }
    if opts.dummies_in_null {
        set.extend(c.fixed_indices());
    }
    set.sort_unstable();
    Ok(set)
}

/// Wald F on the lagged-level block (plus restricted deterministics).
pub fn bounds_f(c: &CecmFit, opts: &BoundsOptions) -> Result<FStatResult> {
    let set = restriction_set(c, opts)?;
    Ok(ols::wald_f(&c.fit, &c.design, &c.target, &set)?)
}

pub fn bounds_test(c: &CecmFit, opts: &BoundsOptions) -> Result<BoundsResult> {
    let set = restriction_set(c, opts)?;
    let f = ols::wald_f(&c.fit, &c.design, &c.target, &set)?;
    let mut warnings = Vec::new();
    let mut k = c.k();
    if opts.dummies_in_null && !c.fixed_names.is_empty() {
        k += c.fixed_names.len();
        warnings.push(format!(
            "fixed regressors ({}) are included in the null restriction and in k; tabulated bounds assume stochastic I(0)/I(1) regressors and are approximate here",
            c.fixed_names.join(", ")
        ));
    }
    let mut bounds = BTreeMap::new();
    let mut decisions = BTreeMap::new();
    for level in Level::ALL {
        let b = pss_critical(k, opts.case, level)?;
        // k = 0: a single critical value, no inconclusive band
        let d = if b.0 < b.1 { decide(f.f_value, b)? } else { classify(f.f_value, b.0, b.1) };
        bounds.insert(level, b);
        decisions.insert(level, d);
    }
    Ok(BoundsResult {
        f_statistic: f.f_value,
        k,
        case: opts.case,
        num_restrictions: f.num_restrictions,
        dof_denominator: f.dof_denominator,
        bounds,
        decisions,
        restricted: set.iter().map(|&i| c.fit.names[i].clone()).collect(),
        warnings,
    })
}
