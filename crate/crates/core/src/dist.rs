//! Tail probabilities for the reference distributions used by the tests,
//! plus the significance levels and star convention shared by the reports.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF, FisherSnedecor, StudentsT};

/// Upper-tail probability of F(d1, d2) at `x`.
pub fn f_sf(x: f64, d1: usize, d2: usize) -> f64 {
    if !x.is_finite() {
        return if x > 0.0 { 0.0 } else { 1.0 };
    }
    if x <= 0.0 || d1 == 0 || d2 == 0 {
        return 1.0;
    }
    FisherSnedecor::new(d1 as f64, d2 as f64)
        .map(|d| d.sf(x).clamp(0.0, 1.0))
        .unwrap_or(f64::NAN)
}

/// Upper-tail probability of chi-square(dof) at `x`.
pub fn chi2_sf(x: f64, dof: usize) -> f64 {
    if !x.is_finite() {
        return if x > 0.0 { 0.0 } else { 1.0 };
    }
    if x <= 0.0 || dof == 0 {
        return 1.0;
    }
    ChiSquared::new(dof as f64)
        .map(|d| d.sf(x).clamp(0.0, 1.0))
        .unwrap_or(f64::NAN)
}

/// Two-sided p-value of a t statistic with `dof` degrees of freedom.
pub fn t_two_sided(t: f64, dof: usize) -> f64 {
    if t.is_nan() {
        return f64::NAN;
    }
    if t.is_infinite() {
        return 0.0;
    }
    if dof == 0 {
        return 1.0;
    }
    StudentsT::new(0.0, 1.0, dof as f64)
        .map(|d| (2.0 * d.sf(t.abs())).clamp(0.0, 1.0))
        .unwrap_or(f64::NAN)
}

/// Quantile of the t distribution.
pub fn t_quantile(p: f64, dof: usize) -> f64 {
    StudentsT::new(0.0, 1.0, dof as f64)
        .map(|d| d.inverse_cdf(p))
        .unwrap_or(f64::NAN)
}

/// Empirical quantile of sorted data by linear interpolation between order
/// statistics (Hyndman-Fan type 7).
pub fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let n = sorted.len();
    assert!(n > 0, "quantile of empty sample");
    let h = (n - 1) as f64 * p.clamp(0.0, 1.0);
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(n - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Conventional significance levels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Level {
    #[serde(rename = "1%")]
    One,
    #[serde(rename = "2.5%")]
    TwoHalf,
    #[serde(rename = "5%")]
    Five,
    #[serde(rename = "10%")]
    Ten,
}

impl Level {
    pub const ALL: [Level; 4] = [Level::One, Level::TwoHalf, Level::Five, Level::Ten];

    pub fn alpha(self) -> f64 {
        match self {
            Level::One => 0.01,
            Level::TwoHalf => 0.025,
            Level::Five => 0.05,
            Level::Ten => 0.10,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Level::One => "1%",
            Level::TwoHalf => "2.5%",
            Level::Five => "5%",
            Level::Ten => "10%",
        }
    }

    pub fn parse(s: &str) -> Option<Level> {
        match s.trim().trim_end_matches('%') {
            "1" | "0.01" => Some(Level::One),
            "2.5" | "0.025" => Some(Level::TwoHalf),
            "5" | "0.05" => Some(Level::Five),
            "10" | "0.1" | "0.10" => Some(Level::Ten),
            _ => None,
        }
    }
}

impl std::fmt::Display for Level {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// Significance stars: `***` at 1%, `**` at 5%, `*` at 10%.
pub fn stars(p_value: f64) -> &'static str {
    if p_value < 0.01 {
        "***"
    } else if p_value < 0.05 {
        "**"
    } else if p_value < 0.10 {
        "*"
    } else {
        ""
    }
}
