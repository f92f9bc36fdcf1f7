//! Least-squares kernel: QR-based OLS, restricted/unrestricted F tests,
//! recursive residuals and information criteria.
//!
//! Columns are equilibrated to unit norm before the Householder QR, so the
//! rank test (smallest/largest singular value of R below `RANK_TOL`) does not
//! depend on the units of individual regressors.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dist;

/// Relative singular-value threshold below which a design is rank deficient.
pub const RANK_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OlsError {
    #[error("design matrix is rank deficient (columns: {})", .0.join(", "))]
    RankDeficient(Vec<String>),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("too few observations: {nobs} rows for {params} parameters")]
    TooFewObservations { nobs: usize, params: usize },
    #[error("restriction set is empty")]
    EmptyRestriction,
    #[error("invalid restriction: {0}")]
    InvalidRestriction(String),
}

pub type Result<T> = std::result::Result<T, OlsError>;

/// A T x K regressor matrix with named columns.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignMatrix {
    names: Vec<String>,
    data: DMatrix<f64>,
}

impl DesignMatrix {
    pub fn from_columns(names: Vec<String>, columns: Vec<Vec<f64>>) -> Result<DesignMatrix> {
        if names.len() != columns.len() {
            return Err(OlsError::DimensionMismatch(format!(
                "{} names for {} columns",
                names.len(),
                columns.len()
            )));
        }
        let t = columns.first().map_or(0, Vec::len);
        if columns.iter().any(|c| c.len() != t) {
            return Err(OlsError::DimensionMismatch("columns of unequal length".into()));
        }
        let flat: Vec<f64> = columns.into_iter().flatten().collect();
        Ok(DesignMatrix {
            names,
            data: DMatrix::from_vec(t, flat.len() / t.max(1), flat),
        })
    }

    pub fn from_rows(names: Vec<String>, rows: &[Vec<f64>]) -> Result<DesignMatrix> {
        let k = names.len();
        if rows.iter().any(|r| r.len() != k) {
            return Err(OlsError::DimensionMismatch("row length differs from column count".into()));
        }
        let cols = (0..k).map(|j| rows.iter().map(|r| r[j]).collect()).collect();
        DesignMatrix::from_columns(names, cols)
    }

    pub fn nrows(&self) -> usize {
        self.data.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.data.ncols()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn column(&self, j: usize) -> &[f64] {
        let t = self.nrows();
        &self.data.as_slice()[j * t..(j + 1) * t]
    }

    pub fn row(&self, i: usize) -> Vec<f64> {
        self.data.row(i).iter().copied().collect()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[(i, j)]
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.data
    }

    /// Keeps the listed columns in the given order.
    pub fn select(&self, cols: &[usize]) -> DesignMatrix {
        DesignMatrix {
            names: cols.iter().map(|&j| self.names[j].clone()).collect(),
            data: self.data.select_columns(cols.iter()),
        }
    }

    pub fn without(&self, drop: &[usize]) -> DesignMatrix {
        let keep: Vec<usize> = (0..self.ncols()).filter(|j| !drop.contains(j)).collect();
        self.select(&keep)
    }

    pub fn with_column(&self, name: impl Into<String>, values: &[f64]) -> Result<DesignMatrix> {
        if values.len() != self.nrows() {
            return Err(OlsError::DimensionMismatch("appended column length".into()));
        }
        let k = self.ncols();
        let mut data = self.data.clone().insert_column(k, 0.0);
        data.column_mut(k).copy_from_slice(values);
        let mut names = self.names.clone();
        names.push(name.into());
        Ok(DesignMatrix { names, data })
    }

    /// Rows `from..to` only.
    pub fn rows(&self, from: usize, to: usize) -> DesignMatrix {
        DesignMatrix {
            names: self.names.clone(),
            data: self.data.rows(from, to - from).into_owned(),
        }
    }

    /// Index of a constant non-zero column, if any.
    pub fn intercept_index(&self) -> Option<usize> {
        (0..self.ncols()).find(|&j| {
            let c = self.column(j);
            c[0] != 0.0 && c.iter().all(|&v| v == c[0])
        })
    }

    pub fn mul_vec(&self, beta: &[f64]) -> Vec<f64> {
        (&self.data * DVector::from_column_slice(beta))
            .iter()
            .copied()
            .collect()
    }
}

/// Result of an OLS fit with conventional (homoskedastic) inference.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OlsFit {
    pub names: Vec<String>,
    pub coefficients: Vec<f64>,
    pub coef_std_errors: Vec<f64>,
    pub t_values: Vec<f64>,
    pub p_values: Vec<f64>,
    pub residuals: Vec<f64>,
    pub fitted: Vec<f64>,
    pub rss: f64,
    pub tss: f64,
    pub sigma2: f64,
    pub r_squared: f64,
    pub adj_r_squared: f64,
    pub centered: bool,
    pub log_likelihood: f64,
    pub aic: f64,
    pub bic: f64,
    pub nobs: usize,
    pub dof: usize,
    /// Row-major K x K covariance `sigma2 (X'X)^-1`.
    pub coef_covariance: Vec<Vec<f64>>,
    /// Regression F statistic on all non-intercept columns, with p-value.
    pub f_statistic: Option<(f64, f64)>,
}

impl OlsFit {
    pub fn nparams(&self) -> usize {
        self.coefficients.len()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn coef(&self, name: &str) -> Option<f64> {
        self.index_of(name).map(|i| self.coefficients[i])
    }

    pub fn cov(&self, i: usize, j: usize) -> f64 {
        self.coef_covariance[i][j]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FStatResult {
    pub f_value: f64,
    pub num_restrictions: usize,
    pub dof_denominator: usize,
    pub p_value: f64,
    pub rss_restricted: f64,
    pub rss_unrestricted: f64,
}

struct Solved {
    beta: Vec<f64>,
    /// (X'X)^-1 in original units.
    xtx_inv: DMatrix<f64>,
}

fn column_norms(x: &DesignMatrix) -> Vec<f64> {
    (0..x.ncols())
        .map(|j| x.column(j).iter().map(|v| v * v).sum::<f64>().sqrt())
        .collect()
}

fn rank_ok(r: &DMatrix<f64>) -> bool {
    let sv = r.clone().singular_values();
    let max = sv.max();
    let min = sv.min();
    max > 0.0 && min / max >= RANK_TOL
}

fn deficient_columns(x: &DesignMatrix, r: &DMatrix<f64>) -> Vec<String> {
    let k = x.ncols();
    let diag: Vec<f64> = (0..k).map(|j| r[(j, j)].abs()).collect();
    let flagged: Vec<String> = (0..k)
        .filter(|&j| diag[j] <= RANK_TOL.sqrt() * 1e-3)
        .map(|j| x.names[j].clone())
        .collect();
    if !flagged.is_empty() {
        return flagged;
    }
    let worst = (0..k)
        .min_by(|&a, &b| diag[a].total_cmp(&diag[b]))
        .unwrap_or(0);
    vec![x.names[worst].clone()]
}

fn solve(x: &DesignMatrix, y: &[f64]) -> Result<Solved> {
    let (t, k) = (x.nrows(), x.ncols());
    if k == 0 {
        return Err(OlsError::DimensionMismatch("design has no columns".into()));
    }
    if y.len() != t {
        return Err(OlsError::DimensionMismatch(format!(
            "{} observations in y, {} rows in X",
            y.len(),
            t
        )));
    }
    if t <= k {
        return Err(OlsError::TooFewObservations { nobs: t, params: k });
    }
    let norms = column_norms(x);
    if let Some(j) = norms.iter().position(|&n| n == 0.0) {
        return Err(OlsError::RankDeficient(vec![x.names[j].clone()]));
    }
    let mut scaled = x.data.clone();
    for (j, n) in norms.iter().enumerate() {
        scaled.column_mut(j).unscale_mut(*n);
    }
    let qr = scaled.qr();
    let r = qr.r();
    if !rank_ok(&r) {
        return Err(OlsError::RankDeficient(deficient_columns(x, &r)));
    }
    let mut qty = DVector::from_column_slice(y);
    qr.q_tr_mul(&mut qty);
    let z = qty.rows(0, k).into_owned();
    let beta_s = r
        .solve_upper_triangular(&z)
        .ok_or_else(|| OlsError::RankDeficient(deficient_columns(x, &r)))?;
    let rinv = r
        .solve_upper_triangular(&DMatrix::identity(k, k))
        .ok_or_else(|| OlsError::RankDeficient(deficient_columns(x, &r)))?;
    let mut xtx_inv = &rinv * rinv.transpose();
    for i in 0..k {
        for j in 0..k {
            xtx_inv[(i, j)] /= norms[i] * norms[j];
        }
    }
    let beta = beta_s.iter().zip(&norms).map(|(b, n)| b / n).collect();
    Ok(Solved { beta, xtx_inv })
}

/// Residual sum of squares only; used where a full fit is not needed.
pub fn rss_only(x: &DesignMatrix, y: &[f64]) -> Result<f64> {
    let s = solve(x, y)?;
    let fitted = x.mul_vec(&s.beta);
    Ok(y.iter().zip(&fitted).map(|(a, b)| (a - b).powi(2)).sum())
}

/// Ordinary least squares of `y` on `x`.
pub fn fit_ols(x: &DesignMatrix, y: &[f64]) -> Result<OlsFit> {
    let Solved { beta, xtx_inv } = solve(x, y)?;
    let (t, k) = (x.nrows(), x.ncols());
    let fitted = x.mul_vec(&beta);
    let residuals: Vec<f64> = y.iter().zip(&fitted).map(|(a, b)| a - b).collect();
    let rss: f64 = residuals.iter().map(|e| e * e).sum();
    let centered = x.intercept_index().is_some();
    let tss: f64 = if centered {
        let m = y.iter().sum::<f64>() / t as f64;
        y.iter().map(|v| (v - m).powi(2)).sum()
    } else {
        y.iter().map(|v| v * v).sum()
    };
    let dof = t - k;
    let sigma2 = rss / dof as f64;
    // No variation to explain: R^2 is reported as 0.
    let r_squared = if tss > 0.0 {
        (1.0 - rss / tss).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let adj_r_squared = if centered {
        1.0 - (1.0 - r_squared) * (t - 1) as f64 / dof as f64
    } else {
        1.0 - (1.0 - r_squared) * t as f64 / dof as f64
    };
    let n = t as f64;
    let log_likelihood = -0.5 * n * (1.0 + (2.0 * std::f64::consts::PI).ln() + (rss / n).ln());
    let aic = -2.0 * log_likelihood + 2.0 * k as f64;
    let bic = -2.0 * log_likelihood + k as f64 * n.ln();
    let coef_covariance: Vec<Vec<f64>> = (0..k)
        .map(|i| (0..k).map(|j| sigma2 * xtx_inv[(i, j)]).collect())
        .collect();
    let coef_std_errors: Vec<f64> = (0..k).map(|i| coef_covariance[i][i].max(0.0).sqrt()).collect();
    let t_values: Vec<f64> = beta
        .iter()
        .zip(&coef_std_errors)
        .map(|(b, s)| if *s > 0.0 { b / s } else if *b == 0.0 { 0.0 } else { f64::INFINITY * b.signum() })
        .collect();
    let p_values = t_values.iter().map(|&tv| dist::t_two_sided(tv, dof)).collect();
    let f_statistic = (centered && k > 1).then(|| {
        let m = k - 1;
        let f = if r_squared < 1.0 {
            (r_squared / m as f64) / ((1.0 - r_squared) / dof as f64)
        } else {
            f64::INFINITY
        };
        (f, dist::f_sf(f, m, dof))
    });
    Ok(OlsFit {
        names: x.names.clone(),
        coefficients: beta,
        coef_std_errors,
        t_values,
        p_values,
        residuals,
        fitted,
        rss,
        tss,
        sigma2,
        r_squared,
        adj_r_squared,
        centered,
        log_likelihood,
        aic,
        bic,
        nobs: t,
        dof,
        coef_covariance,
        f_statistic,
    })
}

/// F test of joint nullity for the coefficients on `restricted` columns,
/// computed from the restricted and unrestricted residual sums of squares.
pub fn wald_f(fit: &OlsFit, x: &DesignMatrix, y: &[f64], restricted: &[usize]) -> Result<FStatResult> {
    if restricted.is_empty() {
        return Err(OlsError::EmptyRestriction);
    }
    let k = x.ncols();
    if fit.nparams() != k || fit.nobs != x.nrows() {
        return Err(OlsError::DimensionMismatch("fit does not correspond to design".into()));
    }
    let mut set: Vec<usize> = restricted.to_vec();
    set.sort_unstable();
    set.dedup();
    if set.iter().any(|&j| j >= k) {
        return Err(OlsError::InvalidRestriction("column index out of range".into()));
    }
    if set.len() >= k {
        return Err(OlsError::InvalidRestriction("restriction leaves no columns".into()));
    }
    let rss_r = rss_only(&x.without(&set), y)?;
    let m = set.len();
    let rss_u = fit.rss;
    let num = (rss_r - rss_u).max(0.0) / m as f64;
    let f_value = if rss_u > 0.0 {
        num / (rss_u / fit.dof as f64)
    } else if num > 0.0 {
        f64::INFINITY
    } else {
        0.0
    };
    Ok(FStatResult {
        f_value,
        num_restrictions: m,
        dof_denominator: fit.dof,
        p_value: dist::f_sf(f_value, m, fit.dof),
        rss_restricted: rss_r,
        rss_unrestricted: rss_u,
    })
}

/// `(aic, bic)` of a fit.
pub fn information_criteria(fit: &OlsFit) -> (f64, f64) {
    (fit.aic, fit.bic)
}

/// Recursive residuals and the index of the first observation that has one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecursiveResiduals {
    pub first: usize,
    pub values: Vec<f64>,
}

/// Standardized one-step-ahead prediction errors for observations K+1..T,
/// initialized on the first K rows.
pub fn recursive_residuals(x: &DesignMatrix, y: &[f64]) -> Result<Vec<f64>> {
    recursive_core(x, y, true).map(|r| r.values)
}

/// As [`recursive_residuals`], but when the first K rows are rank deficient
/// (e.g. a dummy that is zero early in the sample) the initializing window is
/// extended to the shortest leading subsample with full rank.
pub fn recursive_residuals_adaptive(x: &DesignMatrix, y: &[f64]) -> Result<RecursiveResiduals> {
    recursive_core(x, y, false)
}

fn recursive_core(x: &DesignMatrix, y: &[f64], strict: bool) -> Result<RecursiveResiduals> {
    let (t, k) = (x.nrows(), x.ncols());
    if y.len() != t {
        return Err(OlsError::DimensionMismatch("y length".into()));
    }
    if t <= k {
        return Err(OlsError::TooFewObservations { nobs: t, params: k });
    }
    let norms = column_norms(x);
    if let Some(j) = norms.iter().position(|&n| n == 0.0) {
        return Err(OlsError::RankDeficient(vec![x.names[j].clone()]));
    }
    let mut r = DMatrix::<f64>::zeros(k, k);
    let mut z = vec![0.0; k];
    let mut first: Option<usize> = None;
    let mut out = Vec::with_capacity(t - k);
    let mut a = vec![0.0; k];
    let mut beta = vec![0.0; k];
    let mut v = vec![0.0; k];
    for i in 0..t {
        for j in 0..k {
            a[j] = x.data[(i, j)] / norms[j];
        }
        let mut b = y[i];
        if first.is_some() {
            // beta = R^-1 z
            for j in (0..k).rev() {
                let s: f64 = ((j + 1)..k).map(|l| r[(j, l)] * beta[l]).sum();
                beta[j] = (z[j] - s) / r[(j, j)];
            }
            // R' v = a
            for j in 0..k {
                let s: f64 = (0..j).map(|l| r[(l, j)] * v[l]).sum();
                v[j] = (a[j] - s) / r[(j, j)];
            }
            let pred: f64 = a.iter().zip(&beta).map(|(p, q)| p * q).sum();
            let f = 1.0 + v.iter().map(|e| e * e).sum::<f64>();
            out.push((b - pred) / f.sqrt());
        }
        for j in 0..k {
            if a[j] == 0.0 {
                continue;
            }
            let h = r[(j, j)].hypot(a[j]);
            let (c, s) = (r[(j, j)] / h, a[j] / h);
            for l in j..k {
                let (rl, al) = (r[(j, l)], a[l]);
                r[(j, l)] = c * rl + s * al;
                a[l] = -s * rl + c * al;
            }
            let zj = z[j];
            z[j] = c * zj + s * b;
            b = -s * zj + c * b;
        }
        if first.is_none() && i + 1 >= k {
            if rank_ok(&r) {
                first = Some(i + 1);
            } else if strict {
                return Err(OlsError::RankDeficient(deficient_columns(x, &r)));
            }
        }
    }
    match first {
        Some(f) if f < t => Ok(RecursiveResiduals { first: f, values: out }),
        Some(_) => Err(OlsError::TooFewObservations { nobs: t, params: k }),
        None => Err(OlsError::RankDeficient(deficient_columns(x, &r))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn names(k: usize) -> Vec<String> {
        (0..k).map(|j| format!("x{j}")).collect()
    }

    /// Normal-equation solution by Gauss-Jordan elimination with partial
    /// pivoting; independent of the QR path.
    fn normal_equations(x: &[Vec<f64>], y: &[f64]) -> Vec<f64> {
        let k = x[0].len();
        let mut a = vec![vec![0.0; k + 1]; k];
        for (row, &yi) in x.iter().zip(y) {
            for i in 0..k {
                for j in 0..k {
                    a[i][j] += row[i] * row[j];
                }
                a[i][k] += row[i] * yi;
            }
        }
        for c in 0..k {
            let p = (c..k).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs())).unwrap();
            a.swap(c, p);
            for r in 0..k {
                if r != c {
                    let f = a[r][c] / a[c][c];
                    for j in c..=k {
                        a[r][j] -= f * a[c][j];
                    }
                }
            }
        }
        (0..k).map(|i| a[i][k] / a[i][i]).collect()
    }

    fn random_system(rng: &mut ChaCha8Rng, t: usize, k: usize) -> (Vec<Vec<f64>>, Vec<f64>) {
        let rows: Vec<Vec<f64>> = (0..t)
            .map(|_| {
                let mut r = vec![1.0];
                r.extend((1..k).map(|_| rng.random::<f64>() * 4.0 - 2.0));
                r
            })
            .collect();
        let y = rows
            .iter()
            .map(|r| r.iter().enumerate().map(|(j, v)| (j as f64 + 0.5) * v).sum::<f64>() + rng.random::<f64>() - 0.5)
            .collect();
        (rows, y)
    }

    #[test]
    fn hand_example() {
        let x = DesignMatrix::from_rows(names(2), &[vec![1.0, 0.0], vec![1.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let fit = fit_ols(&x, &[1.0, 3.0, 4.0]).unwrap();
        assert_abs_diff_eq!(fit.coefficients[0], 7.0 / 6.0, epsilon = 1e-12);
        assert_abs_diff_eq!(fit.coefficients[1], 1.5, epsilon = 1e-12);
        assert_abs_diff_eq!(fit.rss, 1.0 / 6.0, epsilon = 1e-12);
        assert_eq!(fit.dof, 1);
    }

    #[test]
    fn exact_fit() {
        let x = DesignMatrix::from_rows(names(2), &[vec![1.0, 0.0], vec![1.0, 1.0], vec![1.0, 2.0], vec![1.0, 5.0]]).unwrap();
        let y: Vec<f64> = [0.0, 1.0, 2.0, 5.0].iter().map(|v| 2.0 + 3.0 * v).collect();
        let fit = fit_ols(&x, &y).unwrap();
        assert!(fit.residuals.iter().all(|e| e.abs() < 1e-12));
        assert_abs_diff_eq!(fit.r_squared, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn duplicate_column_is_rank_deficient() {
        let x = DesignMatrix::from_columns(
            vec!["c".into(), "a".into(), "a2".into()],
            vec![vec![1.0; 5], vec![1.0, 2.0, 3.0, 4.0, 6.0], vec![1.0, 2.0, 3.0, 4.0, 6.0]],
        )
        .unwrap();
        match fit_ols(&x, &[1.0, 2.0, 3.0, 4.0, 5.0]) {
            Err(OlsError::RankDeficient(cols)) => assert!(cols.contains(&"a2".to_string())),
            other => panic!("expected rank deficiency, got {other:?}"),
        }
    }

    #[test]
    fn dimension_errors() {
        let x = DesignMatrix::from_rows(names(2), &[vec![1.0, 0.0], vec![1.0, 1.0], vec![1.0, 2.0]]).unwrap();
        assert!(matches!(fit_ols(&x, &[1.0, 2.0]), Err(OlsError::DimensionMismatch(_))));
        let small = x.rows(0, 2);
        assert!(matches!(fit_ols(&small, &[1.0, 2.0]), Err(OlsError::TooFewObservations { .. })));
    }

    #[test]
    fn matches_normal_equations_on_random_systems() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let (rows, y) = random_system(&mut rng, 20, 4);
            let x = DesignMatrix::from_rows(names(4), &rows).unwrap();
            let fit = fit_ols(&x, &y).unwrap();
            let oracle = normal_equations(&rows, &y);
            for (a, b) in fit.coefficients.iter().zip(&oracle) {
                assert_abs_diff_eq!(a, b, epsilon = 1e-8);
            }
        }
    }

    #[test]
    fn information_criteria_identities() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let (rows, y) = random_system(&mut rng, 40, 3);
        let x = DesignMatrix::from_rows(names(3), &rows).unwrap();
        let fit = fit_ols(&x, &y).unwrap();
        let (aic, bic) = information_criteria(&fit);
        let n = 40.0f64;
        // recompute the Gaussian log-likelihood independently from the RSS
        let ll = -n / 2.0 * ((2.0 * std::f64::consts::PI * fit.rss / n).ln() + 1.0);
        assert_abs_diff_eq!(aic, -2.0 * ll + 6.0, epsilon = 1e-9);
        assert_abs_diff_eq!(bic, -2.0 * ll + 3.0 * n.ln(), epsilon = 1e-9);
        assert_abs_diff_eq!(bic - aic, 3.0 * (n.ln() - 2.0), epsilon = 1e-9);
        // same RSS with one more column costs exactly 2 in AIC
        let aic_k4 = -2.0 * fit.log_likelihood + 2.0 * 4.0;
        assert_abs_diff_eq!(aic_k4 - aic, 2.0, epsilon = 1e-12);
    }

    #[test]
    fn wald_zero_coefficient_gives_zero() {
        // y depends on c and a only; column b is orthogonal to both and y
        let c = vec![1.0; 4];
        let a = vec![1.0, -1.0, 1.0, -1.0];
        let b = vec![1.0, 1.0, -1.0, -1.0];
        let y = vec![3.0, 1.0, 3.1, 0.9];
        let x = DesignMatrix::from_columns(names(3), vec![c, a, b]).unwrap();
        let fit = fit_ols(&x, &y).unwrap();
        assert_abs_diff_eq!(fit.coefficients[2], 0.0, epsilon = 1e-14);
        let f = wald_f(&fit, &x, &y, &[2]).unwrap();
        assert_abs_diff_eq!(f.f_value, 0.0, epsilon = 1e-12);
        assert!(matches!(wald_f(&fit, &x, &y, &[]), Err(OlsError::EmptyRestriction)));
        assert!(matches!(wald_f(&fit, &x, &y, &[0, 1, 2]), Err(OlsError::InvalidRestriction(_))));
    }

    #[test]
    fn wald_matches_two_regressions() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let (rows, y) = random_system(&mut rng, 30, 5);
        let x = DesignMatrix::from_rows(names(5), &rows).unwrap();
        let fit = fit_ols(&x, &y).unwrap();
        let f = wald_f(&fit, &x, &y, &[1, 3]).unwrap();
        let rss = |rows: &[Vec<f64>]| {
            let b = normal_equations(rows, &y);
            rows.iter()
                .zip(&y)
                .map(|(r, yi)| (yi - r.iter().zip(&b).map(|(p, q)| p * q).sum::<f64>()).powi(2))
                .sum::<f64>()
        };
        let rss_u = rss(&rows);
        let restricted: Vec<Vec<f64>> = rows.iter().map(|r| vec![r[0], r[2], r[4]]).collect();
        let rss_r = rss(&restricted);
        let oracle = ((rss_r - rss_u) / 2.0) / (rss_u / 25.0);
        assert_abs_diff_eq!(f.f_value, oracle, epsilon = 1e-8 * oracle.max(1.0));
    }

    #[test]
    fn recursive_mean_only_example() {
        let x = DesignMatrix::from_columns(vec!["c".into()], vec![vec![1.0; 4]]).unwrap();
        let w = recursive_residuals(&x, &[1.0, 1.0, 1.0, 4.0]).unwrap();
        assert_eq!(w.len(), 3);
        assert_abs_diff_eq!(w[0], 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(w[1], 0.0, epsilon = 1e-14);
        // 3 / sqrt(4/3)
        assert_abs_diff_eq!(w[2], 2.598076211353316, epsilon = 1e-12);
    }

    #[test]
    fn recursive_exact_linear_is_zero() {
        let xs: Vec<f64> = (0..10).map(|i| (i * i) as f64 * 0.3 - 1.0).collect();
        let x = DesignMatrix::from_columns(names(2), vec![vec![1.0; 10], xs.clone()]).unwrap();
        let y: Vec<f64> = xs.iter().map(|v| 1.0 - 2.0 * v).collect();
        let w = recursive_residuals(&x, &y).unwrap();
        assert_eq!(w.len(), 8);
        assert!(w.iter().all(|e| e.abs() < 1e-10));
    }

    #[test]
    fn recursive_rank_deficient_start() {
        let d = vec![0.0, 0.0, 0.0, 1.0, 0.0, 1.0];
        let x = DesignMatrix::from_columns(vec!["c".into(), "d".into()], vec![vec![1.0; 6], d]).unwrap();
        let y = [1.0, 2.0, 1.5, 4.0, 1.0, 3.0];
        assert!(matches!(recursive_residuals(&x, &y), Err(OlsError::RankDeficient(_))));
        let r = recursive_residuals_adaptive(&x, &y).unwrap();
        assert_eq!(r.first, 4);
        assert_eq!(r.values.len(), 2);
    }

    /// Brute-force recursive residuals: refit on each expanding window.
    fn recursive_oracle(rows: &[Vec<f64>], y: &[f64]) -> Vec<f64> {
        let k = rows[0].len();
        (k..rows.len())
            .map(|t| {
                let b = normal_equations(&rows[..t], &y[..t]);
                let xt = &rows[t];
                let pred: f64 = xt.iter().zip(&b).map(|(p, q)| p * q).sum();
                // x_t'(X'X)^-1 x_t via solving (X'X) v = x_t
                let mut a = vec![vec![0.0; k + 1]; k];
                for r in &rows[..t] {
                    for i in 0..k {
                        for j in 0..k {
                            a[i][j] += r[i] * r[j];
                        }
                    }
                }
                for i in 0..k {
                    a[i][k] = xt[i];
                }
                let xtx: Vec<Vec<f64>> = a.iter().map(|r| r[..k].to_vec()).collect();
                let v = {
                    let mut m = a.clone();
                    for c in 0..k {
                        let p = (c..k).max_by(|&i, &j| m[i][c].abs().total_cmp(&m[j][c].abs())).unwrap();
                        m.swap(c, p);
                        for r in 0..k {
                            if r != c {
                                let f = m[r][c] / m[c][c];
                                for j in c..=k {
                                    m[r][j] -= f * m[c][j];
                                }
                            }
                        }
                    }
                    (0..k).map(|i| m[i][k] / m[i][i]).collect::<Vec<_>>()
                };
                let _ = xtx;
                let q: f64 = xt.iter().zip(&v).map(|(p, q)| p * q).sum();
                (y[t] - pred) / (1.0 + q).sqrt()
            })
            .collect()
    }

    #[test]
    fn recursive_matches_expanding_window_refits() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let (rows, y) = random_system(&mut rng, 25, 3);
        let x = DesignMatrix::from_rows(names(3), &rows).unwrap();
        let w = recursive_residuals(&x, &y).unwrap();
        let oracle = recursive_oracle(&rows, &y);
        for (a, b) in w.iter().zip(&oracle) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-8);
        }
    }

    #[test]
    fn recursive_residual_variance_near_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let y: Vec<f64> = (0..500).map(|_| crate::rng::standard_normal(&mut rng)).collect();
        let x = DesignMatrix::from_columns(vec!["c".into()], vec![vec![1.0; 500]]).unwrap();
        let w = recursive_residuals(&x, &y).unwrap();
        let m = w.iter().sum::<f64>() / w.len() as f64;
        let var = w.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (w.len() - 1) as f64;
        assert!((var - 1.0).abs() < 0.15, "variance {var}");
    }

    fn arb_system() -> impl Strategy<Value = (Vec<Vec<f64>>, Vec<f64>)> {
        (any::<u64>(), 12usize..40, 2usize..6).prop_map(|(seed, t, k)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            random_system(&mut rng, t, k)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn residuals_orthogonal_to_regressors((rows, y) in arb_system()) {
            let k = rows[0].len();
            let x = DesignMatrix::from_rows(names(k), &rows).unwrap();
            let fit = fit_ols(&x, &y).unwrap();
            let xnorm = x.matrix().norm();
            let ynorm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
            for j in 0..k {
                let dot: f64 = x.column(j).iter().zip(&fit.residuals).map(|(a, b)| a * b).sum();
                prop_assert!(dot.abs() <= 1e-8 * xnorm * ynorm);
            }
            // covariance is PSD: diagonal non-negative and a random quadratic form >= 0
            for i in 0..k {
                prop_assert!(fit.cov(i, i) >= 0.0);
            }
        }

        #[test]
        fn adding_a_column_never_increases_rss((rows, y) in arb_system(), extra_seed in any::<u64>()) {
            let k = rows[0].len();
            let x = DesignMatrix::from_rows(names(k), &rows).unwrap();
            prop_assume!(x.nrows() > k + 1);
            let mut rng = ChaCha8Rng::seed_from_u64(extra_seed);
            let extra: Vec<f64> = (0..x.nrows()).map(|_| rng.random::<f64>()).collect();
            let rss0 = fit_ols(&x, &y).unwrap().rss;
            let rss1 = fit_ols(&x.with_column("extra", &extra).unwrap(), &y).unwrap().rss;
            prop_assert!(rss1 <= rss0 * (1.0 + 1e-12) + 1e-12);
        }

        #[test]
        fn wald_invariant_to_rescaling_unrestricted_column((rows, y) in arb_system(), scale in 1e-3f64..1e3) {
            let k = rows[0].len();
            prop_assume!(k >= 3);
            let x = DesignMatrix::from_rows(names(k), &rows).unwrap();
            let fit = fit_ols(&x, &y).unwrap();
            let f0 = wald_f(&fit, &x, &y, &[k - 1]).unwrap().f_value;
            let scaled_rows: Vec<Vec<f64>> = rows.iter().map(|r| { let mut r = r.clone(); r[1] *= scale; r }).collect();
            let xs = DesignMatrix::from_rows(names(k), &scaled_rows).unwrap();
            let fs = fit_ols(&xs, &y).unwrap();
            let f1 = wald_f(&fs, &xs, &y, &[k - 1]).unwrap().f_value;
            prop_assert!((f0 - f1).abs() <= 1e-10 * f0.max(1.0));
        }

        #[test]
        fn recursive_residuals_sum_of_squares_equals_rss((rows, y) in arb_system()) {
            let k = rows[0].len();
            let x = DesignMatrix::from_rows(names(k), &rows).unwrap();
            let fit = fit_ols(&x, &y).unwrap();
            let w = recursive_residuals(&x, &y).unwrap();
            let ss: f64 = w.iter().map(|v| v * v).sum();
            prop_assert!((ss - fit.rss).abs() <= 1e-8 * fit.rss.max(1.0));
        }
    }
}
