//! The end-to-end workflow: data construction, unit-root pretests, order
//! selection, bounds test, long-run and ECM estimation, forecast, and the
//! diagnostic/stability battery, collected into one [`RunReport`].

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::ardl::{self, ArdlError, ArdlOrder, CoefRow, EcmResult, GridSearch, LongRunResult, ModelSpec};
use crate::bounds::{self, BoundsError, BoundsOptions, BoundsResult};
use crate::checks::{self, DiagnosticsConfig, StabilityResult, TestResult};
use crate::dist::Level;
use crate::forecast::{self, Convergence, ExogScenario, Forecast, ScenarioKind};
use crate::frame::{self, Dataset, DummyRule, StatsRow, TimePoint};
use crate::ols::OlsFit;
use crate::rng;
use crate::unitroot::{self, ClassifyConfig, IntegrationOrder, Order};

pub const SCHEMA_VERSION: &str = "1.0.0";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Ingest,
    Transform,
    Descriptive,
    UnitRoot,
    Selection,
    Estimation,
    Bounds,
    LongRun,
    Ecm,
    Forecast,
    Diagnostics,
    Stability,
}

impl std::fmt::Display for Stage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = serde_json::to_value(self).expect("unit variant");
        f.write_str(s.as_str().expect("string"))
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PipelineError {
    #[error("invalid configuration: {0}")]
    Validation(String),
    #[error("{stage} stage failed{}: {message}", .model.as_ref().map(|m| format!(" for {m}")).unwrap_or_default())]
    Stage { stage: Stage, model: Option<String>, message: String, numerical: bool },
    #[error("{0} is integrated of order two or higher; the bounds test requires I(0) or I(1) variables")]
    I2Detected(String),
}

impl PipelineError {
    /// 2 validation, 3 numerical failure, 4 I(2) abort.
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::Validation(_) => 2,
            PipelineError::Stage { numerical: false, .. } => 2,
            PipelineError::Stage { numerical: true, .. } => 3,
            PipelineError::I2Detected(_) => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, PipelineError>;

fn stage_err(stage: Stage, model: Option<&str>, message: impl ToString, numerical: bool) -> PipelineError {
    PipelineError::Stage { stage, model: model.map(str::to_string), message: message.to_string(), numerical }
}

fn ardl_err(stage: Stage, model: &str, e: ArdlError) -> PipelineError {
    let numerical = !matches!(
        e,
        ArdlError::UnknownVariable(_) | ArdlError::InvalidSpec(_) | ArdlError::OrderOutOfBounds(_) | ArdlError::GridTooLarge { .. }
    );
    stage_err(stage, Some(model), e, numerical)
}

fn bounds_err(model: &str, e: BoundsError) -> PipelineError {
    let numerical = !matches!(e, BoundsError::UnsupportedCombination { .. } | BoundsError::CaseMismatch { .. });
    stage_err(Stage::Bounds, Some(model), e, numerical)
}

/// How a model variable is built from the raw columns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum TransformOp {
    Log { source: String },
    Level { source: String },
    Ratio { numerator: String, denominator: String },
    Dummy { rule: DummyRule },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Transform {
    pub name: String,
    #[serde(flatten)]
    pub op: TransformOp,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct SampleRange {
    pub start: Option<TimePoint>,
    pub end: Option<TimePoint>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelConfig {
    #[serde(flatten)]
    pub spec: ModelSpec,
    /// One model per entry, each adding a single proxy to the regressors.
    #[serde(default)]
    pub psi: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StabilityConfig {
    pub level: Level,
}

impl Default for StabilityConfig {
    fn default() -> Self {
        StabilityConfig { level: Level::Five }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct ForecastConfig {
    pub horizon: usize,
    #[serde(default)]
    pub scenario: ScenarioKind,
    /// Monthly increments for a drift scenario.
    #[serde(default)]
    pub growth: BTreeMap<String, f64>,
    /// CSV of future regressor values (one column per variable) for a user
    /// scenario; resolved relative to the config file.
    #[serde(default)]
    pub paths_file: Option<PathBuf>,
    #[serde(default)]
    pub paths: BTreeMap<String, Vec<f64>>,
}

fn default_date_column() -> String {
    "date".into()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    pub data: PathBuf,
    #[serde(default = "default_date_column")]
    pub date_column: String,
    #[serde(default)]
    pub sample: SampleRange,
    #[serde(default)]
    pub transforms: Vec<Transform>,
    pub model: ModelConfig,
    #[serde(default)]
    pub unit_root: ClassifyConfig,
    #[serde(default)]
    pub bounds: BoundsOptions,
    #[serde(default)]
    pub diagnostics: DiagnosticsConfig,
    #[serde(default)]
    pub stability: StabilityConfig,
    #[serde(default)]
    pub forecast: Option<ForecastConfig>,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
    #[serde(default)]
    pub seed: u64,
    /// Directory relative paths are resolved against.
    #[serde(skip)]
    pub base_dir: Option<PathBuf>,
}

impl PipelineConfig {
    pub fn from_toml_str(s: &str) -> Result<PipelineConfig> {
        toml::from_str(s).map_err(|e| PipelineError::Validation(e.to_string()))
    }

    pub fn from_file(path: &Path) -> Result<PipelineConfig> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| PipelineError::Validation(format!("cannot read config {}: {e}", path.display())))?;
        let mut cfg = PipelineConfig::from_toml_str(&text)?;
        cfg.base_dir = path.parent().map(Path::to_path_buf);
        Ok(cfg)
    }

    pub fn resolve(&self, p: &Path) -> PathBuf {
        match &self.base_dir {
            Some(b) if p.is_relative() => b.join(p),
            _ => p.to_path_buf(),
        }
    }

    /// SHA-256 of the canonical JSON form of the config.
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_vec(self).expect("config serializes");
        hex::encode(Sha256::digest(canonical))
    }

    /// One spec per model run; labels "Model i (PSI)".
    pub fn model_specs(&self) -> Vec<(String, Option<String>, ModelSpec)> {
        if self.model.psi.is_empty() {
            return vec![("Model 1".into(), None, self.model.spec.clone())];
        }
        self.model
            .psi
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let mut spec = self.model.spec.clone();
                spec.regressors.push(p.clone());
                (format!("Model {} ({p})", i + 1), Some(p.clone()), spec)
            })
            .collect()
    }

    pub fn dummy_rules(&self) -> BTreeMap<String, DummyRule> {
        self.transforms
            .iter()
            .filter_map(|t| match &t.op {
                TransformOp::Dummy { rule } => Some((t.name.clone(), rule.clone())),
                _ => None,
            })
            .collect()
    }

    /// Non-dummy variables used by any model (dependent first).
    pub fn model_variables(&self) -> Vec<String> {
        let mut out = vec![self.model.spec.dependent.clone()];
        for v in self.model.spec.regressors.iter().chain(&self.model.psi) {
            if !out.contains(v) {
                out.push(v.clone());
            }
        }
        out
    }

    pub fn all_variables(&self) -> Vec<String> {
        let mut out = self.model_variables();
        out.extend(self.model.spec.fixed.iter().map(|f| f.name.clone()));
        out
    }

    /// Plain-text statement of every default the run relies on.
    pub fn settings(&self) -> BTreeMap<String, String> {
        let s = &self.model.spec;
        let mut m = BTreeMap::new();
        let mut put = |k: &str, v: String| {
            m.insert(k.to_string(), v);
        };
        put("ardl.criterion", format!("{:?}", s.criterion).to_lowercase());
        put("ardl.max_lag", s.max_lag.to_string());
        put("ardl.intercept", s.intercept.to_string());
        put("ardl.trend", s.trend.to_string());
        put(
            "ardl.fixed_regressors",
            if s.fixed.is_empty() {
                "none".into()
            } else {
                s.fixed.iter().map(|f| format!("{}(lags 0..={})", f.name, f.lags)).collect::<Vec<_>>().join(", ")
                    + "; excluded from the order search"
            },
        );
        let adf = &self.unit_root.adf;
        put("adf.deterministic", format!("{:?}", adf.deterministic).to_lowercase());
        put("adf.lag_selection", format!("{:?}", adf.selection).to_lowercase());
        put("adf.max_lag", adf.max_lag.map_or("schwert".into(), |l| l.to_string()));
        put("adf.level", self.unit_root.level.to_string());
        put("bounds.case", self.bounds.case.to_string());
        put(
            "bounds.dummies_in_null",
            if self.bounds.dummies_in_null { "yes (dummies restricted and counted in k)".into() } else { "no".to_string() },
        );
        put("diagnostics.bg_lags", self.diagnostics.bg_lags.to_string());
        put("diagnostics.arch_lags", self.diagnostics.arch_lags.to_string());
        put("diagnostics.reset_powers", format!("{:?}", self.diagnostics.reset_powers));
        put("stability.level", self.stability.level.to_string());
        match self.forecast.as_ref().filter(|f| f.horizon > 0) {
            Some(f) => {
                put("forecast.horizon", f.horizon.to_string());
                put("forecast.scenario", f.scenario.to_string());
            }
            None => put("forecast.horizon", "0 (no forecast)".into()),
        }
        put("stars", "*** p<0.01, ** p<0.05, * p<0.10".into());
        for (name, rule) in self.dummy_rules() {
            put(&format!("dummy.{name}"), serde_json::to_string(&rule).expect("rule serializes"));
        }
        m
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub tool: String,
    pub version: String,
    pub schema_version: String,
    pub config_hash: String,
    pub data_hash: String,
    pub rng_algorithm: String,
    pub seed: u64,
    pub settings: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleInfo {
    pub start: TimePoint,
    pub end: TimePoint,
    pub nobs: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnitRootRow {
    pub variable: String,
    #[serde(flatten)]
    pub result: IntegrationOrder,
}

/// Coefficient table and fit statistics of one regression.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressionSummary {
    pub coefficients: Vec<CoefRow>,
    pub nobs: usize,
    pub dof: usize,
    pub r_squared: f64,
    pub adj_r_squared: f64,
    pub sigma: f64,
    pub rss: f64,
    pub log_likelihood: f64,
    pub aic: f64,
    pub bic: f64,
    pub f_statistic: Option<(f64, f64)>,
    pub durbin_watson: f64,
}

impl RegressionSummary {
    pub fn from_fit(fit: &OlsFit) -> RegressionSummary {
        let e = &fit.residuals;
        let dw_num: f64 = e.windows(2).map(|w| (w[1] - w[0]).powi(2)).sum();
        RegressionSummary {
            coefficients: (0..fit.nparams()).map(|i| CoefRow::from_fit(fit, i)).collect(),
            nobs: fit.nobs,
            dof: fit.dof,
            r_squared: fit.r_squared,
            adj_r_squared: fit.adj_r_squared,
            sigma: fit.sigma2.sqrt(),
            rss: fit.rss,
            log_likelihood: fit.log_likelihood,
            aic: fit.aic,
            bic: fit.bic,
            f_statistic: fit.f_statistic,
            durbin_watson: if fit.rss > 0.0 { dw_num / fit.rss } else { 0.0 },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EcmSummary {
    pub ect_coefficient: f64,
    pub ect_std_error: f64,
    pub ect_p_value: f64,
    pub regression: RegressionSummary,
}

impl EcmSummary {
    fn from_result(e: &EcmResult) -> EcmSummary {
        EcmSummary {
            ect_coefficient: e.ect_coefficient,
            ect_std_error: e.ect_std_error,
            ect_p_value: e.ect_p_value,
            regression: RegressionSummary::from_fit(&e.fit),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelReport {
    pub label: String,
    pub psi: Option<String>,
    pub spec: ModelSpec,
    pub order: ArdlOrder,
    pub order_label: String,
    pub order_mapping: Vec<(String, usize)>,
    pub selection: GridSearch,
    pub sample: SampleInfo,
    pub levels: RegressionSummary,
    pub bounds: BoundsResult,
    pub long_run: LongRunResult,
    pub ecm: EcmSummary,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub forecast: Option<Forecast>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub convergence: Option<Convergence>,
    pub diagnostics: Vec<TestResult>,
    pub stability: Vec<StabilityResult>,
    pub warnings: Vec<String>,
}

impl ModelReport {
    /// Calendar month of stability-path point `i`.
    pub fn stability_time(&self, s: &StabilityResult, i: usize) -> TimePoint {
        self.sample.start.add_months((s.first + i) as i64)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub provenance: Provenance,
    pub sample: SampleInfo,
    pub descriptive: Vec<StatsRow>,
    pub unit_roots: Vec<UnitRootRow>,
    pub models: Vec<ModelReport>,
    pub warnings: Vec<String>,
}

fn apply_transforms(mut d: Dataset, transforms: &[Transform]) -> Result<Dataset> {
    let err = |t: &Transform, e: frame::FrameError| stage_err(Stage::Transform, None, format!("{}: {e}", t.name), false);
    for t in transforms {
        let s = match &t.op {
            TransformOp::Log { source } => frame::log_transform(d.require(source).map_err(|e| err(t, e))?)
                .map_err(|e| err(t, e))?
                .renamed(&t.name),
            TransformOp::Level { source } => d.require(source).map_err(|e| err(t, e))?.clone().renamed(&t.name),
            TransformOp::Ratio { numerator, denominator } => {
                let a = d.require(numerator).map_err(|e| err(t, e))?;
                let b = d.require(denominator).map_err(|e| err(t, e))?;
                frame::ratio(&t.name, a, b).map_err(|e| err(t, e))?
            }
            TransformOp::Dummy { rule } => {
                frame::make_dummy(&t.name, d.start(), d.end(), rule).map_err(|e| err(t, e))?
            }
        };
        d.insert(s).map_err(|e| err(t, e))?;
    }
    Ok(d)
}

/// Checks names in the config against the raw columns plus the transforms,
/// before loading anything heavy.
fn validate_names(cfg: &PipelineConfig, columns: &BTreeSet<String>) -> Result<()> {
    let mut known = columns.clone();
    for t in &cfg.transforms {
        let sources: Vec<&String> = match &t.op {
            TransformOp::Log { source } | TransformOp::Level { source } => vec![source],
            TransformOp::Ratio { numerator, denominator } => vec![numerator, denominator],
            TransformOp::Dummy { .. } => vec![],
        };
        for s in sources {
            if !known.contains(s) {
                return Err(PipelineError::Validation(format!("transform {} references unknown variable {s}", t.name)));
            }
        }
        known.insert(t.name.clone());
    }
    for v in cfg.all_variables() {
        if !known.contains(&v) {
            return Err(PipelineError::Validation(format!("unknown variable {v}")));
        }
    }
    let mut psi = BTreeSet::new();
    for p in &cfg.model.psi {
        if !psi.insert(p) || cfg.model.spec.regressors.contains(p) {
            return Err(PipelineError::Validation(format!("proxy {p} is duplicated or already a regressor")));
        }
    }
    if let Some(f) = &cfg.forecast {
        if f.scenario == ScenarioKind::User && f.horizon > 0 && f.paths.is_empty() && f.paths_file.is_none() {
            return Err(PipelineError::Validation("user scenario needs paths or paths_file".into()));
        }
    }
    Ok(())
}

/// Loads, transforms, validates and windows the data.
pub fn prepare_data(cfg: &PipelineConfig) -> Result<(Dataset, String)> {
    let path = cfg.resolve(&cfg.data);
    let bytes = std::fs::read(&path).map_err(|e| PipelineError::Validation(format!("cannot read data {}: {e}", path.display())))?;
    let data_hash = hex::encode(Sha256::digest(&bytes));
    let raw = frame::read_csv(bytes.as_slice(), &cfg.date_column).map_err(|e| stage_err(Stage::Ingest, None, e, false))?;
    validate_names(cfg, &raw.names().map(str::to_string).collect())?;
    let full = apply_transforms(raw, &cfg.transforms)?;
    let d = full
        .window(cfg.sample.start, cfg.sample.end)
        .map_err(|e| PipelineError::Validation(format!("sample range: {e}")))?;
    for (_, _, spec) in cfg.model_specs() {
        spec.validate(&d).map_err(|e| PipelineError::Validation(e.to_string()))?;
    }
    Ok((d, data_hash))
}

pub fn unit_root_stage(cfg: &PipelineConfig, d: &Dataset) -> Result<Vec<UnitRootRow>> {
    let rows = cfg
        .model_variables()
        .into_iter()
        .map(|v| {
            let s = d.require(&v).map_err(|e| PipelineError::Validation(e.to_string()))?;
            let result = unitroot::classify_integration(&s.values, &cfg.unit_root)
                .map_err(|e| stage_err(Stage::UnitRoot, None, format!("{v}: {e}"), true))?;
            Ok(UnitRootRow { variable: v, result })
        })
        .collect::<Result<Vec<_>>>()?;
    if let Some(bad) = rows.iter().find(|r| r.result.order == Order::I2Plus) {
        return Err(PipelineError::I2Detected(bad.variable.clone()));
    }
    Ok(rows)
}

fn read_paths_csv(path: &Path) -> Result<BTreeMap<String, Vec<f64>>> {
    let bad = |m: String| PipelineError::Validation(format!("scenario file {}: {m}", path.display()));
    let mut rdr = csv::Reader::from_path(path).map_err(|e| bad(e.to_string()))?;
    let headers: Vec<String> = rdr.headers().map_err(|e| bad(e.to_string()))?.iter().map(str::to_string).collect();
    let mut out: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    for (row, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| bad(e.to_string()))?;
        for (h, v) in headers.iter().zip(rec.iter()) {
            if h == "date" || h == "timepoint" {
                continue;
            }
            let x: f64 = v.trim().parse().map_err(|_| bad(format!("row {}: '{v}' is not a number", row + 2)))?;
            out.entry(h.clone()).or_default().push(x);
        }
    }
    Ok(out)
}

pub fn build_scenario(cfg: &PipelineConfig, fc: &ForecastConfig, fit: &ardl::ArdlFit) -> Result<ExogScenario> {
    let rules = cfg.dummy_rules();
    Ok(match fc.scenario {
        ScenarioKind::HoldLast => ExogScenario::hold_last(fit, fc.horizon, &rules),
        ScenarioKind::Drift => ExogScenario::drift(fit, fc.horizon, &fc.growth, &rules),
        ScenarioKind::User => {
            let mut paths = fc.paths.clone();
            if let Some(p) = &fc.paths_file {
                paths.extend(read_paths_csv(&cfg.resolve(p))?);
            }
            ExogScenario::user(paths).with_fixed_defaults(fit, fc.horizon, &rules)
        }
    })
}

/// Runs every per-model stage in workflow order.
pub fn fit_model(cfg: &PipelineConfig, d: &Dataset, label: &str, psi: Option<String>, spec: &ModelSpec) -> Result<ModelReport> {
    let selection = ardl::grid_search(d, spec).map_err(|e| ardl_err(Stage::Selection, label, e))?;
    let fit = ardl::fit_ardl(d, spec, &selection.order).map_err(|e| ardl_err(Stage::Estimation, label, e))?;
    let cecm = ardl::to_cecm(&fit).map_err(|e| ardl_err(Stage::Estimation, label, e))?;
    let bounds = bounds::bounds_test(&cecm, &cfg.bounds).map_err(|e| bounds_err(label, e))?;
    let long_run = ardl::long_run(&cecm).map_err(|e| ardl_err(Stage::LongRun, label, e))?;
    let ecm = ardl::ecm_restricted(&cecm, &long_run).map_err(|e| ardl_err(Stage::Ecm, label, e))?;

    let mut warnings = bounds.warnings.clone();
    let (forecast, convergence) = match cfg.forecast.as_ref().filter(|f| f.horizon > 0) {
        Some(fc) => {
            let sc = build_scenario(cfg, fc, &fit)?;
            let f = forecast::dynamic_forecast(&fit, &sc, fc.horizon)
                .map_err(|e| stage_err(Stage::Forecast, Some(label), e, false))?;
            if !f.stable {
                warnings.push(format!("forecast dynamics are not stable (spectral radius {:.4})", f.spectral_radius));
            }
            let conv = forecast::convergence_check(&fit, &f);
            (Some(f), conv)
        }
        None => (None, None),
    };

    let diagnostics = checks::diagnostics(&fit.levels_fit, &fit.design, &fit.target, &cfg.diagnostics)
        .map_err(|e| stage_err(Stage::Diagnostics, Some(label), e, true))?;
    let level = cfg.stability.level;
    let stability = vec![
        checks::cusum(&fit.design, &fit.target, level).map_err(|e| stage_err(Stage::Stability, Some(label), e, true))?,
        checks::cusumsq(&fit.design, &fit.target, level).map_err(|e| stage_err(Stage::Stability, Some(label), e, true))?,
    ];

    Ok(ModelReport {
        label: label.to_string(),
        psi,
        spec: spec.clone(),
        order: fit.order.clone(),
        order_label: fit.order.to_string(),
        order_mapping: fit.order_mapping(),
        sample: SampleInfo {
            start: d.time_at(fit.first),
            end: d.end(),
            nobs: fit.nobs(),
        },
        selection,
        levels: RegressionSummary::from_fit(&fit.levels_fit),
        bounds,
        long_run,
        ecm: EcmSummary::from_result(&ecm),
        forecast,
        convergence,
        diagnostics,
        stability,
        warnings,
    })
}

pub fn provenance(cfg: &PipelineConfig, data_hash: String) -> Provenance {
    Provenance {
        tool: "ardlkit".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        schema_version: SCHEMA_VERSION.into(),
        config_hash: cfg.hash(),
        data_hash,
        rng_algorithm: rng::ALGORITHM.into(),
        seed: cfg.seed,
        settings: cfg.settings(),
    }
}

/// Full run. The model variants are independent and are fitted in parallel;
/// results keep configuration order.
pub fn run_pipeline(cfg: &PipelineConfig) -> Result<RunReport> {
    let (d, data_hash) = prepare_data(cfg)?;
    let names = cfg.all_variables();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let descriptive = frame::stats_table(&d, &refs).map_err(|e| stage_err(Stage::Descriptive, None, e, true))?;
    let unit_roots = unit_root_stage(cfg, &d)?;
    let mut warnings = Vec::new();
    for r in &unit_roots {
        if r.variable == cfg.model.spec.dependent && r.result.order == Order::I0 {
            warnings.push(format!("dependent variable {} classifies as I(0)", r.variable));
        }
    }
    let models = cfg
        .model_specs()
        .into_par_iter()
        .map(|(label, psi, spec)| fit_model(cfg, &d, &label, psi, &spec))
        .collect::<Result<Vec<_>>>()?;
    Ok(RunReport {
        provenance: provenance(cfg, data_hash),
        sample: SampleInfo { start: d.start(), end: d.end(), nobs: d.len() },
        descriptive,
        unit_roots,
        models,
        warnings,
    })
}
