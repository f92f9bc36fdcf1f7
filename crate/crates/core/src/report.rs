//! Rendering of a [`RunReport`] as text tables, JSON, or a bundle of
//! plot-ready CSV files.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::checks::StabilityKind;
use crate::dist::{stars, Level};
use crate::frame::StatsRow;
use crate::pipeline::{ModelReport, RunReport, UnitRootRow};
use crate::unitroot::Order;

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("io error on {path}: {message}")]
    Io { path: PathBuf, message: String },
    #[error("malformed report: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, ReportError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    #[default]
    Text,
    Json,
    CsvBundle,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            "csv-bundle" | "csv" => Ok(Format::CsvBundle),
            _ => Err(format!("unknown format '{s}' (text, json, csv-bundle)")),
        }
    }
}

/// The JSON schema reports validate against.
pub const JSON_SCHEMA: &str = include_str!("../schema/run_report.schema.json");

/// `1.848*** [0.000]`
pub fn coef_cell(estimate: f64, p_value: f64) -> String {
    format!("{estimate:.3}{} [{p_value:.3}]", stars(p_value))
}

pub fn to_json(r: &RunReport) -> String {
    let mut s = serde_json::to_string_pretty(r).expect("report serializes");
    s.push('\n');
    s
}

pub fn from_json(s: &str) -> Result<RunReport> {
    serde_json::from_str(s).map_err(|e| ReportError::Parse(e.to_string()))
}

fn table(out: &mut String, header: &[String], rows: &[Vec<String>]) {
    let ncol = header.len();
    let mut w: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (j, c) in r.iter().enumerate().take(ncol) {
            w[j] = w[j].max(c.chars().count());
        }
    }
    let line = |cells: &[String]| {
        cells
            .iter()
            .enumerate()
            .map(|(j, c)| if j == 0 { format!("{c:<w$}", w = w[j]) } else { format!("{c:>w$}", w = w[j]) })
            .collect::<Vec<_>>()
            .join("  ")
    };
    let total: usize = w.iter().sum::<usize>() + 2 * (ncol.saturating_sub(1));
    let _ = writeln!(out, "{}", line(header).trim_end());
    let _ = writeln!(out, "{}", "-".repeat(total));
    for r in rows {
        let _ = writeln!(out, "{}", line(r).trim_end());
    }
    out.push('\n');
}

fn mark(order: Order, at_level: bool) -> &'static str {
    match (order, at_level) {
        (Order::I0, true) => "x",
        (Order::I1, false) => "x",
        _ => "",
    }
}

fn model_header(models: &[ModelReport], first: &str) -> Vec<String> {
    std::iter::once(first.to_string()).chain(models.iter().map(|m| m.label.clone())).collect()
}

fn stat(models: &[ModelReport], name: &str, f: &dyn Fn(&ModelReport) -> String) -> Vec<String> {
    std::iter::once(name.to_string()).chain(models.iter().map(f)).collect()
}

/// Row names across models in order of first appearance.
fn union_names<'a>(models: &'a [ModelReport], names: impl Fn(&'a ModelReport) -> Vec<&'a str>) -> Vec<&'a str> {
    let mut out: Vec<&str> = Vec::new();
    for m in models {
        for n in names(m) {
            if !out.contains(&n) {
                out.push(n);
            }
        }
    }
    out
}

pub fn text_bounds(models: &[ModelReport]) -> String {
    let mut out = String::new();
    out.push_str("Bounds test\n");
    let mut rows = vec![
        std::iter::once("Selected order".to_string()).chain(models.iter().map(|m| m.order_label.clone())).collect(),
        std::iter::once("Mapping".to_string())
            .chain(models.iter().map(|m| m.order_mapping.iter().map(|(n, l)| format!("{n}:{l}")).collect::<Vec<_>>().join(" ")))
            .collect(),
        std::iter::once("F-statistic".to_string())
            .chain(models.iter().map(|m| format!("{:.3}{}", m.bounds.f_statistic, m.bounds.stars())))
            .collect(),
        std::iter::once("k".to_string()).chain(models.iter().map(|m| m.bounds.k.to_string())).collect(),
        std::iter::once("Case".to_string()).chain(models.iter().map(|m| m.bounds.case.to_string())).collect::<Vec<_>>(),
    ];
    for l in [Level::Ten, Level::Five, Level::TwoHalf, Level::One] {
        rows.push(
            std::iter::once(format!("{l} I(0) / I(1)"))
                .chain(models.iter().map(|m| {
                    let (a, b) = m.bounds.bounds[&l];
                    format!("{a:.2} / {b:.2}")
                }))
                .collect(),
        );
    }
    rows.push(
        std::iter::once("Decision (5%)".to_string())
            .chain(models.iter().map(|m| m.bounds.decision(Level::Five).to_string()))
            .collect(),
    );
    table(&mut out, &model_header(models, ""), &rows);
    out
}

pub fn text_long_run(models: &[ModelReport]) -> String {
    let mut out = String::new();
    out.push_str("Long-run coefficients\n");
    let names = union_names(models, |m| m.long_run.coefficients.iter().map(|c| c.name.as_str()).collect());
    let rows: Vec<Vec<String>> = names
        .iter()
        .map(|n| {
            std::iter::once(n.to_string())
                .chain(models.iter().map(|m| m.long_run.get(n).map_or(String::new(), |c| coef_cell(c.estimate, c.p_value))))
                .collect()
        })
        .collect();
    table(&mut out, &model_header(models, "Variable"), &rows);
    out
}

pub fn text_ecm(models: &[ModelReport]) -> String {
    let mut out = String::new();
    out.push_str("Error-correction model\n");
    let names = union_names(models, |m| m.ecm.regression.coefficients.iter().map(|c| c.name.as_str()).collect());
    let mut rows: Vec<Vec<String>> = names
        .iter()
        .map(|n| {
            std::iter::once(n.to_string())
                .chain(models.iter().map(|m| {
                    m.ecm.regression.coefficients.iter().find(|c| c.name == *n).map_or(String::new(), |c| coef_cell(c.estimate, c.p_value))
                }))
                .collect()
        })
        .collect();
    rows.push(stat(models, "R-squared", &|m| format!("{:.3}", m.ecm.regression.r_squared)));
    rows.push(stat(models, "Adj. R-squared", &|m| format!("{:.3}", m.ecm.regression.adj_r_squared)));
    rows.push(stat(models, "Durbin-Watson", &|m| format!("{:.3}", m.ecm.regression.durbin_watson)));
    rows.push(stat(models, "Observations", &|m| m.ecm.regression.nobs.to_string()));
    table(&mut out, &model_header(models, "Variable"), &rows);
    out
}

/// Diagnostic battery plus the stability verdicts.
pub fn text_diagnostics(models: &[ModelReport]) -> String {
    let mut out = String::new();
    out.push_str("Diagnostics\n");
    let names = union_names(models, |m| m.diagnostics.iter().map(|t| t.name.as_str()).collect());
    let mut rows: Vec<Vec<String>> = names
        .iter()
        .map(|n| {
            std::iter::once(n.to_string())
                .chain(models.iter().map(|m| {
                    m.diagnostics.iter().find(|t| t.name == *n).map_or(String::new(), |t| format!("{:.3} [{:.3}]", t.statistic, t.p_value))
                }))
                .collect()
        })
        .collect();
    for kind in [StabilityKind::Cusum, StabilityKind::CusumSq] {
        let label = match kind {
            StabilityKind::Cusum => "CUSUM",
            StabilityKind::CusumSq => "CUSUMSQ",
        };
        rows.push(stat(models, label, &|m| {
            m.stability.iter().find(|s| s.kind == kind).map_or(String::new(), |s| s.verdict().to_string())
        }));
    }
    table(&mut out, &model_header(models, "Test"), &rows);
    out
}

pub fn text_forecast(models: &[ModelReport]) -> String {
    let mut out = String::new();
    if !models.iter().any(|m| m.forecast.is_some()) {
        return out;
    }
    out.push_str("Forecast\n");
    let horizon = models.iter().filter_map(|m| m.forecast.as_ref().map(|f| f.horizon)).max().unwrap_or(0);
    let times = models.iter().find_map(|m| m.forecast.as_ref()).map(|f| f.times.clone()).unwrap_or_default();
    let rows: Vec<Vec<String>> = (0..horizon)
        .map(|h| {
            std::iter::once(times.get(h).map_or(String::new(), |t| t.to_string()))
                .chain(models.iter().map(|m| {
                    m.forecast.as_ref().and_then(|f| f.point.get(h)).map_or(String::new(), |v| format!("{v:.4}"))
                }))
                .collect()
        })
        .collect();
    table(&mut out, &model_header(models, "Month"), &rows);
    for m in models {
        if let Some(f) = &m.forecast {
            let _ = writeln!(out, "{}: scenario {}, spectral radius {:.4}", m.label, f.scenario.kind, f.spectral_radius);
            for n in &f.scenario.notes {
                let _ = writeln!(out, "  note: {n}");
            }
        }
    }
    out.push('\n');
    out
}

/// Descriptive statistics with the unit-root classification (an `x` under
/// Level or 1st Diff. marks where stationarity was found).
pub fn text_unit_roots(descriptive: &[StatsRow], unit_roots: &[UnitRootRow]) -> String {
    let mut out = String::new();
    out.push_str("Descriptive statistics and unit roots\n");
    let header: Vec<String> = ["Variable", "Mean", "Min", "Max", "Stand. Dev.", "Level", "1st Diff.", "Order"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let rows: Vec<Vec<String>> = descriptive
        .iter()
        .map(|s| {
            let ur = unit_roots.iter().find(|u| u.variable == s.name);
            let (lvl, dif, ord) = match ur {
                Some(u) => (mark(u.result.order, true).into(), mark(u.result.order, false).into(), u.result.order.to_string()),
                None => (String::new(), String::new(), "fixed".into()),
            };
            vec![
                s.name.clone(),
                format!("{:.3}", s.summary.mean),
                format!("{:.3}", s.summary.min),
                format!("{:.3}", s.summary.max),
                format!("{:.3}", s.summary.std_dev),
                lvl,
                dif,
                ord,
            ]
        })
        .collect();
    table(&mut out, &header, &rows);
    out
}

pub fn render_text(r: &RunReport) -> String {
    let mut out = String::new();
    let p = &r.provenance;
    let _ = writeln!(out, "{} {} — sample {} to {} ({} obs)", p.tool, p.version, r.sample.start, r.sample.end, r.sample.nobs);
    let _ = writeln!(out, "config sha256 {}", p.config_hash);
    let _ = writeln!(out, "data   sha256 {}\n", p.data_hash);

    out.push_str(&text_unit_roots(&r.descriptive, &r.unit_roots));
    let models = &r.models;
    out.push_str(&text_bounds(models));
    out.push_str(&text_long_run(models));
    out.push_str(&text_ecm(models));
    out.push_str(&text_diagnostics(models));
    out.push_str(&text_forecast(models));
    let warnings: Vec<String> =
        r.warnings.iter().cloned().chain(r.models.iter().flat_map(|m| m.warnings.iter().map(move |w| format!("{}: {w}", m.label)))).collect();
    if !warnings.is_empty() {
        out.push_str("Warnings\n");
        for w in warnings {
            let _ = writeln!(out, "- {w}");
        }
        out.push('\n');
    }

    out.push_str("Settings\n");
    for (k, v) in &p.settings {
        let _ = writeln!(out, "  {k} = {v}");
    }
    out.push_str("Significance: *** p<0.01, ** p<0.05, * p<0.10; p-values in brackets.\n");
    out
}

fn slug(label: &str) -> String {
    let mut s: String = label.chars().map(|c| if c.is_ascii_alphanumeric() { c.to_ascii_lowercase() } else { '_' }).collect();
    while s.contains("__") {
        s = s.replace("__", "_");
    }
    s.trim_matches('_').to_string()
}

fn csv_string(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}

/// `t,path,lower,upper` rows of a stability path.
pub fn stability_csv(m: &ModelReport, kind: StabilityKind) -> Option<String> {
    let s = m.stability.iter().find(|s| s.kind == kind)?;
    let rows = (0..s.path.len()).map(|i| {
        vec![m.stability_time(s, i).to_string(), format!("{:.10}", s.path[i]), format!("{:.10}", s.lower[i]), format!("{:.10}", s.upper[i])]
    });
    let mut text = csv_string(&["t", "path", "lower", "upper"], rows);
    let _ = writeln!(text, "# {}", s.verdict());
    Some(text)
}

/// `timepoint,forecast` rows.
pub fn forecast_csv(m: &ModelReport) -> Option<String> {
    let f = m.forecast.as_ref()?;
    Some(csv_string(
        &["timepoint", "forecast"],
        f.times.iter().zip(&f.point).map(|(t, v)| vec![t.to_string(), format!("{v:.10}")]),
    ))
}

/// File name → contents of the CSV bundle.
pub fn csv_bundle(r: &RunReport) -> Vec<(String, String)> {
    let mut files = Vec::new();
    files.push((
        "descriptive.csv".to_string(),
        csv_string(
            &["variable", "mean", "min", "max", "std_dev"],
            r.descriptive.iter().map(|s| {
                vec![
                    s.name.clone(),
                    format!("{:.10}", s.summary.mean),
                    format!("{:.10}", s.summary.min),
                    format!("{:.10}", s.summary.max),
                    format!("{:.10}", s.summary.std_dev),
                ]
            }),
        ),
    ));
    files.push((
        "unit_roots.csv".to_string(),
        csv_string(
            &["variable", "order", "adf_level", "lags_level", "adf_diff", "lags_diff"],
            r.unit_roots.iter().map(|u| {
                let d = u.result.diff_result.as_ref();
                vec![
                    u.variable.clone(),
                    u.result.order.to_string(),
                    format!("{:.10}", u.result.level_result.statistic),
                    u.result.level_result.lags_used.to_string(),
                    d.map_or(String::new(), |d| format!("{:.10}", d.statistic)),
                    d.map_or(String::new(), |d| d.lags_used.to_string()),
                ]
            }),
        ),
    ));
    files.push((
        "bounds.csv".to_string(),
        csv_string(
            &["model", "order", "f_statistic", "k", "case", "i0_5pct", "i1_5pct", "decision_5pct"],
            r.models.iter().map(|m| {
                let (a, b) = m.bounds.bounds[&Level::Five];
                vec![
                    m.label.clone(),
                    m.order_label.clone(),
                    format!("{:.10}", m.bounds.f_statistic),
                    m.bounds.k.to_string(),
                    m.bounds.case.to_string(),
                    a.to_string(),
                    b.to_string(),
                    m.bounds.decision(Level::Five).to_string(),
                ]
            }),
        ),
    ));
    let coef_rows = |pick: &dyn Fn(&ModelReport) -> Vec<crate::ardl::CoefRow>| -> Vec<Vec<String>> {
        r.models
            .iter()
            .flat_map(|m| {
                pick(m).into_iter().map(move |c| {
                    vec![
                        m.label.clone(),
                        c.name.clone(),
                        format!("{:.10}", c.estimate),
                        format!("{:.10}", c.std_error),
                        format!("{:.10}", c.t_value),
                        format!("{:.10}", c.p_value),
                    ]
                })
            })
            .collect()
    };
    let header = ["model", "variable", "estimate", "std_error", "t_value", "p_value"];
    files.push(("long_run.csv".into(), csv_string(&header, coef_rows(&|m| m.long_run.coefficients.clone()))));
    files.push(("ecm.csv".into(), csv_string(&header, coef_rows(&|m| m.ecm.regression.coefficients.clone()))));
    files.push((
        "diagnostics.csv".into(),
        csv_string(
            &["model", "test", "statistic", "p_value", "dof", "verdict_5pct"],
            r.models.iter().flat_map(|m| {
                m.diagnostics.iter().map(move |t| {
                    vec![
                        m.label.clone(),
                        t.name.clone(),
                        format!("{:.10}", t.statistic),
                        format!("{:.10}", t.p_value),
                        t.dof.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(";"),
                        format!("{:?}", t.verdict_at_5pct),
                    ]
                })
            }),
        ),
    ));
    for m in &r.models {
        let s = slug(&m.label);
        if let Some(t) = stability_csv(m, StabilityKind::Cusum) {
            files.push((format!("cusum_{s}.csv"), t));
        }
        if let Some(t) = stability_csv(m, StabilityKind::CusumSq) {
            files.push((format!("cusumsq_{s}.csv"), t));
        }
        if let Some(t) = forecast_csv(m) {
            files.push((format!("forecast_{s}.csv"), t));
        }
    }
    files
}

fn write(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| ReportError::Io { path: path.to_path_buf(), message: e.to_string() })
}

/// Writes the report in `format` under `dir`; returns the files written.
pub fn render_report(r: &RunReport, format: Format, dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| ReportError::Io { path: dir.to_path_buf(), message: e.to_string() })?;
    let files: Vec<(String, String)> = match format {
        Format::Text => vec![("report.txt".into(), render_text(r))],
        Format::Json => vec![("report.json".into(), to_json(r))],
        Format::CsvBundle => csv_bundle(r),
    };
    let mut written = Vec::new();
    for (name, text) in files {
        let p = dir.join(name);
        write(&p, &text)?;
        written.push(p);
    }
    Ok(written)
}
