//! `ardlkit` command-line front end.
//!
//! Exit codes: 0 success, 2 validation error, 3 numerical failure,
//! 4 I(2) variable detected.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use ardlkit::ardl::Criterion;
use ardlkit::bounds::Case;
use ardlkit::checks::StabilityKind;
use ardlkit::dist::Level;
use ardlkit::forecast::ScenarioKind;
use ardlkit::frame;
use ardlkit::pipeline::{self, ForecastConfig, ModelReport, PipelineConfig, PipelineError};
use ardlkit::report::{self, Format};
use ardlkit::rng;
use ardlkit::sim::{self, DgpConfig, DgpKind, OrderChoice, StudyTest};
use ardlkit::unitroot::AdfConfig;
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "ardlkit", version, about = "ARDL bounds-testing cointegration toolkit")]
struct Cli {
    /// Pipeline configuration (TOML).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory; results go to stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true, value_parser = parse_format)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

fn parse_format(s: &str) -> Result<Format, String> {
    s.parse()
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Load and transform the data; write the model dataset and descriptive statistics.
    Ingest,
    /// Unit-root classification of the model variables.
    Adf,
    /// Order selection, long-run coefficients and the error-correction model.
    Fit(ModelArgs),
    /// Bounds F-test.
    Bounds {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_parser = parse_case)]
        case: Option<Case>,
        /// Put the dummies into the null restriction and into k.
        #[arg(long)]
        dummies_in_null: bool,
    },
    /// Residual diagnostics (BG, BP, ARCH, JB, RESET).
    Diagnose(ModelArgs),
    /// CUSUM / CUSUMSQ paths with their bands.
    Stability {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_enum, default_value_t = KindArg::Both)]
        kind: KindArg,
        #[arg(long, value_parser = parse_level)]
        level: Option<Level>,
    },
    /// Dynamic forecast.
    Forecast {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        horizon: Option<usize>,
        #[arg(long, value_enum)]
        scenario: Option<ScenarioArg>,
        /// CSV of future regressor values for `--scenario file`.
        #[arg(long)]
        scenario_file: Option<PathBuf>,
    },
    /// Monte Carlo studies.
    #[command(subcommand)]
    Simulate(SimCommand),
    /// Full pipeline with all report formats.
    Report,
}

#[derive(Args, Debug, Default)]
struct ModelArgs {
    #[arg(long)]
    dependent: Option<String>,
    /// Comma-separated regressor names (replaces the configured list).
    #[arg(long, value_delimiter = ',')]
    regressors: Option<Vec<String>>,
    #[arg(long)]
    max_lag: Option<usize>,
    #[arg(long, value_enum)]
    criterion: Option<CriterionArg>,
    /// Restrict the run to the configured payment-innovation proxy matching this name.
    #[arg(long, value_enum)]
    psi: Option<PsiArg>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum CriterionArg {
    Aic,
    Bic,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum PsiArg {
    Atmd,
    Apmk,
    Em,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
enum KindArg {
    Cusum,
    Cusumsq,
    Both,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ScenarioArg {
    HoldLast,
    Drift,
    File,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum TestArg {
    Bounds,
    Adf,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum DgpArg {
    Walks,
    Cointegrated,
}

#[derive(Subcommand, Debug)]
enum SimCommand {
    /// Simulated bounds critical values.
    Cv {
        #[arg(long)]
        k: usize,
        #[arg(long, value_parser = parse_case, default_value = "III")]
        case: Case,
        #[arg(long, default_value_t = 1000)]
        t: usize,
        #[arg(long, default_value_t = 20000)]
        reps: usize,
    },
    /// Rejection frequencies of a test under a synthetic DGP.
    Power {
        #[arg(long, value_enum)]
        test: TestArg,
        #[arg(long, value_enum)]
        dgp: DgpArg,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, default_value_t = 300)]
        t: usize,
        #[arg(long, default_value_t = 1000)]
        reps: usize,
        #[arg(long, default_value_t = -0.2, allow_hyphen_values = true)]
        adjustment: f64,
        /// Long-run coefficient used for every regressor.
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        theta: f64,
        #[arg(long, default_value_t = 1.0)]
        noise_sd: f64,
        #[arg(long, value_parser = parse_case, default_value = "III")]
        case: Case,
        #[arg(long, default_value_t = 2)]
        max_lag: usize,
    },
}

fn parse_case(s: &str) -> Result<Case, String> {
    Case::parse(s).ok_or_else(|| format!("unknown case '{s}' (II, III, IV, V)"))
}

fn parse_level(s: &str) -> Result<Level, String> {
    Level::parse(s).ok_or_else(|| format!("unknown level '{s}' (1, 2.5, 5, 10)"))
}

#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl From<PipelineError> for Failure {
    fn from(e: PipelineError) -> Self {
        Failure { code: e.exit_code() as u8, message: e.to_string() }
    }
}

impl From<report::ReportError> for Failure {
    fn from(e: report::ReportError) -> Self {
        Failure { code: 2, message: e.to_string() }
    }
}

impl From<sim::SimError> for Failure {
    fn from(e: sim::SimError) -> Self {
        Failure { code: 2, message: e.to_string() }
    }
}

fn invalid(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

type Outcome = Result<(), Failure>;

struct Ctx {
    out: Option<PathBuf>,
    format: Option<Format>,
    seed: Option<u64>,
}

impl Ctx {
    /// Writes `contents` to `<out>/<name>`, or to stdout without `--out`.
    fn emit(&self, name: &str, contents: &str) -> Outcome {
        match &self.out {
            Some(dir) => {
                std::fs::create_dir_all(dir).map_err(|e| invalid(format!("{}: {e}", dir.display())))?;
                let p = dir.join(name);
                std::fs::write(&p, contents).map_err(|e| invalid(format!("{}: {e}", p.display())))?;
                eprintln!("wrote {}", p.display());
            }
            None => print!("{contents}"),
        }
        Ok(())
    }

    fn json(&self) -> bool {
        self.format == Some(Format::Json)
    }
}

fn load_config(cli_config: &Option<PathBuf>, seed: Option<u64>) -> Result<PipelineConfig, Failure> {
    let path = cli_config.as_ref().ok_or_else(|| invalid("this command needs --config"))?;
    let mut cfg = PipelineConfig::from_file(path)?;
    if let Some(s) = seed {
        cfg.seed = s;
    }
    Ok(cfg)
}

fn apply_model_args(cfg: &mut PipelineConfig, m: &ModelArgs) -> Outcome {
    let spec = &mut cfg.model.spec;
    if let Some(d) = &m.dependent {
        spec.dependent = d.clone();
    }
    if let Some(r) = &m.regressors {
        spec.regressors = r.clone();
    }
    if let Some(n) = m.max_lag {
        spec.max_lag = n;
    }
    if let Some(c) = m.criterion {
        spec.criterion = match c {
            CriterionArg::Aic => Criterion::Aic,
            CriterionArg::Bic => Criterion::Bic,
        };
    }
    if let Some(p) = m.psi {
        let key = match p {
            PsiArg::Atmd => "atmd",
            PsiArg::Apmk => "apmk",
            PsiArg::Em => "em",
        };
        let hit: Vec<String> = cfg.model.psi.iter().filter(|v| v.to_ascii_lowercase().ends_with(key)).cloned().collect();
        match hit.as_slice() {
            [one] => cfg.model.psi = vec![one.clone()],
            [] => return Err(invalid(format!("no configured proxy matches '{key}' (configured: {:?})", cfg.model.psi))),
            _ => return Err(invalid(format!("proxy '{key}' is ambiguous: {hit:?}"))),
        }
    }
    Ok(())
}

fn fit_models(cfg: &PipelineConfig) -> Result<Vec<ModelReport>, Failure> {
    let (d, _) = pipeline::prepare_data(cfg)?;
    cfg.model_specs()
        .into_iter()
        .map(|(label, psi, spec)| pipeline::fit_model(cfg, &d, &label, psi, &spec).map_err(Failure::from))
        .collect()
}

fn to_json<T: serde::Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn run(cli: Cli) -> Outcome {
    let ctx = Ctx { out: cli.out.clone(), format: cli.format, seed: cli.seed };
    match cli.command {
        Command::Ingest => {
            let cfg = load_config(&cli.config, ctx.seed)?;
            let (d, _) = pipeline::prepare_data(&cfg)?;
            let names = cfg.all_variables();
            let refs: Vec<&str> = names.iter().map(String::as_str).collect();
            let selected = d.select(&refs).map_err(|e| invalid(e.to_string()))?;
            let mut data = Vec::new();
            frame::write_csv(&selected, &mut data).map_err(|e| invalid(e.to_string()))?;
            let stats = frame::stats_table(&d, &refs).map_err(|e| invalid(e.to_string()))?;
            if ctx.json() {
                return ctx.emit("descriptive.json", &to_json(&stats));
            }
            if ctx.out.is_some() {
                ctx.emit("dataset.csv", &String::from_utf8(data).expect("utf-8"))?;
            }
            let mut csv = Vec::new();
            frame::write_stats_csv(&stats, &mut csv).map_err(|e| invalid(e.to_string()))?;
            ctx.emit("descriptive.csv", &String::from_utf8(csv).expect("utf-8"))
        }
        Command::Adf => {
            let cfg = load_config(&cli.config, ctx.seed)?;
            let (d, _) = pipeline::prepare_data(&cfg)?;
            let names = cfg.all_variables();
            let refs: Vec<&str> = names.iter().map(String::as_str).collect();
            let stats = frame::stats_table(&d, &refs).map_err(|e| invalid(e.to_string()))?;
            let rows = pipeline::unit_root_stage(&cfg, &d)?;
            if ctx.json() {
                ctx.emit("unit_roots.json", &to_json(&rows))
            } else {
                ctx.emit("unit_roots.txt", &report::text_unit_roots(&stats, &rows))
            }
        }
        Command::Fit(m) => {
            let mut cfg = load_config(&cli.config, ctx.seed)?;
            apply_model_args(&mut cfg, &m)?;
            cfg.forecast = None;
            let models = fit_models(&cfg)?;
            if ctx.json() {
                ctx.emit("fit.json", &to_json(&models))
            } else {
                let text = [report::text_bounds(&models), report::text_long_run(&models), report::text_ecm(&models)].concat();
                ctx.emit("fit.txt", &text)
            }
        }
        Command::Bounds { model, case, dummies_in_null } => {
            let mut cfg = load_config(&cli.config, ctx.seed)?;
            apply_model_args(&mut cfg, &model)?;
            if let Some(c) = case {
                cfg.bounds.case = c;
                cfg.model.spec.trend = c.has_trend();
            }
            cfg.bounds.dummies_in_null |= dummies_in_null;
            cfg.forecast = None;
            let models = fit_models(&cfg)?;
            if ctx.json() {
                let b: Vec<_> = models.iter().map(|m| (&m.label, &m.bounds)).collect();
                ctx.emit("bounds.json", &to_json(&b))
            } else {
                ctx.emit("bounds.txt", &report::text_bounds(&models))
            }
        }
        Command::Diagnose(m) => {
            let mut cfg = load_config(&cli.config, ctx.seed)?;
            apply_model_args(&mut cfg, &m)?;
            cfg.forecast = None;
            let models = fit_models(&cfg)?;
            if ctx.json() {
                let b: Vec<_> = models.iter().map(|m| (&m.label, &m.diagnostics)).collect();
                ctx.emit("diagnostics.json", &to_json(&b))
            } else {
                ctx.emit("diagnostics.txt", &report::text_diagnostics(&models))
            }
        }
        Command::Stability { model, kind, level } => {
            let mut cfg = load_config(&cli.config, ctx.seed)?;
            apply_model_args(&mut cfg, &model)?;
            if let Some(l) = level {
                cfg.stability.level = l;
            }
            cfg.forecast = None;
            let models = fit_models(&cfg)?;
            let kinds: Vec<StabilityKind> = match kind {
                KindArg::Cusum => vec![StabilityKind::Cusum],
                KindArg::Cusumsq => vec![StabilityKind::CusumSq],
                KindArg::Both => vec![StabilityKind::Cusum, StabilityKind::CusumSq],
            };
            for m in &models {
                for k in &kinds {
                    let name = match k {
                        StabilityKind::Cusum => "cusum",
                        StabilityKind::CusumSq => "cusumsq",
                    };
                    let text = report::stability_csv(m, *k).expect("both paths are computed");
                    let file = format!("{name}_{}.csv", slug(&m.label));
                    if ctx.out.is_none() && models.len() * kinds.len() > 1 {
                        println!("# {} {name}", m.label);
                    }
                    ctx.emit(&file, &text)?;
                }
            }
            Ok(())
        }
        Command::Forecast { model, horizon, scenario, scenario_file } => {
            let mut cfg = load_config(&cli.config, ctx.seed)?;
            apply_model_args(&mut cfg, &model)?;
            let mut fc = cfg.forecast.clone().unwrap_or_default();
            if let Some(h) = horizon {
                fc.horizon = h;
            }
            if let Some(s) = scenario {
                fc.scenario = match s {
                    ScenarioArg::HoldLast => ScenarioKind::HoldLast,
                    ScenarioArg::Drift => ScenarioKind::Drift,
                    ScenarioArg::File => ScenarioKind::User,
                };
            }
            if let Some(f) = scenario_file {
                fc.paths_file = Some(std::env::current_dir().map(|d| d.join(&f)).unwrap_or(f));
            }
            if fc.horizon == 0 {
                return Err(invalid("forecast needs --horizon (or forecast.horizon in the config)"));
            }
            if fc.scenario == ScenarioKind::User && fc.paths.is_empty() && fc.paths_file.is_none() {
                return Err(invalid("--scenario file needs --scenario-file"));
            }
            cfg.forecast = Some(ForecastConfig { ..fc });
            let models = fit_models(&cfg)?;
            for m in &models {
                if ctx.json() {
                    ctx.emit(&format!("forecast_{}.json", slug(&m.label)), &to_json(&m.forecast))?;
                } else {
                    if ctx.out.is_none() && models.len() > 1 {
                        println!("# {}", m.label);
                    }
                    ctx.emit(&format!("forecast_{}.csv", slug(&m.label)), &report::forecast_csv(m).expect("forecast requested"))?;
                }
                if let Some(f) = &m.forecast {
                    for n in &f.scenario.notes {
                        eprintln!("note ({}): {n}", m.label);
                    }
                }
            }
            Ok(())
        }
        Command::Simulate(s) => simulate(&ctx, s),
        Command::Report => {
            let cfg = load_config(&cli.config, ctx.seed)?;
            let r = pipeline::run_pipeline(&cfg)?;
            let out = ctx.out.clone().or_else(|| cfg.output_dir.as_ref().map(|p| cfg.resolve(p)));
            match out {
                Some(dir) => {
                    let formats = match ctx.format {
                        Some(f) => vec![f],
                        None => vec![Format::Text, Format::Json, Format::CsvBundle],
                    };
                    for f in formats {
                        for p in report::render_report(&r, f, &dir)? {
                            eprintln!("wrote {}", p.display());
                        }
                    }
                    write_timestamp(&dir)?;
                    Ok(())
                }
                None => {
                    match ctx.format {
                        Some(Format::Json) => print!("{}", report::to_json(&r)),
                        Some(Format::CsvBundle) => return Err(invalid("csv-bundle output needs --out")),
                        _ => print!("{}", report::render_text(&r)),
                    }
                    Ok(())
                }
            }
        }
    }
}

/// The run time lives in its own file so every report file stays
/// byte-reproducible.
fn write_timestamp(dir: &Path) -> Outcome {
    let secs = std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let p = dir.join("provenance_timestamp.txt");
    std::fs::write(&p, format!("run_unix_seconds={secs}\n")).map_err(|e| invalid(format!("{}: {e}", p.display())))
}

fn slug(label: &str) -> String {
    let mut s: String = label.chars().map(|c| if c.is_ascii_alphanumeric() { c.to_ascii_lowercase() } else { '_' }).collect();
    while s.contains("__") {
        s = s.replace("__", "_");
    }
    s.trim_matches('_').to_string()
}

fn simulate(ctx: &Ctx, s: SimCommand) -> Outcome {
    let seed = ctx.seed.unwrap_or(0);
    match s {
        SimCommand::Cv { k, case, t, reps } => {
            let cv = sim::simulate_pss_cv(k, case, t, reps, seed)?;
            let mut text = format!(
                "# ardlkit simulate cv: k={k} case={case} T={t} reps={reps} seed={seed} rng={}\n# quantile rule: type 7\nlevel,i0,i1\n",
                rng::ALGORITHM
            );
            for (l, (a, b)) in cv.iter().rev() {
                text.push_str(&format!("{l},{a:.4},{b:.4}\n"));
            }
            ctx.emit(&format!("cv_k{k}_case{case}_t{t}.csv"), &text)
        }
        SimCommand::Power { test, dgp, k, t, reps, adjustment, theta, noise_sd, case, max_lag } => {
            let kind = match dgp {
                DgpArg::Walks => DgpKind::IndependentRandomWalks { k },
                DgpArg::Cointegrated => DgpKind::CointegratedArdl { theta: vec![theta; k.max(1)], adjustment, noise_sd },
            };
            let dgp_cfg = DgpConfig::new(kind, t, seed);
            let study = match test {
                TestArg::Bounds => StudyTest::Bounds { case, order: OrderChoice::Select { max_lag, criterion: Criterion::Aic } },
                TestArg::Adf => StudyTest::Adf(AdfConfig::default()),
            };
            let table = sim::power_study(&study, &dgp_cfg, reps, seed)?;
            let mut text = format!(
                "# ardlkit simulate power: test={} dgp={} T={t} reps={reps} seed={seed} rng={}\n# failures={}\nlevel,rejections,replications,frequency\n",
                table.test,
                serde_json::to_string(&dgp_cfg.kind).expect("serializable"),
                table.algorithm,
                table.failures,
            );
            let by_level: BTreeMap<_, _> = table.counts.iter().collect();
            for (l, c) in by_level.iter().rev() {
                text.push_str(&format!("{l},{c},{},{:.4}\n", table.replications, table.frequencies[l]));
            }
            ctx.emit(&format!("power_{}.csv", table.test), &text)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
