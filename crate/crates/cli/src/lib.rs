//! Argument handling and dispatch for the `cointkit` binary.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical failure.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use cointkit::ardl::{bounds_verdict, BoundsCase, BoundsTable};
use cointkit::dataio::{dummy_from_events, load_csv, Dataset, EventCalendar, Frequency};
use cointkit::diagnostics::{cusum_with, CusumLevel, CusumResult};
use cointkit::par::Exec;
use cointkit::regression::{ols_fit, Covariance, InfoCriterion, RegressionSpec, SeriesRef, Term};
use cointkit::report::{
    adf_output, bounds_output, corr_output, cusum_output, describe_output, emit_cusum_plot, fit_output, full_report, full_report_on,
    granger_output, sha256_hex, varselect_output, PipelineConfig, Provenance, RunReport, Stage, StageOutput, StageReport, StageStatus,
};
use cointkit::unit_root::{AdfDeterministic, AdfSpec};
use cointkit::var::lag_selection_with;
use cointkit::{Error, ErrorKind};

#[derive(Debug, Parser)]
#[command(name = "cointkit", version, about = "Unit roots, VAR/Granger and ARDL bounds cointegration from CSV data")]
struct Cli {
    /// Write one JSON record per statistic to this file.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Run every loop on the calling thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Descriptive statistics with the Jarque-Bera test.
    Describe(ColumnsArgs),
    /// Pearson correlation matrix.
    Corr(ColumnsArgs),
    /// Augmented Dickey-Fuller test in levels and first differences.
    Adf(AdfArgs),
    /// VAR lag-order selection table.
    Varselect(VarArgs),
    /// Pairwise Granger causality tests.
    Granger(GrangerArgs),
    /// Least squares with a chosen covariance estimator.
    Ols(OlsArgs),
    /// ARDL lag search with long-run multipliers.
    Ardl(ArdlArgs),
    /// Bounds test, from a fitted ARDL or from a given F statistic.
    Bounds(BoundsArgs),
    /// Restricted error-correction model.
    Ecm(ArdlArgs),
    /// Full pipeline driven by a TOML config.
    Report(ReportArgs),
}

#[derive(Debug, Args)]
struct DataArgs {
    /// Input CSV with a date column followed by one column per series.
    data: PathBuf,
    #[arg(long, default_value = "monthly")]
    freq: Frequency,
    /// Event calendar; series named on the command line but absent from the
    /// data are built as 0/1 dummies from it.
    #[arg(long, value_name = "PATH")]
    events: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ColumnsArgs {
    #[command(flatten)]
    data: DataArgs,
    /// Columns to use; all columns when omitted.
    #[arg(long, value_delimiter = ',')]
    cols: Vec<String>,
}

#[derive(Debug, Args)]
struct AdfArgs {
    #[command(flatten)]
    data: DataArgs,
    /// Series to test; repeat or separate with commas.
    #[arg(long, required = true, value_delimiter = ',')]
    col: Vec<String>,
    #[arg(long, default_value = "const")]
    det: AdfDeterministic,
    #[arg(long, default_value_t = 8)]
    max_lag: usize,
    #[arg(long, default_value = "sic")]
    ic: InfoCriterion,
}

#[derive(Debug, Args)]
struct VarArgs {
    #[command(flatten)]
    data: DataArgs,
    #[arg(long, required = true, value_delimiter = ',')]
    cols: Vec<String>,
    #[arg(long, default_value_t = 8)]
    max_lag: usize,
    /// Difference order applied to every column before fitting.
    #[arg(long, default_value_t = 1)]
    diff: usize,
}

#[derive(Debug, Args)]
struct GrangerArgs {
    #[command(flatten)]
    var: VarArgs,
    /// VAR orders to test at; the distinct AIC and SC choices when omitted.
    #[arg(long, value_delimiter = ',')]
    lags: Vec<usize>,
    /// Drop each equation's own lag at this order.
    #[arg(long)]
    exclude_own_lag: Option<usize>,
}

#[derive(Debug, Args)]
struct OlsArgs {
    #[command(flatten)]
    data: DataArgs,
    /// Dependent variable, e.g. `d.BIST`.
    #[arg(long)]
    dep: SeriesRef,
    /// Regressors as `[d.|dK.]NAME[@lag]`.
    #[arg(long, value_delimiter = ',')]
    terms: Vec<Term>,
    #[arg(long)]
    no_intercept: bool,
    #[arg(long)]
    trend: bool,
    #[arg(long, default_value = "classical")]
    cov: Covariance,
    /// Write the CUSUM path (CSV, or SVG for a `.svg` path).
    #[arg(long, value_name = "PATH")]
    plot_cusum: Option<PathBuf>,
    #[arg(long, default_value = "5%")]
    cusum_level: LevelArg,
}

#[derive(Debug, Args)]
struct ArdlArgs {
    #[command(flatten)]
    data: DataArgs,
    #[arg(long)]
    dep: String,
    #[arg(long, required = true, value_delimiter = ',')]
    regressors: Vec<String>,
    /// Regressors entering in levels only, such as event dummies.
    #[arg(long, value_delimiter = ',')]
    fixed: Vec<String>,
    #[arg(long, default_value_t = 4)]
    max_p: usize,
    #[arg(long, default_value_t = 4)]
    max_q: usize,
    #[arg(long, default_value = "I")]
    case: BoundsCase,
    #[arg(long, default_value = "aic")]
    ic: InfoCriterion,
    #[arg(long, default_value = "hac")]
    cov: Covariance,
    /// CSV of bounds with columns case,k,level,lower,upper.
    #[arg(long, value_name = "PATH")]
    bounds_table: Option<PathBuf>,
    #[arg(long, value_name = "PATH")]
    plot_cusum: Option<PathBuf>,
    #[arg(long, default_value = "5%")]
    cusum_level: LevelArg,
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("source").required(true).args(["f", "data"]))]
struct BoundsArgs {
    /// Input CSV; the ARDL options below select the model.
    data: Option<PathBuf>,
    /// Wald F statistic on the level terms.
    #[arg(long, requires = "k")]
    f: Option<f64>,
    /// Number of long-run regressors.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, default_value = "I")]
    case: BoundsCase,
    #[arg(long, value_name = "PATH")]
    bounds_table: Option<PathBuf>,
    #[arg(long, default_value = "monthly")]
    freq: Frequency,
    #[arg(long, value_name = "PATH")]
    events: Option<PathBuf>,
    #[arg(long)]
    dep: Option<String>,
    #[arg(long, value_delimiter = ',')]
    regressors: Vec<String>,
    #[arg(long, value_delimiter = ',')]
    fixed: Vec<String>,
    #[arg(long, default_value_t = 4)]
    max_p: usize,
    #[arg(long, default_value_t = 4)]
    max_q: usize,
    #[arg(long, default_value = "aic")]
    ic: InfoCriterion,
    #[arg(long, default_value = "hac")]
    cov: Covariance,
}

#[derive(Debug, Args)]
struct ReportArgs {
    /// Pipeline config in TOML.
    config: PathBuf,
    /// Overrides the config's bounds table.
    #[arg(long, value_name = "PATH")]
    bounds_table: Option<PathBuf>,
    /// Overrides the config's event calendar.
    #[arg(long, value_name = "PATH")]
    events: Option<PathBuf>,
    #[arg(long, value_name = "PATH")]
    plot_cusum: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy)]
struct LevelArg(CusumLevel);

impl std::str::FromStr for LevelArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim_end_matches('%') {
            "1" | "0.01" => Ok(LevelArg(CusumLevel::One)),
            "5" | "0.05" => Ok(LevelArg(CusumLevel::Five)),
            "10" | "0.1" | "0.10" => Ok(LevelArg(CusumLevel::Ten)),
            _ => Err(format!("unsupported CUSUM level `{s}` (use 1%, 5% or 10%)")),
        }
    }
}

/// A failure with its exit code and one-line message.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

fn code(kind: ErrorKind) -> i32 {
    match kind {
        ErrorKind::Usage => 1,
        ErrorKind::Data => 2,
        ErrorKind::Numerical => 3,
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure { code: code(e.kind()), message: e.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Error::from(e).into()
    }
}

type CliResult<T> = Result<T, Failure>;

/// Parses `args` (including the program name), runs the command and
/// returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let argv: Vec<String> = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind as K;
            if matches!(e.kind(), K::DisplayHelp | K::DisplayVersion | K::DisplayHelpOnMissingArgumentOrSubcommand) {
                let _ = write!(stdout, "{}", e.render());
                return if e.kind() == K::DisplayHelpOnMissingArgumentOrSubcommand { 1 } else { 0 };
            }
            let _ = write!(stderr, "{}", e.render());
            return 1;
        }
    };
    let exec = if cli.sequential { Exec::Sequential } else { Exec::Parallel };
    match execute(&cli, exec, &argv) {
        Ok(report) => {
            let _ = write!(stdout, "{}", report.to_text());
            if let Some(path) = &cli.out {
                if let Err(e) = std::fs::write(path, report.to_jsonl()) {
                    let _ = writeln!(stderr, "error: cannot write {}: {e}", path.display());
                    return 2;
                }
            }
            match report.first_failure() {
                Some((stage, msg, kind)) => {
                    let _ = writeln!(stderr, "error: {stage}: {msg}");
                    code(kind)
                }
                None => 0,
            }
        }
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

fn execute(cli: &Cli, exec: Exec, argv: &[String]) -> CliResult<RunReport> {
    match &cli.command {
        Command::Describe(a) => {
            let (d, digest) = load(&a.data, &a.cols)?;
            let d = if a.cols.is_empty() { d } else { d.select(&a.cols)? };
            single(Stage::Describe, describe_output(&d)?, digest, argv)
        }
        Command::Corr(a) => {
            let (d, digest) = load(&a.data, &a.cols)?;
            let d = if a.cols.is_empty() { d } else { d.select(&a.cols)? };
            single(Stage::Corr, corr_output(&d)?, digest, argv)
        }
        Command::Adf(a) => {
            let (d, digest) = load(&a.data, &a.col)?;
            let series = a.col.iter().map(|c| d.series(c)).collect::<cointkit::Result<Vec<_>>>()?;
            let spec = AdfSpec::new(a.det, a.max_lag, a.ic);
            single(Stage::Adf, adf_output(&series, &spec, exec)?, digest, argv)
        }
        Command::Varselect(a) => {
            let (d, digest) = load(&a.data, &a.cols)?;
            let d = d.select(&a.cols)?.diff(a.diff)?;
            let t = lag_selection_with(&d, a.max_lag, exec)?;
            single(Stage::Varselect, varselect_output(&t), digest, argv)
        }
        Command::Granger(a) => {
            let v = &a.var;
            let (d, digest) = load(&v.data, &v.cols)?;
            let d = d.select(&v.cols)?.diff(v.diff)?;
            let mut lags = a.lags.clone();
            if lags.is_empty() {
                let t = lag_selection_with(&d, v.max_lag, exec)?;
                lags = [t.stars.sc, t.stars.aic].into_iter().filter(|&l| l > 0).collect();
                lags.sort_unstable();
                lags.dedup();
                if lags.is_empty() {
                    lags.push(1);
                }
            }
            if lags.contains(&0) {
                return Err(Error::InvalidSpec("Granger lags must be positive".into()).into());
            }
            single(Stage::Granger, granger_output(&d, &lags, a.exclude_own_lag)?, digest, argv)
        }
        Command::Ols(a) => {
            let names: Vec<String> = std::iter::once(a.dep.name.clone()).chain(a.terms.iter().map(|t| t.series.name.clone())).collect();
            let (d, digest) = load(&a.data, &names)?;
            let spec = RegressionSpec::new(a.dep.clone(), a.terms.clone())
                .with_intercept(!a.no_intercept)
                .with_trend(a.trend)
                .with_covariance(a.cov);
            let fit = ols_fit(&spec, &d)?;
            let mut report = single(Stage::Ols, fit_output(Stage::Ols, &a.dep.to_string(), &fit), digest, argv)?;
            if let Some(path) = &a.plot_cusum {
                let c = cusum_with(&spec, &d, a.cusum_level.0)?;
                report.stages.push(done(Stage::Cusum, cusum_output(&c)));
                plot(&c, path)?;
                report.cusum = Some(c);
            }
            Ok(report)
        }
        Command::Ardl(a) => ardl_command(a, vec![Stage::Ardl, Stage::Longrun], exec),
        Command::Ecm(a) => ardl_command(a, vec![Stage::Ardl, Stage::Ecm], exec),
        Command::Bounds(a) => bounds_command(a, exec, argv),
        Command::Report(a) => {
            let text = std::fs::read_to_string(&a.config)?;
            let mut config: PipelineConfig =
                toml::from_str(&text).map_err(|e| Failure { code: 1, message: format!("{}: {}", a.config.display(), one_line(&e.to_string())) })?;
            let cwd = std::env::current_dir()?;
            if let Some(p) = &a.bounds_table {
                config.ardl.bounds_table = Some(cwd.join(p));
            }
            if let Some(p) = &a.events {
                config.events = Some(cwd.join(p));
            }
            let base = a.config.parent().map_or_else(|| PathBuf::from("."), Path::to_path_buf);
            let report = full_report(&config, &base, exec)?;
            if let (Some(path), Some(c)) = (&a.plot_cusum, &report.cusum) {
                plot(c, path)?;
            }
            Ok(report)
        }
    }
}

fn one_line(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Loads the data and adds event dummies for any of `needed` it lacks.
fn load(a: &DataArgs, needed: &[String]) -> CliResult<(Dataset, String)> {
    let bytes = std::fs::read(&a.data).map_err(|e| Failure { code: 2, message: format!("{}: {e}", a.data.display()) })?;
    let mut d = load_csv(&a.data, a.freq)?;
    if let Some(path) = &a.events {
        let cal = EventCalendar::load(path, a.freq)?;
        for name in needed {
            if d.position(name).is_err() {
                let (dummy, _) = dummy_from_events(&cal, d.index(), name)?;
                d.push(dummy)?;
            }
        }
    }
    Ok((d, sha256_hex(&bytes)))
}

fn done(stage: Stage, out: StageOutput) -> StageReport {
    StageReport { stage, status: StageStatus::Done, text: out.text, records: out.records }
}

fn single(stage: Stage, out: StageOutput, digest: String, argv: &[String]) -> CliResult<RunReport> {
    Ok(RunReport {
        stages: vec![done(stage, out)],
        provenance: Provenance { input_sha256: digest, version: env!("CARGO_PKG_VERSION").to_string(), config: argv.join(" ") },
        cusum: None,
    })
}

fn plot(c: &CusumResult, path: &Path) -> CliResult<()> {
    emit_cusum_plot(c, path).map_err(|e| Failure { code: 2, message: format!("{}: {e}", path.display()) })
}

fn ardl_config(a: &ArdlArgs) -> PipelineConfig {
    let mut c = PipelineConfig::new(a.dep.clone(), a.regressors.clone());
    c.data = Some(a.data.data.clone());
    c.frequency = a.data.freq;
    c.fixed = a.fixed.clone();
    c.events = a.data.events.clone();
    c.ardl.max_p = a.max_p;
    c.ardl.max_q = a.max_q;
    c.ardl.case = a.case;
    c.ardl.criterion = a.ic;
    c.ardl.covariance = a.cov;
    c.ardl.bounds_table = a.bounds_table.clone();
    c.cusum.level = a.cusum_level.0;
    c
}

fn ardl_command(a: &ArdlArgs, mut stages: Vec<Stage>, exec: Exec) -> CliResult<RunReport> {
    let mut config = ardl_config(a);
    if a.plot_cusum.is_some() {
        stages.push(Stage::Cusum);
    }
    config.stages = Some(stages);
    // The ARDL stages live on the monthly path; the data frequency is only
    // used for parsing.
    let report = run_ardl_stages(&config, exec)?;
    if let (Some(path), Some(c)) = (&a.plot_cusum, &report.cusum) {
        plot(c, path)?;
    }
    Ok(report)
}

fn run_ardl_stages(config: &PipelineConfig, exec: Exec) -> CliResult<RunReport> {
    let path = config.data.as_ref().expect("data path set by caller");
    let bytes = std::fs::read(path).map_err(|e| Failure { code: 2, message: format!("{}: {e}", path.display()) })?;
    let mut data = load_csv(path, config.frequency)?;
    if let Some(events) = &config.events {
        let cal = EventCalendar::load(events, config.frequency)?;
        for f in &config.fixed {
            if data.position(f).is_err() {
                data.push(dummy_from_events(&cal, data.index(), f)?.0)?;
            }
        }
    }
    let mut monthly = config.clone();
    monthly.frequency = Frequency::Monthly;
    let mut report = full_report_on(&data, &monthly, exec)?;
    report.provenance.input_sha256 = sha256_hex(&bytes);
    Ok(report)
}

fn bounds_command(a: &BoundsArgs, exec: Exec, argv: &[String]) -> CliResult<RunReport> {
    let table = a.bounds_table.as_ref().map(BoundsTable::load).transpose()?;
    if let Some(f) = a.f {
        let k = a.k.expect("clap enforces --k with --f");
        let v = bounds_verdict(f, k, a.case, table.as_ref())?;
        return single(Stage::Bounds, bounds_output(&v), String::new(), argv);
    }
    let (Some(data), Some(dep)) = (&a.data, &a.dep) else {
        return Err(Failure { code: 1, message: "bounds on data needs --dep and --regressors".into() });
    };
    let args = ArdlArgs {
        data: DataArgs { data: data.clone(), freq: a.freq, events: a.events.clone() },
        dep: dep.clone(),
        regressors: a.regressors.clone(),
        fixed: a.fixed.clone(),
        max_p: a.max_p,
        max_q: a.max_q,
        case: a.case,
        ic: a.ic,
        cov: a.cov,
        bounds_table: a.bounds_table.clone(),
        plot_cusum: None,
        cusum_level: LevelArg(CusumLevel::Five),
    };
    ardl_command(&args, vec![Stage::Ardl, Stage::Bounds], exec)
}
