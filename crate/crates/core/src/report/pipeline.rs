use std::collections::BTreeSet;
use std::path::Path;

use sha2::{Digest, Sha256};

use super::{coef_cell, coefficient_records, fmt4, stars, PipelineConfig, Provenance, Record, RunReport, Stage, StageReport, StageStatus, TextTable};
use crate::ardl::{percent as bounds_percent, BoundsVerdict, ardl_search_with, bounds_test, ect_from_levels, ecm_fit, long_run, ArdlFit, ArdlSpec, BoundsTable, EcmFit};
use crate::dataio::{dummy_from_events, load_csv, parse_csv, write_csv_to, Dataset, EventCalendar, Frequency, TimeSeries};
use crate::diagnostics::{cusum_with, CusumResult, diagnose, DiagnosticsReport, DiagnosticsRequest, LmTest};
use crate::par::Exec;
use crate::regression::{ols_fit, OlsFit, RegressionSpec, SeriesRef};
use crate::stats::{correlation_matrix, describe};
use crate::unit_root::{adf_test_with, AdfResult, AdfSpec};
use crate::var::{granger_test_masked, lag_selection_with, var_fit, LagSelectionTable, TermMask};
use crate::{Error, Result};

/// Loads the configured data (and event calendar) and runs the pipeline.
/// Relative paths resolve against `base`.
pub fn full_report(config: &PipelineConfig, base: &Path, exec: Exec) -> Result<RunReport> {
    config.validate()?;
    let path = config.data.as_ref().ok_or_else(|| Error::InvalidSpec("config has no data file".into()))?;
    let bytes = std::fs::read(base.join(path))?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|_| Error::Parse { row: 0, col: 0, msg: "input is not valid UTF-8".into() })?;
    let mut data = parse_csv(&text, config.frequency)?;
    if let Some(events) = &config.events {
        let cal = EventCalendar::load(base.join(events), config.frequency)?;
        for f in &config.fixed {
            if data.position(f).is_err() {
                let (dummy, _) = dummy_from_events(&cal, data.index(), f)?;
                data.push(dummy)?;
            }
        }
    }
    let mut report = run(&data, config, base, exec);
    report.provenance.input_sha256 = hex(&Sha256::digest(&bytes));
    Ok(report)
}

/// Runs the pipeline on an in-memory dataset. The input digest is taken
/// over the dataset's CSV rendering.
pub fn full_report_on(data: &Dataset, config: &PipelineConfig, exec: Exec) -> Result<RunReport> {
    config.validate()?;
    Ok(run(data, config, Path::new("."), exec))
}

/// Loads a dataset the way [`full_report`] does, for callers that only
/// need the data.
pub fn load_for(config: &PipelineConfig, base: &Path) -> Result<Dataset> {
    let path = config.data.as_ref().ok_or_else(|| Error::InvalidSpec("config has no data file".into()))?;
    load_csv(base.join(path), config.frequency)
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// Lowercase hex SHA-256 of `bytes`, as used in run provenance.
pub fn sha256_hex(bytes: &[u8]) -> String {
    hex(&Sha256::digest(bytes))
}

fn dataset_digest(data: &Dataset) -> String {
    let mut buf = Vec::new();
    write_csv_to(data, &mut buf).expect("writing to memory cannot fail");
    hex(&Sha256::digest(&buf))
}

/// Text block and records produced by one stage.
#[derive(Debug, Clone, Default)]
pub struct StageOutput {
    pub text: String,
    pub records: Vec<Record>,
}

/// Results later stages build on.
#[derive(Default)]
struct State {
    lag_table: Option<LagSelectionTable>,
    ols: Option<(OlsFit, RegressionSpec)>,
    ardl: Option<ArdlFit>,
    ecm: Option<EcmFit>,
    cusum: Option<CusumResult>,
}

fn run(data: &Dataset, config: &PipelineConfig, base: &Path, exec: Exec) -> RunReport {
    let path: &[Stage] = match config.frequency {
        Frequency::Daily => &Stage::DAILY,
        Frequency::Monthly => &Stage::MONTHLY,
    };
    let wanted: BTreeSet<Stage> = match &config.stages {
        Some(list) => list.iter().copied().collect(),
        None => path.iter().copied().collect(),
    };
    let mut state = State::default();
    let mut stages = Vec::new();
    let mut order: Vec<Stage> = path.to_vec();
    // Stages requested but not on this frequency's path are reported as skipped.
    order.extend(wanted.iter().filter(|s| !path.contains(s)));
    for stage in order.into_iter().filter(|s| wanted.contains(s)) {
        let result = if path.contains(&stage) {
            run_stage(stage, data, config, base, exec, &mut state)
        } else {
            Err(Halt::Skip(format!("not part of the {} pipeline", freq_name(config.frequency))))
        };
        let empty = StageOutput::default;
        let (status, out) = match result {
            Ok(out) => (StageStatus::Done, out),
            Err(Halt::Skip(reason)) => (StageStatus::Skipped { reason }, empty()),
            Err(Halt::Fail(e)) => (StageStatus::Failed { error: e.to_string(), kind: e.kind() }, empty()),
        };
        stages.push(StageReport { stage, status, text: out.text, records: out.records });
    }
    RunReport {
        stages,
        provenance: Provenance {
            input_sha256: dataset_digest(data),
            version: env!("CARGO_PKG_VERSION").to_string(),
            config: serde_json::to_string(config).expect("config serializes"),
        },
        cusum: state.cusum,
    }
}

fn freq_name(f: Frequency) -> &'static str {
    match f {
        Frequency::Daily => "daily",
        Frequency::Monthly => "monthly",
    }
}

/// Why a stage produced no output.
enum Halt {
    Skip(String),
    Fail(Error),
}

impl From<Error> for Halt {
    fn from(e: Error) -> Self {
        Halt::Fail(e)
    }
}

fn requires<T>(v: &Option<T>, what: Stage) -> std::result::Result<&T, Halt> {
    v.as_ref().ok_or_else(|| Halt::Skip(format!("requires a successful {what} stage")))
}

fn run_stage(stage: Stage, data: &Dataset, c: &PipelineConfig, base: &Path, exec: Exec, st: &mut State) -> std::result::Result<StageOutput, Halt> {
    let vars = c.variables();
    Ok(match stage {
        Stage::Describe => describe_output(&data.select(&vars)?)?,
        Stage::Corr => corr_output(&data.select(&vars)?)?,
        Stage::Adf => {
            let series = var_names(c).iter().map(|n| data.series(n)).collect::<Result<Vec<_>>>()?;
            adf_output(&series, &AdfSpec::new(c.adf.deterministic, c.adf.max_lag, c.adf.criterion), exec)?
        }
        Stage::Varselect => {
            let d = data.select(&var_names(c))?.diff(1)?;
            let t = lag_selection_with(&d, c.var.max_lag, exec)?;
            let out = varselect_output(&t);
            st.lag_table = Some(t);
            out
        }
        Stage::Granger => granger_stage(data, c, st)?,
        Stage::Var => var_stage(data, c, st)?,
        Stage::Ols => {
            let spec = ols_spec(c);
            let fit = ols_fit(&spec, data)?;
            let out = fit_output(stage, &spec.dependent.to_string(), &fit);
            st.ols = Some((fit, spec));
            out
        }
        Stage::Ardl => {
            let spec = ardl_spec(c);
            let fit = ardl_search_with(&spec, data, exec)?;
            let out = ardl_output(&fit);
            st.ardl = Some(fit);
            out
        }
        Stage::Bounds => {
            let fit = requires(&st.ardl, Stage::Ardl)?;
            let table = c.ardl.bounds_table.as_ref().map(|p| BoundsTable::load(base.join(p))).transpose()?;
            bounds_output(&bounds_test(fit, table.as_ref())?)
        }
        Stage::Longrun => {
            let fit = requires(&st.ardl, Stage::Ardl)?;
            let lr = long_run(fit)?;
            let mut t = TextTable::new(["", &format!("Long-run {}", lr.dependent)]);
            let mut records = Vec::new();
            for m in &lr.multipliers {
                let (se, p) = (m.std_error.unwrap_or(f64::NAN), m.p_value.unwrap_or(f64::NAN));
                t.row([m.name.clone(), coef_cell(m.value, se, p)]);
                records.push(Record::new(stage, m.name.clone(), m.value).with_se(se).with_p(p));
            }
            StageOutput { text: t.render(), records }
        }
        Stage::Ecm => {
            let fit = requires(&st.ardl, Stage::Ardl)?;
            let spec = fit.selected_spec();
            let levels = ols_fit(&spec.levels_regression(), data)?;
            let ecm = ecm_fit(&spec, data, &ect_from_levels(&levels))?;
            let mut t = TextTable::new(["", &format!("d.{}", c.dependent)]);
            fit_rows(&mut t, &ecm.fit);
            let mut records = coefficient_records(stage, "", &ecm.fit);
            records.push(Record::new(stage, "lambda", ecm.lambda).with_se(ecm.lambda_se).with_p(ecm.lambda_p).with_note(ecm.interpretation.clone()));
            records.push(Record::new(stage, "valid", f64::from(u8::from(ecm.valid))));
            let text = format!("{}adjustment: {} ({})\n", t.render(), ecm.interpretation, if ecm.valid { "valid" } else { "not valid" });
            st.ecm = Some(ecm);
            StageOutput { text, records }
        }
        Stage::Diagnostics => diagnostics_stage(data, c, st)?,
        Stage::Cusum => {
            let fit = requires(&st.ardl, Stage::Ardl)?;
            let r = cusum_with(&fit.regression, data, c.cusum.level)?;
            let out = cusum_output(&r);
            st.cusum = Some(r);
            out
        }
    })
}

/// Bounds-test verdict per significance level.
pub fn bounds_output(v: &BoundsVerdict) -> StageOutput {
    let stage = Stage::Bounds;
    let mut t = TextTable::new(["", "Lower Bound", "Upper Bound", "Outcome"]);
    let mut records = vec![
        Record::new(stage, "f_statistic", v.f_statistic).with_note(v.summary()),
        Record::new(stage, "k", v.k as f64).with_note(format!("case {}", v.case)),
    ];
    for l in &v.levels {
        let pct = bounds_percent(l.level);
        t.row([format!("{pct} significance"), fmt4(l.lower), fmt4(l.upper), l.outcome.to_string()]);
        records.push(Record::new(stage, format!("{pct}/lower"), l.lower));
        records.push(Record::new(stage, format!("{pct}/upper"), l.upper).with_note(l.outcome.to_string()));
    }
    let head = format!("Wald F (level terms = 0): {}  k = {}  case {}\n{}\n", fmt4(v.f_statistic), v.k, v.case, v.summary());
    StageOutput { text: head + &t.render(), records }
}

/// Summary of a CUSUM path; the path itself goes to the plot file.
pub fn cusum_output(r: &CusumResult) -> StageOutput {
    let stage = Stage::Cusum;
    let peak = r.w.iter().zip(&r.upper).map(|(w, u)| w.abs() / u).fold(0.0, f64::max);
    let crossing = r.first_crossing.map_or("none".to_string(), |p| p.to_string());
    let text = format!(
        "recursive residuals: {}\nsigma: {}\nmax |W|/bound: {}\nfirst crossing: {crossing}\nstable at {}: {}\n",
        r.w.len(),
        fmt4(r.sigma),
        fmt4(peak),
        bounds_percent(level_value(r.level)),
        if r.stable { "yes" } else { "no" }
    );
    let records = vec![
        Record::new(stage, "recursive_residuals", r.w.len() as f64),
        Record::new(stage, "sigma", r.sigma),
        Record::new(stage, "max_ratio", peak),
        Record::new(stage, "stable", f64::from(u8::from(r.stable))).with_note(crossing),
    ];
    StageOutput { text, records }
}

fn level_value(l: crate::diagnostics::CusumLevel) -> f64 {
    match l {
        crate::diagnostics::CusumLevel::One => 0.01,
        crate::diagnostics::CusumLevel::Five => 0.05,
        crate::diagnostics::CusumLevel::Ten => 0.10,
    }
}

fn var_names(c: &PipelineConfig) -> Vec<String> {
    std::iter::once(c.dependent.clone()).chain(c.regressors.iter().cloned()).collect()
}

/// Coefficient table of a single-equation fit.
pub fn fit_output(stage: Stage, dependent: &str, fit: &OlsFit) -> StageOutput {
    let mut t = TextTable::new(["", dependent]);
    fit_rows(&mut t, fit);
    StageOutput { text: t.render(), records: coefficient_records(stage, "", fit) }
}

fn fit_rows(t: &mut TextTable, fit: &OlsFit) {
    for (j, n) in fit.names.iter().enumerate() {
        t.row([n.clone(), coef_cell(fit.coefficients[j], fit.std_errors[j], fit.p_values[j])]);
    }
    t.row(["R-squared".to_string(), fmt4(fit.r_squared)]);
    t.row(["Adj. R-squared".to_string(), fmt4(fit.adj_r_squared)]);
    t.row(["Durbin-Watson".to_string(), fit.durbin_watson.map_or("NA".to_string(), fmt4)]);
    t.row(["Observations".to_string(), fit.n_effective.to_string()]);
}

pub fn describe_output(d: &Dataset) -> Result<StageOutput> {
    let stats: Vec<_> = d.iter().map(|s| describe(&s)).collect::<Result<_>>()?;
    let mut t = TextTable::new(std::iter::once(String::new()).chain(stats.iter().map(|s| s.name.clone())));
    let rows: [(&str, &str, fn(&crate::stats::DescriptiveSummary) -> f64); 9] = [
        ("Mean", "mean", |s| s.mean),
        ("Median", "median", |s| s.median),
        ("Maximum", "maximum", |s| s.maximum),
        ("Minimum", "minimum", |s| s.minimum),
        ("Std. Dev.", "std_dev", |s| s.std_dev),
        ("Skewness", "skewness", |s| s.skewness),
        ("Kurtosis", "kurtosis", |s| s.kurtosis),
        ("Jarque-Bera", "jarque_bera", |s| s.jarque_bera),
        ("Probability", "jb_pvalue", |s| s.jb_pvalue),
    ];
    let mut records = Vec::new();
    for (label, key, f) in rows {
        t.row(std::iter::once(label.to_string()).chain(stats.iter().map(|s| fmt4(f(s)))));
        records.extend(stats.iter().map(|s| Record::new(Stage::Describe, format!("{}/{key}", s.name), f(s))));
    }
    t.row(std::iter::once("Observations".to_string()).chain(stats.iter().map(|s| s.n.to_string())));
    records.extend(stats.iter().map(|s| Record::new(Stage::Describe, format!("{}/n", s.name), s.n as f64)));
    Ok(StageOutput { text: t.render(), records })
}

pub fn corr_output(d: &Dataset) -> Result<StageOutput> {
    let c = correlation_matrix(d)?;
    let mut t = TextTable::new(std::iter::once(String::new()).chain(c.names.iter().cloned()));
    let mut records = Vec::new();
    for (i, a) in c.names.iter().enumerate() {
        t.row(std::iter::once(a.clone()).chain((0..c.names.len()).map(|j| if j <= i { fmt4(c.get(i, j)) } else { String::new() })));
        for (j, b) in c.names.iter().enumerate().take(i) {
            records.push(Record::new(Stage::Corr, format!("{b}/{a}"), c.get(i, j)));
        }
    }
    Ok(StageOutput { text: t.render(), records })
}

/// ADF rows in levels and first differences, with the implied integration
/// order at 5%.
pub fn adf_output(series: &[TimeSeries], spec: &AdfSpec, exec: Exec) -> Result<StageOutput> {
    let mut t = TextTable::new(["", "Level t", "Prob.", "Lag", "DW", "Diff t", "Prob.", "Lag", "DW", "Order"]);
    let mut records = Vec::new();
    for s in series {
        let name = s.name().to_string();
        let level = adf_test_with(s, spec, exec)?;
        let diff = adf_test_with(&crate::dataio::diff(s, 1)?, spec, exec)?;
        let order = if level.rejects_at_5() {
            "I(0)"
        } else if diff.rejects_at_5() {
            "I(1)"
        } else {
            "NA"
        };
        let cells = |r: &AdfResult| {
            [format!("{}{}", fmt4(r.statistic), stars(r.p_value)), fmt4(r.p_value), r.chosen_lag.to_string(), r.durbin_watson.map_or("NA".into(), fmt4)]
        };
        t.row(std::iter::once(name.clone()).chain(cells(&level)).chain(cells(&diff)).chain([order.to_string()]));
        for (tag, r) in [("level", &level), ("diff", &diff)] {
            records.push(Record::new(Stage::Adf, format!("{name}/{tag}/tau"), r.statistic).with_p(r.p_value));
            records.push(Record::new(Stage::Adf, format!("{name}/{tag}/lag"), r.chosen_lag as f64));
            if let Some(dw) = r.durbin_watson {
                records.push(Record::new(Stage::Adf, format!("{name}/{tag}/dw"), dw));
            }
        }
        records.push(Record::note(Stage::Adf, format!("{name}/order"), order));
    }
    let head = format!("deterministic: {}  max lag: {}  criterion: {}\n", spec.deterministic, spec.max_lag, spec.criterion);
    Ok(StageOutput { text: head + &t.render(), records })
}

pub fn varselect_output(t: &LagSelectionTable) -> StageOutput {
    let mut table = TextTable::new(["Lag", "LogL", "LR", "FPE", "AIC", "SC", "HQ"]);
    let mut records = Vec::new();
    let star = |on: bool| if on { "*" } else { "" };
    for r in &t.rows {
        let lr = r.lr.map_or("NA".to_string(), |v| format!("{}{}", fmt4(v), star(t.stars.lr == r.lag && r.lag > 0)));
        table.row([
            r.lag.to_string(),
            fmt4(r.log_likelihood),
            lr,
            format!("{:.6e}{}", r.fpe, star(t.stars.fpe == r.lag)),
            format!("{}{}", fmt4(r.aic), star(t.stars.aic == r.lag)),
            format!("{}{}", fmt4(r.sc), star(t.stars.sc == r.lag)),
            format!("{}{}", fmt4(r.hq), star(t.stars.hq == r.lag)),
        ]);
        let p = format!("lag{}", r.lag);
        records.push(Record::new(Stage::Varselect, format!("{p}/logl"), r.log_likelihood));
        if let Some(lr) = r.lr {
            records.push(Record::new(Stage::Varselect, format!("{p}/lr"), lr).with_p(r.lr_p.unwrap_or(f64::NAN)));
        }
        for (k, v) in [("fpe", r.fpe), ("aic", r.aic), ("sc", r.sc), ("hq", r.hq)] {
            records.push(Record::new(Stage::Varselect, format!("{p}/{k}"), v));
        }
    }
    for (k, v) in [("lr", t.stars.lr), ("fpe", t.stars.fpe), ("aic", t.stars.aic), ("sc", t.stars.sc), ("hq", t.stars.hq)] {
        records.push(Record::new(Stage::Varselect, format!("selected/{k}"), v as f64));
    }
    let text = format!("observations: {}\n{}* selected lag per criterion\n", t.n_effective, table.render());
    StageOutput { text, records }
}

fn var_lags(c: &PipelineConfig, st: &State) -> Vec<usize> {
    if let Some(l) = &c.var.lags {
        return l.clone();
    }
    let mut lags: Vec<usize> = st.lag_table.as_ref().map_or(vec![], |t| vec![t.stars.sc, t.stars.aic]);
    lags.retain(|&l| l > 0);
    lags.sort_unstable();
    lags.dedup();
    if lags.is_empty() {
        lags.push(1);
    }
    lags
}

fn var_mask(exclude_own_lag: Option<usize>, names: &[String], p: usize) -> Option<TermMask> {
    exclude_own_lag.filter(|&l| l <= p && p > 1).map(|l| TermMask::new().exclude_own_lag(names, l))
}

fn granger_stage(data: &Dataset, c: &PipelineConfig, st: &State) -> Result<StageOutput> {
    let d = data.select(&var_names(c))?.diff(1)?;
    granger_output(&d, &var_lags(c, st), c.var.exclude_own_lag)
}

/// Pairwise Granger tests between all columns of `d` for each VAR order in
/// `lags`. Columns are labelled as first differences.
pub fn granger_output(d: &Dataset, lags: &[usize], exclude_own_lag: Option<usize>) -> Result<StageOutput> {
    let names = d.names().to_vec();
    let mut t = TextTable::new(["Model", "Null hypothesis", "F-Statistic", "Prob.", "df", "Obs"]);
    let mut records = Vec::new();
    for &p in lags {
        let mask = var_mask(exclude_own_lag, &names, p);
        for effect in &names {
            for cause in names.iter().filter(|n| *n != effect) {
                let g = granger_test_masked(&d, cause, effect, p, mask.as_ref())?;
                t.row([
                    format!("VAR({p})"),
                    format!("d.{cause} does not Granger cause d.{effect}"),
                    format!("{}{}", fmt4(g.f_statistic), stars(g.p_value)),
                    fmt4(g.p_value),
                    format!("({},{})", g.df1, g.df2),
                    g.n_effective.to_string(),
                ]);
                records.push(
                    Record::new(Stage::Granger, format!("var{p}/{cause}->{effect}"), g.f_statistic)
                        .with_p(g.p_value)
                        .with_note(format!("df1={} df2={} n={}", g.df1, g.df2, g.n_effective)),
                );
            }
        }
    }
    Ok(StageOutput { text: t.render(), records })
}

fn var_stage(data: &Dataset, c: &PipelineConfig, st: &State) -> Result<StageOutput> {
    let names = var_names(c);
    let d = data.select(&names)?.diff(1)?;
    let mut text = String::new();
    let mut records = Vec::new();
    for p in var_lags(c, st) {
        let mask = var_mask(c.var.exclude_own_lag, &names, p);
        let v = var_fit(&d, p, mask.as_ref())?;
        let mut terms: Vec<String> = Vec::new();
        for eq in &v.equations {
            for n in &eq.names {
                if !terms.contains(n) {
                    terms.push(n.clone());
                }
            }
        }
        let mut t = TextTable::new(std::iter::once(format!("VAR({p})")).chain(names.iter().map(|n| format!("d.{n}"))));
        for term in &terms {
            t.row(std::iter::once(term.clone()).chain(v.equations.iter().map(|eq| {
                eq.position(term).map_or("-".to_string(), |j| coef_cell(eq.coefficients[j], eq.std_errors[j], eq.p_values[j]))
            })));
        }
        t.row(std::iter::once("R-squared".to_string()).chain(v.equations.iter().map(|e| fmt4(e.r_squared))));
        t.row(std::iter::once("Observations".to_string()).chain(v.equations.iter().map(|e| e.n_effective.to_string())));
        text.push_str(&t.render());
        for (eq, name) in v.equations.iter().zip(&names) {
            records.extend(coefficient_records(Stage::Var, &format!("var{p}/{name}/"), eq));
        }
    }
    Ok(StageOutput { text, records })
}

fn ols_spec(c: &PipelineConfig) -> RegressionSpec {
    let terms = c
        .regressors
        .iter()
        .map(|r| SeriesRef::diffed(r.clone()).at(0))
        .chain(c.fixed.iter().map(|f| SeriesRef::level(f.clone()).at(0)))
        .collect();
    RegressionSpec::new(SeriesRef::diffed(c.dependent.clone()), terms)
        .with_intercept(c.ols.intercept)
        .with_covariance(c.ols.covariance)
}

fn ardl_spec(c: &PipelineConfig) -> ArdlSpec {
    let mut s = ArdlSpec::new(c.dependent.clone(), c.ardl.max_p)
        .with_case(c.ardl.case)
        .with_criterion(c.ardl.criterion)
        .with_covariance(c.ardl.covariance);
    for r in &c.regressors {
        s = s.regressor(r.clone(), c.ardl.max_q);
    }
    for f in &c.fixed {
        s = s.fixed(f.clone());
    }
    s
}

pub fn ardl_output(fit: &ArdlFit) -> StageOutput {
    let mut t = TextTable::new(["", &format!("d.{}", fit.spec.dependent)]);
    fit_rows(&mut t, &fit.fit);
    let mut records = coefficient_records(Stage::Ardl, "", &fit.fit);
    records.push(Record::new(Stage::Ardl, "orders/p", fit.orders.p as f64));
    for (r, q) in fit.spec.regressors.iter().zip(&fit.orders.q) {
        records.push(Record::new(Stage::Ardl, format!("orders/{}", r.name), *q as f64));
    }
    records.push(Record::new(Stage::Ardl, "criterion", fit.criterion_value).with_note(fit.spec.criterion.to_string()));
    records.push(Record::new(Stage::Ardl, "candidates", fit.criterion_trace.len() as f64));
    let text = format!(
        "selected {} by {} over {} candidates (criterion {})\n{}",
        fit.orders,
        fit.spec.criterion,
        fit.criterion_trace.len(),
        fmt4(fit.criterion_value),
        t.render()
    );
    StageOutput { text, records }
}

fn diagnostics_stage(data: &Dataset, c: &PipelineConfig, st: &State) -> std::result::Result<StageOutput, Halt> {
    let req = DiagnosticsRequest { bg_lags: Some(c.diagnostics.bg_lags).filter(|&l| l > 0), bpg: c.diagnostics.bpg, white: c.diagnostics.white };
    let mut models: Vec<(&str, DiagnosticsReport)> = Vec::new();
    if let Some((fit, spec)) = &st.ols {
        models.push(("ols", diagnose(fit, spec, data, req)?));
    }
    if let Some(f) = &st.ardl {
        models.push(("ardl", diagnose(&f.fit, &f.regression, data, req)?));
    }
    if let Some(e) = &st.ecm {
        models.push(("ecm", diagnose(&e.fit, &e.regression, &e.data, req)?));
    }
    if models.is_empty() {
        return Err(Halt::Skip("requires a successful ols, ardl or ecm stage".into()));
    }
    let mut t = TextTable::new(["Model", "Durbin-Watson", "BG LM", "Prob.", "BPG LM", "Prob.", "White LM", "Prob."]);
    let mut records = Vec::new();
    let cells = |l: &Option<LmTest>| match l {
        Some(l) => [fmt4(l.statistic), fmt4(l.p)],
        None => ["NA".to_string(), "NA".to_string()],
    };
    for (model, r) in &models {
        t.row(
            [model.to_string(), r.durbin_watson.map_or("NA".into(), fmt4)]
                .into_iter()
                .chain(cells(&r.bg_lm))
                .chain(cells(&r.bpg))
                .chain(cells(&r.white)),
        );
        if let Some(dw) = r.durbin_watson {
            records.push(Record::new(Stage::Diagnostics, format!("{model}/durbin_watson"), dw));
        }
        for (k, l) in [("bg", &r.bg_lm), ("bpg", &r.bpg), ("white", &r.white)] {
            if let Some(l) = l {
                records.push(Record::new(Stage::Diagnostics, format!("{model}/{k}"), l.statistic).with_p(l.p).with_note(format!("df={}", l.df)));
            }
        }
    }
    Ok(StageOutput { text: t.render(), records })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ardl::BoundsRow;
    use crate::sim;

    fn monthly_config() -> PipelineConfig {
        let mut c = PipelineConfig::new("BIST", ["CDS", "EX", "CPI", "INT"].map(String::from).to_vec());
        c.fixed = vec!["DPOL".into()];
        c.ardl.max_p = 2;
        c.ardl.max_q = 1;
        c
    }

    #[test]
    fn single_stage_config() {
        let d = sim::monthly_fixture(120, 1);
        let mut c = monthly_config();
        c.stages = Some(vec![Stage::Describe]);
        let r = full_report_on(&d, &c, Exec::Sequential).unwrap();
        assert_eq!(r.stages.len(), 1);
        assert_eq!(r.stages[0].status, StageStatus::Done);
        assert!(r.records().iter().any(|x| x.name == "BIST/jarque_bera"));
    }

    #[test]
    fn monthly_path_and_missing_bounds_table() {
        let d = sim::monthly_fixture(200, 2);
        let c = monthly_config();
        let r = full_report_on(&d, &c, Exec::Sequential).unwrap();
        // k = 5 in case I is covered by the embedded table.
        assert_eq!(r.stage(Stage::Bounds).unwrap().status, StageStatus::Done);
        let bounds = &r.stage(Stage::Bounds).unwrap().records[0];
        assert_eq!(bounds.note.as_deref(), Some("cointegrated at 1%"));
        let ecm = r.stage(Stage::Ecm).unwrap();
        let lambda = ecm.records.iter().find(|x| x.name == "lambda").unwrap();
        let l = lambda.value.unwrap();
        assert!(l < 0.0 && l > -1.0, "{l}");
        assert!(r.cusum.is_some());
        assert!(r.first_failure().is_none(), "{:?}", r.first_failure());

        let mut c2 = monthly_config();
        c2.fixed.clear();
        let r2 = full_report_on(&d, &c2, Exec::Sequential).unwrap();
        let (stage, _, kind) = r2.first_failure().unwrap();
        assert_eq!(stage, Stage::Bounds);
        assert_eq!(kind, crate::ErrorKind::Usage);
        assert_eq!(r2.stage(Stage::Longrun).unwrap().status, StageStatus::Done);
    }

    #[test]
    fn stages_off_path_are_skipped() {
        let d = sim::monthly_fixture(120, 3);
        let mut c = monthly_config();
        c.stages = Some(vec![Stage::Granger, Stage::Longrun]);
        let r = full_report_on(&d, &c, Exec::Sequential).unwrap();
        assert!(matches!(r.stage(Stage::Granger).unwrap().status, StageStatus::Skipped { .. }));
        assert!(matches!(r.stage(Stage::Longrun).unwrap().status, StageStatus::Skipped { .. }));
    }

    #[test]
    fn runs_are_byte_identical() {
        let d = sim::monthly_fixture(150, 4);
        let c = monthly_config();
        let a = full_report_on(&d, &c, Exec::Sequential).unwrap();
        let b = full_report_on(&d, &c, Exec::Parallel).unwrap();
        assert_eq!(a.to_jsonl(), b.to_jsonl());
        assert_eq!(a.to_text(), b.to_text());
    }

    #[test]
    fn daily_path() {
        let d = sim::daily_fixture(400, 5);
        let mut c = PipelineConfig::new("BIST", vec!["CDS".into()]);
        c.frequency = Frequency::Daily;
        c.var.max_lag = 4;
        c.var.exclude_own_lag = Some(2);
        let r = full_report_on(&d, &c, Exec::Sequential).unwrap();
        assert_eq!(r.stages.len(), 6);
        assert!(r.first_failure().is_none(), "{:?}", r.first_failure());
        let g = r.stage(Stage::Granger).unwrap();
        assert!(g.records.iter().any(|x| x.name.ends_with("CDS->BIST")));
    }

    #[test]
    fn user_bounds_table_file() {
        let dir = tempfile::tempdir().unwrap();
        let d = sim::monthly_fixture(160, 6);
        let csv = dir.path().join("data.csv");
        crate::dataio::write_csv(&d, &csv).unwrap();
        let rows = [(0.10, 1.0, 2.0), (0.05, 1.5, 2.5), (0.01, 2.0, 3.5)]
            .map(|(level, lower, upper)| BoundsRow { case: crate::ardl::BoundsCase::III, k: 4, level, lower, upper });
        let mut table = String::from("case,k,level,lower,upper\n");
        for r in rows {
            table.push_str(&format!("III,{},{},{},{}\n", r.k, r.level, r.lower, r.upper));
        }
        std::fs::write(dir.path().join("b.csv"), table).unwrap();
        let mut c = monthly_config();
        c.fixed.clear();
        c.data = Some("data.csv".into());
        c.ardl.case = crate::ardl::BoundsCase::III;
        c.ardl.bounds_table = Some("b.csv".into());
        c.stages = Some(vec![Stage::Ardl, Stage::Bounds]);
        let r = full_report(&c, dir.path(), Exec::Sequential).unwrap();
        assert_eq!(r.stage(Stage::Bounds).unwrap().status, StageStatus::Done);
        let bytes = std::fs::read(&csv).unwrap();
        assert_eq!(r.provenance.input_sha256, hex(&Sha256::digest(&bytes)));
    }
}
