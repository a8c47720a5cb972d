//! Command-line front end.
//!
//! Every command builds a [`Report`]: a JSON payload carrying a top-level
//! `"schema"` field, plus a flat table used for the `csv` and `table`
//! formats. CSV numbers carry 12 significant digits; JSON numbers round-trip.
//!
//! Exit codes: 0 when everything requested passes, 1 when a check fails,
//! 2 on usage or domain errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use clap::builder::PossibleValue;
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::constants::{bounds_d, constant_for, FunctionClass, PowerWeightParams};
use crate::error::Error;
use crate::hardy::{ratio_h_minus_i, random_function, PiecewiseLogPower};
use crate::majorization::{build_case, check_majorization};
use crate::optimize::{sup_k, SupOptions};
use crate::roots::{find_root, RootName};
use crate::verify::{
    acceptance_grid, check_identities, verify_constant, verify_corollary_e, verify_d_bounds, verify_prop_f,
    VerificationSummary,
};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

const DEFAULT_SEED: u64 = 1;

#[derive(Debug, Parser)]
#[command(name = "hardy", version, about = "Sharp constants for weighted L^p bounds of H - I")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,
    /// Worker threads; defaults to the number of cores.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
    Table,
}

impl ValueEnum for FunctionClass {
    fn value_variants<'a>() -> &'a [Self] {
        &FunctionClass::ALL
    }

    fn to_possible_value(&self) -> Option<PossibleValue> {
        Some(match self {
            FunctionClass::DecreasingA => PossibleValue::new("A").aliases(["a", "decreasing"]),
            FunctionClass::PositiveB => PossibleValue::new("B").aliases(["b", "positive"]),
            FunctionClass::GeneralC => PossibleValue::new("C").aliases(["c", "general"]),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    #[value(name = "theorem-A", alias = "theorem-a")]
    TheoremA,
    #[value(name = "theorem-B", alias = "theorem-b")]
    TheoremB,
    #[value(name = "theorem-C", alias = "theorem-c")]
    TheoremC,
    #[value(name = "corollary-e")]
    CorollaryE,
    #[value(name = "prop-f")]
    PropF,
    #[value(name = "identities")]
    Identities,
    #[value(name = "bounds-d")]
    BoundsD,
}

#[derive(Debug, Args)]
struct PointArgs {
    #[arg(long = "p")]
    p: f64,
    #[arg(long = "a", allow_negative_numbers = true)]
    a: f64,
}

impl PointArgs {
    fn params(&self) -> crate::Result<PowerWeightParams> {
        PowerWeightParams::new(self.p, self.a)
    }
}

/// An end of the `a` range: a number, or `p-<x>` for `p − x`.
#[derive(Debug, Clone, Copy, PartialEq)]
enum AEnd {
    Fixed(f64),
    BelowP(f64),
}

impl AEnd {
    fn at(&self, p: f64) -> f64 {
        match *self {
            AEnd::Fixed(a) => a,
            AEnd::BelowP(x) => p - x,
        }
    }
}

impl FromStr for AEnd {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("p-") {
            return rest.parse().map(AEnd::BelowP).map_err(|e| format!("bad offset in {s:?}: {e}"));
        }
        s.parse().map(AEnd::Fixed).map_err(|e| format!("bad number {s:?}: {e}"))
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// The sharp constant K^p for one class and (p, a).
    Constant {
        #[arg(long, value_enum)]
        class: FunctionClass,
        #[command(flatten)]
        point: PointArgs,
    },
    /// One of the transcendental roots used by the tables.
    Roots {
        #[arg(long)]
        name: String,
        #[command(flatten)]
        point: PointArgs,
    },
    /// Closed form against the numerical supremum over a (p, a) grid.
    Sweep {
        #[arg(long, value_enum)]
        class: FunctionClass,
        #[arg(long)]
        p_min: f64,
        #[arg(long)]
        p_max: f64,
        /// A number, or `p-<x>` for an end that moves with p.
        #[arg(long, allow_hyphen_values = true)]
        a_min: AEnd,
        #[arg(long, allow_hyphen_values = true)]
        a_max: AEnd,
        /// Points per axis, endpoints included.
        #[arg(long, default_value_t = 10)]
        steps: usize,
    },
    /// Verification suites; with --majorization, the pointwise majorant checks.
    Verify {
        #[arg(long, value_enum, required_unless_present = "majorization")]
        suite: Option<Suite>,
        #[arg(long)]
        majorization: bool,
        /// Restricts --majorization to one class.
        #[arg(long, value_enum)]
        class: Option<FunctionClass>,
        /// Without --p and --a, suites that support it run the acceptance grid.
        #[arg(long = "p")]
        p: Option<f64>,
        #[arg(long = "a", allow_negative_numbers = true)]
        a: Option<f64>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Random samples per check; each suite has its own default.
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, allow_negative_numbers = true)]
        alpha: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        beta: Option<f64>,
        #[arg(long, default_value_t = 1000)]
        n_max: u64,
        /// Function for the identities suite (same JSON as `ratio --file`).
        #[arg(long)]
        file: Option<PathBuf>,
        /// Grid size for --majorization.
        #[arg(long, default_value_t = 10_000)]
        grid: usize,
    },
    /// `∫|Hf − f|^p t^a / ∫|f|^p t^a` for a piecewise function read from JSON.
    Ratio {
        #[arg(long)]
        file: PathBuf,
        #[command(flatten)]
        point: PointArgs,
        /// Also compares against K^p of this class.
        #[arg(long, value_enum)]
        class: Option<FunctionClass>,
    },
    /// Known bounds for D_p, optionally with an empirical lower bound.
    BoundsD {
        #[arg(long = "p")]
        p: f64,
        #[arg(long, default_value_t = 0)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

/// Output of one command before rendering.
struct Report {
    json: Value,
    headers: Vec<&'static str>,
    rows: Vec<Vec<String>>,
    pass: bool,
}

impl Report {
    fn new(schema: &str, mut json: Value, headers: Vec<&'static str>) -> Self {
        if let Value::Object(map) = &mut json {
            map.insert("schema".into(), Value::String(schema.into()));
        }
        Report { json, headers, rows: Vec::new(), pass: true }
    }

    fn render(&self, format: OutputFormat, out: &mut dyn Write) -> std::io::Result<()> {
        match format {
            OutputFormat::Json => {
                serde_json::to_writer_pretty(&mut *out, &self.json)?;
                writeln!(out)
            }
            OutputFormat::Csv => {
                let mut w = csv::Writer::from_writer(&mut *out);
                w.write_record(&self.headers)?;
                for row in &self.rows {
                    w.write_record(row)?;
                }
                w.flush()
            }
            OutputFormat::Table => {
                let mut widths: Vec<usize> = self.headers.iter().map(|h| h.chars().count()).collect();
                for row in &self.rows {
                    for (w, cell) in widths.iter_mut().zip(row) {
                        *w = (*w).max(cell.chars().count());
                    }
                }
                let line = |cells: Vec<&str>| {
                    cells
                        .iter()
                        .zip(&widths)
                        .map(|(c, w)| format!("{c:>w$}"))
                        .collect::<Vec<_>>()
                        .join("  ")
                };
                writeln!(out, "{}", line(self.headers.clone()))?;
                for row in &self.rows {
                    writeln!(out, "{}", line(row.iter().map(String::as_str).collect()))?;
                }
                Ok(())
            }
        }
    }
}

/// At most 12 significant digits, trailing zeros dropped.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    let trim = |s: &str| -> String {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s.to_string()
        }
    };
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        trim(&format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim(mantissa))
    }
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_num).unwrap_or_default()
}

fn to_json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

/// Exit code for a library error: parameter and domain problems are usage
/// errors, anything else is a failed check.
fn error_code(e: &Error) -> i32 {
    match e {
        Error::InvalidParams(_)
        | Error::ClassDomain(_)
        | Error::Domain(_)
        | Error::Region { .. }
        | Error::MalformedFunction(_) => EXIT_USAGE,
        _ => EXIT_FAIL,
    }
}

struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure { code: error_code(&e), message: e.to_string() }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_USAGE, message: message.into() }
}

type CmdResult = std::result::Result<Report, Failure>;

fn cmd_constant(class: FunctionClass, params: PowerWeightParams) -> CmdResult {
    let r = constant_for(class, &params)?;
    let mut json = to_json(&r);
    json["K"] = json!(r.k());
    let mut report = Report::new("hardy.constant.v1", json, vec!["class", "p", "a", "Kp", "K", "case", "method", "roots"]);
    let roots = r.roots_used.iter().map(|(n, v)| format!("{n}={}", fmt_num(*v))).collect::<Vec<_>>().join(";");
    let method = to_json(&r.method).as_str().unwrap_or_default().to_string();
    report.rows.push(vec![
        class.letter().to_string(),
        fmt_num(params.p()),
        fmt_num(params.a()),
        fmt_num(r.k_to_p),
        fmt_num(r.k()),
        r.case_tag.as_str().to_string(),
        method,
        roots,
    ]);
    Ok(report)
}

fn cmd_roots(name: &str, params: PowerWeightParams) -> CmdResult {
    let name: RootName = name.parse()?;
    let r = find_root(name, params)?;
    let json = json!({
        "name": name.as_str(),
        "p": params.p(),
        "a": params.a(),
        "root": r.root,
        "residual": r.residual,
        "iterations": r.iterations,
    });
    let mut report = Report::new("hardy.root.v1", json, vec!["name", "p", "a", "root", "residual", "iterations"]);
    report.rows.push(vec![
        name.to_string(),
        fmt_num(params.p()),
        fmt_num(params.a()),
        fmt_num(r.root),
        fmt_num(r.residual),
        r.iterations.to_string(),
    ]);
    Ok(report)
}

#[derive(Debug, Clone, Serialize)]
struct SweepRow {
    p: f64,
    a: f64,
    class: FunctionClass,
    status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    sup: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    alpha_hat: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    beta_hat: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    argmax: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    closed_form: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    abs_diff: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    reason: Option<String>,
}

fn sweep_row(class: FunctionClass, p: f64, a: f64) -> SweepRow {
    let skipped = |reason: String| SweepRow {
        p,
        a,
        class,
        status: "skipped",
        sup: None,
        alpha_hat: None,
        beta_hat: None,
        argmax: None,
        closed_form: None,
        abs_diff: None,
        reason: Some(reason),
    };
    let params = match PowerWeightParams::new(p, a) {
        Ok(params) => params,
        Err(e) => return skipped(e.to_string()),
    };
    let closed = match constant_for(class, &params) {
        Ok(r) => r.k_to_p,
        Err(e) => return skipped(e.to_string()),
    };
    match sup_k(&params, class, &SupOptions::default()) {
        Ok(sup) => SweepRow {
            p,
            a,
            class,
            status: "ok",
            sup: Some(sup.value),
            alpha_hat: sup.argmax.alpha(),
            beta_hat: sup.argmax.beta(),
            argmax: Some(sup.argmax.label()),
            closed_form: Some(closed),
            abs_diff: Some((sup.value - closed).abs()),
            reason: None,
        },
        Err(e) => skipped(e.to_string()),
    }
}

/// A degenerate range gives its single point once.
fn linspace(lo: f64, hi: f64, steps: usize) -> impl Iterator<Item = f64> {
    let steps = if lo == hi { 1 } else { steps };
    (0..steps).map(move |i| if i + 1 == steps { hi } else { lo + (hi - lo) * i as f64 / (steps - 1) as f64 })
}

fn cmd_sweep(class: FunctionClass, p_range: (f64, f64), a_range: (AEnd, AEnd), steps: usize) -> CmdResult {
    if steps < 2 {
        return Err(usage(format!("steps = {steps} must be at least 2")));
    }
    if !(p_range.0 <= p_range.1) {
        return Err(usage(format!("empty p range [{}, {}]", p_range.0, p_range.1)));
    }
    let points: Vec<(f64, f64)> = linspace(p_range.0, p_range.1, steps)
        .flat_map(|p| linspace(a_range.0.at(p), a_range.1.at(p), steps).map(move |a| (p, a)))
        .collect();
    let rows: Vec<SweepRow> = points.par_iter().map(|&(p, a)| sweep_row(class, p, a)).collect();
    let max_diff = rows.iter().filter_map(|r| r.abs_diff).fold(0.0, f64::max);
    let json = json!({
        "class": class,
        "steps": steps,
        "rows": to_json(&rows),
        "max_abs_diff": max_diff,
        "skipped": rows.iter().filter(|r| r.status == "skipped").count(),
    });
    let mut report = Report::new(
        "hardy.sweep.v1",
        json,
        vec!["p", "a", "class", "sup", "alpha_hat", "beta_hat", "closed_form", "abs_diff", "status"],
    );
    for r in &rows {
        report.rows.push(vec![
            fmt_num(r.p),
            fmt_num(r.a),
            class.letter().to_string(),
            fmt_opt(r.sup),
            fmt_opt(r.alpha_hat),
            fmt_opt(r.beta_hat),
            fmt_opt(r.closed_form),
            fmt_opt(r.abs_diff),
            r.status.to_string(),
        ]);
    }
    Ok(report)
}

fn summaries_report(suite: &str, summaries: Vec<VerificationSummary>) -> Report {
    let pass = summaries.iter().all(|s| s.pass);
    let json = json!({ "suite": suite, "pass": pass, "summaries": to_json(&summaries) });
    let mut report = Report::new(
        "hardy.verify.v1",
        json,
        vec!["target", "class", "p", "a", "bound", "checks", "worst_slack", "attained", "pass", "failures"],
    );
    for s in &summaries {
        report.rows.push(vec![
            s.target.clone(),
            s.class.map(|c| c.letter().to_string()).unwrap_or_default(),
            fmt_num(s.p),
            fmt_num(s.a),
            fmt_num(s.bound),
            s.checks_run.to_string(),
            fmt_num(s.worst_slack),
            fmt_opt(s.attained_ratio),
            s.pass.to_string(),
            s.failures.len().to_string(),
        ]);
    }
    report.pass = pass;
    report
}

fn read_function(path: &PathBuf) -> std::result::Result<PiecewiseLogPower, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| usage(format!("malformed function in {}: {e}", path.display())))
}

struct VerifyArgs {
    suite: Option<Suite>,
    majorization: bool,
    class: Option<FunctionClass>,
    p: Option<f64>,
    a: Option<f64>,
    seed: u64,
    samples: Option<usize>,
    alpha: Option<f64>,
    beta: Option<f64>,
    n_max: u64,
    file: Option<PathBuf>,
    grid: usize,
}

impl VerifyArgs {
    fn point(&self) -> std::result::Result<Option<PowerWeightParams>, Failure> {
        match (self.p, self.a) {
            (Some(p), Some(a)) => Ok(Some(PowerWeightParams::new(p, a)?)),
            (None, None) => Ok(None),
            _ => Err(usage("--p and --a go together")),
        }
    }

    fn required_point(&self) -> std::result::Result<PowerWeightParams, Failure> {
        self.point()?.ok_or_else(|| usage("this suite needs --p and --a"))
    }
}

fn cmd_majorization(args: &VerifyArgs) -> CmdResult {
    let cases: Vec<(FunctionClass, PowerWeightParams)> = match args.point()? {
        Some(params) => {
            let classes: Vec<FunctionClass> = match args.class {
                Some(c) => vec![c],
                None => FunctionClass::ALL.into_iter().filter(|c| c.check(&params).is_ok()).collect(),
            };
            classes.into_iter().map(|c| (c, params)).collect()
        }
        None => acceptance_grid()?
            .into_iter()
            .filter(|cell| args.class.is_none_or(|c| c == cell.class))
            .map(|cell| (cell.class, cell.params))
            .collect(),
    };
    let results: Vec<crate::Result<Value>> = cases
        .par_iter()
        .map(|(class, params)| {
            let case = build_case(params, *class)?;
            let report = check_majorization(&case, args.grid)?;
            Ok(json!({ "case": to_json(&case), "report": to_json(&report) }))
        })
        .collect();
    let results = results.into_iter().collect::<crate::Result<Vec<_>>>()?;
    let pass = results.iter().all(|r| r["report"]["pass"] == json!(true));
    let mut report = Report::new(
        "hardy.majorization.v1",
        json!({ "pass": pass, "reports": results }),
        vec!["class", "p", "a", "case", "Kp", "D", "max_violation", "argmax", "pass"],
    );
    let cell = |v: &Value| match v {
        Value::Number(n) => fmt_num(n.as_f64().unwrap_or(f64::NAN)),
        Value::String(s) => s.clone(),
        Value::Bool(b) => b.to_string(),
        Value::Null => String::new(),
        other => other.to_string(),
    };
    for r in &results {
        let (c, m) = (&r["case"], &r["report"]);
        report.rows.push(vec![
            cell(&c["class"]),
            cell(&c["p"]),
            cell(&c["a"]),
            cell(&c["case"]),
            cell(&c["Kp"]),
            cell(&c["D"]),
            cell(&m["max_violation"]),
            cell(&m["argmax"]),
            cell(&m["pass"]),
        ]);
    }
    report.pass = pass;
    Ok(report)
}

fn cmd_verify(args: VerifyArgs) -> CmdResult {
    if args.majorization {
        return cmd_majorization(&args);
    }
    let suite = args.suite.ok_or_else(|| usage("--suite is required"))?;
    let seed = args.seed;
    let name = suite.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default();
    let summaries: Vec<crate::Result<VerificationSummary>> = match suite {
        Suite::TheoremA | Suite::TheoremB | Suite::TheoremC => {
            let class = match suite {
                Suite::TheoremA => FunctionClass::DecreasingA,
                Suite::TheoremB => FunctionClass::PositiveB,
                _ => FunctionClass::GeneralC,
            };
            let n = args.samples.unwrap_or(200);
            let points = match args.point()? {
                Some(params) => vec![params],
                None => acceptance_grid()?.into_iter().filter(|c| c.class == class).map(|c| c.params).collect(),
            };
            points.iter().map(|params| verify_constant(class, params, n, seed)).collect()
        }
        Suite::CorollaryE => {
            let n = args.samples.unwrap_or(100);
            let points = match args.point()? {
                Some(params) => vec![params],
                None => acceptance_grid()?
                    .into_iter()
                    .filter(|c| c.class == FunctionClass::DecreasingA && c.params.a() > -1.0)
                    .map(|c| c.params)
                    .collect(),
            };
            points.iter().map(|params| verify_corollary_e(params, n, seed)).collect()
        }
        Suite::PropF => {
            let params = args.required_point()?;
            let (alpha, beta) = match (args.alpha, args.beta) {
                (Some(a), Some(b)) => (a, b),
                _ => return Err(usage("prop-f needs --alpha and --beta")),
            };
            vec![verify_prop_f(&params, alpha, beta, args.n_max, args.samples.unwrap_or(100), seed)]
        }
        Suite::Identities => {
            let params = args.required_point()?;
            let mut functions = vec![match &args.file {
                Some(path) => read_function(path)?,
                None => PiecewiseLogPower::indicator(0.0, 1.0)?,
            }];
            let n = args.samples.unwrap_or(if args.file.is_some() { 0 } else { 100 });
            functions.extend((0..n).map(|i| {
                random_function(FunctionClass::PositiveB, &params, seed.wrapping_add(i as u64), 2 + i % 5)
            }));
            functions.par_iter().map(|f| check_identities(f, &params)).collect()
        }
        Suite::BoundsD => {
            let p = args.p.ok_or_else(|| usage("bounds-d needs --p"))?;
            vec![verify_d_bounds(p, args.samples.unwrap_or(100), seed)]
        }
    };
    let summaries = summaries.into_iter().collect::<crate::Result<Vec<_>>>()?;
    Ok(summaries_report(&name, summaries))
}

fn cmd_ratio(path: &PathBuf, params: PowerWeightParams, class: Option<FunctionClass>) -> CmdResult {
    let f = read_function(path)?;
    let bound = match class {
        Some(c) => Some(constant_for(c, &params)?.k_to_p),
        None => None,
    };
    let r = ratio_h_minus_i(&f, &params, bound.unwrap_or(f64::INFINITY))?;
    let within = bound.map(|_| r.within(crate::verify::SAMPLE_TOL));
    let json = json!({
        "p": params.p(),
        "a": params.a(),
        "numerator": r.numerator,
        "denominator": r.denominator,
        "ratio": r.ratio,
        "bound": bound,
        "within_bound": within,
    });
    let mut report = Report::new("hardy.ratio.v1", json, vec!["p", "a", "numerator", "denominator", "ratio", "bound", "within_bound"]);
    report.rows.push(vec![
        fmt_num(params.p()),
        fmt_num(params.a()),
        fmt_num(r.numerator),
        fmt_num(r.denominator),
        fmt_num(r.ratio),
        fmt_opt(bound),
        within.map(|w| w.to_string()).unwrap_or_default(),
    ]);
    report.pass = within.unwrap_or(true);
    Ok(report)
}

fn cmd_bounds_d(p: f64, samples: usize, seed: u64) -> CmdResult {
    let b = bounds_d(p)?;
    let mut json = to_json(&b);
    let mut empirical = None;
    let mut pass = true;
    if samples > 0 {
        let s = verify_d_bounds(p, samples, seed)?;
        empirical = s.attained_ratio.map(|r| r.powf(1.0 / p));
        pass = s.pass;
        json["empirical_lower"] = json!(empirical);
        json["samples"] = json!(samples);
        json["seed"] = json!(seed);
    }
    let mut report = Report::new("hardy.bounds_d.v1", json, vec!["p", "lower", "upper", "exact", "empirical_lower"]);
    report.rows.push(vec![fmt_num(p), fmt_num(b.lower), fmt_num(b.upper), fmt_opt(b.exact), fmt_opt(empirical)]);
    report.pass = pass;
    Ok(report)
}

fn dispatch(command: Command) -> CmdResult {
    match command {
        Command::Constant { class, point } => cmd_constant(class, point.params()?),
        Command::Roots { name, point } => cmd_roots(&name, point.params()?),
        Command::Sweep { class, p_min, p_max, a_min, a_max, steps } => {
            cmd_sweep(class, (p_min, p_max), (a_min, a_max), steps)
        }
        Command::Verify { suite, majorization, class, p, a, seed, samples, alpha, beta, n_max, file, grid } => {
            cmd_verify(VerifyArgs { suite, majorization, class, p, a, seed, samples, alpha, beta, n_max, file, grid })
        }
        Command::Ratio { file, point, class } => cmd_ratio(&file, point.params()?, class),
        Command::BoundsD { p, samples, seed } => cmd_bounds_d(p, samples, seed),
    }
}

/// Runs the CLI on `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    let default_format = match cli.command {
        Command::Sweep { .. } => OutputFormat::Csv,
        _ => OutputFormat::Table,
    };
    let format = cli.format.unwrap_or(default_format);
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            let _ = writeln!(err, "error: --jobs must be positive");
            return EXIT_USAGE;
        }
        pool = pool.num_threads(jobs);
    }
    let pool = match pool.build() {
        Ok(pool) => pool,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_FAIL;
        }
    };
    match pool.install(|| dispatch(cli.command)) {
        Ok(report) => {
            if let Err(e) = report.render(format, out) {
                let _ = writeln!(err, "error: {e}");
                return EXIT_FAIL;
            }
            if report.pass {
                EXIT_PASS
            } else {
                EXIT_FAIL
            }
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

pub fn run_from_env() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}
