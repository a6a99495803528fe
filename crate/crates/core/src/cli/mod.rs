//! Command-line front end. [`run`] does all the work and returns the text it
//! would print, so tests can drive it without spawning a process.

pub mod parse;

use std::fmt::Write as _;
use std::ops::RangeInclusive;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::classical::{
    defect_sweep, local_model, predicted_defect, triple_defect, verify_isometry,
};
use crate::corealg::model::ModelSpec;
use crate::corealg::novikov::{default_fit_bounds, fit_ratfn, FitError, NovikovSeries, RatFn};
use crate::corealg::rational::{fmt_rational, Rational};
use crate::corealg::ring::{fmt_monomial, Monomial, Ring};
use crate::extremal::{
    compute_n, extremal_series, is_admissible, n_point_extremal, verify_extremal_invariance,
};
use crate::qlocal::series::verify_flop_invariance_with;
use crate::qlocal::{
    admissible_d2, batyrev_check, n_point_series, GwEngine, Insertion, QlocalError,
};

pub use parse::{parse_in_model, parse_insertion, parse_insertions, ParseError, ParsedInsertion};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NO_FIT: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Table,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "flopgw",
    version,
    about = "Exact genus-zero invariants of local P^r flops"
)]
pub struct RunConfig {
    #[arg(long, value_enum, default_value_t = OutputFormat::Table, global = true)]
    pub output: OutputFormat,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Extremal invariants <h^l1, .., h^ln>_d over a range of d.
    Extremal {
        #[arg(long)]
        r: u32,
        #[arg(long, value_delimiter = ',', required = true)]
        degrees: Vec<u32>,
        #[arg(long, default_value = "1..4", value_parser = parse_range)]
        d: RangeInclusive<u32>,
    },
    /// Generating function of one insertion list at its admissible d2.
    Npoint {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        insertions: String,
        #[arg(long, default_value_t = 10)]
        d1_max: u32,
        #[arg(long, default_value_t = 3)]
        guard: usize,
    },
    /// Compare a generating function with its transform after continuation.
    VerifyFlop {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        insertions: String,
        #[arg(long, default_value_t = 10)]
        d1_max: u32,
        #[arg(long, default_value_t = 3)]
        guard: usize,
    },
    /// Classical defect of a triple, or the full basis sweep without --classes.
    Defect {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        rprime: Option<u32>,
        #[arg(long)]
        classes: Option<String>,
    },
    /// Check that the correspondence preserves the Poincare pairing.
    Isometry {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        rprime: Option<u32>,
    },
    /// Check the quantum ring presentation transforms as an isomorphism.
    Batyrev {
        #[arg(long)]
        r: u32,
    },
    /// All primary three-point generating functions with basis insertions at one d2.
    Table {
        #[arg(long)]
        r: u32,
        #[arg(long, default_value_t = 1)]
        d2: u32,
        #[arg(long, default_value_t = 8)]
        d1_max: u32,
    },
}

fn parse_range(s: &str) -> Result<RangeInclusive<u32>, String> {
    let bad = || format!("expected `a..b` or a single integer, got `{s}`");
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (
            a.trim().parse().map_err(|_| bad())?,
            b.trim().parse().map_err(|_| bad())?,
        ),
        None => {
            let v = s.trim().parse().map_err(|_| bad())?;
            (v, v)
        }
    };
    if lo == 0 || lo > hi {
        return Err(format!("range `{s}` must satisfy 1 <= a <= b"));
    }
    Ok(lo..=hi)
}

/// Exit code plus everything destined for stdout and stderr.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn usage(msg: impl Into<String>) -> Self {
        Outcome {
            code: EXIT_USAGE,
            stdout: String::new(),
            stderr: msg.into(),
        }
    }
}

/// Parses `args` (program name first) and runs. Usage errors exit with 2.
pub fn run_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match RunConfig::try_parse_from(args) {
        Ok(config) => run(&config),
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                Outcome::usage(text)
            } else {
                Outcome {
                    code: EXIT_OK,
                    stdout: text,
                    stderr: String::new(),
                }
            }
        }
    }
}

struct Report {
    json: Value,
    table: String,
    code: i32,
}

pub fn run(config: &RunConfig) -> Outcome {
    let mut warnings = Vec::new();
    let mut out = match dispatch(&config.command, &mut warnings) {
        Ok(rep) => {
            let mut stdout = match config.output {
                OutputFormat::Json => {
                    serde_json::to_string_pretty(&rep.json).expect("json serializes")
                }
                OutputFormat::Table => rep.table,
            };
            if !stdout.ends_with('\n') {
                stdout.push('\n');
            }
            Outcome {
                code: rep.code,
                stdout,
                stderr: String::new(),
            }
        }
        Err(out) => out,
    };
    let mut stderr: String = warnings.iter().map(|w| format!("warning: {w}\n")).collect();
    stderr.push_str(&out.stderr);
    out.stderr = stderr;
    out
}

fn check_rank(r: u32) -> Result<(), Outcome> {
    if r == 0 {
        Err(Outcome::usage("error: --r must be at least 1\n"))
    } else {
        Ok(())
    }
}

fn verdict(passed: bool) -> (&'static str, i32) {
    if passed {
        ("pass", EXIT_OK)
    } else {
        ("fail", EXIT_FAILED)
    }
}

fn qlocal_failure(e: QlocalError) -> Outcome {
    let code = match &e {
        QlocalError::Fit(FitError::NoFit { .. } | FitError::ValidationFailed { .. }) => EXIT_NO_FIT,
        QlocalError::Fit(_)
        | QlocalError::NoAdmissibleD2
        | QlocalError::NotHomogeneous(_)
        | QlocalError::WrongModel(_) => EXIT_USAGE,
        _ => EXIT_FAILED,
    };
    Outcome {
        code,
        stdout: String::new(),
        stderr: format!("error: {e}\n"),
    }
}

fn insertions_for(r: u32, text: &str, warn: &mut Vec<String>) -> Result<Vec<Insertion>, Outcome> {
    let (ins, w) = parse_insertions(text, ModelSpec::flop(r))
        .map_err(|e| Outcome::usage(format!("error: {e}\n")))?;
    warn.extend(w);
    Ok(ins)
}

fn q(x: &Rational) -> Value {
    Value::String(fmt_rational(x))
}

fn ratfn_json(f: &RatFn) -> Value {
    json!({
        "num": f.num().fmt_var("q1"),
        "den": f.den().fmt_var("q1"),
        "q2power": f.q2power,
        "display": f.to_string(),
    })
}

fn series_json(s: &NovikovSeries) -> Value {
    Value::Array(s.coeffs.iter().map(q).collect())
}

fn ins_json(ins: &[Insertion]) -> Value {
    Value::Array(ins.iter().map(|i| Value::String(i.to_string())).collect())
}

fn ins_list(ins: &[Insertion]) -> String {
    ins.iter()
        .map(|i| i.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

fn series_line(s: &NovikovSeries) -> String {
    s.coeffs
        .iter()
        .map(fmt_rational)
        .collect::<Vec<_>>()
        .join(" ")
}

fn fit_with_guard(s: &NovikovSeries, d1_max: u32, guard: usize) -> Result<RatFn, QlocalError> {
    let (p, q, g) = fit_bounds(d1_max, guard);
    Ok(fit_ratfn(s, p, q, g)?)
}

fn fit_bounds(d1_max: u32, guard: usize) -> (usize, usize, usize) {
    let (p, q, _) = default_fit_bounds(d1_max as usize);
    (p, q, guard)
}

fn dispatch(cmd: &Command, warn: &mut Vec<String>) -> Result<Report, Outcome> {
    match cmd {
        Command::Extremal { r, degrees, d } => extremal(*r, degrees, d.clone()),
        Command::Npoint {
            r,
            insertions,
            d1_max,
            guard,
        } => npoint(*r, insertions, *d1_max, *guard, warn),
        Command::VerifyFlop {
            r,
            insertions,
            d1_max,
            guard,
        } => verify_flop(*r, insertions, *d1_max, *guard, warn),
        Command::Defect { r, rprime, classes } => {
            defect(*r, rprime.unwrap_or(*r), classes.as_deref(), warn)
        }
        Command::Isometry { r, rprime } => isometry(*r, rprime.unwrap_or(*r)),
        Command::Batyrev { r } => batyrev(*r),
        Command::Table { r, d2, d1_max } => table(*r, *d2, *d1_max),
    }
}

fn extremal(r: u32, degrees: &[u32], d: RangeInclusive<u32>) -> Result<Report, Outcome> {
    check_rank(r)?;
    let mut values = Vec::new();
    let mut table = format!("r = {r}, degrees = {degrees:?}\n  d  value\n");
    for d in d {
        let v = n_point_extremal(r, degrees, d);
        let _ = writeln!(table, "{d:>3}  {}", fmt_rational(&v));
        values.push(json!({ "d": d, "value": fmt_rational(&v) }));
    }
    let mut json = json!({
        "r": r,
        "d2": 0,
        "degrees": degrees,
        "values": values,
        "verdict": "ok",
    });
    let mut code = EXIT_OK;
    if degrees.len() >= 3 && is_admissible(r, degrees) {
        let n = compute_n(r, degrees).map_err(|e| Outcome {
            code: EXIT_FAILED,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        })?;
        let series = extremal_series(r, degrees).expect("admissible vector");
        let rep = verify_extremal_invariance(r, degrees).expect("admissible vector");
        let (v, c) = verdict(rep.passed);
        code = c;
        let _ = writeln!(
            table,
            "N = {}\nseries = {}\ninvariance: {v}",
            fmt_rational(&n),
            series.fmt_q1()
        );
        json["N"] = q(&n);
        json["ratfn"] = ratfn_json(&series);
        json["continued"] = json!({
            "x_side": ratfn_json(&rep.x_side),
            "f_side": ratfn_json(&rep.f_side),
            "f_side_continued": ratfn_json(&rep.f_side_continued),
            "defect": q(&rep.defect),
        });
        json["verdict"] = Value::String(v.into());
    }
    Ok(Report { json, table, code })
}

fn npoint(
    r: u32,
    text: &str,
    d1_max: u32,
    guard: usize,
    warn: &mut Vec<String>,
) -> Result<Report, Outcome> {
    check_rank(r)?;
    let ins = insertions_for(r, text, warn)?;
    let d2 = admissible_d2(r, &ins).map_err(qlocal_failure)?;
    let series = n_point_series(r, &ins, d1_max).map_err(qlocal_failure)?;
    let fit = fit_with_guard(&series, d1_max, guard).map_err(qlocal_failure)?;
    let continued = fit.continued();
    let table = format!(
        "r = {r}, d2 = {d2}, insertions: {}\ncoefficients (d1 = 0..={d1_max}): {}\nratfn = {fit}\ncontinued = {}\n",
        ins_list(&ins),
        series_line(&series),
        continued.as_ref().map(|c| c.to_string()).unwrap_or_else(|e| e.to_string()),
    );
    let json = json!({
        "r": r,
        "d2": d2,
        "insertions": ins_json(&ins),
        "coefficients": series_json(&series),
        "ratfn": ratfn_json(&fit),
        "continued": match &continued {
            Ok(c) => ratfn_json(c),
            Err(e) => json!({ "error": e.to_string() }),
        },
        "verdict": "ok",
    });
    Ok(Report {
        json,
        table,
        code: EXIT_OK,
    })
}

fn verify_flop(
    r: u32,
    text: &str,
    d1_max: u32,
    guard: usize,
    warn: &mut Vec<String>,
) -> Result<Report, Outcome> {
    check_rank(r)?;
    let ins = insertions_for(r, text, warn)?;
    let rep = verify_flop_invariance_with(
        &GwEngine::global(r),
        &ins,
        d1_max,
        fit_bounds(d1_max, guard),
    )
    .map_err(qlocal_failure)?;
    let (v, code) = verdict(rep.passed);
    let table = format!(
        "r = {r}, d2 = {}\n  X : {}\n      coefficients: {}\n      ratfn = {}\n      continued = {}\n  X': {}\n      coefficients: {}\n      ratfn = {}\nverdict: {v}\n",
        rep.d2,
        ins_list(&rep.insertions),
        series_line(&rep.series),
        rep.fit,
        rep.continued,
        ins_list(&rep.transformed),
        series_line(&rep.transformed_series),
        rep.transformed_fit,
    );
    let json = json!({
        "r": r,
        "d2": rep.d2,
        "insertions": ins_json(&rep.insertions),
        "coefficients": series_json(&rep.series),
        "ratfn": ratfn_json(&rep.fit),
        "continued": ratfn_json(&rep.continued),
        "transformed": {
            "insertions": ins_json(&rep.transformed),
            "coefficients": series_json(&rep.transformed_series),
            "ratfn": ratfn_json(&rep.transformed_fit),
        },
        "verdict": v,
    });
    Ok(Report { json, table, code })
}

fn model_for(r: u32, rprime: u32) -> Result<ModelSpec, Outcome> {
    check_rank(r)?;
    if rprime == 0 {
        return Err(Outcome::usage("error: --rprime must be at least 1\n"));
    }
    Ok(local_model(r, rprime))
}

fn defect(
    r: u32,
    rprime: u32,
    classes: Option<&str>,
    warn: &mut Vec<String>,
) -> Result<Report, Outcome> {
    let model = model_for(r, rprime)?;
    let Some(text) = classes else {
        let sweep = defect_sweep(model);
        let (v, code) = verdict(sweep.mismatches.is_empty());
        let mism: Vec<Value> = sweep
            .mismatches
            .iter()
            .map(|t| {
                Value::Array(
                    t.iter()
                        .map(|m| Value::String(fmt_monomial(model, *m)))
                        .collect(),
                )
            })
            .collect();
        let table = format!(
            "{model}: {} admissible basis triples, {} mismatches\nverdict: {v}\n",
            sweep.checked,
            sweep.mismatches.len()
        );
        let json = json!({ "r": r, "rprime": rprime, "checked": sweep.checked, "mismatches": mism, "verdict": v });
        return Ok(Report { json, table, code });
    };
    let (ins, w) =
        parse_insertions(text, model).map_err(|e| Outcome::usage(format!("error: {e}\n")))?;
    warn.extend(w);
    if ins.len() != 3 || ins.iter().any(|i| i.k != 0) {
        return Err(Outcome::usage(
            "error: --classes takes exactly three primary classes\n",
        ));
    }
    let fail = |e: crate::classical::ClassicalError| Outcome::usage(format!("error: {e}\n"));
    let actual = triple_defect(&ins[0].cls, &ins[1].cls, &ins[2].cls).map_err(fail)?;
    let predicted = predicted_defect(&ins[0].cls, &ins[1].cls, &ins[2].cls).map_err(fail)?;
    let (v, code) = verdict(actual == predicted);
    let table = format!(
        "{model}: ({})\n  defect    = {}\n  predicted = {}\nverdict: {v}\n",
        ins_list(&ins),
        fmt_rational(&actual),
        fmt_rational(&predicted)
    );
    let json = json!({
        "r": r,
        "rprime": rprime,
        "classes": ins_json(&ins),
        "defect": q(&actual),
        "predicted": q(&predicted),
        "verdict": v,
    });
    Ok(Report { json, table, code })
}

fn isometry(r: u32, rprime: u32) -> Result<Report, Outcome> {
    let model = model_for(r, rprime)?;
    let rep = verify_isometry(model).map_err(|e| Outcome::usage(format!("error: {e}\n")))?;
    let (v, code) = verdict(rep.passed);
    let failure = rep
        .first_failure
        .map(|(a, b)| format!("{} . {}", fmt_monomial(model, a), fmt_monomial(model, b)));
    let mut table = format!("{model}: isometry {v}\n");
    if let Some(f) = &failure {
        let _ = writeln!(table, "  first failure: {f}");
    }
    let json = json!({ "r": r, "rprime": rprime, "first_failure": failure, "verdict": v });
    Ok(Report { json, table, code })
}

fn batyrev(r: u32) -> Result<Report, Outcome> {
    check_rank(r)?;
    let rep = batyrev_check(r);
    let (v, code) = verdict(rep.passed());
    let table = format!(
        "r = {r}\n  first relation:  {}\n  second relation: {}\nverdict: {v}\n",
        verdict(rep.first_relation).0,
        verdict(rep.second_relation).0
    );
    let json = json!({
        "r": r,
        "first_relation": rep.first_relation,
        "second_relation": rep.second_relation,
        "verdict": v,
    });
    Ok(Report { json, table, code })
}

fn table(r: u32, d2: u32, d1_max: u32) -> Result<Report, Outcome> {
    check_rank(r)?;
    let model = ModelSpec::flop(r);
    let engine = GwEngine::global(r);
    let mut rows = Vec::new();
    let mut table = format!("r = {r}, d2 = {d2}, d1 <= {d1_max}\n");
    let mut code = EXIT_OK;
    for [a, b, c] in admissible_triples(model, d2) {
        let ins = [a, b, c]
            .map(|m| Insertion::monomial(r, 0, m.a, m.b))
            .to_vec();
        let rep =
            verify_flop_invariance_with(&engine, &ins, d1_max, default_fit_bounds(d1_max as usize))
                .map_err(qlocal_failure)?;
        let (v, c) = verdict(rep.passed);
        code = code.max(c);
        let _ = writeln!(table, "<{}> = {}  [{v}]", ins_list(&ins), rep.fit);
        rows.push(json!({
            "insertions": ins_json(&ins),
            "coefficients": series_json(&rep.series),
            "ratfn": ratfn_json(&rep.fit),
            "continued": ratfn_json(&rep.continued),
            "verdict": v,
        }));
    }
    let (v, _) = verdict(code == EXIT_OK);
    let json = json!({ "r": r, "d2": d2, "d1_max": d1_max, "rows": rows, "verdict": v });
    Ok(Report { json, table, code })
}

/// Sorted basis triples whose dimension fixes the given `d2`.
fn admissible_triples(model: ModelSpec, d2: u32) -> Vec<[Monomial; 3]> {
    let r = model.r;
    let basis = Ring::get(model).basis().to_vec();
    let mut out = Vec::new();
    for i in 0..basis.len() {
        for j in i..basis.len() {
            for k in j..basis.len() {
                let t = [basis[i], basis[j], basis[k]];
                let ins: Vec<Insertion> = t
                    .iter()
                    .map(|m| Insertion::monomial(r, 0, m.a, m.b))
                    .collect();
                if admissible_d2(r, &ins) == Ok(d2) {
                    out.push(t);
                }
            }
        }
    }
    out
}
