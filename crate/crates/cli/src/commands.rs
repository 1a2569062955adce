use std::fmt::Write as _;
use std::path::Path;

use serde_json::{json, Value};

use steenrod_core::bv::qts_apply;
use steenrod_core::expr::{parse_element, Context, Element, OperationExpr};
use steenrod_core::milnor::{milnor_multiply, qts_degree, qts_milnor, MilnorConfig, MilnorElement};
use steenrod_core::obstruct::{
    adams_check, adams_check_odd, check as module_check, gap_scan, run_length, FiniteModuleTable, GapReport,
    ModuleDescription, Outcome, Verdict,
};
use steenrod_core::odd::{qts_apply_odd, qts_degree_odd};
use steenrod_core::suites::{run_suite, SUITE_NAMES};
use steenrod_core::Error;

use crate::GlobalOpts;

pub const EXIT_USAGE: u8 = 64;
const EXIT_DATA: u8 = 65;
const EXIT_NO_INPUT: u8 = 66;
const EXIT_INTERNAL: u8 = 70;
const EXIT_SUITE_FAILED: u8 = 1;
const EXIT_NOT_REALIZABLE: u8 = 10;
const EXIT_ADAMS_VIOLATION: u8 = 11;

const SCHEMA: &str = "steenrod-report/1";

pub struct Output {
    pub text: String,
    pub record: Option<Value>,
    pub status: u8,
}

pub struct Failure {
    pub message: String,
    pub status: u8,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Io(_) => EXIT_NO_INPUT,
            Error::Internal(_) => EXIT_INTERNAL,
            _ => EXIT_DATA,
        };
        Failure { message: e.to_string(), status }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { message: message.into(), status: EXIT_USAGE }
}

type CmdResult = Result<Output, Failure>;

fn record(command: &str, body: Value) -> Value {
    let mut v = json!({ "schema": SCHEMA, "command": command });
    if let (Value::Object(target), Value::Object(extra)) = (&mut v, body) {
        target.extend(extra);
    }
    v
}

/// Number of variables written in `text`: entries of the first tuple, or
/// the largest `x<i>` index.
fn infer_d(text: &str) -> Option<usize> {
    if let Some(open) = text.find('(') {
        let close = text[open..].find(')')? + open;
        return Some(text[open + 1..close].split(',').count());
    }
    let bytes = text.as_bytes();
    let mut best = None;
    for (i, &b) in bytes.iter().enumerate() {
        if b == b'x' {
            let digits: String = text[i + 1..].chars().take_while(char::is_ascii_digit).collect();
            if let Ok(n) = digits.parse::<usize>() {
                best = best.max(Some(n));
            }
        }
    }
    best
}

fn element(g: &GlobalOpts, text: &str) -> Result<Element, Failure> {
    let d = g.d.or_else(|| infer_d(text)).ok_or_else(|| usage("cannot infer d from the element; pass --d"))?;
    let ctx = Context::new(g.prime, d, g.alpha)?;
    Ok(parse_element(text, &ctx)?)
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure { message: format!("{}: {e}", path.display()), status: EXIT_NO_INPUT })
}

fn load_module(g: &GlobalOpts, path: &Path) -> Result<ModuleDescription, Failure> {
    let m = ModuleDescription::from_toml_str(&read(path)?)
        .map_err(|e| Failure { message: format!("{}: {e}", path.display()), status: EXIT_DATA })?;
    match g.bound {
        Some(b) => Ok(m.with_bound(b)?),
        None => Ok(m),
    }
}

pub fn apply(g: &GlobalOpts, op: &str, elem: &str) -> CmdResult {
    let expr = OperationExpr::parse(op)?;
    let x = element(g, elem)?;
    let y = expr.evaluate(&x)?;
    Ok(Output {
        text: format!("{y}\n"),
        record: Some(record(
            "apply",
            json!({
                "prime": x.prime(),
                "d": x.d(),
                "operation": expr.to_string(),
                "input": x.to_string(),
                "result": y.to_string(),
                "degree": y.degree(),
            }),
        )),
        status: 0,
    })
}

pub fn milnor_mul(g: &GlobalOpts, a: &str, b: &str) -> CmdResult {
    if g.prime != 2 {
        return Err(usage("milnor-mul works at p = 2 only"));
    }
    let a: MilnorElement = a.parse()?;
    let b: MilnorElement = b.parse()?;
    let prod = milnor_multiply(&a, &b);
    let terms: Vec<String> = prod.terms().map(ToString::to_string).collect();
    Ok(Output {
        text: format!("{prod}\n"),
        record: Some(record(
            "milnor-mul",
            json!({ "a": a.to_string(), "b": b.to_string(), "degree": a.degree() + b.degree(), "terms": terms }),
        )),
        status: 0,
    })
}

pub fn qts(g: &GlobalOpts, t: u32, s: u32, _milnor: bool, apply_to: Option<&str>) -> CmdResult {
    if let Some(text) = apply_to {
        let x = element(g, text)?;
        let y = match &x {
            Element::Mod2(x) => Element::Mod2(qts_apply(t, s, x)),
            Element::Odd(x) => Element::Odd(qts_apply_odd(t, s, x)),
        };
        let degree = if g.prime == 2 { qts_degree(t, s) } else { qts_degree_odd(t, s, g.prime) };
        return Ok(Output {
            text: format!("{y}\n"),
            record: Some(record(
                "qts",
                json!({ "t": t, "s": s, "prime": g.prime, "operation_degree": degree, "input": x.to_string(), "result": y.to_string() }),
            )),
            status: 0,
        });
    }
    if g.prime != 2 {
        return Err(usage("the Milnor expansion is available at p = 2 only; use --apply at odd primes"));
    }
    let q = qts_milnor(t, s, &MilnorConfig::default())?;
    let terms: Vec<String> = q.terms().map(ToString::to_string).collect();
    Ok(Output {
        text: format!("{q}\n"),
        record: Some(record("qts", json!({ "t": t, "s": s, "degree": qts_degree(t, s), "terms": terms }))),
        status: 0,
    })
}

fn runs_json(occupied: &[i64]) -> Value {
    Value::Array(run_length(occupied).into_iter().map(|(a, n)| json!([a, n])).collect())
}

fn describe_runs(occupied: &[i64]) -> String {
    let parts: Vec<String> = run_length(occupied)
        .into_iter()
        .map(|(a, n)| if n == 1 { a.to_string() } else { format!("{a}..{}", a + n as i64 - 1) })
        .collect();
    if parts.is_empty() {
        "none".into()
    } else {
        parts.join(", ")
    }
}

fn gap_text(r: &GapReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "occupied: {}", describe_runs(&r.occupied));
    let gaps: Vec<String> = r.gaps.iter().map(ToString::to_string).collect();
    let _ = writeln!(out, "gaps: {}", if gaps.is_empty() { "none".into() } else { gaps.join(" ") });
    let _ = writeln!(out, "bound: {}{}", r.bound, if r.bound_truncated { " (truncated)" } else { "" });
    out
}

fn gap_json(r: &GapReport) -> Value {
    json!({
        "occupied_runs": runs_json(&r.occupied),
        "gaps": r.gaps.iter().map(|g| json!({ "start": g.start, "length": g.length })).collect::<Vec<_>>(),
        "bound": r.bound,
        "bound_truncated": r.bound_truncated,
    })
}

pub fn gaps(g: &GlobalOpts, path: &Path) -> CmdResult {
    let m = load_module(g, path)?;
    let r = gap_scan(&m)?;
    Ok(Output { text: gap_text(&r), record: Some(record("gaps", gap_json(&r))), status: 0 })
}

fn verdict_text(v: &Verdict) -> String {
    let mut out = gap_text(&v.gaps);
    match &v.outcome {
        Outcome::NotRealizable { certificate: c } => {
            let _ = writeln!(out, "verdict: NotRealizable");
            let _ = writeln!(
                out,
                "certificate: gap {} with threshold {} (base {}, spacing {}, J = {}, delta = {})",
                c.gap, c.threshold, c.base_threshold, c.spacing_threshold, c.j_range, c.delta
            );
            if let Some(cond) = &c.condition {
                let _ = writeln!(out, "Condition {} holds", cond.condition);
            }
        }
        Outcome::Inconclusive { reason } => {
            let _ = writeln!(out, "verdict: Inconclusive ({reason})");
        }
    }
    out
}

pub fn check(g: &GlobalOpts, path: &Path) -> CmdResult {
    let m = load_module(g, path)?;
    let v = module_check(&m)?;
    let (outcome, status) = match &v.outcome {
        Outcome::NotRealizable { certificate } => (
            json!({ "verdict": "NotRealizable", "certificate": certificate }),
            EXIT_NOT_REALIZABLE,
        ),
        Outcome::Inconclusive { reason } => (json!({ "verdict": "Inconclusive", "reason": reason }), 0),
    };
    let mut body = gap_json(&v.gaps);
    if let (Value::Object(b), Value::Object(o)) = (&mut body, outcome) {
        b.extend(o);
    }
    Ok(Output { text: verdict_text(&v), record: Some(record("check", body)), status })
}

pub fn adams(_g: &GlobalOpts, path: &Path) -> CmdResult {
    let table = FiniteModuleTable::from_toml_str(&read(path)?)
        .map_err(|e| Failure { message: format!("{}: {e}", path.display()), status: EXIT_DATA })?;
    let violations = if table.prime() == 2 { adams_check(&table)? } else { adams_check_odd(&table)? };
    let mut text = String::new();
    if violations.is_empty() {
        let _ = writeln!(text, "no violation");
    }
    for v in &violations {
        let top = if table.prime() == 2 {
            format!("Sq^{}", 1u64 << v.k)
        } else {
            format!("P^{}", u64::from(table.prime()).pow(v.k))
        };
        let _ = writeln!(
            text,
            "violation in degree {} at k = {}: {} on {} = {} escapes the lower images",
            v.degree, v.k, top, v.witness, v.image
        );
    }
    let status = if violations.is_empty() { 0 } else { EXIT_ADAMS_VIOLATION };
    Ok(Output {
        text,
        record: Some(record("adams", json!({ "prime": table.prime(), "violations": violations }))),
        status,
    })
}

pub fn verify_suite(g: &GlobalOpts, name: &str) -> CmdResult {
    let names: Vec<&str> = if name == "all" { SUITE_NAMES.to_vec() } else { vec![name] };
    if !names.iter().all(|n| SUITE_NAMES.contains(n)) {
        return Err(usage(format!("unknown suite `{name}`; available: {}, all", SUITE_NAMES.join(", "))));
    }
    let mut text = String::new();
    let mut reports = Vec::new();
    for n in names {
        let r = run_suite(n, g.seed)?;
        let _ = write!(text, "{r}");
        reports.push(r);
    }
    let passed = reports.iter().all(|r| r.passed());
    Ok(Output {
        text,
        record: Some(record("verify-suite", json!({ "seed": g.seed, "passed": passed, "suites": reports }))),
        status: if passed { 0 } else { EXIT_SUITE_FAILED },
    })
}
