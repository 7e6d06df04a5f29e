//! The four subcommands. Each returns the exit code of a completed run.

use std::collections::BTreeMap;
use std::io::Write;

use fracalc_core::fit::convergence_order;
use fracalc_core::io::{to_csv_string, write_atomic};
use fracalc_core::operators::{gl_derivative, rl_integral};
use fracalc_core::oracle::{reference, OracleCase, Query};
use fracalc_core::sobolev::{
    fourier_seminorm, frac_sobolev_norm, gagliardo_seminorm, poincare_ratio, trace, Poincare, SobolevSpec,
};
use fracalc_core::special::reciprocal_gamma;
use fracalc_core::{apply, lp_norm, Direction, Family, FracSpec, Grid, OperatorResult, SampledFunction};
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{required, Format, NormKind, Op, RunConfig};
use crate::dsl::FunctionSpec;
use crate::error::{CliError, EXIT_IDENTITY_FAILURE, EXIT_PASS};
use crate::suites::{self, case_matches, Entry, Params};

/// Writes `bytes` atomically to the configured output, or to stdout.
fn emit(cfg: &RunConfig, bytes: &[u8]) -> Result<(), CliError> {
    match &cfg.output {
        Some(path) => {
            write_atomic(path, bytes).map_err(|e| CliError::config(format!("cannot write {}: {e}", path.display())))
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes).and_then(|_| out.flush()).map_err(|e| CliError::config(format!("stdout: {e}")))
        }
    }
}

fn json_bytes(v: &impl Serialize) -> Result<Vec<u8>, CliError> {
    let mut bytes = serde_json::to_vec_pretty(v).map_err(|e| CliError::config(format!("serialization: {e}")))?;
    bytes.push(b'\n');
    Ok(bytes)
}

fn csv_bytes(header: &[&str], rows: &[Vec<String>]) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| CliError::config(format!("csv: {e}"));
    w.write_record(header).map_err(err)?;
    for r in rows {
        w.write_record(r).map_err(err)?;
    }
    w.into_inner().map_err(|e| CliError::config(format!("csv: {e}")))
}

fn function(cfg: &RunConfig) -> Result<SampledFunction, CliError> {
    let grid = cfg.domain()?.grid(cfg.n()?)?;
    Ok(FunctionSpec::parse(required(&cfg.f, "f")?)?.sample(grid))
}

fn operator(f: &SampledFunction, op: Op, alpha: f64, dir: Direction) -> Result<OperatorResult, CliError> {
    let family = |family| FracSpec::new(alpha, dir, family).and_then(|spec| apply(f, &spec));
    Ok(match op {
        Op::RlInt => rl_integral(f, alpha, dir)?,
        Op::Gl => gl_derivative(f, alpha, dir)?,
        Op::RlDeriv => family(Family::RiemannLiouville)?,
        Op::Caputo => family(Family::Caputo)?,
        Op::Fourier => family(Family::Fourier)?,
        Op::WeakCaputo => family(Family::WeakCaputo)?,
    })
}

pub fn compute(cfg: &RunConfig) -> Result<i32, CliError> {
    let f = function(cfg)?;
    let op = *required(&cfg.op, "op")?;
    let result = operator(&f, op, cfg.alpha(), cfg.direction())?;
    let bytes = match cfg.format() {
        Format::Csv => to_csv_string(&result.output)?.into_bytes(),
        Format::Json => json_bytes(&result)?,
    };
    emit(cfg, &bytes)?;
    Ok(EXIT_PASS)
}

#[derive(Serialize)]
struct Summary {
    total: usize,
    passed: usize,
    failed: usize,
}

#[derive(Serialize)]
struct VerifyReport<'a> {
    config: &'a RunConfig,
    summary: Summary,
    entries: &'a [Entry],
}

fn num(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn verify(cfg: &RunConfig) -> Result<i32, CliError> {
    let suite = *required(&cfg.suite, "suite")?;
    let params = Params { alpha: cfg.alpha(), n: cfg.n()?, seed: cfg.seed(), battery: cfg.battery()? };
    let mut checks = suites::checks(suite, params);
    if let Some(filter) = &cfg.case {
        let available: Vec<String> = checks.iter().map(|c| c.case.clone()).collect();
        checks.retain(|c| case_matches(&c.case, filter));
        if checks.is_empty() {
            let mut names = available;
            names.dedup();
            return Err(CliError::config(format!("no case '{filter}'; available: {}", names.join(", "))));
        }
    }
    let entries = suites::run_all(&checks, &cfg.tolerances.clone().unwrap_or_default());
    let passed = entries.iter().filter(|e| e.pass).count();
    let summary = Summary { total: entries.len(), passed, failed: entries.len() - passed };
    let bytes = match cfg.format() {
        Format::Json => json_bytes(&VerifyReport { config: cfg, summary, entries: &entries })?,
        Format::Csv => {
            let rows: Vec<Vec<String>> = entries
                .iter()
                .map(|e| {
                    vec![
                        serde_json::to_value(e.suite)
                            .ok()
                            .and_then(|v| v.as_str().map(String::from))
                            .unwrap_or_default(),
                        e.case.clone(),
                        e.identity.clone(),
                        e.alpha.to_string(),
                        e.direction.unwrap_or("").to_string(),
                        num(e.residual),
                        num(e.tolerance),
                        match e.criterion {
                            suites::Criterion::AtMost => "at_most".into(),
                            suites::Criterion::Exceeds => "exceeds".into(),
                        },
                        e.pass.to_string(),
                        e.error.as_ref().map(|x| format!("{}: {}", x.code, x.message)).unwrap_or_default(),
                    ]
                })
                .collect();
            let header = [
                "suite",
                "case",
                "identity",
                "alpha",
                "direction",
                "residual",
                "tolerance",
                "criterion",
                "pass",
                "error",
            ];
            csv_bytes(&header, &rows)?
        }
    };
    emit(cfg, &bytes)?;
    for e in entries.iter().filter(|e| !e.pass) {
        let why = match &e.error {
            Some(x) => format!("{}: {}", x.code, x.message),
            None => format!("residual {} vs tolerance {}", num(e.residual), num(e.tolerance)),
        };
        eprintln!("FAIL {} {} {} {}: {why}", suite_name(e), e.case, e.identity, e.direction.unwrap_or("-"));
    }
    eprintln!("{passed} of {} identities pass", entries.len());
    Ok(if passed == entries.len() { EXIT_PASS } else { EXIT_IDENTITY_FAILURE })
}

fn suite_name(e: &Entry) -> String {
    serde_json::to_value(e.suite).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default()
}

/// Oracle case of a convergence study on `(a, b)`.
fn oracle_case(spec: &str, a: f64, b: f64) -> Result<OracleCase, CliError> {
    let (name, args) =
        spec.split_once(':').ok_or_else(|| CliError::config(format!("case '{spec}' must look like name:arguments")))?;
    let nums: Vec<f64> = args
        .split(',')
        .map(|s| s.trim().parse::<f64>().ok().filter(|v| v.is_finite()))
        .collect::<Option<_>>()
        .ok_or_else(|| CliError::config(format!("case '{spec}' has a malformed number")))?;
    Ok(match (name, nums.as_slice()) {
        ("power", &[mu]) => OracleCase::PowerLaw { mu, a, b },
        ("constant", &[c]) => OracleCase::Constant { c, a, b },
        ("kernel", &[alpha]) => OracleCase::KernelFunction { alpha, a, b },
        ("step", &[lambda, mu]) => OracleCase::StepFunction { lambda, mu },
        _ => {
            return Err(CliError::config(format!(
                "unknown oracle case '{spec}'; expected power:μ, constant:c, kernel:β or step:λ,μ"
            )))
        }
    })
}

/// Exact left-sided result of `op` applied to `case` at `x`.
fn exact(case: &OracleCase, op: Op, alpha: f64, x: f64) -> Result<Option<f64>, CliError> {
    let query = match op {
        Op::RlInt => Query::RLIntegral,
        _ => Query::RLDerivative,
    };
    let Some(rl) = reference(case, query, x, alpha)?.value() else {
        return Ok(None);
    };
    if matches!(op, Op::Caputo | Op::WeakCaputo) {
        let (a, _) = case.domain();
        let fa = case.value(a);
        if !fa.is_finite() {
            return Ok(None);
        }
        return Ok(Some(match *case {
            OracleCase::Constant { .. } | OracleCase::PowerLaw { mu: 0.0, .. } => 0.0,
            _ if fa == 0.0 => rl,
            _ => rl - fa * (x - a).powf(-alpha) * reciprocal_gamma(1.0 - alpha),
        }));
    }
    Ok(Some(rl))
}

/// Errors at or below this are roundoff: the scheme is exact on the case.
pub const EXACT_FLOOR: f64 = 1e-12;

/// `max |numeric − exact| / max |exact|` over `x ≥ a + 0.05(b − a)` in the
/// oriented coordinate, also skipping `|x| < 0.05(b − a)` around the jump of
/// a step; the plain maximum when the exact result vanishes.
fn study_error(case: &OracleCase, op: Op, alpha: f64, dir: Direction, n: usize) -> Result<f64, CliError> {
    let (a, b) = case.domain();
    let grid = Grid::finite(a, b, n)?;
    let orient = |x: f64| match dir {
        Direction::Left => x,
        Direction::Right => a + b - x,
    };
    let f = SampledFunction::from_fn(grid, |x| case.value(orient(x)));
    let out = operator(&f, op, alpha, dir)?.output;
    let cut = a + 0.05 * (b - a);
    let (mut diff, mut scale) = (0.0f64, 0.0f64);
    for (i, v) in out.defined() {
        let y = orient(grid.node(i));
        let near_jump = matches!(case, OracleCase::StepFunction { .. }) && y.abs() < 0.05 * (b - a);
        if y < cut || near_jump {
            continue;
        }
        let e = exact(case, op, alpha, y)?.ok_or_else(|| {
            CliError::config(format!("the {} oracle has no closed form for this operator and order", case.name()))
        })?;
        diff = diff.max((v - e).abs());
        scale = scale.max(e.abs());
    }
    Ok(if scale > 0.0 { diff / scale } else { diff })
}

fn order_label(prev: Option<(usize, f64)>, n: usize, err: f64) -> Value {
    match prev {
        None => Value::Null,
        Some((_, e0)) if e0 <= EXACT_FLOOR || err <= EXACT_FLOOR => json!("exact"),
        Some((n0, e0)) => json!((e0 / err).ln() / (n as f64 / n0 as f64).ln()),
    }
}

pub fn convergence(cfg: &RunConfig) -> Result<i32, CliError> {
    let op = *required(&cfg.op, "op")?;
    if op == Op::Fourier {
        return Err(CliError::config("the Fourier operator has no oracle on a finite interval"));
    }
    let domain = cfg.domain()?;
    let case = oracle_case(required(&cfg.case, "case")?, domain.a, domain.b)?;
    let (alpha, dir) = (cfg.alpha(), cfg.direction());
    let ladder = cfg.ladder()?;
    let errors = ladder.iter().map(|&n| study_error(&case, op, alpha, dir, n)).collect::<Result<Vec<f64>, _>>()?;
    let mut rows = Vec::new();
    let mut prev = None;
    for (&n, &err) in ladder.iter().zip(&errors) {
        rows.push((n, err, order_label(prev, n, err)));
        prev = Some((n, err));
    }
    let all_exact = errors.iter().all(|&e| e <= EXACT_FLOOR);
    let fitted = if all_exact {
        json!("exact")
    } else {
        let hs: Vec<f64> = ladder.iter().map(|&n| 1.0 / n as f64).collect();
        convergence_order(&hs, &errors).map_or(Value::Null, |o| json!(o))
    };
    let bytes = match cfg.format() {
        Format::Csv => {
            let text = |v: &Value| match v {
                Value::Null => String::new(),
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            let table: Vec<Vec<String>> = rows
                .iter()
                .map(|(n, e, o)| vec![n.to_string(), (1.0 / *n as f64).to_string(), e.to_string(), text(o)])
                .collect();
            csv_bytes(&["n", "h", "error", "order"], &table)?
        }
        Format::Json => {
            let table: Vec<Value> =
                rows.iter().map(|(n, e, o)| json!({"n": n, "h": 1.0 / *n as f64, "error": e, "order": o})).collect();
            json_bytes(&json!({"config": cfg, "case": case, "rows": table, "fitted_order": fitted}))?
        }
    };
    emit(cfg, &bytes)?;
    match (&fitted, cfg.min_order) {
        (Value::Number(o), Some(min)) if o.as_f64().is_some_and(|o| o < min) => {
            eprintln!("fitted order {o} is below the required {min}");
            Ok(EXIT_IDENTITY_FAILURE)
        }
        (Value::Null, Some(_)) => {
            eprintln!("fitted order is undefined");
            Ok(EXIT_IDENTITY_FAILURE)
        }
        _ => Ok(EXIT_PASS),
    }
}

pub fn norm(cfg: &RunConfig) -> Result<i32, CliError> {
    let u = function(cfg)?;
    let kind = *required(&cfg.kind, "kind")?;
    let (alpha, p) = (cfg.alpha(), cfg.p());
    let mut values = BTreeMap::new();
    match kind {
        NormKind::Lp => {
            values.insert("norm", lp_norm(&u, p)?);
        }
        NormKind::Sobolev => {
            values.insert("norm", frac_sobolev_norm(&u, &SobolevSpec::new(alpha, p, cfg.side())?)?);
        }
        NormKind::Gagliardo => {
            values.insert("seminorm", gagliardo_seminorm(&u, alpha, p)?);
        }
        NormKind::Fourier => {
            values.insert("seminorm", fourier_seminorm(&u, alpha)?);
        }
        NormKind::Trace => {
            let t = trace(&u, &SobolevSpec::new(alpha, p, cfg.side())?)?;
            values.insert("trace", t.value);
            values.insert("ratio", t.ratio);
        }
        NormKind::Poincare => match poincare_ratio(&u, alpha, p, cfg.direction())? {
            Poincare::Ratio(r) => {
                values.insert("ratio", r);
            }
            Poincare::KernelElement { numerator } => {
                values.insert("kernel_numerator", numerator);
            }
        },
    }
    let bytes = match cfg.format() {
        Format::Csv => {
            let rows: Vec<Vec<String>> = values.iter().map(|(k, v)| vec![k.to_string(), v.to_string()]).collect();
            csv_bytes(&["quantity", "value"], &rows)?
        }
        Format::Json => json_bytes(&json!({"config": cfg, "kind": kind, "values": values}))?,
    };
    emit(cfg, &bytes)?;
    Ok(EXIT_PASS)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oracle_cases_parse() {
        assert_eq!(oracle_case("power:2", 0.0, 1.0).unwrap(), OracleCase::PowerLaw { mu: 2.0, a: 0.0, b: 1.0 });
        assert_eq!(oracle_case("step:0,1", 0.0, 1.0).unwrap(), OracleCase::StepFunction { lambda: 0.0, mu: 1.0 });
        assert!(oracle_case("gaussian:1", 0.0, 1.0).is_err());
        assert!(oracle_case("power:1,2", 0.0, 1.0).is_err());
    }

    #[test]
    fn caputo_reference_drops_boundary_term() {
        let c = OracleCase::Constant { c: 2.0, a: 0.0, b: 1.0 };
        assert!(exact(&c, Op::Caputo, 0.5, 0.3).unwrap().unwrap().abs() < 1e-15);
    }

    #[test]
    fn order_labels() {
        assert_eq!(order_label(None, 8, 1.0), Value::Null);
        assert_eq!(order_label(Some((4, 0.0)), 8, 0.0), json!("exact"));
        assert_eq!(order_label(Some((4, 4.0)), 8, 1.0), json!(2.0));
        assert_eq!(order_label(Some((4, 1e-3)), 8, 1e-14), json!("exact"));
    }
}
