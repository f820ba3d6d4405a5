use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use anth_core::{
    convergents, euler_trace, exact_sqrt, expand_sqrt, expand_sqrt_rational, expand_surd,
    increment_factors, logos_cross_check, omega_sequence, oracle_expand, pell_from_expansion,
    period_stats, pigeonhole_bound, reflection_of, remainders, render_trace, verify_palindrome,
    Expansion, QuadraticSurd, Rational, StepLimit, SurdLine, TraceStep,
};
use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::input::{parse_input, Input};
use crate::report::{bracket, csv_document, ExpandRecord, PellPair, SweepRecord, CSV_HEADER};
use crate::{Cli, CliError, Command, Format, Outcome};

type CmdResult = Result<Outcome, CliError>;

pub fn dispatch(cli: &Cli, stderr: &mut dyn Write) -> CmdResult {
    let limits = cli.steps.map(StepLimit::steps).unwrap_or_default();
    match &cli.command {
        Command::Expand {
            input,
            pell,
            negative_pell,
        } => expand(
            input,
            *pell || *negative_pell,
            *negative_pell,
            cli.format,
            &limits,
        ),
        Command::Trace { n, golden } => trace(n, golden.as_deref(), cli.format, &limits),
        Command::Sweep { n_max, jobs, pell } => {
            sweep(n_max, *jobs, *pell, cli.format, &limits, stderr)
        }
        Command::Pell { n, negative_pell } => pell(n, *negative_pell, cli.format, &limits),
        Command::Approx { input, count } => approx(input, *count, cli.format, &limits),
        Command::Verify { input } => verify(input, cli.format, &limits),
    }
}

fn integer_arg(raw: &str) -> Result<BigInt, CliError> {
    match parse_input(raw)? {
        Input::Integer(n) => Ok(n),
        other => Err(CliError::Input(format!("{other} is not an integer N"))),
    }
}

fn strings(v: &[BigInt]) -> Vec<String> {
    v.iter().map(BigInt::to_string).collect()
}

fn pair(x: &BigInt, y: &BigInt) -> PellPair {
    PellPair {
        x: x.to_string(),
        y: y.to_string(),
    }
}

fn json_line<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("plain data serialises");
    s.push('\n');
    s
}

fn expand_input(input: &Input, limits: &StepLimit) -> Result<Expansion, CliError> {
    Ok(match input {
        Input::Integer(n) => expand_sqrt(n, limits)?,
        Input::SqrtRatio(r) => expand_sqrt_rational(r, limits)?,
        Input::Surd(s) => expand_surd(s, limits)?,
    })
}

fn expand(
    raw: &str,
    want_pell: bool,
    negative: bool,
    format: Format,
    limits: &StepLimit,
) -> CmdResult {
    let input = parse_input(raw)?;
    let e = expand_input(&input, limits)?;
    let mut record = ExpandRecord {
        input: input.to_string(),
        rational: e.terminated,
        preperiod: strings(&e.preperiod),
        period: strings(&e.period),
        period_len: e.period.len(),
        palindrome: None,
        case: None,
        distinct_logoi: None,
        pell: None,
        negative_pell: None,
    };
    if !e.terminated {
        if e.sqrt_ratio().is_some_and(|r| *r > Rational::one()) {
            let a0 = e.integer_part().expect("irrational expansion").clone();
            let report = verify_palindrome(&e, &a0)?;
            record.palindrome = Some(report.holds);
            record.case = report.case.map(|c| c.to_string());
        }
        record.distinct_logoi = period_stats(&e).ok().map(|s| s.distinct_logoi);
    }
    if want_pell {
        let n = match &input {
            Input::Integer(n) if !e.terminated => n,
            _ => {
                return Err(CliError::Input(
                    "Pell solutions need a non-square integer N".into(),
                ))
            }
        };
        let s = pell_from_expansion(n, &e)?;
        record.pell = Some(pair(&s.x, &s.y));
        if negative {
            record.negative_pell = s.negative.as_ref().map(|(x, y)| pair(x, y));
        }
    }
    Ok(Outcome::ok(match format {
        Format::Plain => record.plain(&e),
        Format::Json => json_line(&record),
        Format::Csv => {
            let n = match &input {
                Input::Integer(n) => n.to_string(),
                other => other.to_string(),
            };
            csv_document(&CSV_HEADER, [record.csv_row(&n)])
        }
    }))
}

#[derive(Serialize, Deserialize)]
struct TraceRow {
    index: usize,
    quotient: String,
    mu: String,
    lambda: String,
    phi: String,
    class: String,
    repeats: Option<usize>,
}

fn trace(raw: &str, golden: Option<&Path>, format: Format, limits: &StepLimit) -> CmdResult {
    let n = integer_arg(raw)?;
    let steps = euler_trace(&n, limits)?;
    let table = render_trace(&n, &steps);
    if let Some(path) = golden {
        let expected = std::fs::read_to_string(path)?;
        if let Some(msg) = first_difference(&expected, &table) {
            return Err(CliError::Golden(format!("{}: {msg}", path.display())));
        }
    }
    Ok(Outcome::ok(match format {
        Format::Plain => table,
        Format::Json => steps.iter().map(|s| json_line(&trace_row(s))).collect(),
        Format::Csv => csv_document(
            &[
                "index", "quotient", "mu", "lambda", "phi", "class", "repeats",
            ],
            steps.iter().map(|s| {
                let r = trace_row(s);
                [
                    r.index.to_string(),
                    r.quotient,
                    r.mu,
                    r.lambda,
                    r.phi,
                    r.class,
                    r.repeats.map(|i| i.to_string()).unwrap_or_default(),
                ]
            }),
        ),
    }))
}

fn trace_row(s: &TraceStep) -> TraceRow {
    TraceRow {
        index: s.index,
        quotient: s.quotient.to_string(),
        mu: s.mu.to_string(),
        lambda: s.lambda.to_string(),
        phi: s.phi.to_string(),
        class: s.class.to_string(),
        repeats: s.repeats,
    }
}

fn first_difference(expected: &str, actual: &str) -> Option<String> {
    if expected == actual {
        return None;
    }
    let mut exp = expected.split('\n');
    let mut act = actual.split('\n');
    for line in 1.. {
        match (exp.next(), act.next()) {
            (Some(a), Some(b)) if a == b => continue,
            (a, b) => {
                return Some(format!(
                    "line {line}: expected {:?}, got {:?}",
                    a.unwrap_or("<end>"),
                    b.unwrap_or("<end>")
                ))
            }
        }
    }
    unreachable!()
}

/// The sweep record of `sqrt(n)`; `Err` carries why `n` fails.
pub fn sweep_record(
    n: &BigInt,
    limits: &StepLimit,
    with_pell: bool,
) -> Result<SweepRecord, anth_core::Error> {
    let e = expand_sqrt(n, limits)?;
    let m = e.integer_part().expect("non-square input").clone();
    let report = verify_palindrome(&e, &m)?;
    let stats = period_stats(&e)?;
    let pell = if with_pell {
        let s = pell_from_expansion(n, &e)?;
        Some(pair(&s.x, &s.y))
    } else {
        None
    };
    Ok(SweepRecord {
        n: n.to_string(),
        m: m.to_string(),
        period_len: stats.period_length,
        palindrome: report.holds,
        case: report.case.map(|c| c.to_string()),
        distinct_logoi: stats.distinct_logoi,
        platonic_number: stats.platonic_number,
        pell,
    })
}

pub struct Sweep {
    pub records: Vec<SweepRecord>,
    /// Every N that failed, with the reason.
    pub failures: Vec<(u64, CliError)>,
}

impl Sweep {
    /// Palindrome failures take precedence over exhausted step limits.
    pub fn exit(&self) -> Result<(), CliError> {
        if self.failures.is_empty() {
            return Ok(());
        }
        let falsified = self
            .failures
            .iter()
            .filter(|(_, e)| !matches!(e, CliError::StepLimit(_)))
            .count();
        if falsified > 0 {
            return Err(CliError::Falsified(format!(
                "{falsified} values of N failed"
            )));
        }
        Err(CliError::StepLimit(match self.failures[0].1 {
            CliError::StepLimit(limit) => limit,
            _ => unreachable!(),
        }))
    }
}

pub fn run_sweep(
    n_max: u64,
    jobs: Option<usize>,
    with_pell: bool,
    limits: &StepLimit,
) -> Result<Sweep, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let results: Vec<(u64, Result<SweepRecord, anth_core::Error>)> = pool.install(|| {
        (1..=n_max)
            .into_par_iter()
            .filter_map(|n| {
                let big = BigInt::from(n);
                if exact_sqrt(&big).is_some() {
                    return None;
                }
                Some((n, sweep_record(&big, limits, with_pell)))
            })
            .collect()
    });
    let mut sweep = Sweep {
        records: Vec::with_capacity(results.len()),
        failures: Vec::new(),
    };
    for (n, r) in results {
        match r {
            Ok(rec) => {
                if !rec.palindrome {
                    sweep
                        .failures
                        .push((n, CliError::Falsified("period is not palindromic".into())));
                }
                sweep.records.push(rec);
            }
            Err(e) => sweep.failures.push((n, e.into())),
        }
    }
    Ok(sweep)
}

fn sweep(
    raw: &str,
    jobs: Option<usize>,
    with_pell: bool,
    format: Format,
    limits: &StepLimit,
    stderr: &mut dyn Write,
) -> CmdResult {
    let n_max = integer_arg(raw)?;
    let n_max = n_max
        .to_u64()
        .filter(|n| *n >= 2)
        .ok_or_else(|| CliError::Input(format!("N_MAX must be between 2 and {}", u64::MAX)))?;
    if jobs == Some(0) {
        return Err(CliError::Usage("--jobs must be at least 1".into()));
    }
    let sweep = run_sweep(n_max, jobs, with_pell, limits)?;
    let body = match format {
        Format::Plain => sweep.records.iter().map(|r| r.plain() + "\n").collect(),
        Format::Json => sweep.records.iter().map(json_line).collect(),
        Format::Csv => csv_document(&CSV_HEADER, sweep.records.iter().map(SweepRecord::csv_row)),
    };
    for (n, why) in &sweep.failures {
        let _ = writeln!(stderr, "N={n}: {why}");
    }
    let _ = writeln!(
        stderr,
        "sweep 1..={n_max}: {} records, {} failures",
        sweep.records.len(),
        sweep.failures.len()
    );
    let exit = sweep.exit();
    Ok(Outcome { body, exit })
}

#[derive(Serialize, Deserialize)]
struct PellReport {
    #[serde(rename = "N")]
    n: String,
    x: String,
    y: String,
    negative: Option<PellPair>,
}

fn pell(raw: &str, negative: bool, format: Format, limits: &StepLimit) -> CmdResult {
    let n = integer_arg(raw)?;
    let e = expand_sqrt(&n, limits)?;
    let s = pell_from_expansion(&n, &e)?;
    let neg = if negative {
        s.negative.as_ref().map(|(x, y)| pair(x, y))
    } else {
        None
    };
    Ok(Outcome::ok(match format {
        Format::Plain => {
            let mut out = format!("x={} y={}\n", s.x, s.y);
            if negative {
                match &neg {
                    Some(p) => {
                        let _ = writeln!(out, "negative: x={} y={}", p.x, p.y);
                    }
                    None => {
                        let _ = writeln!(out, "negative: none (period {} is even)", e.period.len());
                    }
                }
            }
            out
        }
        Format::Json => json_line(&PellReport {
            n: n.to_string(),
            x: s.x.to_string(),
            y: s.y.to_string(),
            negative: neg,
        }),
        Format::Csv => {
            let record = sweep_record(&n, limits, true)?;
            csv_document(&CSV_HEADER, [record.csv_row()])
        }
    }))
}

#[derive(Serialize, Deserialize)]
struct ConvergentRow {
    index: usize,
    p: String,
    q: String,
}

fn approx(raw: &str, count: usize, format: Format, limits: &StepLimit) -> CmdResult {
    if count == 0 {
        return Err(CliError::Usage("COUNT must be at least 1".into()));
    }
    let e = expand_input(&parse_input(raw)?, limits)?;
    let rows: Vec<ConvergentRow> = convergents(&e, count)
        .into_iter()
        .map(|c| ConvergentRow {
            index: c.index,
            p: c.p.to_string(),
            q: c.q.to_string(),
        })
        .collect();
    Ok(Outcome::ok(match format {
        Format::Plain => rows
            .iter()
            .map(|r| format!("{}: {}/{}\n", r.index, r.p, r.q))
            .collect(),
        Format::Json => rows.iter().map(json_line).collect(),
        Format::Csv => csv_document(
            &["index", "p", "q"],
            rows.iter()
                .map(|r| [r.index.to_string(), r.p.clone(), r.q.clone()]),
        ),
    }))
}

#[derive(Serialize, Deserialize)]
struct CheckRow {
    check: String,
    ok: bool,
    detail: String,
}

type Check = Result<String, String>;

fn err_text(e: anth_core::Error) -> String {
    e.to_string()
}

fn check_recurrences(e: &Expansion) -> Check {
    let d = &e.radicand;
    for k in 1..e.states.len() {
        let (cur, next) = (&e.states[k - 1], &e.states[k]);
        if &next.lambda * &cur.lambda != d - &cur.mu * &cur.mu {
            return Err(format!("lambda_{} * lambda_{k} != D - mu_{k}^2", k + 1));
        }
        if &next.mu + &cur.mu != e.quotient(k).expect("periodic") * &next.lambda {
            return Err(format!("mu_{} + mu_{k} != I_{k} * lambda_{}", k + 1, k + 1));
        }
    }
    Ok(format!("{} steps", e.states.len().saturating_sub(1)))
}

fn check_oracle(e: &Expansion, ratio: &Rational) -> Check {
    let count = e.preperiod.len() + 3 * e.period.len();
    let surd = QuadraticSurd::sqrt_rational(ratio).map_err(err_text)?;
    let oracle = oracle_expand(&surd, count);
    let engine: Vec<BigInt> = e.quotients().take(count).cloned().collect();
    match engine.iter().zip(&oracle).position(|(a, b)| a != b) {
        None if engine.len() == oracle.len() => Ok(format!("{count} quotients agree")),
        None => Err("oracle stopped early".into()),
        Some(i) => Err(format!(
            "quotient {i}: engine {} vs oracle {}",
            engine[i], oracle[i]
        )),
    }
}

fn check_trace(n: &BigInt, e: &Expansion, limits: &StepLimit) -> Check {
    let steps = euler_trace(n, limits).map_err(err_text)?;
    let same = steps.len() == e.states.len()
        && steps
            .iter()
            .zip(&e.states)
            .all(|(t, s)| t.mu == s.mu && t.lambda == s.lambda);
    if same {
        Ok(format!("{} rows", steps.len()))
    } else {
        Err("symbolic trace and engine states differ".into())
    }
}

fn check_logos(n: &BigInt, e: &Expansion) -> Check {
    let l = e.period.len();
    let ratio = Rational::from_integer(n.clone());
    let mut rem = vec![SurdLine::beta(&ratio).map_err(err_text)?];
    rem.extend(remainders(n, l + 1).map_err(err_text)?);
    if logos_cross_check(&rem[0], &rem[1], &rem[l], &rem[l + 1]).map_err(err_text)? {
        Ok(format!("beta * e_{} = e_1 * e_{l}", l + 1))
    } else {
        Err(format!("beta : e_1 differs from e_{l} : e_{}", l + 1))
    }
}

fn check_quality(n: &BigInt, e: &Expansion) -> Check {
    let cs = convergents(e, e.states.len() - 1);
    for (k, c) in cs.iter().enumerate() {
        let value = &c.p * &c.p - n * &c.q * &c.q;
        let lambda = &e.states[k + 1].lambda;
        let expected = if k % 2 == 0 {
            -lambda.clone()
        } else {
            lambda.clone()
        };
        if value != expected {
            return Err(format!(
                "p_{k}^2 - N q_{k}^2 = {value}, expected {expected}"
            ));
        }
    }
    Ok(format!("{} convergents", cs.len()))
}

fn verify(raw: &str, format: Format, limits: &StepLimit) -> CmdResult {
    let input = parse_input(raw)?;
    let ratio = input
        .as_sqrt_ratio()
        .ok_or_else(|| CliError::Input("verify takes N or sqrt(P/Q)".into()))?;
    let e = expand_sqrt_rational(&ratio, limits)?;
    if e.terminated {
        return Err(CliError::Input(format!("{input} is rational")));
    }
    let above_one = ratio > Rational::one();
    let mut checks: Vec<(&str, Check)> = Vec::new();

    let bound = pigeonhole_bound(&e.radicand)?;
    let detected = BigInt::from(e.states.len());
    checks.push((
        "expansion",
        if detected <= &bound + 1u32 {
            Ok(format!(
                "{} repeats at step {detected}, bound {bound}",
                bracket(&e)
            ))
        } else {
            Err(format!("repeat at step {detected} beyond bound {bound}"))
        },
    ));
    checks.push(("recurrences", check_recurrences(&e)));
    checks.push(("oracle", check_oracle(&e, &ratio)));
    checks.push((
        "increment_factors",
        increment_factors(&e, &ratio)
            .map(|f| format!("{} factors inside (0, beta)", f.len()))
            .map_err(err_text),
    ));
    checks.push((
        "period_stats",
        period_stats(&e)
            .map(|s| {
                format!(
                    "distinct_logoi={} platonic_number={}",
                    s.distinct_logoi, s.platonic_number
                )
            })
            .map_err(err_text),
    ));
    if above_one {
        let a0 = e.integer_part().expect("irrational").clone();
        checks.push((
            "palindrome",
            match verify_palindrome(&e, &a0) {
                Ok(r) if r.holds => Ok(format!(
                    "{} mirrored pairs, last = 2*{a0}",
                    r.matched_pairs.len()
                )),
                Ok(_) => Err("period is not palindromic".into()),
                Err(e) => Err(e.to_string()),
            },
        ));
        checks.push((
            "omega",
            omega_sequence(&e, &ratio)
                .map(|w| format!("{} mirror factors", w.len()))
                .map_err(err_text),
        ));
        checks.push((
            "reflection",
            reflection_of(&e)
                .map(|(r, pairs)| format!("case {} at k={}, pairs {pairs:?}", r.case, r.k))
                .map_err(err_text),
        ));
    }
    if let Input::Integer(n) = &input {
        checks.push(("euler_trace", check_trace(n, &e, limits)));
        checks.push(("logos", check_logos(n, &e)));
        checks.push(("convergents", check_quality(n, &e)));
        checks.push((
            "pell",
            pell_from_expansion(n, &e)
                .map(|s| format!("x={} y={}", s.x, s.y))
                .map_err(err_text),
        ));
    }

    let rows: Vec<CheckRow> = checks
        .into_iter()
        .map(|(name, r)| {
            let (ok, detail) = match r {
                Ok(d) => (true, d),
                Err(d) => (false, d),
            };
            CheckRow {
                check: name.into(),
                ok,
                detail,
            }
        })
        .collect();
    let failed = rows.iter().filter(|r| !r.ok).count();
    let body = match format {
        Format::Plain => {
            let mut out = String::new();
            for r in &rows {
                let _ = writeln!(
                    out,
                    "{} {}: {}",
                    if r.ok { "ok  " } else { "FAIL" },
                    r.check,
                    r.detail
                );
            }
            let _ = writeln!(
                out,
                "{input}: {} of {} checks passed",
                rows.len() - failed,
                rows.len()
            );
            out
        }
        Format::Json => rows.iter().map(json_line).collect(),
        Format::Csv => csv_document(
            &["check", "ok", "detail"],
            rows.iter()
                .map(|r| [r.check.clone(), r.ok.to_string(), r.detail.clone()]),
        ),
    };
    let exit = if failed == 0 {
        Ok(())
    } else {
        Err(CliError::Falsified(format!("{failed} checks failed")))
    };
    Ok(Outcome { body, exit })
}
