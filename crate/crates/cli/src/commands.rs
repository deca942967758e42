//! Subcommand implementations. Each returns a JSON report, an optional table
//! projection and a status.

use anyhow::Result;
use serde_json::{json, Value};

use shortvar::acceptance;
use shortvar::chars::{build_unit_group, orthogonality_check};
use shortvar::experiments::{limit_table, variance_direct, variance_via_characters, LIMIT_FACTOR};
use shortvar::gf::FieldSpec;
use shortvar::lfunc::{
    census_analysis, classify_with, guard_bound, max_feasible_degree, trace_series, Census, CharRecord, Classification,
    WeightTables,
};
use shortvar::polyring::{factorize, Poly};
use shortvar::reps::{rep_by_name, von_mangoldt, Representation};
use shortvar::{rmt, Error, Exec};

use crate::output::{cell, emit, envelope, provenance, Table};
use crate::{Cli, Command, Route};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass = 0,
    Tolerance = 3,
}

/// Bad command-line input detected after parsing.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn exit_code(e: &anyhow::Error) -> u8 {
    if e.downcast_ref::<UsageError>().is_some() {
        return 1;
    }
    match e.downcast_ref::<Error>() {
        Some(Error::Parse(_)) => 1,
        _ => 2,
    }
}

struct Outcome {
    report: Value,
    table: Option<Table>,
    status: Status,
}

impl Outcome {
    fn pass(report: Value) -> Outcome {
        Outcome { report, table: None, status: Status::Pass }
    }

    fn with_table(mut self, t: Table) -> Outcome {
        self.table = Some(t);
        self
    }

    fn verdict(mut self, ok: bool) -> Outcome {
        self.status = if ok { Status::Pass } else { Status::Tolerance };
        self
    }
}

fn exec(cli: &Cli) -> Exec {
    if cli.global.workers == Some(1) {
        Exec::Sequential
    } else {
        Exec::Parallel
    }
}

fn field(q: &str) -> Result<FieldSpec> {
    Ok(q.parse::<FieldSpec>()?)
}

fn rep(name: &str, q: &str) -> Result<Box<dyn Representation>> {
    Ok(rep_by_name(name, &field(q)?)?)
}

pub fn run(cli: &Cli, argv: &[String]) -> Result<u8> {
    let out = dispatch(cli)?;
    let doc = envelope(out.report, &provenance(cli, argv));
    emit(cli, &doc, out.table.as_ref())?;
    Ok(out.status as u8)
}

fn dispatch(cli: &Cli) -> Result<Outcome> {
    let ex = exec(cli);
    let g = &cli.global;
    match &cli.command {
        Command::FieldInfo { q } => field_info(q),
        Command::Factor { q, poly } => factor(q, poly),
        Command::Lambda { rep: r, q, poly } => {
            let rep = rep(r, q)?;
            let f = Poly::parse(rep.field(), poly)?;
            let v = von_mangoldt(rep.as_ref(), &f)?;
            Ok(Outcome::pass(json!({ "rep": r, "q": rep.field().to_string(), "poly": f.to_text(), "value": v.value })))
        }
        Command::Chars { q, m, all, check } => chars(q, *m, *all, *check),
        Command::Lfunction { rep: r, q, m, character, degrees } => {
            lfunction(r, q, *m, character.as_deref(), *degrees, g.tol_rh, ex)
        }
        Command::DegreeCensus { rep: r, q, m } => {
            let rep = rep(r, q)?;
            let c = Census::from_analysis(&census_analysis(rep.as_ref(), *m, ex, g.tol_rh)?);
            let rows = c.histogram.iter().map(|(s, n)| vec![s.to_string(), n.to_string()]).collect();
            Ok(Outcome::pass(json!(c)).with_table(Table { headers: vec!["S", "count"], rows }))
        }
        Command::Variance { rep: r, q, n, h, route } => variance(r, q, *n, *h, *route, g.tol_id, ex),
        Command::LimitTable { rep: r, n, h, q_list } => limit(cli, r, *n, *h, q_list, ex),
        Command::Rmt { size, power, uniformity } => {
            let m = rmt::trace_moment(*size, *power, g.samples, g.seed, ex)?;
            let mut report = json!(m);
            let mut ok = m.within(4.0);
            report["within_4_stderr"] = json!(ok);
            if *uniformity {
                let u = rmt::eigenphase_uniformity(*size, g.samples, g.seed, ex)?;
                ok &= u.pass;
                report["uniformity"] = json!(u);
            }
            Ok(Outcome::pass(report).verdict(ok))
        }
        Command::IdentitySuite { rep: r } => identity_suite(r.as_deref(), g.tol_id, ex),
        Command::Acceptance => {
            let verdicts = acceptance::run_suite(ex);
            for v in &verdicts {
                eprintln!("{}", v.line());
            }
            let ok = verdicts.iter().all(|v| v.pass);
            let rows = verdicts
                .iter()
                .map(|v| {
                    vec![
                        v.criterion.to_string(),
                        v.title.to_string(),
                        v.pass.to_string(),
                        v.cases.to_string(),
                        v.failures.len().to_string(),
                    ]
                })
                .collect();
            let table = Table { headers: vec!["criterion", "title", "pass", "cases", "failed"], rows };
            Ok(Outcome::pass(json!({ "pass": ok, "criteria": verdicts })).with_table(table).verdict(ok))
        }
    }
}

fn field_info(q: &str) -> Result<Outcome> {
    let f = field(q)?;
    let squares = f.elements().filter(|&a| !a.is_zero() && f.eta_raw(a.value()) == 1).count();
    Ok(Outcome::pass(json!({
        "field": f.to_string(),
        "p": f.p(),
        "k": f.k(),
        "q": f.q(),
        "modulus": f.modulus(),
        "generator": f.generator().value(),
        "nonzero_squares": squares,
    })))
}

fn factor(q: &str, poly: &str) -> Result<Outcome> {
    let f = field(q)?;
    let p = Poly::parse(&f, poly)?;
    let fac = factorize(&p)?;
    let factors: Vec<Value> = fac
        .factors
        .iter()
        .map(|(pl, e)| json!({ "prime": pl.prime().to_text(), "display": pl.prime().to_string(), "degree": pl.degree(), "exponent": e }))
        .collect();
    Ok(Outcome::pass(json!({
        "poly": p.to_text(),
        "display": p.to_string(),
        "unit": fac.unit.value(),
        "factors": factors,
        "prime_power": fac.factors.len() == 1,
    })))
}

fn chars(q: &str, m: u32, all: bool, check: bool) -> Result<Outcome> {
    let f = field(q)?;
    let t = build_unit_group(&f, m)?;
    let list = t.characters(!all, false);
    let even = t.characters(true, false).len();
    let rows: Vec<Vec<String>> = list.iter().map(|c| vec![c.to_string(), c.is_even().to_string()]).collect();
    let mut report = json!({
        "field": f.to_string(),
        "m": m,
        "group_order": t.order(),
        "generator_orders": t.orders(),
        "even_count": even,
        "characters": list.iter().map(|c| json!({ "char": c.to_string(), "even": c.is_even() })).collect::<Vec<_>>(),
    });
    let mut ok = even as u64 == (f.q() as u64).pow(m - 1);
    if check {
        let r = orthogonality_check(&t, acceptance::ORTHOGONALITY_TOL);
        ok &= r.passes(acceptance::ORTHOGONALITY_TOL);
        report["orthogonality"] = json!(r);
    }
    Ok(Outcome::pass(report).with_table(Table { headers: vec!["char", "even"], rows }).verdict(ok))
}

fn lfunction(
    name: &str,
    q: &str,
    m: u32,
    character: Option<&str>,
    degrees: Option<u32>,
    tol_rh: f64,
    ex: Exec,
) -> Result<Outcome> {
    let rep = rep(name, q)?;
    let qv = rep.field().q();
    let d = match degrees {
        Some(d) => d,
        None => guard_bound(rep.dim(), m).min(max_feasible_degree(qv)),
    };
    if d == 0 {
        return Err(UsageError("--degrees must be >= 1".into()).into());
    }
    let tbl = build_unit_group(rep.field(), m)?;
    let chars = match character {
        Some(text) => vec![tbl.parse_character(text)?],
        None => tbl.characters(true, false),
    };
    let tables = WeightTables::build(rep.as_ref(), &tbl, d, ex)?;
    let mut records = Vec::new();
    let mut rows = Vec::new();
    let mut ok = true;
    for chi in &chars {
        let ts = trace_series(&tbl, &tables, chi);
        let ld = classify_with(&ts.b, qv, rep.weight(), m * rep.dim(), tol_rh)?;
        if ld.classification == Classification::Good {
            ok &= ld.purity_deviation.is_some_and(|p| p <= tol_rh);
        }
        let rec = CharRecord::new(chi, &ld);
        rows.push(vec![
            rec.character.clone(),
            rec.classification.to_string(),
            cell(rec.s),
            cell(rec.residuals.purity),
            cell(rec.residuals.root),
        ]);
        let b: Vec<[f64; 2]> = ts.b.iter().map(|z| [z.re, z.im]).collect();
        let mut v = json!(rec);
        v["b"] = json!(b);
        records.push(v);
    }
    let report = json!({ "rep": name, "field": rep.field().to_string(), "m": m, "degrees": d, "characters": records });
    let table = Table { headers: vec!["char", "classification", "S", "purity_deviation", "root_residual"], rows };
    Ok(Outcome::pass(report).with_table(table).verdict(ok))
}

fn variance(name: &str, q: &str, n: u32, h: u32, route: Route, tol_id: f64, ex: Exec) -> Result<Outcome> {
    let rep = rep(name, q)?;
    let r = match route {
        Route::Direct => variance_direct(rep.as_ref(), n, h, ex)?,
        Route::Chars => variance_via_characters(rep.as_ref(), n, h, ex, None)?,
        Route::Both => {
            let d = variance_direct(rep.as_ref(), n, h, ex)?;
            variance_via_characters(rep.as_ref(), n, h, ex, Some(d))?
        }
    };
    let mut ok = r.identity_holds_within(tol_id).unwrap_or(true);
    if let Some(e) = &r.expectation {
        ok &= e.passes();
    }
    let mut report = json!(r);
    report["identity_pass"] = json!(r.identity_holds_within(tol_id));
    Ok(Outcome::pass(report).verdict(ok))
}

fn limit(cli: &Cli, name: &str, n: u32, h: u32, q_list: &str, ex: Exec) -> Result<Outcome> {
    if h + 5 > n {
        return Err(Error::Precondition(format!(
            "limit-table needs n − h >= 5 (equidistribution hypothesis), got n = {n}, h = {h}"
        ))
        .into());
    }
    let reps =
        q_list.split(',').filter(|s| !s.trim().is_empty()).map(|q| rep(name, q.trim())).collect::<Result<Vec<_>>>()?;
    if reps.is_empty() {
        return Err(UsageError("--q-list is empty".into()).into());
    }
    let refs: Vec<&dyn Representation> = reps.iter().map(|r| r.as_ref()).collect();
    let t = limit_table(&refs, n, h, cli.global.samples, cli.global.seed, ex)?;
    // Tolerance: distance at the largest field that has a prediction.
    let check = t.rows.iter().filter(|r| r.predicted.is_some()).max_by_key(|r| r.q).map(|r| {
        let pred = r.predicted.unwrap() as f64;
        json!({ "q": r.q, "distance": r.distance, "band": LIMIT_FACTOR * pred,
                "pass": r.distance.is_some_and(|d| d <= LIMIT_FACTOR * pred) })
    });
    let ok = check.as_ref().map_or(true, |c| c["pass"] == json!(true));
    let rows = t
        .rows
        .iter()
        .map(|r| {
            vec![
                r.q.to_string(),
                r.normalized_variance.to_string(),
                cell(r.good_trace_avg),
                cell(r.predicted),
                cell(r.rmt_mc),
            ]
        })
        .collect();
    let table = Table { headers: vec!["q", "normalized_variance", "good_trace_avg", "predicted", "rmt_mc"], rows };
    let mut report = json!(t);
    report["limit_check"] = check.unwrap_or(Value::Null);
    Ok(Outcome::pass(report).with_table(table).verdict(ok))
}

fn identity_suite(only: Option<&str>, tol_id: f64, ex: Exec) -> Result<Outcome> {
    let mut cases = Vec::new();
    let mut rows = Vec::new();
    let mut ok = true;
    for (name, q, n, h) in acceptance::identity_grid() {
        if only.is_some_and(|r| r != name) {
            continue;
        }
        let rep = rep(name, &q.to_string())?;
        let d = variance_direct(rep.as_ref(), n, h, ex)?;
        let r = variance_via_characters(rep.as_ref(), n, h, ex, Some(d))?;
        let var = r.variance.unwrap_or(f64::NAN);
        let residual = r.identity_residual.unwrap_or(f64::NAN);
        let relative = residual / var.abs().max(1.0);
        let exp_dev = r.expectation.as_ref().map(|e| e.max_relative_deviation);
        let pass_id = r.identity_holds_within(tol_id) == Some(true);
        let pass_exp = r.expectation.as_ref().is_some_and(|e| e.passes());
        ok &= pass_id && pass_exp;
        rows.push(vec![
            name.to_string(),
            q.to_string(),
            n.to_string(),
            h.to_string(),
            var.to_string(),
            cell(r.char_route_variance),
            residual.to_string(),
            relative.to_string(),
            cell(exp_dev),
            pass_id.to_string(),
            pass_exp.to_string(),
        ]);
        cases.push(json!({
            "rep": name, "q": q, "n": n, "h": h,
            "variance": var, "char_route_variance": r.char_route_variance,
            "residual": residual, "relative_residual": relative,
            "expectation_deviation": exp_dev,
            "identity_pass": pass_id, "expectation_pass": pass_exp,
        }));
    }
    let headers = vec![
        "rep",
        "q",
        "n",
        "h",
        "variance",
        "char_route_variance",
        "residual",
        "relative_residual",
        "expectation_deviation",
        "identity_pass",
        "expectation_pass",
    ];
    Ok(Outcome::pass(json!({ "pass": ok, "tol_id": tol_id, "cases": cases }))
        .with_table(Table { headers, rows })
        .verdict(ok))
}
