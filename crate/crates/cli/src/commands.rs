use std::fmt::Write as _;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use num_bigint::BigInt;
use serde_json::{json, Value};

use quatloci::cm::{atkin_lehner_on_orbits, candidate_intersections, cm_element, orbit_labels};
use quatloci::data::{bundle, ingest_dir, sha256_hex};
use quatloci::exact::arith::{kronecker, prime_divisors};
use quatloci::exact::{parse_rational, Field};
use quatloci::loci::{catalog, r_via_enumeration, r_via_formula, stable_group_order, validate_d};
use quatloci::mestre::{obstruction_report, Obstruction};
use quatloci::qforms::reduce_sl;
use quatloci::quatalg::{build_maximal_order, OrderBranch};
use quatloci::siegel::{absolute_invariants, eval_param, s_to_j, square_certificate, STuple};
use quatloci::{BinaryQF, Error, GaussianRational, IntMatrix, ParamCurve, Rational};

/// Output of one subcommand: human text, machine JSON, and whether every
/// check it ran passed.
pub struct Report {
    pub text: String,
    pub json: Value,
    pub ok: bool,
}

impl Report {
    pub fn ok(text: String, json: Value) -> Self {
        Report { text, json, ok: true }
    }
}

/// 2 for bad input, 1 for everything else.
pub fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(
            Error::InvalidDiscriminant(_) | Error::InvalidInput(_) | Error::NotInLocus { .. } | Error::Parse(_),
        ) => 2,
        Some(_) => 1,
        None => 2,
    }
}

fn usage(msg: String) -> anyhow::Error {
    Error::InvalidInput(msg).into()
}

pub fn compact(q: &BinaryQF) -> String {
    format!("[{},{},{}]", q.a, q.b, q.c)
}

pub fn parse_form(s: &str) -> Result<BinaryQF> {
    let parts: Vec<BigInt> = s
        .trim_matches(|c| c == '[' || c == ']')
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<BigInt>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| usage(format!("cannot parse form {s:?}")))?;
    match <[BigInt; 3]>::try_from(parts) {
        Ok([a, b, c]) => Ok(BinaryQF::new(a, b, c)),
        Err(_) => Err(usage(format!("a form needs three coefficients, got {s:?}"))),
    }
}

fn parse_int(s: &str) -> Result<BigInt> {
    s.trim().parse().map_err(|_| usage(format!("cannot parse integer {s:?}")))
}

fn parse_q(s: &str) -> Result<Rational> {
    parse_rational(s).ok_or_else(|| usage(format!("cannot parse rational {s:?}")))
}

fn curve(label: &str) -> Result<ParamCurve> {
    ParamCurve::load(label).map_err(|_| usage(format!("unknown curve label {label}")))
}

fn matrix_json(m: &IntMatrix) -> Value {
    json!(m.to_rows().iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>())
}

fn matrix_text(m: &IntMatrix) -> String {
    m.to_rows()
        .iter()
        .map(|r| format!("  [{}]\n", r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")))
        .collect()
}

pub fn rd(d: u64) -> Result<Report> {
    validate_d(d)?;
    let formula = r_via_formula(d)?;
    let enumeration = r_via_enumeration(d)?;
    let forms: Vec<String> = catalog(d)?.classes.iter().map(|c| compact(&c.form)).collect();
    let text = format!("r_D = {formula} (formula) = {enumeration} (enumeration); {}\n", forms.join(", "));
    Ok(Report {
        text,
        json: json!({"D": d, "formula": formula, "enumeration": enumeration, "forms": forms}),
        ok: formula == enumeration,
    })
}

pub fn forms(d: u64, bound: u64) -> Result<Report> {
    validate_d(d)?;
    let rows = &bundle()?.sq_table;
    let mut text = format!("{:>4} {:>2}  {:<24} {:>6} {:>4} {:>3} {:>2}\n", "D", "k", "form", "p", "s", "|W|", "g");
    let mut out = Vec::new();
    for (k, q) in quatloci::loci::enumerate_sq_classes(d)?.into_iter().enumerate() {
        let ord = build_maximal_order(d, &q, bound)?;
        let w = stable_group_order(&q)?;
        let genus = rows.iter().find(|r| r.d == d && r.binary_form() == q).map(|r| r.genus);
        let g = genus.map_or("-".to_string(), |g| g.to_string());
        let _ = writeln!(text, "{d:>4} {:>2}  {:<24} {:>6} {:>4} {w:>3} {g:>2}", k + 1, q.to_string(), ord.p, ord.s);
        out.push(json!({"k": k + 1, "form": compact(&q), "p": ord.p, "s": ord.s, "W": w, "genus": genus}));
    }
    Ok(Report::ok(text, json!({"D": d, "classes": out})))
}

fn branch_name(b: OrderBranch) -> &'static str {
    match b {
        OrderBranch::Primitive => "primitive",
        OrderBranch::FourTimes => "four_times",
    }
}

pub fn order(d: u64, form: &str, bound: u64) -> Result<Report> {
    let q = parse_form(form)?;
    let ord = build_maximal_order(d, &q, bound)?;
    ord.verify()?;
    let basis: Vec<String> = ord.basis.iter().map(|e| e.to_string()).collect();
    let mut text = format!(
        "B_{d} = {}\nform {q}, branch {}, p = {}, s = {}, t = {}\nbasis:\n",
        ord.algebra,
        branch_name(ord.branch),
        ord.p,
        ord.s,
        ord.t
    );
    for e in &basis {
        let _ = writeln!(text, "  {e}");
    }
    text.push_str("reduced trace Gram:\n");
    let gram = ord.trace_gram();
    text.push_str(&matrix_text(&gram));
    let _ = writeln!(text, "discriminant check passed");
    Ok(Report::ok(
        text,
        json!({
            "D": d, "form": compact(&q), "branch": branch_name(ord.branch), "p": ord.p, "s": ord.s,
            "t": ord.t.to_string(), "algebra": ord.algebra.to_string(), "basis": basis,
            "trace_gram": matrix_json(&gram),
        }),
    ))
}

pub fn cm_gram(d: u64, form: &str, b: [&String; 3], bound: u64) -> Result<Report> {
    let q = parse_form(form)?;
    let ord = build_maximal_order(d, &q, bound)?;
    let b = [parse_int(b[0])?, parse_int(b[1])?, parse_int(b[2])?];
    let beta = cm_element(&ord, &b);
    let nm = ord.algebra.norm(&beta);
    let g = quatloci::cm::cm_gram(&ord, &b[0], &b[1], &b[2])?;
    let det = g.det();
    let text = format!("beta = {beta}\nnorm = {nm}\nGram:\n{}det = {det}\n", matrix_text(&g));
    Ok(Report::ok(
        text,
        json!({"beta": beta.to_string(), "norm": nm.to_string(), "gram": matrix_json(&g), "det": det.to_string()}),
    ))
}

pub fn orbits(d: u64, disc: &str, p: Option<u64>) -> Result<Report> {
    let primes = validate_d(d)?;
    let disc = parse_int(disc)?;
    let p = match p {
        Some(p) => p,
        None => catalog(d)?.classes.first().map(|c| c.order.p).ok_or_else(|| anyhow!("no locus classes"))?,
    };
    let labels = orbit_labels(d, p, &disc);
    let mut divisors: Vec<u64> = primes.clone();
    if primes.len() > 1 {
        divisors.push(d);
    }
    let mut text = format!("D = {d}, p = {p}, d = {disc}: {} orbits mod {}\n", labels.len(), 2 * d);
    let mut rows = Vec::new();
    for l in &labels {
        let images = divisors
            .iter()
            .map(|&m| Ok((m, atkin_lehner_on_orbits(*l, m, d)?.r)))
            .collect::<Result<Vec<_>>>()?;
        let shown: Vec<String> = images.iter().map(|(m, r)| format!("w{m}: {r}")).collect();
        let _ = writeln!(text, "  r = {:>4}   {}", l.r, shown.join("  "));
        rows.push(json!({"r": l.r, "atkin_lehner": images.iter().map(|(m, r)| json!({"m": m, "r": r})).collect::<Vec<_>>()}));
    }
    Ok(Report::ok(text, json!({"D": d, "p": p, "d": disc.to_string(), "modulus": 2 * d, "orbits": rows})))
}

pub fn intersect(label: &str, other: &str, n: Option<u64>, level_filter: bool) -> Result<Report> {
    let (c, o) = (curve(label)?, curve(other)?);
    let (q, qo) = (c.form.clone(), o.form.clone());
    let n = match n {
        Some(n) => BigInt::from(n),
        None => reduce_sl(&qo)?.0.a,
    };
    let level_primes = o.level.map(prime_divisors).unwrap_or_default();
    let filt = |d: &BigInt| level_primes.iter().all(|&l| kronecker(d, &BigInt::from(l)) != -1);
    let filter: Option<&dyn Fn(&BigInt) -> bool> = if level_filter { Some(&filt) } else { None };
    let cands = candidate_intersections(&q, &qo, c.d, o.d, &n, filter)?;
    let mut text = format!("{label} {q} x {other} {qo}, n = {n}\n{:>4}  {:<12} {:>6}  {}\n", "n", "(u, v)", "d", "Gram");
    let mut rows = Vec::new();
    for x in &cands {
        let gram = x.gram.to_rows().iter().map(|r| format!("[{}]", r.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","))).collect::<Vec<_>>().join(" ");
        let _ = writeln!(text, "{n:>4}  {:<12} {:>6}  {gram}", format!("({}, {})", x.u, x.v), x.d);
        rows.push(json!({
            "n": n.to_string(), "u": x.u.to_string(), "v": x.v.to_string(), "d": x.d.to_string(),
            "d0": x.d0.to_string(), "f": x.f.to_string(),
            "admissible_r": x.admissible_r.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
            "gram": matrix_json(&x.gram),
        }));
    }
    Ok(Report::ok(text, json!({"curve": label, "other": other, "n": n.to_string(), "candidates": rows})))
}

fn tuple_text<F: Field + std::fmt::Display>(names: [&str; 4], v: &[F; 4]) -> (String, Value) {
    let text = names.iter().zip(v).map(|(n, x)| format!("{n} = {x}\n")).collect();
    let json = names.iter().zip(v).map(|(n, x)| (n.to_string(), json!(x.to_string()))).collect::<serde_json::Map<_, _>>();
    (text, Value::Object(json))
}

fn eval_report<F: Field + std::fmt::Display>(c: &ParamCurve, j: &F) -> Result<Report> {
    let s: STuple<F> = eval_param(c, j);
    let (mut text, sj) = tuple_text(["s2", "s3", "s5", "s6"], &s.to_array());
    let mut json = json!({"label": c.label, "j": j.to_string(), "s": sj});
    if s.s5.is_zero() {
        text.push_str("s5 = 0: the point lies on H1\n");
        return Ok(Report::ok(text, json));
    }
    let jt = s_to_j(&s)?;
    let (t, jj) = tuple_text(["J2", "J4", "J6", "J10"], &jt.to_array());
    text.push_str(&t);
    let (i1, i2, i3) = absolute_invariants(&s)?;
    let (t, ij) = tuple_text(["i1", "i2", "i3", "J10"], &[i1, i2, i3, jt.j10.clone()]);
    text.extend(t.lines().take(3).map(|l| format!("{l}\n")));
    json["J"] = jj;
    json["i"] = json!([ij["i1"], ij["i2"], ij["i3"]]);
    Ok(Report::ok(text, json))
}

pub fn eval(label: &str, j: &str, im: Option<&str>) -> Result<Report> {
    let c = curve(label)?;
    let re = parse_q(j)?;
    match im {
        None => eval_report(&c, &re),
        Some(im) => eval_report(&c, &GaussianRational::new(re, parse_q(im)?)),
    }
}

pub fn h4(label: &str) -> Result<Report> {
    let c = curve(label)?;
    let r = quatloci::siegel::h4_restrict(&c)?;
    if r.is_zero() {
        return Ok(Report::ok(format!("{label}: H4 restricts to 0\n"), json!({"label": label, "zero": true})));
    }
    let cert = square_certificate(&c)?;
    let (sq, sf) = (cert.square.degree().unwrap_or(0), cert.squarefree.degree().unwrap_or(0));
    let text = format!(
        "{label}: H4 restriction of degree {}\n  = ({}) * S^2 * F\n  S = {}\n  F = {}\n  deg S = {sq}, deg F = {sf}\n",
        r.degree().unwrap_or(0),
        cert.constant,
        cert.square,
        cert.squarefree
    );
    Ok(Report::ok(
        text,
        json!({
            "label": label, "degree": r.degree(), "constant": cert.constant.to_string(),
            "square": cert.square.to_string(), "squarefree": cert.squarefree.to_string(),
            "square_degree": sq, "squarefree_degree": sf,
        }),
    ))
}

pub fn mestre(label: &str, j: &str) -> Result<Report> {
    let ob = Obstruction::load(label).map_err(|_| usage(format!("no obstruction data for {label}")))?;
    let j = parse_q(j)?;
    let r = obstruction_report(&ob, &j)?;
    let ram = &r.ramification;
    let places: Vec<String> = ram
        .finite
        .iter()
        .map(u64::to_string)
        .chain(ram.infinite.then(|| "inf".to_string()))
        .collect();
    let text = format!(
        "{label} at j = {j}: ({}, {})\nramified at {{{}}}\nsplits over Q(i): {}\n",
        r.a,
        r.b,
        places.join(", "),
        if r.splits_over_gaussian { "yes" } else { "no" }
    );
    Ok(Report::ok(
        text,
        json!({
            "label": label, "j": j.to_string(), "a": r.a.to_string(), "b": r.b.to_string(),
            "ramified": places, "splits_over_gaussian": r.splits_over_gaussian,
        }),
    ))
}

pub fn ingest(dir: &Path, out: Option<&Path>) -> Result<Report> {
    if !dir.is_dir() {
        bail!(usage(format!("{} is not a directory", dir.display())));
    }
    let b = ingest_dir(dir)?;
    let js = b.to_json();
    let sha = sha256_hex(&js);
    if let Some(out) = out {
        std::fs::write(out, &js).with_context(|| format!("writing {}", out.display()))?;
    }
    let text = format!(
        "{} Shimura curves, {} modular curves, {} locus rows, {} obstruction rows, {} H4 terms\nsha256 {sha}\n",
        b.shimura.len(),
        b.modular.len(),
        b.sq_table.len(),
        b.mestre.len(),
        b.h4.len()
    );
    Ok(Report::ok(
        text,
        json!({
            "shimura": b.shimura.len(), "modular": b.modular.len(), "locus_rows": b.sq_table.len(),
            "obstructions": b.mestre.len(), "h4_terms": b.h4.len(), "sha256": sha,
        }),
    ))
}
