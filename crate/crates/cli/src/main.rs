//! `flowpoly`: volumes, Ehrhart polynomials and Kostant partition functions of
//! flow polytopes, plus the verification suites.

use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::Zero;
use serde::Serialize;
use serde_json::{json, Map, Value};

use flowpoly::chambers::{enumerate_big_chambers, ChamberForm, Engine};
use flowpoly::factor::factor_linear;
use flowpoly::identities::{appendix_tables, pitman_check, pitman_stanley};
use flowpoly::kostant::{kostant_count, kostant_ct, kostant_strict};
use flowpoly::morris::{is_degenerate, morris_closed, morris_recurrence, morris_residue_check, MorrisParams};
use flowpoly::poly::{parse_rational, var_names, MultiPoly, Rational};
use flowpoly::residue::{iterated_residue, tres_coefficients, ResidueForm, SBasisVector};
use flowpoly::suites::{run_suite, Check, Suite, SuiteOptions, SuiteResult};
use flowpoly::system::{FlowSystem, Permutation, Weight};
use flowpoly::volume::{coefficient_table, cry_suite, EhrhartForm};

#[derive(Parser)]
#[command(name = "flowpoly", version, about = "Exact volumes and lattice-point counts of flow polytopes")]
struct Cli {
    /// Print the report as one line of JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Also write the JSON report (or CSV for `tables --csv`) to this path.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<std::path::PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Kostant partition function k(a), or k'(a) with --strict.
    Kostant(KostantArgs),
    /// Volume polynomial of a chamber.
    Volume(PolyArgs),
    /// Ehrhart polynomial of a chamber.
    Ehrhart(PolyArgs),
    /// Members of the chamber of a witness, or every chamber of A_r.
    Chambers(ChamberArgs),
    /// Relative volume of the Chan-Robbins-Yuen polytope and its identities.
    Cry(CryArgs),
    /// Morris constants from the recurrences, the closed form or total residues.
    Morris(MorrisArgs),
    /// Pitman-Stanley volume and Ehrhart polynomials.
    Pitman(RankArgs),
    /// Volume and Ehrhart polynomials of every chamber of A_2 or A_3.
    Tables(TablesArgs),
    /// Run verification suites.
    Verify(VerifyArgs),
    /// Total residue of a rational form, or one iterated residue with --order.
    Residue(ResidueArgs),
}

#[derive(Args)]
struct KostantArgs {
    /// `complete:<r>`, `pitman:<r>`, `@file.json` or an inline JSON system.
    #[arg(long)]
    system: String,
    /// a_1,...,a_r; the last coordinate is derived.
    #[arg(long, allow_hyphen_values = true)]
    weight: String,
    /// Count solutions with every coefficient positive.
    #[arg(long)]
    strict: bool,
    #[arg(long, value_enum, default_value_t = Method::Dp)]
    method: Method,
}

#[derive(Args)]
struct PolyArgs {
    #[arg(long)]
    system: String,
    /// `nice` or `witness:a1,...,ar`; defaults to the chamber of --weight, else nice.
    #[arg(long, allow_hyphen_values = true)]
    chamber: Option<String>,
    /// Evaluate at a_1,...,a_r.
    #[arg(long, allow_hyphen_values = true)]
    weight: Option<String>,
    #[arg(long, value_enum, default_value_t = Form::T)]
    form: Form,
    #[arg(long, value_enum, default_value_t = Method::Dp)]
    method: Method,
}

#[derive(Args)]
struct ChamberArgs {
    #[arg(long)]
    rank: usize,
    #[arg(long, allow_hyphen_values = true)]
    witness: Option<String>,
}

#[derive(Args)]
struct CryArgs {
    #[arg(long)]
    n: usize,
}

#[derive(Args)]
struct MorrisArgs {
    #[arg(long)]
    r: usize,
    #[arg(long, default_value_t = 0)]
    l: usize,
    #[arg(long)]
    k1: u32,
    #[arg(long)]
    k2: u32,
    #[arg(long)]
    k3: u32,
    #[arg(long, value_enum, default_value_t = Method::Rec)]
    method: Method,
}

#[derive(Args)]
struct RankArgs {
    #[arg(long)]
    r: usize,
}

#[derive(Args)]
struct TablesArgs {
    #[arg(long)]
    r: usize,
    /// Emit the table as CSV instead of a report.
    #[arg(long)]
    csv: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// A suite name or `all`.
    #[arg(long, default_value = "all")]
    suite: String,
    /// Restrict to one rank (or n for the cry suite).
    #[arg(long)]
    r: Option<usize>,
}

#[derive(Args)]
struct ResidueArgs {
    /// Number of variables x1..xn.
    #[arg(long)]
    nvars: usize,
    /// Numerator, a polynomial in x1..xn.
    #[arg(long, allow_hyphen_values = true)]
    num: String,
    /// Denominator factors such as `x1, x2^2, x1-x2`.
    #[arg(long, allow_hyphen_values = true)]
    den: String,
    /// One-line permutation; residues are taken outermost first.
    #[arg(long)]
    order: Option<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Dp,
    Ct,
    Rec,
    Closed,
    Residue,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Form {
    T,
    S,
}

#[derive(Serialize)]
struct RunReport {
    command: Vec<String>,
    inputs: Value,
    outputs: Value,
    suites: Vec<SuiteResult>,
    passed: bool,
    timing_ms: u128,
}

struct Outcome {
    inputs: Value,
    outputs: Value,
    suites: Vec<SuiteResult>,
    csv: Option<String>,
}

impl Outcome {
    fn new(inputs: Value, outputs: Value) -> Outcome {
        Outcome { inputs, outputs, suites: Vec::new(), csv: None }
    }

    fn checked(mut self, name: &str, checks: Vec<Check>) -> Outcome {
        self.suites.push(SuiteResult { suite: name.to_string(), checks });
        self
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let outcome = match run(&cli.command) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let passed = outcome.suites.iter().all(SuiteResult::passed);
    let report = RunReport {
        command: std::env::args().skip(1).collect(),
        inputs: outcome.inputs,
        outputs: outcome.outputs,
        suites: outcome.suites,
        passed,
        timing_ms: start.elapsed().as_millis(),
    };
    if let Err(e) = emit(&cli, &report, outcome.csv.as_deref()) {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    if passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn emit(cli: &Cli, report: &RunReport, csv: Option<&str>) -> Result<()> {
    let json = serde_json::to_string(report)?;
    if let Some(path) = &cli.out {
        let body = csv.map_or_else(|| json.clone() + "\n", str::to_string);
        std::fs::write(path, body).with_context(|| format!("writing {}", path.display()))?;
    }
    if let Some(csv) = csv {
        print!("{csv}");
    } else if cli.json {
        println!("{json}");
    } else {
        print!("{}", render(report));
    }
    Ok(())
}

fn run(command: &Command) -> Result<Outcome> {
    match command {
        Command::Kostant(a) => kostant(a),
        Command::Volume(a) => polynomial(a, false),
        Command::Ehrhart(a) => polynomial(a, true),
        Command::Chambers(a) => chambers(a),
        Command::Cry(a) => cry(a),
        Command::Morris(a) => morris(a),
        Command::Pitman(a) => pitman(a),
        Command::Tables(a) => tables(a),
        Command::Verify(a) => verify(a),
        Command::Residue(a) => residue(a),
    }
}

fn parse_system(spec: &str) -> Result<FlowSystem> {
    let text = match spec.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).with_context(|| format!("reading {path}"))?,
        None => spec.to_string(),
    };
    Ok(FlowSystem::parse(&text)?)
}

fn parse_weight(list: &str, r: usize) -> Result<Weight> {
    let head: Vec<Rational> = list.split(',').map(|s| parse_rational(s.trim())).collect::<Result<_, _>>()?;
    if head.len() != r {
        bail!("expected {r} weight coordinates, got {}", head.len());
    }
    Ok(Weight::embed(&head))
}

fn parse_chamber(spec: &str, r: usize) -> Result<ChamberForm> {
    if spec == "nice" {
        return Ok(ChamberForm::nice(r));
    }
    match spec.strip_prefix("witness:") {
        Some(list) => Ok(ChamberForm::from_witness(&parse_weight(list, r)?)?),
        None => bail!("chamber must be `nice` or `witness:a1,...,ar`"),
    }
}

fn engine(method: Method) -> Result<Engine> {
    match method {
        Method::Dp => Ok(Engine::Dp),
        Method::Ct => Ok(Engine::Series),
        _ => bail!("this command accepts --method dp or ct"),
    }
}

fn poly_json(p: &MultiPoly) -> Value {
    let names = var_names("a", p.nvars());
    json!({
        "expanded": p.format_with(&names),
        "factored": factor_linear(p).format_with(&names),
        "canonical": p.to_json(&names),
    })
}

fn chamber_json(c: &ChamberForm) -> Value {
    let members: Vec<Value> =
        c.members().iter().map(|(w, s)| json!({ "permutation": w.to_string(), "sign": s })).collect();
    json!({ "form": c.to_string(), "members": members })
}

fn weight_json(a: &Weight) -> Value {
    Value::from(a.coords().iter().map(|x| x.to_string()).collect::<Vec<_>>())
}

fn kostant(args: &KostantArgs) -> Result<Outcome> {
    let system = parse_system(&args.system)?;
    let a = parse_weight(&args.weight, system.rank())?;
    let value = match (args.strict, args.method) {
        (true, Method::Dp) => kostant_strict(&system, &a)?.value,
        (true, _) => bail!("--strict supports only --method dp"),
        (false, Method::Dp) => kostant_count(&system, &a)?.value,
        (false, Method::Ct) => kostant_ct(&system, &a)?.value,
        _ => bail!("kostant accepts --method dp or ct"),
    };
    let inputs = json!({ "system": system.to_json(), "weight": weight_json(&a), "strict": args.strict });
    Ok(Outcome::new(inputs, json!({ "value": value.to_string() })))
}

fn polynomial(args: &PolyArgs, ehrhart: bool) -> Result<Outcome> {
    let system = parse_system(&args.system)?;
    let r = system.rank();
    let weight = args.weight.as_deref().map(|w| parse_weight(w, r)).transpose()?;
    let chamber = match (&args.chamber, &weight) {
        (Some(spec), _) => parse_chamber(spec, r)?,
        (None, Some(a)) => ChamberForm::locate(a)?,
        (None, None) => ChamberForm::nice(r),
    };
    let table = coefficient_table(&system, &chamber, engine(args.method)?)?;
    let form = match args.form {
        Form::T => EhrhartForm::T,
        Form::S => EhrhartForm::S,
    };
    let p = if ehrhart { table.ehrhart_polynomial(form) } else { table.volume_polynomial() };
    let key = if ehrhart { "ehrhart" } else { "volume" };
    let mut outputs = Map::new();
    outputs.insert(key.into(), poly_json(&p));
    let mut checks = Vec::new();
    if let Some(a) = &weight {
        let value = p.eval(a.head());
        outputs.insert("value".into(), Value::from(value.to_string()));
        // the polynomial counts lattice points only on the closure of its own chamber
        if ehrhart && args.chamber.is_none() && a.is_integral() {
            let count = Rational::from_integer(kostant_count(&system, a)?.value.into());
            checks.push(Check::new("k(a) = Kostant count", value == count, format!("{value} vs {count}")));
        }
    }
    let mut inputs = json!({ "system": system.to_json(), "chamber": chamber_json(&chamber) });
    if let Some(a) = &weight {
        inputs["weight"] = weight_json(a);
    }
    if ehrhart {
        inputs["form"] = Value::from(if form == EhrhartForm::T { "t" } else { "s" });
    }
    let out = Outcome::new(inputs, Value::Object(outputs));
    Ok(if checks.is_empty() { out } else { out.checked(key, checks) })
}

fn chambers(args: &ChamberArgs) -> Result<Outcome> {
    let inputs = json!({ "rank": args.rank, "witness": args.witness });
    if let Some(w) = &args.witness {
        let c = ChamberForm::locate(&parse_weight(w, args.rank)?)?;
        return Ok(Outcome::new(inputs, json!({ "chamber": chamber_json(&c) })));
    }
    let e = enumerate_big_chambers(args.rank)?;
    let list: Vec<Value> = e
        .chambers
        .iter()
        .map(|b| {
            let mut v = chamber_json(&b.form);
            v["witness"] = weight_json(b.form.witness());
            v["small_chambers"] = Value::from(b.small.len());
            v
        })
        .collect();
    let outputs = json!({ "small_chambers": e.small_count, "big_chambers": e.chambers.len(), "chambers": list });
    Ok(Outcome::new(inputs, outputs))
}

fn cry(args: &CryArgs) -> Result<Outcome> {
    let rep = cry_suite(args.n)?;
    let cat = Rational::from_integer(rep.catalan_product.clone().into());
    let kv = Rational::from_integer(rep.kostant_value.clone().into());
    let checks = vec![
        Check::new("vol_rel = prod Catalan(i)", rep.relative_volume == cat, format!("{} vs {cat}", rep.relative_volume)),
        Check::new("vol_rel = k(1,...,n-2)", rep.relative_volume == kv, format!("{} vs {kv}", rep.relative_volume)),
        Check::new(
            "binom(n,2) face = 3 vol_rel",
            rep.face_identity,
            format!("face {}", rep.face_relative_volume),
        ),
    ];
    let outputs = json!({
        "vol_rel": rep.relative_volume.to_string(),
        "catalan_product": rep.catalan_product.to_string(),
        "kostant_value": rep.kostant_value.to_string(),
        "face_vol_rel": rep.face_relative_volume.to_string(),
    });
    Ok(Outcome::new(json!({ "n": args.n }), outputs).checked("cry", checks))
}

fn basis_json(v: &SBasisVector) -> Value {
    Value::Object(v.coeffs.iter().filter(|(_, c)| !c.is_zero()).map(|(w, c)| (w.to_string(), c.to_string().into())).collect())
}

fn morris(args: &MorrisArgs) -> Result<Outcome> {
    let p = MorrisParams::new(args.r, args.l, args.k1, args.k2, args.k3)?;
    let inputs = json!({ "r": args.r, "l": args.l, "k1": args.k1, "k2": args.k2, "k3": args.k3 });
    match args.method {
        Method::Rec => Ok(Outcome::new(inputs, json!({ "constant": morris_recurrence(&p)?.to_string() }))),
        Method::Closed => Ok(Outcome::new(inputs, json!({ "constant": morris_closed(&p)?.to_string() }))),
        Method::Residue => {
            let rep = morris_residue_check(&p)?;
            let outputs = json!({
                "constant": rep.constant.to_string(),
                "total_residue": basis_json(&rep.coefficients),
                "expected": basis_json(&rep.expected),
                "degenerate": is_degenerate(&p),
                "in_span": rep.in_span,
            });
            let check = Check::new("total residue = C * basis vector", rep.matches, rep.coefficients.to_string());
            Ok(Outcome::new(inputs, outputs).checked("morris", vec![check]))
        }
        _ => bail!("morris accepts --method rec, closed or residue"),
    }
}

fn pitman(args: &RankArgs) -> Result<Outcome> {
    let ps = pitman_stanley(args.r)?;
    let rep = pitman_check(args.r, 3)?;
    let outputs = json!({
        "index_set_size": ps.indices.len(),
        "volume": poly_json(&ps.volume),
        "ehrhart": poly_json(&ps.ehrhart),
    });
    let checks = vec![
        Check::new("volume = residue volume", rep.volume_matches, ""),
        Check::new("ehrhart (t) = residue ehrhart", rep.ehrhart_t_matches, ""),
        Check::new("ehrhart (s) = residue ehrhart", rep.ehrhart_s_matches, ""),
        Check::new(
            "ehrhart = Kostant count on grid",
            rep.grid_mismatches == 0,
            format!("{} points, {} mismatches", rep.grid_points, rep.grid_mismatches),
        ),
    ];
    Ok(Outcome::new(json!({ "r": args.r }), outputs).checked("pitman", checks))
}

fn tables(args: &TablesArgs) -> Result<Outcome> {
    let mut t = appendix_tables(args.r)?;
    t.rows.sort_by(|x, y| (x.label == "?", &x.label).cmp(&(y.label == "?", &y.label)));
    let names = var_names("a", args.r);
    let rows: Vec<Value> = t
        .rows
        .iter()
        .map(|row| {
            json!({
                "label": row.label,
                "chamber": chamber_json(&row.chamber),
                "volume": poly_json(&row.volume),
                "ehrhart": poly_json(&row.ehrhart),
            })
        })
        .collect();
    let mut checks: Vec<Check> =
        t.rows.iter().map(|row| Check::new(format!("row {}", row.label), row.matches(), row.chamber.to_string())).collect();
    checks.extend(t.missing.iter().map(|m| Check::new(format!("row {m}"), false, "no chamber has this member set")));
    let mut out = Outcome::new(json!({ "r": args.r }), json!({ "rows": rows })).checked("tables", checks);
    if args.csv {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["label", "chamber", "volume", "ehrhart"])?;
        for row in &t.rows {
            w.write_record([
                row.label.as_str(),
                &row.chamber.to_string(),
                &factor_linear(&row.volume).format_with(&names),
                &factor_linear(&row.ehrhart).format_with(&names),
            ])?;
        }
        out.csv = Some(String::from_utf8(w.into_inner()?)?);
    }
    Ok(out)
}

fn verify(args: &VerifyArgs) -> Result<Outcome> {
    let suites: Vec<Suite> = if args.suite == "all" { Suite::ALL.to_vec() } else { vec![args.suite.parse()?] };
    let opts = SuiteOptions { rank: args.r };
    let results: Vec<SuiteResult> = suites.iter().map(|s| run_suite(*s, opts)).collect::<Result<_, _>>()?;
    let summary: Map<String, Value> = results.iter().map(|r| (r.suite.clone(), Value::from(r.passed()))).collect();
    let mut out = Outcome::new(json!({ "suite": args.suite, "r": args.r }), Value::Object(summary));
    out.suites = results;
    Ok(out)
}

fn residue(args: &ResidueArgs) -> Result<Outcome> {
    let form = ResidueForm::parse(args.nvars, &args.num, &args.den)?;
    let inputs = json!({ "nvars": args.nvars, "num": args.num, "den": args.den, "order": args.order });
    let outputs = match &args.order {
        Some(o) => json!({ "value": iterated_residue(&form, &Permutation::parse(o)?)?.to_string() }),
        None => json!({ "total_residue": basis_json(&tres_coefficients(&form)?) }),
    };
    Ok(Outcome::new(inputs, outputs))
}

/// Plain-text view of a report: outputs as indented `key: value` lines, then one line per check.
fn render(report: &RunReport) -> String {
    let mut out = String::new();
    render_value(&report.outputs, 0, &mut out);
    for s in &report.suites {
        for c in &s.checks {
            let status = match (c.passed, c.is_binding()) {
                (true, _) => "PASS",
                (false, true) => "FAIL",
                (false, false) => "FAIL (recorded deviation)",
            };
            out.push_str(&format!("{status} {}: {}", s.suite, c.name));
            if !c.detail.is_empty() {
                out.push_str(&format!(" [{}]", c.detail));
            }
            out.push('\n');
        }
    }
    if !report.suites.is_empty() {
        out.push_str(if report.passed { "passed\n" } else { "FAILED\n" });
    }
    out
}

fn render_value(v: &Value, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                if k == "canonical" {
                    continue;
                }
                match x {
                    Value::Object(_) | Value::Array(_) if !is_flat(x) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render_value(x, depth + 1, out);
                    }
                    _ => out.push_str(&format!("{pad}{k}: {}\n", scalar(x))),
                }
            }
        }
        Value::Array(items) => {
            for (i, x) in items.iter().enumerate() {
                out.push_str(&format!("{pad}[{i}]\n"));
                render_value(x, depth + 1, out);
            }
        }
        _ => out.push_str(&format!("{pad}{}\n", scalar(v))),
    }
}

fn is_flat(v: &Value) -> bool {
    match v {
        Value::Array(items) => items.iter().all(|x| !x.is_object() && !x.is_array()),
        Value::Object(m) => m.is_empty(),
        _ => true,
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(items) => items.iter().map(scalar).collect::<Vec<_>>().join(", "),
        other => other.to_string(),
    }
}
