use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use tsrforge::checks::{run_checks, CheckConfig, Fault, Level};
use tsrforge::config::Guards;
use tsrforge::enumeration::{
    closed_form_count, count_trace_one_primitive_elements, enumerate_family, enumerate_special_primitives,
    enumerate_tsrp_bruteforce, tsrp_upper_bound, CountKind, SpecialForm,
};
use tsrforge::primitivity::{is_primitive_poly, primitive_elements, verify_certificate, CertificateJson};
use tsrforge::search::{search_primitive_tsr, verify_conjecture, ConjectureForm, SearchOptions, DEFAULT_BUDGET};
use tsrforge::tables::{build_poly_table, build_r_table, poly_table_csv, r_table_csv, TableId};
use tsrforge::text::{format_elem, parse_poly};
use tsrforge::tsr::{is_primitive_tsr, tsr_charpoly_direct, tsr_charpoly_formula, tsr_period, TsrSpec};
use tsrforge::{Error, Field};

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser)]
#[command(name = "tsrforge", version, about = "Primitive transformation shift registers over finite fields")]
struct Cli {
    /// Worker threads (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Seed for randomized sweeps.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Emit {
    Text,
    Json,
}

#[derive(Args)]
struct Qmn {
    #[arg(long)]
    q: u64,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    n: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EnumKind {
    /// X^n - mu g(X) over F_(q^m), mu primitive.
    Pqmn,
    /// G(X) + lambda over F_(q^m), -lambda primitive.
    Pmnq,
    /// The members of one family G + lambda (needs --family).
    Family,
    /// Every primitive TSR, by brute force.
    Tsrp,
    /// Primitive elements of F_q.
    Elements,
}

#[derive(Subcommand)]
enum Cmd {
    /// Describe F_q: modulus, generator and primitive-element count.
    Field {
        #[arg(long)]
        q: u64,
        #[arg(long, value_enum, default_value = "text")]
        emit: Emit,
    },
    /// Test a polynomial over F_q for primitivity and print its certificate.
    TestPrimitive {
        #[arg(long)]
        q: u64,
        poly: String,
        #[arg(long, value_enum, default_value = "text")]
        emit: Emit,
    },
    /// Build a primitive TSR by scanning compositions f(g(X)).
    SearchTsr {
        #[command(flatten)]
        qmn: Qmn,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long, value_enum, default_value = "text")]
        emit: Emit,
        /// Scan q >= 3 with even n as well.
        #[arg(long)]
        allow_even_n: bool,
        /// Look for a conjecture witness in the given form instead.
        #[arg(long)]
        conjecture: Option<ConjectureForm>,
    },
    /// List members of a polynomial family, one per line.
    Enumerate {
        #[arg(long, value_enum)]
        kind: EnumKind,
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 1)]
        m: usize,
        #[arg(long, default_value_t = 1)]
        n: usize,
        /// Inner polynomial G over F_q for --kind family.
        #[arg(long)]
        family: Option<String>,
    },
    /// Tally trace-one conjugate classes over F_(2^(2m)) as CSV.
    CountR {
        #[arg(long, default_value_t = 2)]
        from: u32,
        #[arg(long, default_value_t = 10)]
        to: u32,
        /// Extend the range through m = 12.
        #[arg(long)]
        deep: bool,
        /// Append the element-level count of trace-one primitive elements.
        #[arg(long)]
        elements: bool,
    },
    /// Regenerate tables as CSV files.
    Tables {
        /// t1..t5, r_table or all.
        #[arg(default_value = "all")]
        table: String,
        #[arg(long, default_value = "tables")]
        out: PathBuf,
        /// Include m = 11, 12 in r_table.
        #[arg(long)]
        deep: bool,
    },
    /// Run the invariant checks, or re-check a certificate or TSR file.
    Verify {
        #[arg(long, default_value = "quick")]
        level: Level,
        /// Primitivity certificate as written by test-primitive --emit json.
        #[arg(long)]
        certificate: Option<PathBuf>,
        /// TSR as {q, m, n, c, B} JSON.
        #[arg(long)]
        spec: Option<PathBuf>,
        #[arg(long, hide = true)]
        inject_fault: Option<Fault>,
    },
    /// Compare the TSRP upper bound with closed forms and brute force.
    Bound {
        #[command(flatten)]
        qmn: Qmn,
        /// Also count by brute force.
        #[arg(long)]
        brute: bool,
    },
}

struct Failure {
    code: u8,
    msg: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match e {
            Error::BudgetExhausted { .. } => EXIT_BUDGET,
            Error::ExistenceViolation(_) | Error::FiberSizeViolation { .. } => EXIT_FAIL,
            _ => EXIT_USAGE,
        };
        Failure { code, msg: e.to_string() }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Failure {
        Failure { code: EXIT_FAIL, msg: e.to_string() }
    }
}

fn fail(code: u8, msg: impl Into<String>) -> Failure {
    Failure { code, msg: msg.into() }
}

type Out<'a> = &'a mut dyn Write;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global() {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_USAGE);
    }
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match run(&cli, &mut out) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            let _ = out.flush();
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: &Cli, out: Out) -> Result<u8, Failure> {
    let guards = Guards::from_env()?;
    match &cli.cmd {
        Cmd::Field { q, emit } => field(*q, *emit, out),
        Cmd::TestPrimitive { q, poly, emit } => test_primitive(*q, poly, *emit, out),
        Cmd::SearchTsr { qmn, budget, emit, allow_even_n, conjecture } => match conjecture {
            Some(form) => conjecture_cmd(qmn, *form, *budget, out),
            None => search(qmn, *budget, *emit, *allow_even_n, out),
        },
        Cmd::Enumerate { kind, q, m, n, family } => enumerate(*kind, *q, *m, *n, family.as_deref(), &guards, out),
        Cmd::CountR { from, to, deep, elements } => {
            let to = if *deep { (*to).max(12) } else { *to };
            count_r(*from, to, *elements, &guards, out)
        }
        Cmd::Tables { table, out: dir, deep } => tables(table, dir, *deep, &guards, out),
        Cmd::Verify { level, certificate, spec, inject_fault } => {
            if let Some(path) = certificate {
                return verify_cert(path, out);
            }
            if let Some(path) = spec {
                return verify_spec(path, out);
            }
            let cfg = CheckConfig { level: *level, fault: *inject_fault, seed: cli.seed, guards };
            verify(&cfg, out)
        }
        Cmd::Bound { qmn, brute } => bound(qmn, *brute, &guards, out),
    }
}

fn field(q: u64, emit: Emit, out: Out) -> Result<u8, Failure> {
    let f = Field::with_order(q)?;
    let modulus = f.modulus().map(|m| m.to_string());
    let prim = primitive_elements(&f);
    let first = prim.first().map(|&x| format_elem(&f, x)).unwrap_or_default();
    match emit {
        Emit::Json => writeln!(
            out,
            "{}",
            json!({
                "q": q,
                "p": f.characteristic(),
                "k": f.degree(),
                "modulus": modulus,
                "conway": f.uses_conway_modulus(),
                "primitive_elements": prim.len(),
                "first_primitive": first,
            })
        )?,
        Emit::Text => {
            writeln!(out, "F_{q} = F_{}^{}", f.characteristic(), f.degree())?;
            if let Some(m) = modulus {
                let source = if f.uses_conway_modulus() { "Conway" } else { "least primitive" };
                writeln!(out, "modulus: {m} ({source})")?;
            }
            writeln!(out, "primitive elements: {}", prim.len())?;
            writeln!(out, "first primitive: {first}")?;
        }
    }
    Ok(0)
}

fn test_primitive(q: u64, s: &str, emit: Emit, out: Out) -> Result<u8, Failure> {
    let f = Field::with_order(q)?;
    let p = parse_poly(&f, s)?;
    let cert = is_primitive_poly(&p)?;
    match emit {
        Emit::Json => match &cert {
            Some(c) => writeln!(out, "{}", json!({"primitive": true, "certificate": c.to_json()}))?,
            None => writeln!(out, "{}", json!({"primitive": false, "poly": p.to_string()}))?,
        },
        Emit::Text => match &cert {
            Some(c) => {
                writeln!(out, "{p}: primitive")?;
                let j = c.to_json();
                writeln!(out, "group order: {}", j.group_order)?;
                for ((l, e), w) in j.factors.iter().zip(&j.witnesses) {
                    writeln!(out, "  {l}^{e}: X^(N/{l}) = {w}")?;
                }
            }
            None => writeln!(out, "{p}: not primitive")?,
        },
    }
    Ok(if cert.is_some() { 0 } else { EXIT_FAIL })
}

fn search(qmn: &Qmn, budget: u64, emit: Emit, allow_even_n: bool, out: Out) -> Result<u8, Failure> {
    let opts = SearchOptions { budget, allow_even_n };
    let r = search_primitive_tsr(qmn.q, qmn.m, qmn.n, &opts)?;
    match emit {
        Emit::Json => writeln!(out, "{}", r.to_json())?,
        Emit::Text => {
            let p = &r.provenance;
            writeln!(out, "f = {}", p.f)?;
            writeln!(out, "g = {}", p.g)?;
            writeln!(out, "spec: {}", serde_json::to_string(&r.spec.to_json()).unwrap())?;
            writeln!(out, "charpoly: {}", r.charpoly)?;
            writeln!(out, "certificate: {}", serde_json::to_string(&r.certificate.to_json()).unwrap())?;
            writeln!(out, "candidates tried: {}", r.candidates_tried)?;
        }
    }
    Ok(0)
}

fn conjecture_cmd(qmn: &Qmn, form: ConjectureForm, budget: u64, out: Out) -> Result<u8, Failure> {
    let w = verify_conjecture(qmn.q, qmn.m, qmn.n, form, budget)?;
    writeln!(out, "{}", w.to_json())?;
    Ok(if w.found && w.cross_verified { 0 } else { EXIT_FAIL })
}

fn enumerate(
    kind: EnumKind,
    q: u64,
    m: usize,
    n: usize,
    family: Option<&str>,
    guards: &Guards,
    out: Out,
) -> Result<u8, Failure> {
    let lines: Vec<String> = match kind {
        EnumKind::Pqmn | EnumKind::Pmnq => {
            let form = if kind == EnumKind::Pqmn { SpecialForm::Pqmn } else { SpecialForm::Pmnq };
            enumerate_special_primitives(q, m as u32, n, form, guards)?.iter().map(|p| p.to_string()).collect()
        }
        EnumKind::Family => {
            let g = family.ok_or_else(|| fail(EXIT_USAGE, "--kind family needs --family"))?;
            let base = Field::with_order(q)?;
            let ext = Field::with_order(q.pow(m as u32))?;
            let g = parse_poly(&base, g)?;
            enumerate_family(&ext, &g)?.iter().map(|p| p.to_string()).collect()
        }
        EnumKind::Tsrp => enumerate_tsrp_bruteforce(q, m, n, guards)?
            .iter()
            .map(|s| serde_json::to_string(&s.to_json()).unwrap())
            .collect(),
        EnumKind::Elements => {
            let f = Field::with_order(q)?;
            primitive_elements(&f).iter().map(|&x| format_elem(&f, x)).collect()
        }
    };
    for l in &lines {
        writeln!(out, "{l}")?;
    }
    writeln!(out, "count: {}", lines.len())?;
    Ok(0)
}

fn count_r(from: u32, to: u32, elements: bool, guards: &Guards, out: Out) -> Result<u8, Failure> {
    if from == 0 || from > to {
        return Err(fail(EXIT_USAGE, format!("empty range {from}..={to}")));
    }
    let rows = build_r_table(from..=to, guards)?;
    if !elements {
        write!(out, "{}", r_table_csv(&rows))?;
        return Ok(0);
    }
    writeln!(out, "m,r,P2m2,trace_one_elements")?;
    let mut ok = true;
    for r in rows {
        let e = count_trace_one_primitive_elements(r.m, guards)?;
        ok &= e == 2 * r.p2m2;
        writeln!(out, "{},{},{},{}", r.m, r.r, r.p2m2, e)?;
    }
    Ok(if ok { 0 } else { EXIT_FAIL })
}

fn tables(which: &str, dir: &PathBuf, deep: bool, guards: &Guards, out: Out) -> Result<u8, Failure> {
    let ids: Vec<TableId> = if which == "all" { TableId::ALL.to_vec() } else { vec![which.parse()?] };
    fs::create_dir_all(dir)?;
    for id in ids {
        let files = if id == TableId::RTable {
            let top = if deep { 12 } else { 10 };
            let body = r_table_csv(&build_r_table(2..=top, guards)?);
            vec![(format!("{}.csv", id.name()), format!("# {} {}\n{body}", id.name(), id.title()))]
        } else {
            poly_table_csv(&build_poly_table(id, guards)?)
        };
        for (name, body) in files {
            let path = dir.join(&name);
            fs::write(&path, body)?;
            writeln!(out, "wrote {}", path.display())?;
        }
    }
    Ok(0)
}

fn verify(cfg: &CheckConfig, out: Out) -> Result<u8, Failure> {
    let mut first_failure = None;
    let results = run_checks(cfg, |o| {
        let _ = writeln!(out, "{o}");
        let _ = out.flush();
    });
    for o in &results {
        if !o.passed && first_failure.is_none() {
            first_failure = Some(o.name);
        }
    }
    let passed = results.iter().filter(|o| o.passed).count();
    writeln!(out, "{passed}/{} checks passed", results.len())?;
    match first_failure {
        Some(name) => Err(fail(EXIT_FAIL, format!("check {name} failed"))),
        None => Ok(0),
    }
}

fn verify_cert(path: &PathBuf, out: Out) -> Result<u8, Failure> {
    let text = fs::read_to_string(path)?;
    let v: serde_json::Value = serde_json::from_str(&text).map_err(|e| fail(EXIT_USAGE, e.to_string()))?;
    // accept the bare certificate or the test-primitive wrapper
    let inner = v.get("certificate").cloned().unwrap_or(v);
    let c: CertificateJson = serde_json::from_value(inner).map_err(|e| fail(EXIT_USAGE, e.to_string()))?;
    let ok = verify_certificate(&c)?;
    writeln!(out, "{}", json!({"poly": c.poly, "valid": ok}))?;
    Ok(if ok { 0 } else { EXIT_FAIL })
}

fn verify_spec(path: &PathBuf, out: Out) -> Result<u8, Failure> {
    let text = fs::read_to_string(path)?;
    let v: serde_json::Value = serde_json::from_str(&text).map_err(|e| fail(EXIT_USAGE, e.to_string()))?;
    let inner = v.get("spec").cloned().unwrap_or(v);
    let spec = TsrSpec::parse_json(&inner.to_string())?;
    let formula = tsr_charpoly_formula(&spec)?;
    let direct = tsr_charpoly_direct(&spec)?;
    let primitive = is_primitive_tsr(&spec)?;
    let period = tsr_period(&spec).ok();
    writeln!(
        out,
        "{}",
        json!({
            "spec": spec.to_json(),
            "charpoly": formula.to_string(),
            "formula_matches_determinant": formula == direct,
            "primitive": primitive,
            "period": period,
        })
    )?;
    Ok(if formula == direct && primitive { 0 } else { EXIT_FAIL })
}

fn bound(qmn: &Qmn, brute: bool, guards: &Guards, out: Out) -> Result<u8, Failure> {
    let (q, m, n) = (qmn.q, qmn.m as u32, qmn.n as u32);
    let b = tsrp_upper_bound(q, m, n)?;
    let mut o = json!({"q": q, "m": m, "n": n, "upper_bound": b.to_string()});
    for (key, kind) in [("tsr_order1", CountKind::TsrOrder1), ("tsr_m1", CountKind::TsrM1)] {
        if (kind == CountKind::TsrOrder1 && n == 1) || (kind == CountKind::TsrM1 && m == 1) {
            o[key] = json!(closed_form_count(kind, q, m, n)?.to_string());
        }
    }
    let mut code = 0;
    if brute {
        let count = enumerate_tsrp_bruteforce(q, qmn.m, qmn.n, guards)?.len();
        let within = b >= count.into();
        o["brute_force"] = json!(count);
        o["within_bound"] = json!(within);
        if !within {
            code = EXIT_FAIL;
        }
    }
    writeln!(out, "{o}")?;
    Ok(code)
}
