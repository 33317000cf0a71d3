use clap::{Args, Parser, Subcommand, ValueEnum};
use pslpoly::analyze::{self, SearchMode};
use pslpoly::families::{self, Family, FamilySpec};
use pslpoly::numtheory;
use pslpoly::psl2::{self, cycle_type_label, Action, Flavor, PermAction, Psl2};
use pslpoly::ramify::{self, RhCase, Which};
use pslpoly::verify::{self, Scope};
use pslpoly::{Error, Field, Poly};
use serde_json::{json, Value};
use std::io::Write;
use std::process::ExitCode;

const SCHEMA: u32 = 1;

#[derive(Parser)]
#[command(name = "pslpoly", version, about = "Exceptional polynomials with PSL(2,q) monodromy")]
struct Cli {
    /// Seed for sampled statistics.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Maximum number of evaluations per step.
    #[arg(long, global = true, default_value_t = analyze::DEFAULT_BUDGET, value_parser = clap::value_parser!(u64).range(1..))]
    budget: u64,
    /// Worker threads (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    #[arg(long, global = true, value_enum, default_value_t = Output::Text)]
    output: Output,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Build a member of one of the polynomial families.
    Family(FamilyArgs),
    /// Run analyses on a polynomial.
    Check(CheckArgs),
    /// Group-theoretic tables for PSL(2,q) <= PGL(2,q) <= PΓL(2,q).
    Group(GroupArgs),
    /// Artin-Schreier ramification tools.
    Ramify {
        #[command(subcommand)]
        command: RamifyCommand,
    },
    /// Reproduce every published count, identity and example.
    VerifyPaper {
        #[arg(long, default_value = "all")]
        scope: String,
    },
}

#[derive(Args)]
struct FamilyArgs {
    /// Optional action word; `build` is the only action.
    #[arg(value_parser = ["build"])]
    action: Option<String>,
    #[arg(long)]
    tag: String,
    #[arg(long)]
    q: Option<u64>,
    #[arg(long)]
    m: Option<u64>,
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    d: Option<u64>,
    #[arg(long)]
    s: Option<u64>,
    #[arg(long)]
    index: Option<usize>,
    #[arg(long)]
    alpha: Option<String>,
    #[arg(long)]
    beta: Option<String>,
    /// Comma-separated coefficients for additive and subadditive polynomials.
    #[arg(long)]
    coeffs: Option<String>,
    /// Field of definition, `GF(p^e|modulus)`.
    #[arg(long)]
    field: Option<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CheckKind {
    Perm,
    Exceptional,
    Decompose,
    Stats,
}

#[derive(Args)]
struct CheckArgs {
    /// Polynomial `GF(p^e|modulus){ ... }`.
    #[arg(long, conflicts_with = "file")]
    poly: Option<String>,
    /// File containing the polynomial.
    #[arg(long)]
    file: Option<String>,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "perm")]
    checks: Vec<CheckKind>,
    /// Largest extension degree for bijectivity tests.
    #[arg(long, default_value_t = 4)]
    k: u32,
    /// Exceptionality hypothesis; defaults to the best fit.
    #[arg(long)]
    m: Option<u64>,
    /// Inner degrees for the decomposition search; defaults to all proper divisors.
    #[arg(long, value_delimiter = ',')]
    inner: Vec<usize>,
    /// Degree of the extension used for decomposition and statistics.
    #[arg(long, default_value_t = 1)]
    ext: u32,
    #[arg(long, value_enum, default_value_t = Mode::Pruned)]
    mode: Mode,
    /// Number of sampled values (exhaustive when omitted).
    #[arg(long)]
    samples: Option<u64>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Pruned,
    Exhaustive,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GroupReport {
    FixedPoints,
    Census,
    Cycles,
}

#[derive(Args)]
struct GroupArgs {
    #[arg(long)]
    q: u64,
    #[arg(long, value_enum, default_value_t = GroupReport::FixedPoints)]
    report: GroupReport,
    /// psl, pgl or pgammal.
    #[arg(long, default_value = "pgammal")]
    flavor: String,
}

#[derive(Subcommand)]
enum RamifyCommand {
    /// Ramification of v^q - v = w^n over k(w^r).
    Profile {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 1)]
        r: u64,
    },
    /// Riemann-Hurwitz check of a branch configuration.
    Rh {
        #[arg(long)]
        q: u64,
        #[arg(long, default_value = "psl")]
        flavor: String,
        /// one-finite, no-finite, wild-order-two or two-finite.
        #[arg(long)]
        case: String,
        #[arg(long)]
        n: u64,
    },
    /// Criterion (*) and its brute-force definition.
    Star {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        r: u64,
    },
    /// A second extension with the same ramification data.
    Counterexample {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        e: u32,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        r: u64,
        /// i or ii.
        #[arg(long)]
        which: String,
        /// Degree of k over F_q.
        #[arg(long, default_value_t = 1)]
        ext: u32,
    },
    /// Criterion (*) for all prime powers up to qmax.
    Sweep {
        #[arg(long, default_value_t = 200)]
        qmax: u64,
    },
}

/// Failure with its exit code.
enum Failure {
    Usage(String),
    Assertion(String),
    Budget(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::BudgetExceeded(_) => Failure::Budget(e.to_string()),
            Error::IdentityFailed(_) | Error::MultipleJumps(_) => Failure::Assertion(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type Res<T> = Result<T, Failure>;

/// What a command produced: a JSON report, optional text and CSV renderings, and
/// whether every assertion held.
struct Report {
    json: Value,
    text: String,
    csv: Option<String>,
    ok: bool,
    budget_exceeded: bool,
}

impl Report {
    fn new(json: Value, text: String) -> Report {
        Report { json, text, csv: None, ok: true, budget_exceeded: false }
    }
}

fn usage<T>(msg: impl Into<String>) -> Res<T> {
    Err(Failure::Usage(msg.into()))
}

fn need<T>(v: Option<T>, flag: &str, tag: &str) -> Res<T> {
    v.ok_or_else(|| Failure::Usage(format!("--{flag} is required for --tag {tag}")))
}

fn prime_field_of(q: u64) -> Res<Field> {
    let (p, _) = numtheory::prime_power(q).ok_or_else(|| Failure::Usage(format!("q = {q} is not a prime power")))?;
    Ok(Field::make(p, 1)?)
}

fn family_spec(a: &FamilyArgs) -> Res<FamilySpec> {
    let tag = a.tag.as_str();
    let given = a.field.as_deref().map(Field::parse).transpose()?;
    let default_field = |p: u64| -> Res<Field> { Ok(match &given { Some(f) => f.clone(), None => Field::make(p, 1)? }) };
    let field = match tag {
        "gen-odd" => match &given {
            Some(f) => f.clone(),
            None => prime_field_of(need(a.q, "q", tag)?)?,
        },
        "gen-even" | "char2" | "char2-footnote" => default_field(2)?,
        "char3" => default_field(3)?,
        "ind7" => default_field(7)?,
        "ind11" => default_field(11)?,
        "table-b" => match &given {
            Some(f) => f.clone(),
            None => Field::make(families::table_b_q(need(a.index, "index", tag)?)?, 1)?,
        },
        "dickson" | "additive" | "subadditive" => need(given.clone(), "field", tag)?,
        _ => {
            return usage(format!(
                "unknown tag '{tag}' (gen-odd, gen-even, char3, char2, char2-footnote, ind7, ind11, table-b, dickson, additive, subadditive)"
            ))
        }
    };
    let elem = |s: &Option<String>, flag: &str| -> Res<pslpoly::Fe> { Ok(field.parse_elem(&need(s.clone(), flag, tag)?)?) };
    let coeffs = || -> Res<Vec<pslpoly::Fe>> {
        let list = need(a.coeffs.clone(), "coeffs", tag)?;
        list.split(',').map(|c| Ok(field.parse_elem(c.trim())?)).collect()
    };
    let family = match tag {
        "gen-odd" => Family::GenOdd { q: need(a.q, "q", tag)?, m: need(a.m, "m", tag)? },
        "gen-even" => Family::GenEven { q: need(a.q, "q", tag)?, m: need(a.m, "m", tag)? },
        "char3" => Family::Char3 { q: need(a.q, "q", tag)?, n: need(a.n, "n", tag)?, alpha: elem(&a.alpha, "alpha")? },
        "char2" => Family::Char2 { q: need(a.q, "q", tag)?, n: need(a.n, "n", tag)?, alpha: elem(&a.alpha, "alpha")? },
        "char2-footnote" => Family::Char2Footnote {
            q: need(a.q, "q", tag)?,
            alpha: elem(&a.alpha, "alpha")?,
            beta: if a.beta.is_some() { elem(&a.beta, "beta")? } else { field.zero() },
        },
        "ind7" => Family::Ind7 { n: a.n.unwrap_or(1), alpha: elem(&a.alpha, "alpha")? },
        "ind11" => Family::Ind11 { n: a.n.unwrap_or(1), alpha: elem(&a.alpha, "alpha")? },
        "table-b" => Family::TableB { index: need(a.index, "index", tag)? },
        "dickson" => Family::Dickson { d: need(a.d, "d", tag)?, alpha: elem(&a.alpha, "alpha")? },
        "additive" => Family::Additive { coeffs: coeffs()? },
        _ => Family::Subadditive { coeffs: coeffs()?, s: need(a.s, "s", tag)? },
    };
    Ok(FamilySpec::new(family, &field))
}

fn cmd_family(a: &FamilyArgs) -> Res<Report> {
    let spec = family_spec(a)?;
    if let Family::TableB { index } = spec.family {
        families::table_b_indices(families::table_b_q(index)?)?;
    }
    let built = families::construct(&spec)?;
    let galois = families::galois_closure_data(&spec).ok();
    let sidecar = json!({
        "degree": built.poly.deg(),
        "boundary_case": built.boundary_case,
        "predicted_group": galois.map(|g| g.geometric_group.to_string()),
        "predicted_genus": galois.map(|g| g.genus),
    });
    let text = format!("{}\n{}", built.poly, sidecar);
    let mut json = json!({ "command": "family", "tag": a.tag, "polynomial": built.poly.to_string() });
    merge(&mut json, sidecar);
    Ok(Report::new(json, text))
}

fn merge(into: &mut Value, from: Value) {
    if let (Value::Object(a), Value::Object(b)) = (into, from) {
        a.extend(b);
    }
}

fn read_poly(a: &CheckArgs) -> Res<Poly> {
    let src = match (&a.poly, &a.file) {
        (Some(p), _) => p.clone(),
        (None, Some(path)) => std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {path}: {e}")))?,
        (None, None) => return usage("one of --poly or --file is required"),
    };
    Ok(Poly::parse(src.trim())?)
}

fn budget_error(e: Error) -> Res<Value> {
    match e {
        Error::BudgetExceeded(msg) => Ok(json!({ "budget_exceeded": true, "error": msg })),
        e => Err(e.into()),
    }
}

fn cmd_check(a: &CheckArgs, cli: &Cli) -> Res<Report> {
    let f = read_poly(a)?;
    let base = f.field().clone();
    let ext = Field::make(base.characteristic(), base.degree() * a.ext)?;
    let mut results = serde_json::Map::new();
    let mut text = Vec::new();
    let mut csv = None;
    let mut budget_exceeded = false;
    let mut ok = true;
    for kind in &a.checks {
        match kind {
            CheckKind::Perm => {
                let r = analyze::permutation_profile(&f, a.k, cli.budget)?;
                budget_exceeded |= r.rows.iter().any(|row| row.skipped.is_some());
                for row in &r.rows {
                    let state = match row.bijective {
                        Some(true) => "bijective".to_string(),
                        Some(false) => format!("not bijective (max fiber {})", row.max_fiber.unwrap_or(0)),
                        None => format!("skipped: {}", row.skipped.clone().unwrap_or_default()),
                    };
                    text.push(format!("perm k={} |F|={}: {state}", row.k, row.field_size));
                }
                results.insert("perm".into(), serde_json::to_value(&r).unwrap());
            }
            CheckKind::Exceptional => {
                let profile = analyze::permutation_profile(&f, a.k, cli.budget)?;
                let m = a.m.or_else(|| analyze::best_fit_m(&profile)).unwrap_or(1);
                let ev = analyze::exceptionality_evidence(&f, m, a.k, cli.budget)?;
                let cert = analyze::exceptionality_certificate(&f, m, cli.budget)?;
                text.push(format!(
                    "exceptional m={m}: {:?}, best fit m {:?}; certificate {:?} ({})",
                    ev.verdict, ev.best_fit_m, cert.status, cert.detail
                ));
                results.insert("exceptional".into(), json!({ "evidence": ev, "certificate": cert }));
            }
            CheckKind::Decompose => {
                let d = f.deg();
                let inner: Vec<usize> = if a.inner.is_empty() { (2..d).filter(|m| d % m == 0).collect() } else { a.inner.clone() };
                let mode = if a.mode == Mode::Pruned { SearchMode::Pruned } else { SearchMode::Exhaustive };
                let mut rows = Vec::new();
                for m in inner {
                    let v = match analyze::decompose_search(&f, m, &ext, mode) {
                        Ok(Some(w)) => {
                            let verified = analyze::verify_decomposition(&f.embed_into(&ext)?, &w.g, &w.h);
                            ok &= verified;
                            text.push(format!("decompose m={m} over {ext}: g = {}, h = {}", w.g.body_text(), w.h.body_text()));
                            json!({ "inner_degree": m, "witness": { "g": w.g.to_string(), "h": w.h.to_string() }, "verified": verified })
                        }
                        Ok(None) => {
                            text.push(format!("decompose m={m} over {ext}: none"));
                            json!({ "inner_degree": m, "witness": null })
                        }
                        Err(e) => {
                            let mut v = budget_error(e)?;
                            budget_exceeded = true;
                            text.push(format!("decompose m={m} over {ext}: budget exceeded"));
                            merge(&mut v, json!({ "inner_degree": m }));
                            v
                        }
                    };
                    rows.push(v);
                }
                results.insert("decompose".into(), Value::Array(rows));
            }
            CheckKind::Stats => {
                if a.samples.is_none() && ext.order() > cli.budget {
                    budget_exceeded = true;
                    results.insert("stats".into(), json!({ "budget_exceeded": true, "error": format!("{} values exceed the budget", ext.order()) }));
                    continue;
                }
                let s = analyze::frobenius_cycle_stats(&f, &ext, a.samples, cli.seed)?;
                let total = s.nonbranch().max(1) as f64;
                for (pat, c) in &s.counts {
                    text.push(format!("stats {}: {c} ({:.4})", cycle_type_label(pat), *c as f64 / total));
                }
                text.push(format!("stats branch values: {:?}", s.branch_values));
                csv = Some(s.to_csv());
                results.insert("stats".into(), serde_json::to_value(&s).unwrap());
            }
        }
    }
    let json = json!({ "command": "check", "polynomial": f.to_string(), "results": results });
    Ok(Report { json, text: text.join("\n"), csv, ok, budget_exceeded })
}

fn cmd_group(a: &GroupArgs) -> Res<Report> {
    let flavor = Flavor::parse(&a.flavor)?;
    match a.report {
        GroupReport::FixedPoints => {
            let act = PermAction::new(a.q)?;
            let rows = psl2::fixed_point_table(&act, flavor);
            let ok = rows.iter().all(|r| r.matches());
            let text = rows
                .iter()
                .map(|r| {
                    format!(
                        "order {} frob {} in_psl {} in_pgl {}: {} elements, fixed points {:?}, predicted {:?} [{}]",
                        r.class.order,
                        r.class.frob,
                        r.class.in_psl,
                        r.class.in_pgl,
                        r.count,
                        r.observed,
                        r.predicted,
                        r.rule.unwrap_or("no prediction")
                    )
                })
                .collect::<Vec<_>>()
                .join("\n");
            let json = json!({ "command": "group", "report": "fixed-points", "q": a.q, "degree": act.degree(), "rows": rows, "all_match": ok });
            Ok(Report { ok, ..Report::new(json, text) })
        }
        GroupReport::Census => {
            let c = psl2::verify_subgroup_census(a.q)?;
            let text = serde_json::to_string_pretty(&c).unwrap();
            Ok(Report::new(json!({ "command": "group", "report": "census", "census": c }), text))
        }
        GroupReport::Cycles => {
            let act = PermAction::new(a.q)?;
            let g: &Psl2 = act.group();
            let dist = g.coset_cycle_distribution(flavor, flavor, &g.identity(), &act)?;
            let mut csv = String::from("pattern,frequency\n");
            let mut text = Vec::new();
            let mut map = serde_json::Map::new();
            for (k, v) in &dist {
                let label = cycle_type_label(k);
                csv.push_str(&format!("{label},{v}\n"));
                text.push(format!("{label}: {v}"));
                map.insert(label, Value::String(v.to_string()));
            }
            let json = json!({ "command": "group", "report": "cycles", "q": a.q, "flavor": flavor.to_string(), "distribution": map });
            Ok(Report { csv: Some(csv), ..Report::new(json, text.join("\n")) })
        }
    }
}

fn cmd_ramify(c: &RamifyCommand) -> Res<Report> {
    match c {
        RamifyCommand::Profile { q, n, r } => {
            let pr = ramify::ramification_profile(*q, *n, *r)?;
            let text = serde_json::to_string(&pr).unwrap().to_string();
            Ok(Report::new(json!({ "command": "ramify", "action": "profile", "profile": pr }), text))
        }
        RamifyCommand::Rh { q, flavor, case, n } => {
            let r = ramify::rh_check(*q, Flavor::parse(flavor)?, RhCase::parse(case)?, *n)?;
            let text = format!(
                "{}: sum of indices {} (2d-2 = {}), genus {} (expected {})",
                if r.ok { "ok" } else { "FAILED" },
                r.total_index,
                2 * r.d - 2,
                r.genus,
                r.expected_genus
            );
            let ok = r.ok;
            Ok(Report { ok, ..Report::new(json!({ "command": "ramify", "action": "rh", "report": r }), text) })
        }
        RamifyCommand::Star { p, n, r } => {
            let fast = ramify::star_criterion(*p, *n, *r);
            let slow = ramify::star_criterion_bruteforce(*p, *n, *r);
            let json = json!({ "command": "ramify", "action": "star", "p": p, "n": n, "r": r, "holds": fast, "bruteforce": slow });
            Ok(Report { ok: fast == slow, ..Report::new(json, format!("criterion holds: {fast} (brute force {slow})")) })
        }
        RamifyCommand::Counterexample { p, e, n, r, which, ext } => {
            let which = match which.as_str() {
                "i" => Which::I,
                "ii" => Which::Ii,
                _ => return usage("--which must be i or ii"),
            };
            let k = Field::make(*p, e * ext)?;
            let q = numtheory::checked_pow(*p, *e).ok_or_else(|| Failure::Usage("q too large".into()))?;
            match ramify::counterexample_z(*p, *e, *n, *r, which, &k)? {
                Some(z) => {
                    let rep = ramify::check_counterexample(&z, q, *n, *r)?;
                    let text = format!(
                        "z = {}: Galois {}, jump {:?}, equivalent to a monomial {}",
                        z, rep.galois, rep.jump, rep.monomial_equivalent
                    );
                    let json = json!({ "command": "ramify", "action": "counterexample", "z": z.to_string(), "report": rep });
                    Ok(Report::new(json, text))
                }
                None => Ok(Report::new(
                    json!({ "command": "ramify", "action": "counterexample", "z": null }),
                    "the hypothesis of this case does not fail; no counterexample".into(),
                )),
            }
        }
        RamifyCommand::Sweep { qmax } => {
            let rows = ramify::numerology_sweep(*qmax);
            let bad: Vec<_> = rows.iter().filter(|r| !r.holds).collect();
            let top = ramify::top_half_failures(*qmax);
            let ok = bad.is_empty() && top.is_empty();
            let text = format!("{} parameter sets, {} failures; top-half failures {:?}", rows.len(), bad.len(), top);
            let json = json!({ "command": "ramify", "action": "sweep", "qmax": qmax, "rows": rows.len(), "failures": bad, "top_half_failures": top });
            Ok(Report { ok, ..Report::new(json, text) })
        }
    }
}

fn cmd_verify(scope: &str) -> Res<Report> {
    let scope = Scope::parse(scope)?;
    let checks = verify::run_suite(scope);
    let failed = checks.iter().filter(|c| !c.passed).count();
    let text = checks
        .iter()
        .map(|c| format!("{} {} [{}]: {}", if c.passed { "PASS" } else { "FAIL" }, c.id, c.citation, c.detail))
        .chain(std::iter::once(format!("{} passed, {failed} failed", checks.len() - failed)))
        .collect::<Vec<_>>()
        .join("\n");
    let json = json!({ "command": "verify-paper", "scope": scope, "passed": checks.len() - failed, "failed": failed, "checks": checks });
    Ok(Report { ok: failed == 0, ..Report::new(json, text) })
}

fn run(cli: &Cli) -> Res<Report> {
    match &cli.command {
        Command::Family(a) => cmd_family(a),
        Command::Check(a) => cmd_check(a, cli),
        Command::Group(a) => cmd_group(a),
        Command::Ramify { command } => cmd_ramify(command),
        Command::VerifyPaper { scope } => cmd_verify(scope),
    }
}

fn with_schema(mut v: Value) -> Value {
    if let Value::Object(m) = &mut v {
        m.insert("schema".into(), json!(SCHEMA));
    }
    v
}

/// Write to stdout; a closed pipe is not an error.
fn emit(s: &str) {
    let _ = std::io::stdout().lock().write_all(s.as_bytes());
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.jobs > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(r) => {
            match cli.output {
                Output::Json => emit(&format!("{}\n", serde_json::to_string_pretty(&with_schema(r.json)).unwrap())),
                Output::Csv => match &r.csv {
                    Some(c) => emit(c),
                    None => emit(&format!("{}\n", serde_json::to_string(&with_schema(r.json)).unwrap())),
                },
                Output::Text => emit(&format!("{}\n", r.text)),
            }
            if !r.ok {
                ExitCode::from(1)
            } else if r.budget_exceeded {
                ExitCode::from(3)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(f) => {
            let (code, kind, msg) = match f {
                Failure::Usage(m) => (2, "usage", m),
                Failure::Assertion(m) => (1, "assertion", m),
                Failure::Budget(m) => (3, "budget", m),
            };
            if cli.output == Output::Json {
                emit(&format!("{}\n", serde_json::to_string_pretty(&json!({ "schema": SCHEMA, "error": kind, "message": msg })).unwrap()));
            } else {
                eprintln!("error: {msg}");
            }
            ExitCode::from(code)
        }
    }
}
