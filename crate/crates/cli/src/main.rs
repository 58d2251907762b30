use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use cy8_cli::checks::{self, HodgeRow, TraceRow};
use cy8_cli::output::{self, table, Format};
use cy8_cli::primes::parse_primes;
use cy8_cli::report::VerificationReport;
use cy8_core::catalog::{correspondence_graph, resolve_fibration, Registry, Shape, VarietySpec};
use cy8_core::count::{count_variety, oracle_count};
use cy8_core::elliptic::euler_sum;
use cy8_core::ff::is_prime;
use cy8_core::modform::newform;

#[derive(Parser)]
#[command(name = "cy8", version)]
#[command(about = "Verification workbench for the rigid Calabi-Yau threefolds of level 8")]
struct Cli {
    /// Output format (dot is only meaningful for `graph`)
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Worker threads for the counting kernels; 0 uses every core
    #[arg(long, global = true, env = "CY8_THREADS", default_value_t = 0)]
    threads: usize,

    /// Catalog file (structured text or JSON) whose entries are added to the built-ins
    #[arg(long, global = true, env = "CY8_CATALOG")]
    catalog: Option<PathBuf>,

    /// Do not print progress on stderr
    #[arg(long, short, global = true)]
    quiet: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Coefficients of the weight-4 level-8 newform eta(2z)^4 eta(4z)^4
    Modform {
        #[command(subcommand)]
        cmd: ModformCmd,
    },
    /// Inspect the variety catalog
    Catalog {
        #[command(subcommand)]
        cmd: CatalogCmd,
    },
    /// Count points of a catalog variety over F_p
    Count {
        /// Variety id or alias
        #[arg(long)]
        variety: String,
        /// Primes: `7`, `5,7,11` or `3..31`
        #[arg(long, alias = "primes")]
        prime: String,
        /// Also run the brute-force enumeration and compare
        #[arg(long)]
        oracle: bool,
    },
    /// Run verification checks; exits with status 1 when any check fails
    Verify {
        #[command(subcommand)]
        cmd: VerifyCmd,
    },
    /// Singular fibers of an elliptic fibration
    Tate {
        /// Fibration id: S1..S7, X1128, el2, el4, or `S3(2)`
        #[arg(long)]
        surface: String,
        /// Parameter for the S3, S4 and S7 families
        #[arg(long)]
        lambda: Option<i64>,
    },
    /// Frobenius traces of the fiber products
    Trace {
        /// Comma-separated ids; all fiber products when omitted
        #[arg(long)]
        variety: Option<String>,
        #[arg(long, default_value = "3..31")]
        primes: String,
    },
    /// h11 from a resolved point count
    Hodge {
        #[arg(long, default_value = "T32")]
        variety: String,
        #[arg(long, default_value = "5,7,11,13")]
        primes: String,
    },
    /// Stratified Euler characteristic of a resolution plan
    Euler {
        #[arg(long, default_value = "T40_3")]
        variety: String,
        /// Print every stratum
        #[arg(long)]
        breakdown: bool,
        /// Sampling primes for the interpolation
        #[arg(long, default_value = "11,13,17,19,23")]
        primes: String,
    },
    /// Known correspondences between the level-8 varieties
    Graph,
}

#[derive(Subcommand)]
enum ModformCmd {
    /// Table of a_p (or every a_n with --all)
    Coeffs {
        #[arg(long, default_value_t = 73)]
        upto: usize,
        #[arg(long)]
        all: bool,
    },
}

#[derive(Subcommand)]
enum CatalogCmd {
    /// One line per variety
    List,
    /// Equations and invariants of one variety
    Show { id: String },
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// count = 1 - a_p (mod p) for level-8 varieties
    Congruence {
        /// Comma-separated ids; every level-8 variety when omitted
        #[arg(long)]
        variety: Option<String>,
        #[arg(long, default_value = "3..31")]
        primes: String,
    },
    /// Exact certificates for the catalog maps
    Map {
        #[arg(long)]
        map: Option<String>,
    },
    /// Newform table, fiber tables, maps, congruences and the Euler pipeline
    All {
        #[arg(long, default_value = "3..13")]
        primes: String,
    },
}

/// Printed output plus whether any check failed.
enum Outcome {
    Done { text: String, failed: bool },
}

type Run = Result<Outcome, String>;

fn done(text: String) -> Run {
    Ok(Outcome::Done {
        text,
        failed: false,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.threads > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(Outcome::Done { text, failed }) => {
            print!("{text}");
            if failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Run {
    let reg = Registry::load(cli.catalog.as_deref()).map_err(|e| e.to_string())?;
    let progress = !cli.quiet;
    match &cli.command {
        Command::Modform {
            cmd: ModformCmd::Coeffs { upto, all },
        } => modform(cli.format, *upto, *all),
        Command::Catalog { cmd } => catalog(cli.format, &reg, cmd),
        Command::Count {
            variety,
            prime,
            oracle,
        } => count(cli.format, &reg, variety, prime, *oracle),
        Command::Verify { cmd } => {
            let report = match cmd {
                VerifyCmd::Congruence { variety, primes } => {
                    let primes = parse_primes(primes)?;
                    let ids = ids_or(&reg, variety.as_deref(), checks::congruence_ids)?;
                    let f = checks::newform_series();
                    let mut r = VerificationReport::default();
                    r.extend(checks::congruence_checks(&reg, &ids, &primes, &f, progress));
                    r
                }
                VerifyCmd::Map { map } => {
                    if let Some(m) = map {
                        reg.map(m).map_err(|e| e.to_string())?;
                    }
                    let mut r = VerificationReport::default();
                    r.extend(checks::map_checks(&reg, map.as_deref()));
                    r
                }
                VerifyCmd::All { primes } => {
                    checks::verify_all(&reg, &parse_primes(primes)?, progress)
                }
            };
            emit_report(cli.format, &report)
        }
        Command::Tate { surface, lambda } => tate(cli.format, surface, *lambda),
        Command::Trace { variety, primes } => {
            let primes = parse_primes(primes)?;
            let ids = ids_or(&reg, variety.as_deref(), checks::fiber_product_ids)?;
            let f = checks::newform_series();
            let rows =
                checks::trace_rows(&reg, &ids, &primes, &f, progress).map_err(|e| e.to_string())?;
            let mut report = VerificationReport::default();
            report.extend(checks::trace_checks(&rows));
            with_report(cli.format, &rows, trace_text(&rows), &report)
        }
        Command::Hodge { variety, primes } => {
            let primes = parse_primes(primes)?;
            let f = checks::newform_series();
            let rows = checks::hodge_rows(&reg, variety, &primes, &f).map_err(|e| e.to_string())?;
            let mut report = VerificationReport::default();
            report.extend(checks::hodge_checks(&reg, &rows));
            with_report(cli.format, &rows, hodge_text(&rows), &report)
        }
        Command::Euler {
            variety,
            breakdown,
            primes,
        } => euler(cli.format, &reg, variety, *breakdown, primes),
        Command::Graph => {
            let g = correspondence_graph(&reg);
            match cli.format {
                Format::Dot | Format::Text => done(g.to_dot()),
                Format::Json => done(output::json(&g)?),
                Format::Csv => done(output::csv(&g.edges)?),
            }
        }
    }
}

fn ids_or(
    reg: &Registry,
    given: Option<&str>,
    default: fn(&Registry) -> Vec<String>,
) -> Result<Vec<String>, String> {
    match given {
        None => Ok(default(reg)),
        Some(list) => list
            .split(',')
            .map(|id| {
                let id = id.trim();
                reg.get(id).map(|v| v.id.clone()).map_err(|e| e.to_string())
            })
            .collect(),
    }
}

fn no_dot(format: Format) -> Result<(), String> {
    if format == Format::Dot {
        return Err("dot output is only available for `graph`".into());
    }
    Ok(())
}

fn emit_report(format: Format, report: &VerificationReport) -> Run {
    no_dot(format)?;
    let text = match format {
        Format::Csv => output::csv(&report.checks)?,
        Format::Json => output::json(report)?,
        _ => report.to_text(),
    };
    Ok(Outcome::Done {
        text,
        failed: !report.passed(),
    })
}

/// Data rows in csv/json, rows plus verdicts in text; the exit status follows
/// the verdicts either way.
fn with_report<T: Serialize>(
    format: Format,
    rows: &[T],
    text: String,
    report: &VerificationReport,
) -> Run {
    no_dot(format)?;
    let text = match format {
        Format::Csv => output::csv(rows)?,
        Format::Json => output::json(rows)?,
        _ => text + "\n" + &report.to_text(),
    };
    Ok(Outcome::Done {
        text,
        failed: !report.passed(),
    })
}

#[derive(Serialize)]
struct Coefficient {
    n: usize,
    a_n: String,
}

fn modform(format: Format, upto: usize, all: bool) -> Run {
    no_dot(format)?;
    let f = newform(upto.max(1));
    let rows: Vec<Coefficient> = (1..=upto)
        .filter(|&n| all || is_prime(n as u64))
        .map(|n| Coefficient {
            n,
            a_n: f.coeff(n).expect("within the order").to_string(),
        })
        .collect();
    match format {
        Format::Csv => done(output::csv(&rows)?),
        Format::Json => done(output::json(&rows)?),
        _ => done(table(
            &["n", "a_n"],
            &rows
                .iter()
                .map(|r| vec![r.n.to_string(), r.a_n.clone()])
                .collect::<Vec<_>>(),
        )),
    }
}

#[derive(Serialize)]
struct CatalogRow {
    id: String,
    shape: &'static str,
    chi: Option<i64>,
    h11: Option<i64>,
    h12: Option<i64>,
    level: Option<u32>,
    type_label: Option<String>,
    arrangement: Option<u32>,
    note: Option<String>,
}

fn catalog_row(v: &VarietySpec) -> CatalogRow {
    let m = &v.metadata;
    CatalogRow {
        id: v.id.clone(),
        shape: v.shape.name(),
        chi: m.chi,
        h11: m.h11,
        h12: m.h12,
        level: m.level,
        type_label: m.type_label.clone(),
        arrangement: m.arrangement,
        note: m.note.clone(),
    }
}

fn opt<T: ToString>(x: &Option<T>) -> String {
    x.as_ref().map_or_else(|| "-".into(), T::to_string)
}

fn catalog(format: Format, reg: &Registry, cmd: &CatalogCmd) -> Run {
    no_dot(format)?;
    match cmd {
        CatalogCmd::List => {
            let all: Vec<&VarietySpec> = reg.varieties().collect();
            match format {
                Format::Json => done(output::json(&all)?),
                Format::Csv => done(output::csv(
                    &all.iter().map(|v| catalog_row(v)).collect::<Vec<_>>(),
                )?),
                _ => {
                    let rows: Vec<Vec<String>> = all
                        .iter()
                        .map(|v| {
                            let r = catalog_row(v);
                            vec![
                                r.id,
                                r.shape.into(),
                                opt(&r.chi),
                                opt(&r.h11),
                                opt(&r.h12),
                                opt(&r.level),
                                opt(&r.type_label),
                            ]
                        })
                        .collect();
                    let mut s = table(
                        &["id", "shape", "chi", "h11", "h12", "level", "type"],
                        &rows,
                    );
                    s.push_str("\naliases:\n");
                    for (a, id) in reg.aliases() {
                        s.push_str(&format!("  {a} -> {id}\n"));
                    }
                    done(s)
                }
            }
        }
        CatalogCmd::Show { id } => {
            let v = reg.get(id).map_err(|e| e.to_string())?;
            match format {
                Format::Json => done(output::json(v)?),
                Format::Csv => done(output::csv(&[catalog_row(v)])?),
                _ => done(show_text(v)),
            }
        }
    }
}

fn show_text(v: &VarietySpec) -> String {
    const XYZT: [&str; 4] = ["x", "y", "z", "t"];
    let mut s = format!("{} ({})\n", v.id, v.shape.name());
    match &v.shape {
        Shape::DoubleOctic { factors, twist } => {
            let f: Vec<String> = factors
                .iter()
                .map(|f| format!("({})", f.display(&XYZT)))
                .collect();
            let c = if *twist == 1 {
                String::new()
            } else {
                format!("{twist} * ")
            };
            s.push_str(&format!("  w^2 = {c}{}\n", f.join(" * ")));
        }
        Shape::QuadricIntersection {
            forms,
            small_resolution,
        } => {
            for (i, f) in forms.iter().enumerate() {
                s.push_str(&format!("  u{}^2 = {}\n", i + 1, f.display(&XYZT)));
            }
            s.push_str(&format!("  small resolution: {small_resolution}\n"));
        }
        Shape::FermiAffine => s.push_str("  x + 1/x + y + 1/y + z + 1/z + t + 1/t = 0\n"),
        Shape::FiberProduct {
            left,
            right,
            mobius,
            twist,
        } => {
            s.push_str(&format!("  {left} x_P1 {right}"));
            if let Some(m) = mobius {
                s.push_str(&format!(
                    " pulled back by t -> ({}t + {})/({}t + {})",
                    m.a, m.b, m.c, m.d
                ));
            }
            if *twist != 1 {
                s.push_str(&format!(", twisted by {twist}"));
            }
            s.push('\n');
        }
        Shape::Hypersurface { equation } => {
            let names: Vec<String> = (0..equation.nvars()).map(|i| format!("x{i}")).collect();
            let names: Vec<&str> = names.iter().map(String::as_str).collect();
            s.push_str(&format!("  {} = 0\n", equation.display(&names)));
        }
        Shape::CompleteIntersection { equations } => {
            for e in equations {
                let names: Vec<String> = (0..e.nvars()).map(|i| format!("x{i}")).collect();
                let names: Vec<&str> = names.iter().map(String::as_str).collect();
                s.push_str(&format!("  {} = 0\n", e.display(&names)));
            }
        }
    }
    let m = &v.metadata;
    s.push_str(&format!(
        "  chi = {}, h11 = {}, h12 = {}, level = {}\n",
        opt(&m.chi),
        opt(&m.h11),
        opt(&m.h12),
        opt(&m.level)
    ));
    if let Some(t) = &m.type_label {
        s.push_str(&format!("  type {t}\n"));
    }
    if let Some(a) = m.arrangement {
        s.push_str(&format!("  arrangement no. {a}"));
        if let Some(b) = m.arrangement_alt {
            s.push_str(&format!(" (older list no. {b})"));
        }
        s.push('\n');
    }
    if let Some(n) = &m.note {
        s.push_str(&format!("  note: {n}\n"));
    }
    s
}

#[derive(Serialize)]
struct CountRow {
    id: String,
    p: u64,
    raw: u64,
    corrections: String,
    corrected: i64,
    a_p: i64,
    residue: u64,
    trace: Option<i64>,
    h11: Option<i64>,
    oracle: Option<u64>,
}

fn count(format: Format, reg: &Registry, id: &str, primes: &str, oracle: bool) -> Run {
    no_dot(format)?;
    let primes = parse_primes(primes)?;
    let f = checks::newform_series();
    let mut rows = Vec::new();
    let mut mismatch = false;
    for p in primes {
        let r = count_variety(reg, id, p, f.a(p as usize)).map_err(|e| e.to_string())?;
        let o = if oracle {
            let o = oracle_count(reg, id, p).map_err(|e| e.to_string())?;
            mismatch |= o != r.raw;
            Some(o)
        } else {
            None
        };
        rows.push(CountRow {
            id: r.id.clone(),
            p,
            raw: r.raw,
            corrections: r
                .corrections
                .iter()
                .map(|c| format!("{}: {}", c.label, c.amount))
                .collect::<Vec<_>>()
                .join("; "),
            corrected: r.corrected,
            a_p: r.a_p,
            residue: r.residue,
            trace: r.trace,
            h11: r.h11,
            oracle: o,
        });
    }
    let text = match format {
        Format::Csv => output::csv(&rows)?,
        Format::Json => output::json(&rows)?,
        _ => {
            let mut header = vec![
                "id",
                "p",
                "raw",
                "corrected",
                "a_p",
                "residue",
                "trace",
                "h11",
            ];
            if oracle {
                header.push("oracle");
            }
            let body: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    let mut v = vec![
                        r.id.clone(),
                        r.p.to_string(),
                        r.raw.to_string(),
                        r.corrected.to_string(),
                        r.a_p.to_string(),
                        r.residue.to_string(),
                        opt(&r.trace),
                        opt(&r.h11),
                    ];
                    if oracle {
                        v.push(opt(&r.oracle));
                    }
                    v
                })
                .collect();
            table(&header, &body)
        }
    };
    Ok(Outcome::Done {
        text,
        failed: mismatch,
    })
}

#[derive(Serialize)]
struct FiberRow {
    surface: String,
    place: String,
    kind: String,
    alias: String,
    euler: u32,
}

fn tate(format: Format, surface: &str, lambda: Option<i64>) -> Run {
    no_dot(format)?;
    let name = match lambda {
        Some(l) => format!("{surface}({l})"),
        None => surface.to_string(),
    };
    let spec = resolve_fibration(&name).map_err(|e| e.to_string())?;
    let fibers = spec
        .model()
        .map_err(|e| e.to_string())?
        .fiber_configuration();
    let rows: Vec<FiberRow> = fibers
        .iter()
        .map(|f| FiberRow {
            surface: spec.to_string(),
            place: f.place.to_string(),
            kind: f.kind.to_string(),
            alias: f.kind.d_alias().unwrap_or_default(),
            euler: f.euler,
        })
        .collect();
    match format {
        Format::Csv => done(output::csv(&rows)?),
        Format::Json => done(output::json(&rows)?),
        _ => {
            let body: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        r.place.clone(),
                        r.kind.clone(),
                        r.alias.clone(),
                        r.euler.to_string(),
                    ]
                })
                .collect();
            let mut s = format!("{spec}\n");
            s.push_str(&table(&["place", "type", "alias", "euler"], &body));
            s.push_str(&format!("sum of Euler numbers: {}\n", euler_sum(&fibers)));
            done(s)
        }
    }
}

fn trace_text(rows: &[TraceRow]) -> String {
    let body: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.id.clone(),
                opt(&r.level),
                r.p.to_string(),
                r.raw.to_string(),
                r.trace.to_string(),
                r.a_p.to_string(),
                opt(&r.excess),
            ]
        })
        .collect();
    table(&["id", "level", "p", "raw", "T", "a_p", "(T+a_p)/p"], &body)
}

fn hodge_text(rows: &[HodgeRow]) -> String {
    let body: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.id.clone(),
                r.p.to_string(),
                r.raw.to_string(),
                r.correction.to_string(),
                r.resolved.to_string(),
                r.a_p.to_string(),
                r.h11.clone(),
            ]
        })
        .collect();
    table(
        &["id", "p", "raw", "correction", "resolved", "a_p", "h11"],
        &body,
    )
}

#[derive(Serialize)]
struct EulerLine {
    quantity: String,
    value: i64,
}

#[derive(Serialize)]
struct StratumRow {
    signature: String,
    count: String,
    chi: i64,
    fiber: u64,
}

fn euler(format: Format, reg: &Registry, id: &str, breakdown: bool, primes: &str) -> Run {
    no_dot(format)?;
    let id = reg.canonical(id).to_string();
    let primes = parse_primes(primes)?;
    let plan = cy8_core::euler::resolution_plan(&id).map_err(|e| e.to_string())?;
    let r = checks::euler_report(&id, &primes).map_err(|e| e.to_string())?;
    let mut lines = vec![
        EulerLine {
            quantity: "union of hypersurfaces".into(),
            value: r.union_chi,
        },
        EulerLine {
            quantity: "complement".into(),
            value: r.complement_chi,
        },
    ];
    for (fiber, chi) in &r.by_fiber {
        lines.push(EulerLine {
            quantity: format!("fiber size {fiber}"),
            value: *chi,
        });
    }
    lines.push(EulerLine {
        quantity: "singular cover".into(),
        value: r.singular_chi,
    });
    for (label, c) in &r.corrections {
        lines.push(EulerLine {
            quantity: format!("blow-up: {label}"),
            value: *c,
        });
    }
    lines.push(EulerLine {
        quantity: "resolved".into(),
        value: r.resolved_chi,
    });
    let strata: Vec<StratumRow> = r
        .strata
        .iter()
        .map(|s| StratumRow {
            signature: format!(
                "{{{}}}",
                s.signature
                    .iter()
                    .map(|i| format!("P{}", i + 1))
                    .collect::<Vec<_>>()
                    .join(" ")
            ),
            count: poly_in_p(&s.poly),
            chi: s.chi,
            fiber: plan.base.fiber_size(&s.signature),
        })
        .collect();
    let text = match format {
        Format::Csv if breakdown => output::csv(&strata)?,
        Format::Csv => output::csv(&lines)?,
        Format::Json => output::json(&r)?,
        _ => {
            let mut s = format!("{} over primes {:?}\n", r.variety, r.primes);
            for l in &lines {
                s.push_str(&format!("  {:<28} {:>5}\n", l.quantity, l.value));
            }
            if breakdown {
                s.push('\n');
                let body: Vec<Vec<String>> = strata
                    .iter()
                    .map(|x| {
                        vec![
                            x.signature.clone(),
                            x.count.clone(),
                            x.chi.to_string(),
                            x.fiber.to_string(),
                        ]
                    })
                    .collect();
                s.push_str(&table(&["stratum", "#points", "chi", "fiber"], &body));
            }
            s
        }
    };
    done(text)
}

fn poly_in_p(c: &[i64]) -> String {
    let mut terms = Vec::new();
    for (k, &a) in c.iter().enumerate().rev() {
        if a == 0 {
            continue;
        }
        let mono = match k {
            0 => a.abs().to_string(),
            1 if a.abs() == 1 => "p".into(),
            1 => format!("{}p", a.abs()),
            _ if a.abs() == 1 => format!("p^{k}"),
            _ => format!("{}p^{k}", a.abs()),
        };
        let sign = if a < 0 { "-" } else { "+" };
        if terms.is_empty() {
            terms.push(if a < 0 { format!("-{mono}") } else { mono });
        } else {
            terms.push(format!("{sign} {mono}"));
        }
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" ")
    }
}
