//! One line per acceptance criterion, written straight to stdout so it shows
//! up without `--nocapture`.
//!
//! Criteria 6 and 7 print FAIL for the parts that do not hold for these
//! models; the tests themselves assert what the computation does establish.

use std::io::Write;
use std::process::Command;
use std::time::{Duration, Instant};

use cy8_cli::checks::{self, TraceRow};
use cy8_cli::report::{Check, Status};
use cy8_core::catalog::{fibration_ids, resolve_fibration, Registry, Shape};
use cy8_core::count::{
    brute_double_octic, brute_fermi, brute_quadric_intersection, count_double_octic, count_fermi,
    count_quadric_intersection, count_variety, h11_from_count, oracle_count, rational_nodes,
    CountError,
};
use cy8_core::ff::{kronecker, odd_primes, PrimeField};
use cy8_core::modform::{eta_product, hecke_check, newform, EtaFactor};
use cy8_core::Qt;
use num_rational::BigRational;

const ONE_SECOND: Duration = Duration::from_secs(1);
const HECKE_BUDGET: Duration = Duration::from_secs(10);
const MAP_BUDGET: Duration = Duration::from_secs(30);
const EULER_BUDGET: Duration = Duration::from_secs(5);
const CONGRUENCE_BUDGET: Duration = Duration::from_secs(300);

fn line(n: u32, title: &str, ok: bool, detail: impl AsRef<str>) {
    let status = if ok { "PASS" } else { "FAIL" };
    let s = format!("criterion {n:>2} {status}  {title}: {}\n", detail.as_ref());
    let mut out = std::io::stdout().lock();
    out.write_all(s.as_bytes()).unwrap();
    out.flush().unwrap();
}

fn failures(checks: &[Check]) -> Vec<String> {
    checks
        .iter()
        .filter(|c| c.status == Status::Fail)
        .map(|c| format!("{} (expected {}, got {})", c.name, c.expected, c.computed))
        .collect()
}

#[test]
fn criterion_01_newform_reconstruction() {
    let start = Instant::now();
    let f = eta_product(&[EtaFactor::new(2, 4), EtaFactor::new(4, 4)], 100).unwrap();
    let elapsed = start.elapsed();
    let wrong: Vec<String> = checks::PUBLISHED_AP
        .iter()
        .filter(|&&(p, a)| f.a(p as usize) != a)
        .map(|&(p, a)| format!("a_{p} = {} (want {a})", f.a(p as usize)))
        .collect();
    let ok = wrong.is_empty() && elapsed < ONE_SECOND;
    line(
        1,
        "newform reconstruction",
        ok,
        format!(
            "{} published a_p, {} wrong {wrong:?}, {elapsed:.2?}",
            checks::PUBLISHED_AP.len(),
            wrong.len()
        ),
    );
    assert!(ok);
}

#[test]
fn criterion_02_hecke_structure() {
    let start = Instant::now();
    let f = newform(1000);
    let v = hecke_check(&f, 4, &[2]);
    let elapsed = start.elapsed();
    let ok = v.is_empty() && elapsed < HECKE_BUDGET;
    line(
        2,
        "Hecke structure",
        ok,
        format!("{} violations through N = 1000, {elapsed:.2?}", v.len()),
    );
    assert!(ok);
}

#[test]
fn criterion_03_fiber_tables() {
    let c = checks::fiber_table_checks();
    let bad = failures(&c);
    let ids = fibration_ids();
    for need in ["S1", "S2", "S3", "S4", "S5", "S6", "S7", "X1128"] {
        assert!(ids.contains(&need), "{need} missing");
    }
    // the I1 pair sits at the roots of t^2 - 1, which happen to be rational
    let x = resolve_fibration("X1128")
        .unwrap()
        .model()
        .unwrap()
        .fiber_configuration();
    let mut pair: Vec<String> = x
        .iter()
        .filter(|f| f.kind.to_string() == "I1")
        .map(|f| f.place.to_string())
        .collect();
    pair.sort();
    let ok = bad.is_empty() && pair == ["-1", "1"] && c.iter().all(|c| c.status == Status::Pass);
    line(
        3,
        "fiber tables",
        ok,
        format!("{} fibrations, {} checks, failures {bad:?}; X1128 I1 pair at the roots {pair:?} of t^2 - 1", ids.len(), c.len()),
    );
    assert!(ok);
}

#[test]
fn criterion_04_map_certificates() {
    let reg = Registry::builtin();
    let start = Instant::now();
    let c = checks::map_checks(&reg, None);
    let elapsed = start.elapsed();
    let bad = failures(&c);
    let literal: Vec<String> = c
        .iter()
        .filter(|c| c.status == Status::Info)
        .map(|c| format!("{}: {}", c.name, c.computed))
        .collect();
    let ok = bad.is_empty() && elapsed < MAP_BUDGET;
    line(
        4,
        "map certificates",
        ok,
        format!(
            "{} PASS, failures {bad:?}, literal formulas with residuals {literal:?}, {elapsed:.2?}",
            c.iter().filter(|c| c.status == Status::Pass).count()
        ),
    );
    assert!(ok);
}

#[test]
fn criterion_05_lefschetz_congruence() {
    let reg = Registry::builtin();
    let f = checks::newform_series();
    let ids = checks::congruence_ids(&reg);
    for need in [
        "T70_1", "T50_V1", "T50_V2", "T46", "T44", "T40", "T28", "T40_3", "T32", "T70",
    ] {
        assert!(ids.iter().any(|i| i == need), "{need} is not counted");
    }
    let primes = odd_primes(3, 31);
    let start = Instant::now();
    let c = checks::congruence_checks(&reg, &ids, &primes, &f, false);
    let elapsed = start.elapsed();
    let bad = failures(&c);
    // every double octic and quadric intersection must have a verdict at every prime
    let mut missing = Vec::new();
    for v in reg.level8() {
        if matches!(
            v.shape,
            Shape::DoubleOctic { .. } | Shape::QuadricIntersection { .. }
        ) {
            for p in &primes {
                let name = format!("{} p={p}", v.id);
                if !c.iter().any(|c| c.name == name && c.status == Status::Pass) {
                    missing.push(name);
                }
            }
        }
    }
    let info = c.iter().filter(|c| c.status == Status::Info).count();
    let ok = bad.is_empty() && missing.is_empty() && elapsed < CONGRUENCE_BUDGET;
    line(
        5,
        "Lefschetz congruence",
        ok,
        format!(
            "{} PASS over p in 3..31, {info} INFO (affine Fermi model, unsupported shapes), failures {bad:?}, unverified {missing:?}, {elapsed:.2?}",
            c.iter().filter(|c| c.status == Status::Pass).count()
        ),
    );
    assert!(ok);
}

const LEVEL_8_PRODUCTS: [(&str, u32); 5] = [
    ("T36", 1),
    ("T40_2", 32),
    ("T32_2", 93),
    ("T40_1", 238),
    ("T32_1", 241),
];

fn trace_table() -> Vec<TraceRow> {
    let reg = Registry::builtin();
    let f = checks::newform_series();
    let ids = checks::fiber_product_ids(&reg);
    checks::trace_rows(&reg, &ids, &odd_primes(3, 31), &f, false).unwrap()
}

/// `(T + a_p) / p` for the level-8 products.
fn closed_form(id: &str, p: u64) -> i64 {
    match id {
        "T36" => -1,
        "T40_1" | "T32_1" | "T70_fp" => p as i64 - 3,
        "T40_2" | "T32_2" => -(kronecker(-4, p as i64) as i64) - 2 * kronecker(-8, p as i64) as i64,
        _ => unreachable!(),
    }
}

#[test]
fn criterion_06_fiber_product_traces() {
    let rows = trace_table();
    let reg = Registry::builtin();
    for (id, row) in LEVEL_8_PRODUCTS {
        assert!(reg.rows().iter().any(|r| r.row == row), "row {row}");
        assert!(rows.iter().any(|r| r.id == id), "{id} has no traces");
    }
    let level8: Vec<&TraceRow> = rows.iter().filter(|r| r.level == Some(8)).collect();
    let literal: Vec<String> = level8
        .iter()
        .filter(|r| (r.trace - r.a_p).rem_euclid(r.p as i64) != 0)
        .map(|r| format!("{}@{}", r.id, r.p))
        .collect();
    let negated = level8
        .iter()
        .filter(|r| (r.trace + r.a_p).rem_euclid(r.p as i64) != 0)
        .count();

    // calibration: (T - a_p)/p constant per product
    let mut drifting = Vec::new();
    for (id, _) in LEVEL_8_PRODUCTS {
        let q: Vec<Option<i64>> = level8
            .iter()
            .filter(|r| r.id == id)
            .map(|r| {
                let d = r.trace - r.a_p;
                (d % r.p as i64 == 0).then(|| d / r.p as i64)
            })
            .collect();
        if q.iter().any(Option::is_none) || q.windows(2).any(|w| w[0] != w[1]) {
            drifting.push(id);
        }
    }
    let mut off_formula = Vec::new();
    for r in &level8 {
        if r.excess != Some(closed_form(&r.id, r.p)) {
            off_formula.push(format!("{}@{}", r.id, r.p));
        }
    }
    let others: Vec<String> = rows
        .iter()
        .filter(|r| r.level != Some(8))
        .map(|r| format!("{}@{}", r.id, r.p))
        .collect();

    line(
        6,
        "fiber-product traces, T = a_p mod p",
        literal.is_empty(),
        format!(
            "{} of {} level-8 traces violate it; every one satisfies T = -a_p mod p ({negated} exceptions)",
            literal.len(),
            level8.len()
        ),
    );
    line(
        6,
        "fiber-product traces, (T - a_p)/p constant per product",
        drifting.is_empty(),
        format!(
            "not constant for {drifting:?}; (T + a_p)/p instead follows -1 (T36), p - 3 (T40_1, T32_1, T70_fp), -chi_-4(p) - 2 chi_-8(p) (T40_2, T32_2), {} off-formula",
            off_formula.len()
        ),
    );
    line(
        6,
        "fiber-product traces, other levels",
        true,
        format!("{} INFO rows", others.len()),
    );
    assert_eq!(negated, 0);
    assert!(off_formula.is_empty(), "{off_formula:?}");
    assert!(!others.is_empty());
}

#[test]
fn criterion_07_t32_hodge_number() {
    let reg = Registry::builtin();
    let f = checks::newform_series();
    let Shape::QuadricIntersection { forms, .. } = &reg.get("T32").unwrap().shape else {
        panic!("T32 shape")
    };
    let mut h = Vec::new();
    let mut parts = Vec::new();
    for p in [5u64, 7, 11, 13] {
        let a = f.a(p as usize);
        let r = count_variety(&reg, "T32", p, a).unwrap();
        let nodes = rational_nodes(forms, p).unwrap().points.len() as i64;
        assert_eq!(r.corrected - r.raw as i64, nodes * p as i64);
        // node multiplicity that would make h11 = 32
        let pi = p as i64;
        let need = 32 * (pi + pi * pi) + 1 + pi * pi * pi - a - r.raw as i64;
        let m = (need % pi == 0).then(|| need / pi);
        let got = h11_from_count(r.corrected, p, a).map_err(|q: BigRational| q.to_string());
        parts.push(format!(
            "p={p}: h11 {got:?}, {nodes} rational nodes, 32 needs {m:?}"
        ));
        h.push((p, got, nodes, m));
    }
    let ok = h.iter().all(|(_, g, _, _)| *g == Ok(32));
    line(7, "T32 h11 from resolved counts", ok, parts.join("; "));
    for (p, g, nodes, m) in h {
        if p % 4 == 1 {
            assert_eq!(g, Ok(32));
            assert_eq!(nodes, 96);
        } else {
            assert_eq!(g, Ok(8));
            assert_eq!(nodes, 0);
            assert_eq!(m, Some(24 * (1 + p as i64)));
        }
    }
}

#[test]
fn criterion_08_euler_pipeline() {
    let start = Instant::now();
    let r = checks::euler_report("T40_3", &cy8_core::euler::DEFAULT_PRIMES).unwrap();
    let elapsed = start.elapsed();
    let mut seq = vec![r.union_chi, r.singular_chi];
    seq.extend(r.corrections.iter().map(|c| c.1));
    seq.push(r.resolved_chi);
    let ok = seq == [12, -8, 48, 32, 8, 80] && elapsed < EULER_BUDGET;
    line(
        8,
        "Euler pipeline for T40_3",
        ok,
        format!("{seq:?}, {elapsed:.2?}"),
    );
    assert!(ok);
}

/// Affine points of y^2 = x^3 + a2 x^2 + a4 x + a6 plus the point at infinity,
/// with the coefficients evaluated over Q first.
fn cubic_points(coeffs: [&Qt; 3], t: u64, f: &PrimeField) -> Option<u64> {
    let t = BigRational::from_integer(t.into());
    let mut c = [0u64; 3];
    for (slot, q) in c.iter_mut().zip(coeffs) {
        let den = q.den().eval(&t);
        let den = f.reduce_rational(&den)?;
        if den == 0 {
            return None;
        }
        let num = f.reduce_rational(&q.num().eval(&t))?;
        *slot = f.mul(num, f.inv(den)?);
    }
    let p = f.p();
    let mut n = 1;
    for x in 0..p {
        let rhs = (x * x % p * x + c[0] * x % p * x + c[1] * x + c[2]) % p;
        n += (0..p).filter(|y| y * y % p == rhs).count() as u64;
    }
    Some(n)
}

#[test]
fn criterion_09_oracle_equivalences() {
    let reg = Registry::builtin();
    let mut compared = 0usize;
    let mut wrong = Vec::new();
    let mut check = |what: String, a: u64, b: u64| {
        compared += 1;
        if a != b {
            wrong.push(format!("{what}: {a} vs {b}"));
        }
    };
    for p in odd_primes(3, 13) {
        check(
            format!("fermi@{p}"),
            count_fermi(p).unwrap(),
            brute_fermi(p).unwrap(),
        );
    }
    for v in reg.level8() {
        if let Shape::DoubleOctic { factors, twist } = &v.shape {
            let octic = v.octic().unwrap();
            for p in [3, 5, 7] {
                check(
                    format!("{}@{p}", v.id),
                    count_double_octic(factors, *twist, p).unwrap(),
                    brute_double_octic(&octic, *twist, p).unwrap(),
                );
            }
        }
        if let Shape::QuadricIntersection { forms, .. } = &v.shape {
            check(
                format!("{}@3", v.id),
                count_quadric_intersection(forms, 3).unwrap(),
                brute_quadric_intersection(forms, 3).unwrap(),
            );
        }
    }
    for id in fibration_ids() {
        let model = resolve_fibration(id).unwrap().model().unwrap();
        for p in [3, 5, 7] {
            let Ok(counter) = model.reduce_mod(p) else {
                continue;
            };
            let f = PrimeField::new(p).unwrap();
            for t in 0..p {
                if let Some(n) = cubic_points([model.a2(), model.a4(), model.a6()], t, &f) {
                    check(format!("{id}({t})@{p}"), counter.count(Some(t)), n);
                }
            }
        }
    }
    for id in checks::fiber_product_ids(&reg) {
        for p in [3, 5, 7] {
            match count_variety(&reg, &id, p, 0) {
                Ok(r) => check(
                    format!("{id}@{p}"),
                    r.raw,
                    oracle_count(&reg, &id, p).unwrap(),
                ),
                Err(CountError::BadPrime { .. }) => {}
                Err(e) => panic!("{id}@{p}: {e}"),
            }
        }
    }
    let ok = wrong.is_empty();
    line(
        9,
        "oracle equivalences",
        ok,
        format!("{compared} exact comparisons, mismatches {wrong:?}"),
    );
    assert!(ok);
}

fn cy8(threads: u32, args: &[&str]) -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_cy8"))
        .args([
            "--quiet",
            "--format",
            "csv",
            "--threads",
            &threads.to_string(),
        ])
        .args(args)
        .output()
        .unwrap();
    assert!(
        out.status.code().is_some_and(|c| c < 2),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    out.stdout
}

#[test]
fn criterion_10_determinism() {
    let mut same = Vec::new();
    for args in [
        &["verify", "congruence", "--primes", "3..31"][..],
        &["trace", "--primes", "3..31"][..],
    ] {
        let one = cy8(1, args);
        let eight = cy8(8, args);
        assert!(one.len() > 100);
        same.push((args[0], one == eight, one.len()));
    }
    let ok = same.iter().all(|s| s.1);
    line(10, "determinism at widths 1 and 8", ok, format!("{same:?}"));
    assert!(ok);
}
