//! The verification pipelines behind `verify`, `trace`, `hodge` and `euler`.

use rayon::prelude::*;
use serde::Serialize;

use cy8_core::catalog::{
    fibration_ids, generic_quotient_certificate, resolve_fibration, Registry, Shape,
};
use cy8_core::count::{count_variety, h11_from_count, CountError, CountReport};
use cy8_core::elliptic::{euler_sum, KodairaFiber};
use cy8_core::euler::{chi_resolved, resolution_plan, EulerReport, DEFAULT_PRIMES};
use cy8_core::modform::{hecke_check, newform, QSeries, DEFAULT_ORDER};

use crate::report::{Check, VerificationReport};

/// The coefficient table printed with the newform.
pub const PUBLISHED_AP: [(u64, i64); 11] = [
    (2, 0),
    (3, -4),
    (5, -2),
    (7, 24),
    (11, -44),
    (13, 22),
    (17, 50),
    (19, 44),
    (23, -56),
    (29, 198),
    (73, 154),
];

pub fn newform_series() -> QSeries {
    newform(DEFAULT_ORDER)
}

pub fn modform_checks(f: &QSeries) -> Vec<Check> {
    let mut out: Vec<Check> = PUBLISHED_AP
        .iter()
        .map(|&(p, a)| {
            Check::new("modform", format!("a_{p}"), "cy8 modform coeffs --upto 73")
                .published()
                .compare(a, f.a(p as usize))
        })
        .collect();
    let v = hecke_check(f, 4, &[2]);
    let first = v
        .first()
        .map(|x| format!("; first at n = {}: {}", x.n, x.relation))
        .unwrap_or_default();
    out.push(
        Check::new(
            "modform",
            format!("Hecke relations through {}", f.order()),
            "cy8 verify all",
        )
        .compare("0 violations", format!("{} violations{first}", v.len())),
    );
    out
}

fn render_fibers(fibers: &[KodairaFiber]) -> String {
    let mut v: Vec<String> = fibers
        .iter()
        .map(|f| format!("{}@{}", f.kind, f.place))
        .collect();
    v.sort();
    v.join(" ")
}

/// Computed singular fibers against the declared table, for every built-in
/// fibration at its default parameter.
pub fn fiber_table_checks() -> Vec<Check> {
    let mut out = Vec::new();
    for id in fibration_ids() {
        let spec = resolve_fibration(id).expect("built-in fibration");
        let rerun = format!("cy8 tate --surface {id}");
        let fibers = match spec.model() {
            Ok(m) => m.fiber_configuration(),
            Err(e) => {
                out.push(
                    Check::new("fibers", format!("{spec} configuration"), rerun)
                        .error("a model", e),
                );
                continue;
            }
        };
        let mut declared: Vec<String> = spec
            .declared_types()
            .into_iter()
            .map(|(k, place)| format!("{k}@{place}"))
            .collect();
        declared.sort();
        out.push(
            Check::new("fibers", format!("{spec} configuration"), rerun.clone())
                .published()
                .compare(declared.join(" "), render_fibers(&fibers)),
        );
        out.push(
            Check::new("fibers", format!("{spec} Euler number sum"), rerun)
                .compare(12, euler_sum(&fibers)),
        );
    }
    out
}

pub fn map_checks(reg: &Registry, only: Option<&str>) -> Vec<Check> {
    let mut out: Vec<Check> = reg
        .maps()
        .par_iter()
        .filter(|m| only.is_none_or(|id| m.id == id))
        .map(|m| {
            let rerun = format!("cy8 verify map --map {}", m.id);
            let name = format!("{} ({} {} -> {})", m.id, m.check.name(), m.source, m.target);
            let mut b = Check::new("maps", name, rerun);
            if let Some(n) = &m.note {
                b = b.note(n.clone());
            }
            match m.verify() {
                // printed formulas pass when they happen to be exact
                Ok(c) if m.literal && c.passed => {
                    b.verdict(c.recheck(), "zero residual", "printed formula certifies")
                }
                Ok(c) if m.literal => b.info(format!(
                    "printed formula leaves residual with {} terms",
                    c.residual_terms
                )),
                Ok(c) => {
                    let ok = c.passed && c.recheck();
                    let computed = if ok {
                        "certified, recheck ok".to_string()
                    } else {
                        format!(
                            "residual {}",
                            c.residual
                                .unwrap_or_else(|| "certificate does not recheck".into())
                        )
                    };
                    b.verdict(ok, "zero residual", computed)
                }
                Err(e) => b.error("zero residual", e),
            }
        })
        .collect();
    if only.is_none() {
        for literal in [false, true] {
            let name = if literal {
                "generic 2-torsion quotient, printed formula"
            } else {
                "generic 2-torsion quotient"
            };
            let b = Check::new("maps", name, "cy8 verify map");
            out.push(match generic_quotient_certificate(literal) {
                Ok(c) if literal => b.info(format!("residual with {} terms", c.residual_terms)),
                Ok(c) => b.verdict(c.passed && c.recheck(), "zero residual", c.passed),
                Err(e) => b.error("zero residual", e),
            });
        }
    }
    out
}

/// Ids counted by `verify congruence` when none is given.
pub fn congruence_ids(reg: &Registry) -> Vec<String> {
    reg.level8().into_iter().map(|v| v.id.clone()).collect()
}

pub fn fiber_product_ids(reg: &Registry) -> Vec<String> {
    reg.varieties()
        .filter(|v| matches!(v.shape, Shape::FiberProduct { .. }))
        .map(|v| v.id.clone())
        .collect()
}

/// Count every `(id, p)` pair. The pairs run in parallel, in a fixed order.
pub fn count_all(
    reg: &Registry,
    ids: &[String],
    primes: &[u64],
    f: &QSeries,
    progress: bool,
) -> Vec<(String, u64, Result<CountReport, CountError>)> {
    let jobs: Vec<(&String, u64)> = ids
        .iter()
        .flat_map(|id| primes.iter().map(move |&p| (id, p)))
        .collect();
    jobs.par_iter()
        .map(|&(id, p)| {
            if progress {
                eprintln!("counting {id} at p = {p}");
            }
            (id.clone(), p, count_variety(reg, id, p, f.a(p as usize)))
        })
        .collect()
}

pub fn congruence_checks(
    reg: &Registry,
    ids: &[String],
    primes: &[u64],
    f: &QSeries,
    progress: bool,
) -> Vec<Check> {
    count_all(reg, ids, primes, f, progress)
        .into_iter()
        .map(|(id, p, r)| {
            let rerun = format!("cy8 count --variety {id} --prime {p}");
            let b = Check::new("congruence", format!("{id} p={p}"), rerun);
            let fermi = reg.get(&id).is_ok_and(|v| v.shape == Shape::FermiAffine);
            match r {
                Ok(r) if fermi => b
                    .note("affine model of a non-compact variety; no congruence is claimed")
                    .info(format!("count {} residue {}", r.corrected, r.residue)),
                Ok(r) => b.verdict(
                    r.congruence_holds(),
                    format!("count = 1 - a_p = {} mod {p}", 1 - r.a_p),
                    format!("count {} residue {}", r.corrected, r.residue),
                ),
                Err(e @ (CountError::BadPrime { .. } | CountError::Unsupported(_))) => {
                    b.info(format!("skipped: {e}"))
                }
                Err(e) => b.error("a count", e),
            }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceRow {
    pub id: String,
    pub level: Option<u32>,
    pub p: u64,
    pub raw: u64,
    pub trace: i64,
    pub a_p: i64,
    /// `(T + a_p) / p` when it is an integer.
    pub excess: Option<i64>,
}

pub fn trace_rows(
    reg: &Registry,
    ids: &[String],
    primes: &[u64],
    f: &QSeries,
    progress: bool,
) -> Result<Vec<TraceRow>, CountError> {
    let mut out = Vec::new();
    for (id, p, r) in count_all(reg, ids, primes, f, progress) {
        let r = match r {
            Ok(r) => r,
            Err(CountError::BadPrime { .. }) => continue,
            Err(e) => return Err(e),
        };
        let Some(t) = r.trace else {
            return Err(CountError::Unsupported(format!(
                "{id} is not a fiber product"
            )));
        };
        let s = t + r.a_p;
        out.push(TraceRow {
            level: reg.get(&id).ok().and_then(|v| v.metadata.level),
            id,
            p,
            raw: r.raw,
            trace: t,
            a_p: r.a_p,
            excess: (s % p as i64 == 0).then(|| s / p as i64),
        });
    }
    Ok(out)
}

/// `T ≡ -a_p (mod p)` for the level-8 fiber products; other levels are
/// reported without a verdict.
pub fn trace_checks(rows: &[TraceRow]) -> Vec<Check> {
    rows.iter()
        .map(|r| {
            let rerun = format!("cy8 trace --variety {} --primes {}", r.id, r.p);
            let b = Check::new("trace", format!("{} p={}", r.id, r.p), rerun);
            let residue = (r.trace + r.a_p).rem_euclid(r.p as i64);
            if r.level == Some(8) {
                b.verdict(
                    residue == 0,
                    "T = -a_p mod p",
                    format!(
                        "T = {}, a_p = {}, (T + a_p) mod p = {residue}",
                        r.trace, r.a_p
                    ),
                )
            } else {
                b.note(format!("level {:?}: a different newform", r.level))
                    .info(format!("T = {}", r.trace))
            }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HodgeRow {
    pub id: String,
    pub p: u64,
    pub raw: u64,
    pub correction: i64,
    pub resolved: i64,
    pub a_p: i64,
    /// `h11` as an integer or an exact fraction.
    pub h11: String,
}

pub fn hodge_rows(
    reg: &Registry,
    id: &str,
    primes: &[u64],
    f: &QSeries,
) -> Result<Vec<HodgeRow>, CountError> {
    let v = reg.get(id).map_err(|_| CountError::UnknownId(id.into()))?;
    if !matches!(
        v.shape,
        Shape::QuadricIntersection {
            small_resolution: true,
            ..
        }
    ) {
        return Err(CountError::Unsupported(format!(
            "{id}: resolved counts are only available for nodal quadric intersections"
        )));
    }
    primes
        .iter()
        .map(|&p| {
            let r = count_variety(reg, id, p, f.a(p as usize))?;
            let h11 = match h11_from_count(r.corrected, p, r.a_p) {
                Ok(h) => h.to_string(),
                Err(q) => q.to_string(),
            };
            Ok(HodgeRow {
                id: v.id.clone(),
                p,
                raw: r.raw,
                correction: r.corrected - r.raw as i64,
                resolved: r.corrected,
                a_p: r.a_p,
                h11,
            })
        })
        .collect()
}

pub fn hodge_checks(reg: &Registry, rows: &[HodgeRow]) -> Vec<Check> {
    rows.iter()
        .map(|r| {
            let expected = reg.get(&r.id).ok().and_then(|v| v.metadata.h11);
            let b = Check::new(
                "hodge",
                format!("{} h11 at p={}", r.id, r.p),
                format!("cy8 hodge --variety {} --primes {}", r.id, r.p),
            );
            match expected {
                Some(h) => b.published().compare(h, &r.h11),
                None => b.info(&r.h11),
            }
        })
        .collect()
}

pub fn euler_report(id: &str, primes: &[u64]) -> Result<EulerReport, cy8_core::euler::EulerError> {
    chi_resolved(&resolution_plan(id)?, primes)
}

pub fn euler_checks(id: &str) -> Vec<Check> {
    let rerun = format!("cy8 euler --variety {id}");
    let r = match euler_report(id, &DEFAULT_PRIMES) {
        Ok(r) => r,
        Err(e) => {
            return vec![
                Check::new("euler", format!("{id} pipeline"), rerun).error("a resolution plan", e)
            ]
        }
    };
    let published: &[(&str, i64)] = if id == "T40_3" {
        &[
            ("union of planes", 12),
            ("singular cover", -8),
            ("fourfold points", 48),
            ("double lines", 32),
            ("nodes", 8),
            ("resolved", 80),
        ]
    } else {
        &[]
    };
    let mut computed = vec![
        ("union of planes".to_string(), r.union_chi),
        ("singular cover".to_string(), r.singular_chi),
    ];
    computed.extend(r.corrections.iter().cloned());
    computed.push(("resolved".into(), r.resolved_chi));
    computed
        .into_iter()
        .map(|(name, value)| {
            let b = Check::new("euler", format!("{id} {name}"), rerun.clone());
            match published.iter().find(|(n, _)| *n == name) {
                Some((_, want)) => b.published().compare(want, value),
                None => b.info(value),
            }
        })
        .collect()
}

/// Everything `verify all` runs.
pub fn verify_all(reg: &Registry, primes: &[u64], progress: bool) -> VerificationReport {
    let f = newform_series();
    let mut report = VerificationReport::default();
    report.extend(modform_checks(&f));
    report.extend(fiber_table_checks());
    report.extend(map_checks(reg, None));
    report.extend(congruence_checks(
        reg,
        &congruence_ids(reg),
        primes,
        &f,
        progress,
    ));
    report.extend(euler_checks("T40_3"));
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_pipelines_pass() {
        let reg = Registry::builtin();
        let f = newform(100);
        let mut r = VerificationReport::default();
        r.extend(modform_checks(&f));
        r.extend(fiber_table_checks());
        r.extend(euler_checks("T40_3"));
        r.extend(congruence_checks(
            &reg,
            &congruence_ids(&reg),
            &[3, 5],
            &f,
            false,
        ));
        assert!(r.passed(), "{}", r.to_text());
    }

    #[test]
    fn hodge_reports_fractions_and_mismatches() {
        let reg = Registry::builtin();
        let f = newform(100);
        let rows = hodge_rows(&reg, "T32", &[5, 7], &f).unwrap();
        assert_eq!(rows[0].h11, "32");
        assert_eq!(rows[1].h11, "8");
        let c = hodge_checks(&reg, &rows);
        assert_eq!(c[1].status, crate::report::Status::Fail);
        assert!(hodge_rows(&reg, "T28", &[5], &f).is_err());
    }

    #[test]
    fn level_8_traces_pass_and_others_are_info() {
        let reg = Registry::builtin();
        let f = newform(100);
        let ids = vec!["T36".to_string(), "arr239".to_string()];
        let rows = trace_rows(&reg, &ids, &[5, 7], &f, false).unwrap();
        let checks = trace_checks(&rows);
        assert_eq!(checks.len(), 4);
        let mut r = VerificationReport::default();
        r.extend(checks);
        assert_eq!(r.count(crate::report::Status::Pass), 2);
        assert_eq!(r.count(crate::report::Status::Info), 2);
        assert!(rows
            .iter()
            .filter(|x| x.id == "T36")
            .all(|x| x.excess == Some(-1)));
    }
}
