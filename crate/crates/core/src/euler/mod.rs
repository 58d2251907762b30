//! Euler characteristics of iterated double covers branched along
//! hyperplane arrangements, by stratifying the base by incidence and
//! interpolating point counts over several primes.

mod t40_3;

use std::collections::{BTreeMap, BTreeSet};

use num_rational::Ratio;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::ff::{is_prime, FieldError, PrimeField, ReducedForm};
use crate::symbolic::poly::{q, Poly};

pub use t40_3::t40_3_plan;

/// Sampling primes: degree 3 needs four, the fifth validates.
pub const DEFAULT_PRIMES: [u64; 5] = [11, 13, 17, 19, 23];

/// How many times a stratification moves to larger primes after an
/// inconsistent interpolation.
const RETRIES: usize = 3;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EulerError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("form {index}: {message}")]
    Form { index: usize, message: String },
    #[error("forms {0} and {1} are proportional")]
    Proportional(usize, usize),
    #[error("bad grouping: {0}")]
    Grouping(String),
    #[error("need {need} primes to interpolate, got {got}")]
    NotEnoughPrimes { need: usize, got: usize },
    #[error("stratum {signature:?} has no consistent counting polynomial over {primes:?}")]
    Inconsistent {
        signature: Vec<usize>,
        primes: Vec<u64>,
    },
    #[error("no resolution plan for {0}")]
    MissingPlan(String),
    #[error("blow-up center {0}: {1}")]
    Center(String, String),
}

/// Ambient space of an arrangement.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Ambient {
    /// `P^n` with homogeneous coordinates `x_0 .. x_n`.
    Projective(usize),
    /// `P^1 x P^1` with coordinates `(a : b), (c : d)`.
    P1xP1,
}

impl Ambient {
    pub fn dimension(self) -> usize {
        match self {
            Ambient::Projective(n) => n,
            Ambient::P1xP1 => 2,
        }
    }

    pub fn nvars(self) -> usize {
        match self {
            Ambient::Projective(n) => n + 1,
            Ambient::P1xP1 => 4,
        }
    }

    pub fn euler(self) -> i64 {
        match self {
            Ambient::Projective(n) => n as i64 + 1,
            Ambient::P1xP1 => 4,
        }
    }

    fn for_each_point(self, p: u64, mut visit: impl FnMut(&[u64])) {
        match self {
            Ambient::Projective(n) => {
                let mut v = vec![0u64; n + 1];
                for lead in 0..=n {
                    v.iter_mut().for_each(|x| *x = 0);
                    v[lead] = 1;
                    let free = n - lead;
                    for idx in 0..p.pow(free as u32) {
                        let mut r = idx;
                        for x in &mut v[lead + 1..] {
                            *x = r % p;
                            r /= p;
                        }
                        visit(&v);
                    }
                }
            }
            Ambient::P1xP1 => {
                let line: Vec<[u64; 2]> = std::iter::once([0, 1])
                    .chain((0..p).map(|a| [1, a]))
                    .collect();
                for l in &line {
                    for r in &line {
                        visit(&[l[0], l[1], r[0], r[1]]);
                    }
                }
            }
        }
    }
}

/// Hypersurfaces in an ambient space, partitioned into branch groups.
///
/// The cover has one sheet doubling per group. A point lying on some member
/// of a group is a branch point for that group. An empty group never
/// branches and doubles the fiber everywhere. Groups whose divisor contains
/// the whole ambient space are left out, since they contribute a factor 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Arrangement {
    pub ambient: Ambient,
    pub forms: Vec<Poly>,
    pub groups: Vec<Vec<usize>>,
}

impl Arrangement {
    pub fn new(
        ambient: Ambient,
        forms: Vec<Poly>,
        groups: Vec<Vec<usize>>,
    ) -> Result<Self, EulerError> {
        if forms.len() > 32 {
            return Err(EulerError::Form {
                index: 32,
                message: "at most 32 hypersurfaces".into(),
            });
        }
        for (index, f) in forms.iter().enumerate() {
            let bad = |message: &str| EulerError::Form {
                index,
                message: message.into(),
            };
            if f.nvars() != ambient.nvars() {
                return Err(bad("wrong number of variables"));
            }
            if f.is_zero() || f.is_constant() {
                return Err(bad("form is constant"));
            }
            let homogeneous = match ambient {
                Ambient::Projective(_) => f.is_homogeneous(),
                Ambient::P1xP1 => {
                    f.weighted_degree(&[1, 1, 0, 0]).is_some()
                        && f.weighted_degree(&[0, 0, 1, 1]).is_some()
                }
            };
            if !homogeneous {
                return Err(bad("form is not homogeneous"));
            }
        }
        let monic: Vec<Poly> = forms.iter().map(Poly::monic).collect();
        for i in 0..forms.len() {
            for j in 0..i {
                if monic[i] == monic[j] {
                    return Err(EulerError::Proportional(j, i));
                }
            }
        }
        let mut seen = BTreeSet::new();
        for g in &groups {
            for &i in g {
                if i >= forms.len() {
                    return Err(EulerError::Grouping(format!("index {i} out of range")));
                }
                if !seen.insert(i) {
                    return Err(EulerError::Grouping(format!("form {i} is in two groups")));
                }
            }
        }
        Ok(Arrangement {
            ambient,
            forms,
            groups,
        })
    }

    /// The ambient space with no hypersurfaces and `empty_groups` unbranched
    /// groups: a trivial cover of degree `2^empty_groups`.
    pub fn trivial(ambient: Ambient, empty_groups: usize) -> Self {
        Arrangement {
            ambient,
            forms: Vec::new(),
            groups: vec![Vec::new(); empty_groups],
        }
    }

    /// Number of points of the cover over a point lying on exactly the
    /// hypersurfaces in `signature`.
    pub fn fiber_size(&self, signature: &[usize]) -> u64 {
        self.groups
            .iter()
            .map(|g| {
                if g.iter().any(|i| signature.contains(i)) {
                    1
                } else {
                    2
                }
            })
            .product()
    }

    fn histogram(&self, p: u64) -> Result<BTreeMap<u32, u64>, EulerError> {
        let field = PrimeField::new(p)?;
        let forms: Vec<ReducedForm> = self
            .forms
            .iter()
            .map(|f| ReducedForm::new(f, &field))
            .collect::<Result<_, _>>()?;
        let mut hist = BTreeMap::new();
        self.ambient.for_each_point(p, |v| {
            let mut sig = 0u32;
            for (i, f) in forms.iter().enumerate() {
                if f.eval(&field, v) == 0 {
                    sig |= 1 << i;
                }
            }
            *hist.entry(sig).or_insert(0) += 1;
        });
        Ok(hist)
    }
}

/// Points lying on exactly the hypersurfaces of `signature`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Stratum {
    pub signature: Vec<usize>,
    /// Counting polynomial in `p`, constant term first.
    pub poly: Vec<i64>,
    /// Value of the counting polynomial at 1.
    pub chi: i64,
    /// Raw counts `(p, #stratum(F_p))` used for the interpolation and check.
    pub counts: Vec<(u64, u64)>,
}

impl Stratum {
    pub fn eval(&self, p: i64) -> i64 {
        self.poly.iter().rev().fold(0, |acc, &c| acc * p + c)
    }
}

fn bits(sig: u32) -> Vec<usize> {
    (0..32).filter(|i| sig & (1 << i) != 0).collect()
}

/// Coefficients of the polynomial of degree < points.len() through the
/// given points, if they are integers.
fn interpolate(points: &[(u64, u64)]) -> Option<Vec<i64>> {
    type R = Ratio<i128>;
    let n = points.len();
    // Vandermonde system, Gauss-Jordan elimination
    let mut m: Vec<Vec<R>> = points
        .iter()
        .map(|&(x, y)| {
            let mut row: Vec<R> = (0..n)
                .map(|k| R::from_integer((x as i128).pow(k as u32)))
                .collect();
            row.push(R::from_integer(y as i128));
            row
        })
        .collect();
    for c in 0..n {
        let piv = (c..n).find(|&r| !m[r][c].is_zero())?;
        m.swap(c, piv);
        let inv = R::one() / m[c][c];
        for k in c..=n {
            m[c][k] *= inv;
        }
        for r in 0..n {
            if r != c && !m[r][c].is_zero() {
                let f = m[r][c];
                for k in c..=n {
                    let s = m[c][k] * f;
                    m[r][k] -= s;
                }
            }
        }
    }
    m.iter()
        .map(|row| row[n].is_integer().then(|| *row[n].numer() as i64))
        .collect()
}

fn stratify_once(arr: &Arrangement, primes: &[u64]) -> Result<Vec<Stratum>, EulerError> {
    let need = arr.ambient.dimension() + 1;
    if primes.len() < need {
        return Err(EulerError::NotEnoughPrimes {
            need,
            got: primes.len(),
        });
    }
    let hists: Vec<BTreeMap<u32, u64>> = primes
        .par_iter()
        .map(|&p| arr.histogram(p))
        .collect::<Result<_, _>>()?;
    let sigs: BTreeSet<u32> = hists.iter().flat_map(|h| h.keys().copied()).collect();
    let mut out = Vec::new();
    for sig in sigs {
        let counts: Vec<(u64, u64)> = primes
            .iter()
            .zip(&hists)
            .map(|(&p, h)| (p, h.get(&sig).copied().unwrap_or(0)))
            .collect();
        let inconsistent = || EulerError::Inconsistent {
            signature: bits(sig),
            primes: primes.to_vec(),
        };
        let mut poly = interpolate(&counts[..need]).ok_or_else(inconsistent)?;
        while poly.len() > 1 && poly.last() == Some(&0) {
            poly.pop();
        }
        let s = Stratum {
            signature: bits(sig),
            chi: poly.iter().sum(),
            poly,
            counts,
        };
        if s.counts.iter().any(|&(p, c)| s.eval(p as i64) != c as i64) {
            return Err(inconsistent());
        }
        if s.poly.iter().any(|&c| c != 0) {
            out.push(s);
        }
    }
    Ok(out)
}

/// Stratify the ambient space by incidence with the arrangement.
///
/// Counts are interpolated from the first `dim + 1` primes and checked at
/// the rest. On an inconsistency (a prime where the incidences differ from
/// characteristic zero) the whole window moves to larger primes, a few
/// times, before the error is returned.
pub fn stratify(arr: &Arrangement, primes: &[u64]) -> Result<Vec<Stratum>, EulerError> {
    let mut window = primes.to_vec();
    let mut last = None;
    for _ in 0..=RETRIES {
        match stratify_once(arr, &window) {
            Err(e @ EulerError::Inconsistent { .. }) => {
                last = Some(e);
                let mut next = window.iter().copied().max().unwrap_or(2) + 1;
                for slot in window.iter_mut() {
                    while !is_prime(next) {
                        next += 1;
                    }
                    *slot = next;
                    next += 1;
                }
            }
            other => return other,
        }
    }
    Err(last.expect("at least one attempt"))
}

/// Euler characteristic of the cover: fiber sizes weighted by stratum Euler
/// characteristics.
pub fn chi_cover(arr: &Arrangement, strata: &[Stratum]) -> i64 {
    strata
        .iter()
        .map(|s| arr.fiber_size(&s.signature) as i64 * s.chi)
        .sum()
}

/// Euler characteristics of the loci with a given fiber size.
pub fn chi_by_fiber(arr: &Arrangement, strata: &[Stratum]) -> BTreeMap<u64, i64> {
    let mut out = BTreeMap::new();
    for s in strata {
        *out.entry(arr.fiber_size(&s.signature)).or_insert(0) += s.chi;
    }
    out
}

/// A blow-up center together with what replaces it: both as arrangements
/// whose covers are the preimages in the double cover.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlowupCenter {
    pub label: String,
    pub center: Arrangement,
    pub exceptional: Arrangement,
}

/// `sum chi_cover(exceptional) - chi_cover(center)` over the centers.
pub fn blowup_correction(centers: &[BlowupCenter], primes: &[u64]) -> Result<i64, EulerError> {
    centers
        .iter()
        .map(|c| {
            let e = chi_cover(&c.exceptional, &stratify(&c.exceptional, primes)?);
            let z = chi_cover(&c.center, &stratify(&c.center, primes)?);
            Ok(e - z)
        })
        .sum()
}

/// Center data for a rational point `pt` of a projective arrangement: a
/// point, doubled once for every group not passing through it.
pub fn point_center(arr: &Arrangement, label: &str, pt: &[i64]) -> Result<Arrangement, EulerError> {
    let through = incidence(arr, label, pt)?;
    let free = arr
        .groups
        .iter()
        .filter(|g| !g.iter().any(|i| through.contains(i)))
        .count();
    Ok(Arrangement::trivial(Ambient::Projective(0), free))
}

fn incidence(arr: &Arrangement, label: &str, pt: &[i64]) -> Result<Vec<usize>, EulerError> {
    if pt.len() != arr.ambient.nvars() || !matches!(arr.ambient, Ambient::Projective(_)) {
        return Err(EulerError::Center(
            label.into(),
            "point does not fit the ambient space".into(),
        ));
    }
    let v: Vec<_> = pt.iter().map(|&c| q(c)).collect();
    Ok((0..arr.forms.len())
        .filter(|&i| arr.forms[i].eval(&v).is_zero())
        .collect())
}

/// Exceptional divisor of the blow-up of `P^3` at a rational point of the
/// arrangement, with the induced lines.
///
/// Every group must pass through the point with even multiplicity, so that
/// the exceptional plane is not itself a branch divisor.
pub fn point_blowup(
    arr: &Arrangement,
    label: &str,
    pt: &[i64],
) -> Result<BlowupCenter, EulerError> {
    let through = incidence(arr, label, pt)?;
    let Ambient::Projective(n) = arr.ambient else {
        unreachable!()
    };
    let k = pt
        .iter()
        .position(|&c| c != 0)
        .ok_or_else(|| EulerError::Center(label.into(), "zero point".into()))?;
    // tangent directions w with w_k = 0: forms lose the k-th variable
    let keep: Vec<usize> = (0..=n).filter(|&i| i != k).collect();
    let mut forms = Vec::new();
    let mut groups = Vec::new();
    for g in &arr.groups {
        let members: Vec<usize> = g.iter().copied().filter(|i| through.contains(i)).collect();
        if members.len() % 2 == 1 {
            return Err(EulerError::Center(
                label.into(),
                "a group passes through the point with odd multiplicity".into(),
            ));
        }
        let mut idx = Vec::new();
        for i in members {
            let f = arr.forms[i].specialize(k, &q(0));
            let lowered = Poly::from_terms(
                n,
                f.terms().map(|(m, c)| {
                    let e: Vec<u32> = keep.iter().map(|&v| m.exps()[v]).collect();
                    (e, c.clone())
                }),
            );
            idx.push(forms.len());
            forms.push(lowered);
        }
        groups.push(idx);
    }
    Ok(BlowupCenter {
        label: label.into(),
        center: point_center(arr, label, pt)?,
        exceptional: Arrangement::new(Ambient::Projective(n - 1), forms, groups)?,
    })
}

/// Small resolution of a node of the cover lying over `pt`: the node is
/// replaced by a rational curve.
pub fn node_resolution(
    arr: &Arrangement,
    label: &str,
    pt: &[i64],
) -> Result<BlowupCenter, EulerError> {
    let center = point_center(arr, label, pt)?;
    if !center.groups.is_empty() {
        return Err(EulerError::Center(
            label.into(),
            "the cover is not a single point here".into(),
        ));
    }
    Ok(BlowupCenter {
        label: label.into(),
        center,
        exceptional: Arrangement::trivial(Ambient::Projective(1), 0),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResolutionStep {
    pub label: String,
    pub centers: Vec<BlowupCenter>,
}

/// A double cover of an arrangement together with the blow-ups resolving it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResolutionPlan {
    pub variety: String,
    pub base: Arrangement,
    pub steps: Vec<ResolutionStep>,
}

impl ResolutionPlan {
    /// The same plan with the step called `label` dropped.
    pub fn without(&self, label: &str) -> ResolutionPlan {
        ResolutionPlan {
            steps: self
                .steps
                .iter()
                .filter(|s| s.label != label)
                .cloned()
                .collect(),
            ..self.clone()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EulerReport {
    pub variety: String,
    pub primes: Vec<u64>,
    /// Euler characteristic of the union of the hypersurfaces.
    pub union_chi: i64,
    pub complement_chi: i64,
    /// `(fiber size, chi of the locus with that fiber size)`.
    pub by_fiber: Vec<(u64, i64)>,
    pub singular_chi: i64,
    pub corrections: Vec<(String, i64)>,
    pub resolved_chi: i64,
    pub strata: Vec<Stratum>,
}

/// Euler characteristic of the singular cover plus every blow-up correction.
pub fn chi_resolved(plan: &ResolutionPlan, primes: &[u64]) -> Result<EulerReport, EulerError> {
    let strata = stratify(&plan.base, primes)?;
    let complement_chi: i64 = strata
        .iter()
        .filter(|s| s.signature.is_empty())
        .map(|s| s.chi)
        .sum();
    let union_chi = strata.iter().map(|s| s.chi).sum::<i64>() - complement_chi;
    let singular_chi = chi_cover(&plan.base, &strata);
    let corrections = plan
        .steps
        .iter()
        .map(|s| Ok((s.label.clone(), blowup_correction(&s.centers, primes)?)))
        .collect::<Result<Vec<_>, EulerError>>()?;
    Ok(EulerReport {
        variety: plan.variety.clone(),
        primes: primes.to_vec(),
        union_chi,
        complement_chi,
        by_fiber: chi_by_fiber(&plan.base, &strata)
            .into_iter()
            .rev()
            .collect(),
        singular_chi,
        resolved_chi: singular_chi + corrections.iter().map(|c| c.1).sum::<i64>(),
        corrections,
        strata,
    })
}

/// Built-in resolution plans by catalog id.
pub fn resolution_plan(id: &str) -> Result<ResolutionPlan, EulerError> {
    match id {
        "T40_3" => Ok(t40_3_plan()),
        _ => Err(EulerError::MissingPlan(id.into())),
    }
}
