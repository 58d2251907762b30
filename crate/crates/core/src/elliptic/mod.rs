//! Weierstrass models over Q(t), minimal models at places of P^1 and Kodaira
//! fiber types.
//!
//! Models are kept in the form `y^2 = x^3 + a2 x^2 + a4 x + a6`. The `a2` term is
//! never eliminated, so no factor of 3 enters the coefficients.

mod quartic;
mod reduction;

use std::cmp::Ordering;
use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::symbolic::poly::{q, Poly};
use crate::symbolic::ratfunc::RatFunc;
use crate::symbolic::univariate::{Qt, UPoly};
use crate::symbolic::verify::{self, Certificate, Evidence, RationalMap, VerifyError};

pub use quartic::from_quartic;
pub use reduction::{FiberCounter, ReductionError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EllipticError {
    #[error("discriminant vanishes identically")]
    Singular,
    #[error("sections {0} and {1} coincide")]
    RepeatedSection(usize, usize),
    #[error("branch data must be four linear forms in x, z, t")]
    BadQuartic,
    #[error("two-torsion quotient is degenerate (B = 0 or A^2 - 4B = 0)")]
    DegenerateTorsion,
    #[error("coefficients are not polynomial in t")]
    NotPolynomial,
    #[error("Mobius map is singular")]
    SingularMobius,
}

/// A closed point of P^1 over Q: a monic squarefree polynomial in t, or infinity.
///
/// Non-linear polynomials stand for a set of conjugate points sharing one
/// fiber type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Place {
    Finite(UPoly),
    Infinity,
}

impl Place {
    pub fn at(a: BigRational) -> Place {
        Place::Finite(UPoly::linear_root(&a))
    }

    pub fn at_int(a: i64) -> Place {
        Place::at(q(a))
    }

    /// Number of geometric points.
    pub fn degree(&self) -> u32 {
        match self {
            Place::Finite(p) => p.degree() as u32,
            Place::Infinity => 1,
        }
    }

    /// The rational coordinate, when the place has degree one.
    pub fn rational(&self) -> Option<BigRational> {
        match self {
            Place::Finite(p) if p.degree() == 1 => Some(-p.coeff(0) / p.coeff(1)),
            _ => None,
        }
    }

    fn sort_key(&self) -> (u8, i64, Option<BigRational>) {
        match self {
            Place::Finite(p) => (0, p.degree(), self.rational()),
            Place::Infinity => (1, 0, None),
        }
    }
}

impl PartialOrd for Place {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Place {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key()
            .cmp(&other.sort_key())
            .then_with(|| match (self, other) {
                (Place::Finite(a), Place::Finite(b)) => a.coeffs().cmp(b.coeffs()),
                _ => Ordering::Equal,
            })
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Infinity => write!(f, "inf"),
            Place::Finite(p) => match self.rational() {
                Some(a) => write!(f, "{a}"),
                None => write!(f, "[{}]", p.display_in("t")),
            },
        }
    }
}

impl Serialize for Place {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Kodaira fiber types, with the smooth fiber as `I(0)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum KodairaType {
    I(u32),
    IStar(u32),
    II,
    III,
    IV,
    IVStar,
    IIIStar,
    IIStar,
}

impl KodairaType {
    /// Euler number of the fiber.
    pub fn euler(self) -> u32 {
        match self {
            KodairaType::I(n) => n,
            KodairaType::IStar(n) => n + 6,
            KodairaType::II => 2,
            KodairaType::III => 3,
            KodairaType::IV => 4,
            KodairaType::IVStar => 8,
            KodairaType::IIIStar => 9,
            KodairaType::IIStar => 10,
        }
    }

    /// Classification from valuations on a minimal model in residue characteristic 0.
    pub fn classify(vc4: Option<i64>, vc6: Option<i64>, vdisc: i64) -> KodairaType {
        // a vanishing invariant has infinite valuation
        let c4 = vc4.unwrap_or(i64::MAX);
        let c6 = vc6.unwrap_or(i64::MAX);
        if vdisc == 0 {
            return KodairaType::I(0);
        }
        if c4 == 0 {
            return KodairaType::I(vdisc as u32);
        }
        match vdisc {
            2 => KodairaType::II,
            3 => KodairaType::III,
            4 => KodairaType::IV,
            6 if c4 >= 2 && c6 >= 3 => KodairaType::IStar(0),
            8 if c4 >= 3 => KodairaType::IVStar,
            9 if c4 >= 3 => KodairaType::IIIStar,
            10 if c4 >= 4 => KodairaType::IIStar,
            d => KodairaType::IStar((d - 6) as u32),
        }
    }

    /// Parse `I4`, `I0*`, `D6*`, `IV*` and the like.
    pub fn parse(s: &str) -> Option<KodairaType> {
        let s = s.trim();
        Some(match s {
            "II" => KodairaType::II,
            "III" => KodairaType::III,
            "IV" => KodairaType::IV,
            "IV*" => KodairaType::IVStar,
            "III*" => KodairaType::IIIStar,
            "II*" => KodairaType::IIStar,
            _ => {
                if let Some(n) = s.strip_prefix('D').and_then(|r| r.strip_suffix('*')) {
                    let n: u32 = n.parse().ok()?;
                    KodairaType::IStar(n.checked_sub(4)?)
                } else if let Some(n) = s.strip_prefix('I').and_then(|r| r.strip_suffix('*')) {
                    KodairaType::IStar(n.parse().ok()?)
                } else {
                    KodairaType::I(s.strip_prefix('I')?.parse().ok()?)
                }
            }
        })
    }

    /// The D-name of an `I_n*` fiber.
    pub fn d_alias(self) -> Option<String> {
        match self {
            KodairaType::IStar(n) => Some(format!("D{}*", n + 4)),
            _ => None,
        }
    }
}

impl fmt::Display for KodairaType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KodairaType::I(n) => write!(f, "I{n}"),
            KodairaType::IStar(n) => write!(f, "I{n}*"),
            KodairaType::II => write!(f, "II"),
            KodairaType::III => write!(f, "III"),
            KodairaType::IV => write!(f, "IV"),
            KodairaType::IVStar => write!(f, "IV*"),
            KodairaType::IIIStar => write!(f, "III*"),
            KodairaType::IIStar => write!(f, "II*"),
        }
    }
}

impl Serialize for KodairaType {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KodairaFiber {
    pub place: Place,
    pub kind: KodairaType,
    /// Euler number of one geometric fiber.
    pub euler: u32,
}

impl fmt::Display for KodairaFiber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind.d_alias() {
            Some(d) => write!(f, "{} ({d}) @ {}", self.kind, self.place),
            None => write!(f, "{} @ {}", self.kind, self.place),
        }
    }
}

/// Automorphism t -> (a t + b)/(c t + d) of P^1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mobius {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl Mobius {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Mobius, EllipticError> {
        if a * d - b * c == 0 {
            return Err(EllipticError::SingularMobius);
        }
        Ok(Mobius { a, b, c, d })
    }

    pub fn identity() -> Mobius {
        Mobius {
            a: 1,
            b: 0,
            c: 0,
            d: 1,
        }
    }

    pub fn det(&self) -> i64 {
        self.a * self.d - self.b * self.c
    }

    pub fn is_identity(&self) -> bool {
        self.b == 0 && self.c == 0 && self.a == self.d
    }

    pub fn as_qt(&self) -> Qt {
        Qt::new(
            UPoly::from_ints(&[self.b, self.a]),
            UPoly::from_ints(&[self.d, self.c]),
        )
    }

    /// Image of a place of degree one.
    pub fn apply_rational(&self, t: Option<&BigRational>) -> Option<BigRational> {
        let (num, den) = match t {
            None => (q(self.a), q(self.c)),
            Some(t) => (q(self.a) * t + q(self.b), q(self.c) * t + q(self.d)),
        };
        (!den.is_zero()).then(|| num / den)
    }
}

impl fmt::Display for Mobius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "t -> ({}t + {})/({}t + {})",
            self.a, self.b, self.c, self.d
        )
    }
}

/// `y^2 = x^3 + a2 x^2 + a4 x + a6` over Q(t).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeierstrassModel {
    a2: Qt,
    a4: Qt,
    a6: Qt,
    c4: Qt,
    c6: Qt,
    disc: Qt,
}

fn c_invariants(a2: &Qt, a4: &Qt, a6: &Qt) -> (Qt, Qt, Qt) {
    let k = |n: i64| Qt::from_int(n);
    let a2sq = a2 * a2;
    let c4 = &(&k(16) * &a2sq) - &(&k(48) * a4);
    let c6 = &(&(&k(-64) * &(&a2sq * a2)) + &(&k(288) * &(a2 * a4))) - &(&k(864) * a6);
    // b2 = 4 a2, b4 = 2 a4, b6 = 4 a6, b8 = 4 a2 a6 - a4^2
    let b8 = &(&k(4) * &(a2 * a6)) - &(a4 * a4);
    let disc = &(&(&(&k(-16) * &(&a2sq * &b8)) - &(&k(64) * &(&(a4 * a4) * a4)))
        - &(&k(432) * &(a6 * a6)))
        + &(&k(288) * &(&(a2 * a4) * a6));
    (c4, c6, disc)
}

impl WeierstrassModel {
    pub fn new(a2: Qt, a4: Qt, a6: Qt) -> Result<Self, EllipticError> {
        let (c4, c6, disc) = c_invariants(&a2, &a4, &a6);
        if disc.is_zero() {
            return Err(EllipticError::Singular);
        }
        let lhs = &(&(&c4 * &c4) * &c4) - &(&c6 * &c6);
        assert_eq!(lhs, &Qt::from_int(1728) * &disc, "c4^3 - c6^2 = 1728 disc");
        Ok(WeierstrassModel {
            a2,
            a4,
            a6,
            c4,
            c6,
            disc,
        })
    }

    /// From the general invariants `[a1, a2, a3, a4, a6]` by completing the square.
    pub fn from_a_invariants(a: [Qt; 5]) -> Result<Self, EllipticError> {
        let [a1, a2, a3, a4, a6] = a;
        let h = Qt::constant(BigRational::new(1.into(), 4.into()));
        let b2 = &(&a1 * &a1) + &(&Qt::from_int(4) * &a2);
        let b4 = &(&a1 * &a3) + &(&Qt::from_int(2) * &a4);
        let b6 = &(&a3 * &a3) + &(&Qt::from_int(4) * &a6);
        // y -> y - (a1 x + a3)/2 gives y^2 = x^3 + b2/4 x^2 + b4/2 x + b6/4
        WeierstrassModel::new(
            &b2 * &h,
            &b4 * &Qt::constant(BigRational::new(1.into(), 2.into())),
            &b6 * &h,
        )
    }

    /// `y^2 = x^3 + A x^2 + B x + C` with integer polynomial coefficients
    /// (lowest degree first).
    pub fn from_int_polys(a: &[i64], b: &[i64], c: &[i64]) -> Result<Self, EllipticError> {
        let f = |v: &[i64]| Qt::from_poly(UPoly::from_ints(v));
        WeierstrassModel::new(f(a), f(b), f(c))
    }

    pub fn a2(&self) -> &Qt {
        &self.a2
    }
    pub fn a4(&self) -> &Qt {
        &self.a4
    }
    pub fn a6(&self) -> &Qt {
        &self.a6
    }
    pub fn c4(&self) -> &Qt {
        &self.c4
    }
    pub fn c6(&self) -> &Qt {
        &self.c6
    }
    pub fn discriminant(&self) -> &Qt {
        &self.disc
    }

    pub fn j_invariant(&self) -> Qt {
        &(&(&self.c4 * &self.c4) * &self.c4) / &self.disc
    }

    /// The model after `x = u^2 x' + r`, `y = u^3 y'`.
    pub fn change_coordinates(&self, u: &Qt, r: &Qt) -> WeierstrassModel {
        let u2 = u * u;
        let u4 = &u2 * &u2;
        let u6 = &u4 * &u2;
        let three = Qt::from_int(3);
        let two = Qt::from_int(2);
        let a2 = &(&self.a2 + &(&three * r)) / &u2;
        let a4 = &(&(&self.a4 + &(&two * &(&self.a2 * r))) + &(&three * &(r * r))) / &u4;
        let a6 =
            &(&(&(&self.a6 + &(&self.a4 * r)) + &(&self.a2 * &(r * r))) + &(&(r * r) * r)) / &u6;
        WeierstrassModel::new(a2, a4, a6).expect("coordinate change preserves smoothness")
    }

    /// Scale by `u` with `u^i` dividing `a_i`: `a_i -> a_i / u^i`.
    pub fn rescale(&self, u: &Qt) -> WeierstrassModel {
        self.change_coordinates(u, &Qt::zero())
    }

    /// Substitute a rational function for the base parameter.
    pub fn compose(&self, r: &Qt) -> WeierstrassModel {
        WeierstrassModel::new(self.a2.compose(r), self.a4.compose(r), self.a6.compose(r))
            .expect("nonconstant base change keeps the discriminant nonzero")
    }

    pub fn pullback(&self, m: &Mobius) -> WeierstrassModel {
        self.compose(&m.as_qt())
    }

    /// Quadratic twist `d y^2 = f(x)`.
    pub fn quadratic_twist(&self, d: &Qt) -> WeierstrassModel {
        WeierstrassModel::new(
            &self.a2 * d,
            &(&self.a4 * d) * d,
            &(&(&self.a6 * d) * d) * d,
        )
        .expect("nonzero twist")
    }

    pub fn is_polynomial(&self) -> bool {
        self.a2.is_polynomial() && self.a4.is_polynomial() && self.a6.is_polynomial()
    }

    fn coeffs(&self) -> [&Qt; 3] {
        [&self.a2, &self.a4, &self.a6]
    }

    /// Minimal model at the finite place `pi` and the exponent `k` with
    /// `a_i(result) = a_i / pi^{i k}` up to translation.
    pub fn minimal_model_at(&self, pi: &UPoly) -> (WeierstrassModel, i64) {
        let pi = pi.monic();
        let mut k = 0i64;
        let mut model = self.clone();
        // integrality: multiply a_i by pi^{i m}
        let m = model
            .coeffs()
            .iter()
            .zip([2i64, 4, 6])
            .filter_map(|(a, w)| a.valuation_at(&pi).map(|v| ((-v).max(0) + w - 1) / w))
            .max()
            .unwrap_or(0)
            .max(0);
        if m > 0 {
            let u = Qt::from_poly(pi.pow(m as u32)).recip();
            model = model.rescale(&u);
            k -= m;
        }
        loop {
            let v = |x: &Qt| x.valuation_at(&pi).unwrap_or(i64::MAX);
            if !(v(&model.c4) >= 4 && v(&model.c6) >= 6 && v(&model.disc) >= 12) {
                return (model, k);
            }
            let r = translation_mod(&model.a2, &pi);
            model = model.change_coordinates(&Qt::from_poly(pi.clone()), &Qt::from_poly(r));
            k += 1;
        }
    }

    /// Model over Q[t] that is minimal at every finite place.
    pub fn global_minimal_model(&self) -> WeierstrassModel {
        // clear denominators with one scaling
        let mut den = UPoly::one();
        for a in self.coeffs() {
            let g = den.gcd(a.den());
            den = (&den * a.den()).div_exact(&g).unwrap();
        }
        let mut model = if den.is_constant() {
            self.clone()
        } else {
            self.rescale(&Qt::from_poly(den).recip())
        };
        loop {
            let n = nonminimal_locus(&model);
            if n.is_constant() {
                break;
            }
            let r = translation_mod(&model.a2, &n);
            model = model.change_coordinates(&Qt::from_poly(n), &Qt::from_poly(r));
        }
        debug_assert!(model.is_polynomial());
        model
    }

    /// Minimal model at infinity, in the local parameter s = 1/t.
    pub fn infinity_model(&self) -> WeierstrassModel {
        let g = self.global_minimal_model();
        let k = g
            .coeffs()
            .iter()
            .zip([2i64, 4, 6])
            .map(|(a, w)| {
                let d = a.num().degree().max(0);
                (d + w - 1) / w
            })
            .max()
            .unwrap_or(0);
        let s = Qt::t();
        let inv = s.recip();
        let f = |a: &Qt, w: i64| &a.compose(&inv) * &s.powi((w * k) as i32);
        let m = WeierstrassModel::new(f(&g.a2, 2), f(&g.a4, 4), f(&g.a6, 6))
            .expect("inversion keeps smoothness");
        m.minimal_model_at(&UPoly::t()).0
    }

    pub fn kodaira_type(&self, place: &Place) -> KodairaFiber {
        let (model, pi) = match place {
            Place::Finite(p) => (self.minimal_model_at(p).0, p.clone()),
            Place::Infinity => (self.infinity_model(), UPoly::t()),
        };
        let kind = KodairaType::classify(
            model.c4.valuation_at(&pi),
            model.c6.valuation_at(&pi),
            model.disc.valuation_at(&pi).unwrap(),
        );
        KodairaFiber {
            place: place.clone(),
            kind,
            euler: kind.euler(),
        }
    }

    /// All singular fibers: rational places, conjugate groups by minimal
    /// polynomial, and infinity.
    pub fn fiber_configuration(&self) -> Vec<KodairaFiber> {
        let g = self.global_minimal_model();
        let disc = g.disc.as_poly().unwrap();
        let mut pieces: Vec<UPoly> = Vec::new();
        for (f, _) in disc.squarefree_decomposition() {
            if !f.is_constant() {
                pieces.push(f.monic());
            }
        }
        for inv in [&g.c4, &g.c6] {
            if let Some(p) = inv.as_poly().filter(|p| !p.is_zero()) {
                pieces = refine(pieces, &p);
            }
        }
        // split off rational roots
        let mut places = Vec::new();
        for p in pieces {
            let mut rest = p.clone();
            for r in p.rational_roots() {
                let lin = UPoly::linear_root(&r);
                rest = rest.div_exact(&lin).unwrap();
                places.push(Place::Finite(lin));
            }
            if !rest.is_constant() {
                places.push(Place::Finite(rest.monic()));
            }
        }
        places.push(Place::Infinity);
        places.sort();
        places
            .iter()
            .map(|p| match p {
                Place::Finite(_) => g.kodaira_type(p),
                Place::Infinity => self.kodaira_type(p),
            })
            .filter(|f| f.kind != KodairaType::I(0))
            .collect()
    }

    /// Right-hand side `x^3 + a2 x^2 + a4 x + a6` in a ring with x at `xv` and t at `tv`.
    pub fn rhs_poly(&self, nvars: usize, xv: usize, tv: usize) -> Result<Poly, EllipticError> {
        let x = Poly::var(nvars, xv);
        let c = |a: &Qt| {
            a.as_poly()
                .map(|p| p.to_poly(nvars, tv))
                .ok_or(EllipticError::NotPolynomial)
        };
        Ok(x.pow(3) + &c(&self.a2)? * &x.pow(2) + &c(&self.a4)? * &x + c(&self.a6)?)
    }

    pub fn display(&self) -> String {
        let mut s = String::from("y^2 = x^3");
        for (c, m) in [(&self.a2, " x^2"), (&self.a4, " x"), (&self.a6, "")] {
            if !c.is_zero() {
                s.push_str(&format!(" + ({}){m}", c.display_in("t")));
            }
        }
        s
    }
}

/// The squarefree product of places with v(c4) >= 4, v(c6) >= 6, v(disc) >= 12.
fn nonminimal_locus(m: &WeierstrassModel) -> UPoly {
    let high = |x: &Qt, k: u32| -> Option<UPoly> {
        let p = x.as_poly()?;
        if p.is_zero() {
            return None;
        }
        let mut acc = UPoly::one();
        for (f, e) in p.squarefree_decomposition() {
            if e >= k {
                acc = &acc * &f;
            }
        }
        Some(acc)
    };
    let d = high(&m.disc, 12).unwrap();
    let mut n = d;
    for (x, k) in [(&m.c4, 4), (&m.c6, 6)] {
        if let Some(h) = high(x, k) {
            n = n.gcd(&h);
        }
    }
    n.monic()
}

/// Polynomial r with `a2 + 3 r = 0 mod pi^2`, for a2 integral at pi.
fn translation_mod(a2: &Qt, pi: &UPoly) -> UPoly {
    let m = pi.pow(2);
    let inv = inverse_mod(a2.den(), &m).expect("a2 integral at the place");
    let r = (&(a2.num() * &inv)).div_rem(&m).1;
    r.scale(&BigRational::new((-1).into(), 3.into()))
}

/// Inverse of `a` modulo `m` when coprime.
fn inverse_mod(a: &UPoly, m: &UPoly) -> Option<UPoly> {
    if m.degree() <= 0 {
        return Some(UPoly::zero());
    }
    let (mut r0, mut r1) = (m.clone(), a.div_rem(m).1);
    let (mut s0, mut s1) = (UPoly::zero(), UPoly::one());
    while !r1.is_zero() {
        let (qq, r) = r0.div_rem(&r1);
        let s = &s0 - &(&qq * &s1);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    if r0.degree() != 0 {
        return None;
    }
    let c = r0.coeff(0);
    Some(s0.scale(&c.recip()).div_rem(m).1)
}

/// Split squarefree pieces so that each has uniform multiplicity in `p`.
fn refine(pieces: Vec<UPoly>, p: &UPoly) -> Vec<UPoly> {
    let layers = p.squarefree_decomposition();
    let mut out = Vec::new();
    for piece in pieces {
        let mut rest = piece;
        for (f, _) in &layers {
            let g = rest.gcd(f);
            if !g.is_constant() {
                rest = rest.div_exact(&g).unwrap();
                out.push(g.monic());
            }
        }
        if !rest.is_constant() {
            out.push(rest.monic());
        }
    }
    out
}

/// Sum of local Euler numbers over all geometric singular fibers.
pub fn euler_sum(fibers: &[KodairaFiber]) -> u32 {
    fibers.iter().map(|f| f.euler * f.place.degree()).sum()
}

/// A 2-isogeny together with its coordinate formulas.
#[derive(Clone, Debug)]
pub struct TwoIsogeny {
    pub target: WeierstrassModel,
    /// `(X, Y)` in the ring (x, y, t).
    pub map: RationalMap,
    /// `x^3 + A x^2 + B x` and the target cubic in the ring (x, y, t).
    pub source_rhs: Poly,
    pub target_rhs: Poly,
}

/// Quotient of `y^2 = x^3 + A x^2 + B x` by the translation by (0, 0):
/// `Y^2 = (X + A)(X^2 - 4B)` via `X = x + B/x`, `Y = y (1 - B/x^2)`.
pub fn quotient_by_two_torsion(a: &Qt, b: &Qt) -> Result<TwoIsogeny, EllipticError> {
    if b.is_zero() || (&(a * a) - &(&Qt::from_int(4) * b)).is_zero() {
        return Err(EllipticError::DegenerateTorsion);
    }
    let four = Qt::from_int(4);
    let target = WeierstrassModel::new(a.clone(), -&(&four * b), -&(&four * &(a * b)))?;
    let (ap, bp) = match (a.as_poly(), b.as_poly()) {
        (Some(ap), Some(bp)) => (ap.to_poly(3, 2), bp.to_poly(3, 2)),
        _ => return Err(EllipticError::NotPolynomial),
    };
    let x = Poly::var(3, 0);
    let y = Poly::var(3, 1);
    let xm = RatFunc::new(x.pow(2) + bp.clone(), x.clone());
    let ym = RatFunc::new(&y * &(x.pow(2) - bp.clone()), x.pow(2));
    let source_rhs = x.pow(3) + &ap * &x.pow(2) + &bp * &x;
    let target_rhs = (&x + &ap) * (x.pow(2) - bp.scale(&q(4)));
    Ok(TwoIsogeny {
        target,
        map: RationalMap::new(vec![xm, ym]),
        source_rhs,
        target_rhs,
    })
}

impl TwoIsogeny {
    pub fn certify(&self) -> Result<Certificate, VerifyError> {
        verify::verify_isogeny(
            &self.map,
            &self.source_rhs,
            &self.target_rhs,
            &["x", "y", "t"],
        )
    }
}

/// Certify that `base` pulled back along `t -> s(t)` is isomorphic over Q(t)
/// to `target` by some `x = u^2 x' + r`.
pub fn verify_base_change(
    base: &WeierstrassModel,
    s: &Qt,
    target: &WeierstrassModel,
) -> Certificate {
    let pulled = base.compose(s);
    let fail = |detail: String| Certificate {
        passed: false,
        detail,
        residual: None,
        residual_terms: 0,
        evidence: None,
    };
    // c4 = u^4 c4', c6 = u^6 c6'
    let u2 = match (pulled.c4.is_zero(), pulled.c6.is_zero()) {
        (false, false) => {
            if target.c4.is_zero() || target.c6.is_zero() {
                return fail("c-invariants vanish on one side only".into());
            }
            &(&pulled.c6 / &target.c6) / &(&pulled.c4 / &target.c4)
        }
        _ => return fail("j-invariant 0 or 1728 is not supported".into()),
    };
    let Some(u) = u2.sqrt_exact() else {
        return fail(format!(
            "models differ by the quadratic twist ({})",
            u2.display_in("t")
        ));
    };
    let r = &(&(&u2 * &target.a2) - &pulled.a2) / &Qt::from_int(3);
    let moved = pulled.change_coordinates(&u, &r);
    let pairs: Vec<(Qt, Qt)> = moved
        .coeffs()
        .iter()
        .zip(target.coeffs())
        .map(|(a, b)| ((*a).clone(), (*b).clone()))
        .collect();
    let passed = pairs.iter().all(|(a, b)| a == b);
    Certificate {
        passed,
        detail: format!("u = {}, r = {}", u.display_in("t"), r.display_in("t")),
        residual: (!passed).then(|| {
            let d = &(moved.a6().clone()) - target.a6();
            d.display_in("t")
        }),
        residual_terms: usize::from(!passed),
        evidence: Some(Evidence::Coefficients { pairs }),
    }
}

/// The fibration `y^2 = x(x - (t^2 - 1))(x - t^2)`.
pub fn el2() -> WeierstrassModel {
    WeierstrassModel::from_int_polys(&[1, 0, -2], &[0, 0, -1, 0, 1], &[0]).unwrap()
}

/// The fibration `y^2 = x(x - (t - 1)^2)(x - (t + 1)^2)`.
pub fn el4() -> WeierstrassModel {
    // -(t-1)^2 - (t+1)^2 = -2 - 2t^2 ; (t-1)^2 (t+1)^2 = (t^2 - 1)^2
    WeierstrassModel::from_int_polys(&[-2, 0, -2], &[1, 0, -2, 0, 1], &[0]).unwrap()
}

/// `y^2 = (x + 1 - 2t^2)(x^2 - 4 t^2 (t^2 - 1))`.
pub fn x1128() -> WeierstrassModel {
    let a = Qt::from_poly(UPoly::from_ints(&[1, 0, -2]));
    let b = Qt::from_poly(UPoly::from_ints(&[0, 0, -1, 0, 1]));
    quotient_by_two_torsion(&a, &b).unwrap().target
}

#[cfg(test)]
mod tests;
