//! Dense univariate polynomials over Q and the rational function field Q(t).

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::poly::{q, Poly};
use crate::ff::PrimeField;

/// `c[i]` is the coefficient of `t^i`; no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UPoly {
    c: Vec<BigRational>,
}

impl UPoly {
    pub fn new(mut c: Vec<BigRational>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        UPoly { c }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        UPoly::new(c.iter().map(|&x| q(x)).collect())
    }

    pub fn zero() -> Self {
        UPoly { c: vec![] }
    }

    pub fn one() -> Self {
        UPoly::constant(BigRational::one())
    }

    pub fn constant(a: BigRational) -> Self {
        UPoly::new(vec![a])
    }

    /// The polynomial `t`.
    pub fn t() -> Self {
        UPoly::from_ints(&[0, 1])
    }

    /// `t - a`.
    pub fn linear_root(a: &BigRational) -> Self {
        UPoly::new(vec![-a.clone(), BigRational::one()])
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.c.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    /// Degree; the zero polynomial reports `-1`.
    pub fn degree(&self) -> i64 {
        self.c.len() as i64 - 1
    }

    pub fn lc(&self) -> BigRational {
        self.c.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn scale(&self, a: &BigRational) -> UPoly {
        UPoly::new(self.c.iter().map(|x| x * a).collect())
    }

    pub fn monic(&self) -> UPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.lc().recip())
    }

    pub fn shift(&self, k: usize) -> UPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = vec![BigRational::zero(); k];
        c.extend(self.c.iter().cloned());
        UPoly::new(c)
    }

    pub fn pow(&self, e: u32) -> UPoly {
        let mut r = UPoly::one();
        for _ in 0..e {
            r = &r * self;
        }
        r
    }

    pub fn eval(&self, a: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.c.iter().rev() {
            acc = acc * a + c;
        }
        acc
    }

    pub fn derivative(&self) -> UPoly {
        UPoly::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, x)| x * q(i as i64))
                .collect(),
        )
    }

    pub fn div_rem(&self, d: &UPoly) -> (UPoly, UPoly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let mut r = self.c.clone();
        let dd = d.c.len() - 1;
        let lc = d.lc();
        if r.len() < d.c.len() {
            return (UPoly::zero(), self.clone());
        }
        let mut qc = vec![BigRational::zero(); r.len() - dd];
        for i in (0..qc.len()).rev() {
            let coef = &r[i + dd] / &lc;
            if !coef.is_zero() {
                for (j, dj) in d.c.iter().enumerate() {
                    r[i + j] -= &coef * dj;
                }
            }
            qc[i] = coef;
        }
        r.truncate(dd);
        (UPoly::new(qc), UPoly::new(r))
    }

    pub fn div_exact(&self, d: &UPoly) -> Option<UPoly> {
        let (qt, r) = self.div_rem(d);
        r.is_zero().then_some(qt)
    }

    /// Monic gcd (zero if both are zero).
    pub fn gcd(&self, other: &UPoly) -> UPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn compose(&self, inner: &UPoly) -> UPoly {
        let mut acc = UPoly::zero();
        for c in self.c.iter().rev() {
            acc = &(&acc * inner) + &UPoly::constant(c.clone());
        }
        acc
    }

    /// Yun's square-free decomposition: monic factors with multiplicities.
    pub fn squarefree_decomposition(&self) -> Vec<(UPoly, u32)> {
        let mut out = Vec::new();
        if self.degree() < 1 {
            return out;
        }
        let f = self.monic();
        let fp = f.derivative();
        let a = f.gcd(&fp);
        let mut b = f.div_exact(&a).unwrap();
        let mut c = fp.div_exact(&a).unwrap();
        let mut d = &c - &b.derivative();
        let mut i = 1;
        loop {
            let g = b.gcd(&d);
            if g.degree() > 0 {
                out.push((g.clone(), i));
            }
            b = b.div_exact(&g).unwrap();
            if b.degree() < 1 {
                break;
            }
            c = d.div_exact(&g).unwrap();
            d = &c - &b.derivative();
            i += 1;
        }
        out
    }

    /// Product of the distinct monic irreducible factors.
    pub fn radical(&self) -> UPoly {
        self.squarefree_decomposition()
            .into_iter()
            .fold(UPoly::one(), |acc, (f, _)| &acc * &f)
    }

    /// Integer coefficients with gcd 1 and positive leading coefficient.
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return vec![];
        }
        let l = self.c.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
        let ints: Vec<BigInt> = self
            .c
            .iter()
            .map(|x| (x * BigRational::from_integer(l.clone())).to_integer())
            .collect();
        let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
        let sign = if ints.last().unwrap().is_negative() {
            -BigInt::one()
        } else {
            BigInt::one()
        };
        ints.into_iter().map(|x| x / &g * &sign).collect()
    }

    /// Distinct rational roots, ascending.
    pub fn rational_roots(&self) -> Vec<BigRational> {
        let mut roots = Vec::new();
        if self.degree() < 1 {
            return roots;
        }
        let mut f = self.radical();
        if f.coeff(0).is_zero() {
            roots.push(BigRational::zero());
            f = f.div_exact(&UPoly::t()).unwrap();
        }
        if f.degree() >= 1 {
            let ints = f.primitive_integer();
            let a0 = ints[0].abs();
            let an = ints.last().unwrap().abs();
            let num_divs = divisors(&a0);
            let den_divs = divisors(&an);
            for n in &num_divs {
                for d in &den_divs {
                    if n.gcd(d) != BigInt::one() {
                        continue;
                    }
                    for s in [1i64, -1] {
                        let r = BigRational::new(n * BigInt::from(s), d.clone());
                        if f.eval(&r).is_zero() && !roots.contains(&r) {
                            roots.push(r);
                        }
                    }
                }
            }
        }
        roots.sort();
        roots
    }

    /// Exact square root when `self` is a square in Q[t].
    pub fn sqrt_exact(&self) -> Option<UPoly> {
        if self.is_zero() {
            return Some(UPoly::zero());
        }
        let n = self.degree();
        if n % 2 != 0 {
            return None;
        }
        let m = (n / 2) as usize;
        let lead = rational_sqrt(&self.lc())?;
        // determine coefficients from the top down
        let mut r = vec![BigRational::zero(); m + 1];
        r[m] = lead.clone();
        let two_lead = &lead * q(2);
        for k in (0..m).rev() {
            // coefficient of t^(m+k) in r^2 must match
            let idx = m + k;
            let mut s = BigRational::zero();
            for i in (k + 1)..=m {
                let j = idx as i64 - i as i64;
                if j > k as i64 && (j as usize) <= m {
                    s += &r[i] * &r[j as usize];
                }
            }
            r[k] = (self.coeff(idx) - s) / &two_lead;
        }
        let cand = UPoly::new(r);
        (&cand * &cand == *self).then_some(cand)
    }

    /// Multiplicity of `pi` in `self` (`self` nonzero).
    pub fn valuation(&self, pi: &UPoly) -> u32 {
        assert!(!self.is_zero());
        let mut v = 0;
        let mut f = self.clone();
        while let Some(g) = f.div_exact(pi) {
            f = g;
            v += 1;
        }
        v
    }

    /// Whether every coefficient is p-integral.
    pub fn is_p_integral(&self, p: u64) -> bool {
        let pb = BigInt::from(p);
        self.c.iter().all(|x| !x.denom().is_multiple_of(&pb))
    }

    /// Reduction mod p (coefficients must be p-integral).
    pub fn reduce(&self, field: &PrimeField) -> Option<Vec<u64>> {
        let mut out: Vec<u64> = Vec::with_capacity(self.c.len());
        for x in &self.c {
            out.push(field.reduce_rational(x)?);
        }
        while out.last() == Some(&0) {
            out.pop();
        }
        Some(out)
    }

    pub fn to_poly(&self, nvars: usize, var: usize) -> Poly {
        let mut p = Poly::zero(nvars);
        for (i, c) in self.c.iter().enumerate() {
            let mut e = vec![0; nvars];
            e[var] = i as u32;
            p.add_term(super::poly::Monomial::new(e), c.clone());
        }
        p
    }

    pub fn display_in(&self, var: &str) -> String {
        let p = self.to_poly(1, 0);
        p.display(&[var])
    }
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    if n.is_zero() {
        return vec![BigInt::one()];
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            small.push(d.clone());
            let e = &n / &d;
            if e != d {
                large.push(e);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

/// Square root of a nonnegative rational square.
pub fn rational_sqrt(a: &BigRational) -> Option<BigRational> {
    if a.is_negative() {
        return None;
    }
    let n = a.numer().sqrt();
    let d = a.denom().sqrt();
    (&n * &n == *a.numer() && &d * &d == *a.denom()).then(|| BigRational::new(n, d))
}

/// Polynomial arithmetic over F_p on coefficient vectors (no trailing zeros).
pub mod modp {
    use crate::ff::PrimeField;

    fn trim(mut v: Vec<u64>) -> Vec<u64> {
        while v.last() == Some(&0) {
            v.pop();
        }
        v
    }

    pub fn rem(a: &[u64], b: &[u64], f: &PrimeField) -> Vec<u64> {
        let mut r = a.to_vec();
        let db = b.len() - 1;
        let inv = f.inv(b[db]).expect("nonzero leading coefficient");
        while r.len() > db {
            let k = r.len() - 1;
            let c = f.mul(r[k], inv);
            for (j, &bj) in b.iter().enumerate() {
                let i = k - db + j;
                r[i] = f.sub(r[i], f.mul(c, bj));
            }
            r = trim(r);
        }
        trim(r)
    }

    pub fn gcd(a: &[u64], b: &[u64], f: &PrimeField) -> Vec<u64> {
        let mut a = trim(a.to_vec());
        let mut b = trim(b.to_vec());
        while !b.is_empty() {
            let r = rem(&a, &b, f);
            a = b;
            b = r;
        }
        a
    }

    pub fn derivative(a: &[u64], f: &PrimeField) -> Vec<u64> {
        trim(
            a.iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| f.mul(c, i as u64 % f.p()))
                .collect(),
        )
    }

    pub fn eval(a: &[u64], x: u64, f: &PrimeField) -> u64 {
        a.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c))
    }
}

impl Add<&UPoly> for &UPoly {
    type Output = UPoly;
    fn add(self, rhs: &UPoly) -> UPoly {
        let n = self.c.len().max(rhs.c.len());
        UPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub<&UPoly> for &UPoly {
    type Output = UPoly;
    fn sub(self, rhs: &UPoly) -> UPoly {
        let n = self.c.len().max(rhs.c.len());
        UPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul<&UPoly> for &UPoly {
    type Output = UPoly;
    fn mul(self, rhs: &UPoly) -> UPoly {
        if self.is_zero() || rhs.is_zero() {
            return UPoly::zero();
        }
        let mut c = vec![BigRational::zero(); self.c.len() + rhs.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.c.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        UPoly::new(c)
    }
}

impl Neg for &UPoly {
    type Output = UPoly;
    fn neg(self) -> UPoly {
        self.scale(&-BigRational::one())
    }
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in("t"))
    }
}

/// Element of Q(t): reduced fraction with monic denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Qt {
    num: UPoly,
    den: UPoly,
}

impl Qt {
    pub fn new(num: UPoly, den: UPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Qt::zero();
        }
        let g = num.gcd(&den);
        let num = num.div_exact(&g).unwrap();
        let den = den.div_exact(&g).unwrap();
        let lc = den.lc();
        Qt {
            num: num.scale(&lc.recip()),
            den: den.scale(&lc.recip()),
        }
    }

    pub fn zero() -> Self {
        Qt {
            num: UPoly::zero(),
            den: UPoly::one(),
        }
    }

    pub fn one() -> Self {
        Qt::from_poly(UPoly::one())
    }

    pub fn t() -> Self {
        Qt::from_poly(UPoly::t())
    }

    pub fn from_int(a: i64) -> Self {
        Qt::from_poly(UPoly::from_ints(&[a]))
    }

    pub fn constant(a: BigRational) -> Self {
        Qt::from_poly(UPoly::constant(a))
    }

    pub fn from_poly(p: UPoly) -> Self {
        Qt {
            num: p,
            den: UPoly::one(),
        }
    }

    pub fn num(&self) -> &UPoly {
        &self.num
    }

    pub fn den(&self) -> &UPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.degree() == 0
    }

    pub fn as_poly(&self) -> Option<UPoly> {
        self.is_polynomial()
            .then(|| self.num.scale(&self.den.lc().recip()))
    }

    pub fn constant_value(&self) -> Option<BigRational> {
        (self.is_polynomial() && self.num.is_constant()).then(|| self.num.coeff(0) / self.den.lc())
    }

    pub fn recip(&self) -> Qt {
        assert!(!self.is_zero(), "inverse of zero");
        Qt::new(self.den.clone(), self.num.clone())
    }

    pub fn powi(&self, e: i32) -> Qt {
        let base = if e < 0 { self.recip() } else { self.clone() };
        let mut r = Qt::one();
        for _ in 0..e.unsigned_abs() {
            r = &r * &base;
        }
        r
    }

    pub fn scale(&self, a: &BigRational) -> Qt {
        Qt::new(self.num.scale(a), self.den.clone())
    }

    pub fn eval(&self, a: &BigRational) -> Option<BigRational> {
        let d = self.den.eval(a);
        (!d.is_zero()).then(|| self.num.eval(a) / d)
    }

    /// Substitute `t -> r(t)`.
    pub fn compose(&self, r: &Qt) -> Qt {
        // evaluate numerator and denominator as rational functions of r
        let horner = |p: &UPoly| {
            let mut acc = Qt::zero();
            for c in p.coeffs().iter().rev() {
                acc = &(&acc * r) + &Qt::constant(c.clone());
            }
            acc
        };
        &horner(&self.num) / &horner(&self.den)
    }

    /// Order of vanishing along the squarefree polynomial `pi` (one root suffices
    /// when all roots of `pi` behave alike).
    pub fn valuation_at(&self, pi: &UPoly) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        Some(self.num.valuation(pi) as i64 - self.den.valuation(pi) as i64)
    }

    /// Order of vanishing at t = infinity.
    pub fn valuation_at_infinity(&self) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        Some(self.den.degree() - self.num.degree())
    }

    /// Exact square root in Q(t).
    pub fn sqrt_exact(&self) -> Option<Qt> {
        // the denominator is monic, so any scalar sits in the numerator
        let n = self.num.sqrt_exact()?;
        let d = self.den.sqrt_exact()?;
        Some(Qt::new(n, d))
    }

    pub fn display_in(&self, var: &str) -> String {
        if self.is_polynomial() {
            let p = self.as_poly().unwrap();
            return p.display_in(var);
        }
        format!(
            "({})/({})",
            self.num.display_in(var),
            self.den.display_in(var)
        )
    }
}

impl fmt::Display for Qt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in("t"))
    }
}

impl Add<&Qt> for &Qt {
    type Output = Qt;
    fn add(self, rhs: &Qt) -> Qt {
        if self.den == rhs.den {
            return Qt::new(&self.num + &rhs.num, self.den.clone());
        }
        Qt::new(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl Sub<&Qt> for &Qt {
    type Output = Qt;
    fn sub(self, rhs: &Qt) -> Qt {
        self + &(-rhs)
    }
}

impl Mul<&Qt> for &Qt {
    type Output = Qt;
    fn mul(self, rhs: &Qt) -> Qt {
        Qt::new(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Div<&Qt> for &Qt {
    type Output = Qt;
    fn div(self, rhs: &Qt) -> Qt {
        self * &rhs.recip()
    }
}

impl Neg for &Qt {
    type Output = Qt;
    fn neg(self) -> Qt {
        Qt {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

macro_rules! qt_owned {
    ($tr:ident, $f:ident) => {
        impl $tr<Qt> for Qt {
            type Output = Qt;
            fn $f(self, rhs: Qt) -> Qt {
                (&self).$f(&rhs)
            }
        }
    };
}
qt_owned!(Add, add);
qt_owned!(Sub, sub);
qt_owned!(Mul, mul);
qt_owned!(Div, div);

/// Convert a rational to an `i64` when it is a small integer.
pub fn small_int(a: &BigRational) -> Option<i64> {
    a.is_integer().then(|| a.to_integer().to_i64()).flatten()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::poly::qr;
    use proptest::prelude::*;

    fn up(c: &[i64]) -> UPoly {
        UPoly::from_ints(c)
    }

    #[test]
    fn gcd_and_division() {
        let a = &up(&[-1, 1]) * &up(&[2, 1]);
        let b = &up(&[-1, 1]) * &up(&[3, 0, 1]);
        assert_eq!(a.gcd(&b), up(&[-1, 1]));
        let (qt, r) = b.div_rem(&a);
        assert_eq!(&(&qt * &a) + &r, b);
    }

    #[test]
    fn squarefree_and_roots() {
        // t^2 (t^2 - 1)^3 (t^2 + 1)
        let f = &(&up(&[0, 0, 1]) * &up(&[-1, 0, 1]).pow(3)) * &up(&[1, 0, 1]);
        let sf = f.squarefree_decomposition();
        let mults: Vec<u32> = sf.iter().map(|(_, m)| *m).collect();
        assert_eq!(mults, vec![1, 2, 3]);
        assert_eq!(f.rational_roots(), vec![q(-1), q(0), q(1)]);
        let g = &up(&[-1, 2]) * &up(&[3, 4]);
        assert_eq!(g.rational_roots(), vec![qr(-3, 4), qr(1, 2)]);
    }

    #[test]
    fn exact_square_roots() {
        let r = up(&[3, -2, 5]);
        assert_eq!(r.pow(2).sqrt_exact(), Some(r.clone()));
        assert_eq!((-&r).pow(2).sqrt_exact(), Some(r));
        assert!(up(&[1, 0, 2]).sqrt_exact().is_none());
        let f = Qt::new(up(&[0, 0, 4]), up(&[1, 2, 1]));
        let s = f.sqrt_exact().unwrap();
        assert_eq!(&s * &s, f);
    }

    #[test]
    fn qt_valuations_and_compose() {
        let f = Qt::new(&up(&[0, 1]).pow(3) * &up(&[1, 1]), up(&[-1, 0, 1]));
        assert_eq!(f.valuation_at(&up(&[0, 1])), Some(3));
        assert_eq!(f.valuation_at(&up(&[-1, 1])), Some(-1));
        assert_eq!(f.valuation_at_infinity(), Some(-2));
        let s = Qt::t().recip();
        let g = f.compose(&s);
        assert_eq!(g.valuation_at(&up(&[0, 1])), Some(-2));
    }

    #[test]
    fn modp_gcd_detects_repeated_roots() {
        let f = PrimeField::new(5).unwrap();
        // (t-1)^2 (t+1) mod 5
        let p = up(&[-1, 1]).pow(2);
        let p = &p * &up(&[1, 1]);
        let v = p.reduce(&f).unwrap();
        let g = modp::gcd(&v, &modp::derivative(&v, &f), &f);
        assert_eq!(g.len(), 2);
    }

    proptest! {
        #[test]
        fn qt_field_axioms(a in proptest::collection::vec(-5i64..6, 1..4),
                           b in proptest::collection::vec(-5i64..6, 1..4),
                           c in proptest::collection::vec(-5i64..6, 1..4)) {
            let a = Qt::from_poly(up(&a));
            let b = Qt::new(up(&b), up(&[1, 0, 1]));
            let c = Qt::new(up(&c), up(&[2, 1]));
            prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
            if !b.is_zero() {
                prop_assert_eq!(&(&a / &b) * &b, a.clone());
            }
            // normalization is idempotent
            let n = Qt::new(a.num().clone(), a.den().clone());
            prop_assert_eq!(n, a);
        }
    }
}
