//! Eta-product q-expansions, Hecke structure checks and quadratic twists.

use std::ops::{Add, Mul};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::ff::{is_fundamental_discriminant, is_prime, kronecker};

/// Default truncation order for the newform.
pub const DEFAULT_ORDER: usize = 1000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModformError {
    #[error("leading exponent {0} is not an integer")]
    NonIntegralExponent(Ratio<i64>),
    #[error("{0} is not a fundamental discriminant")]
    NotFundamental(i64),
    #[error("eta scale must be positive")]
    BadScale,
    #[error("truncation order must be at least 1")]
    BadOrder,
}

/// Power series `sum a_n q^n` known through `q^order`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QSeries {
    coeffs: Vec<BigInt>,
}

impl QSeries {
    /// Series with the given coefficients `a_0..a_N`.
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        assert!(!coeffs.is_empty());
        QSeries { coeffs }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        QSeries::new(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn one(order: usize) -> Self {
        let mut c = vec![BigInt::zero(); order + 1];
        c[0] = BigInt::one();
        QSeries { coeffs: c }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// `a_n`, or `None` beyond the truncation order.
    pub fn coeff(&self, n: usize) -> Option<&BigInt> {
        self.coeffs.get(n)
    }

    /// `a_n` as i64; panics beyond the order or on overflow.
    pub fn a(&self, n: usize) -> i64 {
        self.coeffs[n].to_i64().expect("coefficient exceeds i64")
    }

    pub fn truncate(&self, order: usize) -> QSeries {
        let mut c = self.coeffs.clone();
        c.resize(order + 1, BigInt::zero());
        QSeries { coeffs: c }
    }

    /// In place multiplication by `(1 - q^k)^e`, e may be negative.
    fn mul_binomial(&mut self, k: usize, e: i64) {
        let n = self.coeffs.len();
        if k >= n {
            return;
        }
        if e >= 0 {
            for _ in 0..e {
                for i in (k..n).rev() {
                    let t = self.coeffs[i - k].clone();
                    self.coeffs[i] -= t;
                }
            }
        } else {
            // 1/(1 - q^k) = sum q^{jk}
            for _ in 0..(-e) {
                for i in k..n {
                    let t = self.coeffs[i - k].clone();
                    self.coeffs[i] += t;
                }
            }
        }
    }

    /// Multiply by `q^s`, dropping terms past the order.
    fn shift(&self, s: usize) -> QSeries {
        let n = self.coeffs.len();
        let mut c = vec![BigInt::zero(); n];
        for i in s..n {
            c[i] = self.coeffs[i - s].clone();
        }
        QSeries { coeffs: c }
    }
}

impl Add for &QSeries {
    type Output = QSeries;
    fn add(self, rhs: &QSeries) -> QSeries {
        let n = self.coeffs.len().min(rhs.coeffs.len());
        QSeries {
            coeffs: (0..n).map(|i| &self.coeffs[i] + &rhs.coeffs[i]).collect(),
        }
    }
}

impl Mul for &QSeries {
    type Output = QSeries;
    fn mul(self, rhs: &QSeries) -> QSeries {
        let n = self.coeffs.len().min(rhs.coeffs.len());
        let coeffs = (0..n)
            .map(|k| {
                (0..=k)
                    .filter(|&i| !self.coeffs[i].is_zero())
                    .map(|i| &self.coeffs[i] * &rhs.coeffs[k - i])
                    .sum()
            })
            .collect();
        QSeries { coeffs }
    }
}

/// `eta(m tau)^e`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EtaFactor {
    pub m: u32,
    pub e: i32,
}

impl EtaFactor {
    pub fn new(m: u32, e: i32) -> Self {
        EtaFactor { m, e }
    }
}

/// The product part of an eta quotient and its fractional q-power.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaExpansion {
    pub series: QSeries,
    pub prefactor: Ratio<i64>,
}

/// `prod (1 - q^{mn})` through `q^order`, paired with the exponent m/24.
pub fn eta_expansion(m: u32, order: usize) -> Result<EtaExpansion, ModformError> {
    if m == 0 {
        return Err(ModformError::BadScale);
    }
    if order == 0 {
        return Err(ModformError::BadOrder);
    }
    let mut s = QSeries::one(order);
    let step = m as usize;
    let mut k = step;
    while k <= order {
        s.mul_binomial(k, 1);
        k += step;
    }
    Ok(EtaExpansion {
        series: s,
        prefactor: Ratio::new(m as i64, 24),
    })
}

/// The q-expansion of `prod eta(m_i tau)^{e_i}` through `q^order`.
pub fn eta_product(factors: &[EtaFactor], order: usize) -> Result<QSeries, ModformError> {
    if order == 0 {
        return Err(ModformError::BadOrder);
    }
    let mut lead = Ratio::from_integer(0i64);
    for f in factors {
        if f.m == 0 {
            return Err(ModformError::BadScale);
        }
        lead += Ratio::new(f.m as i64 * f.e as i64, 24);
    }
    if !lead.is_integer() {
        return Err(ModformError::NonIntegralExponent(lead));
    }
    let lead = lead.to_integer();
    if lead < 0 {
        // a pole at the cusp cannot be stored as a power series
        return Err(ModformError::NonIntegralExponent(Ratio::from_integer(lead)));
    }
    let lead = lead as usize;
    let mut s = QSeries::one(order);
    if lead > order {
        return Ok(QSeries::new(vec![BigInt::zero(); order + 1]));
    }
    for f in factors {
        let step = f.m as usize;
        let mut k = step;
        while k <= order - lead {
            s.mul_binomial(k, f.e as i64);
            k += step;
        }
    }
    Ok(s.shift(lead))
}

/// `eta(2 tau)^4 eta(4 tau)^4`.
pub fn newform(order: usize) -> QSeries {
    eta_product(&[EtaFactor::new(2, 4), EtaFactor::new(4, 4)], order)
        .expect("weight four level eight eta product is integral")
}

/// A failed Hecke relation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub n: usize,
    pub relation: String,
    pub expected: String,
    pub actual: String,
}

/// Check multiplicativity and the prime-power recursions through the order.
/// Violations are returned as data.
pub fn hecke_check(f: &QSeries, weight: u32, bad_primes: &[u64]) -> Vec<Violation> {
    let n = f.order();
    let mut out = Vec::new();
    let a = |k: usize| &f.coeffs()[k];
    if n >= 1 && !a(1).is_one() {
        out.push(Violation {
            n: 1,
            relation: "a_1 = 1".into(),
            expected: "1".into(),
            actual: a(1).to_string(),
        });
    }
    // multiplicativity on coprime factorizations m*k with 1 < m < k
    for m in 2..=n {
        for k in (m + 1)..=(n / m) {
            if m.gcd(&k) == 1 {
                let want = a(m) * a(k);
                if *a(m * k) != want {
                    out.push(Violation {
                        n: m * k,
                        relation: format!("a_{} = a_{} a_{}", m * k, m, k),
                        expected: want.to_string(),
                        actual: a(m * k).to_string(),
                    });
                }
            }
        }
    }
    for p in 2..=n {
        if !is_prime(p as u64) {
            continue;
        }
        let bad = bad_primes.contains(&(p as u64));
        let pw = BigInt::from(p).pow(weight - 1);
        let mut prev = 1usize;
        let mut cur = p;
        while cur * p <= n {
            let next = cur * p;
            let want = if bad {
                a(p) * a(cur)
            } else {
                a(p) * a(cur) - &pw * a(prev)
            };
            if *a(next) != want {
                out.push(Violation {
                    n: next,
                    relation: format!("a_{} from a_{}", next, cur),
                    expected: want.to_string(),
                    actual: a(next).to_string(),
                });
            }
            prev = cur;
            cur = next;
        }
    }
    out
}

/// Quadratic twist by the Kronecker character of a fundamental discriminant.
pub fn twist(f: &QSeries, d: i64) -> Result<QSeries, ModformError> {
    if !is_fundamental_discriminant(d) {
        return Err(ModformError::NotFundamental(d));
    }
    if d == 1 {
        return Ok(f.clone());
    }
    let coeffs = f
        .coeffs()
        .iter()
        .enumerate()
        .map(|(n, c)| {
            if n == 0 {
                c.clone()
            } else {
                c * BigInt::from(kronecker(d, n as i64))
            }
        })
        .collect();
    Ok(QSeries::new(coeffs))
}

/// Good primes p <= order with |a_p| > 2 p^{(k-1)/2}.
pub fn deligne_violations(f: &QSeries, weight: u32, bad_primes: &[u64]) -> Vec<u64> {
    (2..=f.order() as u64)
        .filter(|&p| is_prime(p) && !bad_primes.contains(&p))
        .filter(|&p| {
            // a_p^2 <= 4 p^{k-1}
            let ap = &f.coeffs()[p as usize];
            ap * ap > BigInt::from(4) * BigInt::from(p).pow(weight - 1)
        })
        .collect()
}

/// Odd primes p <= order with a_p odd.
pub fn odd_coefficient_primes(f: &QSeries) -> Vec<u64> {
    (3..=f.order() as u64)
        .filter(|&p| is_prime(p) && f.coeffs()[p as usize].is_odd())
        .collect()
}

/// `(n, a_n)` rows for n = 1..=order.
pub fn coefficient_rows(f: &QSeries) -> Vec<(usize, BigInt)> {
    f.coeffs()
        .iter()
        .enumerate()
        .skip(1)
        .map(|(n, c)| (n, c.clone()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Oracle: naive truncated product of explicit polynomials.
    fn naive_product(factors: &[(u32, i32)], order: usize) -> Vec<i64> {
        let mut s = vec![0i64; order + 1];
        s[0] = 1;
        let lead: i32 = factors.iter().map(|(m, e)| *m as i32 * e).sum::<i32>() / 24;
        for &(m, e) in factors {
            let mut n = 1;
            while (m as usize) * n <= order {
                let k = m as usize * n;
                for _ in 0..e {
                    let old = s.clone();
                    for i in k..=order {
                        s[i] = old[i] - old[i - k];
                    }
                }
                n += 1;
            }
        }
        let mut out = vec![0i64; order + 1];
        for i in 0..=order {
            if i >= lead as usize {
                out[i] = s[i - lead as usize];
            }
        }
        out
    }

    fn ints(s: &QSeries) -> Vec<i64> {
        s.coeffs().iter().map(|c| c.to_i64().unwrap()).collect()
    }

    #[test]
    fn pentagonal_expansion() {
        let e = eta_expansion(1, 5).unwrap();
        assert_eq!(ints(&e.series), vec![1, -1, -1, 0, 0, 1]);
        assert_eq!(e.prefactor, Ratio::new(1, 24));
        assert_eq!(
            ints(&eta_expansion(2, 3).unwrap().series),
            vec![1, 0, -1, 0]
        );
        assert_eq!(ints(&eta_expansion(4, 3).unwrap().series), vec![1, 0, 0, 0]);
    }

    #[test]
    fn pentagonal_signs_deep() {
        let e = eta_expansion(1, 2000).unwrap();
        let mut pent = std::collections::BTreeMap::new();
        for k in -40i64..=40 {
            let g = k * (3 * k - 1) / 2;
            pent.insert(g, if k % 2 == 0 { 1 } else { -1 });
        }
        for (n, c) in ints(&e.series).into_iter().enumerate() {
            assert_eq!(c, *pent.get(&(n as i64)).unwrap_or(&0), "n = {n}");
        }
    }

    #[test]
    fn newform_table() {
        let f = newform(73);
        let table = [
            (1, 1),
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
            (31, -160),
            (73, 154),
        ];
        for (p, ap) in table {
            assert_eq!(f.a(p), ap, "a_{p}");
        }
        assert_eq!(f.a(0), 0);
        assert_eq!(ints(&newform(2)), vec![0, 1, 0]);
    }

    #[test]
    fn delta_function() {
        let d = eta_product(&[EtaFactor::new(1, 24)], 10).unwrap();
        assert_eq!(ints(&d), naive_product(&[(1, 24)], 10));
        assert_eq!(&ints(&d)[..5], &[0, 1, -24, 252, -1472]);
    }

    #[test]
    fn inverse_factors_match_series_inversion() {
        // eta(tau)^{-1} eta(tau)^{25} = Delta
        let a = eta_product(&[EtaFactor::new(1, 25), EtaFactor::new(1, -1)], 30).unwrap();
        let b = eta_product(&[EtaFactor::new(1, 24)], 30).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn fractional_exponent_rejected() {
        assert!(matches!(
            eta_product(&[EtaFactor::new(1, 1)], 5),
            Err(ModformError::NonIntegralExponent(_))
        ));
    }

    #[test]
    fn hecke_structure() {
        let f = newform(DEFAULT_ORDER);
        assert!(hecke_check(&f, 4, &[2]).is_empty());
        assert_eq!(f.a(15), 8);
        assert_eq!(f.a(9), -11);
        assert!(deligne_violations(&f, 4, &[2]).is_empty());
        assert!(odd_coefficient_primes(&f).is_empty());
    }

    #[test]
    fn hecke_detects_corruption() {
        let mut c = newform(60).coeffs().to_vec();
        c[9] += 1;
        let v = hecke_check(&QSeries::new(c), 4, &[2]);
        assert!(v.iter().any(|x| x.n == 9));
        assert!(v.iter().any(|x| x.n == 45));
    }

    #[test]
    fn twists() {
        let f = newform(50);
        assert_eq!(twist(&f, 1).unwrap(), f);
        let g = twist(&f, -4).unwrap();
        assert_eq!(g.a(3), 4);
        assert_eq!(twist(&f, 8).unwrap().a(2), 0);
        assert!(matches!(
            twist(&f, 20),
            Err(ModformError::NotFundamental(20))
        ));
        // twists stay Hecke eigenforms away from 2 and d
        assert!(hecke_check(&twist(&f, 5).unwrap(), 4, &[2, 5]).is_empty());
    }

    proptest! {
        #[test]
        fn eta_product_matches_naive(e1 in 0i32..5, e2 in 0i32..5, e3 in 0i32..4) {
            // choose the m=1 exponent to make the leading power integral
            let s = 2 * e1 + 4 * e2 + 3 * e3;
            let e0 = (24 - s % 24) % 24;
            let fs = [(1, e0), (2, e1), (4, e2), (3, e3)];
            let got = eta_product(&fs.map(|(m, e)| EtaFactor::new(m, e)), 25).unwrap();
            prop_assert_eq!(ints(&got), naive_product(&fs, 25));
        }

        #[test]
        fn series_product_matches_eta_product(a in 1i32..4, b in 1i32..4) {
            let fa = eta_product(&[EtaFactor::new(1, 24 * a)], 40).unwrap();
            let fb = eta_product(&[EtaFactor::new(1, 24 * b)], 40).unwrap();
            let fab = eta_product(&[EtaFactor::new(1, 24 * (a + b))], 40).unwrap();
            prop_assert_eq!(&fa * &fb, fab);
        }
    }
}
