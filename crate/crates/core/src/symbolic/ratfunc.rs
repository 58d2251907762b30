use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Signed};

use super::poly::{Monomial, Poly};

/// Quotient of two polynomials over Q.
///
/// Normalization removes the common monomial factor, makes the denominator
/// primitive with positive leading coefficient, and collapses exact divisions
/// in either direction. There is no general multivariate gcd.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        assert_eq!(num.nvars(), den.nvars(), "ring mismatch");
        RatFunc { num, den }.normalize()
    }

    pub fn from_poly(p: Poly) -> Self {
        let n = p.nvars();
        RatFunc {
            num: p,
            den: Poly::one(n),
        }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    pub fn normalize(self) -> Self {
        let RatFunc { mut num, mut den } = self;
        let n = num.nvars();
        if num.is_zero() {
            return RatFunc {
                num,
                den: Poly::one(n),
            };
        }
        // common monomial factor
        let gn = num.monomial_gcd();
        let gd = den.monomial_gcd();
        let g = Monomial::new(
            gn.exps()
                .iter()
                .zip(gd.exps())
                .map(|(a, b)| *a.min(b))
                .collect(),
        );
        if !g.is_one() {
            num = Poly::from_terms(
                n,
                num.terms()
                    .map(|(m, c)| (m.div(&g).exps().to_vec(), c.clone())),
            );
            den = Poly::from_terms(
                n,
                den.terms()
                    .map(|(m, c)| (m.div(&g).exps().to_vec(), c.clone())),
            );
        }
        if let Some(q) = num.div_exact(&den) {
            return RatFunc {
                num: q,
                den: Poly::one(n),
            };
        }
        if let Some(q) = den.div_exact(&num) {
            let lc = q.leading().unwrap().1.clone();
            return RatFunc {
                num: Poly::constant(n, lc.recip()),
                den: q.scale(&lc.recip()),
            };
        }
        let lc = den.leading().unwrap().1.clone();
        let cd = den.content();
        let s = if lc.is_negative() {
            -BigRational::one()
        } else {
            BigRational::one()
        };
        let num = num.scale(&(&s / &cd));
        let den = den.scale(&(&s / &cd));
        RatFunc { num, den }
    }

    pub fn recip(&self) -> Self {
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    pub fn pow(&self, e: u32) -> Self {
        RatFunc::new(self.num.pow(e), self.den.pow(e))
    }

    /// Substitute rational functions for the variables.
    pub fn compose(&self, subs: &[RatFunc]) -> RatFunc {
        let (n1, d1) = substitute(&self.num, subs);
        let (n2, d2) = substitute(&self.den, subs);
        RatFunc::new(&n1 * &d2, &d1 * &n2)
    }

    pub fn display(&self, names: &[&str]) -> String {
        if self.is_polynomial() {
            let c = self.den.constant_value().unwrap();
            return self.num.scale(&c.recip()).display(names);
        }
        format!(
            "({})/({})",
            self.num.display(names),
            self.den.display(names)
        )
    }
}

/// Substitute rational functions into a polynomial, returning (numerator,
/// denominator) without cancellation. Terms share a common denominator built
/// from the distinct component denominators.
pub fn substitute(p: &Poly, subs: &[RatFunc]) -> (Poly, Poly) {
    assert_eq!(p.nvars(), subs.len(), "substitution arity");
    let target = subs.first().map(|s| s.nvars()).unwrap_or(0);
    // group variables by identical denominators
    let mut dens: Vec<Poly> = Vec::new();
    let mut which: Vec<usize> = Vec::with_capacity(subs.len());
    for s in subs {
        match dens.iter().position(|d| d == s.den()) {
            Some(k) => which.push(k),
            None => {
                dens.push(s.den().clone());
                which.push(dens.len() - 1);
            }
        }
    }
    let mut need = vec![0u32; dens.len()];
    for (m, _) in p.terms() {
        let mut per = vec![0u32; dens.len()];
        for (i, &e) in m.exps().iter().enumerate() {
            per[which[i]] += e;
        }
        for (a, b) in need.iter_mut().zip(per) {
            *a = (*a).max(b);
        }
    }
    let nums: Vec<Poly> = subs.iter().map(|s| s.num().clone()).collect();
    let mut num_pows: Vec<Vec<Poly>> = nums
        .iter()
        .map(|n| vec![Poly::one(target), n.clone()])
        .collect();
    let mut den_pows: Vec<Vec<Poly>> = dens
        .iter()
        .map(|d| vec![Poly::one(target), d.clone()])
        .collect();
    let power = |cache: &mut Vec<Poly>, base: &Poly, e: u32| -> Poly {
        while cache.len() <= e as usize {
            let next = cache.last().unwrap() * base;
            cache.push(next);
        }
        cache[e as usize].clone()
    };
    let mut acc = Poly::zero(target);
    for (m, c) in p.terms() {
        let mut t = Poly::constant(target, c.clone());
        let mut per = vec![0u32; dens.len()];
        for (i, &e) in m.exps().iter().enumerate() {
            if e > 0 {
                t = &t * &power(&mut num_pows[i], &nums[i], e);
                per[which[i]] += e;
            }
        }
        for k in 0..dens.len() {
            let missing = need[k] - per[k];
            if missing > 0 {
                t = &t * &power(&mut den_pows[k], &dens[k], missing);
            }
        }
        acc = acc + t;
    }
    let mut den = Poly::one(target);
    for k in 0..dens.len() {
        if need[k] > 0 {
            den = &den * &power(&mut den_pows[k], &dens[k], need[k]);
        }
    }
    (acc, den)
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})/({})", self.num, self.den)
    }
}

impl Add<&RatFunc> for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        if self.den == rhs.den {
            return RatFunc::new(&self.num + &rhs.num, self.den.clone());
        }
        RatFunc::new(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl Sub<&RatFunc> for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl Mul<&RatFunc> for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        RatFunc::new(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Div<&RatFunc> for &RatFunc {
    type Output = RatFunc;
    fn div(self, rhs: &RatFunc) -> RatFunc {
        self * &rhs.recip()
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::poly::q;
    use proptest::prelude::*;

    fn v(i: usize) -> Poly {
        Poly::var(2, i)
    }

    #[test]
    fn cancels_exact_divisions() {
        let r = RatFunc::new(v(0) * v(0) - v(1) * v(1), v(0) - v(1));
        assert!(r.is_polynomial());
        assert_eq!(r.num(), &(v(0) + v(1)));
        let s = RatFunc::new(v(0) * v(1), v(0) * v(0) * v(1));
        assert_eq!(s, RatFunc::new(Poly::one(2), v(0)));
    }

    #[test]
    fn substitute_clears_denominators() {
        // x + 1/x at x = a/b
        let x = Poly::var(1, 0);
        let p = x.pow(2) + Poly::one(1);
        let sub = RatFunc::new(v(0), v(1));
        let (n, d) = substitute(&p, &[sub]);
        assert_eq!(n, v(0) * v(0) + v(1) * v(1));
        assert_eq!(d, v(1) * v(1));
    }

    fn arb() -> impl Strategy<Value = RatFunc> {
        (
            proptest::collection::vec(-4i64..5, 3),
            proptest::collection::vec(-4i64..5, 3),
        )
            .prop_filter_map("nonzero den", |(a, b)| {
                let mk =
                    |c: &[i64]| Poly::int(2, c[0]) + v(0).scale(&q(c[1])) + v(1).scale(&q(c[2]));
                let d = mk(&b);
                (!d.is_zero()).then(|| RatFunc::new(mk(&a), d))
            })
    }

    proptest! {
        #[test]
        fn normalize_idempotent(r in arb()) {
            prop_assert_eq!(r.clone().normalize(), r);
        }

        #[test]
        fn field_identities(a in arb(), b in arb()) {
            let s = &a + &b;
            let back = &s - &b;
            // equality as fractions: cross-multiply
            prop_assert_eq!(back.num() * a.den(), a.num() * back.den());
            if !b.is_zero() {
                let m = &(&a / &b) * &b;
                prop_assert_eq!(m.num() * a.den(), a.num() * m.den());
            }
        }
    }
}
