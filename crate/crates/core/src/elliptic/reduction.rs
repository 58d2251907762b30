//! Reduction of a fibration modulo p and point counts on its fibers.

use thiserror::Error;

use super::WeierstrassModel;
use crate::ff::{FieldError, PrimeField};
use crate::symbolic::univariate::{modp, Qt, UPoly};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReductionError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("coefficients are not {0}-integral")]
    NonIntegral(u64),
    #[error("singular fibers collide modulo {0}")]
    Collision(u64),
    #[error("fiber types change modulo {0}")]
    TypeChange(u64),
}

/// Fiber point counts of one fibration over F_p.
#[derive(Clone, Debug)]
pub struct FiberCounter {
    field: PrimeField,
    finite: [Vec<u64>; 3],
    infinity: [u64; 3],
}

fn reduce_poly(p: &UPoly, f: &PrimeField) -> Result<Vec<u64>, ReductionError> {
    p.reduce(f).ok_or(ReductionError::NonIntegral(f.p()))
}

/// Value at s = 0 modulo p.
fn reduce_at_zero(a: &Qt, f: &PrimeField) -> Result<u64, ReductionError> {
    let n = f
        .reduce_rational(&a.num().coeff(0))
        .ok_or(ReductionError::NonIntegral(f.p()))?;
    let d = f
        .reduce_rational(&a.den().coeff(0))
        .ok_or(ReductionError::NonIntegral(f.p()))?;
    let di = f.inv(d).ok_or(ReductionError::NonIntegral(f.p()))?;
    Ok(f.mul(n, di))
}

fn degree(v: &[u64]) -> i64 {
    v.len() as i64 - 1
}

impl WeierstrassModel {
    /// Reduce modulo an odd prime, refusing primes where the configuration of
    /// singular fibers changes.
    pub fn reduce_mod(&self, p: u64) -> Result<FiberCounter, ReductionError> {
        let field = PrimeField::new(p)?;
        let g = self.global_minimal_model();
        let polys =
            [g.a2(), g.a4(), g.a6()].map(|a| a.as_poly().expect("global model is polynomial"));
        let finite = [
            reduce_poly(&polys[0], &field)?,
            reduce_poly(&polys[1], &field)?,
            reduce_poly(&polys[2], &field)?,
        ];
        let disc = g.discriminant().as_poly().unwrap();
        let dm = reduce_poly(&disc, &field)?;
        if degree(&dm) != disc.degree() {
            return Err(ReductionError::Collision(p));
        }
        let rad = disc.radical();
        let rm = reduce_poly(&rad, &field)?;
        if degree(&rm) != rad.degree()
            || degree(&modp::gcd(&rm, &modp::derivative(&rm, &field), &field)) > 0
        {
            return Err(ReductionError::Collision(p));
        }
        if let Some(c4) = g.c4().as_poly().filter(|c| !c.is_zero()) {
            let c4m = reduce_poly(&c4, &field)?;
            if degree(&modp::gcd(&rm, &c4m, &field)) != rad.gcd(&c4).degree() {
                return Err(ReductionError::TypeChange(p));
            }
        }
        let inf = self.infinity_model();
        let infinity = [
            reduce_at_zero(inf.a2(), &field)?,
            reduce_at_zero(inf.a4(), &field)?,
            reduce_at_zero(inf.a6(), &field)?,
        ];
        // the unit part of the discriminant at infinity must survive
        let s = UPoly::t();
        let v = inf.discriminant().valuation_at(&s).unwrap();
        let unit = inf.discriminant() * &Qt::from_poly(s.clone()).powi(-(v as i32));
        if reduce_at_zero(&unit, &field)? == 0 {
            return Err(ReductionError::Collision(p));
        }
        if inf.c4().valuation_at(&s) == Some(0) && reduce_at_zero(inf.c4(), &field)? == 0 {
            return Err(ReductionError::TypeChange(p));
        }
        Ok(FiberCounter {
            field,
            finite,
            infinity,
        })
    }
}

impl FiberCounter {
    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    pub fn p(&self) -> u64 {
        self.field.p()
    }

    /// `(a2, a4, a6)` of the fiber at `t0`, with `None` for infinity.
    pub fn coeffs_at(&self, t0: Option<u64>) -> [u64; 3] {
        match t0 {
            None => self.infinity,
            Some(t) => [0, 1, 2].map(|i| modp::eval(&self.finite[i], t, &self.field)),
        }
    }

    /// Projective points of the fiber cubic, twisted by a character value.
    pub fn count_twisted(&self, t0: Option<u64>, chi_d: i8) -> u64 {
        let f = &self.field;
        let [a2, a4, a6] = self.coeffs_at(t0);
        let mut n: i64 = 1;
        for x in 0..f.p() {
            let v = f.add(f.mul(f.add(f.mul(f.add(x, a2), x), a4), x), a6);
            n += 1 + (chi_d as i64) * (f.legendre(v) as i64);
        }
        n as u64
    }

    pub fn count(&self, t0: Option<u64>) -> u64 {
        self.count_twisted(t0, 1)
    }

    /// `p + 1 - #fiber`.
    pub fn trace(&self, t0: Option<u64>, chi_d: i8) -> i64 {
        self.p() as i64 + 1 - self.count_twisted(t0, chi_d) as i64
    }

    /// Whether the fiber cubic at `t0` is singular.
    pub fn is_singular(&self, t0: Option<u64>) -> bool {
        let f = &self.field;
        let [a2, a4, a6] = self.coeffs_at(t0);
        // discriminant of x^3 + a2 x^2 + a4 x + a6 up to the factor 16
        let m = |a: u64, b: u64| f.mul(a, b);
        let r = |x: i64| f.reduce_i64(x);
        let t1 = m(m(a2, a2), m(a4, a4));
        let t2 = m(r(4), m(a4, m(a4, a4)));
        let t3 = m(r(4), m(m(a2, m(a2, a2)), a6));
        let t4 = m(r(27), m(a6, a6));
        let t5 = m(r(18), m(m(a2, a4), a6));
        let d = f.add(f.sub(f.sub(f.sub(t1, t2), t3), t4), t5);
        d == 0
    }
}
