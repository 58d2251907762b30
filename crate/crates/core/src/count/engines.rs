use rayon::prelude::*;
use serde::Serialize;

use super::CountError;
use crate::elliptic::{FiberCounter, Mobius};
use crate::ff::{PrimeField, ReducedForm};
use crate::symbolic::poly::Poly;

/// Normalized representatives of P^3(F_p) whose leading 1 sits at `lead`,
/// with the `chunk`-th value in the first free coordinate.
fn for_each_in_chunk(p: u64, lead: usize, chunk: u64, mut f: impl FnMut(&[u64; 4])) {
    let mut pt = [0u64; 4];
    pt[lead] = 1;
    let free = 3 - lead;
    match free {
        0 => f(&pt),
        1 => {
            pt[3] = chunk;
            f(&pt)
        }
        _ => {
            pt[lead + 1] = chunk;
            let rest = free - 1;
            let total = p.pow(rest as u32);
            for k in 0..total {
                let mut r = k;
                for j in 0..rest {
                    pt[lead + 2 + j] = r % p;
                    r /= p;
                }
                f(&pt);
            }
        }
    }
}

/// Work items covering P^3(F_p): (lead position, chunk value).
fn chunks(p: u64) -> Vec<(usize, u64)> {
    let mut v = Vec::new();
    for lead in 0..4usize {
        if lead == 3 {
            v.push((3, 0));
        } else {
            v.extend((0..p).map(|c| (lead, c)));
        }
    }
    v
}

/// A branch octic, kept as a product of reduced factors.
#[derive(Clone, Debug)]
pub struct OcticCounter {
    field: PrimeField,
    factors: Vec<ReducedForm>,
    twist: u64,
}

impl OcticCounter {
    /// `w^2 = twist * prod factors`, the product being homogeneous of degree 8.
    pub fn new(factors: &[Poly], twist: i64, p: u64) -> Result<Self, CountError> {
        let field = PrimeField::new(p)?;
        let mut deg = 0;
        for (i, f) in factors.iter().enumerate() {
            if f.nvars() != 4 {
                return Err(CountError::Arity {
                    expected: 4,
                    got: f.nvars(),
                });
            }
            if f.is_zero() {
                return Err(CountError::ZeroForm(i));
            }
            if !f.is_homogeneous() {
                return Err(CountError::Degree {
                    expected: 8,
                    got: f.total_degree().unwrap_or(0),
                });
            }
            deg += f.total_degree().unwrap();
        }
        if deg != 8 {
            return Err(CountError::Degree {
                expected: 8,
                got: deg,
            });
        }
        let twist = field.reduce_i64(twist);
        if twist == 0 {
            return Err(CountError::BadPrime {
                p,
                reason: "twist constant vanishes".into(),
            });
        }
        let factors = factors
            .iter()
            .map(|f| ReducedForm::new(f, &field))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(OcticCounter {
            field,
            factors,
            twist,
        })
    }

    fn value(&self, pt: &[u64; 4]) -> u64 {
        let f = &self.field;
        let mut v = self.twist;
        for g in &self.factors {
            v = f.mul(v, g.eval(f, pt));
            if v == 0 {
                break;
            }
        }
        v
    }

    /// Contribution of one chunk of normalized points.
    pub fn count_chunk(&self, lead: usize, chunk: u64) -> u64 {
        let mut n = 0i64;
        for_each_in_chunk(self.field.p(), lead, chunk, |pt| {
            n += 1 + self.field.legendre(self.value(pt)) as i64;
        });
        n as u64
    }

    pub fn count(&self) -> u64 {
        chunks(self.field.p())
            .into_par_iter()
            .map(|(l, c)| self.count_chunk(l, c))
            .sum()
    }
}

/// `sum over P^3(F_p) of 1 + chi(c f(P))` for `f` the product of `factors`.
pub fn count_double_octic(factors: &[Poly], twist: i64, p: u64) -> Result<u64, CountError> {
    Ok(OcticCounter::new(factors, twist, p)?.count())
}

/// Oracle: points (x:y:z:t:w) of weighted P(1,1,1,1,4) with w^2 = c f, by
/// enumerating the affine cone and dividing by the scalar action.
pub fn brute_double_octic(f: &Poly, twist: i64, p: u64) -> Result<u64, CountError> {
    let field = PrimeField::new(p)?;
    let rf = ReducedForm::new(f, &field)?;
    let c = field.reduce_i64(twist);
    // cone points (v, w) with v != 0; lambda acts by (lambda v, lambda^4 w)
    let mut cone = 0u64;
    let mut sq = vec![0u32; p as usize];
    for w in 0..p {
        sq[field.mul(w, w) as usize] += 1;
    }
    for idx in 1..p.pow(4) {
        let v = [idx % p, (idx / p) % p, (idx / p / p) % p, idx / p / p / p];
        let val = field.mul(c, rf.eval(&field, &v));
        cone += sq[val as usize] as u64;
    }
    Ok(cone / (p - 1))
}

/// Four quadrics `u_i^2 = f_i(x, y, z, t)` in P^7.
#[derive(Clone, Debug)]
pub struct QuadricCounter {
    field: PrimeField,
    forms: Vec<ReducedForm>,
}

impl QuadricCounter {
    pub fn new(forms: &[Poly], p: u64) -> Result<Self, CountError> {
        let field = PrimeField::new(p)?;
        if forms.len() != 4 {
            return Err(CountError::Arity {
                expected: 4,
                got: forms.len(),
            });
        }
        for (i, f) in forms.iter().enumerate() {
            if f.nvars() != 4 {
                return Err(CountError::Arity {
                    expected: 4,
                    got: f.nvars(),
                });
            }
            if f.is_zero() {
                return Err(CountError::ZeroForm(i));
            }
            if !f.is_homogeneous() || f.total_degree() != Some(2) {
                return Err(CountError::Degree {
                    expected: 2,
                    got: f.total_degree().unwrap_or(0),
                });
            }
        }
        let forms = forms
            .iter()
            .map(|f| ReducedForm::new(f, &field))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(QuadricCounter { field, forms })
    }

    /// Cone points with first coordinate x = `x0`.
    pub fn cone_chunk(&self, x0: u64) -> u64 {
        let f = &self.field;
        let p = f.p();
        let mut n = 0u64;
        let mut pt = [x0, 0, 0, 0];
        for k in 0..p * p * p {
            pt[1] = k % p;
            pt[2] = (k / p) % p;
            pt[3] = k / p / p;
            let mut prod = 1u64;
            for g in &self.forms {
                prod *= f.sqrt_count(g.eval(f, &pt)) as u64;
                if prod == 0 {
                    break;
                }
            }
            n += prod;
        }
        n
    }

    pub fn cone_count(&self) -> u64 {
        (0..self.field.p())
            .into_par_iter()
            .map(|x| self.cone_chunk(x))
            .sum()
    }

    /// Projective count `(N_cone - 1)/(p - 1)`.
    pub fn count(&self) -> Result<u64, CountError> {
        let n = self.cone_count();
        let p = self.field.p();
        if n == 0 || (n - 1) % (p - 1) != 0 {
            return Err(CountError::DivisionCheck(n));
        }
        Ok((n - 1) / (p - 1))
    }
}

pub fn count_quadric_intersection(forms: &[Poly], p: u64) -> Result<u64, CountError> {
    QuadricCounter::new(forms, p)?.count()
}

/// Oracle: enumerate all of F_p^8 and divide out scalars.
pub fn brute_quadric_intersection(forms: &[Poly], p: u64) -> Result<u64, CountError> {
    let field = PrimeField::new(p)?;
    let rf = forms
        .iter()
        .map(|f| ReducedForm::new(f, &field))
        .collect::<Result<Vec<_>, _>>()?;
    let mut n = 0u64;
    for idx in 1..p.pow(8) {
        let mut v = [0u64; 8];
        let mut r = idx;
        for c in v.iter_mut() {
            *c = r % p;
            r /= p;
        }
        let x = [v[0], v[1], v[2], v[3]];
        if rf
            .iter()
            .enumerate()
            .all(|(i, g)| field.mul(v[4 + i], v[4 + i]) == g.eval(&field, &x))
        {
            n += 1;
        }
    }
    Ok(n / (p - 1))
}

/// Value histogram of `g(x, y) = (x + y)(xy + 1)/(xy)` over (F_p^*)^2.
pub fn fermi_histogram(p: u64) -> Result<Vec<u64>, CountError> {
    let f = PrimeField::new(p)?;
    let mut h = vec![0u64; p as usize];
    for x in 1..p {
        let xi = f.inv(x).unwrap();
        for y in 1..p {
            let num = f.mul(f.add(x, y), f.add(f.mul(x, y), 1));
            let v = f.mul(num, f.mul(xi, f.inv(y).unwrap()));
            h[v as usize] += 1;
        }
    }
    Ok(h)
}

/// Points of `g(x, y) = g(z, t)` in (F_p^*)^4.
pub fn count_fermi(p: u64) -> Result<u64, CountError> {
    Ok(fermi_histogram(p)?.iter().map(|h| h * h).sum())
}

/// Oracle: direct loop over (F_p^*)^4.
pub fn brute_fermi(p: u64) -> Result<u64, CountError> {
    let f = PrimeField::new(p)?;
    let g = |x: u64, y: u64| {
        let num = f.mul(f.add(x, y), f.add(f.mul(x, y), 1));
        f.mul(num, f.inv(f.mul(x, y)).unwrap())
    };
    let mut n = 0;
    for x in 1..p {
        for y in 1..p {
            let a = g(x, y);
            for z in 1..p {
                for t in 1..p {
                    if g(z, t) == a {
                        n += 1;
                    }
                }
            }
        }
    }
    Ok(n)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FiberProductCount {
    pub p: u64,
    /// `sum_t n1(t) n2(mu(t))`.
    pub raw: u64,
    /// `sum_t a1(t) a2(mu(t))`.
    pub trace: i64,
}

/// Image of a point of P^1(F_p) (None is infinity) under a Mobius map.
fn mobius_fp(m: &Mobius, t: Option<u64>, f: &PrimeField) -> Option<u64> {
    let r = |x: i64| f.reduce_i64(x);
    let (num, den) = match t {
        None => (r(m.a), r(m.c)),
        Some(t) => (
            f.add(f.mul(r(m.a), t), r(m.b)),
            f.add(f.mul(r(m.c), t), r(m.d)),
        ),
    };
    f.inv(den).map(|d| f.mul(num, d))
}

/// Raw count and trace of `left x_{P^1} mu^* (right twisted by chi_d)`.
pub fn count_fiber_product(
    left: &FiberCounter,
    right: &FiberCounter,
    mobius: &Mobius,
    chi_d: i8,
) -> Result<FiberProductCount, CountError> {
    let f = left.field();
    let p = f.p();
    assert_eq!(p, right.p(), "fibrations reduced at different primes");
    if f.reduce_i64(mobius.det()) == 0 {
        return Err(CountError::BadPrime {
            p,
            reason: "Mobius map degenerates".into(),
        });
    }
    if chi_d == 0 {
        return Err(CountError::BadPrime {
            p,
            reason: "twist constant vanishes".into(),
        });
    }
    let places: Vec<Option<u64>> = (0..p).map(Some).chain([None]).collect();
    let (raw, trace) = places
        .par_iter()
        .map(|&t| {
            let n1 = left.count(t) as i64;
            let n2 = right.count_twisted(mobius_fp(mobius, t, f), chi_d) as i64;
            let a1 = p as i64 + 1 - n1;
            let a2 = p as i64 + 1 - n2;
            (n1 * n2, a1 * a2)
        })
        .reduce(|| (0, 0), |x, y| (x.0 + y.0, x.1 + y.1));
    Ok(FiberProductCount {
        p,
        raw: raw as u64,
        trace,
    })
}

/// Oracle for [`count_fiber_product`]: enumerates the affine points
/// `d y^2 = x^3 + a2 x^2 + a4 x + a6` of every fiber pair, plus infinity.
pub fn brute_fiber_product(
    left: &FiberCounter,
    right: &FiberCounter,
    mobius: &Mobius,
    chi_d: i8,
) -> Result<u64, CountError> {
    let f = left.field();
    let p = f.p();
    if f.reduce_i64(mobius.det()) == 0 || chi_d == 0 {
        return Err(CountError::BadPrime {
            p,
            reason: "degenerate Mobius map or twist".into(),
        });
    }
    let d = if chi_d == 1 {
        1
    } else {
        (2..p)
            .find(|&a| f.legendre(a) == -1)
            .expect("odd p has a non-residue")
    };
    let points = |fc: &FiberCounter, t: Option<u64>, d: u64| {
        let [a2, a4, a6] = fc.coeffs_at(t);
        let mut n = 1u64;
        for x in 0..p {
            let rhs = f.add(
                f.add(f.add(f.pow(x, 3), f.mul(a2, f.mul(x, x))), f.mul(a4, x)),
                a6,
            );
            n += (0..p).filter(|&y| f.mul(d, f.mul(y, y)) == rhs).count() as u64;
        }
        n
    };
    Ok((0..p)
        .map(Some)
        .chain([None])
        .map(|t| points(left, t, 1) * points(right, mobius_fp(mobius, t, f), d))
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic::from_quartic;
    use crate::symbolic::poly::q;
    use proptest::prelude::*;

    fn v(i: usize) -> Poly {
        Poly::var(4, i)
    }

    fn t70_1() -> Vec<Poly> {
        vec![
            v(0),
            v(1),
            v(2),
            v(3),
            v(0) - v(1),
            v(1) - v(2),
            v(2) - v(3),
            v(3) - v(0),
        ]
    }

    #[test]
    fn t_to_the_eighth() {
        let f = vec![v(3).pow(8)];
        assert_eq!(count_double_octic(&f, 1, 3).unwrap(), 13 + 2 * 27);
    }

    #[test]
    fn octic_matches_weighted_enumeration() {
        let f = Poly::product(4, &t70_1());
        for p in [3u64, 5, 7] {
            for c in [1, -1, 2] {
                assert_eq!(
                    count_double_octic(&t70_1(), c, p).unwrap(),
                    brute_double_octic(&f, c, p).unwrap()
                );
            }
        }
    }

    #[test]
    fn octic_chunks_cover_projective_space() {
        for p in [3u64, 5] {
            let c = OcticCounter::new(&[Poly::one(4).scale(&q(1)), v(0).pow(8)], 1, p);
            // a constant factor is homogeneous of degree 0 and allowed
            let c = c.unwrap();
            let mut total = 0;
            for (l, k) in chunks(p) {
                for_each_in_chunk(p, l, k, |_| total += 1);
            }
            assert_eq!(total, 1 + p + p * p + p * p * p);
            assert!(c.count() <= 2 * total);
        }
    }

    #[test]
    fn wrong_degree_rejected() {
        assert!(matches!(
            count_double_octic(&[v(0).pow(7)], 1, 5),
            Err(CountError::Degree {
                expected: 8,
                got: 7
            })
        ));
        assert!(count_double_octic(&[v(0).pow(8)], 1, 2).is_err());
    }

    fn t40_3() -> Vec<Poly> {
        let s = |i: usize| v(i).pow(2);
        vec![s(0) - s(1), s(1) - s(2), s(2) - s(3), s(3) - s(0)]
    }

    fn t32() -> Vec<Poly> {
        let s = |i: usize| v(i).pow(2);
        (0..4)
            .map(|i| {
                let mut f = Poly::zero(4);
                for j in 0..4 {
                    let sign = if i == j { 2 } else { -2 };
                    f = f + s(j).scale(&q(sign));
                }
                f
            })
            .collect()
    }

    #[test]
    fn quadric_intersection_matches_cone_enumeration() {
        for forms in [t40_3(), t32()] {
            assert_eq!(
                count_quadric_intersection(&forms, 3).unwrap(),
                brute_quadric_intersection(&forms, 3).unwrap()
            );
        }
    }

    #[test]
    fn zero_form_rejected() {
        let mut f = t40_3();
        f[2] = Poly::zero(4);
        assert_eq!(
            count_quadric_intersection(&f, 5),
            Err(CountError::ZeroForm(2))
        );
    }

    #[test]
    fn fermi_histogram_matches_brute_force() {
        for p in [3u64, 5, 7, 11, 13] {
            assert_eq!(count_fermi(p).unwrap(), brute_fermi(p).unwrap());
            assert_eq!(
                fermi_histogram(p).unwrap().iter().sum::<u64>(),
                (p - 1) * (p - 1)
            );
        }
    }

    fn s5() -> Vec<Poly> {
        let l = |a, b, c| Poly::linear(&[a, b, c]);
        vec![l(1, 0, 0), l(0, 0, 1), l(1, 1, 0), l(1, 0, 1)]
    }

    #[test]
    fn fiber_product_raw_matches_pair_enumeration() {
        let m = from_quartic(&s5()).unwrap();
        let fc = m.reduce_mod(5).unwrap();
        let r = count_fiber_product(&fc, &fc, &Mobius::identity(), 1).unwrap();
        assert_eq!(
            r.raw,
            brute_fiber_product(&fc, &fc, &Mobius::identity(), 1).unwrap()
        );
        let mu = Mobius::new(2, 0, 1, -1).unwrap();
        for p in [3u64, 7] {
            let fc = m.reduce_mod(p).unwrap();
            for chi in [1, -1] {
                let r = count_fiber_product(&fc, &fc, &mu, chi).unwrap();
                assert_eq!(r.raw, brute_fiber_product(&fc, &fc, &mu, chi).unwrap());
            }
        }
    }

    #[test]
    fn degenerate_mobius_rejected() {
        let m = from_quartic(&s5()).unwrap();
        let fc = m.reduce_mod(5).unwrap();
        let mu = Mobius::new(1, 3, 1, -2).unwrap(); // det -5
        assert!(matches!(
            count_fiber_product(&fc, &fc, &mu, 1),
            Err(CountError::BadPrime { .. })
        ));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn quadric_count_symmetries(perm in Just([2usize, 0, 3, 1]), i in 0usize..4, c in 1i64..4) {
            let forms = t40_3();
            let base = count_quadric_intersection(&forms, 5).unwrap();
            let permuted: Vec<Poly> = perm.iter().map(|&j| forms[j].clone()).collect();
            prop_assert_eq!(count_quadric_intersection(&permuted, 5).unwrap(), base);
            let mut scaled = forms.clone();
            scaled[i] = scaled[i].scale(&q(c * c));
            prop_assert_eq!(count_quadric_intersection(&scaled, 5).unwrap(), base);
        }

        #[test]
        fn chunk_sums_are_order_independent(seed in 0u64..1000) {
            let c = OcticCounter::new(&t70_1(), 1, 7).unwrap();
            let mut items = chunks(7);
            // deterministic shuffle
            let n = items.len();
            for i in 0..n {
                let j = ((seed + 31 * i as u64) % n as u64) as usize;
                items.swap(i, j);
            }
            let s: u64 = items.iter().map(|&(l, k)| c.count_chunk(l, k)).sum();
            prop_assert_eq!(s, c.count());
        }
    }
}
