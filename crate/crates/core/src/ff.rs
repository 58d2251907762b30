//! Prime fields of odd characteristic and the quadratic character.
//!
//! Elements are plain `u64` residues in `[0, p)`. Every counting engine in the
//! crate funnels through [`PrimeField::legendre`], so the character is a table
//! lookup for `p <= 2^16`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::symbolic::Poly;

/// Largest characteristic accepted; keeps products of two residues in `u64`.
pub const MAX_PRIME: u64 = 1 << 31;
const TABLE_LIMIT: u64 = 1 << 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("p = 2 is not supported (every level-8 variety has bad reduction at 2)")]
    Two,
    #[error("{0} is not an odd prime")]
    NotPrime(u64),
    #[error("{0} exceeds the supported characteristic bound")]
    TooLarge(u64),
    #[error("form has {expected} variables but the point has {got} coordinates")]
    Arity { expected: usize, got: usize },
    #[error("coefficient denominator divisible by p = {0}")]
    NonIntegral(u64),
}

/// Deterministic Miller-Rabin for 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % q == 0 {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut b: u64, mut e: u64| {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = mulmod(r, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        r
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Odd primes in `lo..=hi`.
pub fn odd_primes(lo: u64, hi: u64) -> Vec<u64> {
    (lo.max(3)..=hi).filter(|&n| is_prime(n)).collect()
}

/// Arithmetic context for F_p.
#[derive(Debug, Clone)]
pub struct PrimeField {
    p: u64,
    chi: Option<Vec<i8>>,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if p == 2 {
            return Err(FieldError::Two);
        }
        if p > MAX_PRIME {
            return Err(FieldError::TooLarge(p));
        }
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        let chi = (p <= TABLE_LIMIT).then(|| {
            let mut t = vec![-1i8; p as usize];
            t[0] = 0;
            for u in 1..=(p - 1) / 2 {
                t[((u * u) % p) as usize] = 1;
            }
            t
        });
        Ok(PrimeField { p, chi })
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    pub fn pow(&self, mut b: u64, mut e: u64) -> u64 {
        let mut r = 1;
        b %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        r
    }

    /// Inverse of a nonzero element.
    pub fn inv(&self, a: u64) -> Option<u64> {
        (a % self.p != 0).then(|| self.pow(a, self.p - 2))
    }

    pub fn reduce_i64(&self, a: i64) -> u64 {
        a.rem_euclid(self.p as i64) as u64
    }

    pub fn reduce_big(&self, a: &BigInt) -> u64 {
        let m = BigInt::from(self.p);
        a.mod_floor(&m).to_u64().expect("residue fits in u64")
    }

    /// Reduce a rational number; `None` when p divides the denominator.
    pub fn reduce_rational(&self, q: &num_rational::BigRational) -> Option<u64> {
        let d = self.reduce_big(q.denom());
        let di = self.inv(d)?;
        Some(self.mul(self.reduce_big(q.numer()), di))
    }

    /// Quadratic character with values in {-1, 0, 1}.
    #[inline]
    pub fn legendre(&self, a: u64) -> i8 {
        match &self.chi {
            Some(t) => t[(a % self.p) as usize],
            None => {
                let a = a % self.p;
                if a == 0 {
                    0
                } else if self.pow(a, (self.p - 1) / 2) == 1 {
                    1
                } else {
                    -1
                }
            }
        }
    }

    /// Number of square roots of `a` in F_p, i.e. `1 + chi(a)`.
    #[inline]
    pub fn sqrt_count(&self, a: u64) -> u32 {
        (1 + self.legendre(a) as i32) as u32
    }

    /// One square root (Tonelli-Shanks), if any.
    pub fn sqrt(&self, a: u64) -> Option<u64> {
        let p = self.p;
        let a = a % p;
        if a == 0 {
            return Some(0);
        }
        if self.legendre(a) != 1 {
            return None;
        }
        if p % 4 == 3 {
            return Some(self.pow(a, (p + 1) / 4));
        }
        let mut q = p - 1;
        let mut s = 0;
        while q % 2 == 0 {
            q /= 2;
            s += 1;
        }
        let z = (2..p).find(|&z| self.legendre(z) == -1).unwrap();
        let mut m = s;
        let mut c = self.pow(z, q);
        let mut t = self.pow(a, q);
        let mut r = self.pow(a, (q + 1) / 2);
        while t != 1 {
            let mut i = 0;
            let mut tt = t;
            while tt != 1 {
                tt = self.mul(tt, tt);
                i += 1;
            }
            let b = self.pow(c, 1 << (m - i - 1));
            m = i;
            c = self.mul(b, b);
            t = self.mul(t, c);
            r = self.mul(r, b);
        }
        Some(r)
    }

    /// Number of points of P^n(F_p).
    pub fn projective_points(&self, n: u32) -> u64 {
        (0..=n).map(|i| self.p.pow(i)).sum()
    }
}

/// A polynomial with coefficients reduced into F_p, ready for fast evaluation.
#[derive(Debug, Clone)]
pub struct ReducedForm {
    nvars: usize,
    max_exp: Vec<u32>,
    terms: Vec<(Vec<u32>, u64)>,
}

impl ReducedForm {
    pub fn new(f: &Poly, field: &PrimeField) -> Result<Self, FieldError> {
        let nvars = f.nvars();
        let mut max_exp = vec![0u32; nvars];
        let mut terms = Vec::with_capacity(f.len());
        for (m, c) in f.terms() {
            let c = field
                .reduce_rational(c)
                .ok_or(FieldError::NonIntegral(field.p()))?;
            if c == 0 {
                continue;
            }
            for (i, &e) in m.exps().iter().enumerate() {
                max_exp[i] = max_exp[i].max(e);
            }
            terms.push((m.exps().to_vec(), c));
        }
        Ok(ReducedForm {
            nvars,
            max_exp,
            terms,
        })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Evaluate without the arity check; `point.len()` must equal `nvars`.
    pub fn eval(&self, field: &PrimeField, point: &[u64]) -> u64 {
        debug_assert_eq!(point.len(), self.nvars);
        // power tables per variable, small exponents only
        let mut pows: [[u64; 17]; 8] = [[0; 17]; 8];
        let fast = self.nvars <= 8 && self.max_exp.iter().all(|&e| e <= 16);
        if fast {
            for (i, &x) in point.iter().enumerate() {
                pows[i][0] = 1;
                for e in 1..=self.max_exp[i] as usize {
                    pows[i][e] = field.mul(pows[i][e - 1], x);
                }
            }
        }
        let mut acc = 0u64;
        for (exps, c) in &self.terms {
            let mut v = *c;
            for (i, &e) in exps.iter().enumerate() {
                if e > 0 {
                    let pw = if fast {
                        pows[i][e as usize]
                    } else {
                        field.pow(point[i], e as u64)
                    };
                    v = field.mul(v, pw);
                }
            }
            acc = field.add(acc, v);
        }
        acc
    }
}

/// Value of `f` at `point` with coefficients reduced mod p.
pub fn eval_form(f: &Poly, point: &[u64], field: &PrimeField) -> Result<u64, FieldError> {
    if f.nvars() != point.len() {
        return Err(FieldError::Arity {
            expected: f.nvars(),
            got: point.len(),
        });
    }
    let r = ReducedForm::new(f, field)?;
    let pt: Vec<u64> = point.iter().map(|&x| x % field.p()).collect();
    Ok(r.eval(field, &pt))
}

/// Kronecker symbol (a/n) for arbitrary integers.
pub fn kronecker(a: i64, n: i64) -> i8 {
    if n == 0 {
        return if a.abs() == 1 { 1 } else { 0 };
    }
    let mut result: i8 = 1;
    let mut n = n;
    let a = a;
    if n < 0 {
        n = -n;
        if a < 0 {
            result = -result;
        }
    }
    let mut twos = 0;
    while n % 2 == 0 {
        n /= 2;
        twos += 1;
    }
    if twos > 0 {
        if a % 2 == 0 {
            return 0;
        }
        if twos % 2 == 1 && matches!(a.rem_euclid(8), 3 | 5) {
            result = -result;
        }
    }
    // Jacobi symbol (a/n) for odd positive n
    let mut a = a.rem_euclid(n);
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

/// Whether `d` is a fundamental discriminant (1 counts as the trivial one).
pub fn is_fundamental_discriminant(d: i64) -> bool {
    if d == 1 {
        return true;
    }
    if d == 0 {
        return false;
    }
    let squarefree = |m: i64| {
        let m = m.abs();
        let mut k = 2;
        while k * k <= m {
            if m % (k * k) == 0 {
                return false;
            }
            k += 1;
        }
        true
    };
    match d.rem_euclid(4) {
        1 => squarefree(d),
        0 => {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && squarefree(m)
        }
        _ => false,
    }
}

/// `a mod p` for a possibly negative big integer, used by reports.
pub fn residue(a: &BigInt, p: u64) -> u64 {
    let m = BigInt::from(p);
    let r = a.mod_floor(&m);
    debug_assert!(!r.is_negative());
    if r.is_zero() {
        0
    } else {
        r.to_u64().unwrap()
    }
}
