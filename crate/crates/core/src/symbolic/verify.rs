//! Certificates for polynomial identities behind the correspondence maps.
//!
//! Every check produces a [`Certificate`] carrying enough data to be re-verified
//! by plain multiplication ([`Certificate::recheck`]), independently of the
//! division or rewriting that found it.

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use super::poly::{q, Monomial, Poly};
use super::ratfunc::{substitute, RatFunc};
use super::univariate::Qt;

/// Total-degree ceiling for any expanded intermediate.
pub const DEGREE_CAP: u32 = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error("map component {0} is not weighted-homogeneous of a consistent degree")]
    Inhomogeneous(usize),
    #[error("relation for variable {0} mentions a rewritten variable on its right side")]
    CyclicRelations(usize),
    #[error("expanded degree {0} exceeds the cap of {DEGREE_CAP}")]
    DegreeCap(u32),
    #[error("map component {0} has a denominator vanishing on the source")]
    VanishingDenominator(usize),
    #[error("{0}")]
    Shape(String),
}

/// `coeff * var^2 = rhs`, used left to right as a rewrite rule.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Relation {
    pub var: usize,
    pub coeff: BigRational,
    pub rhs: Poly,
}

impl Relation {
    pub fn new(var: usize, coeff: BigRational, rhs: Poly) -> Self {
        Relation { var, coeff, rhs }
    }

    /// The relation as a polynomial `coeff * var^2 - rhs`.
    pub fn as_poly(&self) -> Poly {
        let n = self.rhs.nvars();
        let mut e = vec![0; n];
        e[self.var] = 2;
        Poly::monomial(n, &e, self.coeff.clone()) - &self.rhs
    }
}

/// A map given by rational-function components in the source coordinates.
#[derive(Clone, Debug)]
pub struct RationalMap {
    pub components: Vec<RatFunc>,
}

impl RationalMap {
    pub fn new(components: Vec<RatFunc>) -> Self {
        assert!(!components.is_empty());
        let n = components[0].nvars();
        assert!(components.iter().all(|c| c.nvars() == n), "ring mismatch");
        RationalMap { components }
    }

    pub fn polynomial(components: Vec<Poly>) -> Self {
        RationalMap::new(components.into_iter().map(RatFunc::from_poly).collect())
    }

    pub fn source_nvars(&self) -> usize {
        self.components[0].nvars()
    }

    pub fn target_nvars(&self) -> usize {
        self.components.len()
    }

    /// Pull back a target polynomial: (numerator, denominator) with no cancellation.
    pub fn pullback(&self, f: &Poly) -> Result<(Poly, Poly), VerifyError> {
        let (n, d) = substitute(f, &self.components);
        for p in [&n, &d] {
            if let Some(deg) = p.total_degree() {
                if deg > DEGREE_CAP {
                    return Err(VerifyError::DegreeCap(deg));
                }
            }
        }
        Ok((n, d))
    }

    /// Checks weighted homogeneity: component i must have weighted degree
    /// `k * target_weights[i]` for one common `k`.
    pub fn check_weights(&self, source: &[u32], target: &[u32]) -> Result<u32, VerifyError> {
        let mut k: Option<u32> = None;
        for (i, c) in self.components.iter().enumerate() {
            if !c.is_polynomial() {
                return Err(VerifyError::Inhomogeneous(i));
            }
            let d = c
                .num()
                .weighted_degree(source)
                .ok_or(VerifyError::Inhomogeneous(i))?;
            if d % target[i] != 0 {
                return Err(VerifyError::Inhomogeneous(i));
            }
            let ki = d / target[i];
            match k {
                None => k = Some(ki),
                Some(k0) if k0 != ki => return Err(VerifyError::Inhomogeneous(i)),
                _ => {}
            }
        }
        Ok(k.unwrap_or(0))
    }
}

#[derive(Clone, Debug)]
pub enum Evidence {
    /// `pullback = unit * root^2 * source`.
    Multiple {
        pullback: Poly,
        source: Poly,
        unit: BigRational,
        root: Monomial,
    },
    /// `expr = sum cofactor_i * relation_i + residual`.
    Rewrite {
        expr: Poly,
        relations: Vec<Relation>,
        cofactors: Vec<Poly>,
        residual: Poly,
    },
    /// Pairs of Q(t) coefficients claimed equal after a coordinate change.
    Coefficients { pairs: Vec<(Qt, Qt)> },
}

/// Outcome of a symbolic check.
#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    pub passed: bool,
    /// Human-readable cofactor or isomorphism data.
    pub detail: String,
    /// Display form of the nonzero residual, if any.
    pub residual: Option<String>,
    pub residual_terms: usize,
    #[serde(skip)]
    pub evidence: Option<Evidence>,
}

impl Certificate {
    /// Re-derive the claimed identity by multiplication only.
    pub fn recheck(&self) -> bool {
        let Some(ev) = &self.evidence else {
            return false;
        };
        let holds = match ev {
            Evidence::Multiple {
                pullback,
                source,
                unit,
                root,
            } => {
                let n = source.nvars();
                let sq = root.mul(root);
                let cof = Poly::monomial(n, sq.exps(), unit.clone());
                &cof * source == *pullback
            }
            Evidence::Rewrite {
                expr,
                relations,
                cofactors,
                residual,
            } => {
                let mut acc = residual.clone();
                for (h, r) in cofactors.iter().zip(relations) {
                    acc = acc + h * &r.as_poly();
                }
                acc == *expr && (residual.is_zero() == self.passed)
            }
            Evidence::Coefficients { pairs } => pairs.iter().all(|(a, b)| a == b),
        };
        holds
            && match ev {
                Evidence::Multiple { .. } | Evidence::Coefficients { .. } => self.passed,
                Evidence::Rewrite { .. } => true,
            }
    }
}

fn fail(detail: String, residual: &Poly, names: &[&str]) -> Certificate {
    Certificate {
        passed: false,
        detail,
        residual: Some(residual.display(names)),
        residual_terms: residual.len(),
        evidence: None,
    }
}

/// Decide whether `pullback = c * m^2 * source` for a constant `c` and monomial `m`.
pub fn square_multiple(pullback: &Poly, source: &Poly, names: &[&str]) -> Certificate {
    let (quo, rem) = pullback.div_rem(source);
    if !rem.is_zero() {
        return fail(
            "source equation does not divide the pullback".into(),
            &rem,
            names,
        );
    }
    match quo.as_term() {
        Some((m, c)) if m.is_square() => {
            let root = Monomial::new(m.exps().iter().map(|e| e / 2).collect());
            let cof = Poly::monomial(m.exps().len(), m.exps(), c.clone());
            Certificate {
                passed: true,
                detail: format!("pullback = ({}) * source", cof.display(names)),
                residual: None,
                residual_terms: 0,
                evidence: Some(Evidence::Multiple {
                    pullback: pullback.clone(),
                    source: source.clone(),
                    unit: c,
                    root,
                }),
            }
        }
        _ => fail(
            "quotient is not a constant times a square monomial".into(),
            &quo,
            names,
        ),
    }
}

/// Reduce `expr` modulo relations `c v^2 = g` until it is multilinear in the
/// rewritten variables. Returns (residual, cofactors).
pub fn rewrite(expr: &Poly, relations: &[Relation]) -> Result<(Poly, Vec<Poly>), VerifyError> {
    let n = expr.nvars();
    for r in relations {
        for other in relations {
            if other.rhs.degree_in(r.var) > 0 {
                return Err(VerifyError::CyclicRelations(other.var));
            }
        }
        if r.coeff.is_zero() {
            return Err(VerifyError::Shape(format!(
                "zero coefficient on variable {}",
                r.var
            )));
        }
    }
    let mut cofactors = vec![Poly::zero(n); relations.len()];
    let mut residual = Poly::zero(n);
    let mut work = expr.clone();
    // pop terms from the top; each rewrite strictly lowers the rewritten degrees
    while let Some((m, c)) = work.leading().map(|(m, c)| (m.clone(), c.clone())) {
        let hit = relations.iter().position(|r| m.exps()[r.var] >= 2);
        match hit {
            None => {
                residual.add_term(m.clone(), c.clone());
                work.add_term(m, -c);
            }
            Some(k) => {
                let r = &relations[k];
                let mut e = m.exps().to_vec();
                e[r.var] -= 2;
                let h = Poly::monomial(n, &e, &c / &r.coeff);
                // term = h * (coeff v^2 - rhs) + h * rhs
                work = work - &h * &r.as_poly();
                cofactors[k] = &cofactors[k] + &h;
            }
        }
    }
    Ok((residual, cofactors))
}

/// Certify `target(map(P)) = 0` on the source variety cut out by `relations`.
pub fn verify_on_variety(
    map: &RationalMap,
    relations: &[Relation],
    target_eq: &Poly,
    names: &[&str],
) -> Result<Certificate, VerifyError> {
    let (num, den) = map.pullback(target_eq)?;
    // a denominator that reduces to zero would make the identity vacuous
    let (dres, _) = rewrite(&den, relations)?;
    if dres.is_zero() {
        return Err(VerifyError::VanishingDenominator(0));
    }
    let (residual, cofactors) = rewrite(&num, relations)?;
    let passed = residual.is_zero();
    let detail = if passed {
        format!(
            "cleared pullback reduces to 0 modulo {} relation(s)",
            relations.len()
        )
    } else {
        format!("nonzero residual with {} term(s)", residual.len())
    };
    Ok(Certificate {
        passed,
        detail,
        residual: (!passed).then(|| residual.display(names)),
        residual_terms: residual.len(),
        evidence: Some(Evidence::Rewrite {
            expr: num,
            relations: relations.to_vec(),
            cofactors,
            residual,
        }),
    })
}

/// Certify that a map carries one hypersurface onto another up to a constant:
/// `target(map) = c * source`.
pub fn verify_projective_change(
    map: &RationalMap,
    source_eq: &Poly,
    target_eq: &Poly,
    names: &[&str],
) -> Result<Certificate, VerifyError> {
    let (num, den) = map.pullback(target_eq)?;
    if !den.is_constant() {
        return Err(VerifyError::Shape(
            "coordinate change must be polynomial".into(),
        ));
    }
    let c = den.constant_value().unwrap();
    let num = num.scale(&c.recip());
    let cert = square_multiple(&num, source_eq, names);
    if cert.passed {
        if let Some(Evidence::Multiple { root, .. }) = &cert.evidence {
            if !root.is_one() {
                return Ok(fail("quotient is not constant".into(), &num, names));
            }
        }
    }
    Ok(cert)
}

/// Source of a cover: a weighted hypersurface or a complete intersection
/// given by rewrite relations.
#[derive(Clone, Debug)]
pub enum CoverSource {
    Hypersurface(Poly),
    Relations(Vec<Relation>),
}

/// Certify that `map` pulls the target equation back to the source equation
/// up to a unit and a square monomial (or to zero modulo the source relations).
pub fn verify_cover(
    map: &RationalMap,
    source: &CoverSource,
    target_eq: &Poly,
    weights: (&[u32], &[u32]),
    names: &[&str],
) -> Result<Certificate, VerifyError> {
    map.check_weights(weights.0, weights.1)?;
    match source {
        CoverSource::Hypersurface(s) => {
            let (num, _) = map.pullback(target_eq)?;
            Ok(square_multiple(&num, s, names))
        }
        CoverSource::Relations(rels) => verify_on_variety(map, rels, target_eq, names),
    }
}

/// The Cremona involution (x,y,z,t) -> (yz, xy, xz, xt).
pub fn cremona() -> RationalMap {
    let v = |i| Poly::var(4, i);
    RationalMap::polynomial(vec![v(1) * v(2), v(0) * v(1), v(0) * v(2), v(0) * v(3)])
}

/// Certify `octic1 o sigma = c * m^2 * octic2` for the Cremona involution sigma.
pub fn verify_cremona(octic1: &Poly, octic2: &Poly) -> Result<Certificate, VerifyError> {
    for f in [octic1, octic2] {
        if f.nvars() != 4 || f.total_degree() != Some(8) || !f.is_homogeneous() {
            return Err(VerifyError::Shape(
                "Cremona check needs two octics in x,y,z,t".into(),
            ));
        }
    }
    let (num, _) = cremona().pullback(octic1)?;
    Ok(square_multiple(&num, octic2, &["x", "y", "z", "t"]))
}

/// sigma o sigma = m * identity for a monomial m; returns m.
pub fn cremona_square_factor() -> Option<Poly> {
    let s = cremona();
    let comps: Vec<Poly> = s.components.iter().map(|c| c.num().clone()).collect();
    let twice: Vec<Poly> = comps.iter().map(|c| c.compose(&comps)).collect();
    let m = twice[0].div_exact(&Poly::var(4, 0))?;
    (0..4)
        .all(|i| twice[i] == &m * &Poly::var(4, i))
        .then_some(m)
}

/// Certify an isogeny between `y^2 = src_rhs(x, ...)` and `Y^2 = tgt_rhs(X, ...)`.
///
/// Both equations live in a ring whose variables 0 and 1 are x and y; the map
/// gives (X, Y) as rational functions in the same ring.
pub fn verify_isogeny(
    map: &RationalMap,
    src_rhs: &Poly,
    tgt_rhs: &Poly,
    names: &[&str],
) -> Result<Certificate, VerifyError> {
    let n = src_rhs.nvars();
    if map.target_nvars() != 2 || map.source_nvars() != n {
        return Err(VerifyError::Shape(
            "isogeny map must have components (X, Y)".into(),
        ));
    }
    if src_rhs.degree_in(1) > 0 || tgt_rhs.degree_in(1) > 0 {
        return Err(VerifyError::Shape(
            "right-hand sides must not involve y".into(),
        ));
    }
    // target relation in a ring with X, Y at positions 0, 1 and the parameters after
    let mut comps = map.components.clone();
    for i in 2..n {
        comps.push(RatFunc::from_poly(Poly::var(n, i)));
    }
    let full = RationalMap::new(comps);
    let target_eq = Poly::var(n, 1).pow(2) - tgt_rhs;
    let rel = Relation::new(1, BigRational::one(), src_rhs.clone());
    verify_on_variety(&full, &[rel], &target_eq, names)
}

/// Check that a map's components do not vanish identically after reduction.
pub fn components_nonvanishing(
    map: &RationalMap,
    relations: &[Relation],
) -> Result<(), VerifyError> {
    for (i, c) in map.components.iter().enumerate() {
        let (r, _) = rewrite(c.den(), relations)?;
        if r.is_zero() {
            return Err(VerifyError::VanishingDenominator(i));
        }
    }
    Ok(())
}

/// Integer constant as a polynomial in `n` variables.
pub fn cst(n: usize, c: i64) -> Poly {
    Poly::constant(n, q(c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::poly::qr;

    fn v4(i: usize) -> Poly {
        Poly::var(4, i)
    }

    #[test]
    fn identity_cover_gives_unit_certificate() {
        let f = v4(0).pow(2) - v4(1) * v4(2);
        let id = RationalMap::polynomial((0..4).map(v4).collect());
        let c = verify_cover(
            &id,
            &CoverSource::Hypersurface(f.clone()),
            &f,
            (&[1, 1, 1, 1], &[1, 1, 1, 1]),
            &["x", "y", "z", "t"],
        )
        .unwrap();
        assert!(c.passed);
        assert!(c.recheck());
        match c.evidence.unwrap() {
            Evidence::Multiple { unit, root, .. } => {
                assert_eq!(unit, q(1));
                assert!(root.is_one());
            }
            _ => panic!(),
        }
    }

    #[test]
    fn inhomogeneous_components_rejected() {
        let m = RationalMap::polynomial(vec![v4(0) * v4(0), v4(1), v4(2), v4(3)]);
        assert!(matches!(
            m.check_weights(&[1, 1, 1, 1], &[1, 1, 1, 1]),
            Err(VerifyError::Inhomogeneous(_))
        ));
    }

    #[test]
    fn cremona_is_an_involution_up_to_xyz() {
        let m = cremona_square_factor().unwrap();
        assert_eq!(m, v4(0) * v4(1) * v4(2));
    }

    #[test]
    fn rewriting_reaches_multilinear_normal_form() {
        // ring (x, y, a): relation 2 y^2 = x + a
        let n = 3;
        let x = Poly::var(n, 0);
        let y = Poly::var(n, 1);
        let a = Poly::var(n, 2);
        let rel = Relation::new(1, q(2), &x + &a);
        let expr = y.pow(5) + y.pow(2) * x.clone();
        let (res, cof) = rewrite(&expr, &[rel.clone()]).unwrap();
        // y^5 -> y (x+a)^2 / 4 ; y^2 x -> x (x+a) / 2
        let expect = (&y * &(&x + &a).pow(2)).scale(&qr(1, 4)) + (&x * &(&x + &a)).scale(&qr(1, 2));
        assert_eq!(res, expect);
        assert_eq!(&res + &(&cof[0] * &rel.as_poly()), expr);
    }

    #[test]
    fn cyclic_relations_rejected() {
        let n = 2;
        let r1 = Relation::new(0, q(1), Poly::var(n, 1));
        let r2 = Relation::new(1, q(1), Poly::var(n, 0));
        assert!(matches!(
            rewrite(&Poly::var(n, 0), &[r1, r2]),
            Err(VerifyError::CyclicRelations(_))
        ));
    }

    #[test]
    fn generic_two_isogeny_multiplicative_form() {
        // ring (x, y, A, B)
        let n = 4;
        let x = Poly::var(n, 0);
        let y = Poly::var(n, 1);
        let a = Poly::var(n, 2);
        let b = Poly::var(n, 3);
        let src = x.pow(3) + &a * &x.pow(2) + &b * &x;
        let tgt = (&x + &a) * (x.pow(2) - b.scale(&q(4)));
        let xm = RatFunc::new(x.pow(2) + b.clone(), x.clone());
        let ym = RatFunc::new(&y * &(x.pow(2) - b.clone()), x.pow(2));
        let names = ["x", "y", "A", "B"];
        let c =
            verify_isogeny(&RationalMap::new(vec![xm.clone(), ym]), &src, &tgt, &names).unwrap();
        assert!(c.passed, "{:?}", c.residual);
        assert!(c.recheck());
        // the additive y-formula does not work
        let bad = RatFunc::new(&y * &x.pow(2) - b.clone(), x.pow(2));
        let c = verify_isogeny(&RationalMap::new(vec![xm, bad]), &src, &tgt, &names).unwrap();
        assert!(!c.passed);
        assert!(c.recheck());
    }

    #[test]
    fn quotient_identity_expand_and_compare() {
        // (x^2+Ax+B)(x^2-B)^2 = x^3 * (X^3 + A X^2 - 4 B X - 4 A B) at X = (x^2+B)/x
        let n = 4;
        let x = Poly::var(n, 0);
        let a = Poly::var(n, 2);
        let b = Poly::var(n, 3);
        let lhs = (x.pow(2) + &a * &x + b.clone()) * (x.pow(2) - b.clone()).pow(2);
        let xn = x.pow(2) + b.clone();
        let rhs = xn.pow(3) + &a * &(&xn.pow(2) * &x)
            - (&b * &(&xn * &x.pow(2))).scale(&q(4))
            - (&a * &(&b * &x.pow(3))).scale(&q(4));
        assert_eq!(lhs, rhs);
    }
}
