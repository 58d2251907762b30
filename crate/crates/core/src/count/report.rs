use serde::Serialize;

use super::{
    brute_double_octic, brute_fermi, brute_fiber_product, brute_quadric_intersection,
    count_double_octic, count_fermi, count_fiber_product, count_quadric_intersection,
    h11_from_count, lefschetz_residue, rational_nodes, CountError,
};
use crate::catalog::{resolve_fibration, Registry, Shape};
use crate::elliptic::Mobius;
use crate::elliptic::{FiberCounter, ReductionError};
use crate::ff::PrimeField;
use crate::symbolic::poly::Poly;

/// A labeled additive correction to a raw count.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Correction {
    pub label: String,
    pub amount: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountReport {
    pub id: String,
    pub p: u64,
    pub raw: u64,
    pub corrections: Vec<Correction>,
    /// Raw count plus all corrections.
    pub corrected: i64,
    pub a_p: i64,
    /// `(corrected - 1 + a_p) mod p`.
    pub residue: u64,
    /// Fiber-product trace, when the shape has one.
    pub trace: Option<i64>,
    /// `h11` from the corrected count when it is an integer.
    pub h11: Option<i64>,
}

impl CountReport {
    pub fn congruence_holds(&self) -> bool {
        self.residue == 0
    }
}

pub fn lefschetz_report(
    id: &str,
    p: u64,
    raw: u64,
    corrections: Vec<Correction>,
    a_p: i64,
) -> CountReport {
    let corrected = raw as i64 + corrections.iter().map(|c| c.amount).sum::<i64>();
    CountReport {
        id: id.to_string(),
        p,
        raw,
        corrected,
        a_p,
        residue: lefschetz_residue(corrected, p, a_p),
        trace: None,
        h11: if corrections.is_empty() {
            None
        } else {
            h11_from_count(corrected, p, a_p).ok()
        },
        corrections,
    }
}

/// Count a catalog variety over `F_p` and compare with the newform
/// coefficient `a_p`.
///
/// Quadric intersections marked `small_resolution` get `p` extra points per
/// rational node. Fiber products report the raw count of the singular model
/// and the trace of the twisted product.
pub fn count_variety(
    reg: &Registry,
    id: &str,
    p: u64,
    a_p: i64,
) -> Result<CountReport, CountError> {
    let v = reg
        .get(id)
        .map_err(|_| CountError::UnknownId(id.to_string()))?;
    let id = v.id.as_str();
    match &v.shape {
        Shape::DoubleOctic { factors, twist } => {
            let raw = count_double_octic(factors, *twist, p)?;
            Ok(lefschetz_report(id, p, raw, Vec::new(), a_p))
        }
        Shape::QuadricIntersection {
            forms,
            small_resolution,
        } => {
            let raw = count_quadric_intersection(forms, p)?;
            let mut corrections = Vec::new();
            if *small_resolution {
                let nodes = rational_nodes(forms, p)?.points.len() as i64;
                corrections.push(Correction {
                    label: format!("{nodes} rational nodes x p"),
                    amount: nodes * p as i64,
                });
            }
            Ok(lefschetz_report(id, p, raw, corrections, a_p))
        }
        Shape::FermiAffine => Ok(lefschetz_report(id, p, count_fermi(p)?, Vec::new(), a_p)),
        Shape::FiberProduct {
            left,
            right,
            mobius,
            twist,
        } => {
            let (l, r, mu, chi) = fiber_setup(left, right, mobius, *twist, p)?;
            let fp = count_fiber_product(&l, &r, &mu, chi)?;
            let mut rep = lefschetz_report(id, p, fp.raw, Vec::new(), a_p);
            rep.trace = Some(fp.trace);
            Ok(rep)
        }
        Shape::Hypersurface { .. } | Shape::CompleteIntersection { .. } => Err(
            CountError::Unsupported(format!("{id} ({})", v.shape.name())),
        ),
    }
}

fn fiber_setup(
    left: &str,
    right: &str,
    mobius: &Option<Mobius>,
    twist: i64,
    p: u64,
) -> Result<(FiberCounter, FiberCounter, Mobius, i8), CountError> {
    let model = |name: &str| {
        resolve_fibration(name)
            .map_err(|e| CountError::Unsupported(e.to_string()))?
            .model()
            .map_err(|e| CountError::Unsupported(format!("{name}: {e}")))
    };
    let reduce = |name: &str| {
        model(name)?.reduce_mod(p).map_err(|e| match e {
            ReductionError::Field(e) => CountError::Field(e),
            e => CountError::BadPrime {
                p,
                reason: format!("{name}: {e}"),
            },
        })
    };
    let l = reduce(left)?;
    let r = reduce(right)?;
    let f = PrimeField::new(p)?;
    let chi = f.legendre(f.reduce_i64(twist));
    Ok((l, r, mobius.unwrap_or_else(Mobius::identity), chi))
}

/// The raw count of a catalog variety by direct enumeration, for comparison
/// with [`count_variety`]. Exponential in the dimension: meant for small p.
pub fn oracle_count(reg: &Registry, id: &str, p: u64) -> Result<u64, CountError> {
    let v = reg
        .get(id)
        .map_err(|_| CountError::UnknownId(id.to_string()))?;
    match &v.shape {
        Shape::DoubleOctic { factors, twist } => {
            brute_double_octic(&Poly::product(4, factors), *twist, p)
        }
        Shape::QuadricIntersection { forms, .. } => brute_quadric_intersection(forms, p),
        Shape::FermiAffine => brute_fermi(p),
        Shape::FiberProduct {
            left,
            right,
            mobius,
            twist,
        } => {
            let (l, r, mu, chi) = fiber_setup(left, right, mobius, *twist, p)?;
            brute_fiber_product(&l, &r, &mu, chi)
        }
        Shape::Hypersurface { .. } | Shape::CompleteIntersection { .. } => Err(
            CountError::Unsupported(format!("{} ({})", v.id, v.shape.name())),
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn engines_agree_with_oracles_on_the_catalog() {
        let reg = Registry::builtin();
        for v in reg.varieties() {
            let p = if matches!(v.shape, Shape::QuadricIntersection { .. }) {
                3
            } else {
                5
            };
            match (
                count_variety(&reg, &v.id, p, 0),
                oracle_count(&reg, &v.id, p),
            ) {
                (Ok(r), Ok(o)) => assert_eq!(r.raw, o, "{}", v.id),
                (Err(a), Err(b)) => assert_eq!(a, b, "{}", v.id),
                (a, b) => panic!("{}: {a:?} vs {b:?}", v.id),
            }
        }
    }

    #[test]
    fn t32_node_correction() {
        let reg = Registry::builtin();
        let r = count_variety(&reg, "T32", 13, 22).unwrap();
        assert_eq!(r.corrections[0].amount, 96 * 13);
        assert_eq!(r.h11, Some(32));
        let r = count_variety(&reg, "T32", 7, 24).unwrap();
        assert_eq!(r.corrections[0].amount, 0);
        assert!(r.congruence_holds());
        assert!(matches!(
            count_variety(&reg, "nope", 7, 0),
            Err(CountError::UnknownId(_))
        ));
        assert!(matches!(
            count_variety(&reg, "T16", 7, 0),
            Err(CountError::Unsupported(_))
        ));
    }
}
