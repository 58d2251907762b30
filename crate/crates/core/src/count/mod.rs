//! Point-counting engines and the Lefschetz bookkeeping around them.
//!
//! Every engine splits its index space into independent chunks and sums
//! integers, so the result does not depend on the thread count.

mod engines;
mod nodes;
mod report;

use num_rational::BigRational;
use thiserror::Error;

use crate::elliptic::ReductionError;
use crate::ff::FieldError;

pub use engines::{
    brute_double_octic, brute_fermi, brute_fiber_product, brute_quadric_intersection,
    count_double_octic, count_fermi, count_fiber_product, count_quadric_intersection,
    fermi_histogram, FiberProductCount, OcticCounter, QuadricCounter,
};
pub use nodes::{rational_nodes, NodeScan};
pub use report::{count_variety, lefschetz_report, oracle_count, Correction, CountReport};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CountError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("expected a form of degree {expected}, got degree {got}")]
    Degree { expected: u32, got: u32 },
    #[error("expected forms in {expected} variables, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("form {0} is identically zero")]
    ZeroForm(usize),
    #[error("cone count {0} is not 1 mod p-1")]
    DivisionCheck(u64),
    #[error("bad prime {p}: {reason}")]
    BadPrime { p: u64, reason: String },
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error("counting is not supported for {0}")]
    Unsupported(String),
    #[error("unknown id {0}")]
    UnknownId(String),
    #[error("singular locus is not isolated (form {0} has rank {1})")]
    NonIsolated(usize, usize),
}

/// `(count - (1 - a_p)) mod p`, in `0..p`.
pub fn lefschetz_residue(count: i64, p: u64, a_p: i64) -> u64 {
    (count - 1 + a_p).rem_euclid(p as i64) as u64
}

/// `(resolved - 1 - p^3 + a_p) / (p + p^2)`, or the exact quotient when it
/// is not an integer.
pub fn h11_from_count(resolved: i64, p: u64, a_p: i64) -> Result<i64, BigRational> {
    let p = p as i64;
    let num = resolved - 1 - p * p * p + a_p;
    let den = p + p * p;
    if num % den == 0 {
        Ok(num / den)
    } else {
        Err(BigRational::new(num.into(), den.into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn h11_inverts_the_trace_formula() {
        for p in [5u64, 7, 11] {
            let pi = p as i64;
            let a = -2;
            let resolved = 1 + 40 * (pi + pi * pi) + pi * pi * pi - a;
            assert_eq!(h11_from_count(resolved, p, a), Ok(40));
            assert!(h11_from_count(resolved + 1, p, a).is_err());
        }
    }

    #[test]
    fn residue_range() {
        assert_eq!(lefschetz_residue(1 + 4, 3, -4), 0);
        assert_eq!(lefschetz_residue(-7, 5, 0), 2);
    }
}
