//! Weierstrass form of a double cover of P^1 x P^1 branched along four sections.
//!
//! The branch data are four linear forms `a x + b z + c t`. The base parameter
//! is `s = z/t` and the fiber over `s` is the binary quartic in `(x : w)` with
//! `z = s w`, `t = w`. The resulting model is written in the variable of `Qt`.

use num_rational::BigRational;
use num_traits::Zero;

use super::{EllipticError, WeierstrassModel};
use crate::symbolic::poly::Poly;
use crate::symbolic::univariate::{Qt, UPoly};

/// `alpha x + beta(s) w` for one branch section.
struct Section {
    alpha: BigRational,
    beta: UPoly,
}

fn section(f: &Poly) -> Result<Section, EllipticError> {
    if f.nvars() != 3 || f.total_degree() != Some(1) || !f.is_homogeneous() {
        return Err(EllipticError::BadQuartic);
    }
    let a = f.coeff(&[1, 0, 0]);
    let b = f.coeff(&[0, 1, 0]);
    let c = f.coeff(&[0, 0, 1]);
    Ok(Section {
        alpha: a,
        beta: UPoly::new(vec![c, b]),
    })
}

/// Weierstrass model of `v^2 = prod_i f_i(x, z, t)`.
pub fn from_quartic(factors: &[Poly]) -> Result<WeierstrassModel, EllipticError> {
    if factors.len() != 4 {
        return Err(EllipticError::BadQuartic);
    }
    let secs = factors.iter().map(section).collect::<Result<Vec<_>, _>>()?;
    for i in 0..4 {
        for j in (i + 1)..4 {
            // proportional as forms in (x, w) over Q(s)
            let det = &secs[j].beta.scale(&secs[i].alpha) - &secs[i].beta.scale(&secs[j].alpha);
            if det.is_zero() {
                return Err(EllipticError::RepeatedSection(i, j));
            }
        }
        if secs[i].alpha.is_zero() && secs[i].beta.is_zero() {
            return Err(EllipticError::BadQuartic);
        }
    }
    let q = |p: &UPoly| Qt::from_poly(p.clone());
    let k = |a: &BigRational| Qt::constant(a.clone());
    // cubic coefficients [D, C, B, A] of the right-hand side
    let cubic: Vec<Qt> = match secs.iter().position(|s| s.alpha.is_zero()) {
        Some(i) => {
            // v^2 = beta_i * prod_{j != i} (alpha_j x + beta_j)
            let mut c = vec![q(&secs[i].beta)];
            for (j, s) in secs.iter().enumerate() {
                if j != i {
                    c = mul_linear(&c, &q(&s.beta), &k(&s.alpha));
                }
            }
            c
        }
        None => {
            // x = r + 1/X with r the root of the first section
            let r = &(-&q(&secs[0].beta)) / &k(&secs[0].alpha);
            let mut c = vec![k(&secs[0].alpha)];
            for s in &secs[1..] {
                let gamma = &(&k(&s.alpha) * &r) + &q(&s.beta);
                c = mul_linear(&c, &k(&s.alpha), &gamma);
            }
            c
        }
    };
    debug_assert_eq!(cubic.len(), 4);
    let (d, c, b, a) = (&cubic[0], &cubic[1], &cubic[2], &cubic[3]);
    // (A v)^2 = (A x)^3 + B (A x)^2 + A C (A x) + A^2 D
    WeierstrassModel::new(b.clone(), a * c, &(a * a) * d)
}

/// Multiply a polynomial in x (coefficients lowest first) by `c0 + c1 x`.
fn mul_linear(p: &[Qt], c0: &Qt, c1: &Qt) -> Vec<Qt> {
    let mut out = vec![Qt::zero(); p.len() + 1];
    for (i, a) in p.iter().enumerate() {
        out[i] = &out[i] + &(a * c0);
        out[i + 1] = &out[i + 1] + &(a * c1);
    }
    out
}
