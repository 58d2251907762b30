//! Singular points of `u_i^2 = f_i(x)` in P^7 over F_p.

use serde::Serialize;

use super::CountError;
use crate::ff::{PrimeField, ReducedForm};
use crate::symbolic::poly::Poly;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NodeScan {
    pub p: u64,
    /// Points `(x0..x3, u0..u3)` with the first nonzero x-coordinate equal to 1.
    pub points: Vec<[u64; 8]>,
}

/// Rank of a small matrix over F_p.
fn rank(rows: &mut [Vec<u64>], f: &PrimeField) -> usize {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..ncols {
        let Some(piv) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, piv);
        let inv = f.inv(rows[r][c]).unwrap();
        for i in 0..rows.len() {
            if i != r && rows[i][c] != 0 {
                let k = f.mul(rows[i][c], inv);
                for j in 0..ncols {
                    let s = f.mul(k, rows[r][j]);
                    rows[i][j] = f.sub(rows[i][j], s);
                }
            }
        }
        r += 1;
    }
    r
}

/// Rank of a quadratic form in four variables, from its Gram matrix mod p.
fn form_rank(q: &Poly, f: &PrimeField) -> Result<usize, CountError> {
    let mut rows = vec![vec![0u64; 4]; 4];
    for (m, c) in q.terms() {
        let c = f
            .reduce_rational(c)
            .ok_or(crate::ff::FieldError::NonIntegral(f.p()))?;
        let e = m.exps();
        let idx: Vec<usize> = (0..4).filter(|&i| e[i] > 0).collect();
        match idx.as_slice() {
            [i] => rows[*i][*i] = f.add(rows[*i][*i], f.mul(c, 2)),
            [i, j] => {
                rows[*i][*j] = f.add(rows[*i][*j], c);
                rows[*j][*i] = f.add(rows[*j][*i], c);
            }
            _ => {}
        }
    }
    Ok(rank(&mut rows, f))
}

/// Enumerate singular points. A form of rank at most 2 makes the singular
/// locus contain a line, which is reported as [`CountError::NonIsolated`].
pub fn rational_nodes(forms: &[Poly], p: u64) -> Result<NodeScan, CountError> {
    let field = PrimeField::new(p)?;
    for (i, q) in forms.iter().enumerate() {
        let r = form_rank(q, &field)?;
        if r <= 2 {
            return Err(CountError::NonIsolated(i, r));
        }
    }
    let rf: Vec<ReducedForm> = forms
        .iter()
        .map(|f| ReducedForm::new(f, &field))
        .collect::<Result<_, _>>()?;
    let grads: Vec<Vec<ReducedForm>> = forms
        .iter()
        .map(|f| {
            (0..4)
                .map(|k| ReducedForm::new(&f.derivative(k), &field))
                .collect::<Result<_, _>>()
        })
        .collect::<Result<_, _>>()?;
    let mut points = Vec::new();
    for lead in 0..4 {
        let free = 3 - lead;
        for k in 0..p.pow(free as u32) {
            let mut x = [0u64; 4];
            x[lead] = 1;
            let mut r = k;
            for j in 0..free {
                x[lead + 1 + j] = r % p;
                r /= p;
            }
            let vals: Vec<u64> = rf.iter().map(|g| g.eval(&field, &x)).collect();
            if vals.iter().any(|&v| field.legendre(v) == -1) {
                continue;
            }
            // rows with u_i = 0 need dependent gradients
            let zero: Vec<usize> = (0..4).filter(|&i| vals[i] == 0).collect();
            if zero.is_empty() {
                continue;
            }
            let mut rows: Vec<Vec<u64>> = zero
                .iter()
                .map(|&i| grads[i].iter().map(|g| g.eval(&field, &x)).collect())
                .collect();
            if rank(&mut rows, &field) == zero.len() {
                continue;
            }
            // every choice of square roots for the nonzero values
            let roots: Vec<Vec<u64>> = vals
                .iter()
                .map(|&v| {
                    if v == 0 {
                        vec![0]
                    } else {
                        let s = field.sqrt(v).unwrap();
                        vec![s, field.neg(s)]
                    }
                })
                .collect();
            for a in &roots[0] {
                for b in &roots[1] {
                    for c in &roots[2] {
                        for d in &roots[3] {
                            points.push([x[0], x[1], x[2], x[3], *a, *b, *c, *d]);
                        }
                    }
                }
            }
        }
    }
    points.sort();
    Ok(NodeScan { p, points })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::poly::q;

    fn v(i: usize) -> Poly {
        Poly::var(4, i)
    }

    fn t32() -> Vec<Poly> {
        (0..4)
            .map(|i| {
                (0..4).fold(Poly::zero(4), |acc, j| {
                    acc + v(j).pow(2).scale(&q(if i == j { 2 } else { -2 }))
                })
            })
            .collect()
    }

    /// Oracle: full Jacobian rank over all projective points of P^7.
    fn brute(forms: &[Poly], p: u64) -> Vec<[u64; 8]> {
        let f = PrimeField::new(p).unwrap();
        let mut out = Vec::new();
        for idx in 1..p.pow(8) {
            let mut pt = [0u64; 8];
            let mut r = idx;
            for c in pt.iter_mut() {
                *c = r % p;
                r /= p;
            }
            // normalize: first nonzero x coordinate is 1 (x = 0 forces u = 0)
            let Some(l) = (0..4).find(|&i| pt[i] != 0) else {
                continue;
            };
            if pt[l] != 1 {
                continue;
            }
            let x = [pt[0], pt[1], pt[2], pt[3]];
            let on = forms.iter().enumerate().all(|(i, g)| {
                f.mul(pt[4 + i], pt[4 + i]) == crate::ff::eval_form(g, &x, &f).unwrap()
            });
            if !on {
                continue;
            }
            let mut rows: Vec<Vec<u64>> = forms
                .iter()
                .enumerate()
                .map(|(i, g)| {
                    let mut row: Vec<u64> = (0..4)
                        .map(|k| f.neg(crate::ff::eval_form(&g.derivative(k), &x, &f).unwrap()))
                        .collect();
                    for j in 0..4 {
                        row.push(if j == i { f.mul(2, pt[4 + i]) } else { 0 });
                    }
                    row
                })
                .collect();
            if rank(&mut rows, &f) < 4 {
                out.push(pt);
            }
        }
        out.sort();
        out
    }

    #[test]
    fn scan_matches_full_jacobian_at_small_primes() {
        for p in [3u64, 5] {
            assert_eq!(rational_nodes(&t32(), p).unwrap().points, brute(&t32(), p));
        }
    }

    #[test]
    fn split_primes_see_all_nodes() {
        assert_eq!(rational_nodes(&t32(), 13).unwrap().points.len(), 96);
        assert!(rational_nodes(&t32(), 7).unwrap().points.is_empty());
    }

    #[test]
    fn line_singularities_detected() {
        let s = |i: usize| v(i).pow(2);
        let f = vec![s(0) - s(1), s(1) - s(2), s(2) - s(3), s(3) - s(0)];
        assert!(matches!(
            rational_nodes(&f, 5),
            Err(CountError::NonIsolated(0, 2))
        ));
    }
}
