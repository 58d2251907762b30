//! Resolution of the quadric intersection `u_i^2 = x_i^2 - x_{i+1}^2`.
//!
//! The base is the arrangement of the eight planes `x_i -+ x_{i+1}`, grouped
//! in the pairs whose product is a branch quadric. The pairs meet in the
//! double lines `l_i`, which in turn meet in four points `Q_i`.

use super::{
    node_resolution, point_blowup, Ambient, Arrangement, BlowupCenter, ResolutionPlan,
    ResolutionStep,
};
use crate::symbolic::poly::Poly;

fn plane(i: usize, sign: i64) -> Poly {
    let mut c = [0i64; 4];
    c[i] = 1;
    c[(i + 1) % 4] = -sign;
    Poly::linear(&c)
}

pub(super) fn base() -> Arrangement {
    let forms = (0..4).flat_map(|i| [plane(i, 1), plane(i, -1)]).collect();
    let groups = (0..4).map(|i| vec![2 * i, 2 * i + 1]).collect();
    Arrangement::new(Ambient::Projective(3), forms, groups).expect("eight distinct planes")
}

/// Blow-up of the strict transform of `l_i = {x_i = x_{i+1} = 0}` after the
/// four points are blown up.
///
/// `l_i` is in the divisor of group `i`. Its two fourfold points no longer
/// meet the strict transforms of the adjacent groups, and the opposite group
/// crosses it in two threefold points. On the ruled exceptional surface the
/// two planes of group `i` cut two disjoint sections and the opposite group
/// cuts the two fibers over the threefold points.
fn double_line(i: usize) -> BlowupCenter {
    let opposite = (i + 2) % 4;
    let mut center_groups = vec![Vec::new(); 3];
    let mut exc_groups = vec![Vec::new(); 3];
    // groups other than i, in order, with `opposite` carrying the forms
    let others: Vec<usize> = (0..4).filter(|&g| g != i).collect();
    let slot = others.iter().position(|&g| g == opposite).unwrap();
    center_groups[slot] = vec![0, 1];
    exc_groups[slot] = vec![2, 3];
    exc_groups.push(vec![0, 1]);
    let center = Arrangement::new(
        Ambient::Projective(1),
        vec![Poly::linear(&[1, -1]), Poly::linear(&[1, 1])],
        center_groups,
    )
    .expect("two points");
    let exceptional = Arrangement::new(
        Ambient::P1xP1,
        vec![
            Poly::linear(&[1, -1, 0, 0]),
            Poly::linear(&[1, 1, 0, 0]),
            Poly::linear(&[0, 0, 1, -1]),
            Poly::linear(&[0, 0, 1, 1]),
        ],
        exc_groups,
    )
    .expect("two sections and two fibers");
    BlowupCenter {
        label: format!("l{}", i + 1),
        center,
        exceptional,
    }
}

/// The coordinate point `e_k`.
fn coordinate_point(k: usize) -> [i64; 4] {
    let mut v = [0; 4];
    v[k] = 1;
    v
}

pub fn t40_3_plan() -> ResolutionPlan {
    let base = base();
    // Q_i = l_i ∩ l_{i+1} is the coordinate point of the variable in neither line
    let points = (0..4)
        .map(|i| {
            let k = (i + 3) % 4;
            point_blowup(&base, &format!("Q{}", i + 1), &coordinate_point(k))
                .expect("fourfold point")
        })
        .collect();
    let nodes = (0..8)
        .map(|s: i64| {
            let pt = [1, 1 - 2 * (s & 1), 1 - (s & 2), 1 - ((s & 4) >> 1)];
            node_resolution(
                &base,
                &format!("({}:{}:{}:{})", pt[0], pt[1], pt[2], pt[3]),
                &pt,
            )
            .expect("node over a single point")
        })
        .collect();
    ResolutionPlan {
        variety: "T40_3".into(),
        base,
        steps: vec![
            ResolutionStep {
                label: "fourfold points".into(),
                centers: points,
            },
            ResolutionStep {
                label: "double lines".into(),
                centers: (0..4).map(double_line).collect(),
            },
            ResolutionStep {
                label: "nodes".into(),
                centers: nodes,
            },
        ],
    }
}
