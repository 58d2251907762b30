use serde::Serialize;

use super::{FibrationSource, FibrationSpec, Metadata, Shape, VarietySpec};
use crate::elliptic::Mobius;
use crate::symbolic::poly::{q, Poly};

fn v(n: usize, i: usize) -> Poly {
    Poly::var(n, i)
}

fn lin(c: &[i64]) -> Poly {
    Poly::linear(c)
}

fn sq(i: usize) -> Poly {
    v(4, i).pow(2)
}

/// Signed sum of squares `sum s_i x_i^2`.
fn squares(signs: [i64; 4]) -> Poly {
    (0..4).fold(Poly::zero(4), |acc, i| acc + sq(i).scale(&q(signs[i])))
}

fn xyzt() -> Vec<Poly> {
    (0..4).map(|i| v(4, i)).collect()
}

fn with_coords(extra: &[[i64; 4]]) -> Vec<Poly> {
    let mut f = xyzt();
    f.extend(extra.iter().map(|c| lin(c)));
    f
}

fn meta(chi: i64, h11: i64, label: &str) -> Metadata {
    Metadata {
        chi: Some(chi),
        h11: Some(h11),
        h12: Some(0),
        level: Some(8),
        type_label: Some(label.to_string()),
        ..Metadata::default()
    }
}

fn octic(id: &str, factors: Vec<Poly>, twist: i64, metadata: Metadata) -> VarietySpec {
    VarietySpec {
        id: id.to_string(),
        shape: Shape::DoubleOctic { factors, twist },
        metadata,
    }
}

fn product(
    id: &str,
    left: &str,
    right: &str,
    mobius: Option<Mobius>,
    twist: i64,
    metadata: Metadata,
) -> VarietySpec {
    VarietySpec {
        id: id.to_string(),
        shape: Shape::FiberProduct {
            left: left.to_string(),
            right: right.to_string(),
            mobius,
            twist,
        },
        metadata,
    }
}

/// T44 in its first presentation.
pub(super) fn t44_factors() -> Vec<Poly> {
    vec![
        lin(&[1, 0, 0, -1]),
        lin(&[1, 0, 0, 1]),
        lin(&[0, 1, 0, -1]),
        lin(&[0, 1, 0, 1]),
        lin(&[0, 0, 1, -1]),
        lin(&[0, 0, 1, 1]),
        lin(&[1, 1, 1, 1]),
        lin(&[1, 1, 1, -1]),
    ]
}

/// `F(x^2, y^2, z^2, t^2)` for `F = (x-y)(y-z)(z-t)(t-x)`, factored into lines.
pub(super) fn t44b_factors() -> Vec<Poly> {
    vec![
        lin(&[1, -1, 0, 0]),
        lin(&[1, 1, 0, 0]),
        lin(&[0, 1, -1, 0]),
        lin(&[0, 1, 1, 0]),
        lin(&[0, 0, 1, -1]),
        lin(&[0, 0, 1, 1]),
        lin(&[-1, 0, 0, 1]),
        lin(&[1, 0, 0, 1]),
    ]
}

pub(super) fn t44c_factors() -> Vec<Poly> {
    with_coords(&[[1, 1, 1, -1], [1, 1, -1, 1], [1, -1, 1, 1], [-1, 1, 1, 1]])
}

pub(super) fn t70_1_factors() -> Vec<Poly> {
    with_coords(&[[1, -1, 0, 0], [0, 1, -1, 0], [0, 0, 1, -1], [-1, 0, 0, 1]])
}

pub(super) fn t28_factors() -> Vec<Poly> {
    vec![
        squares([1, 1, 1, -1]),
        squares([1, 1, -1, 1]),
        squares([1, -1, 1, 1]),
        squares([-1, 1, 1, 1]),
    ]
}

pub(super) fn v1c_factors() -> Vec<Poly> {
    vec![
        v(4, 2),
        v(4, 3),
        lin(&[1, 1, 0, 0]),
        lin(&[1, -1, 0, 0]),
        lin(&[1, 0, 1, 0]),
        lin(&[0, 1, 0, 1]),
        lin(&[0, 0, 1, 1]),
        lin(&[0, 1, 1, 1]),
    ]
}

pub(super) fn v2c_factors() -> Vec<Poly> {
    vec![
        v(4, 0),
        v(4, 3),
        lin(&[1, 0, 1, 0]),
        lin(&[1, 0, -1, 0]),
        lin(&[1, 1, 0, 0]),
        lin(&[0, 1, 0, 1]),
        lin(&[0, 0, 1, 1]),
        lin(&[0, 1, 1, 1]),
    ]
}

/// `u_i^2 = x_i^2 - x_{i+1}^2`.
pub(super) fn t40_3_forms() -> Vec<Poly> {
    (0..4).map(|i| sq(i) - sq((i + 1) % 4)).collect()
}

/// `2 y_i^2 = g_i`, stored as `u_i^2 = 2 g_i` with `u_i = 2 y_i`.
pub(super) fn t32_forms() -> Vec<Poly> {
    t32_rhs().into_iter().map(|g| g.scale(&q(2))).collect()
}

/// The right-hand sides `g_i = x_i^2 - sum_{j != i} x_j^2`.
pub(super) fn t32_rhs() -> Vec<Poly> {
    (0..4)
        .map(|i| {
            let mut s = [-1; 4];
            s[i] = 1;
            squares(s)
        })
        .collect()
}

/// `x y z + x y t + x z t + y z t`.
pub(super) fn cayley_cubic(n: usize) -> Poly {
    let x = |i| v(n, i);
    x(0) * x(1) * x(2) + x(0) * x(1) * x(3) + x(0) * x(2) * x(3) + x(1) * x(2) * x(3)
}

pub(super) fn varieties() -> Vec<VarietySpec> {
    let mut out = Vec::new();

    out.push(VarietySpec {
        id: "T70".into(),
        shape: Shape::FermiAffine,
        metadata: Metadata {
            note: Some("Fermi threefold, affine model".into()),
            ..meta(140, 70, "T_{70}")
        },
    });
    let n5 = |i| v(5, i);
    out.push(VarietySpec {
        id: "quintic_Z".into(),
        shape: Shape::Hypersurface {
            equation: n5(4).pow(2) * cayley_cubic(5)
                - n5(0) * n5(1) * n5(2) * n5(3) * lin(&[1, 1, 1, 1, 0]),
        },
        metadata: Metadata {
            note: Some("quintic model of the Fermi threefold in P^4 (x, y, z, t, w)".into()),
            ..meta(140, 70, "T_{70}")
        },
    });
    let mut cayley = with_coords(&[[1, 1, 1, 1]]);
    cayley.push(cayley_cubic(4));
    out.push(octic(
        "cayley_octic",
        cayley,
        -1,
        Metadata {
            note: Some("double cover branched along five planes and a Cayley cubic".into()),
            ..meta(140, 70, "T_{70}")
        },
    ));
    out.push(product(
        "T70_fp",
        "X1128",
        "X1128",
        None,
        1,
        Metadata {
            note: Some("self fiber product of X_1128, birational to the Fermi threefold".into()),
            ..meta(140, 70, "T_{70}")
        },
    ));

    out.push(octic(
        "T70_1",
        t70_1_factors(),
        1,
        Metadata {
            arrangement: Some(1),
            arrangement_alt: Some(2),
            ..meta(140, 70, "T_{70}^1")
        },
    ));
    out.push(octic(
        "T50_V1",
        with_coords(&[[1, 1, 0, 0], [0, 1, 1, 0], [1, -1, -1, -1], [1, 1, -1, 1]]),
        -1,
        Metadata {
            arrangement: Some(32),
            arrangement_alt: Some(29),
            ..meta(100, 50, "T_{50}")
        },
    ));
    out.push(octic(
        "T50_V2",
        with_coords(&[[1, 1, 0, 0], [1, -1, 1, 0], [1, -1, 0, -1], [1, 1, -1, -1]]),
        -1,
        Metadata {
            arrangement: Some(69),
            arrangement_alt: Some(44),
            ..meta(100, 50, "T_{50}")
        },
    ));
    out.push(octic(
        "T50_V1c",
        v1c_factors(),
        -1,
        Metadata {
            note: Some("projectively equivalent form of T50_V1".into()),
            ..meta(100, 50, "T_{50}")
        },
    ));
    out.push(octic(
        "T50_V2c",
        v2c_factors(),
        1,
        Metadata {
            note: Some("projectively equivalent form of T50_V2".into()),
            ..meta(100, 50, "T_{50}")
        },
    ));
    out.push(octic(
        "T46",
        with_coords(&[[1, 1, 0, 0], [1, -1, 1, 0], [0, 1, -1, -1], [1, 0, 1, -1]]),
        2,
        Metadata {
            arrangement: Some(93),
            arrangement_alt: Some(62),
            ..meta(92, 46, "T_{46}")
        },
    ));
    out.push(octic(
        "T44",
        t44_factors(),
        1,
        Metadata {
            arrangement: Some(238),
            arrangement_alt: Some(87),
            ..meta(88, 44, "T_{44}")
        },
    ));
    out.push(octic(
        "T44b",
        t44b_factors(),
        1,
        Metadata {
            note: Some("T44 after the first coordinate change".into()),
            ..meta(88, 44, "T_{44}")
        },
    ));
    out.push(octic(
        "T44c",
        t44c_factors(),
        1,
        Metadata {
            note: Some("T44 after the second coordinate change".into()),
            ..meta(88, 44, "T_{44}")
        },
    ));
    out.push(octic(
        "T40",
        with_coords(&[[1, 1, 1, 1], [1, 1, -1, -1], [0, 1, -1, 1], [1, 0, 1, -1]]),
        1,
        Metadata {
            arrangement: Some(241),
            ..meta(80, 40, "T_{40}")
        },
    ));
    out.push(octic("T28", t28_factors(), 1, meta(56, 28, "T_{28}")));

    out.push(VarietySpec {
        id: "T40_3".into(),
        shape: Shape::QuadricIntersection {
            forms: t40_3_forms(),
            small_resolution: false,
        },
        metadata: meta(80, 40, "T_{40}^3"),
    });
    out.push(VarietySpec {
        id: "T32".into(),
        shape: Shape::QuadricIntersection {
            forms: t32_forms(),
            small_resolution: true,
        },
        metadata: Metadata {
            note: Some("2 y_i^2 = g_i stored as u_i^2 = 2 g_i".into()),
            ..meta(64, 32, "T_{32}")
        },
    });
    let n6 = |i| v(6, i);
    out.push(VarietySpec {
        id: "T16".into(),
        shape: Shape::CompleteIntersection {
            equations: vec![
                (0..4).fold(Poly::zero(6), |a, i| a + n6(i).pow(2)) - (n6(4) * n6(5)).scale(&q(4)),
                n6(4).pow(4) + n6(5).pow(4) - (n6(0) * n6(1) * n6(2) * n6(3)).scale(&q(2)),
            ],
        },
        metadata: meta(32, 16, "T_{16}"),
    });

    let mob = |a, b, c, d| Some(Mobius::new(a, b, c, d).unwrap());
    let fp = |chi, h11, h12, level, label: Option<&str>| Metadata {
        chi: Some(chi),
        h11: Some(h11),
        h12: Some(h12),
        level: Some(level),
        type_label: label.map(str::to_string),
        ..Metadata::default()
    };
    out.push(product(
        "T36",
        "S5",
        "S6",
        None,
        1,
        fp(72, 36, 0, 8, Some("T_{36}")),
    ));
    out.push(product(
        "T40_1",
        "S1",
        "S1",
        None,
        1,
        fp(80, 40, 0, 8, Some("T_{40}^1")),
    ));
    out.push(product(
        "T40_2",
        "S2",
        "S3(2)",
        mob(2, 0, 1, -1),
        1,
        fp(80, 40, 0, 8, Some("T_{40}^2")),
    ));
    out.push(product(
        "T32_1",
        "S2",
        "S1",
        None,
        -1,
        fp(64, 32, 0, 8, Some("T_{32}^1")),
    ));
    out.push(product(
        "T32_2",
        "S1",
        "S3(2)",
        mob(2, 0, 1, -1),
        -1,
        fp(64, 32, 0, 8, Some("T_{32}^2")),
    ));
    out.push(product(
        "arr3",
        "S1",
        "S6",
        None,
        1,
        fp(88, 45, 1, 32, None),
    ));
    out.push(product(
        "arr19",
        "S1",
        "S6",
        mob(1, 1, 1, 0),
        1,
        fp(64, 33, 1, 32, None),
    ));
    out.push(product(
        "arr239",
        "S1",
        "S1",
        mob(1, 1, 0, 1),
        1,
        fp(64, 34, 2, 12, None),
    ));
    out.push(product(
        "arr240",
        "S1",
        "S7(2)",
        mob(1, 1, 0, 1),
        1,
        fp(64, 33, 1, 6, None),
    ));
    out.push(product(
        "arr245",
        "S2",
        "S7(2)",
        mob(1, 1, 0, 1),
        1,
        fp(64, 33, 1, 6, None),
    ));
    out
}

pub(super) fn aliases() -> Vec<(&'static str, &'static str)> {
    vec![
        ("T50", "T50_V1"),
        ("arr1", "T36"),
        ("arr32", "T40_2"),
        ("arr69", "T40_2"),
        ("arr93", "T32_2"),
        ("arr238", "T40_1"),
        ("arr241", "T32_1"),
    ]
}

/// One row of the fiber-product table: a double octic X and its fiber product Y.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableRow {
    pub row: u32,
    pub octic_chi: i64,
    pub octic_h11: i64,
    /// Catalog id of the double octic, when it is a listed level-8 type.
    pub octic: Option<&'static str>,
    pub fibers: [Vec<&'static str>; 2],
    pub chi: i64,
    pub h11: i64,
    pub h12: i64,
    pub level: u32,
    /// Catalog id of the fiber product.
    pub variety: &'static str,
}

pub fn fiber_product_rows() -> Vec<TableRow> {
    #[allow(clippy::too_many_arguments)]
    fn row(
        row: u32,
        oc: i64,
        oh: i64,
        octic: Option<&'static str>,
        top: &[&'static str],
        bottom: &[&'static str],
        (chi, h11, h12, level): (i64, i64, i64, u32),
        variety: &'static str,
    ) -> TableRow {
        TableRow {
            row,
            octic_chi: oc,
            octic_h11: oh,
            octic,
            fibers: [top.to_vec(), bottom.to_vec()],
            chi,
            h11,
            h12,
            level,
            variety,
        }
    }
    vec![
        row(
            1,
            140,
            70,
            Some("T70_1"),
            &["I2", "D6*", "I2"],
            &["D6*", "I2", "I2"],
            (72, 36, 0, 8),
            "T36",
        ),
        row(
            3,
            124,
            62,
            None,
            &["I4", "I4", "I2", "I2"],
            &["D6*", "I2", "I2", "I0"],
            (88, 45, 1, 32),
            "arr3",
        ),
        row(
            19,
            108,
            54,
            None,
            &["I2", "I2", "I4", "I4"],
            &["I0", "D6*", "I2", "I2"],
            (64, 33, 1, 32),
            "arr19",
        ),
        row(
            32,
            100,
            50,
            Some("T50_V1"),
            &["I2", "I2", "I4", "I4"],
            &["I2", "I2", "D4*", "I2"],
            (80, 40, 0, 8),
            "T40_2",
        ),
        row(
            69,
            100,
            50,
            Some("T50_V2"),
            &["I2", "I2", "I4", "I4"],
            &["I2", "I2", "D4*", "I2"],
            (80, 40, 0, 8),
            "T40_2",
        ),
        row(
            93,
            92,
            46,
            Some("T46"),
            &["I4", "I4", "I2", "I2"],
            &["I2", "I2", "D4*", "I2"],
            (64, 32, 0, 8),
            "T32_2",
        ),
        row(
            238,
            88,
            44,
            Some("T44"),
            &["I2", "I2", "I4", "I4"],
            &["I2", "I2", "I4", "I4"],
            (80, 40, 0, 8),
            "T40_1",
        ),
        row(
            239,
            80,
            40,
            None,
            &["I2", "I2", "I4", "I4", "I0"],
            &["I0", "I4", "I2", "I4", "I2"],
            (64, 34, 2, 12),
            "arr239",
        ),
        row(
            240,
            80,
            40,
            None,
            &["I2", "I2", "I4", "I4", "I0"],
            &["I2", "I2", "I2", "I4", "I2"],
            (64, 33, 1, 6),
            "arr240",
        ),
        row(
            241,
            80,
            40,
            Some("T40"),
            &["I2", "I2", "I4", "I4"],
            &["I4", "I4", "I2", "I2"],
            (64, 32, 0, 8),
            "T32_1",
        ),
        row(
            245,
            76,
            38,
            None,
            &["I2", "I2", "I4", "I4", "I0"],
            &["I4", "I2", "I2", "I2", "I2"],
            (64, 33, 1, 6),
            "arr245",
        ),
    ]
}

pub(super) const FIBRATION_IDS: [&str; 10] = [
    "S1", "S2", "S3", "S4", "S5", "S6", "S7", "X1128", "el2", "el4",
];

fn decl(list: &[(&str, String)]) -> Vec<(String, String)> {
    list.iter()
        .map(|(k, p)| (k.to_string(), p.clone()))
        .collect()
}

/// A built-in fibration; the lambda families default to [`super::DEFAULT_LAMBDA`].
pub(super) fn fibration(id: &str, lambda: Option<i64>) -> Option<FibrationSpec> {
    let family = matches!(id, "S3" | "S4" | "S7");
    if lambda.is_some() && !family {
        return None;
    }
    let l = lambda.unwrap_or(super::DEFAULT_LAMBDA);
    let s = |n: i64| n.to_string();
    let quartic = |forms: Vec<[i64; 3]>| FibrationSource::Quartic(forms);
    let s1_fibers = || {
        decl(&[
            ("I2", s(1)),
            ("I2", s(-1)),
            ("I4", s(0)),
            ("I4", "inf".into()),
        ])
    };
    let s2_fibers = || {
        decl(&[
            ("I2", s(0)),
            ("I2", "inf".into()),
            ("I4", s(-1)),
            ("I4", s(1)),
        ])
    };
    let d4 = || {
        decl(&[
            ("I2", s(0)),
            ("I2", s(1)),
            ("I2", s(l)),
            ("D4*", "inf".into()),
        ])
    };
    let (source, declared, rho, label) = match id {
        "S1" => (
            quartic(vec![[1, 0, 0], [1, 0, 1], [1, 1, 0], [1, 1, 1]]),
            s1_fibers(),
            Some(1),
            Some("X_4422"),
        ),
        "S2" => (
            quartic(vec![[1, 0, 0], [1, 1, 1], [1, 1, -1], [1, 2, 0]]),
            s2_fibers(),
            Some(1),
            Some("X_4422"),
        ),
        "S3" => (
            quartic(vec![[1, 0, 0], [1, 0, 1], [1, 0, l], [1, 1, 0]]),
            d4(),
            Some(2),
            None,
        ),
        "S4" => (
            quartic(vec![[0, 0, 1], [1, l, 0], [1, 1, 0], [1, 0, l]]),
            d4(),
            Some(2),
            None,
        ),
        "S5" => (
            quartic(vec![[1, 0, 0], [0, 0, 1], [1, 1, 0], [1, 0, 1]]),
            decl(&[("I2", s(1)), ("I2", s(0)), ("D6*", "inf".into())]),
            Some(1),
            Some("X_222"),
        ),
        "S6" => (
            quartic(vec![[1, 0, 0], [0, 1, 0], [1, 1, 0], [1, 0, 1]]),
            decl(&[("I2", s(1)), ("I2", "inf".into()), ("D6*", s(0))]),
            Some(1),
            Some("X_222"),
        ),
        "S7" => (
            quartic(vec![[1, 0, 0], [1, 0, 1], [1, 1, -l], [1, 1, 0]]),
            decl(&[
                ("I2", s(0)),
                ("I2", s(1)),
                ("I2", s(l)),
                ("I2", s(l + 1)),
                ("I4", "inf".into()),
            ]),
            Some(2),
            None,
        ),
        "X1128" => (
            FibrationSource::Quotient("el2".into()),
            decl(&[
                ("I1", s(1)),
                ("I1", s(-1)),
                ("I2", s(0)),
                ("I8", "inf".into()),
            ]),
            None,
            Some("X_1128"),
        ),
        "el2" => (
            FibrationSource::Weierstrass([vec![1, 0, -2], vec![0, 0, -1, 0, 1], vec![0]]),
            s1_fibers(),
            Some(1),
            Some("X_4422"),
        ),
        "el4" => (
            FibrationSource::Weierstrass([vec![-2, 0, -2], vec![1, 0, -2, 0, 1], vec![0]]),
            s2_fibers(),
            Some(1),
            Some("X_4422"),
        ),
        _ => return None,
    };
    Some(FibrationSpec {
        id: id.to_string(),
        lambda: family.then_some(l),
        source,
        declared,
        rho,
        label: label.map(str::to_string),
    })
}
