//! Explicit maps between catalog entries, each paired with the symbolic check
//! that certifies it.

use serde::Serialize;

use super::builtin::{
    t28_factors, t32_rhs, t40_3_forms, t44_factors, t44b_factors, t44c_factors, t70_1_factors,
    v1c_factors, v2c_factors,
};
use super::resolve_fibration;
use crate::elliptic::{el2, quotient_by_two_torsion, verify_base_change, WeierstrassModel};
use crate::symbolic::poly::{q, qr, Poly};
use crate::symbolic::ratfunc::RatFunc;
use crate::symbolic::univariate::{Qt, UPoly};
use crate::symbolic::verify::{
    self, cremona, Certificate, CoverSource, RationalMap, Relation, VerifyError,
};

/// How a map is certified.
#[derive(Clone, Debug)]
pub enum MapCheck {
    Cremona {
        source: Poly,
        target: Poly,
    },
    Cover {
        source: CoverSource,
        target: Poly,
        weights: (Vec<u32>, Vec<u32>),
    },
    ProjectiveChange {
        source: Poly,
        target: Poly,
    },
    /// Curves `y^2 = src(x, t)` and `Y^2 = tgt(X, t)` in the ring (x, y, t).
    Isogeny {
        source_rhs: Poly,
        target_rhs: Poly,
    },
    BaseChange {
        base: WeierstrassModel,
        substitution: Qt,
        target: WeierstrassModel,
    },
    OnVariety {
        relations: Vec<Relation>,
        target: Poly,
    },
}

impl MapCheck {
    pub fn name(&self) -> &'static str {
        match self {
            MapCheck::Cremona { .. } => "cremona",
            MapCheck::Cover { .. } => "cover",
            MapCheck::ProjectiveChange { .. } => "projective_change",
            MapCheck::Isogeny { .. } => "isogeny",
            MapCheck::BaseChange { .. } => "base_change",
            MapCheck::OnVariety { .. } => "on_variety",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MapSpec {
    pub id: String,
    pub source: String,
    pub target: String,
    #[serde(serialize_with = "display_components")]
    pub components: Vec<RatFunc>,
    pub names: Vec<&'static str>,
    /// Generic degree label such as `8:1`.
    pub degree: String,
    /// A formula kept exactly as printed; its failure is informational.
    pub literal: bool,
    pub note: Option<String>,
    #[serde(skip)]
    pub check: MapCheck,
}

fn display_components<S: serde::Serializer>(c: &[RatFunc], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(c.iter().map(|f| f.to_string()))
}

impl MapSpec {
    pub fn verify(&self) -> Result<Certificate, VerifyError> {
        let map = RationalMap::new(self.components.clone());
        let names = &self.names;
        match &self.check {
            MapCheck::Cremona { source, target } => verify::verify_cremona(source, target),
            MapCheck::Cover {
                source,
                target,
                weights,
            } => verify::verify_cover(&map, source, target, (&weights.0, &weights.1), names),
            MapCheck::ProjectiveChange { source, target } => {
                verify::verify_projective_change(&map, source, target, names)
            }
            MapCheck::Isogeny {
                source_rhs,
                target_rhs,
            } => verify::verify_isogeny(&map, source_rhs, target_rhs, names),
            MapCheck::BaseChange {
                base,
                substitution,
                target,
            } => Ok(verify_base_change(base, substitution, target)),
            MapCheck::OnVariety { relations, target } => {
                verify::verify_on_variety(&map, relations, target, names)
            }
        }
    }

    /// Number of coordinates of the target ambient space the check expects.
    pub fn target_arity(&self) -> usize {
        match &self.check {
            MapCheck::Cremona { .. } | MapCheck::ProjectiveChange { .. } => 4,
            MapCheck::Cover { weights, .. } => weights.1.len(),
            MapCheck::Isogeny { .. } => 2,
            MapCheck::BaseChange { .. } => 1,
            MapCheck::OnVariety { target, .. } => target.nvars(),
        }
    }
}

const P4W: [&str; 5] = ["x", "y", "z", "t", "w"];
const P7: [&str; 8] = ["x", "y", "z", "t", "u1", "u2", "u3", "u4"];
const XYT: [&str; 3] = ["x", "y", "t"];

fn poly_map(c: Vec<Poly>) -> Vec<RatFunc> {
    c.into_iter().map(RatFunc::from_poly).collect()
}

/// `w^2 - prod factors` in the ring (x, y, z, t, w).
fn double_cover_eq(factors: &[Poly]) -> Poly {
    let f = Poly::product(4, factors).rename(5, &[0, 1, 2, 3]);
    Poly::var(5, 4).pow(2) - f
}

/// `(x : y : z : t : w) -> (x^2 : y^2 : z^2 : t^2 : xyzt w)`.
fn squaring_map() -> Vec<RatFunc> {
    let v = |i| Poly::var(5, i);
    poly_map(vec![
        v(0).pow(2),
        v(1).pow(2),
        v(2).pow(2),
        v(3).pow(2),
        v(0) * v(1) * v(2) * v(3) * v(4),
    ])
}

/// Relations `coeff * u_i^2 = f_i` in the ring (x, y, z, t, u1..u4).
fn quadric_relations(forms: &[Poly], coeff: i64) -> Vec<Relation> {
    forms
        .iter()
        .enumerate()
        .map(|(i, f)| Relation::new(4 + i, q(coeff), f.rename(8, &[0, 1, 2, 3])))
        .collect()
}

fn cover(
    id: &str,
    source: &str,
    target: &str,
    degree: &str,
    components: Vec<RatFunc>,
    names: &[&'static str],
    src: CoverSource,
    target_eq: Poly,
    source_weights: Vec<u32>,
) -> MapSpec {
    MapSpec {
        id: id.into(),
        source: source.into(),
        target: target.into(),
        components,
        names: names.to_vec(),
        degree: degree.into(),
        literal: false,
        note: None,
        check: MapCheck::Cover {
            source: src,
            target: target_eq,
            weights: (source_weights, vec![1, 1, 1, 1, 4]),
        },
    }
}

/// Polynomial in the ring (x, y, t) from a univariate polynomial in t.
fn in_t(c: &[i64]) -> Poly {
    UPoly::from_ints(c).to_poly(3, 2)
}

/// The isogeny between the two `X_4422` models, with the y-numerator
/// constant term `48 c` for `c` either `u` (as printed) or `u^2`.
fn phi_components(literal: bool) -> Vec<RatFunc> {
    let x = Poly::var(3, 0);
    let y = Poly::var(3, 1);
    let u = in_t(&[-1, 0, 1]);
    let c48 = if literal { u.clone() } else { u.pow(2) };
    let shift = &x + &u.scale(&q(8));
    let xn = x.pow(2) + (&x * &u).scale(&q(16)) + u.pow(2).scale(&q(80));
    let yn = &y * &(x.pow(2) + (&x * &u).scale(&q(16)) + c48.scale(&q(48)));
    vec![
        RatFunc::new(xn, shift.scale(&q(4))),
        RatFunc::new(yn, shift.pow(2).scale(&q(8))),
    ]
}

/// Source and target cubics for `phi`: el4 and el2, each scaled by 4 and
/// translated so that the formulas apply verbatim.
fn phi_curves() -> (Poly, Poly) {
    let x = Poly::var(3, 0);
    let u = in_t(&[-1, 0, 1]);
    let s = &x + &u.scale(&q(8));
    let src = &s * &(&s - &in_t(&[4, -8, 4])) * (&s - &in_t(&[4, 8, 4]));
    let tgt = (&x + &u.scale(&q(2))) * (&x - &u.scale(&q(2))) * (&x - &in_t(&[2, 0, 2]));
    (src, tgt)
}

fn isogeny(
    id: &str,
    source: &str,
    target: &str,
    components: Vec<RatFunc>,
    src: Poly,
    tgt: Poly,
) -> MapSpec {
    MapSpec {
        id: id.into(),
        source: source.into(),
        target: target.into(),
        components,
        names: XYT.to_vec(),
        degree: "2:1".into(),
        literal: false,
        note: None,
        check: MapCheck::Isogeny {
            source_rhs: src,
            target_rhs: tgt,
        },
    }
}

fn projective(
    id: &str,
    source: &str,
    target: &str,
    comps: Vec<Poly>,
    src: Poly,
    tgt: Poly,
) -> MapSpec {
    MapSpec {
        id: id.into(),
        source: source.into(),
        target: target.into(),
        components: poly_map(comps),
        names: vec!["x", "y", "z", "t"],
        degree: "1:1".into(),
        literal: false,
        note: None,
        check: MapCheck::ProjectiveChange {
            source: src,
            target: tgt,
        },
    }
}

/// Linear form with rational coefficients `c_i / d`.
fn lin_over(c: [i64; 4], d: i64) -> Poly {
    Poly::linear(&c).scale(&qr(1, d))
}

pub(super) fn builtin_maps() -> Vec<MapSpec> {
    let mut out = Vec::new();
    let v8 = |i| Poly::var(8, i);

    let mut crem = MapSpec {
        id: "cremona_V1_V2".into(),
        source: "T50_V1c".into(),
        target: "T50_V2c".into(),
        components: cremona().components,
        names: vec!["x", "y", "z", "t"],
        degree: "1:1".into(),
        literal: false,
        note: Some("birational involution (x,y,z,t) -> (yz, xy, xz, xt)".into()),
        check: MapCheck::Cremona {
            source: Poly::product(4, &v1c_factors()),
            target: Poly::product(4, &v2c_factors()),
        },
    };
    out.push(crem.clone());
    crem.id = "cremona_V2_V1".into();
    crem.source = "T50_V2c".into();
    crem.target = "T50_V1c".into();
    crem.check = MapCheck::Cremona {
        source: Poly::product(4, &v2c_factors()),
        target: Poly::product(4, &v1c_factors()),
    };
    out.push(crem);

    out.push(cover(
        "cover_T44_T70_1",
        "T44b",
        "T70_1",
        "8:1",
        squaring_map(),
        &P4W,
        CoverSource::Hypersurface(double_cover_eq(&t44b_factors())),
        double_cover_eq(&t70_1_factors()),
        vec![1, 1, 1, 1, 4],
    ));
    out.push(cover(
        "cover_T28_T44",
        "T28",
        "T44c",
        "8:1",
        squaring_map(),
        &P4W,
        CoverSource::Hypersurface(double_cover_eq(&t28_factors())),
        double_cover_eq(&t44c_factors()),
        vec![1, 1, 1, 1, 4],
    ));
    let u_prod = v8(4) * v8(5) * v8(6) * v8(7);
    out.push(cover(
        "cover_T40_3_T44",
        "T40_3",
        "T44b",
        "8:1",
        poly_map(vec![v8(0), v8(1), v8(2), v8(3), u_prod.clone()]),
        &P7,
        CoverSource::Relations(quadric_relations(&t40_3_forms(), 1)),
        double_cover_eq(&t44b_factors()),
        vec![1; 8],
    ));
    out.push(cover(
        "cover_T40_3_T70_1",
        "T40_3",
        "T70_1",
        "64:1",
        poly_map(vec![
            v8(0).pow(2),
            v8(1).pow(2),
            v8(2).pow(2),
            v8(3).pow(2),
            v8(0) * v8(1) * v8(2) * v8(3) * u_prod.clone(),
        ]),
        &P7,
        CoverSource::Relations(quadric_relations(&t40_3_forms(), 1)),
        double_cover_eq(&t70_1_factors()),
        vec![1; 8],
    ));
    let t32_forms: Vec<Poly> = t32_rhs().iter().map(|g| g.scale(&q(2))).collect();
    out.push(cover(
        "cover_T32_T28",
        "T32",
        "T28",
        "8:1",
        poly_map(vec![v8(0), v8(1), v8(2), v8(3), u_prod.scale(&qr(1, 4))]),
        &P7,
        CoverSource::Relations(quadric_relations(&t32_forms, 1)),
        double_cover_eq(&t28_factors()),
        vec![1; 8],
    ));

    let (src, tgt) = phi_curves();
    let mut phi = isogeny(
        "phi",
        "el4",
        "el2",
        phi_components(false),
        src.clone(),
        tgt.clone(),
    );
    phi.note =
        Some("y-numerator constant term 48(t^2-1)^2; models scaled by 4 and translated".into());
    out.push(phi);
    let mut lit = isogeny("phi_literal", "el4", "el2", phi_components(true), src, tgt);
    lit.literal = true;
    lit.note = Some("y-numerator constant term 48(t^2-1) as printed".into());
    out.push(lit);

    // composite of the scaling, translation and quotient steps, el4 -> el2
    let x = Poly::var(3, 0);
    let y = Poly::var(3, 1);
    let u = in_t(&[-1, 0, 1]);
    let el4_rhs = &x * &(&x - &in_t(&[1, -2, 1])) * (&x - &in_t(&[1, 2, 1]));
    let el2_rhs = &x * &(&x - &u) * (&x - &in_t(&[0, 0, 1]));
    out.push(isogeny(
        "phi_chain",
        "el4",
        "el2",
        vec![
            RatFunc::new((&x + &u).pow(2), x.scale(&q(4))),
            RatFunc::new(&y * &(x.pow(2) - u.pow(2)), x.pow(2).scale(&q(8))),
        ],
        el4_rhs,
        el2_rhs,
    ));

    let el = el2();
    let iso =
        quotient_by_two_torsion(el.a2(), el.a4()).expect("el2 has a rational 2-torsion point");
    out.push(isogeny(
        "gamma_dual",
        "el2",
        "X1128",
        iso.map.components.clone(),
        iso.source_rhs.clone(),
        iso.target_rhs.clone(),
    ));
    let b = el.a4().as_poly().unwrap().to_poly(3, 2);
    let mut gl = isogeny(
        "gamma_dual_literal",
        "el2",
        "X1128",
        vec![
            iso.map.components[0].clone(),
            RatFunc::new(&y * &x.pow(2) - b, x.pow(2)),
        ],
        iso.source_rhs,
        iso.target_rhs,
    );
    gl.literal = true;
    gl.note = Some("y-component y - B/x^2 as printed".into());
    out.push(gl);

    let t2 = Qt::from_poly(UPoly::from_ints(&[0, 0, 1]));
    for (id, base) in [("psi", "S5"), ("psi_prime", "S6")] {
        let model = resolve_fibration(base).unwrap().model().unwrap();
        out.push(MapSpec {
            id: id.into(),
            source: "S1".into(),
            target: base.into(),
            components: vec![RatFunc::from_poly(
                UPoly::from_ints(&[0, 0, 1]).to_poly(1, 0),
            )],
            names: vec!["t"],
            degree: "2:1".into(),
            literal: false,
            note: Some("base change t -> t^2 compared with el2".into()),
            check: MapCheck::BaseChange {
                base: model,
                substitution: t2.clone(),
                target: el2(),
            },
        });
    }

    let t44 = Poly::product(4, &t44_factors());
    let t44b = Poly::product(4, &t44b_factors());
    let t44c = Poly::product(4, &t44c_factors());
    out.push(projective(
        "T44_change1",
        "T44",
        "T44b",
        vec![
            lin_over([0, -1, -1, 2], 2),
            lin_over([-2, -1, -1, 0], 2),
            lin_over([0, -1, -1, -2], 2),
            lin_over([0, 1, -1, 0], 2),
        ],
        t44.clone(),
        t44b.clone(),
    ));
    let mut c2 = projective(
        "T44_change2",
        "T44b",
        "T44c",
        vec![
            Poly::linear(&[1, 0, 0, -1]),
            Poly::linear(&[0, 1, -1, 0]),
            Poly::linear(&[0, 1, 1, 0]),
            Poly::linear(&[1, 0, 0, 1]),
        ],
        t44b.clone(),
        t44c.clone(),
    );
    c2.literal = true;
    c2.note = Some("as printed".into());
    out.push(c2);
    let mut c2f = projective(
        "T44_change2_fixed",
        "T44c",
        "T44b",
        vec![
            Poly::linear(&[1, 0, 0, 1]),
            Poly::linear(&[0, 1, -1, 0]),
            Poly::linear(&[0, 1, 1, 0]),
            Poly::linear(&[1, 0, 0, -1]),
        ],
        t44c,
        t44b,
    );
    c2f.note = Some("x + t and x - t exchanged; carries T44c onto T44b".into());
    out.push(c2f);

    // ring (x0, x1, x2, x3, y0, y1, y2, y3) with 2 y_i^2 = g_i
    let rels: Vec<Relation> = t32_rhs()
        .iter()
        .enumerate()
        .map(|(i, g)| Relation::new(4 + i, q(2), g.rename(8, &[0, 1, 2, 3])))
        .collect();
    let comps = (0..4)
        .map(|i| RatFunc::new(v8(4 + i) + v8(i), v8(4 + i) - v8(i)))
        .collect();
    let f = |i| Poly::var(4, i);
    let fermi = (0..4).fold(Poly::zero(4), |acc, i| {
        let others = (0..4)
            .filter(|&j| j != i)
            .fold(Poly::one(4), |p, j| p * f(j));
        acc + (f(i).pow(2) + Poly::one(4)) * others
    });
    out.push(MapSpec {
        id: "T32_T70".into(),
        source: "T32".into(),
        target: "T70".into(),
        components: comps,
        names: vec!["x0", "x1", "x2", "x3", "y0", "y1", "y2", "y3"],
        degree: "8:1".into(),
        literal: true,
        note: Some(
            "x = (y0 + x0)/(y0 - x0) and cyclically, into the Fermi equation cleared by xyzt"
                .into(),
        ),
        check: MapCheck::OnVariety {
            relations: rels,
            target: fermi,
        },
    });
    out
}

/// The 2-isogeny `(x, y) -> (x + B/x, Y)` of `y^2 = x^3 + A x^2 + B x` onto
/// `Y^2 = (X + A)(X^2 - 4B)` with A, B indeterminates. `literal` selects the
/// printed y-component `y - B/x^2` instead of `y (1 - B/x^2)`.
pub fn generic_quotient_certificate(literal: bool) -> Result<Certificate, VerifyError> {
    let v = |i| Poly::var(4, i);
    let (x, y, a, b) = (v(0), v(1), v(2), v(3));
    let src = x.pow(3) + &a * &x.pow(2) + &b * &x;
    let tgt = (&x + &a) * (x.pow(2) - b.scale(&q(4)));
    let xm = RatFunc::new(x.pow(2) + b.clone(), x.clone());
    let ym = if literal {
        RatFunc::new(&y * &x.pow(2) - b, x.pow(2))
    } else {
        RatFunc::new(&y * &(x.pow(2) - b), x.pow(2))
    };
    verify::verify_isogeny(
        &RationalMap::new(vec![xm, ym]),
        &src,
        &tgt,
        &["x", "y", "A", "B"],
    )
}
