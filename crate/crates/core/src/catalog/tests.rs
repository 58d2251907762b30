use std::collections::BTreeMap;

use super::*;
use crate::elliptic::{KodairaType, Place};
use crate::symbolic::poly::q;

fn reg() -> Registry {
    Registry::builtin()
}

#[test]
fn t28_entry() {
    let r = reg();
    let t28 = r.get("T28").unwrap();
    let v = |i| Poly::var(4, i).pow(2);
    let expected = (v(0) + v(1) + v(2) - v(3))
        * (v(0) + v(1) - v(2) + v(3))
        * (v(0) - v(1) + v(2) + v(3))
        * (-v(0) + v(1) + v(2) + v(3));
    assert_eq!(t28.octic().unwrap(), expected);
    assert_eq!((t28.metadata.chi, t28.metadata.h11), (Some(56), Some(28)));
}

#[test]
fn fermi_entry() {
    let r = reg();
    let t70 = r.get("T70").unwrap();
    assert_eq!(t70.shape, Shape::FermiAffine);
    assert_eq!((t70.metadata.chi, t70.metadata.h11), (Some(140), Some(70)));
}

#[test]
fn every_listed_id_resolves() {
    let r = reg();
    for id in [
        "T70",
        "T70_1",
        "T50_V1",
        "T50_V2",
        "T46",
        "T44",
        "T40",
        "T40_1",
        "T40_2",
        "T40_3",
        "T36",
        "T32",
        "T32_1",
        "T32_2",
        "T28",
        "T16",
        "quintic_Z",
        "cayley_octic",
        "arr239",
        "arr240",
        "arr245",
        "arr3",
        "arr19",
        "arr1",
        "arr32",
        "arr69",
        "arr93",
        "arr238",
        "arr241",
    ] {
        assert!(r.contains(id), "{id}");
    }
    for v in r.varieties() {
        v.validate().unwrap();
        if let Some(m) = v.metadata.chi.zip(v.metadata.h11).zip(v.metadata.h12) {
            // chi = 2 (h11 - h12) for Calabi-Yau threefolds
            assert_eq!(m.0 .0, 2 * (m.0 .1 - m.1), "{}", v.id);
        }
    }
}

#[test]
fn empty_user_file_changes_nothing() {
    let mut r = reg();
    let before: Vec<String> = r.varieties().map(|v| v.id.clone()).collect();
    r.extend_from_str("").unwrap();
    r.extend_from_str("# only a comment\n\n").unwrap();
    let after: Vec<String> = r.varieties().map(|v| v.id.clone()).collect();
    assert_eq!(before, after);
}

#[test]
fn table_rows_spot_values() {
    let r = reg();
    let get = |n: u32| {
        let row = r.rows().iter().find(|x| x.row == n).unwrap();
        (row.chi, row.h11, row.h12, row.level)
    };
    assert_eq!(get(238), (80, 40, 0, 8));
    assert_eq!(get(239), (64, 34, 2, 12));
    assert_eq!(get(240), (64, 33, 1, 6));
    assert_eq!(get(245), (64, 33, 1, 6));
    assert_eq!(get(3), (88, 45, 1, 32));
    assert_eq!(get(19), (64, 33, 1, 32));
    for row in r.rows() {
        let v = r.get(row.variety).unwrap();
        assert_eq!(v.metadata.chi, Some(row.chi));
        assert_eq!(v.metadata.h11, Some(row.h11));
        assert_eq!(v.metadata.level, Some(row.level));
        assert_eq!(row.chi, 2 * (row.h11 - row.h12));
        if let Some(o) = row.octic {
            let x = r.get(o).unwrap();
            assert_eq!(
                (x.metadata.chi, x.metadata.h11),
                (Some(row.octic_chi), Some(row.octic_h11))
            );
        }
    }
}

/// Column pairs (left type, right type) of a fiber product, I0 for smooth.
fn columns(left: &str, right: &str, mobius: Option<Mobius>) -> Vec<(KodairaType, KodairaType)> {
    let l = resolve_fibration(left).unwrap().model().unwrap();
    let mut r = resolve_fibration(right).unwrap().model().unwrap();
    if let Some(m) = mobius {
        r = r.pullback(&m);
    }
    let mut by_place: BTreeMap<Place, (KodairaType, KodairaType)> = BTreeMap::new();
    for f in l.fiber_configuration() {
        by_place
            .entry(f.place)
            .or_insert((KodairaType::I(0), KodairaType::I(0)))
            .0 = f.kind;
    }
    for f in r.fiber_configuration() {
        by_place
            .entry(f.place)
            .or_insert((KodairaType::I(0), KodairaType::I(0)))
            .1 = f.kind;
    }
    let mut v: Vec<_> = by_place.into_values().collect();
    v.sort();
    v
}

#[test]
fn fiber_product_models_match_table_columns() {
    let r = reg();
    for row in r.rows() {
        let Shape::FiberProduct {
            left,
            right,
            mobius,
            ..
        } = &r.get(row.variety).unwrap().shape
        else {
            panic!("row {} is not a fiber product", row.row);
        };
        let mut want: Vec<_> = row.fibers[0]
            .iter()
            .zip(&row.fibers[1])
            .map(|(a, b)| {
                (
                    KodairaType::parse(a).unwrap(),
                    KodairaType::parse(b).unwrap(),
                )
            })
            .collect();
        want.sort();
        assert_eq!(columns(left, right, *mobius), want, "row {}", row.row);
    }
}

#[test]
fn fibration_declarations_match_computation() {
    for id in fibration_ids() {
        for lambda in [None, Some(2), Some(5)] {
            let Ok(f) = resolve_fibration(&match lambda {
                Some(l) => format!("{id}({l})"),
                None => id.to_string(),
            }) else {
                assert!(lambda.is_some(), "{id}");
                continue;
            };
            let mut computed: Vec<(KodairaType, String)> = f
                .model()
                .unwrap()
                .fiber_configuration()
                .into_iter()
                .map(|k| (k.kind, k.place.to_string()))
                .collect();
            computed.sort();
            let mut declared = f.declared_types();
            declared.sort();
            assert_eq!(computed, declared, "{f}");
        }
    }
    assert!(resolve_fibration("S9").is_err());
    assert!(resolve_fibration("S1(2)").is_err());
    assert!(resolve_fibration("S3(x)").is_err());
}

#[test]
fn maps_resolve_and_match_arity() {
    let r = reg();
    for m in r.maps() {
        assert!(r.resolves(&m.source), "{}: {}", m.id, m.source);
        assert!(r.resolves(&m.target), "{}: {}", m.id, m.target);
        assert_eq!(m.components.len(), m.target_arity(), "{}", m.id);
    }
}

#[test]
fn map_certificates() {
    let r = reg();
    for m in r.maps() {
        let c = m.verify().unwrap();
        let expect = !matches!(
            m.id.as_str(),
            "phi_literal" | "gamma_dual_literal" | "T44_change2"
        );
        assert_eq!(c.passed, expect, "{}: {:?}", m.id, c.residual);
        if c.passed {
            assert!(c.recheck(), "{}", m.id);
        }
    }
    assert!(generic_quotient_certificate(false).unwrap().passed);
    assert!(!generic_quotient_certificate(true).unwrap().passed);
}

#[test]
fn graph_edges() {
    let g = correspondence_graph(&reg());
    assert!(g.nodes.len() >= 16);
    assert!(g.has_edge("T32", "T70", "8:1"));
    assert!(g.has_edge("T40_1", "T36", "4:1"));
    assert!(g.has_edge("T44", "T70_1", "8:1") && g.has_edge("T44", "T70_1", "8:2"));
    let r = reg();
    for e in &g.edges {
        assert!(g.nodes.iter().any(|(id, _)| *id == e.from), "{}", e.from);
        assert!(g.nodes.iter().any(|(id, _)| *id == e.to), "{}", e.to);
        if let Some(via) = &e.via {
            assert!(r.map(via).is_ok(), "{via}");
        }
    }
    let dot = g.to_dot();
    assert!(dot.contains("\"T32\" -> \"T70\" [label=\"8:1\"]"));
}

const SAMPLE: &str = "
# a user entry
[variety my_t70]
shape = double_octic
factor = 1 1 0 0 0
factor = 1 0 1 0 0
factor = 1 0 0 1 0
factor = 1 0 0 0 1
factor = 1 1 0 0 0; -1 0 1 0 0
factor = 1 0 1 0 0; -1 0 0 1 0
factor = 1 0 0 1 0; -1 0 0 0 1
factor = 1 0 0 0 1; -1 1 0 0 0
chi = 140
h11 = 70
level = 8

[variety my_fp]
shape = fiber_product
left = S1
right = S3(2)
mobius = 2 0 1 -1
twist = -1
";

#[test]
fn parse_structured_text() {
    let entries = parse_catalog(SAMPLE).unwrap();
    assert_eq!(entries.len(), 2);
    assert_eq!(entries[0].octic(), reg().get("T70_1").unwrap().octic());
    let mut r = reg();
    r.extend(entries).unwrap();
    assert!(r.contains("my_fp"));
}

#[test]
fn parse_errors_carry_line_and_field() {
    let bad = "[variety a]\nshape = double_octic\nfactor = 1 1 0 0\n";
    match parse_catalog(bad) {
        Err(CatalogError::Parse { line, field, .. }) => {
            assert_eq!((line, field.as_str()), (3, "factor"))
        }
        other => panic!("{other:?}"),
    }
    let bad = "[variety a]\nshape = fermi_affine\ncolour = red\n";
    assert!(matches!(
        parse_catalog(bad),
        Err(CatalogError::Parse { line: 3, .. })
    ));
    let bad = "[variety a]\nshape = double_octic\nfactor = 1 1 0 0 0\n";
    assert!(matches!(
        parse_catalog(bad),
        Err(CatalogError::Parse { line: 1, .. })
    ));
    let dup = "[variety a]\nshape = fermi_affine\n[variety a]\nshape = fermi_affine\n";
    assert_eq!(parse_catalog(dup), Err(CatalogError::Duplicate("a".into())));
    let mut r = reg();
    assert_eq!(
        r.extend_from_str("[variety T28]\nshape = fermi_affine\n"),
        Err(CatalogError::Duplicate("T28".into()))
    );
    assert_eq!(
        r.extend_from_str("[variety arr1]\nshape = fermi_affine\n"),
        Err(CatalogError::Duplicate("arr1".into()))
    );
}

#[test]
fn text_and_json_round_trip() {
    let r = reg();
    let all: Vec<VarietySpec> = r.varieties().cloned().collect();
    let text = render_catalog(&all);
    assert_eq!(parse_catalog(&text).unwrap(), all);
    let json = serde_json::to_string_pretty(&all).unwrap();
    let mut fresh = Registry {
        varieties: BTreeMap::new(),
        aliases: BTreeMap::new(),
        maps: Vec::new(),
        rows: Vec::new(),
    };
    fresh.extend_from_str(&json).unwrap();
    assert_eq!(fresh.varieties().cloned().collect::<Vec<_>>(), all);
    let one = serde_json::to_string(r.get("T32").unwrap()).unwrap();
    let mut r2 = reg();
    assert_eq!(
        r2.extend_from_str(&one),
        Err(CatalogError::Duplicate("T32".into()))
    );
}

#[test]
fn integer_schema_only() {
    assert!(parse_poly("1/2 1 0", 2).is_err());
    assert!(parse_poly("1 -1 0", 2).is_err());
    assert_eq!(
        parse_poly("2 1 0; -2 1 0", 2),
        Err("polynomial is zero".into())
    );
    assert_eq!(
        parse_poly("3 2 0", 2).unwrap(),
        Poly::var(2, 0).pow(2).scale(&q(3))
    );
}
