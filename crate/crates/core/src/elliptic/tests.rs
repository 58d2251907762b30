use super::*;
use crate::ff::PrimeField;
use crate::symbolic::poly::qr;

fn lin(a: i64, b: i64, c: i64) -> Poly {
    Poly::linear(&[a, b, c])
}

fn s1() -> Vec<Poly> {
    vec![lin(1, 0, 0), lin(1, 0, 1), lin(1, 1, 0), lin(1, 1, 1)]
}

fn s2() -> Vec<Poly> {
    vec![lin(1, 0, 0), lin(1, 1, 1), lin(1, 1, -1), lin(1, 2, 0)]
}

fn s3(l: i64) -> Vec<Poly> {
    vec![lin(1, 0, 0), lin(1, 0, 1), lin(1, 0, l), lin(1, 1, 0)]
}

fn s4(l: i64) -> Vec<Poly> {
    vec![lin(0, 0, 1), lin(1, l, 0), lin(1, 1, 0), lin(1, 0, l)]
}

fn s5() -> Vec<Poly> {
    vec![lin(1, 0, 0), lin(0, 0, 1), lin(1, 1, 0), lin(1, 0, 1)]
}

fn s6() -> Vec<Poly> {
    vec![lin(1, 0, 0), lin(0, 1, 0), lin(1, 1, 0), lin(1, 0, 1)]
}

fn s7(l: i64) -> Vec<Poly> {
    vec![lin(1, 0, 0), lin(1, 0, 1), lin(1, 1, -l), lin(1, 1, 0)]
}

/// Fiber list as (type, place) strings for comparison.
fn config(m: &WeierstrassModel) -> Vec<(String, String)> {
    let mut v: Vec<_> = m
        .fiber_configuration()
        .iter()
        .map(|f| (f.kind.to_string(), f.place.to_string()))
        .collect();
    v.sort();
    v
}

fn expect(list: &[(&str, &str)]) -> Vec<(String, String)> {
    let mut v: Vec<_> = list
        .iter()
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect();
    v.sort();
    v
}

#[test]
fn table_configurations() {
    let cases: Vec<(Vec<Poly>, Vec<(&str, &str)>)> = vec![
        (
            s1(),
            vec![("I2", "1"), ("I2", "-1"), ("I4", "0"), ("I4", "inf")],
        ),
        (
            s2(),
            vec![("I2", "0"), ("I2", "inf"), ("I4", "-1"), ("I4", "1")],
        ),
        (
            s3(2),
            vec![("I2", "0"), ("I2", "1"), ("I2", "2"), ("I0*", "inf")],
        ),
        (
            s4(2),
            vec![("I2", "0"), ("I2", "1"), ("I2", "2"), ("I0*", "inf")],
        ),
        (s5(), vec![("I2", "1"), ("I2", "0"), ("I2*", "inf")]),
        (s6(), vec![("I2", "1"), ("I2", "inf"), ("I2*", "0")]),
        (
            s7(2),
            vec![
                ("I2", "0"),
                ("I2", "1"),
                ("I2", "2"),
                ("I2", "3"),
                ("I4", "inf"),
            ],
        ),
    ];
    for (i, (q, want)) in cases.into_iter().enumerate() {
        let m = from_quartic(&q).unwrap();
        assert_eq!(config(&m), expect(&want), "S{}", i + 1);
        assert_eq!(euler_sum(&m.fiber_configuration()), 12);
    }
}

#[test]
fn d_aliases() {
    let m = from_quartic(&s5()).unwrap();
    let inf = m.kodaira_type(&Place::Infinity);
    assert_eq!(inf.kind.d_alias().as_deref(), Some("D6*"));
    assert_eq!(KodairaType::parse("D4*"), Some(KodairaType::IStar(0)));
    assert_eq!(KodairaType::parse("I8"), Some(KodairaType::I(8)));
    assert_eq!(KodairaType::parse("III*"), Some(KodairaType::IIIStar));
}

#[test]
fn degenerate_sections_rejected() {
    for l in [0, 1] {
        assert!(matches!(
            from_quartic(&s3(l)),
            Err(EllipticError::RepeatedSection(_, _))
        ));
    }
    // a negative parameter only moves the third I2 fiber
    let m = from_quartic(&s3(-1)).unwrap();
    assert_eq!(
        config(&m),
        expect(&[("I2", "0"), ("I2", "1"), ("I2", "-1"), ("I0*", "inf")])
    );
}

#[test]
fn weierstrass_families() {
    assert_eq!(config(&el2()), config(&from_quartic(&s1()).unwrap()));
    assert_eq!(
        config(&el4()),
        expect(&[("I2", "0"), ("I2", "inf"), ("I4", "-1"), ("I4", "1")])
    );
    let x = x1128().fiber_configuration();
    let kinds: Vec<String> = x.iter().map(|f| f.kind.to_string()).collect();
    let mut sorted = kinds.clone();
    sorted.sort();
    assert_eq!(sorted, vec!["I1", "I1", "I2", "I8"]);
    assert_eq!(euler_sum(&x), 12);
}

#[test]
fn minimal_model_recovers_scaling() {
    let m = from_quartic(&s1()).unwrap().global_minimal_model();
    let t = UPoly::t();
    let (same, k) = m.minimal_model_at(&t);
    assert_eq!(k, 0);
    assert_eq!(same, m);
    let scaled = m.rescale(&Qt::t().recip());
    let (back, k) = scaled.minimal_model_at(&t);
    assert_eq!(k, 1);
    assert_eq!(
        back.discriminant().valuation_at(&t),
        m.discriminant().valuation_at(&t)
    );
    let inf = from_quartic(&s1()).unwrap().infinity_model();
    assert_eq!(inf.discriminant().valuation_at(&t), Some(4));
}

#[test]
fn kodaira_type_invariant_under_unit_rescaling() {
    let m = from_quartic(&s7(2)).unwrap();
    let u = Qt::from_poly(UPoly::from_ints(&[5, 1]));
    let m2 = m.rescale(&u);
    for place in [Place::at_int(0), Place::at_int(3), Place::Infinity] {
        assert_eq!(m.kodaira_type(&place).kind, m2.kodaira_type(&place).kind);
    }
    let m3 = m.rescale(&Qt::from_int(3));
    assert_eq!(config(&m), config(&m3));
}

/// Oracle: projective points of y^2 z = x^3 + a2 x^2 z + a4 x z^2 + a6 z^3.
fn brute(f: &PrimeField, a: [u64; 3]) -> u64 {
    let p = f.p();
    let mut n = 0;
    for x in 0..p {
        for y in 0..p {
            let lhs = f.mul(y, y);
            let rhs = f.add(
                f.add(f.add(f.pow(x, 3), f.mul(a[0], f.mul(x, x))), f.mul(a[1], x)),
                a[2],
            );
            if lhs == rhs {
                n += 1;
            }
        }
    }
    // z = 0 forces x = 0: the single point (0:1:0)
    n + 1
}

#[test]
fn fiber_counts_match_enumeration() {
    let m = from_quartic(&s1()).unwrap();
    let fc = m.reduce_mod(5).unwrap();
    let f = fc.field().clone();
    for t0 in (0..5).map(Some).chain([None]) {
        assert_eq!(fc.count(t0), brute(&f, fc.coeffs_at(t0)));
    }
}

#[test]
fn hasse_bound_on_smooth_fibers() {
    for q in [s1(), s5(), s7(2)] {
        let m = from_quartic(&q).unwrap();
        for p in [5u64, 7, 11, 13, 17] {
            let Ok(fc) = m.reduce_mod(p) else { continue };
            for t0 in (0..p).map(Some).chain([None]) {
                if !fc.is_singular(t0) {
                    let a = fc.trace(t0, 1);
                    assert!((a * a) as u64 <= 4 * p, "p={p} t0={t0:?} a={a}");
                }
            }
        }
    }
}

#[test]
fn multiplicative_fibers_count_p_or_p_plus_two() {
    let m = el2();
    let mut split = 0;
    for p in [5u64, 7, 11, 13] {
        let fc = m.reduce_mod(p).unwrap();
        for t0 in (0..p).map(Some).chain([None]) {
            if fc.is_singular(t0) {
                let n = fc.count(t0);
                assert!(n == p || n == p + 2, "p={p} t0={t0:?} n={n}");
                split += usize::from(n == p);
            }
        }
    }
    assert!(split > 0);
}

#[test]
fn bad_primes_detected() {
    // S7(2) has I2 fibers at 0,1,2,3: 3 collides with 0 modulo 3
    let m = from_quartic(&s7(2)).unwrap();
    assert!(m.reduce_mod(3).is_err());
    assert!(m.reduce_mod(5).is_ok());
}

#[test]
fn two_isogeny_twice_is_multiplication_by_two_up_to_scaling() {
    let a = Qt::from_poly(UPoly::from_ints(&[1, 0, -2]));
    let b = Qt::from_poly(UPoly::from_ints(&[0, 0, -1, 0, 1]));
    let first = quotient_by_two_torsion(&a, &b).unwrap();
    // move the rational 2-torsion point (-A, 0) to the origin
    let shifted = first.target.change_coordinates(&Qt::one(), &(-&a));
    assert!(shifted.a6().is_zero());
    let second = quotient_by_two_torsion(shifted.a2(), shifted.a4()).unwrap();
    let orig = WeierstrassModel::new(a.clone(), b.clone(), Qt::zero()).unwrap();
    assert_eq!(second.target.j_invariant(), orig.j_invariant());
    assert!(matches!(
        quotient_by_two_torsion(&a, &Qt::zero()),
        Err(EllipticError::DegenerateTorsion)
    ));
}

#[test]
fn isogeny_to_x1128_certified() {
    let a = Qt::from_poly(UPoly::from_ints(&[1, 0, -2]));
    let b = Qt::from_poly(UPoly::from_ints(&[0, 0, -1, 0, 1]));
    let iso = quotient_by_two_torsion(&a, &b).unwrap();
    let c = iso.certify().unwrap();
    assert!(c.passed, "{:?}", c.residual);
    assert!(c.recheck());
    assert_eq!(iso.target, x1128());
}

#[test]
fn mobius_twist_relates_el2_and_el4() {
    let mu = Mobius::new(1, -1, 1, 1).unwrap();
    let pulled = el2().pullback(&mu);
    assert_eq!(pulled.j_invariant(), el4().j_invariant());
    assert_eq!(mu.apply_rational(Some(&q(1))), Some(q(0)));
    assert_eq!(mu.apply_rational(None), Some(q(1)));
    assert_eq!(Mobius::new(1, 1, 1, 1), Err(EllipticError::SingularMobius));
    assert_eq!(mu.apply_rational(Some(&qr(-1, 1))), None);
}

#[test]
fn base_change_certificate_detects_twists() {
    let m = el2();
    let same = verify_base_change(&m, &Qt::t(), &m);
    assert!(same.passed && same.recheck());
    let tw = m.quadratic_twist(&Qt::from_poly(UPoly::from_ints(&[0, 1])));
    let c = verify_base_change(&m, &Qt::t(), &tw);
    assert!(!c.passed);
}
