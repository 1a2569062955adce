use steenrod_core::bv::PolyElement;
use steenrod_core::expr::Element;
use steenrod_core::obstruct::*;
use steenrod_core::odd::OddElement;

fn u() -> Element {
    Element::Mod2(PolyElement::from_exponents(&[1]))
}

/// `u^{2^k - 1}` generate all of `F_2[u]` in positive degrees.
fn full_polynomial(bound: u32) -> Vec<Element> {
    (1..).map(|k| (1u32 << k) - 1).take_while(|&n| n <= bound).map(|n| Element::Mod2(PolyElement::from_exponents(&[n]))).collect()
}

fn hopf(bound: u32) -> ModuleDescription {
    ModuleDescription::span(2, 1, vec![u()], bound).unwrap()
}

fn two_layers(m2: u32, bound: u32) -> ModuleDescription {
    ModuleDescription::filtration(
        2,
        1,
        vec![Layer { m: 0, generators: vec![u()] }, Layer { m: m2, generators: vec![u()] }],
        bound,
    )
    .unwrap()
}

#[test]
fn hopf_span_gaps() {
    let r = gap_scan(&hopf(300)).unwrap();
    assert_eq!(r.occupied, (0..=8).map(|k| 1i64 << k).collect::<Vec<_>>());
    let gaps: Vec<String> = r.gaps.iter().map(ToString::to_string).collect();
    assert_eq!(gaps, ["(2,3]", "(4,7]", "(8,15]", "(16,31]", "(32,63]", "(64,127]", "(128,255]"]);
    assert!(r.bound_truncated);
}

#[test]
fn hopf_span_certificate() {
    let TypeT::Certified(c) = type_t_check(&hopf(300)).unwrap() else { panic!("no certificate") };
    assert_eq!((c.threshold, c.base_threshold, c.spacing_threshold, c.j_range), (32, 32, 1, 1));
    assert_eq!(c.gap, Gap { start: 64, length: 63 });
    assert_eq!(c.revalidate(), Ok(()));
    assert!(verdict(&hopf(300)).unwrap().is_not_realizable());
}

#[test]
fn hopf_span_low_bound_is_truncated() {
    assert_eq!(type_t_check(&hopf(40)).unwrap(), TypeT::Absent("bound truncation before qualifying gap".into()));
}

#[test]
fn full_polynomial_has_no_gap() {
    let m = ModuleDescription::span(2, 1, full_polynomial(50), 50).unwrap();
    let r = gap_scan(&m).unwrap();
    assert_eq!(r.occupied, (1..=50).collect::<Vec<i64>>());
    assert!(r.gaps.is_empty());
    let v = verdict(&m).unwrap();
    assert_eq!(v.reason(), Some("no qualifying gap"));
}

#[test]
fn filtration_certificate() {
    let m = two_layers(3, 600);
    let r = gap_scan(&m).unwrap();
    let mut expected: Vec<i64> = (0..=9).map(|k| 1i64 << k).chain((0..=9).map(|k| 3 + (1i64 << k))).collect();
    expected.sort_unstable();
    expected.dedup();
    assert_eq!(r.occupied, expected);
    let TypeT::Certified(c) = type_t_filtration_check(&m).unwrap() else { panic!("no certificate") };
    assert_eq!((c.delta, c.j_range, c.threshold), (1, 2, 128));
    assert_eq!(c.gap, Gap { start: 259, length: 252 });
    assert!(c.condition.as_ref().unwrap().holds());
    assert_eq!(c.revalidate(), Ok(()));
    assert!(verdict(&m).unwrap().is_not_realizable());
}

#[test]
fn filtration_condition_one_fails() {
    let v = verdict(&two_layers(1, 600)).unwrap();
    assert_eq!(v.reason(), Some("Condition 1 violated: difference 1 (m = 0, 1)"));
}

#[test]
fn dense_layer_blocks_gaps() {
    let m = ModuleDescription::filtration(
        2,
        1,
        vec![Layer { m: 0, generators: full_polynomial(300) }, Layer { m: 3, generators: vec![u()] }],
        300,
    )
    .unwrap();
    assert!(matches!(type_t_filtration_check(&m).unwrap(), TypeT::Absent(_)));
    assert!(!verdict(&m).unwrap().is_not_realizable());
}

#[test]
fn single_layer_matches_span() {
    let m = ModuleDescription::filtration(2, 1, vec![Layer { m: 0, generators: vec![u()] }], 300).unwrap();
    let TypeT::Certified(c) = type_t_filtration_check(&m).unwrap() else { panic!("no certificate") };
    assert_eq!((c.threshold, c.gap), (32, Gap { start: 64, length: 63 }));
}

#[test]
fn wrong_kind_or_prime() {
    assert!(type_t_check(&two_layers(3, 100)).is_err());
    assert!(type_t_filtration_check(&hopf(100)).is_err());
    let odd = ModuleDescription::span(3, 1, vec![Element::Odd(OddElement::from_exponents(3, &[2]))], 100).unwrap();
    assert!(type_t_check(&odd).is_err());
    assert!(verdict(&odd).is_err());
}

#[test]
fn suspension_invariance() {
    let base = verdict(&hopf(300)).unwrap();
    for s in [-200i64, -7, 1, 5, 64] {
        let v = verdict(&hopf(300).with_suspension(s)).unwrap();
        let (a, b) = (base.certificate().unwrap(), v.certificate().unwrap());
        assert_eq!((a.threshold, a.gap.length), (b.threshold, b.gap.length));
        assert_eq!(b.gap.start, a.gap.start + s);
        assert_eq!(b.revalidate(), Ok(()));
    }
    let v = verdict(&two_layers(1, 600).with_suspension(-3)).unwrap();
    assert!(!v.is_not_realizable());
}

#[test]
fn monotone_in_bound() {
    // the gap (64,127] closes once degree 128 is computed
    let first = verdict(&hopf(128)).unwrap();
    let c = first.certificate().expect("certificate at bound 128").clone();
    for b in [129, 200, 300, 513] {
        assert_eq!(verdict(&hopf(b)).unwrap().certificate(), Some(&c));
    }
    assert!(!verdict(&hopf(127)).unwrap().is_not_realizable());
}

#[test]
fn certificate_round_trip_and_tampering() {
    let c = verdict(&two_layers(3, 600)).unwrap().certificate().unwrap().clone();
    let json = serde_json::to_string(&c).unwrap();
    let back: Certificate = serde_json::from_str(&json).unwrap();
    assert_eq!(back.revalidate(), Ok(()));

    let mut bad = c.clone();
    bad.gap.length = 100;
    assert!(bad.revalidate().is_err());
    let mut bad = c.clone();
    bad.threshold = 64;
    assert!(bad.revalidate().is_err());
    let mut bad = c.clone();
    bad.window.push(300);
    bad.window.sort_unstable();
    assert!(bad.revalidate().is_err());
    let mut bad = c.clone();
    bad.layers[1].m = 1;
    assert!(bad.revalidate().is_err());
    let mut bad = c;
    bad.layers[0].first_degrees[1] = 3;
    assert!(bad.revalidate().is_err());
}

#[test]
fn odd_prime_span() {
    let m = ModuleDescription::span(3, 1, vec![Element::Odd(OddElement::from_exponents(3, &[2]))], 500).unwrap();
    let r = gap_scan(&m).unwrap();
    assert_eq!(r.occupied, vec![2, 6, 18, 54, 162, 486]);
    let v = verdict_odd(&m).unwrap();
    let c = v.certificate().expect("certificate");
    assert_eq!((c.j_range, c.base_threshold, c.spacing_threshold, c.threshold), (3, 108, 36, 108));
    assert_eq!(c.gap, Gap { start: 162, length: 323 });
    assert_eq!(c.revalidate(), Ok(()));
    let low = m.with_bound(300).unwrap();
    assert_eq!(verdict_odd(&low).unwrap().reason(), Some("bound truncation before qualifying gap"));
}

#[test]
fn odd_prime_condition_two() {
    let t = |n: u32| Element::Odd(OddElement::from_exponents(3, &[n]));
    let layers = |m2| {
        ModuleDescription::filtration(
            3,
            1,
            vec![Layer { m: 0, generators: vec![t(2)] }, Layer { m: m2, generators: vec![t(2)] }],
            2000,
        )
        .unwrap()
    };
    let v = verdict_odd(&layers(4)).unwrap();
    assert_eq!(v.reason(), Some("Condition 2 violated: difference 4 (m = 0, 4)"));
    let v = verdict_odd(&layers(5)).unwrap();
    let c = v.certificate().expect("certificate");
    assert_eq!(c.revalidate(), Ok(()));
}
