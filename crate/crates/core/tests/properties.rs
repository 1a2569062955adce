use proptest::prelude::*;

use steenrod_core::bv::*;
use steenrod_core::exchange::{compute_support, is_g_exchange};
use steenrod_core::expr::{parse_element, Context, Element, OpAtom, OperationExpr};
use steenrod_core::milnor::{milnor_basis, milnor_multiply, MilnorElement, OperationSum};
use steenrod_core::obstruct::{check, gap_scan, Layer, ModuleDescription, Outcome};
use steenrod_core::odd::{OddElement, OddMonomial};

fn milnor_of_degree(max: u64) -> impl Strategy<Value = MilnorElement> {
    (0..=max).prop_flat_map(|n| {
        let basis = milnor_basis(n);
        (0..basis.len()).prop_map(move |i| basis[i].clone())
    })
}

fn monomial(d: usize, max_exp: u32) -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(0..=max_exp, d)
}

/// A homogeneous element: monomials of one degree, picked among those of
/// a random seed monomial's degree.
fn element(d: usize, max_exp: u32) -> impl Strategy<Value = PolyElement> {
    (monomial(d, max_exp), prop::collection::vec(any::<prop::sample::Index>(), 0..4)).prop_map(move |(seed, picks)| {
        let n: u32 = seed.iter().sum();
        let all = same_degree(d, n);
        let mut x = PolyElement::from_exponents(&seed);
        for p in picks {
            let e = p.get(&all).clone();
            if e != seed {
                x.toggle(BasicMonomial::new(e)).unwrap();
            }
        }
        x
    })
}

fn same_degree(d: usize, n: u32) -> Vec<Vec<u32>> {
    steenrod_core::suites::monomials_of_degree(d, n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn milnor_associative(a in milnor_of_degree(6), b in milnor_of_degree(6), c in milnor_of_degree(6)) {
        let (a, b, c): (OperationSum, OperationSum, OperationSum) = (a.into(), b.into(), c.into());
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
    }

    #[test]
    fn milnor_degree_additive(a in milnor_of_degree(12), b in milnor_of_degree(12)) {
        let prod = milnor_multiply(&a, &b);
        for t in prod.terms() {
            prop_assert_eq!(t.degree(), a.degree() + b.degree());
        }
    }

    #[test]
    fn cartan_formula(x in monomial(2, 9), y in monomial(2, 9), k in 0u32..20) {
        let (x, y) = (PolyElement::from_exponents(&x), PolyElement::from_exponents(&y));
        let lhs = apply_sq(k, &x.product(&y).unwrap());
        let mut rhs = PolyElement::zero(2);
        for i in 0..=k {
            let term = apply_sq(i, &x).product(&apply_sq(k - i, &y)).unwrap();
            rhs.add_assign(&term).unwrap();
        }
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn le0_random(x in element(4, 7), n in 1u32..30) {
        prop_assert_eq!(apply_sq(2 * n, &sq0_power(&x, 1)), sq0_power(&apply_sq(n, &x), 1));
    }

    #[test]
    fn le1_random(x in element(3, 6), t in 0u32..3, r in 0u32..3, s in 0u32..3) {
        prop_assert_eq!(qts_apply(t, s + r, &sq0_power(&x, s)), sq0_power(&qts_apply(t, r, &x), s));
    }

    #[test]
    fn pr1_on_image(x in element(3, 6), t in 0u32..3, r in 0u32..3, s in 0u32..2) {
        let y = sq0_power(&x, s);
        prop_assert!(qts_apply(t, s, &qts_apply(t, s, &y)).is_zero());
        prop_assert_eq!(qts_apply(r, s, &qts_apply(t, s, &y)), qts_apply(t, s, &qts_apply(r, s, &y)));
    }

    #[test]
    fn sq0_root_inverts_power(x in element(3, 9), s in 0u32..4) {
        let y = sq0_power(&x, s);
        prop_assert_eq!(sq0_root(&y, s).unwrap(), x.clone());
        prop_assert_eq!(sq0_level(&y), sq0_level(&x).map(|l| l + s));
    }

    #[test]
    fn exchange_is_symmetric(a in monomial(4, 9), b in monomial(4, 9), g in 0u32..3) {
        let (a, b) = (BasicMonomial::new(a), BasicMonomial::new(b));
        if a.degree() == b.degree() {
            let ab = is_g_exchange(&a, &b, g).unwrap();
            let ba = is_g_exchange(&b, &a, g).unwrap();
            prop_assert_eq!(ab.as_ref().map(|w| (w.i, w.j)), ba.as_ref().map(|w| (w.j, w.i)));
        }
    }

    #[test]
    fn constructed_exchanges_are_found(u in monomial(3, 6), g in 0u32..3, i in 0usize..3, j in 0usize..3) {
        prop_assume!(i != j);
        let mut a = u.iter().map(|&v| 2 * v).collect::<Vec<_>>();
        let mut b = a.clone();
        a[i] += 1;
        a[j] += 1 << (g + 1);
        b[i] += 1 << (g + 1);
        b[j] += 1;
        let w = is_g_exchange(&BasicMonomial::new(a), &BasicMonomial::new(b), g).unwrap();
        prop_assert_eq!(w.map(|w| (w.i, w.j)), Some((i, j)));
    }

    #[test]
    fn support_is_maximal(set in prop::collection::vec(monomial(4, 5), 1..5)) {
        let set: Vec<BasicMonomial> = set.into_iter().map(BasicMonomial::new).collect();
        let support = compute_support(&set).unwrap();
        for pos in 0..4 {
            let first = set[0].exponents[pos];
            let qualifies = first % 2 == 0 && set.iter().all(|m| m.exponents[pos] == first);
            prop_assert_eq!(support.positions.contains(&pos), qualifies);
        }
    }

    #[test]
    fn element_round_trip(x in element(3, 9)) {
        let ctx = Context::new(2, 3, 1).unwrap();
        prop_assert_eq!(parse_element(&x.to_string(), &ctx).unwrap(), Element::Mod2(x));
    }

    #[test]
    fn odd_element_round_trip(terms in prop::collection::vec((monomial(2, 5), 1u32..5), 1..4)) {
        let n: u32 = terms[0].0.iter().sum();
        let terms: Vec<(OddMonomial, u32)> = terms
            .into_iter()
            .filter(|(e, _)| e.iter().sum::<u32>() == n)
            .map(|(e, c)| (OddMonomial::new(e), c))
            .collect();
        let x = OddElement::from_terms(5, 2, terms).unwrap();
        let ctx = Context::new(5, 2, 1).unwrap();
        prop_assert_eq!(parse_element(&x.to_string(), &ctx).unwrap(), Element::Odd(x));
    }

    #[test]
    fn operation_round_trip(terms in prop::collection::vec(prop::collection::vec(atom(), 0..4), 0..4)) {
        let e = OperationExpr { terms };
        prop_assert_eq!(OperationExpr::parse(&e.to_string()).unwrap(), e);
    }
}

fn atom() -> impl Strategy<Value = OpAtom> {
    prop_oneof![
        (0u32..40).prop_map(OpAtom::Sq),
        (0u32..4, prop::option::of(0u32..4)).prop_map(|(t, s)| OpAtom::Q { t, s }),
        (0u32..4).prop_map(OpAtom::Sq0),
        (0u32..40).prop_map(OpAtom::P),
        Just(OpAtom::Beta),
        (0u32..4).prop_map(OpAtom::P0),
    ]
}

fn span_of(n: u32, bound: u32) -> ModuleDescription {
    ModuleDescription::span(2, 1, vec![Element::Mod2(PolyElement::from_exponents(&[n]))], bound).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn suspension_shifts_everything(n in 1u32..12, k in -40i64..40) {
        let m = span_of(n, 200);
        let shifted = m.clone().with_suspension(k);
        let (a, b) = (gap_scan(&m).unwrap(), gap_scan(&shifted).unwrap());
        prop_assert_eq!(a.occupied.iter().map(|d| d + k).collect::<Vec<_>>(), b.occupied);
        let (va, vb) = (check(&m).unwrap(), check(&shifted).unwrap());
        prop_assert_eq!(va.is_not_realizable(), vb.is_not_realizable());
        if let (Some(ca), Some(cb)) = (va.certificate(), vb.certificate()) {
            prop_assert_eq!(ca.gap.start + k, cb.gap.start);
            prop_assert_eq!(cb.revalidate(), Ok(()));
        }
    }

    #[test]
    fn certificates_persist_as_the_bound_grows(n in 1u32..6, extra in 0u32..150) {
        let m = span_of(1 << n, 150);
        if check(&m).unwrap().is_not_realizable() {
            let larger = span_of(1 << n, 150 + extra);
            prop_assert!(check(&larger).unwrap().is_not_realizable());
        }
    }

    #[test]
    fn produced_certificates_revalidate(m2 in 2u32..9, bound in 200u32..420) {
        let gens = vec![Element::Mod2(PolyElement::from_exponents(&[1]))];
        let m = ModuleDescription::filtration(
            2,
            1,
            vec![Layer { m: 0, generators: gens.clone() }, Layer { m: m2, generators: gens }],
            bound,
        )
        .unwrap();
        if let Outcome::NotRealizable { certificate } = check(&m).unwrap().outcome {
            prop_assert_eq!(certificate.revalidate(), Ok(()));
        }
    }
}
