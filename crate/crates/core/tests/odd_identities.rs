use steenrod_core::odd::*;
use steenrod_core::suites::odd_structure_suite;

fn e(p: u32, v: &[u32]) -> OddElement {
    OddElement::from_exponents(p, v)
}

fn exterior_factors(v: &[u32]) -> usize {
    v.iter().filter(|&&n| n % 2 == 1).count()
}

#[test]
fn structure_suite_passing_parts() {
    let r = odd_structure_suite().unwrap();
    for name in [
        "P^(pn) P_0 = P_0 P^n (p = 5)",
        "P^(p^s) derivation on Im P_0^(s+1)",
        "Q_r^s Q_t^s = (-1)^e Q_t^s Q_r^s on Im P_0^s",
    ] {
        let c = r.check(name).unwrap();
        assert!(c.cases > 0 && c.passed(), "{name}: {c:?}");
    }
}

#[test]
fn squares_vanish_off_double_exterior_roots() {
    let p = 3;
    for s in 0..=1 {
        for a in 0..=13 {
            for b in 0..=13 {
                if exterior_factors(&[a, b]) == 2 {
                    continue;
                }
                let x = p0_power(&e(p, &[a, b]), s);
                for t in 0..=2 {
                    assert!(qts_apply_odd(t, s, &qts_apply_odd(t, s, &x)).is_zero(), "({a},{b}) t={t} s={s}");
                }
            }
        }
    }
}

#[test]
fn squares_fail_on_a_double_exterior_root() {
    // u1 u2 is the exponent-map image of t1 t2, and (P^1)^2 (u1 u2) = 2 u1^3 u2^3
    let x = p0_power(&e(3, &[1, 1]), 1);
    assert_eq!(x, e(3, &[2, 2]));
    let y = qts_apply_odd(0, 1, &qts_apply_odd(0, 1, &x));
    assert_eq!(y, e(3, &[6, 6]).scale(2));
}

#[test]
fn beta_identity_fails_exactly_on_double_exterior() {
    for p in [3, 5] {
        for a in 0..=13 {
            for b in 0..=13 {
                let x = e(p, &[a, b]);
                let holds = apply_p(1, &p0_power(&x, 1)) == p0_power(&apply_beta(&x), 1);
                assert_eq!(holds, exterior_factors(&[a, b]) < 2, "p={p} ({a},{b})");
            }
        }
    }
}

#[test]
fn le5_examples() {
    // x = (1,2) - (2,1): beta x = 0, Q_1 x != 0
    let x = OddElement::from_terms(3, 2, [(OddMonomial::new(vec![1, 2]), 1), (OddMonomial::new(vec![2, 1]), 2)]).unwrap();
    assert!(apply_beta(&x).is_zero());
    let r = le5_run_check(&x, 3).unwrap();
    assert_eq!(r.run, Some((0, 0)));
    assert_eq!(r.bound_holds, Some(true));
    assert_eq!(le5_run_check(&e(3, &[1]), 3).unwrap().run, None);
    assert!(le5_run_check(&e(3, &[4, 4]), 3).unwrap().parity_degenerate);
}

#[test]
fn le6_examples() {
    assert_eq!(le6_check(&e(3, &[1]), 200).unwrap().verdict, Le6Verdict::Vacuous);
    let r = le6_check(&e(3, &[2]), 200).unwrap();
    assert_eq!((r.gap, r.verdict), (Some(3), Le6Verdict::Vacuous));
    assert_eq!(le6_check(&e(3, &[6]), 200).unwrap().verdict, Le6Verdict::Pass);
}
