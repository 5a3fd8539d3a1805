mod support;

use hkbound_core::bounds::{
    general_bound, h_bound, noroots_bound, quadratic_in_e, quadratic_in_e_k, range_min, s_bound, BoundSpec, EvalPoint,
};
use hkbound_core::envelope::{check_envelope, phi_envelope};
use hkbound_core::rational::{int, pow2, Rational};
use hkbound_core::search::SearchParams;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn ratio(lo: i64, hi: i64) -> impl Strategy<Value = Rational> {
    (1i64..=400).prop_flat_map(move |den| (lo * den..=hi * den).prop_map(move |num| support::q(num, den)))
}

fn positive(hi: i64) -> impl Strategy<Value = Rational> {
    (1i64..=50).prop_flat_map(move |den| (1..=hi * den).prop_map(move |num| support::q(num, den)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn rescaling_identity(d in 1u32..=9, k in 1u32..=5, extra in 0u64..20, e in positive(60),
                          s in ratio(0, 10), t in ratio(0, 1)) {
        let spec = BoundSpec::new(d, e, k as u64 + 1 + extra, k).unwrap();
        let lhs = general_bound(&spec, &s, &t).unwrap();
        let rhs = Rational::one() + (s_bound(&spec, &s, &t).unwrap() - Rational::one()) / pow2(k);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn k0_matches_noroots(d in 1u32..=9, mu in 1u64..12, e in positive(40), s in ratio(0, 10), t in ratio(0, 1)) {
        let spec = BoundSpec::new(d, e.clone(), mu, 0).unwrap();
        let offsets = vec![Rational::one(); mu as usize - 1];
        let point = EvalPoint::new(s.clone(), Rational::one(), t.clone()).unwrap();
        prop_assert_eq!(general_bound(&spec, &s, &t).unwrap(), noroots_bound(&e, &offsets, d, &point).unwrap());
    }

    #[test]
    fn monotone_in_mu(d in 1u32..=9, k in 0u32..=4, extra in 0u64..30, e in positive(60),
                      s in ratio(0, 10), t in ratio(0, 1)) {
        let mu = k as u64 + 1 + extra;
        let lo = BoundSpec::new(d, e.clone(), mu, k).unwrap();
        let hi = BoundSpec::new(d, e, mu + 1, k).unwrap();
        prop_assert!(general_bound(&hi, &s, &t).unwrap() <= general_bound(&lo, &s, &t).unwrap());
    }

    #[test]
    fn parabola_reproduces_h(d in 1u32..=9, s in ratio(0, 10), t in ratio(0, 1),
                             es in proptest::collection::vec(positive(5000), 5)) {
        let quad = quadratic_in_e(d, &s, &t);
        for e in es {
            let e = e + int(4);
            prop_assert_eq!(quad.eval(&e), h_bound(&e, d, &s, &t).unwrap());
        }
    }

    #[test]
    fn h_is_worst_case_general(d in 1u32..=9, e in 4u64..200, s in ratio(0, 10), t in ratio(0, 1)) {
        let spec = BoundSpec::worst_case(d, e, 1).unwrap();
        prop_assert_eq!(h_bound(&int(e as i64), d, &s, &t).unwrap(), general_bound(&spec, &s, &t).unwrap());
    }

    #[test]
    fn concave_and_endpoint_min(d in 1u32..=9, k in 1u32..=4, s in ratio(0, 10), t in ratio(0, 1),
                                e1 in 5u64..400, width in 0u64..200) {
        let quad = quadratic_in_e_k(d, k, &s, &t);
        prop_assert!(quad.a <= Rational::zero());
        let e2 = e1 + width;
        let min = quad.endpoint_min(&int(e1 as i64), &int(e2 as i64));
        for e in e1..=e2 {
            prop_assert!(quad.eval(&int(e as i64)) >= min);
        }
        // a dense rational sample between integers too
        for i in 0..=20 {
            let e = int(e1 as i64) + int(width as i64) * support::q(i, 20);
            prop_assert!(quad.eval(&e) >= min);
        }
        if k == 1 {
            prop_assert_eq!(range_min(d, &int(e1 as i64), &int(e2 as i64), &s, &t).unwrap(), min);
        }
    }
}

#[test]
fn envelope_monotone_and_capped() {
    let params = SearchParams::for_dim(7).with_grid(40, 20);
    let offsets = vec![Rational::one(); 2];
    let points: Vec<_> = (0..=10)
        .map(|i| phi_envelope(&support::q(i, 10), &int(7), &offsets, 7, &params).unwrap())
        .collect();
    let check = check_envelope(&points);
    assert!(check.monotone && check.capped_by_last);
    assert_eq!(points[0].value, Rational::zero());
}
