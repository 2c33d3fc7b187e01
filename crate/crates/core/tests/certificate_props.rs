use hermite_core::algebra::{int, rat, Rational};
use hermite_core::cascade::oracle_reproduces;
use hermite_core::catalog;
use hermite_core::reproduction::{certify, infer_tau};
use hermite_core::symbol::{symbol_deriv, UnitPoint};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-30i64..=30, 1i64..=12).prop_map(|(p, q)| rat(p, q).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn shifting_the_mask_shifts_tau(l in rational(), mu in rational(), s in -4i64..=4) {
        for mask in [catalog::merrien(&l, &mu), catalog::derham(&l, &mu)] {
            let base = certify(&mask, None, 4).unwrap();
            let moved = certify(&mask.shifted(s), None, 4).unwrap();
            prop_assert_eq!(&moved.tau, &(&base.tau + int(s)));
            prop_assert_eq!(moved.certified_degree, base.certified_degree);
        }
    }

    #[test]
    fn padding_changes_nothing(l in rational(), mu in rational(), extra in 1i64..4) {
        let mask = catalog::derham(&l, &mu);
        let padded = mask.padded(mask.lo() - extra, mask.hi() + extra);
        for k in 0..=5 {
            for z in [UnitPoint::Minus, UnitPoint::Plus] {
                prop_assert_eq!(symbol_deriv(&mask, k, z), symbol_deriv(&padded, k, z));
            }
        }
        prop_assert_eq!(certify(&mask, None, 5).unwrap().residuals,
                        certify(&padded, None, 5).unwrap().residuals);
    }

    #[test]
    fn any_wrong_tau_loses_linear_reproduction(l in rational(), mu in rational(), t in rational()) {
        let mask = catalog::merrien(&l, &mu);
        let true_tau = infer_tau(&mask).unwrap();
        prop_assume!(t != true_tau);
        let rep = certify(&mask, Some(&t), 3).unwrap();
        prop_assert_eq!(rep.certified_degree, Some(0));
        prop_assert_eq!(&rep.residuals[0].plus[0], &(int(2) * (&true_tau - &t)));
    }

    #[test]
    fn certificate_prefix_is_monotone(l in rational(), mu in rational()) {
        let rep = certify(&catalog::derham(&l, &mu), None, 6).unwrap();
        let c = rep.certified_degree.unwrap();
        prop_assert!(rep.residuals[..c].iter().all(|r| r.passed()));
        if c < 6 {
            prop_assert!(!rep.residuals[c].passed());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn certificate_agrees_with_cascade(l in rational(), mu in rational(), pick in 0usize..3) {
        let l = if pick == 0 { rat(-1, 8).unwrap() } else { l };
        for mask in [catalog::merrien(&l, &mu), catalog::derham(&l, &mu)] {
            let tau = infer_tau(&mask).unwrap();
            let cert = certify(&mask, Some(&tau), 3).unwrap().certified_degree.unwrap();
            for m in 0..=3 {
                let oracle = oracle_reproduces(&mask, &tau, m, 2, -16, 16).unwrap();
                prop_assert_eq!(oracle.passed(), cert >= m);
            }
        }
    }
}
