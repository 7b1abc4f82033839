use proptest::prelude::*;

use pjlab::coulomb::{solve_support, ExpansionSeries, SeriesKind};
use pjlab::orthopoly::{RecurrenceTable, WeightParams};
use pjlab::relations::{check_compatibility, residual_beta_difference, residual_p_difference};
use pjlab::PrecisionContext;

fn ratio() -> impl Strategy<Value = (i64, i64)> {
    (1i64..=30, 1i64..=10)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn table_invariants((an, ad) in ratio(), (tn, td) in ratio()) {
        let c = PrecisionContext::new(256).unwrap();
        let w = WeightParams::rational((an, ad), (tn, td), &c).unwrap();
        let tb = RecurrenceTable::compute(&w, 8, &c).unwrap();
        let mut partial = c.zero();
        for n in 0..=8 {
            prop_assert!(tb.h(n).unwrap().is_positive());
            if n > 0 {
                prop_assert!(tb.beta(n).unwrap().is_positive());
            }
            prop_assert!((tb.p(n).unwrap() + &partial).abs() <= c.pow2(-240));
            partial += tb.beta(n).unwrap();
        }
        for n in 0..=6 {
            for r in check_compatibility(&tb, n).unwrap() {
                prop_assert!(r.pass, "{} at n={}", r.relation_id, n);
            }
        }
        for n in 1..8 {
            prop_assert!(residual_beta_difference(&tb, n).unwrap().pass);
            prop_assert!(residual_p_difference(&tb, n).unwrap().pass);
        }
    }

    #[test]
    fn support_invariants((an, ad) in ratio(), (tn, td) in ratio(), n in 1i64..500) {
        let c = PrecisionContext::new(192).unwrap();
        let w = WeightParams::rational((an, ad), (tn, td), &c).unwrap();
        let m = solve_support(&w, &c.int(n), &c).unwrap();
        prop_assert!(m.u.is_positive() && m.u < 1);
        prop_assert!(m.b.is_positive() && m.b < 1);
        let (alpha, t) = w.at(&c);
        let cubic = (c.int(n) + &alpha).mul_pow2(1) * m.u.square() * &m.u
            + (&t - alpha.mul_pow2(1)) * m.u.square() - &t;
        prop_assert!(cubic.abs() <= c.pow2(-(192 - 8)) * (&t + 1));
        let w2 = w.with_t(&t * c.ratio(11, 10)).unwrap();
        prop_assert!(solve_support(&w2, &c.int(n), &c).unwrap().u > m.u);
    }

    #[test]
    fn leading_coefficients_are_parameter_free((an, ad) in ratio(), (tn, td) in ratio()) {
        let c = PrecisionContext::new(128).unwrap();
        let w = WeightParams::rational((an, ad), (tn, td), &c).unwrap();
        let beta = ExpansionSeries::new(SeriesKind::Beta, &w, &c);
        prop_assert_eq!(beta.coefficient(0).unwrap(), &c.ratio(1, 4));
        prop_assert!(beta.coefficient(-1).unwrap().is_zero());
        prop_assert!(beta.coefficient(-3).unwrap().is_zero());
        let p = ExpansionSeries::new(SeriesKind::P, &w, &c);
        prop_assert_eq!(p.coefficient(3).unwrap(), &c.ratio(-1, 4));
    }
}
