use num_rational::Ratio;
use proptest::prelude::*;
use qhabiro::qcomb::{curly_poch, qpoch, qpoch_inf};
use qhabiro::series::{sum_bounded, DegreeBound};
use qhabiro::{Delta, Error, QSeries};

fn exact_poly() -> impl Strategy<Value = QSeries> {
    (-6i64..6, prop::collection::vec(-5i64..=5, 0..8)).prop_map(|(o, c)| QSeries::from_ints(o, &c))
}

fn unit_poly() -> impl Strategy<Value = QSeries> {
    (prop::bool::ANY, prop::collection::vec(-4i64..=4, 0..6)).prop_map(|(neg, rest)| {
        let mut c = vec![if neg { -1 } else { 1 }];
        c.extend(rest);
        QSeries::from_ints(0, &c)
    })
}

#[test]
fn addition_examples() {
    assert_eq!(&QSeries::from_ints(0, &[1, -1]) + &QSeries::monomial(1, 1), QSeries::one());
    let a = QSeries::from_ints(-1, &[3, 1, 2]);
    assert_eq!(&a + &QSeries::zero(), a);
    let mixed = &QSeries::from_ints_trunc(0, &[1, 1], 2) + &QSeries::monomial_rat(1, Ratio::new(1, 2));
    assert_eq!(mixed.scale(), 2);
    assert_eq!(mixed.to_string(), "1 + q^(1/2) + q + O(q^2)");
}

#[test]
fn multiplication_examples() {
    let geo = QSeries::from_ints_trunc(0, &[1; 10], 10);
    assert_eq!(&QSeries::from_ints(0, &[1, -1]) * &geo, QSeries::one().truncate(10));
    assert_eq!((&QSeries::monomial(1, 2) * &QSeries::monomial(1, 3)).delta(), Delta::Exactly(Ratio::from_integer(5)));
    let t = QSeries::from_ints(-1, &[1, 1, 1]);
    assert_eq!(&t * &t, QSeries::from_ints(-2, &[1, 2, 3, 2, 1]));
}

#[test]
fn truncated_product_precision() {
    let a = QSeries::from_ints_trunc(1, &[1, 2], 5);
    let b = QSeries::from_ints_trunc(2, &[1], 7);
    assert_eq!((&a * &b).prec_exp(), Some(Ratio::from_integer(7)));
}

#[test]
fn valuations() {
    assert_eq!(QSeries::from_ints(-1, &[1, 1]).delta(), Delta::Exactly(Ratio::from_integer(-1)));
    assert_eq!(QSeries::zero().delta(), Delta::Infinite);
    assert_eq!(QSeries::o(7).delta(), Delta::AtLeast(Ratio::from_integer(7)));
    assert_eq!(curly_poch(3, 2).delta(), Delta::Exactly(Ratio::new(-5, 2)));
}

#[test]
fn unit_inversion() {
    let inv = QSeries::from_ints(0, &[1, -1]).invert_unit(4).unwrap();
    assert_eq!(inv, QSeries::from_ints_trunc(0, &[1, 1, 1, 1], 4));
    let p = qpoch_inf(6).invert_unit(6).unwrap();
    assert_eq!(p, QSeries::from_ints_trunc(0, &[1, 1, 2, 3, 5, 7], 6));
    assert!(matches!(QSeries::from_ints(0, &[2, 1]).invert_unit(5), Err(Error::NotInvertible)));
    let shifted = QSeries::from_ints(1, &[1, 1]).invert_unit(3).unwrap();
    assert_eq!(shifted.delta(), Delta::Exactly(Ratio::from_integer(-1)));
    assert_eq!((&shifted * &QSeries::from_ints(1, &[1, 1])).truncate(2), QSeries::one().truncate(2));
}

#[test]
fn bounded_sums() {
    let s = sum_bounded(|k| Ok(QSeries::monomial(1, k)), &DegreeBound::new(0, |k| k), 3).unwrap();
    assert_eq!(s, QSeries::from_ints_trunc(0, &[1, 1, 1], 3));
    let bad = sum_bounded(|k| Ok(QSeries::monomial(1, k - 1)), &DegreeBound::new(0, |k| k), 5);
    assert!(matches!(bad, Err(Error::DegreeBoundViolated(0))));
}

#[test]
fn figure_eight_r0_as_bounded_sum() {
    // r_0 = Σ_k (-1)^{k+1} q^{C(k+1,2)} / (q)_k^2 for a_{-k-1} = 1.
    let n = 10;
    let s = sum_bounded(
        |k| {
            let e = k * (k + 1) / 2;
            let inv = qpoch(k, n).invert_unit(n - e).unwrap();
            let t = inv.mul_to(&inv, Some(n - e)).shift_int(e);
            Ok(if k % 2 == 0 { -t } else { t })
        },
        &DegreeBound::new(0, |k| k * (k + 1) / 2),
        n,
    )
    .unwrap();
    let expected = -QSeries::from_ints_trunc(0, &[1, -1, -2, -2, -2, 0, 1, 5, 7, 11], 10);
    assert_eq!(s, expected);
}

#[test]
fn substitution_and_mirror() {
    assert_eq!(QSeries::from_ints(0, &[1, 1]).subst_qpow(2), QSeries::from_ints(0, &[1, 0, 1]));
    let h = QSeries::monomial_rat(1, Ratio::new(1, 2)).subst_qpow(2);
    assert_eq!((h.scale(), h), (1, QSeries::monomial(1, 1)));
    assert_eq!(QSeries::from_ints_trunc(1, &[1], 4).subst_qpow(3).prec_exp(), Some(Ratio::from_integer(12)));
    assert_eq!(QSeries::monomial(1, 1).mirror().unwrap(), QSeries::monomial(1, -1));
    assert_eq!(QSeries::monomial(-1, -1).mirror().unwrap(), QSeries::monomial(-1, 1));
    assert!(matches!(QSeries::o(3).mirror(), Err(Error::MirrorNeedsExact)));
}

#[test]
fn text_and_json() {
    let s = QSeries::from_ints_trunc(-1, &[3, 1, 2], 10);
    assert_eq!(s.to_string(), "3*q^-1 + 1 + 2*q + O(q^10)");
    let v: serde_json::Value = serde_json::to_value(&s).unwrap();
    assert_eq!(v, serde_json::json!({"scale": 1, "offset": -1, "coeffs": ["3", "1", "2"], "prec": 10}));
    let e: serde_json::Value = serde_json::to_value(QSeries::one()).unwrap();
    assert_eq!(e["prec"], "exact");
    let back: QSeries = serde_json::from_value(v).unwrap();
    assert_eq!(back, s);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn ring_axioms(a in exact_poly(), b in exact_poly(), c in exact_poly()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a - &a, QSeries::zero());
    }

    #[test]
    fn mirror_is_an_involution(a in exact_poly()) {
        prop_assert_eq!(a.mirror().unwrap().mirror().unwrap(), a);
    }

    #[test]
    fn double_inversion(a in unit_poly(), n in 1i64..20) {
        let b = a.invert_unit(n).unwrap();
        prop_assert_eq!(b.invert_unit(n).unwrap(), a.truncate(n));
    }

    #[test]
    fn bounded_sum_is_order_independent(terms in prop::collection::vec(exact_poly(), 1..10), n in 1i64..12) {
        let shifted: Vec<QSeries> = terms.iter().enumerate().map(|(k, t)| match t.delta().lower() {
            Some(d) => t.shift_int(k as i64 - d.floor().to_integer()),
            None => t.clone(),
        }).collect();
        let len = shifted.len() as i64;
        let fwd = sum_bounded(
            |k| Ok(shifted.get(k as usize).cloned().unwrap_or_else(QSeries::zero)),
            &DegreeBound::new(0, |k| if k < len { k } else { n.max(len) }),
            n,
        ).unwrap();
        let mut rev = QSeries::o(n);
        for t in shifted.iter().take(n.min(len) as usize).rev() {
            rev += t;
        }
        prop_assert_eq!(fwd, rev);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn valuation_laws(a in exact_poly(), b in exact_poly()) {
        let (da, db) = (a.delta().lower(), b.delta().lower());
        if let (Some(x), Some(y)) = (da, db) {
            prop_assert_eq!((&a * &b).delta(), Delta::Exactly(x + y));
            prop_assert!((&a + &b).delta().at_least(x.min(y)));
        }
    }
}
