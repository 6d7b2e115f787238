use qhabiro::knot::Registry;
use qhabiro::omega::*;
use qhabiro::transform::{f_from_a, CoeffSeq, Side};
use qhabiro::{Error, QSeries};

#[test]
fn structure_constants() {
    assert_eq!(gamma(7, -3, 0), QSeries::one());
    assert_eq!(gamma(-1, -1, 1), QSeries::from_ints(-1, &[-1, 2, -1]));
    assert!(gamma(1, 5, 2).is_exact_zero());
    assert!(gamma(-2, 1, 2).is_exact_zero());
}

#[test]
fn unit_law() {
    let reg = Registry::new();
    let k = reg.get("4_1").unwrap();
    let p = omega_mul(&OmegaElement::unit(), &k.omega, 6, 20).unwrap();
    for i in 0..6 {
        assert_eq!(p.coeff(i, 20).unwrap(), QSeries::one().truncate(20));
    }
    let u = reg.get("unknot").unwrap();
    let uu = omega_mul(&u.omega, &u.omega, 4, 20).unwrap();
    assert_eq!(uu.seq.sigma0(), Some(&QSeries::one()));
    assert!(lbc_product_bound(&uu, 0, 0, 4, 20).unwrap());
}

#[test]
fn sigma_minus_one_squared() {
    let s = OmegaElement::sigma(0);
    let p = omega_mul(&s, &s, 3, 30).unwrap();
    assert!(p.coeff(0, 30).unwrap().is_zero());
    assert_eq!(p.coeff(1, 30).unwrap(), QSeries::one().truncate(30));
    assert_eq!(p.coeff(2, 30).unwrap(), QSeries::from_ints_trunc(-1, &[-1, 2, -1], 30));
}

#[test]
fn trefoil_sum_leading_coefficient() {
    let reg = Registry::new();
    let k = reg.get("3_1l#3_1r").unwrap();
    let x = reduced_x_expansion(&k.omega, 3, 20).unwrap();
    assert!(x[0].is_zero() && x[1].is_zero());
    assert_eq!(x[2], QSeries::one().truncate(20));
    assert_eq!(k.a_coeff(1, 20).unwrap().truncate(20), QSeries::one().truncate(20));
    assert!(f_from_a(&k.omega.seq, 0, Some(20)).unwrap()[0].is_zero());
}

#[test]
fn sigma_product_instances() {
    for n in -4..=0 {
        assert!(verify_sigma_product(0, n, 6, 40).unwrap());
    }
    assert!(verify_sigma_product(-1, -1, 6, 40).unwrap());
    assert!(verify_sigma_product(-3, -2, 6, 40).unwrap());
    assert!(matches!(verify_sigma_product(-3, 2, 6, 40), Err(Error::InvalidArgument(_))));
}

#[test]
fn product_degree_bounds() {
    let reg = Registry::new();
    for (name, c) in [("3_1r", 0), ("3_1l", -2)] {
        let k = reg.get(name).unwrap();
        let p = omega_mul(&k.omega, &k.omega, 12, 20).unwrap();
        assert!(lbc_product_bound(&p, c, c, 12, 20).unwrap(), "{name}");
        assert_eq!(p.lbc, Some(2 * c));
    }
}

#[test]
fn lbc_is_required() {
    let raw = OmegaElement::new(CoeffSeq::from_list(Side::P, vec![QSeries::one(); 4]), None);
    assert!(matches!(omega_mul(&raw, &raw, 2, 10), Err(Error::LbcRequired)));
    assert!(omega_mul_forced(&raw, &raw, 2, 10, true).is_ok());
}

#[test]
fn product_is_a_homomorphism_of_x_expansions() {
    let reg = Registry::new();
    let (top, prec) = (10, 30);
    for (x, y) in [("3_1l", "4_1"), ("3_1r", "3_1r"), ("4_1", "4_1")] {
        let (a, b) = (reg.get(x).unwrap(), reg.get(y).unwrap());
        let prod = omega_mul(&a.omega, &b.omega, top + 1, prec).unwrap();
        let lhs = reduced_x_expansion(&prod, top, prec).unwrap();
        let ea = reduced_x_expansion(&a.omega, top, prec).unwrap();
        let eb = reduced_x_expansion(&b.omega, top, prec).unwrap();
        let rhs = x_series_mul(&ea, &eb, top, Some(prec));
        for (i, (u, w)) in lhs.iter().zip(&rhs).enumerate() {
            let n = w.prec_exp().unwrap().to_integer();
            assert!(n >= 10, "{x}#{y} x^{i}");
            assert_eq!(u.truncate(n), *w, "{x}#{y} x^{i}");
        }
    }
}

#[test]
fn mirror_of_product() {
    let reg = Registry::new();
    let (l, r, e) = (reg.get("3_1l").unwrap(), reg.get("3_1r").unwrap(), reg.get("4_1").unwrap());
    for i in 1..=6i64 {
        let a = omega_coeff(&l.omega, &e.omega, -i, None).unwrap();
        let b = omega_coeff(&r.omega, &e.omega, -i, None).unwrap();
        assert_eq!(a.mirror().unwrap(), b, "l = {}", -i);
        let c = omega_coeff(&l.omega, &l.omega, -i, None).unwrap();
        let d = omega_coeff(&r.omega, &r.omega, -i, None).unwrap();
        assert_eq!(c.mirror().unwrap(), d, "l = {}", -i);
    }
}
