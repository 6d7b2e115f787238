use num_rational::Ratio;
use qhabiro::qcomb::*;
use qhabiro::{Delta, Error, QSeries};

fn v(c: i64, half_exp: i64) -> QSeries {
    QSeries::monomial_rat(c, Ratio::new(half_exp, 2))
}

#[test]
fn quantum_integers() {
    assert!(qint(0).is_exact_zero());
    assert_eq!(qint(3), QSeries::from_ints(-1, &[1, 1, 1]));
    assert_eq!(qint(-3), -qint(3));
    assert_eq!(qint(4).delta(), Delta::Exactly(Ratio::new(-3, 2)));
}

#[test]
fn binomials() {
    assert_eq!(qbinom(4, 2), QSeries::from_ints(-2, &[1, 1, 2, 1, 1]));
    assert!(qbinom(2, 3).is_exact_zero());
    assert_eq!(qbinom(-1, 2), QSeries::one());
    assert_eq!(qbinom(7, 0), QSeries::one());
}

#[test]
fn curly_products() {
    let expect = &(&v(1, 3) - &v(1, 1)) - &(&v(1, -1) - &v(1, -3));
    assert_eq!(curly_poch(2, 2), expect);
    assert!(curly_poch(0, 1).is_exact_zero());
    assert_eq!(curly_poch(3, 2).delta(), Delta::Exactly(Ratio::new(-5, 2)));
}

#[test]
fn pochhammers() {
    let one = Ratio::from_integer(1);
    assert_eq!(poch(one, Some(3), 20).unwrap(), QSeries::from_ints(0, &[1, -1, -1, 0, 1, 1, -1]));
    assert_eq!(poch(one, Some(0), 20).unwrap(), QSeries::one());
    assert_eq!(poch(one, None, 6).unwrap(), QSeries::from_ints_trunc(0, &[1, -1, -1, 0, 0, 1], 6));
    assert!(matches!(poch(Ratio::from_integer(0), None, 6), Err(Error::DivergentPochhammer)));
}

#[test]
fn jacobi_symbols() {
    assert_eq!(jacobi_symbol(3, 5).unwrap(), -1);
    assert_eq!(jacobi_symbol(3, 3).unwrap(), 0);
    assert_eq!(jacobi_symbol(3, 1).unwrap(), 1);
    assert!(jacobi_symbol(3, 4).is_err());
    assert!(jacobi_symbol(3, -5).is_err());
    for n in (1..60).step_by(2) {
        for a in -10..10 {
            let brute: i64 = factor_odd(n).iter().map(|&p| legendre(a, p)).product();
            assert_eq!(jacobi_symbol(a, n).unwrap() as i64, brute, "({a}|{n})");
        }
    }
}

fn factor_odd(mut n: i64) -> Vec<i64> {
    let mut out = Vec::new();
    let mut p = 3;
    while n > 1 {
        while n % p == 0 {
            out.push(p);
            n /= p;
        }
        p += 2;
    }
    out
}

fn legendre(a: i64, p: i64) -> i64 {
    let r = a.rem_euclid(p);
    if r == 0 {
        0
    } else if (1..p).any(|x| x * x % p == r) {
        1
    } else {
        -1
    }
}

#[test]
fn truncated_thetas() {
    assert_eq!(theta_trunc(0, 3, 10)[&0], QSeries::one().truncate(10));
    assert_eq!(theta_trunc(1, 3, 10)[&0], QSeries::monomial(-1, 1).truncate(10));
    assert_eq!(theta_trunc(0, 3, 10)[&1], QSeries::monomial(-1, 1).truncate(10));
    assert_eq!(jacobi_theta_coeff(0), (1, 0));
    assert_eq!(jacobi_theta_coeff(2), (1, 1));
    assert_eq!(jacobi_theta_coeff(-1), (-1, 1));
}

#[test]
fn binomial_times_factorial_is_curly_pochhammer() {
    for n in -12..=12 {
        for k in 0..=12 {
            assert_eq!(&qbinom(n, k) * &curly_fact(k), curly_poch(n, k), "n={n} k={k}");
        }
    }
}

#[test]
fn curly_pochhammer_as_ordinary_pochhammer() {
    for n in -10..=10i64 {
        for k in 0..=10i64 {
            let p = poch(Ratio::from_integer(n - k + 1), Some(k as u64), 0).unwrap();
            let e = Ratio::new(k * (k - 1 - 2 * n), 4);
            let rhs = p.shift(e).scale_by_i64(if k % 2 == 0 { 1 } else { -1 });
            assert_eq!(curly_poch(n, k), rhs, "n={n} k={k}");
        }
    }
}

#[test]
fn jacobi_triple_product() {
    // (q)_∞ (x;q)_∞ (q/x;q)_∞ expanded with Euler's sums per power of x.
    let n = 30;
    let euler = |m: i64, extra: i64| -> QSeries {
        let e = m * (m - 1) / 2 + extra * m;
        if e >= n {
            return QSeries::o(n);
        }
        let s = qpoch_inv(m, n - e).shift_int(e);
        if m % 2 == 0 {
            s
        } else {
            -s
        }
    };
    let inf = qpoch_inf(n);
    for u in -6i64..=6 {
        let mut acc = QSeries::o(n);
        for m in 0..n {
            let k = m + u;
            if k < 0 {
                continue;
            }
            acc += &euler(k, 0).mul_to(&euler(m, 1), Some(n));
        }
        let (s, e) = jacobi_theta_coeff(u);
        assert_eq!(acc.mul_to(&inf, Some(n)), QSeries::monomial(s as i64, e).truncate(n), "x^{u}");
    }
}
