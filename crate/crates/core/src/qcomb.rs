//! Balanced q-combinatorics: q-integers, binomials, curly brackets,
//! Pochhammer symbols, truncated theta functions and the Jacobi symbol.
//!
//! Balanced quantities are Laurent polynomials in `v = q^{1/2}`; they come
//! back as [`QSeries`] on scale 2 and collapse to scale 1 when integral.
//!
//! Every balanced quantity here has the shape `±v^e · Π(1-q^u) / Π(1-q^d)`.
//! [`QFactor`] keeps that shape, so a quantity whose exact expansion is huge
//! can still be truncated cheaply.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::series::{Exp, Prec, QSeries};

/// `Π(1-q^u) / Π(1-q^d)` modulo `q^cap`, for positive `u`, `d`.
pub fn qfactor_series(ups: &[i64], downs: &[i64], cap: i64) -> QSeries {
    if cap <= 0 {
        return QSeries::o(cap);
    }
    let n = cap as usize;
    let mut c = vec![BigInt::zero(); n];
    c[0] = BigInt::one();
    let mut top = 1usize;
    for &u in ups {
        debug_assert!(u > 0);
        let u = u as usize;
        if u >= n {
            continue;
        }
        let new_top = (top + u).min(n);
        for i in (u..new_top).rev() {
            if !c[i - u].is_zero() {
                let (lo, hi) = c.split_at_mut(i);
                hi[0] -= &lo[i - u];
            }
        }
        top = new_top;
    }
    for &d in downs {
        debug_assert!(d > 0);
        let d = d as usize;
        if d >= n {
            continue;
        }
        for i in d..n {
            if !c[i - d].is_zero() {
                let (lo, hi) = c.split_at_mut(i);
                hi[0] += &lo[i - d];
            }
        }
        top = n;
    }
    c.truncate(top.max(1));
    QSeries::from_coeffs(1, 0, c, Prec::Trunc(cap))
}

/// `Π(1-q^u) / Π(1-q^d)` as an exact polynomial; fails if it is not one.
pub fn qfactor_exact(ups: &[i64], downs: &[i64]) -> Result<QSeries> {
    let mut p = QSeries::one();
    for &u in ups {
        p = p.mul_one_minus(u);
    }
    for &d in downs {
        p = p.div_one_minus_exact(d)?;
    }
    Ok(p)
}

/// A nonzero balanced quantity `sign · v^vexp · Π(1-q^u) / Π(1-q^d)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QFactor {
    pub sign: i8,
    /// Exponent of `v = q^{1/2}`.
    pub vexp: i64,
    pub ups: Vec<i64>,
    pub downs: Vec<i64>,
}

impl QFactor {
    pub fn one() -> Self {
        QFactor { sign: 1, vexp: 0, ups: Vec::new(), downs: Vec::new() }
    }

    pub fn mul(&self, o: &QFactor) -> QFactor {
        let mut ups = self.ups.clone();
        ups.extend_from_slice(&o.ups);
        let mut downs = self.downs.clone();
        downs.extend_from_slice(&o.downs);
        QFactor { sign: self.sign * o.sign, vexp: self.vexp + o.vexp, ups, downs }
    }

    /// Valuation in q-units (a half-integer in general).
    pub fn delta(&self) -> Exp {
        Ratio::new(self.vexp, 2)
    }

    /// `{s}` for `s != 0`: `-sgn(s) v^{-|s|} (1 - q^{|s|})`.
    pub fn curly(s: i64) -> Option<QFactor> {
        (s != 0).then(|| QFactor {
            sign: if s > 0 { -1 } else { 1 },
            vexp: -s.abs(),
            ups: vec![s.abs()],
            downs: Vec::new(),
        })
    }

    /// `{n}_k = {n}{n-1}...{n-k+1}`.
    pub fn curly_poch(n: i64, k: i64) -> Option<QFactor> {
        let mut f = QFactor::one();
        for t in 0..k {
            f = f.mul(&QFactor::curly(n - t)?);
        }
        Some(f)
    }

    /// Balanced binomial `[n choose k]`, `None` when it vanishes.
    pub fn qbinom(n: i64, k: i64) -> Option<QFactor> {
        if k < 0 {
            return None;
        }
        if n < 0 {
            let mut f = QFactor::qbinom(k - n - 1, k)?;
            if k % 2 == 1 {
                f.sign = -f.sign;
            }
            return Some(f);
        }
        if n < k {
            return None;
        }
        let k = k.min(n - k);
        Some(QFactor {
            sign: 1,
            vexp: -k * (n - k),
            ups: (1..=k).map(|t| n - k + t).collect(),
            downs: (1..=k).collect(),
        })
    }

    /// Series to `O(q^cap)`.
    pub fn to_series(&self, cap: i64) -> QSeries {
        let shift = Ratio::new(self.vexp, 2);
        let inner = (Ratio::from_integer(cap) - shift).ceil().to_integer();
        let s = qfactor_series(&self.ups, &self.downs, inner).shift(shift);
        let s = if self.sign < 0 { -s } else { s };
        s.truncate(cap)
    }

    /// Exact Laurent polynomial; fails if the quotient is not a polynomial.
    pub fn to_exact(&self) -> Result<QSeries> {
        let p = qfactor_exact(&self.ups, &self.downs)?.shift(Ratio::new(self.vexp, 2));
        Ok(if self.sign < 0 { -p } else { p })
    }
}

/// Balanced q-integer `[n] = (v^n - v^{-n}) / (v - v^{-1})`.
pub fn qint(n: i64) -> QSeries {
    let m = n.abs();
    if m == 0 {
        return QSeries::zero();
    }
    let c = if n > 0 { 1 } else { -1 };
    let coeffs = (0..2 * m - 1).map(|i| BigInt::from(if i % 2 == 0 { c } else { 0 })).collect();
    QSeries::from_coeffs(2, -(m - 1), coeffs, Prec::Exact)
}

/// Gaussian binomial `G_q(n, k) = (q;q)_n / ((q;q)_k (q;q)_{n-k})`, zero outside `0 <= k <= n`.
pub fn gaussian(n: i64, k: i64) -> QSeries {
    if k < 0 || n < 0 || k > n {
        return QSeries::zero();
    }
    let k = k.min(n - k);
    let mut g = QSeries::one();
    for t in 1..=k {
        g = g
            .mul_one_minus(n - k + t)
            .div_one_minus_exact(t)
            .expect("partial Gaussian products are polynomials");
    }
    g
}

/// Balanced binomial `[n choose k]` for any integer `n` and `k >= 0`.
pub fn qbinom(n: i64, k: i64) -> QSeries {
    if k < 0 {
        return QSeries::zero();
    }
    if n < 0 {
        let b = qbinom(k - n - 1, k);
        return if k % 2 == 1 { -b } else { b };
    }
    if n < k {
        return QSeries::zero();
    }
    gaussian(n, k).shift(Ratio::from_integer(-k * (n - k)) / 2)
}

/// `{n} = v^n - v^{-n}`.
pub fn curly(n: i64) -> QSeries {
    &QSeries::monomial_rat(1, Ratio::new(n, 2)) - &QSeries::monomial_rat(1, Ratio::new(-n, 2))
}

/// `{n}_k = {n}{n-1}...{n-k+1}`.
pub fn curly_poch(n: i64, k: i64) -> QSeries {
    let mut p = QSeries::one();
    for t in 0..k {
        p = &p * &curly(n - t);
    }
    p
}

/// `{k}! = {k}_k`.
pub fn curly_fact(k: i64) -> QSeries {
    curly_poch(k, k)
}

/// `(q^a; q)_n`, exact for finite `n`, truncated at `O(q^prec)` for `n = ∞`.
pub fn poch(a: Exp, n: Option<u64>, prec: i64) -> Result<QSeries> {
    match n {
        Some(n) => {
            let mut p = QSeries::one();
            for j in 0..n as i64 {
                let e = a + Ratio::from_integer(j);
                let f = &QSeries::one() - &QSeries::monomial_rat(1, e);
                p = &p * &f;
            }
            Ok(p)
        }
        None => {
            if a <= Ratio::zero() {
                return Err(Error::DivergentPochhammer);
            }
            let mut p = QSeries::one().truncate(prec);
            let mut j = 0i64;
            loop {
                let e = a + Ratio::from_integer(j);
                if e >= Ratio::from_integer(prec) {
                    break;
                }
                let f = &QSeries::one() - &QSeries::monomial_rat(1, e);
                p = p.mul_to(&f, Some(prec));
                j += 1;
            }
            Ok(p)
        }
    }
}

/// `(q;q)_k` to `O(q^cap)`.
pub fn qpoch(k: i64, cap: i64) -> QSeries {
    let ups: Vec<i64> = (1..=k).collect();
    qfactor_series(&ups, &[], cap)
}

/// `1/(q;q)_k` to `O(q^cap)`.
pub fn qpoch_inv(k: i64, cap: i64) -> QSeries {
    let downs: Vec<i64> = (1..=k).collect();
    qfactor_series(&[], &downs, cap)
}

/// `(q;q)_∞` to `O(q^cap)`.
pub fn qpoch_inf(cap: i64) -> QSeries {
    qpoch(cap.max(0), cap)
}

/// `1/(q;q)_∞` to `O(q^cap)`: the partition generating function.
pub fn qpoch_inf_inv(cap: i64) -> QSeries {
    qpoch_inv(cap.max(0), cap)
}

/// Jacobi symbol `(a | n)` for odd positive `n`.
pub fn jacobi_symbol(a: i64, n: i64) -> Result<i8> {
    if n <= 0 || n % 2 == 0 {
        return Err(Error::JacobiModulus(n));
    }
    let mut a = a.rem_euclid(n);
    let mut n = n;
    let mut t = 1i8;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if n % 8 == 3 || n % 8 == 5 {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        a %= n;
    }
    Ok(if n == 1 { t } else { 0 })
}

/// `binom(n, 2) = n(n-1)/2` for any integer `n`.
pub fn binom2(n: i64) -> i64 {
    n * (n - 1) / 2
}

/// Coefficients of `x^u`, `|u| <= j_window`, of the truncated theta function
/// `θ_i(x,q) = (-1)^i q^{C(i+1,2)} (1 + Σ_{n≥1} (-1)^n q^{C(n+1,2)+ni} (x^n + x^{-n}))`.
pub fn theta_trunc(i: i64, j_window: i64, prec: i64) -> BTreeMap<i64, QSeries> {
    let base = binom2(i + 1);
    let mut out = BTreeMap::new();
    for u in -j_window..=j_window {
        let n = u.abs();
        let e = base + if n == 0 { 0 } else { binom2(n + 1) + n * i };
        let sign = if (i + n) % 2 == 0 { 1 } else { -1 };
        out.insert(u, QSeries::monomial(sign, e).truncate(prec));
    }
    out
}

/// Coefficient of `x^n` in `θ(x,q) = Σ (-1)^n x^n q^{n(n-1)/2}` as `(sign, exponent)`.
pub fn jacobi_theta_coeff(n: i64) -> (i8, i64) {
    (if n % 2 == 0 { 1 } else { -1 }, n * (n - 1) / 2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn qint_values() {
        assert_eq!(qint(3), QSeries::from_ints(-1, &[1, 1, 1]));
        assert_eq!(qint(-3), -QSeries::from_ints(-1, &[1, 1, 1]));
        assert_eq!(qint(2).delta(), crate::series::Delta::Exactly(Ratio::new(-1, 2)));
    }

    #[test]
    fn factor_matches_exact() {
        for n in -6..=8 {
            for k in 0..=6 {
                let exact = qbinom(n, k);
                match QFactor::qbinom(n, k) {
                    None => assert!(exact.is_exact_zero()),
                    Some(f) => {
                        assert_eq!(f.to_exact().unwrap(), exact, "n={n} k={k}");
                        assert_eq!(f.to_series(7), exact.truncate(7));
                    }
                }
                match QFactor::curly_poch(n, k) {
                    None => assert!(curly_poch(n, k).is_exact_zero()),
                    Some(f) => assert_eq!(f.to_exact().unwrap(), curly_poch(n, k)),
                }
            }
        }
    }

    #[test]
    fn jacobi_small() {
        assert_eq!(jacobi_symbol(2, 7).unwrap(), 1);
        assert_eq!(jacobi_symbol(2, 5).unwrap(), -1);
        assert_eq!(jacobi_symbol(5, 9).unwrap(), 1);
        assert!(jacobi_symbol(1, 4).is_err());
    }
}
