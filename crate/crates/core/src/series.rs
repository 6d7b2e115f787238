//! Exact and truncated Laurent series in `q` on a rational exponent grid.
//!
//! A [`QSeries`] stores integer coefficients for exponents `offset/scale,
//! (offset+1)/scale, ...` together with a precision: either [`Prec::Exact`]
//! (a finite Laurent polynomial) or [`Prec::Trunc`]`(N)`, meaning every
//! coefficient below `N/scale` is known and nothing above it is.
//!
//! Values are kept in a canonical form (no leading or trailing zeros,
//! smallest possible scale), so structural equality is series equality.
//!
//! Multiplication is the schoolbook kernel; [`QSeries::mul_to`] is the seam
//! for a faster kernel, since every caller that cares about cost passes an
//! explicit cap through it.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Rational exponent.
pub type Exp = Ratio<i64>;

/// Precision of a series, in units of `1/scale`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Prec {
    Exact,
    Trunc(i64),
}

/// Lowest exponent of a series, distinguishing "zero" from "zero up to prec".
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Delta {
    /// The lowest nonzero coefficient sits at this exponent.
    Exactly(Exp),
    /// Every known coefficient is zero; the series is `O(q^e)`.
    AtLeast(Exp),
    /// The exact zero series.
    Infinite,
}

impl Delta {
    /// A lower bound on the valuation, `None` for the exact zero.
    pub fn lower(&self) -> Option<Exp> {
        match *self {
            Delta::Exactly(e) | Delta::AtLeast(e) => Some(e),
            Delta::Infinite => None,
        }
    }

    /// True when the valuation is at least `bound`.
    pub fn at_least(&self, bound: Exp) -> bool {
        self.lower().map_or(true, |e| e >= bound)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QSeries {
    scale: i64,
    offset: i64,
    coeffs: Vec<BigInt>,
    prec: Prec,
}

fn lcm(a: i64, b: i64) -> i64 {
    a.lcm(&b)
}

fn exp_units(e: Exp, scale: i64) -> Option<i64> {
    let v = e * Ratio::from_integer(scale);
    v.is_integer().then(|| v.to_integer())
}

impl QSeries {
    /// The exact zero series.
    pub fn zero() -> Self {
        QSeries { scale: 1, offset: 0, coeffs: Vec::new(), prec: Prec::Exact }
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    /// A series known to vanish below `q^n` and unknown beyond.
    pub fn o(n: i64) -> Self {
        QSeries { scale: 1, offset: 0, coeffs: Vec::new(), prec: Prec::Trunc(n) }
    }

    /// `c * q^e` for an integer exponent.
    pub fn monomial(c: impl Into<BigInt>, e: i64) -> Self {
        Self::from_coeffs(1, e, vec![c.into()], Prec::Exact)
    }

    /// `c * q^e` for a rational exponent.
    pub fn monomial_rat(c: impl Into<BigInt>, e: Exp) -> Self {
        Self::from_coeffs(*e.denom(), *e.numer(), vec![c.into()], Prec::Exact)
    }

    /// Exact polynomial with integer exponents starting at `offset`.
    pub fn from_ints(offset: i64, coeffs: &[i64]) -> Self {
        Self::from_coeffs(1, offset, coeffs.iter().map(|&c| BigInt::from(c)).collect(), Prec::Exact)
    }

    /// Truncated series with integer exponents starting at `offset`, known below `q^n`.
    pub fn from_ints_trunc(offset: i64, coeffs: &[i64], n: i64) -> Self {
        Self::from_coeffs(1, offset, coeffs.iter().map(|&c| BigInt::from(c)).collect(), Prec::Trunc(n))
    }

    /// General constructor; normalizes. Coefficients at or beyond a
    /// truncation point are discarded.
    pub fn from_coeffs(scale: i64, offset: i64, coeffs: Vec<BigInt>, prec: Prec) -> Self {
        assert!(scale > 0, "scale must be positive");
        QSeries { scale, offset, coeffs, prec }.normalized()
    }

    pub fn scale(&self) -> i64 {
        self.scale
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn prec(&self) -> Prec {
        self.prec
    }

    /// Precision as an exponent, `None` when exact.
    pub fn prec_exp(&self) -> Option<Exp> {
        match self.prec {
            Prec::Exact => None,
            Prec::Trunc(n) => Some(Ratio::new(n, self.scale)),
        }
    }

    pub fn is_exact(&self) -> bool {
        self.prec == Prec::Exact
    }

    /// True when no nonzero coefficient is stored (exact zero or `O(q^n)`).
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_exact_zero(&self) -> bool {
        self.coeffs.is_empty() && self.prec == Prec::Exact
    }

    /// Nonzero terms as `(exponent, coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = (Exp, &BigInt)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (Ratio::new(self.offset + i as i64, self.scale), c))
    }

    /// Coefficient of `q^e`; `None` when `e` is at or beyond the precision.
    pub fn coeff(&self, e: Exp) -> Option<BigInt> {
        if let Some(p) = self.prec_exp() {
            if e >= p {
                return None;
            }
        }
        let Some(u) = exp_units(e, self.scale) else {
            return Some(BigInt::zero());
        };
        let i = u - self.offset;
        if i < 0 || i >= self.coeffs.len() as i64 {
            Some(BigInt::zero())
        } else {
            Some(self.coeffs[i as usize].clone())
        }
    }

    /// Coefficient of `q^e` for an integer exponent; zero beyond the precision.
    pub fn coeff_int(&self, e: i64) -> BigInt {
        self.coeff(Ratio::from_integer(e)).unwrap_or_default()
    }

    /// Coefficients of `q^lo .. q^hi` (integer exponents) as `i64`; panics on overflow.
    pub fn coeffs_i64(&self, lo: i64, hi: i64) -> Vec<i64> {
        (lo..hi).map(|e| self.coeff_int(e).to_i64().expect("coefficient overflows i64")).collect()
    }

    /// Valuation.
    pub fn delta(&self) -> Delta {
        if self.coeffs.is_empty() {
            match self.prec {
                Prec::Exact => Delta::Infinite,
                Prec::Trunc(n) => Delta::AtLeast(Ratio::new(n, self.scale)),
            }
        } else {
            Delta::Exactly(Ratio::new(self.offset, self.scale))
        }
    }

    /// Highest exponent with a nonzero stored coefficient.
    pub fn max_exp(&self) -> Option<Exp> {
        (!self.coeffs.is_empty())
            .then(|| Ratio::new(self.offset + self.coeffs.len() as i64 - 1, self.scale))
    }

    /// Lowest nonzero term.
    pub fn leading(&self) -> Option<(Exp, &BigInt)> {
        self.coeffs.first().map(|c| (Ratio::new(self.offset, self.scale), c))
    }

    fn normalized(mut self) -> Self {
        if let Prec::Trunc(n) = self.prec {
            let keep = (n - self.offset).clamp(0, self.coeffs.len() as i64) as usize;
            self.coeffs.truncate(keep);
        }
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead == self.coeffs.len() {
            self.coeffs.clear();
            self.offset = 0;
        } else {
            if lead > 0 {
                self.coeffs.drain(..lead);
                self.offset += lead as i64;
            }
            while self.coeffs.last().is_some_and(|c| c.is_zero()) {
                self.coeffs.pop();
            }
        }
        let mut g = self.scale;
        if let Prec::Trunc(n) = self.prec {
            g = g.gcd(&n);
        }
        if g > 1 {
            for (i, c) in self.coeffs.iter().enumerate() {
                if !c.is_zero() {
                    g = g.gcd(&(self.offset + i as i64));
                    if g == 1 {
                        break;
                    }
                }
            }
        }
        if g > 1 {
            let step = g as usize;
            self.coeffs = self.coeffs.into_iter().step_by(step).collect();
            self.offset /= g;
            self.scale /= g;
            if let Prec::Trunc(n) = self.prec {
                self.prec = Prec::Trunc(n / g);
            }
        }
        self
    }

    /// Re-express on a finer grid `to` (a multiple of the current scale).
    fn rescaled(&self, to: i64) -> (i64, Vec<BigInt>, Option<i64>) {
        let f = to / self.scale;
        debug_assert_eq!(f * self.scale, to);
        let prec = match self.prec {
            Prec::Exact => None,
            Prec::Trunc(n) => Some(n * f),
        };
        if f == 1 {
            return (self.offset, self.coeffs.clone(), prec);
        }
        let mut v = vec![BigInt::zero(); if self.coeffs.is_empty() { 0 } else { (self.coeffs.len() - 1) * f as usize + 1 }];
        for (i, c) in self.coeffs.iter().enumerate() {
            v[i * f as usize] = c.clone();
        }
        (self.offset * f, v, prec)
    }


    /// Truncate to `O(q^n)` (integer exponent). Never raises precision.
    pub fn truncate(&self, n: i64) -> Self {
        self.truncate_exp(Ratio::from_integer(n))
    }

    /// Truncate to `O(q^e)`.
    pub fn truncate_exp(&self, e: Exp) -> Self {
        let l = lcm(self.scale, *e.denom());
        let (off, coeffs, p) = self.rescaled(l);
        let n = (e * Ratio::from_integer(l)).to_integer();
        let n = p.map_or(n, |p| p.min(n));
        Self::from_coeffs(l, off, coeffs, Prec::Trunc(n))
    }

    /// Declare a truncated series to be an exact polynomial (caller certifies it).
    pub fn assume_exact(&self) -> Self {
        let mut s = self.clone();
        s.prec = Prec::Exact;
        s.normalized()
    }

    /// Multiply by `q^e`.
    pub fn shift(&self, e: Exp) -> Self {
        let l = lcm(self.scale, *e.denom());
        let (off, coeffs, p) = self.rescaled(l);
        let d = (e * Ratio::from_integer(l)).to_integer();
        Self::from_coeffs(l, off + d, coeffs, p.map_or(Prec::Exact, |p| Prec::Trunc(p + d)))
    }

    /// Multiply by `q^e` for an integer `e`.
    pub fn shift_int(&self, e: i64) -> Self {
        let d = e * self.scale;
        let mut s = self.clone();
        if !s.coeffs.is_empty() {
            s.offset += d;
        }
        if let Prec::Trunc(n) = s.prec {
            s.prec = Prec::Trunc(n + d);
        }
        s.normalized()
    }

    /// Multiply by an integer constant.
    pub fn scale_by(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return match self.prec {
                Prec::Exact => Self::zero(),
                Prec::Trunc(n) => Self::from_coeffs(self.scale, 0, Vec::new(), Prec::Trunc(n)),
            };
        }
        let mut s = self.clone();
        for x in s.coeffs.iter_mut() {
            *x *= c;
        }
        s
    }

    pub fn scale_by_i64(&self, c: i64) -> Self {
        self.scale_by(&BigInt::from(c))
    }

    /// Divide every coefficient by `c`, failing unless all are divisible.
    pub fn div_exact_int(&self, c: &BigInt) -> Result<Self> {
        let mut s = self.clone();
        for x in s.coeffs.iter_mut() {
            let (qt, r) = x.div_rem(c);
            if !r.is_zero() {
                return Err(Error::InexactDivision(format!("coefficient not divisible by {c}")));
            }
            *x = qt;
        }
        Ok(s)
    }

    /// Product, with results beyond `O(q^cap)` never computed.
    pub fn mul_to(&self, other: &Self, cap: Option<i64>) -> Self {
        self.mul_capped(other, cap.map(Ratio::from_integer))
    }

    /// Product with an optional rational cap.
    pub fn mul_capped(&self, other: &Self, cap: Option<Exp>) -> Self {
        if self.is_exact_zero() || other.is_exact_zero() {
            return Self::zero();
        }
        let mut l = lcm(self.scale, other.scale);
        if let Some(c) = cap {
            l = lcm(l, *c.denom());
        }
        let (ea, a, pa) = self.rescaled(l);
        let (eb, b, pb) = other.rescaled(l);
        let va = if a.is_empty() { pa.unwrap() } else { ea };
        let vb = if b.is_empty() { pb.unwrap() } else { eb };
        let mut out: Option<i64> = None;
        if let Some(pa) = pa {
            out = Some(pa + vb);
        }
        if let Some(pb) = pb {
            out = Some(out.map_or(pb + va, |o| o.min(pb + va)));
        }
        if let Some(c) = cap {
            let c = (c * Ratio::from_integer(l)).to_integer();
            out = Some(out.map_or(c, |o| o.min(c)));
        }
        let base = ea + eb;
        let full = if a.is_empty() || b.is_empty() { 0 } else { a.len() + b.len() - 1 };
        let len = match out {
            Some(o) => ((o - base).max(0) as usize).min(full),
            None => full,
        };
        let mut r = vec![BigInt::zero(); len];
        if len > 0 {
            let (outer, inner) = {
                let na = a.iter().filter(|c| !c.is_zero()).count();
                let nb = b.iter().filter(|c| !c.is_zero()).count();
                if na <= nb { (&a, &b) } else { (&b, &a) }
            };
            for (i, x) in outer.iter().enumerate() {
                if x.is_zero() || i >= len {
                    continue;
                }
                let jmax = inner.len().min(len - i);
                let seg = &mut r[i..i + jmax];
                if x.is_one() {
                    for (t, y) in seg.iter_mut().zip(&inner[..jmax]) {
                        *t += y;
                    }
                } else if (-x).is_one() {
                    for (t, y) in seg.iter_mut().zip(&inner[..jmax]) {
                        *t -= y;
                    }
                } else {
                    for (t, y) in seg.iter_mut().zip(&inner[..jmax]) {
                        if !y.is_zero() {
                            *t += x * y;
                        }
                    }
                }
            }
        }
        Self::from_coeffs(l, base, r, out.map_or(Prec::Exact, Prec::Trunc))
    }

    /// Multiply by `(1 - q^k)` for an integer `k > 0`.
    pub fn mul_one_minus(&self, k: i64) -> Self {
        debug_assert!(k > 0);
        if self.coeffs.is_empty() {
            return self.clone();
        }
        let ku = (k * self.scale) as usize;
        let mut v = self.coeffs.clone();
        v.resize(self.coeffs.len() + ku, BigInt::zero());
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                v[i + ku] -= c;
            }
        }
        Self::from_coeffs(self.scale, self.offset, v, self.prec)
    }

    /// Divide by `(1 - q^k)` as a power series, result truncated at `O(q^cap)`
    /// (or the input precision if lower).
    pub fn div_one_minus(&self, k: i64, cap: i64) -> Self {
        debug_assert!(k > 0);
        let s = self.scale;
        let mut n = cap * s;
        if let Prec::Trunc(p) = self.prec {
            n = n.min(p);
        }
        if self.coeffs.is_empty() {
            return Self::from_coeffs(s, 0, Vec::new(), Prec::Trunc(n));
        }
        let len = (n - self.offset).max(0) as usize;
        let mut v: Vec<BigInt> = self.coeffs.iter().take(len).cloned().collect();
        v.resize(len, BigInt::zero());
        let ku = (k * s) as usize;
        for i in ku..len {
            let (lo, hi) = v.split_at_mut(i);
            if !lo[i - ku].is_zero() {
                hi[0] += &lo[i - ku];
            }
        }
        Self::from_coeffs(s, self.offset, v, Prec::Trunc(n))
    }

    /// Exact division of a Laurent polynomial by `(1 - q^k)`.
    pub fn div_one_minus_exact(&self, k: i64) -> Result<Self> {
        if !self.is_exact() {
            return Err(Error::InexactDivision("exact division needs an exact polynomial".into()));
        }
        if self.coeffs.is_empty() {
            return Ok(Self::zero());
        }
        let ku = (k * self.scale) as usize;
        let len = self.coeffs.len();
        if len <= ku {
            return Err(Error::InexactDivision(format!("not divisible by 1 - q^{k}")));
        }
        let qlen = len - ku;
        let mut qv: Vec<BigInt> = Vec::with_capacity(qlen);
        for i in 0..qlen {
            let mut c = self.coeffs[i].clone();
            if i >= ku {
                c += &qv[i - ku];
            }
            qv.push(c);
        }
        for i in qlen..len {
            let mut r = self.coeffs[i].clone();
            if i >= ku && i - ku < qlen {
                r += &qv[i - ku];
            }
            if !r.is_zero() {
                return Err(Error::InexactDivision(format!("not divisible by 1 - q^{k}")));
            }
        }
        Ok(Self::from_coeffs(self.scale, self.offset, qv, Prec::Exact))
    }

    /// Multiplicative inverse of a unit series, to `O(q^n)`.
    ///
    /// The lowest monomial `±q^e` is factored out first; the result is
    /// known to `min(n, P - 2e)` when the input is truncated at `P`.
    pub fn invert_unit(&self, n: i64) -> Result<Self> {
        let Some((_, lead)) = self.leading() else {
            return Err(Error::NotInvertible);
        };
        if !lead.abs().is_one() {
            return Err(Error::NotInvertible);
        }
        let s = self.scale;
        let e = self.offset;
        let mut out = n * s;
        if let Prec::Trunc(p) = self.prec {
            out = out.min(p - 2 * e);
        }
        let len = (out + e).max(0) as usize;
        let u0 = lead.clone();
        let mut w: Vec<BigInt> = Vec::with_capacity(len);
        for m in 0..len {
            if m == 0 {
                w.push(u0.clone());
                continue;
            }
            let mut acc = BigInt::zero();
            let top = m.min(self.coeffs.len() - 1);
            for i in 1..=top {
                let ui = &self.coeffs[i];
                if !ui.is_zero() && !w[m - i].is_zero() {
                    acc += ui * &w[m - i];
                }
            }
            w.push(if u0.is_one() { -acc } else { acc });
        }
        Ok(Self::from_coeffs(s, -e, w, Prec::Trunc(out)))
    }

    /// Substitute `q -> q^m` for `m > 0`.
    pub fn subst_qpow(&self, m: i64) -> Self {
        assert!(m > 0);
        let mut v = vec![BigInt::zero(); if self.coeffs.is_empty() { 0 } else { (self.coeffs.len() - 1) * m as usize + 1 }];
        for (i, c) in self.coeffs.iter().enumerate() {
            v[i * m as usize] = c.clone();
        }
        let prec = match self.prec {
            Prec::Exact => Prec::Exact,
            Prec::Trunc(n) => Prec::Trunc(n * m),
        };
        Self::from_coeffs(self.scale, self.offset * m, v, prec)
    }

    /// Substitute `q -> q^{-1}`; exact polynomials only.
    pub fn mirror(&self) -> Result<Self> {
        if !self.is_exact() {
            return Err(Error::MirrorNeedsExact);
        }
        if self.coeffs.is_empty() {
            return Ok(Self::zero());
        }
        let top = self.offset + self.coeffs.len() as i64 - 1;
        let v: Vec<BigInt> = self.coeffs.iter().rev().cloned().collect();
        Ok(Self::from_coeffs(self.scale, -top, v, Prec::Exact))
    }

    /// True when both series are known to `O(q^n)` and agree there.
    pub fn agrees_to(&self, other: &Self, n: i64) -> bool {
        let n = Ratio::from_integer(n);
        let known = |s: &Self| s.prec_exp().map_or(true, |p| p >= n);
        known(self) && known(other) && self.truncate_exp(n) == other.truncate_exp(n)
    }

    /// Lowest exponent where two series differ among commonly known terms,
    /// or `None` if they agree up to the common precision.
    pub fn first_difference(&self, other: &Self) -> Option<Exp> {
        let d = self - other;
        match d.delta() {
            Delta::Exactly(e) => Some(e),
            _ => None,
        }
    }

    /// Sum of `|c|` over stored coefficients.
    pub fn abs_sum(&self) -> BigInt {
        self.coeffs.iter().map(|c| c.abs()).sum()
    }

    fn add_impl(&self, other: &Self, negate: bool) -> Self {
        let l = lcm(self.scale, other.scale);
        let (ea, a, pa) = self.rescaled(l);
        let (eb, b, pb) = other.rescaled(l);
        let prec = match (pa, pb) {
            (None, None) => None,
            (Some(x), None) | (None, Some(x)) => Some(x),
            (Some(x), Some(y)) => Some(x.min(y)),
        };
        if b.is_empty() {
            return Self::from_coeffs(l, ea, a, prec.map_or(Prec::Exact, Prec::Trunc));
        }
        if a.is_empty() {
            let b = if negate { b.into_iter().map(|c| -c).collect() } else { b };
            return Self::from_coeffs(l, eb, b, prec.map_or(Prec::Exact, Prec::Trunc));
        }
        let lo = ea.min(eb);
        let hi = (ea + a.len() as i64).max(eb + b.len() as i64);
        let mut v = vec![BigInt::zero(); (hi - lo) as usize];
        for (i, c) in a.into_iter().enumerate() {
            v[(ea - lo) as usize + i] = c;
        }
        for (i, c) in b.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let t = &mut v[(eb - lo) as usize + i];
            if negate {
                *t -= c;
            } else {
                *t += c;
            }
        }
        Self::from_coeffs(l, lo, v, prec.map_or(Prec::Exact, Prec::Trunc))
    }

    /// In-place `self += c * q^e * other` for integer `e`, on equal scales.
    /// Falls back to the general path otherwise.
    pub fn add_scaled_shift(&mut self, other: &Self, c: &BigInt, e: i64) {
        if other.coeffs.is_empty() && other.prec == Prec::Exact || c.is_zero() && other.prec == Prec::Exact {
            return;
        }
        if self.scale != other.scale || self.coeffs.is_empty() || other.coeffs.is_empty() {
            let t = other.scale_by(c).shift_int(e);
            *self = &*self + &t;
            return;
        }
        let s = self.scale;
        let ob = other.offset + e * s;
        let mut prec = self.prec;
        if let Prec::Trunc(p) = other.prec {
            let p = p + e * s;
            prec = match prec {
                Prec::Exact => Prec::Trunc(p),
                Prec::Trunc(q) => Prec::Trunc(q.min(p)),
            };
        }
        let lo = self.offset.min(ob);
        let hi = (self.offset + self.coeffs.len() as i64).max(ob + other.coeffs.len() as i64);
        if lo < self.offset {
            let pad = (self.offset - lo) as usize;
            let mut v = vec![BigInt::zero(); pad];
            v.append(&mut self.coeffs);
            self.coeffs = v;
            self.offset = lo;
        }
        self.coeffs.resize((hi - lo) as usize, BigInt::zero());
        let start = (ob - lo) as usize;
        let neg = (-c).is_one();
        for (i, y) in other.coeffs.iter().enumerate() {
            if y.is_zero() {
                continue;
            }
            let t = &mut self.coeffs[start + i];
            if c.is_one() {
                *t += y;
            } else if neg {
                *t -= y;
            } else {
                *t += c * y;
            }
        }
        self.prec = prec;
        let taken = std::mem::replace(self, QSeries::zero());
        *self = taken.normalized();
    }
}

impl Default for QSeries {
    fn default() -> Self {
        Self::zero()
    }
}

impl<'a> Add<&'a QSeries> for &'a QSeries {
    type Output = QSeries;
    fn add(self, rhs: &QSeries) -> QSeries {
        self.add_impl(rhs, false)
    }
}

impl<'a> Sub<&'a QSeries> for &'a QSeries {
    type Output = QSeries;
    fn sub(self, rhs: &QSeries) -> QSeries {
        self.add_impl(rhs, true)
    }
}

impl<'a> Mul<&'a QSeries> for &'a QSeries {
    type Output = QSeries;
    fn mul(self, rhs: &QSeries) -> QSeries {
        self.mul_capped(rhs, None)
    }
}

impl Add for QSeries {
    type Output = QSeries;
    fn add(self, rhs: QSeries) -> QSeries {
        &self + &rhs
    }
}

impl Sub for QSeries {
    type Output = QSeries;
    fn sub(self, rhs: QSeries) -> QSeries {
        &self - &rhs
    }
}

impl Mul for QSeries {
    type Output = QSeries;
    fn mul(self, rhs: QSeries) -> QSeries {
        &self * &rhs
    }
}

impl AddAssign<&QSeries> for QSeries {
    fn add_assign(&mut self, rhs: &QSeries) {
        self.add_scaled_shift(rhs, &BigInt::one(), 0);
    }
}

impl SubAssign<&QSeries> for QSeries {
    fn sub_assign(&mut self, rhs: &QSeries) {
        self.add_scaled_shift(rhs, &-BigInt::one(), 0);
    }
}

impl Neg for &QSeries {
    type Output = QSeries;
    fn neg(self) -> QSeries {
        let mut s = self.clone();
        for c in s.coeffs.iter_mut() {
            *c = -std::mem::take(c);
        }
        s
    }
}

impl Neg for QSeries {
    type Output = QSeries;
    fn neg(self) -> QSeries {
        -&self
    }
}

fn fmt_exp(e: Exp) -> String {
    if e.is_integer() {
        format!("{}", e.to_integer())
    } else {
        format!("({}/{})", e.numer(), e.denom())
    }
}

impl fmt::Display for QSeries {
    /// Renders as `3*q^-1 + 1 - 2*q + O(q^10)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.terms() {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            let mono = match e.cmp(&Ratio::zero()) {
                Ordering::Equal => None,
                _ if e.is_one() => Some("q".to_string()),
                _ => Some(format!("q^{}", fmt_exp(e))),
            };
            match (mono, mag.is_one()) {
                (None, _) => write!(f, "{mag}")?,
                (Some(m), true) => write!(f, "{m}")?,
                (Some(m), false) => write!(f, "{mag}*{m}")?,
            }
        }
        if let Some(p) = self.prec_exp() {
            if first {
                write!(f, "O(q^{})", fmt_exp(p))?;
            } else {
                write!(f, " + O(q^{})", fmt_exp(p))?;
            }
        } else if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct QSeriesJson {
    scale: i64,
    offset: i64,
    coeffs: Vec<String>,
    prec: serde_json::Value,
}

impl Serialize for QSeries {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        QSeriesJson {
            scale: self.scale,
            offset: self.offset,
            coeffs: self.coeffs.iter().map(|c| c.to_string()).collect(),
            prec: match self.prec {
                Prec::Exact => serde_json::Value::String("exact".into()),
                Prec::Trunc(n) => serde_json::Value::from(n),
            },
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for QSeries {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = QSeriesJson::deserialize(d)?;
        if j.scale <= 0 {
            return Err(D::Error::custom("scale must be positive"));
        }
        let coeffs = j
            .coeffs
            .iter()
            .map(|c| c.parse::<BigInt>().map_err(|e| D::Error::custom(format!("bad coefficient {c:?}: {e}"))))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        let prec = match &j.prec {
            serde_json::Value::String(s) if s == "exact" => Prec::Exact,
            v => Prec::Trunc(v.as_i64().ok_or_else(|| D::Error::custom("prec must be an integer or \"exact\""))?),
        };
        Ok(QSeries::from_coeffs(j.scale, j.offset, coeffs, prec))
    }
}

/// Lower bound `k -> bound(k)` on the valuation of the k-th summand of an
/// infinite sum, claimed nondecreasing from `k0` on.
pub struct DegreeBound<'a> {
    pub bound: Box<dyn Fn(i64) -> i64 + 'a>,
    pub k0: i64,
}

impl<'a> DegreeBound<'a> {
    pub fn new(k0: i64, bound: impl Fn(i64) -> i64 + 'a) -> Self {
        DegreeBound { bound: Box::new(bound), k0 }
    }
}

/// Sum `terms(k)` for `k = 0, 1, ...` to `O(q^n)`.
///
/// Stops at the first `k >= k0` whose bound reaches `n`; every included term
/// is checked against its bound and the bound against monotonicity.
pub fn sum_bounded(
    mut terms: impl FnMut(i64) -> Result<QSeries>,
    bound: &DegreeBound<'_>,
    n: i64,
) -> Result<QSeries> {
    let mut acc = QSeries::o(n);
    let mut prev: Option<i64> = None;
    let mut k = 0i64;
    loop {
        let b = (bound.bound)(k);
        if k >= bound.k0 {
            if let Some(p) = prev {
                if b < p {
                    return Err(Error::BoundNotMonotone(k));
                }
            }
            prev = Some(b);
            if b >= n {
                break;
            }
        }
        let t = terms(k)?;
        if !t.delta().at_least(Ratio::from_integer(b)) {
            return Err(Error::DegreeBoundViolated(k));
        }
        if b < n {
            acc += &t;
        }
        k += 1;
    }
    Ok(acc)
}
