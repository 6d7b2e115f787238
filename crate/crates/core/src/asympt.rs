//! Numerics at roots of unity: evaluation of `f_n`, periodicity, volume
//! growth, Richardson extraction of `Φ^F`, and the exact quotient `Φ^J / √Φ^F`.
//!
//! Real arithmetic runs on `astro_float::BigFloat` with 32 guard bits on top
//! of the requested precision.

use std::cell::RefCell;

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::knot::{ClosedForm, Knot};
use crate::series::QSeries;

const RM: RoundingMode = RoundingMode::ToEven;
/// Guard bits added to every working precision.
pub const GUARD: usize = 32;
/// Default precision in bits.
pub const DEFAULT_BITS: usize = 256;

/// A precision context: working bits and a constants cache.
pub struct Hp {
    bits: usize,
    cc: RefCell<Consts>,
}

impl Hp {
    pub fn new(bits: usize) -> Self {
        Hp { bits: bits + GUARD, cc: RefCell::new(Consts::new().expect("constants cache")) }
    }

    /// Working precision including guard bits.
    pub fn bits(&self) -> usize {
        self.bits
    }

    pub fn int(&self, i: i64) -> BigFloat {
        BigFloat::from_i64(i, self.bits)
    }

    pub fn f64(&self, f: f64) -> BigFloat {
        BigFloat::from_f64(f, self.bits)
    }

    pub fn big(&self, i: &BigInt) -> BigFloat {
        BigFloat::parse(&i.to_string(), Radix::Dec, self.bits, RM, &mut self.cc.borrow_mut())
    }

    pub fn rat(&self, r: &BigRational) -> BigFloat {
        self.div(&self.big(r.numer()), &self.big(r.denom()))
    }

    pub fn pi(&self) -> BigFloat {
        self.cc.borrow_mut().pi(self.bits, RM)
    }

    pub fn add(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.add(b, self.bits, RM)
    }

    pub fn sub(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.sub(b, self.bits, RM)
    }

    pub fn mul(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.mul(b, self.bits, RM)
    }

    pub fn div(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.div(b, self.bits, RM)
    }

    pub fn sin(&self, a: &BigFloat) -> BigFloat {
        a.sin(self.bits, RM, &mut self.cc.borrow_mut())
    }

    pub fn cos(&self, a: &BigFloat) -> BigFloat {
        a.cos(self.bits, RM, &mut self.cc.borrow_mut())
    }

    pub fn ln(&self, a: &BigFloat) -> BigFloat {
        a.ln(self.bits, RM, &mut self.cc.borrow_mut())
    }

    pub fn exp(&self, a: &BigFloat) -> BigFloat {
        a.exp(self.bits, RM, &mut self.cc.borrow_mut())
    }

    pub fn sqrt(&self, a: &BigFloat) -> BigFloat {
        a.sqrt(self.bits, RM)
    }

    /// `e^{2πi·num/den}`.
    pub fn root_of_unity(&self, num: i64, den: i64) -> ComplexHp {
        let t = self.div(&self.mul(&self.mul(&self.int(2), &self.pi()), &self.int(num)), &self.int(den));
        ComplexHp { re: self.cos(&t), im: self.sin(&t) }
    }
}

/// Nearest `f64`.
pub fn to_f64(x: &BigFloat) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    x.to_string().parse().unwrap_or(f64::NAN)
}

/// A complex number with `BigFloat` parts.
#[derive(Clone, Debug)]
pub struct ComplexHp {
    pub re: BigFloat,
    pub im: BigFloat,
}

impl ComplexHp {
    pub fn zero(hp: &Hp) -> Self {
        ComplexHp { re: hp.int(0), im: hp.int(0) }
    }

    pub fn real(re: BigFloat, hp: &Hp) -> Self {
        ComplexHp { re, im: hp.int(0) }
    }

    pub fn add(&self, o: &Self, hp: &Hp) -> Self {
        ComplexHp { re: hp.add(&self.re, &o.re), im: hp.add(&self.im, &o.im) }
    }

    pub fn sub(&self, o: &Self, hp: &Hp) -> Self {
        ComplexHp { re: hp.sub(&self.re, &o.re), im: hp.sub(&self.im, &o.im) }
    }

    pub fn mul(&self, o: &Self, hp: &Hp) -> Self {
        ComplexHp {
            re: hp.sub(&hp.mul(&self.re, &o.re), &hp.mul(&self.im, &o.im)),
            im: hp.add(&hp.mul(&self.re, &o.im), &hp.mul(&self.im, &o.re)),
        }
    }

    pub fn div(&self, o: &Self, hp: &Hp) -> Self {
        let d = hp.add(&hp.mul(&o.re, &o.re), &hp.mul(&o.im, &o.im));
        let re = hp.add(&hp.mul(&self.re, &o.re), &hp.mul(&self.im, &o.im));
        let im = hp.sub(&hp.mul(&self.im, &o.re), &hp.mul(&self.re, &o.im));
        ComplexHp { re: hp.div(&re, &d), im: hp.div(&im, &d) }
    }

    pub fn scale(&self, c: &BigFloat, hp: &Hp) -> Self {
        ComplexHp { re: hp.mul(&self.re, c), im: hp.mul(&self.im, c) }
    }

    pub fn modulus(&self, hp: &Hp) -> BigFloat {
        hp.sqrt(&hp.add(&hp.mul(&self.re, &self.re), &hp.mul(&self.im, &self.im)))
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (to_f64(&self.re), to_f64(&self.im))
    }
}

/// The exact Laurent polynomial `f_n` of a knot with exact coefficients.
pub fn f_poly_exact(knot: &Knot, n: usize) -> Result<QSeries> {
    if !knot.exact {
        return Err(Error::InvalidArgument("exact f_n needs a knot with exact coefficients".into()));
    }
    knot.f_coeff(n, None)
}

/// Bits needed so that rounding in a sum of these coefficients stays below `2^{-64}`.
pub fn bits_needed(poly: &QSeries) -> usize {
    let sum: BigInt = poly.coeffs().iter().map(|c| c.abs()).sum();
    64 + sum.bits() as usize
}

/// `poly(e^{2πi/N})`, where `q^{m/s}` means `e^{2πi m/(sN)}`.
pub fn eval_root_of_unity(poly: &QSeries, order: i64, bits: usize) -> Result<ComplexHp> {
    if !poly.is_exact() {
        return Err(Error::InvalidArgument("evaluation needs an exact polynomial".into()));
    }
    if order < 1 {
        return Err(Error::InvalidArgument("order must be positive".into()));
    }
    let need = bits_needed(poly);
    if bits < need {
        return Err(Error::InsufficientBits { suggested: need });
    }
    let hp = Hp::new(bits);
    let m = poly.scale() * order;
    let mut groups = vec![BigInt::zero(); m as usize];
    for (i, c) in poly.coeffs().iter().enumerate() {
        let e = poly.offset() + i as i64;
        groups[e.rem_euclid(m) as usize] += c;
    }
    let mut acc = ComplexHp::zero(&hp);
    for (r, c) in groups.iter().enumerate() {
        if !c.is_zero() {
            acc = acc.add(&hp.root_of_unity(r as i64, m).scale(&hp.big(c), &hp), &hp);
        }
    }
    Ok(acc)
}

fn binom_int(n: i64, k: i64) -> BigInt {
    if k < 0 || k > n {
        return BigInt::zero();
    }
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

/// `f_m(e^{2πi/N})` for the figure-eight knot, `f_m = Σ_i q^{-i(m-i)} G(m+i, 2i)`,
/// with each Gaussian evaluated through the q-Lucas theorem.
pub fn figure_eight_at(m: i64, order: i64, hp: &Hp) -> ComplexHp {
    let n = order;
    let pow: Vec<ComplexHp> = (0..n).map(|k| hp.root_of_unity(k, n)).collect();
    let one = ComplexHp::real(hp.int(1), hp);
    let w: Vec<ComplexHp> = pow.iter().map(|z| one.sub(z, hp)).collect();
    let mut acc = ComplexHp::zero(hp);
    for i in 0..=m {
        let (a, b) = (m + i, 2 * i);
        let (a0, b0) = (a % n, b % n);
        if b0 > a0 {
            continue;
        }
        let lucas = binom_int(a / n, b / n);
        if lucas.is_zero() {
            continue;
        }
        let mut g = one.clone();
        for t in 1..=b0 {
            g = g.mul(&w[(a0 - b0 + t) as usize], hp).div(&w[t as usize], hp);
        }
        let e = (-i * (m - i)).rem_euclid(n) as usize;
        acc = acc.add(&g.mul(&pow[e], hp).scale(&hp.big(&lucas), hp), hp);
    }
    acc
}

/// `f_n(e^{πi/n})` for the figure-eight knot: all terms are positive reals,
/// and consecutive terms of `Σ_i [n+i choose 2i]` differ by
/// `[n+i+1][n-i] / ([2i+1][2i+2])` with `[m] = sin(mπ/2n)/sin(π/2n)`.
pub fn figure_eight_half(n: i64, hp: &Hp) -> BigFloat {
    if n == 0 {
        return hp.int(1);
    }
    let th = hp.div(&hp.pi(), &hp.int(2 * n));
    let s: Vec<BigFloat> = (0..=2 * n).map(|k| hp.sin(&hp.mul(&th, &hp.int(k)))).collect();
    let mut t = hp.int(1);
    let mut acc = hp.int(1);
    for i in 0..n - 1 {
        let num = hp.mul(&s[(n + i + 1) as usize], &s[(n - i) as usize]);
        let den = hp.mul(&s[(2 * i + 1) as usize], &s[(2 * i + 2) as usize]);
        t = hp.div(&hp.mul(&t, &num), &den);
        acc = hp.add(&acc, &t);
    }
    hp.add(&acc, &hp.int(1))
}

/// Bits for which coefficient sums of figure-eight `f_n` stay resolved.
fn figure_eight_bits(n: i64, bits: usize) -> usize {
    bits.max(64 + (1.39 * n as f64).ceil() as usize + 8)
}

fn is_figure_eight(knot: &Knot) -> bool {
    knot.closed_form == Some(ClosedForm::FigureEight)
}

/// `f_m(e^{2πi/N})` for any knot with exact coefficients, at `bits` or more.
pub fn f_at_root(knot: &Knot, m: i64, order: i64, bits: usize) -> Result<ComplexHp> {
    if is_figure_eight(knot) {
        let hp = Hp::new(figure_eight_bits(m, bits));
        return Ok(figure_eight_at(m, order, &hp));
    }
    let poly = f_poly_exact(knot, m as usize)?;
    eval_root_of_unity(&poly, order, bits.max(bits_needed(&poly)))
}

/// Outcome of the periodicity search on `f_{n-1}(ζ_n)`.
#[derive(Clone, Debug, Serialize)]
pub struct PeriodReport {
    /// Index shift: the sequence is `f_{n+shift}(ζ_n)`.
    pub shift: i64,
    pub period: usize,
    /// Real parts over one period starting at `n = 1`, in order.
    pub values: Vec<f64>,
    /// The same values sorted.
    pub multiset: Vec<f64>,
    /// Largest imaginary part seen.
    pub max_imag: f64,
}

/// Values `f_{n-1}(ζ_n)` for `n = 1..=n_max`.
pub fn period_sequence(knot: &Knot, n_max: usize, bits: usize) -> Result<Vec<(f64, f64)>> {
    use rayon::prelude::*;
    (1..=n_max as i64)
        .into_par_iter()
        .map(|n| f_at_root(knot, n - 1, n, bits).map(|z| z.to_f64()))
        .collect()
}

/// Smallest period of `f_{n-1}(ζ_n)` on `n = 1..=n_max`, up to `tol`.
pub fn periodicity_check(knot: &Knot, n_max: usize, bits: usize, tol: f64) -> Result<PeriodReport> {
    let v = period_sequence(knot, n_max, bits)?;
    let close = |a: (f64, f64), b: (f64, f64)| (a.0 - b.0).abs() <= tol && (a.1 - b.1).abs() <= tol;
    for p in 1..=n_max / 3 {
        if (0..n_max - p).all(|i| close(v[i], v[i + p])) {
            let values: Vec<f64> = v[..p].iter().map(|z| z.0).collect();
            let mut multiset = values.clone();
            multiset.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let max_imag = v.iter().map(|z| z.1.abs()).fold(0.0, f64::max);
            return Ok(PeriodReport { shift: -1, period: p, values, multiset, max_imag });
        }
    }
    Err(Error::Aperiodic(n_max))
}

/// Neville extrapolation to `x = 0` of the last `order + 1` points `(x, y)`.
fn neville<T: Clone>(
    xs: &[T],
    ys: &[T],
    sub: impl Fn(&T, &T) -> T,
    mul: impl Fn(&T, &T) -> T,
    div: impl Fn(&T, &T) -> T,
) -> T {
    let mut p: Vec<T> = ys.to_vec();
    let k = xs.len();
    for m in 1..k {
        for i in 0..k - m {
            let num = sub(&mul(&xs[i], &p[i + 1]), &mul(&xs[i + m], &p[i]));
            p[i] = div(&num, &sub(&xs[i], &xs[i + m]));
        }
    }
    p[0].clone()
}

/// Richardson limit of `seq = [(n, s_n)]`, assuming `s_n` expands in `1/n`,
/// from the last `order + 1` entries.
pub fn richardson(seq: &[(f64, f64)], order: usize) -> Result<f64> {
    if seq.len() < order + 1 {
        return Err(Error::NotEnoughPoints { need: order + 1, have: seq.len() });
    }
    let tail = &seq[seq.len() - order - 1..];
    let xs: Vec<f64> = tail.iter().map(|p| 1.0 / p.0).collect();
    let ys: Vec<f64> = tail.iter().map(|p| p.1).collect();
    Ok(neville(&xs, &ys, |a, b| a - b, |a, b| a * b, |a, b| a / b))
}

/// `richardson` in `BigFloat` arithmetic.
pub fn richardson_hp(seq: &[(i64, BigFloat)], order: usize, hp: &Hp) -> Result<BigFloat> {
    if seq.len() < order + 1 {
        return Err(Error::NotEnoughPoints { need: order + 1, have: seq.len() });
    }
    let tail = &seq[seq.len() - order - 1..];
    let xs: Vec<BigFloat> = tail.iter().map(|p| hp.div(&hp.int(1), &hp.int(p.0))).collect();
    let ys: Vec<BigFloat> = tail.iter().map(|p| p.1.clone()).collect();
    Ok(neville(&xs, &ys, |a, b| hp.sub(a, b), |a, b| hp.mul(a, b), |a, b| hp.div(a, b)))
}

/// Bernoulli numbers `B_0..B_m` (with `B_1 = -1/2`).
pub fn bernoulli(m: usize) -> Vec<BigRational> {
    let mut b: Vec<BigRational> = Vec::with_capacity(m + 1);
    for n in 0..=m {
        if n == 0 {
            b.push(BigRational::one());
            continue;
        }
        let mut s = BigRational::zero();
        for (k, bk) in b.iter().enumerate() {
            s += BigRational::from_integer(binom_int(n as i64 + 1, k as i64)) * bk;
        }
        b.push(-s / BigRational::from_integer(BigInt::from(n + 1)));
    }
    b
}

/// Clausen function `Cl_2(θ)` for `0 < θ < 2π`, through
/// `θ - θ log θ + Σ_k |B_{2k}| θ^{2k+1} / (2k (2k+1)!)`.
pub fn clausen2(theta: &BigFloat, hp: &Hp) -> BigFloat {
    let two_pi = hp.mul(&hp.int(2), &hp.pi());
    let ratio = to_f64(&hp.div(theta, &two_pi)).abs().max(1e-300);
    let terms = (hp.bits() as f64 / (-ratio.log2() * 2.0)).ceil() as usize + 4;
    let b = bernoulli(2 * terms);
    let mut s = hp.sub(theta, &hp.mul(theta, &hp.ln(theta)));
    let th2 = hp.mul(theta, theta);
    let mut pw = theta.clone();
    let mut fact = BigInt::one();
    for k in 1..=terms {
        pw = hp.mul(&pw, &th2);
        let n = 2 * k as i64;
        fact *= BigInt::from(n) * BigInt::from(n + 1);
        let c = b[2 * k].abs() / BigRational::from_integer(fact.clone() * BigInt::from(n));
        s = hp.add(&s, &hp.mul(&hp.rat(&c), &pw));
    }
    s
}

/// Hyperbolic volume of the figure-eight complement, `2 Cl_2(π/3)`.
pub fn volume_41(hp: &Hp) -> BigFloat {
    let th = hp.div(&hp.pi(), &hp.int(3));
    hp.mul(&hp.int(2), &clausen2(&th, hp))
}

/// Outcome of the growth-rate extrapolation.
#[derive(Clone, Debug, Serialize)]
pub struct GrowthReport {
    /// `(n, (π/n) log |f_n(ζ_{2n})|)`.
    pub sequence: Vec<(f64, f64)>,
    pub estimate: f64,
    /// Raised when successive extrapolations fail to settle.
    pub unstable: bool,
}

/// `|f_n(e^{πi/n})|` for each `n`, in parallel.
fn half_values(knot: &Knot, ns: &[i64], bits: usize) -> Result<Vec<(i64, BigFloat, usize)>> {
    use rayon::prelude::*;
    ns.par_iter()
        .map(|&n| {
            let b = figure_eight_bits(n, bits);
            if is_figure_eight(knot) {
                let hp = Hp::new(b);
                Ok((n, figure_eight_half(n, &hp), b))
            } else {
                let z = f_at_root(knot, n, 2 * n, b)?;
                let hp = Hp::new(b);
                Ok((n, z.modulus(&hp), b))
            }
        })
        .collect()
}

/// Richardson-accelerated limit of `(π/n) log |f_n(ζ_{2n})|` over `ns`.
pub fn growth_rate(knot: &Knot, ns: &[i64], bits: usize) -> Result<GrowthReport> {
    if ns.len() < 2 || ns.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("n list must be increasing with at least two entries".into()));
    }
    let vals = half_values(knot, ns, bits)?;
    let hp = Hp::new(bits);
    let mut seq = Vec::with_capacity(vals.len());
    for (n, v, _) in &vals {
        if v.is_zero() {
            return Err(Error::InvalidArgument(format!("f_{n} vanishes at the root of unity")));
        }
        let l = hp.div(&hp.mul(&hp.pi(), &hp.ln(&v.abs())), &hp.int(*n));
        seq.push((*n as f64, to_f64(&l)));
    }
    let order = (seq.len() - 1).min(6);
    let estimate = richardson(&seq, order)?;
    let lower = richardson(&seq[..seq.len() - 1], order.min(seq.len() - 2))?;
    let unstable = (estimate - lower).abs() > 1e-2;
    Ok(GrowthReport { sequence: seq, estimate, unstable })
}

/// `Φ^F` coefficients `c_0..c_depth` in `Σ c_k u^k / k!`, `u = π / (36√3 n)`.
#[derive(Clone, Debug, Serialize)]
pub struct PhiEstimate {
    pub coeffs: Vec<f64>,
    /// `g_n = f_n(ζ_{2n}) e^{-n vol/π} √3` at the first sample.
    pub first_sample: (i64, f64),
}

/// Normalized samples `g_n = f_n(ζ_{2n}) e^{-n vol/π} √3` at `bits`.
pub fn phi_samples(knot: &Knot, ns: &[i64], bits: usize) -> Result<Vec<(i64, BigFloat)>> {
    let vals = half_values(knot, ns, bits)?;
    let hp = Hp::new(bits);
    let vol = volume_41(&hp);
    let s3 = hp.sqrt(&hp.int(3));
    Ok(vals
        .into_iter()
        .map(|(n, v, _)| {
            let e = hp.exp(&hp.div(&hp.mul(&hp.int(-n), &vol), &hp.pi()));
            (n, hp.mul(&hp.mul(&v, &e), &s3))
        })
        .collect())
}

/// Sequential Richardson extraction of `c_0..c_depth` from `g_n`.
pub fn extract_phi(knot: &Knot, depth: usize, ns: &[i64], bits: usize) -> Result<PhiEstimate> {
    if ns.len() < depth + 2 {
        return Err(Error::NotEnoughPoints { need: depth + 2, have: ns.len() });
    }
    let hp = Hp::new(bits);
    let mut cur = phi_samples(knot, ns, bits)?;
    let first_sample = (cur[0].0, to_f64(&cur[0].1));
    let denom = hp.mul(&hp.int(36), &hp.sqrt(&hp.int(3)));
    let u = |n: i64| hp.div(&hp.pi(), &hp.mul(&denom, &hp.int(n)));
    let mut coeffs = Vec::with_capacity(depth + 1);
    let mut fact = hp.int(1);
    for k in 0..=depth {
        let a = richardson_hp(&cur, cur.len() - 1, &hp)?;
        if k > 0 {
            fact = hp.mul(&fact, &hp.int(k as i64));
        }
        coeffs.push(to_f64(&hp.mul(&a, &fact)));
        cur = cur.into_iter().map(|(n, g)| (n, hp.div(&hp.sub(&g, &a), &u(n)))).collect();
    }
    Ok(PhiEstimate { coeffs, first_sample })
}

/// A formal series `prefactor · Σ_k c_k u^k / k!` with exact rational `c_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerturbSeries {
    /// `c_0, c_1, …` in the factorial convention.
    pub c: Vec<BigRational>,
    pub prefactor: String,
}

fn fact(k: usize) -> BigInt {
    (1..=k).fold(BigInt::one(), |a, i| a * BigInt::from(i))
}

impl PerturbSeries {
    pub fn new(c: Vec<BigRational>, prefactor: &str) -> Self {
        PerturbSeries { c, prefactor: prefactor.to_string() }
    }

    /// From `(numerator, denominator)` pairs.
    pub fn from_pairs(c: &[(i64, i64)], prefactor: &str) -> Self {
        Self::new(c.iter().map(|&(n, d)| BigRational::new(n.into(), d.into())).collect(), prefactor)
    }

    pub fn depth(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    /// Ordinary coefficients `c_k / k!`.
    fn plain(&self) -> Vec<BigRational> {
        self.c.iter().enumerate().map(|(k, c)| c / BigRational::from_integer(fact(k))).collect()
    }

    fn from_plain(a: Vec<BigRational>, prefactor: String) -> Self {
        let c = a.into_iter().enumerate().map(|(k, x)| x * BigRational::from_integer(fact(k))).collect();
        PerturbSeries { c, prefactor }
    }

    fn check_unit(&self) -> Result<()> {
        if self.c.first() != Some(&BigRational::one()) {
            return Err(Error::LeadingNotOne);
        }
        Ok(())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let (a, b) = (self.plain(), o.plain());
        let d = a.len().min(b.len());
        let r = (0..d).map(|k| (0..=k).map(|i| &a[i] * &b[k - i]).sum()).collect();
        Self::from_plain(r, format!("{}·{}", self.prefactor, o.prefactor))
    }

    pub fn inv(&self) -> Result<Self> {
        self.check_unit()?;
        let a = self.plain();
        let mut r: Vec<BigRational> = vec![BigRational::one()];
        for k in 1..a.len() {
            let s: BigRational = (1..=k).map(|i| &a[i] * &r[k - i]).sum();
            r.push(-s);
        }
        Ok(Self::from_plain(r, format!("1/({})", self.prefactor)))
    }

    pub fn sqrt(&self) -> Result<Self> {
        self.check_unit()?;
        let a = self.plain();
        let mut r: Vec<BigRational> = vec![BigRational::one()];
        let two = BigRational::from_integer(2.into());
        for k in 1..a.len() {
            let s: BigRational = (1..k).map(|i| &r[i] * &r[k - i]).sum();
            r.push((&a[k] - s) / &two);
        }
        Ok(Self::from_plain(r, format!("√({})", self.prefactor)))
    }

    /// `1 / √self`.
    pub fn sqrt_inv(&self) -> Result<Self> {
        self.sqrt()?.inv()
    }

    pub fn truncate(&self, depth: usize) -> Self {
        PerturbSeries { c: self.c.iter().take(depth + 1).cloned().collect(), prefactor: self.prefactor.clone() }
    }
}

/// Published coefficients of `Φ^J`, prefactor `3^{-1/4}`.
pub fn phi_j() -> PerturbSeries {
    PerturbSeries::from_pairs(&[(1, 1), (11, 1), (697, 1), (724351, 5)], "3^(-1/4)")
}

/// Published coefficients of `Φ^F`, prefactor `3^{-1/2}`.
pub fn phi_f() -> PerturbSeries {
    let c = [
        ("1", "1"),
        ("4", "1"),
        ("304", "1"),
        ("290912", "5"),
        ("107155712", "5"),
        ("91298182144", "7"),
        ("416634955237376", "35"),
        ("76199853915803648", "5"),
    ];
    PerturbSeries::new(
        c.iter().map(|(n, d)| BigRational::new(n.parse().unwrap(), d.parse().unwrap())).collect(),
        "3^(-1/2)",
    )
}

/// `Φ^J / √Φ^F` to `depth` (at most 3), required to have integer coefficients.
pub fn phi_quotient_check(depth: usize) -> Result<Vec<BigInt>> {
    let j = phi_j();
    if depth > j.depth() {
        return Err(Error::InvalidArgument(format!("depth at most {}", j.depth())));
    }
    let q = j.truncate(depth).mul(&phi_f().truncate(depth).sqrt_inv()?);
    q.c.iter()
        .enumerate()
        .map(|(k, c)| if c.is_integer() { Ok(c.to_integer()) } else { Err(Error::NonInteger(k)) })
        .collect()
}

/// CSV rows `n,re,im,modulus,normalized` for `f_n(ζ_{2n})`.
pub fn csv_rows(knot: &Knot, ns: &[i64], bits: usize) -> Result<String> {
    let hp = Hp::new(bits);
    let vol = volume_41(&hp);
    let s3 = hp.sqrt(&hp.int(3));
    let mut out = String::from("n,re,im,modulus,normalized\n");
    for &n in ns {
        let z = f_at_root(knot, n, 2 * n, bits)?;
        let m = z.modulus(&hp);
        let e = hp.exp(&hp.div(&hp.mul(&hp.int(-n), &vol), &hp.pi()));
        let norm = hp.mul(&hp.mul(&m, &e), &s3);
        let (re, im) = z.to_f64();
        out.push_str(&format!("{n},{re:e},{im:e},{:e},{:.12}\n", to_f64(&m), to_f64(&norm)));
    }
    Ok(out)
}

/// The value `(3 - √5)/2` in the figure-eight period.
pub fn golden_value() -> f64 {
    (3.0 - 5f64.sqrt()) / 2.0
}
