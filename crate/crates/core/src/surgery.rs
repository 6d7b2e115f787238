//! The Ẑ invariant of integral Dehn surgeries, by three routes, and
//! Park's polynomials by two definitions.
//!
//! * `fk`: `2Ẑ ≐ Σ_k m_k q^{-k²/p} (f_{k-1} - f_k)` with `m_k = [k ≡ a] + [-k ≡ a]`.
//! * `residues`: `Ẑ ≐ Σ_{j≥1} r_j (1 - q^{-j}) Σ_{n<j} q^{j(np+a) - (np+a)²/p}`.
//! * `ih`: the residue route with `r_j` expanded into inverted Habiro coefficients.
//!
//! None of the sums comes with a usable a-priori bound, so convergence is
//! detected from the valuations of the summands: the sum stops once a window
//! of consecutive summands lies above the target precision with a
//! nondecreasing trend, and refuses when the valuations keep falling.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::knot::Knot;
use crate::qcomb::{binom2, gaussian, qbinom, qfactor_series};
use crate::residue::residue_j;
use crate::series::{Delta, Exp, QSeries};
use crate::transform::lbc_weight;

/// Summands per convergence window.
pub const TREND_WINDOW: usize = 6;
/// Hard limit on the summation index.
pub const MAX_INDEX: i64 = 400;

/// Which formula computes Ẑ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Fk,
    Residues,
    Ih,
}

impl std::str::FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fk" => Ok(Method::Fk),
            "residues" => Ok(Method::Residues),
            "ih" => Ok(Method::Ih),
            _ => Err(Error::InvalidArgument(format!("unknown method `{s}`"))),
        }
    }
}

/// Surgery coefficient, spin-c label and output precision.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SurgeryParams {
    pub p: i64,
    pub a: i64,
    /// Precision of the normalized series.
    pub prec: i64,
    pub method: Method,
}

impl SurgeryParams {
    pub fn new(p: i64, a: i64, prec: i64, method: Method) -> Result<Self> {
        if p == 0 {
            return Err(Error::InvalidArgument("p must be nonzero".into()));
        }
        if a < 0 || a >= p.abs() {
            return Err(Error::InvalidArgument(format!("a must lie in [0, {})", p.abs())));
        }
        if prec < 1 {
            return Err(Error::InvalidArgument("prec must be positive".into()));
        }
        Ok(SurgeryParams { p, a, prec, method })
    }
}

/// `Ẑ ≐ 2^{two_power} · (±1) · q^delta · series`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZhatResult {
    pub params: SurgeryParams,
    /// Rational exponent factored out.
    #[serde(serialize_with = "exp_string")]
    pub delta: Exp,
    /// Integer-exponent series with its first coefficient at `q^0`, positive.
    pub series: QSeries,
    /// True when the raw series was negated to make the leading coefficient positive.
    pub sign_flipped: bool,
    /// Power of two in front (`-1` when the halving of the fk route was not exact).
    pub two_power: i32,
}

impl ZhatResult {
    /// Equality up to `≐`, comparing the normalized series to `O(q^n)`.
    pub fn agrees_with(&self, other: &ZhatResult, n: i64) -> bool {
        let t = self.two_power.min(other.two_power);
        let up = |z: &ZhatResult| z.series.scale_by(&(BigInt::one() << (z.two_power - t) as usize));
        up(self).agrees_to(&up(other), n)
    }
}

fn exp_string<S: serde::Serializer>(e: &Exp, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&e.to_string())
}

/// `L(x^u q^w) = q^{-u²/p + w}` if `u ≡ a (mod p)`, else nothing.
pub fn laplace_monomial(u: i64, w: Exp, p: i64, a: i64) -> Option<Exp> {
    ((u - a).rem_euclid(p.abs()) == 0).then(|| Ratio::new(-u * u, p) + w)
}

fn exp_floor(e: Exp) -> i64 {
    e.floor().to_integer()
}

/// Valuation of a summand: `None` for a vanishing term.
fn valuation(s: &QSeries) -> Option<Exp> {
    match s.delta() {
        Delta::Exactly(e) | Delta::AtLeast(e) => Some(e),
        Delta::Infinite => None,
    }
}

/// Empirical convergence test over the valuations of consecutive summands.
#[derive(Default)]
struct Trend {
    degs: Vec<Option<Exp>>,
}

enum Verdict {
    Continue,
    Converged,
    Diverged,
}

impl Trend {
    fn push(&mut self, d: Option<Exp>, n: Exp) -> Verdict {
        self.degs.push(d);
        let w = TREND_WINDOW;
        let len = self.degs.len();
        let val = |x: &Option<Exp>| x.unwrap_or(n + Ratio::from_integer(1_000_000));
        let block_min = |b: usize| self.degs[len - (b + 1) * w..len - b * w].iter().map(val).min().unwrap();
        if len >= w {
            let last = &self.degs[len - w..];
            let above = last.iter().all(|x| val(x) >= n);
            let trend_ok = len < 2 * w || block_min(0) >= block_min(1);
            if above && trend_ok {
                return Verdict::Converged;
            }
        }
        if len >= 3 * w {
            let (b0, b1, b2) = (block_min(0), block_min(1), block_min(2));
            let below = self.degs[len - w..].iter().all(|x| val(x) < n);
            if below && b0 < b1 && b1 < b2 {
                return Verdict::Diverged;
            }
        }
        Verdict::Continue
    }
}

fn divergent(route: &str, p: i64, a: i64) -> Error {
    Error::Divergent(format!("{route} route, p = {p}, a = {a}"))
}

/// Multiplicity of `x^k + x^{-k}` under the Laplace operator.
fn class_mult(k: i64, p: i64, a: i64) -> i64 {
    let m = p.abs();
    ((k - a).rem_euclid(m) == 0) as i64 + ((-k - a).rem_euclid(m) == 0) as i64
}

/// Raw `Σ_k m_k q^{-k²/p} (f_{k-1} - f_k)` (twice Ẑ) to `O(q^n)`.
fn fk_raw(knot: &Knot, p: i64, a: i64, n: Exp) -> Result<QSeries> {
    let nf = exp_floor(n) + 1;
    let mut f: Vec<QSeries> = Vec::new();
    let mut acc = QSeries::zero();
    let mut trend = Trend::default();
    for k in 0..=MAX_INDEX {
        let m = class_mult(k, p, a);
        if m == 0 {
            continue;
        }
        if f.len() <= k as usize {
            let top = (2 * k as usize).max(16);
            let fp = nf + (top * top) as i64 / p.abs() + 1;
            f = knot.f_prefix(top, Some(fp))?;
        }
        let prev = if k == 0 { QSeries::zero() } else { f[k as usize - 1].clone() };
        let diff = &prev - &f[k as usize];
        let term = diff.shift(Ratio::new(-k * k, p)).scale_by_i64(m);
        let d = valuation(&term);
        if d.map_or(false, |d| d < n) {
            acc += &term.truncate_exp(n);
        }
        match trend.push(d, n) {
            Verdict::Converged => return Ok(acc.truncate_exp(n)),
            Verdict::Diverged => return Err(divergent("fk", p, a)),
            Verdict::Continue => {}
        }
    }
    Err(divergent("fk", p, a))
}

/// `Σ_n q^{j(np+a) - (np+a)²/p}` over the `j` values of `u = np + a` in
/// `[0, jp)` for `p > 0`, and in `[jp, 0)` for `p < 0`.
pub fn p_weight(j: i64, p: i64, a: i64) -> QSeries {
    let mut s = QSeries::zero();
    let range = if p > 0 { 0..j } else { 1..j + 1 };
    for n in range {
        let u = n * p + a;
        s += &QSeries::monomial_rat(1, Ratio::from_integer(j * u) - Ratio::new(u * u, p));
    }
    s
}

fn min_exp(s: &QSeries) -> Exp {
    s.delta().lower().expect("nonzero weight")
}

/// `(1 - q^{-j}) P_j`, and its valuation.
fn residue_weight(j: i64, p: i64, a: i64) -> (QSeries, Exp) {
    let w = p_weight(j, p, a);
    let s = &w - &w.shift_int(-j);
    let d = min_exp(&w) - Ratio::from_integer(j);
    (s, d)
}

/// Twice the boundary term that the residue sum misses, to `O(q^n)`:
/// `-m_0 f_0 + m_1 q^{-1/p} (f_0 - f_0^{res})` with
/// `f_0^{res} = -r_0 - Σ_{j≥1} (1 + q^{-j}) r_j`.
///
/// Rewriting `f_{k-1} - f_k` through residues treats `f_{-1}` as
/// `f_0^{res}` instead of `0`, and `f_0^{res}` itself can miss a residue at
/// infinity (as for the unknot).
pub fn boundary_term2(knot: &Knot, p: i64, a: i64, n: Exp) -> Result<QSeries> {
    let (m0, m1) = (class_mult(0, p, a), class_mult(1, p, a));
    if m0 == 0 && m1 == 0 {
        return Ok(QSeries::zero());
    }
    let c = knot.lbc_required()?;
    let cap = exp_floor(n) + 3;
    let f0 = knot.f_coeff(0, Some(cap))?.truncate(cap);
    let mut res = -residue_j(&knot.omega, 0, cap)?;
    let mut j = 1;
    while binom2(j + 1) + 1 + c - j < cap {
        let r = residue_j(&knot.omega, j, cap + j)?;
        res -= &(&r + &r.shift_int(-j)).truncate(cap);
        j += 1;
    }
    let e0 = &f0 - &res.truncate(cap);
    let b = &f0.scale_by_i64(-m0) + &e0.shift(Ratio::new(-1, p)).scale_by_i64(m1);
    Ok(b.truncate_exp(n))
}

/// Sign relating the residue sum to half the fk sum.
fn route_sign(p: i64) -> i64 {
    if p > 0 { 1 } else { -1 }
}

/// Raw residue route to `O(q^n)`.
fn residues_raw(knot: &Knot, p: i64, a: i64, n: Exp) -> Result<QSeries> {
    let c = knot.lbc_required()?;
    let mut acc = QSeries::zero();
    let mut trend = Trend::default();
    for j in 1..=MAX_INDEX {
        let (w, dw) = residue_weight(j, p, a);
        let certified = Ratio::from_integer(binom2(j + 1) + 1 + c) + dw;
        let d = if certified >= n {
            Some(certified)
        } else {
            let cap = exp_floor(n - dw) + 1;
            let r = residue_j(&knot.omega, j, cap)?;
            let t = w.mul_capped(&r, Some(n));
            if !r.is_zero() {
                acc += &t;
            }
            valuation(&r).map(|v| v + dw)
        };
        match trend.push(d, n) {
            Verdict::Converged => return Ok(acc.truncate_exp(n)),
            Verdict::Diverged => return Err(divergent("residue", p, a)),
            Verdict::Continue => {}
        }
    }
    Err(divergent("residue", p, a))
}

/// Raw inverted-Habiro route, summing `k = 1..` until convergence (or up to
/// `k_max` when given), to `O(q^n)`.
fn ih_raw(knot: &Knot, p: i64, a: i64, n: Exp, k_max: Option<i64>) -> Result<QSeries> {
    let c = knot.lbc_required()?;
    let mut acc = QSeries::zero();
    let mut trend = Trend::default();
    let weights: std::cell::RefCell<Vec<(QSeries, Exp)>> = Default::default();
    let weight = |j: i64| {
        let mut w = weights.borrow_mut();
        while w.len() < j as usize {
            let jj = w.len() as i64 + 1;
            w.push(residue_weight(jj, p, a));
        }
        w[j as usize - 1].clone()
    };
    let top = k_max.unwrap_or(MAX_INDEX);
    for k in 1..=top {
        let ek = binom2(k + 1);
        let lb = -lbc_weight(k) + c;
        let ak_cap = exp_floor(n) + 1 - ek + k * k;
        let ak = knot.a_coeff(k as usize, ak_cap)?;
        let da = valuation(&ak).unwrap_or(Ratio::from_integer(lb));
        let mut term = QSeries::zero();
        let mut lowest: Option<Exp> = None;
        if !ak.is_exact_zero() {
            let bounds: Vec<Exp> = (1..=k)
                .map(|j| Ratio::from_integer(ek + binom2(j + 1)) + da + weight(j).1)
                .collect();
            let need = |b: Exp| exp_floor(n - b) + 1;
            let cap0 = bounds.iter().map(|&b| need(b)).max().unwrap_or(0);
            if cap0 > 0 {
                let downs: Vec<i64> = (1..=k + 1).chain(1..k).collect();
                let mut d = qfactor_series(&[], &downs, cap0);
                for j in 1..=k {
                    if j > 1 {
                        d = d.mul_one_minus(k - j + 1).div_one_minus(k + j, cap0);
                    }
                    let b = bounds[j as usize - 1];
                    if b >= n {
                        continue;
                    }
                    let (w, _) = weight(j);
                    let e = ek + binom2(j + 1);
                    let piece = w.shift_int(e).mul_capped(&d.truncate(need(b)), None).mul_capped(&ak, Some(n));
                    let piece = if (k + j) % 2 == 0 { piece } else { -piece };
                    term += &piece;
                }
            }
            lowest = valuation(&term.truncate_exp(n));
            if lowest.is_none() {
                lowest = bounds.iter().copied().min();
            }
        }
        acc += &term.truncate_exp(n);
        if k_max.is_none() {
            match trend.push(lowest, n) {
                Verdict::Converged => return Ok(acc.truncate_exp(n)),
                Verdict::Diverged => return Err(divergent("inverted Habiro", p, a)),
                Verdict::Continue => {}
            }
        }
    }
    if k_max.is_some() {
        return Ok(acc.truncate_exp(n));
    }
    Err(divergent("inverted Habiro", p, a))
}

/// Normalize a raw series: factor out `q^Δ`, make the leading coefficient positive.
fn normalize(raw: &QSeries, params: SurgeryParams, two_power: i32) -> Result<ZhatResult> {
    let (delta, lead) = match raw.leading() {
        Some((e, c)) => (e, c.is_negative()),
        None => return Err(Error::Divergent("result vanishes to the computed precision".into())),
    };
    let s = raw.shift(-delta).truncate(params.prec);
    if s.scale() != 1 {
        return Err(Error::FractionalExponent);
    }
    let s = if lead { -s } else { s };
    Ok(ZhatResult { params, delta, series: s, sign_flipped: lead, two_power })
}

/// Two passes: locate `Δ`, then recompute to `O(q^{Δ + prec})`.
fn two_pass(params: SurgeryParams, raw: impl Fn(Exp) -> Result<QSeries>) -> Result<(QSeries, Exp)> {
    let mut n = Ratio::from_integer(params.prec);
    for _ in 0..6 {
        let first = raw(n)?;
        if let Some((delta, _)) = first.leading() {
            let target = delta + Ratio::from_integer(params.prec);
            let full = if target <= n { first.truncate_exp(target) } else { raw(target)? };
            return Ok((full, delta));
        }
        n += Ratio::from_integer(params.prec.max(10));
    }
    Err(Error::Divergent("no nonzero coefficient found".into()))
}

/// Halve a doubled sum when every coefficient is even, then normalize.
fn finish_doubled(raw2: QSeries, params: SurgeryParams) -> Result<ZhatResult> {
    let two = BigInt::from(2);
    if raw2.coeffs().iter().all(|c| c.is_even()) {
        normalize(&raw2.div_exact_int(&two)?, params, 0)
    } else {
        normalize(&raw2, params, -1)
    }
}

/// A residue-type sum, doubled and completed by the boundary term.
fn completed(knot: &Knot, params: SurgeryParams, n: Exp, sum: QSeries) -> Result<QSeries> {
    let (p, a) = (params.p, params.a);
    Ok(&sum.scale_by_i64(2 * route_sign(p)) + &boundary_term2(knot, p, a, n)?)
}

/// Ẑ through the GM coefficients.
pub fn zhat_via_fk(knot: &Knot, params: SurgeryParams) -> Result<ZhatResult> {
    let (raw, _) = two_pass(params, |n| fk_raw(knot, params.p, params.a, n))?;
    finish_doubled(raw, params)
}

/// Ẑ through the residues of the inverted Habiro series.
pub fn zhat_via_residues(knot: &Knot, params: SurgeryParams) -> Result<ZhatResult> {
    let (raw, _) = two_pass(params, |n| completed(knot, params, n, residues_raw(knot, params.p, params.a, n)?))?;
    finish_doubled(raw, params)
}

/// Ẑ through the inverted Habiro coefficients directly.
pub fn zhat_via_ih(knot: &Knot, params: SurgeryParams) -> Result<ZhatResult> {
    let (raw, _) = two_pass(params, |n| completed(knot, params, n, -ih_raw(knot, params.p, params.a, n, None)?))?;
    finish_doubled(raw, params)
}

/// Partial inverted-Habiro sum over `1 <= k <= k_max`, raw, to `O(q^n)`.
/// It equals minus the residue sum, since `r_j` carries the opposite sign.
pub fn zhat_ih_partial(knot: &Knot, p: i64, a: i64, k_max: i64, n: i64) -> Result<QSeries> {
    ih_raw(knot, p, a, Ratio::from_integer(n), Some(k_max))
}

/// Dispatch on `params.method`.
pub fn zhat(knot: &Knot, params: SurgeryParams) -> Result<ZhatResult> {
    match params.method {
        Method::Fk => zhat_via_fk(knot, params),
        Method::Residues => zhat_via_residues(knot, params),
        Method::Ih => zhat_via_ih(knot, params),
    }
}

fn check_park(p: i64, a: i64) -> Result<()> {
    if p <= 0 || a < 0 || a >= p {
        return Err(Error::InvalidArgument("Park polynomials need p > 0 and 0 <= a < p".into()));
    }
    Ok(())
}

/// Make sure every exponent is an integer and mark the polynomial exact.
fn integral(s: QSeries) -> Result<QSeries> {
    if s.scale() != 1 {
        return Err(Error::FractionalExponent);
    }
    Ok(s)
}

/// Park polynomial from the explicit double sum:
/// `P = -q^{a(p-a)/p} (q^{k+1};q)_k Σ_{j=1}^k (-1)^{k+j}(1-q^{-j}) q^{C(j+1,2)-C(k,2)}
///  / ((q)_{k+j}(q)_{k-j}) Σ_{n<j} q^{(np+a)²/p - j(np+a)}`.
pub fn park_poly_explicit(p: i64, a: i64, k: i64) -> Result<QSeries> {
    check_park(p, a)?;
    let mut s = QSeries::zero();
    for j in 1..=k {
        let mut inner = QSeries::zero();
        for n in 0..j {
            let u = n * p + a;
            inner += &QSeries::monomial_rat(1, Ratio::new(u * u, p) - Ratio::from_integer(j * u));
        }
        let g = gaussian(2 * k, k + j).shift_int(binom2(j + 1) - binom2(k));
        let t = &(&g - &g.shift_int(-j)) * &inner;
        if (k + j) % 2 == 0 {
            s += &t;
        } else {
            s -= &t;
        }
    }
    for t in 1..=k {
        s = s.div_one_minus_exact(t)?;
    }
    integral(-s.shift(Ratio::new(a * (p - a), p)))
}

/// Upper bound used to truncate the residue definition, with a zero margin checked.
fn park_window(p: i64, k: i64) -> (i64, i64) {
    let top = 2 * k * k + 2 * k + 2 * p + 10;
    let margin = 2 * k + p + 10;
    (top, margin)
}

/// Park polynomial as the constant term in `x` of
/// `q^{-k² + a(p-a)/p} (q^{k+1};q)_k Θ(x) / Π_{i=1}^k (x + x^{-1} - q^i - q^{-i})`,
/// `Θ(x) = Σ_{u<0, u≡a (p)} x^u q^{u²/p}`.
pub fn park_poly_residue(p: i64, a: i64, k: i64) -> Result<QSeries> {
    check_park(p, a)?;
    if k == 0 {
        return Ok(QSeries::zero());
    }
    let (top, margin) = park_window(p, k);
    let pre = Ratio::from_integer(-k * k) + Ratio::new(a * (p - a), p);
    let cap = Ratio::from_integer(top + margin) - pre;
    let mut sum = QSeries::zero();
    let mut j = 0i64;
    loop {
        let u = -(k + j);
        let low = Ratio::new(u * u, p) - Ratio::from_integer(j * k);
        if low >= cap && j > k {
            break;
        }
        if (u - a).rem_euclid(p) == 0 && low < cap {
            let e = &qbinom(2 * k + j, j) - &qbinom(2 * k + j - 1, j - 1);
            sum += &e.shift(Ratio::new(u * u, p)).truncate_exp(cap);
        }
        j += 1;
    }
    let poch = qfactor_series(&(k + 1..=2 * k).collect::<Vec<_>>(), &[], top + margin + k * k + 1);
    let r = sum.truncate_exp(cap).mul_capped(&poch, None).shift(pre).truncate(top + margin);
    if r.max_exp().is_some_and(|e| e >= Ratio::from_integer(top)) {
        return Err(Error::Divergent(format!("Park residue has terms beyond q^{top}")));
    }
    integral(r.assume_exact())
}

/// Both Park definitions at once, for comparison.
pub fn park_poly_pair(p: i64, a: i64, k: i64) -> Result<(QSeries, QSeries)> {
    Ok((park_poly_explicit(p, a, k)?, park_poly_residue(p, a, k)?))
}
