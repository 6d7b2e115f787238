//! The dictionary between GM coefficients `f_i` and inverted Habiro
//! coefficients `a_{-k-1}`, the x-expansion of `σ̃_{-k-1}`, and the lower
//! bound condition.
//!
//! With `σ̃_{-k-1} = x^k / Π_{|s|≤k}(1 - q^s x)` the series
//! `F(x) = Σ_k a_{-k-1} σ̃_{-k-1}` is evaluated in nested form
//!
//! ```text
//! G_K = a_K,   G_k = a_k + x G_{k+1} / ((1 - q^{k+1} x)(1 - q^{-k-1} x)),   F = G_0 / (1 - x)
//! ```
//!
//! and inverted by peeling off one factor at a time, so both directions
//! stay inside `Z[q^{±1}]`. The explicit q-binomial sums are kept as
//! independent oracles.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::qcomb::{qbinom, qint};
use crate::series::{Delta, Exp, QSeries};

/// Which coefficient family a [`CoeffSeq`] holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    /// GM coefficients `f_k`.
    F,
    /// Inverted Habiro coefficients, index `k` meaning `a_{-k-1}`.
    P,
}

/// Generator `(k, cap) -> k-th coefficient`, known at least to `O(q^cap)`
/// (exact generators ignore `cap`).
pub type Generator = dyn Fn(usize, i64) -> Result<QSeries> + Send + Sync;

/// A lazily generated, memoized coefficient sequence.
#[derive(Clone)]
pub struct CoeffSeq {
    side: Side,
    gen: Arc<Generator>,
    max_index: Option<usize>,
    sigma0: Option<QSeries>,
    memo: Arc<RwLock<HashMap<usize, QSeries>>>,
}

impl fmt::Debug for CoeffSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CoeffSeq")
            .field("side", &self.side)
            .field("max_index", &self.max_index)
            .field("sigma0", &self.sigma0)
            .finish()
    }
}

impl CoeffSeq {
    pub fn new(side: Side, gen: impl Fn(usize, i64) -> Result<QSeries> + Send + Sync + 'static) -> Self {
        CoeffSeq { side, gen: Arc::new(gen), max_index: None, sigma0: None, memo: Arc::default() }
    }

    /// A finite list; indices past the end are an error.
    pub fn from_list(side: Side, list: Vec<QSeries>) -> Self {
        let n = list.len();
        let list = Arc::new(list);
        let mut s = Self::new(side, move |k, _| list.get(k).cloned().ok_or(Error::IndexBeyondData(k)));
        s.max_index = n.checked_sub(1);
        if n == 0 {
            s.max_index = Some(0);
            s.gen = Arc::new(|k, _| Err(Error::IndexBeyondData(k)));
        }
        s
    }

    /// A finite list whose entries past the end are exactly zero.
    pub fn from_list_padded(side: Side, list: Vec<QSeries>) -> Self {
        let list = Arc::new(list);
        Self::new(side, move |k, _| Ok(list.get(k).cloned().unwrap_or_else(QSeries::zero)))
    }

    pub fn with_sigma0(mut self, c: QSeries) -> Self {
        self.sigma0 = Some(c);
        self
    }

    pub fn with_max_index(mut self, m: usize) -> Self {
        self.max_index = Some(m);
        self
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn max_index(&self) -> Option<usize> {
        self.max_index
    }

    /// Constant `σ_0` term (side P only; the unknot has `σ_0 = 1`).
    pub fn sigma0(&self) -> Option<&QSeries> {
        self.sigma0.as_ref()
    }

    /// The `k`-th coefficient, exact or known to at least `O(q^cap)`.
    pub fn get(&self, k: usize, cap: i64) -> Result<QSeries> {
        if let Some(m) = self.max_index {
            if k > m {
                return Err(Error::IndexBeyondData(k));
            }
        }
        let good = |s: &QSeries| s.prec_exp().map_or(true, |p| p >= Ratio::from_integer(cap));
        if let Some(s) = self.memo.read().expect("memo lock").get(&k) {
            if good(s) {
                return Ok(s.clone());
            }
        }
        let s = (self.gen)(k, cap)?;
        let mut m = self.memo.write().expect("memo lock");
        let better = m.get(&k).map_or(true, |old| match (old.prec_exp(), s.prec_exp()) {
            (None, _) => false,
            (Some(_), None) => true,
            (Some(a), Some(b)) => b > a,
        });
        if better {
            m.insert(k, s.clone());
        }
        Ok(s)
    }

    /// The exact `k`-th coefficient (for exact generators).
    pub fn get_exact(&self, k: usize) -> Result<QSeries> {
        self.get(k, i64::MAX / 4)
    }

    /// Indices `0..=k_max` with per-index caps.
    pub fn prefix(&self, k_max: usize, cap: impl Fn(usize) -> i64) -> Result<Vec<QSeries>> {
        (0..=k_max).map(|k| self.get(k, cap(k))).collect()
    }
}

/// Coefficients of `x^{k+j}`, `j = 0..=x_order`, in `σ̃_{-k-1}`: the
/// balanced binomials `[2k+j choose j]`.
pub fn sigma_tilde_x_expansion(k: usize, x_order: usize) -> Vec<QSeries> {
    let k = k as i64;
    (0..=x_order as i64).map(|j| qbinom(2 * k + j, j)).collect()
}

/// `q^m + q^{-m}` applied to `s`.
fn times_t(s: &QSeries, m: i64) -> QSeries {
    &s.shift_int(m) + &s.shift_int(-m)
}

/// `f_0..=f_K` from `a_{-1}..a_{-K-1}` given as a slice (index `k` is `a_{-k-1}`).
pub fn f_from_a_slice(a: &[QSeries], sigma0: Option<&QSeries>) -> Vec<QSeries> {
    if a.is_empty() {
        return Vec::new();
    }
    let kk = a.len() - 1;
    let mut g: Vec<QSeries> = vec![a[kk].clone()];
    for k in (0..kk).rev() {
        let m = k as i64 + 1;
        let len = kk - k + 1;
        let mut h: Vec<QSeries> = Vec::with_capacity(len);
        for n in 0..len {
            let mut v = if n >= 1 { g[n - 1].clone() } else { QSeries::zero() };
            if n >= 1 {
                v += &times_t(&h[n - 1], m);
            }
            if n >= 2 {
                v -= &h[n - 2];
            }
            h.push(v);
        }
        h[0] += &a[k];
        g = h;
    }
    let mut f = Vec::with_capacity(g.len());
    let mut acc = QSeries::zero();
    for gi in g {
        acc += &gi;
        f.push(acc.clone());
    }
    if let Some(c) = sigma0 {
        f[0] += c;
    }
    f
}

/// `a_{-1}..a_{-K-1}` from `f_0..f_K` given as a slice.
pub fn a_from_f_slice(f: &[QSeries]) -> Vec<QSeries> {
    if f.is_empty() {
        return Vec::new();
    }
    let mut g: Vec<QSeries> = (0..f.len())
        .map(|n| if n == 0 { f[0].clone() } else { &f[n] - &f[n - 1] })
        .collect();
    let mut a = Vec::with_capacity(f.len());
    for k in 0..f.len() {
        a.push(g[0].clone());
        let m = k as i64 + 1;
        let len = g.len() - 1;
        let mut next = Vec::with_capacity(len);
        for n in 0..len {
            let mut v = g[n + 1].clone();
            if n >= 1 {
                v -= &times_t(&g[n], m);
            }
            if n >= 2 {
                v += &g[n - 1];
            }
            next.push(v);
        }
        g = next;
    }
    a
}

/// Cap on `a_{-k-1}` needed for `f_0..=f_K` to `O(q^prec)`.
fn a_cap(prec: i64, k: usize, kk: usize) -> i64 {
    let k = k as i64;
    prec.saturating_add(k * (kk as i64 - k))
}

/// GM coefficients `f_0..=f_K` of a side-P sequence. With `prec`, each
/// output is truncated at `O(q^prec)`; otherwise exact inputs give exact output.
pub fn f_from_a(a: &CoeffSeq, k_max: usize, prec: Option<i64>) -> Result<Vec<QSeries>> {
    let list = match prec {
        Some(n) => a.prefix(k_max, |k| a_cap(n, k, k_max))?,
        None => a.prefix(k_max, |_| i64::MAX / 4)?,
    };
    let f = f_from_a_slice(&list, a.sigma0());
    Ok(match prec {
        Some(n) => f.into_iter().map(|s| s.truncate(n)).collect(),
        None => f,
    })
}

/// GM coefficients `f_0..=f_K` with `f_i` known to `O(q^{caps[i]})`.
pub fn f_from_a_caps(a: &CoeffSeq, caps: &[i64]) -> Result<Vec<QSeries>> {
    let Some(kk) = caps.len().checked_sub(1) else { return Ok(Vec::new()) };
    let need = |k: usize| (k..=kk).map(|i| caps[i].saturating_add((k * (i - k)) as i64)).max().expect("nonempty");
    let list = a.prefix(kk, need)?;
    let f = f_from_a_slice(&list, a.sigma0());
    Ok(f.into_iter().zip(caps).map(|(s, &c)| s.truncate(c)).collect())
}

/// Inverted Habiro coefficients `a_{-1}..a_{-K-1}` of a side-F sequence.
pub fn a_from_f(f: &CoeffSeq, k_max: usize, prec: Option<i64>) -> Result<Vec<QSeries>> {
    let cap = |_k: usize| match prec {
        Some(n) => n.saturating_add((k_max * k_max) as i64),
        None => i64::MAX / 4,
    };
    let list = f.prefix(k_max, cap)?;
    let a = a_from_f_slice(&list);
    Ok(match prec {
        Some(n) => a.into_iter().map(|s| s.truncate(n)).collect(),
        None => a,
    })
}

/// Oracle: `f_i = Σ_{k≤i} [k+i choose 2k] a_{-k-1}` evaluated directly.
pub fn f_from_a_explicit(a: &[QSeries], sigma0: Option<&QSeries>) -> Vec<QSeries> {
    let kk = a.len() as i64;
    let mut f: Vec<QSeries> = (0..kk)
        .map(|i| {
            let mut s = QSeries::zero();
            for k in 0..=i {
                s += &(&qbinom(k + i, 2 * k) * &a[k as usize]);
            }
            s
        })
        .collect();
    if let (Some(c), Some(f0)) = (sigma0, f.first_mut()) {
        *f0 += c;
    }
    f
}

/// The polynomial `[2k choose k-i] [2i+1] / [k+i+1]`; errors if the
/// division is not exact.
pub fn inverse_weight(k: i64, i: i64) -> Result<QSeries> {
    let num = &qbinom(2 * k, k - i) * &qint(2 * i + 1);
    if num.is_exact_zero() {
        return Ok(num);
    }
    let n = k + i + 1;
    let q = num
        .mul_one_minus(1)
        .div_one_minus_exact(n)
        .map_err(|_| Error::TransformIntegrality(k as usize))?;
    Ok(q.shift(Ratio::new(n - 1, 2)))
}

/// Oracle: `a_{-k-1} = Σ_i (-1)^{k+i} [2k choose k-i] ([2i+1]/[k+i+1]) f_i`.
pub fn a_from_f_explicit(f: &[QSeries]) -> Result<Vec<QSeries>> {
    let kk = f.len() as i64;
    (0..kk)
        .map(|k| {
            let mut s = QSeries::zero();
            for i in 0..=k {
                let w = inverse_weight(k, i)?;
                let t = &w * &f[i as usize];
                if (k + i) % 2 == 0 {
                    s += &t;
                } else {
                    s -= &t;
                }
            }
            Ok(s)
        })
        .collect()
}

/// Result of checking the lower bound condition on a prefix.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct LbcReport {
    /// Largest index inspected.
    pub checked_range: usize,
    /// Largest integer `C` with `δ(a_{-k-1}) ≥ -(k+1)(k-2)/2 + C` on the prefix.
    pub best_constant: i64,
    /// Indices attaining the minimum.
    pub argmin: Vec<usize>,
    /// Indices whose coefficient is zero up to its precision, so only a
    /// lower bound on `δ` was used.
    pub violations: Vec<usize>,
}

impl LbcReport {
    /// True when every valuation on the prefix was determined.
    pub fn is_certain(&self) -> bool {
        self.violations.is_empty()
    }
}

/// `(k+1)(k-2)/2`, the LBC weight of index `k`.
pub fn lbc_weight(k: i64) -> i64 {
    (k + 1) * (k - 2) / 2
}

/// Best LBC constant of `a` on indices `0..=k_max`. Truncated generators
/// are asked for `slack` orders beyond the weight.
pub fn lbc_check(a: &CoeffSeq, k_max: usize) -> Result<LbcReport> {
    lbc_check_with_slack(a, k_max, 40)
}

pub fn lbc_check_with_slack(a: &CoeffSeq, k_max: usize, slack: i64) -> Result<LbcReport> {
    let mut best: Option<Exp> = None;
    let mut argmin = Vec::new();
    let mut violations = Vec::new();
    for k in 0..=k_max {
        let w = lbc_weight(k as i64);
        let c = a.get(k, slack - w)?;
        let d = match c.delta() {
            Delta::Infinite => continue,
            Delta::AtLeast(e) => {
                violations.push(k);
                e
            }
            Delta::Exactly(e) => e,
        };
        let v = d + Ratio::from_integer(w);
        match best {
            Some(b) if v > b => {}
            Some(b) if v == b => argmin.push(k),
            _ => {
                best = Some(v);
                argmin = vec![k];
            }
        }
    }
    Ok(LbcReport {
        checked_range: k_max,
        best_constant: best.map_or(0, |b| b.floor().to_integer()),
        argmin,
        violations,
    })
}

/// True iff `δ(f_i) ≥ -binom(i,2) + C + 1` for all `i ≤ K`.
pub fn fk_degree_check(f: &CoeffSeq, c: i64, k_max: usize) -> Result<bool> {
    for i in 0..=k_max {
        let b = -crate::qcomb::binom2(i as i64) + c + 1;
        let s = f.get(i, b + 1)?;
        if !s.delta().at_least(Ratio::from_integer(b)) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ones(n: usize) -> Vec<QSeries> {
        vec![QSeries::one(); n]
    }

    #[test]
    fn horner_matches_explicit() {
        let a: Vec<QSeries> = (0..8).map(|k| QSeries::from_ints(-(k as i64), &[1, -2, 0, 3])).collect();
        assert_eq!(f_from_a_slice(&a, None), f_from_a_explicit(&a, None));
        let f = f_from_a_slice(&a, None);
        assert_eq!(a_from_f_slice(&f), a);
        assert_eq!(a_from_f_explicit(&f).unwrap(), a);
    }

    #[test]
    fn figure_eight_f2() {
        let f = f_from_a_slice(&ones(3), None);
        assert_eq!(f[2], QSeries::from_ints(-1, &[1, 3, 1]));
    }

    #[test]
    fn delta_f_of_unit_sequence() {
        let f = f_from_a_slice(&ones(5), None);
        assert_eq!(a_from_f_slice(&f), ones(5));
        let mut e = vec![QSeries::zero(); 3];
        e[0] = QSeries::one();
        let a = a_from_f_slice(&e);
        assert_eq!(a[0], QSeries::one());
        assert_eq!(a[1], -QSeries::one());
        assert_eq!(a[2], QSeries::from_ints(-1, &[1, 0, 1]));
    }

    #[test]
    fn sigma_expansion_entries() {
        let v = sigma_tilde_x_expansion(1, 1);
        assert_eq!(v[0], QSeries::one());
        assert_eq!(v[1], QSeries::from_ints(-1, &[1, 1, 1]));
        assert!(sigma_tilde_x_expansion(0, 4).iter().all(|s| *s == QSeries::one()));
    }
}
