//! The Ω-ring: products of inverted Habiro series.
//!
//! Elements are `A = σ_0 c_0 + Σ_{n<0} a_n σ_n` with structure constants
//! `σ_m σ_n = Σ_i γ^i_{m,n} σ_{m+n-i}`, `γ^i_{m,n} = {m}_i {n}_i [m+n+1 choose i]`.
//! Products are lazy: the coefficient at index `l` is assembled on demand to a
//! requested precision, and summands whose valuation bound already exceeds the
//! precision are skipped. The bound comes from the lower bound condition of
//! the factors, so factors must carry an LBC constant.

use std::sync::Arc;

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::qcomb::QFactor;
use crate::series::{Exp, QSeries};
use crate::transform::{f_from_a_slice, lbc_check, lbc_weight, CoeffSeq, Side};

/// Caps at or above this are treated as "exact".
pub(crate) const EXACT_CAP: i64 = i64::MAX / 8;

/// An inverted Habiro series together with its LBC constant.
#[derive(Clone, Debug)]
pub struct OmegaElement {
    pub seq: CoeffSeq,
    /// `C` with `δ(a_{-k-1}) ≥ -(k+1)(k-2)/2 + C` for every `k`.
    pub lbc: Option<i64>,
}

impl OmegaElement {
    pub fn new(seq: CoeffSeq, lbc: Option<i64>) -> Self {
        OmegaElement { seq, lbc }
    }

    /// The unit `1·σ_0`.
    pub fn unit() -> Self {
        let seq = CoeffSeq::new(Side::P, |_, _| Ok(QSeries::zero())).with_sigma0(QSeries::one());
        OmegaElement { seq, lbc: Some(0) }
    }

    /// The basis element `σ_{-k-1}`.
    pub fn sigma(k: usize) -> Self {
        let seq = CoeffSeq::new(Side::P, move |i, _| Ok(if i == k { QSeries::one() } else { QSeries::zero() }));
        OmegaElement { seq, lbc: Some(lbc_weight(k as i64)) }
    }

    /// `a_{-k-1}` to `O(q^cap)`.
    pub fn coeff(&self, k: usize, cap: i64) -> Result<QSeries> {
        self.seq.get(k, cap)
    }

    fn sigma0(&self) -> QSeries {
        self.seq.sigma0().cloned().unwrap_or_else(QSeries::zero)
    }
}

/// `γ^i_{m,n}` in factored form; `None` when it vanishes.
pub fn gamma_factor(m: i64, n: i64, i: i64) -> Option<QFactor> {
    let a = QFactor::curly_poch(m, i)?;
    let b = QFactor::curly_poch(n, i)?;
    let c = QFactor::qbinom(m + n + 1, i)?;
    Some(a.mul(&b).mul(&c))
}

/// `γ^i_{m,n} = {m}_i {n}_i [m+n+1 choose i]` as an exact polynomial.
pub fn gamma(m: i64, n: i64, i: i64) -> QSeries {
    match gamma_factor(m, n, i) {
        None => QSeries::zero(),
        Some(f) => f.to_exact().expect("γ is a polynomial"),
    }
}

/// LBC lower bound on `δ(a_n)` for `n < 0` with constant `c`.
fn lbc_bound(n: i64, c: i64) -> i64 {
    -(n * (n + 3)) / 2 + c
}

fn ceil(e: Exp) -> i64 {
    e.ceil().to_integer()
}

/// Coefficient `c_l` of the product, `l <= 0`, to `O(q^cap)` (`None`: exact).
pub fn omega_coeff(a: &OmegaElement, b: &OmegaElement, l: i64, cap: Option<i64>) -> Result<QSeries> {
    let cap = cap.filter(|&c| c < EXACT_CAP);
    let ca = a.lbc.ok_or(Error::LbcRequired)?;
    let cb = b.lbc.ok_or(Error::LbcRequired)?;
    let (sa, sb) = (a.sigma0(), b.sigma0());
    let trunc = |s: QSeries| match cap {
        Some(c) => s.truncate(c),
        None => s,
    };
    if l == 0 {
        return Ok(trunc(&sa * &sb));
    }
    let k = (-l - 1) as usize;
    let big = cap.unwrap_or(EXACT_CAP);
    let mut acc = QSeries::zero();
    if !sa.is_exact_zero() {
        acc += &(&sa * &b.coeff(k, big)?);
    }
    if !sb.is_exact_zero() {
        acc += &(&sb * &a.coeff(k, big)?);
    }
    for m in (l + 1..=-1).rev() {
        for n in (l - m..=-1).rev() {
            let i = m + n - l;
            let Some(g) = gamma_factor(m, n, i) else { continue };
            let (la, lb) = (lbc_bound(m, ca), lbc_bound(n, cb));
            let dg = g.delta();
            let (am, bn, gs) = match cap {
                Some(c) => {
                    let bound = dg + Ratio::from_integer(la + lb);
                    if bound >= Ratio::from_integer(c) {
                        continue;
                    }
                    let cap_a = ceil(Ratio::from_integer(c - lb) - dg);
                    let cap_b = ceil(Ratio::from_integer(c - la) - dg);
                    let am = a.coeff((-m - 1) as usize, cap_a)?;
                    let bn = b.coeff((-n - 1) as usize, cap_b)?;
                    (am, bn, g.to_series(c - la - lb))
                }
                None => {
                    let am = a.coeff((-m - 1) as usize, EXACT_CAP)?;
                    let bn = b.coeff((-n - 1) as usize, EXACT_CAP)?;
                    (am, bn, g.to_exact()?)
                }
            };
            if !am.delta().at_least(Ratio::from_integer(la)) {
                return Err(Error::DegreeBoundViolated(-m - 1));
            }
            if !bn.delta().at_least(Ratio::from_integer(lb)) {
                return Err(Error::DegreeBoundViolated(-n - 1));
            }
            if am.is_exact_zero() || bn.is_exact_zero() {
                continue;
            }
            let t = gs.mul_to(&am, cap.map(|c| c - lb)).mul_to(&bn, cap);
            acc += &t;
        }
    }
    Ok(trunc(match cap {
        Some(c) => acc + QSeries::o(c),
        None => acc,
    }))
}

/// Lazy product `a · b`. Inputs without an LBC constant are rejected unless
/// `force` is set, in which case the constant is measured on `force_depth` indices.
pub fn omega_product(a: &OmegaElement, b: &OmegaElement, force: Option<usize>) -> Result<OmegaElement> {
    let fix = |e: &OmegaElement| -> Result<OmegaElement> {
        match (e.lbc, force) {
            (Some(_), _) => Ok(e.clone()),
            (None, Some(d)) => Ok(OmegaElement::new(e.seq.clone(), Some(lbc_check(&e.seq, d)?.best_constant))),
            (None, None) => Err(Error::LbcRequired),
        }
    };
    let (a, b) = (Arc::new(fix(a)?), Arc::new(fix(b)?));
    let c = a.lbc.unwrap() + b.lbc.unwrap();
    let s0 = &a.sigma0() * &b.sigma0();
    let (aa, bb) = (a.clone(), b.clone());
    let mut seq = CoeffSeq::new(Side::P, move |k, cap| omega_coeff(&aa, &bb, -(k as i64) - 1, Some(cap)));
    if !s0.is_exact_zero() {
        seq = seq.with_sigma0(s0);
    }
    Ok(OmegaElement::new(seq, Some(c)))
}

/// Product with `c_l` computed eagerly for `-depth <= l < 0` to `O(q^prec)`.
pub fn omega_mul(a: &OmegaElement, b: &OmegaElement, depth: usize, prec: i64) -> Result<OmegaElement> {
    omega_mul_forced(a, b, depth, prec, false)
}

pub fn omega_mul_forced(a: &OmegaElement, b: &OmegaElement, depth: usize, prec: i64, force: bool) -> Result<OmegaElement> {
    let p = omega_product(a, b, force.then_some(depth.max(1)))?;
    for k in 0..depth {
        p.seq.get(k, prec)?;
    }
    Ok(p)
}

/// `σ_{-k-1}` in the reduced normalization, `x^{k+1} / ((1-x) Π_{|s|≤k}(1 - q^s x))`,
/// as coefficients of `x^0..=x^top`.
pub fn sigma_reduced_x(k: usize, top: usize) -> Vec<QSeries> {
    let mut out = vec![QSeries::zero(); top + 1];
    let lead = k + 1;
    if lead > top {
        return out;
    }
    let binoms = crate::transform::sigma_tilde_x_expansion(k, top - lead);
    let mut acc = QSeries::zero();
    for (j, b) in binoms.iter().enumerate() {
        acc += b;
        out[lead + j] = acc.clone();
    }
    out
}

/// x-expansion `x^0..=x^top` of `A = c_0 + Σ_k a_{-k-1} σ_{-k-1}` in the
/// reduced normalization, coefficients to `O(q^prec)`.
pub fn reduced_x_expansion(e: &OmegaElement, top: usize, prec: i64) -> Result<Vec<QSeries>> {
    let mut out = vec![QSeries::zero(); top + 1];
    out[0] = e.sigma0();
    if top >= 1 {
        let kk = top - 1;
        let a: Vec<QSeries> = (0..=kk)
            .map(|k| e.coeff(k, prec.saturating_add((k * (kk - k)) as i64)))
            .collect::<Result<_>>()?;
        let f = f_from_a_slice(&a, None);
        let mut acc = QSeries::zero();
        for j in 1..=top {
            acc += &f[j - 1];
            out[j] = acc.clone();
        }
    }
    Ok(out.into_iter().map(|s| s.truncate(prec)).collect())
}

/// Product of two x-series truncated at `x^top`, coefficients to `O(q^prec)`.
pub fn x_series_mul(a: &[QSeries], b: &[QSeries], top: usize, prec: Option<i64>) -> Vec<QSeries> {
    (0..=top)
        .map(|j| {
            let mut s = QSeries::zero();
            for i in 0..=j {
                if let (Some(x), Some(y)) = (a.get(i), b.get(j - i)) {
                    if !x.is_exact_zero() && !y.is_exact_zero() {
                        s += &x.mul_to(y, prec);
                    }
                }
            }
            prec.map_or(s.clone(), |p| s.truncate(p))
        })
        .collect()
}

/// Instance check of `σ_m σ_n = Σ_i γ^i_{m,n} σ_{m+n-i}` for `m, n <= 0`:
/// x-coefficients from the leading power through `x_order` further powers,
/// each to `O(q^prec)`.
pub fn verify_sigma_product(m: i64, n: i64, x_order: usize, prec: i64) -> Result<bool> {
    if m > 0 || n > 0 {
        return Err(Error::InvalidArgument("indices must be nonpositive".into()));
    }
    let lead = (-m - n) as usize;
    let top = lead + x_order;
    let basis = |idx: i64| -> Vec<QSeries> {
        if idx == 0 {
            let mut v = vec![QSeries::zero(); top + 1];
            v[0] = QSeries::one();
            v
        } else {
            sigma_reduced_x((-idx - 1) as usize, top)
        }
    };
    let lhs = x_series_mul(&basis(m), &basis(n), top, None);
    let mut rhs = vec![QSeries::zero(); top + 1];
    for i in 0..=x_order as i64 {
        let g = gamma(m, n, i);
        if g.is_exact_zero() {
            continue;
        }
        for (j, s) in basis(m + n - i).iter().enumerate() {
            if !s.is_exact_zero() {
                rhs[j] += &(&g * s);
            }
        }
    }
    Ok(lhs.iter().zip(&rhs).all(|(x, y)| x.truncate(prec) == y.truncate(prec)))
}

/// True iff `δ(c_{-k-1}) ≥ -(k+1)(k-2)/2 + C_a + C_b` for `k < depth`.
pub fn lbc_product_bound(prod: &OmegaElement, ca: i64, cb: i64, depth: usize, prec: i64) -> Result<bool> {
    for k in 0..depth {
        let c = prod.coeff(k, prec)?;
        let b = -lbc_weight(k as i64) + ca + cb;
        if !c.delta().at_least(Ratio::from_integer(b)) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_values() {
        assert_eq!(gamma(3, -4, 0), QSeries::one());
        assert_eq!(gamma(-1, -1, 1), QSeries::from_ints(-1, &[-1, 2, -1]));
        assert!(gamma(1, 5, 2).is_exact_zero());
    }

    #[test]
    fn sigma_squares() {
        assert!(verify_sigma_product(-1, -1, 6, 40).unwrap());
        assert!(verify_sigma_product(0, -3, 4, 40).unwrap());
        assert!(verify_sigma_product(-2, -3, 4, 30).unwrap());
    }

    #[test]
    fn sigma_product_coefficients() {
        let s = OmegaElement::sigma(0);
        let p = omega_mul(&s, &s, 3, 30).unwrap();
        assert!(p.coeff(0, 30).unwrap().is_zero());
        assert_eq!(p.coeff(1, 30).unwrap(), QSeries::one().truncate(30));
        assert_eq!(p.coeff(2, 30).unwrap(), QSeries::from_ints_trunc(-1, &[-1, 2, -1], 30));
    }
}
