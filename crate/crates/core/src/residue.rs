//! Residues of inverted Habiro series at the poles `x = q^j`, the residue
//! theorem, and conversions between residues and GM coefficients.
//!
//! For `P = Σ_k a_{-k-1} σ̃_{-k-1}` the residue at `x = q^j` is
//!
//! ```text
//! r_j = -Σ_{k≥|j|} a_{-k-1} (-1)^{k+j} q^{C(k+1,2)+C(j+1,2)} / ((q)_{k+j} (q)_{k-j})
//! ```
//!
//! and `r_∞ = a_{-1}`. The summand at index `k` has valuation at least
//! `C(j+1,2) + k + 1 + C` for an LBC constant `C`, which certifies every
//! truncation below.

use std::collections::BTreeMap;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::knot::Knot;
use crate::omega::OmegaElement;
use crate::qcomb::{binom2, qpoch_inf_inv, qpoch_inv};
use crate::series::{sum_bounded, DegreeBound, QSeries};
use crate::transform::{lbc_weight, CoeffSeq, Side};

/// Where a residue is taken.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Pole {
    Finite(i64),
    Infinity,
}

/// Residue of `σ̃_{-k-1}` at one pole: `sign · q^exponent / ((q)_{d0} (q)_{d1})`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ResidueAtom {
    pub k: usize,
    pub pole: Pole,
    /// `-1`, `0` or `1`; zero when there is no pole.
    pub sign: i8,
    pub exponent: i64,
    pub denominators: (i64, i64),
}

impl ResidueAtom {
    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    /// The residue as a series to `O(q^prec)`.
    pub fn to_series(&self, prec: i64) -> QSeries {
        if self.sign == 0 {
            return QSeries::zero();
        }
        let cap = prec - self.exponent;
        let d = qpoch_inv(self.denominators.0, cap).mul_to(&qpoch_inv(self.denominators.1, cap), Some(cap));
        let s = d.shift_int(self.exponent);
        if self.sign < 0 {
            -s
        } else {
            s
        }
    }
}

/// Residue of `σ̃_{-k-1}` at `x = q^j` or at infinity.
pub fn residue_sigma(k: usize, pole: Pole) -> ResidueAtom {
    let ki = k as i64;
    match pole {
        Pole::Infinity => ResidueAtom { k, pole, sign: if k == 0 { 1 } else { 0 }, exponent: 0, denominators: (0, 0) },
        Pole::Finite(j) if j.abs() > ki => ResidueAtom { k, pole, sign: 0, exponent: 0, denominators: (0, 0) },
        Pole::Finite(j) => ResidueAtom {
            k,
            pole,
            sign: if (ki + j) % 2 == 0 { -1 } else { 1 },
            exponent: binom2(j + 1) + binom2(ki + 1),
            denominators: (ki - j, ki + j),
        },
    }
}

/// Lower bound on `δ` of the `k`-th summand of `r_j`.
fn term_bound(j: i64, k: i64, c: i64) -> i64 {
    binom2(j + 1) + k + 1 + c
}

/// Residue `r_j` of an LBC element, to `O(q^prec)`.
pub fn residue_j(a: &OmegaElement, j: i64, prec: i64) -> Result<QSeries> {
    let c = a.lbc.ok_or(Error::LbcRequired)?;
    let t = j.abs();
    let ej = binom2(j + 1);
    let mut d = qpoch_inv(2 * t, prec - term_bound(j, t, c));
    let bound = DegreeBound::new(0, |i| term_bound(j, t + i, c));
    sum_bounded(
        |i| {
            let k = t + i;
            if i > 0 {
                let cap = prec - term_bound(j, k, c);
                d = d.truncate(cap).div_one_minus(k + j, cap).div_one_minus(k - j, cap);
            }
            let e = ej + binom2(k + 1);
            let ak = a.coeff(k as usize, prec - e)?;
            if !ak.delta().at_least(Ratio::from_integer(-lbc_weight(k) + c)) {
                return Err(Error::DegreeBoundViolated(k));
            }
            if ak.is_exact_zero() {
                return Ok(QSeries::zero());
            }
            let term = ak.shift_int(e).mul_to(&d, Some(prec));
            Ok(if (k + j) % 2 == 0 { -term } else { term })
        },
        &bound,
        prec,
    )
}

/// Residues `r_j` for `|j| <= J` together with `r_∞`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResidueFamily {
    pub window: i64,
    pub r: BTreeMap<i64, QSeries>,
    pub r_inf: QSeries,
    pub prec: i64,
}

impl ResidueFamily {
    pub fn get(&self, j: i64) -> Option<&QSeries> {
        self.r.get(&j)
    }

    /// `r_{-j} = q^{-j} r_j` on the window, compared to the common precision.
    pub fn symmetric(&self) -> bool {
        (1..=self.window).all(|j| {
            let (p, m) = (&self.r[&j], &self.r[&-j]);
            let lhs = m.truncate(self.prec - j);
            let rhs = p.shift_int(-j).truncate(self.prec - j);
            lhs == rhs
        })
    }
}

/// All residues `r_j`, `|j| <= J`, to `O(q^prec)`.
pub fn residue_family(a: &OmegaElement, window: i64, prec: i64) -> Result<ResidueFamily> {
    residue_family_with(a, window, |_| prec, prec)
}

/// Residue family with a per-`j` precision.
pub fn residue_family_with(
    a: &OmegaElement,
    window: i64,
    prec_of: impl Fn(i64) -> i64 + Sync,
    prec: i64,
) -> Result<ResidueFamily> {
    a.lbc.ok_or(Error::LbcRequired)?;
    let js: Vec<i64> = (-window..=window).collect();
    let rs: Vec<QSeries> = js.par_iter().map(|&j| residue_j(a, j, prec_of(j))).collect::<Result<_>>()?;
    Ok(ResidueFamily {
        window,
        r: js.into_iter().zip(rs).collect(),
        r_inf: a.coeff(0, prec)?.truncate(prec),
        prec,
    })
}

/// Smallest `J` with `C(J+2,2) + C >= prec`.
pub fn theorem_window(c: i64, prec: i64) -> i64 {
    let mut j = 0;
    while binom2(j + 2) + c < prec {
        j += 1;
    }
    j
}

/// `Σ_j r_j + r_∞` to `O(q^prec)`; zero for every LBC element.
pub fn residue_theorem_check(a: &OmegaElement, prec: i64) -> Result<QSeries> {
    let c = a.lbc.ok_or(Error::LbcRequired)?;
    let fam = residue_family(a, theorem_window(c, prec), prec)?;
    let mut s = fam.r_inf.clone();
    for r in fam.r.values() {
        s += r;
    }
    Ok(s.truncate(prec))
}

/// Smallest `J` such that `C(j+1,2) - j(k+1) + 1 + C >= prec` for all `j > J`.
pub fn f_window(k: i64, c: i64, prec: i64) -> i64 {
    let mut j = 0;
    while !(j > k && binom2(j + 2) - (j + 1) * (k + 1) + 1 + c >= prec) {
        j += 1;
    }
    j
}

/// Residue family good enough to recover `f_0..=f_K` to `O(q^prec)`.
pub fn residue_family_for_f(a: &OmegaElement, k_max: i64, prec: i64) -> Result<ResidueFamily> {
    let c = a.lbc.ok_or(Error::LbcRequired)?;
    let w = f_window(k_max, c, prec);
    let mut fam = residue_family_with(a, w, |j| if j >= 0 { prec + j * (k_max + 1) } else { prec }, prec)?;
    fam.r.retain(|&j, _| j >= 0);
    Ok(fam)
}

/// `f_k = -r_0 - Σ_{j≥1} (q^{-j(k+1)} + q^{jk}) r_j` to `O(q^prec)`.
pub fn f_from_residues(fam: &ResidueFamily, c: i64, k: i64, prec: i64) -> Result<QSeries> {
    let need = f_window(k, c, prec);
    if need > fam.window {
        return Err(Error::WindowTooSmall(format!("need J >= {need}, have {}", fam.window)));
    }
    let r0 = fam.get(0).ok_or_else(|| Error::WindowTooSmall("missing r_0".into()))?;
    let mut s = -r0.truncate(prec);
    for j in 1..=need {
        let rj = fam.get(j).ok_or_else(|| Error::WindowTooSmall(format!("missing r_{j}")))?;
        let p = rj.prec_exp().map(|e| e.floor().to_integer());
        if p.is_some_and(|p| p - j * (k + 1) < prec) {
            return Err(Error::WindowTooSmall(format!("r_{j} known only to O(q^{})", p.unwrap())));
        }
        s -= &rj.shift_int(-j * (k + 1)).truncate(prec);
        s -= &rj.shift_int(j * k).truncate(prec);
    }
    Ok(s.truncate(prec))
}

/// `1 + Σ_{n≥1} (-1)^n q^{C(n+1,2)+nk} (q^{nj} + q^{-nj})` to `O(q^cap)`.
fn theta_factor(k: i64, j: i64, cap: i64) -> QSeries {
    let mut s = QSeries::one();
    for sgn in [1, -1] {
        let mut n = 1i64;
        loop {
            let e = binom2(n + 1) + n * k + sgn * n * j;
            let growing = n + k + sgn * j >= 0;
            if e >= cap && growing {
                break;
            }
            if e < cap {
                s += &QSeries::monomial(if n % 2 == 0 { 1 } else { -1 }, e);
            }
            n += 1;
        }
    }
    s.truncate(cap)
}

/// Theta-route bound on `δ` of the `k`-th summand.
fn theta_bound(j: i64, k: i64, c: i64) -> i64 {
    let t = (j.abs() - k).max(0);
    k + c + 1 - binom2(t)
}

/// Number of GM coefficients the theta route consumes for `r_j` at `prec`.
pub fn theta_terms_needed(c: i64, j: i64, prec: i64) -> usize {
    let m = prec - binom2(j + 1);
    let mut k = 0;
    while theta_bound(j, k, c) < m {
        k += 1;
    }
    k as usize
}

/// `r_j` from GM coefficients:
/// `r_j = -(q^{C(j+1,2)}/(q)_∞^3) Σ_k f_k (-1)^{k+j} q^{C(k+1,2)} θ(k, j)`.
pub fn residues_from_f(f: &[QSeries], c: i64, j: i64, prec: i64) -> Result<QSeries> {
    let m = prec - binom2(j + 1);
    let bound = DegreeBound::new(0, |k| theta_bound(j, k, c));
    let s = sum_bounded(
        |k| {
            let fk = f.get(k as usize).ok_or(Error::IndexBeyondData(k as usize))?;
            let lemma = -binom2(k) + c + 1;
            if !fk.delta().at_least(Ratio::from_integer(lemma)) {
                return Err(Error::ThetaRouteInput(k as usize));
            }
            let e = binom2(k + 1);
            let cap = m - e - lemma;
            let t = theta_factor(k, j, cap).shift_int(e).mul_to(fk, Some(m));
            Ok(if (k + j) % 2 == 0 { t } else { -t })
        },
        &bound,
        m,
    )?;
    let lift = s.delta().lower().map_or(0, |d| (-d.floor().to_integer()).max(0));
    let p = qpoch_inf_inv(m + lift);
    let p3 = p.mul_to(&p, Some(m + lift)).mul_to(&p, Some(m + lift));
    Ok(-s.mul_to(&p3, Some(m)).shift_int(binom2(j + 1)).truncate(prec))
}

/// Theta-route residue of a registered knot.
pub fn residue_theta(knot: &Knot, j: i64, prec: i64) -> Result<QSeries> {
    let c = knot.lbc_required()?;
    let n = theta_terms_needed(c, j, prec) as i64;
    let m = prec - binom2(j + 1);
    let caps: Vec<i64> = (0..=n)
        .map(|k| (m - binom2(k + 1) + binom2((j.abs() - k).max(0))).max(-binom2(k) + c + 2))
        .collect();
    let f = knot.f_prefix_caps(&caps)?;
    residues_from_f(&f, c, j, prec)
}

/// Which trefoil recurrence to check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Trefoil {
    L,
    R,
}

/// Outcome of a trefoil recurrence check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RecurrenceReport {
    pub holds: bool,
    /// For `R`: agreement exponent of `(-1)^j q^{-C(j+2,2)} r_j` with `(q)_∞^{-2}`, per `j`.
    pub stabilization: Vec<i64>,
    pub stabilizes: bool,
}

/// Check the q-recurrences of the trefoil residues for `0 <= j < J` to `O(q^prec)`:
/// `L`: `r_{j+1} = -q^{3j+2} r_j`;
/// `R`: `r_{j+1} = -q^{-3j-1} r_j + (-1)^j q^{C(j+1,2)} (q^{-2j} - q) / (q)_∞^2`.
pub fn trefoil_recurrence_check(knot: &Knot, kind: Trefoil, window: i64, prec: i64) -> Result<RecurrenceReport> {
    let lift = 3 * window + 4;
    let rs: Vec<QSeries> = (0..=window).map(|j| residue_j(&knot.omega, j, prec + lift)).collect::<Result<_>>()?;
    let p = qpoch_inf_inv(prec + lift);
    let p2 = p.mul_to(&p, Some(prec + lift));
    let mut holds = true;
    for j in 0..window {
        let (rj, rn) = (&rs[j as usize], &rs[j as usize + 1]);
        let rhs = match kind {
            Trefoil::L => -rj.shift_int(3 * j + 2),
            Trefoil::R => {
                let inh = (&QSeries::monomial(1, -2 * j) - &QSeries::monomial(1, 1)).shift_int(binom2(j + 1));
                let inh = inh.mul_to(&p2, Some(prec));
                let inh = if j % 2 == 0 { inh } else { -inh };
                &(-rj.shift_int(-3 * j - 1)) + &inh
            }
        };
        if !rn.agrees_to(&rhs, prec) {
            holds = false;
        }
    }
    let mut stab = Vec::new();
    if kind == Trefoil::R {
        let target = p2.truncate(prec);
        for (j, r) in rs.iter().enumerate() {
            let j = j as i64;
            let s = r.shift_int(-binom2(j + 2));
            let s = if j % 2 == 0 { s } else { -s };
            let d = s.first_difference(&target).map_or(prec, |e| e.floor().to_integer());
            stab.push(d);
        }
    }
    let stabilizes = stab.windows(2).all(|w| w[1] >= w[0]) && stab.last().map_or(true, |&d| d > 0);
    Ok(RecurrenceReport { holds, stabilization: stab, stabilizes })
}

/// Descendant series `a_{-k-1} -> a_{-k-1} q^{km}`.
pub fn descendant(a: &OmegaElement, m: i64) -> Result<OmegaElement> {
    let src = a.seq.clone();
    let mut seq = CoeffSeq::new(Side::P, move |k, cap| Ok(src.get(k, cap.saturating_sub(k as i64 * m))?.shift_int(k as i64 * m)));
    if let Some(s) = a.seq.sigma0() {
        seq = seq.with_sigma0(s.clone());
    }
    if let Some(mx) = a.seq.max_index() {
        seq = seq.with_max_index(mx);
    }
    let lbc = match (a.lbc, m >= 0) {
        (Some(c), true) => Some(c),
        _ => Some(crate::transform::lbc_check(&seq, 30)?.best_constant),
    };
    Ok(OmegaElement::new(seq, lbc))
}

/// Nonabelian branch of the figure-eight knot.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    /// `α = 1/2`
    Plus,
    /// `α = -1/2`
    Minus,
}

/// Residue of the nonabelian branch at `x = q^j` from its closed double-sum form:
/// `+`: `-Σ_{k≥|j|} (-1)^{k+j} q^{(3k²+k-j²+j)/2} / ((q)_{k+j}(q)_{k-j}(q)_k)`;
/// `-`: `-Σ_{k≥|j|} (-1)^j q^{k+j(3j+1)/2} / ((q)_{k+j}(q)_{k-j}(q)_k)`.
pub fn branch_residue_41(branch: Branch, j: i64, prec: i64) -> Result<QSeries> {
    let t = j.abs();
    let expo = |k: i64| match branch {
        Branch::Plus => (3 * k * k + k - j * j + j) / 2,
        Branch::Minus => k + j * (3 * j + 1) / 2,
    };
    let bound = DegreeBound::new(0, |i| expo(t + i));
    sum_bounded(
        |i| {
            let k = t + i;
            let e = expo(k);
            let cap = prec - e;
            let d = qpoch_inv(k + j, cap).mul_to(&qpoch_inv(k - j, cap), Some(cap)).mul_to(&qpoch_inv(k, cap), Some(cap));
            let neg = match branch {
                Branch::Plus => (k + j) % 2 == 0,
                Branch::Minus => j % 2 == 0,
            };
            let s = d.shift_int(e);
            Ok(if neg { -s } else { s })
        },
        &bound,
        prec,
    )
}

/// Coefficient sequence of a nonabelian branch: `q^{k²}/(q)_k` for `+`,
/// `(-1)^k q^{-C(k,2)}/(q)_k` for `-`.
pub fn branch_coefficients(branch: Branch) -> OmegaElement {
    let seq = CoeffSeq::new(Side::P, move |k, cap| {
        let k = k as i64;
        let (s, e) = match branch {
            Branch::Plus => (1, k * k),
            Branch::Minus => (if k % 2 == 0 { 1 } else { -1 }, -binom2(k)),
        };
        Ok(qpoch_inv(k, cap - e).shift_int(e).scale_by_i64(s))
    });
    OmegaElement::new(seq, Some(-1))
}

/// The same residue through the coefficient route, with the prefactor
/// evaluated at `x = q^j` contributing `q^{∓j²}`.
pub fn branch_residue_41_coeff(branch: Branch, j: i64, prec: i64) -> Result<QSeries> {
    let shift = match branch {
        Branch::Plus => -j * j,
        Branch::Minus => j * j,
    };
    Ok(residue_j(&branch_coefficients(branch), j, prec - shift)?.shift_int(shift).truncate(prec))
}

/// Result of comparing a normalized GM coefficient with its tail.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TailReport {
    pub normalized: QSeries,
    pub target: QSeries,
    /// First exponent where they differ (or `prec` if none).
    pub agree_to: i64,
}

/// Tail targets `(q)_∞^{-1} Σ_{n∈Z} q^{n²}` (even) or `(q)_∞^{-1} Σ_{n∈Z} q^{n²+n}` (odd).
pub fn tail_target(odd: bool, prec: i64) -> QSeries {
    let mut th = QSeries::zero();
    let mut n = -prec;
    while n <= prec {
        let e = if odd { n * n + n } else { n * n };
        if e < prec {
            th += &QSeries::monomial(1, e);
        }
        n += 1;
    }
    th.mul_to(&qpoch_inf_inv(prec), Some(prec))
}

/// Compare `q^{-δ(f_k)} f_k` of a knot with the tail of matching parity.
pub fn tail_check(knot: &Knot, k: usize, prec: i64) -> Result<TailReport> {
    let f = knot.f_coeff(k, None)?;
    let d = f.delta().lower().ok_or(Error::InvalidArgument("f_k vanishes".into()))?;
    let normalized = f.shift(-d).truncate(prec);
    let target = tail_target(k % 2 == 1, prec);
    let agree_to = normalized.first_difference(&target).map_or(prec, |e| e.floor().to_integer());
    Ok(TailReport { normalized, target, agree_to })
}
