//! Knot registry: built-in coefficient generators, user-defined knots
//! loaded from JSON, mirrors and connected sums.
//!
//! Built-ins: `unknot` (`σ_0 = 1`), `3_1l`, `3_1r`, `4_1`. A name of the
//! form `A#B#...` resolves to the connected sum of registered knots.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::path::Path;
use std::sync::{Arc, RwLock};

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::omega::{omega_product, OmegaElement, EXACT_CAP};
use crate::qcomb::{jacobi_symbol, qbinom};
use crate::series::{Exp, QSeries};
use crate::transform::{f_from_a_slice, lbc_check, CoeffSeq, Side};

/// Number of indices on which a closed form is compared with the transform.
pub const CLOSED_FORM_CHECK: usize = 8;
/// Indices on which MONOMIAL exponents must be integral.
pub const MONOMIAL_CHECK: i64 = 64;

/// Sign `(-1)^{alpha k + beta}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignPattern {
    pub alpha: i64,
    pub beta: i64,
}

/// Quadratic exponent `c2 k^2 + c1 k + c0` with rational coefficients
/// written as strings such as `"1/2"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadExp {
    pub c2: String,
    pub c1: String,
    pub c0: String,
}

/// How the inverted Habiro coefficients of a knot are produced.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GeneratorSpec {
    Builtin { name: String },
    Monomial { sign: SignPattern, exponent: QuadExp },
    List { coeffs: Vec<QSeries> },
    Composite { summands: Vec<String> },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Convention {
    #[serde(default)]
    pub x_half_shift: bool,
}

/// A knot definition as it appears in a knot file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnotSpec {
    pub name: String,
    pub generator: GeneratorSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f_closed_form: Option<String>,
    #[serde(default)]
    pub convention: Convention,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub crossing: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chirality: Option<String>,
}

/// Closed forms for GM coefficients known independently of the transform.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClosedForm {
    /// `f_n = Σ_i [n+i choose 2i]`.
    FigureEight,
    /// `f_k = -(3 | 2k+1) q^{-k(k+1)/6 - 1}`.
    TrefoilLeft,
    /// `f_k = -(3 | 2k+1) q^{k(k+1)/6 + 1}`.
    TrefoilRight,
}

impl ClosedForm {
    pub fn parse(s: &str) -> Result<Self> {
        match s.strip_prefix("builtin:").unwrap_or(s) {
            "4_1" => Ok(ClosedForm::FigureEight),
            "3_1l" => Ok(ClosedForm::TrefoilLeft),
            "3_1r" => Ok(ClosedForm::TrefoilRight),
            other => Err(Error::Schema(format!("unknown closed form `{other}`"))),
        }
    }

    pub fn mirror(self) -> Self {
        match self {
            ClosedForm::FigureEight => ClosedForm::FigureEight,
            ClosedForm::TrefoilLeft => ClosedForm::TrefoilRight,
            ClosedForm::TrefoilRight => ClosedForm::TrefoilLeft,
        }
    }

    pub fn eval(self, k: usize) -> QSeries {
        let k = k as i64;
        match self {
            ClosedForm::FigureEight => {
                let mut s = QSeries::zero();
                for i in 0..=k {
                    s += &qbinom(k + i, 2 * i);
                }
                s
            }
            ClosedForm::TrefoilLeft | ClosedForm::TrefoilRight => {
                let j = jacobi_symbol(3, 2 * k + 1).expect("odd modulus");
                if j == 0 {
                    return QSeries::zero();
                }
                let e = k * (k + 1) / 6 + 1;
                let e = if self == ClosedForm::TrefoilLeft { -e } else { e };
                QSeries::monomial(-(j as i64), e)
            }
        }
    }
}

fn parse_rat(s: &str) -> Result<Exp> {
    let s = s.trim();
    let bad = || Error::Schema(format!("bad rational `{s}`"));
    match s.split_once('/') {
        Some((n, d)) => {
            let d: i64 = d.trim().parse().map_err(|_| bad())?;
            if d == 0 {
                return Err(bad());
            }
            Ok(Ratio::new(n.trim().parse().map_err(|_| bad())?, d))
        }
        None => Ok(Ratio::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// A monomial generator `(-1)^{αk+β} q^{c2 k^2 + c1 k + c0}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Monomial {
    pub alpha: i64,
    pub beta: i64,
    pub c: [Exp; 3],
}

impl Monomial {
    fn from_spec(sign: &SignPattern, e: &QuadExp) -> Result<Self> {
        Ok(Monomial { alpha: sign.alpha, beta: sign.beta, c: [parse_rat(&e.c2)?, parse_rat(&e.c1)?, parse_rat(&e.c0)?] })
    }

    pub fn exponent(&self, k: i64) -> Exp {
        let k = Ratio::from_integer(k);
        self.c[0] * k * k + self.c[1] * k + self.c[2]
    }

    pub fn term(&self, k: i64) -> Result<QSeries> {
        let e = self.exponent(k);
        if !e.is_integer() {
            return Err(Error::NonIntegralExponent(k));
        }
        let s = if (self.alpha * k + self.beta).rem_euclid(2) == 0 { 1 } else { -1 };
        Ok(QSeries::monomial(s, e.to_integer()))
    }

    fn check(&self) -> Result<()> {
        for k in 0..=MONOMIAL_CHECK {
            if !self.exponent(k).is_integer() {
                return Err(Error::NonIntegralExponent(k));
            }
        }
        Ok(())
    }

    /// Exact LBC constant, `None` if the condition fails.
    pub fn lbc_constant(&self) -> Option<i64> {
        let half = Ratio::new(1, 2);
        let a2 = self.c[0] + half;
        let a1 = self.c[1] - half;
        let a0 = self.c[2] - Ratio::from_integer(1);
        if a2 < Ratio::from_integer(0) || (a2 == Ratio::from_integer(0) && a1 < Ratio::from_integer(0)) {
            return None;
        }
        let mut top = MONOMIAL_CHECK;
        if a2 > Ratio::from_integer(0) {
            let v = (-a1 / (a2 * Ratio::from_integer(2))).ceil().to_integer();
            top = top.max(v + 1);
        }
        let g = |k: i64| {
            let kr = Ratio::from_integer(k);
            a2 * kr * kr + a1 * kr + a0
        };
        (0..=top).map(g).min().map(|m| m.floor().to_integer())
    }

    pub fn mirror(&self) -> Self {
        Monomial { alpha: self.alpha, beta: self.beta, c: [-self.c[0], -self.c[1], -self.c[2]] }
    }
}

pub fn trefoil_left() -> Monomial {
    Monomial { alpha: 1, beta: 1, c: [Ratio::new(1, 2), Ratio::new(-1, 2), Ratio::from_integer(-1)] }
}

pub fn trefoil_right() -> Monomial {
    trefoil_left().mirror()
}

pub fn figure_eight() -> Monomial {
    Monomial { alpha: 0, beta: 0, c: [Ratio::from_integer(0); 3] }
}

/// A resolved knot: its inverted Habiro coefficients and derived data.
pub struct Knot {
    pub name: String,
    pub omega: OmegaElement,
    /// True when every coefficient is an exact Laurent polynomial.
    pub exact: bool,
    pub closed_form: Option<ClosedForm>,
    pub monomial: Option<Monomial>,
    pub spec: Option<KnotSpec>,
    f_cache: RwLock<Vec<QSeries>>,
    closed_checked: RwLock<Option<std::result::Result<(), Error>>>,
}

impl std::fmt::Debug for Knot {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Knot").field("name", &self.name).field("lbc", &self.omega.lbc).field("exact", &self.exact).finish()
    }
}

impl Knot {
    fn build(name: &str, omega: OmegaElement, exact: bool, closed_form: Option<ClosedForm>, monomial: Option<Monomial>) -> Self {
        Knot {
            name: name.to_string(),
            omega,
            exact,
            closed_form,
            monomial,
            spec: None,
            f_cache: RwLock::new(Vec::new()),
            closed_checked: RwLock::new(None),
        }
    }

    pub fn from_monomial(name: &str, m: Monomial, closed_form: Option<ClosedForm>) -> Result<Self> {
        m.check()?;
        let lbc = m.lbc_constant();
        let seq = CoeffSeq::new(Side::P, move |k, _| m.term(k as i64));
        Ok(Self::build(name, OmegaElement::new(seq, lbc), true, closed_form, Some(m)))
    }

    pub fn unknot() -> Self {
        Self::build("unknot", OmegaElement::unit(), true, None, None)
    }

    /// A knot given by an explicit finite list of coefficients.
    pub fn from_list(name: &str, coeffs: Vec<QSeries>) -> Result<Self> {
        let exact = coeffs.iter().all(QSeries::is_exact);
        let n = coeffs.len();
        let seq = CoeffSeq::from_list(Side::P, coeffs);
        let lbc = if n == 0 { None } else { Some(lbc_check(&seq, n - 1)?.best_constant) };
        Ok(Self::build(name, OmegaElement::new(seq, lbc), exact, None, None))
    }

    pub fn from_omega(name: &str, omega: OmegaElement) -> Self {
        Self::build(name, omega, false, None, None)
    }

    /// LBC constant, if known.
    pub fn lbc(&self) -> Option<i64> {
        self.omega.lbc
    }

    pub fn lbc_required(&self) -> Result<i64> {
        self.omega.lbc.ok_or(Error::LbcRequired)
    }

    /// `a_{-k-1}` known to at least `O(q^cap)`.
    pub fn a_coeff(&self, k: usize, cap: i64) -> Result<QSeries> {
        self.omega.coeff(k, cap)
    }

    /// `a_{-k-1}` exactly.
    pub fn a_exact(&self, k: usize) -> Result<QSeries> {
        if !self.exact {
            return Err(Error::MirrorNeedsExact);
        }
        self.omega.coeff(k, EXACT_CAP)
    }

    pub fn sigma0(&self) -> Option<&QSeries> {
        self.omega.seq.sigma0()
    }

    fn check_closed_form(&self) -> Result<()> {
        let Some(cf) = self.closed_form else { return Ok(()) };
        if let Some(r) = self.closed_checked.read().expect("lock").as_ref() {
            return r.clone();
        }
        let f = self.f_transform_prefix(CLOSED_FORM_CHECK - 1)?;
        let mut r = Ok(());
        for (k, fk) in f.iter().enumerate() {
            if cf.eval(k) != *fk {
                r = Err(Error::ClosedFormInconsistent(self.name.clone(), k));
                break;
            }
        }
        *self.closed_checked.write().expect("lock") = Some(r.clone());
        r
    }

    /// Exact `f_0..=f_K` through the transform (exact knots only).
    fn f_transform_prefix(&self, k_max: usize) -> Result<Vec<QSeries>> {
        if let Some(v) = self.f_cache.read().expect("lock").get(..=k_max) {
            return Ok(v.to_vec());
        }
        let n = (k_max + 1).max(2 * self.f_cache.read().expect("lock").len());
        let a: Vec<QSeries> = (0..n).map(|k| self.a_exact(k)).collect::<Result<_>>()?;
        let f = f_from_a_slice(&a, self.sigma0());
        let out = f[..=k_max].to_vec();
        *self.f_cache.write().expect("lock") = f;
        Ok(out)
    }

    /// `f_0..=f_K`; exact knots give exact values (closed form when present,
    /// validated on first use), others are truncated at `O(q^prec)`.
    pub fn f_prefix(&self, k_max: usize, prec: Option<i64>) -> Result<Vec<QSeries>> {
        if self.exact {
            if let Some(cf) = self.closed_form {
                self.check_closed_form()?;
                return Ok((0..=k_max).map(|k| cf.eval(k)).collect());
            }
            return self.f_transform_prefix(k_max);
        }
        let prec = prec.ok_or_else(|| Error::InvalidArgument(format!("knot `{}` needs a precision", self.name)))?;
        crate::transform::f_from_a(&self.omega.seq, k_max, Some(prec))
    }

    /// `f_0..=f_K` with `f_i` known at least to `O(q^{caps[i]})`.
    pub fn f_prefix_caps(&self, caps: &[i64]) -> Result<Vec<QSeries>> {
        if self.exact || caps.is_empty() {
            return self.f_prefix(caps.len().saturating_sub(1), caps.iter().copied().max());
        }
        crate::transform::f_from_a_caps(&self.omega.seq, caps)
    }

    /// A single GM coefficient.
    pub fn f_coeff(&self, k: usize, prec: Option<i64>) -> Result<QSeries> {
        if self.exact {
            if let Some(cf) = self.closed_form {
                self.check_closed_form()?;
                return Ok(cf.eval(k));
            }
        }
        Ok(self.f_prefix(k, prec)?.pop().expect("nonempty"))
    }

    /// The mirror image `q -> q^{-1}`; exact coefficients only.
    pub fn mirror(&self) -> Result<Knot> {
        if !self.exact {
            return Err(Error::MirrorNeedsExact);
        }
        let name = mirror_name(&self.name);
        if let Some(m) = self.monomial {
            return Knot::from_monomial(&name, m.mirror(), self.closed_form.map(ClosedForm::mirror));
        }
        let src = self.omega.seq.clone();
        let mut seq = CoeffSeq::new(Side::P, move |k, _| src.get(k, EXACT_CAP)?.mirror());
        if let Some(m) = self.omega.seq.max_index() {
            seq = seq.with_max_index(m);
        }
        if let Some(s) = self.sigma0() {
            seq = seq.with_sigma0(s.mirror()?);
        }
        let depth = self.omega.seq.max_index().unwrap_or(30);
        let lbc = lbc_check(&seq, depth)?.best_constant;
        Ok(Knot::build(&name, OmegaElement::new(seq, Some(lbc)), true, self.closed_form.map(ClosedForm::mirror), None))
    }
}

fn mirror_name(n: &str) -> String {
    match n {
        "3_1l" => "3_1r".into(),
        "3_1r" => "3_1l".into(),
        "4_1" | "unknot" => n.into(),
        _ => match n.strip_prefix("m(").and_then(|s| s.strip_suffix(')')) {
            Some(inner) => inner.to_string(),
            None => format!("m({n})"),
        },
    }
}

/// Named knots, built-in and loaded.
pub struct Registry {
    specs: RwLock<BTreeMap<String, KnotSpec>>,
    cache: RwLock<HashMap<String, Arc<Knot>>>,
}

impl Default for Registry {
    fn default() -> Self {
        Self::new()
    }
}

pub const BUILTINS: [&str; 4] = ["unknot", "3_1l", "3_1r", "4_1"];

impl Registry {
    /// A registry holding the built-in knots.
    pub fn new() -> Self {
        let r = Registry { specs: RwLock::new(BTreeMap::new()), cache: RwLock::new(HashMap::new()) };
        for b in BUILTINS {
            r.specs.write().expect("lock").insert(
                b.to_string(),
                KnotSpec {
                    name: b.to_string(),
                    generator: GeneratorSpec::Builtin { name: b.to_string() },
                    f_closed_form: None,
                    convention: Convention::default(),
                    crossing: None,
                    chirality: None,
                },
            );
        }
        r
    }

    pub fn names(&self) -> Vec<String> {
        self.specs.read().expect("lock").keys().cloned().collect()
    }

    pub fn spec(&self, name: &str) -> Option<KnotSpec> {
        self.specs.read().expect("lock").get(name).cloned()
    }

    /// Resolve a knot by name (`A#B` for connected sums).
    pub fn get(&self, name: &str) -> Result<Arc<Knot>> {
        self.get_inner(name, &mut HashSet::new())
    }

    fn get_inner(&self, name: &str, stack: &mut HashSet<String>) -> Result<Arc<Knot>> {
        if let Some(k) = self.cache.read().expect("lock").get(name) {
            return Ok(k.clone());
        }
        if !stack.insert(name.to_string()) {
            return Err(Error::CyclicComposite(name.to_string()));
        }
        let knot = if name.contains('#') {
            let parts: Vec<String> = name.split('#').map(|s| s.trim().to_string()).collect();
            self.composite(name, &parts, stack)?
        } else {
            let spec = self.spec(name).ok_or_else(|| Error::UnknownKnot(name.to_string()))?;
            self.build(&spec, stack)?
        };
        stack.remove(name);
        let knot = Arc::new(knot);
        self.cache.write().expect("lock").insert(name.to_string(), knot.clone());
        Ok(knot)
    }

    fn composite(&self, name: &str, parts: &[String], stack: &mut HashSet<String>) -> Result<Knot> {
        if parts.is_empty() {
            return Err(Error::Schema("composite without summands".into()));
        }
        let mut acc = self.get_inner(&parts[0], stack)?.omega.clone();
        for p in &parts[1..] {
            let k = self.get_inner(p, stack)?;
            acc = omega_product(&acc, &k.omega, None)?;
        }
        if parts.len() == 1 {
            let k = self.get_inner(&parts[0], stack)?;
            let mut out = Knot::build(name, acc, k.exact, k.closed_form, k.monomial);
            out.spec = k.spec.clone();
            return Ok(out);
        }
        Ok(Knot::from_omega(name, acc))
    }

    fn build(&self, spec: &KnotSpec, stack: &mut HashSet<String>) -> Result<Knot> {
        if spec.convention.x_half_shift {
            return Err(Error::UnsupportedConvention("x_half_shift = true".into()));
        }
        let cf = spec.f_closed_form.as_deref().map(ClosedForm::parse).transpose()?;
        let mut k = match &spec.generator {
            GeneratorSpec::Builtin { name } => match name.as_str() {
                "unknot" => Knot::unknot(),
                "3_1l" => Knot::from_monomial("3_1l", trefoil_left(), Some(ClosedForm::TrefoilLeft))?,
                "3_1r" => Knot::from_monomial("3_1r", trefoil_right(), Some(ClosedForm::TrefoilRight))?,
                "4_1" => Knot::from_monomial("4_1", figure_eight(), Some(ClosedForm::FigureEight))?,
                other => return Err(Error::UnknownKnot(other.to_string())),
            },
            GeneratorSpec::Monomial { sign, exponent } => {
                Knot::from_monomial(&spec.name, Monomial::from_spec(sign, exponent)?, None)?
            }
            GeneratorSpec::List { coeffs } => Knot::from_list(&spec.name, coeffs.clone())?,
            GeneratorSpec::Composite { summands } => self.composite(&spec.name, summands, stack)?,
        };
        k.name = spec.name.clone();
        if cf.is_some() {
            k.closed_form = cf;
        }
        k.spec = Some(spec.clone());
        Ok(k)
    }

    /// Register a knot definition; validates it by building it.
    pub fn register(&self, spec: KnotSpec) -> Result<()> {
        if spec.name.is_empty() || spec.name.contains('#') {
            return Err(Error::Schema(format!("invalid knot name `{}`", spec.name)));
        }
        let old = self.specs.write().expect("lock").insert(spec.name.clone(), spec.clone());
        self.cache.write().expect("lock").remove(&spec.name);
        if let Err(e) = self.get(&spec.name) {
            let mut s = self.specs.write().expect("lock");
            match old {
                Some(o) => s.insert(spec.name.clone(), o),
                None => s.remove(&spec.name),
            };
            return Err(e);
        }
        Ok(())
    }

    /// Load one knot or an array of knots from JSON text.
    pub fn load_str(&self, text: &str) -> Result<Vec<String>> {
        let v: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
        let items = match v {
            serde_json::Value::Array(a) => a,
            other => vec![other],
        };
        let specs: Vec<KnotSpec> = items
            .into_iter()
            .map(|i| serde_json::from_value(i).map_err(|e| Error::Schema(e.to_string())))
            .collect::<Result<_>>()?;
        let mut names = Vec::new();
        for s in specs {
            names.push(s.name.clone());
            self.register(s)?;
        }
        Ok(names)
    }

    /// Load knots from a JSON file.
    pub fn load_knots(&self, path: impl AsRef<Path>) -> Result<Vec<String>> {
        let text = std::fs::read_to_string(path.as_ref()).map_err(|e| Error::Io(e.to_string()))?;
        self.load_str(&text)
    }
}
