//! Command-line front end. `run` parses arguments, dispatches, and returns
//! the exit code: 0 on success, 1 on usage errors, 2 on domain errors.

use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::asympt;
use crate::error::{Error, Result};
use crate::knot::{Knot, Registry};
use crate::omega::{lbc_product_bound, omega_mul};
use crate::qcomb::{qpoch_inf_inv, qpoch_inv};
use crate::residue::{self, Branch, Trefoil};
use crate::series::QSeries;
use crate::surgery::{self, Method, SurgeryParams};
use crate::transform::{a_from_f, f_from_a, lbc_check, CoeffSeq, Side};

#[derive(Parser, Debug)]
#[command(name = "qhabiro", version, about = "Gukov-Manolescu series, inverted Habiro series, residues and surgery")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for parallel batches.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Default precision `O(q^N)`.
    #[arg(long, global = true, env = "QHABIRO_PREC", default_value_t = 20)]
    prec: i64,
    /// Report progress on stderr.
    #[arg(short, long, global = true)]
    verbose: bool,
    /// Extra knot definition files.
    #[arg(long = "knots", global = true)]
    knot_files: Vec<String>,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Show a knot's inverted Habiro and GM coefficients.
    Knot(KnotArgs),
    /// Convert between coefficient sequences.
    Transform(TransformArgs),
    /// Residues of the inverted Habiro series.
    Residues(ResidueArgs),
    /// Run a named identity check.
    Verify(VerifyArgs),
    /// Ẑ of integral surgery.
    Surgery(SurgeryArgs),
    /// Park's polynomials.
    ParkPoly(ParkArgs),
    /// Product in the Ω ring.
    ConnectSum(ConnectArgs),
    /// Numerics at roots of unity.
    Asympt(AsymptArgs),
}

#[derive(Args, Debug)]
struct KnotArgs {
    /// Knot name, or `A#B` for a product.
    #[arg(long)]
    knot: Option<String>,
    /// List registered knots.
    #[arg(long)]
    list: bool,
    #[arg(long, default_value_t = 5)]
    k_max: usize,
    /// Use the mirror image.
    #[arg(long)]
    mirror: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Direction {
    AToF,
    FToA,
}

#[derive(Args, Debug)]
struct TransformArgs {
    #[arg(long)]
    knot: Option<String>,
    /// JSON array of series used instead of a knot.
    #[arg(long)]
    input: Option<String>,
    #[arg(long, value_enum, default_value = "a-to-f")]
    direction: Direction,
    #[arg(long, default_value_t = 5)]
    k_max: usize,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Route {
    Direct,
    Theta,
}

#[derive(Args, Debug)]
struct ResidueArgs {
    #[arg(long)]
    knot: String,
    /// Single residue index.
    #[arg(short = 'j', allow_hyphen_values = true)]
    j: Option<i64>,
    /// Symmetric window `-J..=J` when no single index is given.
    #[arg(long, default_value_t = 3)]
    window: i64,
    #[arg(long, value_enum, default_value = "direct")]
    route: Route,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Identity name, or `all`.
    name: String,
}

#[derive(Args, Debug)]
struct SurgeryArgs {
    #[arg(long)]
    knot: String,
    #[arg(short = 'p', allow_hyphen_values = true)]
    p: i64,
    #[arg(short = 'a', default_value_t = 0)]
    a: i64,
    #[arg(long, default_value = "fk")]
    method: String,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ParkMethod {
    Explicit,
    Residue,
}

#[derive(Args, Debug)]
struct ParkArgs {
    #[arg(short = 'p')]
    p: i64,
    #[arg(short = 'a', default_value_t = 0)]
    a: i64,
    #[arg(short = 'k')]
    k: i64,
    #[arg(long, value_enum, default_value = "explicit")]
    method: ParkMethod,
}

#[derive(Args, Debug)]
struct ConnectArgs {
    /// Two knot names.
    #[arg(num_args = 2, required = true)]
    knots: Vec<String>,
    #[arg(long, default_value_t = 6)]
    depth: usize,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mode {
    Period,
    Growth,
    Phi,
    Quotient,
    Csv,
}

#[derive(Args, Debug)]
struct AsymptArgs {
    #[arg(long, default_value = "4_1")]
    knot: String,
    #[arg(long, value_enum)]
    mode: Mode,
    #[arg(long, default_value_t = 100)]
    n_max: usize,
    #[arg(long, default_value_t = asympt::DEFAULT_BITS)]
    bits: usize,
    /// Depth of the perturbative coefficients.
    #[arg(long, default_value_t = 2)]
    depth: usize,
}

/// Output of a command: text for humans, JSON for machines.
struct Output {
    text: String,
    json: serde_json::Value,
}

fn out(text: String, json: serde_json::Value) -> Result<Output> {
    Ok(Output { text, json })
}

fn series_lines(label: &str, s: &[QSeries], start: i64) -> String {
    s.iter().enumerate().map(|(i, x)| format!("{label}[{}] = {x}\n", start + i as i64)).collect()
}

fn to_json<T: Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).expect("serializable")
}

fn get_knot(reg: &Registry, name: &str) -> Result<std::sync::Arc<Knot>> {
    reg.get(name)
}

fn cmd_knot(reg: &Registry, a: &KnotArgs, prec: i64) -> Result<Output> {
    if a.list || a.knot.is_none() {
        let names = reg.names();
        return out(names.join("\n") + "\n", json!({ "knots": names }));
    }
    let name = a.knot.as_deref().unwrap();
    let base = get_knot(reg, name)?;
    let k = if a.mirror { std::sync::Arc::new(base.mirror()?) } else { base };
    let coeffs: Vec<QSeries> = (0..=a.k_max).map(|i| k.a_coeff(i, prec).map(|s| s.truncate(prec))).collect::<Result<_>>()?;
    let f: Vec<QSeries> = k.f_prefix(a.k_max, Some(prec))?.into_iter().map(|s| s.truncate(prec)).collect();
    let lbc = k.lbc();
    let mut text = format!("knot {}\nLBC constant: {}\n", k.name, lbc.map_or("none".into(), |c| c.to_string()));
    text += &series_lines("a", &coeffs, 0);
    text += &series_lines("f", &f, 0);
    out(text, json!({ "name": k.name, "lbc": lbc, "a": to_json(&coeffs), "f": to_json(&f) }))
}

fn cmd_transform(reg: &Registry, a: &TransformArgs, prec: i64) -> Result<Output> {
    let input: Vec<QSeries> = match (&a.input, &a.knot) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::Io(e.to_string()))?;
            serde_json::from_str(&text).map_err(|e| Error::Schema(e.to_string()))?
        }
        (None, Some(name)) => {
            let k = get_knot(reg, name)?;
            match a.direction {
                Direction::AToF => (0..=a.k_max).map(|i| k.a_coeff(i, prec)).collect::<Result<_>>()?,
                Direction::FToA => k.f_prefix(a.k_max, Some(prec))?,
            }
        }
        (None, None) => return Err(Error::InvalidArgument("give --knot or --input".into())),
    };
    let k_max = a.k_max.min(input.len().saturating_sub(1));
    let (label, res) = match a.direction {
        Direction::AToF => ("f", f_from_a(&CoeffSeq::from_list(Side::P, input), k_max, Some(prec))?),
        Direction::FToA => ("a", a_from_f(&CoeffSeq::from_list(Side::F, input), k_max, Some(prec))?),
    };
    let res: Vec<QSeries> = res.into_iter().map(|s| s.truncate(prec)).collect();
    out(series_lines(label, &res, 0), json!({ label: to_json(&res) }))
}

fn cmd_residues(reg: &Registry, a: &ResidueArgs, prec: i64) -> Result<Output> {
    let k = get_knot(reg, &a.knot)?;
    let js: Vec<i64> = match a.j {
        Some(j) => vec![j],
        None => (-a.window..=a.window).collect(),
    };
    let rs: Vec<QSeries> = js
        .iter()
        .map(|&j| match a.route {
            Route::Direct => residue::residue_j(&k.omega, j, prec),
            Route::Theta => residue::residue_theta(&k, j, prec),
        })
        .collect::<Result<_>>()?;
    if let [r] = rs.as_slice() {
        return out(format!("{r}\n"), to_json(r));
    }
    let text: String = js.iter().zip(&rs).map(|(j, r)| format!("r[{j}] = {r}\n")).collect();
    let map: serde_json::Map<String, serde_json::Value> = js.iter().zip(&rs).map(|(j, r)| (j.to_string(), to_json(r))).collect();
    out(text, json!({ "residues": map }))
}

/// Names accepted by `verify`.
pub const IDENTITIES: [&str; 11] = [
    "pentagonal",
    "hecke-rogers",
    "fig8-sum",
    "residue-symmetry",
    "theta-route",
    "trefoil-recurrence-l",
    "trefoil-recurrence-r",
    "tails-even",
    "tails-odd",
    "branch-half",
    "descendant-g0",
];

/// Result of one identity check.
#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub name: String,
    pub ok: bool,
    pub detail: String,
}

fn report(name: &str, ok: bool, detail: String) -> IdentityReport {
    IdentityReport { name: name.into(), ok, detail }
}

fn defect_report(name: &str, d: &QSeries, prec: i64) -> IdentityReport {
    if d.is_zero() {
        report(name, true, format!("defect 0 to O(q^{prec})"))
    } else {
        report(name, false, format!("defect {d}"))
    }
}

/// Run a named identity to `O(q^prec)`.
pub fn verify_identity(reg: &Registry, name: &str, prec: i64) -> Result<IdentityReport> {
    let knot = |n: &str| reg.get(n);
    Ok(match name {
        "pentagonal" => defect_report(name, &residue::residue_theorem_check(&knot("3_1l")?.omega, prec)?, prec),
        "hecke-rogers" => defect_report(name, &residue::residue_theorem_check(&knot("3_1r")?.omega, prec)?, prec),
        "fig8-sum" => defect_report(name, &residue::residue_theorem_check(&knot("4_1")?.omega, prec)?, prec),
        "residue-symmetry" => {
            let mut ok = true;
            for n in ["3_1l", "3_1r", "4_1"] {
                ok &= residue::residue_family(&knot(n)?.omega, 4, prec)?.symmetric();
            }
            report(name, ok, format!("r_(-j) = q^(-j) r_j for |j| <= 4 to O(q^{prec})"))
        }
        "theta-route" => {
            let mut bad = Vec::new();
            for n in ["3_1l", "3_1r", "4_1"] {
                let k = knot(n)?;
                for j in -3..=3 {
                    let d = &residue::residue_j(&k.omega, j, prec)? - &residue::residue_theta(&k, j, prec)?;
                    if !d.is_zero() {
                        bad.push(format!("{n} j={j}"));
                    }
                }
            }
            let ok = bad.is_empty();
            defect_report(name, &if ok { QSeries::o(prec) } else { QSeries::one() }, prec)
                .with_detail(ok, format!("mismatch at {}", bad.join(", ")))
        }
        "trefoil-recurrence-l" => {
            let r = residue::trefoil_recurrence_check(&*knot("3_1l")?, Trefoil::L, 6, prec)?;
            report(name, r.holds, format!("r_(j+1) = -q^(3j+2) r_j for 0 <= j < 6 to O(q^{prec})"))
        }
        "trefoil-recurrence-r" => {
            let r = residue::trefoil_recurrence_check(&*knot("3_1r")?, Trefoil::R, 6, prec)?;
            report(name, r.holds, format!("recurrence on 0 <= j < 6 to O(q^{prec}); stabilization {:?}", r.stabilization))
        }
        "tails-even" | "tails-odd" => {
            let k = if name == "tails-even" { 20 } else { 21 };
            let t = residue::tail_check(&*knot("4_1")?, k, prec)?;
            let need = 8.min(prec);
            report(name, t.agree_to >= need, format!("f_{k} tail agrees to O(q^{})", t.agree_to))
        }
        "branch-half" => {
            let p = qpoch_inf_inv(prec);
            let k = knot("4_1")?;
            let mut ok = true;
            for j in -3..=3 {
                let lhs = residue::branch_residue_41(Branch::Plus, j, prec)?;
                ok &= lhs == residue::residue_j(&k.omega, j, prec)?.mul_to(&p, Some(prec));
            }
            report(name, ok, format!("res P_j = r_j / (q)_inf for |j| <= 3 to O(q^{prec})"))
        }
        "descendant-g0" => {
            let d = residue::descendant(&knot("4_1")?.omega, 1)?;
            let r0 = residue::residue_j(&d, 0, prec)?;
            let mut g = QSeries::o(prec);
            for k in 0..prec {
                let e = k * (k + 1) / 2 + k;
                if e >= prec {
                    break;
                }
                let inv = qpoch_inv(k, prec - e);
                let t = inv.mul_to(&inv, Some(prec - e)).shift_int(e);
                g = if k % 2 == 0 { &g - &t } else { &g + &t };
            }
            defect_report(name, &(&r0 - &g), prec)
        }
        _ => return Err(Error::InvalidArgument(format!("unknown identity `{name}`; known: {}", IDENTITIES.join(", ")))),
    })
}

impl IdentityReport {
    fn with_detail(mut self, ok: bool, fail: String) -> Self {
        if !ok {
            self.detail = fail;
        }
        self
    }
}

fn cmd_verify(reg: &Registry, a: &VerifyArgs, prec: i64, mut progress: Option<&mut (dyn Write + Send)>) -> Result<(Output, bool)> {
    let names: Vec<&str> = if a.name == "all" { IDENTITIES.to_vec() } else { vec![a.name.as_str()] };
    let mut reports = Vec::with_capacity(names.len());
    for n in &names {
        if let Some(w) = progress.as_deref_mut() {
            let _ = writeln!(w, "checking {n}");
        }
        reports.push(verify_identity(reg, n, prec)?);
    }
    let ok = reports.iter().all(|r| r.ok);
    let text: String = reports
        .iter()
        .map(|r| {
            let tag = if r.ok { "OK" } else { "FAIL" };
            if names.len() == 1 { format!("{tag}: {}\n", r.detail) } else { format!("{tag} {}: {}\n", r.name, r.detail) }
        })
        .collect();
    Ok((Output { text, json: to_json(&reports) }, ok))
}

fn cmd_surgery(reg: &Registry, a: &SurgeryArgs, prec: i64) -> Result<Output> {
    let k = get_knot(reg, &a.knot)?;
    let method: Method = a.method.parse()?;
    let z = surgery::zhat(&k, SurgeryParams::new(a.p, a.a, prec, method)?)?;
    let sign = if z.sign_flipped { "-" } else { "" };
    let two = if z.two_power == 0 { String::new() } else { format!("2^({}) ", z.two_power) };
    out(format!("Zhat = {sign}{two}q^({}) * ({})\n", z.delta, z.series), to_json(&z))
}

fn cmd_park(a: &ParkArgs) -> Result<Output> {
    let p = match a.method {
        ParkMethod::Explicit => surgery::park_poly_explicit(a.p, a.a, a.k)?,
        ParkMethod::Residue => surgery::park_poly_residue(a.p, a.a, a.k)?,
    };
    out(format!("{p}\n"), to_json(&p))
}

fn cmd_connect(reg: &Registry, a: &ConnectArgs, prec: i64) -> Result<Output> {
    let (x, y) = (get_knot(reg, &a.knots[0])?, get_knot(reg, &a.knots[1])?);
    let prod = omega_mul(&x.omega, &y.omega, a.depth, prec)?;
    let coeffs: Vec<QSeries> = (0..=a.depth).map(|k| prod.coeff(k, prec).map(|s| s.truncate(prec))).collect::<Result<_>>()?;
    let bound = match (x.lbc(), y.lbc()) {
        (Some(ca), Some(cb)) => Some((ca + cb, lbc_product_bound(&prod, ca, cb, a.depth, prec)?)),
        _ => None,
    };
    let mut text = series_lines("a", &coeffs, 0);
    if let Some((c, ok)) = bound {
        text += &format!("LBC bound with C = {c}: {}\n", if ok { "holds" } else { "violated" });
    }
    let observed = lbc_check(&prod.seq, a.depth).ok().map(|r| r.best_constant);
    out(text, json!({ "a": to_json(&coeffs), "lbc_bound": bound.map(|b| json!({"constant": b.0, "holds": b.1})), "observed_constant": observed }))
}

fn cmd_asympt(reg: &Registry, a: &AsymptArgs) -> Result<Output> {
    if a.bits < 64 {
        return Err(Error::InvalidArgument("bits must be at least 64".into()));
    }
    let k = get_knot(reg, &a.knot)?;
    match a.mode {
        Mode::Period => {
            let r = asympt::periodicity_check(&k, a.n_max, a.bits, 1e-9)?;
            out(format!("period {} (sequence f_(n-1)(zeta_n)), values {:?}\n", r.period, r.values), to_json(&r))
        }
        Mode::Growth => {
            let lo = (a.n_max / 2).max(2) as i64;
            let step = ((a.n_max as i64 - lo) / 10).max(1);
            let ns: Vec<i64> = (lo..=a.n_max as i64).step_by(step as usize).collect();
            let g = asympt::growth_rate(&k, &ns, a.bits)?;
            out(format!("growth {:.10}{}\n", g.estimate, if g.unstable { " (unstable)" } else { "" }), to_json(&g))
        }
        Mode::Phi => {
            let hi = a.n_max as i64;
            let lo = (hi * 2 / 5).max(10);
            let step = ((hi - lo) / 24).max(1);
            let ns: Vec<i64> = (lo..=hi).step_by(step as usize).collect();
            let p = asympt::extract_phi(&k, a.depth, &ns, a.bits)?;
            out(format!("c = {:?}\n", p.coeffs), to_json(&p))
        }
        Mode::Quotient => {
            let q = asympt::phi_quotient_check(a.depth.min(3))?;
            let s: Vec<String> = q.iter().map(|c| c.to_string()).collect();
            out(format!("({})\n", s.join(", ")), json!({ "coeffs": s }))
        }
        Mode::Csv => {
            let ns: Vec<i64> = (1..=a.n_max as i64).collect();
            let csv = asympt::csv_rows(&k, &ns, a.bits)?;
            out(csv.clone(), json!({ "csv": csv }))
        }
    }
}

fn dispatch(cli: &Cli, stderr: &mut (dyn Write + Send)) -> Result<(Output, bool)> {
    let reg = Registry::new();
    for path in &cli.knot_files {
        let names = reg.load_knots(path)?;
        if cli.verbose {
            let _ = writeln!(stderr, "loaded {} from {path}", names.join(", "));
        }
    }
    if cli.verbose {
        let _ = writeln!(stderr, "running {:?} at O(q^{})", cli.cmd, cli.prec);
    }
    let prec = cli.prec;
    if prec < 1 {
        return Err(Error::InvalidArgument("prec must be positive".into()));
    }
    let done = |o: Result<Output>| o.map(|o| (o, true));
    match &cli.cmd {
        Command::Knot(a) => done(cmd_knot(&reg, a, prec)),
        Command::Transform(a) => done(cmd_transform(&reg, a, prec)),
        Command::Residues(a) => done(cmd_residues(&reg, a, prec)),
        Command::Verify(a) => cmd_verify(&reg, a, prec, cli.verbose.then_some(stderr)),
        Command::Surgery(a) => done(cmd_surgery(&reg, a, prec)),
        Command::ParkPoly(a) => done(cmd_park(a)),
        Command::ConnectSum(a) => done(cmd_connect(&reg, a, prec)),
        Command::Asympt(a) => done(cmd_asympt(&reg, a)),
    }
}

/// Parse `args` (including the program name), run, and return the exit code.
pub fn run<I, S>(args: I, stdout: &mut dyn Write, stderr: &mut (dyn Write + Send)) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(stdout, "{text}") } else { write!(stderr, "{text}") };
            return code;
        }
    };
    let result = match cli.jobs {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build() {
            Ok(pool) => pool.install(|| dispatch(&cli, stderr)),
            Err(e) => Err(Error::InvalidArgument(e.to_string())),
        },
        None => dispatch(&cli, stderr),
    };
    match result {
        Ok((o, ok)) => {
            let _ = if cli.json { writeln!(stdout, "{}", o.json) } else { write!(stdout, "{}", o.text) };
            if ok {
                0
            } else {
                2
            }
        }
        Err(e) => {
            if cli.json {
                let _ = writeln!(stdout, "{}", json!({ "error": { "kind": e.code(), "message": e.to_string() } }));
            }
            let _ = writeln!(stderr, "error: {e}");
            2
        }
    }
}
