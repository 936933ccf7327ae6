//! Command-line front end.
//!
//! Every subcommand prints one JSON document on a single line, followed by
//! a human-readable table whose lines start with `#`. Exit codes: 0 when
//! every claim checked passed, 1 on a certified failure, 2 when some result
//! stayed undetermined, 3 on usage, input or cache errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use rug::{Integer, Rational};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::integral::{lemma1_check, saddle_scaling, CubatureConfig, LogSeries};
use crate::numerics::{Ball, PrecisionPolicy, SignTag};
use crate::sector::{height_preset, height_report, pf_bounds, poly_from_zeros, sector_of_zeros, Zero, ZeroSet};
use crate::toeplitz::{apf_scan, minor_report, verdict_of, Refine, ScanConfig, SequenceWindow, Verdict};
use crate::turan::{t2_det_compare, TuranGrid};
use crate::xicoeffs::{CoeffTable, PhiConfig};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_UNDETERMINED: i32 = 2;
pub const EXIT_USAGE: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "pfzeta", version, about = "Certified multiple-positivity tests for power-series coefficients")]
struct Cli {
    /// Also write the JSON report to this file.
    #[arg(long, global = true)]
    report: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct PrecArgs {
    /// Starting working precision in bits.
    #[arg(long = "prec-bits", default_value_t = 256)]
    prec_bits: u32,
    /// Largest precision the escalation ladder may reach.
    #[arg(long = "max-bits", default_value_t = 16384)]
    max_bits: u32,
}

impl PrecArgs {
    fn policy(&self) -> Result<PrecisionPolicy> {
        PrecisionPolicy::new(self.prec_bits, self.max_bits)
    }

    fn to_json(&self) -> Value {
        json!({"prec_bits": self.prec_bits, "max_bits": self.max_bits})
    }
}

#[derive(Args, Debug, Clone)]
struct SourceArgs {
    /// Coefficient cache written by `coeffs`.
    #[arg(long, conflicts_with_all = ["poly", "exp"])]
    input: Option<PathBuf>,
    /// Polynomial coefficients a_0,a_1,... (integers, fractions or decimals).
    #[arg(long, allow_hyphen_values = true, conflicts_with = "exp")]
    poly: Option<String>,
    /// Window of e^{cz} for the given c.
    #[arg(long, allow_hyphen_values = true)]
    exp: Option<String>,
    /// Last index of the e^{cz} window.
    #[arg(long = "len", default_value_t = 80)]
    len: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute the xi1 coefficient table and optionally write a cache.
    Coeffs {
        #[arg(long, default_value_t = 100)]
        kmax: usize,
        #[arg(long = "tmax", default_value_t = 4.0)]
        t_max: f64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        prec: PrecArgs,
    },
    /// Signs of the consecutive Toeplitz minors A_k^nu.
    Minors {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, default_value = "1:8")]
        nu: String,
        #[arg(long, default_value = "0:40")]
        krange: String,
        /// Rescale each k by a power of two near its saddle radius.
        #[arg(long)]
        saddle: bool,
        #[command(flatten)]
        prec: PrecArgs,
    },
    /// Turán chains T_n(k) and the determinant form of T_2.
    Turan {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, default_value_t = 1)]
        nmax: usize,
        #[arg(long, default_value = "1:60")]
        krange: String,
        /// k range for the T_2 determinant comparison.
        #[arg(long = "t2")]
        t2: Option<String>,
    },
    /// Zero-free sector and the PF orders it implies.
    Sector {
        /// Height of the zero-free rectangle.
        #[arg(long, conflicts_with_all = ["preset", "zeros"])]
        height: Option<String>,
        /// Named height: rectangle or first-zero.
        #[arg(long, conflicts_with = "zeros")]
        preset: Option<String>,
        /// Zeros separated by ';': `re,im`, `re`, or `modulus@arg/pi`.
        #[arg(long, allow_hyphen_values = true)]
        zeros: Option<String>,
        #[arg(long = "prec-bits", default_value_t = 256)]
        prec_bits: u32,
    },
    /// Toeplitz minor against its torus integral.
    Lemma1 {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        nu: usize,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        eta: String,
        #[arg(long, default_value_t = 64)]
        nodes: usize,
        /// Largest acceptable relative residual.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Least n whose product with e^{nz} or cosh(n sqrt z) passes a scan.
    Multiplier {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, default_value = "exp")]
        kind: String,
        #[arg(long, default_value_t = 3)]
        m: usize,
        #[arg(long, default_value = "0:30")]
        krange: String,
        #[arg(long, default_value_t = 64)]
        ncap: u64,
        #[command(flatten)]
        prec: PrecArgs,
    },
    /// Least shift N with all minors of the shifted window nonnegative.
    Apf {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 16)]
        ncap: usize,
        #[arg(long, default_value_t = 12)]
        cols: usize,
        #[arg(long, default_value_t = 1_000_000)]
        budget: u128,
    },
}

/// Parses `p`, `p/q` or a decimal such as `-0.125` exactly.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let err = || Error::Parse(format!("not a rational number: {s:?}"));
    if let Some((n, d)) = t.split_once('/') {
        let n: Integer = n.trim().parse().map_err(|_| err())?;
        let d: Integer = d.trim().parse().map_err(|_| err())?;
        if d == 0 {
            return Err(err());
        }
        return Ok(Rational::from((n, d)));
    }
    let (neg, body) = match t.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(err());
    }
    let digits: Integer = format!("{int}{frac}").parse().map_err(|_| err())?;
    let q = Rational::from((digits, Integer::from(Integer::u_pow_u(10, frac.len() as u32))));
    Ok(if neg { -q } else { q })
}

/// Parses `a:b` into an inclusive range.
pub fn parse_range(s: &str) -> Result<(usize, usize)> {
    let err = || Error::Parse(format!("expected a range a:b, got {s:?}"));
    let (a, b) = s.split_once(':').ok_or_else(err)?;
    let a: usize = a.trim().parse().map_err(|_| err())?;
    let b: usize = b.trim().parse().map_err(|_| err())?;
    if a > b {
        return Err(err());
    }
    Ok((a, b))
}

fn parse_zero(s: &str) -> Result<Zero> {
    if let Some((m, a)) = s.split_once('@') {
        return Ok(Zero::Polar { modulus: parse_rational(m)?, arg_pi: parse_rational(a)? });
    }
    match s.split_once(',') {
        Some((re, im)) => Ok(Zero::Rect { re: parse_rational(re)?, im: parse_rational(im)? }),
        None => Ok(Zero::real(parse_rational(s)?)),
    }
}

enum Source {
    Table(CoeffTable),
    Window(SequenceWindow),
}

impl Source {
    fn load(args: &SourceArgs) -> Result<(Source, Value)> {
        if let Some(path) = &args.input {
            let t = CoeffTable::read_cache(path)?;
            let desc = json!({"input": path.display().to_string(), "k_max": t.k_max(), "precision": t.prec_bits()});
            return Ok((Source::Table(t), desc));
        }
        if let Some(p) = &args.poly {
            let coeffs = p.split(',').map(parse_rational).collect::<Result<Vec<_>>>()?;
            let desc = json!({"poly": coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>()});
            return Ok((Source::Window(SequenceWindow::polynomial(&coeffs)?), desc));
        }
        if let Some(c) = &args.exp {
            let c = parse_rational(c)?;
            let desc = json!({"exp": c.to_string(), "len": args.len});
            return Ok((Source::Window(SequenceWindow::exp_series(&c, args.len)), desc));
        }
        Err(Error::Invalid("one of --input, --poly or --exp is required".into()))
    }

    fn window(&self) -> SequenceWindow {
        match self {
            Source::Table(t) => SequenceWindow::from_table(t),
            Source::Window(w) => w.clone(),
        }
    }
}

struct Outcome {
    doc: Value,
    table: Vec<String>,
    code: i32,
}

fn verdict_code(v: &Verdict) -> i32 {
    match v {
        Verdict::Pass => EXIT_PASS,
        Verdict::Fail { .. } => EXIT_FAIL,
        Verdict::Undetermined { .. } => EXIT_UNDETERMINED,
    }
}

fn sign_code<'a>(tags: impl Iterator<Item = &'a SignTag>) -> i32 {
    let mut code = EXIT_PASS;
    for t in tags {
        match t {
            SignTag::Negative => return EXIT_FAIL,
            SignTag::Undetermined => code = EXIT_UNDETERMINED,
            _ => {}
        }
    }
    code
}

fn short(b: &Ball) -> String {
    b.mid().to_string_radix(10, Some(12))
}

fn cmd_coeffs(kmax: usize, t_max: f64, out: &Option<PathBuf>, prec: &PrecArgs) -> Result<Outcome> {
    let cfg = PhiConfig { t_max, ..PhiConfig::default() };
    let table = CoeffTable::generate(kmax, &cfg, &prec.policy()?)?;
    if let Some(path) = out {
        table.write_cache(path)?;
    }
    let meta = table.meta();
    let doc = json!({
        "command": "coeffs",
        "config": {"kmax": kmax, "phi_config": cfg, "precision": prec.to_json(), "out": out.as_ref().map(|p| p.display().to_string())},
        "precision_used": meta.prec_bits,
        "level": meta.level,
        "all_positive": table.all_positive(),
        "uncertified": meta.uncertified,
    });
    let mut rows = vec![format!("{:>5}  {:>20}  {:>12}", "k", "b_k", "rel.radius")];
    for (k, b) in table.entries().iter().enumerate() {
        rows.push(format!("{k:>5}  {:>20}  {:>12.3e}", short(b), b.rel_rad()));
    }
    let code = if table.all_positive() { EXIT_PASS } else { EXIT_UNDETERMINED };
    Ok(Outcome { doc, table: rows, code })
}

fn cmd_minors(source: &SourceArgs, nu: &str, krange: &str, saddle: bool, prec: &PrecArgs) -> Result<Outcome> {
    let (src, desc) = Source::load(source)?;
    let nu_range = parse_range(nu)?;
    let k_range = parse_range(krange)?;
    let policy = prec.policy()?;
    let window = src.window();
    let scaling = if saddle {
        let ls = match &src {
            Source::Table(t) => LogSeries::from_table(t)?,
            Source::Window(w) => LogSeries::from_window(w, prec.prec_bits)?,
        };
        saddle_scaling(&ls, k_range)?
    } else {
        Vec::new()
    };
    let cfg = ScanConfig { policy, scaling };
    let report = match &src {
        Source::Table(t) => {
            let phi = t.meta().phi_config.clone();
            let k_max = t.k_max();
            let refine = move |bits: u32| -> Result<SequenceWindow> {
                Ok(SequenceWindow::from_table(&CoeffTable::generate(k_max, &phi, &PrecisionPolicy::fixed(bits))?))
            };
            minor_report(&window, k_range, nu_range, &cfg, Some(&refine as &dyn Refine))?
        }
        Source::Window(_) => minor_report(&window, k_range, nu_range, &cfg, None)?,
    };
    let verdict = verdict_of(&report);
    let mut doc = report.to_json();
    doc["command"] = json!("minors");
    doc["config"] = json!({"source": desc, "nu": nu, "krange": krange, "saddle": saddle, "precision": prec.to_json()});
    doc["verdict"] = verdict.to_json();
    doc["max_bits_used"] = json!(report.max_bits());
    let mut rows = vec![format!("{:>4} {:>4}  {:>4}  {:>6}  {:>20}", "k", "nu", "sign", "bits", "A_k^nu")];
    for e in &report.entries {
        rows.push(format!(
            "{:>4} {:>4}  {:>4}  {:>6}  {:>20}",
            e.k,
            e.nu,
            e.sign.tag.as_str(),
            e.sign.at_bits,
            format!("{:.6e}", e.value.to_f64())
        ));
    }
    Ok(Outcome { doc, table: rows, code: verdict_code(&verdict) })
}

fn cmd_turan(source: &SourceArgs, nmax: usize, krange: &str, t2: &Option<String>) -> Result<Outcome> {
    let (src, desc) = Source::load(source)?;
    let k_range = parse_range(krange)?;
    let window = src.window();
    let id = match &src {
        Source::Table(_) => "xi1".to_string(),
        Source::Window(_) => desc.to_string(),
    };
    let grid = TuranGrid::build(&id, &window, nmax, k_range)?;
    let mut doc = grid.to_json();
    doc["command"] = json!("turan");
    doc["config"] = json!({"source": desc, "nmax": nmax, "krange": krange, "t2": t2});
    let mut rows = vec![format!("{:>3} {:>5}  {:>4}  {:>20}", "n", "k", "sign", "T_n(k)")];
    for e in &grid.entries {
        rows.push(format!("{:>3} {:>5}  {:>4}  {:>20}", e.n, e.k, e.sign.tag.as_str(), format!("{:.6e}", e.value.to_f64())));
    }
    let mut code = sign_code(grid.entries.iter().map(|e| &e.sign.tag));
    if let Some(r) = t2 {
        let (a, b) = parse_range(r)?;
        let cmp = (a.max(2)..=b).map(|k| t2_det_compare(&window, k)).collect::<Result<Vec<_>>>()?;
        rows.push(format!("{:>5}  {:>4} {:>4}  {:>6}  {:>6}", "k", "T_2", "det", "agree", "equal"));
        for c in &cmp {
            rows.push(format!(
                "{:>5}  {:>4} {:>4}  {:>6}  {:>6}",
                c.k,
                c.t2_sign.tag.as_str(),
                c.det_sign.tag.as_str(),
                c.signs_agree,
                c.values_match
            ));
        }
        if cmp.iter().any(|c| !c.signs_agree) && code == EXIT_PASS {
            code = EXIT_UNDETERMINED;
        }
        doc["t2_comparison"] = Value::Array(cmp.iter().map(|c| c.to_json()).collect());
    }
    Ok(Outcome { doc, table: rows, code })
}

fn cmd_sector(height: &Option<String>, preset: &Option<String>, zeros: &Option<String>, prec: u32) -> Result<Outcome> {
    let h = match (height, preset) {
        (Some(h), _) => Some(parse_rational(h)?),
        (None, Some(p)) => Some(height_preset(p).ok_or_else(|| Error::Invalid(format!("unknown preset {p:?}")))?),
        (None, None) => None,
    };
    let (mut doc, determined) = if let Some(h) = h {
        let doc = height_report(&h, prec)?;
        let determined = !doc["m_sufficient"].is_object();
        (doc, determined)
    } else {
        let spec = zeros.as_ref().ok_or_else(|| Error::Invalid("one of --height, --preset or --zeros is required".into()))?;
        let list = spec.split(';').filter(|s| !s.trim().is_empty()).map(|s| parse_zero(s.trim())).collect::<Result<Vec<_>>>()?;
        let zs = ZeroSet::new(list)?;
        let theta = sector_of_zeros(&zs, prec)?;
        let v = pf_bounds(Some(zs.degree()), &theta, prec)?;
        let poly = poly_from_zeros(&zs, prec)?;
        let mut doc = v.to_json(prec);
        doc["zeros"] = json!(spec);
        doc["coefficients"] = json!(poly.coeffs().iter().map(|c| crate::turan::real_strings(c).0).collect::<Vec<_>>());
        (doc, v.m_sufficient.is_determined() && v.m_ceiling.is_determined())
    };
    doc["command"] = json!("sector");
    doc["config"] = json!({"height": height, "preset": preset, "zeros": zeros, "prec_bits": prec});
    let rows = vec![
        format!("theta          {}", doc["theta"].as_str().unwrap_or("")),
        format!("theta / pi     {}", doc["theta_over_pi"].as_str().unwrap_or("")),
        format!("m_sufficient   {}", doc["m_sufficient"]),
        format!("m_ceiling      {}", doc["m_ceiling"]),
    ];
    Ok(Outcome { doc, table: rows, code: if determined { EXIT_PASS } else { EXIT_UNDETERMINED } })
}

fn cmd_lemma1(source: &SourceArgs, k: usize, nu: usize, eta: &str, nodes: usize, tol: f64) -> Result<Outcome> {
    let (src, desc) = Source::load(source)?;
    let eta_q = parse_rational(eta)?;
    let window = src.window();
    let prec = window.prec().max(128);
    let c = lemma1_check(&window, k, &Ball::from_rational(&eta_q, prec), &CubatureConfig::new(nu, nodes))?;
    let mut doc = c.to_json();
    doc["command"] = json!("lemma1");
    doc["config"] = json!({"source": desc, "k": k, "nu": nu, "eta": eta, "nodes": nodes, "tol": tol});
    let code = if !c.minor_sign.tag.is_resolved() || c.integral_sign == SignTag::Undetermined {
        EXIT_UNDETERMINED
    } else if c.signs_agree && c.rel_residual < tol {
        EXIT_PASS
    } else {
        EXIT_FAIL
    };
    let rows = vec![
        format!("lhs        {:.12e}", c.lhs.to_f64()),
        format!("rhs        {:.12e} +- {:.1e}", c.rhs.value, c.rhs.error),
        format!("residual   {:.3e}", c.rel_residual),
        format!("signs      minor {} integral {}", c.minor_sign.tag.as_str(), c.integral_sign.as_str()),
    ];
    Ok(Outcome { doc, table: rows, code })
}

fn cmd_multiplier(source: &SourceArgs, kind: &str, m: usize, krange: &str, ncap: u64, prec: &PrecArgs) -> Result<Outcome> {
    let (src, desc) = Source::load(source)?;
    let kind = kind.parse()?;
    let k_range = parse_range(krange)?;
    let cfg = ScanConfig { policy: prec.policy()?, scaling: Vec::new() };
    let r = crate::multipliers::min_n_search(&src.window(), m, k_range, ncap, kind, &cfg)?;
    let mut doc = r.to_json();
    doc["command"] = json!("multiplier");
    doc["config"] = json!({"source": desc, "kind": kind.to_string(), "m": m, "krange": krange, "ncap": ncap, "precision": prec.to_json()});
    let mut rows = vec![format!("{:>4}  {}", "n", "verdict")];
    for (n, v) in &r.tried {
        rows.push(format!("{n:>4}  {}", v.verdict.label()));
    }
    let code = if r.minimal_n.is_some() {
        EXIT_PASS
    } else if r.any_undetermined() {
        EXIT_UNDETERMINED
    } else {
        EXIT_FAIL
    };
    Ok(Outcome { doc, table: rows, code })
}

fn cmd_apf(source: &SourceArgs, m: usize, ncap: usize, cols: usize, budget: u128) -> Result<Outcome> {
    let (src, desc) = Source::load(source)?;
    let r = apf_scan(&src.window(), m, ncap, cols, budget)?;
    let transcript: Vec<Value> = r
        .transcript
        .iter()
        .map(|(n, v)| {
            let mut j = v.to_json();
            j["n"] = json!(n);
            j
        })
        .collect();
    let doc = json!({
        "command": "apf",
        "config": {"source": desc, "m": m, "ncap": ncap, "cols": cols, "budget": budget.to_string()},
        "minimal_n": r.n,
        "poisoned": r.poisoned(),
        "transcript": transcript,
    });
    let mut rows = vec![format!("{:>4}  {}", "N", "verdict")];
    for (n, v) in &r.transcript {
        rows.push(format!("{n:>4}  {}", v.label()));
    }
    let code = if r.n.is_some() {
        EXIT_PASS
    } else if r.poisoned() {
        EXIT_UNDETERMINED
    } else {
        EXIT_FAIL
    };
    Ok(Outcome { doc, table: rows, code })
}

fn execute(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Coeffs { kmax, t_max, out, prec } => cmd_coeffs(*kmax, *t_max, out, prec),
        Command::Minors { source, nu, krange, saddle, prec } => cmd_minors(source, nu, krange, *saddle, prec),
        Command::Turan { source, nmax, krange, t2 } => cmd_turan(source, *nmax, krange, t2),
        Command::Sector { height, preset, zeros, prec_bits } => cmd_sector(height, preset, zeros, *prec_bits),
        Command::Lemma1 { source, k, nu, eta, nodes, tol } => cmd_lemma1(source, *k, *nu, eta, *nodes, *tol),
        Command::Multiplier { source, kind, m, krange, ncap, prec } => cmd_multiplier(source, kind, *m, krange, *ncap, prec),
        Command::Apf { source, m, ncap, cols, budget } => cmd_apf(source, *m, *ncap, *cols, *budget),
    }
}

fn exit_for(e: &Error) -> i32 {
    match e {
        Error::Precision { .. } => EXIT_UNDETERMINED,
        _ => EXIT_USAGE,
    }
}

/// Runs the command line, writing the report to `out` and diagnostics to
/// `err`; returns the exit code.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let outcome = match execute(&cli) {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(err, "pfzeta: {e}");
            return exit_for(&e);
        }
    };
    let line = outcome.doc.to_string();
    if let Some(path) = &cli.report {
        if let Err(e) = std::fs::write(path, format!("{line}\n")) {
            let _ = writeln!(err, "pfzeta: cannot write report: {e}");
            return EXIT_USAGE;
        }
    }
    let _ = writeln!(out, "{line}");
    for row in &outcome.table {
        let _ = writeln!(out, "# {row}");
    }
    outcome.code
}

/// Runs the command line against the process's standard streams.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run_with(std::iter::once("pfzeta").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    fn doc(out: &str) -> Value {
        serde_json::from_str(out.lines().next().unwrap()).unwrap()
    }

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("0.8").unwrap(), Rational::from((4, 5)));
        assert_eq!(parse_rational("-3/6").unwrap(), Rational::from((-1, 2)));
        assert_eq!(parse_rational("14.134725").unwrap(), Rational::from((14_134_725, 1_000_000)));
        assert_eq!(parse_rational("7").unwrap(), 7);
        for bad in ["", "1/0", "abc", "1.2.3", "."] {
            assert!(parse_rational(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn ranges() {
        assert_eq!(parse_range("1:8").unwrap(), (1, 8));
        assert!(parse_range("8:1").is_err());
        assert!(parse_range("3").is_err());
    }

    #[test]
    fn sector_height() {
        let (code, out, _) = call(&["sector", "--height", "14"]);
        assert_eq!(code, 0);
        let d = doc(&out);
        assert_eq!(d["m_sufficient"], json!(43));
        assert!(d["theta"].as_str().unwrap().starts_with("3.0701944"));
    }

    #[test]
    fn minors_exit_codes() {
        let (code, _, _) = call(&["minors", "--poly", "1,3,3,1", "--nu", "1:3", "--krange", "0:5"]);
        assert_eq!(code, 0);
        let (code, out, _) = call(&["minors", "--poly", "1,0.8,1", "--nu", "1:2", "--krange", "0:3"]);
        assert_eq!(code, 1);
        assert_eq!(doc(&out)["verdict"]["verdict"], json!("fail"));
    }

    #[test]
    fn usage_errors() {
        assert_eq!(call(&["minors", "--nu", "1:2"]).0, 3);
        assert_eq!(call(&["bogus"]).0, 3);
        assert_eq!(call(&["minors", "--poly", "1,x"]).0, 3);
        assert_eq!(call(&["--help"]).0, 0);
    }

    #[test]
    fn torus_check_and_shift_search() {
        let (code, out, _) = call(&["lemma1", "--exp", "1", "--k", "2", "--nu", "2", "--nodes", "32"]);
        assert_eq!(code, 0, "{out}");
        let (code, out, _) = call(&["apf", "--poly", "1,0.8,1", "--m", "2"]);
        assert_eq!(code, 0);
        assert_eq!(doc(&out)["minimal_n"], json!(2));
    }
}
