//! Command-line front end: JSON envelopes in, JSON reports out.
//!
//! Exit codes: 0 success, 1 invalid input, 2 the closed form does not apply
//! or its certificate failed, 3 an iteration did not converge.

use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::divisor::{canonical_divisor, ZeroSet};
use crate::error::{Error, Result};
use crate::extremal::{
    certify, solve_a4_one_zero, solve_linear_extremal_znb, solve_origin_interpolation, AllowedSpan,
    InterpolationProblem, SolveOptions, DEFAULT_CERT_DEGREE, DEFAULT_CERT_TOL,
};
use crate::funcrep::{Poly, PowerRep, RationalRep};
use crate::oracle::{brute_force_canonical, brute_force_min_norm, extremality_defect, OracleConfig};
use crate::projection::{kernel_of, project_kernel_conj, project_monomial, project_poly_conj, project_signed_power, FunctionalSpec};
use crate::quadrature::{ap_norm_samples, DiscFunction, DiscRule, RuleSize};
use crate::render::{render, Renderable};
use crate::series::TruncatedSeries;
use crate::C64;

pub const ENVELOPE_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandName {
    Project,
    Interpolate,
    ExtremalZnb,
    A4Onezero,
    Divisor,
    Verify,
    Oracle,
    Render,
}

/// One request. `params` is validated by the command it names.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Envelope {
    pub version: u32,
    pub command: CommandName,
    pub params: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rule: Option<RuleSize>,
    #[serde(default = "default_cert_tol")]
    pub cert_tol: f64,
}

fn default_cert_tol() -> f64 {
    DEFAULT_CERT_TOL
}

/// What a command produced: a JSON report, possibly binary data, and the
/// exit code to leave with.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: Value,
    pub binary: Option<Vec<u8>>,
    pub exit_code: u8,
}

/// Runs one envelope; `timing` adds wall-clock milliseconds to the report.
pub fn run_envelope(env: &Envelope, timing: bool) -> Result<Outcome> {
    if env.version != ENVELOPE_VERSION {
        return Err(Error::Validation(format!(
            "unsupported envelope version {} (expected {ENVELOPE_VERSION})",
            env.version
        )));
    }
    if !(env.cert_tol > 0.0 && env.cert_tol.is_finite()) {
        return Err(Error::Validation("cert_tol must be positive".into()));
    }
    let size = env.rule.unwrap_or_default();
    let rule = DiscRule::from_size(size).map_err(|e| Error::Validation(e.to_string()))?;
    let opts = SolveOptions { rule, cert_tol: env.cert_tol, cert_degree: DEFAULT_CERT_DEGREE };
    let start = Instant::now();
    let (result, binary, exit_code) = dispatch(env.command, &env.params, &opts)?;
    let mut report = json!({
        "version": ENVELOPE_VERSION,
        "command": env.command,
        "params": env.params,
        "rule": size,
        "cert_tol": env.cert_tol,
        "result": result,
    });
    if timing {
        report["timing_ms"] = json!(start.elapsed().as_secs_f64() * 1e3);
    }
    Ok(Outcome { report, binary, exit_code })
}

fn params<T: DeserializeOwned>(v: &Value) -> Result<T> {
    serde_json::from_value(v.clone()).map_err(|e| Error::Validation(format!("invalid params: {e}")))
}

fn to_json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("solver output serializes")
}

type Dispatched = (Value, Option<Vec<u8>>, u8);

fn dispatch(cmd: CommandName, raw: &Value, opts: &SolveOptions) -> Result<Dispatched> {
    let plain = |v: Value| Ok((v, None, 0));
    match cmd {
        CommandName::Project => plain(project(params(raw)?, opts)?),
        CommandName::Interpolate => {
            let prob: InterpolationProblem = params(raw)?;
            plain(to_json(&solve_origin_interpolation(&prob, opts)?))
        }
        CommandName::ExtremalZnb => {
            let p: ZnbParams = params(raw)?;
            plain(to_json(&solve_linear_extremal_znb(p.p, p.n, p.b, opts)?))
        }
        CommandName::A4Onezero => {
            let p: A4Params = params(raw)?;
            plain(to_json(&solve_a4_one_zero(p.v1, p.v2, opts)?))
        }
        CommandName::Divisor => {
            let p: DivisorParams = params(raw)?;
            plain(to_json(&canonical_divisor(p.p, &p.zeros, opts)?))
        }
        CommandName::Verify => verify(params(raw)?, opts),
        CommandName::Oracle => plain(oracle(raw, opts)?),
        CommandName::Render => {
            let p: RenderParams = params(raw)?;
            let g = render(|z| p.f.modulus(z), p.grid)?;
            let bytes = g.to_pgm();
            let mut report = json!({ "grid": g.grid, "min": g.min, "max": g.max });
            if let Some(path) = &p.output {
                std::fs::write(path, &bytes)
                    .map_err(|e| Error::Validation(format!("cannot write {}: {e}", path.display())))?;
                report["output"] = json!(path);
                return Ok((report, None, 0));
            }
            Ok((report, Some(bytes), 0))
        }
    }
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum ProjectParams {
    /// `P(z^m conj(z)^n)`.
    Monomial { m: usize, n: usize },
    /// `P(f conj(g))` for polynomials `f`, `g`.
    PolyConj { f: Poly, g: Poly },
    /// Kernel of a functional.
    Kernel { functional: FunctionalSpec },
    /// `P(k conj(g))` with `k` the kernel of a functional and `g` a polynomial.
    KernelConj { functional: FunctionalSpec, g: Poly },
    /// `P(|F|^(p-1) sgn F)`.
    SignedPower {
        #[serde(rename = "F")]
        f: PowerRep,
        p: f64,
        #[serde(default = "default_degree")]
        degree: usize,
    },
}

fn default_degree() -> usize {
    DEFAULT_CERT_DEGREE
}

fn poly_taylor(g: &Poly, w: C64, n: usize) -> Vec<C64> {
    let shifted = g.shifted(w);
    (0..=n).map(|k| shifted.coeff(k)).collect()
}

fn project(p: ProjectParams, opts: &SolveOptions) -> Result<Value> {
    Ok(match p {
        ProjectParams::Monomial { m, n } => json!({ "projection": project_monomial(m, n) }),
        ProjectParams::PolyConj { f, g } => {
            let n = f.degree().unwrap_or(0);
            let series = TruncatedSeries::new(poly_taylor(&g, C64::new(0.0, 0.0), n))?;
            json!({ "projection": project_poly_conj(&f, &series)? })
        }
        ProjectParams::Kernel { functional } => json!({ "kernel": kernel_of(&functional)? }),
        ProjectParams::KernelConj { functional, g } => {
            let k = kernel_of(&functional)?;
            let r = project_kernel_conj(&k, |w, n| Ok(poly_taylor(&g, w, n)))?;
            json!({ "projection": r })
        }
        ProjectParams::SignedPower { f, p, degree } => {
            json!({ "projection": project_signed_power(&f, p, &opts.rule, degree)? })
        }
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ZnbParams {
    p: f64,
    #[serde(rename = "N")]
    n: usize,
    #[serde(deserialize_with = "crate::json::loose_complex")]
    b: C64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct A4Params {
    #[serde(deserialize_with = "crate::json::loose_complex")]
    v1: C64,
    #[serde(deserialize_with = "crate::json::loose_complex")]
    v2: C64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DivisorParams {
    p: f64,
    zeros: ZeroSet,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct VerifyParams {
    #[serde(rename = "F")]
    f: PowerRep,
    p: f64,
    allowed: AllowedSpan,
    /// Kernel of the functional `F` should be extremal for.
    #[serde(default)]
    kernel: Option<RationalRep>,
    #[serde(default = "default_degree")]
    degree: usize,
}

/// Certificate for a user-supplied `F`; exits 2 when it fails.
fn verify(p: VerifyParams, opts: &SolveOptions) -> Result<Dispatched> {
    if !(p.p > 1.0 && p.p.is_finite()) {
        return Err(Error::Domain(format!("p must lie in (1, inf), got {}", p.p)));
    }
    let opts = SolveOptions { cert_degree: p.degree, ..opts.clone() };
    let samples = p.f.sample(&opts.rule);
    if samples.iter().any(|s| !s.is_finite()) {
        return Err(Error::Branch { re: f64::NAN, im: f64::NAN });
    }
    let norm = ap_norm_samples(&samples, p.p, &opts.rule);
    let certificate = certify(&samples, norm, p.p, p.allowed, &opts)?;
    let mut report = json!({ "norm": norm, "passed": certificate.passed(), "certificate": certificate });
    let mut ok = certificate.passed();
    if let Some(k) = &p.kernel {
        let unit = p.f.scale_positive(1.0 / norm)?;
        let defect = extremality_defect(&unit, p.p, k, &opts.rule);
        report["extremality_defect"] = json!(defect);
        ok &= defect < opts.cert_tol;
    }
    Ok((report, None, if ok { 0 } else { 2 }))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Constraint {
    functional: FunctionalSpec,
    #[serde(deserialize_with = "crate::json::loose_complex")]
    value: C64,
}

#[derive(Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case", deny_unknown_fields)]
enum OracleMode {
    MinNorm { p: f64, constraints: Vec<Constraint> },
    Interpolate { p: f64, #[serde(deserialize_with = "crate::json::loose_complex_vec")] values: Vec<C64> },
    Divisor { p: f64, zeros: ZeroSet },
}

/// `degree` and `iters` sit beside the mode fields in the params object.
fn oracle(raw: &Value, opts: &SolveOptions) -> Result<Value> {
    let mut fields = match raw {
        Value::Object(m) => m.clone(),
        _ => return Err(Error::Validation("params must be a JSON object".into())),
    };
    let mut cfg = OracleConfig { rule: opts.rule.clone(), ..OracleConfig::default() };
    if let Some(d) = fields.remove("degree") {
        cfg.truncation_degree = params(&d)?;
    }
    if let Some(it) = fields.remove("iters") {
        cfg.max_iters = params(&it)?;
    }
    let mode: OracleMode = params(&Value::Object(fields))?;
    let origin = C64::new(0.0, 0.0);
    Ok(match mode {
        OracleMode::MinNorm { p, constraints } => {
            let cons: Vec<_> = constraints.into_iter().map(|c| (c.functional, c.value)).collect();
            to_json(&brute_force_min_norm(p, &cons, &cfg)?)
        }
        OracleMode::Interpolate { p, values } => {
            let cons = values
                .iter()
                .enumerate()
                .map(|(j, v)| Ok((FunctionalSpec::derivative(origin, j)?, *v)))
                .collect::<Result<Vec<_>>>()?;
            to_json(&brute_force_min_norm(p, &cons, &cfg)?)
        }
        OracleMode::Divisor { p, zeros } => to_json(&brute_force_canonical(p, &zeros, &cfg)?),
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RenderParams {
    #[serde(rename = "F")]
    f: Renderable,
    #[serde(default = "default_grid")]
    grid: usize,
    #[serde(default)]
    output: Option<PathBuf>,
}

fn default_grid() -> usize {
    256
}

#[derive(Parser)]
#[command(name = "bergman", version, about = "Extremal problems and canonical divisors in Bergman spaces")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    /// Quadrature rule as RADIAL,ANGULAR.
    #[arg(long, global = true, value_parser = parse_rule)]
    rule: Option<RuleSize>,
    /// Tolerance on offending projection coefficients.
    #[arg(long, global = true)]
    cert_tol: Option<f64>,
    /// Omit timing_ms so that reports are byte-for-byte reproducible.
    #[arg(long, global = true)]
    no_timing: bool,
}

/// Params are a JSON object given inline, as `@FILE`, or as `-` for stdin.
#[derive(Args)]
struct ParamArgs {
    params: Option<String>,
    /// Sets `p` in the params.
    #[arg(long)]
    p: Option<f64>,
    /// Sets `zeros` in the params (JSON).
    #[arg(long)]
    zeros: Option<String>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a full envelope read from FILE (or `-` for stdin).
    Run { file: String },
    /// Closed-form Bergman projections.
    Project(ParamArgs),
    /// Minimal-norm interpolation of derivatives at the origin.
    Interpolate(ParamArgs),
    /// Extremal function for the kernel z^N + b.
    ExtremalZnb(ParamArgs),
    /// A^4 extremal function with one zero.
    A4Onezero(ParamArgs),
    /// Canonical divisor for a finite zero set.
    Divisor(ParamArgs),
    /// Certificate for a given function.
    Verify(ParamArgs),
    /// Brute-force minimal-norm optimizer.
    Oracle {
        #[command(flatten)]
        args: ParamArgs,
        /// Truncation degree of the polynomial search space.
        #[arg(long)]
        degree: Option<usize>,
        /// Iteration budget.
        #[arg(long)]
        iters: Option<usize>,
    },
    /// Graymap of |F|.
    Render {
        #[command(flatten)]
        args: ParamArgs,
        #[arg(long)]
        grid: Option<usize>,
        /// Write the PGM here instead of to stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn parse_rule(s: &str) -> std::result::Result<RuleSize, String> {
    let (r, a) = s.split_once(',').ok_or("expected RADIAL,ANGULAR")?;
    let r = r.trim().parse().map_err(|e| format!("radial count: {e}"))?;
    let a = a.trim().parse().map_err(|e| format!("angular count: {e}"))?;
    Ok(RuleSize { n_radial: r, n_angular: a })
}

fn read_source(src: &str) -> Result<String> {
    let io_err = |e: std::io::Error| Error::Validation(format!("cannot read {src}: {e}"));
    if src == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(io_err)?;
        Ok(s)
    } else if let Some(path) = src.strip_prefix('@') {
        std::fs::read_to_string(path).map_err(io_err)
    } else {
        Ok(src.to_string())
    }
}

fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::Validation(format!("invalid JSON: {e}")))
}

fn build_params(args: &ParamArgs, extra: Map<String, Value>) -> Result<Value> {
    let mut obj = match &args.params {
        Some(src) => match parse_json(&read_source(src)?)? {
            Value::Object(m) => m,
            _ => return Err(Error::Validation("params must be a JSON object".into())),
        },
        None => Map::new(),
    };
    if let Some(p) = args.p {
        obj.insert("p".into(), json!(p));
    }
    if let Some(z) = &args.zeros {
        obj.insert("zeros".into(), parse_json(z)?);
    }
    obj.extend(extra);
    Ok(Value::Object(obj))
}

fn envelope_from(cli: &Cli) -> Result<Envelope> {
    let simple = |command, args: &ParamArgs| -> Result<Envelope> {
        Ok(Envelope {
            version: ENVELOPE_VERSION,
            command,
            params: build_params(args, Map::new())?,
            rule: None,
            cert_tol: DEFAULT_CERT_TOL,
        })
    };
    let mut env = match &cli.command {
        Cmd::Run { file } => serde_json::from_str(&read_source(file)?)
            .map_err(|e| Error::Validation(format!("invalid envelope: {e}")))?,
        Cmd::Project(a) => simple(CommandName::Project, a)?,
        Cmd::Interpolate(a) => simple(CommandName::Interpolate, a)?,
        Cmd::ExtremalZnb(a) => simple(CommandName::ExtremalZnb, a)?,
        Cmd::A4Onezero(a) => simple(CommandName::A4Onezero, a)?,
        Cmd::Divisor(a) => simple(CommandName::Divisor, a)?,
        Cmd::Verify(a) => simple(CommandName::Verify, a)?,
        Cmd::Oracle { args, degree, iters } => {
            let mut extra = Map::new();
            if let Some(d) = degree {
                extra.insert("degree".into(), json!(d));
            }
            if let Some(i) = iters {
                extra.insert("iters".into(), json!(i));
            }
            Envelope { params: build_params(args, extra)?, ..simple(CommandName::Oracle, args)? }
        }
        Cmd::Render { args, grid, output } => {
            let mut extra = Map::new();
            if let Some(g) = grid {
                extra.insert("grid".into(), json!(g));
            }
            if let Some(o) = output {
                extra.insert("output".into(), json!(o));
            }
            Envelope { params: build_params(args, extra)?, ..simple(CommandName::Render, args)? }
        }
    };
    if let Some(r) = cli.rule {
        env.rule = Some(r);
    }
    if let Some(t) = cli.cert_tol {
        env.cert_tol = t;
    }
    Ok(env)
}

fn error_json(e: &Error) -> Value {
    json!({ "error": { "exit_code": e.exit_code(), "message": e.to_string() } })
}

/// Parses `args` (including the program name), runs the command and writes
/// the report to `out`; returns the exit code.
pub fn run_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        // Help and version are not errors and go to `out`.
        Err(e) if !e.use_stderr() => {
            let _ = write!(out, "{e}");
            return 0;
        }
        Err(e) => {
            let _ = write!(err, "{e}");
            return 1;
        }
    };
    let result = envelope_from(&cli).and_then(|env| run_envelope(&env, !cli.no_timing));
    match result {
        Ok(outcome) => {
            let written = match &outcome.binary {
                Some(bytes) => out.write_all(bytes),
                None => writeln!(out, "{}", crate::json::to_string(&outcome.report).expect("report serializes")),
            };
            if written.is_err() {
                return 1;
            }
            outcome.exit_code
        }
        Err(e) => {
            let _ = writeln!(err, "{}", crate::json::to_string(&error_json(&e)).expect("error serializes"));
            e.exit_code() as u8
        }
    }
}

pub fn main() -> ExitCode {
    let code = run_args(std::env::args_os(), &mut std::io::stdout().lock(), &mut std::io::stderr().lock());
    ExitCode::from(code)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> (u8, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let mut full = vec!["bergman"];
        full.extend_from_slice(args);
        let code = run_args(full, &mut out, &mut err);
        (code, String::from_utf8_lossy(&out).into_owned(), String::from_utf8_lossy(&err).into_owned())
    }

    #[test]
    fn monomial_projection_below_diagonal_is_zero() {
        let (code, out, _) = run(&["--no-timing", "project", r#"{"kind":"monomial","m":1,"n":2}"#]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["result"]["projection"], json!([]));
    }

    #[test]
    fn divisor_value() {
        let (code, out, _) = run(&["--no-timing", "divisor", "--p", "2", "--zeros", "[[0.5, 0], 1]"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        let lead = v["result"]["leading_value"].as_f64().unwrap();
        assert!((lead - 0.6614378).abs() < 1e-7);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run(&["interpolate", r#"{"p": 4, "values": [1, 0.5], "extra": 1}"#]).0, 1);
        assert_eq!(run(&["interpolate", r#"{"p": 4, "values": [1, 2]}"#]).0, 2);
        assert_eq!(run(&["oracle", "--iters", "1", r#"{"mode": "interpolate", "p": 4, "values": [1, 0.5]}"#]).0, 3);
        assert_eq!(run(&["no-such-command"]).0, 1);
        assert_eq!(run(&["--rule", "2,2", "interpolate", r#"{"p": 4, "values": [1]}"#]).0, 1);
    }

    #[test]
    fn envelope_version_is_checked() {
        let env: Envelope = serde_json::from_value(json!({
            "version": 7, "command": "interpolate", "params": {"p": 4, "values": [1]}
        }))
        .unwrap();
        assert!(matches!(run_envelope(&env, false), Err(Error::Validation(_))));
        let unknown = serde_json::from_value::<Envelope>(json!({
            "version": 1, "command": "interpolate", "params": {}, "colour": "red"
        }));
        assert!(unknown.is_err());
    }
}
