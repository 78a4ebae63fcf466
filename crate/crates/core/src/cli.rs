//! Command-line front end.
//!
//! State-spec files are JSON documents of the form
//!
//! ```text
//! {"kind": "gbs",    "gbs":    {"N": 5, "a": 0.9, "b": -0.9}}
//! {"kind": "rbs",    "rbs":    {"N": 5, "phi": 0.785}}
//! {"kind": "fock",   "fock":   {"n": 2}}
//! {"kind": "custom", "custom": [[re, im], ...]}
//! ```
//!
//! Exit codes: 0 success, 1 usage or validation error, 2 numerical
//! non-convergence.

use std::ffi::OsString;
use std::fmt;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::decoherence::{dephased_profile, kt_to_beta, DecayedKernel};
use crate::error::Error;
use crate::nonclassicality::{
    negative_volume_decayed_report, sweep_delta, QuadratureSpec, StateFamily, SweepAxis,
};
use crate::phasespace::{eval_grid, linspace_at, q_grid, wigner_grid, GridSpec, ScalarField};
use crate::states::{make_custom, make_fock, make_gbs, make_rbs, FockSuperposition, GbsParams, RbsParams};
use crate::tomogram::tomogram_grid;

/// Environment variable selecting the worker thread count.
pub const THREADS_ENV: &str = "FOCKPHASE_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StateKind {
    Gbs,
    Rbs,
    Fock,
    Custom,
}

impl StateKind {
    fn as_str(&self) -> &'static str {
        match self {
            StateKind::Gbs => "gbs",
            StateKind::Rbs => "rbs",
            StateKind::Fock => "fock",
            StateKind::Custom => "custom",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GbsBlock {
    #[serde(rename = "N")]
    pub n: u64,
    pub a: f64,
    pub b: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RbsBlock {
    #[serde(rename = "N")]
    pub n: u64,
    pub phi: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FockBlock {
    pub n: u64,
}

/// Parsed and validated state description.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StateSpec {
    pub kind: StateKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gbs: Option<GbsBlock>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rbs: Option<RbsBlock>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fock: Option<FockBlock>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub custom: Option<Vec<[f64; 2]>>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SpecError {
    Parse(String),
    Validation { field: String, constraint: String },
}

impl fmt::Display for SpecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpecError::Parse(msg) => write!(f, "malformed state spec: {msg}"),
            SpecError::Validation { field, constraint } => {
                write!(f, "invalid state spec at {field}: {constraint}")
            }
        }
    }
}

impl std::error::Error for SpecError {}

fn invalid(field: &str, constraint: impl Into<String>) -> SpecError {
    SpecError::Validation { field: field.to_string(), constraint: constraint.into() }
}

fn object<'a>(v: &'a Value, field: &str) -> Result<&'a Map<String, Value>, SpecError> {
    v.as_object().ok_or_else(|| invalid(field, "must be an object"))
}

fn only_keys(obj: &Map<String, Value>, field: &str, allowed: &[&str]) -> Result<(), SpecError> {
    for k in obj.keys() {
        if !allowed.contains(&k.as_str()) {
            let path = if field.is_empty() { k.clone() } else { format!("{field}.{k}") };
            return Err(invalid(&path, "unknown field"));
        }
    }
    Ok(())
}

fn get_f64(obj: &Map<String, Value>, path: &str, key: &str) -> Result<f64, SpecError> {
    let full = format!("{path}.{key}");
    let v = obj.get(key).ok_or_else(|| invalid(&full, "missing"))?;
    let x = v.as_f64().ok_or_else(|| invalid(&full, "must be a number"))?;
    if !x.is_finite() {
        return Err(invalid(&full, "must be finite"));
    }
    Ok(x)
}

fn get_u64(obj: &Map<String, Value>, path: &str, key: &str) -> Result<u64, SpecError> {
    let full = format!("{path}.{key}");
    let v = obj.get(key).ok_or_else(|| invalid(&full, "missing"))?;
    let n = v.as_u64().ok_or_else(|| invalid(&full, format!("{key} must be a nonnegative integer")))?;
    if n > crate::states::MAX_N as u64 {
        return Err(invalid(&full, format!("{key} <= {}", crate::states::MAX_N)));
    }
    Ok(n)
}

/// Parse and validate a state-spec document.
pub fn parse_state_spec(text: &str) -> Result<StateSpec, SpecError> {
    let root: Value = serde_json::from_str(text).map_err(|e| SpecError::Parse(e.to_string()))?;
    let obj = object(&root, "(root)")?;
    only_keys(obj, "", &["kind", "gbs", "rbs", "fock", "custom"])?;
    let kind = match obj.get("kind").and_then(Value::as_str) {
        Some("gbs") => StateKind::Gbs,
        Some("rbs") => StateKind::Rbs,
        Some("fock") => StateKind::Fock,
        Some("custom") => StateKind::Custom,
        Some(other) => return Err(invalid("kind", format!("unknown kind '{other}' (gbs, rbs, fock, custom)"))),
        None => return Err(invalid("kind", "missing or not a string")),
    };
    for other in ["gbs", "rbs", "fock", "custom"] {
        if other != kind.as_str() && obj.contains_key(other) {
            return Err(invalid(other, format!("block not allowed for kind '{}'", kind.as_str())));
        }
    }
    let block = obj
        .get(kind.as_str())
        .ok_or_else(|| invalid(kind.as_str(), "missing parameter block"))?;
    let mut spec = StateSpec { kind, gbs: None, rbs: None, fock: None, custom: None };
    match kind {
        StateKind::Gbs => {
            let b = object(block, "gbs")?;
            only_keys(b, "gbs", &["N", "a", "b"])?;
            let n = get_u64(b, "gbs", "N")?;
            let a = get_f64(b, "gbs", "a")?;
            let bb = get_f64(b, "gbs", "b")?;
            if a <= -1.0 {
                return Err(invalid("gbs.a", format!("a > -1 required (got {a})")));
            }
            if bb <= -1.0 {
                return Err(invalid("gbs.b", format!("b > -1 required (got {bb})")));
            }
            spec.gbs = Some(GbsBlock { n, a, b: bb });
        }
        StateKind::Rbs => {
            let b = object(block, "rbs")?;
            only_keys(b, "rbs", &["N", "phi"])?;
            spec.rbs = Some(RbsBlock { n: get_u64(b, "rbs", "N")?, phi: get_f64(b, "rbs", "phi")? });
        }
        StateKind::Fock => {
            let b = object(block, "fock")?;
            only_keys(b, "fock", &["n"])?;
            spec.fock = Some(FockBlock { n: get_u64(b, "fock", "n")? });
        }
        StateKind::Custom => {
            let arr = block.as_array().ok_or_else(|| invalid("custom", "must be a list of [re, im] pairs"))?;
            if arr.is_empty() {
                return Err(invalid("custom", "at least one coefficient required"));
            }
            if arr.len() > crate::states::MAX_N + 1 {
                return Err(invalid("custom", format!("at most {} coefficients", crate::states::MAX_N + 1)));
            }
            let mut coeffs = Vec::with_capacity(arr.len());
            for (i, item) in arr.iter().enumerate() {
                let path = format!("custom[{i}]");
                let pair = item.as_array().filter(|p| p.len() == 2).ok_or_else(|| invalid(&path, "must be [re, im]"))?;
                let re = pair[0].as_f64().filter(|x| x.is_finite()).ok_or_else(|| invalid(&path, "re must be a finite number"))?;
                let im = pair[1].as_f64().filter(|x| x.is_finite()).ok_or_else(|| invalid(&path, "im must be a finite number"))?;
                coeffs.push([re, im]);
            }
            if coeffs.iter().all(|[re, im]| *re == 0.0 && *im == 0.0) {
                return Err(invalid("custom", "at least one nonzero coefficient required"));
            }
            spec.custom = Some(coeffs);
        }
    }
    Ok(spec)
}

impl StateSpec {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("state spec serializes")
    }

    pub fn build(&self) -> crate::error::Result<FockSuperposition> {
        match self.kind {
            StateKind::Gbs => {
                let g = self.gbs.expect("validated");
                make_gbs(GbsParams::new(g.n as usize, g.a, g.b))
            }
            StateKind::Rbs => {
                let r = self.rbs.expect("validated");
                make_rbs(RbsParams::new(r.n as usize, r.phi))
            }
            StateKind::Fock => make_fock(self.fock.expect("validated").n as usize),
            StateKind::Custom => {
                let raw: Vec<Complex64> = self
                    .custom
                    .as_ref()
                    .expect("validated")
                    .iter()
                    .map(|[re, im]| Complex64::new(*re, *im))
                    .collect();
                make_custom(&raw)
            }
        }
    }

    pub fn family(&self) -> Option<StateFamily> {
        match self.kind {
            StateKind::Gbs => {
                let g = self.gbs?;
                Some(StateFamily::Gbs(GbsParams::new(g.n as usize, g.a, g.b)))
            }
            StateKind::Rbs => {
                let r = self.rbs?;
                Some(StateFamily::Rbs(RbsParams::new(r.n as usize, r.phi)))
            }
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "fockphase", version, about = "Phase-space analysis of finite Fock-state superpositions")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// State-spec JSON file
    #[arg(long, global = true)]
    state: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value = "csv")]
    format: Format,

    /// Output file; standard output when omitted
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct QuadArgs {
    /// Integration half-width; default max(6, 4 + sqrt N)
    #[arg(long)]
    radius: Option<f64>,
    #[arg(long, default_value_t = QuadratureSpec::DEFAULT_REL_TOL)]
    rel_tol: f64,
    #[arg(long, default_value_t = QuadratureSpec::DEFAULT_MAX_REFINE)]
    max_refine: usize,
}

use clap::Args;

#[derive(Debug, Subcommand)]
enum Command {
    /// Print |c_n|^2 and arg(c_n)
    State,
    /// Wigner function on a grid (optionally after amplitude decay)
    Wigner {
        /// xmin:xmax:nx x ymin:ymax:ny
        #[arg(long, allow_hyphen_values = true)]
        grid: String,
        /// Rescaled decay time kappa t
        #[arg(long)]
        kt: Option<f64>,
    },
    /// Q function on a grid
    Qfunc {
        #[arg(long, allow_hyphen_values = true)]
        grid: String,
    },
    /// Nonclassical volume delta
    Volume {
        #[arg(long)]
        kt: Option<f64>,
        #[command(flatten)]
        quad: QuadArgs,
    },
    /// delta against kappa t under amplitude decay
    Decay {
        /// start:end:count
        #[arg(long, allow_hyphen_values = true, default_value = "0:2:21")]
        kt: String,
        #[command(flatten)]
        quad: QuadArgs,
    },
    /// Radial profile of the long-time phase-damped Wigner function
    Dephase {
        #[arg(long, allow_hyphen_values = true, default_value = "0:3:61")]
        r: String,
    },
    /// Optical tomogram on an (X, theta) grid
    Tomogram {
        #[arg(long, allow_hyphen_values = true, default_value = "-4:4:81")]
        x: String,
        #[arg(long, allow_hyphen_values = true, default_value = "0:3.141592653589793:33")]
        theta: String,
    },
    /// delta against one of N, a, b, phi
    Sweep {
        #[arg(long)]
        param: String,
        /// Comma-separated values
        #[arg(long, allow_hyphen_values = true, conflicts_with = "range")]
        values: Option<String>,
        /// start:end:count
        #[arg(long, allow_hyphen_values = true)]
        range: Option<String>,
        #[command(flatten)]
        quad: QuadArgs,
    },
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Compute(Error),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Compute(e) if e.is_numerical() => 2,
            CliError::Compute(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Compute(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Compute(e)
    }
}

/// `start:end:count`, inclusive of both ends.
pub fn parse_range(s: &str) -> Result<(f64, f64, usize), String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("range '{s}' must look like start:end:count"));
    }
    let lo: f64 = parts[0].trim().parse().map_err(|_| format!("bad range start '{}'", parts[0]))?;
    let hi: f64 = parts[1].trim().parse().map_err(|_| format!("bad range end '{}'", parts[1]))?;
    let n: usize = parts[2].trim().parse().map_err(|_| format!("bad range count '{}'", parts[2]))?;
    if !lo.is_finite() || !hi.is_finite() {
        return Err(format!("range '{s}' must have finite ends"));
    }
    if n == 0 {
        return Err(format!("range '{s}' needs a positive count"));
    }
    if n > 1 && !(lo < hi) {
        return Err(format!("range '{s}' needs start < end"));
    }
    Ok((lo, hi, n))
}

fn range_values(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n).map(|i| linspace_at(lo, hi, n, i)).collect()
}

/// `xmin:xmax:nx x ymin:ymax:ny`.
pub fn parse_grid(s: &str) -> Result<GridSpec, String> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let halves: Vec<&str> = compact.split('x').collect();
    if halves.len() != 2 {
        return Err(format!("grid '{s}' must look like xmin:xmax:nx x ymin:ymax:ny"));
    }
    let (x0, x1, nx) = parse_range(halves[0])?;
    let (y0, y1, ny) = parse_range(halves[1])?;
    GridSpec::new(x0, x1, nx, y0, y1, ny).map_err(|e| e.to_string())
}

/// Lossless 17-significant-digit formatting; exact zero prints as `0`.
pub fn fmt_num(v: f64) -> String {
    if v == 0.0 {
        "0".to_string()
    } else {
        format!("{v:.16e}")
    }
}

fn quad_spec(q: &QuadArgs, state: &FockSuperposition) -> Result<QuadratureSpec, CliError> {
    let spec = QuadratureSpec {
        radius: q.radius.unwrap_or_else(|| QuadratureSpec::default_radius(state.n_max())),
        rel_tol: q.rel_tol,
        max_refine: q.max_refine,
    };
    spec.validate()?;
    Ok(spec)
}

fn grid_json(g: &GridSpec) -> Value {
    json!({"xmin": g.xmin, "xmax": g.xmax, "nx": g.nx, "ymin": g.ymin, "ymax": g.ymax, "ny": g.ny})
}

fn field_output(
    field: &ScalarField,
    headers: [&str; 3],
    format: Format,
    command: &str,
    spec: &StateSpec,
    extra: Value,
) -> String {
    let g = field.grid;
    match format {
        Format::Csv => {
            let mut out = format!("{},{},{}\n", headers[0], headers[1], headers[2]);
            for k in 0..g.len() {
                let (x, y) = g.node(k);
                out.push_str(&format!("{},{},{}\n", fmt_num(x), fmt_num(y), fmt_num(field.values[k])));
            }
            out
        }
        Format::Json => {
            let rows: Vec<&[f64]> = field.values.chunks(g.ny).collect();
            let mut doc = json!({
                "command": command,
                "state": spec,
                "grid": grid_json(&g),
                "axes": [headers[0], headers[1]],
                "values": rows,
            });
            merge(&mut doc, extra);
            pretty(&doc)
        }
    }
}

fn merge(doc: &mut Value, extra: Value) {
    if let (Some(d), Value::Object(e)) = (doc.as_object_mut(), extra) {
        for (k, v) in e {
            d.insert(k, v);
        }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json output");
    s.push('\n');
    s
}

fn columns_output(
    names: [&str; 2],
    a: &[f64],
    b: &[f64],
    format: Format,
    command: &str,
    spec: &StateSpec,
    extra: Value,
) -> String {
    match format {
        Format::Csv => {
            let mut out = format!("{},{}\n", names[0], names[1]);
            for (x, y) in a.iter().zip(b) {
                out.push_str(&format!("{},{}\n", fmt_num(*x), fmt_num(*y)));
            }
            out
        }
        Format::Json => {
            let mut doc = json!({"command": command, "state": spec});
            doc[names[0]] = json!(a);
            doc[names[1]] = json!(b);
            merge(&mut doc, extra);
            pretty(&doc)
        }
    }
}

fn load_spec(path: &Option<PathBuf>) -> Result<StateSpec, CliError> {
    let path = path.as_ref().ok_or_else(|| CliError::Usage("--state <FILE> is required".into()))?;
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    parse_state_spec(&text).map_err(|e| CliError::Usage(e.to_string()))
}

fn execute(cli: &Cli) -> Result<String, CliError> {
    let spec = load_spec(&cli.state)?;
    let state = spec.build()?;
    let fmt = cli.format;
    let usage = CliError::Usage;
    let out = match &cli.command {
        Command::State => {
            let probs = state.probabilities();
            let phases: Vec<f64> = state.coeffs().iter().map(|c| c.arg()).collect();
            match fmt {
                Format::Csv => {
                    let mut s = String::from("n,probability,phase\n");
                    for (n, (p, ph)) in probs.iter().zip(&phases).enumerate() {
                        s.push_str(&format!("{n},{},{}\n", fmt_num(*p), fmt_num(*ph)));
                    }
                    s
                }
                Format::Json => pretty(&json!({
                    "command": "state",
                    "state": spec,
                    "probability": probs,
                    "phase": phases,
                })),
            }
        }
        Command::Wigner { grid, kt } => {
            let grid = parse_grid(grid).map_err(usage)?;
            let field = match kt {
                None => wigner_grid(&state, grid)?,
                Some(kt) => {
                    let kernel = DecayedKernel::new(&state, kt_to_beta(*kt)?);
                    eval_grid(grid, |g| kernel.eval(g))?
                }
            };
            field_output(&field, ["x", "y", "value"], fmt, "wigner", &spec, json!({"kt": kt}))
        }
        Command::Qfunc { grid } => {
            let grid = parse_grid(grid).map_err(usage)?;
            let field = q_grid(&state, grid)?;
            field_output(&field, ["x", "y", "value"], fmt, "qfunc", &spec, json!({}))
        }
        Command::Volume { kt, quad } => {
            let q = quad_spec(quad, &state)?;
            let channel = kt_to_beta(kt.unwrap_or(0.0))?;
            let v = negative_volume_decayed_report(&state, channel, &q)?;
            match fmt {
                Format::Csv => format!("delta,{}\n", fmt_num(v.delta)),
                Format::Json => pretty(&json!({
                    "command": "volume",
                    "state": spec,
                    "kt": kt.unwrap_or(0.0),
                    "quadrature": {"radius": q.radius, "rel_tol": q.rel_tol, "max_refine": q.max_refine},
                    "delta": v.delta,
                    "integral": v.integral,
                    "abs_integral": v.abs_integral,
                    "error_estimate": v.error,
                })),
            }
        }
        Command::Decay { kt, quad } => {
            let (lo, hi, n) = parse_range(kt).map_err(usage)?;
            if lo < 0.0 {
                return Err(usage(format!("kt range '{kt}' must start at >= 0")));
            }
            let q = quad_spec(quad, &state)?;
            let kts = range_values(lo, hi, n);
            let mut deltas = Vec::with_capacity(kts.len());
            for &t in &kts {
                let v = negative_volume_decayed_report(&state, kt_to_beta(t)?, &q).map_err(|e| {
                    Error::Sweep { parameter: "kt".into(), value: t, source: Box::new(e) }
                })?;
                deltas.push(v.delta);
            }
            columns_output(["kt", "delta"], &kts, &deltas, fmt, "decay", &spec, json!({}))
        }
        Command::Dephase { r } => {
            let (lo, hi, n) = parse_range(r).map_err(usage)?;
            if lo < 0.0 {
                return Err(usage(format!("radius range '{r}' must start at >= 0")));
            }
            let radii = range_values(lo, hi, n);
            let values = dephased_profile(&state, &radii);
            columns_output(["r", "value"], &radii, &values, fmt, "dephase", &spec, json!({}))
        }
        Command::Tomogram { x, theta } => {
            let (x0, x1, nx) = parse_range(x).map_err(usage)?;
            let (t0, t1, nt) = parse_range(theta).map_err(usage)?;
            let grid = GridSpec::new(x0, x1, nx, t0, t1, nt)?;
            let field = tomogram_grid(&state, grid)?;
            field_output(&field, ["x", "theta", "value"], fmt, "tomogram", &spec, json!({}))
        }
        Command::Sweep { param, values, range, quad } => {
            let axis: SweepAxis = param.parse()?;
            let family = spec
                .family()
                .ok_or_else(|| usage("sweep requires a gbs or rbs state".into()))?;
            let vals = match (values, range) {
                (Some(v), None) => v
                    .split(',')
                    .map(|t| t.trim().parse::<f64>().map_err(|_| format!("bad sweep value '{t}'")))
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(usage)?,
                (None, Some(r)) => {
                    let (lo, hi, n) = parse_range(r).map_err(usage)?;
                    range_values(lo, hi, n)
                }
                _ => return Err(usage("sweep needs exactly one of --values or --range".into())),
            };
            let quad_override = match (quad.radius, quad.rel_tol, quad.max_refine) {
                (None, t, m) if t == QuadratureSpec::DEFAULT_REL_TOL && m == QuadratureSpec::DEFAULT_MAX_REFINE => None,
                _ => Some(quad_spec(quad, &state)?),
            };
            let res = sweep_delta(family, axis, &vals, quad_override)?;
            columns_output([axis.name(), "delta"], &res.values, &res.deltas, fmt, "sweep", &spec, json!({}))
        }
    };
    Ok(out)
}

fn configure_threads() {
    if let Some(n) = std::env::var(THREADS_ENV).ok().and_then(|v| v.trim().parse::<usize>().ok()) {
        if n > 0 {
            // a second call in the same process keeps the first pool
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

fn single_line(s: &str) -> String {
    s.lines().map(str::trim).filter(|l| !l.is_empty()).collect::<Vec<_>>().join(" ")
}

/// Run one invocation; returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            let msg = e.to_string();
            let first = msg.lines().find(|l| !l.trim().is_empty()).unwrap_or("usage error");
            eprintln!("fockphase: {}", first.trim());
            return 1;
        }
    };
    configure_threads();
    let result = execute(&cli).and_then(|text| {
        match &cli.out {
            Some(path) => std::fs::write(path, text.as_bytes())
                .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display()))),
            None => {
                let stdout = std::io::stdout();
                let mut lock = stdout.lock();
                lock.write_all(text.as_bytes())
                    .and_then(|_| lock.flush())
                    .map_err(|e| CliError::Usage(format!("cannot write output: {e}")))
            }
        }
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("fockphase: {}", single_line(&e.to_string()));
            e.exit_code()
        }
    }
}
