//! Command-line front end.
//!
//! Exit status: 0 on success, 1 on invalid input or I/O failure, 2 when a
//! verification fails (a Monte-Carlo violation, a broken link of the case
//! analysis, or oracle disagreement).

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::parser::ValueSource;
use clap::{ArgMatches, Args, CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::error::Error;
use crate::extremal::{
    oracle_extremal, oracle_grid_gap, per_alpha_bound_ln, replay_case_analysis_with,
    solve_extremal, stationarity_check, theorem_bound_ln, BoundMode, BoundParams,
};
use crate::geometry::montecarlo_verify;
use crate::numfmt::{NumFormat, Rounding};
use crate::quaddiff::{render_scene, trajectories_csv, QuadDiff, SceneOptions};
use crate::specfun::{Delta, Function};

pub const SEED_ENV: &str = "EXTREMAL_DECOMP_SEED";
pub const DEFAULT_SEED: u64 = 42;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_VERIFY_FAILED: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Svg,
    Text,
}

#[derive(Debug, Parser)]
#[command(
    name = "extremal-decomp",
    version,
    about = "Bounds on products of inner radii, extremal-point verification and trajectory plots"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone)]
pub struct Output {
    /// Write the artifact here (atomically) instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,
    /// Decimal places of every reported number.
    #[arg(long, default_value_t = 6, global = true)]
    pub precision: usize,
    #[arg(long, value_enum, default_value_t = Rounding::Truncate, global = true)]
    pub rounding: Rounding,
    /// Worker threads for parallel stages.
    #[arg(long, default_value_t = 1, global = true)]
    pub threads: usize,
}

#[derive(Debug, Args, Clone)]
pub struct ParamArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub gamma: f64,
    #[arg(long, default_value_t = 0.0)]
    pub delta: f64,
    /// Evaluate outside the theorem window, reporting warnings instead of failing.
    #[arg(long)]
    pub explore: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate F, psi, psi1, psi2 or x0.
    #[command(allow_negative_numbers = true)]
    Eval {
        #[arg(long = "fn", value_parser = ["F", "f", "psi", "psi1", "psi2", "x0"])]
        function: String,
        #[arg(long)]
        delta: f64,
        #[arg(long)]
        x: Option<f64>,
        /// Accept delta outside [0, 0.7].
        #[arg(long)]
        unchecked: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Theorem bound and per-gap bound for given gaps.
    #[command(allow_negative_numbers = true)]
    Bound {
        #[command(flatten)]
        params: ParamArgs,
        /// Comma-separated gaps summing to 2; defaults to the equal gaps 2/n.
        #[arg(long, value_delimiter = ',')]
        alphas: Option<Vec<f64>>,
        #[command(flatten)]
        output: Output,
    },
    /// Solve the constrained maximization by multi-start ascent.
    #[command(allow_negative_numbers = true)]
    Solve {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 32)]
        starts: usize,
        #[arg(long, env = SEED_ENV)]
        seed: Option<u64>,
        /// Also run the grid oracle at this resolution.
        #[arg(long)]
        resolution: Option<usize>,
        #[command(flatten)]
        output: Output,
    },
    /// Replay the case analysis and report every link of the chain.
    #[command(allow_negative_numbers = true)]
    Verify {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        output: Output,
    },
    /// Monte-Carlo check of both bounds on random disk configurations.
    #[command(allow_negative_numbers = true)]
    Montecarlo {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, env = SEED_ENV)]
        seed: Option<u64>,
        #[command(flatten)]
        output: Output,
    },
    /// Trace and render the trajectories of the quadratic differential.
    #[command(allow_negative_numbers = true)]
    Plot {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        gamma: f64,
        /// Scene options as a JSON file.
        #[arg(long)]
        scene: Option<PathBuf>,
        /// Draw orthogonal trajectories.
        #[arg(long)]
        orthogonal: bool,
        #[command(flatten)]
        output: Output,
    },
}

/// A run failure, mapped onto an exit status.
#[derive(Debug)]
enum Failure {
    Invalid(Error),
    Io(String),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Invalid(e)
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Domain(_) => "domain",
        Error::Validity(_) => "validity",
        Error::Constraint(_) => "constraint",
        Error::Bracket(_) => "bracket",
        Error::Resource(_) => "resource",
        Error::Infeasible(_) => "infeasible",
        Error::PoleProximity { .. } => "pole_proximity",
    }
}

/// The artifact produced by a subcommand plus its verification verdict.
struct Emitted {
    body: Vec<u8>,
    /// Printed to stdout when the body goes to a file.
    summary: Option<String>,
    verified: bool,
}

#[derive(Clone, Copy)]
struct SeedInfo {
    value: u64,
    source: &'static str,
}

fn seed_info(value: Option<u64>, matches: Option<&ArgMatches>) -> SeedInfo {
    match value {
        None => SeedInfo {
            value: DEFAULT_SEED,
            source: "default",
        },
        Some(v) => {
            let source = match matches.and_then(|m| m.value_source("seed")) {
                Some(ValueSource::EnvVariable) => "env",
                _ => "flag",
            };
            SeedInfo { value: v, source }
        }
    }
}

/// Replaces every floating-point number with its rendered value.
fn render_floats(v: Value, fmt: &NumFormat) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => fmt.json(n.as_f64().unwrap_or(f64::NAN)),
        Value::Array(a) => Value::Array(a.into_iter().map(|x| render_floats(x, fmt)).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, x)| (k, render_floats(x, fmt))).collect()),
        other => other,
    }
}

fn text_lines(prefix: &str, v: &Value, fmt: &NumFormat, out: &mut String) {
    match v {
        Value::Object(o) => {
            for (k, x) in o {
                let p = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                text_lines(&p, x, fmt, out);
            }
        }
        Value::Array(a) if a.iter().any(|x| x.is_object() || x.is_array()) => {
            for (i, x) in a.iter().enumerate() {
                text_lines(&format!("{prefix}[{i}]"), x, fmt, out);
            }
        }
        Value::Array(a) => {
            let items: Vec<String> = a.iter().map(|x| scalar_text(x, fmt)).collect();
            out.push_str(&format!("{prefix}: [{}]\n", items.join(", ")));
        }
        x => out.push_str(&format!("{prefix}: {}\n", scalar_text(x, fmt))),
    }
}

fn scalar_text(v: &Value, fmt: &NumFormat) -> String {
    match v {
        Value::Number(n) if n.is_f64() => fmt.render(n.as_f64().unwrap_or(f64::NAN)),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn emit_report(value: Value, format: Format, fmt: &NumFormat, verified: bool) -> Result<Emitted, Failure> {
    let value = render_floats(value, fmt);
    let body = match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&value).expect("json");
            s.push('\n');
            s
        }
        Format::Text => {
            let mut s = String::new();
            text_lines("", &value, fmt, &mut s);
            s
        }
        other => {
            return Err(Failure::Usage(format!(
                "format {other:?} is not supported by this subcommand (use json or text)"
            )))
        }
    };
    Ok(Emitted {
        body: body.into_bytes(),
        summary: None,
        verified,
    })
}

fn params_of(p: &ParamArgs) -> Result<(BoundParams, BoundMode, Vec<String>), Failure> {
    let delta = if p.explore { Delta::unchecked(p.delta)? } else { Delta::new(p.delta)? };
    let params = BoundParams::new(p.n, p.gamma, delta)?;
    let warnings = params.window_violations();
    if !p.explore && !warnings.is_empty() {
        return Err(Failure::Invalid(Error::Validity(warnings.join("; "))));
    }
    let mode = if p.explore { BoundMode::Explore } else { BoundMode::Strict };
    Ok((params, mode, warnings))
}

fn params_json(params: &BoundParams) -> Value {
    json!({ "n": params.n, "gamma": params.gamma, "delta": params.delta.value() })
}

fn with_seed(mut v: Value, seed: SeedInfo) -> Value {
    if let Value::Object(o) = &mut v {
        let mut head = Map::new();
        head.insert("seed".into(), json!(seed.value));
        head.insert("seed_source".into(), json!(seed.source));
        head.extend(std::mem::take(o));
        *o = head;
    }
    v
}

fn run_command(cmd: &Command, matches: &ArgMatches) -> Result<Emitted, Failure> {
    let sub = matches.subcommand().map(|(_, m)| m);
    match cmd {
        Command::Eval { function, delta, x, unchecked, output } => {
            let f: Function = function.parse()?;
            let d = if *unchecked { Delta::unchecked(*delta)? } else { Delta::new(*delta)? };
            let value = f.eval(d, *x)?;
            let fmt = NumFormat::new(output.precision, output.rounding);
            match output.format.unwrap_or(Format::Text) {
                Format::Text => Ok(Emitted {
                    body: format!("{}\n", fmt.render(value)).into_bytes(),
                    summary: None,
                    verified: true,
                }),
                format => emit_report(
                    json!({ "function": f.name(), "delta": delta, "x": x, "value": value }),
                    format,
                    &fmt,
                    true,
                ),
            }
        }
        Command::Bound { params, alphas, output } => {
            let (p, mode, warnings) = params_of(params)?;
            let alphas = alphas.clone().unwrap_or_else(|| vec![2.0 / p.n as f64; p.n]);
            let t = theorem_bound_ln(&p, &alphas, mode)?;
            let per_alpha = match per_alpha_bound_ln(&p, &alphas, mode) {
                Ok(v) => json!({ "value": v.exp(), "ln": v }),
                Err(e) => json!({ "not_applicable": e.to_string() }),
            };
            let report = json!({
                "params": params_json(&p),
                "alphas": alphas,
                "theorem_bound": { "value": t.exp(), "ln": t },
                "per_alpha_bound": per_alpha,
                "equal_split_argument": p.equal_split(),
                "warnings": warnings,
            });
            let fmt = NumFormat::new(output.precision, output.rounding);
            emit_report(report, output.format.unwrap_or(Format::Json), &fmt, true)
        }
        Command::Solve { params, starts, seed, resolution, output } => {
            let (p, _, warnings) = params_of(params)?;
            let seed = seed_info(*seed, sub);
            let c = solve_extremal(&p, *starts, seed.value)?;
            let target = p.equal_split();
            let max_dev = c.x.iter().map(|v| (v - target).abs()).fold(0.0, f64::max);
            let stationary = stationarity_check(&c, p.delta);
            let mut verified = true;
            let mut report = json!({
                "params": params_json(&p),
                "starts": starts,
                "candidate": c,
                "stationary": stationary,
                "equal_split": target,
                "max_deviation_from_equal_split": max_dev,
                "warnings": warnings,
            });
            if let Some(res) = resolution {
                let o = oracle_extremal(&p, *res)?;
                let h = p.budget() / *res as f64;
                let cell_dev = o.x.iter().map(|v| (v - target).abs()).fold(0.0, f64::max);
                let gap = oracle_grid_gap(&p, *res);
                let within_cell = cell_dev <= h * (1.0 + 1e-9);
                let dominated = o.objective <= c.objective + gap;
                verified = within_cell && dominated;
                report["oracle"] = json!({
                    "resolution": res,
                    "candidate": o,
                    "cell_width": h,
                    "max_deviation_from_equal_split": cell_dev,
                    "within_one_cell": within_cell,
                    "grid_gap": gap,
                    "objective_gap": c.objective - o.objective,
                    "agrees": verified,
                });
            }
            let fmt = NumFormat::new(output.precision, output.rounding);
            emit_report(with_seed(report, seed), output.format.unwrap_or(Format::Json), &fmt, verified)
        }
        Command::Verify { params, output } => {
            let (p, mode, _) = params_of(params)?;
            let r = replay_case_analysis_with(&p, mode)?;
            let all = r.all_hold();
            let mut v = serde_json::to_value(&r).expect("report");
            v["all_hold"] = json!(all);
            let fmt = NumFormat::new(output.precision, output.rounding);
            emit_report(v, output.format.unwrap_or(Format::Json), &fmt, all)
        }
        Command::Montecarlo { params, trials, seed, output } => {
            let (p, _, _) = params_of(params)?;
            p.check_theorem_window()?;
            let seed = seed_info(*seed, sub);
            let r = montecarlo_verify(&p, *trials, seed.value)?;
            let ok = r.violations() == 0;
            let mut v = serde_json::to_value(&r).expect("report");
            v["violations"] = json!(r.violations());
            v["skipped"] = json!(r.skipped());
            let fmt = NumFormat::new(output.precision, output.rounding);
            emit_report(with_seed(v, seed), output.format.unwrap_or(Format::Json), &fmt, ok)
        }
        Command::Plot { n, gamma, scene, orthogonal, output } => {
            let qd = QuadDiff::new(*n, *gamma)?;
            let mut opts = match scene {
                Some(path) => {
                    let text = std::fs::read_to_string(path)
                        .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
                    serde_json::from_str::<SceneOptions>(&text)
                        .map_err(|e| Failure::Usage(format!("scene options: {e}")))?
                }
                None => SceneOptions::default(),
            };
            if *orthogonal {
                opts.trace.orthogonal = true;
            }
            let s = render_scene(&qd, &opts)?;
            let fmt = NumFormat::new(output.precision, output.rounding);
            let mut summary = s.summary_json();
            summary["max_residual"] = json!(s.max_residual);
            summary["poles_separated"] = json!(s.domains.poles_separated());
            let summary = render_floats(summary, &fmt);
            let body = match output.format.unwrap_or(Format::Svg) {
                Format::Svg => s.to_svg(&opts),
                Format::Csv => trajectories_csv(&s.trajectories, opts.coordinate_precision),
                Format::Json => {
                    let mut v = serde_json::to_value(&s).expect("scene");
                    v["summary"] = summary.clone();
                    let mut t = serde_json::to_string(&v).expect("json");
                    t.push('\n');
                    t
                }
                Format::Text => {
                    let mut t = String::new();
                    text_lines("", &summary, &fmt, &mut t);
                    t
                }
            };
            Ok(Emitted {
                body: body.into_bytes(),
                summary: Some(format!("{summary}\n")),
                verified: true,
            })
        }
    }
}

fn output_of(cmd: &Command) -> &Output {
    match cmd {
        Command::Eval { output, .. }
        | Command::Bound { output, .. }
        | Command::Solve { output, .. }
        | Command::Verify { output, .. }
        | Command::Montecarlo { output, .. }
        | Command::Plot { output, .. } => output,
    }
}

/// Writes via a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

fn report_failure(err: &mut dyn Write, f: &Failure) -> i32 {
    let v = match f {
        Failure::Invalid(e) => json!({ "error": { "kind": error_kind(e), "message": e.to_string() } }),
        Failure::Io(m) => json!({ "error": { "kind": "io", "message": m } }),
        Failure::Usage(m) => json!({ "error": { "kind": "usage", "message": m } }),
    };
    let _ = writeln!(err, "{v}");
    EXIT_INVALID
}

/// Parses `args` (including the program name) and runs the subcommand.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let matches = match Cli::command().try_get_matches_from(args) {
        Ok(m) => m,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{}", e.render());
                return EXIT_OK;
            }
            return report_failure(err, &Failure::Usage(e.render().to_string().trim_end().to_string()));
        }
    };
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(c) => c,
        Err(e) => return report_failure(err, &Failure::Usage(e.render().to_string().trim_end().to_string())),
    };
    let output = output_of(&cli.command).clone();
    if output.threads == 0 {
        return report_failure(err, &Failure::Usage("--threads must be at least 1".into()));
    }
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(output.threads).build() {
        Ok(p) => p,
        Err(e) => return report_failure(err, &Failure::Io(e.to_string())),
    };
    let result = pool.install(|| run_command(&cli.command, &matches));
    let emitted = match result {
        Ok(e) => e,
        Err(f) => return report_failure(err, &f),
    };
    match &output.out {
        Some(path) => {
            if let Err(e) = write_atomic(path, &emitted.body) {
                return report_failure(err, &Failure::Io(format!("{}: {e}", path.display())));
            }
            if let Some(s) = &emitted.summary {
                let _ = out.write_all(s.as_bytes());
            }
        }
        None => {
            let _ = out.write_all(&emitted.body);
        }
    }
    if emitted.verified {
        EXIT_OK
    } else {
        EXIT_VERIFY_FAILED
    }
}
