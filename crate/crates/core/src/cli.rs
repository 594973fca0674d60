//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage or parse error, 2 verification failure or
//! enumeration guard, 3 decoding beyond the unique radius.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::angle::{argmin_scalar, is_max_angle, scalar_distances};
use crate::code::{DecodeKind, LinearCode};
use crate::error::Error;
use crate::experiments::{self, DecodingSuite};
use crate::gf::FieldSpec;
use crate::vec::FqVector;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_FAILURE: i32 = 2;
pub const EXIT_BEYOND_RADIUS: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "hangle", version, about = "Hamming angle over finite fields")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Plain,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Angle between two nonzero vectors.
    Angle {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        u: String,
        #[arg(long)]
        v: String,
        /// Include d_H(u, c v) for every nonzero scalar c.
        #[arg(long)]
        verbose: bool,
    },
    /// Decode a word to its nearest codeword direction.
    Decode {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long)]
        u: String,
        /// List every direction at angle < rho instead of decoding.
        #[arg(long)]
        rho: Option<usize>,
    },
    /// Run a verification suite.
    Verify {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Time the fast and naive angle algorithms.
    Bench {
        #[command(flatten)]
        field: FieldArgs,
        /// Vector lengths, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        #[arg(long, default_value_t = 9)]
        reps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Brute-force minimum distance of a code.
    Mindist {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        code: CodeArgs,
    },
}

#[derive(Debug, Args)]
pub struct FieldArgs {
    /// Field order, a prime power <= 65536.
    #[arg(long, conflicts_with_all = ["p", "m"])]
    pub q: Option<u32>,
    #[arg(long)]
    pub p: Option<u32>,
    #[arg(long, requires = "p")]
    pub m: Option<u32>,
}

#[derive(Debug, Args)]
pub struct CodeArgs {
    #[arg(long, value_enum)]
    pub code: Option<CodeKind>,
    #[arg(long)]
    pub code_file: Option<PathBuf>,
    /// Code length (or vector length for the metric/projective/oracle suites).
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CodeKind {
    Rs,
    Rep,
    File,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Metric,
    Projective,
    Oracle,
    Decoding,
    Census,
}

/// A command's outcome: the document to print and the exit code.
struct Output {
    doc: Value,
    plain: String,
    code: i32,
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::EnumerationTooLarge { .. }
            | Error::SuiteTooLarge { .. }
            | Error::UniquenessViolated { .. } => EXIT_FAILURE,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

type CmdResult = std::result::Result<Output, Failure>;

/// Parses `args` (including the program name), runs the command, and returns
/// the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if code == EXIT_OK {
                write!(out, "{rendered}")
            } else {
                write!(err, "{rendered}")
            };
            return code;
        }
    };

    match dispatch(&cli.command) {
        Ok(output) => {
            let text = match cli.format {
                Format::Json => serde_json::to_string_pretty(&output.doc).expect("json values serialize"),
                Format::Plain => output.plain,
            };
            let _ = writeln!(out, "{}", text.trim_end());
            output.code
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(cmd: &Command) -> CmdResult {
    match cmd {
        Command::Angle { field, u, v, verbose } => cmd_angle(field, u, v, *verbose),
        Command::Decode { field, code, u, rho } => cmd_decode(field, code, u, *rho),
        Command::Verify {
            field,
            code,
            suite,
            trials,
            seed,
        } => cmd_verify(field, code, *suite, *trials, *seed),
        Command::Bench { field, n, reps, seed } => cmd_bench(field, n, *reps, *seed),
        Command::Mindist { field, code } => cmd_mindist(field, code),
    }
}

fn field(args: &FieldArgs) -> Result<Arc<FieldSpec>, Failure> {
    let spec = match (args.q, args.p) {
        (Some(q), _) => FieldSpec::with_order(q)?,
        (None, Some(p)) => FieldSpec::new(p, args.m.unwrap_or(1))?,
        (None, None) => return Err(usage("one of --q or --p is required")),
    };
    Ok(Arc::new(spec))
}

fn build_code(spec: &Arc<FieldSpec>, args: &CodeArgs) -> Result<(LinearCode, CodeKind), Failure> {
    let kind = match (args.code, &args.code_file) {
        (Some(kind), _) => kind,
        (None, Some(_)) => CodeKind::File,
        (None, None) => return Err(usage("--code {rs|rep|file} is required")),
    };
    let need_n = || args.n.ok_or_else(|| usage("--n is required"));
    let code = match kind {
        CodeKind::Rs => {
            let k = args.k.ok_or_else(|| usage("--k is required for --code rs"))?;
            LinearCode::reed_solomon(spec, need_n()?, k, None)?
        }
        CodeKind::Rep => LinearCode::repetition(spec, need_n()?)?,
        CodeKind::File => {
            let path = args
                .code_file
                .as_ref()
                .ok_or_else(|| usage("--code-file is required for --code file"))?;
            let text = std::fs::read_to_string(path)
                .map_err(|e| usage(format!("reading {}: {e}", path.display())))?;
            LinearCode::parse(spec, &text)?
        }
    };
    Ok((code, kind))
}

fn to_value(x: &impl Serialize) -> Value {
    serde_json::to_value(x).expect("plain data serializes")
}

fn cmd_angle(field_args: &FieldArgs, u: &str, v: &str, verbose: bool) -> CmdResult {
    let spec = field(field_args)?;
    let (u, v) = (FqVector::parse(&spec, u)?, FqVector::parse(&spec, v)?);
    let (c, angle) = argmin_scalar(&u, &v)?;
    let is_max = is_max_angle(&u, &v)?;

    let mut doc = json!({ "angle": angle, "argmin_c": c, "is_max": is_max });
    let mut plain = format!("angle {angle}\nargmin_c {c}\nis_max {is_max}\n");
    if verbose {
        let trace = scalar_distances(&u, &v)?;
        doc["trace"] = trace
            .iter()
            .map(|&(c, d)| json!({ "c": c, "distance": d }))
            .collect();
        for (c, d) in trace {
            plain.push_str(&format!("c={c} d_H(u, c v)={d}\n"));
        }
    }
    Ok(Output {
        doc,
        plain,
        code: EXIT_OK,
    })
}

fn cmd_decode(field_args: &FieldArgs, code_args: &CodeArgs, u: &str, rho: Option<usize>) -> CmdResult {
    let spec = field(field_args)?;
    let (code, _) = build_code(&spec, code_args)?;
    let u = FqVector::parse(&spec, u)?;

    if let Some(rho) = rho {
        let list = code.projective_list_decode(&u, rho)?;
        let plain = list
            .iter()
            .map(|c| format!("{} angle {}\n", c.point, c.angle))
            .collect::<String>();
        return Ok(Output {
            doc: json!({ "rho": rho, "list": to_value(&list) }),
            plain: format!("rho {rho}, {} directions\n{plain}", list.len()),
            code: EXIT_OK,
        });
    }

    let out = code.angular_decode(&u)?;
    let within = 2 * out.angle() < out.min_distance;
    let doc = json!({
        "kind": out.kind,
        "angle": out.angle(),
        "d": out.min_distance,
        "radius": out.radius(),
        "within_radius": within,
        "best": to_value(&out.best),
    });
    let mut plain = format!(
        "{:?}: angle {} (d = {}, radius {})\n",
        out.kind,
        out.angle(),
        out.min_distance,
        out.radius()
    );
    for c in &out.best {
        plain.push_str(&format!("  {}\n", c.point));
    }
    let code = match out.kind {
        DecodeKind::UniqueDirection => EXIT_OK,
        DecodeKind::BeyondRadius => EXIT_BEYOND_RADIUS,
    };
    Ok(Output { doc, plain, code })
}

fn cmd_verify(
    field_args: &FieldArgs,
    code_args: &CodeArgs,
    suite: Suite,
    trials: Option<u64>,
    seed: u64,
) -> CmdResult {
    let spec = field(field_args)?;
    let need_n = || code_args.n.ok_or_else(|| usage("--n is required"));
    let report = match suite {
        Suite::Metric => experiments::verify_metric_axioms(&spec, need_n()?)?,
        Suite::Projective => experiments::verify_projective_descent(&spec, need_n()?)?,
        Suite::Oracle => {
            experiments::verify_oracle_equivalence(&spec, need_n()?, trials.unwrap_or(10_000), seed)?
        }
        Suite::Decoding => {
            let (code, _) = build_code(&spec, code_args)?;
            let opts = DecodingSuite {
                seed,
                samples: trials.unwrap_or(1000),
                ..DecodingSuite::default()
            };
            experiments::verify_angular_decoding(&code, &opts)?
        }
        Suite::Census => {
            let (code, _) = build_code(&spec, code_args)?;
            experiments::angle_vs_dist_census(&code, trials.unwrap_or(1000), seed)?
        }
    };
    let mut plain = format!(
        "suite {} q={} n={}: {} checks, {} failures ({:.1} ms)\n",
        report.suite,
        report.q,
        report.n,
        report.checks_run,
        report.failures.len(),
        report.wall_time_ms
    );
    for f in &report.failures {
        plain.push_str(&format!("  {f}\n"));
    }
    let code = if report.passed() { EXIT_OK } else { EXIT_FAILURE };
    Ok(Output {
        doc: to_value(&report),
        plain,
        code,
    })
}

fn cmd_bench(field_args: &FieldArgs, n: &[usize], reps: usize, seed: u64) -> CmdResult {
    let spec = field(field_args)?;
    let records = experiments::bench_angle(&spec, n, reps, seed)?;
    let plain = records
        .iter()
        .map(|r| {
            format!(
                "{:<5} q={} n={} median {} ns ({:.3e} positions/s)\n",
                r.algo, r.q, r.n, r.median_ns, r.throughput
            )
        })
        .collect();
    Ok(Output {
        doc: to_value(&records),
        plain,
        code: EXIT_OK,
    })
}

fn cmd_mindist(field_args: &FieldArgs, code_args: &CodeArgs) -> CmdResult {
    let spec = field(field_args)?;
    let (code, kind) = build_code(&spec, code_args)?;
    let d = code.min_distance()?;
    let singleton = code.n() - code.k() + 1;
    let mut doc = json!({
        "q": spec.order(),
        "n": code.n(),
        "k": code.k(),
        "d": d,
        "singleton_bound": singleton,
    });
    let mut plain = format!("d = {d} (n = {}, k = {}, n - k + 1 = {singleton})\n", code.n(), code.k());
    let mut exit = EXIT_OK;
    if kind == CodeKind::Rs {
        doc["mds"] = json!(d == singleton);
        if d != singleton {
            plain.push_str("Reed-Solomon code is not MDS\n");
            exit = EXIT_FAILURE;
        }
    }
    Ok(Output {
        doc,
        plain,
        code: exit,
    })
}
