//! Batch command-line front-end for `matgeo`.
//!
//! Each invocation reads matrix documents, runs one operation family, and
//! prints one JSON report per primary input. Exit codes: 0 when every
//! report has status "ok", 1 on precondition violations or residuals above
//! tolerance, 2 on unreadable or malformed input and usage errors.

pub mod commands;
pub mod document;
pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{Map, Value};
use thiserror::Error;

use crate::commands::{execute, Docs};
use crate::document::DocumentError;
use crate::report::{digest, Inputs, Report, Status};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{slot}: {err}")]
    Document { slot: &'static str, err: DocumentError },
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("missing required input {0}")]
    MissingInput(&'static str),
    #[error("missing required flag {0}")]
    MissingFlag(&'static str),
    #[error(transparent)]
    Domain(#[from] matgeo::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Domain(_) => 1,
            _ => 2,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "matgeo", version, about = "Matrix analysis and matrix-group geometry from the command line")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Override the default tolerance of every residual of the subcommand.
    #[arg(long, global = true, value_name = "REAL")]
    pub tol: Option<f64>,
    /// Accept several --in documents and process them in parallel; reports
    /// are printed in input order.
    #[arg(long, global = true)]
    pub batch: bool,
}

#[derive(Debug, Clone, Args)]
pub struct Io {
    /// Primary input document (repeatable with --batch).
    #[arg(long = "in", value_name = "PATH", required = true)]
    pub input: Vec<PathBuf>,
    /// Second input document.
    #[arg(long, value_name = "PATH")]
    pub in2: Option<PathBuf>,
    /// Third input document.
    #[arg(long, value_name = "PATH")]
    pub in3: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LogKind {
    Spd,
    Unitary,
    So,
    Real,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GeodesicGroup {
    Gl,
    Sl,
    Spd,
    O,
    U,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LatticeOp {
    Covol,
    Reduce,
    Equal,
    Unimodular,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProjOp {
    Apply,
    Chart,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GrassOp {
    Graph,
    Annihilator,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LiftKind {
    Rp,
    Cp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CurvatureKind {
    Rp,
    Cp,
    Spd,
    Product,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Matrix exponential of --in.
    Expm(Io),
    /// Logarithm of --in: SPD, unitary, special orthogonal, or the real-log decision.
    Logm {
        #[arg(long, value_enum)]
        kind: LogKind,
        #[command(flatten)]
        io: Io,
    },
    /// Same as `logm --kind real`.
    Reallog(Io),
    /// det(exp A) against exp(tr A).
    Detexp(Io),
    /// Polar decomposition T = R·P.
    Polar(Io),
    /// Geodesic from --in with direction --in2 at parameter --t.
    Geodesic {
        #[arg(long, value_enum)]
        group: GeodesicGroup,
        #[arg(long = "t", default_value_t = 1.0, allow_negative_numbers = true)]
        t: f64,
        #[command(flatten)]
        io: Io,
    },
    /// Trace metric ⟨--in2, --in3⟩ at --in (--in3 defaults to --in2).
    Metric(Io),
    /// Lattice spanned by the columns of --in.
    Lattice {
        #[arg(value_enum)]
        op: LatticeOp,
        #[command(flatten)]
        io: Io,
    },
    /// Projective maps and affine charts.
    Proj {
        #[arg(value_enum)]
        op: ProjOp,
        /// Chart index (0-based) for `chart`.
        #[arg(long)]
        index: Option<usize>,
        #[command(flatten)]
        io: Io,
    },
    /// Grassmannian graph charts and annihilators; subspaces are column spans.
    Grass {
        #[arg(value_enum)]
        op: GrassOp,
        #[command(flatten)]
        io: Io,
    },
    /// Horizontal lift of the image of the great circle from --in towards --in2.
    Lift {
        #[arg(long, value_enum)]
        kind: LiftKind,
        #[arg(long, default_value_t = 100)]
        steps: usize,
        /// Final parameter; the circle closes up in the base at every integer.
        #[arg(long = "t", default_value_t = 1.0)]
        t: f64,
        #[command(flatten)]
        io: Io,
    },
    /// Curvature of the connection at --in on tangent vectors --in2, --in3.
    Curvature {
        #[arg(long, value_enum)]
        kind: CurvatureKind,
        /// Target dimension for `--kind product`.
        #[arg(long)]
        k: Option<usize>,
        /// Finite-difference step.
        #[arg(long)]
        step: Option<f64>,
        #[command(flatten)]
        io: Io,
    },
    /// Hausdorff distance between the row sets of --in and --in2.
    Hausdorff {
        #[arg(long = "p", default_value_t = 2.0)]
        p: f64,
        #[command(flatten)]
        io: Io,
    },
    /// Partition length of the rows of --in (times from --in2, default 0, 1, 2, ...).
    Pathlen {
        #[arg(long = "p", default_value_t = 2.0)]
        p: f64,
        #[command(flatten)]
        io: Io,
    },
    /// Eigendecomposition of a self-adjoint matrix.
    Eigh(Io),
    /// Characteristic polynomial, ascending coefficients.
    Charpoly(Io),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Expm(_) => "expm",
            Command::Logm { .. } => "logm",
            Command::Reallog(_) => "reallog",
            Command::Detexp(_) => "detexp",
            Command::Polar(_) => "polar",
            Command::Geodesic { .. } => "geodesic",
            Command::Metric(_) => "metric",
            Command::Lattice { .. } => "lattice",
            Command::Proj { .. } => "proj",
            Command::Grass { .. } => "grass",
            Command::Lift { .. } => "lift",
            Command::Curvature { .. } => "curvature",
            Command::Hausdorff { .. } => "hausdorff",
            Command::Pathlen { .. } => "pathlen",
            Command::Eigh(_) => "eigh",
            Command::Charpoly(_) => "charpoly",
        }
    }

    fn io(&self) -> &Io {
        match self {
            Command::Expm(io)
            | Command::Reallog(io)
            | Command::Detexp(io)
            | Command::Polar(io)
            | Command::Metric(io)
            | Command::Eigh(io)
            | Command::Charpoly(io) => io,
            Command::Logm { io, .. }
            | Command::Geodesic { io, .. }
            | Command::Lattice { io, .. }
            | Command::Proj { io, .. }
            | Command::Grass { io, .. }
            | Command::Lift { io, .. }
            | Command::Curvature { io, .. }
            | Command::Hausdorff { io, .. }
            | Command::Pathlen { io, .. } => io,
        }
    }

    /// Non-path parameters, hashed into the input digest.
    fn parameters(&self, tol: Option<f64>) -> String {
        let extra = match self {
            Command::Logm { kind, .. } => format!("kind={kind:?}"),
            Command::Geodesic { group, t, .. } => format!("group={group:?};t={t:e}"),
            Command::Lattice { op, .. } => format!("op={op:?}"),
            Command::Proj { op, index, .. } => format!("op={op:?};index={index:?}"),
            Command::Grass { op, .. } => format!("op={op:?}"),
            Command::Lift { kind, steps, t, .. } => format!("kind={kind:?};steps={steps};t={t:e}"),
            Command::Curvature { kind, k, step, .. } => format!("kind={kind:?};k={k:?};step={step:?}"),
            Command::Hausdorff { p, .. } | Command::Pathlen { p, .. } => format!("p={p:e}"),
            _ => String::new(),
        };
        format!("{};{extra};tol={tol:?}", self.name())
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn error_report(command: &str, sha256: String, err: &CliError) -> Report {
    Report {
        command: command.to_string(),
        inputs: Inputs { sha256 },
        outputs: Map::new(),
        residuals: Map::new(),
        status: Status::Error,
        message: err.to_string(),
    }
}

/// Runs one primary input; returns the report and its exit code.
fn job(cli: &Cli, primary: &Path, in2: Option<&str>, in3: Option<&str>) -> (Report, i32) {
    let cmd = &cli.command;
    let params = cmd.parameters(cli.tol);
    let text = read(primary);
    let primary_bytes = text.as_deref().unwrap_or("").as_bytes();
    let sha = digest([
        params.as_bytes(),
        primary_bytes,
        in2.unwrap_or("").as_bytes(),
        in3.unwrap_or("").as_bytes(),
    ]);
    let text = match text {
        Ok(t) => t,
        Err(e) => return (error_report(cmd.name(), sha, &e), e.exit_code()),
    };
    let docs = Docs {
        primary: &text,
        in2,
        in3,
    };
    let outcome = match execute(cmd, &docs) {
        Ok(o) => o,
        Err(e) => return (error_report(cmd.name(), sha, &e), e.exit_code()),
    };
    let mut residuals = Map::new();
    let mut failures = Vec::new();
    let mut limits = Vec::new();
    for &(name, value, default_tol) in &outcome.residuals {
        let tol = cli.tol.unwrap_or(default_tol);
        residuals.insert(name.to_string(), serde_json::Number::from_f64(value).map_or(Value::Null, Value::Number));
        limits.push(format!("{name} <= {tol:e}"));
        if !(value <= tol) {
            failures.push(format!("{name} = {value:e} exceeds {tol:e}"));
        }
    }
    let (status, message, code) = if failures.is_empty() {
        let message = if limits.is_empty() {
            "ok".to_string()
        } else {
            format!("ok: {}", limits.join(", "))
        };
        (Status::Ok, message, 0)
    } else {
        (Status::Error, format!("postcondition check failed: {}", failures.join("; ")), 1)
    };
    let report = Report {
        command: cmd.name().to_string(),
        inputs: Inputs { sha256: sha },
        outputs: outcome.outputs,
        residuals,
        status,
        message,
    };
    (report, code)
}

/// Parses `args` (including the program name), runs the subcommand, and
/// writes reports to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
                return 2;
            }
            let _ = write!(out, "{text}");
            return 0;
        }
    };
    let io = cli.command.io();
    if io.input.len() > 1 && !cli.batch {
        let _ = writeln!(err, "error: several --in documents need --batch");
        return 2;
    }
    let shared = |p: &Option<PathBuf>| p.as_deref().map(read).transpose();
    let (in2, in3) = match (shared(&io.in2), shared(&io.in3)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => {
            let _ = writeln!(err, "error: {e}");
            return e.exit_code();
        }
    };
    let results: Vec<(Report, i32)> = if cli.batch {
        std::thread::scope(|s| {
            let handles: Vec<_> = io
                .input
                .iter()
                .map(|p| s.spawn(|| job(&cli, p, in2.as_deref(), in3.as_deref())))
                .collect();
            handles.into_iter().map(|h| h.join().expect("batch worker panicked")).collect()
        })
    } else {
        vec![job(&cli, &io.input[0], in2.as_deref(), in3.as_deref())]
    };
    let mut code = 0;
    for (report, c) in &results {
        let _ = writeln!(out, "{}", report.to_line());
        if *c != 0 {
            let _ = writeln!(err, "{}: {}", report.command, report.message);
        }
        code = code.max(*c);
    }
    code
}
