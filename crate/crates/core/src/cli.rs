//! Command-line front end: tables, the verification suite, and numeric
//! evaluation.
//!
//! Exit codes: 0 success, 1 a check failed, 2 usage or validation error.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::value::RawValue;

use crate::bell::{bell_degenerate_stirling, degenerate_stirling2_closed, exact_suite};
use crate::combinatorics::{bell_polynomial, StirlingKind, StirlingTable};
use crate::error::Error;
use crate::numeric::{
    dobinski_degenerate_check, eval_bel_numeric, numeric_suite, validate_lambda, NumericCheck,
    DEFAULT_TERMS, DEFAULT_TOL,
};
use crate::poly::{MPoly, Point};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "degbell",
    version,
    about = "Exact degenerate Bell polynomials and degenerate Stirling numbers"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print a table of one number family for n = 0..=n_max
    Table(TableArgs),
    /// Run every exact and numeric identity check
    Verify(VerifyArgs),
    /// Evaluate Bel_{n,λ}(x) in floating point
    Eval(EvalArgs),
}

#[derive(Args, Debug)]
pub struct Common {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write to this file instead of standard output
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct TableArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    #[arg(long, default_value_t = 6)]
    pub n_max: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 12)]
    pub n_max: usize,
    #[arg(long, default_value_t = DEFAULT_TERMS)]
    pub terms: usize,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, allow_negative_numbers = true)]
    pub lambda: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub x: f64,
    /// `dbell` (default) or `bell` for the classical polynomial
    #[arg(long, value_enum, default_value_t = Family::Dbell)]
    pub family: Family,
    /// Also evaluate the truncated Dobiński-type series and report the gap
    #[arg(long)]
    pub dobinski: bool,
    #[arg(long, default_value_t = DEFAULT_TERMS)]
    pub terms: usize,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Bell,
    Stirling1,
    Stirling2,
    Dstirling,
    Dbell,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CommandKind {
    Table,
    Verify,
    Eval,
}

/// Validated settings for one invocation.
#[derive(Clone, Debug, PartialEq)]
pub struct CliConfig {
    pub command: CommandKind,
    pub family: Family,
    pub n_max: usize,
    pub lambda: Option<f64>,
    pub x: Option<f64>,
    pub terms: usize,
    pub tol: f64,
    pub dobinski: bool,
    pub format: Format,
    pub output: Option<PathBuf>,
}

/// Rendered output plus whether every emitted check passed.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub text: String,
    pub passed: bool,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            EXIT_OK
        } else {
            EXIT_FAILED
        }
    }
}

impl CliConfig {
    pub fn from_cli(cli: Cli) -> Result<Self, Error> {
        let cfg = match cli.command {
            Command::Table(a) => CliConfig {
                command: CommandKind::Table,
                family: a.family,
                n_max: a.n_max,
                lambda: None,
                x: None,
                terms: DEFAULT_TERMS,
                tol: DEFAULT_TOL,
                dobinski: false,
                format: a.common.format,
                output: a.common.output,
            },
            Command::Verify(a) => CliConfig {
                command: CommandKind::Verify,
                family: Family::Dbell,
                n_max: a.n_max,
                lambda: None,
                x: None,
                terms: a.terms,
                tol: a.tol,
                dobinski: false,
                format: a.common.format,
                output: a.common.output,
            },
            Command::Eval(a) => CliConfig {
                command: CommandKind::Eval,
                family: a.family,
                n_max: a.n,
                lambda: a.lambda,
                x: Some(a.x),
                terms: a.terms,
                tol: a.tol,
                dobinski: a.dobinski,
                format: a.common.format,
                output: a.common.output,
            },
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), Error> {
        if self.terms == 0 {
            return Err(Error::InvalidArgument("--terms must be at least 1".into()));
        }
        if self.tol.is_nan() || self.tol <= 0.0 || !self.tol.is_finite() {
            return Err(Error::InvalidArgument("--tol must be positive".into()));
        }
        if self.command == CommandKind::Eval {
            match self.family {
                Family::Dbell => match self.lambda {
                    None => {
                        return Err(Error::InvalidArgument(
                            "--lambda is required for dbell".into(),
                        ))
                    }
                    Some(l) => validate_lambda(l)?,
                },
                Family::Bell => {
                    if self.dobinski {
                        return Err(Error::InvalidArgument(
                            "--dobinski applies to dbell only".into(),
                        ));
                    }
                }
                other => {
                    return Err(Error::InvalidArgument(format!(
                        "eval supports bell and dbell, not {other:?}"
                    )))
                }
            }
            if let Some(x) = self.x {
                if !x.is_finite() {
                    return Err(Error::InvalidArgument("--x must be finite".into()));
                }
            }
        }
        Ok(())
    }
}

fn raw(s: String) -> Box<RawValue> {
    RawValue::from_string(s).expect("integer literal is valid JSON")
}

#[derive(Serialize)]
struct PolyEntry<'a> {
    n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    m: Option<usize>,
    poly: &'a MPoly,
}

pub fn run_table(cfg: &CliConfig) -> Result<Outcome, Error> {
    let n_max = cfg.n_max;
    let mut out = String::new();
    match cfg.family {
        Family::Stirling1 | Family::Stirling2 => {
            let kind = if cfg.family == Family::Stirling1 {
                StirlingKind::First
            } else {
                StirlingKind::Second
            };
            let table = StirlingTable::new(kind, n_max);
            match cfg.format {
                Format::Text => {
                    for row in table.rows() {
                        let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
                        writeln!(out, "{}", cells.join(" ")).unwrap();
                    }
                }
                Format::Json => {
                    let rows: Vec<Vec<Box<RawValue>>> = table
                        .rows()
                        .iter()
                        .map(|r| r.iter().map(|v| raw(v.to_string())).collect())
                        .collect();
                    writeln!(out, "{}", serde_json::to_string(&rows).unwrap()).unwrap();
                }
                Format::Csv => {
                    writeln!(out, "n,k,value").unwrap();
                    for (n, row) in table.rows().iter().enumerate() {
                        for (k, v) in row.iter().enumerate() {
                            writeln!(out, "{n},{k},{v}").unwrap();
                        }
                    }
                }
            }
        }
        Family::Bell | Family::Dbell => {
            let polys: Vec<MPoly> = (0..=n_max)
                .map(|n| {
                    if cfg.family == Family::Bell {
                        bell_polynomial(n)
                    } else {
                        bell_degenerate_stirling(n)
                    }
                })
                .collect();
            let label = |n: usize| {
                if cfg.family == Family::Bell {
                    format!("Bel_{n}(x)")
                } else {
                    format!("Bel_{{{n},λ}}(x)")
                }
            };
            match cfg.format {
                Format::Text => {
                    for (n, p) in polys.iter().enumerate() {
                        writeln!(out, "{} = {}", label(n), p).unwrap();
                    }
                }
                Format::Json => {
                    let entries: Vec<PolyEntry> = polys
                        .iter()
                        .enumerate()
                        .map(|(n, poly)| PolyEntry { n, m: None, poly })
                        .collect();
                    writeln!(out, "{}", serde_json::to_string(&entries).unwrap()).unwrap();
                }
                Format::Csv => {
                    writeln!(out, "n,poly").unwrap();
                    for (n, p) in polys.iter().enumerate() {
                        writeln!(out, "{n},{p}").unwrap();
                    }
                }
            }
        }
        Family::Dstirling => {
            let mut entries = Vec::new();
            for n in 0..=n_max {
                for m in 0..=n {
                    entries.push((n, m, degenerate_stirling2_closed(n, m)?));
                }
            }
            match cfg.format {
                Format::Text => {
                    for (n, m, p) in &entries {
                        writeln!(out, "S2({n},{m}|λ) = {p}").unwrap();
                    }
                }
                Format::Json => {
                    let json: Vec<PolyEntry> = entries
                        .iter()
                        .map(|(n, m, poly)| PolyEntry { n: *n, m: Some(*m), poly })
                        .collect();
                    writeln!(out, "{}", serde_json::to_string(&json).unwrap()).unwrap();
                }
                Format::Csv => {
                    writeln!(out, "n,m,poly").unwrap();
                    for (n, m, p) in &entries {
                        writeln!(out, "{n},{m},{p}").unwrap();
                    }
                }
            }
        }
    }
    Ok(Outcome { text: out, passed: true })
}

pub fn run_verify(cfg: &CliConfig) -> Result<Outcome, Error> {
    let mut exact = exact_suite(cfg.n_max);
    exact.sort_by(|a, b| a.identity.cmp(&b.identity));
    let mut numeric = numeric_suite(cfg.n_max, cfg.terms, cfg.tol)?;
    numeric.sort_by(|a, b| {
        a.identity
            .cmp(&b.identity)
            .then(a.params.n.cmp(&b.params.n))
    });
    let passed = exact.iter().all(|r| r.passed) && numeric.iter().all(|c| c.passed);

    let mut out = String::new();
    match cfg.format {
        Format::Text => {
            for r in &exact {
                let status = if r.passed { "PASS" } else { "FAIL" };
                write!(out, "{status} {} n={}..={}", r.identity, r.range.0, r.range.1).unwrap();
                if let Some(f) = &r.first_failure {
                    write!(out, " first failure at n={}: {} != {}", f.n, f.lhs, f.rhs).unwrap();
                }
                out.push('\n');
            }
            for c in &numeric {
                writeln!(out, "{} {}", if c.passed { "PASS" } else { "FAIL" }, describe(c)).unwrap();
            }
            let total = exact.len() + numeric.len();
            let failed = exact.iter().filter(|r| !r.passed).count()
                + numeric.iter().filter(|c| !c.passed).count();
            if failed == 0 {
                writeln!(out, "all {total} checks passed").unwrap();
            } else {
                writeln!(out, "{failed} of {total} checks failed").unwrap();
            }
        }
        Format::Json => {
            let mut items: Vec<serde_json::Value> = Vec::new();
            items.extend(exact.iter().map(|r| serde_json::to_value(r).unwrap()));
            items.extend(numeric.iter().map(|c| serde_json::to_value(c).unwrap()));
            writeln!(out, "{}", serde_json::to_string(&items).unwrap()).unwrap();
        }
        Format::Csv => {
            writeln!(out, "{}", NumericCheck::CSV_HEADER).unwrap();
            for c in &numeric {
                writeln!(out, "{}", c.csv_row()).unwrap();
            }
        }
    }
    Ok(Outcome { text: out, passed })
}

fn describe(c: &NumericCheck) -> String {
    let mut s = format!("{} n={}", c.identity, c.params.n);
    if let Some(l) = c.params.lambda {
        write!(s, " lambda={l}").unwrap();
    }
    write!(s, " x={}", c.params.x).unwrap();
    if let Some(t) = c.params.terms {
        write!(s, " terms={t}").unwrap();
    }
    write!(s, " abs_error={:e}", c.abs_error).unwrap();
    s
}

#[derive(Serialize)]
struct EvalJson<'a> {
    n: usize,
    lambda: Option<f64>,
    x: f64,
    value: f64,
    dobinski: Option<&'a NumericCheck>,
}

pub fn run_eval(cfg: &CliConfig) -> Result<Outcome, Error> {
    let n = cfg.n_max;
    let x = cfg.x.ok_or_else(|| Error::InvalidArgument("--x is required".into()))?;
    let (value, check) = match cfg.family {
        Family::Bell => {
            let p = Point { lambda: 0.0, l: 1.0, x, y: 0.0 };
            (bell_polynomial(n).eval_f64(&p), None)
        }
        _ => {
            let lambda = cfg.lambda.expect("validated");
            let value = eval_bel_numeric(n, lambda, x)?;
            let check = if cfg.dobinski {
                Some(dobinski_degenerate_check(n, lambda, x, cfg.terms, cfg.tol)?)
            } else {
                None
            };
            (value, check)
        }
    };
    let passed = check.as_ref().is_none_or(|c| c.passed);

    let mut out = String::new();
    match cfg.format {
        Format::Text => {
            writeln!(out, "value = {value}").unwrap();
            if let Some(c) = &check {
                writeln!(out, "dobinski = {}", c.lhs).unwrap();
                writeln!(out, "gap = {:e}", c.abs_error).unwrap();
                writeln!(out, "{}", if c.passed { "PASS" } else { "FAIL" }).unwrap();
            }
        }
        Format::Json => {
            let j = EvalJson { n, lambda: cfg.lambda, x, value, dobinski: check.as_ref() };
            writeln!(out, "{}", serde_json::to_string(&j).unwrap()).unwrap();
        }
        Format::Csv => match &check {
            Some(c) => {
                writeln!(out, "{}", NumericCheck::CSV_HEADER).unwrap();
                writeln!(out, "{}", c.csv_row()).unwrap();
            }
            None => {
                writeln!(out, "n,lambda,x,value").unwrap();
                let l = cfg.lambda.map(|l| l.to_string()).unwrap_or_default();
                writeln!(out, "{n},{l},{x},{value}").unwrap();
            }
        },
    }
    Ok(Outcome { text: out, passed })
}

pub fn execute(cfg: &CliConfig) -> Result<Outcome, Error> {
    match cfg.command {
        CommandKind::Table => run_table(cfg),
        CommandKind::Verify => run_verify(cfg),
        CommandKind::Eval => run_eval(cfg),
    }
}

/// Runs a parsed command line, writes its output, and returns the exit code.
pub fn run(cli: Cli) -> i32 {
    let cfg = match CliConfig::from_cli(cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let outcome = match execute(&cfg) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    match &cfg.output {
        Some(path) => {
            if let Err(e) = fs::write(path, &outcome.text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return EXIT_USAGE;
            }
        }
        None => print!("{}", outcome.text),
    }
    outcome.exit_code()
}
