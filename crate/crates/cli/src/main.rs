//! `gramqfi`: QFI evaluations, parameter sweeps, and the validation suite.

mod model;
mod output;

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;
use std::time::Instant;

use clap::builder::PossibleValuesParser;
use clap::{Args, Parser, Subcommand};
use gramqfi::validation::{self, ValidationConfig, CHECKS, TOTAL_BUDGET};
use rayon::prelude::*;

use model::{evaluate, BoundSpec, ModelKind, Record};

#[derive(Parser, Debug)]
#[command(
    name = "gramqfi",
    version,
    about = "Quantum Fisher information on non-orthogonal bases"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a model at one point.
    Eval(EvalArgs),
    /// Evaluate a model along a grid of one input and write CSV.
    Sweep(SweepArgs),
    /// Run the cross-checks between engine, oracle, and closed forms.
    Validate(ValidateArgs),
}

#[derive(Args, Debug)]
struct ModelArgs {
    #[arg(long, value_enum)]
    model: ModelKind,
    /// Coherence of the noisy cat.
    #[arg(long, allow_negative_numbers = true)]
    c: Option<f64>,
    /// Cat amplitude.
    #[arg(long, allow_negative_numbers = true)]
    alpha: Option<f64>,
    /// Cat amplitude before loss.
    #[arg(long, allow_negative_numbers = true)]
    alpha0: Option<f64>,
    /// Integrated loss rate.
    #[arg(long, allow_negative_numbers = true)]
    gammabar: Option<f64>,
    /// Squeezing parameter.
    #[arg(long, allow_negative_numbers = true)]
    r: Option<f64>,
    /// Displacement at which derivatives are taken.
    #[arg(long, allow_negative_numbers = true)]
    epsilon: Option<f64>,
}

impl ModelArgs {
    fn given(&self) -> Vec<(&'static str, f64)> {
        [
            ("c", self.c),
            ("alpha", self.alpha),
            ("alpha0", self.alpha0),
            ("gammabar", self.gammabar),
            ("r", self.r),
            ("epsilon", self.epsilon),
        ]
        .into_iter()
        .filter_map(|(k, v)| v.map(|v| (k, v)))
        .collect()
    }

    /// Inputs fixed on the command line plus defaults, leaving out `free`.
    fn fixed(&self, free: Option<&str>) -> Result<BTreeMap<String, f64>, Failure> {
        let kind = self.model;
        let accepted = kind.inputs();
        let mut fixed = BTreeMap::new();
        for (name, value) in self.given() {
            if !accepted.iter().any(|(n, _)| *n == name) {
                return Err(Failure::Usage(format!(
                    "--{name} does not apply to --model {}",
                    kind.name()
                )));
            }
            if Some(name) == free {
                return Err(Failure::Usage(format!(
                    "--{name} is the sweep variable and cannot also be fixed"
                )));
            }
            fixed.insert(name.to_string(), value);
        }
        for (name, default) in accepted {
            if Some(*name) == free || fixed.contains_key(*name) {
                continue;
            }
            match default {
                Some(v) => {
                    fixed.insert(name.to_string(), *v);
                }
                None => {
                    return Err(Failure::Usage(format!(
                        "--model {} needs --{name}",
                        kind.name()
                    )))
                }
            }
        }
        Ok(fixed)
    }
}

#[derive(Args, Debug)]
struct BoundArgs {
    /// Weight matrix for the scalar bound, row-major and comma separated
    /// (identity by default).
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    weight: Option<Vec<f64>>,
    /// Number of probe copies in the scalar bound.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    copies: u64,
}

impl BoundArgs {
    fn spec(&self, kind: ModelKind) -> Result<BoundSpec, Failure> {
        let n = kind.parameters().len();
        if let Some(w) = &self.weight {
            if w.len() != n * n {
                return Err(Failure::Usage(format!(
                    "--weight needs {} entries for --model {}, got {}",
                    n * n,
                    kind.name(),
                    w.len()
                )));
            }
        }
        Ok(BoundSpec {
            weight: self.weight.clone(),
            copies: self.copies as usize,
        })
    }
}

#[derive(Args, Debug)]
struct EvalArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    bound: BoundArgs,
    /// Print a JSON record instead of CSV.
    #[arg(long)]
    json: bool,
}

/// `start:stop:points` with at least two points.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Grid {
    start: f64,
    stop: f64,
    points: usize,
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let fields: Vec<&str> = s.split(':').collect();
        let [start, stop, points] = fields[..] else {
            return Err("expected start:stop:points".into());
        };
        let num = |x: &str| {
            x.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| format!("`{x}` is not a finite number"))
        };
        let points: usize = points
            .trim()
            .parse()
            .map_err(|_| format!("`{points}` is not a point count"))?;
        if points < 2 {
            return Err(format!("a grid needs at least 2 points, got {points}"));
        }
        Ok(Self {
            start: num(start)?,
            stop: num(stop)?,
            points,
        })
    }
}

impl Grid {
    fn values(&self) -> Vec<f64> {
        let last = self.points - 1;
        (0..self.points)
            .map(|k| {
                if k == last {
                    self.stop
                } else {
                    self.start + (self.stop - self.start) * k as f64 / last as f64
                }
            })
            .collect()
    }
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    bound: BoundArgs,
    /// Input varied along the grid.
    #[arg(long = "sweep")]
    variable: String,
    /// Evenly spaced values as `start:stop:points`, endpoints included.
    #[arg(long)]
    grid: Grid,
    /// Columns to write (all by default).
    #[arg(long, value_delimiter = ',')]
    columns: Option<Vec<String>>,
    /// Output file (standard output by default).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ValidateArgs {
    /// Replace every numerical-precision tolerance.
    #[arg(long, env = "GRAMQFI_TOL")]
    tol: Option<f64>,
    /// Run a single check.
    #[arg(long, value_parser = PossibleValuesParser::new(CHECKS))]
    only: Option<String>,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Model(gramqfi::Error),
    Io(io::Error),
    ChecksFailed(usize),
}

impl Failure {
    fn code(&self) -> u8 {
        use gramqfi::Error as E;
        match self {
            Self::ChecksFailed(_) => 1,
            Self::Usage(_) => 2,
            Self::Model(
                E::InvalidConfig(_)
                | E::RankChange
                | E::DegenerateBasis(_)
                | E::SingularMetric(_)
                | E::EmptyBasis
                | E::BadWeight,
            ) => 3,
            Self::Model(_) => 4,
            Self::Io(_) => 5,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Usage(msg) => write!(f, "{msg}"),
            Self::Model(e) => write!(f, "{e}"),
            Self::Io(e) => write!(f, "I/O failure: {e}"),
            Self::ChecksFailed(n) => write!(f, "{n} check(s) failed"),
        }
    }
}

impl From<gramqfi::Error> for Failure {
    fn from(e: gramqfi::Error) -> Self {
        Self::Model(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Self::Io(e)
    }
}

fn eval(args: &EvalArgs) -> Result<(), Failure> {
    let kind = args.model.model;
    let inputs = args.model.fixed(None)?;
    let record = evaluate(kind, &inputs, &args.bound.spec(kind)?)?;
    let mut out = io::stdout().lock();
    if args.json {
        serde_json::to_writer_pretty(&mut out, &record).map_err(io::Error::from)?;
        writeln!(out)?;
    } else {
        let columns = kind.columns();
        let meta = output::metadata("eval", kind, &inputs, &args.bound.spec(kind)?, None);
        output::write_csv(&mut out, &meta, &columns, std::slice::from_ref(&record))?;
    }
    Ok(())
}

fn sweep(args: &SweepArgs) -> Result<(), Failure> {
    let kind = args.model.model;
    let variable = args.variable.as_str();
    if !kind.inputs().iter().any(|(n, _)| *n == variable) {
        return Err(Failure::Usage(format!(
            "--model {} has no input `{variable}`",
            kind.name()
        )));
    }
    let fixed = args.model.fixed(Some(variable))?;
    let bound = args.bound.spec(kind)?;
    let available = kind.columns();
    let columns = match &args.columns {
        Some(cols) => {
            if let Some(bad) = cols.iter().find(|c| !available.contains(c)) {
                return Err(Failure::Usage(format!(
                    "unknown column `{bad}`; available: {}",
                    available.join(",")
                )));
            }
            cols.clone()
        }
        None => available,
    };
    let start = Instant::now();
    let records: Vec<Record> = args
        .grid
        .values()
        .par_iter()
        .map(|&x| {
            let mut point = fixed.clone();
            point.insert(variable.to_string(), x);
            evaluate(kind, &point, &bound)
        })
        .collect::<Vec<_>>()
        .into_iter()
        .collect::<gramqfi::Result<_>>()?;
    log::info!(
        "evaluated {} points in {:.3}s",
        records.len(),
        start.elapsed().as_secs_f64()
    );
    let grid = format!(
        "{}:{}:{}",
        args.grid.start, args.grid.stop, args.grid.points
    );
    let meta = output::metadata("sweep", kind, &fixed, &bound, Some((variable, &grid)));
    match &args.out {
        Some(path) => {
            let mut file = BufWriter::new(File::create(path)?);
            output::write_csv(&mut file, &meta, &columns, &records)?;
            file.flush()?;
        }
        None => output::write_csv(&mut io::stdout().lock(), &meta, &columns, &records)?,
    }
    Ok(())
}

fn validate(args: &ValidateArgs) -> Result<(), Failure> {
    let cfg = ValidationConfig {
        tol: args.tol,
        only: args.only.clone(),
        ..Default::default()
    };
    let start = Instant::now();
    let reports = validation::run(&cfg)?;
    let total = start.elapsed();
    let mut out = io::stdout().lock();
    for report in &reports {
        writeln!(out, "{report}")?;
        if !report.passed {
            writeln!(out, "    {}", report.detail)?;
        }
    }
    let failed = reports.iter().filter(|r| !r.passed).count();
    let over_budget = cfg.only.is_none() && total > TOTAL_BUDGET;
    writeln!(
        out,
        "{}/{} checks passed in {:.2}s (budget {}s)",
        reports.len() - failed,
        reports.len(),
        total.as_secs_f64(),
        TOTAL_BUDGET.as_secs()
    )?;
    if over_budget {
        writeln!(out, "total runtime exceeds the budget")?;
    }
    match failed + usize::from(over_budget) {
        0 => Ok(()),
        n => Err(Failure::ChecksFailed(n)),
    }
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Eval(args) => eval(args),
        Command::Sweep(args) => sweep(args),
        Command::Validate(args) => validate(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {failure}");
            ExitCode::from(failure.code())
        }
    }
}
