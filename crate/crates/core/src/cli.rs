//! End-to-end driver behind the `ddapprox` binary: build a state, apply one
//! approximation scheme, report sizes and fidelity, and write artifacts.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::approx::{self, ApproxReport, Scheme};
use crate::circuit::{self, Circuit};
use crate::complex::Tolerance;
use crate::dd::{Normalization, Package, StateDd};
use crate::dot;
use crate::error::{Error, Result};

pub const CSV_HEADER: &str = "benchmark,scheme,param,orig_size,approx_size,compression,fidelity";
pub const SWEEP_HEADER: &str = "param,fidelity,relddsize";

#[derive(Clone, Debug, PartialEq)]
pub enum Source {
    Circuit(PathBuf),
    Fig2,
    Ghz(usize),
    Qft(usize),
    Random { qubits: usize, depth: usize, seed: u64 },
}

impl Source {
    /// Parses `NAME [N] [DEPTH] [SEED]` as given to `--builtin`.
    pub fn builtin(args: &[String]) -> Result<Self> {
        let bad = |m: String| Error::InvalidParameter(m);
        let (name, rest) = args
            .split_first()
            .ok_or_else(|| bad("--builtin needs a name".into()))?;
        let num = |i: usize, default: u64| -> Result<u64> {
            rest.get(i).map_or(Ok(default), |s| {
                s.parse::<u64>().map_err(|_| bad(format!("invalid number `{s}` for builtin {name}")))
            })
        };
        let arity = |max: usize| {
            if rest.len() > max {
                Err(bad(format!("builtin {name} takes at most {max} parameters")))
            } else {
                Ok(())
            }
        };
        let qubits = |n: u64| {
            if n == 0 {
                Err(bad("qubit count must be at least 1".into()))
            } else {
                Ok(n as usize)
            }
        };
        match name.as_str() {
            "fig2" => {
                arity(0)?;
                Ok(Source::Fig2)
            }
            "ghz" => {
                arity(1)?;
                Ok(Source::Ghz(qubits(num(0, 10)?)?))
            }
            "qft" => {
                arity(1)?;
                Ok(Source::Qft(qubits(num(0, 5)?)?))
            }
            "random" => {
                arity(3)?;
                Ok(Source::Random {
                    qubits: qubits(num(0, 10)?)?,
                    depth: num(1, 30)? as usize,
                    seed: num(2, 7)?,
                })
            }
            other => Err(bad(format!("unknown builtin `{other}` (expected fig2, ghz, qft or random)"))),
        }
    }

    pub fn benchmark_name(&self) -> String {
        match self {
            Source::Circuit(path) => path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "circuit".into()),
            Source::Fig2 => "fig2".into(),
            Source::Ghz(n) => format!("ghz_{n}"),
            Source::Qft(n) => format!("qft_{n}"),
            Source::Random { qubits, depth, seed } => format!("random_{qubits}_{depth}_{seed}"),
        }
    }

    pub fn build(&self, pkg: &mut Package) -> Result<StateDd> {
        match self {
            Source::Circuit(path) => {
                let text = fs::read_to_string(path)?;
                pkg.simulate(&Circuit::parse(&text)?)
            }
            Source::Fig2 => pkg.from_vector(&circuit::fig2_amplitudes()),
            Source::Ghz(n) => pkg.simulate(&circuit::ghz(*n)),
            Source::Qft(n) => pkg.simulate(&circuit::qft(*n)),
            Source::Random { qubits, depth, seed } => pkg.simulate(&circuit::random_circuit(*qubits, *depth, *seed)),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum OutputFormat {
    #[default]
    Human,
    Csv,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub source: Source,
    pub scheme: Scheme,
    pub normalization: Normalization,
    pub format: OutputFormat,
    pub csv: Option<PathBuf>,
    pub dot_before: Option<PathBuf>,
    pub dot_after: Option<PathBuf>,
    pub dump_vector: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(source: Source, scheme: Scheme) -> Self {
        Self {
            source,
            scheme,
            normalization: Normalization::default(),
            format: OutputFormat::default(),
            csv: None,
            dot_before: None,
            dot_after: None,
            dump_vector: None,
        }
    }
}

pub struct RunOutcome {
    pub benchmark: String,
    pub report: ApproxReport,
    pub package: Package,
    pub original: StateDd,
    pub approx: StateDd,
}

/// Exit status for an error: 2 for bad input, 3 when elimination zeroes the
/// state, 4 for I/O failures.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::ZeroState => 3,
        Error::Io(_) => 4,
        Error::NonFinite { .. } => 1,
        _ => 2,
    }
}

fn fmt_param(scheme: &Scheme) -> String {
    match *scheme {
        Scheme::Sampling { traversals, .. } => traversals.to_string(),
        Scheme::Threshold { tau, .. } => tau.to_string(),
        Scheme::TargetFidelity { fidelity, .. } | Scheme::FidelityPerLevel { fidelity } => fidelity.to_string(),
    }
}

pub fn csv_row(benchmark: &str, report: &ApproxReport) -> String {
    format!(
        "{},{},{},{},{},{:.6},{:.10}",
        benchmark,
        report.scheme.name(),
        fmt_param(&report.scheme),
        report.orig_size,
        report.approx_size,
        report.compression,
        report.attained_fidelity
    )
}

pub fn human_report(benchmark: &str, report: &ApproxReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "benchmark    {benchmark}");
    let _ = writeln!(s, "scheme       {}", report.scheme);
    if let Some(l) = report.level {
        let _ = writeln!(s, "level        q{l}");
    }
    let _ = writeln!(s, "orig size    {}", report.orig_size);
    let _ = writeln!(s, "approx size  {}", report.approx_size);
    let _ = writeln!(s, "eliminated   {}", report.eliminated);
    let _ = writeln!(s, "compression  {:.6}", report.compression);
    let _ = writeln!(s, "fidelity     {:.10}", report.attained_fidelity);
    s
}

fn dump_vector(pkg: &Package, dd: &StateDd, path: &Path) -> Result<()> {
    let amps = pkg.to_vector(dd)?;
    let mut s = String::from("index,re,im\n");
    for (i, a) in amps.iter().enumerate() {
        let _ = writeln!(s, "{i},{:e},{:e}", a.re, a.im);
    }
    fs::write(path, s)?;
    Ok(())
}

fn new_package(config: &RunConfig) -> Package {
    Package::with_options(Tolerance::default(), config.normalization)
}

/// Builds the configured state, approximates it and writes the requested
/// artifacts. Printing is left to the caller.
pub fn run(config: &RunConfig) -> Result<RunOutcome> {
    config.scheme.validate()?;
    let mut pkg = new_package(config);
    let original = config.source.build(&mut pkg)?;
    if let Some(path) = &config.dot_before {
        fs::write(path, dot::to_dot(&pkg, &original))?;
    }
    let (approx, report) = approx::approximate(&mut pkg, &original, &config.scheme)?;
    let benchmark = config.source.benchmark_name();
    if let Some(path) = &config.dot_after {
        fs::write(path, dot::to_dot(&pkg, &approx))?;
    }
    if let Some(path) = &config.dump_vector {
        dump_vector(&pkg, &approx, path)?;
    }
    if let Some(path) = &config.csv {
        fs::write(path, format!("{CSV_HEADER}\n{}\n", csv_row(&benchmark, &report)))?;
    }
    Ok(RunOutcome { benchmark, report, package: pkg, original, approx })
}

/// One point of a parameter sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub param: f64,
    pub fidelity: f64,
    pub relddsize: f64,
}

/// `scheme` with its primary parameter replaced by `value`.
pub fn with_param(scheme: &Scheme, value: f64) -> Result<Scheme> {
    let count = |v: f64| {
        if v >= 0.0 && v.fract() == 0.0 && v <= u64::MAX as f64 {
            Ok(v as u64)
        } else {
            Err(Error::InvalidParameter(format!("sweep value {v} is not a nonnegative integer")))
        }
    };
    let s = match *scheme {
        Scheme::Sampling { seed, .. } => Scheme::Sampling { traversals: count(value)?, seed },
        Scheme::Threshold { traversals, seed, .. } => Scheme::Threshold { traversals, tau: count(value)?, seed },
        Scheme::TargetFidelity { level, .. } => Scheme::TargetFidelity { fidelity: value, level },
        Scheme::FidelityPerLevel { .. } => Scheme::FidelityPerLevel { fidelity: value },
    };
    s.validate()?;
    Ok(s)
}

/// Approximates one state at every grid value of the scheme's primary
/// parameter, in order.
pub fn sweep(config: &RunConfig, grid: &[f64]) -> Result<Vec<SweepRow>> {
    let schemes = grid
        .iter()
        .map(|&v| with_param(&config.scheme, v))
        .collect::<Result<Vec<_>>>()?;
    let mut pkg = new_package(config);
    let original = config.source.build(&mut pkg)?;
    let mut rows = Vec::with_capacity(grid.len());
    for (scheme, &param) in schemes.iter().zip(grid) {
        let (_, report) = approx::approximate(&mut pkg, &original, scheme)?;
        rows.push(SweepRow {
            param,
            fidelity: report.attained_fidelity,
            relddsize: report.compression,
        });
    }
    Ok(rows)
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut s = format!("{SWEEP_HEADER}\n");
    for r in rows {
        let _ = writeln!(s, "{},{:.10},{:.6}", r.param, r.fidelity, r.relddsize);
    }
    s
}
