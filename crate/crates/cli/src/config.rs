use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use qconv_core::postselect::Family;
use serde::{Deserialize, Serialize};

#[derive(Debug, Parser)]
#[command(
    name = "qconv",
    version,
    about = "Seeded experiments on quantum convolution and correlation"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Cyclic convolution of two sequence files.
    Conv,
    /// Cyclic correlation of two sequence files.
    Corr,
    /// Compare the QFT (dense and circuit) against the direct DFT.
    QftCheck,
    /// Push random state pairs through the Fourier reduction.
    Reduction,
    /// Evaluate the normalization identity of the epsilon family.
    NogoAnalytic,
    /// Search for a linear map that produces the elementwise product.
    NogoSearch,
    /// Success statistics of the post-selection construction.
    PostselectScan,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Conv => "conv",
            Command::Corr => "corr",
            Command::QftCheck => "qft-check",
            Command::Reduction => "reduction",
            Command::NogoAnalytic => "nogo-analytic",
            Command::NogoSearch => "nogo-search",
            Command::PostselectScan => "postselect-scan",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Qubit count or inclusive range such as `1..10`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QubitRange {
    pub min: usize,
    pub max: usize,
}

impl QubitRange {
    pub fn single(n: usize) -> Self {
        QubitRange { min: n, max: n }
    }

    pub fn exact(self) -> Result<usize, String> {
        if self.min == self.max {
            Ok(self.min)
        } else {
            Err(format!(
                "this command takes a single qubit count, not {self}"
            ))
        }
    }
}

impl FromStr for QubitRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parse = |t: &str| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| format!("invalid qubit count {t:?}"))
        };
        let r = match s.split_once("..") {
            Some((a, b)) => QubitRange {
                min: parse(a)?,
                max: parse(b.strip_prefix('=').unwrap_or(b))?,
            },
            None => QubitRange::single(parse(s)?),
        };
        if r.min == 0 || r.min > r.max {
            return Err(format!("invalid qubit range {s:?}"));
        }
        Ok(r)
    }
}

impl fmt::Display for QubitRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.min == self.max {
            write!(f, "{}", self.min)
        } else {
            write!(f, "{}..{}", self.min, self.max)
        }
    }
}

impl Serialize for QubitRange {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for QubitRange {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Number(usize),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Number(n) => n.to_string().parse(),
            Raw::Text(t) => t.parse(),
        }
        .map_err(serde::de::Error::custom)
    }
}

/// Flags shared by every command. Anything left unset falls back to the
/// config file, then to the command default.
#[derive(Debug, Default, clap::Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Flags {
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Qubits per register, or an inclusive range like 1..10.
    #[arg(long, global = true)]
    pub n: Option<QubitRange>,
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true)]
    pub trials: Option<u64>,
    #[arg(long, global = true)]
    pub restarts: Option<usize>,
    #[arg(long, global = true)]
    pub budget: Option<usize>,
    /// Input file; give twice for commands that take two operands.
    #[arg(long = "input", global = true)]
    #[serde(default, rename = "inputs")]
    pub inputs: Vec<PathBuf>,
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// JSON file with any of these settings; flags take precedence.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// State family for postselect-scan: uniform or seeded-random.
    #[arg(long, global = true)]
    pub family: Option<Family>,
    /// Ancilla dimension M for the no-go commands.
    #[arg(long, global = true)]
    pub ancilla_dim: Option<usize>,
    /// Probe set id for nogo-search.
    #[arg(long, global = true)]
    pub probe_set: Option<String>,
    /// Probe set registry file replacing the built-in one.
    #[arg(long, global = true)]
    pub probe_config: Option<PathBuf>,
    /// Coefficients for nogo-analytic; both or neither.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub c1: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub c2: Option<f64>,
}

impl Flags {
    /// Fills every unset field from `base`.
    fn or(self, base: Flags) -> Flags {
        Flags {
            seed: self.seed.or(base.seed),
            n: self.n.or(base.n),
            tol: self.tol.or(base.tol),
            trials: self.trials.or(base.trials),
            restarts: self.restarts.or(base.restarts),
            budget: self.budget.or(base.budget),
            inputs: if self.inputs.is_empty() {
                base.inputs
            } else {
                self.inputs
            },
            output: self.output.or(base.output),
            format: self.format.or(base.format),
            config: self.config,
            family: self.family.or(base.family),
            ancilla_dim: self.ancilla_dim.or(base.ancilla_dim),
            probe_set: self.probe_set.or(base.probe_set),
            probe_config: self.probe_config.or(base.probe_config),
            c1: self.c1.or(base.c1),
            c2: self.c2.or(base.c2),
        }
    }
}

/// Fully resolved settings; every field is written into the report.
#[derive(Debug, Clone, Serialize)]
pub struct Settings {
    pub seed: u64,
    pub n: QubitRange,
    pub tol: f64,
    pub trials: u64,
    pub restarts: usize,
    pub budget: usize,
    pub inputs: Vec<PathBuf>,
    pub output: Option<PathBuf>,
    pub format: Format,
    pub family: Family,
    pub ancilla_dim: usize,
    pub probe_set: String,
    pub probe_config: Option<PathBuf>,
    pub c1: Option<f64>,
    pub c2: Option<f64>,
}

struct Defaults {
    n: usize,
    n_max: usize,
    tol: f64,
    trials: u64,
}

fn defaults(command: Command) -> Defaults {
    let d = |n, n_max, tol, trials| Defaults {
        n,
        n_max,
        tol,
        trials,
    };
    match command {
        Command::Conv | Command::Corr => d(1, 1, 1e-8, 1),
        Command::QftCheck => d(1, 8, 1e-10, 10),
        Command::Reduction => d(4, 4, 1e-8, 100),
        Command::NogoAnalytic => d(1, 1, 1e-9, 1000),
        Command::NogoSearch => d(1, 1, 1e-6, 1),
        Command::PostselectScan => d(1, 10, 1e-12, 10_000),
    }
}

fn read_config(path: &Path) -> Result<Flags, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("invalid config {}: {e}", path.display()))
}

pub fn resolve(command: Command, flags: Flags) -> Result<Settings, String> {
    let file = match &flags.config {
        Some(path) => read_config(path)?,
        None => Flags::default(),
    };
    let f = flags.or(file);
    let d = defaults(command);
    let s = Settings {
        seed: f.seed.unwrap_or(0),
        n: f.n.unwrap_or(QubitRange {
            min: d.n,
            max: d.n_max,
        }),
        tol: f.tol.unwrap_or(d.tol),
        trials: f.trials.unwrap_or(d.trials),
        restarts: f.restarts.unwrap_or(50),
        budget: f.budget.unwrap_or(400),
        inputs: f.inputs,
        output: f.output,
        format: f.format.unwrap_or(match command {
            Command::PostselectScan => Format::Csv,
            _ => Format::Json,
        }),
        family: f.family.unwrap_or(Family::Uniform),
        ancilla_dim: f.ancilla_dim.unwrap_or(1),
        probe_set: f.probe_set.unwrap_or_else(|| "standard-v1".to_string()),
        probe_config: f.probe_config,
        c1: f.c1,
        c2: f.c2,
    };
    if !(s.tol > 0.0 && s.tol.is_finite()) {
        return Err(format!("tol must be positive and finite, got {}", s.tol));
    }
    if s.trials == 0 || s.restarts == 0 || s.budget == 0 || s.ancilla_dim == 0 {
        return Err("trials, restarts, budget and ancilla-dim must be at least 1".to_string());
    }
    if s.format == Format::Csv && command != Command::PostselectScan {
        return Err(format!("{} only writes json", command.name()));
    }
    Ok(s)
}
