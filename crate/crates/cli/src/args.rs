//! Command-line parsing and config-file defaults.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde_json::{Map, Value};

use uql_core::discrimination::{DEFAULT_MAX_ITER, DEFAULT_TOL};

/// Universal measurement strategies for structured quantum datasets.
#[derive(Debug, Parser)]
#[command(name = "uql", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Irrep dimensions of the n-fold tensor space.
    Dims {
        #[command(flatten)]
        size: Size,
        #[command(flatten)]
        out: Output,
    },
    /// Optimal pure-state estimation fidelity.
    Estimate {
        #[command(flatten)]
        size: Size,
        /// Monte Carlo samples; omit for exact values only.
        #[arg(long)]
        samples: Option<usize>,
        #[command(flatten)]
        out: Output,
    },
    /// Programmable discrimination error.
    Programmable {
        #[arg(long)]
        n1: Option<usize>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        n3: Option<usize>,
        #[arg(long)]
        d: Option<usize>,
        #[command(flatten)]
        out: Output,
    },
    /// Change-point detection success.
    Changepoint {
        #[command(flatten)]
        size: Size,
        #[arg(long, value_enum)]
        case: Option<CaseArg>,
        /// |<ρ0|ρ1>| for the known case.
        #[arg(long)]
        overlap: Option<f64>,
        /// Haar samples for the averaged known-state reference.
        #[arg(long)]
        samples: Option<usize>,
        #[command(flatten)]
        solver: Solver,
        #[command(flatten)]
        out: Output,
    },
    /// Unsupervised binary clustering success.
    Cluster {
        #[command(flatten)]
        size: Size,
        #[command(flatten)]
        solver: Solver,
        #[command(flatten)]
        out: Output,
    },
    /// Total-spin distribution for overlap estimation.
    Overlap {
        #[arg(long)]
        n1: Option<usize>,
        #[arg(long)]
        n2: Option<usize>,
        /// |<ψ|φ>|².
        #[arg(long)]
        overlap: Option<f64>,
        /// Simulated shots for the maximum-likelihood estimate.
        #[arg(long)]
        samples: Option<u64>,
        #[command(flatten)]
        out: Output,
    },
    /// Hilbert–Schmidt distance via swap expectations on random state pairs.
    Distance {
        #[arg(long)]
        d: Option<usize>,
        /// Number of random mixed-state pairs.
        #[arg(long)]
        samples: Option<usize>,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CaseArg {
    Known,
    Semi,
    Unknown,
}

impl CaseArg {
    pub fn name(self) -> &'static str {
        match self {
            CaseArg::Known => "known",
            CaseArg::Semi => "semi",
            CaseArg::Unknown => "unknown",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct Size {
    /// Number of systems.
    #[arg(long)]
    pub n: Option<usize>,
    /// Local dimension.
    #[arg(long)]
    pub d: Option<usize>,
}

#[derive(Debug, Args)]
pub struct Solver {
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub max_iter: Option<usize>,
}

#[derive(Debug, Args)]
pub struct Output {
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write the record here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON object of defaults, keyed by flag name.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

/// Fully resolved task.
#[derive(Debug, Clone, PartialEq)]
pub enum Task {
    Dims { n: usize, d: usize },
    Estimate { n: usize, d: usize, samples: Option<usize> },
    Programmable { n1: usize, m: usize, n3: usize, d: usize },
    Changepoint { n: usize, d: usize, case: CaseArg, overlap: Option<f64>, samples: Option<usize>, tol: f64, max_iter: usize },
    Cluster { n: usize, d: usize, tol: f64, max_iter: usize },
    Overlap { n1: usize, n2: usize, overlap: f64, shots: Option<u64> },
    Distance { d: usize, pairs: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Request {
    pub task: Task,
    pub seed: u64,
    pub format: Format,
    pub out: Option<PathBuf>,
}

/// Flag values layered over an optional config object.
struct Layer {
    config: Map<String, Value>,
}

impl Layer {
    fn load(path: Option<&Path>) -> Result<Self, String> {
        let Some(path) = path else {
            return Ok(Self { config: Map::new() });
        };
        let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        match serde_json::from_str(&text) {
            Ok(Value::Object(config)) => Ok(Self { config }),
            Ok(_) => Err(format!("config {} must hold a JSON object", path.display())),
            Err(e) => Err(format!("invalid config {}: {e}", path.display())),
        }
    }

    fn get<T: DeserializeOwned>(&mut self, key: &str, flag: Option<T>) -> Result<Option<T>, String> {
        let from_config = self.config.remove(key);
        if flag.is_some() {
            return Ok(flag);
        }
        from_config
            .map(|v| serde_json::from_value(v).map_err(|e| format!("config key '{key}': {e}")))
            .transpose()
    }

    fn require<T: DeserializeOwned>(&mut self, key: &str, flag: Option<T>) -> Result<T, String> {
        self.get(key, flag)?.ok_or_else(|| format!("missing required value --{}", key.replace('_', "-")))
    }

    fn finish(self) -> Result<(), String> {
        match self.config.keys().next() {
            Some(k) => Err(format!("config key '{k}' does not apply to this command")),
            None => Ok(()),
        }
    }
}

fn size(layer: &mut Layer, s: Size) -> Result<(usize, usize), String> {
    let n = layer.require("n", s.n)?;
    let d = layer.get("d", s.d)?.unwrap_or(2);
    Ok((n, d))
}

fn solver(layer: &mut Layer, s: Solver) -> Result<(f64, usize), String> {
    let tol = layer.get("tol", s.tol)?.unwrap_or(DEFAULT_TOL);
    let max_iter = layer.get("max_iter", s.max_iter)?.unwrap_or(DEFAULT_MAX_ITER);
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(format!("--tol must be positive, got {tol}"));
    }
    if max_iter == 0 {
        return Err("--max-iter must be positive".into());
    }
    Ok((tol, max_iter))
}

impl Cli {
    /// Merges config defaults into the flags and checks ranges that do not
    /// need any computation.
    pub fn resolve(self) -> Result<Request, String> {
        let (out, task) = match self.command {
            Command::Dims { size: s, out } => {
                let mut layer = Layer::load(out.config.as_deref())?;
                let (n, d) = size(&mut layer, s)?;
                (finish(layer, out)?, Task::Dims { n, d })
            }
            Command::Estimate { size: s, samples, out } => {
                let mut layer = Layer::load(out.config.as_deref())?;
                let (n, d) = size(&mut layer, s)?;
                let samples = layer.get("samples", samples)?;
                (finish(layer, out)?, Task::Estimate { n, d, samples })
            }
            Command::Programmable { n1, m, n3, d, out } => {
                let mut layer = Layer::load(out.config.as_deref())?;
                let n1 = layer.require("n1", n1)?;
                let m = layer.require("m", m)?;
                let n3 = layer.require("n3", n3)?;
                let d = layer.get("d", d)?.unwrap_or(2);
                (finish(layer, out)?, Task::Programmable { n1, m, n3, d })
            }
            Command::Changepoint { size: s, case, overlap, samples, solver: sv, out } => {
                let mut layer = Layer::load(out.config.as_deref())?;
                let (n, d) = size(&mut layer, s)?;
                let case = layer.get("case", case)?.unwrap_or(CaseArg::Unknown);
                let overlap = layer.get("overlap", overlap)?;
                let samples = layer.get("samples", samples)?;
                let (tol, max_iter) = solver(&mut layer, sv)?;
                match (case, overlap) {
                    (CaseArg::Known, None) => return Err("--case known needs --overlap".into()),
                    (CaseArg::Semi | CaseArg::Unknown, Some(_)) => {
                        return Err("--overlap only applies to --case known".into())
                    }
                    _ => {}
                }
                (finish(layer, out)?, Task::Changepoint { n, d, case, overlap, samples, tol, max_iter })
            }
            Command::Cluster { size: s, solver: sv, out } => {
                let mut layer = Layer::load(out.config.as_deref())?;
                let (n, d) = size(&mut layer, s)?;
                let (tol, max_iter) = solver(&mut layer, sv)?;
                (finish(layer, out)?, Task::Cluster { n, d, tol, max_iter })
            }
            Command::Overlap { n1, n2, overlap, samples, out } => {
                let mut layer = Layer::load(out.config.as_deref())?;
                let n1 = layer.require("n1", n1)?;
                let n2 = layer.require("n2", n2)?;
                let overlap = layer.require("overlap", overlap)?;
                let shots = layer.get("samples", samples)?;
                (finish(layer, out)?, Task::Overlap { n1, n2, overlap, shots })
            }
            Command::Distance { d, samples, out } => {
                let mut layer = Layer::load(out.config.as_deref())?;
                let d = layer.get("d", d)?.unwrap_or(2);
                let pairs = layer.get("samples", samples)?.unwrap_or(1);
                (finish(layer, out)?, Task::Distance { d, pairs })
            }
        };
        let request = Request { task, seed: out.0, format: out.1, out: out.2 };
        check_dimension(&request.task)?;
        Ok(request)
    }
}

type Resolved = (u64, Format, Option<PathBuf>);

fn finish(mut layer: Layer, out: Output) -> Result<Resolved, String> {
    let seed = layer.get("seed", out.seed)?.unwrap_or(0);
    let format = layer.get("format", out.format)?.unwrap_or(Format::Json);
    let path = layer.get("out", out.out)?;
    layer.finish()?;
    Ok((seed, format, path))
}

/// Largest Hilbert-space dimension any request may touch.
pub const MAX_DIM: u128 = 1024;

fn power(d: usize, n: usize) -> u128 {
    (d as u128).checked_pow(n as u32).unwrap_or(u128::MAX)
}

/// Rejects requests whose total Hilbert-space dimension exceeds [`MAX_DIM`].
pub fn check_dimension(task: &Task) -> Result<(), String> {
    let (d, n) = match *task {
        Task::Dims { n, d } | Task::Estimate { n, d, .. } | Task::Changepoint { n, d, .. } | Task::Cluster { n, d, .. } => (d, n),
        Task::Programmable { n1, m, n3, d } => (d, n1 + m + n3),
        Task::Overlap { n1, n2, .. } => (2, n1 + n2),
        Task::Distance { d, .. } => (d, 2),
    };
    if d < 2 {
        return Err(format!("local dimension must be at least 2, got {d}"));
    }
    let dim = power(d, n);
    if dim > MAX_DIM {
        return Err(format!("total dimension {d}^{n} = {dim} exceeds the limit of {MAX_DIM}"));
    }
    Ok(())
}
