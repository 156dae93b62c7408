use std::path::{Path, PathBuf};

use garbage_game::{generate, parse_edge_list, GarbageState, Graph, GraphKind, Stream, Threshold};

use crate::{CliError, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum GraphSource {
    File(PathBuf),
    Generate(GraphKind),
}

impl GraphSource {
    /// `seed` only matters for random generators.
    pub fn load(&self, seed: u64) -> Result<Graph> {
        match self {
            GraphSource::File(path) => {
                let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
                    path: path.clone(),
                    source,
                })?;
                Ok(parse_edge_list(&text)?)
            }
            GraphSource::Generate(kind) => Ok(generate(*kind, seed)?),
        }
    }

    pub fn from_flags(graph: Option<&Path>, generator: Option<&str>) -> Result<GraphSource> {
        match (graph, generator) {
            (Some(path), None) => Ok(GraphSource::File(path.to_path_buf())),
            (None, Some(kind)) => Ok(GraphSource::Generate(kind.parse()?)),
            (Some(_), Some(_)) => Err(CliError::Usage(
                "--graph and --generate are mutually exclusive".into(),
            )),
            (None, None) => Err(CliError::Usage(
                "one of --graph or --generate is required".into(),
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum InitSource {
    Explicit(Vec<f64>),
    Uniform { lo: f64, hi: f64 },
}

impl InitSource {
    pub fn parse_list(text: &str) -> Result<InitSource> {
        let values = text
            .split(',')
            .map(|field| {
                let field = field.trim();
                field
                    .parse::<f64>()
                    .map_err(|_| CliError::Usage(format!("invalid garbage amount {field:?}")))
            })
            .collect::<Result<Vec<f64>>>()?;
        Ok(InitSource::Explicit(values))
    }

    /// `uniform:lo:hi` with `0 <= lo < hi`.
    pub fn parse_distribution(text: &str) -> Result<InitSource> {
        let bad = || CliError::Usage(format!("invalid distribution {text:?}, expected uniform:lo:hi"));
        let parts: Vec<&str> = text.split(':').collect();
        let (lo, hi) = match parts.as_slice() {
            ["uniform", lo, hi] => (
                lo.parse::<f64>().map_err(|_| bad())?,
                hi.parse::<f64>().map_err(|_| bad())?,
            ),
            _ => return Err(bad()),
        };
        if !(lo.is_finite() && hi.is_finite()) || lo < 0.0 || lo >= hi {
            return Err(CliError::Usage(format!(
                "uniform bounds must satisfy 0 <= lo < hi, got {lo}:{hi}"
            )));
        }
        Ok(InitSource::Uniform { lo, hi })
    }

    pub fn realize(&self, n: usize, seed: u64) -> Result<GarbageState> {
        let state = match self {
            InitSource::Explicit(values) => {
                if values.len() != n {
                    return Err(garbage_game::Error::LengthMismatch {
                        expected: n,
                        found: values.len(),
                    }
                    .into());
                }
                GarbageState::new(values.clone())?
            }
            InitSource::Uniform { lo, hi } => {
                GarbageState::uniform(n, *lo, *hi, &mut Stream::new(seed))?
            }
        };
        Ok(state)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub graph: GraphSource,
    pub init: InitSource,
    pub epsilon: Threshold,
    pub max_steps: usize,
    pub convergence_tol: f64,
    pub seed: u64,
    pub csv_out: Option<PathBuf>,
    pub summary_out: Option<PathBuf>,
    pub validate: bool,
}

impl RunConfig {
    pub fn new(graph: GraphSource, init: InitSource) -> RunConfig {
        RunConfig {
            graph,
            init,
            epsilon: Threshold::Infinite,
            max_steps: 100_000,
            convergence_tol: 1e-10,
            seed: 0,
            csv_out: None,
            summary_out: None,
            validate: false,
        }
    }
}
