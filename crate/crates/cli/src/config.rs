//! Command line parsing into a checked [`RunConfig`].

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use mmp_elliptic_core::io::{parse_weight_list, parse_weights};
use mmp_elliptic_core::{KodairaFiberType, WeightVector};

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
pub enum Format {
    Json,
    Dot,
    Md,
}

#[derive(Parser, Debug)]
#[command(name = "mmp-elliptic", version, about = "Exact wall crossing for weighted broken elliptic surfaces")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: CliCommand,
}

#[derive(Subcommand, Debug)]
pub enum CliCommand {
    /// List walls for given fiber types or for a model; optionally scan a segment.
    Walls {
        /// Number of markers.
        #[arg(long)]
        r: Option<usize>,
        /// Comma separated fiber type of each marker, e.g. I1,II,III*.
        #[arg(long, value_delimiter = ',')]
        types: Vec<String>,
        /// The base curve is a tree of rational curves.
        #[arg(long)]
        rational_base: bool,
        /// Take marker count, types and base from a model file.
        #[arg(long, conflicts_with_all = ["r", "types", "rational_base"])]
        model: Option<PathBuf>,
        /// Report crossings along A + t(B - A) as t falls from 1 to 0 (weight files or lists).
        #[arg(long, num_args = 2, value_names = ["A", "B"])]
        segment: Option<Vec<String>>,
    },
    /// Fiber states, section degrees and tree fates of a model.
    Model {
        input: Option<PathBuf>,
        #[arg(long, conflicts_with = "input")]
        glob: Option<String>,
        /// Report at these weights (must not exceed the model weights).
        #[arg(long)]
        weights: Option<String>,
    },
    /// Reduce a model along the straight path between two weight vectors.
    Reduce {
        input: Option<PathBuf>,
        #[arg(long, conflicts_with = "input")]
        glob: Option<String>,
        /// Start weights; defaults to the weights stored in the model.
        #[arg(long)]
        from: Option<String>,
        /// Target weights.
        #[arg(long)]
        to: String,
        /// Write a DOT snapshot per step into this directory.
        #[arg(long)]
        dot_dir: Option<PathBuf>,
        /// Compare every snapshot's base curve with the Hassett reduction.
        #[arg(long)]
        check_hassett: bool,
    },
    /// Hassett reduction of a marked curve, or of a model's base curve.
    Hassett {
        input: PathBuf,
        /// Weights; required for curve input, defaults to the model weights.
        #[arg(long)]
        weights: Option<String>,
    },
    /// Volume of an irreducible model.
    Volume {
        input: Option<PathBuf>,
        #[arg(long, conflicts_with = "input")]
        glob: Option<String>,
    },
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum WallSource {
    Types { types: Vec<KodairaFiberType>, rational_base: bool },
    Model(PathBuf),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Command {
    Walls {
        source: WallSource,
        segment: Option<(WeightVector, WeightVector)>,
    },
    Model {
        inputs: Vec<PathBuf>,
        weights: Option<WeightVector>,
    },
    Reduce {
        inputs: Vec<PathBuf>,
        from: Option<WeightVector>,
        to: WeightVector,
        dot_dir: Option<PathBuf>,
        check_hassett: bool,
    },
    Hassett {
        input: PathBuf,
        weights: Option<WeightVector>,
    },
    Volume {
        inputs: Vec<PathBuf>,
    },
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RunConfig {
    pub command: Command,
    pub format: Format,
    /// Batch mode: several inputs were matched by a glob pattern.
    pub batch: bool,
    /// ANSI colour in markdown reports.
    pub color: bool,
}

#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct UsageError(pub String);

fn usage(msg: impl Into<String>) -> UsageError {
    UsageError(msg.into())
}

fn existing(p: PathBuf) -> Result<PathBuf, UsageError> {
    if p.is_file() {
        Ok(p)
    } else {
        Err(usage(format!("{}: no such file", p.display())))
    }
}

/// A weight argument is a JSON file if such a file exists, else a comma separated list.
fn weight_arg(s: &str) -> Result<WeightVector, UsageError> {
    let path = Path::new(s);
    if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| usage(format!("{s}: {e}")))?;
        parse_weights(&text).map_err(|e| usage(format!("{s}: {e}")))
    } else {
        parse_weight_list(s).map_err(|e| usage(format!("weights {s:?}: {e}")))
    }
}

fn inputs(input: Option<PathBuf>, pattern: Option<String>) -> Result<(Vec<PathBuf>, bool), UsageError> {
    match (input, pattern) {
        (Some(p), None) => Ok((vec![existing(p)?], false)),
        (None, Some(g)) => {
            let mut out: Vec<PathBuf> = glob::glob(&g)
                .map_err(|e| usage(format!("bad glob {g:?}: {e}")))?
                .filter_map(Result::ok)
                .filter(|p| p.is_file())
                .collect();
            out.sort();
            if out.is_empty() {
                return Err(usage(format!("glob {g:?} matched no files")));
            }
            Ok((out, true))
        }
        _ => Err(usage("give exactly one of an input file or --glob")),
    }
}

fn color_enabled() -> bool {
    std::env::var("MMP_ELLIPTIC_COLOR").map(|v| v != "0").unwrap_or(true)
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<RunConfig, UsageError> {
        let mut batch = false;
        let command = match cli.command {
            CliCommand::Walls { r, types, rational_base, model, segment } => {
                let source = match model {
                    Some(p) => WallSource::Model(existing(p)?),
                    None => {
                        let parsed = types
                            .iter()
                            .map(|t| t.trim().parse::<KodairaFiberType>().map_err(|e| usage(e.to_string())))
                            .collect::<Result<Vec<_>, _>>()?;
                        let r = r.ok_or_else(|| usage("walls needs --r and --types, or --model"))?;
                        if parsed.len() != r {
                            return Err(usage(format!("--types lists {} types for --r {r}", parsed.len())));
                        }
                        WallSource::Types { types: parsed, rational_base }
                    }
                };
                let segment = match segment.as_deref() {
                    Some([a, b]) => Some((weight_arg(a)?, weight_arg(b)?)),
                    Some(_) => return Err(usage("--segment takes two weight vectors")),
                    None => None,
                };
                Command::Walls { source, segment }
            }
            CliCommand::Model { input, glob, weights } => {
                let (inputs, b) = inputs(input, glob)?;
                batch = b;
                Command::Model { inputs, weights: weights.as_deref().map(weight_arg).transpose()? }
            }
            CliCommand::Reduce { input, glob, from, to, dot_dir, check_hassett } => {
                let (inputs, b) = inputs(input, glob)?;
                batch = b;
                Command::Reduce {
                    inputs,
                    from: from.as_deref().map(weight_arg).transpose()?,
                    to: weight_arg(&to)?,
                    dot_dir,
                    check_hassett,
                }
            }
            CliCommand::Hassett { input, weights } => {
                Command::Hassett { input: existing(input)?, weights: weights.as_deref().map(weight_arg).transpose()? }
            }
            CliCommand::Volume { input, glob } => {
                let (inputs, b) = inputs(input, glob)?;
                batch = b;
                Command::Volume { inputs }
            }
        };
        let unsupported = match (&command, cli.format) {
            (Command::Walls { .. }, Format::Dot) => Some("walls"),
            (Command::Volume { .. }, Format::Dot) => Some("volume"),
            _ => None,
        };
        if let Some(name) = unsupported {
            return Err(usage(format!("{name} has no DOT output")));
        }
        Ok(RunConfig { command, format: cli.format, batch, color: color_enabled() })
    }
}
