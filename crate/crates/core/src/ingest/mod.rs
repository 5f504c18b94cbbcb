//! Building instances from transportation data and from seeds.

mod gtfs;
mod random;
mod synth;
mod tntp;

use std::path::PathBuf;

use thiserror::Error;

use crate::graph::ModelError;

pub use gtfs::{load_gtfs, parse_gtfs_time, select_endpoints_gtfs, GtfsParams};
pub use random::{random_instance, RandomParams};
pub use synth::{synthesize, SynthesisParams, Synthesized};
pub use tntp::{load_tntp, StaticGraph};

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("header declares {declared} links but {actual} were found")]
    InconsistentHeader { declared: usize, actual: usize },
    #[error("source and target are disconnected in the static graph")]
    NoPath,
    #[error("no distinct source and target can be chosen")]
    DegenerateEndpoints,
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("missing feed file {}", .0.display())]
    MissingFile(PathBuf),
    #[error("malformed time `{0}`, expected HH:MM:SS")]
    MalformedTime(String),
    #[error("stop `{0}` is not listed in stops.txt")]
    UnknownStop(String),
    #[error("no departures fall inside the time window")]
    EmptyWindow,
    #[error("no source/target pair is connected by a temporal path")]
    NoFeasiblePair,
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Model(#[from] ModelError),
}
