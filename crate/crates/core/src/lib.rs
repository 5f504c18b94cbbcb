//! Minimum interval separators in temporal directed graphs.
//!
//! A temporal graph has arcs that are active at integer times in `[1, T]`.
//! Given a source `s`, a target `z` and a deadline `d`, a separator timeline
//! assigns each other vertex an interval of blocked departure times so that
//! every strict temporal `s`-`z` path of traveling time at most `d` departs
//! some vertex during that vertex's interval. [`solver::solve_exact`] finds a
//! timeline of minimum total interval length.
//!
//! With the default `parallel` feature, oracle calls and exhaustive searches
//! fan out over rayon; results are identical without it.

pub mod graph;
pub mod ingest;
pub mod par;
pub mod pathfind;
pub mod reduction;
pub mod solver;

pub use graph::{
    timeline_length, Arc, ArcSpec, Instance, Interval, ModelError, SeparatorTimeline, Step, TemporalArc, TemporalGraph,
    TemporalPath, Time, VertexId,
};
pub use pathfind::{
    count_paths_exact, count_walks, enumerate_paths, find_violating_path, is_valid_separator, min_traveling_time,
    PathCount, PathError,
};
pub use solver::{brute_force_min, solve_exact, solve_greedy, SolveReport, SolverConfig, SolverError};
