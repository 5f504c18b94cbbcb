//! Minimum-length separator timelines.
//!
//! [`solve_exact`] alternates between an exact master over the rows generated
//! so far and the violating-path oracle. The master only sees a subset of all
//! path rows, so its optimum is a lower bound; once the oracle finds no path
//! the current hulls are feasible at that bound and therefore optimal.

mod brute;
mod greedy;
mod master;

use std::str::FromStr;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::graph::{Instance, Interval, SeparatorTimeline};
use crate::pathfind::{find_violating_paths, is_valid_separator};

pub use brute::{brute_force_min, BruteForceLimits};
pub use greedy::{greedy_cover, solve_greedy};
pub use master::{
    hull_cost, solve_master, BranchAndBound, MasterBackend, MasterError, MasterHints, MasterProblem, MasterSolution,
    Objective, Pair,
};

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("the source has a direct arc to the target; no separator exists")]
    Unseparable,
    #[error("timed out; best separator found has length {}", .0.length)]
    TimeoutExceeded(Box<SolveReport>),
    #[error("instance has {vertices} vertices and horizon {horizon}, over the brute-force limits {limits:?}")]
    LimitsExceeded {
        vertices: usize,
        horizon: u32,
        limits: BruteForceLimits,
    },
    #[error(transparent)]
    Master(#[from] MasterError),
}

/// Selects the master solver used by [`solve_exact`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Backend {
    #[default]
    BranchAndBound,
}

impl Backend {
    pub fn implementation(self) -> &'static dyn MasterBackend {
        match self {
            Backend::BranchAndBound => &BranchAndBound,
        }
    }
}

impl FromStr for Backend {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "bnb" | "branch-and-bound" => Ok(Backend::BranchAndBound),
            other => Err(format!("unknown master backend `{other}`")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SolverConfig {
    /// Wall-clock budget for one solve; `None` runs to completion.
    pub timeout: Option<Duration>,
    /// Paths enumerated up front by the greedy mode.
    pub path_limit: usize,
    pub brute_limits: BruteForceLimits,
    pub backend: Backend,
    /// Violating paths added per oracle call.
    pub batch_size: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            timeout: Some(Duration::from_secs(3600)),
            path_limit: 10_000,
            brute_limits: BruteForceLimits::default(),
            backend: Backend::default(),
            batch_size: 1,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SolveReport {
    pub timeline: SeparatorTimeline,
    /// Separator length, the sum of interval lengths.
    pub length: u64,
    /// Vertices with a non-empty interval.
    pub separator_vertices: usize,
    /// `length / separator_vertices`, or 0 without separator vertices.
    pub avg_interval: f64,
    pub generated_constraints: usize,
    pub branch_nodes: u64,
    pub wall_time: Duration,
    pub optimal: bool,
}

impl SolveReport {
    /// Builds the report and checks the timeline against the path oracle.
    fn finish(
        instance: &Instance,
        hulls: Vec<Interval>,
        generated_constraints: usize,
        branch_nodes: u64,
        started: Instant,
        optimal: bool,
    ) -> Result<Self, SolverError> {
        let timeline = SeparatorTimeline::from_intervals(instance, hulls).expect("solver hulls stay within bounds");
        assert!(
            is_valid_separator(instance, &timeline),
            "solver produced a timeline that misses a path"
        );
        let length = timeline.length();
        let separator_vertices = timeline.separator_vertices();
        let avg_interval = if separator_vertices == 0 {
            0.0
        } else {
            length as f64 / separator_vertices as f64
        };
        Ok(Self {
            timeline,
            length,
            separator_vertices,
            avg_interval,
            generated_constraints,
            branch_nodes,
            wall_time: started.elapsed(),
            optimal,
        })
    }
}

/// Minimum-length separator by lazy row generation around the configured
/// master backend.
pub fn solve_exact(instance: &Instance, config: &SolverConfig) -> Result<SolveReport, SolverError> {
    solve_exact_with(instance, config, config.backend.implementation())
}

/// [`solve_exact`] with an explicit master backend.
pub fn solve_exact_with(
    instance: &Instance,
    config: &SolverConfig,
    backend: &dyn MasterBackend,
) -> Result<SolveReport, SolverError> {
    let started = Instant::now();
    if instance.has_direct_arc() {
        return Err(SolverError::Unseparable);
    }
    let deadline = config.timeout.map(|t| started + t);
    let graph = instance.graph();
    let mut problem = MasterProblem::new(graph.vertex_count(), graph.horizon());
    let mut hulls = vec![Interval::Empty; graph.vertex_count()];
    let mut lower_bound = Objective::default();
    let mut nodes = 0;
    loop {
        let timeline = SeparatorTimeline::from_intervals(instance, hulls.clone()).expect("hulls stay within bounds");
        let paths = find_violating_paths(instance, &timeline, config.batch_size.max(1));
        if paths.is_empty() {
            return SolveReport::finish(instance, hulls, problem.rows().len(), nodes, started, true);
        }
        // paths differing only in their final arc share a row, so only the
        // first of a batch is guaranteed to be new
        let fresh = paths.iter().fold(0, |n, p| n + usize::from(problem.add_path(p)));
        debug_assert!(fresh >= 1, "a violating path's row cannot already be covered");
        let mut incumbent = hulls.clone();
        greedy_cover(&problem, &mut incumbent);
        let timed_out = deadline.is_some_and(|d| Instant::now() >= d);
        let solution = if timed_out {
            None
        } else {
            backend.solve(
                &problem,
                &MasterHints {
                    lower_bound,
                    incumbent: Some(incumbent.clone()),
                    cost_limit: None,
                    deadline,
                },
            )?
        };
        match solution {
            Some(sol) if sol.optimal => {
                nodes += sol.nodes;
                lower_bound = Objective {
                    cost: sol.cost,
                    vertices: sol.vertices,
                };
                hulls = sol.hulls;
            }
            other => {
                let mut best = match other {
                    Some(sol) => {
                        nodes += sol.nodes;
                        sol.hulls
                    }
                    None => incumbent,
                };
                greedy::repair(instance, &mut problem, &mut best);
                let report = SolveReport::finish(instance, best, problem.rows().len(), nodes, started, false)?;
                return Err(SolverError::TimeoutExceeded(Box::new(report)));
            }
        }
    }
}
