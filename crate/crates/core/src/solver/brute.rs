//! Exhaustive reference solver for tiny instances.
//!
//! Candidate intervals only use endpoints at times where the vertex actually
//! departs on some path: any interval can be shrunk to the hull of the
//! departure times it contains without changing what it separates, so this
//! restriction loses no optimum.

use std::time::Instant;

use super::{SolveReport, SolverError};
use crate::graph::{Instance, Interval, Time};
use crate::par;
use crate::pathfind::enumerate_paths;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BruteForceLimits {
    pub max_vertices: usize,
    pub max_horizon: Time,
}

impl Default for BruteForceLimits {
    fn default() -> Self {
        Self {
            max_vertices: 7,
            max_horizon: 8,
        }
    }
}

struct Space {
    /// Internal vertices that occur in some row.
    vertices: Vec<usize>,
    /// Per entry of `vertices`: Empty first, then intervals by (length, lo).
    options: Vec<Vec<Interval>>,
    /// Rows as `(position in vertices, time)`.
    rows: Vec<Vec<(usize, Time)>>,
    /// Rows whose largest vertex position is `i`, checked once `i` is set.
    closing: Vec<Vec<usize>>,
}

impl Space {
    fn new(instance: &Instance, rows: Vec<Vec<(usize, Time)>>) -> Self {
        let n = instance.graph().vertex_count();
        let mut times: Vec<Vec<Time>> = vec![Vec::new(); n];
        for row in &rows {
            for &(v, t) in row {
                times[v].push(t);
            }
        }
        let vertices: Vec<usize> = (0..n).filter(|&v| !times[v].is_empty()).collect();
        let mut pos = vec![usize::MAX; n];
        for (i, &v) in vertices.iter().enumerate() {
            pos[v] = i;
        }
        let options = vertices
            .iter()
            .map(|&v| {
                let ts = &mut times[v];
                ts.sort_unstable();
                ts.dedup();
                let mut opts: Vec<Interval> = Vec::new();
                for (i, &a) in ts.iter().enumerate() {
                    for &b in &ts[i..] {
                        opts.push(Interval::new(a, b).expect("a <= b"));
                    }
                }
                opts.sort_by_key(|iv| (iv.len(), iv.bounds()));
                opts.insert(0, Interval::Empty);
                opts
            })
            .collect();
        let rows: Vec<Vec<(usize, Time)>> = rows
            .into_iter()
            .map(|row| row.into_iter().map(|(v, t)| (pos[v], t)).collect())
            .collect();
        let mut closing = vec![Vec::new(); vertices.len()];
        for (r, row) in rows.iter().enumerate() {
            let last = row.iter().map(|&(i, _)| i).max().expect("rows are non-empty");
            closing[last].push(r);
        }
        Self {
            vertices,
            options,
            rows,
            closing,
        }
    }

    /// First assignment (in option order) of total length at most `budget`
    /// covering every row, with the first vertex fixed to `first`. On failure
    /// returns the smallest total that was cut off by the budget.
    fn search(&self, first: Interval, budget: u64) -> Result<Vec<Interval>, u64> {
        if first.len() > budget {
            return Err(first.len());
        }
        let mut chosen = vec![Interval::Empty; self.vertices.len()];
        chosen[0] = first;
        if !self.closes(0, &chosen) {
            return Err(u64::MAX);
        }
        let mut next = u64::MAX;
        if self.extend(1, first.len(), budget, &mut chosen, &mut next) {
            Ok(chosen)
        } else {
            Err(next)
        }
    }

    fn closes(&self, i: usize, chosen: &[Interval]) -> bool {
        self.closing[i]
            .iter()
            .all(|&r| self.rows[r].iter().any(|&(j, t)| chosen[j].contains(t)))
    }

    fn extend(&self, i: usize, spent: u64, budget: u64, chosen: &mut [Interval], next: &mut u64) -> bool {
        if i == self.vertices.len() {
            return true;
        }
        for &opt in &self.options[i] {
            if spent + opt.len() > budget {
                *next = (*next).min(spent + opt.len());
                break;
            }
            chosen[i] = opt;
            if self.closes(i, chosen) && self.extend(i + 1, spent + opt.len(), budget, chosen, next) {
                return true;
            }
        }
        chosen[i] = Interval::Empty;
        false
    }
}

/// Minimum-length separator by exhaustive search in nondecreasing total
/// length. Only for instances within `limits`.
pub fn brute_force_min(instance: &Instance, limits: BruteForceLimits) -> Result<SolveReport, SolverError> {
    let started = Instant::now();
    let graph = instance.graph();
    if graph.vertex_count() > limits.max_vertices || graph.horizon() > limits.max_horizon {
        return Err(SolverError::LimitsExceeded {
            vertices: graph.vertex_count(),
            horizon: graph.horizon(),
            limits,
        });
    }
    if instance.has_direct_arc() {
        return Err(SolverError::Unseparable);
    }
    let paths = enumerate_paths(instance, None).expect("unbounded enumeration");
    let rows: Vec<Vec<(usize, Time)>> = paths.iter().map(|p| p.internal_departures().collect()).collect();
    let row_count = rows.len();
    let mut hulls = vec![Interval::Empty; graph.vertex_count()];
    if !rows.is_empty() {
        let space = Space::new(instance, rows);
        // budgets grow to the smallest total cut off in the previous round,
        // so the first hit has minimum length
        let mut budget = 0;
        let found = loop {
            let outcomes = par::map(&space.options[0], |&first| space.search(first, budget));
            if let Some(Ok(hit)) = outcomes.iter().find(|o| o.is_ok()) {
                break hit.clone();
            }
            budget = outcomes
                .iter()
                .filter_map(|o| o.as_ref().err())
                .copied()
                .min()
                .unwrap_or(u64::MAX);
            assert!(
                budget < u64::MAX,
                "covering every vertex's full span separates every path"
            );
        };
        for (i, &v) in space.vertices.iter().enumerate() {
            hulls[v] = found[i];
        }
    }
    SolveReport::finish(instance, hulls, row_count, 0, started, true)
}
