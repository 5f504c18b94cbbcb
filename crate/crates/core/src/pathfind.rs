//! Deadline-bounded temporal path search.
//!
//! Two independent engines live here. Earliest-arrival sweeps over the
//! time-sorted temporal arc list answer reachability questions in
//! `O(|A_T|)` per start arc; they drive the constraint-generation oracle and
//! minimum traveling time. A depth-first enumerator over `(vertex, time)`
//! states with on-path marking lists or counts simple paths exactly and serves
//! as ground truth for small instances.

use std::ops::ControlFlow;

use num_bigint::BigUint;
use thiserror::Error;

use crate::graph::{Instance, SeparatorTimeline, Step, TemporalArc, TemporalPath, Time, VertexId};
use crate::par;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PathError {
    #[error("path enumeration truncated after {} paths", partial.len())]
    LimitExceeded { partial: Vec<TemporalPath> },
    #[error("search tree exceeded {budget} nodes; {partial} paths counted so far")]
    BudgetExceeded { budget: u64, partial: u64 },
}

/// Read-only view of which outgoing steps a timeline blocks. Endpoints are
/// never blocked.
#[derive(Clone, Copy)]
pub struct BlockedView<'a> {
    instance: &'a Instance,
    timeline: Option<&'a SeparatorTimeline>,
}

impl<'a> BlockedView<'a> {
    pub fn new(instance: &'a Instance, timeline: &'a SeparatorTimeline) -> Self {
        Self {
            instance,
            timeline: Some(timeline),
        }
    }

    pub fn unblocked(instance: &'a Instance) -> Self {
        Self {
            instance,
            timeline: None,
        }
    }

    #[inline]
    pub fn blocked(&self, v: VertexId, t: Time) -> bool {
        match self.timeline {
            Some(tl) => !self.instance.is_endpoint(v) && tl.is_blocked(v, t),
            None => false,
        }
    }
}

/// Number of d-feasible source-target paths (`exact`) or walks (upper bound).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathCount {
    pub value: BigUint,
    pub exact: bool,
}

impl std::fmt::Display for PathCount {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let label = if self.exact { "exact" } else { "walks" };
        write!(f, "{} {}", self.value, label)
    }
}

/// Temporal arcs leaving the source, ordered by `(time, target)`.
fn start_arcs(instance: &Instance) -> Vec<TemporalArc> {
    let g = instance.graph();
    let mut starts: Vec<TemporalArc> = g
        .out_arcs(instance.source())
        .iter()
        .flat_map(|a| {
            a.times.iter().map(move |&time| TemporalArc {
                time,
                from: a.from,
                to: a.to,
            })
        })
        .collect();
    starts.sort_unstable();
    starts
}

/// Earliest-arrival sweep from a fixed first step, over arcs with time at most
/// `latest`. Arcs re-entering the source or leaving the target are ignored.
/// Returns the earliest-arrival path to the target, which is simple because
/// predecessor times strictly decrease along it.
fn sweep(instance: &Instance, view: BlockedView<'_>, start: TemporalArc, latest: Time) -> Option<TemporalPath> {
    let g = instance.graph();
    let (s, z) = (instance.source(), instance.target());
    if start.to == z {
        return Some(path_from_steps(instance, vec![start.into()]));
    }
    let n = g.vertex_count();
    let mut arrival = vec![Time::MAX; n];
    let mut pred: Vec<Option<Step>> = vec![None; n];
    arrival[start.to] = start.time;
    if start.time >= latest {
        return None;
    }
    for arc in g.temporal_arcs_between(start.time + 1, latest) {
        if arc.from == s || arc.to == s || arc.from == z {
            continue;
        }
        if arrival[arc.from] < arc.time && arc.time < arrival[arc.to] && !view.blocked(arc.from, arc.time) {
            arrival[arc.to] = arc.time;
            pred[arc.to] = Some((*arc).into());
            if arc.to == z {
                let mut steps = vec![(*arc).into()];
                let mut v = arc.from;
                while let Some(step) = pred[v] {
                    steps.push(step);
                    v = step.from;
                }
                debug_assert_eq!(v, start.to);
                steps.push(start.into());
                steps.reverse();
                return Some(path_from_steps(instance, steps));
            }
        }
    }
    None
}

fn path_from_steps(instance: &Instance, steps: Vec<Step>) -> TemporalPath {
    TemporalPath::new(instance.graph(), steps).expect("sweep produced an invalid temporal path")
}

/// Some source-target path with traveling time at most the deadline that the
/// timeline leaves unseparated, or `None` when the timeline is a valid
/// separator. Start arcs are tried by `(time, target id)`; the first start
/// admitting a path wins, so the answer is deterministic.
pub fn find_violating_path(instance: &Instance, timeline: &SeparatorTimeline) -> Option<TemporalPath> {
    let view = BlockedView::new(instance, timeline);
    let d = instance.deadline();
    let starts = start_arcs(instance);
    par::find_map_first(&starts, |&start| {
        let latest = start.time.saturating_add(d - 1);
        sweep(instance, view, start, latest)
    })
}

/// Up to `limit` distinct violating paths, at most one per start arc.
pub fn find_violating_paths(instance: &Instance, timeline: &SeparatorTimeline, limit: usize) -> Vec<TemporalPath> {
    if limit <= 1 {
        return find_violating_path(instance, timeline).into_iter().collect();
    }
    let view = BlockedView::new(instance, timeline);
    let d = instance.deadline();
    let starts = start_arcs(instance);
    let found = par::map(&starts, |&start| {
        sweep(instance, view, start, start.time.saturating_add(d - 1))
    });
    let mut out: Vec<TemporalPath> = Vec::new();
    for p in found.into_iter().flatten() {
        if !out.contains(&p) {
            out.push(p);
            if out.len() == limit {
                break;
            }
        }
    }
    out
}

/// True iff every d-feasible source-target path is separated.
pub fn is_valid_separator(instance: &Instance, timeline: &SeparatorTimeline) -> bool {
    find_violating_path(instance, timeline).is_none()
}

/// Smallest traveling time of any source-target temporal path, ignoring the
/// deadline. `None` when the target is unreachable.
pub fn min_traveling_time(instance: &Instance) -> Option<Time> {
    let horizon = instance.graph().horizon();
    let view = BlockedView::unblocked(instance);
    let starts = start_arcs(instance);
    par::map(&starts, |&start| {
        sweep(instance, view, start, horizon).map(|p| p.traveling_time())
    })
    .into_iter()
    .flatten()
    .min()
}

struct Dfs<'a, F> {
    instance: &'a Instance,
    on_path: Vec<bool>,
    steps: Vec<Step>,
    nodes: u64,
    budget: u64,
    visit: F,
}

enum Halt {
    Visitor,
    Budget,
}

impl<F: FnMut(&[Step]) -> ControlFlow<()>> Dfs<'_, F> {
    fn enter(&mut self, step: Step, latest: Time) -> Result<(), Halt> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Halt::Budget);
        }
        self.steps.push(step);
        let result = if step.to == self.instance.target() {
            match (self.visit)(&self.steps) {
                ControlFlow::Continue(()) => Ok(()),
                ControlFlow::Break(()) => Err(Halt::Visitor),
            }
        } else {
            self.on_path[step.to] = true;
            let r = self.expand(step.to, step.time, latest);
            self.on_path[step.to] = false;
            r
        };
        self.steps.pop();
        result
    }

    fn expand(&mut self, v: VertexId, arrival: Time, latest: Time) -> Result<(), Halt> {
        let g = self.instance.graph();
        for arc in g.out_arcs(v) {
            if self.on_path[arc.to] {
                continue;
            }
            let first = arc.times.partition_point(|&t| t <= arrival);
            for &t in arc.times[first..].iter().take_while(|&&t| t <= latest) {
                self.enter(Step::new(v, arc.to, t), latest)?;
            }
        }
        Ok(())
    }
}

/// Depth-first walk over all d-feasible simple source-target paths in
/// deterministic order: out-arcs by target id, then by time. Returns the
/// number of search nodes visited, or `Err(nodes)` when the budget ran out.
fn visit_paths<F>(instance: &Instance, budget: u64, visit: F) -> Result<u64, u64>
where
    F: FnMut(&[Step]) -> ControlFlow<()>,
{
    let g = instance.graph();
    let s = instance.source();
    let mut dfs = Dfs {
        instance,
        on_path: vec![false; g.vertex_count()],
        steps: Vec::new(),
        nodes: 0,
        budget,
        visit,
    };
    dfs.on_path[s] = true;
    for arc in g.out_arcs(s) {
        for &t in &arc.times {
            let latest = t.saturating_add(instance.deadline() - 1);
            match dfs.enter(Step::new(s, arc.to, t), latest) {
                Ok(()) => {}
                Err(Halt::Visitor) => return Ok(dfs.nodes),
                Err(Halt::Budget) => return Err(dfs.nodes),
            }
        }
    }
    Ok(dfs.nodes)
}

/// Every d-feasible simple source-target path exactly once. With a limit, the
/// enumeration stops after `limit` paths and reports the truncation through
/// [`PathError::LimitExceeded`] if further paths exist.
pub fn enumerate_paths(instance: &Instance, limit: Option<usize>) -> Result<Vec<TemporalPath>, PathError> {
    let mut paths = Vec::new();
    let mut truncated = false;
    let _ = visit_paths(instance, u64::MAX, |steps| {
        if limit.is_some_and(|l| paths.len() >= l) {
            truncated = true;
            return ControlFlow::Break(());
        }
        paths.push(path_from_steps(instance, steps.to_vec()));
        ControlFlow::Continue(())
    });
    if truncated {
        Err(PathError::LimitExceeded { partial: paths })
    } else {
        Ok(paths)
    }
}

/// Exact simple-path count by enumeration, bounded by `budget` search nodes.
pub fn count_paths_exact(instance: &Instance, budget: u64) -> Result<PathCount, PathError> {
    let mut count = 0u64;
    match visit_paths(instance, budget, |_| {
        count += 1;
        ControlFlow::Continue(())
    }) {
        Ok(_) => Ok(PathCount {
            value: BigUint::from(count),
            exact: true,
        }),
        Err(_) => Err(PathError::BudgetExceeded { budget, partial: count }),
    }
}

/// Number of strictly time-increasing source-target walks with traveling time
/// at most the deadline. Walks end at their first arrival at the target but
/// may revisit other vertices, so this bounds the simple-path count from
/// above.
pub fn count_walks(instance: &Instance) -> PathCount {
    let g = instance.graph();
    let s = instance.source();
    let mut start_times: Vec<Time> = g.out_arcs(s).iter().flat_map(|a| a.times.iter().copied()).collect();
    start_times.sort_unstable();
    start_times.dedup();
    let per_start = par::map(&start_times, |&t1| walks_from(instance, t1));
    PathCount {
        value: per_start.into_iter().sum(),
        exact: false,
    }
}

/// Walks whose first step leaves the source exactly at `t1`.
fn walks_from(instance: &Instance, t1: Time) -> BigUint {
    let g = instance.graph();
    let (s, z) = (instance.source(), instance.target());
    let latest = t1.saturating_add(instance.deadline() - 1);
    let arcs = g.temporal_arcs_between(t1, latest);
    // prefixes arriving at each vertex strictly before the current time group
    let mut settled = vec![BigUint::ZERO; g.vertex_count()];
    let mut total = BigUint::ZERO;
    let mut group: Vec<(VertexId, BigUint)> = Vec::new();
    let mut i = 0;
    while i < arcs.len() {
        let t = arcs[i].time;
        let end = i + arcs[i..].partition_point(|a| a.time == t);
        for arc in &arcs[i..end] {
            if arc.from == z {
                continue;
            }
            let mut ways = settled[arc.from].clone();
            if arc.from == s && t == t1 {
                ways += 1u32;
            }
            if ways == BigUint::ZERO {
                continue;
            }
            if arc.to == z {
                total += ways;
            } else {
                group.push((arc.to, ways));
            }
        }
        for (v, ways) in group.drain(..) {
            settled[v] += ways;
        }
        i = end;
    }
    total
}
