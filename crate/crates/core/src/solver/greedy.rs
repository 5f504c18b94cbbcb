//! Ratio-greedy covering heuristic and the greedy solve mode.

use std::time::Instant;

use super::master::{hull_cost, MasterProblem};
use super::{SolveReport, SolverError};
use crate::graph::{Instance, Interval, SeparatorTimeline, Time, VertexId};
use crate::pathfind::{enumerate_paths, find_violating_path, PathError};

/// Extends `hulls` until every row of `problem` is covered. Each step adds the
/// timestamp that covers the most uncovered rows per unit of added hull width;
/// ties go to the lowest `(vertex, time)`.
pub fn greedy_cover(problem: &MasterProblem, hulls: &mut [Interval]) {
    let rows = problem.rows();
    let mut covered: Vec<bool> = (0..rows.len()).map(|r| problem.is_covered(hulls, r)).collect();
    let mut remaining = covered.iter().filter(|c| !**c).count();
    if remaining == 0 {
        return;
    }
    // per vertex: (time, row) sorted by time
    let mut at: Vec<Vec<(Time, usize)>> = vec![Vec::new(); problem.vertex_count()];
    for (r, row) in rows.iter().enumerate() {
        for &(v, t) in row {
            at[v].push((t, r));
        }
    }
    for list in &mut at {
        list.sort_unstable();
    }
    let mut stamp = vec![0u32; rows.len()];
    let mut round = 0u32;

    while remaining > 0 {
        let mut moves: Vec<(VertexId, Time)> = rows
            .iter()
            .enumerate()
            .filter(|(r, _)| !covered[*r])
            .flat_map(|(_, row)| row.iter().copied())
            .filter(|&(v, t)| !hulls[v].contains(t))
            .collect();
        moves.sort_unstable();
        moves.dedup();

        // (gain, added width, vertex, time)
        let mut best: Option<(u64, u64, VertexId, Time)> = None;
        for &(v, t) in &moves {
            let grown = hulls[v].hull_with(t);
            let added = grown.len() - hulls[v].len();
            let (lo, hi) = grown.bounds().expect("hull is non-empty");
            round += 1;
            let start = at[v].partition_point(|&(x, _)| x < lo);
            let mut gain = 0u64;
            for &(x, r) in at[v][start..].iter().take_while(|&&(x, _)| x <= hi) {
                if !covered[r] && !hulls[v].contains(x) && stamp[r] != round {
                    stamp[r] = round;
                    gain += 1;
                }
            }
            let better = match best {
                None => true,
                Some((bg, ba, _, _)) => gain * ba > bg * added,
            };
            if better {
                best = Some((gain, added, v, t));
            }
        }
        let (_, _, v, t) = best.expect("an uncovered row always offers a move");
        hulls[v] = hulls[v].hull_with(t);
        for (r, row) in rows.iter().enumerate() {
            if !covered[r] && row.iter().any(|&(u, x)| u == v && hulls[v].contains(x)) {
                covered[r] = true;
                remaining -= 1;
            }
        }
    }
}

/// Extends `hulls` until no deadline-respecting path survives, adding each
/// violating path as a row and re-covering greedily. Returns the number of
/// rows added.
pub(crate) fn repair(instance: &Instance, problem: &mut MasterProblem, hulls: &mut [Interval]) -> usize {
    let mut added = 0;
    loop {
        let timeline = SeparatorTimeline::from_intervals(instance, hulls.to_vec()).expect("hulls stay within bounds");
        let Some(path) = find_violating_path(instance, &timeline) else {
            return added;
        };
        assert!(problem.add_path(&path), "a surviving path yields a new row");
        added += 1;
        greedy_cover(problem, hulls);
    }
}

/// Heuristic separator: greedily cover up to `path_limit` enumerated paths,
/// then repair against the path oracle until valid.
pub fn solve_greedy(instance: &Instance, path_limit: usize) -> Result<SolveReport, SolverError> {
    let started = Instant::now();
    if instance.has_direct_arc() {
        return Err(SolverError::Unseparable);
    }
    let paths = match enumerate_paths(instance, Some(path_limit.max(1))) {
        Ok(paths) => paths,
        Err(PathError::LimitExceeded { partial }) => partial,
        Err(e) => unreachable!("enumeration without budget failed: {e}"),
    };
    let graph = instance.graph();
    let mut problem = MasterProblem::new(graph.vertex_count(), graph.horizon());
    for path in &paths {
        problem.add_path(path);
    }
    let mut hulls = vec![Interval::Empty; graph.vertex_count()];
    greedy_cover(&problem, &mut hulls);
    repair(instance, &mut problem, &mut hulls);
    debug_assert!(problem.is_satisfied(&hulls));
    debug_assert_eq!(hull_cost(&hulls), hulls.iter().map(Interval::len).sum::<u64>());
    SolveReport::finish(instance, hulls, problem.rows().len(), 0, started, false)
}
