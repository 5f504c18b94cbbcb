//! The covering master problem and its exact branch-and-bound backend.
//!
//! A row is the set of `(vertex, time)` departures of one generated path; a
//! solution picks one contiguous hull per vertex so that every row has a
//! departure inside its vertex's hull, minimizing the summed hull widths and,
//! among those, the number of non-empty hulls.
//! Contiguity is structural: the search state is the hull itself, so every
//! timestamp between two selected ones is paid for.

use std::collections::HashSet;
use std::time::Instant;

use thiserror::Error;

use crate::graph::{Interval, TemporalPath, Time, VertexId};

/// A `(vertex, departure time)` decision.
pub type Pair = (VertexId, Time);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MasterError {
    #[error("row {0} is empty and can never be covered")]
    Infeasible(usize),
}

/// Current rows of the covering program over `x[v][t]`.
#[derive(Debug, Clone, Default)]
pub struct MasterProblem {
    vertex_count: usize,
    horizon: Time,
    rows: Vec<Vec<Pair>>,
    seen: HashSet<Vec<Pair>>,
}

impl MasterProblem {
    pub fn new(vertex_count: usize, horizon: Time) -> Self {
        Self {
            vertex_count,
            horizon,
            ..Self::default()
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn horizon(&self) -> Time {
        self.horizon
    }

    pub fn rows(&self) -> &[Vec<Pair>] {
        &self.rows
    }

    /// Adds a row (sorted, deduplicated). Returns `false` if it was already
    /// present.
    pub fn add_row(&mut self, row: impl IntoIterator<Item = Pair>) -> bool {
        let mut row: Vec<Pair> = row.into_iter().collect();
        row.sort_unstable();
        row.dedup();
        debug_assert!(row
            .iter()
            .all(|&(v, t)| v < self.vertex_count && t >= 1 && t <= self.horizon));
        if !self.seen.insert(row.clone()) {
            return false;
        }
        self.rows.push(row);
        true
    }

    /// Adds the row of internal departures of `path`.
    pub fn add_path(&mut self, path: &TemporalPath) -> bool {
        self.add_row(path.internal_departures())
    }

    pub fn is_covered(&self, hulls: &[Interval], row: usize) -> bool {
        self.rows[row].iter().any(|&(v, t)| hulls[v].contains(t))
    }

    pub fn is_satisfied(&self, hulls: &[Interval]) -> bool {
        (0..self.rows.len()).all(|r| self.is_covered(hulls, r))
    }
}

/// Cost of a hull assignment.
pub fn hull_cost(hulls: &[Interval]) -> u64 {
    hulls.iter().map(Interval::len).sum()
}

/// Master objective: total hull width, ties broken by fewer non-empty hulls.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct Objective {
    pub cost: u64,
    pub vertices: usize,
}

impl Objective {
    pub fn of(hulls: &[Interval]) -> Self {
        Self {
            cost: hull_cost(hulls),
            vertices: hulls.iter().filter(|h| !h.is_empty()).count(),
        }
    }
}

/// Optional guidance for a master solve.
#[derive(Debug, Clone, Default)]
pub struct MasterHints {
    /// A proven lower bound on the optimum; the search stops as soon as it
    /// finds a solution with this objective.
    pub lower_bound: Objective,
    /// A known feasible assignment used as the starting incumbent.
    pub incumbent: Option<Vec<Interval>>,
    /// Only solutions with cost at most this value are of interest.
    pub cost_limit: Option<u64>,
    pub deadline: Option<Instant>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MasterSolution {
    pub hulls: Vec<Interval>,
    pub cost: u64,
    /// Number of non-empty hulls.
    pub vertices: usize,
    /// False when the deadline cut the search short.
    pub optimal: bool,
    pub nodes: u64,
}

/// An exact solver for [`MasterProblem`]. `Ok(None)` means no assignment
/// satisfies `hints.cost_limit`.
pub trait MasterBackend: Send + Sync {
    fn name(&self) -> &'static str;

    fn solve(&self, problem: &MasterProblem, hints: &MasterHints) -> Result<Option<MasterSolution>, MasterError>;
}

/// Minimum-cost hull assignment covering every row, using the default
/// branch-and-bound backend. Only assignments with cost at most
/// `incumbent_bound` are considered.
pub fn solve_master(
    problem: &MasterProblem,
    incumbent_bound: Option<u64>,
) -> Result<Option<MasterSolution>, MasterError> {
    BranchAndBound.solve(
        problem,
        &MasterHints {
            cost_limit: incumbent_bound,
            ..MasterHints::default()
        },
    )
}

/// Depth-first branch-and-bound that branches on the members of a smallest
/// uncovered row. Child `i` extends the hull of member `i` and forbids members
/// `0..i` for the rest of the subtree, so children partition the space.
#[derive(Debug, Clone, Copy, Default)]
pub struct BranchAndBound;

impl MasterBackend for BranchAndBound {
    fn name(&self) -> &'static str {
        "bnb"
    }

    fn solve(&self, problem: &MasterProblem, hints: &MasterHints) -> Result<Option<MasterSolution>, MasterError> {
        if let Some(r) = problem.rows.iter().position(Vec::is_empty) {
            return Err(MasterError::Infeasible(r));
        }
        let mut search = Search::new(problem);
        search.best_key = Objective {
            cost: hints.cost_limit.map_or(u64::MAX, |c| c.saturating_add(1)),
            vertices: 0,
        };
        if let Some(inc) = &hints.incumbent {
            if problem.is_satisfied(inc) && Objective::of(inc) < search.best_key {
                search.best_key = Objective::of(inc);
                search.best = Some(inc.clone());
            }
        }
        search.target = hints.lower_bound;
        search.deadline = hints.deadline;
        let complete = search.run();
        Ok(search.best.map(|hulls| MasterSolution {
            cost: hull_cost(&hulls),
            vertices: Objective::of(&hulls).vertices,
            hulls,
            optimal: complete,
            nodes: search.nodes,
        }))
    }
}

const NONE: u32 = u32::MAX;

/// Row `r` of the compacted problem and element `e` = one `(vertex, time)`
/// pair that occurs in some row. Hulls are kept as index ranges into the
/// vertex's sorted list of occurring times.
struct Search {
    vertex_count: usize,
    times: Vec<Vec<Time>>,
    elem_base: Vec<u32>,
    elem_vertex: Vec<u32>,
    elem_idx: Vec<u32>,
    rows: Vec<Vec<u32>>,
    elem_rows: Vec<Vec<u32>>,

    hull: Vec<(u32, u32)>,
    forbidden: Vec<Vec<u32>>,
    cover: Vec<u32>,
    uncovered: SparseSet,
    cost: u64,
    open: usize,

    best: Option<Vec<Interval>>,
    best_key: Objective,
    target: Objective,
    deadline: Option<Instant>,
    nodes: u64,
    timed_out: bool,

    // scratch
    mark: Vec<u32>,
    stamp: u32,
}

struct SparseSet {
    items: Vec<u32>,
    pos: Vec<u32>,
}

impl SparseSet {
    fn full(n: usize) -> Self {
        Self {
            items: (0..n as u32).collect(),
            pos: (0..n as u32).collect(),
        }
    }

    fn remove(&mut self, x: u32) {
        let p = self.pos[x as usize] as usize;
        let last = *self.items.last().unwrap();
        self.items[p] = last;
        self.pos[last as usize] = p as u32;
        self.items.pop();
        self.pos[x as usize] = NONE;
    }

    fn insert(&mut self, x: u32) {
        self.pos[x as usize] = self.items.len() as u32;
        self.items.push(x);
    }

    fn is_empty(&self) -> bool {
        self.items.is_empty()
    }
}

/// An uncovered row reduced to its still-extendable members.
struct Candidate {
    row: u32,
    elems: Vec<(u64, u32)>,
}

impl Search {
    fn new(problem: &MasterProblem) -> Self {
        let n = problem.vertex_count;
        let mut times: Vec<Vec<Time>> = vec![Vec::new(); n];
        for row in &problem.rows {
            for &(v, t) in row {
                times[v].push(t);
            }
        }
        for ts in &mut times {
            ts.sort_unstable();
            ts.dedup();
        }
        let mut elem_base = Vec::with_capacity(n);
        let mut elem_vertex = Vec::new();
        let mut elem_idx = Vec::new();
        for (v, ts) in times.iter().enumerate() {
            elem_base.push(elem_vertex.len() as u32);
            for i in 0..ts.len() {
                elem_vertex.push(v as u32);
                elem_idx.push(i as u32);
            }
        }
        let elem_of = |v: VertexId, t: Time| elem_base[v] + times[v].binary_search(&t).unwrap() as u32;
        let rows: Vec<Vec<u32>> = problem
            .rows
            .iter()
            .map(|row| row.iter().map(|&(v, t)| elem_of(v, t)).collect())
            .collect();
        let mut elem_rows = vec![Vec::new(); elem_vertex.len()];
        for (r, row) in rows.iter().enumerate() {
            for &e in row {
                elem_rows[e as usize].push(r as u32);
            }
        }
        let row_count = rows.len();
        Self {
            vertex_count: n,
            times,
            elem_base,
            elem_vertex,
            elem_idx,
            rows,
            elem_rows,
            hull: vec![(NONE, NONE); n],
            forbidden: vec![Vec::new(); n],
            cover: vec![0; row_count],
            uncovered: SparseSet::full(row_count),
            cost: 0,
            open: 0,
            best: None,
            best_key: Objective {
                cost: u64::MAX,
                vertices: 0,
            },
            target: Objective::default(),
            deadline: None,
            nodes: 0,
            timed_out: false,
            mark: vec![0; row_count.max(1)],
            stamp: 0,
        }
    }

    /// Runs the search; returns true if it completed (the result is optimal
    /// with respect to the cost limit).
    fn run(&mut self) -> bool {
        if self.best_key <= self.target {
            return true;
        }
        self.dfs();
        !self.timed_out
    }

    fn hull_width(&self, v: usize) -> u64 {
        let (lo, hi) = self.hull[v];
        if lo == NONE {
            0
        } else {
            u64::from(self.times[v][hi as usize] - self.times[v][lo as usize]) + 1
        }
    }

    /// Cost of extending the hull of the element's vertex to include it.
    fn marginal(&self, e: u32) -> u64 {
        let v = self.elem_vertex[e as usize] as usize;
        let k = self.elem_idx[e as usize];
        let (lo, hi) = self.hull[v];
        let ts = &self.times[v];
        if lo == NONE {
            1
        } else if k < lo {
            u64::from(ts[lo as usize] - ts[k as usize])
        } else if k > hi {
            u64::from(ts[k as usize] - ts[hi as usize])
        } else {
            0
        }
    }

    fn extension_allowed(&self, e: u32) -> bool {
        let v = self.elem_vertex[e as usize] as usize;
        let k = self.elem_idx[e as usize];
        let (lo, hi) = self.hull[v];
        let (a, b) = if lo == NONE { (k, k) } else { (lo.min(k), hi.max(k)) };
        !self.forbidden[v].iter().any(|&f| a <= f && f <= b)
    }

    fn include_range(&mut self, v: usize, a: u32, b: u32, delta: i32) {
        for k in a..=b {
            let e = (self.elem_base[v] + k) as usize;
            for i in 0..self.elem_rows[e].len() {
                let r = self.elem_rows[e][i];
                let c = &mut self.cover[r as usize];
                if delta > 0 {
                    *c += 1;
                    if *c == 1 {
                        self.uncovered.remove(r);
                    }
                } else {
                    *c -= 1;
                    if *c == 0 {
                        self.uncovered.insert(r);
                    }
                }
            }
        }
    }

    /// Extends the hull to include `e`; returns the previous hull.
    fn extend(&mut self, e: u32) -> (u32, u32) {
        let v = self.elem_vertex[e as usize] as usize;
        let k = self.elem_idx[e as usize];
        let old = self.hull[v];
        let old_width = self.hull_width(v);
        if old.0 == NONE {
            self.include_range(v, k, k, 1);
            self.hull[v] = (k, k);
            self.open += 1;
        } else if k < old.0 {
            self.include_range(v, k, old.0 - 1, 1);
            self.hull[v].0 = k;
        } else if k > old.1 {
            self.include_range(v, old.1 + 1, k, 1);
            self.hull[v].1 = k;
        }
        self.cost += self.hull_width(v) - old_width;
        old
    }

    fn retract(&mut self, e: u32, old: (u32, u32)) {
        let v = self.elem_vertex[e as usize] as usize;
        let new_width = self.hull_width(v);
        let (lo, hi) = self.hull[v];
        if old.0 == NONE {
            self.include_range(v, lo, hi, -1);
            self.open -= 1;
        } else {
            if lo < old.0 {
                self.include_range(v, lo, old.0 - 1, -1);
            }
            if hi > old.1 {
                self.include_range(v, old.1 + 1, hi, -1);
            }
        }
        self.hull[v] = old;
        self.cost -= new_width - self.hull_width(v);
    }

    fn record_solution(&mut self) {
        let key = Objective {
            cost: self.cost,
            vertices: self.open,
        };
        if key < self.best_key {
            let hulls = (0..self.vertex_count)
                .map(|v| {
                    let (lo, hi) = self.hull[v];
                    if lo == NONE {
                        Interval::Empty
                    } else {
                        Interval::Closed {
                            lo: self.times[v][lo as usize],
                            hi: self.times[v][hi as usize],
                        }
                    }
                })
                .collect();
            self.best = Some(hulls);
            self.best_key = key;
        }
    }

    fn done(&self) -> bool {
        self.timed_out || self.best_key <= self.target
    }

    fn dfs(&mut self) {
        self.nodes += 1;
        if self.nodes.is_multiple_of(1024) && self.deadline.is_some_and(|d| Instant::now() >= d) {
            self.timed_out = true;
        }
        if self.done() {
            return;
        }
        if self.uncovered.is_empty() {
            self.record_solution();
            return;
        }
        let Some(candidates) = self.candidates() else {
            return;
        };
        // open hulls never close deeper in the tree
        let bound = Objective {
            cost: self.cost.saturating_add(self.lower_bound(&candidates)),
            vertices: self.open,
        };
        if bound >= self.best_key {
            return;
        }
        let branch = candidates
            .iter()
            .min_by_key(|c| (c.elems.len(), c.row))
            .expect("uncovered rows exist");
        let mut members = branch.elems.clone();
        members.sort_unstable_by_key(|&(cost, e)| (cost, self.elem_vertex[e as usize], self.elem_idx[e as usize]));
        drop(candidates);

        let mut forbidden_here = Vec::with_capacity(members.len());
        for &(_, e) in &members {
            if self.extension_allowed(e) {
                let old = self.extend(e);
                self.dfs();
                self.retract(e, old);
                if self.done() {
                    break;
                }
            }
            let v = self.elem_vertex[e as usize] as usize;
            self.forbidden[v].push(self.elem_idx[e as usize]);
            forbidden_here.push(v);
        }
        for v in forbidden_here.into_iter().rev() {
            self.forbidden[v].pop();
        }
    }

    /// Extendable members of every uncovered row with their marginal costs.
    /// `None` if some row has no extendable member left.
    fn candidates(&self) -> Option<Vec<Candidate>> {
        let mut out = Vec::with_capacity(self.uncovered.items.len());
        for &r in &self.uncovered.items {
            let elems: Vec<(u64, u32)> = self.rows[r as usize]
                .iter()
                .filter(|&&e| self.extension_allowed(e))
                .map(|&e| (self.marginal(e), e))
                .collect();
            if elems.is_empty() {
                return None;
            }
            out.push(Candidate { row: r, elems });
        }
        Some(out)
    }

    fn next_stamp(&mut self) -> u32 {
        self.stamp = self.stamp.wrapping_add(1);
        if self.stamp == 0 {
            self.mark.iter_mut().for_each(|m| *m = 0);
            self.stamp = 1;
        }
        self.stamp
    }

    /// Lower bound on the extra cost needed to cover all uncovered rows: the
    /// larger of a disjoint-row packing and the exact cost of single-vertex
    /// rows plus a packing over rows untouched by those vertices.
    fn lower_bound(&mut self, candidates: &[Candidate]) -> u64 {
        let mut order: Vec<usize> = (0..candidates.len()).collect();
        order.sort_unstable_by_key(|&i| (candidates[i].elems.len(), candidates[i].row));

        let packing = self.packing(candidates, &order, &[]);

        let mut local: Vec<Vec<usize>> = Vec::new();
        let mut local_of = vec![NONE; self.vertex_count];
        for (i, c) in candidates.iter().enumerate() {
            let v = self.elem_vertex[c.elems[0].1 as usize];
            if c.elems.iter().all(|&(_, e)| self.elem_vertex[e as usize] == v) {
                let slot = &mut local_of[v as usize];
                if *slot == NONE {
                    *slot = local.len() as u32;
                    local.push(Vec::new());
                }
                local[*slot as usize].push(i);
            }
        }
        if local.is_empty() {
            return packing;
        }
        let mut local_cost = 0u64;
        let mut blocked = vec![false; self.vertex_count];
        for group in &local {
            let v = self.elem_vertex[candidates[group[0]].elems[0].1 as usize] as usize;
            match self.local_extension(v, group.iter().map(|&i| &candidates[i])) {
                Some(c) => local_cost += c,
                None => return u64::MAX / 2,
            }
            blocked[v] = true;
        }
        let rest = self.packing(candidates, &order, &blocked);
        packing.max(local_cost + rest)
    }

    /// Greedy set of uncovered rows with pairwise disjoint extendable members,
    /// skipping rows with members at `blocked` vertices. Each needs a distinct
    /// new unit of hull width.
    fn packing(&mut self, candidates: &[Candidate], order: &[usize], blocked: &[bool]) -> u64 {
        let stamp = self.next_stamp();
        if self.mark.len() < self.elem_vertex.len() {
            self.mark.resize(self.elem_vertex.len(), 0);
        }
        let mut count = 0;
        'rows: for &i in order {
            let c = &candidates[i];
            for &(_, e) in &c.elems {
                if self.mark[e as usize] == stamp
                    || (!blocked.is_empty() && blocked[self.elem_vertex[e as usize] as usize])
                {
                    continue 'rows;
                }
            }
            for &(_, e) in &c.elems {
                self.mark[e as usize] = stamp;
            }
            count += 1;
        }
        count
    }

    /// Exact minimum extra width at `v` so its hull meets every given row,
    /// where all extendable members of those rows sit at `v`.
    fn local_extension<'c>(&self, v: usize, rows: impl Iterator<Item = &'c Candidate>) -> Option<u64> {
        let ts = &self.times[v];
        let idx = |e: u32| self.elem_idx[e as usize];
        let (lo, hi) = self.hull[v];
        if lo != NONE {
            // (closest member left of the hull, closest member right of it)
            let mut reqs: Vec<(Option<u32>, Option<u32>)> = rows
                .map(|c| {
                    let left = c.elems.iter().map(|&(_, e)| idx(e)).filter(|&k| k < lo).max();
                    let right = c.elems.iter().map(|&(_, e)| idx(e)).filter(|&k| k > hi).min();
                    (left, right)
                })
                .collect();
            // extend left to each candidate stop, right as far as still needed
            reqs.sort_unstable_by_key(|r| std::cmp::Reverse(r.0));
            let mut best = u64::MAX;
            let n = reqs.len();
            // suffix max of right requirement among rows not reached on the left
            let mut suffix_right: Vec<Option<Option<u32>>> = vec![Some(None); n + 1];
            for i in (0..n).rev() {
                suffix_right[i] = match (suffix_right[i + 1], reqs[i].1) {
                    (None, _) | (_, None) => None,
                    (Some(acc), Some(r)) => Some(Some(acc.map_or(r, |a: u32| a.max(r)))),
                };
            }
            let right_cost = |need: Option<Option<u32>>| -> Option<u64> {
                match need {
                    None => None,
                    Some(None) => Some(0),
                    Some(Some(r)) => Some(u64::from(ts[r as usize] - ts[hi as usize])),
                }
            };
            if let Some(c) = right_cost(suffix_right[0]) {
                best = best.min(c);
            }
            for i in 0..n {
                let Some(l) = reqs[i].0 else { break };
                let left_cost = u64::from(ts[lo as usize] - ts[l as usize]);
                if let Some(c) = right_cost(suffix_right[i + 1]) {
                    best = best.min(left_cost + c);
                }
            }
            (best != u64::MAX).then_some(best)
        } else {
            let sets: Vec<Vec<u32>> = rows
                .map(|c| {
                    let mut s: Vec<u32> = c.elems.iter().map(|&(_, e)| idx(e)).collect();
                    s.sort_unstable();
                    s
                })
                .collect();
            let mut starts: Vec<u32> = sets.iter().flatten().copied().collect();
            starts.sort_unstable();
            starts.dedup();
            let forb = &self.forbidden[v];
            let mut best = u64::MAX;
            'start: for &a in &starts {
                let mut b = a;
                for s in &sets {
                    let p = s.partition_point(|&k| k < a);
                    match s.get(p) {
                        Some(&k) => b = b.max(k),
                        None => continue 'start,
                    }
                }
                if forb.iter().any(|&f| a <= f && f <= b) {
                    continue;
                }
                best = best.min(u64::from(ts[b as usize] - ts[a as usize]) + 1);
            }
            (best != u64::MAX).then_some(best)
        }
    }
}
