//! Set cover encoded as interval separation.
//!
//! Set `C_j` becomes vertex `v_j` with a gadget path `s -(2j-1)-> v_j -(2j)-> z`.
//! Element `i` becomes one chain `s -> v_{j1} -> ... -> v_{jk} -> z` through
//! the sets containing it, in index order, with consecutive timestamps inside
//! its own window. Windows start after `M = (mn)^3` and are spaced so that no
//! path within the deadline can combine arcs of two windows; the deadline-
//! respecting paths are then exactly the `m` gadget paths and `n` chains.
//!
//! Set indices are 1-based throughout, matching the vertex names `v1..vm`.

use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::{ArcSpec, Instance, Interval, ModelError, SeparatorTimeline, TemporalGraph, Time};
use crate::pathfind::is_valid_separator;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("invalid set cover instance: {0}")]
    InvalidInstance(String),
    #[error("element {0} is in no set")]
    Uncoverable(usize),
    #[error("the chosen sets do not cover element {0}")]
    NotACover(usize),
    #[error("the timeline does not separate every path")]
    NotASeparator,
    #[error("exhaustive set cover supports at most 20 sets, got {0}")]
    TooManySets(usize),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// A universe `1..=n` and `m` subsets of it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetCoverInstance {
    n: usize,
    sets: Vec<Vec<usize>>,
}

impl SetCoverInstance {
    /// Requires `n, m >= 2`, non-empty sets of elements in `1..=n`, and every
    /// element in some set.
    pub fn new(n: usize, sets: Vec<Vec<usize>>) -> Result<Self, ReductionError> {
        if n < 2 || sets.len() < 2 {
            return Err(ReductionError::InvalidInstance(format!(
                "need n >= 2 and m >= 2, got n = {n}, m = {}",
                sets.len()
            )));
        }
        let mut seen = vec![false; n + 1];
        let mut sets = sets;
        for (j, set) in sets.iter_mut().enumerate() {
            set.sort_unstable();
            set.dedup();
            if set.is_empty() {
                return Err(ReductionError::InvalidInstance(format!("set {} is empty", j + 1)));
            }
            for &e in set.iter() {
                if e == 0 || e > n {
                    return Err(ReductionError::InvalidInstance(format!(
                        "set {} has element {e} outside 1..={n}",
                        j + 1
                    )));
                }
                seen[e] = true;
            }
        }
        if let Some(e) = (1..=n).find(|&e| !seen[e]) {
            return Err(ReductionError::Uncoverable(e));
        }
        Ok(Self { n, sets })
    }

    pub fn universe_size(&self) -> usize {
        self.n
    }

    pub fn set_count(&self) -> usize {
        self.sets.len()
    }

    /// Set `j` (1-based).
    pub fn set(&self, j: usize) -> &[usize] {
        &self.sets[j - 1]
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }

    /// Sets containing element `e`, ascending.
    pub fn containing(&self, e: usize) -> Vec<usize> {
        (1..=self.sets.len())
            .filter(|&j| self.set(j).binary_search(&e).is_ok())
            .collect()
    }

    /// First element left uncovered by `cover`, if any.
    pub fn uncovered_by(&self, cover: &[usize]) -> Option<usize> {
        let mut hit = vec![false; self.n + 1];
        for &j in cover {
            if (1..=self.sets.len()).contains(&j) {
                for &e in self.set(j) {
                    hit[e] = true;
                }
            }
        }
        (1..=self.n).find(|&e| !hit[e])
    }

    /// Parses `n m` followed by `m` lines of element ids.
    pub fn parse(text: &str) -> Result<Self, ReductionError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let (line, header) = lines.next().ok_or(ReductionError::Parse {
            line: 1,
            message: "missing `n m` header".into(),
        })?;
        let nums = parse_numbers(line, header)?;
        let [n, m] = nums[..] else {
            return Err(ReductionError::Parse {
                line,
                message: "header must be `n m`".into(),
            });
        };
        let mut sets = Vec::with_capacity(m);
        for (line, l) in lines {
            sets.push(parse_numbers(line, l)?);
        }
        if sets.len() != m {
            return Err(ReductionError::Parse {
                line,
                message: format!("header announces {m} sets, found {}", sets.len()),
            });
        }
        Self::new(n, sets)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.sets.len());
        for set in &self.sets {
            let row: Vec<String> = set.iter().map(usize::to_string).collect();
            writeln!(out, "{}", row.join(" ")).unwrap();
        }
        out
    }
}

fn parse_numbers(line: usize, text: &str) -> Result<Vec<usize>, ReductionError> {
    text.split_whitespace()
        .map(|w| {
            w.parse().map_err(|_| ReductionError::Parse {
                line,
                message: format!("`{w}` is not a non-negative integer"),
            })
        })
        .collect()
}

/// Time window used by element `element`'s chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElementWindow {
    pub element: usize,
    pub start: Time,
    pub end: Time,
    /// Sets the chain passes through, in order.
    pub sets: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct ReductionInstance {
    pub instance: Instance,
    pub set_cover: SetCoverInstance,
    /// `(mn)^3`.
    pub big_m: u64,
    pub windows: Vec<ElementWindow>,
}

impl ReductionInstance {
    /// Vertex of set `j`.
    pub fn set_vertex(&self, j: usize) -> usize {
        j
    }
}

/// Upper bound on the separator built from a cover of size `k`:
/// `(M + 2mn + n + 1) k + m - k`.
pub fn cover_length_bound(n: usize, m: usize, k: usize) -> u64 {
    let (n, m, k) = (n as u64, m as u64, k as u64);
    ((n * m).pow(3) + 2 * m * n + n + 1) * k + m - k
}

/// Encodes `sc`. The deadline is `max(n, f + 1)` where `f` is the largest
/// number of sets sharing one element, so that every chain fits.
pub fn from_set_cover(sc: &SetCoverInstance) -> Result<ReductionInstance, ReductionError> {
    let n = sc.universe_size();
    let m = sc.set_count();
    let big_m = (n as u64 * m as u64)
        .checked_pow(3)
        .filter(|&x| x < u64::from(Time::MAX) / 4)
        .ok_or_else(|| {
            ReductionError::InvalidInstance(format!("(mn)^3 overflows the timestamp range for n = {n}, m = {m}"))
        })?;
    let containing: Vec<Vec<usize>> = (1..=n).map(|e| sc.containing(e)).collect();
    let f_max = containing.iter().map(Vec::len).max().unwrap_or(1);
    let deadline = n.max(f_max + 1) as Time;

    let z = m + 1;
    let mut names = vec!["s".to_string()];
    names.extend((1..=m).map(|j| format!("v{j}")));
    names.push("z".to_string());

    let mut arcs = Vec::new();
    for j in 1..=m {
        let j32 = j as Time;
        arcs.push(ArcSpec::new(0, j, [2 * j32 - 1]));
        arcs.push(ArcSpec::new(j, z, [2 * j32]));
    }
    let mut windows = Vec::with_capacity(n);
    // the gadget block [1, 2m] shifted past M: every set vertex departs at or
    // after M + 2m + 1 on a chain, so an interval reaching a chain from its
    // gadget time 2j is at least M long
    let mut start = (big_m + 2 * m as u64) as Time;
    for (i, sets) in containing.iter().enumerate() {
        let chain: Vec<usize> = std::iter::once(0).chain(sets.iter().copied()).chain([z]).collect();
        for (k, pair) in chain.windows(2).enumerate() {
            arcs.push(ArcSpec::new(pair[0], pair[1], [start + k as Time]));
        }
        let end = start + sets.len() as Time;
        windows.push(ElementWindow {
            element: i + 1,
            start,
            end,
            sets: sets.clone(),
        });
        start = end + deadline;
    }
    let horizon = windows.last().map_or(2 * m as Time, |w| w.end);
    let graph = TemporalGraph::build(names, arcs, horizon)?;
    let instance = Instance::new(graph, 0, z, deadline)?;
    Ok(ReductionInstance {
        instance,
        set_cover: sc.clone(),
        big_m,
        windows,
    })
}

/// Separator from a cover: chosen `v_j` blocks `[2j, last departure of v_j]`,
/// every other `v_j` blocks only its gadget time `2j`.
pub fn cover_to_timeline(ri: &ReductionInstance, cover: &[usize]) -> Result<SeparatorTimeline, ReductionError> {
    let sc = &ri.set_cover;
    if let Some(e) = sc.uncovered_by(cover) {
        return Err(ReductionError::NotACover(e));
    }
    let graph = ri.instance.graph();
    let mut timeline = SeparatorTimeline::empty(&ri.instance);
    for j in 1..=sc.set_count() {
        let v = ri.set_vertex(j);
        let gadget = 2 * j as Time;
        let interval = if cover.contains(&j) {
            let last = graph
                .out_arcs(v)
                .iter()
                .flat_map(|a| a.times.iter().copied())
                .max()
                .unwrap_or(gadget);
            Interval::new(gadget, last.max(gadget))?
        } else {
            Interval::point(gadget)
        };
        timeline.set(&ri.instance, v, interval)?;
    }
    debug_assert!(is_valid_separator(&ri.instance, &timeline));
    Ok(timeline)
}

/// Cover from a separator: every set whose interval has length at least `M`.
pub fn timeline_to_cover(ri: &ReductionInstance, timeline: &SeparatorTimeline) -> Result<Vec<usize>, ReductionError> {
    if !is_valid_separator(&ri.instance, timeline) {
        return Err(ReductionError::NotASeparator);
    }
    Ok((1..=ri.set_cover.set_count())
        .filter(|&j| timeline.get(ri.set_vertex(j)).len() >= ri.big_m)
        .collect())
}

/// Minimum cover by exhaustive search in increasing size; the first cover in
/// lexicographic order wins.
pub fn brute_force_set_cover(sc: &SetCoverInstance) -> Result<Vec<usize>, ReductionError> {
    let m = sc.set_count();
    if m > 20 {
        return Err(ReductionError::TooManySets(m));
    }
    let words = sc.universe_size().div_ceil(64);
    let masks: Vec<Vec<u64>> = sc
        .sets()
        .iter()
        .map(|set| {
            let mut mask = vec![0u64; words];
            for &e in set {
                mask[(e - 1) / 64] |= 1 << ((e - 1) % 64);
            }
            mask
        })
        .collect();
    let mut full = vec![u64::MAX; words];
    let tail = sc.universe_size() % 64;
    if tail != 0 {
        full[words - 1] = (1u64 << tail) - 1;
    }

    fn pick(masks: &[Vec<u64>], full: &[u64], from: usize, left: usize, acc: &[u64], chosen: &mut Vec<usize>) -> bool {
        if left == 0 {
            return acc == full;
        }
        for j in from..masks.len() {
            let next: Vec<u64> = acc.iter().zip(&masks[j]).map(|(a, b)| a | b).collect();
            chosen.push(j + 1);
            if pick(masks, full, j + 1, left - 1, &next, chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }

    for k in 1..=m {
        let mut chosen = Vec::with_capacity(k);
        if pick(&masks, &full, 0, k, &vec![0; words], &mut chosen) {
            return Ok(chosen);
        }
    }
    unreachable!("validated instances are coverable by all sets")
}
