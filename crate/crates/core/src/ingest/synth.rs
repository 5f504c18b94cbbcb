//! Temporal instances from static networks.
//!
//! Phase 1 peels hop-shortest `s`-`z` paths off the static graph, deleting
//! their internal vertices, until `s` and `z` are disconnected; every arc of a
//! peeled path gets several random timestamps. Phase 2 labels the arcs that
//! survived phase 1 with a few background timestamps. Randomness comes from
//! ChaCha8 seeded with `seed`, which is stable across platforms.

use std::collections::{HashSet, VecDeque};
use std::ops::RangeInclusive;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{IngestError, StaticGraph};
use crate::graph::{ArcSpec, Instance, TemporalGraph, Time, VertexId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SynthesisParams {
    pub seed: u64,
    pub horizon: Time,
    /// Timestamps per arc of a peeled path.
    pub path_arc_labels: RangeInclusive<usize>,
    /// Timestamps per remaining arc.
    pub background_labels: RangeInclusive<usize>,
    pub deadline_multiplier: Time,
}

impl SynthesisParams {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            horizon: 50,
            path_arc_labels: 4..=8,
            background_labels: 2..=5,
            deadline_multiplier: 3,
        }
    }

    fn validate(&self) -> Result<(), IngestError> {
        for (name, range) in [("path", &self.path_arc_labels), ("background", &self.background_labels)] {
            if range.is_empty() || *range.start() == 0 {
                return Err(IngestError::InvalidParams(format!(
                    "{name} label range {range:?} is empty"
                )));
            }
            if *range.end() > self.horizon as usize {
                return Err(IngestError::InvalidParams(format!(
                    "{name} label range {range:?} exceeds the horizon {}",
                    self.horizon
                )));
            }
        }
        if self.deadline_multiplier == 0 {
            return Err(IngestError::InvalidParams(
                "deadline multiplier must be positive".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct Synthesized {
    pub instance: Instance,
    /// Vertex sequences of the peeled paths, in extraction order.
    pub paths: Vec<Vec<VertexId>>,
}

impl Synthesized {
    pub fn path_arc_counts(&self) -> Vec<usize> {
        self.paths.iter().map(|p| p.len() - 1).collect()
    }
}

/// Lowest-id vertex maximizing `key`, skipping `exclude`.
fn argmax(key: &[usize], exclude: Option<VertexId>) -> Option<VertexId> {
    (0..key.len())
        .filter(|&v| Some(v) != exclude)
        .max_by_key(|&v| (key[v], std::cmp::Reverse(v)))
}

struct Residual {
    out: Vec<Vec<VertexId>>,
    alive: Vec<bool>,
    removed_arcs: HashSet<(VertexId, VertexId)>,
}

impl Residual {
    /// Hop-shortest path, expanding neighbors in ascending id order.
    fn shortest_path(&self, s: VertexId, z: VertexId) -> Option<Vec<VertexId>> {
        let n = self.out.len();
        let mut parent = vec![usize::MAX; n];
        let mut queue = VecDeque::from([s]);
        parent[s] = s;
        while let Some(u) = queue.pop_front() {
            for &w in &self.out[u] {
                if !self.alive[w] || parent[w] != usize::MAX || self.removed_arcs.contains(&(u, w)) {
                    continue;
                }
                parent[w] = u;
                if w == z {
                    let mut path = vec![z];
                    let mut v = z;
                    while v != s {
                        v = parent[v];
                        path.push(v);
                    }
                    path.reverse();
                    return Some(path);
                }
                queue.push_back(w);
            }
        }
        None
    }
}

fn draw_times(rng: &mut ChaCha8Rng, horizon: Time, range: &RangeInclusive<usize>) -> Vec<Time> {
    let k = rng.gen_range(range.clone());
    let mut times: Vec<Time> = sample(rng, horizon as usize, k)
        .into_iter()
        .map(|i| i as Time + 1)
        .collect();
    times.sort_unstable();
    times
}

/// Builds a temporal instance from `static_graph`. The source has maximum
/// out-degree and the target maximum in-degree among the other vertices,
/// ties to the lowest id.
pub fn synthesize(static_graph: &StaticGraph, params: &SynthesisParams) -> Result<Synthesized, IngestError> {
    params.validate()?;
    let n = static_graph.vertex_count();
    if n < 3 {
        return Err(IngestError::DegenerateEndpoints);
    }
    let s = argmax(&static_graph.out_degrees(), None).ok_or(IngestError::DegenerateEndpoints)?;
    let z = argmax(&static_graph.in_degrees(), Some(s)).ok_or(IngestError::DegenerateEndpoints)?;

    let mut out = vec![Vec::new(); n];
    for &(u, v) in &static_graph.arcs {
        out[u].push(v);
    }
    let mut residual = Residual {
        out,
        alive: vec![true; n],
        removed_arcs: HashSet::new(),
    };
    let mut paths = Vec::new();
    while let Some(path) = residual.shortest_path(s, z) {
        if path.len() == 2 {
            residual.removed_arcs.insert((s, z));
        }
        for &v in &path[1..path.len() - 1] {
            residual.alive[v] = false;
        }
        paths.push(path);
    }
    if paths.is_empty() {
        return Err(IngestError::NoPath);
    }

    let horizon = params.horizon;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut labeled: HashSet<(VertexId, VertexId)> = HashSet::new();
    let mut arcs = Vec::new();
    for path in &paths {
        for pair in path.windows(2) {
            arcs.push(ArcSpec::new(
                pair[0],
                pair[1],
                draw_times(&mut rng, horizon, &params.path_arc_labels),
            ));
            labeled.insert((pair[0], pair[1]));
        }
    }
    for &(u, v) in &static_graph.arcs {
        if residual.alive[u] && residual.alive[v] && !labeled.contains(&(u, v)) {
            arcs.push(ArcSpec::new(
                u,
                v,
                draw_times(&mut rng, horizon, &params.background_labels),
            ));
        }
    }

    let first_arcs = (paths[0].len() - 1) as Time;
    let deadline = (first_arcs * params.deadline_multiplier)
        .min(horizon)
        .max(horizon.div_ceil(2));
    let graph = TemporalGraph::build(static_graph.names.clone(), arcs, horizon)?;
    let instance = Instance::new(graph, s, z, deadline)?;
    Ok(Synthesized { instance, paths })
}
