//! Seeded random small instances, sized for exhaustive cross-checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{ArcSpec, Instance, TemporalGraph, Time};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomParams {
    pub max_vertices: usize,
    pub max_horizon: Time,
    pub max_temporal_arcs: usize,
}

impl Default for RandomParams {
    fn default() -> Self {
        Self {
            max_vertices: 7,
            max_horizon: 8,
            max_temporal_arcs: 25,
        }
    }
}

/// A random instance with `s = 0`, `z = n - 1` and no direct `s -> z` arc.
/// Vertex count is in `[3, max_vertices]`, horizon in `[2, max_horizon]`, the
/// deadline in `[1, T]`. Between half of `max_temporal_arcs` and all of it are
/// drawn; self-loops, direct `s -> z` arcs and repeats are dropped, so fewer
/// may remain.
pub fn random_instance(seed: u64, params: RandomParams) -> Instance {
    assert!(params.max_vertices >= 3 && params.max_horizon >= 2 && params.max_temporal_arcs >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(3..=params.max_vertices);
    let horizon = rng.gen_range(2..=params.max_horizon);
    let deadline = rng.gen_range(1..=horizon);
    let z = n - 1;
    let target = rng.gen_range(params.max_temporal_arcs.div_ceil(2)..=params.max_temporal_arcs);
    let mut arcs = Vec::with_capacity(target);
    for _ in 0..target {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u == v || (u == 0 && v == z) {
            continue;
        }
        arcs.push(ArcSpec::new(u, v, [rng.gen_range(1..=horizon)]));
    }
    let names = (0..n)
        .map(|v| match v {
            0 => "s".to_string(),
            v if v == z => "z".to_string(),
            v => format!("v{v}"),
        })
        .collect();
    let graph = TemporalGraph::build(names, arcs, horizon).expect("generated arcs are in range");
    Instance::new(graph, 0, z, deadline).expect("generated endpoints are valid")
}
