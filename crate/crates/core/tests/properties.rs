//! Cross-checks between the solvers, the path machinery and their oracles on
//! seeded random instances.

use intsep::ingest::{random_instance, RandomParams};
use intsep::solver::BruteForceLimits;
use intsep::{
    brute_force_min, count_paths_exact, count_walks, enumerate_paths, find_violating_path, is_valid_separator,
    solve_exact, solve_greedy, Instance, Interval, SeparatorTimeline, SolverConfig, SolverError,
};
use proptest::prelude::*;

fn instance(seed: u64) -> Instance {
    random_instance(seed, RandomParams::default())
}

fn exact_length(inst: &Instance) -> Option<u64> {
    match solve_exact(inst, &SolverConfig::default()) {
        Ok(r) => {
            assert!(r.optimal);
            Some(r.length)
        }
        Err(SolverError::Unseparable) => None,
        Err(e) => panic!("unexpected solver error: {e}"),
    }
}

/// Builds a timeline from arbitrary `(lo, width)` draws, clamped to the
/// horizon and left empty on the endpoints.
fn timeline_from(inst: &Instance, draws: &[(u32, u32, bool)]) -> SeparatorTimeline {
    let t = inst.graph().horizon();
    let intervals = (0..inst.graph().vertex_count())
        .map(|v| {
            let (lo, width, on) = draws[v % draws.len()];
            if !on || inst.is_endpoint(v) {
                return Interval::Empty;
            }
            let lo = 1 + lo % t;
            Interval::new(lo, (lo + width % 3).min(t)).unwrap()
        })
        .collect();
    SeparatorTimeline::from_intervals(inst, intervals).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exact_matches_brute_force(seed in any::<u64>()) {
        let inst = instance(seed);
        let brute = brute_force_min(&inst, BruteForceLimits::default());
        match solve_exact(&inst, &SolverConfig::default()) {
            Ok(exact) => {
                let brute = brute.unwrap();
                prop_assert_eq!(exact.length, brute.length);
                prop_assert!(is_valid_separator(&inst, &exact.timeline));
                prop_assert!(is_valid_separator(&inst, &brute.timeline));
            }
            Err(SolverError::Unseparable) => {
                prop_assert!(matches!(brute, Err(SolverError::Unseparable)));
            }
            Err(e) => prop_assert!(false, "solver failed: {}", e),
        }
    }

    #[test]
    fn optimum_grows_with_the_deadline(seed in any::<u64>()) {
        let inst = instance(seed);
        let mut previous = 0;
        for d in 1..=inst.graph().horizon() {
            let Some(length) = exact_length(&inst.with_deadline(d).unwrap()) else {
                return Ok(());
            };
            prop_assert!(length >= previous, "d = {}: {} after {}", d, length, previous);
            previous = length;
        }
    }

    #[test]
    fn greedy_never_beats_exact(seed in any::<u64>()) {
        let inst = instance(seed);
        let Some(optimum) = exact_length(&inst) else {
            return Ok(());
        };
        let greedy = solve_greedy(&inst, 10_000).unwrap();
        prop_assert!(greedy.length >= optimum);
        prop_assert!(is_valid_separator(&inst, &greedy.timeline));
    }

    #[test]
    fn greedy_with_truncated_enumeration_still_separates(seed in any::<u64>(), limit in 1usize..4) {
        let inst = instance(seed);
        if inst.has_direct_arc() {
            return Ok(());
        }
        let greedy = solve_greedy(&inst, limit).unwrap();
        prop_assert!(is_valid_separator(&inst, &greedy.timeline));
    }

    #[test]
    fn walks_bound_paths(seed in any::<u64>()) {
        let inst = instance(seed);
        let paths = count_paths_exact(&inst, u64::MAX).unwrap();
        prop_assert!(paths.exact);
        let walks = count_walks(&inst);
        prop_assert!(!walks.exact);
        prop_assert!(walks.value >= paths.value);
        let listed = enumerate_paths(&inst, None).unwrap();
        prop_assert_eq!(paths.value, listed.len().into());
    }

    #[test]
    fn violating_path_search_is_complete(
        seed in any::<u64>(),
        draws in prop::collection::vec((any::<u32>(), any::<u32>(), any::<bool>()), 1..8),
    ) {
        let inst = instance(seed);
        let tl = timeline_from(&inst, &draws);
        let open: Vec<_> = enumerate_paths(&inst, None)
            .unwrap()
            .into_iter()
            .filter(|p| !tl.separates(p))
            .collect();
        match find_violating_path(&inst, &tl) {
            None => prop_assert!(open.is_empty()),
            Some(p) => {
                prop_assert!(!tl.separates(&p));
                prop_assert!(p.traveling_time() <= inst.deadline());
                prop_assert!(open.contains(&p));
            }
        }
        prop_assert_eq!(is_valid_separator(&inst, &tl), open.is_empty());
    }
}

#[test]
fn batched_rounds_reach_the_same_optimum() {
    for seed in 0..40 {
        let inst = instance(seed);
        let Some(single) = exact_length(&inst) else {
            continue;
        };
        let config = SolverConfig {
            batch_size: 5,
            ..SolverConfig::default()
        };
        let batched = solve_exact(&inst, &config).unwrap();
        assert_eq!(batched.length, single, "seed {seed}");
        assert!(batched.generated_constraints >= 1 || single == 0);
    }
}
