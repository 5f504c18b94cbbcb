//! Structural properties of the set cover encoding on random small inputs.

use intsep::reduction::{
    brute_force_set_cover, cover_length_bound, cover_to_timeline, from_set_cover, timeline_to_cover, ReductionInstance,
    SetCoverInstance,
};
use intsep::solver::BruteForceLimits;
use intsep::{brute_force_min, enumerate_paths, is_valid_separator, TemporalPath};
use proptest::prelude::*;

#[derive(Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Kind {
    /// `s -> v_j -> z` at the two gadget times of set `j`.
    Gadget(usize),
    /// The chain of element `e` through its sets, inside its window.
    Chain(usize),
}

fn classify(ri: &ReductionInstance, path: &TemporalPath) -> Option<Kind> {
    let inner: Vec<usize> = path.vertices().skip(1).take(path.len() - 1).collect();
    let steps = path.steps();
    if let [v] = inner[..] {
        let j = (1..=ri.set_cover.set_count()).find(|&j| ri.set_vertex(j) == v)?;
        if steps[0].time == 2 * j as u32 - 1 && steps[1].time == 2 * j as u32 {
            return Some(Kind::Gadget(j));
        }
    }
    let w = ri.windows.iter().find(|w| {
        let chain: Vec<usize> = w.sets.iter().map(|&j| ri.set_vertex(j)).collect();
        chain == inner && steps.iter().all(|s| (w.start..=w.end).contains(&s.time))
    })?;
    Some(Kind::Chain(w.element))
}

/// Set collections over `1..=n` in which every element is covered.
fn set_cover(max_n: usize, max_m: usize) -> impl Strategy<Value = SetCoverInstance> {
    (2..=max_n, 2..=max_m).prop_flat_map(|(n, m)| {
        prop::collection::vec(1u32..(1 << n), m).prop_filter_map("uncovered element", move |masks| {
            let sets = masks
                .iter()
                .map(|mask| (1..=n).filter(|e| mask & (1 << (e - 1)) != 0).collect())
                .collect();
            SetCoverInstance::new(n, sets).ok()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn every_path_is_a_gadget_or_a_chain(sc in set_cover(5, 5)) {
        let ri = from_set_cover(&sc).unwrap();
        let mut kinds: Vec<Kind> = enumerate_paths(&ri.instance, None)
            .unwrap()
            .iter()
            .map(|p| classify(&ri, p).expect("unclassified path"))
            .collect();
        kinds.sort();
        let expected: Vec<Kind> = (1..=sc.set_count())
            .map(Kind::Gadget)
            .chain((1..=sc.universe_size()).map(Kind::Chain))
            .collect();
        prop_assert_eq!(kinds, expected);
    }

    #[test]
    fn covers_become_bounded_separators(sc in set_cover(5, 5), pick in any::<u32>()) {
        let ri = from_set_cover(&sc).unwrap();
        // a random superset of the minimum cover is still a cover
        let minimum = brute_force_set_cover(&sc).unwrap();
        let cover: Vec<usize> = (1..=sc.set_count())
            .filter(|j| minimum.contains(j) || pick & (1 << j) != 0)
            .collect();
        let timeline = cover_to_timeline(&ri, &cover).unwrap();
        prop_assert!(is_valid_separator(&ri.instance, &timeline));
        prop_assert_eq!(timeline_to_cover(&ri, &timeline).unwrap(), cover);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn minimum_cover_separator_meets_the_length_bound(sc in set_cover(3, 3)) {
        let ri = from_set_cover(&sc).unwrap();
        let cover = brute_force_set_cover(&sc).unwrap();
        let timeline = cover_to_timeline(&ri, &cover).unwrap();
        prop_assert!(
            timeline.length() <= cover_length_bound(sc.universe_size(), sc.set_count(), cover.len())
        );
    }


    #[test]
    fn optimal_separators_encode_minimum_covers(sc in set_cover(3, 3)) {
        let ri = from_set_cover(&sc).unwrap();
        let limits = BruteForceLimits { max_vertices: 5, max_horizon: u32::MAX };
        let best = brute_force_min(&ri.instance, limits).unwrap();
        let cover = timeline_to_cover(&ri, &best.timeline).unwrap();
        prop_assert!(sc.uncovered_by(&cover).is_none());
        prop_assert_eq!(cover.len(), brute_force_set_cover(&sc).unwrap().len());
    }
}
