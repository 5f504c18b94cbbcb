//! Temporal directed graphs, strict temporal paths and separator timelines.
//!
//! Vertices are dense `usize` ids backed by a name table; names only matter at
//! I/O boundaries. Timestamps are `u32` values in `[1, T]`; `0` is never stored.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

/// Dense vertex identifier.
pub type VertexId = usize;

/// Discrete timestamp, `1..=T`.
pub type Time = u32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("graph must contain at least one vertex")]
    NoVertices,
    #[error("horizon must be at least 1")]
    ZeroHorizon,
    #[error("duplicate vertex name `{0}`")]
    DuplicateName(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("self-loop on vertex `{0}`")]
    SelfLoop(String),
    #[error("arc {from}->{to} has an empty timestamp set")]
    EmptyTimestampSet { from: String, to: String },
    #[error("timestamp {time} on arc {from}->{to} is outside [1, {horizon}]")]
    TimestampOutOfRange {
        from: String,
        to: String,
        time: Time,
        horizon: Time,
    },
    #[error("a temporal path needs at least one step")]
    EmptyPath,
    #[error("step {index} does not continue from the previous step")]
    BrokenChain { index: usize },
    #[error("step {index} does not strictly increase in time")]
    NonIncreasingTime { index: usize },
    #[error("vertex `{0}` is visited twice")]
    RepeatedVertex(String),
    #[error("temporal arc ({from}->{to}, {time}) does not exist")]
    MissingTemporalArc { from: String, to: String, time: Time },
    #[error("source and target must differ")]
    SourceIsTarget,
    #[error("deadline {deadline} is outside [1, {horizon}]")]
    DeadlineOutOfRange { deadline: Time, horizon: Time },
    #[error("invalid interval [{lo}, {hi}]")]
    InvalidInterval { lo: Time, hi: Time },
    #[error("interval [{lo}, {hi}] on `{vertex}` exceeds horizon {horizon}")]
    IntervalOutOfRange {
        vertex: String,
        lo: Time,
        hi: Time,
        horizon: Time,
    },
    #[error("endpoint `{0}` must carry an empty interval")]
    EndpointInterval(String),
    #[error("timeline has {got} entries, graph has {expected} vertices")]
    TimelineSize { expected: usize, got: usize },
}

/// One arc record: all timestamps of an ordered vertex pair.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Arc {
    pub from: VertexId,
    pub to: VertexId,
    pub times: Vec<Time>,
}

/// A single traversal opportunity `(from -> to, time)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TemporalArc {
    pub time: Time,
    pub from: VertexId,
    pub to: VertexId,
}

/// Arc input for [`TemporalGraph::build`]. Repeated pairs are merged.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArcSpec {
    pub from: VertexId,
    pub to: VertexId,
    pub times: Vec<Time>,
}

impl ArcSpec {
    pub fn new(from: VertexId, to: VertexId, times: impl Into<Vec<Time>>) -> Self {
        Self {
            from,
            to,
            times: times.into(),
        }
    }
}

/// Immutable temporal directed graph over `[1, T]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TemporalGraph {
    names: Vec<String>,
    index: HashMap<String, VertexId>,
    /// Sorted by `(from, to)`, so out-arcs of a vertex are contiguous and
    /// ordered by target id.
    arcs: Vec<Arc>,
    out_start: Vec<usize>,
    /// Sorted by `(time, from, to)`.
    temporal: Vec<TemporalArc>,
    horizon: Time,
}

impl TemporalGraph {
    /// Validates and builds a graph. Arc records for the same ordered pair are
    /// merged; timestamp sets are sorted and deduplicated.
    pub fn build(
        names: Vec<String>,
        arcs: impl IntoIterator<Item = ArcSpec>,
        horizon: Time,
    ) -> Result<Self, ModelError> {
        if names.is_empty() {
            return Err(ModelError::NoVertices);
        }
        if horizon == 0 {
            return Err(ModelError::ZeroHorizon);
        }
        let mut index = HashMap::with_capacity(names.len());
        for (id, name) in names.iter().enumerate() {
            if index.insert(name.clone(), id).is_some() {
                return Err(ModelError::DuplicateName(name.clone()));
            }
        }
        let n = names.len();
        let mut merged: HashMap<(VertexId, VertexId), Vec<Time>> = HashMap::new();
        for spec in arcs {
            for v in [spec.from, spec.to] {
                if v >= n {
                    return Err(ModelError::UnknownVertex(format!("#{v}")));
                }
            }
            if spec.from == spec.to {
                return Err(ModelError::SelfLoop(names[spec.from].clone()));
            }
            if spec.times.is_empty() {
                return Err(ModelError::EmptyTimestampSet {
                    from: names[spec.from].clone(),
                    to: names[spec.to].clone(),
                });
            }
            if let Some(&time) = spec.times.iter().find(|&&t| t < 1 || t > horizon) {
                return Err(ModelError::TimestampOutOfRange {
                    from: names[spec.from].clone(),
                    to: names[spec.to].clone(),
                    time,
                    horizon,
                });
            }
            merged.entry((spec.from, spec.to)).or_default().extend(spec.times);
        }
        let mut arcs: Vec<Arc> = merged
            .into_iter()
            .map(|((from, to), mut times)| {
                times.sort_unstable();
                times.dedup();
                Arc { from, to, times }
            })
            .collect();
        arcs.sort_unstable_by_key(|a| (a.from, a.to));

        let mut out_start = vec![0; n + 1];
        for arc in &arcs {
            out_start[arc.from + 1] += 1;
        }
        for v in 0..n {
            out_start[v + 1] += out_start[v];
        }
        let mut temporal: Vec<TemporalArc> = arcs
            .iter()
            .flat_map(|a| {
                a.times.iter().map(move |&time| TemporalArc {
                    time,
                    from: a.from,
                    to: a.to,
                })
            })
            .collect();
        temporal.sort_unstable();

        Ok(Self {
            names,
            index,
            arcs,
            out_start,
            temporal,
            horizon,
        })
    }

    /// Like [`build`](Self::build) but with arcs addressed by vertex name.
    pub fn build_named<S: AsRef<str>>(
        names: &[S],
        arcs: &[(&str, &str, &[Time])],
        horizon: Time,
    ) -> Result<Self, ModelError> {
        let names: Vec<String> = names.iter().map(|s| s.as_ref().to_owned()).collect();
        let lookup = |name: &str| {
            names
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| ModelError::UnknownVertex(name.to_owned()))
        };
        let specs = arcs
            .iter()
            .map(|&(u, v, times)| Ok(ArcSpec::new(lookup(u)?, lookup(v)?, times.to_vec())))
            .collect::<Result<Vec<_>, ModelError>>()?;
        Self::build(names, specs, horizon)
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn horizon(&self) -> Time {
        self.horizon
    }

    pub fn name(&self, v: VertexId) -> &str {
        &self.names[v]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn vertex(&self, name: &str) -> Option<VertexId> {
        self.index.get(name).copied()
    }

    /// Arc records sorted by `(from, to)`.
    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    /// Out-arcs of `v`, ordered by target id.
    pub fn out_arcs(&self, v: VertexId) -> &[Arc] {
        &self.arcs[self.out_start[v]..self.out_start[v + 1]]
    }

    pub fn arc(&self, from: VertexId, to: VertexId) -> Option<&Arc> {
        let out = self.out_arcs(from);
        out.binary_search_by_key(&to, |a| a.to).ok().map(|i| &out[i])
    }

    pub fn has_temporal_arc(&self, from: VertexId, to: VertexId, time: Time) -> bool {
        self.arc(from, to).is_some_and(|a| a.times.binary_search(&time).is_ok())
    }

    /// All temporal arcs sorted by `(time, from, to)`.
    pub fn temporal_arcs(&self) -> &[TemporalArc] {
        &self.temporal
    }

    /// Temporal arcs with `lo <= time <= hi`, in time order.
    pub fn temporal_arcs_between(&self, lo: Time, hi: Time) -> &[TemporalArc] {
        let a = self.temporal.partition_point(|e| e.time < lo);
        let b = self.temporal.partition_point(|e| e.time <= hi);
        &self.temporal[a..b.max(a)]
    }

    pub fn temporal_arc_count(&self) -> usize {
        self.temporal.len()
    }
}

/// One step `from -> to` at `time` of a temporal path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Step {
    pub from: VertexId,
    pub to: VertexId,
    pub time: Time,
}

impl Step {
    pub fn new(from: VertexId, to: VertexId, time: Time) -> Self {
        Self { from, to, time }
    }
}

impl From<TemporalArc> for Step {
    fn from(a: TemporalArc) -> Self {
        Self::new(a.from, a.to, a.time)
    }
}

/// A strict temporal path: chained steps, strictly increasing times, distinct
/// vertices, every step a temporal arc of the host graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TemporalPath {
    steps: Vec<Step>,
}

impl TemporalPath {
    pub fn new(graph: &TemporalGraph, steps: Vec<Step>) -> Result<Self, ModelError> {
        let first = steps.first().ok_or(ModelError::EmptyPath)?;
        let mut seen = vec![false; graph.vertex_count()];
        seen[first.from] = true;
        for (i, step) in steps.iter().enumerate() {
            if i > 0 {
                let prev = steps[i - 1];
                if prev.to != step.from {
                    return Err(ModelError::BrokenChain { index: i });
                }
                if prev.time >= step.time {
                    return Err(ModelError::NonIncreasingTime { index: i });
                }
            }
            if !graph.has_temporal_arc(step.from, step.to, step.time) {
                return Err(ModelError::MissingTemporalArc {
                    from: graph.name(step.from).to_owned(),
                    to: graph.name(step.to).to_owned(),
                    time: step.time,
                });
            }
            if std::mem::replace(&mut seen[step.to], true) {
                return Err(ModelError::RepeatedVertex(graph.name(step.to).to_owned()));
            }
        }
        Ok(Self { steps })
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn source(&self) -> VertexId {
        self.steps[0].from
    }

    pub fn target(&self) -> VertexId {
        self.steps[self.steps.len() - 1].to
    }

    /// Visited vertices, in order.
    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        std::iter::once(self.steps[0].from).chain(self.steps.iter().map(|s| s.to))
    }

    /// Last step time minus first step time, plus one.
    pub fn traveling_time(&self) -> Time {
        self.steps[self.steps.len() - 1].time - self.steps[0].time + 1
    }

    /// `(vertex, time)` of every step leaving an internal vertex.
    pub fn internal_departures(&self) -> impl Iterator<Item = (VertexId, Time)> + '_ {
        self.steps[1..].iter().map(|s| (s.from, s.time))
    }

    /// Renders the path as `s,(sb,4),b,...,z` with vertex names.
    pub fn display<'a>(&'a self, graph: &'a TemporalGraph) -> PathDisplay<'a> {
        PathDisplay { path: self, graph }
    }
}

pub struct PathDisplay<'a> {
    path: &'a TemporalPath,
    graph: &'a TemporalGraph,
}

impl fmt::Display for PathDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g = self.graph;
        write!(f, "{}", g.name(self.path.source()))?;
        for s in self.path.steps() {
            write!(f, ",({}{},{}),{}", g.name(s.from), g.name(s.to), s.time, g.name(s.to))?;
        }
        Ok(())
    }
}

/// A possibly empty closed interval of timestamps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub enum Interval {
    #[default]
    Empty,
    Closed {
        lo: Time,
        hi: Time,
    },
}

impl Interval {
    pub fn new(lo: Time, hi: Time) -> Result<Self, ModelError> {
        if lo < 1 || lo > hi {
            return Err(ModelError::InvalidInterval { lo, hi });
        }
        Ok(Self::Closed { lo, hi })
    }

    pub fn point(t: Time) -> Self {
        Self::Closed { lo: t, hi: t }
    }

    pub fn len(&self) -> u64 {
        match *self {
            Self::Empty => 0,
            Self::Closed { lo, hi } => u64::from(hi - lo) + 1,
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, Self::Empty)
    }

    pub fn contains(&self, t: Time) -> bool {
        match *self {
            Self::Empty => false,
            Self::Closed { lo, hi } => lo <= t && t <= hi,
        }
    }

    pub fn bounds(&self) -> Option<(Time, Time)> {
        match *self {
            Self::Empty => None,
            Self::Closed { lo, hi } => Some((lo, hi)),
        }
    }

    /// Smallest interval containing `self` and `t`.
    pub fn hull_with(&self, t: Time) -> Self {
        match *self {
            Self::Empty => Self::point(t),
            Self::Closed { lo, hi } => Self::Closed {
                lo: lo.min(t),
                hi: hi.max(t),
            },
        }
    }

    pub fn is_subset_of(&self, other: &Interval) -> bool {
        match (*self, *other) {
            (Self::Empty, _) => true,
            (Self::Closed { .. }, Self::Empty) => false,
            (Self::Closed { lo, hi }, Self::Closed { lo: l2, hi: h2 }) => l2 <= lo && hi <= h2,
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Empty => f.write_str("[]"),
            Self::Closed { lo, hi } => write!(f, "[{lo},{hi}]"),
        }
    }
}

/// Whether `(vertex, interval)` separates `path`: some step leaving `vertex`
/// happens at a time inside `interval`. Incoming steps do not count.
pub fn separates(vertex: VertexId, interval: &Interval, path: &TemporalPath) -> bool {
    !interval.is_empty()
        && path
            .steps()
            .iter()
            .any(|s| s.from == vertex && interval.contains(s.time))
}

/// Problem input: graph, endpoints and deadline.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    graph: TemporalGraph,
    source: VertexId,
    target: VertexId,
    deadline: Time,
}

impl Instance {
    pub fn new(graph: TemporalGraph, source: VertexId, target: VertexId, deadline: Time) -> Result<Self, ModelError> {
        for v in [source, target] {
            if v >= graph.vertex_count() {
                return Err(ModelError::UnknownVertex(format!("#{v}")));
            }
        }
        if source == target {
            return Err(ModelError::SourceIsTarget);
        }
        if deadline < 1 || deadline > graph.horizon() {
            return Err(ModelError::DeadlineOutOfRange {
                deadline,
                horizon: graph.horizon(),
            });
        }
        Ok(Self {
            graph,
            source,
            target,
            deadline,
        })
    }

    pub fn graph(&self) -> &TemporalGraph {
        &self.graph
    }

    pub fn source(&self) -> VertexId {
        self.source
    }

    pub fn target(&self) -> VertexId {
        self.target
    }

    pub fn deadline(&self) -> Time {
        self.deadline
    }

    pub fn with_deadline(&self, deadline: Time) -> Result<Self, ModelError> {
        Self::new(self.graph.clone(), self.source, self.target, deadline)
    }

    pub fn is_endpoint(&self, v: VertexId) -> bool {
        v == self.source || v == self.target
    }

    /// Whether some temporal arc goes straight from source to target. Such a
    /// path has no internal vertex and cannot be separated.
    pub fn has_direct_arc(&self) -> bool {
        self.graph.arc(self.source, self.target).is_some()
    }
}

/// One interval per vertex; endpoints always empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SeparatorTimeline {
    intervals: Vec<Interval>,
}

impl SeparatorTimeline {
    pub fn empty(instance: &Instance) -> Self {
        Self {
            intervals: vec![Interval::Empty; instance.graph().vertex_count()],
        }
    }

    pub fn from_intervals(instance: &Instance, intervals: Vec<Interval>) -> Result<Self, ModelError> {
        let g = instance.graph();
        if intervals.len() != g.vertex_count() {
            return Err(ModelError::TimelineSize {
                expected: g.vertex_count(),
                got: intervals.len(),
            });
        }
        let mut timeline = Self::empty(instance);
        for (v, interval) in intervals.into_iter().enumerate() {
            timeline.set(instance, v, interval)?;
        }
        Ok(timeline)
    }

    pub fn set(&mut self, instance: &Instance, v: VertexId, interval: Interval) -> Result<(), ModelError> {
        let g = instance.graph();
        if let Some((lo, hi)) = interval.bounds() {
            if instance.is_endpoint(v) {
                return Err(ModelError::EndpointInterval(g.name(v).to_owned()));
            }
            if hi > g.horizon() {
                return Err(ModelError::IntervalOutOfRange {
                    vertex: g.name(v).to_owned(),
                    lo,
                    hi,
                    horizon: g.horizon(),
                });
            }
        }
        self.intervals[v] = interval;
        Ok(())
    }

    pub fn get(&self, v: VertexId) -> Interval {
        self.intervals[v]
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    /// Sum of interval lengths.
    pub fn length(&self) -> u64 {
        self.intervals.iter().map(Interval::len).sum()
    }

    /// Number of vertices with a non-empty interval.
    pub fn separator_vertices(&self) -> usize {
        self.intervals.iter().filter(|i| !i.is_empty()).count()
    }

    pub fn is_blocked(&self, v: VertexId, t: Time) -> bool {
        self.intervals[v].contains(t)
    }

    pub fn separates(&self, path: &TemporalPath) -> bool {
        path.steps().iter().any(|s| self.is_blocked(s.from, s.time))
    }
}

/// Sum of interval lengths of `timeline`.
pub fn timeline_length(timeline: &SeparatorTimeline) -> u64 {
    timeline.length()
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub(crate) fn golden() -> Instance {
        let g = TemporalGraph::build_named(
            &["s", "a", "b", "c", "f", "z"],
            &[
                ("s", "a", &[1, 2]),
                ("s", "b", &[4]),
                ("a", "b", &[1, 2]),
                ("b", "c", &[2]),
                ("a", "c", &[3]),
                ("b", "f", &[2, 5]),
                ("c", "f", &[4]),
                ("f", "z", &[5, 6]),
                ("c", "z", &[3]),
            ],
            6,
        )
        .unwrap();
        Instance::new(g, 0, 5, 4).unwrap()
    }

    fn p1(inst: &Instance) -> TemporalPath {
        let v = |n| inst.graph().vertex(n).unwrap();
        TemporalPath::new(
            inst.graph(),
            vec![
                Step::new(v("s"), v("b"), 4),
                Step::new(v("b"), v("f"), 5),
                Step::new(v("f"), v("z"), 6),
            ],
        )
        .unwrap()
    }

    #[test]
    fn golden_counts() {
        let inst = golden();
        assert_eq!(inst.graph().arcs().len(), 9);
        assert_eq!(inst.graph().temporal_arc_count(), 13);
    }

    #[test]
    fn degenerate_and_invalid_graphs() {
        let g = TemporalGraph::build(vec!["x".into()], [], 1).unwrap();
        assert_eq!(g.temporal_arc_count(), 0);

        let e = TemporalGraph::build_named(&["a"], &[("a", "a", &[1])], 3).unwrap_err();
        assert_eq!(e, ModelError::SelfLoop("a".into()));
        let e = TemporalGraph::build_named(&["a", "b"], &[("a", "b", &[0])], 3).unwrap_err();
        assert!(matches!(e, ModelError::TimestampOutOfRange { time: 0, .. }));
        let e = TemporalGraph::build_named(&["a", "b"], &[("a", "b", &[4])], 3).unwrap_err();
        assert!(matches!(e, ModelError::TimestampOutOfRange { time: 4, .. }));
        let e = TemporalGraph::build_named(&["a", "b"], &[("a", "b", &[])], 3).unwrap_err();
        assert!(matches!(e, ModelError::EmptyTimestampSet { .. }));
        let e = TemporalGraph::build_named(&["a", "b"], &[("a", "q", &[1])], 3).unwrap_err();
        assert_eq!(e, ModelError::UnknownVertex("q".into()));
        let e = TemporalGraph::build_named(&["a", "a"], &[], 3).unwrap_err();
        assert_eq!(e, ModelError::DuplicateName("a".into()));
    }

    #[test]
    fn arcs_merge_and_dedup() {
        let g = TemporalGraph::build(
            vec!["a".into(), "b".into()],
            [ArcSpec::new(0, 1, [3, 1]), ArcSpec::new(0, 1, [1, 2])],
            5,
        )
        .unwrap();
        assert_eq!(g.arcs().len(), 1);
        assert_eq!(g.arcs()[0].times, vec![1, 2, 3]);
    }

    #[test]
    fn traveling_times() {
        let inst = golden();
        let v = |n| inst.graph().vertex(n).unwrap();
        assert_eq!(p1(&inst).traveling_time(), 3);
        let p2 = TemporalPath::new(
            inst.graph(),
            vec![
                Step::new(v("s"), v("a"), 2),
                Step::new(v("a"), v("c"), 3),
                Step::new(v("c"), v("f"), 4),
                Step::new(v("f"), v("z"), 5),
            ],
        )
        .unwrap();
        assert_eq!(p2.traveling_time(), 4);
        let slow = TemporalPath::new(
            inst.graph(),
            vec![
                Step::new(v("s"), v("a"), 1),
                Step::new(v("a"), v("b"), 2),
                Step::new(v("b"), v("f"), 5),
                Step::new(v("f"), v("z"), 6),
            ],
        )
        .unwrap();
        assert_eq!(slow.traveling_time(), 6);
        let one = TemporalPath::new(inst.graph(), vec![Step::new(v("c"), v("z"), 3)]).unwrap();
        assert_eq!(one.traveling_time(), 1);
    }

    #[test]
    fn path_validation() {
        let inst = golden();
        let g = inst.graph();
        let v = |n| g.vertex(n).unwrap();
        assert_eq!(TemporalPath::new(g, vec![]).unwrap_err(), ModelError::EmptyPath);
        // a -> b at 2 then b -> c at 2: not strictly increasing
        let e = TemporalPath::new(g, vec![Step::new(v("a"), v("b"), 2), Step::new(v("b"), v("c"), 2)]);
        assert_eq!(e.unwrap_err(), ModelError::NonIncreasingTime { index: 1 });
        let e = TemporalPath::new(g, vec![Step::new(v("s"), v("b"), 4), Step::new(v("a"), v("c"), 5)]);
        assert_eq!(e.unwrap_err(), ModelError::BrokenChain { index: 1 });
        let e = TemporalPath::new(g, vec![Step::new(v("s"), v("b"), 3)]);
        assert!(matches!(e.unwrap_err(), ModelError::MissingTemporalArc { .. }));
    }

    #[test]
    fn repeated_vertex_is_rejected() {
        let g = TemporalGraph::build_named(
            &["a", "b", "c"],
            &[("a", "b", &[1]), ("b", "c", &[2]), ("c", "b", &[3])],
            3,
        )
        .unwrap();
        let e = TemporalPath::new(&g, vec![Step::new(0, 1, 1), Step::new(1, 2, 2), Step::new(2, 1, 3)]);
        assert_eq!(e.unwrap_err(), ModelError::RepeatedVertex("b".into()));
    }

    #[test]
    fn separation_uses_outgoing_steps_only() {
        let inst = golden();
        let f = inst.graph().vertex("f").unwrap();
        let p = p1(&inst);
        assert!(separates(f, &Interval::new(5, 6).unwrap(), &p));
        assert!(!separates(f, &Interval::Empty, &p));
        assert!(!separates(f, &Interval::point(5), &p));
    }

    #[test]
    fn timeline_lengths() {
        let inst = golden();
        let g = inst.graph();
        let mut tl = SeparatorTimeline::empty(&inst);
        assert_eq!(timeline_length(&tl), 0);
        tl.set(&inst, g.vertex("f").unwrap(), Interval::new(5, 6).unwrap())
            .unwrap();
        assert_eq!(timeline_length(&tl), 2);

        let mut tl = SeparatorTimeline::empty(&inst);
        tl.set(&inst, g.vertex("a").unwrap(), Interval::new(1, 3).unwrap())
            .unwrap();
        tl.set(&inst, g.vertex("b").unwrap(), Interval::point(2)).unwrap();
        assert_eq!(tl.length(), 4);
        assert_eq!(tl.separator_vertices(), 2);
    }

    #[test]
    fn timeline_rejects_endpoint_and_overflow() {
        let inst = golden();
        let mut tl = SeparatorTimeline::empty(&inst);
        let e = tl.set(&inst, inst.source(), Interval::point(1)).unwrap_err();
        assert_eq!(e, ModelError::EndpointInterval("s".into()));
        let e = tl.set(&inst, 1, Interval::new(5, 7).unwrap()).unwrap_err();
        assert!(matches!(e, ModelError::IntervalOutOfRange { .. }));
        assert!(Interval::new(3, 2).is_err());
        assert!(Interval::new(0, 2).is_err());
    }

    #[test]
    fn instance_validation() {
        let g = golden().graph().clone();
        assert_eq!(
            Instance::new(g.clone(), 0, 0, 2).unwrap_err(),
            ModelError::SourceIsTarget
        );
        assert!(matches!(
            Instance::new(g.clone(), 0, 5, 7).unwrap_err(),
            ModelError::DeadlineOutOfRange { .. }
        ));
        assert!(Instance::new(g, 0, 5, 0).is_err());
    }
}
