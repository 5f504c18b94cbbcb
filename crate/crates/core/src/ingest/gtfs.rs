//! Temporal graphs from GTFS feeds.
//!
//! Stops are vertices. Each pair of consecutive stops of a trip is an arc
//! active at the binned departure time from the first stop, measured from the
//! window start: `ceil((departure - start) / bin)` clamped to `[1, window / bin]`.

use std::collections::BTreeMap;
use std::path::Path;

use super::IngestError;
use crate::graph::{ArcSpec, Instance, TemporalGraph, Time, VertexId};
use crate::pathfind::min_traveling_time;

#[derive(Debug, Clone, PartialEq)]
pub struct GtfsParams {
    pub window_seconds: u32,
    pub bin_seconds: u32,
    /// Start of the window in seconds after midnight. Defaults to the
    /// earliest departure rounded down to the hour.
    pub window_start: Option<u32>,
    /// Shift timestamps so the first used bin is 1 and end at the last used
    /// bin.
    pub trim_horizon: bool,
    pub source_percentile: f64,
    pub target_percentile: f64,
    pub initial_pool: usize,
    pub pool_growth: usize,
}

impl Default for GtfsParams {
    fn default() -> Self {
        Self {
            window_seconds: 7200,
            bin_seconds: 60,
            window_start: None,
            trim_horizon: false,
            source_percentile: 0.10,
            target_percentile: 0.50,
            initial_pool: 5,
            pool_growth: 5,
        }
    }
}

impl GtfsParams {
    fn validate(&self) -> Result<(), IngestError> {
        if self.bin_seconds == 0 || self.window_seconds == 0 || !self.window_seconds.is_multiple_of(self.bin_seconds) {
            return Err(IngestError::InvalidParams(format!(
                "bin of {}s must evenly divide the window of {}s",
                self.bin_seconds, self.window_seconds
            )));
        }
        for p in [self.source_percentile, self.target_percentile] {
            if !(p > 0.0 && p <= 1.0) {
                return Err(IngestError::InvalidParams(format!("percentile {p} outside (0, 1]")));
            }
        }
        if self.initial_pool == 0 || self.pool_growth == 0 {
            return Err(IngestError::InvalidParams("candidate pools must grow".into()));
        }
        Ok(())
    }

    pub fn horizon(&self) -> Time {
        self.window_seconds / self.bin_seconds
    }
}

/// Seconds after midnight for `H:MM:SS`; hours may exceed 23.
pub fn parse_gtfs_time(text: &str) -> Result<u32, IngestError> {
    let malformed = || IngestError::MalformedTime(text.to_string());
    let mut parts = text.trim().split(':');
    let mut field = |max: u32| -> Result<u32, IngestError> {
        let p = parts.next().ok_or_else(malformed)?;
        if p.is_empty() || !p.bytes().all(|b| b.is_ascii_digit()) {
            return Err(malformed());
        }
        let v: u32 = p.parse().map_err(|_| malformed())?;
        if v > max {
            return Err(malformed());
        }
        Ok(v)
    };
    let (h, m, s) = (field(u32::MAX / 3600 - 1)?, field(59)?, field(59)?);
    if parts.next().is_some() {
        return Err(malformed());
    }
    Ok(h * 3600 + m * 60 + s)
}

fn open(dir: &Path, file: &str) -> Result<csv::Reader<std::fs::File>, IngestError> {
    let path = dir.join(file);
    if !path.is_file() {
        return Err(IngestError::MissingFile(path));
    }
    Ok(csv::ReaderBuilder::new().trim(csv::Trim::All).from_path(path)?)
}

fn column(headers: &csv::StringRecord, name: &str, file: &str) -> Result<usize, IngestError> {
    headers
        .iter()
        .position(|h| h.trim_start_matches('\u{feff}') == name)
        .ok_or_else(|| IngestError::Parse {
            line: 1,
            message: format!("{file} has no `{name}` column"),
        })
}

/// Reads `stops.txt` and `stop_times.txt` from `dir`.
pub fn load_gtfs(dir: &Path, params: &GtfsParams) -> Result<TemporalGraph, IngestError> {
    params.validate()?;
    let mut stops = open(dir, "stops.txt")?;
    let stop_col = column(stops.headers()?, "stop_id", "stops.txt")?;
    let mut names: Vec<String> = Vec::new();
    let mut index: BTreeMap<String, VertexId> = BTreeMap::new();
    for record in stops.records() {
        let id = record?[stop_col].to_string();
        if !index.contains_key(&id) {
            index.insert(id.clone(), names.len());
            names.push(id);
        }
    }

    let mut stop_times = open(dir, "stop_times.txt")?;
    let headers = stop_times.headers()?.clone();
    let trip_col = column(&headers, "trip_id", "stop_times.txt")?;
    let stop_col = column(&headers, "stop_id", "stop_times.txt")?;
    let seq_col = column(&headers, "stop_sequence", "stop_times.txt")?;
    let dep_col = column(&headers, "departure_time", "stop_times.txt")?;
    let arr_col = headers.iter().position(|h| h == "arrival_time");

    // trip -> (sequence, stop, departure)
    let mut trips: BTreeMap<String, Vec<(u32, VertexId, Option<u32>)>> = BTreeMap::new();
    for (i, record) in stop_times.records().enumerate() {
        let record = record?;
        let line = i + 2;
        let stop = *index
            .get(&record[stop_col])
            .ok_or_else(|| IngestError::UnknownStop(record[stop_col].to_string()))?;
        let seq: u32 = record[seq_col].parse().map_err(|_| IngestError::Parse {
            line,
            message: format!("stop_sequence `{}` is not an integer", &record[seq_col]),
        })?;
        let raw = match &record[dep_col] {
            "" => arr_col.map_or("", |c| &record[c]),
            d => d,
        };
        let departure = if raw.is_empty() {
            None
        } else {
            Some(parse_gtfs_time(raw)?)
        };
        trips
            .entry(record[trip_col].to_string())
            .or_default()
            .push((seq, stop, departure));
    }

    let start = match params.window_start {
        Some(s) => s,
        None => {
            let earliest = trips
                .values()
                .flatten()
                .filter_map(|e| e.2)
                .min()
                .ok_or(IngestError::EmptyWindow)?;
            earliest - earliest % 3600
        }
    };
    let horizon = params.horizon();
    let end = start + params.window_seconds;
    let mut arcs = Vec::new();
    for events in trips.values_mut() {
        events.sort_unstable_by_key(|e| e.0);
        for pair in events.windows(2) {
            let ((_, p, dep), (_, q, _)) = (pair[0], pair[1]);
            let Some(dep) = dep else { continue };
            if p == q || dep < start || dep >= end {
                continue;
            }
            let t = (dep - start).div_ceil(params.bin_seconds).clamp(1, horizon);
            arcs.push((p, q, t));
        }
    }
    if arcs.is_empty() {
        return Err(IngestError::EmptyWindow);
    }
    let (mut lo, mut hi, mut horizon) = (1, horizon, horizon);
    if params.trim_horizon {
        lo = arcs.iter().map(|a| a.2).min().expect("non-empty");
        hi = arcs.iter().map(|a| a.2).max().expect("non-empty");
        horizon = hi - lo + 1;
    }
    debug_assert!(arcs.iter().all(|a| (lo..=hi).contains(&a.2)));
    let specs = arcs.into_iter().map(|(p, q, t)| ArcSpec::new(p, q, [t - lo + 1]));
    Ok(TemporalGraph::build(names, specs, horizon)?)
}

/// Vertices ranked by descending degree, ties to the lowest id.
fn ranked(degree: &[usize]) -> Vec<VertexId> {
    let mut order: Vec<VertexId> = (0..degree.len()).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(degree[v]), v));
    order
}

/// Picks `(s, z, d)`: sources ranked by out-degree early in the window,
/// targets by in-degree late in the window. Pools of the top candidates grow
/// until some pair is joined by a temporal path; then
/// `d` is twice that pair's minimum traveling time, capped at the horizon.
pub fn select_endpoints_gtfs(
    graph: &TemporalGraph,
    params: &GtfsParams,
) -> Result<(VertexId, VertexId, Time), IngestError> {
    params.validate()?;
    let n = graph.vertex_count();
    let horizon = graph.horizon();
    let early = (params.source_percentile * f64::from(horizon)).ceil() as Time;
    let late = (params.target_percentile * f64::from(horizon)).ceil() as Time;
    let mut out_deg = vec![0; n];
    let mut in_deg = vec![0; n];
    for a in graph.temporal_arcs() {
        if a.time <= early {
            out_deg[a.from] += 1;
        }
        if a.time >= late {
            in_deg[a.to] += 1;
        }
    }
    let sources = ranked(&out_deg);
    let targets = ranked(&in_deg);

    let mut checked = 0;
    let mut pool = params.initial_pool.min(n);
    loop {
        for (i, &s) in sources[..pool].iter().enumerate() {
            for (j, &z) in targets[..pool].iter().enumerate() {
                // pairs inside the previous pool were already rejected
                if i < checked && j < checked {
                    continue;
                }
                if s == z {
                    continue;
                }
                let instance = Instance::new(graph.clone(), s, z, horizon)?;
                if let Some(trt) = min_traveling_time(&instance) {
                    return Ok((s, z, (2 * trt).min(horizon)));
                }
            }
        }
        if pool == n {
            return Err(IngestError::NoFeasiblePair);
        }
        checked = pool;
        pool = (pool + params.pool_growth).min(n);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write_feed(dir: &Path, stops: &str, stop_times: &str) {
        std::fs::write(dir.join("stops.txt"), stops).unwrap();
        std::fs::write(dir.join("stop_times.txt"), stop_times).unwrap();
    }

    fn temp_dir(name: &str) -> std::path::PathBuf {
        let dir = std::env::temp_dir().join(format!("intsep-gtfs-{name}-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        dir
    }

    #[test]
    fn time_parsing() {
        assert_eq!(parse_gtfs_time("00:05:00").unwrap(), 300);
        assert_eq!(parse_gtfs_time("25:00:01").unwrap(), 90001);
        assert_eq!(parse_gtfs_time("7:30:00").unwrap(), 27000);
        for bad in ["12:60:00", "12:00", "ab:00:00", "12:00:00:00", ""] {
            assert!(
                matches!(parse_gtfs_time(bad), Err(IngestError::MalformedTime(_))),
                "{bad}"
            );
        }
    }

    #[test]
    fn departure_minute_becomes_timestamp() {
        let dir = temp_dir("minute");
        write_feed(
            &dir,
            "stop_id,stop_name\nA,a\nB,b\n",
            "trip_id,arrival_time,departure_time,stop_id,stop_sequence\nt1,00:05:00,00:05:00,A,1\nt1,00:12:30,00:12:30,B,2\n",
        );
        let g = load_gtfs(&dir, &GtfsParams::default()).unwrap();
        assert_eq!(g.horizon(), 120);
        assert_eq!(g.temporal_arc_count(), 1);
        assert!(g.has_temporal_arc(0, 1, 5));
        std::fs::remove_dir_all(dir).unwrap();
    }

    #[test]
    fn out_of_window_trips_are_dropped() {
        let dir = temp_dir("window");
        write_feed(
            &dir,
            "stop_id\nA\nB\nC\n",
            "trip_id,departure_time,stop_id,stop_sequence\n\
             t1,06:00:00,A,1\nt1,06:10:00,B,2\n\
             t2,09:00:00,B,1\nt2,09:05:00,C,2\n\
             t3,06:00:30,A,1\nt3,06:04:00,B,2\n",
        );
        let g = load_gtfs(&dir, &GtfsParams::default()).unwrap();
        assert_eq!(g.arc(0, 1).unwrap().times, vec![1]);
        assert!(g.arc(1, 2).is_none());
        std::fs::remove_dir_all(dir).unwrap();
    }

    #[test]
    fn trimming_and_errors() {
        let dir = temp_dir("trim");
        write_feed(
            &dir,
            "stop_id\nA\nB\nC\n",
            "trip_id,departure_time,stop_id,stop_sequence\nt1,06:10:00,A,1\nt1,06:20:00,B,2\nt1,06:30:00,C,3\n",
        );
        let params = GtfsParams {
            trim_horizon: true,
            ..GtfsParams::default()
        };
        let g = load_gtfs(&dir, &params).unwrap();
        assert_eq!(g.horizon(), 11);
        assert!(g.has_temporal_arc(0, 1, 1) && g.has_temporal_arc(1, 2, 11));
        let late = GtfsParams {
            window_start: Some(12 * 3600),
            ..GtfsParams::default()
        };
        assert!(matches!(load_gtfs(&dir, &late), Err(IngestError::EmptyWindow)));
        std::fs::remove_file(dir.join("stops.txt")).unwrap();
        assert!(matches!(load_gtfs(&dir, &params), Err(IngestError::MissingFile(_))));
        std::fs::remove_dir_all(dir).unwrap();
    }

    #[test]
    fn single_arc_gives_deadline_two() {
        let g = TemporalGraph::build_named(&["s", "z"], &[("s", "z", &[1])], 10).unwrap();
        assert_eq!(select_endpoints_gtfs(&g, &GtfsParams::default()).unwrap(), (0, 1, 2));
    }

    #[test]
    fn endpoints_and_deadline() {
        // early hub a, late sink z, three-step route a -> b -> c -> z
        let g = TemporalGraph::build_named(
            &["a", "b", "c", "z", "x"],
            &[
                ("a", "b", &[1]),
                ("b", "c", &[6]),
                ("c", "z", &[7, 9]),
                ("x", "z", &[8]),
                ("a", "x", &[1]),
            ],
            10,
        )
        .unwrap();
        let (s, z, d) = select_endpoints_gtfs(&g, &GtfsParams::default()).unwrap();
        assert_eq!((g.name(s), g.name(z)), ("a", "z"));
        assert_eq!(d, 10);
    }
}
