//! Native instance and timeline documents.
//!
//! Instances are JSON with a fixed field order and one arc per line, so
//! writing a parsed document yields its canonical form:
//!
//! ```text
//! {
//!   "version": 1,
//!   "T": 6,
//!   "vertices": ["s", "a", "z"],
//!   "arcs": [
//!     {"u": "s", "v": "a", "times": [1, 2]},
//!     {"u": "a", "v": "z", "times": [3]}
//!   ],
//!   "source": "s",
//!   "target": "z",
//!   "deadline": 4
//! }
//! ```
//!
//! Timelines map every vertex name to `[lo, hi]` or `null`, in vertex order.

use std::fmt::Write as _;

use anyhow::{anyhow, bail, Context, Result};
use intsep::{Instance, Interval, SeparatorTimeline, TemporalGraph, Time};
use serde::Deserialize;
use serde_json::Value;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceDoc {
    version: u32,
    #[serde(rename = "T")]
    horizon: Time,
    vertices: Vec<String>,
    arcs: Vec<ArcDoc>,
    source: String,
    target: String,
    deadline: Time,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ArcDoc {
    u: String,
    v: String,
    times: Vec<Time>,
}

/// Parses a native instance document.
pub fn parse_instance(text: &str) -> Result<Instance> {
    let doc: InstanceDoc = serde_json::from_str(text)?;
    if doc.version != FORMAT_VERSION {
        bail!(
            "field `version`: unsupported version {}, expected {FORMAT_VERSION}",
            doc.version
        );
    }
    let graph = TemporalGraph::build_named(
        &doc.vertices,
        &doc.arcs
            .iter()
            .map(|a| (a.u.as_str(), a.v.as_str(), a.times.as_slice()))
            .collect::<Vec<_>>(),
        doc.horizon,
    )
    .context("field `arcs`")?;
    let lookup = |field: &str, name: &str| {
        graph
            .vertex(name)
            .ok_or_else(|| anyhow!("field `{field}`: unknown vertex `{name}`"))
    };
    let source = lookup("source", &doc.source)?;
    let target = lookup("target", &doc.target)?;
    Instance::new(graph, source, target, doc.deadline).context("fields `source`/`target`/`deadline`")
}

fn json_string(s: &str) -> String {
    serde_json::to_string(s).expect("strings serialize")
}

fn json_list<T: ToString>(items: impl IntoIterator<Item = T>) -> String {
    let parts: Vec<String> = items.into_iter().map(|x| x.to_string()).collect();
    format!("[{}]", parts.join(", "))
}

/// Canonical document for `instance`.
pub fn write_instance(instance: &Instance) -> String {
    let g = instance.graph();
    let mut out = String::new();
    writeln!(out, "{{").unwrap();
    writeln!(out, "  \"version\": {FORMAT_VERSION},").unwrap();
    writeln!(out, "  \"T\": {},", g.horizon()).unwrap();
    writeln!(
        out,
        "  \"vertices\": {},",
        json_list(g.names().iter().map(|n| json_string(n)))
    )
    .unwrap();
    if g.arcs().is_empty() {
        writeln!(out, "  \"arcs\": [],").unwrap();
    } else {
        writeln!(out, "  \"arcs\": [").unwrap();
        let lines: Vec<String> = g
            .arcs()
            .iter()
            .map(|a| {
                format!(
                    "    {{\"u\": {}, \"v\": {}, \"times\": {}}}",
                    json_string(g.name(a.from)),
                    json_string(g.name(a.to)),
                    json_list(&a.times)
                )
            })
            .collect();
        writeln!(out, "{}", lines.join(",\n")).unwrap();
        writeln!(out, "  ],").unwrap();
    }
    writeln!(out, "  \"source\": {},", json_string(g.name(instance.source()))).unwrap();
    writeln!(out, "  \"target\": {},", json_string(g.name(instance.target()))).unwrap();
    writeln!(out, "  \"deadline\": {}", instance.deadline()).unwrap();
    writeln!(out, "}}").unwrap();
    out
}

/// Parses a timeline document against `instance`. Every vertex must be
/// listed; the source and target must be `null`.
pub fn parse_timeline(instance: &Instance, text: &str) -> Result<SeparatorTimeline> {
    let g = instance.graph();
    let doc: serde_json::Map<String, Value> = serde_json::from_str(text)?;
    for name in doc.keys() {
        if g.vertex(name).is_none() {
            bail!("unknown vertex `{name}`");
        }
    }
    let mut intervals = Vec::with_capacity(g.vertex_count());
    for name in g.names() {
        let value = doc.get(name).ok_or_else(|| anyhow!("vertex `{name}` is missing"))?;
        let interval = match value {
            Value::Null => Interval::Empty,
            Value::Array(pair) => {
                let bound = |i: usize| -> Result<Time> {
                    pair.get(i)
                        .and_then(Value::as_u64)
                        .and_then(|x| Time::try_from(x).ok())
                        .ok_or_else(|| anyhow!("vertex `{name}`: expected [lo, hi] with integer bounds"))
                };
                if pair.len() != 2 {
                    bail!("vertex `{name}`: expected [lo, hi] with integer bounds");
                }
                Interval::new(bound(0)?, bound(1)?).with_context(|| format!("vertex `{name}`"))?
            }
            _ => bail!("vertex `{name}`: expected [lo, hi] or null"),
        };
        intervals.push(interval);
    }
    SeparatorTimeline::from_intervals(instance, intervals).context("timeline does not fit the instance")
}

/// Canonical timeline document.
pub fn write_timeline(instance: &Instance, timeline: &SeparatorTimeline) -> String {
    let g = instance.graph();
    let lines: Vec<String> = g
        .names()
        .iter()
        .zip(timeline.intervals())
        .map(|(name, interval)| {
            let value = match interval.bounds() {
                Some((lo, hi)) => format!("[{lo}, {hi}]"),
                None => "null".to_string(),
            };
            format!("  {}: {value}", json_string(name))
        })
        .collect();
    format!("{{\n{}\n}}\n", lines.join(",\n"))
}
