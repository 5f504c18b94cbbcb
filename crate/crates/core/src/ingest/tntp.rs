//! TNTP network files: `<KEY> value` metadata, `<END OF METADATA>`, then one
//! link per `;`-terminated row. Only the first two columns are read.

use super::IngestError;

/// A directed static graph with arcs sorted and deduplicated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StaticGraph {
    pub names: Vec<String>,
    pub arcs: Vec<(usize, usize)>,
}

impl StaticGraph {
    pub fn new(names: Vec<String>, mut arcs: Vec<(usize, usize)>) -> Self {
        arcs.sort_unstable();
        arcs.dedup();
        debug_assert!(arcs.iter().all(|&(u, v)| u != v && u < names.len() && v < names.len()));
        Self { names, arcs }
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn out_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertex_count()];
        for &(u, _) in &self.arcs {
            deg[u] += 1;
        }
        deg
    }

    pub fn in_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertex_count()];
        for &(_, v) in &self.arcs {
            deg[v] += 1;
        }
        deg
    }
}

/// Node `k` of the file becomes vertex `k - 1` named `k`.
pub fn load_tntp(text: &str) -> Result<StaticGraph, IngestError> {
    let mut nodes: Option<usize> = None;
    let mut links: Option<usize> = None;
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    let mut saw_end = false;
    for (line, l) in lines.by_ref() {
        if l.is_empty() || l.starts_with('~') {
            continue;
        }
        let Some(rest) = l.strip_prefix('<') else {
            return Err(IngestError::Parse {
                line,
                message: "expected a `<KEY> value` metadata line".into(),
            });
        };
        let Some((key, value)) = rest.split_once('>') else {
            return Err(IngestError::Parse {
                line,
                message: "unterminated metadata key".into(),
            });
        };
        let parse = |v: &str| {
            v.trim().parse::<usize>().map_err(|_| IngestError::Parse {
                line,
                message: format!("`{}` is not a count", v.trim()),
            })
        };
        match key.trim() {
            "NUMBER OF NODES" => nodes = Some(parse(value)?),
            "NUMBER OF LINKS" => links = Some(parse(value)?),
            "END OF METADATA" => {
                saw_end = true;
                break;
            }
            _ => {}
        }
    }
    let missing = |what: &str| IngestError::Parse {
        line: 1,
        message: format!("missing <{what}> header"),
    };
    if !saw_end {
        return Err(missing("END OF METADATA"));
    }
    let nodes = nodes.ok_or_else(|| missing("NUMBER OF NODES"))?;
    let links = links.ok_or_else(|| missing("NUMBER OF LINKS"))?;

    let mut arcs = Vec::with_capacity(links);
    let mut rows = 0;
    for (line, l) in lines {
        if l.is_empty() || l.starts_with('~') {
            continue;
        }
        let mut fields = l.split_whitespace().filter(|f| *f != ";");
        let mut endpoint = || -> Result<usize, IngestError> {
            let f = fields.next().ok_or_else(|| IngestError::Parse {
                line,
                message: "link row needs init and term nodes".into(),
            })?;
            let id: usize = f.trim_end_matches(';').parse().map_err(|_| IngestError::Parse {
                line,
                message: format!("`{f}` is not a node id"),
            })?;
            if id == 0 || id > nodes {
                return Err(IngestError::Parse {
                    line,
                    message: format!("node {id} outside 1..={nodes}"),
                });
            }
            Ok(id - 1)
        };
        let u = endpoint()?;
        let v = endpoint()?;
        if u == v {
            return Err(IngestError::Parse {
                line,
                message: format!("self-loop at node {}", u + 1),
            });
        }
        arcs.push((u, v));
        rows += 1;
    }
    if rows != links {
        return Err(IngestError::InconsistentHeader {
            declared: links,
            actual: rows,
        });
    }
    let names = (1..=nodes).map(|k| k.to_string()).collect();
    Ok(StaticGraph::new(names, arcs))
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = "<NUMBER OF ZONES> 2\n<NUMBER OF NODES> 3\n<FIRST THRU NODE> 1\n<NUMBER OF LINKS> 3\n<END OF METADATA>\n\n~ init_node term_node capacity ;\n\t1\t2\t100\t;\n\t2\t3\t100\t;\n\t3\t1\t100\t;\n";

    #[test]
    fn parses_links() {
        let g = load_tntp(SMALL).unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.arcs, vec![(0, 1), (1, 2), (2, 0)]);
        assert_eq!(g.names, vec!["1", "2", "3"]);
    }

    #[test]
    fn zero_links() {
        let g = load_tntp("<NUMBER OF NODES> 4\n<NUMBER OF LINKS> 0\n<END OF METADATA>\n").unwrap();
        assert_eq!(g.vertex_count(), 4);
        assert!(g.arcs.is_empty());
    }

    #[test]
    fn header_mismatch() {
        let text = SMALL.replace("<NUMBER OF LINKS> 3", "<NUMBER OF LINKS> 4");
        assert!(matches!(
            load_tntp(&text),
            Err(IngestError::InconsistentHeader { declared: 4, actual: 3 })
        ));
    }

    #[test]
    fn bad_row_reports_line() {
        let text = SMALL.replace("\t2\t3\t100", "\t2\tx\t100");
        assert!(matches!(load_tntp(&text), Err(IngestError::Parse { line: 9, .. })));
        let text = SMALL.replace("\t2\t3\t100", "\t2\t9\t100");
        assert!(matches!(load_tntp(&text), Err(IngestError::Parse { line: 9, .. })));
    }

    #[test]
    fn missing_header() {
        assert!(matches!(
            load_tntp("<NUMBER OF LINKS> 0\n<END OF METADATA>\n"),
            Err(IngestError::Parse { .. })
        ));
    }
}
