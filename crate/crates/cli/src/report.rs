//! Append-only run reports: a schema line, a column header, one row per run.

use std::fs::OpenOptions;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use anyhow::{bail, Context, Result};

pub const SCHEMA_LINE: &str = "# intsep-report v1";
pub const HEADER: &str = "dataset,vertices,temporal_arcs,TS,d,SL,V_sep,avg_int,P,P_exact,time_s,mode,seed";

/// One solver run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub dataset: String,
    pub vertices: usize,
    pub temporal_arcs: usize,
    pub horizon: u32,
    pub deadline: u32,
    pub length: u64,
    pub separator_vertices: usize,
    pub path_count: String,
    /// True when `path_count` counts simple paths, false for walks.
    pub path_count_exact: bool,
    pub time_seconds: f64,
    pub mode: String,
    pub seed: Option<u64>,
}

impl RunRecord {
    pub fn avg_interval(&self) -> f64 {
        if self.separator_vertices == 0 {
            0.0
        } else {
            self.length as f64 / self.separator_vertices as f64
        }
    }

    pub fn to_row(&self) -> String {
        let dataset = if self.dataset.contains([',', '"', '\n']) {
            format!("\"{}\"", self.dataset.replace('"', "\"\""))
        } else {
            self.dataset.clone()
        };
        format!(
            "{dataset},{},{},{},{},{},{},{:.2},{},{},{:.3},{},{}",
            self.vertices,
            self.temporal_arcs,
            self.horizon,
            self.deadline,
            self.length,
            self.separator_vertices,
            self.avg_interval(),
            self.path_count,
            self.path_count_exact,
            self.time_seconds,
            self.mode,
            self.seed.map(|s| s.to_string()).unwrap_or_default(),
        )
    }
}

/// Appends rows to `path`, writing the schema and header first if the file is
/// new or empty. Refuses files written with another schema.
pub fn append(path: &Path, records: &[RunRecord]) -> Result<()> {
    let fresh = match std::fs::File::open(path) {
        Ok(file) => {
            let mut first = String::new();
            BufReader::new(file).read_line(&mut first)?;
            if first.is_empty() {
                true
            } else if first.trim_end() == SCHEMA_LINE {
                false
            } else {
                bail!("{} is not a report with schema `{SCHEMA_LINE}`", path.display());
            }
        }
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => true,
        Err(e) => return Err(e).with_context(|| format!("opening {}", path.display())),
    };
    let mut file = OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .with_context(|| format!("opening {}", path.display()))?;
    let mut text = String::new();
    if fresh {
        text.push_str(SCHEMA_LINE);
        text.push('\n');
        text.push_str(HEADER);
        text.push('\n');
    }
    for r in records {
        text.push_str(&r.to_row());
        text.push('\n');
    }
    file.write_all(text.as_bytes())?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record() -> RunRecord {
        RunRecord {
            dataset: "golden".into(),
            vertices: 6,
            temporal_arcs: 13,
            horizon: 6,
            deadline: 4,
            length: 2,
            separator_vertices: 1,
            path_count: "2".into(),
            path_count_exact: true,
            time_seconds: 0.0012,
            mode: "exact".into(),
            seed: None,
        }
    }

    #[test]
    fn row_format() {
        assert_eq!(record().to_row(), "golden,6,13,6,4,2,1,2.00,2,true,0.001,exact,");
        let mut r = record();
        r.separator_vertices = 0;
        r.length = 0;
        r.seed = Some(7);
        r.dataset = "a,b".into();
        assert_eq!(r.to_row(), "\"a,b\",6,13,6,4,0,0,0.00,2,true,0.001,exact,7");
    }

    #[test]
    fn appends_after_single_header() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.csv");
        append(&path, &[record()]).unwrap();
        append(&path, &[record(), record()]).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 5);
        assert_eq!(lines[0], SCHEMA_LINE);
        assert_eq!(lines[1], HEADER);
        std::fs::write(&path, "something else\n").unwrap();
        assert!(append(&path, &[record()]).is_err());
    }
}
