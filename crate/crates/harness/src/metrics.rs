//! Line-delimited JSON metrics, one record per episode per run.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};

pub const SCHEMA_VERSION: u32 = 1;
pub const METRICS_FILE: &str = "metrics.jsonl";
pub const META_FILE: &str = "meta.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricRecord {
    pub v: u32,
    pub run: usize,
    /// 1-based.
    pub episode: usize,
    pub length: usize,
    #[serde(rename = "return")]
    pub ret: f64,
    pub mean_option_duration: f64,
    pub interruptions: usize,
    pub collisions: usize,
}

pub fn write_records(path: &Path, records: &[MetricRecord]) -> Result<()> {
    let file = File::create(path).map_err(HarnessError::io(path))?;
    let mut w = BufWriter::new(file);
    for r in records {
        serde_json::to_writer(&mut w, r).map_err(|e| HarnessError::io(path)(e.into()))?;
        w.write_all(b"\n").map_err(HarnessError::io(path))?;
    }
    w.flush().map_err(HarnessError::io(path))
}

/// Reads a metrics file, rejecting records of any other schema version.
pub fn read_records(path: &Path) -> Result<Vec<MetricRecord>> {
    let file = File::open(path).map_err(HarnessError::io(path))?;
    let mut out = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(HarnessError::io(path))?;
        if line.trim().is_empty() {
            continue;
        }
        let bad = |m: String| HarnessError::Data(format!("{}:{}: {m}", path.display(), i + 1));
        let value: serde_json::Value = serde_json::from_str(&line).map_err(|e| bad(e.to_string()))?;
        match value.get("v").and_then(serde_json::Value::as_u64) {
            Some(v) if v == SCHEMA_VERSION as u64 => {}
            Some(v) => return Err(bad(format!("unknown schema version {v}"))),
            None => return Err(bad("missing schema version".into())),
        }
        out.push(serde_json::from_value(value).map_err(|e| bad(e.to_string()))?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(run: usize, episode: usize) -> MetricRecord {
        MetricRecord {
            v: SCHEMA_VERSION,
            run,
            episode,
            length: 3,
            ret: 1.0,
            mean_option_duration: 1.5,
            interruptions: 0,
            collisions: 0,
        }
    }

    #[test]
    fn round_trip_and_field_names() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("m.jsonl");
        write_records(&p, &[rec(0, 1), rec(1, 1)]).unwrap();
        let text = std::fs::read_to_string(&p).unwrap();
        assert!(text.starts_with(r#"{"v":1,"run":0,"episode":1,"length":3,"return":1.0,"#));
        assert_eq!(read_records(&p).unwrap(), vec![rec(0, 1), rec(1, 1)]);
    }

    #[test]
    fn rejects_other_versions() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("m.jsonl");
        std::fs::write(&p, "{\"v\":2,\"run\":0}\n").unwrap();
        let e = read_records(&p).unwrap_err();
        assert!(e.to_string().contains("unknown schema version 2"), "{e}");
        std::fs::write(&p, "{\"run\":0}\n").unwrap();
        assert!(matches!(read_records(&p), Err(HarnessError::Data(_))));
        assert!(matches!(read_records(&dir.path().join("none")), Err(HarnessError::Io { .. })));
    }
}
