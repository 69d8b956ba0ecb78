//! Across-run learning curves and summary tables.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use crate::error::{HarnessError, Result};
use crate::metrics::{read_records, MetricRecord, METRICS_FILE};

pub const DEFAULT_WINDOW: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub episode: usize,
    pub mean_length: f64,
    pub mean_option_duration: f64,
}

/// Per-episode means across runs; one point per episode index up to the
/// largest present.
pub fn curve(records: &[MetricRecord]) -> Result<Vec<CurvePoint>> {
    let last = records.iter().map(|r| r.episode).max().ok_or_else(|| HarnessError::Data("no metric records".into()))?;
    let mut sums = vec![(0.0, 0.0, 0usize); last];
    for r in records {
        if r.episode == 0 {
            return Err(HarnessError::Data("episode indices start at 1".into()));
        }
        let s = &mut sums[r.episode - 1];
        s.0 += r.length as f64;
        s.1 += r.mean_option_duration;
        s.2 += 1;
    }
    sums.iter()
        .enumerate()
        .map(|(i, &(len, dur, n))| {
            if n == 0 {
                return Err(HarnessError::Data(format!("episode {} missing from every run", i + 1)));
            }
            Ok(CurvePoint { episode: i + 1, mean_length: len / n as f64, mean_option_duration: dur / n as f64 })
        })
        .collect()
}

/// Trailing moving average; the first `window - 1` points average what is
/// available so far.
pub fn moving_average(xs: &[f64], window: usize) -> Vec<f64> {
    assert!(window >= 1, "window must be positive");
    let mut out = Vec::with_capacity(xs.len());
    let mut sum = 0.0;
    for (i, &x) in xs.iter().enumerate() {
        sum += x;
        if i >= window {
            sum -= xs[i - window];
        }
        out.push(sum / (i + 1).min(window) as f64);
    }
    out
}

/// First 1-based episode whose smoothed value is below `threshold`.
pub fn first_below(smoothed: &[f64], threshold: f64) -> Option<usize> {
    smoothed.iter().position(|&x| x < threshold).map(|i| i + 1)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub label: String,
    pub runs: usize,
    pub episodes: usize,
    /// Mean first-episode length.
    pub t0: f64,
    /// Mean length over the last `window` episodes.
    pub final_mean: f64,
    pub final_option_duration: f64,
    pub n_below_50: Option<usize>,
    pub n_below_20: Option<usize>,
}

pub fn summarize_records(label: &str, records: &[MetricRecord], window: usize) -> Result<SummaryRow> {
    if window == 0 {
        return Err(HarnessError::Data("window must be at least 1".into()));
    }
    let points = curve(records)?;
    if window > points.len() {
        return Err(HarnessError::Data(format!("window exceeds data: {window} > {} episodes", points.len())));
    }
    let lengths: Vec<f64> = points.iter().map(|p| p.mean_length).collect();
    let smoothed = moving_average(&lengths, window);
    let tail = &points[points.len() - window..];
    let mut runs: Vec<usize> = records.iter().map(|r| r.run).collect();
    runs.sort_unstable();
    runs.dedup();
    Ok(SummaryRow {
        label: label.to_string(),
        runs: runs.len(),
        episodes: points.len(),
        t0: points[0].mean_length,
        final_mean: tail.iter().map(|p| p.mean_length).sum::<f64>() / window as f64,
        final_option_duration: tail.iter().map(|p| p.mean_option_duration).sum::<f64>() / window as f64,
        n_below_50: first_below(&smoothed, 50.0),
        n_below_20: first_below(&smoothed, 20.0),
    })
}

/// One row for a metrics directory, or one row per subdirectory holding
/// metrics, sorted by name.
pub fn summarize_dir(dir: &Path, window: usize) -> Result<Vec<SummaryRow>> {
    let label = |p: &Path| p.file_name().map_or_else(|| p.display().to_string(), |n| n.to_string_lossy().into_owned());
    if dir.join(METRICS_FILE).is_file() {
        return Ok(vec![summarize_records(&label(dir), &read_records(&dir.join(METRICS_FILE))?, window)?]);
    }
    let mut subdirs: Vec<_> = std::fs::read_dir(dir)
        .map_err(HarnessError::io(dir))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.join(METRICS_FILE).is_file())
        .collect();
    subdirs.sort();
    if subdirs.is_empty() {
        return Err(HarnessError::Data(format!("no {METRICS_FILE} under {}", dir.display())));
    }
    subdirs.iter().map(|d| summarize_records(&label(d), &read_records(&d.join(METRICS_FILE))?, window)).collect()
}

pub fn render_table(rows: &[SummaryRow], window: usize) -> String {
    let n = |x: Option<usize>| x.map_or_else(|| "never".to_string(), |v| v.to_string());
    let width = rows.iter().map(|r| r.label.len()).max().unwrap_or(0).max("algorithm".len());
    let mut s = String::new();
    writeln!(s, "{:<width$}  {:>5}  {:>9}  {:>9}  {:>9}  {:>6}  {:>6}", "algorithm", "runs", "t=0", "t=final", "duration", "n<50", "n<20")
        .unwrap();
    for r in rows {
        writeln!(
            s,
            "{:<width$}  {:>5}  {:>9.2}  {:>9.2}  {:>9.2}  {:>6}  {:>6}",
            r.label,
            r.runs,
            r.t0,
            r.final_mean,
            r.final_option_duration,
            n(r.n_below_50),
            n(r.n_below_20)
        )
        .unwrap();
    }
    writeln!(s, "t=final and duration average the last {window} episodes; n<i uses a trailing {window}-episode average.")
        .unwrap();
    s
}

/// `episode,mean_length,mean_option_duration` rows for one metrics directory.
pub fn write_curves(dir: &Path, out: &Path) -> Result<usize> {
    let points = curve(&read_records(&dir.join(METRICS_FILE))?)?;
    let mut text = String::from("episode,mean_length,mean_option_duration\n");
    for p in &points {
        writeln!(text, "{},{},{}", p.episode, p.mean_length, p.mean_option_duration).unwrap();
    }
    let mut f = std::fs::File::create(out).map_err(HarnessError::io(out))?;
    f.write_all(text.as_bytes()).map_err(HarnessError::io(out))?;
    Ok(points.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::SCHEMA_VERSION;

    fn rec(run: usize, episode: usize, length: usize) -> MetricRecord {
        MetricRecord {
            v: SCHEMA_VERSION,
            run,
            episode,
            length,
            ret: 0.0,
            mean_option_duration: 1.0,
            interruptions: 0,
            collisions: 0,
        }
    }

    #[test]
    fn step_function() {
        let recs: Vec<_> = (1..=100).map(|e| rec(0, e, if e < 50 { 100 } else { 10 })).collect();
        let row = summarize_records("x", &recs, 1).unwrap();
        assert_eq!((row.n_below_50, row.n_below_20), (Some(50), Some(50)));
        assert_eq!((row.t0, row.final_mean), (100.0, 10.0));
    }

    #[test]
    fn moving_average_uses_partial_windows() {
        assert_eq!(moving_average(&[4.0, 2.0, 6.0, 0.0], 2), vec![4.0, 3.0, 4.0, 3.0]);
        assert_eq!(moving_average(&[4.0, 2.0], 5), vec![4.0, 3.0]);
    }

    #[test]
    fn averaging_across_runs_ignores_order() {
        let a = vec![rec(0, 1, 30), rec(1, 1, 10), rec(0, 2, 8), rec(1, 2, 4)];
        let mut b = a.clone();
        b.reverse();
        let (ra, rb) = (summarize_records("a", &a, 1).unwrap(), summarize_records("a", &b, 1).unwrap());
        assert_eq!(ra, rb);
        assert_eq!((ra.t0, ra.final_mean, ra.n_below_20, ra.runs), (20.0, 6.0, Some(2), 2));
        assert_eq!(ra.n_below_50, Some(1));
    }

    #[test]
    fn validation() {
        let recs = vec![rec(0, 1, 5), rec(0, 2, 5)];
        let e = summarize_records("a", &recs, 3).unwrap_err();
        assert!(e.to_string().contains("window exceeds data"));
        assert!(summarize_records("a", &[], 1).is_err());
        assert!(summarize_records("a", &recs, 0).is_err());
        assert!(curve(&[rec(0, 2, 5)]).is_err());
        let never = summarize_records("a", &recs, 1).unwrap();
        assert_eq!(never.n_below_20, Some(1));
        let big: Vec<_> = (1..=3).map(|e| rec(0, e, 99)).collect();
        let row = summarize_records("a", &big, 2).unwrap();
        assert_eq!(row.n_below_50, None);
        assert!(render_table(&[row], 2).contains("never"));
    }

    #[test]
    fn single_run_curve_is_raw() {
        let recs = vec![rec(0, 1, 7), rec(0, 2, 3)];
        let c = curve(&recs).unwrap();
        assert_eq!(c.iter().map(|p| p.mean_length).collect::<Vec<_>>(), vec![7.0, 3.0]);
    }
}
