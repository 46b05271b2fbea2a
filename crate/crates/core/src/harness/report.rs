use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::rd_solver::TracePoint;

/// Formats a number with 15 significant digits.
pub fn fmt_num(x: f64) -> String {
    format!("{x:.14e}")
}

/// One named check of one campaign.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckRecord {
    pub campaign: String,
    pub check: String,
    /// `key=value` pairs joined by `;`.
    pub params: String,
    pub measured: f64,
    pub expected: String,
    pub tolerance: String,
    pub pass: bool,
    /// Seconds; kept out of the report body so that reruns compare equal.
    pub wall_time: f64,
    pub detail: Option<String>,
}

impl CheckRecord {
    pub fn line(&self) -> String {
        let mut s = format!(
            "campaign={} check={} params={} measured={} expected={} tolerance={} pass={}",
            self.campaign,
            self.check,
            if self.params.is_empty() {
                "-"
            } else {
                &self.params
            },
            fmt_num(self.measured),
            self.expected,
            self.tolerance,
            self.pass
        );
        if let Some(d) = &self.detail {
            let _ = write!(s, " detail=\"{}\"", d.replace('"', "'"));
        }
        s
    }

    fn sort_key(&self) -> (&str, &str, &str) {
        (&self.campaign, &self.params, &self.check)
    }
}

/// Time series of one simulation, written as `t,E,H,umin,umax`.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceFile {
    pub name: String,
    pub points: Vec<TracePoint>,
}

impl TraceFile {
    pub fn csv(&self) -> String {
        let mut s = String::from("t,E,H,umin,umax\n");
        for p in &self.points {
            let _ = writeln!(
                s,
                "{},{},{},{},{}",
                fmt_num(p.t),
                fmt_num(p.energy),
                fmt_num(p.h),
                fmt_num(p.umin),
                fmt_num(p.umax)
            );
        }
        s
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    pub records: Vec<CheckRecord>,
}

impl Report {
    pub fn new(mut records: Vec<CheckRecord>) -> Self {
        records.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
        Self { records }
    }

    /// Conjunction of all checks; vacuously true for an empty report.
    pub fn passed(&self) -> bool {
        self.records.iter().all(|r| r.pass)
    }

    pub fn failed(&self) -> impl Iterator<Item = &CheckRecord> {
        self.records.iter().filter(|r| !r.pass)
    }

    pub fn text(&self) -> String {
        let mut s = String::new();
        for r in &self.records {
            s.push_str(&r.line());
            s.push('\n');
        }
        let failed = self.failed().count();
        let _ = write!(
            s,
            "[summary]\nrecords={}\npassed={}\nfailed={}\noverall={}\n",
            self.records.len(),
            self.records.len() - failed,
            failed,
            if failed == 0 { "pass" } else { "fail" }
        );
        s
    }

    pub fn timings(&self) -> String {
        let mut s = String::new();
        for r in &self.records {
            let _ = writeln!(
                s,
                "{} {} {} {:.6}",
                r.campaign, r.check, r.params, r.wall_time
            );
        }
        s
    }
}

fn file_stem(name: &str) -> String {
    name.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || "._=-".contains(c) {
                c
            } else {
                '_'
            }
        })
        .collect()
}

fn write(path: PathBuf, contents: &str) -> Result<()> {
    std::fs::write(&path, contents).map_err(|e| Error::io(path, e))
}

/// Writes `report.txt`, `timings.txt` and one CSV per trace under `traces/`.
/// Returns the report path.
pub fn write_outputs(report: &Report, traces: &[TraceFile], dir: &Path) -> Result<PathBuf> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let report_path = dir.join("report.txt");
    write(report_path.clone(), &report.text())?;
    write(dir.join("timings.txt"), &report.timings())?;
    if !traces.is_empty() {
        let trace_dir = dir.join("traces");
        std::fs::create_dir_all(&trace_dir).map_err(|e| Error::io(&trace_dir, e))?;
        let mut sorted: Vec<&TraceFile> = traces.iter().collect();
        sorted.sort_by(|a, b| a.name.cmp(&b.name));
        for t in sorted {
            write(
                trace_dir.join(format!("{}.csv", file_stem(&t.name))),
                &t.csv(),
            )?;
        }
    }
    Ok(report_path)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(campaign: &str, params: &str, pass: bool) -> CheckRecord {
        CheckRecord {
            campaign: campaign.into(),
            check: "c".into(),
            params: params.into(),
            measured: 0.5,
            expected: "x".into(),
            tolerance: "y".into(),
            pass,
            wall_time: 1.25,
            detail: None,
        }
    }

    #[test]
    fn empty_report_passes_vacuously() {
        let dir = tempfile::tempdir().unwrap();
        let r = Report::new(Vec::new());
        assert!(r.passed());
        let path = write_outputs(&r, &[], dir.path()).unwrap();
        let text = std::fs::read_to_string(path).unwrap();
        assert!(text.starts_with("[summary]\nrecords=0\n"));
        assert!(text.contains("overall=pass"));
    }

    #[test]
    fn sorted_and_summarized() {
        let r = Report::new(vec![
            rec("b", "x=1", true),
            rec("a", "x=2", false),
            rec("a", "x=1", true),
        ]);
        let lines: Vec<String> = r.records.iter().map(|r| r.line()).collect();
        assert!(lines[0].starts_with("campaign=a check=c params=x=1 measured=5.00000000000000e-1"));
        assert!(lines[1].contains("params=x=2"));
        assert!(!r.passed());
        assert!(r.text().contains("failed=1\noverall=fail"));
        assert!(!r.text().contains("1.25"));
        assert!(r.timings().contains("1.250000"));
    }

    #[test]
    fn csv_layout() {
        let dir = tempfile::tempdir().unwrap();
        let points = (0..3)
            .map(|k| TracePoint {
                t: k as f64,
                energy: 1.0,
                h: 0.5,
                weighted_energy: 0.25,
                umin: 0.0,
                umax: 1.0,
            })
            .collect();
        let t = TraceFile {
            name: "decay/alpha=0.5;profile=sine(1)".into(),
            points,
        };
        write_outputs(&Report::default(), &[t], dir.path()).unwrap();
        let path = dir
            .path()
            .join("traces/decay_alpha=0.5_profile=sine_1_.csv");
        let text = std::fs::read_to_string(path).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("t,E,H,umin,umax"));
        let ts: Vec<f64> = lines
            .map(|l| l.split(',').next().unwrap().parse().unwrap())
            .collect();
        assert_eq!(ts, vec![0.0, 1.0, 2.0]);
    }

    #[test]
    fn io_errors_carry_path() {
        let dir = tempfile::tempdir().unwrap();
        let blocker = dir.path().join("file");
        std::fs::write(&blocker, "x").unwrap();
        let err = write_outputs(&Report::default(), &[], &blocker.join("sub")).unwrap_err();
        assert!(err.to_string().contains("file"));
    }
}
