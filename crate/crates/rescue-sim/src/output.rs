//! Result artifacts.
//!
//! All outputs are byte-stable: UTF-8, LF line endings, `.` decimal
//! separator, JSON keys in a fixed order (struct declaration order), floats
//! printed in Rust's shortest round-trip form.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use thiserror::Error;

use rescue_core::mcs::{ResultSet, RunDetail, RunOutcome};

#[derive(Debug, Error)]
pub enum OutputError {
    #[error("cannot write {path}: {message}")]
    Io { path: PathBuf, message: String },
}

/// Which simulation produced a result set; fixes the runs.csv columns.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Sro,
    Uav,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Sro => "sro",
            Mode::Uav => "uav",
        }
    }
}

/// JSON form of a [`ResultSet`]; field order is the output key order.
#[derive(Serialize)]
pub struct ResultSetDoc {
    pub n_runs: u64,
    pub n_detected: u64,
    pub success_rate: f64,
    pub mean_s: Option<f64>,
    pub min_s: Option<f64>,
    pub p5_s: Option<f64>,
    pub p25_s: Option<f64>,
    pub median_s: Option<f64>,
    pub p75_s: Option<f64>,
    pub p95_s: Option<f64>,
    pub max_s: Option<f64>,
    pub bin_width_s: f64,
    pub histogram: Vec<HistogramBinDoc>,
}

#[derive(Serialize)]
pub struct HistogramBinDoc {
    pub bin_start_s: f64,
    pub bin_end_s: f64,
    pub count: u64,
}

impl From<&ResultSet> for ResultSetDoc {
    fn from(r: &ResultSet) -> Self {
        ResultSetDoc {
            n_runs: r.n_runs,
            n_detected: r.n_detected,
            success_rate: r.success_rate,
            mean_s: r.mean_s,
            min_s: r.min_s,
            p5_s: r.p5_s,
            p25_s: r.p25_s,
            median_s: r.median_s,
            p75_s: r.p75_s,
            p95_s: r.p95_s,
            max_s: r.max_s,
            bin_width_s: r.bin_width_s,
            histogram: r
                .histogram
                .iter()
                .map(|b| HistogramBinDoc {
                    bin_start_s: b.bin_start_s,
                    bin_end_s: b.bin_end_s,
                    count: b.count,
                })
                .collect(),
        }
    }
}

/// `summary.json` document for the `sro` and `uav` subcommands.
#[derive(Serialize)]
pub struct SummaryDoc<'a> {
    pub scenario: &'a str,
    pub mode: &'a str,
    /// Search method for UAV mode; null for the boat model.
    pub method: Option<&'a str>,
    pub seed: u64,
    pub results: ResultSetDoc,
}

/// `compare.json` document.
#[derive(Serialize)]
pub struct CompareDoc<'a> {
    pub scenario: &'a str,
    pub method: &'a str,
    pub seed: u64,
    pub sro: ResultSetDoc,
    pub uas: ResultSetDoc,
    /// `sro mean / uas mean`; null when either mean is undefined.
    pub speedup: Option<f64>,
}

/// Mean-response-time ratio; null unless both modes detected something.
pub fn speedup(sro: &ResultSet, uas: &ResultSet) -> Option<f64> {
    match (sro.mean_s, uas.mean_s) {
        (Some(s), Some(u)) if u > 0.0 => Some(s / u),
        _ => None,
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), OutputError> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|e| OutputError::Io {
            path: dir.to_path_buf(),
            message: e.to_string(),
        })?;
    }
    fs::write(path, contents).map_err(|e| OutputError::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

/// Pretty-printed JSON with a trailing newline.
pub fn to_json_string<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents contain no non-string keys");
    s.push('\n');
    s
}

pub fn write_json<T: Serialize>(path: &Path, doc: &T) -> Result<(), OutputError> {
    write_file(path, &to_json_string(doc))
}

/// `histogram.csv` text: `bin_start_s,bin_end_s,count` rows.
pub fn histogram_csv(results: &ResultSet) -> String {
    let mut out = String::from("bin_start_s,bin_end_s,count\n");
    for b in &results.histogram {
        writeln!(out, "{},{},{}", b.bin_start_s, b.bin_end_s, b.count).expect("string write");
    }
    out
}

fn opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

/// `runs.csv` text; columns depend on the simulation mode.
pub fn runs_csv(outcomes: &[RunOutcome], mode: Mode) -> String {
    let mut out = String::new();
    match mode {
        Mode::Sro => {
            out.push_str(
                "run_index,hotspot_id,target_x_m,target_y_m,time_s,access_id,fire_station_id,rescue_station_id,prep_fire_s,prep_rescue_s,fire_arrival_s,rescue_arrival_s,water_leg_s\n",
            );
            for o in outcomes {
                let (hotspot, legs) = match &o.detail {
                    RunDetail::Sro { hotspot_id, legs } => (hotspot_id.as_str(), legs.as_ref()),
                    _ => ("", None),
                };
                let l = |f: fn(&rescue_core::mcs::SroLegs) -> String| {
                    legs.map(f).unwrap_or_default()
                };
                writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{},{},{},{},{}",
                    o.run_index,
                    hotspot,
                    o.target.x,
                    o.target.y,
                    opt(o.time_s),
                    l(|g| g.access_id.clone()),
                    l(|g| g.fire_id.clone()),
                    l(|g| g.rescue_id.clone()),
                    l(|g| g.prep_fire_s.to_string()),
                    l(|g| g.prep_rescue_s.to_string()),
                    l(|g| g.fire_arrival_s.to_string()),
                    l(|g| g.rescue_arrival_s.to_string()),
                    l(|g| g.water_leg_s.to_string()),
                )
                .expect("string write");
            }
        }
        Mode::Uav => {
            out.push_str("run_index,hotspot_id,target_x_m,target_y_m,time_s,uav_id\n");
            for o in outcomes {
                let (hotspot, uav) = match &o.detail {
                    RunDetail::Uas { hotspot_id, uav_id } => {
                        (hotspot_id.as_str(), uav_id.as_deref().unwrap_or(""))
                    }
                    _ => ("", ""),
                };
                writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    o.run_index,
                    hotspot,
                    o.target.x,
                    o.target.y,
                    opt(o.time_s),
                    uav,
                )
                .expect("string write");
            }
        }
    }
    out
}

/// Write `summary.json` + `histogram.csv` (+ optional `runs.csv`) into `out_dir`.
pub fn write_run_artifacts(
    out_dir: &Path,
    summary: &SummaryDoc<'_>,
    results: &ResultSet,
    runs: Option<(&[RunOutcome], Mode)>,
) -> Result<(), OutputError> {
    write_json(&out_dir.join("summary.json"), summary)?;
    write_file(&out_dir.join("histogram.csv"), &histogram_csv(results))?;
    if let Some((outcomes, mode)) = runs {
        write_file(&out_dir.join("runs.csv"), &runs_csv(outcomes, mode))?;
    }
    Ok(())
}
