//! Monte-Carlo bookkeeping: per-run outcome records, detection statistics
//! with nearest-rank quantiles, and fixed-width histograms.
//!
//! Statistics follow the convention that undetected (or unreachable) runs
//! count towards the success rate denominator but are excluded from every
//! time statistic — a mean over failures would be meaningless.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::geom::Vec2;
use crate::math;

#[derive(Clone, Debug, PartialEq)]
pub enum McsError {
    InvalidBinWidth { value: f64 },
}

impl fmt::Display for McsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            McsError::InvalidBinWidth { value } => {
                write!(f, "histogram bin width must be positive and finite, got {value}")
            }
        }
    }
}

impl core::error::Error for McsError {}

/// Leg breakdown of a successful boat response.
#[derive(Clone, Debug, PartialEq)]
pub struct SroLegs {
    pub access_id: String,
    pub fire_id: String,
    pub rescue_id: String,
    pub prep_fire_s: f64,
    pub prep_rescue_s: f64,
    /// Prep plus drive, per branch: when the crew reaches the access point.
    pub fire_arrival_s: f64,
    pub rescue_arrival_s: f64,
    pub water_leg_s: f64,
}

/// Model-specific annotations carried by a run outcome.
#[derive(Clone, Debug, PartialEq)]
pub enum RunDetail {
    None,
    /// Boat model; `legs` is `None` when no boat could reach the target.
    Sro { hotspot_id: String, legs: Option<SroLegs> },
    /// UAV model; `uav_id` is the detecting aircraft, `None` when the target
    /// went undetected or no feasible aircraft served the hotspot.
    Uas { hotspot_id: String, uav_id: Option<String> },
}

/// One Monte-Carlo run: where the incident was and how long help took.
#[derive(Clone, Debug, PartialEq)]
pub struct RunOutcome {
    pub run_index: u64,
    pub target: Vec2,
    /// Seconds from alarm to arrival/detection; `None` when the target was
    /// never reached.
    pub time_s: Option<f64>,
    pub detail: RunDetail,
}

/// Half-open histogram bin `[bin_start_s, bin_end_s)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HistogramBin {
    pub bin_start_s: f64,
    pub bin_end_s: f64,
    pub count: u64,
}

/// Aggregated statistics over a batch of runs.
#[derive(Clone, Debug, PartialEq)]
pub struct ResultSet {
    pub n_runs: u64,
    pub n_detected: u64,
    /// `n_detected / n_runs`.
    pub success_rate: f64,
    /// Time statistics over detected runs only; `None` when nothing was
    /// detected.
    pub mean_s: Option<f64>,
    pub min_s: Option<f64>,
    pub p5_s: Option<f64>,
    pub p25_s: Option<f64>,
    pub median_s: Option<f64>,
    pub p75_s: Option<f64>,
    pub p95_s: Option<f64>,
    pub max_s: Option<f64>,
    pub bin_width_s: f64,
    pub histogram: Vec<HistogramBin>,
}

/// Evaluate `model` for run indices `0..n_runs`, in order.
///
/// The serial reference driver: because each run seeds its own RNG stream
/// from the run index, any parallel driver that evaluates the same indices
/// must produce exactly this vector.
pub fn run_mcs<F: FnMut(u64) -> RunOutcome>(mut model: F, n_runs: u64) -> Vec<RunOutcome> {
    (0..n_runs).map(|i| model(i)).collect()
}

/// Nearest-rank quantile on an ascending-sorted slice: the smallest element
/// with at least `ceil(q * n)` observations at or below it.
fn nearest_rank(sorted: &[f64], q: f64) -> f64 {
    debug_assert!(!sorted.is_empty());
    let n = sorted.len();
    let rank = math::ceil(q * n as f64) as usize;
    sorted[rank.clamp(1, n) - 1]
}

/// Histogram of `times` in half-open bins of `width` seconds, aligned to
/// zero and contiguous (interior bins with zero counts are kept).
fn build_histogram(times: &[f64], width: f64) -> Vec<HistogramBin> {
    if times.is_empty() {
        return Vec::new();
    }
    let bin_of = |t: f64| math::floor(t / width) as i64;
    let lo = times.iter().copied().map(bin_of).min().expect("non-empty");
    let hi = times.iter().copied().map(bin_of).max().expect("non-empty");
    let mut counts = alloc::vec![0u64; (hi - lo + 1) as usize];
    for t in times {
        counts[(bin_of(*t) - lo) as usize] += 1;
    }
    counts
        .into_iter()
        .enumerate()
        .map(|(i, count)| {
            let k = lo + i as i64;
            HistogramBin { bin_start_s: k as f64 * width, bin_end_s: (k + 1) as f64 * width, count }
        })
        .collect()
}

/// Aggregate a batch of outcomes into summary statistics.
pub fn summarize(outcomes: &[RunOutcome], bin_width_s: f64) -> Result<ResultSet, McsError> {
    if !(bin_width_s.is_finite() && bin_width_s > 0.0) {
        return Err(McsError::InvalidBinWidth { value: bin_width_s });
    }
    let n_runs = outcomes.len() as u64;
    let mut times: Vec<f64> = outcomes.iter().filter_map(|o| o.time_s).collect();
    times.sort_by(f64::total_cmp);
    let n_detected = times.len() as u64;
    let success_rate = if n_runs == 0 { 0.0 } else { n_detected as f64 / n_runs as f64 };
    let (mean_s, min_s, p5_s, p25_s, median_s, p75_s, p95_s, max_s) = if times.is_empty() {
        (None, None, None, None, None, None, None, None)
    } else {
        let mean = times.iter().sum::<f64>() / times.len() as f64;
        (
            Some(mean),
            Some(times[0]),
            Some(nearest_rank(&times, 0.05)),
            Some(nearest_rank(&times, 0.25)),
            Some(nearest_rank(&times, 0.50)),
            Some(nearest_rank(&times, 0.75)),
            Some(nearest_rank(&times, 0.95)),
            Some(*times.last().expect("non-empty")),
        )
    };
    Ok(ResultSet {
        n_runs,
        n_detected,
        success_rate,
        mean_s,
        min_s,
        p5_s,
        p25_s,
        median_s,
        p75_s,
        p95_s,
        max_s,
        bin_width_s,
        histogram: build_histogram(&times, bin_width_s),
    })
}
