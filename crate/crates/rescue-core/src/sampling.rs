//! Seeded random sampling: per-run RNG streams, weighted hotspot choice,
//! uniform points in polygons, and truncated normal draws.
//!
//! Every Monte-Carlo run owns an independent [`RunRng`] derived from
//! `(master_seed, stream_label, run_index)`, so results do not depend on
//! evaluation order or thread count, and the same run index reproduces the
//! same draws no matter how many runs surround it.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::geom::{point_in_ring, ring_area, ring_bbox, Vec2};
use crate::math;

#[derive(Clone, Debug, PartialEq)]
pub enum SamplingError {
    /// Hotspot list empty or total weight not positive.
    NoHotspots,
    InvalidWeight { value: f64 },
    InvalidPolygon,
    InvalidTruncatedNormal,
    /// Rejection sampling failed to land inside the polygon.
    RejectionOverrun,
}

impl fmt::Display for SamplingError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SamplingError::NoHotspots => write!(f, "no hotspots with positive weight to sample"),
            SamplingError::InvalidWeight { value } => {
                write!(f, "hotspot weight must be positive and finite, got {value}")
            }
            SamplingError::InvalidPolygon => {
                write!(f, "hotspot polygon needs >= 3 finite vertices and nonzero area")
            }
            SamplingError::InvalidTruncatedNormal => {
                write!(f, "truncated normal needs finite mean, positive variance and lower < upper")
            }
            SamplingError::RejectionOverrun => {
                write!(f, "polygon rejection sampling exceeded the iteration cap")
            }
        }
    }
}

impl core::error::Error for SamplingError {}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in bytes {
        h ^= u64::from(*b);
        h = h.wrapping_mul(0x0000_0100_0000_01B3);
    }
    h
}

/// Deterministic per-run random stream.
///
/// A ChaCha8 generator seeded by mixing the master seed, a stream label
/// (e.g. `"sro"` vs `"uav"`, so the two models never share draws), and the
/// run index through SplitMix64.
#[derive(Clone, Debug)]
pub struct RunRng {
    rng: ChaCha8Rng,
}

impl RunRng {
    pub fn new(master_seed: u64, stream_label: &str, run_index: u64) -> Self {
        let mut state = master_seed;
        let _ = splitmix64(&mut state);
        state ^= fnv1a64(stream_label.as_bytes());
        let _ = splitmix64(&mut state);
        state ^= run_index;
        let mut seed = [0u8; 32];
        for chunk in seed.chunks_exact_mut(8) {
            chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
        }
        RunRng { rng: ChaCha8Rng::from_seed(seed) }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform in `[0, 1)` with 53 random mantissa bits.
    pub fn uniform01(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `[lo, hi)`.
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform01()
    }

    /// Standard normal via Box-Muller; consumes exactly two `u64` draws, so
    /// stream accounting stays simple.
    pub fn standard_normal(&mut self) -> f64 {
        let u1 = 1.0 - self.uniform01(); // (0, 1]: keeps ln() finite
        let u2 = self.uniform01();
        math::sqrt(-2.0 * math::ln(u1)) * math::cos(2.0 * crate::geom::PI * u2)
    }
}

/// A drowning hotspot: polygon where incidents occur, with a sampling weight.
#[derive(Clone, Debug, PartialEq)]
pub struct Hotspot {
    pub id: String,
    pub polygon: Vec<Vec2>,
    pub weight: f64,
}

impl Hotspot {
    pub fn new(id: String, polygon: Vec<Vec2>, weight: f64) -> Result<Self, SamplingError> {
        if !(weight.is_finite() && weight > 0.0) {
            return Err(SamplingError::InvalidWeight { value: weight });
        }
        let ok = polygon.len() >= 3
            && polygon.iter().all(|p| p.is_finite())
            && ring_area(&polygon) != 0.0;
        if !ok {
            return Err(SamplingError::InvalidPolygon);
        }
        Ok(Hotspot { id, polygon, weight })
    }
}

/// Pick a hotspot with probability proportional to its weight.
pub fn sample_hotspot<'a>(hotspots: &'a [Hotspot], rng: &mut RunRng) -> Result<&'a Hotspot, SamplingError> {
    let total: f64 = hotspots.iter().map(|h| h.weight).sum();
    if hotspots.is_empty() || !(total > 0.0) {
        return Err(SamplingError::NoHotspots);
    }
    let mut u = rng.uniform01() * total;
    for h in hotspots {
        u -= h.weight;
        if u < 0.0 {
            return Ok(h);
        }
    }
    // Float round-off can leave u at exactly 0: fall back to the last entry.
    Ok(hotspots.last().expect("non-empty checked above"))
}

/// Uniform point inside a simple polygon via bounding-box rejection.
pub fn sample_point_in_polygon(polygon: &[Vec2], rng: &mut RunRng) -> Result<Vec2, SamplingError> {
    let (lo, hi) = ring_bbox(polygon).ok_or(SamplingError::InvalidPolygon)?;
    if polygon.len() < 3 || ring_area(polygon) == 0.0 {
        return Err(SamplingError::InvalidPolygon);
    }
    for _ in 0..1_000_000u32 {
        let p = Vec2::new(rng.uniform(lo.x, hi.x), rng.uniform(lo.y, hi.y));
        if point_in_ring(p, polygon) {
            return Ok(p);
        }
    }
    Err(SamplingError::RejectionOverrun)
}

/// Parameters of a normal distribution truncated to `[lower, upper]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TruncatedNormalParams {
    mean: f64,
    variance: f64,
    lower: f64,
    upper: f64,
}

impl TruncatedNormalParams {
    pub fn new(mean: f64, variance: f64, lower: f64, upper: f64) -> Result<Self, SamplingError> {
        let ok = mean.is_finite()
            && variance.is_finite()
            && variance > 0.0
            && lower.is_finite()
            && upper.is_finite()
            && lower < upper;
        if !ok {
            return Err(SamplingError::InvalidTruncatedNormal);
        }
        Ok(TruncatedNormalParams { mean, variance, lower, upper })
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn variance(&self) -> f64 {
        self.variance
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    pub fn upper(&self) -> f64 {
        self.upper
    }
}

/// Exact truncated-normal draw.
///
/// Plain rejection against the untruncated normal (acceptance is near 1 for
/// the prep-time parameters in practice); if the window turns out to be far
/// in a tail, falls back to uniform proposals on `[lower, upper]` thinned by
/// the density ratio, which is still exact but never degenerates.
pub fn sample_truncated_normal(params: &TruncatedNormalParams, rng: &mut RunRng) -> f64 {
    let sd = math::sqrt(params.variance);
    for _ in 0..10_000u32 {
        let z = params.mean + sd * rng.standard_normal();
        if z >= params.lower && z <= params.upper {
            return z;
        }
    }
    // Mode of the truncated density, for the acceptance-ratio envelope.
    let peak = params.mean.clamp(params.lower, params.upper);
    loop {
        let x = rng.uniform(params.lower, params.upper);
        let dx = x - params.mean;
        let dp = peak - params.mean;
        let log_ratio = (dp * dp - dx * dx) / (2.0 * params.variance);
        if rng.uniform01() < exp_neg(-log_ratio) {
            return x;
        }
    }
}

/// exp(-x) for x >= 0 without widening the float-math shim: split off the
/// integer part (powers of e^-1 by repeated squaring) and evaluate a short
/// Taylor series on the fractional remainder.
fn exp_neg(x: f64) -> f64 {
    debug_assert!(x >= 0.0);
    if x > 745.0 {
        return 0.0;
    }
    // exp(-x) = exp(-k) * exp(-f) with k integer, 0 <= f < 1.
    let k = math::floor(x);
    let f = x - k;
    // Taylor for exp(-f), f in [0,1): 17 terms keep the error below 1e-15.
    let mut term = 1.0;
    let mut sum = 1.0;
    for n in 1..=17 {
        term *= -f / n as f64;
        sum += term;
    }
    const INV_E: f64 = 0.36787944117144233; // exp(-1)
    let mut scale = 1.0;
    let mut base = INV_E;
    let mut ki = k as u64;
    while ki > 0 {
        if ki & 1 == 1 {
            scale *= base;
        }
        base *= base;
        ki >>= 1;
    }
    sum * scale
}

/// How long a crew takes from alarm to being ready to move.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PrepTimeModel {
    /// Always the same preparation time (seconds).
    Fixed(f64),
    /// Truncated-normal preparation time (seconds).
    TruncatedNormal(TruncatedNormalParams),
}

impl PrepTimeModel {
    pub fn draw(&self, rng: &mut RunRng) -> f64 {
        match self {
            PrepTimeModel::Fixed(t) => *t,
            PrepTimeModel::TruncatedNormal(p) => sample_truncated_normal(p, rng),
        }
    }
}
