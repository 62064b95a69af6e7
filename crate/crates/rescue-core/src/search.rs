//! UAV search-mission planning: time-discretised air trajectories, the
//! approach leg to a hotspot, and the parallel-sweep and expanding-square
//! coverage patterns.
//!
//! Trajectories are sequences of commanded air vectors on a fixed time grid.
//! A trajectory with `steps` sampling instants carries exactly `steps` air
//! vectors; the vector at the final instant moves nothing (no step follows)
//! but defines the camera heading there. Plans are laid out in the air
//! frame — wind shifts the resulting ground track in [`crate::uas`].

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::fmt::Write as _;

use crate::geom::{
    closest_point_on_segment, ring_bbox, CameraFootprint, CameraSpec, GeomError, Vec2,
};
use crate::math;

#[derive(Clone, Debug, PartialEq)]
pub enum SearchError {
    Geom(GeomError),
    InvalidSpeed { value: f64 },
    InvalidEndurance { value: f64 },
    InvalidTimeStep { value: f64 },
    /// Sweep overlap fraction must lie in `[0, 1)`.
    InvalidOverlap { value: f64 },
    InvalidMaxRadius { value: f64 },
    EmptyArea,
    EmptyTrajectory,
    NonFiniteInput,
    /// `plan_mission` only generates sweep/square patterns; imported
    /// trajectories are resolved by the caller.
    NotGenerative,
    Csv { line: usize, message: String },
}

impl fmt::Display for SearchError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SearchError::Geom(e) => write!(f, "{e}"),
            SearchError::InvalidSpeed { value } => {
                write!(f, "airspeed must be positive and finite, got {value}")
            }
            SearchError::InvalidEndurance { value } => {
                write!(f, "endurance must be positive and finite, got {value}")
            }
            SearchError::InvalidTimeStep { value } => {
                write!(f, "time step must be positive and finite, got {value}")
            }
            SearchError::InvalidOverlap { value } => {
                write!(f, "sweep overlap must lie in [0, 1), got {value}")
            }
            SearchError::InvalidMaxRadius { value } => {
                write!(f, "max radius must be finite, got {value}")
            }
            SearchError::EmptyArea => write!(f, "search area polygon needs at least 3 vertices"),
            SearchError::EmptyTrajectory => write!(f, "trajectory needs at least one instant"),
            SearchError::NonFiniteInput => write!(f, "trajectory inputs must be finite"),
            SearchError::NotGenerative => {
                write!(f, "imported trajectories cannot be planned, only loaded")
            }
            SearchError::Csv { line, message } => write!(f, "trajectory csv line {line}: {message}"),
        }
    }
}

impl core::error::Error for SearchError {}

impl From<GeomError> for SearchError {
    fn from(e: GeomError) -> Self {
        SearchError::Geom(e)
    }
}

/// Uniform sampling grid: `steps` instants spaced `dt_s` seconds apart.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TimeGrid {
    pub dt_s: f64,
    pub steps: usize,
}

impl TimeGrid {
    pub fn new(dt_s: f64, steps: usize) -> Result<Self, SearchError> {
        if !(dt_s.is_finite() && dt_s > 0.0) {
            return Err(SearchError::InvalidTimeStep { value: dt_s });
        }
        if steps == 0 {
            return Err(SearchError::EmptyTrajectory);
        }
        Ok(TimeGrid { dt_s, steps })
    }

    /// Flight duration: the span between first and last instant.
    pub fn duration_s(&self) -> f64 {
        (self.steps - 1) as f64 * self.dt_s
    }
}

/// Commanded air-frame motion of one UAV on a time grid.
#[derive(Clone, Debug, PartialEq)]
pub struct AirTrajectory {
    pub uav_id: String,
    pub grid: TimeGrid,
    pub start: Vec2,
    /// One commanded velocity (m/s) per instant; `air_vectors[t]` moves the
    /// UAV between instants `t` and `t+1`, the final entry only sets heading.
    pub air_vectors: Vec<Vec2>,
}

impl AirTrajectory {
    pub fn new(
        uav_id: String,
        dt_s: f64,
        start: Vec2,
        air_vectors: Vec<Vec2>,
    ) -> Result<Self, SearchError> {
        let grid = TimeGrid::new(dt_s, air_vectors.len())?;
        if !start.is_finite() || air_vectors.iter().any(|v| !v.is_finite()) {
            return Err(SearchError::NonFiniteInput);
        }
        Ok(AirTrajectory { uav_id, grid, start, air_vectors })
    }

    pub fn duration_s(&self) -> f64 {
        self.grid.duration_s()
    }
}

/// One UAV with its flight and sensing envelope.
#[derive(Clone, Debug, PartialEq)]
pub struct UavSpec {
    pub id: String,
    pub hangar: Vec2,
    pub max_airspeed_ms: f64,
    pub altitude_m: f64,
    pub camera: CameraSpec,
    pub endurance_s: f64,
}

impl UavSpec {
    pub fn new(
        id: String,
        hangar: Vec2,
        max_airspeed_ms: f64,
        altitude_m: f64,
        camera: CameraSpec,
        endurance_s: f64,
    ) -> Result<Self, SearchError> {
        if !(max_airspeed_ms.is_finite() && max_airspeed_ms > 0.0) {
            return Err(SearchError::InvalidSpeed { value: max_airspeed_ms });
        }
        if !(endurance_s.is_finite() && endurance_s > 0.0) {
            return Err(SearchError::InvalidEndurance { value: endurance_s });
        }
        if !hangar.is_finite() {
            return Err(SearchError::NonFiniteInput);
        }
        // Surfaces a bad altitude here rather than at planning time.
        crate::geom::compute_footprint(camera, altitude_m)?;
        Ok(UavSpec { id, hangar, max_airspeed_ms, altitude_m, camera, endurance_s })
    }

    pub fn footprint(&self) -> Result<CameraFootprint, GeomError> {
        crate::geom::compute_footprint(self.camera, self.altitude_m)
    }
}

/// Search pattern flown over a hotspot.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMethod {
    ParallelSweep,
    ExpandingSquare,
    /// Trajectory supplied as a CSV file instead of being generated.
    Imported,
}

impl SearchMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            SearchMethod::ParallelSweep => "parallel_sweep",
            SearchMethod::ExpandingSquare => "expanding_square",
            SearchMethod::Imported => "imported",
        }
    }

    pub fn parse(s: &str) -> Option<SearchMethod> {
        match s {
            "parallel_sweep" => Some(SearchMethod::ParallelSweep),
            "expanding_square" => Some(SearchMethod::ExpandingSquare),
            "imported" => Some(SearchMethod::Imported),
            _ => None,
        }
    }
}

/// Point of `area`'s boundary closest to `p`; ties keep the earliest edge in
/// ring order.
pub fn closest_boundary_point(area: &[Vec2], p: Vec2) -> Result<Vec2, SearchError> {
    if area.len() < 3 {
        return Err(SearchError::EmptyArea);
    }
    let n = area.len();
    let mut best = (f64::INFINITY, Vec2::ZERO);
    for i in 0..n {
        let q = closest_point_on_segment(p, area[i], area[(i + 1) % n]);
        let d = p.dist(q);
        if d < best.0 {
            best = (d, q);
        }
    }
    Ok(best.1)
}

/// Fly a waypoint route at constant speed, discretised onto a `dt_s` grid.
///
/// Each leg is flown at `speed_ms` in whole steps plus, when the leg length
/// is not a multiple of `speed * dt`, one slower partial step that lands
/// exactly on the waypoint. Waypoint arrival is therefore exact and the
/// discretisation of a concatenated route equals the concatenation of the
/// discretised parts.
pub fn discretize_route(
    uav_id: &str,
    waypoints: &[Vec2],
    speed_ms: f64,
    dt_s: f64,
) -> Result<AirTrajectory, SearchError> {
    if !(speed_ms.is_finite() && speed_ms > 0.0) {
        return Err(SearchError::InvalidSpeed { value: speed_ms });
    }
    if !(dt_s.is_finite() && dt_s > 0.0) {
        return Err(SearchError::InvalidTimeStep { value: dt_s });
    }
    let (first, rest) = waypoints.split_first().ok_or(SearchError::EmptyTrajectory)?;
    if waypoints.iter().any(|p| !p.is_finite()) {
        return Err(SearchError::NonFiniteInput);
    }
    let mut vectors: Vec<Vec2> = Vec::new();
    let mut cur = *first;
    let step_len = speed_ms * dt_s;
    for &next in rest {
        let leg = next - cur;
        let len = leg.norm();
        if len <= 1e-9 {
            cur = next;
            continue;
        }
        let dir = leg * (1.0 / len);
        let full = math::floor(len / step_len) as usize;
        for _ in 0..full {
            vectors.push(dir * speed_ms);
        }
        let rem = len - full as f64 * step_len;
        if rem > 1e-9 {
            vectors.push(dir * (rem / dt_s));
        }
        cur = next;
    }
    // Final-instant vector: keeps the camera heading of the last movement
    // (zero only for a pure hover, where heading falls back to north).
    let trailing = vectors.last().copied().unwrap_or(Vec2::ZERO);
    vectors.push(trailing);
    AirTrajectory::new(uav_id.to_string(), dt_s, *first, vectors)
}

/// Transit leg from the hangar to the closest point of the area boundary.
/// Returns the route `[hangar, entry]` and the entry point itself.
pub fn approach_leg(hangar: Vec2, area: &[Vec2]) -> Result<(Vec<Vec2>, Vec2), SearchError> {
    let entry = closest_boundary_point(area, hangar)?;
    Ok((vec![hangar, entry], entry))
}

fn chebyshev(v: Vec2) -> f64 {
    math::abs(v.x).max(math::abs(v.y))
}

/// Axis helper: lanes run along x when the bounding box is wider than tall.
#[derive(Clone, Copy)]
struct Axes {
    along_x: bool,
}

impl Axes {
    fn track(&self, p: Vec2) -> f64 {
        if self.along_x {
            p.x
        } else {
            p.y
        }
    }

    fn across(&self, p: Vec2) -> f64 {
        if self.along_x {
            p.y
        } else {
            p.x
        }
    }

    fn point(&self, track: f64, across: f64) -> Vec2 {
        if self.along_x {
            Vec2::new(track, across)
        } else {
            Vec2::new(across, track)
        }
    }
}

/// Clip a polygon to the half-plane `value(p) <= 0` (Sutherland-Hodgman).
fn clip_halfplane(poly: &[Vec2], value: impl Fn(Vec2) -> f64) -> Vec<Vec2> {
    let mut out = Vec::with_capacity(poly.len() + 2);
    let n = poly.len();
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        let (va, vb) = (value(a), value(b));
        if va <= 0.0 {
            out.push(a);
        }
        if (va < 0.0 && vb > 0.0) || (va > 0.0 && vb < 0.0) {
            let t = va / (va - vb);
            out.push(a + (b - a) * t);
        }
    }
    out
}

/// Boustrophedon coverage of a polygon with parallel lanes.
///
/// Lanes run parallel to the longer bounding-box side, spaced
/// `2 * half_a * (1 - overlap)` across-track so adjacent footprints abut (or
/// overlap). Each lane spans the polygon's extent within that lane's covered
/// band, extended by `half_b` at both ends so the footprint clears the area
/// edge regardless of sampling phase. The serpentine starts at whichever
/// lane corner lies closest to `entry`; an area that fits one footprint
/// collapses to a hover at the bounding-box centre.
pub fn parallel_sweep(
    area: &[Vec2],
    footprint: CameraFootprint,
    speed_ms: f64,
    dt_s: f64,
    entry: Vec2,
    overlap: f64,
    uav_id: &str,
) -> Result<AirTrajectory, SearchError> {
    let waypoints = sweep_waypoints(area, footprint, entry, overlap)?;
    discretize_route(uav_id, &waypoints, speed_ms, dt_s)
}

fn sweep_waypoints(
    area: &[Vec2],
    footprint: CameraFootprint,
    entry: Vec2,
    overlap: f64,
) -> Result<Vec<Vec2>, SearchError> {
    if area.len() < 3 {
        return Err(SearchError::EmptyArea);
    }
    if !(overlap.is_finite() && (0.0..1.0).contains(&overlap)) {
        return Err(SearchError::InvalidOverlap { value: overlap });
    }
    let (half_a, half_b) = (footprint.half_a_m, footprint.half_b_m);
    if !(half_a > 0.0 && half_b > 0.0 && half_a.is_finite() && half_b.is_finite()) {
        return Err(SearchError::Geom(GeomError::NonPositiveAltitude { value_m: 0.0 }));
    }
    let (lo, hi) = ring_bbox(area).ok_or(SearchError::EmptyArea)?;
    let span = hi - lo;
    // Whole area visible from one hover point?
    if span.x <= 2.0 * half_a && span.y <= 2.0 * half_b
        || span.y <= 2.0 * half_a && span.x <= 2.0 * half_b
    {
        let centre = lo + span * 0.5;
        return Ok(vec![entry, centre]);
    }
    let axes = Axes { along_x: span.x >= span.y };
    let across_min = axes.across(lo);
    let across_span = axes.across(hi) - across_min;
    let spacing = 2.0 * half_a * (1.0 - overlap);
    let k = (math::ceil(across_span / spacing) as usize).max(1);

    struct Lane {
        across: f64,
        t_lo: f64,
        t_hi: f64,
    }
    let mut lanes: Vec<Lane> = Vec::with_capacity(k);
    for i in 0..k {
        let across = across_min + half_a + i as f64 * spacing;
        let band_lo = across - half_a;
        let band_hi = across + half_a;
        let clipped = clip_halfplane(area, |p| band_lo - axes.across(p));
        let clipped = clip_halfplane(&clipped, |p| axes.across(p) - band_hi);
        if clipped.is_empty() {
            continue; // band misses the polygon (possible for concave areas)
        }
        let mut t_lo = f64::INFINITY;
        let mut t_hi = f64::NEG_INFINITY;
        for p in &clipped {
            t_lo = t_lo.min(axes.track(*p));
            t_hi = t_hi.max(axes.track(*p));
        }
        lanes.push(Lane { across, t_lo: t_lo - half_b, t_hi: t_hi + half_b });
    }
    if lanes.is_empty() {
        return Err(SearchError::EmptyArea);
    }

    // Four serpentine starts: first or last lane, low or high end. Pick the
    // corner closest to the entry point; ties keep the earliest candidate.
    let lane_end = |lane: &Lane, low: bool| if low { lane.t_lo } else { lane.t_hi };
    let mut best: Option<(f64, bool, bool)> = None; // (dist, reverse_lanes, start_low)
    for (reverse, start_low) in
        [(false, true), (false, false), (true, true), (true, false)]
    {
        let lane = if reverse { lanes.last() } else { lanes.first() }.expect("non-empty");
        let corner = axes.point(lane_end(lane, start_low), lane.across);
        let d = entry.dist(corner);
        if best.map_or(true, |(bd, _, _)| d < bd) {
            best = Some((d, reverse, start_low));
        }
    }
    let (_, reverse, mut enter_low) = best.expect("candidates always exist");
    let order: Vec<usize> = if reverse {
        (0..lanes.len()).rev().collect()
    } else {
        (0..lanes.len()).collect()
    };

    let mut waypoints = vec![entry];
    for li in order {
        let lane = &lanes[li];
        waypoints.push(axes.point(lane_end(lane, enter_low), lane.across));
        waypoints.push(axes.point(lane_end(lane, !enter_low), lane.across));
        enter_low = !enter_low;
    }
    Ok(waypoints)
}

/// Expanding-square pattern around `center`.
///
/// Leg lengths grow as `s, s, 2s, 2s, 3s, 3s, ...` with
/// `s = 2 * min(half_a, half_b)`, turning clockwise from an initial
/// northbound leg; consecutive passes are exactly one footprint apart. The
/// spiral stops before any waypoint would exceed `max_radius_m` (Chebyshev
/// distance from the centre); a radius smaller than `s` degenerates to a
/// hover at the centre.
pub fn expanding_square(
    center: Vec2,
    footprint: CameraFootprint,
    speed_ms: f64,
    dt_s: f64,
    max_radius_m: f64,
    uav_id: &str,
) -> Result<AirTrajectory, SearchError> {
    if !max_radius_m.is_finite() {
        return Err(SearchError::InvalidMaxRadius { value: max_radius_m });
    }
    let s = 2.0 * footprint.half_a_m.min(footprint.half_b_m);
    if !(s > 0.0 && s.is_finite()) {
        return Err(SearchError::Geom(GeomError::NonPositiveAltitude { value_m: 0.0 }));
    }
    const DIRS: [Vec2; 4] = [
        Vec2 { x: 0.0, y: 1.0 },
        Vec2 { x: 1.0, y: 0.0 },
        Vec2 { x: 0.0, y: -1.0 },
        Vec2 { x: -1.0, y: 0.0 },
    ];
    let mut waypoints = vec![center];
    let mut cur = center;
    let mut leg: usize = 0;
    loop {
        let len = (leg / 2 + 1) as f64 * s;
        let next = cur + DIRS[leg % 4] * len;
        if chebyshev(next - center) > max_radius_m + 1e-9 {
            break;
        }
        waypoints.push(next);
        cur = next;
        leg += 1;
    }
    discretize_route(uav_id, &waypoints, speed_ms, dt_s)
}

/// A planned flight: transit plus search, on one continuous time grid.
#[derive(Clone, Debug, PartialEq)]
pub struct Mission {
    pub trajectory: AirTrajectory,
    pub entry: Vec2,
    pub approach_s: f64,
    pub search_s: f64,
}

impl Mission {
    pub fn total_s(&self) -> f64 {
        self.trajectory.duration_s()
    }

    /// A mission is flyable when the whole flight fits in the endurance.
    pub fn within_endurance(&self, endurance_s: f64) -> bool {
        self.total_s() <= endurance_s + 1e-9
    }
}

/// Plan the full mission of `uav` over `area`: approach to the closest
/// boundary point, then the selected search pattern.
pub fn plan_mission(
    uav: &UavSpec,
    area: &[Vec2],
    method: SearchMethod,
    dt_s: f64,
    overlap: f64,
) -> Result<Mission, SearchError> {
    let footprint = uav.footprint()?;
    let (approach, entry) = approach_leg(uav.hangar, area)?;
    let search: Vec<Vec2> = match method {
        SearchMethod::ParallelSweep => sweep_waypoints(area, footprint, entry, overlap)?,
        SearchMethod::ExpandingSquare => {
            let (lo, hi) = ring_bbox(area).ok_or(SearchError::EmptyArea)?;
            let half = (hi - lo) * 0.5;
            let centre = lo + half;
            let s = 2.0 * footprint.half_a_m.min(footprint.half_b_m);
            // Swing wide enough that the spiral's covered square contains
            // the whole bounding box, with one leg increment of margin.
            let radius = chebyshev(half) + s;
            let spiral =
                expanding_square(centre, footprint, uav.max_airspeed_ms, dt_s, radius, &uav.id)?;
            // Re-derive the waypoints: entry connector plus spiral route.
            let mut wp = vec![entry];
            wp.push(centre);
            let mut pos = centre;
            for v in &spiral.air_vectors[..spiral.air_vectors.len() - 1] {
                pos = pos + *v * dt_s;
                wp.push(pos);
            }
            wp
        }
        SearchMethod::Imported => return Err(SearchError::NotGenerative),
    };
    let leg_a = discretize_route(&uav.id, &approach, uav.max_airspeed_ms, dt_s)?;
    let leg_s = discretize_route(&uav.id, &search, uav.max_airspeed_ms, dt_s)?;
    let mut route = approach;
    route.extend_from_slice(&search);
    let trajectory = discretize_route(&uav.id, &route, uav.max_airspeed_ms, dt_s)?;
    Ok(Mission {
        trajectory,
        entry,
        approach_s: leg_a.duration_s(),
        search_s: leg_s.duration_s(),
    })
}

/// Header of the trajectory interchange format.
pub const TRAJECTORY_CSV_HEADER: &str = "uav_id,step,ix_mps,iy_mps";

/// Serialise a trajectory as CSV: one row per instant, LF line endings.
pub fn trajectory_to_csv(traj: &AirTrajectory) -> String {
    let mut out = String::new();
    out.push_str(TRAJECTORY_CSV_HEADER);
    out.push('\n');
    for (step, v) in traj.air_vectors.iter().enumerate() {
        let _ = writeln!(out, "{},{},{},{}", traj.uav_id, step, v.x, v.y);
    }
    out
}

/// Parse the CSV trajectory format. The time step and start position are not
/// part of the file and must be supplied by the caller (scenario sidecar).
pub fn parse_trajectory_csv(
    text: &str,
    dt_s: f64,
    start: Vec2,
) -> Result<AirTrajectory, SearchError> {
    let err = |line: usize, message: String| SearchError::Csv { line, message };
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| err(1, "missing header".to_string()))?;
    if header.trim_end_matches('\r') != TRAJECTORY_CSV_HEADER {
        return Err(err(1, format!("header must be `{TRAJECTORY_CSV_HEADER}`")));
    }
    let mut uav_id: Option<String> = None;
    let mut vectors: Vec<Vec2> = Vec::new();
    for (idx, raw) in lines {
        let line_no = idx + 1;
        let line = raw.trim_end_matches('\r');
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 4 {
            return Err(err(line_no, format!("expected 4 fields, got {}", fields.len())));
        }
        match &uav_id {
            None => uav_id = Some(fields[0].to_string()),
            Some(id) if id != fields[0] => {
                return Err(err(line_no, format!("uav_id changed from `{id}` to `{}`", fields[0])));
            }
            Some(_) => {}
        }
        let step: usize = fields[1]
            .parse()
            .map_err(|_| err(line_no, format!("bad step `{}`", fields[1])))?;
        if step != vectors.len() {
            return Err(err(line_no, format!("expected step {}, got {step}", vectors.len())));
        }
        let ix: f64 = fields[2]
            .parse()
            .map_err(|_| err(line_no, format!("bad ix_mps `{}`", fields[2])))?;
        let iy: f64 = fields[3]
            .parse()
            .map_err(|_| err(line_no, format!("bad iy_mps `{}`", fields[3])))?;
        if !(ix.is_finite() && iy.is_finite()) {
            return Err(err(line_no, "air vector must be finite".to_string()));
        }
        vectors.push(Vec2::new(ix, iy));
    }
    let uav_id = uav_id.ok_or_else(|| err(2, "no data rows".to_string()))?;
    AirTrajectory::new(uav_id, dt_s, start, vectors)
}
