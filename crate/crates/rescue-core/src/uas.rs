//! UAV fleet response model: wind-shifted ground tracks, camera detection,
//! and the per-run Monte-Carlo engine.
//!
//! Missions are planned once per hotspot (they do not depend on the random
//! draws), so a Monte-Carlo run reduces to sampling an incident and scanning
//! the pre-computed tracks for the first instant the target becomes visible.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::geom::{heading_angle, target_visible, CameraFootprint, GeomError, UavPose, Vec2};
use crate::mcs::{self, ResultSet, RunDetail, RunOutcome};
use crate::sampling::{sample_hotspot, sample_point_in_polygon, PrepTimeModel, RunRng, SamplingError};
use crate::scenario::Scenario;
use crate::search::{plan_mission, AirTrajectory, SearchError, SearchMethod, TimeGrid};

/// Wind acting on the fleet, resolved per time-grid instant.
#[derive(Clone, Debug, PartialEq)]
pub enum WindField {
    /// The same wind vector at every instant.
    Constant(Vec2),
    /// Per-instant wind vectors; must cover every instant of the longest
    /// trajectory it is applied to.
    Series(Vec<Vec2>),
}

impl WindField {
    pub fn at(&self, instant: usize) -> Option<Vec2> {
        match self {
            WindField::Constant(w) => Some(*w),
            WindField::Series(v) => v.get(instant).copied(),
        }
    }
}

/// Which velocity orients the camera: the commanded air vector (default) or
/// the wind-shifted ground vector.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum HeadingSource {
    #[default]
    AirVector,
    GroundVector,
}

#[derive(Clone, Debug, PartialEq)]
pub enum UasError {
    Search(SearchError),
    Geom(GeomError),
    Sampling(SamplingError),
    Mcs(mcs::McsError),
    WindSeriesTooShort { needed: usize, got: usize },
    UnknownUav { id: String },
    NoHotspots,
}

impl fmt::Display for UasError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UasError::Search(e) => write!(f, "{e}"),
            UasError::Geom(e) => write!(f, "{e}"),
            UasError::Sampling(e) => write!(f, "{e}"),
            UasError::Mcs(e) => write!(f, "{e}"),
            UasError::WindSeriesTooShort { needed, got } => {
                write!(f, "wind series covers {got} instants but the trajectory has {needed}")
            }
            UasError::UnknownUav { id } => write!(f, "assignment references unknown uav `{id}`"),
            UasError::NoHotspots => write!(f, "scenario has no hotspots"),
        }
    }
}

impl core::error::Error for UasError {}

impl From<SearchError> for UasError {
    fn from(e: SearchError) -> Self {
        UasError::Search(e)
    }
}

impl From<GeomError> for UasError {
    fn from(e: GeomError) -> Self {
        UasError::Geom(e)
    }
}

impl From<SamplingError> for UasError {
    fn from(e: SamplingError) -> Self {
        UasError::Sampling(e)
    }
}

impl From<mcs::McsError> for UasError {
    fn from(e: mcs::McsError) -> Self {
        UasError::Mcs(e)
    }
}

/// Where a UAV actually is (and looks) at every grid instant.
#[derive(Clone, Debug, PartialEq)]
pub struct GroundTrack {
    pub uav_id: String,
    pub grid: TimeGrid,
    pub positions: Vec<Vec2>,
    /// Camera heading per instant, clockwise from north.
    pub headings: Vec<f64>,
    pub footprint: CameraFootprint,
}

/// Integrate a commanded trajectory under wind into a ground track.
///
/// Positions follow `r[t+1] = r[t] + (air[t] + wind[t]) * dt`. The heading
/// at instant `t` comes from the selected velocity at `t`; a zero velocity
/// keeps the previous heading (initially due north), so hovering never
/// spins the camera.
pub fn ground_track(
    traj: &AirTrajectory,
    wind: &WindField,
    footprint: CameraFootprint,
    heading_source: HeadingSource,
) -> Result<GroundTrack, UasError> {
    let steps = traj.grid.steps;
    if let WindField::Series(series) = wind {
        if series.len() < steps {
            return Err(UasError::WindSeriesTooShort { needed: steps, got: series.len() });
        }
    }
    let mut positions = Vec::with_capacity(steps);
    let mut headings = Vec::with_capacity(steps);
    let mut pos = traj.start;
    let mut heading = 0.0; // default: due north
    for t in 0..steps {
        let w = wind.at(t).expect("series length checked above");
        let air = traj.air_vectors[t];
        let oriented = match heading_source {
            HeadingSource::AirVector => air,
            HeadingSource::GroundVector => air + w,
        };
        if let Ok(h) = heading_angle(oriented) {
            heading = h;
        }
        positions.push(pos);
        headings.push(heading);
        if t + 1 < steps {
            pos = pos + (air + w) * traj.grid.dt_s;
        }
    }
    Ok(GroundTrack { uav_id: traj.uav_id.clone(), grid: traj.grid, positions, headings, footprint })
}

/// First instant (as seconds from launch) at which `target` falls inside the
/// camera footprint, or `None` if it never does.
pub fn detection_time(track: &GroundTrack, target: Vec2) -> Option<f64> {
    for t in 0..track.grid.steps {
        let pose = UavPose { position: track.positions[t], heading_rad: track.headings[t] };
        if target_visible(pose, track.footprint, target) {
            return Some(t as f64 * track.grid.dt_s);
        }
    }
    None
}

/// Earliest detection across a fleet of tracks; ties keep the earliest track
/// in list order. Returns `(time_s, uav_id)`.
pub fn fleet_detection_time<'a>(tracks: &'a [GroundTrack], target: Vec2) -> Option<(f64, &'a str)> {
    let mut best: Option<(f64, &str)> = None;
    for track in tracks {
        if let Some(t) = detection_time(track, target) {
            if best.map_or(true, |(bt, _)| t < bt) {
                best = Some((t, &track.uav_id));
            }
        }
    }
    best
}

/// Pre-planned Monte-Carlo engine for the UAV model.
///
/// Built once per `(scenario, method)`: plans every hotspot's mission,
/// integrates ground tracks, and is then immutable — `run` is `&self` and
/// safe to call from many threads.
#[derive(Clone, Debug)]
pub struct UasEngine {
    hotspots: Vec<crate::sampling::Hotspot>,
    /// Ground tracks serving each hotspot (by hotspot index); empty when no
    /// feasible aircraft serves it (the hotspot is untraceable).
    tracks: Vec<Vec<GroundTrack>>,
    search_delay: Option<PrepTimeModel>,
    hotspot_index: BTreeMap<String, usize>,
}

impl UasEngine {
    pub fn build(scenario: &Scenario, method: SearchMethod) -> Result<Self, UasError> {
        if scenario.hotspots.is_empty() {
            return Err(UasError::NoHotspots);
        }
        let params = &scenario.params;
        let mut tracks: Vec<Vec<GroundTrack>> = Vec::with_capacity(scenario.hotspots.len());
        for hotspot in &scenario.hotspots {
            let mut per_hotspot: Vec<GroundTrack> = Vec::new();
            if method == SearchMethod::Imported {
                for m in scenario.imported.iter().filter(|m| m.hotspot_id == hotspot.id) {
                    let uav = scenario
                        .uavs
                        .iter()
                        .find(|u| u.id == m.uav_id)
                        .ok_or_else(|| UasError::UnknownUav { id: m.uav_id.clone() })?;
                    // Battery exclusion: plans the aircraft cannot finish are
                    // dropped rather than flown partially.
                    if m.trajectory.duration_s() > uav.endurance_s + 1e-9 {
                        continue;
                    }
                    let fp = uav.footprint()?;
                    per_hotspot.push(ground_track(&m.trajectory, &params.wind, fp, params.heading_source)?);
                }
            } else {
                let assigned = scenario.assignments.get(&hotspot.id);
                let mut chosen: Option<(f64, &crate::search::UavSpec, crate::search::Mission)> = None;
                for uav in &scenario.uavs {
                    if let Some(want) = assigned {
                        if &uav.id != want {
                            continue;
                        }
                    }
                    let mission =
                        plan_mission(uav, &hotspot.polygon, method, params.dt_s, params.sweep_overlap)?;
                    if !mission.within_endurance(uav.endurance_s) {
                        continue;
                    }
                    // Nearest feasible hangar wins; UAV list order (and thus
                    // id order as validated upstream) breaks ties.
                    let better = chosen
                        .as_ref()
                        .map_or(true, |(best, _, _)| mission.approach_s < *best);
                    if better {
                        chosen = Some((mission.approach_s, uav, mission));
                    }
                }
                if let Some(want) = assigned {
                    if !scenario.uavs.iter().any(|u| &u.id == want) {
                        return Err(UasError::UnknownUav { id: want.clone() });
                    }
                }
                if let Some((_, uav, mission)) = chosen {
                    let fp = uav.footprint()?;
                    per_hotspot.push(ground_track(
                        &mission.trajectory,
                        &params.wind,
                        fp,
                        params.heading_source,
                    )?);
                }
            }
            tracks.push(per_hotspot);
        }
        let hotspot_index = scenario
            .hotspots
            .iter()
            .enumerate()
            .map(|(i, h)| (h.id.clone(), i))
            .collect();
        Ok(UasEngine {
            hotspots: scenario.hotspots.clone(),
            tracks,
            search_delay: params.search_delay,
            hotspot_index,
        })
    }

    /// Evaluate one Monte-Carlo run.
    ///
    /// Draw order (fixed, per-run stream): hotspot, target point, then the
    /// launch delay if one is configured.
    ///
    /// Panics if polygon rejection sampling overruns its cap, which scenario
    /// validation makes practically impossible.
    pub fn run(&self, master_seed: u64, run_index: u64) -> RunOutcome {
        let mut rng = RunRng::new(master_seed, "uav", run_index);
        let hotspot = sample_hotspot(&self.hotspots, &mut rng).expect("hotspots checked at build");
        let target =
            sample_point_in_polygon(&hotspot.polygon, &mut rng).expect("hotspot polygons are sane");
        let delay = match &self.search_delay {
            Some(model) => model.draw(&mut rng),
            None => 0.0,
        };
        let idx = self.hotspot_index[&hotspot.id];
        let found = fleet_detection_time(&self.tracks[idx], target);
        RunOutcome {
            run_index,
            target,
            time_s: found.map(|(t, _)| t + delay),
            detail: RunDetail::Uas {
                hotspot_id: hotspot.id.clone(),
                uav_id: found.map(|(_, id)| String::from(id)),
            },
        }
    }
}

/// Run the UAV model `n_runs` times (serially) and aggregate.
pub fn simulate_uas(
    scenario: &Scenario,
    method: SearchMethod,
    n_runs: u64,
    master_seed: u64,
    bin_width_s: f64,
) -> Result<(Vec<RunOutcome>, ResultSet), UasError> {
    let engine = UasEngine::build(scenario, method)?;
    let outcomes = mcs::run_mcs(|i| engine.run(master_seed, i), n_runs);
    let results = mcs::summarize(&outcomes, bin_width_s)?;
    Ok((outcomes, results))
}
