//! Scenario files: JSON schema, validation, projection, and conversion into
//! the in-memory [`Scenario`] model.
//!
//! A scenario is one self-contained JSON document embedding the water
//! polygons, hotspots, stations, road graph, UAV fleet, and parameters.
//! Coordinates are planar metres (`"crs": "planar_meters"`) or decimal
//! degrees (`"crs": "lonlat"` plus an `origin`), in which case loading
//! applies a local equirectangular projection. Validation is exhaustive:
//! every violation found is reported, not just the first.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use rescue_core::geom::{point_in_ring, segments_properly_cross, CameraSpec, Vec2};
use rescue_core::roadnet::{EdgeSpec, RoadGraph};
use rescue_core::sampling::{Hotspot, PrepTimeModel, TruncatedNormalParams};
use rescue_core::scenario::{ImportedMission, Scenario, SimParams, Station, StationSet};
use rescue_core::search::{parse_trajectory_csv, SearchMethod, UavSpec};
use rescue_core::uas::{HeadingSource, WindField};
use rescue_core::waterway::WaterPolygon;

/// Mean Earth radius (metres) for the equirectangular projection.
pub const EARTH_RADIUS_M: f64 = 6_371_008.8;

/// The one schema revision this build reads and writes.
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("cannot read {path}: {message}")]
    Io { path: PathBuf, message: String },
    #[error("{path}: invalid scenario JSON at {pointer}: {message}")]
    Parse { path: PathBuf, pointer: String, message: String },
    /// Semantic validation failed; every violation is listed.
    #[error("{}", messages.join("\n"))]
    Validation { messages: Vec<String> },
}

fn validation(messages: Vec<String>) -> LoadError {
    LoadError::Validation { messages }
}

// ---------------------------------------------------------------------------
// File model (serde). Field order here fixes the JSON key order on output.
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub format_version: u32,
    pub name: String,
    /// `"planar_meters"` or `"lonlat"`.
    pub crs: String,
    /// Projection origin; required when `crs` is `lonlat`, forbidden otherwise.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub origin: Option<OriginSpec>,
    pub water: Vec<PolygonSpec>,
    pub hotspots: Vec<HotspotSpec>,
    pub stations: StationsSpec,
    pub road_graph: RoadGraphSpec,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub uavs: Vec<UavFileSpec>,
    /// hotspot id → uav id; hotspots absent here fall back to the nearest
    /// feasible UAV.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub assignments: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub imported_trajectories: Vec<ImportedSpec>,
    #[serde(default)]
    pub parameters: ParametersSpec,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OriginSpec {
    pub lon_deg: f64,
    pub lat_deg: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolygonSpec {
    /// Outer shoreline ring, `[x, y]` pairs (or `[lon, lat]` under `lonlat`).
    pub outer: Vec<[f64; 2]>,
    /// Island rings.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub holes: Vec<Vec<[f64; 2]>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HotspotSpec {
    pub id: String,
    pub polygon: Vec<[f64; 2]>,
    /// Relative incident frequency; zero-weight hotspots are kept in the
    /// file but never sampled.
    pub weight: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StationsSpec {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub fire: Vec<StationSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub rescue: Vec<StationSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub access: Vec<StationSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StationSpec {
    pub id: String,
    pub position: [f64; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RoadGraphSpec {
    pub nodes: Vec<NodeSpec>,
    pub edges: Vec<EdgeFileSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeSpec {
    pub id: String,
    pub position: [f64; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeFileSpec {
    pub from: String,
    pub to: String,
    pub length_m: f64,
    pub speed_kmh: f64,
    /// Two-way road (the default); set false for one-way segments.
    #[serde(default = "default_true")]
    pub bidirectional: bool,
}

fn default_true() -> bool {
    true
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UavFileSpec {
    pub id: String,
    pub hangar: [f64; 2],
    pub max_airspeed_ms: f64,
    pub altitude_m: f64,
    /// Across-track camera half-aperture, radians.
    pub alpha_rad: f64,
    /// Along-track camera half-aperture, radians.
    pub beta_rad: f64,
    pub endurance_s: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ImportedSpec {
    pub uav_id: String,
    pub hotspot_id: String,
    /// Trajectory CSV (`uav_id,step,ix_mps,iy_mps`), relative to the
    /// scenario file.
    pub file: String,
    pub dt_s: f64,
    /// Position at step 0, same CRS as the scenario.
    pub start: [f64; 2],
}

/// Preparation-time model: either `fixed_s`, or a truncated normal given by
/// `mean_s`, `lower_s`, `upper_s` and exactly one of `variance_s2` /
/// `stddev_s`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PrepSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixed_s: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mean_s: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variance_s2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stddev_s: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lower_s: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub upper_s: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParametersSpec {
    #[serde(default = "d_speed_factor")]
    pub speed_factor: f64,
    #[serde(default = "d_walk_speed")]
    pub walk_speed_kmh: f64,
    #[serde(default = "d_boat_speed")]
    pub boat_speed_kmh: f64,
    #[serde(default = "d_prep_fire")]
    pub prep_fire: PrepSpec,
    #[serde(default = "d_prep_rescue")]
    pub prep_rescue: PrepSpec,
    #[serde(default = "d_dt")]
    pub dt_s: f64,
    #[serde(default)]
    pub sweep_overlap: f64,
    /// Optional delay between alarm and UAV launch.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub search_delay: Option<PrepSpec>,
    /// Constant wind (m/s, east/north components).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wind_mps: Option<[f64; 2]>,
    /// `"air"` (default) or `"ground"`: which velocity orients the camera.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub heading_source: Option<String>,
}

fn d_speed_factor() -> f64 {
    1.3
}
fn d_walk_speed() -> f64 {
    10.0
}
fn d_boat_speed() -> f64 {
    70.0
}
fn d_dt() -> f64 {
    0.5
}
fn d_prep_fire() -> PrepSpec {
    PrepSpec {
        fixed_s: None,
        mean_s: Some(120.0),
        variance_s2: Some(30.0),
        stddev_s: None,
        lower_s: Some(0.0),
        upper_s: Some(240.0),
    }
}
fn d_prep_rescue() -> PrepSpec {
    PrepSpec { fixed_s: Some(0.0), ..Default::default() }
}

impl Default for ParametersSpec {
    fn default() -> Self {
        ParametersSpec {
            speed_factor: d_speed_factor(),
            walk_speed_kmh: d_walk_speed(),
            boat_speed_kmh: d_boat_speed(),
            prep_fire: d_prep_fire(),
            prep_rescue: d_prep_rescue(),
            dt_s: d_dt(),
            sweep_overlap: 0.0,
            search_delay: None,
            wind_mps: None,
            heading_source: None,
        }
    }
}

// ---------------------------------------------------------------------------
// Loading
// ---------------------------------------------------------------------------

/// Read, parse, validate, and convert a scenario file. Returns the in-memory
/// model ready for either simulation mode.
pub fn load_scenario(path: &Path) -> Result<Scenario, LoadError> {
    let text = fs::read_to_string(path).map_err(|e| LoadError::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    let base_dir = path.parent().unwrap_or(Path::new("."));
    let file = parse_scenario_str(&text, path)?;
    build_scenario(&file, base_dir)
}

/// Parse the JSON document (reporting the JSON-pointer-style path of any
/// schema violation) without semantic validation.
pub fn parse_scenario_str(text: &str, path: &Path) -> Result<ScenarioFile, LoadError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| LoadError::Parse {
        path: path.to_path_buf(),
        pointer: e.path().to_string(),
        message: e.inner().to_string(),
    })
}

struct Checker {
    messages: Vec<String>,
}

impl Checker {
    fn new() -> Self {
        Checker { messages: Vec::new() }
    }

    fn fail(&mut self, msg: String) {
        self.messages.push(msg);
    }

    fn require(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        if !ok {
            self.messages.push(msg());
        }
    }

    fn finish(self) -> Result<(), LoadError> {
        if self.messages.is_empty() {
            Ok(())
        } else {
            Err(validation(self.messages))
        }
    }
}

fn vec2(p: [f64; 2]) -> Vec2 {
    Vec2::new(p[0], p[1])
}

fn ring(points: &[[f64; 2]]) -> Vec<Vec2> {
    points.iter().copied().map(vec2).collect()
}

fn dup_check(checker: &mut Checker, kind: &str, ids: impl Iterator<Item = String>) {
    let mut seen = BTreeSet::new();
    for id in ids {
        if !seen.insert(id.clone()) {
            checker.fail(format!("duplicate {kind} id {id:?}"));
        }
    }
}

fn prep_model(checker: &mut Checker, field: &str, spec: &PrepSpec) -> Option<PrepTimeModel> {
    let tn_fields =
        [spec.mean_s, spec.variance_s2, spec.stddev_s, spec.lower_s, spec.upper_s];
    if let Some(fixed) = spec.fixed_s {
        if tn_fields.iter().any(Option::is_some) {
            checker.fail(format!(
                "{field}: fixed_s excludes the truncated-normal fields (mean_s/variance_s2/stddev_s/lower_s/upper_s)"
            ));
            return None;
        }
        if !(fixed.is_finite() && fixed >= 0.0) {
            checker.fail(format!("{field}: fixed_s must be finite and >= 0, got {fixed}"));
            return None;
        }
        return Some(PrepTimeModel::Fixed(fixed));
    }
    let (Some(mean), Some(lower), Some(upper)) = (spec.mean_s, spec.lower_s, spec.upper_s) else {
        checker.fail(format!(
            "{field}: needs either fixed_s or all of mean_s, lower_s, upper_s plus variance_s2 or stddev_s"
        ));
        return None;
    };
    let variance = match (spec.variance_s2, spec.stddev_s) {
        (Some(v), None) => v,
        (None, Some(sd)) => sd * sd,
        (Some(_), Some(_)) => {
            checker.fail(format!("{field}: variance_s2 and stddev_s are mutually exclusive"));
            return None;
        }
        (None, None) => {
            checker.fail(format!("{field}: one of variance_s2 or stddev_s is required"));
            return None;
        }
    };
    match TruncatedNormalParams::new(mean, variance, lower, upper) {
        Ok(p) => Some(PrepTimeModel::TruncatedNormal(p)),
        Err(e) => {
            checker.fail(format!("{field}: {e}"));
            None
        }
    }
}

fn ring_segments(ring: &[Vec2]) -> impl Iterator<Item = (Vec2, Vec2)> + '_ {
    let n = ring.len();
    (0..n).map(move |i| (ring[i], ring[(i + 1) % n]))
}

/// True when the hotspot ring overlaps the water polygon (shares area or
/// touches): any vertex of one inside the other, or any pair of edges
/// properly crossing.
fn hotspot_touches_water(hotspot: &[Vec2], water: &WaterPolygon) -> bool {
    if hotspot.iter().any(|&p| water.contains(p, 0.0)) {
        return true;
    }
    if water.outer().iter().any(|&p| point_in_ring(p, hotspot)) {
        return true;
    }
    for (a, b) in ring_segments(hotspot) {
        for (c, d) in ring_segments(water.outer()) {
            if segments_properly_cross(a, b, c, d) {
                return true;
            }
        }
    }
    false
}

/// Equirectangular projection of one `[lon, lat]` pair (degrees) to local
/// metres around `origin`.
pub fn project_lonlat(p: [f64; 2], origin: OriginSpec) -> [f64; 2] {
    let x = EARTH_RADIUS_M * (p[0] - origin.lon_deg).to_radians() * origin.lat_deg.to_radians().cos();
    let y = EARTH_RADIUS_M * (p[1] - origin.lat_deg).to_radians();
    [x, y]
}

/// Inverse of [`project_lonlat`].
pub fn unproject_to_lonlat(p: [f64; 2], origin: OriginSpec) -> [f64; 2] {
    let lon = origin.lon_deg + (p[0] / (EARTH_RADIUS_M * origin.lat_deg.to_radians().cos())).to_degrees();
    let lat = origin.lat_deg + (p[1] / EARTH_RADIUS_M).to_degrees();
    [lon, lat]
}

/// Rewrite a `lonlat` scenario in planar metres. Every coordinate pair is
/// projected; lengths, speeds and times are already metric and pass through.
pub fn project_to_planar(file: &ScenarioFile, origin: OriginSpec) -> Result<ScenarioFile, LoadError> {
    let mut checker = Checker::new();
    let mut out = file.clone();
    {
        let mut project = |label: &str, p: &mut [f64; 2]| {
            let within = (p[0] - origin.lon_deg).abs() <= 1.0 && (p[1] - origin.lat_deg).abs() <= 1.0;
            if within {
                *p = project_lonlat(*p, origin);
            } else {
                checker.fail(format!(
                    "{label}: coordinate ({}, {}) is more than 1 degree from the origin",
                    p[0], p[1]
                ));
            }
        };
        for (i, poly) in out.water.iter_mut().enumerate() {
            for p in &mut poly.outer {
                project(&format!("water[{i}].outer"), p);
            }
            for (h, hole) in poly.holes.iter_mut().enumerate() {
                for p in hole {
                    project(&format!("water[{i}].holes[{h}]"), p);
                }
            }
        }
        for h in &mut out.hotspots {
            for p in &mut h.polygon {
                project(&format!("hotspot {:?}", h.id), p);
            }
        }
        for (kind, list) in [
            ("fire station", &mut out.stations.fire),
            ("rescue station", &mut out.stations.rescue),
            ("access point", &mut out.stations.access),
        ] {
            for s in list {
                project(&format!("{kind} {:?}", s.id), &mut s.position);
            }
        }
        for n in &mut out.road_graph.nodes {
            project(&format!("road node {:?}", n.id), &mut n.position);
        }
        for u in &mut out.uavs {
            project(&format!("uav {:?}", u.id), &mut u.hangar);
        }
        for m in &mut out.imported_trajectories {
            project(&format!("imported trajectory for {:?}", m.uav_id), &mut m.start);
        }
    }
    checker.finish()?;
    out.crs = "planar_meters".into();
    out.origin = None;
    Ok(out)
}

/// Validate the parsed document and build the in-memory [`Scenario`].
/// `base_dir` anchors relative trajectory-CSV paths.
pub fn build_scenario(file: &ScenarioFile, base_dir: &Path) -> Result<Scenario, LoadError> {
    let mut checker = Checker::new();
    checker.require(file.format_version == FORMAT_VERSION, || {
        format!(
            "format_version {} is not supported (expected {FORMAT_VERSION})",
            file.format_version
        )
    });

    // CRS handling first: everything downstream wants planar metres.
    let planar;
    match file.crs.as_str() {
        "planar_meters" => {
            if file.origin.is_some() {
                checker.fail("origin is only meaningful with crs = \"lonlat\"".into());
            }
            planar = file.clone();
        }
        "lonlat" => match file.origin {
            Some(origin) => match project_to_planar(file, origin) {
                Ok(p) => planar = p,
                Err(LoadError::Validation { messages }) => {
                    checker.messages.extend(messages);
                    return Err(validation(checker.messages));
                }
                Err(other) => return Err(other),
            },
            None => {
                checker.fail("crs = \"lonlat\" requires an origin".into());
                return Err(validation(checker.messages));
            }
        },
        other => {
            checker.fail(format!(
                "crs must be \"planar_meters\" or \"lonlat\", got {other:?}"
            ));
            return Err(validation(checker.messages));
        }
    }
    let file = &planar;

    // Water polygons.
    let mut water = Vec::new();
    for (i, poly) in file.water.iter().enumerate() {
        let holes = poly.holes.iter().map(|h| ring(h)).collect();
        match WaterPolygon::new(ring(&poly.outer), holes) {
            Ok(w) => water.push(w),
            Err(e) => checker.fail(format!("water[{i}]: {e}")),
        }
    }
    checker.require(!file.water.is_empty(), || "scenario has no water polygons".into());

    // Hotspots. Zero weight = documented-but-dormant; negative = error.
    dup_check(&mut checker, "hotspot", file.hotspots.iter().map(|h| h.id.clone()));
    let mut hotspots = Vec::new();
    for spec in &file.hotspots {
        if !(spec.weight.is_finite() && spec.weight >= 0.0) {
            checker.fail(format!(
                "hotspot {:?}: weight must be finite and >= 0, got {}",
                spec.id, spec.weight
            ));
            continue;
        }
        if spec.weight == 0.0 {
            continue;
        }
        match Hotspot::new(spec.id.clone(), ring(&spec.polygon), spec.weight) {
            Ok(h) => {
                let touches = water.iter().any(|w| hotspot_touches_water(&h.polygon, w));
                checker.require(touches || water.is_empty(), || {
                    format!("hotspot {:?} does not overlap any water polygon", spec.id)
                });
                hotspots.push(h);
            }
            Err(e) => checker.fail(format!("hotspot {:?}: {e}", spec.id)),
        }
    }
    checker.require(file.hotspots.iter().any(|h| h.weight > 0.0), || {
        "at least one hotspot needs weight > 0".into()
    });

    // Stations.
    for (kind, list) in [
        ("fire station", &file.stations.fire),
        ("rescue station", &file.stations.rescue),
        ("access point", &file.stations.access),
    ] {
        dup_check(&mut checker, kind, list.iter().map(|s| s.id.clone()));
        for s in list {
            checker.require(vec2(s.position).is_finite(), || {
                format!("{kind} {:?}: position must be finite", s.id)
            });
        }
    }
    let stations = StationSet {
        fire: file.stations.fire.iter().map(|s| Station { id: s.id.clone(), position: vec2(s.position) }).collect(),
        rescue: file.stations.rescue.iter().map(|s| Station { id: s.id.clone(), position: vec2(s.position) }).collect(),
        access: file.stations.access.iter().map(|s| Station { id: s.id.clone(), position: vec2(s.position) }).collect(),
    };

    // Road graph. Bidirectional edges expand to two directed edges.
    let nodes: Vec<(String, Vec2)> = file
        .road_graph
        .nodes
        .iter()
        .map(|n| (n.id.clone(), vec2(n.position)))
        .collect();
    let mut edges = Vec::new();
    for e in &file.road_graph.edges {
        edges.push(EdgeSpec {
            from: e.from.clone(),
            to: e.to.clone(),
            length_m: e.length_m,
            speed_kmh: e.speed_kmh,
        });
        if e.bidirectional {
            edges.push(EdgeSpec {
                from: e.to.clone(),
                to: e.from.clone(),
                length_m: e.length_m,
                speed_kmh: e.speed_kmh,
            });
        }
    }
    let road = match RoadGraph::new(nodes, edges) {
        Ok(g) => g,
        Err(e) => {
            checker.fail(format!("road_graph: {e}"));
            RoadGraph::new(
                vec![("placeholder".into(), Vec2::ZERO)],
                Vec::new(),
            )
            .expect("single-node graph is always valid")
        }
    };

    // UAV fleet.
    dup_check(&mut checker, "uav", file.uavs.iter().map(|u| u.id.clone()));
    let mut uavs = Vec::new();
    for u in &file.uavs {
        let camera = match CameraSpec::new(u.alpha_rad, u.beta_rad) {
            Ok(c) => c,
            Err(e) => {
                checker.fail(format!("uav {:?}: {e}", u.id));
                continue;
            }
        };
        match UavSpec::new(
            u.id.clone(),
            vec2(u.hangar),
            u.max_airspeed_ms,
            u.altitude_m,
            camera,
            u.endurance_s,
        ) {
            Ok(spec) => uavs.push(spec),
            Err(e) => checker.fail(format!("uav {:?}: {e}", u.id)),
        }
    }

    // Reference integrity.
    let hotspot_ids: BTreeSet<&str> = file.hotspots.iter().map(|h| h.id.as_str()).collect();
    let uav_ids: BTreeSet<&str> = file.uavs.iter().map(|u| u.id.as_str()).collect();
    for (h, u) in &file.assignments {
        checker.require(hotspot_ids.contains(h.as_str()), || {
            format!("assignment references unknown hotspot id {h:?}")
        });
        checker.require(uav_ids.contains(u.as_str()), || {
            format!("assignment references unknown uav id {u:?}")
        });
    }

    // Imported trajectories (CSV sidecars).
    let mut imported = Vec::new();
    for m in &file.imported_trajectories {
        checker.require(uav_ids.contains(m.uav_id.as_str()), || {
            format!("imported trajectory references unknown uav id {:?}", m.uav_id)
        });
        checker.require(hotspot_ids.contains(m.hotspot_id.as_str()), || {
            format!("imported trajectory references unknown hotspot id {:?}", m.hotspot_id)
        });
        let path = base_dir.join(&m.file);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) => {
                checker.fail(format!("imported trajectory {:?}: cannot read: {e}", m.file));
                continue;
            }
        };
        match parse_trajectory_csv(&text, m.dt_s, vec2(m.start)) {
            Ok(traj) => {
                checker.require(traj.uav_id == m.uav_id, || {
                    format!(
                        "imported trajectory {:?}: CSV is for uav {:?}, scenario says {:?}",
                        m.file, traj.uav_id, m.uav_id
                    )
                });
                imported.push(ImportedMission {
                    uav_id: m.uav_id.clone(),
                    hotspot_id: m.hotspot_id.clone(),
                    trajectory: traj,
                });
            }
            Err(e) => checker.fail(format!("imported trajectory {:?}: {e}", m.file)),
        }
    }

    // Parameters.
    let p = &file.parameters;
    checker.require(p.speed_factor.is_finite() && p.speed_factor > 0.0, || {
        format!("parameters.speed_factor must be positive, got {}", p.speed_factor)
    });
    checker.require(p.walk_speed_kmh.is_finite() && p.walk_speed_kmh > 0.0, || {
        format!("parameters.walk_speed_kmh must be positive, got {}", p.walk_speed_kmh)
    });
    checker.require(p.boat_speed_kmh.is_finite() && p.boat_speed_kmh > 0.0, || {
        format!("parameters.boat_speed_kmh must be positive, got {}", p.boat_speed_kmh)
    });
    checker.require(p.dt_s.is_finite() && p.dt_s > 0.0, || {
        format!("parameters.dt_s must be positive, got {}", p.dt_s)
    });
    checker.require(
        p.sweep_overlap.is_finite() && (0.0..1.0).contains(&p.sweep_overlap),
        || format!("parameters.sweep_overlap must be in [0, 1), got {}", p.sweep_overlap),
    );
    let prep_fire = prep_model(&mut checker, "parameters.prep_fire", &p.prep_fire);
    let prep_rescue = prep_model(&mut checker, "parameters.prep_rescue", &p.prep_rescue);
    let search_delay = match &p.search_delay {
        Some(spec) => prep_model(&mut checker, "parameters.search_delay", spec).map(Some),
        None => Some(None),
    };
    let wind = match p.wind_mps {
        Some(w) => {
            checker.require(vec2(w).is_finite(), || {
                "parameters.wind_mps must be finite".into()
            });
            WindField::Constant(vec2(w))
        }
        None => WindField::Constant(Vec2::ZERO),
    };
    let heading_source = match p.heading_source.as_deref() {
        None | Some("air") => HeadingSource::AirVector,
        Some("ground") => HeadingSource::GroundVector,
        Some(other) => {
            checker.fail(format!(
                "parameters.heading_source must be \"air\" or \"ground\", got {other:?}"
            ));
            HeadingSource::AirVector
        }
    };

    checker.finish()?;

    let params = SimParams {
        speed_factor: p.speed_factor,
        walk_speed_kmh: p.walk_speed_kmh,
        boat_speed_kmh: p.boat_speed_kmh,
        prep_fire: prep_fire.expect("checked above"),
        prep_rescue: prep_rescue.expect("checked above"),
        dt_s: p.dt_s,
        sweep_overlap: p.sweep_overlap,
        search_delay: search_delay.expect("checked above"),
        wind,
        heading_source,
    };
    Ok(Scenario {
        name: file.name.clone(),
        water,
        hotspots,
        stations,
        road,
        uavs,
        assignments: file.assignments.clone(),
        imported,
        params,
    })
}

/// Parse a `--method` value.
pub fn parse_method(s: &str) -> Result<SearchMethod, String> {
    SearchMethod::parse(s).ok_or_else(|| {
        format!("unknown search method {s:?} (expected parallel_sweep, expanding_square or imported)")
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn minimal_json() -> serde_json::Value {
        serde_json::json!({
            "format_version": 1,
            "name": "minimal",
            "crs": "planar_meters",
            "water": [{"outer": [[0.0, 0.0], [1000.0, 0.0], [1000.0, 600.0], [0.0, 600.0]]}],
            "hotspots": [{"id": "h1", "polygon": [[100.0, 100.0], [300.0, 100.0], [300.0, 300.0], [100.0, 300.0]], "weight": 1.0}],
            "stations": {
                "fire": [{"id": "F", "position": [0.0, -100.0]}],
                "rescue": [{"id": "R", "position": [500.0, -100.0]}],
                "access": [{"id": "A", "position": [200.0, 0.0]}]
            },
            "road_graph": {
                "nodes": [
                    {"id": "n1", "position": [0.0, -100.0]},
                    {"id": "n2", "position": [200.0, -10.0]}
                ],
                "edges": [{"from": "n1", "to": "n2", "length_m": 250.0, "speed_kmh": 50.0}]
            },
            "uavs": [{
                "id": "u1", "hangar": [50.0, 50.0], "max_airspeed_ms": 12.0,
                "altitude_m": 60.0, "alpha_rad": 0.5235987755982988,
                "beta_rad": 0.5235987755982988, "endurance_s": 1200.0
            }]
        })
    }

    #[test]
    fn minimal_scenario_loads_with_defaults() {
        let file = parse_scenario_str(&minimal_json().to_string(), Path::new("mem")).unwrap();
        let scenario = build_scenario(&file, Path::new(".")).unwrap();
        assert_eq!(scenario.name, "minimal");
        assert_relative_eq!(scenario.params.speed_factor, 1.3);
        assert_relative_eq!(scenario.params.walk_speed_kmh, 10.0);
        assert_relative_eq!(scenario.params.boat_speed_kmh, 70.0);
        assert_relative_eq!(scenario.params.dt_s, 0.5);
        match scenario.params.prep_fire {
            PrepTimeModel::TruncatedNormal(p) => {
                assert_relative_eq!(p.mean(), 120.0);
                assert_relative_eq!(p.variance(), 30.0);
                assert_relative_eq!(p.lower(), 0.0);
                assert_relative_eq!(p.upper(), 240.0);
            }
            other => panic!("unexpected prep_fire {other:?}"),
        }
        assert_eq!(scenario.params.prep_rescue, PrepTimeModel::Fixed(0.0));
        assert_eq!(scenario.hotspots.len(), 1);
        assert_eq!(scenario.uavs.len(), 1);
    }

    #[test]
    fn unknown_fields_are_rejected_with_pointer() {
        let mut doc = minimal_json();
        doc["waterways"] = serde_json::json!([]);
        let err = parse_scenario_str(&doc.to_string(), Path::new("mem")).unwrap_err();
        let text = err.to_string();
        assert!(text.contains("waterways"), "{text}");
    }

    #[test]
    fn validation_collects_every_violation() {
        let mut doc = minimal_json();
        doc["assignments"] = serde_json::json!({"ghost": "u1", "h1": "phantom"});
        doc["parameters"] = serde_json::json!({"speed_factor": -2.0});
        let file = parse_scenario_str(&doc.to_string(), Path::new("mem")).unwrap();
        let err = build_scenario(&file, Path::new(".")).unwrap_err();
        let LoadError::Validation { messages } = err else {
            panic!("expected validation error, got {err}")
        };
        let text = messages.join("\n");
        assert!(text.contains("ghost"), "{text}");
        assert!(text.contains("phantom"), "{text}");
        assert!(text.contains("speed_factor"), "{text}");
        assert_eq!(messages.len(), 3, "{text}");
    }

    #[test]
    fn hotspot_off_the_water_is_reported() {
        let mut doc = minimal_json();
        doc["hotspots"] = serde_json::json!([
            {"id": "dry", "polygon": [[5000.0, 5000.0], [5100.0, 5000.0], [5100.0, 5100.0], [5000.0, 5100.0]], "weight": 1.0}
        ]);
        let file = parse_scenario_str(&doc.to_string(), Path::new("mem")).unwrap();
        let err = build_scenario(&file, Path::new(".")).unwrap_err();
        assert!(err.to_string().contains("does not overlap"), "{err}");
    }

    #[test]
    fn document_round_trips_exactly() {
        let file = parse_scenario_str(&minimal_json().to_string(), Path::new("mem")).unwrap();
        let serialized = serde_json::to_string_pretty(&file).unwrap();
        let reparsed = parse_scenario_str(&serialized, Path::new("mem")).unwrap();
        assert_eq!(file, reparsed);
    }

    #[test]
    fn prep_spec_rules_are_enforced() {
        let mut checker = Checker::new();
        // fixed and TN fields together.
        let bad = PrepSpec { fixed_s: Some(1.0), mean_s: Some(2.0), ..Default::default() };
        assert!(prep_model(&mut checker, "p", &bad).is_none());
        // both variance and stddev.
        let bad = PrepSpec {
            mean_s: Some(10.0),
            variance_s2: Some(4.0),
            stddev_s: Some(2.0),
            lower_s: Some(0.0),
            upper_s: Some(20.0),
            ..Default::default()
        };
        assert!(prep_model(&mut checker, "p", &bad).is_none());
        assert_eq!(checker.messages.len(), 2);
        // stddev alone works and squares into the variance.
        let mut ok = Checker::new();
        let good = PrepSpec {
            mean_s: Some(10.0),
            stddev_s: Some(2.0),
            lower_s: Some(0.0),
            upper_s: Some(20.0),
            ..Default::default()
        };
        match prep_model(&mut ok, "p", &good).unwrap() {
            PrepTimeModel::TruncatedNormal(p) => assert_relative_eq!(p.variance(), 4.0),
            other => panic!("unexpected {other:?}"),
        }
        assert!(ok.messages.is_empty());
    }

    #[test]
    fn lonlat_scenarios_project_to_metres() {
        let origin = OriginSpec { lon_deg: 14.0, lat_deg: 51.5 };
        assert_eq!(project_lonlat([14.0, 51.5], origin), [0.0, 0.0]);
        // One hundredth of a degree of latitude.
        let north = project_lonlat([14.0, 51.51], origin);
        let expected = EARTH_RADIUS_M * 0.01f64.to_radians();
        assert_relative_eq!(north[1], expected, max_relative = 1e-12);
        assert_relative_eq!(expected, 1111.9508023353292, max_relative = 1e-12);
        // Round trip.
        let p = [14.137, 51.268];
        let back = unproject_to_lonlat(project_lonlat(p, origin), origin);
        assert!((back[0] - p[0]).abs() < 1e-6 && (back[1] - p[1]).abs() < 1e-6, "{back:?}");
    }

    #[test]
    fn lonlat_requires_origin_and_bounds() {
        let mut doc = minimal_json();
        doc["crs"] = serde_json::json!("lonlat");
        let file = parse_scenario_str(&doc.to_string(), Path::new("mem")).unwrap();
        let err = build_scenario(&file, Path::new(".")).unwrap_err();
        assert!(err.to_string().contains("requires an origin"), "{err}");

        doc["origin"] = serde_json::json!({"lon_deg": 14.0, "lat_deg": 51.5});
        // Planar-scale coordinates are way outside the 1-degree window.
        let file = parse_scenario_str(&doc.to_string(), Path::new("mem")).unwrap();
        let err = build_scenario(&file, Path::new(".")).unwrap_err();
        assert!(err.to_string().contains("more than 1 degree"), "{err}");
    }

    #[test]
    fn zero_weight_hotspots_are_dormant() {
        let mut doc = minimal_json();
        doc["hotspots"] = serde_json::json!([
            {"id": "live", "polygon": [[100.0, 100.0], [300.0, 100.0], [300.0, 300.0], [100.0, 300.0]], "weight": 2.0},
            {"id": "dormant", "polygon": [[400.0, 100.0], [600.0, 100.0], [600.0, 300.0], [400.0, 300.0]], "weight": 0.0}
        ]);
        let file = parse_scenario_str(&doc.to_string(), Path::new("mem")).unwrap();
        let scenario = build_scenario(&file, Path::new(".")).unwrap();
        assert_eq!(scenario.hotspots.len(), 1);
        assert_eq!(scenario.hotspots[0].id, "live");
    }

    #[test]
    fn one_way_edges_stay_one_way() {
        let mut doc = minimal_json();
        doc["road_graph"]["edges"] = serde_json::json!([
            {"from": "n1", "to": "n2", "length_m": 250.0, "speed_kmh": 50.0, "bidirectional": false}
        ]);
        let file = parse_scenario_str(&doc.to_string(), Path::new("mem")).unwrap();
        let scenario = build_scenario(&file, Path::new(".")).unwrap();
        assert!(scenario.road.shortest_travel_time("n1", "n2", 1.0).unwrap().is_some());
        assert!(scenario.road.shortest_travel_time("n2", "n1", 1.0).unwrap().is_none());
    }
}
