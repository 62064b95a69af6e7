//! The scenario aggregate: everything both response models need about a
//! region — water bodies, hotspots, stations, the road network, the UAV
//! fleet, and simulation parameters.
//!
//! This is the in-memory model only; file parsing, coordinate projection and
//! cross-reference validation live in the companion `rescue-sim` crate.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::geom::Vec2;
use crate::roadnet::RoadGraph;
use crate::sampling::{Hotspot, PrepTimeModel, TruncatedNormalParams};
use crate::search::{AirTrajectory, UavSpec};
use crate::uas::{HeadingSource, WindField};
use crate::waterway::WaterPolygon;

/// A named point facility: fire station, rescue station, or water access.
#[derive(Clone, Debug, PartialEq)]
pub struct Station {
    pub id: String,
    pub position: Vec2,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct StationSet {
    pub fire: Vec<Station>,
    pub rescue: Vec<Station>,
    /// Slipways/piers where a boat can be put into the water.
    pub access: Vec<Station>,
}

/// An externally supplied flight plan bound to a hotspot.
#[derive(Clone, Debug, PartialEq)]
pub struct ImportedMission {
    pub uav_id: String,
    pub hotspot_id: String,
    pub trajectory: AirTrajectory,
}

/// Tunable model parameters with literature defaults.
#[derive(Clone, Debug, PartialEq)]
pub struct SimParams {
    /// Multiplier on free-flow road travel times (congestion, traffic rules).
    pub speed_factor: f64,
    pub walk_speed_kmh: f64,
    pub boat_speed_kmh: f64,
    pub prep_fire: PrepTimeModel,
    pub prep_rescue: PrepTimeModel,
    /// Trajectory sampling interval.
    pub dt_s: f64,
    /// Fractional across-track overlap of adjacent sweep lanes, in `[0, 1)`.
    pub sweep_overlap: f64,
    /// Optional alarm-to-launch delay for the UAV fleet.
    pub search_delay: Option<PrepTimeModel>,
    pub wind: WindField,
    /// Which velocity vector orients the camera footprint.
    pub heading_source: HeadingSource,
}

impl Default for SimParams {
    fn default() -> Self {
        SimParams {
            speed_factor: 1.3,
            walk_speed_kmh: 10.0,
            boat_speed_kmh: 70.0,
            prep_fire: PrepTimeModel::TruncatedNormal(
                TruncatedNormalParams::new(120.0, 30.0, 0.0, 240.0)
                    .expect("literature defaults are valid"),
            ),
            prep_rescue: PrepTimeModel::Fixed(0.0),
            dt_s: 0.5,
            sweep_overlap: 0.0,
            search_delay: None,
            wind: WindField::Constant(Vec2::ZERO),
            heading_source: HeadingSource::AirVector,
        }
    }
}

/// A complete simulation scenario.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub name: String,
    /// Independent water bodies; boats cannot move between them.
    pub water: Vec<WaterPolygon>,
    pub hotspots: Vec<Hotspot>,
    pub stations: StationSet,
    pub road: RoadGraph,
    pub uavs: Vec<UavSpec>,
    /// Explicit hotspot-to-UAV assignments; hotspots not listed here get the
    /// nearest feasible UAV automatically.
    pub assignments: BTreeMap<String, String>,
    /// Pre-parsed imported flight plans (used by the `imported` method).
    pub imported: Vec<ImportedMission>,
    pub params: SimParams,
}
