//! Boat-based rescue chain: a fire crew (towing the boat) and a rescue crew
//! drive to a water access point, and the boat departs once both are there.
//!
//! The access point is chosen per incident as the one with the shortest
//! on-water route to the target; the road legs then feed a two-branch
//! synchronisation — response time is
//! `max(fire prep + fire drive, rescue prep + rescue drive) + water leg`.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::geom::Vec2;
use crate::mcs::{self, ResultSet, RunDetail, RunOutcome, SroLegs};
use crate::roadnet::RoadnetError;
use crate::sampling::{sample_hotspot, sample_point_in_polygon, Hotspot, PrepTimeModel, RunRng, SamplingError};
use crate::scenario::Scenario;
use crate::waterway::{WaterRouter, WaterwayError};

#[derive(Clone, Debug, PartialEq)]
pub enum SroError {
    Water(WaterwayError),
    Road(RoadnetError),
    Sampling(SamplingError),
    Mcs(mcs::McsError),
    NoAccessPoints,
    NoHotspots,
    NoFireStations,
    NoRescueStations,
}

impl fmt::Display for SroError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SroError::Water(e) => write!(f, "{e}"),
            SroError::Road(e) => write!(f, "{e}"),
            SroError::Sampling(e) => write!(f, "{e}"),
            SroError::Mcs(e) => write!(f, "{e}"),
            SroError::NoAccessPoints => write!(f, "scenario has no water access points"),
            SroError::NoHotspots => write!(f, "scenario has no hotspots"),
            SroError::NoFireStations => write!(f, "scenario has no fire stations"),
            SroError::NoRescueStations => write!(f, "scenario has no rescue stations"),
        }
    }
}

impl core::error::Error for SroError {}

impl From<WaterwayError> for SroError {
    fn from(e: WaterwayError) -> Self {
        SroError::Water(e)
    }
}

impl From<RoadnetError> for SroError {
    fn from(e: RoadnetError) -> Self {
        SroError::Road(e)
    }
}

impl From<SamplingError> for SroError {
    fn from(e: SamplingError) -> Self {
        SroError::Sampling(e)
    }
}

impl From<mcs::McsError> for SroError {
    fn from(e: mcs::McsError) -> Self {
        SroError::Mcs(e)
    }
}

/// Everything precomputable about one access point.
#[derive(Clone, Debug)]
struct AccessEntry {
    id: String,
    /// On-water router from this slipway; `None` when the point is not on
    /// any water body (it then never serves an incident).
    router: Option<WaterRouter>,
    /// Best fire station by door-to-slipway time: `(station id, seconds)`.
    fire: Option<(String, f64)>,
    rescue: Option<(String, f64)>,
}

/// Pre-routed Monte-Carlo engine for the boat model. Immutable after
/// construction; `run` is `&self` and thread-safe.
#[derive(Clone, Debug)]
pub struct SroEngine {
    hotspots: Vec<Hotspot>,
    access: Vec<AccessEntry>,
    prep_fire: PrepTimeModel,
    prep_rescue: PrepTimeModel,
}

/// Response-time composition: the boat departs once the later of the two
/// crews reaches the slipway, then crosses the water.
pub fn response_time(
    prep_fire_s: f64,
    fire_leg_s: f64,
    prep_rescue_s: f64,
    rescue_leg_s: f64,
    water_leg_s: f64,
) -> f64 {
    (prep_fire_s + fire_leg_s).max(prep_rescue_s + rescue_leg_s) + water_leg_s
}

/// Minimum over stations of the door-to-slipway time; ties keep the smaller
/// station id.
fn best_station(
    stations: &[crate::scenario::Station],
    access: Vec2,
    scenario: &Scenario,
) -> Result<Option<(String, f64)>, RoadnetError> {
    let mut best: Option<(String, f64)> = None;
    for s in stations {
        let t = scenario.road.station_to_access_time(
            s.position,
            access,
            scenario.params.speed_factor,
            scenario.params.walk_speed_kmh,
        )?;
        if let Some(t) = t {
            let better = match &best {
                None => true,
                Some((bid, bt)) => t < *bt || (t == *bt && s.id < *bid),
            };
            if better {
                best = Some((s.id.clone(), t));
            }
        }
    }
    Ok(best)
}

impl SroEngine {
    pub fn build(scenario: &Scenario) -> Result<Self, SroError> {
        if scenario.hotspots.is_empty() {
            return Err(SroError::NoHotspots);
        }
        if scenario.stations.access.is_empty() {
            return Err(SroError::NoAccessPoints);
        }
        if scenario.stations.fire.is_empty() {
            return Err(SroError::NoFireStations);
        }
        if scenario.stations.rescue.is_empty() {
            return Err(SroError::NoRescueStations);
        }
        let boat = scenario.params.boat_speed_kmh;
        if !(boat.is_finite() && boat > 0.0) {
            return Err(SroError::Water(WaterwayError::InvalidSpeed { value: boat }));
        }
        let mut access = Vec::with_capacity(scenario.stations.access.len());
        for ap in &scenario.stations.access {
            // Attach the slipway to the first water body it touches.
            let mut router = None;
            for water in &scenario.water {
                match WaterRouter::new(water, ap.position, boat) {
                    Ok(r) => {
                        router = Some(r);
                        break;
                    }
                    Err(WaterwayError::PointOutsideWater { .. }) => continue,
                    Err(other) => return Err(other.into()),
                }
            }
            let fire = best_station(&scenario.stations.fire, ap.position, scenario)?;
            let rescue = best_station(&scenario.stations.rescue, ap.position, scenario)?;
            access.push(AccessEntry { id: ap.id.clone(), router, fire, rescue });
        }
        Ok(SroEngine {
            hotspots: scenario.hotspots.clone(),
            access,
            prep_fire: scenario.params.prep_fire,
            prep_rescue: scenario.params.prep_rescue,
        })
    }

    /// Access point with the shortest on-water route to `target`, as
    /// `(access id, water-leg seconds)`. Ties keep the earlier access point
    /// in scenario order.
    pub fn nearest_access_point(&self, target: Vec2) -> Option<(&str, f64)> {
        let mut best: Option<(usize, f64)> = None;
        for (i, entry) in self.access.iter().enumerate() {
            let Some(router) = &entry.router else { continue };
            if let Some(t) = router.shortest_duration_s(target) {
                if best.map_or(true, |(_, bt)| t < bt) {
                    best = Some((i, t));
                }
            }
        }
        best.map(|(i, t)| (self.access[i].id.as_str(), t))
    }

    /// Evaluate one Monte-Carlo run.
    ///
    /// Draw order (fixed, per-run stream): hotspot, target point, fire prep,
    /// rescue prep — the prep times are drawn even when the target turns out
    /// to be unreachable, so reachability never shifts the stream.
    ///
    /// Panics if polygon rejection sampling overruns its cap, which scenario
    /// validation makes practically impossible.
    pub fn run(&self, master_seed: u64, run_index: u64) -> RunOutcome {
        let mut rng = RunRng::new(master_seed, "sro", run_index);
        let hotspot = sample_hotspot(&self.hotspots, &mut rng).expect("hotspots checked at build");
        let target =
            sample_point_in_polygon(&hotspot.polygon, &mut rng).expect("hotspot polygons are sane");
        let prep_fire_s = self.prep_fire.draw(&mut rng);
        let prep_rescue_s = self.prep_rescue.draw(&mut rng);

        let unreachable = |hotspot_id: String| RunOutcome {
            run_index,
            target,
            time_s: None,
            detail: RunDetail::Sro { hotspot_id, legs: None },
        };

        // Boats launch from the slipway closest to the incident by water.
        let mut chosen: Option<(usize, f64)> = None;
        for (i, entry) in self.access.iter().enumerate() {
            let Some(router) = &entry.router else { continue };
            if let Some(t) = router.shortest_duration_s(target) {
                if chosen.map_or(true, |(_, bt)| t < bt) {
                    chosen = Some((i, t));
                }
            }
        }
        let Some((ai, water_leg_s)) = chosen else {
            return unreachable(hotspot.id.clone());
        };
        let entry = &self.access[ai];
        let (Some((fire_id, fire_t)), Some((rescue_id, rescue_t))) = (&entry.fire, &entry.rescue)
        else {
            return unreachable(hotspot.id.clone());
        };
        let fire_arrival_s = prep_fire_s + fire_t;
        let rescue_arrival_s = prep_rescue_s + rescue_t;
        let response = response_time(prep_fire_s, *fire_t, prep_rescue_s, *rescue_t, water_leg_s);
        RunOutcome {
            run_index,
            target,
            time_s: Some(response),
            detail: RunDetail::Sro {
                hotspot_id: hotspot.id.clone(),
                legs: Some(SroLegs {
                    access_id: entry.id.clone(),
                    fire_id: fire_id.clone(),
                    rescue_id: rescue_id.clone(),
                    prep_fire_s,
                    prep_rescue_s,
                    fire_arrival_s,
                    rescue_arrival_s,
                    water_leg_s,
                }),
            },
        }
    }
}

/// Run the boat model `n_runs` times (serially) and aggregate.
pub fn simulate_sro(
    scenario: &Scenario,
    n_runs: u64,
    master_seed: u64,
    bin_width_s: f64,
) -> Result<(Vec<RunOutcome>, ResultSet), SroError> {
    let engine = SroEngine::build(scenario)?;
    let outcomes = mcs::run_mcs(|i| engine.run(master_seed, i), n_runs);
    let results = mcs::summarize(&outcomes, bin_width_s)?;
    Ok((outcomes, results))
}
