//! Water bodies as polygons with island holes, and boat routing across them
//! via a visibility graph.
//!
//! A path segment is traversable when it stays inside the water region;
//! touching or running along the shoreline is allowed, crossing it is not.
//! Start and goal points that miss the water by digitisation error are
//! snapped onto the nearest shore (within [`SNAP_TOLERANCE_M`]) and nudged a
//! hair inside so downstream sign tests stay away from degeneracies.

use alloc::collections::BinaryHeap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::geom::{
    closest_point_on_segment, dist_point_ring, point_in_ring, ring_area, segments_properly_cross,
    Vec2,
};

/// Maximum distance a start/goal point may lie off the water and still be
/// snapped onto the shoreline.
pub const SNAP_TOLERANCE_M: f64 = 0.5;

/// Inward offset applied to snapped points, well below every tolerance that
/// matters physically.
const INWARD_NUDGE_M: f64 = 1e-9;

/// Containment slack for interior sample points of candidate segments.
const CONTAIN_EPS_M: f64 = 1e-9;

const KMH: f64 = 1.0 / 3.6;

#[derive(Clone, Debug, PartialEq)]
pub enum WaterwayError {
    RingTooSmall { vertices: usize },
    NonFiniteVertex,
    DegenerateRing,
    SelfIntersectingRing,
    HoleNotInsideOuter { hole: usize },
    OverlappingHoles { first: usize, second: usize },
    /// Point is farther than the snap tolerance from the water region.
    PointOutsideWater { x: f64, y: f64 },
    InvalidSpeed { value: f64 },
}

impl fmt::Display for WaterwayError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WaterwayError::RingTooSmall { vertices } => {
                write!(f, "polygon ring needs at least 3 vertices, got {vertices}")
            }
            WaterwayError::NonFiniteVertex => write!(f, "polygon ring has a non-finite vertex"),
            WaterwayError::DegenerateRing => write!(f, "polygon ring has zero area"),
            WaterwayError::SelfIntersectingRing => write!(f, "polygon ring crosses itself"),
            WaterwayError::HoleNotInsideOuter { hole } => {
                write!(f, "hole #{hole} is not contained in the outer ring")
            }
            WaterwayError::OverlappingHoles { first, second } => {
                write!(f, "holes #{first} and #{second} overlap")
            }
            WaterwayError::PointOutsideWater { x, y } => {
                write!(f, "point ({x}, {y}) lies more than {SNAP_TOLERANCE_M} m from the water")
            }
            WaterwayError::InvalidSpeed { value } => {
                write!(f, "boat speed must be positive and finite, got {value}")
            }
        }
    }
}

impl core::error::Error for WaterwayError {}

/// A single connected water body: an outer shoreline plus island holes.
///
/// Stored normalised: the outer ring winds counter-clockwise and every hole
/// winds clockwise, so the water always lies to the left of each directed
/// boundary edge.
#[derive(Clone, Debug, PartialEq)]
pub struct WaterPolygon {
    outer: Vec<Vec2>,
    holes: Vec<Vec<Vec2>>,
}

fn validate_ring(ring: &[Vec2]) -> Result<(), WaterwayError> {
    if ring.len() < 3 {
        return Err(WaterwayError::RingTooSmall { vertices: ring.len() });
    }
    if ring.iter().any(|p| !p.is_finite()) {
        return Err(WaterwayError::NonFiniteVertex);
    }
    if ring_area(ring) == 0.0 {
        return Err(WaterwayError::DegenerateRing);
    }
    let n = ring.len();
    for i in 0..n {
        let (a, b) = (ring[i], ring[(i + 1) % n]);
        for j in i + 1..n {
            let (c, d) = (ring[j], ring[(j + 1) % n]);
            if segments_properly_cross(a, b, c, d) {
                return Err(WaterwayError::SelfIntersectingRing);
            }
        }
    }
    Ok(())
}

impl WaterPolygon {
    /// Validate and normalise a polygon; ring winding in the input may be
    /// arbitrary.
    pub fn new(outer: Vec<Vec2>, holes: Vec<Vec<Vec2>>) -> Result<Self, WaterwayError> {
        validate_ring(&outer)?;
        let mut outer = outer;
        if ring_area(&outer) < 0.0 {
            outer.reverse();
        }
        let mut normalised = Vec::with_capacity(holes.len());
        for (hi, hole) in holes.into_iter().enumerate() {
            validate_ring(&hole)?;
            let mut hole = hole;
            if ring_area(&hole) > 0.0 {
                hole.reverse();
            }
            let inside_outer = hole.iter().all(|p| point_in_ring(*p, &outer));
            let crosses_outer = ring_edges(&hole)
                .any(|(a, b)| ring_edges(&outer).any(|(c, d)| segments_properly_cross(a, b, c, d)));
            if !inside_outer || crosses_outer {
                return Err(WaterwayError::HoleNotInsideOuter { hole: hi });
            }
            normalised.push(hole);
        }
        for i in 0..normalised.len() {
            for j in i + 1..normalised.len() {
                let (a, b) = (&normalised[i], &normalised[j]);
                let crosses = ring_edges(a)
                    .any(|(p, q)| ring_edges(b).any(|(r, s)| segments_properly_cross(p, q, r, s)));
                if crosses || point_in_ring(a[0], b) || point_in_ring(b[0], a) {
                    return Err(WaterwayError::OverlappingHoles { first: i, second: j });
                }
            }
        }
        Ok(WaterPolygon { outer, holes: normalised })
    }

    pub fn outer(&self) -> &[Vec2] {
        &self.outer
    }

    pub fn holes(&self) -> &[Vec<Vec2>] {
        &self.holes
    }

    /// Distance from `p` to the nearest shoreline (outer or island).
    pub fn boundary_distance(&self, p: Vec2) -> f64 {
        let mut best = dist_point_ring(p, &self.outer);
        for hole in &self.holes {
            best = best.min(dist_point_ring(p, hole));
        }
        best
    }

    /// Whether `p` is in the water; points within `tol_m` of a shoreline
    /// count as inside (the boundary itself is water).
    pub fn contains(&self, p: Vec2, tol_m: f64) -> bool {
        if self.boundary_distance(p) <= tol_m {
            return true;
        }
        point_in_ring(p, &self.outer) && !self.holes.iter().any(|h| point_in_ring(p, h))
    }

    /// Move `p` into the water if it is on/near the shore: strictly interior
    /// points pass through, points within [`SNAP_TOLERANCE_M`] of a shoreline
    /// are projected onto it and nudged inside, anything else is `None`.
    pub fn snap_into_water(&self, p: Vec2) -> Option<Vec2> {
        let interior = point_in_ring(p, &self.outer) && !self.holes.iter().any(|h| point_in_ring(p, h));
        let shore = self.boundary_distance(p);
        if interior && shore > 1e-7 {
            return Some(p);
        }
        if shore <= SNAP_TOLERANCE_M {
            return Some(self.project_inward(p));
        }
        if interior {
            return Some(p);
        }
        None
    }

    /// Project `p` onto the nearest boundary segment and offset by the
    /// inward normal. Normalised winding puts water on the left of every
    /// directed edge, so "inward" is the left normal.
    fn project_inward(&self, p: Vec2) -> Vec2 {
        let mut best = (f64::INFINITY, p, Vec2::ZERO);
        let mut consider = |ring: &[Vec2]| {
            for (a, b) in ring_edges(ring) {
                let q = closest_point_on_segment(p, a, b);
                let d = p.dist(q);
                if d < best.0 {
                    let e = b - a;
                    let len = e.norm();
                    let left = if len > 0.0 {
                        Vec2::new(-e.y / len, e.x / len)
                    } else {
                        Vec2::ZERO
                    };
                    best = (d, q, left);
                }
            }
        };
        consider(&self.outer);
        for hole in &self.holes {
            consider(hole);
        }
        best.1 + best.2 * INWARD_NUDGE_M
    }

    /// Whether the open segment `ab` stays within the water region.
    ///
    /// Proper crossings of any shoreline edge are fatal; touching and
    /// collinear sliding along the shore are fine. Between consecutive
    /// touch points the segment interior is sampled for containment, which
    /// catches excursions that leave the water through a vertex.
    pub fn segment_in_water(&self, a: Vec2, b: Vec2) -> bool {
        if a == b {
            return self.contains(a, CONTAIN_EPS_M);
        }
        let mut touches: Vec<f64> = Vec::new();
        let mut check_ring = |ring: &[Vec2]| -> bool {
            for (c, d) in ring_edges(ring) {
                if segments_properly_cross(a, b, c, d) {
                    return false;
                }
                segment_touch_params(a, b, c, d, &mut touches);
            }
            true
        };
        if !check_ring(&self.outer) {
            return false;
        }
        for hole in &self.holes {
            if !check_ring(hole) {
                return false;
            }
        }
        // Sample the midpoint of every stretch between boundary contacts
        // (plus quarter points when there are none).
        touches.retain(|t| *t > 0.0 && *t < 1.0);
        touches.sort_by(f64::total_cmp);
        touches.dedup();
        let lerp = |t: f64| a + (b - a) * t;
        if touches.is_empty() {
            return [0.25, 0.5, 0.75]
                .iter()
                .all(|t| self.contains(lerp(*t), CONTAIN_EPS_M));
        }
        let mut prev = 0.0;
        for t in touches.iter().copied().chain(core::iter::once(1.0)) {
            if t > prev && !self.contains(lerp((prev + t) / 2.0), CONTAIN_EPS_M) {
                return false;
            }
            prev = t;
        }
        true
    }
}

fn ring_edges(ring: &[Vec2]) -> impl Iterator<Item = (Vec2, Vec2)> + '_ {
    let n = ring.len();
    (0..n).map(move |i| (ring[i], ring[(i + 1) % n]))
}

/// Collect parameters `t` along `ab` where it meets segment `cd`, including
/// improper touches and the ends of collinear overlaps.
fn segment_touch_params(a: Vec2, b: Vec2, c: Vec2, d: Vec2, out: &mut Vec<f64>) {
    let r = b - a;
    let s = d - c;
    let rxs = r.cross(s);
    let q = c - a;
    if rxs != 0.0 {
        let t = q.cross(s) / rxs;
        let u = q.cross(r) / rxs;
        if (0.0..=1.0).contains(&t) && (0.0..=1.0).contains(&u) {
            out.push(t);
        }
    } else if q.cross(r) == 0.0 {
        // Collinear: overlap endpoints projected onto ab.
        let len_sq = r.norm_sq();
        if len_sq > 0.0 {
            let tc = (c - a).dot(r) / len_sq;
            let td = (d - a).dot(r) / len_sq;
            let (lo, hi) = (tc.min(td).max(0.0), tc.max(td).min(1.0));
            if lo <= hi {
                out.push(lo);
                out.push(hi);
            }
        }
    }
}

/// Straight-line mutual-visibility graph over all shoreline vertices.
#[derive(Clone, Debug)]
pub struct VisibilityGraph {
    vertices: Vec<Vec2>,
    adjacency: Vec<Vec<(usize, f64)>>,
}

impl VisibilityGraph {
    pub fn vertices(&self) -> &[Vec2] {
        &self.vertices
    }

    pub fn neighbours(&self, v: usize) -> &[(usize, f64)] {
        &self.adjacency[v]
    }
}

/// Build the vertex visibility graph of `water`. Vertices are the outer ring
/// followed by each hole ring, in input order; an edge joins every vertex
/// pair whose connecting segment stays in the water (shoreline edges fall
/// out of this rule automatically).
pub fn build_visibility_graph(water: &WaterPolygon) -> VisibilityGraph {
    let mut vertices: Vec<Vec2> = water.outer().to_vec();
    for hole in water.holes() {
        vertices.extend_from_slice(hole);
    }
    let n = vertices.len();
    let mut adjacency = vec![Vec::new(); n];
    for i in 0..n {
        for j in i + 1..n {
            if water.segment_in_water(vertices[i], vertices[j]) {
                let d = vertices[i].dist(vertices[j]);
                adjacency[i].push((j, d));
                adjacency[j].push((i, d));
            }
        }
    }
    VisibilityGraph { vertices, adjacency }
}

/// A boat route: straight waypoint legs inside the water region.
#[derive(Clone, Debug, PartialEq)]
pub struct WaterPath {
    pub waypoints: Vec<Vec2>,
    pub length_m: f64,
    pub duration_s: f64,
}

/// Shortest boat route between two points of a water body.
///
/// One-shot convenience that builds the visibility graph internally; use
/// [`WaterRouter`] when issuing many queries from a fixed start. Start and
/// goal are snapped within [`SNAP_TOLERANCE_M`]; `Ok(None)` means the goal is
/// in the water but cut off from the start.
pub fn water_shortest_path(
    water: &WaterPolygon,
    start: Vec2,
    goal: Vec2,
    boat_speed_kmh: f64,
) -> Result<Option<WaterPath>, WaterwayError> {
    if !(boat_speed_kmh.is_finite() && boat_speed_kmh > 0.0) {
        return Err(WaterwayError::InvalidSpeed { value: boat_speed_kmh });
    }
    let s = water
        .snap_into_water(start)
        .ok_or(WaterwayError::PointOutsideWater { x: start.x, y: start.y })?;
    let g = water
        .snap_into_water(goal)
        .ok_or(WaterwayError::PointOutsideWater { x: goal.x, y: goal.y })?;

    if water.segment_in_water(s, g) {
        let length_m = s.dist(g);
        return Ok(Some(WaterPath {
            waypoints: vec![s, g],
            length_m,
            duration_s: length_m / (boat_speed_kmh * KMH),
        }));
    }

    let vis = build_visibility_graph(water);
    // Overlay: vis vertices, then start, then goal.
    let n = vis.vertices.len();
    let (si, gi) = (n, n + 1);
    let mut adj: Vec<Vec<(usize, f64)>> = vis.adjacency.clone();
    adj.push(Vec::new());
    adj.push(Vec::new());
    for (i, v) in vis.vertices.iter().enumerate() {
        if water.segment_in_water(s, *v) {
            let d = s.dist(*v);
            adj[si].push((i, d));
            adj[i].push((si, d));
        }
        if water.segment_in_water(*v, g) {
            let d = v.dist(g);
            adj[i].push((gi, d));
            adj[gi].push((i, d));
        }
    }

    let (dist, pred) = dijkstra(&adj, si);
    if !dist[gi].is_finite() {
        return Ok(None);
    }
    let mut chain = vec![gi];
    let mut cur = gi;
    while cur != si {
        cur = pred[cur];
        chain.push(cur);
    }
    chain.reverse();
    let waypoints: Vec<Vec2> = chain
        .into_iter()
        .map(|i| {
            if i == si {
                s
            } else if i == gi {
                g
            } else {
                vis.vertices[i]
            }
        })
        .collect();
    Ok(Some(WaterPath {
        waypoints,
        length_m: dist[gi],
        duration_s: dist[gi] / (boat_speed_kmh * KMH),
    }))
}

/// Repeated-query router from a fixed source point (e.g. a water access
/// point): distances from the source to every shoreline vertex are computed
/// once, after which each target costs one visibility scan.
#[derive(Clone, Debug)]
pub struct WaterRouter {
    water: WaterPolygon,
    vis: VisibilityGraph,
    source: Vec2,
    /// Source-to-vertex shortest path lengths, by vertex index; also the
    /// vertex order sorted by that length for early-exit scans.
    dist: Vec<f64>,
    by_dist: Vec<usize>,
    boat_speed_ms: f64,
}

impl WaterRouter {
    pub fn new(water: &WaterPolygon, source: Vec2, boat_speed_kmh: f64) -> Result<Self, WaterwayError> {
        if !(boat_speed_kmh.is_finite() && boat_speed_kmh > 0.0) {
            return Err(WaterwayError::InvalidSpeed { value: boat_speed_kmh });
        }
        let s = water
            .snap_into_water(source)
            .ok_or(WaterwayError::PointOutsideWater { x: source.x, y: source.y })?;
        let vis = build_visibility_graph(water);
        let n = vis.vertices.len();
        let mut adj = vis.adjacency.clone();
        adj.push(Vec::new());
        for (i, v) in vis.vertices.iter().enumerate() {
            if water.segment_in_water(s, *v) {
                let d = s.dist(*v);
                adj[n].push((i, d));
                adj[i].push((n, d));
            }
        }
        let (mut dist, _) = dijkstra(&adj, n);
        dist.truncate(n);
        let mut by_dist: Vec<usize> = (0..n).collect();
        by_dist.sort_by(|a, b| dist[*a].total_cmp(&dist[*b]).then(a.cmp(b)));
        Ok(WaterRouter {
            water: water.clone(),
            vis,
            source: s,
            dist,
            by_dist,
            boat_speed_ms: boat_speed_kmh * KMH,
        })
    }

    /// Snapped source position.
    pub fn source(&self) -> Vec2 {
        self.source
    }

    /// Shortest route length to `target`, or `None` when the target is
    /// outside this water body or unreachable from the source.
    pub fn shortest_length_m(&self, target: Vec2) -> Option<f64> {
        if !self.water.contains(target, CONTAIN_EPS_M) {
            return None;
        }
        let mut best = if self.water.segment_in_water(self.source, target) {
            self.source.dist(target)
        } else {
            f64::INFINITY
        };
        for &v in &self.by_dist {
            let dv = self.dist[v];
            if dv >= best {
                break; // every later vertex is at least this far already
            }
            let bound = dv + self.vis.vertices[v].dist(target);
            if bound >= best {
                continue;
            }
            if self.water.segment_in_water(self.vis.vertices[v], target) {
                best = bound;
            }
        }
        best.is_finite().then_some(best)
    }

    /// Shortest route duration in seconds at the router's boat speed.
    pub fn shortest_duration_s(&self, target: Vec2) -> Option<f64> {
        self.shortest_length_m(target).map(|l| l / self.boat_speed_ms)
    }
}

/// Plain Dijkstra over an adjacency list; ties pop the smaller index.
fn dijkstra(adj: &[Vec<(usize, f64)>], src: usize) -> (Vec<f64>, Vec<usize>) {
    let n = adj.len();
    let mut dist = vec![f64::INFINITY; n];
    let mut pred = vec![usize::MAX; n];
    let mut heap = BinaryHeap::new();
    dist[src] = 0.0;
    heap.push(Entry { cost: 0.0, node: src });
    while let Some(Entry { cost, node }) = heap.pop() {
        if cost > dist[node] {
            continue;
        }
        for &(to, w) in &adj[node] {
            let next = cost + w;
            if next < dist[to] || (next == dist[to] && node < pred[to]) {
                dist[to] = next;
                pred[to] = node;
                heap.push(Entry { cost: next, node: to });
            }
        }
    }
    (dist, pred)
}

#[derive(PartialEq)]
struct Entry {
    cost: f64,
    node: usize,
}

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .cost
            .total_cmp(&self.cost)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn rect(x0: f64, y0: f64, x1: f64, y1: f64) -> Vec<Vec2> {
        vec![
            Vec2::new(x0, y0),
            Vec2::new(x1, y0),
            Vec2::new(x1, y1),
            Vec2::new(x0, y1),
        ]
    }

    fn lake_with_island() -> WaterPolygon {
        WaterPolygon::new(rect(-100.0, -100.0, 100.0, 100.0), vec![rect(-30.0, -30.0, 30.0, 30.0)])
            .unwrap()
    }

    #[test]
    fn validation_rejects_bad_rings() {
        assert!(matches!(
            WaterPolygon::new(vec![Vec2::ZERO, Vec2::new(1.0, 0.0)], vec![]),
            Err(WaterwayError::RingTooSmall { vertices: 2 })
        ));
        let bowtie = vec![
            Vec2::new(0.0, 0.0),
            Vec2::new(3.0, 2.0),
            Vec2::new(2.0, -1.0),
            Vec2::new(0.0, 2.0),
        ];
        assert_eq!(WaterPolygon::new(bowtie, vec![]).unwrap_err(), WaterwayError::SelfIntersectingRing);
        let hole_outside = WaterPolygon::new(rect(0.0, 0.0, 10.0, 10.0), vec![rect(20.0, 20.0, 30.0, 30.0)]);
        assert_eq!(hole_outside.unwrap_err(), WaterwayError::HoleNotInsideOuter { hole: 0 });
        let zero_area = vec![Vec2::new(0.0, 0.0), Vec2::new(1.0, 1.0), Vec2::new(2.0, 2.0)];
        assert_eq!(WaterPolygon::new(zero_area, vec![]).unwrap_err(), WaterwayError::DegenerateRing);
    }

    #[test]
    fn winding_is_normalised() {
        let mut cw = rect(0.0, 0.0, 10.0, 10.0);
        cw.reverse();
        let ccw_hole = rect(2.0, 2.0, 4.0, 4.0);
        let poly = WaterPolygon::new(cw, vec![ccw_hole]).unwrap();
        assert!(ring_area(poly.outer()) > 0.0);
        assert!(ring_area(&poly.holes()[0]) < 0.0);
    }

    #[test]
    fn containment_is_boundary_inclusive() {
        let poly = lake_with_island();
        assert!(poly.contains(Vec2::new(50.0, 50.0), 1e-9));
        assert!(poly.contains(Vec2::new(100.0, 0.0), 1e-9)); // shoreline
        assert!(poly.contains(Vec2::new(30.0, 0.0), 1e-9)); // island shore
        assert!(!poly.contains(Vec2::new(0.0, 0.0), 1e-9)); // island interior
        assert!(!poly.contains(Vec2::new(150.0, 0.0), 1e-9));
    }

    #[test]
    fn segments_respect_island() {
        let poly = lake_with_island();
        assert!(poly.segment_in_water(Vec2::new(-90.0, 0.0), Vec2::new(-40.0, 0.0)));
        assert!(!poly.segment_in_water(Vec2::new(-90.0, 0.0), Vec2::new(90.0, 0.0)));
        // Running along the island's west shore is allowed.
        assert!(poly.segment_in_water(Vec2::new(-30.0, -30.0), Vec2::new(-30.0, 30.0)));
        // Grazing an island corner is allowed.
        assert!(poly.segment_in_water(Vec2::new(-60.0, 0.0), Vec2::new(-30.0, 30.0)));
    }

    #[test]
    fn direct_route_in_a_plain_rectangle() {
        let poly = WaterPolygon::new(rect(0.0, 0.0, 100.0, 50.0), vec![]).unwrap();
        // 36 km/h = 10 m/s for a clean duration oracle.
        let p = water_shortest_path(&poly, Vec2::new(10.0, 10.0), Vec2::new(90.0, 40.0), 36.0)
            .unwrap()
            .unwrap();
        let expect = (7300.0_f64).sqrt();
        assert_relative_eq!(p.length_m, expect, max_relative = 1e-12);
        assert_relative_eq!(p.duration_s, expect / 10.0, max_relative = 1e-12);
        assert_eq!(p.waypoints.len(), 2);
    }

    #[test]
    fn island_detour_routes_around_corners() {
        // From (0,-60) to (0,60) around a 60x60 island centred on the origin:
        // two diagonal hops of 30*sqrt(2) plus 60 m along the island flank.
        let poly = lake_with_island();
        let p = water_shortest_path(&poly, Vec2::new(0.0, -60.0), Vec2::new(0.0, 60.0), 36.0)
            .unwrap()
            .unwrap();
        let expect = 60.0 + 60.0 * 2.0_f64.sqrt();
        assert_relative_eq!(p.length_m, expect, max_relative = 1e-9);
        assert_eq!(p.waypoints.len(), 4);
    }

    #[test]
    fn snapping_tolerates_half_a_metre() {
        let poly = WaterPolygon::new(rect(0.0, 0.0, 100.0, 50.0), vec![]).unwrap();
        // 0.3 m outside the south shore: snaps on.
        let p = water_shortest_path(&poly, Vec2::new(50.0, -0.3), Vec2::new(50.0, 40.0), 36.0)
            .unwrap()
            .unwrap();
        assert_relative_eq!(p.length_m, 40.0, epsilon = 0.31);
        // 0.8 m outside: hard error.
        let err = water_shortest_path(&poly, Vec2::new(50.0, -0.8), Vec2::new(50.0, 40.0), 36.0)
            .unwrap_err();
        assert!(matches!(err, WaterwayError::PointOutsideWater { .. }));
    }

    #[test]
    fn router_matches_one_shot_paths() {
        let poly = lake_with_island();
        let source = Vec2::new(0.0, -60.0);
        let router = WaterRouter::new(&poly, source, 36.0).unwrap();
        let targets = [
            Vec2::new(0.0, 60.0),
            Vec2::new(80.0, 80.0),
            Vec2::new(-90.0, 10.0),
            Vec2::new(40.0, 0.0),
            Vec2::new(0.0, -40.0),
        ];
        for t in targets {
            let via_path = water_shortest_path(&poly, source, t, 36.0).unwrap().unwrap();
            let via_router = router.shortest_length_m(t).unwrap();
            assert_relative_eq!(via_router, via_path.length_m, max_relative = 1e-12);
            assert_relative_eq!(
                router.shortest_duration_s(t).unwrap(),
                via_path.duration_s,
                max_relative = 1e-12
            );
        }
        // Outside the lake (and inside the island) there is no route.
        assert_eq!(router.shortest_length_m(Vec2::new(200.0, 0.0)), None);
        assert_eq!(router.shortest_length_m(Vec2::new(0.0, 0.0)), None);
    }

    #[test]
    fn visibility_graph_includes_shoreline_edges() {
        let poly = WaterPolygon::new(rect(0.0, 0.0, 10.0, 10.0), vec![]).unwrap();
        let vis = build_visibility_graph(&poly);
        assert_eq!(vis.vertices().len(), 4);
        // Convex rectangle: all vertex pairs see each other.
        for v in 0..4 {
            assert_eq!(vis.neighbours(v).len(), 3);
        }
    }
}
