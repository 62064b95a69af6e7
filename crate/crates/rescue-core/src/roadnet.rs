//! Directed road network with congestion-scaled travel times and
//! deterministic shortest paths.
//!
//! Nodes are stored sorted by id, so node indices follow lexicographic id
//! order and every tie-break on indices is a tie-break on ids. Shortest-path
//! ties are resolved towards the lexicographically smallest node-id sequence,
//! which keeps query results stable across runs and platforms.

use alloc::collections::BTreeMap;
use alloc::collections::BinaryHeap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::geom::Vec2;

/// Km/h to m/s.
const KMH: f64 = 1.0 / 3.6;

#[derive(Clone, Debug, PartialEq)]
pub enum RoadnetError {
    DuplicateNodeId { id: String },
    UnknownNode { id: String },
    /// Edge lengths and speeds must be strictly positive and finite.
    InvalidEdge { from: String, to: String },
    InvalidSpeed { value: f64 },
    EmptyGraph,
}

impl fmt::Display for RoadnetError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RoadnetError::DuplicateNodeId { id } => write!(f, "duplicate road node id `{id}`"),
            RoadnetError::UnknownNode { id } => write!(f, "unknown road node id `{id}`"),
            RoadnetError::InvalidEdge { from, to } => {
                write!(f, "edge `{from}` -> `{to}` needs positive finite length and speed")
            }
            RoadnetError::InvalidSpeed { value } => {
                write!(f, "speed values must be positive and finite, got {value}")
            }
            RoadnetError::EmptyGraph => write!(f, "road graph has no nodes"),
        }
    }
}

impl core::error::Error for RoadnetError {}

/// Travel time in seconds over one edge, scaled by the congestion factor.
pub fn edge_travel_time(length_m: f64, speed_kmh: f64, speed_factor: f64) -> Result<f64, RoadnetError> {
    if !(speed_kmh.is_finite() && speed_kmh > 0.0) {
        return Err(RoadnetError::InvalidSpeed { value: speed_kmh });
    }
    if !(speed_factor.is_finite() && speed_factor > 0.0) {
        return Err(RoadnetError::InvalidSpeed { value: speed_factor });
    }
    Ok(length_m / (speed_kmh * KMH) * speed_factor)
}

/// Directed edge description by node id, as ingested from a scenario.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeSpec {
    pub from: String,
    pub to: String,
    pub length_m: f64,
    pub speed_kmh: f64,
}

#[derive(Clone, Debug)]
struct Arc {
    to: usize,
    length_m: f64,
    speed_kmh: f64,
}

/// Shortest-path query result: total duration plus the node-id sequence.
#[derive(Clone, Debug, PartialEq)]
pub struct RoadPath {
    pub duration_s: f64,
    pub node_ids: Vec<String>,
}

/// A directed road graph over named nodes with planar positions.
#[derive(Clone, Debug)]
pub struct RoadGraph {
    ids: Vec<String>,
    positions: Vec<Vec2>,
    adjacency: Vec<Vec<Arc>>,
    index: BTreeMap<String, usize>,
}

impl RoadGraph {
    /// Build a graph from `(id, position)` nodes and directed edges.
    ///
    /// Node ids must be unique and every edge endpoint must resolve; edge
    /// lengths and speeds must be positive and finite. Bidirectional roads
    /// are represented as two directed edges by the caller.
    pub fn new(nodes: Vec<(String, Vec2)>, edges: Vec<EdgeSpec>) -> Result<Self, RoadnetError> {
        let mut sorted = nodes;
        sorted.sort_by(|a, b| a.0.cmp(&b.0));
        let mut index = BTreeMap::new();
        let mut ids = Vec::with_capacity(sorted.len());
        let mut positions = Vec::with_capacity(sorted.len());
        for (i, (id, pos)) in sorted.into_iter().enumerate() {
            if index.insert(id.clone(), i).is_some() {
                return Err(RoadnetError::DuplicateNodeId { id });
            }
            ids.push(id);
            positions.push(pos);
        }
        let mut adjacency = vec![Vec::new(); ids.len()];
        for e in edges {
            let from = *index
                .get(&e.from)
                .ok_or(RoadnetError::UnknownNode { id: e.from.clone() })?;
            let to = *index
                .get(&e.to)
                .ok_or(RoadnetError::UnknownNode { id: e.to.clone() })?;
            let ok = e.length_m.is_finite()
                && e.length_m > 0.0
                && e.speed_kmh.is_finite()
                && e.speed_kmh > 0.0;
            if !ok {
                return Err(RoadnetError::InvalidEdge { from: e.from, to: e.to });
            }
            adjacency[from].push(Arc { to, length_m: e.length_m, speed_kmh: e.speed_kmh });
        }
        // Deterministic relaxation order regardless of input edge order.
        for arcs in &mut adjacency {
            arcs.sort_by(|a, b| a.to.cmp(&b.to).then(a.length_m.total_cmp(&b.length_m)));
        }
        Ok(RoadGraph { ids, positions, adjacency, index })
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn node_index(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn node_id(&self, idx: usize) -> &str {
        &self.ids[idx]
    }

    pub fn node_position(&self, idx: usize) -> Vec2 {
        self.positions[idx]
    }

    /// Index of the node closest to `p`; ties fall to the smaller id.
    pub fn nearest_node(&self, p: Vec2) -> Option<usize> {
        let mut best: Option<(f64, usize)> = None;
        for (i, pos) in self.positions.iter().enumerate() {
            let d = pos.dist(p);
            let better = match best {
                None => true,
                Some((bd, _)) => d < bd,
            };
            if better {
                best = Some((d, i));
            }
        }
        best.map(|(_, i)| i)
    }

    /// One-to-all shortest travel times (seconds) from node index `src`.
    pub fn times_from_node(&self, src: usize, speed_factor: f64) -> Result<Vec<f64>, RoadnetError> {
        Ok(self.dijkstra(src, speed_factor)?.0)
    }

    /// Shortest travel time and lexicographically smallest tied path
    /// between two node ids. `Ok(None)` when `dest` is unreachable.
    pub fn shortest_travel_time(
        &self,
        source: &str,
        dest: &str,
        speed_factor: f64,
    ) -> Result<Option<RoadPath>, RoadnetError> {
        let src = self
            .node_index(source)
            .ok_or_else(|| RoadnetError::UnknownNode { id: source.into() })?;
        let dst = self
            .node_index(dest)
            .ok_or_else(|| RoadnetError::UnknownNode { id: dest.into() })?;
        let (dist, pred) = self.dijkstra(src, speed_factor)?;
        if !dist[dst].is_finite() {
            return Ok(None);
        }
        let node_ids = chain_to(&pred, src, dst)
            .into_iter()
            .map(|i| self.ids[i].clone())
            .collect();
        Ok(Some(RoadPath { duration_s: dist[dst], node_ids }))
    }

    /// Door-to-slipway travel time: walk from `station` to its nearest road
    /// node, drive to the node nearest `access`, walk the rest. `Ok(None)`
    /// when the two nodes are not connected.
    pub fn station_to_access_time(
        &self,
        station: Vec2,
        access: Vec2,
        speed_factor: f64,
        walk_speed_kmh: f64,
    ) -> Result<Option<f64>, RoadnetError> {
        if !(walk_speed_kmh.is_finite() && walk_speed_kmh > 0.0) {
            return Err(RoadnetError::InvalidSpeed { value: walk_speed_kmh });
        }
        let src = self.nearest_node(station).ok_or(RoadnetError::EmptyGraph)?;
        let dst = self.nearest_node(access).ok_or(RoadnetError::EmptyGraph)?;
        let (dist, _) = self.dijkstra(src, speed_factor)?;
        if !dist[dst].is_finite() {
            return Ok(None);
        }
        let walk = |d: f64| d / (walk_speed_kmh * KMH);
        let total = walk(station.dist(self.positions[src]))
            + dist[dst]
            + walk(access.dist(self.positions[dst]));
        Ok(Some(total))
    }

    /// Dijkstra from `src`; returns per-node distances and predecessors
    /// (`usize::MAX` marks "none"). On equal-cost paths the predecessor is
    /// switched whenever the challenger's node-id sequence is smaller.
    fn dijkstra(&self, src: usize, speed_factor: f64) -> Result<(Vec<f64>, Vec<usize>), RoadnetError> {
        if self.ids.is_empty() {
            return Err(RoadnetError::EmptyGraph);
        }
        let n = self.ids.len();
        let mut dist = vec![f64::INFINITY; n];
        let mut pred = vec![usize::MAX; n];
        let mut heap = BinaryHeap::new();
        dist[src] = 0.0;
        heap.push(MinEntry { cost: 0.0, node: src });
        while let Some(MinEntry { cost, node }) = heap.pop() {
            if cost > dist[node] {
                continue; // stale entry
            }
            for arc in &self.adjacency[node] {
                let w = edge_travel_time(arc.length_m, arc.speed_kmh, speed_factor)?;
                let next = cost + w;
                if next < dist[arc.to] {
                    dist[arc.to] = next;
                    pred[arc.to] = node;
                    heap.push(MinEntry { cost: next, node: arc.to });
                } else if next == dist[arc.to] && pred[arc.to] != usize::MAX && node != pred[arc.to]
                {
                    // Both prefixes are final here: with positive weights an
                    // equal-cost relaxation can only arrive after the prefix
                    // endpoints are settled.
                    let challenger = self.id_sequence(&pred, src, node, arc.to);
                    let incumbent = self.id_sequence(&pred, src, pred[arc.to], arc.to);
                    if challenger < incumbent {
                        pred[arc.to] = node;
                    }
                }
            }
        }
        Ok((dist, pred))
    }

    fn id_sequence(&self, pred: &[usize], src: usize, tail: usize, last: usize) -> Vec<&str> {
        let mut ids: Vec<&str> = chain_to(pred, src, tail)
            .into_iter()
            .map(|i| self.ids[i].as_str())
            .collect();
        ids.push(&self.ids[last]);
        ids
    }
}

/// Walk the predecessor chain from `dst` back to `src`, returned in forward order.
fn chain_to(pred: &[usize], src: usize, dst: usize) -> Vec<usize> {
    let mut path = vec![dst];
    let mut cur = dst;
    while cur != src {
        cur = pred[cur];
        path.push(cur);
    }
    path.reverse();
    path
}

#[derive(PartialEq)]
struct MinEntry {
    cost: f64,
    node: usize,
}

impl Eq for MinEntry {}

impl Ord for MinEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        // Reverse cost ordering turns the max-heap into a min-heap; equal
        // costs pop the smaller node index (= smaller id) first.
        other
            .cost
            .total_cmp(&self.cost)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for MinEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
