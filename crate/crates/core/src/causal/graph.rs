use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::CausalError;

pub type VertexId = u32;
pub type EdgeId = u32;
/// Index of the event that created an element; 0 for the initial graph.
pub type EventId = u32;

/// One end of an edge: `side` 0 or 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct EdgeEnd {
    pub edge: EdgeId,
    pub side: u8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Edge {
    pub ends: [VertexId; 2],
    pub tag: EventId,
}

impl Edge {
    pub fn other(&self, side: u8) -> VertexId {
        self.ends[usize::from(1 - side)]
    }
}

/// Undirected trivalent multigraph with creation tags on vertices and edges.
///
/// Self-loops contribute two to a vertex's degree. Vertex and edge ids are
/// never reused.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpaceGraph {
    vertices: BTreeMap<VertexId, EventId>,
    edges: BTreeMap<EdgeId, Edge>,
    incident: BTreeMap<VertexId, Vec<EdgeEnd>>,
    next_vertex: VertexId,
    next_edge: EdgeId,
    events: EventId,
}

/// File form of a graph: vertex ids, edge endpoint pairs, and optional
/// creation tags parallel to each list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphFile {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<[VertexId; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertex_tags: Option<Vec<EventId>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edge_tags: Option<Vec<EventId>>,
}

impl SpaceGraph {
    pub fn empty() -> Self {
        SpaceGraph {
            vertices: BTreeMap::new(),
            edges: BTreeMap::new(),
            incident: BTreeMap::new(),
            next_vertex: 0,
            next_edge: 0,
            events: 0,
        }
    }

    /// Builds a graph on the given vertex ids; every vertex must end up with
    /// degree 3.
    pub fn from_edges(vertices: &[VertexId], edges: &[[VertexId; 2]]) -> Result<Self, CausalError> {
        let mut g = SpaceGraph::empty();
        for &v in vertices {
            if g.vertices.insert(v, 0).is_some() {
                return Err(CausalError::DuplicateVertex(v));
            }
            g.incident.insert(v, Vec::new());
            g.next_vertex = g.next_vertex.max(v + 1);
        }
        for &[a, b] in edges {
            for v in [a, b] {
                if !g.vertices.contains_key(&v) {
                    return Err(CausalError::UnknownVertex(v));
                }
            }
            g.add_edge(a, b, 0);
        }
        g.check_trivalent()?;
        Ok(g)
    }

    pub fn from_file(f: &GraphFile) -> Result<Self, CausalError> {
        let mut g = SpaceGraph::from_edges(&f.vertices, &f.edges)?;
        if let Some(tags) = &f.vertex_tags {
            for (v, t) in f.vertices.iter().zip(tags) {
                g.vertices.insert(*v, *t);
            }
        }
        if let Some(tags) = &f.edge_tags {
            for (e, t) in g.edges.values_mut().zip(tags) {
                e.tag = *t;
            }
        }
        g.events = g.vertices.values().chain(g.edges.values().map(|e| &e.tag)).copied().max().unwrap_or(0);
        Ok(g)
    }

    pub fn to_file(&self) -> GraphFile {
        let tagged = self.events > 0;
        GraphFile {
            vertices: self.vertices.keys().copied().collect(),
            edges: self.edges.values().map(|e| e.ends).collect(),
            vertex_tags: tagged.then(|| self.vertices.values().copied().collect()),
            edge_tags: tagged.then(|| self.edges.values().map(|e| e.tag).collect()),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices.keys().copied()
    }

    pub fn edges(&self) -> impl Iterator<Item = (EdgeId, &Edge)> + '_ {
        self.edges.iter().map(|(&id, e)| (id, e))
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.vertices.contains_key(&v)
    }

    pub fn vertex_tag(&self, v: VertexId) -> Option<EventId> {
        self.vertices.get(&v).copied()
    }

    pub fn edge(&self, e: EdgeId) -> Option<&Edge> {
        self.edges.get(&e)
    }

    /// Edge ends at `v`, sorted.
    pub fn ends_at(&self, v: VertexId) -> &[EdgeEnd] {
        self.incident.get(&v).map_or(&[], Vec::as_slice)
    }

    /// Neighbours of `v` with multiplicity, in edge-end order.
    pub fn neighbours(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.ends_at(v).iter().map(|end| self.edges[&end.edge].other(end.side))
    }

    /// Number of events applied so far.
    pub fn events(&self) -> EventId {
        self.events
    }

    pub fn check_trivalent(&self) -> Result<(), CausalError> {
        for (&v, ends) in &self.incident {
            if ends.len() != 3 {
                return Err(CausalError::NotTrivalent { vertex: v, degree: ends.len() });
            }
        }
        Ok(())
    }

    pub(crate) fn add_vertex(&mut self, tag: EventId) -> VertexId {
        let v = self.next_vertex;
        self.next_vertex += 1;
        self.vertices.insert(v, tag);
        self.incident.insert(v, Vec::new());
        v
    }

    pub(crate) fn add_edge(&mut self, a: VertexId, b: VertexId, tag: EventId) -> EdgeId {
        let e = self.next_edge;
        self.next_edge += 1;
        self.edges.insert(e, Edge { ends: [a, b], tag });
        self.attach(a, EdgeEnd { edge: e, side: 0 });
        self.attach(b, EdgeEnd { edge: e, side: 1 });
        e
    }

    fn attach(&mut self, v: VertexId, end: EdgeEnd) {
        let ends = self.incident.get_mut(&v).expect("vertex exists");
        let pos = ends.binary_search(&end).unwrap_or_else(|p| p);
        ends.insert(pos, end);
    }

    pub(crate) fn remove_edge(&mut self, e: EdgeId) {
        if let Some(edge) = self.edges.remove(&e) {
            for (side, v) in edge.ends.into_iter().enumerate() {
                if let Some(ends) = self.incident.get_mut(&v) {
                    ends.retain(|end| *end != EdgeEnd { edge: e, side: side as u8 });
                }
            }
        }
    }

    pub(crate) fn remove_vertex(&mut self, v: VertexId) {
        self.vertices.remove(&v);
        self.incident.remove(&v);
    }

    /// Moves one end of an edge to another vertex.
    pub(crate) fn reattach(&mut self, end: EdgeEnd, to: VertexId) {
        let edge = self.edges.get_mut(&end.edge).expect("edge exists");
        let from = edge.ends[usize::from(end.side)];
        edge.ends[usize::from(end.side)] = to;
        if let Some(ends) = self.incident.get_mut(&from) {
            ends.retain(|x| *x != end);
        }
        self.attach(to, end);
    }

    pub(crate) fn begin_event(&mut self) -> EventId {
        self.events += 1;
        self.events
    }

    /// Ball sizes `|B(v, r)|` for `r = 0..=r_max`.
    pub fn ball_sizes(&self, v: VertexId, r_max: usize) -> Vec<u64> {
        let mut dist: BTreeMap<VertexId, usize> = BTreeMap::new();
        let mut layer = vec![0u64; r_max + 1];
        let mut queue = VecDeque::from([v]);
        dist.insert(v, 0);
        while let Some(u) = queue.pop_front() {
            let d = dist[&u];
            layer[d] += 1;
            if d == r_max {
                continue;
            }
            for w in self.neighbours(u) {
                if let Entry::Vacant(slot) = dist.entry(w) {
                    slot.insert(d + 1);
                    queue.push_back(w);
                }
            }
        }
        layer
            .iter()
            .scan(0, |acc, &x| {
                *acc += x;
                Some(*acc)
            })
            .collect()
    }

    /// Largest distance from `v`, or `None` if some vertex is unreachable.
    pub fn eccentricity(&self, v: VertexId) -> Option<usize> {
        let mut dist: BTreeMap<VertexId, usize> = BTreeMap::new();
        let mut queue = VecDeque::from([v]);
        dist.insert(v, 0);
        let mut far = 0;
        while let Some(u) = queue.pop_front() {
            let d = dist[&u];
            far = far.max(d);
            for w in self.neighbours(u) {
                if let Entry::Vacant(slot) = dist.entry(w) {
                    slot.insert(d + 1);
                    queue.push_back(w);
                }
            }
        }
        (dist.len() == self.vertices.len()).then_some(far)
    }

    /// As a petgraph graph, vertices in id order.
    pub fn to_petgraph(&self) -> petgraph::graph::UnGraph<VertexId, EdgeId> {
        let mut g = petgraph::graph::UnGraph::new_undirected();
        let index: BTreeMap<VertexId, _> = self.vertices.keys().map(|&v| (v, g.add_node(v))).collect();
        for (&id, e) in &self.edges {
            g.add_edge(index[&e.ends[0]], index[&e.ends[1]], id);
        }
        g
    }

    /// Same graph with vertex ids replaced through `relabel`, tags dropped.
    pub fn relabelled(&self, relabel: impl Fn(VertexId) -> VertexId) -> Result<Self, CausalError> {
        let vertices: Vec<VertexId> = self.vertices.keys().map(|&v| relabel(v)).collect();
        let edges: Vec<[VertexId; 2]> = self.edges.values().map(|e| e.ends.map(&relabel)).collect();
        SpaceGraph::from_edges(&vertices, &edges)
    }
}

/// Whether the two graphs are isomorphic as untagged multigraphs.
pub fn isomorphic(a: &SpaceGraph, b: &SpaceGraph) -> bool {
    petgraph::algo::is_isomorphic(&a.to_petgraph(), &b.to_petgraph())
}
