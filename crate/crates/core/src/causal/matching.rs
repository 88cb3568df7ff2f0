use std::collections::BTreeMap;

use serde::Serialize;

use super::graph::{EdgeEnd, EdgeId, EventId, SpaceGraph, VertexId};
use super::rule::{RuleGraph, UpdateRule, MAX_PATTERN_VERTICES};
use super::CausalError;

/// An embedding of a rule's pattern.
///
/// `vertices[p]` hosts pattern vertex `p`, `internal[i]` is the host edge
/// for pattern edge `i`, and `boundary[j]` is the host edge end playing
/// boundary half-edge `j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Match {
    pub vertices: Vec<VertexId>,
    pub internal: Vec<EdgeId>,
    pub boundary: Vec<EdgeEnd>,
}

impl Match {
    /// The matched subgraph, independent of how the pattern was mapped.
    pub fn image(&self) -> (Vec<VertexId>, Vec<EdgeId>) {
        let mut v = self.vertices.clone();
        v.sort_unstable();
        let mut e = self.internal.clone();
        e.sort_unstable();
        (v, e)
    }
}

/// Pattern vertices in search order, each after the first with a pattern
/// neighbour placed earlier.
fn search_order(p: &RuleGraph) -> Vec<(usize, Option<usize>)> {
    let mut order = vec![(0, None)];
    let mut placed = vec![false; p.vertices];
    placed[0] = true;
    let mut i = 0;
    while i < order.len() {
        let v = order[i].0;
        for &[a, b] in &p.edges {
            for (x, y) in [(a, b), (b, a)] {
                if x == v && !placed[y] {
                    placed[y] = true;
                    order.push((y, Some(v)));
                }
            }
        }
        i += 1;
    }
    order
}

/// Every way of embedding `rule`'s pattern in `g`, one per matched
/// subgraph, sorted by host vertex tuple.
pub fn find_matches(g: &SpaceGraph, rule: &UpdateRule) -> Result<Vec<Match>, CausalError> {
    let p = &rule.pattern;
    if p.vertices > MAX_PATTERN_VERTICES {
        return Err(CausalError::PatternTooLarge { vertices: p.vertices, limit: MAX_PATTERN_VERTICES });
    }
    let order = search_order(p);
    let mut best: BTreeMap<(Vec<VertexId>, Vec<EdgeId>), Match> = BTreeMap::new();
    let mut phi = vec![VertexId::MAX; p.vertices];
    for root in g.vertices() {
        phi[order[0].0] = root;
        place(g, p, &order, 1, &mut phi, &mut |m| {
            let key = m.image();
            match best.get(&key) {
                Some(old) if *old <= m => {}
                _ => {
                    best.insert(key, m);
                }
            }
        });
    }
    let mut out: Vec<Match> = best.into_values().collect();
    out.sort();
    Ok(out)
}

fn place(
    g: &SpaceGraph,
    p: &RuleGraph,
    order: &[(usize, Option<usize>)],
    k: usize,
    phi: &mut Vec<VertexId>,
    emit: &mut impl FnMut(Match),
) {
    if k == order.len() {
        assign_edges(g, p, phi, emit);
        return;
    }
    let (v, parent) = order[k];
    let mut candidates: Vec<VertexId> = g.neighbours(phi[parent.expect("connected pattern")]).collect();
    candidates.sort_unstable();
    candidates.dedup();
    for c in candidates {
        if order[..k].iter().any(|&(u, _)| phi[u] == c) {
            continue;
        }
        phi[v] = c;
        place(g, p, order, k + 1, phi, emit);
    }
    phi[v] = VertexId::MAX;
}

/// Host edges between `a` and `b` (self-loops when equal), sorted.
fn host_edges(g: &SpaceGraph, a: VertexId, b: VertexId) -> Vec<EdgeId> {
    let mut es: Vec<EdgeId> = g
        .ends_at(a)
        .iter()
        .filter(|end| g.edge(end.edge).expect("incident edge").other(end.side) == b)
        .map(|end| end.edge)
        .collect();
    es.sort_unstable();
    es.dedup();
    es
}

fn assign_edges(g: &SpaceGraph, p: &RuleGraph, phi: &[VertexId], emit: &mut impl FnMut(Match)) {
    // group pattern edges by unordered endpoint pair
    let mut groups: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (i, &[a, b]) in p.edges.iter().enumerate() {
        groups.entry((a.min(b), a.max(b))).or_default().push(i);
    }
    let mut options: Vec<(Vec<usize>, Vec<Vec<EdgeId>>)> = Vec::new();
    for ((a, b), idx) in groups {
        let hosts = host_edges(g, phi[a], phi[b]);
        let combos = combinations(&hosts, idx.len());
        if combos.is_empty() {
            return;
        }
        options.push((idx, combos));
    }
    let mut internal = vec![EdgeId::MAX; p.edges.len()];
    choose(g, p, phi, &options, 0, &mut internal, emit);
}

fn choose(
    g: &SpaceGraph,
    p: &RuleGraph,
    phi: &[VertexId],
    options: &[(Vec<usize>, Vec<Vec<EdgeId>>)],
    k: usize,
    internal: &mut Vec<EdgeId>,
    emit: &mut impl FnMut(Match),
) {
    if k == options.len() {
        let mut boundary = vec![EdgeEnd { edge: 0, side: 0 }; p.boundary.len()];
        for (v, &host) in phi.iter().enumerate() {
            let free: Vec<EdgeEnd> = g.ends_at(host).iter().copied().filter(|end| !internal.contains(&end.edge)).collect();
            let slots = p.boundary_at(v);
            debug_assert_eq!(free.len(), slots.len());
            for (slot, end) in slots.into_iter().zip(free) {
                boundary[slot] = end;
            }
        }
        emit(Match { vertices: phi.to_vec(), internal: internal.clone(), boundary });
        return;
    }
    let (idx, combos) = &options[k];
    for combo in combos {
        for (&i, &e) in idx.iter().zip(combo) {
            internal[i] = e;
        }
        choose(g, p, phi, options, k + 1, internal, emit);
    }
}

fn combinations(items: &[EdgeId], r: usize) -> Vec<Vec<EdgeId>> {
    if r == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        for mut rest in combinations(&items[i + 1..], r - 1) {
            rest.insert(0, items[i]);
            out.push(rest);
        }
    }
    out
}

/// Whether `m` is still a valid embedding of `rule` in `g`.
pub fn is_current(g: &SpaceGraph, rule: &UpdateRule, m: &Match) -> bool {
    let p = &rule.pattern;
    if m.vertices.len() != p.vertices || m.internal.len() != p.edges.len() || m.boundary.len() != p.boundary.len() {
        return false;
    }
    let mut vs = m.vertices.clone();
    vs.sort_unstable();
    vs.dedup();
    if vs.len() != m.vertices.len() || !vs.iter().all(|&v| g.contains_vertex(v)) {
        return false;
    }
    let mut es = m.internal.clone();
    es.sort_unstable();
    es.dedup();
    if es.len() != m.internal.len() {
        return false;
    }
    for (&e, &[a, b]) in m.internal.iter().zip(&p.edges) {
        let Some(edge) = g.edge(e) else { return false };
        let mut want = [m.vertices[a], m.vertices[b]];
        let mut got = edge.ends;
        want.sort_unstable();
        got.sort_unstable();
        if want != got {
            return false;
        }
    }
    let mut ends = m.boundary.clone();
    ends.sort_unstable();
    ends.dedup();
    if ends.len() != m.boundary.len() {
        return false;
    }
    m.boundary.iter().zip(&p.boundary).all(|(end, &v)| {
        !m.internal.contains(&end.edge) && g.edge(end.edge).is_some_and(|e| e.ends[usize::from(end.side)] == m.vertices[v])
    })
}

/// Creation tags of everything a match touches: its vertices, internal
/// edges and boundary edges.
pub fn site_tags(g: &SpaceGraph, m: &Match) -> Vec<EventId> {
    let mut tags: Vec<EventId> = m
        .vertices
        .iter()
        .filter_map(|&v| g.vertex_tag(v))
        .chain(m.internal.iter().chain(m.boundary.iter().map(|end| &end.edge)).filter_map(|&e| g.edge(e).map(|e| e.tag)))
        .collect();
    tags.sort_unstable();
    tags.dedup();
    tags
}

/// Splices `rule`'s replacement in place of the match, tagging new
/// vertices and edges with a fresh event id, which is returned. Boundary
/// edges keep their ids and tags.
pub fn apply_in_place(g: &mut SpaceGraph, rule: &UpdateRule, m: &Match) -> Result<EventId, CausalError> {
    if !is_current(g, rule, m) {
        return Err(CausalError::StaleSite);
    }
    let event = g.begin_event();
    for &e in &m.internal {
        g.remove_edge(e);
    }
    let r = &rule.replacement;
    let fresh: Vec<VertexId> = (0..r.vertices).map(|_| g.add_vertex(event)).collect();
    for &[a, b] in &r.edges {
        g.add_edge(fresh[a], fresh[b], event);
    }
    for (&end, &v) in m.boundary.iter().zip(&r.boundary) {
        g.reattach(end, fresh[v]);
    }
    for &v in &m.vertices {
        g.remove_vertex(v);
    }
    for &v in &fresh {
        assert_eq!(g.ends_at(v).len(), 3, "splice left vertex {v} with the wrong degree");
    }
    Ok(event)
}

/// [`apply_in_place`] on a copy.
pub fn apply_rule(g: &SpaceGraph, rule: &UpdateRule, m: &Match) -> Result<SpaceGraph, CausalError> {
    let mut out = g.clone();
    apply_in_place(&mut out, rule, m)?;
    Ok(out)
}
