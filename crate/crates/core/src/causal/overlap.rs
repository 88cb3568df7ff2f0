//! Can two embedded patterns share a vertex?
//!
//! Two patterns can overlap in some trivalent host exactly when they can be
//! glued along a nonempty set of vertex pairs so that every glued vertex
//! keeps degree at most 3: boundary half-edges can then be realised by the
//! other copy's edges or by filler attached outside. Gluing as many
//! parallel edges as possible gives the lowest degrees, so only that
//! choice needs checking, except when it makes both copies the same
//! subgraph of the same rule; then one edge class is left unglued.

use serde::Serialize;

use super::rule::{RuleGraph, RuleSet};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OverlapWitness {
    pub rule_a: usize,
    pub rule_b: usize,
    /// Glued vertex pairs `(vertex of a, vertex of b)`.
    pub shared: Vec<(usize, usize)>,
    /// The glued graph: vertices of `a` keep their numbers, the rest of `b`
    /// follows. Vertices may have degree below 3.
    pub vertices: usize,
    pub edges: Vec<[usize; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OverlapReport {
    pub overlap_free: bool,
    pub witness: Option<OverlapWitness>,
}

/// Whether no two pattern instances from `rules` can share a vertex,
/// except an instance with itself.
pub fn check_overlap_freedom(rules: &RuleSet) -> OverlapReport {
    for a in 0..rules.rules.len() {
        for b in a..rules.rules.len() {
            let (p, q) = (&rules.rules[a].pattern, &rules.rules[b].pattern);
            for k in 1..=p.vertices.min(q.vertices) {
                let mut found = None;
                let mut f = vec![None; p.vertices];
                injections(p.vertices, q.vertices, k, 0, &mut f, &mut |f| {
                    if found.is_none() {
                        found = glue(p, q, f, a == b).map(|(shared, edges)| OverlapWitness {
                            rule_a: a,
                            rule_b: b,
                            vertices: p.vertices + q.vertices - shared.len(),
                            shared,
                            edges,
                        });
                    }
                    found.is_some()
                });
                if found.is_some() {
                    return OverlapReport { overlap_free: false, witness: found };
                }
            }
        }
    }
    OverlapReport { overlap_free: true, witness: None }
}

/// Partial injections with exactly `k` mapped vertices, in lexicographic
/// order; stops when `visit` returns true.
fn injections(
    n: usize,
    m: usize,
    k: usize,
    v: usize,
    f: &mut Vec<Option<usize>>,
    visit: &mut impl FnMut(&[Option<usize>]) -> bool,
) -> bool {
    let mapped = f[..v].iter().filter(|x| x.is_some()).count();
    if mapped == k {
        return visit(f);
    }
    if v == n || n - v < k - mapped {
        return false;
    }
    for w in 0..m {
        if f[..v].contains(&Some(w)) {
            continue;
        }
        f[v] = Some(w);
        if injections(n, m, k, v + 1, f, visit) {
            f[v] = None;
            return true;
        }
    }
    f[v] = None;
    injections(n, m, k, v + 1, f, visit)
}

/// Tries the gluing `f`; returns the shared pairs and glued edge list when
/// it fits in a trivalent host as a genuine overlap.
fn glue(p: &RuleGraph, q: &RuleGraph, f: &[Option<usize>], same_rule: bool) -> Option<(Vec<(usize, usize)>, Vec<[usize; 2]>)> {
    let shared: Vec<(usize, usize)> = f.iter().enumerate().filter_map(|(u, w)| w.map(|w| (u, w))).collect();
    // glued edge classes: (u, v) in p with u <= v, count
    let mut classes: Vec<((usize, usize), usize)> = Vec::new();
    for (i, &(u, fu)) in shared.iter().enumerate() {
        for &(v, fv) in &shared[i..] {
            let n = p.multiplicity(u, v).min(q.multiplicity(fu, fv));
            if n > 0 {
                classes.push(((u, v), n));
            }
        }
    }
    let degree = |classes: &[((usize, usize), usize)], u: usize, fu: usize| {
        let glued: usize = classes
            .iter()
            .map(|&((a, b), n)| if a == u && b == u { 2 * n } else if a == u || b == u { n } else { 0 })
            .sum();
        p.internal_degree(u) + q.internal_degree(fu) - glued
    };
    let fits = |classes: &[((usize, usize), usize)]| shared.iter().all(|&(u, fu)| degree(classes, u, fu) <= 3);
    if !fits(&classes) {
        return None;
    }
    let whole = shared.len() == p.vertices && p.vertices == q.vertices;
    let identical = same_rule && whole && classes.iter().map(|c| c.1).sum::<usize>() == p.edges.len();
    let chosen = if identical {
        (0..classes.len()).find_map(|i| {
            let mut fewer = classes.clone();
            fewer[i].1 -= 1;
            fits(&fewer).then_some(fewer)
        })?
    } else {
        classes
    };
    Some((shared.clone(), glued_edges(p, q, f, &chosen)))
}

fn glued_edges(p: &RuleGraph, q: &RuleGraph, f: &[Option<usize>], classes: &[((usize, usize), usize)]) -> Vec<[usize; 2]> {
    // number q's vertices: glued ones take p's number, the rest follow
    let mut name = vec![usize::MAX; q.vertices];
    for (u, w) in f.iter().enumerate() {
        if let Some(w) = w {
            name[*w] = u;
        }
    }
    let mut next = p.vertices;
    for slot in name.iter_mut().filter(|s| **s == usize::MAX) {
        *slot = next;
        next += 1;
    }
    let mut edges = p.edges.clone();
    let mut skip: Vec<((usize, usize), usize)> = classes.to_vec();
    for &[a, b] in &q.edges {
        let (x, y) = (name[a].min(name[b]), name[a].max(name[b]));
        if let Some(c) = skip.iter_mut().find(|c| c.0 == (x, y) && c.1 > 0) {
            c.1 -= 1;
            continue;
        }
        edges.push([x, y]);
    }
    edges
}
