//! Standard trivalent graphs.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::graph::{SpaceGraph, VertexId};

fn build(n: u32, edges: &[[VertexId; 2]]) -> SpaceGraph {
    let vertices: Vec<VertexId> = (0..n).collect();
    SpaceGraph::from_edges(&vertices, edges).expect("generator output is trivalent")
}

pub fn complete4() -> SpaceGraph {
    build(4, &[[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]])
}

/// `K_{3,3}`: parts `{0, 1, 2}` and `{3, 4, 5}`.
pub fn complete_bipartite33() -> SpaceGraph {
    let edges: Vec<[VertexId; 2]> = (0..3).flat_map(|a| (3..6).map(move |b| [a, b])).collect();
    build(6, &edges)
}

/// Two vertices joined by three parallel edges.
pub fn theta() -> SpaceGraph {
    build(2, &[[0, 1], [0, 1], [0, 1]])
}

/// Two `n`-cycles joined by rungs: outer `i`, inner `n + i`. Needs `n >= 3`.
pub fn prism_ladder(n: u32) -> SpaceGraph {
    assert!(n >= 3, "prism ladder needs at least 3 rungs");
    let mut edges = Vec::new();
    for i in 0..n {
        let j = (i + 1) % n;
        edges.push([i, j]);
        edges.push([n + i, n + j]);
        edges.push([i, n + i]);
    }
    build(2 * n, &edges)
}

/// Hexagonal lattice on a `width x height` torus in brick-wall form: cell
/// `(x, y)` is vertex `y * width + x`, joined to its horizontal neighbours
/// and to the cell above when `x + y` is even. Both sides must be even and
/// at least 4.
pub fn hex_torus(width: u32, height: u32) -> SpaceGraph {
    assert!(width >= 4 && height >= 4 && width % 2 == 0 && height % 2 == 0, "hex torus needs even sides >= 4");
    let id = |x: u32, y: u32| (y % height) * width + (x % width);
    let mut edges = Vec::new();
    for y in 0..height {
        for x in 0..width {
            edges.push([id(x, y), id(x + 1, y)]);
            if (x + y) % 2 == 0 {
                edges.push([id(x, y), id(x, y + 1)]);
            }
        }
    }
    build(width * height, &edges)
}

/// Disjoint union, renumbering vertices consecutively in order.
pub fn disjoint_union(parts: &[SpaceGraph]) -> SpaceGraph {
    let mut edges = Vec::new();
    let mut offset = 0;
    for g in parts {
        let ids: Vec<VertexId> = g.vertices().collect();
        let index = |v: VertexId| offset + ids.binary_search(&v).expect("vertex exists") as u32;
        edges.extend(g.edges().map(|(_, e)| e.ends.map(index)));
        offset += ids.len() as u32;
    }
    build(offset, &edges)
}

/// Random trivalent multigraph on `n` vertices (`n` even) by pairing
/// half-edges uniformly; loops and parallel edges are allowed.
pub fn random_trivalent(n: u32, seed: u64) -> SpaceGraph {
    assert!(n % 2 == 0, "a trivalent graph has an even number of vertices");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stubs: Vec<VertexId> = (0..n).flat_map(|v| [v; 3]).collect();
    stubs.shuffle(&mut rng);
    let edges: Vec<[VertexId; 2]> = stubs.chunks(2).map(|p| [p[0], p[1]]).collect();
    build(n, &edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shapes() {
        assert_eq!(complete4().edge_count(), 6);
        assert_eq!(complete_bipartite33().eccentricity(0), Some(2));
        assert_eq!(prism_ladder(200).vertex_count(), 400);
        let h = hex_torus(40, 40);
        assert_eq!((h.vertex_count(), h.edge_count()), (1600, 2400));
        assert_eq!(random_trivalent(10, 3).edge_count(), 15);
        assert_eq!(random_trivalent(10, 3), random_trivalent(10, 3));
    }

    #[test]
    fn prism_ball_growth_is_linear() {
        let g = prism_ladder(50);
        let b = g.ball_sizes(0, 10);
        for r in 1..=10 {
            assert_eq!(b[r], 4 * r as u64);
        }
    }

    #[test]
    fn hex_torus_has_hexagonal_faces() {
        // in the honeycomb the sphere of radius r has 3r vertices for small r
        let g = hex_torus(40, 40);
        let b = g.ball_sizes(id(10, 10), 6);
        let spheres: Vec<u64> = b.windows(2).map(|w| w[1] - w[0]).collect();
        assert_eq!(spheres, vec![3, 6, 9, 12, 15, 18]);
    }

    fn id(x: u32, y: u32) -> u32 {
        y * 40 + x
    }
}
