use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::CausalError;

/// Largest pattern accepted by matching and overlap checks.
pub const MAX_PATTERN_VERTICES: usize = 8;

/// A small graph with numbered boundary half-edges.
///
/// Vertices are `0..vertices`; `boundary[i]` is the vertex carrying
/// half-edge `i`. Every vertex has degree 3 counting internal edge ends
/// (loops twice) and boundary half-edges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleGraph {
    pub vertices: usize,
    #[serde(default)]
    pub edges: Vec<[usize; 2]>,
    #[serde(default)]
    pub boundary: Vec<usize>,
}

impl RuleGraph {
    pub fn internal_degree(&self, v: usize) -> usize {
        self.edges.iter().map(|&[a, b]| usize::from(a == v) + usize::from(b == v)).sum()
    }

    pub fn boundary_at(&self, v: usize) -> Vec<usize> {
        (0..self.boundary.len()).filter(|&i| self.boundary[i] == v).collect()
    }

    /// Number of edges between `a` and `b` (loops when equal).
    pub fn multiplicity(&self, a: usize, b: usize) -> usize {
        self.edges.iter().filter(|&&[x, y]| (x, y) == (a, b) || (y, x) == (a, b)).count()
    }

    fn validate(&self, role: &'static str) -> Result<(), CausalError> {
        let bad = |detail: String| CausalError::BadRule { role, detail };
        for &[a, b] in &self.edges {
            if a >= self.vertices || b >= self.vertices {
                return Err(bad(format!("edge [{a}, {b}] refers to a missing vertex")));
            }
        }
        if let Some(&v) = self.boundary.iter().find(|&&v| v >= self.vertices) {
            return Err(bad(format!("boundary half-edge on missing vertex {v}")));
        }
        for v in 0..self.vertices {
            let degree = self.internal_degree(v) + self.boundary_at(v).len();
            if degree != 3 {
                return Err(bad(format!("vertex {v} has degree {degree}")));
            }
        }
        Ok(())
    }

    pub(crate) fn is_connected(&self) -> bool {
        if self.vertices == 0 {
            return false;
        }
        let mut seen = vec![false; self.vertices];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &[a, b] in &self.edges {
                for (x, y) in [(a, b), (b, a)] {
                    if x == v && !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Vertex permutations preserving edge multiplicities and boundary
    /// counts.
    pub(crate) fn automorphisms(&self) -> Vec<Vec<usize>> {
        let n = self.vertices;
        let mult: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| self.multiplicity(a, b)).collect()).collect();
        let bcount: Vec<usize> = (0..n).map(|v| self.boundary_at(v).len()).collect();
        let mut out = Vec::new();
        let mut perm = vec![usize::MAX; n];
        let mut used = vec![false; n];
        fn go(
            v: usize,
            n: usize,
            mult: &[Vec<usize>],
            bcount: &[usize],
            perm: &mut Vec<usize>,
            used: &mut Vec<bool>,
            out: &mut Vec<Vec<usize>>,
        ) {
            if v == n {
                out.push(perm.clone());
                return;
            }
            for img in 0..n {
                if used[img] || bcount[img] != bcount[v] || mult[img][img] != mult[v][v] {
                    continue;
                }
                if (0..v).any(|u| mult[perm[u]][img] != mult[u][v]) {
                    continue;
                }
                perm[v] = img;
                used[img] = true;
                go(v + 1, n, mult, bcount, perm, used, out);
                used[img] = false;
            }
        }
        go(0, n, &mult, &bcount, &mut perm, &mut used, &mut out);
        out
    }

    /// Permutations of the boundary half-edges induced by automorphisms:
    /// `pi[i] = j` when half-edge `i` lands where `j` was.
    pub(crate) fn boundary_symmetries(&self) -> BTreeSet<Vec<usize>> {
        let mut out = BTreeSet::new();
        for sigma in self.automorphisms() {
            // half-edges at v may go to any half-edge at sigma(v)
            let mut partial: Vec<Vec<usize>> = vec![vec![usize::MAX; self.boundary.len()]];
            for v in 0..self.vertices {
                let from = self.boundary_at(v);
                let to = self.boundary_at(sigma[v]);
                let mut next = Vec::new();
                for p in &partial {
                    for arrangement in permutations(&to) {
                        let mut q = p.clone();
                        for (&i, &j) in from.iter().zip(&arrangement) {
                            q[i] = j;
                        }
                        next.push(q);
                    }
                }
                partial = next;
            }
            out.extend(partial);
        }
        out
    }
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

/// Replaces an embedded copy of `pattern` with `replacement`; boundary
/// half-edge `i` of one corresponds to boundary half-edge `i` of the other.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RuleFile")]
pub struct UpdateRule {
    pub name: String,
    pub pattern: RuleGraph,
    pub replacement: RuleGraph,
}

#[derive(Deserialize)]
struct RuleFile {
    #[serde(default)]
    name: String,
    pattern: RuleGraph,
    replacement: RuleGraph,
}

impl TryFrom<RuleFile> for UpdateRule {
    type Error = CausalError;

    fn try_from(f: RuleFile) -> Result<Self, Self::Error> {
        UpdateRule::new(f.name, f.pattern, f.replacement)
    }
}

impl UpdateRule {
    /// Checks shapes, degrees, and that every symmetry of the pattern's
    /// boundary is also a symmetry of the replacement's.
    pub fn new(name: impl Into<String>, pattern: RuleGraph, replacement: RuleGraph) -> Result<Self, CausalError> {
        let name = name.into();
        pattern.validate("pattern")?;
        replacement.validate("replacement")?;
        if pattern.vertices > MAX_PATTERN_VERTICES {
            return Err(CausalError::PatternTooLarge { vertices: pattern.vertices, limit: MAX_PATTERN_VERTICES });
        }
        if !pattern.is_connected() {
            return Err(CausalError::BadRule { role: "pattern", detail: "not connected".into() });
        }
        if pattern.boundary.len() != replacement.boundary.len() {
            return Err(CausalError::BoundaryMismatch {
                pattern: pattern.boundary.len(),
                replacement: replacement.boundary.len(),
            });
        }
        let kept = replacement.boundary_symmetries();
        if let Some(p) = pattern.boundary_symmetries().into_iter().find(|p| !kept.contains(p)) {
            return Err(CausalError::SymmetryBroken { rule: name, permutation: p });
        }
        Ok(UpdateRule { name, pattern, replacement })
    }

    /// One vertex with three half-edges, replaced by a triangle.
    pub fn vertex_to_triangle() -> Self {
        UpdateRule::new(
            "vertex-to-triangle",
            RuleGraph { vertices: 1, edges: vec![], boundary: vec![0, 0, 0] },
            RuleGraph { vertices: 3, edges: vec![[0, 1], [1, 2], [2, 0]], boundary: vec![0, 1, 2] },
        )
        .expect("valid rule")
    }

    /// A triangle contracted to one vertex.
    pub fn triangle_to_vertex() -> Self {
        UpdateRule::new(
            "triangle-to-vertex",
            RuleGraph { vertices: 3, edges: vec![[0, 1], [1, 2], [2, 0]], boundary: vec![0, 1, 2] },
            RuleGraph { vertices: 1, edges: vec![], boundary: vec![0, 0, 0] },
        )
        .expect("valid rule")
    }

    /// Replaces a vertex with a fresh vertex.
    pub fn vertex_identity() -> Self {
        let v = RuleGraph { vertices: 1, edges: vec![], boundary: vec![0, 0, 0] };
        UpdateRule::new("vertex-identity", v.clone(), v).expect("valid rule")
    }
}

/// An ordered list of rules; events record the index of the rule used.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct RuleSet {
    pub rules: Vec<UpdateRule>,
}

impl RuleSet {
    pub fn new(rules: Vec<UpdateRule>) -> Self {
        RuleSet { rules }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vertex() -> RuleGraph {
        RuleGraph { vertices: 1, edges: vec![], boundary: vec![0, 0, 0] }
    }

    #[test]
    fn vertex_has_full_boundary_symmetry() {
        assert_eq!(vertex().boundary_symmetries().len(), 6);
    }

    #[test]
    fn square_to_edge_breaks_symmetry() {
        let square = RuleGraph { vertices: 4, edges: vec![[0, 1], [1, 2], [2, 3], [3, 0]], boundary: vec![0, 1, 2, 3] };
        let edge = RuleGraph { vertices: 2, edges: vec![[0, 1]], boundary: vec![0, 0, 1, 1] };
        assert_eq!(square.boundary_symmetries().len(), 8);
        assert!(matches!(UpdateRule::new("s", square, edge), Err(CausalError::SymmetryBroken { .. })));
    }

    #[test]
    fn shape_errors() {
        let tri = RuleGraph { vertices: 3, edges: vec![[0, 1], [1, 2], [2, 0]], boundary: vec![0, 1, 2] };
        assert!(matches!(
            UpdateRule::new("x", vertex(), RuleGraph { vertices: 2, edges: vec![[0, 1]], boundary: vec![0, 0, 1, 1] }),
            Err(CausalError::BoundaryMismatch { pattern: 3, replacement: 4 })
        ));
        let bad = RuleGraph { vertices: 1, edges: vec![], boundary: vec![0, 0] };
        assert!(matches!(UpdateRule::new("x", bad, tri.clone()), Err(CausalError::BadRule { .. })));
        let two = RuleGraph { vertices: 2, edges: vec![], boundary: vec![0, 0, 0, 1, 1, 1] };
        assert!(matches!(UpdateRule::new("x", two.clone(), two), Err(CausalError::BadRule { .. })));
        assert!(UpdateRule::new("x", tri.clone(), tri).is_ok());
    }

    #[test]
    fn rule_file() {
        let json = r#"{"name": "t", "pattern": {"vertices": 1, "boundary": [0, 0, 0]},
            "replacement": {"vertices": 3, "edges": [[0, 1], [1, 2], [2, 0]], "boundary": [0, 1, 2]}}"#;
        let r: UpdateRule = serde_json::from_str(json).unwrap();
        assert_eq!(r, UpdateRule { name: "t".into(), ..UpdateRule::vertex_to_triangle() });
        let broken = r#"{"pattern": {"vertices": 1, "boundary": [0, 0, 0]},
            "replacement": {"vertices": 1, "boundary": [0, 0]}}"#;
        assert!(serde_json::from_str::<UpdateRule>(broken).is_err());
    }
}
