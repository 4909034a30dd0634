//! Orthogonality graphs: vertices are rays, edges join exactly orthogonal
//! pairs.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::rays::{inner_product, RayId, RaySet};

/// Undirected simple graph over labelled vertices. Vertex indices are dense
/// (`0..vertex_count`); labels are the ray ids they stand for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrthoGraph {
    labels: Vec<RayId>,
    index: HashMap<RayId, usize>,
    adjacency: Vec<Vec<usize>>,
    matrix: Vec<bool>,
}

impl OrthoGraph {
    /// Builds a graph from labels and label pairs. Self-loops and repeated
    /// edges are ignored.
    pub fn from_edges(labels: Vec<RayId>, edges: &[(RayId, RayId)]) -> Result<Self> {
        let n = labels.len();
        let mut index = HashMap::with_capacity(n);
        for (i, &id) in labels.iter().enumerate() {
            if index.insert(id, i).is_some() {
                return Err(Error::DuplicateId(id));
            }
        }
        let mut matrix = vec![false; n * n];
        for &(a, b) in edges {
            let i = *index.get(&a).ok_or(Error::UnknownId(a))?;
            let j = *index.get(&b).ok_or(Error::UnknownId(b))?;
            if i != j {
                matrix[i * n + j] = true;
                matrix[j * n + i] = true;
            }
        }
        Ok(Self::from_matrix(labels, index, matrix))
    }

    fn from_matrix(labels: Vec<RayId>, index: HashMap<RayId, usize>, matrix: Vec<bool>) -> Self {
        let n = labels.len();
        let adjacency = (0..n)
            .map(|i| (0..n).filter(|&j| matrix[i * n + j]).collect())
            .collect();
        OrthoGraph {
            labels,
            index,
            adjacency,
            matrix,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn labels(&self) -> &[RayId] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> RayId {
        self.labels[v]
    }

    pub fn index_of(&self, id: RayId) -> Option<usize> {
        self.index.get(&id).copied()
    }

    /// Neighbours of vertex index `v`, ascending.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.matrix[u * self.labels.len() + v]
    }

    /// Edge test by ray id; `false` when either id is absent.
    pub fn has_edge(&self, a: RayId, b: RayId) -> bool {
        match (self.index_of(a), self.index_of(b)) {
            (Some(i), Some(j)) => self.adjacent(i, j),
            _ => false,
        }
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adjacency.iter().map(Vec::len).collect()
    }

    /// The common degree if the graph is regular.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = self.degrees();
        match d.first() {
            Some(&k) if d.iter().all(|&x| x == k) => Some(k),
            _ => None,
        }
    }

    /// Label pairs `(a, b)` with `a` before `b` in vertex order.
    pub fn edges(&self) -> Vec<(RayId, RayId)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for (i, nbrs) in self.adjacency.iter().enumerate() {
            for &j in nbrs.iter().filter(|&&j| j > i) {
                out.push((self.labels[i], self.labels[j]));
            }
        }
        out
    }

    /// Subgraph induced on `ids`, in the order the ids appear in this graph.
    pub fn induced_subgraph(&self, ids: &[RayId]) -> Result<OrthoGraph> {
        let mut keep = vec![false; self.vertex_count()];
        for &id in ids {
            keep[self.index_of(id).ok_or(Error::UnknownId(id))?] = true;
        }
        let old: Vec<usize> = (0..self.vertex_count()).filter(|&v| keep[v]).collect();
        let labels: Vec<RayId> = old.iter().map(|&v| self.labels[v]).collect();
        let index = labels.iter().enumerate().map(|(i, &id)| (id, i)).collect();
        let n = old.len();
        let mut matrix = vec![false; n * n];
        for (i, &u) in old.iter().enumerate() {
            for (j, &v) in old.iter().enumerate() {
                matrix[i * n + j] = self.adjacent(u, v);
            }
        }
        Ok(Self::from_matrix(labels, index, matrix))
    }

    /// Same graph with vertex `v` moved to position `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> OrthoGraph {
        let n = self.vertex_count();
        assert_eq!(perm.len(), n);
        let mut labels = vec![0; n];
        for v in 0..n {
            labels[perm[v]] = self.labels[v];
        }
        let index = labels.iter().enumerate().map(|(i, &id)| (id, i)).collect();
        let mut matrix = vec![false; n * n];
        for u in 0..n {
            for v in 0..n {
                matrix[perm[u] * n + perm[v]] = self.adjacent(u, v);
            }
        }
        Self::from_matrix(labels, index, matrix)
    }
}

/// Edge `(i, j)` iff the exact inner product of rays `i` and `j` vanishes.
pub fn orthogonality_graph(rs: &RaySet) -> OrthoGraph {
    let labels = rs.ids();
    let n = labels.len();
    let index = labels.iter().enumerate().map(|(i, &id)| (id, i)).collect();
    let mut matrix = vec![false; n * n];
    let rays = rs.rays();
    for i in 0..n {
        for j in i + 1..n {
            if inner_product(&rays[i], &rays[j]).is_zero() {
                matrix[i * n + j] = true;
                matrix[j * n + i] = true;
            }
        }
    }
    OrthoGraph::from_matrix(labels, index, matrix)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::golden::GoldenNum;
    use crate::rays::build_600cell_rays;
    use std::collections::BTreeMap;

    /// Degree of every vertex in the 600-cell orthogonality graph, from an
    /// exhaustive scan of all pairs.
    const CELL600_DEGREE: usize = 15;

    #[test]
    fn cell600_graph_is_regular() {
        let g = orthogonality_graph(&build_600cell_rays());
        assert!(g.has_edge(1, 2));
        assert!(!g.has_edge(1, 13));
        assert_eq!(g.regular_degree(), Some(CELL600_DEGREE));
        assert_eq!(g.edge_count(), 60 * CELL600_DEGREE / 2);
        for v in 0..g.vertex_count() {
            assert!(!g.adjacent(v, v));
            for &w in g.neighbors(v) {
                assert!(g.adjacent(w, v));
            }
        }
    }

    #[test]
    fn cell600_inner_product_multiset() {
        // |<u,v>| over the 1770 pairs lies in {0, 2κ, 2, 2τ}.
        let rs = build_600cell_rays();
        let mut counts: BTreeMap<String, usize> = BTreeMap::new();
        let rays = rs.rays();
        for i in 0..rays.len() {
            for j in i + 1..rays.len() {
                let ip = inner_product(&rays[i], &rays[j]).abs();
                *counts.entry(ip.to_string()).or_default() += 1;
            }
        }
        let expected: BTreeMap<String, usize> = [
            (GoldenNum::integer(0), 450),
            (GoldenNum::from_ints(-2, 2), 360),
            (GoldenNum::integer(2), 600),
            (GoldenNum::from_ints(0, 2), 360),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect();
        assert_eq!(counts, expected);
    }

    #[test]
    fn induced_subgraph_cases() {
        let g = orthogonality_graph(&build_600cell_rays());
        let single = g.induced_subgraph(&[1]).unwrap();
        assert_eq!(single.vertex_count(), 1);
        assert_eq!(single.edge_count(), 0);
        let all: Vec<RayId> = (1..=60).collect();
        assert_eq!(g.induced_subgraph(&all).unwrap(), g);
        assert!(matches!(
            g.induced_subgraph(&[1, 61]),
            Err(Error::UnknownId(61))
        ));
    }

    #[test]
    fn permutation_preserves_edges() {
        let g = OrthoGraph::from_edges(vec![10, 20, 30], &[(10, 20), (20, 30)]).unwrap();
        let p = g.permuted(&[2, 0, 1]);
        assert_eq!(p.labels(), &[20, 30, 10]);
        assert!(p.has_edge(10, 20) && p.has_edge(20, 30) && !p.has_edge(10, 30));
    }
}
