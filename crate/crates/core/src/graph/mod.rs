//! Non-commuting graphs and the pure graph machinery behind them.

pub mod canon;
pub mod iso;

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::group::CayleyTable;

pub use canon::{canonical_certificate, canonical_form, CanonicalCertificate, SearchStats};
pub use iso::{find_isomorphism, compare_graphs, GraphInvariants, IsoOutcome, Isomorphism};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("group {0} is abelian, its non-commuting graph would be empty")]
    AbelianInput(String),
    #[error("vertex map is not an isomorphism: {0}")]
    NotAnIsomorphism(String),
}

/// Simple undirected graph on `0..n` stored as a packed upper-triangular bit matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    bits: Vec<u64>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        let pairs = n * n.saturating_sub(1) / 2;
        Graph { n, bits: vec![0; pairs.div_ceil(64)] }
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut g = Graph::empty(n);
        for (u, v) in edges {
            g.set(u, v);
        }
        g
    }

    #[inline]
    fn slot(&self, u: usize, v: usize) -> usize {
        let (i, j) = if u < v { (u, v) } else { (v, u) };
        i * (2 * self.n - i - 1) / 2 + (j - i - 1)
    }

    pub(crate) fn set(&mut self, u: usize, v: usize) {
        assert!(u != v && u < self.n && v < self.n, "edge ({u}, {v}) out of range");
        let k = self.slot(u, v);
        self.bits[k / 64] |= 1 << (k % 64);
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        if u == v {
            return false;
        }
        let k = self.slot(u, v);
        self.bits[k / 64] >> (k % 64) & 1 == 1
    }

    pub fn edge_count(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        (0..self.n).filter(|&u| self.adjacent(v, u)).collect()
    }

    pub fn degree(&self, v: usize) -> usize {
        (0..self.n).filter(|&u| self.adjacent(v, u)).count()
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|v| self.degree(v)).collect()
    }

    /// Sorted multiset of degrees.
    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut d = self.degrees();
        d.sort_unstable();
        d
    }

    pub fn is_regular(&self) -> bool {
        let d = self.degrees();
        d.windows(2).all(|w| w[0] == w[1])
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| (u + 1..self.n).filter(move |&v| self.adjacent(u, v)).map(move |v| (u, v)))
    }

    /// The graph with vertex `v` renamed to `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.n);
        Graph::from_edges(self.n, self.edges().map(|(u, v)| (perm[u], perm[v])))
    }

    /// Part sizes (descending) when the graph is complete multipartite, that is
    /// when non-adjacency is transitive on distinct vertices.
    pub fn complete_multipartite_parts(&self) -> Option<Vec<usize>> {
        let n = self.n;
        let mut part = vec![usize::MAX; n];
        let mut parts: Vec<Vec<usize>> = Vec::new();
        for v in 0..n {
            if part[v] != usize::MAX {
                continue;
            }
            let members: Vec<usize> = (v..n).filter(|&u| u == v || !self.adjacent(v, u)).collect();
            for &u in &members {
                if part[u] != usize::MAX {
                    return None;
                }
                part[u] = parts.len();
            }
            parts.push(members);
        }
        // each part independent, all cross pairs adjacent
        for u in 0..n {
            for w in u + 1..n {
                if self.adjacent(u, w) == (part[u] == part[w]) {
                    return None;
                }
            }
        }
        let mut sizes: Vec<usize> = parts.iter().map(Vec::len).collect();
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        Some(sizes)
    }
}

/// The non-commuting graph of a finite non-abelian group.
///
/// Vertices are the non-central elements in increasing index order; two are
/// adjacent exactly when they do not commute.
#[derive(Debug, Clone)]
pub struct NcGraph {
    graph: Graph,
    vertices: Vec<usize>,
    parent_descriptor: String,
    parent_order: usize,
    parent_center_size: usize,
}

impl NcGraph {
    pub fn build(g: &CayleyTable) -> Result<NcGraph, GraphError> {
        let center = g.center();
        if center.len() == g.order() {
            return Err(GraphError::AbelianInput(g.descriptor().to_string()));
        }
        let vertices: Vec<usize> = (0..g.order()).filter(|&x| !center.contains(x)).collect();
        let mut graph = Graph::empty(vertices.len());
        for (i, &a) in vertices.iter().enumerate() {
            for (j, &b) in vertices.iter().enumerate().skip(i + 1) {
                if !g.commute(a, b) {
                    graph.set(i, j);
                }
            }
        }
        Ok(NcGraph {
            graph,
            vertices,
            parent_descriptor: g.descriptor().to_string(),
            parent_order: g.order(),
            parent_center_size: center.len(),
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    /// Parent element behind each vertex.
    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn vertex_of_element(&self, element: usize) -> Option<usize> {
        self.vertices.binary_search(&element).ok()
    }

    pub fn parent_descriptor(&self) -> &str {
        &self.parent_descriptor
    }

    pub fn parent_order(&self) -> usize {
        self.parent_order
    }

    pub fn parent_center_size(&self) -> usize {
        self.parent_center_size
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    pub fn degree_sequence(&self) -> Vec<usize> {
        self.graph.degree_sequence()
    }

    pub fn is_regular(&self) -> bool {
        self.graph.is_regular()
    }

    pub fn complete_multipartite_params(&self) -> Option<Vec<usize>> {
        self.graph.complete_multipartite_parts()
    }

    pub fn canonical_certificate(&self) -> CanonicalCertificate {
        canonical_certificate(&self.graph)
    }

    /// Degree histogram as `(degree, count)` pairs.
    pub fn degree_profile(&self) -> Vec<(usize, usize)> {
        let mut m = BTreeMap::new();
        for d in self.graph.degrees() {
            *m.entry(d).or_insert(0usize) += 1;
        }
        m.into_iter().collect()
    }

    /// Adjacency-list text: a `v n_edges` header, then one `u v` line per edge
    /// with vertices numbered by canonical position.
    pub fn to_edge_list(&self, cert: &CanonicalCertificate) -> String {
        let order = cert.order();
        let mut position = vec![0; order.len()];
        for (i, &v) in order.iter().enumerate() {
            position[v] = i;
        }
        let mut edges: Vec<(usize, usize)> = self
            .graph
            .edges()
            .map(|(u, v)| {
                let (a, b) = (position[u], position[v]);
                (a.min(b), a.max(b))
            })
            .collect();
        edges.sort_unstable();
        let mut out = format!("{} {}\n", self.vertex_count(), edges.len());
        for (u, v) in edges {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }

    /// JSON export in canonical order, keeping the parent element labels.
    pub fn to_json(&self, cert: &CanonicalCertificate) -> serde_json::Value {
        #[derive(Serialize)]
        struct Export<'a> {
            descriptor: &'a str,
            order: usize,
            center_size: usize,
            vertex_count: usize,
            elements: Vec<usize>,
            edges: Vec<(usize, usize)>,
        }
        let order = cert.order();
        let mut position = vec![0; order.len()];
        for (i, &v) in order.iter().enumerate() {
            position[v] = i;
        }
        let mut edges: Vec<(usize, usize)> = self
            .graph
            .edges()
            .map(|(u, v)| (position[u].min(position[v]), position[u].max(position[v])))
            .collect();
        edges.sort_unstable();
        serde_json::to_value(Export {
            descriptor: &self.parent_descriptor,
            order: self.parent_order,
            center_size: self.parent_center_size,
            vertex_count: self.vertex_count(),
            elements: order.iter().map(|&v| self.vertices[v]).collect(),
            edges,
        })
        .expect("graph export serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{construct, GroupDescriptor};

    fn nc(s: &str) -> NcGraph {
        NcGraph::build(&construct(&s.parse::<GroupDescriptor>().unwrap()).unwrap()).unwrap()
    }

    #[test]
    fn small_graphs() {
        let d3 = nc("dihedral(3)");
        assert_eq!((d3.vertex_count(), d3.edge_count()), (5, 9));
        // the two rotations are the only non-adjacent pair
        let (r, r2) = (d3.vertex_of_element(1).unwrap(), d3.vertex_of_element(2).unwrap());
        assert!(!d3.graph().adjacent(r, r2));
        assert_eq!(d3.degree_sequence(), vec![3, 3, 4, 4, 4]);
        assert!(!d3.is_regular());

        let q8 = nc("dicyclic(2)");
        assert_eq!((q8.vertex_count(), q8.edge_count()), (6, 12));
        assert!(q8.is_regular());
        assert_eq!(q8.degree_sequence(), vec![4; 6]);
        let d8 = nc("dihedral(4)");
        assert_eq!((d8.vertex_count(), d8.edge_count()), (6, 12));
    }

    #[test]
    fn abelian_rejected() {
        let g = construct(&"abelian(2,2)".parse().unwrap()).unwrap();
        assert!(matches!(NcGraph::build(&g), Err(GraphError::AbelianInput(_))));
    }

    #[test]
    fn dihedral_sixteen_degrees() {
        let g = nc("dihedral(8)");
        assert_eq!(g.degree_profile(), vec![(8, 6), (12, 8)]);
        assert!(!g.is_regular());
    }

    #[test]
    fn multipartite_recognition() {
        assert_eq!(nc("dicyclic(2)").complete_multipartite_params(), Some(vec![2, 2, 2]));
        assert_eq!(nc("dihedral(3)").complete_multipartite_params(), Some(vec![2, 1, 1, 1]));
        assert_eq!(nc("product(dicyclic(2),dicyclic(2))").complete_multipartite_params(), None);
    }

    #[test]
    fn q8_parts_are_plus_minus_pairs() {
        let g = construct(&"dicyclic(2)".parse().unwrap()).unwrap();
        let graph = NcGraph::build(&g).unwrap();
        // x and its negative (x * a^2) never form an edge
        for (i, &x) in graph.vertices().iter().enumerate() {
            let neg = g.mul(x, 2);
            let j = graph.vertex_of_element(neg).unwrap();
            assert!(!graph.graph().adjacent(i, j));
            assert_eq!(graph.graph().degree(i), 4);
        }
    }

    #[test]
    fn exports() {
        let g = nc("dihedral(3)");
        let cert = g.canonical_certificate();
        let text = g.to_edge_list(&cert);
        assert!(text.starts_with("5 9\n"));
        assert_eq!(text.lines().count(), 10);
        let json = g.to_json(&cert);
        assert_eq!(json["elements"].as_array().unwrap().len(), 5);
        assert_eq!(json["edges"].as_array().unwrap().len(), 9);
    }
}
