use serde::Serialize;

use super::{CanonicalCertificate, Graph, GraphError, NcGraph};

/// A verified vertex bijection between two non-commuting graphs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Isomorphism {
    vertex_map: Vec<usize>,
    /// `(g, φ(g))` over parent elements, sorted by `g`.
    element_map: Vec<(usize, usize)>,
}

impl Isomorphism {
    /// Checks that `vertex_map` is a bijection preserving adjacency and non-adjacency.
    pub fn new(source: &NcGraph, target: &NcGraph, vertex_map: Vec<usize>) -> Result<Self, GraphError> {
        check_bijection(source.graph(), target.graph(), &vertex_map)?;
        let element_map = vertex_map
            .iter()
            .enumerate()
            .map(|(v, &w)| (source.vertices()[v], target.vertices()[w]))
            .collect();
        Ok(Isomorphism { vertex_map, element_map })
    }

    pub fn vertex_map(&self) -> &[usize] {
        &self.vertex_map
    }

    pub fn element_map(&self) -> &[(usize, usize)] {
        &self.element_map
    }

    /// Image of a non-central element of the source group.
    pub fn image(&self, element: usize) -> Option<usize> {
        self.element_map
            .binary_search_by_key(&element, |&(g, _)| g)
            .ok()
            .map(|i| self.element_map[i].1)
    }

    /// Builds an element-level map without graph verification; callers that
    /// consume it (the audits) re-verify against the group tables.
    pub fn from_element_pairs(mut pairs: Vec<(usize, usize)>) -> Self {
        pairs.sort_unstable();
        let vertex_map = (0..pairs.len()).collect();
        Isomorphism { vertex_map, element_map: pairs }
    }
}

fn check_bijection(a: &Graph, b: &Graph, map: &[usize]) -> Result<(), GraphError> {
    let n = a.vertex_count();
    if b.vertex_count() != n || map.len() != n {
        return Err(GraphError::NotAnIsomorphism(format!(
            "vertex counts {} and {} with a map of length {}",
            n,
            b.vertex_count(),
            map.len()
        )));
    }
    let mut hit = vec![false; n];
    for &w in map {
        if w >= n || hit[w] {
            return Err(GraphError::NotAnIsomorphism(format!("vertex {w} is hit twice or out of range")));
        }
        hit[w] = true;
    }
    for u in 0..n {
        for v in u + 1..n {
            if a.adjacent(u, v) != b.adjacent(map[u], map[v]) {
                return Err(GraphError::NotAnIsomorphism(format!("pair ({u}, {v}) changes adjacency")));
            }
        }
    }
    Ok(())
}

/// Cheap isomorphism invariants compared before any canonical labeling.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GraphInvariants {
    pub vertices: usize,
    pub edges: usize,
    pub degree_sequence: Vec<usize>,
    /// For each vertex, the sorted degrees of its neighbors; the list is sorted.
    pub neighborhood_degrees: Vec<Vec<usize>>,
}

impl GraphInvariants {
    pub fn of(g: &Graph) -> Self {
        let degrees = g.degrees();
        let mut neighborhood_degrees: Vec<Vec<usize>> = (0..g.vertex_count())
            .map(|v| {
                let mut d: Vec<usize> = g.neighbors(v).into_iter().map(|u| degrees[u]).collect();
                d.sort_unstable();
                d
            })
            .collect();
        neighborhood_degrees.sort_unstable();
        let mut degree_sequence = degrees;
        degree_sequence.sort_unstable();
        GraphInvariants { vertices: g.vertex_count(), edges: g.edge_count(), degree_sequence, neighborhood_degrees }
    }

    /// Name of the first invariant that differs.
    pub fn first_mismatch(&self, other: &GraphInvariants) -> Option<&'static str> {
        if self.vertices != other.vertices {
            Some("vertex count")
        } else if self.edges != other.edges {
            Some("edge count")
        } else if self.degree_sequence != other.degree_sequence {
            Some("degree sequence")
        } else if self.neighborhood_degrees != other.neighborhood_degrees {
            Some("neighborhood degree multisets")
        } else {
            None
        }
    }
}

#[derive(Debug, Clone)]
pub enum IsoOutcome {
    Isomorphic(Isomorphism),
    NotIsomorphic { reason: String },
}

/// Decides isomorphism: invariant prefilter first, then canonical certificates.
pub fn compare_graphs(a: &NcGraph, b: &NcGraph) -> IsoOutcome {
    let (ia, ib) = (GraphInvariants::of(a.graph()), GraphInvariants::of(b.graph()));
    if let Some(which) = ia.first_mismatch(&ib) {
        let reason = match which {
            "vertex count" => format!("vertex counts differ ({} vs {})", ia.vertices, ib.vertices),
            "edge count" => format!("edge counts differ ({} vs {})", ia.edges, ib.edges),
            other => format!("{other} differ"),
        };
        return IsoOutcome::NotIsomorphic { reason };
    }
    let (ca, cb) = (a.canonical_certificate(), b.canonical_certificate());
    match isomorphism_from_certificates(a, &ca, b, &cb) {
        Some(iso) => IsoOutcome::Isomorphic(iso),
        None => IsoOutcome::NotIsomorphic { reason: "canonical certificates differ".into() },
    }
}

pub fn find_isomorphism(a: &NcGraph, b: &NcGraph) -> Option<Isomorphism> {
    match compare_graphs(a, b) {
        IsoOutcome::Isomorphic(iso) => Some(iso),
        IsoOutcome::NotIsomorphic { .. } => None,
    }
}

/// Composes two canonical orders into a bijection, verified edge by edge.
pub fn isomorphism_from_certificates(
    a: &NcGraph,
    ca: &CanonicalCertificate,
    b: &NcGraph,
    cb: &CanonicalCertificate,
) -> Option<Isomorphism> {
    if !ca.same_graph(cb) {
        return None;
    }
    let mut map = vec![0; ca.vertex_count()];
    for (&u, &v) in ca.order().iter().zip(cb.order()) {
        map[u] = v;
    }
    let iso = Isomorphism::new(a, b, map).expect("equal canonical certificates give an isomorphism");
    Some(iso)
}
