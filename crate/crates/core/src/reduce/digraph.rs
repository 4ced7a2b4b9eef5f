use std::collections::{BTreeSet, HashMap};

use petgraph::graph::DiGraph;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::ReduceError;

/// A directed graph on named vertices. Loops are allowed; a loop makes its
/// vertex cyclic on its own.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Digraph {
    vertices: Vec<String>,
    arcs: Vec<(usize, usize)>,
}

/// JSON form: `{"vertices": [...], "arcs": [["u", "v"], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DigraphDocument {
    pub vertices: Vec<String>,
    pub arcs: Vec<(String, String)>,
}

impl Digraph {
    pub fn new<S: AsRef<str>>(vertices: &[S], arcs: &[(S, S)]) -> Result<Self, ReduceError> {
        let mut index = HashMap::new();
        let mut names = Vec::with_capacity(vertices.len());
        for v in vertices {
            let v = v.as_ref();
            if v.is_empty() || v.contains(':') || v.contains('>') {
                return Err(ReduceError::InvalidVertexName(v.to_string()));
            }
            if index.insert(v.to_string(), names.len()).is_some() {
                return Err(ReduceError::DuplicateVertex(v.to_string()));
            }
            names.push(v.to_string());
        }
        let lookup = |v: &str| index.get(v).copied().ok_or_else(|| ReduceError::UnknownVertex(v.to_string()));
        let mut seen = BTreeSet::new();
        for (u, v) in arcs {
            let arc = (lookup(u.as_ref())?, lookup(v.as_ref())?);
            if !seen.insert(arc) {
                return Err(ReduceError::DuplicateArc(u.as_ref().to_string(), v.as_ref().to_string()));
            }
        }
        Ok(Digraph {
            vertices: names,
            arcs: seen.into_iter().collect(),
        })
    }

    /// Vertices `v1..vn` with arcs given as index pairs.
    pub fn indexed(n: usize, arcs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, ReduceError> {
        let names: Vec<String> = (1..=n).map(|i| format!("v{i}")).collect();
        let arcs: Vec<(String, String)> = arcs
            .into_iter()
            .map(|(u, v)| {
                let name = |i: usize| names.get(i).cloned().unwrap_or_else(|| format!("#{i}"));
                (name(u), name(v))
            })
            .collect();
        Digraph::new(&names, &arcs)
    }

    /// The digraph on `v1..vn` whose arcs are the set bits of `mask`, bit
    /// `u * n + v` standing for the arc `u -> v` (loops included).
    pub fn from_arc_mask(n: usize, mask: u64) -> Self {
        assert!(n * n <= 64, "arc mask too small for {n} vertices");
        let arcs = (0..n * n).filter(|b| mask >> b & 1 == 1).map(|b| (b / n, b % n));
        Digraph::indexed(n, arcs).expect("mask arcs are valid")
    }

    /// Each ordered pair of distinct vertices becomes an arc with
    /// probability `p`.
    pub fn random(n: usize, p: f64, rng: &mut impl Rng) -> Self {
        let mut arcs = Vec::new();
        for u in 0..n {
            for v in 0..n {
                if u != v && rng.gen_bool(p) {
                    arcs.push((u, v));
                }
            }
        }
        Digraph::indexed(n, arcs).expect("generated arcs are valid")
    }

    pub fn from_document(doc: &DigraphDocument) -> Result<Self, ReduceError> {
        Digraph::new(&doc.vertices, &doc.arcs)
    }

    pub fn to_document(&self) -> DigraphDocument {
        DigraphDocument {
            vertices: self.vertices.clone(),
            arcs: self
                .arcs
                .iter()
                .map(|&(u, v)| (self.vertices[u].clone(), self.vertices[v].clone()))
                .collect(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> &str {
        &self.vertices[i]
    }

    /// Arcs as vertex index pairs, sorted.
    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    /// True if the vertices marked in `part` induce no directed cycle.
    pub fn is_acyclic_part(&self, part: &[bool]) -> bool {
        let mut graph = DiGraph::<(), ()>::new();
        let nodes: Vec<_> = (0..self.vertices.len()).map(|_| graph.add_node(())).collect();
        for &(u, v) in &self.arcs {
            if part[u] && part[v] {
                graph.add_edge(nodes[u], nodes[v], ());
            }
        }
        !petgraph::algo::is_cyclic_directed(&graph)
    }
}
