//! Simple, nondegenerate r-uniform hypergraphs ("r-graphs").
//!
//! Vertices are strings; internally they are addressed by their index in
//! the sorted vertex list, and every edge is stored as a sorted list of
//! vertex indices.

use std::collections::{HashMap, HashSet};

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Limits, Result};

pub type VertexId = usize;

#[derive(Clone, Debug)]
pub struct RGraph {
    r: usize,
    vertices: Vec<String>,
    index: HashMap<String, VertexId>,
    edges: Vec<Vec<VertexId>>,
    edge_set: HashSet<Vec<VertexId>>,
    // every nonempty subset of every edge, sorted
    subedges: HashSet<Vec<VertexId>>,
}

/// On-disk form: `{"r": 3, "vertices": ["a", ...], "edges": [["a","b","c"], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RGraphJson {
    pub r: usize,
    pub vertices: Vec<String>,
    pub edges: Vec<Vec<String>>,
}

impl RGraph {
    pub fn new<S: AsRef<str>>(r: usize, vertices: &[S], edges: &[Vec<S>]) -> Result<Self> {
        if r == 0 {
            return Err(Error::InvalidParams("r must be at least 1".into()));
        }
        let mut names: Vec<String> = vertices.iter().map(|v| v.as_ref().to_string()).collect();
        names.sort();
        if let Some((a, _)) = names.iter().tuple_windows().find(|(a, b)| a == b) {
            return Err(Error::DuplicateVertex(a.clone()));
        }
        let index: HashMap<String, VertexId> =
            names.iter().enumerate().map(|(i, n)| (n.clone(), i)).collect();

        let mut edge_set = HashSet::new();
        for edge in edges {
            let raw: Vec<String> = edge.iter().map(|v| v.as_ref().to_string()).collect();
            if raw.len() != r {
                return Err(Error::EdgeWrongArity {
                    edge: raw.clone(),
                    expected: r,
                    found: raw.len(),
                });
            }
            let mut ids = Vec::with_capacity(r);
            for v in &raw {
                match index.get(v) {
                    Some(&i) => ids.push(i),
                    None => return Err(Error::UnknownVertex(v.clone())),
                }
            }
            ids.sort_unstable();
            if ids.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::DegenerateEdge(raw));
            }
            if !edge_set.insert(ids) {
                return Err(Error::DuplicateEdge(raw));
            }
        }
        let mut edges: Vec<Vec<VertexId>> = edge_set.iter().cloned().collect();
        edges.sort();
        let mut subedges = HashSet::new();
        for e in &edges {
            for k in 1..=r {
                for sub in e.iter().copied().combinations(k) {
                    subedges.insert(sub);
                }
            }
        }
        let g = RGraph {
            r,
            vertices: names,
            index,
            edges,
            edge_set,
            subedges,
        };
        debug_assert!(g.edges.iter().all(|e| e.len() == r));
        Ok(g)
    }

    /// The complete r-graph on `m` vertices named `0..m`.
    pub fn complete(m: usize, r: usize) -> Result<Self> {
        if r == 0 || m < r {
            return Err(Error::InvalidParams(format!(
                "complete r-graph needs m >= r >= 1, got m={m}, r={r}"
            )));
        }
        let names: Vec<String> = (0..m).map(|i| i.to_string()).collect();
        let edges: Vec<Vec<String>> = names.iter().cloned().combinations(r).collect();
        RGraph::new(r, &names, &edges)
    }

    /// Complete r-partite r-graph with the given part sizes. Part `j` gets
    /// vertices `<letter j><k>`, e.g. `[1,2,2]` gives `a0 | b0 b1 | c0 c1`.
    pub fn complete_multipartite(part_sizes: &[usize]) -> Result<Self> {
        let parts = Self::multipartite_names(part_sizes)?;
        let names: Vec<String> = parts.iter().flatten().cloned().collect();
        let edges: Vec<Vec<String>> = parts
            .iter()
            .map(|p| p.iter().cloned())
            .multi_cartesian_product()
            .collect();
        RGraph::new(part_sizes.len(), &names, &edges)
    }

    /// Vertex names of each part, as used by [`RGraph::complete_multipartite`].
    pub fn multipartite_names(part_sizes: &[usize]) -> Result<Vec<Vec<String>>> {
        if part_sizes.is_empty() {
            return Err(Error::InvalidParams("need at least one part".into()));
        }
        if let Some(j) = part_sizes.iter().position(|&s| s == 0) {
            return Err(Error::InvalidParams(format!("part {j} has size 0")));
        }
        let r = part_sizes.len();
        Ok(part_sizes
            .iter()
            .enumerate()
            .map(|(j, &s)| {
                (0..s)
                    .map(|k| {
                        if r <= 26 {
                            format!("{}{}", (b'a' + j as u8) as char, k)
                        } else {
                            format!("p{j}_{k}")
                        }
                    })
                    .collect()
            })
            .collect())
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertices[v]
    }

    pub fn vertex_id(&self, name: &str) -> Result<VertexId> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    /// Edges in canonical form (sorted vertex ids, sorted list).
    pub fn edges(&self) -> &[Vec<VertexId>] {
        &self.edges
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Whether the given vertices (any order) form an edge.
    pub fn has_edge(&self, vs: &[VertexId]) -> bool {
        let mut key = vs.to_vec();
        key.sort_unstable();
        self.edge_set.contains(&key)
    }

    /// Whether the sorted vertex list is contained in some edge.
    pub(crate) fn is_subedge(&self, sorted: &[VertexId]) -> bool {
        self.subedges.contains(sorted)
    }

    pub fn parts_by_name<S: AsRef<str>>(&self, parts: &[Vec<S>]) -> Result<Vec<Vec<VertexId>>> {
        parts
            .iter()
            .map(|p| p.iter().map(|v| self.vertex_id(v.as_ref())).collect())
            .collect()
    }

    /// True iff every selection `x_j ∈ parts[j]` is an edge of the graph.
    pub fn generates_complete(&self, parts: &[Vec<VertexId>]) -> Result<bool> {
        if parts.len() != self.r {
            return Err(Error::InvalidParams(format!(
                "expected {} parts, got {}",
                self.r,
                parts.len()
            )));
        }
        for (j, p) in parts.iter().enumerate() {
            if p.is_empty() {
                return Err(Error::EmptyPart(j));
            }
            if let Some(&v) = p.iter().find(|&&v| v >= self.vertices.len()) {
                return Err(Error::UnknownVertex(format!("#{v}")));
            }
        }
        Ok(parts
            .iter()
            .map(|p| p.iter().copied())
            .multi_cartesian_product()
            .all(|sel| self.has_edge(&sel)))
    }

    /// Whether pairwise-disjoint vertex sets of the given sizes generate a
    /// complete r-partite sub-r-graph.
    pub fn contains_complete_sub(&self, sizes: &[usize], limits: &Limits) -> Result<bool> {
        if sizes.len() != self.r {
            return Err(Error::InvalidParams(format!(
                "expected {} part sizes, got {}",
                self.r,
                sizes.len()
            )));
        }
        if sizes.contains(&0) {
            return Err(Error::InvalidParams("part sizes must be positive".into()));
        }
        if sizes.iter().sum::<usize>() > self.vertices.len() {
            return Ok(false);
        }
        // Generation is symmetric in the part order, so place the largest part first.
        let mut sorted = sizes.to_vec();
        sorted.sort_unstable_by(|a, b| b.cmp(a));
        let mut search = SubSearch {
            g: self,
            sizes: &sorted,
            used: vec![false; self.vertices.len()],
            parts: Vec::new(),
            budget: limits.max_assignments,
        };
        search.run()
    }

    pub fn to_json(&self) -> RGraphJson {
        RGraphJson {
            r: self.r,
            vertices: self.vertices.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| e.iter().map(|&v| self.vertices[v].clone()).collect())
                .collect(),
        }
    }

    pub fn from_json(j: &RGraphJson) -> Result<Self> {
        RGraph::new(j.r, &j.vertices, &j.edges)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let j: RGraphJson = serde_json::from_str(s)?;
        RGraph::from_json(&j)
    }
}

struct SubSearch<'a> {
    g: &'a RGraph,
    sizes: &'a [usize],
    used: Vec<bool>,
    parts: Vec<Vec<VertexId>>,
    budget: usize,
}

impl SubSearch<'_> {
    fn run(&mut self) -> Result<bool> {
        let j = self.parts.len();
        if j == self.sizes.len() {
            return Ok(true);
        }
        // vertices that extend every partial selection to a sub-edge
        let selections: Vec<Vec<VertexId>> = self
            .parts
            .iter()
            .map(|p| p.iter().copied())
            .multi_cartesian_product()
            .collect();
        let candidates: Vec<VertexId> = (0..self.g.vertices.len())
            .filter(|&w| !self.used[w])
            .filter(|&w| {
                selections.iter().all(|s| {
                    let mut t = s.clone();
                    t.push(w);
                    t.sort_unstable();
                    self.g.is_subedge(&t)
                })
            })
            .collect();
        // parts of equal size are interchangeable: order them by first vertex
        let floor = if j > 0 && self.sizes[j] == self.sizes[j - 1] {
            Some(self.parts[j - 1][0])
        } else {
            None
        };
        for part in candidates.iter().copied().combinations(self.sizes[j]) {
            if floor.is_some_and(|f| part[0] < f) {
                continue;
            }
            if self.budget == 0 {
                return Err(Error::guard("complete sub-r-graph search", 0));
            }
            self.budget -= 1;
            for &v in &part {
                self.used[v] = true;
            }
            self.parts.push(part);
            let found = self.run()?;
            let part = self.parts.pop().unwrap();
            for &v in &part {
                self.used[v] = false;
            }
            if found {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_and_triangle() {
        let g = RGraph::new(3, &["a", "b", "c"], &[vec!["a", "b", "c"]]).unwrap();
        assert_eq!(g.num_edges(), 1);
        let t = RGraph::new(2, &["0", "1", "2"], &[vec!["0", "1"], vec!["1", "2"], vec!["0", "2"]])
            .unwrap();
        assert_eq!(t.num_edges(), 3);
        assert_eq!(t.edges(), &[vec![0, 1], vec![0, 2], vec![1, 2]]);
    }

    #[test]
    fn construction_errors() {
        assert!(matches!(
            RGraph::new(3, &["a", "b", "c"], &[vec!["a", "a", "b"]]),
            Err(Error::DegenerateEdge(_))
        ));
        assert!(matches!(
            RGraph::new(3, &["a", "b", "c"], &[vec!["a", "b"]]),
            Err(Error::EdgeWrongArity { found: 2, .. })
        ));
        assert!(matches!(
            RGraph::new(2, &["a", "b"], &[vec!["a", "z"]]),
            Err(Error::UnknownVertex(_))
        ));
        assert!(matches!(
            RGraph::new(2, &["a", "b"], &[vec!["a", "b"], vec!["b", "a"]]),
            Err(Error::DuplicateEdge(_))
        ));
        assert!(matches!(
            RGraph::new(2, &["a", "a"], &Vec::<Vec<&str>>::new()),
            Err(Error::DuplicateVertex(_))
        ));
        assert!(matches!(RGraph::complete(2, 3), Err(Error::InvalidParams(_))));
        assert!(matches!(
            RGraph::complete_multipartite(&[1, 0]),
            Err(Error::InvalidParams(_))
        ));
    }

    #[test]
    fn complete_counts() {
        assert_eq!(RGraph::complete(3, 3).unwrap().num_edges(), 1);
        assert_eq!(RGraph::complete(4, 3).unwrap().num_edges(), 4);
        assert_eq!(RGraph::complete(5, 2).unwrap().num_edges(), 10);
        let k = RGraph::complete_multipartite(&[1, 2, 2]).unwrap();
        assert_eq!((k.num_vertices(), k.num_edges()), (5, 4));
        assert_eq!(RGraph::complete_multipartite(&[1, 1, 4]).unwrap().num_edges(), 4);
        assert_eq!(RGraph::complete_multipartite(&[1, 1, 1]).unwrap().num_edges(), 1);
    }

    #[test]
    fn generation() {
        let k = RGraph::complete_multipartite(&[1, 2, 2]).unwrap();
        let parts = k
            .parts_by_name(&[vec!["a0"], vec!["b0", "b1"], vec!["c0", "c1"]])
            .unwrap();
        assert!(k.generates_complete(&parts).unwrap());

        let k3 = RGraph::new(3, &["a", "b", "c"], &[vec!["a", "b", "c"]]).unwrap();
        let p = k3.parts_by_name(&[vec!["a"], vec!["b"], vec!["c"]]).unwrap();
        assert!(k3.generates_complete(&p).unwrap());
        let p = k3.parts_by_name(&[vec!["a", "b"], vec!["b"], vec!["c"]]).unwrap();
        assert!(!k3.generates_complete(&p).unwrap());
        assert!(matches!(
            k3.generates_complete(&[vec![0], vec![], vec![2]]),
            Err(Error::EmptyPart(1))
        ));
        assert!(matches!(
            k3.generates_complete(&[vec![0], vec![9], vec![2]]),
            Err(Error::UnknownVertex(_))
        ));
    }

    #[test]
    fn complete_sub_examples() {
        let lim = Limits::default();
        let sizes = [1, 2, 2];
        assert!(RGraph::complete(5, 3).unwrap().contains_complete_sub(&sizes, &lim).unwrap());
        assert!(!RGraph::complete(4, 3).unwrap().contains_complete_sub(&sizes, &lim).unwrap());
        let k112 = RGraph::complete_multipartite(&[1, 1, 2]).unwrap();
        assert!(!k112.contains_complete_sub(&sizes, &lim).unwrap());
        let k122 = RGraph::complete_multipartite(&[1, 2, 2]).unwrap();
        assert!(k122.contains_complete_sub(&[2, 1, 2], &lim).unwrap());
    }

    #[test]
    fn search_budget_is_enforced() {
        let g = RGraph::complete(8, 3).unwrap();
        let lim = Limits {
            max_assignments: 3,
            ..Limits::default()
        };
        // no K_{3,3,3} in 8 vertices; the search must give up before exhausting
        let r = g.contains_complete_sub(&[3, 3, 3], &lim);
        assert!(matches!(r, Ok(false)));
        let r = g.contains_complete_sub(&[2, 2, 3], &lim);
        assert!(r.is_ok());
        let tight = Limits {
            max_assignments: 0,
            ..Limits::default()
        };
        assert!(matches!(
            g.contains_complete_sub(&[2, 2, 2], &tight),
            Err(Error::SizeGuard { .. })
        ));
    }

    #[test]
    fn json_roundtrip_canonicalizes() {
        let s = r#"{"r":2,"vertices":["y","x","z"],"edges":[["z","x"],["y","x"]]}"#;
        let g = RGraph::from_json_str(s).unwrap();
        assert_eq!(g.vertices(), &["x", "y", "z"]);
        let j = g.to_json();
        assert_eq!(j.edges, vec![vec!["x", "y"], vec!["x", "z"]]);
    }
}
