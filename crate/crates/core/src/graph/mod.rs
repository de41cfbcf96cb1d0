//! Weighted graph container shared by the citation and semantic layers.
//!
//! Node ids are opaque strings mapped to dense indices in insertion order.
//! Inserting an edge that already exists accumulates its weight.

mod io;
mod partition;

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

pub use io::{
    export, import, parse, partition_from_attribute, render, ExportFormat, COMMUNITY_ATTRIBUTE,
};
pub use partition::Partition;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("in/out degree requested on an undirected graph")]
    UndirectedDegree,
    #[error("self-loop on `{0}` rejected")]
    SelfLoop(String),
    #[error("edge weight must be positive and finite, got {0}")]
    InvalidWeight(f64),
    #[error("node `{0}` is not assigned to any community")]
    Unassigned(String),
    #[error("community ids must be dense in 0..{count}, missing {missing}")]
    SparseCommunities { count: usize, missing: usize },
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot parse {format} input: {message}")]
    Parse { format: &'static str, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DegreeMode {
    In,
    Out,
    Total,
}

/// Unweighted and weighted degree of a node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Degree {
    pub count: usize,
    pub weight: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct NodeData {
    pub label: String,
    pub attributes: BTreeMap<String, String>,
}

#[derive(Debug, Clone)]
pub struct Graph {
    directed: bool,
    ids: Vec<String>,
    index: HashMap<String, usize>,
    data: Vec<NodeData>,
    // Undirected graphs store each edge in both endpoint maps of `out`.
    out: Vec<BTreeMap<usize, f64>>,
    inc: Vec<BTreeMap<usize, f64>>,
    edge_count: usize,
}

impl Graph {
    pub fn new(directed: bool) -> Self {
        Self {
            directed,
            ids: Vec::new(),
            index: HashMap::new(),
            data: Vec::new(),
            out: Vec::new(),
            inc: Vec::new(),
            edge_count: 0,
        }
    }

    pub fn directed() -> Self {
        Self::new(true)
    }

    pub fn undirected() -> Self {
        Self::new(false)
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn node_count(&self) -> usize {
        self.ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Insert a node if absent and return its dense index.
    pub fn add_node(&mut self, id: &str) -> usize {
        if let Some(&i) = self.index.get(id) {
            return i;
        }
        let i = self.ids.len();
        self.ids.push(id.to_string());
        self.index.insert(id.to_string(), i);
        self.data.push(NodeData {
            label: id.to_string(),
            attributes: BTreeMap::new(),
        });
        self.out.push(BTreeMap::new());
        if self.directed {
            self.inc.push(BTreeMap::new());
        }
        i
    }

    pub fn set_label(&mut self, id: &str, label: &str) {
        let i = self.add_node(id);
        self.data[i].label = label.to_string();
    }

    pub fn set_attribute(&mut self, id: &str, key: &str, value: &str) {
        let i = self.add_node(id);
        self.data[i]
            .attributes
            .insert(key.to_string(), value.to_string());
    }

    /// Add `weight` to edge (u, v), creating nodes and the edge as needed.
    pub fn add_edge(&mut self, u: &str, v: &str, weight: f64) -> Result<(), GraphError> {
        if u == v {
            return Err(GraphError::SelfLoop(u.to_string()));
        }
        if !(weight > 0.0 && weight.is_finite()) {
            return Err(GraphError::InvalidWeight(weight));
        }
        let a = self.add_node(u);
        let b = self.add_node(v);
        self.add_edge_indices(a, b, weight);
        Ok(())
    }

    pub(crate) fn add_edge_indices(&mut self, a: usize, b: usize, weight: f64) {
        debug_assert!(a != b && weight > 0.0);
        let fresh = match self.out[a].get_mut(&b) {
            Some(w) => {
                *w += weight;
                false
            }
            None => {
                self.out[a].insert(b, weight);
                true
            }
        };
        if self.directed {
            *self.inc[b].entry(a).or_insert(0.0) += weight;
        } else {
            *self.out[b].entry(a).or_insert(0.0) += weight;
        }
        if fresh {
            self.edge_count += 1;
        }
    }

    pub fn contains(&self, id: &str) -> bool {
        self.index.contains_key(id)
    }

    pub fn node_index(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn node_id(&self, index: usize) -> &str {
        &self.ids[index]
    }

    pub fn node_ids(&self) -> &[String] {
        &self.ids
    }

    pub fn node_data(&self, index: usize) -> &NodeData {
        &self.data[index]
    }

    pub fn edge_weight(&self, u: &str, v: &str) -> Option<f64> {
        let a = self.node_index(u)?;
        let b = self.node_index(v)?;
        self.out[a].get(&b).copied()
    }

    /// Out-neighbors (directed) or neighbors (undirected) with edge weights.
    pub fn successors(&self, index: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.out[index].iter().map(|(&v, &w)| (v, w))
    }

    /// In-neighbors of a directed graph; neighbors of an undirected one.
    pub fn predecessors(&self, index: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let map = if self.directed {
            &self.inc[index]
        } else {
            &self.out[index]
        };
        map.iter().map(|(&v, &w)| (v, w))
    }

    pub fn in_degree_of(&self, index: usize) -> usize {
        if self.directed {
            self.inc[index].len()
        } else {
            self.out[index].len()
        }
    }

    pub fn out_degree_of(&self, index: usize) -> usize {
        self.out[index].len()
    }

    /// Distinct-neighbor count, ignoring direction.
    pub fn total_degree_of(&self, index: usize) -> usize {
        if self.directed {
            self.out[index].len() + self.inc[index].len()
        } else {
            self.out[index].len()
        }
    }

    pub fn degree(&self, id: &str, mode: DegreeMode) -> Result<Degree, GraphError> {
        let i = self
            .node_index(id)
            .ok_or_else(|| GraphError::UnknownNode(id.to_string()))?;
        let sum = |m: &BTreeMap<usize, f64>| m.values().sum::<f64>();
        match (self.directed, mode) {
            (false, DegreeMode::Total) => Ok(Degree {
                count: self.out[i].len(),
                weight: sum(&self.out[i]),
            }),
            (false, _) => Err(GraphError::UndirectedDegree),
            (true, DegreeMode::In) => Ok(Degree {
                count: self.inc[i].len(),
                weight: sum(&self.inc[i]),
            }),
            (true, DegreeMode::Out) => Ok(Degree {
                count: self.out[i].len(),
                weight: sum(&self.out[i]),
            }),
            (true, DegreeMode::Total) => Ok(Degree {
                count: self.out[i].len() + self.inc[i].len(),
                weight: sum(&self.out[i]) + sum(&self.inc[i]),
            }),
        }
    }

    /// Every edge once, as index triples in canonical order (source index
    /// ascending, then target). Undirected edges are reported with u < v.
    pub fn edge_indices(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        let directed = self.directed;
        self.out.iter().enumerate().flat_map(move |(u, m)| {
            m.iter()
                .filter(move |(&v, _)| directed || u < v)
                .map(move |(&v, &w)| (u, v, w))
        })
    }

    /// Every edge once, by node id.
    pub fn edges(&self) -> impl Iterator<Item = (&str, &str, f64)> + '_ {
        self.edge_indices()
            .map(|(u, v, w)| (self.ids[u].as_str(), self.ids[v].as_str(), w))
    }

    pub fn total_weight(&self) -> f64 {
        self.edge_indices().map(|(_, _, w)| w).sum()
    }

    /// Subgraph induced by the nodes for which `keep` holds, preserving node
    /// order, labels and attributes.
    pub fn induced_subgraph<F: Fn(usize) -> bool>(&self, keep: F) -> Graph {
        let mut g = Graph::new(self.directed);
        let mut map = vec![usize::MAX; self.node_count()];
        for i in 0..self.node_count() {
            if keep(i) {
                let j = g.add_node(&self.ids[i]);
                g.data[j] = self.data[i].clone();
                map[i] = j;
            }
        }
        for (u, v, w) in self.edge_indices() {
            if map[u] != usize::MAX && map[v] != usize::MAX {
                g.add_edge_indices(map[u], map[v], w);
            }
        }
        g
    }

    /// Undirected copy; reciprocal directed edges merge with summed weight.
    pub fn to_undirected(&self) -> Graph {
        if !self.directed {
            return self.clone();
        }
        let mut g = Graph::undirected();
        for i in 0..self.node_count() {
            let j = g.add_node(&self.ids[i]);
            g.data[j] = self.data[i].clone();
        }
        for (u, v, w) in self.edge_indices() {
            g.add_edge_indices(u, v, w);
        }
        g
    }
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.directed == other.directed
            && self.ids == other.ids
            && self.data == other.data
            && self.out == other.out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn directed_triangle_in_degrees() {
        let mut g = Graph::directed();
        g.add_edge("a", "b", 1.0).unwrap();
        g.add_edge("b", "c", 1.0).unwrap();
        g.add_edge("c", "a", 1.0).unwrap();
        for id in ["a", "b", "c"] {
            assert_eq!(g.degree(id, DegreeMode::In).unwrap().count, 1);
            assert_eq!(g.degree(id, DegreeMode::Total).unwrap().count, 2);
        }
    }

    #[test]
    fn isolated_and_star() {
        let mut g = Graph::undirected();
        g.add_node("lonely");
        for leaf in ["l1", "l2", "l3", "l4", "l5"] {
            g.add_edge("hub", leaf, 1.0).unwrap();
        }
        assert_eq!(g.degree("lonely", DegreeMode::Total).unwrap().count, 0);
        assert_eq!(g.degree("hub", DegreeMode::Total).unwrap().count, 5);
        assert!(matches!(
            g.degree("hub", DegreeMode::In),
            Err(GraphError::UndirectedDegree)
        ));
        assert!(matches!(
            g.degree("nobody", DegreeMode::Total),
            Err(GraphError::UnknownNode(_))
        ));
    }

    #[test]
    fn duplicate_insertion_accumulates() {
        let mut g = Graph::undirected();
        g.add_edge("a", "b", 1.5).unwrap();
        g.add_edge("b", "a", 2.0).unwrap();
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.edge_weight("a", "b"), Some(3.5));
        assert_eq!(g.degree("a", DegreeMode::Total).unwrap().weight, 3.5);
    }

    #[test]
    fn rejects_self_loops_and_bad_weights() {
        let mut g = Graph::directed();
        assert!(matches!(g.add_edge("a", "a", 1.0), Err(GraphError::SelfLoop(_))));
        assert!(matches!(g.add_edge("a", "b", 0.0), Err(GraphError::InvalidWeight(_))));
        assert!(matches!(
            g.add_edge("a", "b", f64::NAN),
            Err(GraphError::InvalidWeight(_))
        ));
    }

    #[test]
    fn symmetrization_sums_reciprocal_edges() {
        let mut g = Graph::directed();
        g.add_edge("a", "b", 1.0).unwrap();
        g.add_edge("b", "a", 2.0).unwrap();
        g.add_edge("b", "c", 1.0).unwrap();
        let u = g.to_undirected();
        assert_eq!(u.edge_count(), 2);
        assert_eq!(u.edge_weight("b", "a"), Some(3.0));
    }

    #[test]
    fn induced_subgraph_keeps_attributes() {
        let mut g = Graph::directed();
        g.add_edge("a", "b", 1.0).unwrap();
        g.add_edge("b", "c", 1.0).unwrap();
        g.set_attribute("b", "year", "2001");
        let h = g.induced_subgraph(|i| g.node_id(i) != "c");
        assert_eq!(h.node_count(), 2);
        assert_eq!(h.edge_count(), 1);
        let b = h.node_index("b").unwrap();
        assert_eq!(h.node_data(b).attributes["year"], "2001");
    }

    proptest! {
        #[test]
        fn degree_sums_match_edge_count(
            edges in prop::collection::vec((0u8..15, 0u8..15, 1u8..5), 0..60),
            directed in any::<bool>(),
        ) {
            let mut g = Graph::new(directed);
            for (u, v, w) in &edges {
                if u != v {
                    g.add_edge(&u.to_string(), &v.to_string(), *w as f64).unwrap();
                }
            }
            let n = g.node_count();
            if directed {
                let ins: usize = (0..n).map(|i| g.in_degree_of(i)).sum();
                let outs: usize = (0..n).map(|i| g.out_degree_of(i)).sum();
                prop_assert_eq!(ins, g.edge_count());
                prop_assert_eq!(outs, g.edge_count());
            } else {
                let total: usize = (0..n).map(|i| g.total_degree_of(i)).sum();
                prop_assert_eq!(total, 2 * g.edge_count());
            }
        }

        #[test]
        fn insertion_order_does_not_change_weights(
            mut edges in prop::collection::vec((0u8..8, 0u8..8, 1u8..5), 1..40),
        ) {
            edges.retain(|(u, v, _)| u != v);
            let build = |es: &[(u8, u8, u8)]| {
                let mut g = Graph::undirected();
                for (u, v, w) in es {
                    g.add_edge(&u.to_string(), &v.to_string(), *w as f64).unwrap();
                }
                let mut all: Vec<(String, String, f64)> = g
                    .edges()
                    .map(|(a, b, w)| {
                        let (a, b) = if a < b { (a, b) } else { (b, a) };
                        (a.to_string(), b.to_string(), w)
                    })
                    .collect();
                all.sort_by(|x, y| (&x.0, &x.1).cmp(&(&y.0, &y.1)));
                all
            };
            let forward = build(&edges);
            edges.reverse();
            prop_assert_eq!(forward, build(&edges));
        }
    }
}
