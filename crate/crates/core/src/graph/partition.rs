use std::collections::{BTreeMap, HashMap};

use super::{Graph, GraphError};

/// Assignment of node ids to dense community ids `0..C`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Partition {
    assignment: BTreeMap<String, usize>,
    num_communities: usize,
}

impl Partition {
    /// Accept an assignment whose labels are already dense in `0..C`.
    pub fn new(assignment: BTreeMap<String, usize>) -> Result<Self, GraphError> {
        let count = assignment.values().map(|&c| c + 1).max().unwrap_or(0);
        let mut seen = vec![false; count];
        for &c in assignment.values() {
            seen[c] = true;
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(GraphError::SparseCommunities { count, missing });
        }
        Ok(Self {
            assignment,
            num_communities: count,
        })
    }

    /// Relabel arbitrary labels densely: largest community first, ties by the
    /// smallest member id.
    pub fn from_labels<I, S, L>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (S, L)>,
        S: Into<String>,
        L: std::hash::Hash + Eq,
    {
        let mut raw: BTreeMap<String, usize> = BTreeMap::new();
        let mut label_ids: HashMap<L, usize> = HashMap::new();
        for (node, label) in pairs {
            let next = label_ids.len();
            let l = *label_ids.entry(label).or_insert(next);
            raw.insert(node.into(), l);
        }
        let mut sizes = vec![0usize; label_ids.len()];
        let mut first: Vec<Option<&String>> = vec![None; label_ids.len()];
        for (node, &l) in &raw {
            sizes[l] += 1;
            if first[l].is_none() {
                first[l] = Some(node);
            }
        }
        let mut order: Vec<usize> = (0..sizes.len()).filter(|&l| sizes[l] > 0).collect();
        order.sort_by(|&a, &b| sizes[b].cmp(&sizes[a]).then(first[a].cmp(&first[b])));
        let mut relabel = vec![usize::MAX; sizes.len()];
        for (new, &old) in order.iter().enumerate() {
            relabel[old] = new;
        }
        let assignment = raw.into_iter().map(|(n, l)| (n, relabel[l])).collect();
        Self {
            assignment,
            num_communities: order.len(),
        }
    }

    /// Canonical partition from a community label per graph node index.
    pub fn from_graph_labels(graph: &Graph, labels: &[usize]) -> Self {
        Self::from_labels(
            labels
                .iter()
                .enumerate()
                .map(|(i, &l)| (graph.node_id(i).to_string(), l)),
        )
    }

    pub fn single_community<'a, I: IntoIterator<Item = &'a str>>(nodes: I) -> Self {
        Self::from_labels(nodes.into_iter().map(|n| (n.to_string(), 0usize)))
    }

    pub fn community_of(&self, node: &str) -> Option<usize> {
        self.assignment.get(node).copied()
    }

    pub fn num_communities(&self) -> usize {
        self.num_communities
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    /// Nodes in id order with their community.
    pub fn iter(&self) -> impl Iterator<Item = (&str, usize)> + '_ {
        self.assignment.iter().map(|(n, &c)| (n.as_str(), c))
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.num_communities];
        for &c in self.assignment.values() {
            sizes[c] += 1;
        }
        sizes
    }

    pub fn members(&self, community: usize) -> Vec<&str> {
        self.iter()
            .filter(|&(_, c)| c == community)
            .map(|(n, _)| n)
            .collect()
    }

    /// Community per graph node index; fails on the first unassigned node.
    pub fn labels_for(&self, graph: &Graph) -> Result<Vec<usize>, GraphError> {
        graph
            .node_ids()
            .iter()
            .map(|id| {
                self.community_of(id)
                    .ok_or_else(|| GraphError::Unassigned(id.clone()))
            })
            .collect()
    }
}
