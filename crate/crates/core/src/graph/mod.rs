//! Graphs with a fixed reference orientation, cycle machinery and the
//! graph operations used by the reductions.

mod cycles;
mod minor;
mod ops;

use std::collections::HashMap;

use crate::error::{Error, Result};

pub use cycles::{enumerate_circuits, fundamental_cycles, CycleBasis, FundamentalCycle, SpanningForest};
pub use minor::{is_k4_minor_free, series_parallel_elimination, Elimination};
pub use ops::{clique_sum, hat_graph, suspension, CliqueSum, HatGraph};

/// Undirected simple graph on nodes `0..n`. Edges are stored as `(u, v)`
/// with `u < v`; that stored order is the reference orientation.
#[derive(Debug, Clone)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    index: HashMap<(usize, usize), usize>,
    adjacency: Vec<Vec<(usize, usize)>>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.edges == other.edges
    }
}

impl Eq for Graph {}

impl Graph {
    /// Builds a graph, normalising each pair to `(min, max)` while keeping
    /// the given edge order.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        Self::build(n, edges.into_iter().map(|(u, v)| (u.min(v), u.max(v))))
    }

    /// Like [`Graph::new`] but requires every pair already satisfy `u < v`.
    pub fn from_canonical(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let edges: Vec<_> = edges.into_iter().collect();
        if let Some(&(u, v)) = edges.iter().find(|&&(u, v)| u >= v) {
            return Err(Error::InvalidGraph(format!("edge [{u},{v}] is not in canonical u < v form")));
        }
        Self::build(n, edges)
    }

    fn build(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut graph = Self { n, edges: Vec::new(), index: HashMap::new(), adjacency: vec![Vec::new(); n] };
        for (u, v) in edges {
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at node {u}")));
            }
            if v >= n {
                return Err(Error::InvalidGraph(format!("edge [{u},{v}] has an endpoint >= n = {n}")));
            }
            if graph.index.contains_key(&(u, v)) {
                return Err(Error::InvalidGraph(format!("duplicate edge [{u},{v}]")));
            }
            let id = graph.edges.len();
            graph.index.insert((u, v), id);
            graph.edges.push((u, v));
            graph.adjacency[u].push((v, id));
            graph.adjacency[v].push((u, id));
        }
        Ok(graph)
    }

    pub fn empty(n: usize) -> Self {
        Self::build(n, []).expect("edgeless graph")
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        Self::build(n, edges).expect("complete graph")
    }

    pub fn path(n: usize) -> Self {
        Self::build(n, (1..n).map(|v| (v - 1, v))).expect("path graph")
    }

    /// Circuit `C_n` (`n >= 3`): edge `i` joins `i` and `i + 1` for
    /// `i < n - 1`, and the last edge is `(0, n - 1)`.
    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidGraph(format!("a circuit needs at least 3 nodes, got {n}")));
        }
        Self::build(n, (0..n - 1).map(|i| (i, i + 1)).chain([(0, n - 1)]))
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, id: usize) -> (usize, usize) {
        self.edges[id]
    }

    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        self.index.get(&(u.min(v), u.max(v))).copied()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edge_index(u, v).is_some()
    }

    /// `(neighbour, edge id)` pairs in insertion order.
    pub fn neighbors(&self, v: usize) -> &[(usize, usize)] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    /// Connected components, each listed in breadth-first order from its
    /// lowest-index node; components ordered by that node.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for root in 0..self.n {
            if seen[root] {
                continue;
            }
            seen[root] = true;
            let mut comp = vec![root];
            let mut head = 0;
            while head < comp.len() {
                let u = comp[head];
                head += 1;
                for &(w, _) in &self.adjacency[u] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    pub fn is_clique(&self, nodes: &[usize]) -> bool {
        nodes.iter().enumerate().all(|(i, &u)| nodes[i + 1..].iter().all(|&v| u != v && self.has_edge(u, v)))
    }

    /// Subgraph induced on `nodes`, relabelled `0..nodes.len()` in the given
    /// order.
    pub fn induced_subgraph(&self, nodes: &[usize]) -> Graph {
        let position: HashMap<usize, usize> = nodes.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let edges = self.edges.iter().filter_map(|&(u, v)| Some((*position.get(&u)?, *position.get(&v)?)));
        Graph::new(nodes.len(), edges).expect("induced subgraph of a simple graph")
    }
}

/// A walk `u_0, ..., u_k` whose consecutive nodes are adjacent.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Walk {
    nodes: Vec<usize>,
}

impl Walk {
    pub fn new(graph: &Graph, nodes: Vec<usize>) -> Result<Self> {
        if let Some(&bad) = nodes.iter().find(|&&v| v >= graph.node_count()) {
            return Err(Error::InvalidInput(format!("walk visits unknown node {bad}")));
        }
        if let Some(pair) = nodes.windows(2).find(|p| !graph.has_edge(p[0], p[1])) {
            return Err(Error::InvalidInput(format!("walk step {}-{} is not an edge", pair[0], pair[1])));
        }
        Ok(Self { nodes })
    }

    pub fn nodes(&self) -> &[usize] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_closed(&self) -> bool {
        self.nodes.len() > 1 && self.nodes.first() == self.nodes.last()
    }

    /// Edge ids with `+1` when a step follows the reference orientation and
    /// `-1` when it runs against it.
    pub fn signed_edges(&self, graph: &Graph) -> Vec<(usize, i8)> {
        self.nodes
            .windows(2)
            .map(|p| {
                let id = graph.edge_index(p[0], p[1]).expect("walk validated against this graph");
                (id, if p[0] < p[1] { 1 } else { -1 })
            })
            .collect()
    }
}
