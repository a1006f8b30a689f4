use std::collections::HashMap;

use super::Graph;
use crate::error::{Error, Result};

/// `p`-fold suspension: apex nodes `n..n+p` are pairwise adjacent and
/// adjacent to every original node. Apex `n + k` contributes its edges to
/// all lower-numbered nodes, in increasing order, so suspending twice one at
/// a time yields the same edge list as suspending by two.
pub fn suspension(graph: &Graph, p: usize) -> Result<Graph> {
    if p == 0 {
        return Err(Error::InvalidInput("suspension needs p >= 1".into()));
    }
    let n = graph.node_count();
    let mut edges = graph.edges().to_vec();
    for apex in n..n + p {
        edges.extend((0..apex).map(|v| (v, apex)));
    }
    Graph::from_canonical(n + p, edges)
}

/// Result of gluing `g2` onto `g1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueSum {
    pub graph: Graph,
    /// Node of the glued graph for each node of `g2`; nodes of `g1` keep
    /// their labels.
    pub g2_nodes: Vec<usize>,
}

/// Glues `g2` onto `g1`, identifying `g2` node `b` with `g1` node `a` for
/// each `(b, a)` in `identification`. Unidentified `g2` nodes are appended.
pub fn clique_sum(g1: &Graph, g2: &Graph, identification: &[(usize, usize)]) -> Result<CliqueSum> {
    let mut map: HashMap<usize, usize> = HashMap::new();
    for &(b, a) in identification {
        if b >= g2.node_count() || a >= g1.node_count() {
            return Err(Error::InvalidInput(format!("identification ({b}, {a}) is out of range")));
        }
        if map.insert(b, a).is_some() || identification.iter().filter(|&&(_, x)| x == a).count() > 1 {
            return Err(Error::InvalidInput("identification must be one-to-one".into()));
        }
    }
    let shared1: Vec<usize> = identification.iter().map(|&(_, a)| a).collect();
    let shared2: Vec<usize> = identification.iter().map(|&(b, _)| b).collect();
    if !g1.is_clique(&shared1) {
        return Err(Error::NotAClique("the first graph"));
    }
    if !g2.is_clique(&shared2) {
        return Err(Error::NotAClique("the second graph"));
    }
    let mut next = g1.node_count();
    let g2_nodes: Vec<usize> = (0..g2.node_count())
        .map(|b| {
            map.get(&b).copied().unwrap_or_else(|| {
                next += 1;
                next - 1
            })
        })
        .collect();
    let mut edges = g1.edges().to_vec();
    for &(u, v) in g2.edges() {
        let (a, b) = (g2_nodes[u], g2_nodes[v]);
        if !g1.has_edge(a, b) {
            edges.push((a.min(b), a.max(b)));
        }
    }
    Ok(CliqueSum { graph: Graph::new(next, edges)?, g2_nodes })
}

/// The hat graph together with its covering triangles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HatGraph {
    pub graph: Graph,
    /// `[i, j, v_ij]` for each original edge `(i, j)`, in edge order.
    pub cliques: Vec<[usize; 3]>,
}

/// Adds a node `v_ij = n + m` adjacent to both ends of edge `m = (i, j)`.
/// The original edges keep ids `0..|E|`; edge `m` then contributes
/// `(i, v_ij)` and `(j, v_ij)` at ids `|E| + 2m` and `|E| + 2m + 1`.
pub fn hat_graph(graph: &Graph) -> HatGraph {
    let n = graph.node_count();
    let mut edges = graph.edges().to_vec();
    let mut cliques = Vec::with_capacity(graph.edge_count());
    for (m, &(i, j)) in graph.edges().iter().enumerate() {
        edges.push((i, n + m));
        edges.push((j, n + m));
        cliques.push([i, j, n + m]);
    }
    let graph = Graph::from_canonical(n + graph.edge_count(), edges).expect("hat graph is simple");
    HatGraph { graph, cliques }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suspension_examples() {
        assert_eq!(suspension(&Graph::complete(2), 1).unwrap(), Graph::complete(3));
        let wheel = suspension(&Graph::cycle(5).unwrap(), 1).unwrap();
        assert_eq!((wheel.node_count(), wheel.edge_count()), (6, 10));
        assert_eq!(suspension(&Graph::empty(1), 2).unwrap(), Graph::complete(3));
        assert!(suspension(&Graph::empty(1), 0).is_err());
    }

    #[test]
    fn suspension_composes() {
        let g = Graph::new(4, [(0, 1), (2, 3)]).unwrap();
        let twice = suspension(&suspension(&g, 1).unwrap(), 1).unwrap();
        assert_eq!(twice, suspension(&g, 2).unwrap());
    }

    #[test]
    fn clique_sum_examples() {
        let k3 = Graph::complete(3);
        let bowtie_edge = clique_sum(&k3, &k3, &[(0, 0), (1, 1)]).unwrap();
        assert_eq!((bowtie_edge.graph.node_count(), bowtie_edge.graph.edge_count()), (4, 5));

        let c4 = Graph::cycle(4).unwrap();
        let joined = clique_sum(&k3, &c4, &[(0, 2)]).unwrap();
        assert_eq!((joined.graph.node_count(), joined.graph.edge_count()), (6, 7));

        let disjoint = clique_sum(&k3, &c4, &[]).unwrap();
        assert_eq!((disjoint.graph.node_count(), disjoint.graph.edge_count()), (7, 7));
        assert_eq!(disjoint.g2_nodes, vec![3, 4, 5, 6]);
    }

    #[test]
    fn clique_sum_needs_cliques() {
        let c4 = Graph::cycle(4).unwrap();
        let k3 = Graph::complete(3);
        assert_eq!(clique_sum(&k3, &c4, &[(0, 0), (2, 1)]), Err(Error::NotAClique("the second graph")));
        assert_eq!(clique_sum(&c4, &k3, &[(0, 0), (1, 2)]), Err(Error::NotAClique("the first graph")));
    }

    #[test]
    fn hat_graph_examples() {
        let hat = hat_graph(&Graph::cycle(5).unwrap());
        assert_eq!((hat.graph.node_count(), hat.graph.edge_count()), (10, 15));
        assert_eq!(hat_graph(&Graph::complete(2)).graph, Graph::complete(3));
        assert_eq!(hat_graph(&Graph::empty(3)).graph, Graph::empty(3));
        for (m, clique) in hat.cliques.iter().enumerate() {
            assert!(hat.graph.is_clique(clique));
            assert_eq!(clique[2], 5 + m);
        }
    }

    #[test]
    fn hat_graph_keeps_original_as_induced_subgraph() {
        let g = Graph::complete(4);
        let hat = hat_graph(&g);
        assert_eq!(hat.graph.induced_subgraph(&[0, 1, 2, 3]), g);
    }
}
