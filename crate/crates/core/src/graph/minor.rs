use std::collections::BTreeSet;

use super::Graph;

/// One step of the series-parallel reduction: `node` was removed while it
/// had the listed remaining neighbours (at most two). With two neighbours
/// the reduction joins them, possibly creating a fill edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Elimination {
    pub node: usize,
    pub neighbors: Vec<usize>,
    /// True when the two neighbours were not yet adjacent.
    pub fill: bool,
}

/// Repeatedly removes the lowest-index node of degree at most two, joining
/// the two neighbours of a degree-two node (parallel edges merge). Returns
/// the full elimination order, or `None` if the reduction gets stuck, which
/// happens exactly when the graph has a K4 minor.
pub fn series_parallel_elimination(graph: &Graph) -> Option<Vec<Elimination>> {
    let n = graph.node_count();
    let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for &(u, v) in graph.edges() {
        adj[u].insert(v);
        adj[v].insert(u);
    }
    let mut alive: BTreeSet<usize> = (0..n).collect();
    let mut low: BTreeSet<usize> = (0..n).filter(|&v| adj[v].len() <= 2).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(v) = low.pop_first() {
        if !alive.contains(&v) || adj[v].len() > 2 {
            continue;
        }
        alive.remove(&v);
        let neighbors: Vec<usize> = std::mem::take(&mut adj[v]).into_iter().collect();
        for &w in &neighbors {
            adj[w].remove(&v);
        }
        let mut fill = false;
        if let [a, b] = neighbors[..] {
            fill = adj[a].insert(b);
            adj[b].insert(a);
        }
        for &w in &neighbors {
            if adj[w].len() <= 2 {
                low.insert(w);
            }
        }
        order.push(Elimination { node: v, neighbors, fill });
    }
    alive.is_empty().then_some(order)
}

pub fn is_k4_minor_free(graph: &Graph) -> bool {
    series_parallel_elimination(graph).is_some()
}
