use super::{Graph, Walk};
use crate::error::{Error, Result};

/// Breadth-first spanning forest rooted at the lowest-index node of every
/// component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanningForest {
    /// `(parent, tree edge id)`, `None` for roots.
    pub parent: Vec<Option<(usize, usize)>>,
    pub depth: Vec<usize>,
    /// All nodes, component by component, each in BFS order.
    pub order: Vec<usize>,
    pub roots: Vec<usize>,
    pub is_tree_edge: Vec<bool>,
}

impl SpanningForest {
    pub fn new(graph: &Graph) -> Self {
        let n = graph.node_count();
        let mut parent = vec![None; n];
        let mut depth = vec![0; n];
        let mut seen = vec![false; n];
        let mut order = Vec::with_capacity(n);
        let mut roots = Vec::new();
        let mut is_tree_edge = vec![false; graph.edge_count()];
        for root in 0..n {
            if seen[root] {
                continue;
            }
            seen[root] = true;
            roots.push(root);
            let start = order.len();
            order.push(root);
            let mut head = start;
            while head < order.len() {
                let u = order[head];
                head += 1;
                for &(w, e) in graph.neighbors(u) {
                    if !seen[w] {
                        seen[w] = true;
                        parent[w] = Some((u, e));
                        depth[w] = depth[u] + 1;
                        is_tree_edge[e] = true;
                        order.push(w);
                    }
                }
            }
        }
        Self { parent, depth, order, roots, is_tree_edge }
    }

    /// Node sequence of the tree path from `from` to `to` (same component).
    pub fn tree_path(&self, from: usize, to: usize) -> Vec<usize> {
        let (mut a, mut b) = (from, to);
        let mut head = vec![a];
        let mut tail = vec![b];
        while self.depth[a] > self.depth[b] {
            a = self.parent[a].expect("non-root").0;
            head.push(a);
        }
        while self.depth[b] > self.depth[a] {
            b = self.parent[b].expect("non-root").0;
            tail.push(b);
        }
        while a != b {
            a = self.parent[a].expect("same component").0;
            b = self.parent[b].expect("same component").0;
            head.push(a);
            tail.push(b);
        }
        tail.pop();
        head.extend(tail.into_iter().rev());
        head
    }
}

/// One basis cycle: the non-tree edge traversed along its orientation,
/// closed by the tree path back.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FundamentalCycle {
    pub non_tree_edge: usize,
    pub walk: Walk,
    pub signed_edges: Vec<(usize, i8)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleBasis {
    pub tree_edges: Vec<usize>,
    pub fundamental_cycles: Vec<FundamentalCycle>,
}

pub fn fundamental_cycles(graph: &Graph) -> CycleBasis {
    let forest = SpanningForest::new(graph);
    let tree_edges = (0..graph.edge_count()).filter(|&e| forest.is_tree_edge[e]).collect();
    let fundamental_cycles = (0..graph.edge_count())
        .filter(|&e| !forest.is_tree_edge[e])
        .map(|e| {
            let (u, v) = graph.edge(e);
            let mut nodes = vec![u];
            nodes.extend(forest.tree_path(v, u));
            let walk = Walk { nodes };
            let signed_edges = walk.signed_edges(graph);
            FundamentalCycle { non_tree_edge: e, walk, signed_edges }
        })
        .collect();
    CycleBasis { tree_edges, fundamental_cycles }
}

/// Every simple cycle with at most `max_len` edges, once each up to rotation
/// and reflection. Each walk starts and ends at the cycle's smallest node.
pub fn enumerate_circuits(graph: &Graph, max_len: usize, cap: usize) -> Result<Vec<Walk>> {
    let n = graph.node_count();
    let mut out = Vec::new();
    let mut on_path = vec![false; n];
    for start in 0..n {
        let mut path = vec![start];
        on_path[start] = true;
        extend(graph, start, max_len, cap, &mut path, &mut on_path, &mut out)?;
        on_path[start] = false;
    }
    Ok(out)
}

fn extend(
    graph: &Graph,
    start: usize,
    max_len: usize,
    cap: usize,
    path: &mut Vec<usize>,
    on_path: &mut [bool],
    out: &mut Vec<Walk>,
) -> Result<()> {
    let last = *path.last().expect("non-empty path");
    for &(w, _) in graph.neighbors(last) {
        if w == start && path.len() >= 3 && path[1] < last {
            if out.len() == cap {
                return Err(Error::ResourceLimit { what: "circuit enumeration", limit: cap as u64 });
            }
            let mut nodes = path.clone();
            nodes.push(start);
            out.push(Walk { nodes });
        } else if w > start && !on_path[w] && path.len() < max_len {
            on_path[w] = true;
            path.push(w);
            extend(graph, start, max_len, cap, path, on_path, out)?;
            path.pop();
            on_path[w] = false;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn basis_sizes() {
        assert!(fundamental_cycles(&Graph::path(5)).fundamental_cycles.is_empty());
        let c6 = fundamental_cycles(&Graph::cycle(6).unwrap());
        assert_eq!(c6.fundamental_cycles.len(), 1);
        assert_eq!(c6.fundamental_cycles[0].walk.len(), 6);
        assert_eq!(fundamental_cycles(&Graph::complete(4)).fundamental_cycles.len(), 3);
    }

    #[test]
    fn each_basis_cycle_is_closed_with_one_non_tree_edge() {
        let g = Graph::complete(5);
        let basis = fundamental_cycles(&g);
        for cycle in &basis.fundamental_cycles {
            assert!(cycle.walk.is_closed());
            let non_tree: Vec<_> = cycle.signed_edges.iter().filter(|(e, _)| !basis.tree_edges.contains(e)).collect();
            assert_eq!(non_tree, vec![&(cycle.non_tree_edge, 1)]);
        }
    }

    #[test]
    fn circuit_counts() {
        assert_eq!(enumerate_circuits(&Graph::cycle(5).unwrap(), 5, 100).unwrap().len(), 1);
        assert_eq!(enumerate_circuits(&Graph::cycle(5).unwrap(), 4, 100).unwrap().len(), 0);
        assert!(enumerate_circuits(&Graph::path(6), 6, 100).unwrap().is_empty());
        let k4 = enumerate_circuits(&Graph::complete(4), 4, 100).unwrap();
        assert_eq!(k4.iter().filter(|w| w.len() == 3).count(), 4);
        assert_eq!(k4.iter().filter(|w| w.len() == 4).count(), 3);
        assert!(matches!(enumerate_circuits(&Graph::complete(6), 6, 10), Err(Error::ResourceLimit { .. })));
    }

    /// Oracle: count simple cycles of a complete graph combinatorially.
    #[test]
    fn complete_graph_cycle_counts_match_formula() {
        let choose = |n: u64, k: u64| (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1));
        let fact = |k: u64| (1..=k).product::<u64>();
        for n in 3..=7u64 {
            let expected: u64 = (3..=n).map(|k| choose(n, k) * fact(k - 1) / 2).sum();
            let got = enumerate_circuits(&Graph::complete(n as usize), n as usize, 1 << 20).unwrap().len();
            assert_eq!(got as u64, expected, "K{n}");
        }
    }

    fn random_graph() -> impl Strategy<Value = Graph> {
        (1usize..=8).prop_flat_map(|n| {
            proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |mask| {
                let pairs = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
                Graph::new(n, pairs.zip(mask).filter(|(_, keep)| *keep).map(|(p, _)| p)).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn basis_size_is_cyclomatic_number(g in random_graph()) {
            let basis = fundamental_cycles(&g);
            prop_assert_eq!(
                basis.fundamental_cycles.len() + g.node_count(),
                g.edge_count() + g.components().len()
            );
        }
    }
}
