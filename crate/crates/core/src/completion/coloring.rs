use num_traits::{One, Zero};

use super::witness::GramWitness;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::numerics::Rational;

pub const DEFAULT_MAX_COLOR_NODES: u64 = 1 << 24;

struct Dsatur<'a> {
    graph: &'a Graph,
    colors: Vec<Option<usize>>,
    /// `forbidden[v][c]`: neighbours of `v` currently using colour `c`.
    forbidden: Vec<Vec<u32>>,
    best: Option<Vec<usize>>,
    best_k: usize,
    lower: usize,
    visited: u64,
    limit: u64,
}

impl Dsatur<'_> {
    fn saturation(&self, v: usize) -> usize {
        self.forbidden[v].iter().filter(|&&c| c > 0).count()
    }

    fn pick(&self) -> Option<usize> {
        (0..self.graph.node_count()).filter(|&v| self.colors[v].is_none()).max_by(|&a, &b| {
            (self.saturation(a), self.graph.degree(a)).cmp(&(self.saturation(b), self.graph.degree(b))).then(b.cmp(&a))
        })
    }

    fn assign(&mut self, v: usize, c: Option<usize>) {
        if let Some(old) = self.colors[v] {
            for &(w, _) in self.graph.neighbors(v) {
                self.forbidden[w][old] -= 1;
            }
        }
        self.colors[v] = c;
        if let Some(c) = c {
            for &(w, _) in self.graph.neighbors(v) {
                self.forbidden[w][c] += 1;
            }
        }
    }

    fn search(&mut self, used: usize) -> Result<()> {
        self.visited += 1;
        if self.visited > self.limit {
            return Err(Error::ResourceLimit { what: "colouring search nodes", limit: self.limit });
        }
        let Some(v) = self.pick() else {
            self.best_k = used;
            self.best = Some(self.colors.iter().map(|c| c.expect("all coloured")).collect());
            return Ok(());
        };
        for c in 0..=used.min(self.best_k.saturating_sub(1)) {
            let next = used.max(c + 1);
            if next >= self.best_k || self.forbidden[v][c] > 0 {
                continue;
            }
            self.assign(v, Some(c));
            self.search(next)?;
            self.assign(v, None);
            if self.best_k <= self.lower {
                break;
            }
        }
        Ok(())
    }
}

/// Greedy clique, a lower bound for the chromatic number.
fn greedy_clique(graph: &Graph) -> usize {
    let mut best = usize::from(graph.node_count() > 0);
    for start in 0..graph.node_count() {
        let mut clique = vec![start];
        let mut cands: Vec<usize> = graph.neighbors(start).iter().map(|&(w, _)| w).collect();
        cands.sort_by_key(|&w| std::cmp::Reverse(graph.degree(w)));
        for w in cands {
            if clique.iter().all(|&u| graph.has_edge(u, w)) {
                clique.push(w);
            }
        }
        best = best.max(clique.len());
    }
    best
}

/// Exact chromatic number and an optimal colouring by DSATUR-ordered
/// branch and bound. `limit` caps the number of search nodes.
pub fn chromatic_number(graph: &Graph, limit: u64) -> Result<(usize, Vec<usize>)> {
    let n = graph.node_count();
    let mut search = Dsatur {
        graph,
        colors: vec![None; n],
        forbidden: vec![vec![0; n.max(1)]; n],
        best: None,
        best_k: n + 1,
        lower: greedy_clique(graph),
        visited: 0,
        limit,
    };
    search.search(0)?;
    let colouring = search.best.expect("n colours always suffice");
    Ok((search.best_k, colouring))
}

/// Standard basis vector `e_c` for every node of colour `c`, realising
/// `x = 0` in `R^chi`.
pub fn coloring_witness(graph: &Graph, limit: u64) -> Result<GramWitness> {
    let (k, colours) = chromatic_number(graph, limit)?;
    let vectors = colours
        .iter()
        .map(|&c| (0..k).map(|i| if i == c { Rational::one() } else { Rational::zero() }).collect())
        .collect();
    GramWitness::exact(k, vectors)
}
