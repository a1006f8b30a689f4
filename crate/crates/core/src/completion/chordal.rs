use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap};
use std::f64::consts::PI;

use super::glue::{apply, procrustes};
use super::witness::GramWitness;
use crate::error::{Error, Result};
use crate::graph::{series_parallel_elimination, Graph};
use crate::numerics::to_f64;
use crate::polytope::{check_circuit_elliptope, check_elliptope_k4free, MetOutcome, PartialVector, Violation};

/// Below this `sin` two block vectors count as parallel.
const PARALLEL: f64 = 1e-12;

fn key(u: usize, v: usize) -> (usize, usize) {
    (u.min(v), u.max(v))
}

/// The graph shrinking under elimination, with cosines and angles (in
/// units of pi) on original and fill edges.
struct Working {
    adj: Vec<BTreeSet<usize>>,
    cosine: BTreeMap<(usize, usize), f64>,
    angle: BTreeMap<(usize, usize), f64>,
}

#[derive(PartialEq)]
struct State(f64, usize, usize);

impl Eq for State {}

impl Ord for State {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then_with(|| (other.1, other.2).cmp(&(self.1, self.2)))
    }
}

impl PartialOrd for State {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Working {
    fn new(graph: &Graph, x: &[f64]) -> Self {
        let mut adj = vec![BTreeSet::new(); graph.node_count()];
        let mut cosine = BTreeMap::new();
        let mut angle = BTreeMap::new();
        for (&(u, v), &c) in graph.edges().iter().zip(x) {
            adj[u].insert(v);
            adj[v].insert(u);
            cosine.insert((u, v), c);
            angle.insert((u, v), c.clamp(-1.0, 1.0).acos() / PI);
        }
        Self { adj, cosine, angle }
    }

    /// Cheapest `a`-`b` walks of even and odd parity, where an edge taken
    /// into the odd set costs `1 - angle` and flips parity, and otherwise
    /// costs `angle`.
    fn parity_costs(&self, a: usize, b: usize) -> [f64; 2] {
        let mut dist = vec![[f64::INFINITY; 2]; self.adj.len()];
        let mut heap = BinaryHeap::new();
        dist[a][0] = 0.0;
        heap.push(State(0.0, a, 0));
        while let Some(State(d, u, p)) = heap.pop() {
            if d > dist[u][p] {
                continue;
            }
            for &w in &self.adj[u] {
                let t = self.angle[&key(u, w)];
                for (q, c) in [(p, t), (1 - p, 1.0 - t)] {
                    let nd = d + c.max(0.0);
                    if nd < dist[w][q] {
                        dist[w][q] = nd;
                        heap.push(State(nd, w, q));
                    }
                }
            }
        }
        dist[b]
    }

    fn add_chord(&mut self, a: usize, b: usize, tol: f64) -> Result<()> {
        let [even, odd] = self.parity_costs(a, b);
        let lo = (1.0 - odd).max(0.0);
        let hi = even.min(1.0);
        if lo > hi + tol {
            return Err(Error::NotInElliptope(format!("empty interval [{lo}, {hi}] for chord ({a}, {b})")));
        }
        let z = 0.5 * (lo + hi);
        self.adj[a].insert(b);
        self.adj[b].insert(a);
        self.angle.insert(key(a, b), z);
        self.cosine.insert(key(a, b), (PI * z).cos());
        Ok(())
    }

    fn cos(&self, u: usize, v: usize) -> f64 {
        self.cosine[&key(u, v)]
    }
}

/// Unit vectors for `(a, b, v)` with the given pairwise cosines.
fn triangle_block(ab: f64, av: f64, bv: f64) -> [[f64; 3]; 3] {
    let s = (1.0 - ab * ab).max(0.0).sqrt();
    let y = if s > PARALLEL { (bv - ab * av) / s } else { (1.0 - av * av).max(0.0).sqrt() };
    let z = (1.0 - av * av - y * y).max(0.0).sqrt();
    [[1.0, 0.0, 0.0], [ab, s, 0.0], [av, y, z]]
}

/// Completes by eliminating nodes in `order`, each with at most two
/// remaining neighbours that get joined by a chord, then glues the
/// resulting triangles back in reverse.
fn complete_by_elimination(graph: &Graph, x: &[f64], order: &[usize], tol: f64) -> Result<GramWitness> {
    let mut work = Working::new(graph, x);
    let mut steps: Vec<(usize, Vec<usize>)> = Vec::with_capacity(order.len());
    for &v in order {
        let nbrs: Vec<usize> = work.adj[v].iter().copied().collect();
        if nbrs.len() > 2 {
            return Err(Error::InvalidInput(format!("node {v} has {} neighbours at elimination", nbrs.len())));
        }
        if let [a, b] = nbrs[..] {
            if !work.adj[a].contains(&b) {
                work.add_chord(a, b, tol)?;
            }
        }
        for &w in &nbrs {
            work.adj[w].remove(&v);
        }
        work.adj[v].clear();
        steps.push((v, nbrs));
    }
    let mut vectors: Vec<Vec<f64>> = vec![Vec::new(); graph.node_count()];
    for (v, nbrs) in steps.iter().rev() {
        let (block, shared): (Vec<[f64; 3]>, Vec<usize>) = match nbrs[..] {
            [] => (vec![[1.0, 0.0, 0.0]], vec![]),
            [a] => {
                let c = work.cos(a, *v);
                (vec![[1.0, 0.0, 0.0], [c, (1.0 - c * c).max(0.0).sqrt(), 0.0]], vec![a])
            }
            [a, b] => (triangle_block(work.cos(a, b), work.cos(a, *v), work.cos(b, *v)).to_vec(), vec![a, b]),
            _ => unreachable!("at most two neighbours"),
        };
        let sources: Vec<&[f64]> = block[..shared.len()].iter().map(|p| p.as_slice()).collect();
        let targets: Vec<&[f64]> = shared.iter().map(|&u| vectors[u].as_slice()).collect();
        let q = procrustes(3, &sources, &targets);
        vectors[*v] = apply(&q, &block[shared.len()]);
    }
    GramWitness::float(3, vectors)
}

fn describe(v: &Violation) -> String {
    format!("{:?} violated by {:e}", v.inequality, v.amount)
}

/// A membership test too close to call still lets the construction run:
/// the verified witness settles it.
fn screen(outcome: Result<MetOutcome>) -> Result<()> {
    match outcome {
        Ok(MetOutcome::NonMember(v)) => Err(Error::NotInElliptope(describe(&v))),
        Ok(MetOutcome::Member) | Err(Error::ToleranceAmbiguous(_)) => Ok(()),
        Err(e) => Err(e),
    }
}

fn finish(graph: &Graph, x: &PartialVector, w: GramWitness, tol: f64) -> Result<GramWitness> {
    match w.verify(graph, x, tol) {
        Ok(()) => Ok(w),
        Err(e) => Err(Error::ToleranceAmbiguous(e.to_string())),
    }
}

fn chord_failure(e: Error) -> Error {
    match e {
        Error::NotInElliptope(msg) => Error::ToleranceAmbiguous(msg),
        other => other,
    }
}

/// Rank-at-most-3 completion of `x in E(G)` for a graph without a K4 minor:
/// series-parallel elimination gives a triangulation whose fill chords take
/// the midpoint of their feasible interval.
pub fn complete_k4free(graph: &Graph, x: &PartialVector, tol: f64) -> Result<GramWitness> {
    screen(check_elliptope_k4free(graph, x, tol))?;
    let order: Vec<usize> =
        series_parallel_elimination(graph).ok_or(Error::NotK4MinorFree)?.into_iter().map(|e| e.node).collect();
    let xs: Vec<f64> = x.values.iter().map(to_f64).collect();
    let w = complete_by_elimination(graph, &xs, &order, tol).map_err(chord_failure)?;
    finish(graph, x, w, tol)
}

/// Completion of `x in E(C_n)` in `R^3`, triangulating by a fan of chords
/// from node 0; `x[i]` sits on edge `i` of [`Graph::cycle`].
pub fn complete_circuit(n: usize, x: &PartialVector, tol: f64) -> Result<GramWitness> {
    screen(check_circuit_elliptope(n, x, tol))?;
    let cycle = Graph::cycle(n)?;
    let order: Vec<usize> = (0..n).rev().collect();
    let xs: Vec<f64> = x.values.iter().map(to_f64).collect();
    let w = complete_by_elimination(&cycle, &xs, &order, tol).map_err(chord_failure)?;
    finish(&cycle, x, w, tol)
}
