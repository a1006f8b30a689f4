//! Seeded random corpora for verification runs. Every generator draws from
//! a ChaCha8 stream, so a seed fixes the corpus.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::Graph;
use crate::numerics::{rational_from_f64, Rational, RationalRotation};
use crate::polytope::PartialVector;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Every non-decreasing sequence of positive integers with `1..=max_len`
/// terms and sum at most `max_sum`.
pub fn multisets(max_len: usize, max_sum: u64) -> Vec<Vec<u64>> {
    fn extend(prefix: &mut Vec<u64>, min: u64, left: u64, max_len: usize, out: &mut Vec<Vec<u64>>) {
        if !prefix.is_empty() {
            out.push(prefix.clone());
        }
        if prefix.len() == max_len {
            return;
        }
        for next in min..=left {
            prefix.push(next);
            extend(prefix, next, left - next, max_len, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::new(), 1, max_sum, max_len, &mut out);
    out
}

/// Erdos-Renyi graph `G(n, p)`.
pub fn random_graph(rng: &mut impl Rng, n: usize, p: f64) -> Graph {
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect::<Vec<_>>()
        .into_iter()
        .filter(|_| rng.gen_bool(p))
        .collect();
    Graph::from_canonical(n, edges).expect("pairs are canonical")
}

/// Random spanning tree plus every other pair with probability `p`.
pub fn random_connected_graph(rng: &mut impl Rng, n: usize, p: f64) -> Graph {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut edges = std::collections::BTreeSet::new();
    for i in 1..n {
        let j = rng.gen_range(0..i);
        let (u, v) = (order[i], order[j]);
        edges.insert((u.min(v), u.max(v)));
    }
    for u in 0..n {
        for v in u + 1..n {
            if !edges.contains(&(u, v)) && rng.gen_bool(p) {
                edges.insert((u, v));
            }
        }
    }
    Graph::from_canonical(n, edges).expect("pairs are canonical")
}

/// Random subgraph of a random 2-tree on `n` nodes, relabelled at random;
/// these are exactly the graphs without a K4 minor.
pub fn random_k4free_graph(rng: &mut impl Rng, n: usize, keep: f64) -> Graph {
    let mut edges: Vec<(usize, usize)> = Vec::new();
    if n >= 2 {
        edges.push((0, 1));
    }
    for v in 2..n {
        let (a, b) = edges[rng.gen_range(0..edges.len())];
        edges.push((a, v));
        edges.push((b, v));
    }
    let mut label: Vec<usize> = (0..n).collect();
    label.shuffle(rng);
    let kept: Vec<(usize, usize)> =
        edges.into_iter().filter(|_| rng.gen_bool(keep)).map(|(u, v)| (label[u], label[v])).collect();
    Graph::new(n, kept).expect("2-tree edges are distinct")
}

/// Weights `d in {1, 2}^E`.
pub fn random_weights(rng: &mut impl Rng, graph: &Graph) -> Vec<Rational> {
    (0..graph.edge_count()).map(|_| Rational::from_integer(rng.gen_range(1..=2).into())).collect()
}

/// Rotation with rational coordinates from the slope `t = p/q`:
/// `((q^2 - p^2)/(q^2 + p^2), 2pq/(q^2 + p^2))`.
pub fn pythagorean_rotation(rng: &mut impl Rng, max_q: i64) -> RationalRotation {
    let q = rng.gen_range(1..=max_q);
    let p = rng.gen_range(-q..=q);
    let den = Rational::from_integer((q * q + p * p).into());
    RationalRotation::new(
        Rational::from_integer((q * q - p * p).into()) / &den,
        Rational::from_integer((2 * p * q).into()) / &den,
    )
    .expect("Pythagorean parametrisation lies on the circle")
}

/// Cosines of exact rotations on the edges. With `planted`, the rotations
/// are differences of node rotations, so the vector lies in `E_2(G)`.
pub fn random_rotation_cosines(rng: &mut impl Rng, graph: &Graph, planted: bool) -> PartialVector {
    let nodes: Vec<RationalRotation> = (0..graph.node_count()).map(|_| pythagorean_rotation(rng, 4)).collect();
    let values = graph
        .edges()
        .iter()
        .map(|&(u, v)| if planted { nodes[u].dot(&nodes[v]) } else { pythagorean_rotation(rng, 4).cos().clone() })
        .collect();
    PartialVector::cosines(values).expect("cosines lie in [-1, 1]")
}

/// Gram values of random unit vectors in `R^dim` on the edges: points of
/// `E(G)`, stored as the exact rationals of their doubles.
pub fn random_gram_cosines(rng: &mut impl Rng, graph: &Graph, dim: usize) -> PartialVector {
    let vectors: Vec<Vec<f64>> = (0..graph.node_count())
        .map(|_| loop {
            let v: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let norm = v.iter().map(|t| t * t).sum::<f64>().sqrt();
            if norm > 1e-3 {
                break v.iter().map(|t| t / norm).collect();
            }
        })
        .collect();
    let values = graph
        .edges()
        .iter()
        .map(|&(u, v)| {
            let dot: f64 = vectors[u].iter().zip(&vectors[v]).map(|(a, b)| a * b).sum();
            rational_from_f64(dot.clamp(-1.0, 1.0)).expect("finite")
        })
        .collect();
    PartialVector::cosines(values).expect("cosines lie in [-1, 1]")
}

/// Independent uniform cosines in `[-1, 1]`.
pub fn random_uniform_cosines(rng: &mut impl Rng, graph: &Graph) -> PartialVector {
    let values =
        (0..graph.edge_count()).map(|_| rational_from_f64(rng.gen_range(-1.0..=1.0)).expect("finite")).collect();
    PartialVector::cosines(values).expect("cosines lie in [-1, 1]")
}
