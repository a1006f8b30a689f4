use num_traits::Zero;

use super::witness::{dot_exact, dot_float, Coordinates, GramWitness};
use crate::error::{Error, Result};
use crate::graph::{clique_sum, CliqueSum, Graph};
use crate::numerics::Rational;

/// Reflects every vector in the hyperplane orthogonal to `w`.
fn reflect_all(vectors: &mut [Vec<Rational>], w: &[Rational]) {
    let ww = dot_exact(w, w);
    for y in vectors.iter_mut() {
        let t = dot_exact(w, y) * Rational::from_integer(2.into()) / &ww;
        if t.is_zero() {
            continue;
        }
        for (yi, wi) in y.iter_mut().zip(w) {
            *yi -= &t * wi;
        }
    }
}

/// Rational orthogonal map carrying `vectors[b]` onto `target` for each
/// `(b, target)`: a chain of Householder reflections. The Gram matrices of
/// sources and targets must agree exactly.
pub(crate) fn align_exact(vectors: &mut [Vec<Rational>], pairs: &[(usize, Vec<Rational>)]) {
    for (b, target) in pairs {
        let w: Vec<Rational> = vectors[*b].iter().zip(target).map(|(x, y)| x - y).collect();
        if w.iter().all(Zero::is_zero) {
            continue;
        }
        reflect_all(vectors, &w);
    }
}

/// Orthonormal basis of `R^k` whose leading vectors span `vectors`, taken
/// in order; `keep` selects the vectors used (the rest are treated as
/// dependent). Returns the basis and, when `keep` is `None`, the selection.
fn frame(k: usize, vectors: &[&[f64]], keep: Option<&[bool]>) -> (Vec<Vec<f64>>, Vec<bool>) {
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(k);
    let mut used = Vec::with_capacity(vectors.len());
    let push = |basis: &mut Vec<Vec<f64>>, v: &[f64], force: bool| -> bool {
        let mut r = v.to_vec();
        for _ in 0..2 {
            for b in basis.iter() {
                let t = dot_float(&r, b);
                r.iter_mut().zip(b).for_each(|(x, y)| *x -= t * y);
            }
        }
        let norm = dot_float(&r, &r).sqrt();
        if basis.len() == k || (!force && norm < INDEPENDENT) || norm == 0.0 {
            return false;
        }
        basis.push(r.iter().map(|x| x / norm).collect());
        true
    };
    for (i, v) in vectors.iter().enumerate() {
        let take = match keep {
            Some(keep) => keep[i] && push(&mut basis, v, true),
            None => push(&mut basis, v, false),
        };
        used.push(take);
    }
    for axis in 0..k {
        let mut e = vec![0.0; k];
        e[axis] = 1.0;
        push(&mut basis, &e, false);
    }
    (basis, used)
}

/// Rejection threshold for a new direction in [`frame`].
const INDEPENDENT: f64 = 1e-12;

/// Orthogonal `Q` with `Q a_i = b_i` when the Gram matrices of the `a_i` and
/// the `b_i` agree: the map between matching orthonormal frames.
pub(crate) fn procrustes(k: usize, sources: &[&[f64]], targets: &[&[f64]]) -> Vec<Vec<f64>> {
    let (fs, used) = frame(k, sources, None);
    let (ft, _) = frame(k, targets, Some(&used));
    let mut q = vec![vec![0.0; k]; k];
    for (s, t) in fs.iter().zip(&ft) {
        for r in 0..k {
            for c in 0..k {
                q[r][c] += t[r] * s[c];
            }
        }
    }
    q
}

pub(crate) fn apply(q: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    q.iter().map(|row| dot_float(row, v)).collect()
}

/// Merges witnesses on `g1` and `g2` into one on their clique sum, moving the
/// second by an orthogonal map so its shared vectors land on the first's.
/// `identification` pairs `(g2 node, g1 node)` as in [`clique_sum`].
pub fn glue_clique_sum(
    g1: &Graph,
    w1: &GramWitness,
    g2: &Graph,
    w2: &GramWitness,
    identification: &[(usize, usize)],
    tol: f64,
) -> Result<(CliqueSum, GramWitness)> {
    if w1.k() != w2.k() {
        return Err(Error::DimensionMismatch { left: w1.k(), right: w2.k() });
    }
    for (w, g) in [(w1, g1), (w2, g2)] {
        if w.len() != g.node_count() {
            return Err(Error::InvalidInput(format!("witness has {} vectors for {} nodes", w.len(), g.node_count())));
        }
    }
    let sum = clique_sum(g1, g2, identification)?;
    let k = w1.k();
    let exact = w1.is_exact() && w2.is_exact();
    for (p, &(b1, a1)) in identification.iter().enumerate() {
        for &(b2, a2) in &identification[p..] {
            let agree = if exact {
                w1.exact_dot(a1, a2) == w2.exact_dot(b1, b2)
            } else {
                (w1.dot(a1, a2) - w2.dot(b1, b2)).abs() <= tol
            };
            if !agree {
                return Err(Error::SharedMismatch(format!(
                    "first {} vs second {} at ({a1}, {a2})",
                    w1.dot(a1, a2),
                    w2.dot(b1, b2)
                )));
            }
        }
    }
    let n = sum.graph.node_count();
    let merged = match (w1.coordinates(), w2.coordinates()) {
        (Coordinates::Exact(v1), Coordinates::Exact(v2)) => {
            let mut moved = v2.clone();
            let pairs: Vec<_> = identification.iter().map(|&(b, a)| (b, v1[a].clone())).collect();
            align_exact(&mut moved, &pairs);
            let mut out = v1.clone();
            out.resize(n, Vec::new());
            for (b, &node) in sum.g2_nodes.iter().enumerate() {
                if node >= g1.node_count() {
                    out[node] = std::mem::take(&mut moved[b]);
                }
            }
            GramWitness::exact(k, out)?
        }
        _ => {
            let (v1, v2) = (w1.to_float(), w2.to_float());
            let sources: Vec<&[f64]> = identification.iter().map(|&(b, _)| v2[b].as_slice()).collect();
            let targets: Vec<&[f64]> = identification.iter().map(|&(_, a)| v1[a].as_slice()).collect();
            let q = procrustes(k, &sources, &targets);
            for (s, t) in sources.iter().zip(&targets) {
                let r = apply(&q, s);
                let miss = r.iter().zip(t.iter()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
                if miss > tol.sqrt().max(tol) {
                    return Err(Error::SharedMismatch(format!("alignment residual {miss:e}")));
                }
            }
            let mut out = v1.clone();
            out.resize(n, Vec::new());
            for (b, &node) in sum.g2_nodes.iter().enumerate() {
                if node >= g1.node_count() {
                    out[node] = apply(&q, &v2[b]);
                }
            }
            GramWitness::float(k, out)?
        }
    };
    Ok((sum, merged))
}
