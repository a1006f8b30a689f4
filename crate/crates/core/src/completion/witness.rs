use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{suspension, Graph};
use crate::numerics::{to_f64, Rational};
use crate::polytope::{PartialVector, VectorMode};
use crate::signing::CircleWitness;

/// Node vectors, exact or floating point.
#[derive(Debug, Clone, PartialEq)]
pub enum Coordinates {
    Exact(Vec<Vec<Rational>>),
    Float(Vec<Vec<f64>>),
}

/// Unit vectors `v_i in R^k`, one per node.
#[derive(Debug, Clone, PartialEq)]
pub struct GramWitness {
    k: usize,
    coords: Coordinates,
}

fn check_dims<T>(k: usize, vectors: &[Vec<T>]) -> Result<()> {
    match vectors.iter().find(|v| v.len() != k) {
        Some(v) => Err(Error::DimensionMismatch { left: k, right: v.len() }),
        None => Ok(()),
    }
}

pub(crate) fn dot_exact(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn dot_float(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl GramWitness {
    pub fn exact(k: usize, vectors: Vec<Vec<Rational>>) -> Result<Self> {
        check_dims(k, &vectors)?;
        Ok(Self { k, coords: Coordinates::Exact(vectors) })
    }

    pub fn float(k: usize, vectors: Vec<Vec<f64>>) -> Result<Self> {
        check_dims(k, &vectors)?;
        Ok(Self { k, coords: Coordinates::Float(vectors) })
    }

    /// Planar witness from a circle embedding.
    pub fn from_circle(w: &CircleWitness) -> Self {
        match w {
            CircleWitness::Exact(rs) => Self {
                k: 2,
                coords: Coordinates::Exact(rs.iter().map(|r| vec![r.cos().clone(), r.sin().clone()]).collect()),
            },
            CircleWitness::Float(angles) => {
                Self { k: 2, coords: Coordinates::Float(angles.iter().map(|t| vec![t.cos(), t.sin()]).collect()) }
            }
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        match &self.coords {
            Coordinates::Exact(v) => v.len(),
            Coordinates::Float(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.coords, Coordinates::Exact(_))
    }

    pub fn coordinates(&self) -> &Coordinates {
        &self.coords
    }

    pub fn to_float(&self) -> Vec<Vec<f64>> {
        match &self.coords {
            Coordinates::Exact(v) => v.iter().map(|p| p.iter().map(to_f64).collect()).collect(),
            Coordinates::Float(v) => v.clone(),
        }
    }

    pub fn exact_dot(&self, i: usize, j: usize) -> Option<Rational> {
        match &self.coords {
            Coordinates::Exact(v) => Some(dot_exact(&v[i], &v[j])),
            Coordinates::Float(_) => None,
        }
    }

    pub fn dot(&self, i: usize, j: usize) -> f64 {
        match &self.coords {
            Coordinates::Exact(v) => to_f64(&dot_exact(&v[i], &v[j])),
            Coordinates::Float(v) => dot_float(&v[i], &v[j]),
        }
    }

    /// Largest deviation from unit norms and from `x` on the edges of
    /// `graph`; zero means exact agreement for exact witnesses.
    pub fn max_deviation(&self, graph: &Graph, x: &PartialVector) -> Result<f64> {
        self.check_shape(graph, x)?;
        let n = self.len();
        let dev = |(i, j, target): (usize, usize, &Rational)| -> f64 {
            match &self.coords {
                Coordinates::Exact(v) => {
                    let d = dot_exact(&v[i], &v[j]) - target;
                    if d.is_zero() {
                        0.0
                    } else {
                        to_f64(&d.abs()).max(f64::MIN_POSITIVE)
                    }
                }
                Coordinates::Float(v) => (dot_float(&v[i], &v[j]) - to_f64(target)).abs(),
            }
        };
        let one = Rational::one();
        let norms = (0..n).into_par_iter().map(|i| dev((i, i, &one))).reduce(|| 0.0, f64::max);
        let edges = graph
            .edges()
            .par_iter()
            .zip(x.values.par_iter())
            .map(|(&(u, v), t)| dev((u, v, t)))
            .reduce(|| 0.0, f64::max);
        Ok(norms.max(edges))
    }

    /// Unit norms and `v_u . v_v = x_uv` on every edge: exactly for exact
    /// witnesses, within `tol` otherwise.
    pub fn verify(&self, graph: &Graph, x: &PartialVector, tol: f64) -> Result<()> {
        let dev = self.max_deviation(graph, x)?;
        let ok = if self.is_exact() { dev == 0.0 } else { dev <= tol };
        if ok {
            Ok(())
        } else {
            Err(Error::WitnessFailed(format!("maximum deviation {dev:e}")))
        }
    }

    fn check_shape(&self, graph: &Graph, x: &PartialVector) -> Result<()> {
        if x.mode != VectorMode::Cosine {
            return Err(Error::InvalidInput("witnesses are checked against cosines".into()));
        }
        x.check_len(graph)?;
        if self.len() != graph.node_count() {
            return Err(Error::InvalidInput(format!(
                "witness has {} vectors for {} nodes",
                self.len(),
                graph.node_count()
            )));
        }
        Ok(())
    }
}

/// `d_{0i} = x_ii`, `d_ij = x_ii + x_jj - 2 x_ij` on the suspension, whose
/// apex is node `n`. Edge order follows the suspension: the edges of
/// `graph`, then `(i, n)` for each node `i`.
pub fn covariance_map(graph: &Graph, x: &PartialVector, diag: Option<&[Rational]>) -> Result<(Graph, PartialVector)> {
    if x.mode != VectorMode::Cosine {
        return Err(Error::InvalidInput("covariance map needs a cosine-mode vector".into()));
    }
    x.check_len(graph)?;
    let n = graph.node_count();
    let ones;
    let diag = match diag {
        Some(d) if d.len() != n => {
            return Err(Error::InvalidInput(format!("{} diagonal values for {n} nodes", d.len())));
        }
        Some(d) => d,
        None => {
            ones = vec![Rational::one(); n];
            &ones
        }
    };
    let two = Rational::from_integer(2.into());
    let mut d: Vec<Rational> =
        graph.edges().iter().zip(&x.values).map(|(&(u, v), xv)| &diag[u] + &diag[v] - &two * xv).collect();
    d.extend(diag.iter().cloned());
    Ok((suspension(graph, 1)?, PartialVector::distances(d)?))
}

/// Squared distances on the edges of a suspension.
#[derive(Debug, Clone, PartialEq)]
pub enum EdgeDistances {
    Exact(Vec<Rational>),
    Float(Vec<f64>),
}

/// Points `p_0..p_{n-1}` from a witness plus the origin at index `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Transport {
    pub graph: Graph,
    pub points: Coordinates,
}

impl Transport {
    pub fn squared_distances(&self) -> EdgeDistances {
        match &self.points {
            Coordinates::Exact(p) => EdgeDistances::Exact(
                self.graph
                    .edges()
                    .iter()
                    .map(|&(u, v)| p[u].iter().zip(&p[v]).map(|(a, b)| (a - b) * (a - b)).sum())
                    .collect(),
            ),
            Coordinates::Float(p) => EdgeDistances::Float(
                self.graph
                    .edges()
                    .iter()
                    .map(|&(u, v)| p[u].iter().zip(&p[v]).map(|(a, b)| (a - b) * (a - b)).sum())
                    .collect(),
            ),
        }
    }
}

/// Moves a Gram witness on `graph` to a Euclidean representation of the
/// suspension with the apex at the origin.
pub fn witness_transport(graph: &Graph, w: &GramWitness) -> Result<Transport> {
    if w.len() != graph.node_count() {
        return Err(Error::InvalidInput(format!("witness has {} vectors for {} nodes", w.len(), graph.node_count())));
    }
    let points = match &w.coords {
        Coordinates::Exact(v) => {
            let mut p = v.clone();
            p.push(vec![Rational::zero(); w.k]);
            Coordinates::Exact(p)
        }
        Coordinates::Float(v) => {
            let mut p = v.clone();
            p.push(vec![0.0; w.k]);
            Coordinates::Float(p)
        }
    };
    Ok(Transport { graph: suspension(graph, 1)?, points })
}
