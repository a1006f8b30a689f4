//! Generators for the hardness-instance families, each paired with a
//! small-scale verifier that runs the matched decider against an
//! independent oracle.

pub mod corpus;
mod verify;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graph::{hat_graph, suspension, Graph};
use crate::numerics::{extreme_point_e3, format_rational, Rational, RationalRotation, SymmetricMatrix};
use crate::polytope::PartialVector;

pub use verify::{
    subset_sum_signs, verify_many, verify_reduction, Evidence, Verdict, VerifyOptions, VerifyReport, DEFAULT_BUDGET,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ReductionKind {
    PartitionEd1,
    PartitionGd2,
    SaxeGd2,
    ColoringGd3,
    SaxeEdk,
    HatLift,
}

impl ReductionKind {
    pub const ALL: [ReductionKind; 6] = [
        ReductionKind::PartitionEd1,
        ReductionKind::PartitionGd2,
        ReductionKind::SaxeGd2,
        ReductionKind::ColoringGd3,
        ReductionKind::SaxeEdk,
        ReductionKind::HatLift,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ReductionKind::PartitionEd1 => "PARTITION_ED1",
            ReductionKind::PartitionGd2 => "PARTITION_GD2",
            ReductionKind::SaxeGd2 => "SAXE_GD2",
            ReductionKind::ColoringGd3 => "COLORING_GD3",
            ReductionKind::SaxeEdk => "SAXE_EDK",
            ReductionKind::HatLift => "HAT_LIFT",
        }
    }

    /// Name used on the command line, e.g. `partition-gd2`.
    pub fn verb(self) -> &'static str {
        match self {
            ReductionKind::PartitionEd1 => "partition-ed1",
            ReductionKind::PartitionGd2 => "partition-gd2",
            ReductionKind::SaxeGd2 => "saxe-gd2",
            ReductionKind::ColoringGd3 => "coloring",
            ReductionKind::SaxeEdk => "saxe-edk",
            ReductionKind::HatLift => "hat-lift",
        }
    }
}

impl fmt::Display for ReductionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ReductionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ReductionKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s || k.verb() == s)
            .ok_or_else(|| Error::Parse(format!("unknown reduction kind {s:?}")))
    }
}

/// A graph with two distinguished terminal nodes, glued between node pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gadget {
    pub graph: Graph,
    pub terminals: (usize, usize),
}

impl Gadget {
    pub fn new(graph: Graph, s: usize, t: usize) -> Result<Self> {
        if s == t || s >= graph.node_count() || t >= graph.node_count() {
            return Err(Error::InvalidInput("gadget terminals must be two distinct nodes".into()));
        }
        Ok(Self { graph, terminals: (s, t) })
    }
}

/// What a reduction started from.
#[derive(Debug, Clone, PartialEq)]
pub enum Source {
    Integers(Vec<u64>),
    Weighted { graph: Graph, d: Vec<Rational> },
    Coloring { graph: Graph, gadget: Gadget, k: usize },
    Suspended { graph: Graph, k: usize },
    Cosines { graph: Graph, x: PartialVector },
}

/// Edge data handed to the deciders.
#[derive(Debug, Clone, PartialEq)]
pub enum Produced {
    /// Edge lengths for line embeddings.
    Lengths(Vec<Rational>),
    Rotations(Vec<RationalRotation>),
    /// Cosines or squared distances.
    Vector(PartialVector),
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Certificate {
    pub alpha: Option<RationalRotation>,
    /// `A = sum a_i` or `D = sum d_e`.
    pub total: Option<u64>,
    /// Nodes of the original graph inside the produced one.
    pub base_nodes: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReductionInstance {
    pub kind: ReductionKind,
    pub source: Source,
    pub graph: Graph,
    pub data: Produced,
    pub certificate: Certificate,
}

/// `cos a = (16D^2 - 1)/(16D^2 + 1)`, `sin a = 8D/(16D^2 + 1)`.
pub fn alpha_for_total(total: u64) -> Result<RationalRotation> {
    if total == 0 {
        return Err(Error::InvalidInput("total must be at least 1".into()));
    }
    let d = Rational::from_integer(total.into());
    let sq = Rational::from_integer(16.into()) * &d * &d;
    let den = &sq + Rational::one();
    RationalRotation::new((&sq - Rational::one()) / &den, Rational::from_integer(8.into()) * &d / &den)
}

/// `sin a < 1 / (2D)`, decided exactly.
pub fn alpha_bound_holds(total: u64, alpha: &RationalRotation) -> bool {
    *alpha.sin() < Rational::new(1.into(), (2 * u128::from(total)).into())
}

/// Circuit on `max(n, 3)` nodes carrying `a` on edges `0..n`; the padding
/// edges of short inputs carry weight zero.
fn partition_circuit(a: &[u64]) -> Result<Graph> {
    if a.is_empty() {
        return Err(Error::InvalidInput("partition needs at least one integer".into()));
    }
    if a.contains(&0) {
        return Err(Error::InvalidInput("partition integers must be positive".into()));
    }
    Graph::cycle(a.len().max(3))
}

pub fn reduce_partition_to_ed1(a: &[u64]) -> Result<ReductionInstance> {
    let graph = partition_circuit(a)?;
    let mut d: Vec<Rational> = a.iter().map(|&x| Rational::from_integer(x.into())).collect();
    d.resize(graph.edge_count(), Rational::zero());
    let total = a.iter().sum();
    Ok(ReductionInstance {
        kind: ReductionKind::PartitionEd1,
        source: Source::Integers(a.to_vec()),
        graph,
        data: Produced::Lengths(d),
        certificate: Certificate { total: Some(total), ..Default::default() },
    })
}

pub fn reduce_partition_to_gd2(a: &[u64]) -> Result<ReductionInstance> {
    let graph = partition_circuit(a)?;
    let total: u64 = a.iter().sum();
    let alpha = alpha_for_total(total)?;
    let mut rotations: Vec<RationalRotation> = a.iter().map(|&x| alpha.power(x as i64)).collect();
    rotations.resize(graph.edge_count(), RationalRotation::identity());
    Ok(ReductionInstance {
        kind: ReductionKind::PartitionGd2,
        source: Source::Integers(a.to_vec()),
        graph,
        data: Produced::Rotations(rotations),
        certificate: Certificate { alpha: Some(alpha), total: Some(total), ..Default::default() },
    })
}

/// Rotation `a d_e` per edge, with `a` chosen from `D = sum d_e` so that
/// the total turn stays below one radian.
pub fn reduce_saxe_to_gd2(graph: &Graph, d: &[Rational]) -> Result<ReductionInstance> {
    if d.len() != graph.edge_count() {
        return Err(Error::InvalidInput(format!("{} weights for {} edges", d.len(), graph.edge_count())));
    }
    let (one, two) = (Rational::one(), Rational::from_integer(2.into()));
    let mut total = 0u64;
    for (e, w) in d.iter().enumerate() {
        if *w == one {
            total += 1;
        } else if *w == two {
            total += 2;
        } else {
            return Err(Error::BadWeights { edge: e, weight: format_rational(w) });
        }
    }
    let (alpha, rotations) = if total == 0 {
        (None, Vec::new())
    } else {
        let alpha = alpha_for_total(total)?;
        let double = alpha.power(2);
        let rotations = d.iter().map(|w| if *w == one { alpha.clone() } else { double.clone() }).collect();
        (Some(alpha), rotations)
    };
    Ok(ReductionInstance {
        kind: ReductionKind::SaxeGd2,
        source: Source::Weighted { graph: graph.clone(), d: d.to_vec() },
        graph: graph.clone(),
        data: Produced::Rotations(rotations),
        certificate: Certificate { alpha, total: Some(total), ..Default::default() },
    })
}

/// Copy of `gadget` between every pair `i < j` of nodes (terminals become
/// `i` and `j`, inner nodes are appended pair by pair), then `k - 3`
/// suspensions; `x = 0` everywhere.
pub fn build_coloring_instance(graph: &Graph, gadget: &Gadget, k: usize) -> Result<ReductionInstance> {
    if k < 3 {
        return Err(Error::InvalidInput("coloring instances need k >= 3".into()));
    }
    let n = graph.node_count();
    let mut edges: Vec<(usize, usize)> = graph.edges().to_vec();
    let mut seen: BTreeSet<(usize, usize)> = edges.iter().copied().collect();
    let mut next = n;
    let (s, t) = gadget.terminals;
    for i in 0..n {
        for j in i + 1..n {
            let map: Vec<usize> = (0..gadget.graph.node_count())
                .map(|g| {
                    if g == s {
                        i
                    } else if g == t {
                        j
                    } else {
                        next += 1;
                        next - 1
                    }
                })
                .collect();
            for &(u, v) in gadget.graph.edges() {
                let e = (map[u].min(map[v]), map[u].max(map[v]));
                if seen.insert(e) {
                    edges.push(e);
                }
            }
        }
    }
    let mut out = Graph::new(next, edges)?;
    if k > 3 {
        out = suspension(&out, k - 3)?;
    }
    let x = PartialVector::cosines(vec![Rational::zero(); out.edge_count()])?;
    Ok(ReductionInstance {
        kind: ReductionKind::ColoringGd3,
        source: Source::Coloring { graph: graph.clone(), gadget: gadget.clone(), k },
        graph: out,
        data: Produced::Vector(x),
        certificate: Certificate { base_nodes: Some(next), ..Default::default() },
    })
}

/// `k - 2` suspensions of `h`; squared distance 1 on the edges of the last
/// apex and 2 elsewhere.
pub fn build_saxe_edk_instance(h: &Graph, k: usize) -> Result<ReductionInstance> {
    if k < 3 {
        return Err(Error::InvalidInput("Saxe instances need k >= 3".into()));
    }
    let graph = suspension(h, k - 2)?;
    let apex = graph.node_count() - 1;
    let d = graph.edges().iter().map(|&(_, v)| Rational::from_integer(if v == apex { 1 } else { 2 }.into())).collect();
    Ok(ReductionInstance {
        kind: ReductionKind::SaxeEdk,
        source: Source::Suspended { graph: h.clone(), k },
        graph,
        data: Produced::Vector(PartialVector::distances(d)?),
        certificate: Certificate { base_nodes: Some(h.node_count()), ..Default::default() },
    })
}

/// Values on the two hat edges `(i, v_ij)`, `(j, v_ij)` of an edge with
/// cosine `x`.
pub fn hat_values(x: &Rational) -> (Rational, Rational) {
    if x.is_zero() {
        (Rational::new(4.into(), 5.into()), Rational::new(3.into(), 5.into()))
    } else {
        (x.clone(), Rational::from_integer(2.into()) * x * x - Rational::one())
    }
}

/// `(G^, x^)`: `x` on the original edges and [`hat_values`] on each pendant
/// triangle, every triangle block checked to be an extreme point of `E_3`.
pub fn hat_lift(graph: &Graph, x: &PartialVector) -> Result<ReductionInstance> {
    if x.mode != crate::polytope::VectorMode::Cosine {
        return Err(Error::InvalidInput("hat lift needs a cosine-mode vector".into()));
    }
    x.check_len(graph)?;
    let hat = hat_graph(graph);
    let mut values = x.values.clone();
    for (m, xe) in x.values.iter().enumerate() {
        let (xi, xj) = hat_values(xe);
        let block = SymmetricMatrix::from_rows(vec![
            vec![Rational::one(), xe.clone(), xi.clone()],
            vec![xe.clone(), Rational::one(), xj.clone()],
            vec![xi.clone(), xj.clone(), Rational::one()],
        ])?;
        if !extreme_point_e3(&block).unwrap_or(false) {
            return Err(Error::BlockNotExtreme { edge: m });
        }
        values.push(xi);
        values.push(xj);
    }
    Ok(ReductionInstance {
        kind: ReductionKind::HatLift,
        source: Source::Cosines { graph: graph.clone(), x: x.clone() },
        graph: hat.graph,
        data: Produced::Vector(PartialVector::cosines(values)?),
        certificate: Certificate { base_nodes: Some(graph.node_count()), ..Default::default() },
    })
}
