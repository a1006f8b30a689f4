use num_traits::Zero;
use rayon::prelude::*;

use super::{Produced, ReductionInstance, ReductionKind, Source};
use crate::completion::{chromatic_number, coloring_witness, covariance_map, witness_transport, EdgeDistances};
use crate::error::{Error, Result};
use crate::graph::{suspension, Graph};
use crate::numerics::Rational;
use crate::polytope::{PartialVector, DEFAULT_TOL};
use crate::signing::{check_small_total, decide_ed1, decide_gd2, EdgeAngles, Outcome, SearchOptions, SignVector};

/// Oracle states explored per verification.
pub const DEFAULT_BUDGET: u64 = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub budget: u64,
    pub tol: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { budget: DEFAULT_BUDGET, tol: DEFAULT_TOL }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Evidence {
    Signs(SignVector),
    /// Exact chromatic number with an optimal colouring.
    Coloring {
        chi: usize,
        colors: Vec<usize>,
    },
    None,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub method: &'static str,
    pub accept: bool,
    pub evidence: Evidence,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub kind: ReductionKind,
    pub decider: Verdict,
    pub oracle: Verdict,
    /// Side condition the equivalence rests on, where there is one.
    pub premise: Option<bool>,
    pub agree: bool,
}

/// First `eps` with `eps_0 = +1`, in lexicographic order with `+1` before
/// `-1`, such that `sum eps_i a_i = 0`.
pub fn subset_sum_signs(a: &[u64], budget: u64) -> Result<Option<Vec<i8>>> {
    if a.is_empty() {
        return Ok(Some(Vec::new()));
    }
    let free = a.len() - 1;
    if free >= 63 || (1u64 << free) > budget {
        return Err(Error::ResourceLimit { what: "subset-sum enumeration", limit: budget });
    }
    for mask in 0..1u64 << free {
        let signs: Vec<i8> =
            std::iter::once(1).chain((0..free).map(|i| if mask >> (free - 1 - i) & 1 == 1 { -1 } else { 1 })).collect();
        let sum: i128 = a.iter().zip(&signs).map(|(&x, &s)| i128::from(s) * i128::from(x)).sum();
        if sum == 0 {
            return Ok(Some(signs));
        }
    }
    Ok(None)
}

fn signing<W>(method: &'static str, outcome: Outcome<W>) -> Verdict {
    match outcome {
        Outcome::Accept { signs, .. } => Verdict { method, accept: true, evidence: Evidence::Signs(signs) },
        Outcome::Reject => Verdict { method, accept: false, evidence: Evidence::None },
    }
}

fn partition_oracle(a: &[u64], budget: u64) -> Result<Verdict> {
    let found = subset_sum_signs(a, budget)?;
    Ok(Verdict {
        method: "subset-sum enumeration",
        accept: found.is_some(),
        evidence: found.map_or(Evidence::None, |s| Evidence::Signs(SignVector(s))),
    })
}

fn chi_verdict(method: &'static str, graph: &Graph, bound: usize, budget: u64) -> Result<Verdict> {
    let (chi, colors) = chromatic_number(graph, budget)?;
    Ok(Verdict { method, accept: chi <= bound, evidence: Evidence::Coloring { chi, colors } })
}

fn mismatch(what: &str) -> Error {
    Error::InvalidInput(format!("instance data does not match its kind: {what}"))
}

/// Runs the decider matched to the instance kind and an independent oracle.
pub fn verify_reduction(inst: &ReductionInstance, options: &VerifyOptions) -> Result<VerifyReport> {
    let search = SearchOptions { tol: options.tol, max_branch: options.budget };
    let (decider, oracle, premise) = match (inst.kind, &inst.source, &inst.data) {
        (ReductionKind::PartitionEd1, Source::Integers(a), Produced::Lengths(d)) => {
            let decider = signing("decide_ed1", decide_ed1(&inst.graph, &EdgeAngles::Rational(d.clone()), &search)?);
            (decider, partition_oracle(a, options.budget)?, None)
        }
        (ReductionKind::PartitionGd2, Source::Integers(a), Produced::Rotations(r)) => {
            let decider = signing("decide_gd2", decide_gd2(&inst.graph, &EdgeAngles::Rotation(r.clone()), &search)?);
            let premise = match (&inst.certificate.alpha, inst.certificate.total) {
                (Some(alpha), Some(total)) => super::alpha_bound_holds(total, alpha),
                _ => false,
            };
            (decider, partition_oracle(a, options.budget)?, Some(premise))
        }
        (ReductionKind::SaxeGd2, Source::Weighted { graph, d }, Produced::Rotations(r)) => {
            let rotations = EdgeAngles::Rotation(r.clone());
            let decider = signing("decide_gd2", decide_gd2(&inst.graph, &rotations, &search)?);
            let oracle = signing("decide_ed1", decide_ed1(graph, &EdgeAngles::Rational(d.clone()), &search)?);
            (decider, oracle, Some(check_small_total(&inst.graph, &rotations)?))
        }
        (ReductionKind::ColoringGd3, Source::Coloring { graph, k, .. }, Produced::Vector(x)) => {
            let decider = chi_verdict("chromatic number of the produced graph", &inst.graph, *k, options.budget)?;
            let oracle = chi_verdict("chromatic number of the source graph", graph, 3, options.budget)?;
            let premise = coloring_witness(&inst.graph, options.budget)?.verify(&inst.graph, x, 0.0).is_ok();
            (decider, oracle, Some(premise))
        }
        (ReductionKind::SaxeEdk, Source::Suspended { graph, k }, Produced::Vector(d)) => {
            let base = if *k > 3 { suspension(graph, k - 3)? } else { graph.clone() };
            let zero = PartialVector::cosines(vec![Rational::zero(); base.edge_count()])?;
            let (image_graph, image) = covariance_map(&base, &zero, None)?;
            let decider = Verdict {
                method: "covariance image of x = 0",
                accept: image_graph == inst.graph && image.values == d.values,
                evidence: Evidence::None,
            };
            let w = coloring_witness(&base, options.budget)?;
            let transported = witness_transport(&base, &w)?.squared_distances();
            let oracle = Verdict {
                method: "transported colouring witness",
                accept: transported == EdgeDistances::Exact(d.values.clone()),
                evidence: Evidence::None,
            };
            (decider, oracle, None)
        }
        (ReductionKind::HatLift, Source::Cosines { graph, x }, Produced::Vector(xhat)) => {
            let decider = signing(
                "decide_gd2 on the hat graph",
                decide_gd2(&inst.graph, &EdgeAngles::from_cosines(xhat), &search)?,
            );
            let oracle = signing("decide_gd2 on the source", decide_gd2(graph, &EdgeAngles::from_cosines(x), &search)?);
            (decider, oracle, Some(xhat.values[..x.values.len()] == x.values[..]))
        }
        (kind, _, _) => return Err(mismatch(kind.as_str())),
    };
    let structural = inst.kind == ReductionKind::SaxeEdk;
    let agree = decider.accept == oracle.accept && premise != Some(false) && (!structural || decider.accept);
    Ok(VerifyReport { kind: inst.kind, decider, oracle, premise, agree })
}

/// [`verify_reduction`] over many instances in parallel; results keep the
/// input order.
pub fn verify_many(instances: &[ReductionInstance], options: &VerifyOptions) -> Vec<Result<VerifyReport>> {
    instances.par_iter().map(|inst| verify_reduction(inst, options)).collect()
}
