use num_traits::{One, Zero};
use proptest::prelude::*;

use super::*;
use crate::error::Error;
use crate::graph::{is_k4_minor_free, Graph};
use crate::numerics::{Rational, RationalRotation};
use crate::polytope::{check_circuit_elliptope, check_elliptope_k4free, MetOutcome, PartialVector, DEFAULT_TOL};
use crate::signing::{decide_gd2, CircleWitness, EdgeAngles, Outcome, SearchOptions};

fn q(p: i64, d: i64) -> Rational {
    Rational::new(p.into(), d.into())
}

fn exact(k: usize, rows: &[&[(i64, i64)]]) -> GramWitness {
    GramWitness::exact(k, rows.iter().map(|r| r.iter().map(|&(p, d)| q(p, d)).collect()).collect()).unwrap()
}

fn cosines(v: &[Rational]) -> PartialVector {
    PartialVector::cosines(v.to_vec()).unwrap()
}

fn floats(v: &[f64]) -> PartialVector {
    PartialVector::cosines_from_f64(v).unwrap()
}

#[test]
fn glue_single_edges_into_path() {
    let k2 = Graph::complete(2);
    let w = exact(2, &[&[(1, 1), (0, 1)], &[(3, 5), (4, 5)]]);
    let (sum, glued) = glue_clique_sum(&k2, &w, &k2, &w, &[(0, 1)], DEFAULT_TOL).unwrap();
    assert_eq!(sum.graph, Graph::path(3));
    assert_eq!(glued.k(), 2);
    glued.verify(&sum.graph, &cosines(&[q(3, 5), q(3, 5)]), 0.0).unwrap();
    assert!(glued.is_exact());
}

#[test]
fn glue_hat_blocks_along_an_edge() {
    let k3 = Graph::complete(3);
    // Nodes i, j, v with x_ij = 3/5, x_iv = 3/5, x_jv = -7/25.
    let first = exact(2, &[&[(1, 1), (0, 1)], &[(3, 5), (4, 5)], &[(3, 5), (-4, 5)]]);
    // The same block turned by a quarter.
    let second = exact(2, &[&[(0, 1), (1, 1)], &[(-4, 5), (3, 5)], &[(4, 5), (3, 5)]]);
    let (sum, glued) = glue_clique_sum(&k3, &first, &k3, &second, &[(0, 0), (1, 1)], DEFAULT_TOL).unwrap();
    assert_eq!(sum.graph.node_count(), 4);
    assert_eq!(glued.k(), 2);
    let x: Vec<Rational> = sum
        .graph
        .edges()
        .iter()
        .map(|&e| match e {
            (0, 1) => q(3, 5),
            (0, _) => q(3, 5),
            _ => q(-7, 25),
        })
        .collect();
    glued.verify(&sum.graph, &cosines(&x), 0.0).unwrap();
    // Both apexes are the reflection of j through i, so they coincide.
    assert_eq!(glued.exact_dot(2, 3), Some(Rational::one()));
}

#[test]
fn glue_disjoint_and_errors() {
    let k2 = Graph::complete(2);
    let w = exact(2, &[&[(1, 1), (0, 1)], &[(0, 1), (1, 1)]]);
    let (sum, glued) = glue_clique_sum(&k2, &w, &k2, &w, &[], DEFAULT_TOL).unwrap();
    assert_eq!((sum.graph.node_count(), glued.k()), (4, 2));
    let w3 = exact(3, &[&[(1, 1), (0, 1), (0, 1)], &[(0, 1), (1, 1), (0, 1)]]);
    assert_eq!(
        glue_clique_sum(&k2, &w, &k2, &w3, &[], DEFAULT_TOL).unwrap_err(),
        Error::DimensionMismatch { left: 2, right: 3 }
    );
    let other = exact(2, &[&[(1, 1), (0, 1)], &[(3, 5), (4, 5)]]);
    assert!(matches!(
        glue_clique_sum(&k2, &w, &k2, &other, &[(0, 0), (1, 1)], DEFAULT_TOL),
        Err(Error::SharedMismatch(_))
    ));
    let fw = GramWitness::float(2, vec![vec![1.0, 0.0], vec![0.6, 0.8]]).unwrap();
    let (sum, glued) = glue_clique_sum(&k2, &other, &k2, &fw, &[(1, 0), (0, 1)], DEFAULT_TOL).unwrap();
    assert_eq!(sum.graph, k2);
    assert!(!glued.is_exact());
}

#[test]
fn circuit_examples() {
    let c4 = Graph::cycle(4).unwrap();
    let s = 3f64.sqrt() / 2.0;
    let cases = [
        floats(&[0.0, 0.0, 0.0, 1.0]),
        floats(&[0.0, s, s, s]),
        floats(&[0.0, 0.0, 0.0, 0.0]),
        floats(&[0.0, 0.0, 0.0, 0.5]),
    ];
    for x in &cases {
        let w = complete_circuit(4, x, DEFAULT_TOL).unwrap();
        assert!(w.k() <= 3);
        w.verify(&c4, x, DEFAULT_TOL).unwrap();
    }
    let x = cosines(&[q(1, 2), q(-1, 3), q(1, 7)]);
    complete_circuit(3, &x, DEFAULT_TOL).unwrap().verify(&Graph::cycle(3).unwrap(), &x, DEFAULT_TOL).unwrap();
    let bad = cosines(&[-Rational::one(), -Rational::one(), -Rational::one()]);
    assert!(matches!(complete_circuit(3, &bad, DEFAULT_TOL), Err(Error::NotInElliptope(_))));
}

#[test]
fn coloring_examples() {
    let w = coloring_witness(&Graph::complete(2), DEFAULT_MAX_COLOR_NODES).unwrap();
    assert_eq!(w, exact(2, &[&[(1, 1), (0, 1)], &[(0, 1), (1, 1)]]));
    let c5 = Graph::cycle(5).unwrap();
    let w = coloring_witness(&c5, DEFAULT_MAX_COLOR_NODES).unwrap();
    assert_eq!(w.k(), 3);
    w.verify(&c5, &cosines(&vec![Rational::zero(); 5]), 0.0).unwrap();
    let zero = EdgeAngles::Rotation(vec![RationalRotation::from_cosine(&Rational::zero()).unwrap(); 5]);
    assert_eq!(decide_gd2(&c5, &zero, &SearchOptions::default()).unwrap(), Outcome::Reject);
    let cube =
        Graph::new(8, (0..8).flat_map(|v| (0..3).map(move |b| (v, v ^ (1 << b)))).filter(|&(u, v)| u < v)).unwrap();
    assert_eq!(coloring_witness(&cube, DEFAULT_MAX_COLOR_NODES).unwrap().k(), 2);
    assert_eq!(chromatic_number(&Graph::complete(6), DEFAULT_MAX_COLOR_NODES).unwrap().0, 6);
    assert_eq!(chromatic_number(&Graph::empty(3), DEFAULT_MAX_COLOR_NODES).unwrap().0, 1);
    assert_eq!(chromatic_number(&Graph::empty(0), DEFAULT_MAX_COLOR_NODES).unwrap().0, 0);
    let petersen =
        Graph::new(10, (0..5).flat_map(|i| [(i, (i + 1) % 5), (i, i + 5), (i + 5, (i + 2) % 5 + 5)])).unwrap();
    assert_eq!(chromatic_number(&petersen, DEFAULT_MAX_COLOR_NODES).unwrap().0, 3);
    assert!(matches!(chromatic_number(&Graph::complete(12), 5), Err(Error::ResourceLimit { .. })));
}

#[test]
fn covariance_examples() {
    let k2 = Graph::complete(2);
    let (g, d) = covariance_map(&k2, &cosines(&[Rational::zero()]), None).unwrap();
    assert_eq!(g, Graph::complete(3));
    assert_eq!(d.values, vec![q(2, 1), q(1, 1), q(1, 1)]);
    let (_, d) = covariance_map(&k2, &cosines(&[Rational::one()]), None).unwrap();
    assert_eq!(d.values[0], Rational::zero());
    let (_, d) = covariance_map(&k2, &cosines(&[-Rational::one()]), None).unwrap();
    assert_eq!(d.values[0], q(4, 1));
    let (_, d) = covariance_map(&k2, &cosines(&[q(1, 2)]), Some(&[q(2, 1), q(3, 1)])).unwrap();
    assert_eq!(d.values, vec![q(4, 1), q(2, 1), q(3, 1)]);
}

#[test]
fn transport_examples() {
    let k2 = Graph::complete(2);
    let w = coloring_witness(&k2, DEFAULT_MAX_COLOR_NODES).unwrap();
    let t = witness_transport(&k2, &w).unwrap();
    assert_eq!(t.squared_distances(), EdgeDistances::Exact(vec![q(2, 1), q(1, 1), q(1, 1)]));
    let (_, d) = covariance_map(&k2, &cosines(&[Rational::zero()]), None).unwrap();
    assert_eq!(t.squared_distances(), EdgeDistances::Exact(d.values));
}

fn unit_vectors(dim: usize, n: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    proptest::collection::vec(proptest::collection::vec(-1.0f64..1.0, dim), n).prop_map(|vs| {
        vs.into_iter()
            .map(|v| {
                let norm = v.iter().map(|t| t * t).sum::<f64>().sqrt();
                if norm < 1e-3 {
                    let mut e = vec![0.0; v.len()];
                    e[0] = 1.0;
                    e
                } else {
                    v.iter().map(|t| t / norm).collect()
                }
            })
            .collect()
    })
}

fn gram_on(graph: &Graph, vs: &[Vec<f64>]) -> PartialVector {
    let x: Vec<f64> = graph
        .edges()
        .iter()
        .map(|&(u, v)| vs[u].iter().zip(&vs[v]).map(|(a, b)| a * b).sum::<f64>().clamp(-1.0, 1.0))
        .collect();
    floats(&x)
}

/// Random subgraph of a random 2-tree: every graph of treewidth at most two.
fn k4free_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (2usize..=max_n)
        .prop_flat_map(|n| {
            (
                Just(n),
                proptest::collection::vec(any::<u32>(), n),
                proptest::collection::vec(prop::bool::weighted(0.8), 2 * n),
            )
        })
        .prop_map(|(n, picks, keep)| {
            let mut edges = vec![(0usize, 1usize)];
            for v in 2..n {
                let (a, b) = edges[picks[v] as usize % edges.len()];
                edges.push((a, v));
                edges.push((b, v));
            }
            Graph::new(n, edges.into_iter().zip(keep).filter(|(_, k)| *k).map(|(e, _)| e)).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn circuits_from_vectors_complete(n in 3usize..=12, dim in 2usize..=5, seed in unit_vectors(5, 12)) {
        let vs: Vec<Vec<f64>> = seed[..n].iter().map(|v| v[..dim].to_vec()).collect();
        let cycle = Graph::cycle(n).unwrap();
        let x = gram_on(&cycle, &vs);
        match complete_circuit(n, &x, DEFAULT_TOL) {
            Ok(w) => {
                prop_assert!(w.k() <= 3);
                prop_assert!(w.verify(&cycle, &x, DEFAULT_TOL).is_ok());
            }
            Err(e) => prop_assert!(matches!(e, Error::ToleranceAmbiguous(_)), "{e}"),
        }
    }

    #[test]
    fn interior_circuit_points_complete(x in proptest::collection::vec(-1.0f64..1.0, 3..=12)) {
        let n = x.len();
        let pv = floats(&x);
        let member = check_circuit_elliptope(n, &pv, DEFAULT_TOL);
        let margin = matches!(check_circuit_elliptope(n, &pv, -1e-6), Ok(MetOutcome::Member));
        match member {
            Ok(MetOutcome::Member) => {
                let result = complete_circuit(n, &pv, DEFAULT_TOL);
                if margin {
                    prop_assert!(result.is_ok(), "{:?}", result.err());
                }
                if let Ok(w) = result {
                    prop_assert!(w.verify(&Graph::cycle(n).unwrap(), &pv, DEFAULT_TOL).is_ok());
                }
            }
            Ok(MetOutcome::NonMember(_)) => {
                let is_not_member = matches!(complete_circuit(n, &pv, DEFAULT_TOL), Err(Error::NotInElliptope(_)));
                prop_assert!(is_not_member);
            }
            Err(_) => {}
        }
    }

    #[test]
    fn k4free_round_trip(g in k4free_graph(8), vs in unit_vectors(4, 8), raw in proptest::collection::vec(-1.0f64..1.0, 24)) {
        prop_assert!(is_k4_minor_free(&g));
        let from_vectors = gram_on(&g, &vs[..g.node_count()]);
        let uniform = floats(&raw[..g.edge_count()]);
        for x in [from_vectors, uniform] {
            match check_elliptope_k4free(&g, &x, DEFAULT_TOL) {
                Ok(MetOutcome::Member) => match complete_k4free(&g, &x, DEFAULT_TOL) {
                    Ok(w) => prop_assert!(w.verify(&g, &x, DEFAULT_TOL).is_ok()),
                    Err(e) => prop_assert!(matches!(e, Error::ToleranceAmbiguous(_)), "{e}"),
                },
                Ok(MetOutcome::NonMember(v)) => {
                    prop_assert!(v.amount > DEFAULT_TOL);
                    let rejected = matches!(complete_k4free(&g, &x, DEFAULT_TOL), Err(Error::NotInElliptope(_)));
                    prop_assert!(rejected);
                }
                Err(e) => prop_assert!(matches!(e, Error::ToleranceAmbiguous(_))),
            }
        }
    }

    #[test]
    fn chromatic_number_matches_independent_set_count(n in 1usize..=9, mask in any::<u64>()) {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        let edges: Vec<_> = pairs.iter().enumerate().filter(|(i, _)| mask >> (i % 64) & 1 == 1).map(|(_, &p)| p).collect();
        let g = Graph::new(n, edges).unwrap();
        let (k, colours) = chromatic_number(&g, DEFAULT_MAX_COLOR_NODES).unwrap();
        prop_assert!(g.edges().iter().all(|&(u, v)| colours[u] != colours[v]));
        prop_assert!(colours.iter().all(|&c| c < k));
        prop_assert_eq!(k, chromatic_by_inclusion_exclusion(&g));
    }

    #[test]
    fn glue_keeps_dimension(vs in unit_vectors(3, 5)) {
        // Two triangles from one configuration, the second rotated away.
        let k3 = Graph::complete(3);
        let first = GramWitness::float(3, vs[..3].to_vec()).unwrap();
        let turned: Vec<Vec<f64>> = [0, 1, 3].iter().map(|&i| vec![vs[i][1], -vs[i][0], vs[i][2]]).collect();
        let second = GramWitness::float(3, turned).unwrap();
        let (sum, glued) = glue_clique_sum(&k3, &first, &k3, &second, &[(0, 0), (1, 1)], DEFAULT_TOL).unwrap();
        prop_assert_eq!(glued.k(), 3);
        let x: Vec<f64> = sum.graph.edges().iter().map(|&(u, v)| {
            let src = |a: usize| if a < 3 { a } else { 3 };
            vs[src(u)].iter().zip(&vs[src(v)]).map(|(a, b)| a * b).sum::<f64>().clamp(-1.0, 1.0)
        }).collect();
        prop_assert!(glued.max_deviation(&sum.graph, &floats(&x)).unwrap() < 1e-9);
    }

    #[test]
    fn transported_witnesses_match_covariance(turns in proptest::collection::vec(-6i64..6, 2..=7), mask in any::<u32>()) {
        let n = turns.len();
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        let g = Graph::new(n, pairs.iter().enumerate().filter(|(i, _)| mask >> (i % 32) & 1 == 1).map(|(_, &p)| p)).unwrap();
        let r = RationalRotation::new(q(5, 13), q(12, 13)).unwrap();
        let angles: Vec<RationalRotation> = g.edges().iter().map(|&(u, v)| r.power(turns[v] - turns[u])).collect();
        let Outcome::Accept { witness, .. } = decide_gd2(&g, &EdgeAngles::Rotation(angles.clone()), &SearchOptions::default()).unwrap() else {
            return Err(TestCaseError::fail("planted instance rejected"));
        };
        prop_assert!(matches!(witness, CircleWitness::Exact(_)));
        let w = GramWitness::from_circle(&witness);
        let x = cosines(&angles.iter().map(|a| a.cos().clone()).collect::<Vec<_>>());
        prop_assert!(w.verify(&g, &x, 0.0).is_ok());
        let (_, d) = covariance_map(&g, &x, None).unwrap();
        prop_assert_eq!(witness_transport(&g, &w).unwrap().squared_distances(), EdgeDistances::Exact(d.values.clone()));
        let fw = GramWitness::float(2, w.to_float()).unwrap();
        let EdgeDistances::Float(fd) = witness_transport(&g, &fw).unwrap().squared_distances() else { unreachable!() };
        for (a, b) in fd.iter().zip(&d.values) {
            prop_assert!((a - crate::numerics::to_f64(b)).abs() <= 1e-9);
        }
    }
}

fn chromatic_by_inclusion_exclusion(g: &Graph) -> usize {
    let n = g.node_count();
    let independent: Vec<bool> =
        (0..1u32 << n).map(|s| g.edges().iter().all(|&(u, v)| s >> u & 1 == 0 || s >> v & 1 == 0)).collect();
    // i[S]: independent subsets of S, by a subset-sum transform.
    let mut count: Vec<i128> = independent.iter().map(|&b| i128::from(b)).collect();
    for bit in 0..n {
        for s in 0..1usize << n {
            if s >> bit & 1 == 1 {
                count[s] += count[s ^ (1 << bit)];
            }
        }
    }
    (1..=n)
        .find(|&k| {
            (0..1usize << n)
                .map(|s| {
                    let sign = if (n - (s.count_ones() as usize)) % 2 == 0 { 1 } else { -1 };
                    sign * count[s].pow(k as u32)
                })
                .sum::<i128>()
                > 0
        })
        .unwrap_or(0)
}
