//! Membership in the metric polytope, the circuit elliptope and, for graphs
//! without a K4 minor, the elliptope itself; cut recognition for `E_1`.
//!
//! Angles are carried as fractions of pi. An angle is exact when it is a
//! known rational multiple of pi (arccos of 0, +-1/2, +-1); inequalities
//! touching only exact angles are decided in rational arithmetic, the rest
//! in doubles against a tolerance.

use std::f64::consts::PI;

use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::graph::{enumerate_circuits, is_k4_minor_free, Graph, Walk};
use crate::numerics::{rational_from_f64, to_f64, Rational, RationalRotation};

pub const DEFAULT_TOL: f64 = 1e-9;
pub const DEFAULT_MAX_CIRCUIT_LEN: usize = 12;
pub const DEFAULT_MAX_CIRCUITS: usize = 100_000;

/// One edge angle `a_e` in units of pi.
#[derive(Debug, Clone, PartialEq)]
pub struct Angle {
    pub approx: f64,
    pub exact: Option<Rational>,
}

impl Angle {
    pub fn exact(a: Rational) -> Self {
        Self { approx: to_f64(&a), exact: Some(a) }
    }

    pub fn float(a: f64) -> Self {
        Self { approx: a, exact: None }
    }

    /// `arccos(x) / pi`, exact for the cosines whose angle is a rational
    /// multiple of pi.
    pub fn from_cosine(x: &Rational) -> Self {
        let special = [(1, 1, 0, 1), (1, 2, 1, 3), (0, 1, 1, 2), (-1, 2, 2, 3), (-1, 1, 1, 1)];
        for (p, q, ap, aq) in special {
            if *x == Rational::new(p.into(), q.into()) {
                return Self::exact(Rational::new(ap.into(), aq.into()));
            }
        }
        Self::float(to_f64(x).clamp(-1.0, 1.0).acos() / PI)
    }
}

/// Per-edge angles `a in [0,1]^E`.
#[derive(Debug, Clone, PartialEq)]
pub struct AngleVector {
    angles: Vec<Angle>,
}

impl AngleVector {
    pub fn new(angles: Vec<Angle>, tol: f64) -> Result<Self> {
        for (e, a) in angles.iter().enumerate() {
            let bad = match &a.exact {
                Some(r) => r.is_negative() || *r > Rational::one(),
                None => !(a.approx >= -tol && a.approx <= 1.0 + tol),
            };
            if bad {
                return Err(Error::InvalidInput(format!("angle on edge {e} lies outside [0, 1]")));
            }
        }
        Ok(Self { angles })
    }

    pub fn from_cosines(x: &PartialVector) -> Result<Self> {
        if x.mode != VectorMode::Cosine {
            return Err(Error::InvalidInput("angles need a cosine-mode vector".into()));
        }
        Ok(Self { angles: x.values.iter().map(Angle::from_cosine).collect() })
    }

    /// Angles of rotations with non-negative sine.
    pub fn from_rotations(rotations: &[RationalRotation]) -> Result<Self> {
        let angles = rotations
            .iter()
            .enumerate()
            .map(|(e, r)| {
                if r.sin().is_negative() {
                    return Err(Error::InvalidInput(format!("rotation on edge {e} has negative sine")));
                }
                Ok(Angle::from_cosine(r.cos()))
            })
            .collect::<Result<_>>()?;
        Ok(Self { angles })
    }

    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }

    pub fn get(&self, e: usize) -> &Angle {
        &self.angles[e]
    }

    pub fn approx(&self) -> Vec<f64> {
        self.angles.iter().map(|a| a.approx).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VectorMode {
    Cosine,
    Distance,
}

/// Edge-indexed data: cosines in `[-1, 1]` or non-negative distances.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialVector {
    pub mode: VectorMode,
    pub values: Vec<Rational>,
}

impl PartialVector {
    pub fn new(mode: VectorMode, values: Vec<Rational>) -> Result<Self> {
        for (e, v) in values.iter().enumerate() {
            let ok = match mode {
                VectorMode::Cosine => v.abs() <= Rational::one(),
                VectorMode::Distance => !v.is_negative(),
            };
            if !ok {
                return Err(Error::InvalidInput(format!("value {v} on edge {e} is out of range for {mode:?} mode")));
            }
        }
        Ok(Self { mode, values })
    }

    pub fn cosines(values: Vec<Rational>) -> Result<Self> {
        Self::new(VectorMode::Cosine, values)
    }

    pub fn distances(values: Vec<Rational>) -> Result<Self> {
        Self::new(VectorMode::Distance, values)
    }

    /// Exact rationals for doubles (used by float corpora).
    pub fn cosines_from_f64(values: &[f64]) -> Result<Self> {
        Self::cosines(values.iter().map(|&v| rational_from_f64(v)).collect::<Result<_>>()?)
    }

    pub fn check_len(&self, graph: &Graph) -> Result<()> {
        if self.values.len() != graph.edge_count() {
            return Err(Error::InvalidInput(format!(
                "vector has {} entries but the graph has {} edges",
                self.values.len(),
                graph.edge_count()
            )));
        }
        Ok(())
    }
}

/// Which circuits contribute cycle inequalities.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CircuitScope {
    ChordlessOnly,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetOptions {
    pub scope: CircuitScope,
    pub max_len: usize,
    pub max_circuits: usize,
    pub tol: f64,
}

impl Default for MetOptions {
    fn default() -> Self {
        Self {
            scope: CircuitScope::ChordlessOnly,
            max_len: DEFAULT_MAX_CIRCUIT_LEN,
            max_circuits: DEFAULT_MAX_CIRCUITS,
            tol: DEFAULT_TOL,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Inequality {
    /// `0 <= a_e` (`upper == false`) or `a_e <= 1`.
    EdgeBound { edge: usize, upper: bool },
    /// `a(F) - a(C \ F) <= |F| - 1` for the circuit and odd edge set `F`.
    Cycle { circuit: Walk, edges: Vec<usize>, odd_set: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub inequality: Inequality,
    /// Left side minus right side; positive when violated.
    pub amount: f64,
    pub exact_amount: Option<Rational>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum MetOutcome {
    Member,
    NonMember(Violation),
}

impl MetOutcome {
    pub fn is_member(&self) -> bool {
        matches!(self, MetOutcome::Member)
    }
}

/// Worst odd set of one circuit: edges above one half, with the cheapest
/// edge flipped when that set has even size. Returns `(F, lhs - rhs)`.
pub fn worst_odd_set(values: &[f64]) -> (Vec<usize>, f64) {
    let mut odd: Vec<bool> = values.iter().map(|&a| a > 0.5).collect();
    if odd.iter().filter(|&&f| f).count() % 2 == 0 {
        let flip = (0..values.len())
            .min_by(|&i, &j| (2.0 * values[i] - 1.0).abs().total_cmp(&(2.0 * values[j] - 1.0).abs()))
            .expect("circuit has edges");
        odd[flip] = !odd[flip];
    }
    let amount = 1.0 + values.iter().zip(&odd).map(|(&a, &f)| if f { a - 1.0 } else { -a }).sum::<f64>();
    ((0..values.len()).filter(|&i| odd[i]).collect(), amount)
}

fn worst_odd_set_exact(values: &[Rational]) -> (Vec<usize>, Rational) {
    let half = Rational::new(1.into(), 2.into());
    let mut odd: Vec<bool> = values.iter().map(|a| *a > half).collect();
    if odd.iter().filter(|&&f| f).count() % 2 == 0 {
        let gap = |a: &Rational| (a * Rational::from_integer(2.into()) - Rational::one()).abs();
        let flip = (0..values.len()).min_by_key(|&i| gap(&values[i])).expect("circuit has edges");
        odd[flip] = !odd[flip];
    }
    let mut amount = Rational::one();
    for (a, &f) in values.iter().zip(&odd) {
        if f {
            amount += a - Rational::one();
        } else {
            amount -= a;
        }
    }
    ((0..values.len()).filter(|&i| odd[i]).collect(), amount)
}

fn is_chordless(graph: &Graph, circuit: &Walk) -> bool {
    let nodes = &circuit.nodes()[..circuit.len()];
    let k = nodes.len();
    (0..k).all(|i| (i + 2..k).all(|j| (i == 0 && j == k - 1) || !graph.has_edge(nodes[i], nodes[j])))
}

/// Checks the edge bounds and the odd-set cycle inequalities.
pub fn check_met(graph: &Graph, a: &AngleVector, options: &MetOptions) -> Result<MetOutcome> {
    if a.len() != graph.edge_count() {
        return Err(Error::InvalidInput(format!("{} angles for {} edges", a.len(), graph.edge_count())));
    }
    for (e, angle) in a.angles.iter().enumerate() {
        let (below, above) = match &angle.exact {
            Some(r) => (r.is_negative(), *r > Rational::one()),
            None => (angle.approx < -options.tol, angle.approx > 1.0 + options.tol),
        };
        if below || above {
            let amount = if below { -angle.approx } else { angle.approx - 1.0 };
            let exact_amount = angle.exact.as_ref().map(|r| if below { -r.clone() } else { r - Rational::one() });
            return Ok(MetOutcome::NonMember(Violation {
                inequality: Inequality::EdgeBound { edge: e, upper: above },
                amount,
                exact_amount,
            }));
        }
    }
    let circuits = enumerate_circuits(graph, options.max_len, options.max_circuits)?;
    let mut worst: Option<Violation> = None;
    let mut ambiguous: Option<String> = None;
    for circuit in circuits {
        if options.scope == CircuitScope::ChordlessOnly && !is_chordless(graph, &circuit) {
            continue;
        }
        let edges: Vec<usize> = circuit.signed_edges(graph).into_iter().map(|(e, _)| e).collect();
        let exact: Option<Vec<Rational>> = edges.iter().map(|&e| a.angles[e].exact.clone()).collect();
        let (odd_set, amount, exact_amount) = match exact {
            Some(values) => {
                let (f, amount) = worst_odd_set_exact(&values);
                if !amount.is_positive() {
                    continue;
                }
                (f, to_f64(&amount), Some(amount))
            }
            None => {
                let values: Vec<f64> = edges.iter().map(|&e| a.angles[e].approx).collect();
                let (f, amount) = worst_odd_set(&values);
                if amount < -options.tol {
                    continue;
                }
                if amount <= options.tol {
                    ambiguous.get_or_insert_with(|| {
                        format!(
                            "cycle inequality on circuit {:?} is within {:e} of equality",
                            circuit.nodes(),
                            options.tol
                        )
                    });
                    continue;
                }
                (f, amount, None)
            }
        };
        if worst.as_ref().is_none_or(|w| amount > w.amount) {
            let odd_set = odd_set.into_iter().map(|i| edges[i]).collect();
            worst = Some(Violation { inequality: Inequality::Cycle { circuit, edges, odd_set }, amount, exact_amount });
        }
    }
    match (worst, ambiguous) {
        (Some(v), _) => Ok(MetOutcome::NonMember(v)),
        (None, Some(msg)) => Err(Error::ToleranceAmbiguous(msg)),
        (None, None) => Ok(MetOutcome::Member),
    }
}

/// Membership in `E(G)` for a graph with no K4 minor, via the arccos image
/// in the metric polytope. All chordless circuits are examined, whatever
/// their length.
pub fn check_elliptope_k4free(graph: &Graph, x: &PartialVector, tol: f64) -> Result<MetOutcome> {
    x.check_len(graph)?;
    if !is_k4_minor_free(graph) {
        return Err(Error::NotK4MinorFree);
    }
    let a = AngleVector::from_cosines(x)?;
    let options = MetOptions {
        scope: CircuitScope::ChordlessOnly,
        max_len: graph.node_count().max(3),
        max_circuits: DEFAULT_MAX_CIRCUITS,
        tol,
    };
    check_met(graph, &a, &options)
}

/// Membership in `E(C_n)` where `x[i]` sits on edge `i` of [`Graph::cycle`].
pub fn check_circuit_elliptope(n: usize, x: &PartialVector, tol: f64) -> Result<MetOutcome> {
    let cycle = Graph::cycle(n)?;
    x.check_len(&cycle)?;
    let a = AngleVector::from_cosines(x)?;
    let options = MetOptions { scope: CircuitScope::All, max_len: n, max_circuits: 1, tol };
    check_met(&cycle, &a, &options)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum E1Outcome {
    /// Node signs `u` with `u_i u_j = x_ij` on every edge.
    Cut(Vec<i8>),
    NotUnit {
        edge: usize,
    },
    Inconsistent {
        edge: usize,
    },
}

/// `x in E_1(G)`: every entry is +-1 and the signs come from a cut.
pub fn check_e1(graph: &Graph, x: &PartialVector) -> Result<E1Outcome> {
    x.check_len(graph)?;
    let mut edge_sign = Vec::with_capacity(x.values.len());
    for (e, v) in x.values.iter().enumerate() {
        if v.is_one() {
            edge_sign.push(1i8);
        } else if *v == -Rational::one() {
            edge_sign.push(-1);
        } else {
            return Ok(E1Outcome::NotUnit { edge: e });
        }
    }
    let forest = crate::graph::SpanningForest::new(graph);
    let mut u = vec![1i8; graph.node_count()];
    for &v in &forest.order {
        if let Some((p, e)) = forest.parent[v] {
            u[v] = u[p] * edge_sign[e];
        }
    }
    for (e, &(i, j)) in graph.edges().iter().enumerate() {
        if u[i] * u[j] != edge_sign[e] {
            return Ok(E1Outcome::Inconsistent { edge: e });
        }
    }
    Ok(E1Outcome::Cut(u))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::parse_rational;
    use proptest::prelude::*;

    fn q(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    fn exact_angles(vals: &[&str]) -> AngleVector {
        AngleVector::new(vals.iter().map(|v| Angle::exact(q(v))).collect(), DEFAULT_TOL).unwrap()
    }

    fn cosines(vals: &[&str]) -> PartialVector {
        PartialVector::cosines(vals.iter().map(|v| q(v)).collect()).unwrap()
    }

    #[test]
    fn met_examples() {
        let k3 = Graph::complete(3);
        let opts = MetOptions::default();
        assert!(check_met(&k3, &exact_angles(&["1/2", "1/2", "1/2"]), &opts).unwrap().is_member());

        let MetOutcome::NonMember(v) = check_met(&k3, &exact_angles(&["1", "0", "0"]), &opts).unwrap() else {
            panic!("expected a violation");
        };
        assert_eq!(v.exact_amount, Some(q("1")));
        let Inequality::Cycle { odd_set, .. } = v.inequality else { panic!() };
        assert_eq!(odd_set, vec![0]);

        let c4 = Graph::cycle(4).unwrap();
        assert!(check_met(&c4, &exact_angles(&["1", "1", "1", "1"]), &opts).unwrap().is_member());
    }

    #[test]
    fn float_angles_near_equality_are_ambiguous() {
        let k3 = Graph::complete(3);
        let a = AngleVector::new(vec![Angle::float(0.3), Angle::float(0.2), Angle::float(0.5)], DEFAULT_TOL).unwrap();
        assert!(matches!(check_met(&k3, &a, &MetOptions::default()), Err(Error::ToleranceAmbiguous(_))));
        let a = AngleVector::new(vec![Angle::float(0.3), Angle::float(0.2), Angle::float(0.6)], DEFAULT_TOL).unwrap();
        assert!(!check_met(&k3, &a, &MetOptions::default()).unwrap().is_member());
    }

    #[test]
    fn out_of_range_angles_rejected() {
        assert!(AngleVector::new(vec![Angle::float(1.1)], DEFAULT_TOL).is_err());
        assert!(AngleVector::new(vec![Angle::exact(q("-1/3"))], DEFAULT_TOL).is_err());
        assert!(PartialVector::cosines(vec![q("3/2")]).is_err());
        assert!(PartialVector::distances(vec![q("-1")]).is_err());
    }

    #[test]
    fn k4free_examples() {
        let c3 = Graph::cycle(3).unwrap();
        assert!(check_elliptope_k4free(&c3, &cosines(&["0", "0", "0"]), DEFAULT_TOL).unwrap().is_member());
        let c4 = Graph::cycle(4).unwrap();
        assert!(check_elliptope_k4free(&c4, &cosines(&["0", "0", "0", "1"]), DEFAULT_TOL).unwrap().is_member());
        let out = check_elliptope_k4free(&c4, &cosines(&["1", "1", "1", "-1"]), DEFAULT_TOL).unwrap();
        let MetOutcome::NonMember(v) = out else { panic!() };
        let Inequality::Cycle { odd_set, .. } = v.inequality else { panic!() };
        assert_eq!(odd_set, vec![3]);
        assert_eq!(
            check_elliptope_k4free(&Graph::complete(4), &cosines(&["0"; 6]), DEFAULT_TOL),
            Err(Error::NotK4MinorFree)
        );
    }

    #[test]
    fn circuit_examples() {
        assert!(check_circuit_elliptope(4, &cosines(&["0", "0", "0", "0"]), DEFAULT_TOL).unwrap().is_member());
        assert!(check_circuit_elliptope(4, &cosines(&["0", "0", "0", "1/2"]), DEFAULT_TOL).unwrap().is_member());
        assert!(!check_circuit_elliptope(4, &cosines(&["1", "1", "1", "-1"]), DEFAULT_TOL).unwrap().is_member());
        // Float interior point.
        assert!(check_circuit_elliptope(5, &cosines(&["0.3", "-0.2", "0.1", "0.9", "0.4"]), DEFAULT_TOL)
            .unwrap()
            .is_member());
    }

    #[test]
    fn e1_examples() {
        let c4 = Graph::cycle(4).unwrap();
        assert_eq!(check_e1(&c4, &cosines(&["1", "1", "1", "1"])).unwrap(), E1Outcome::Cut(vec![1; 4]));
        let c3 = Graph::cycle(3).unwrap();
        assert!(matches!(check_e1(&c3, &cosines(&["-1", "-1", "-1"])).unwrap(), E1Outcome::Inconsistent { .. }));
        assert!(matches!(check_e1(&c4, &cosines(&["1", "-1", "1", "-1"])).unwrap(), E1Outcome::Cut(_)));
        assert_eq!(check_e1(&c3, &cosines(&["1", "0", "1"])).unwrap(), E1Outcome::NotUnit { edge: 1 });
    }

    fn brute_force_worst(values: &[f64]) -> f64 {
        let n = values.len();
        (0u32..(1 << n))
            .filter(|m| m.count_ones() % 2 == 1)
            .map(|m| {
                let (mut inside, mut outside) = (0.0, 0.0);
                for (i, &a) in values.iter().enumerate() {
                    if m & (1 << i) != 0 {
                        inside += a;
                    } else {
                        outside += a;
                    }
                }
                inside - outside - (m.count_ones() as f64 - 1.0)
            })
            .fold(f64::NEG_INFINITY, f64::max)
    }

    fn brute_force_cut(graph: &Graph, signs: &[i8]) -> bool {
        let n = graph.node_count();
        (0u32..(1 << n)).any(|m| {
            let u = |v: usize| if m & (1 << v) != 0 { -1 } else { 1 };
            graph.edges().iter().zip(signs).all(|(&(i, j), &s)| u(i) * u(j) == s)
        })
    }

    proptest! {
        #[test]
        fn worst_odd_set_matches_brute_force(values in proptest::collection::vec(0.0f64..=1.0, 3..=14)) {
            let (odd, amount) = worst_odd_set(&values);
            prop_assert_eq!(odd.len() % 2, 1);
            prop_assert!((amount - brute_force_worst(&values)).abs() < 1e-12);
        }

        #[test]
        fn e1_matches_sign_enumeration(
            n in 1usize..=10,
            mask in proptest::collection::vec(any::<bool>(), 45),
            signs in proptest::collection::vec(any::<bool>(), 45),
        ) {
            let pairs = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
            let g = Graph::new(n, pairs.zip(&mask).filter(|(_, &k)| k).map(|(p, _)| p)).unwrap();
            let s: Vec<i8> = signs[..g.edge_count()].iter().map(|&b| if b { 1 } else { -1 }).collect();
            let x = PartialVector::cosines(s.iter().map(|&v| Rational::from_integer(v.into())).collect()).unwrap();
            let outcome = check_e1(&g, &x).unwrap();
            prop_assert_eq!(matches!(outcome, E1Outcome::Cut(_)), brute_force_cut(&g, &s));
            if let E1Outcome::Cut(u) = outcome {
                for (e, &(i, j)) in g.edges().iter().enumerate() {
                    prop_assert_eq!(u[i] * u[j], s[e]);
                }
            }
        }
    }
}
