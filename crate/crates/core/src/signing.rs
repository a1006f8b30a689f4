//! Edge-signing deciders for `ed(G, d) <= 1` and `gd(G, cos d) <= 2`.
//!
//! Both properties say some signing `eps` makes the signed walk sum
//! `phi_{d,eps}` vanish (resp. lie in `2 pi Z`) on every circuit. The search
//! branches on the sign of each spanning-forest edge, which fixes node
//! potentials; every non-tree edge then either matches one sign or prunes
//! the branch. Checking non-tree edges is checking the fundamental cycles.
//!
//! Exact modes screen candidates with doubles and confirm every accepted
//! edge exactly, so exact verdicts never depend on a tolerance.

use std::f64::consts::{PI, TAU};

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::graph::{Graph, SpanningForest, Walk};
use crate::numerics::{parse_rational, to_f64, Rational, RationalRotation};
use crate::polytope::{PartialVector, DEFAULT_TOL};

pub const DEFAULT_MAX_BRANCH: u64 = 1 << 20;

/// Rejections with a near miss inside this multiple of the tolerance are
/// reported as ambiguous in float mode.
const AMBIGUITY_BAND: f64 = 100.0;

/// Per-edge weights: rational lengths, doubles (lengths or radians), or
/// exact rotations `(cos d_e, sin d_e)`.
#[derive(Debug, Clone, PartialEq)]
pub enum EdgeAngles {
    Rational(Vec<Rational>),
    Float(Vec<f64>),
    Rotation(Vec<RationalRotation>),
}

impl EdgeAngles {
    pub fn len(&self) -> usize {
        match self {
            EdgeAngles::Rational(v) => v.len(),
            EdgeAngles::Float(v) => v.len(),
            EdgeAngles::Rotation(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, EdgeAngles::Float(_))
    }

    /// Exact rotations when every sine is rational, else radians.
    pub fn from_cosines(x: &PartialVector) -> Self {
        let rotations: Option<Vec<RationalRotation>> = x.values.iter().map(RationalRotation::from_cosine).collect();
        match rotations {
            Some(r) => EdgeAngles::Rotation(r),
            None => EdgeAngles::Float(x.values.iter().map(|c| to_f64(c).clamp(-1.0, 1.0).acos()).collect()),
        }
    }

    fn approx(&self) -> Vec<f64> {
        match self {
            EdgeAngles::Rational(v) => v.iter().map(to_f64).collect(),
            EdgeAngles::Float(v) => v.clone(),
            EdgeAngles::Rotation(v) => v.iter().map(RationalRotation::angle).collect(),
        }
    }

    fn check(&self, graph: &Graph) -> Result<()> {
        if self.len() != graph.edge_count() {
            return Err(Error::InvalidInput(format!("{} weights for {} edges", self.len(), graph.edge_count())));
        }
        let negative = match self {
            EdgeAngles::Rational(v) => v.iter().any(Signed::is_negative),
            EdgeAngles::Float(v) => v.iter().any(|x| !(*x >= 0.0) || !x.is_finite()),
            EdgeAngles::Rotation(_) => false,
        };
        if negative {
            return Err(Error::InvalidInput("edge weights must be finite and non-negative".into()));
        }
        Ok(())
    }
}

/// `eps in {+1, -1}^E`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignVector(pub Vec<i8>);

impl SignVector {
    pub fn new(signs: Vec<i8>) -> Result<Self> {
        if signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::InvalidInput("signs must be +1 or -1".into()));
        }
        Ok(Self(signs))
    }

    pub fn as_slice(&self) -> &[i8] {
        &self.0
    }
}

/// Value of a signed walk sum.
#[derive(Debug, Clone, PartialEq)]
pub enum AngleValue {
    Rational(Rational),
    Float(f64),
    Rotation(RationalRotation),
}

/// Signed sum `sum_i d_{u_i u_{i+1}} eps_{u_i u_{i+1}} eta_i` along the walk;
/// composed rotations in rotation mode.
pub fn phi(graph: &Graph, d: &EdgeAngles, eps: &SignVector, walk: &Walk) -> Result<AngleValue> {
    d.check(graph)?;
    if eps.0.len() != graph.edge_count() {
        return Err(Error::InvalidInput("sign vector length differs from edge count".into()));
    }
    let steps = walk.signed_edges(graph);
    Ok(match d {
        EdgeAngles::Rational(v) => {
            let mut total = Rational::zero();
            for (e, eta) in steps {
                if eps.0[e] * eta > 0 {
                    total += &v[e];
                } else {
                    total -= &v[e];
                }
            }
            AngleValue::Rational(total)
        }
        EdgeAngles::Float(v) => AngleValue::Float(steps.iter().map(|&(e, eta)| v[e] * f64::from(eps.0[e] * eta)).sum()),
        EdgeAngles::Rotation(v) => {
            let mut acc = RationalRotation::identity();
            for (e, eta) in steps {
                acc = if eps.0[e] * eta > 0 { acc.compose(&v[e]) } else { acc.compose(&v[e].inverse()) };
            }
            AngleValue::Rotation(acc)
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchOptions {
    pub tol: f64,
    pub max_branch: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self { tol: DEFAULT_TOL, max_branch: DEFAULT_MAX_BRANCH }
    }
}

/// Coordinates on the line, `|f(u) - f(v)| = d_uv` on every edge.
#[derive(Debug, Clone, PartialEq)]
pub enum LineWitness {
    Exact(Vec<Rational>),
    Float(Vec<f64>),
}

/// Unit vectors in the plane with `g(u) . g(v) = cos d_uv` on every edge.
#[derive(Debug, Clone, PartialEq)]
pub enum CircleWitness {
    Exact(Vec<RationalRotation>),
    /// Angles of the unit vectors.
    Float(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Outcome<W> {
    Accept { signs: SignVector, witness: W },
    Reject,
}

impl<W> Outcome<W> {
    pub fn is_accept(&self) -> bool {
        matches!(self, Outcome::Accept { .. })
    }
}

pub type Ed1Outcome = Outcome<LineWitness>;
pub type Gd2Outcome = Outcome<CircleWitness>;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Geometry {
    Line,
    Circle,
}

/// Exact potentials, recomputed lazily from the tree signs.
enum ExactPotentials<'a> {
    None,
    Rational { d: &'a [Rational], cache: Vec<Option<Rational>> },
    Rotation { d: &'a [RationalRotation], cache: Vec<Option<RationalRotation>> },
}

struct Search<'a> {
    graph: &'a Graph,
    geometry: Geometry,
    approx: Vec<f64>,
    exact: ExactPotentials<'a>,
    forest: SpanningForest,
    /// Per node: `(edge, earlier node)` for non-tree edges to nodes that
    /// come earlier in the forest order.
    back_edges: Vec<Vec<(usize, usize)>>,
    tol: f64,
    margin: f64,
    budget: u64,
    spent: u64,
    potential: Vec<f64>,
    tree_sign: Vec<i8>,
    edge_sign: Vec<i8>,
    near_miss: bool,
}

impl<'a> Search<'a> {
    fn new(graph: &'a Graph, d: &'a EdgeAngles, geometry: Geometry, options: &SearchOptions) -> Self {
        let forest = SpanningForest::new(graph);
        let mut position = vec![0; graph.node_count()];
        for (i, &v) in forest.order.iter().enumerate() {
            position[v] = i;
        }
        let mut back_edges = vec![Vec::new(); graph.node_count()];
        for (e, &(u, v)) in graph.edges().iter().enumerate() {
            if !forest.is_tree_edge[e] {
                let (early, late) = if position[u] < position[v] { (u, v) } else { (v, u) };
                back_edges[late].push((e, early));
            }
        }
        let approx = d.approx();
        let n = graph.node_count();
        let exact = match d {
            EdgeAngles::Rational(v) => ExactPotentials::Rational { d: v, cache: vec![None; n] },
            EdgeAngles::Rotation(v) => ExactPotentials::Rotation { d: v, cache: vec![None; n] },
            EdgeAngles::Float(_) => ExactPotentials::None,
        };
        let scale = match geometry {
            Geometry::Line => 1.0 + approx.iter().map(|x| x.abs()).sum::<f64>(),
            Geometry::Circle => 1.0 + n as f64,
        };
        Self {
            graph,
            geometry,
            approx,
            exact,
            forest,
            back_edges,
            tol: options.tol,
            margin: 1e-9 * scale,
            budget: options.max_branch,
            spent: 0,
            potential: vec![0.0; n],
            tree_sign: vec![1; n],
            edge_sign: vec![1; graph.edge_count()],
            near_miss: false,
        }
    }

    /// Distance of `head - tail - sign d_e` from zero (mod 2 pi on the circle).
    fn gap(&self, tail: usize, head: usize, e: usize, sign: i8) -> f64 {
        let raw = self.potential[head] - self.potential[tail] - f64::from(sign) * self.approx[e];
        match self.geometry {
            Geometry::Line => raw.abs(),
            Geometry::Circle => {
                let r = raw.rem_euclid(TAU);
                r.min(TAU - r)
            }
        }
    }

    fn exact_rational(&mut self, v: usize) -> Rational {
        if let ExactPotentials::Rational { cache, .. } = &self.exact {
            if let Some(value) = &cache[v] {
                return value.clone();
            }
        }
        let value = match self.forest.parent[v] {
            None => Rational::zero(),
            Some((p, e)) => {
                let base = self.exact_rational(p);
                let ExactPotentials::Rational { d, .. } = &self.exact else { unreachable!() };
                if self.oriented_sign(p, v) > 0 {
                    base + &d[e]
                } else {
                    base - &d[e]
                }
            }
        };
        if let ExactPotentials::Rational { cache, .. } = &mut self.exact {
            cache[v] = Some(value.clone());
        }
        value
    }

    fn exact_rotation(&mut self, v: usize) -> RationalRotation {
        if let ExactPotentials::Rotation { cache, .. } = &self.exact {
            if let Some(value) = &cache[v] {
                return value.clone();
            }
        }
        let value = match self.forest.parent[v] {
            None => RationalRotation::identity(),
            Some((p, e)) => {
                let base = self.exact_rotation(p);
                let ExactPotentials::Rotation { d, .. } = &self.exact else { unreachable!() };
                if self.oriented_sign(p, v) > 0 {
                    base.compose(&d[e])
                } else {
                    base.compose(&d[e].inverse())
                }
            }
        };
        if let ExactPotentials::Rotation { cache, .. } = &mut self.exact {
            cache[v] = Some(value.clone());
        }
        value
    }

    /// Sign with which `d_e` is added when stepping from parent `p` to `v`.
    fn oriented_sign(&self, p: usize, v: usize) -> i8 {
        let eta = if p < v { 1 } else { -1 };
        self.tree_sign[v] * eta
    }

    fn exact_match(&mut self, tail: usize, head: usize, e: usize, sign: i8) -> bool {
        match self.exact {
            ExactPotentials::None => true,
            ExactPotentials::Rational { d, .. } => {
                let diff = self.exact_rational(head) - self.exact_rational(tail);
                if sign > 0 {
                    diff == d[e]
                } else {
                    -diff == d[e]
                }
            }
            ExactPotentials::Rotation { d, .. } => {
                let step = if sign > 0 { d[e].clone() } else { d[e].inverse() };
                self.exact_rotation(tail).compose(&step) == self.exact_rotation(head)
            }
        }
    }

    fn matching_sign(&mut self, tail: usize, head: usize, e: usize) -> Option<i8> {
        for sign in [1i8, -1] {
            let gap = self.gap(tail, head, e, sign);
            let candidate = match self.exact {
                ExactPotentials::None => {
                    if gap > self.tol && gap <= AMBIGUITY_BAND * self.tol {
                        self.near_miss = true;
                    }
                    gap <= self.tol
                }
                _ => gap <= self.margin && self.exact_match(tail, head, e, sign),
            };
            if candidate {
                return Some(sign);
            }
        }
        None
    }

    fn clear_cache(&mut self, v: usize) {
        match &mut self.exact {
            ExactPotentials::None => {}
            ExactPotentials::Rational { cache, .. } => cache[v] = None,
            ExactPotentials::Rotation { cache, .. } => cache[v] = None,
        }
    }

    fn run(&mut self, position: usize) -> Result<bool> {
        let Some(&v) = self.forest.order.get(position) else {
            return Ok(true);
        };
        let signs: &[i8] = match self.forest.parent[v] {
            None => &[1],
            Some((_, e)) if self.approx[e] == 0.0 && self.is_zero_exact(e) => &[1],
            Some(_) => &[1, -1],
        };
        for &sign in signs {
            self.spent += 1;
            if self.spent > self.budget {
                return Err(Error::ResourceLimit { what: "signing search branches", limit: self.budget });
            }
            self.tree_sign[v] = sign;
            self.clear_cache(v);
            self.potential[v] = match self.forest.parent[v] {
                None => 0.0,
                Some((p, e)) => {
                    let step = f64::from(self.oriented_sign(p, v)) * self.approx[e];
                    let raw = self.potential[p] + step;
                    match self.geometry {
                        Geometry::Line => raw,
                        Geometry::Circle => (raw + PI).rem_euclid(TAU) - PI,
                    }
                }
            };
            if let Some((_, e)) = self.forest.parent[v] {
                self.edge_sign[e] = sign;
            }
            let mut consistent = true;
            for i in 0..self.back_edges[v].len() {
                let (e, w) = self.back_edges[v][i];
                let (tail, head) = self.graph.edge(e);
                debug_assert!((tail == v && head == w) || (tail == w && head == v));
                match self.matching_sign(tail, head, e) {
                    Some(s) => self.edge_sign[e] = s,
                    None => {
                        consistent = false;
                        break;
                    }
                }
            }
            if consistent && self.run(position + 1)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    fn is_zero_exact(&self, e: usize) -> bool {
        match self.exact {
            ExactPotentials::None => true,
            ExactPotentials::Rational { d, .. } => d[e].is_zero(),
            ExactPotentials::Rotation { d, .. } => d[e].is_identity(),
        }
    }
}

/// Decides `ed(G, d) <= 1`, `d` given as rational or float edge lengths.
pub fn decide_ed1(graph: &Graph, d: &EdgeAngles, options: &SearchOptions) -> Result<Ed1Outcome> {
    d.check(graph)?;
    if matches!(d, EdgeAngles::Rotation(_)) {
        return Err(Error::InvalidInput("line embedding needs lengths, not rotations".into()));
    }
    let mut search = Search::new(graph, d, Geometry::Line, options);
    if !search.run(0)? {
        if search.near_miss {
            return Err(Error::ToleranceAmbiguous("a rejected signing missed by less than 100 x tol".into()));
        }
        return Ok(Outcome::Reject);
    }
    let witness = match d {
        EdgeAngles::Rational(_) => {
            LineWitness::Exact((0..graph.node_count()).map(|v| search.exact_rational(v)).collect())
        }
        _ => LineWitness::Float(search.potential.clone()),
    };
    Ok(Outcome::Accept { signs: SignVector(search.edge_sign), witness })
}

/// Decides `gd(G, cos d) <= 2`. Rotations are decided exactly; floats and
/// (irrational-angle) rationals are radians compared modulo `2 pi` within
/// the tolerance.
pub fn decide_gd2(graph: &Graph, d: &EdgeAngles, options: &SearchOptions) -> Result<Gd2Outcome> {
    d.check(graph)?;
    let float_copy;
    let d = match d {
        EdgeAngles::Rational(v) => {
            float_copy = EdgeAngles::Float(v.iter().map(to_f64).collect());
            &float_copy
        }
        other => other,
    };
    let mut search = Search::new(graph, d, Geometry::Circle, options);
    if !search.run(0)? {
        if search.near_miss {
            return Err(Error::ToleranceAmbiguous("a rejected signing missed by less than 100 x tol".into()));
        }
        return Ok(Outcome::Reject);
    }
    let witness = match d {
        EdgeAngles::Rotation(_) => {
            CircleWitness::Exact((0..graph.node_count()).map(|v| search.exact_rotation(v)).collect())
        }
        _ => CircleWitness::Float(search.potential.clone()),
    };
    Ok(Outcome::Accept { signs: SignVector(search.edge_sign), witness })
}

/// Reference decider: tries every signing edge by edge and evaluates
/// [`phi`] on each listed circuit once all of its edges are signed. Meant
/// for cross-checking [`decide_ed1`] / [`decide_gd2`] on small graphs.
pub fn decide_over_circuits(
    graph: &Graph,
    d: &EdgeAngles,
    circuits: &[Walk],
    circle: bool,
    options: &SearchOptions,
) -> Result<Option<SignVector>> {
    d.check(graph)?;
    let m = graph.edge_count();
    let mut closing: Vec<Vec<&Walk>> = vec![Vec::new(); m];
    let mut in_circuit = vec![false; m];
    for c in circuits {
        let edges = c.signed_edges(graph);
        for &(e, _) in &edges {
            in_circuit[e] = true;
        }
        if let Some(last) = edges.iter().map(|&(e, _)| e).max() {
            closing[last].push(c);
        }
    }
    let vanishes = |value: AngleValue| match value {
        AngleValue::Rational(r) => r.is_zero(),
        AngleValue::Float(x) if circle => {
            let r = x.rem_euclid(TAU);
            r.min(TAU - r) <= options.tol
        }
        AngleValue::Float(x) => x.abs() <= options.tol,
        AngleValue::Rotation(r) => r.is_identity(),
    };
    let d = match (d, circle) {
        (EdgeAngles::Rational(v), true) => EdgeAngles::Float(v.iter().map(to_f64).collect()),
        (EdgeAngles::Rotation(_), false) => {
            return Err(Error::InvalidInput("line embedding needs lengths, not rotations".into()))
        }
        (other, _) => other.clone(),
    };
    let mut signs = SignVector(vec![1; m]);
    let mut spent = 0u64;
    fn go(
        e: usize,
        graph: &Graph,
        d: &EdgeAngles,
        closing: &[Vec<&Walk>],
        in_circuit: &[bool],
        signs: &mut SignVector,
        spent: &mut u64,
        budget: u64,
        vanishes: &dyn Fn(AngleValue) -> bool,
    ) -> Result<bool> {
        if e == signs.0.len() {
            return Ok(true);
        }
        let choices: &[i8] = if in_circuit[e] { &[1, -1] } else { &[1] };
        for &s in choices {
            *spent += 1;
            if *spent > budget {
                return Err(Error::ResourceLimit { what: "circuit signing enumeration", limit: budget });
            }
            signs.0[e] = s;
            let mut ok = true;
            for c in &closing[e] {
                if !vanishes(phi(graph, d, signs, c)?) {
                    ok = false;
                    break;
                }
            }
            if ok && go(e + 1, graph, d, closing, in_circuit, signs, spent, budget, vanishes)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
    let found = go(0, graph, &d, &closing, &in_circuit, &mut signs, &mut spent, options.max_branch, &vanishes)?;
    Ok(found.then_some(signs))
}

/// Whether `sum_e d_e < 2 pi`. Exact inputs are compared against the
/// certified bounds `6.283185 < 2 pi < 6.2831854`; rotations contribute
/// certified lower and upper bounds on their principal angle in `[0, 2 pi)`.
pub fn check_small_total(graph: &Graph, d: &EdgeAngles) -> Result<bool> {
    d.check(graph)?;
    let lower_two_pi = parse_rational("6.283185")?;
    let upper_two_pi = parse_rational("6.2831854")?;
    let (low, high) = match d {
        EdgeAngles::Float(v) => return Ok(v.iter().sum::<f64>() < TAU),
        EdgeAngles::Rational(v) => {
            let total: Rational = v.iter().sum();
            (total.clone(), total)
        }
        EdgeAngles::Rotation(v) => {
            let mut low = Rational::zero();
            let mut high = Rational::zero();
            for r in v {
                let (lo, hi) = angle_bounds(r)?;
                low += lo;
                high += hi;
            }
            (low, high)
        }
    };
    if high < lower_two_pi {
        Ok(true)
    } else if low >= upper_two_pi {
        Ok(false)
    } else {
        Err(Error::ToleranceAmbiguous("edge total is within the certified bracket around 2 pi".into()))
    }
}

/// Rational bounds on the angle of `r` in `[0, 2 pi)`: quarter turns plus a
/// residual angle `t in [0, pi/2)` with `sin t <= t <= tan t`.
fn angle_bounds(r: &RationalRotation) -> Result<(Rational, Rational)> {
    let half_pi_low = parse_rational("1.5707963")?;
    let half_pi_high = parse_rational("1.5707964")?;
    let mut residual = r.clone();
    let quarter_back = RationalRotation::new(Rational::zero(), -Rational::from_integer(1.into()))?;
    let mut quarters = 0i64;
    // Rotate into the first quadrant: cos > 0, sin >= 0.
    while !(residual.cos().is_positive() && !residual.sin().is_negative()) {
        residual = residual.compose(&quarter_back);
        quarters += 1;
    }
    let q = Rational::from_integer(quarters.into());
    let low = &q * &half_pi_low + residual.sin();
    let high = &q * &half_pi_high + residual.sin() / residual.cos();
    Ok((low, high))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::enumerate_circuits;
    use proptest::prelude::*;

    fn ints(v: &[i64]) -> EdgeAngles {
        EdgeAngles::Rational(v.iter().map(|&x| Rational::from_integer(x.into())).collect())
    }

    fn quarter_turns(n: usize) -> EdgeAngles {
        let q = RationalRotation::from_cosine(&Rational::zero()).unwrap();
        EdgeAngles::Rotation(vec![q; n])
    }

    #[test]
    fn phi_examples() {
        let c3 = Graph::cycle(3).unwrap();
        let d = ints(&[1, 1, 2]);
        let empty = Walk::new(&c3, vec![0]).unwrap();
        let plus = SignVector(vec![1, 1, 1]);
        assert_eq!(phi(&c3, &d, &plus, &empty).unwrap(), AngleValue::Rational(Rational::zero()));
        let single = Walk::new(&c3, vec![0, 1]).unwrap();
        assert_eq!(phi(&c3, &d, &plus, &single).unwrap(), AngleValue::Rational(Rational::from_integer(1.into())));
        // Around 0 -> 1 -> 2 -> 0 the last step runs against edge (0, 2).
        let circuit = Walk::new(&c3, vec![0, 1, 2, 0]).unwrap();
        assert_eq!(phi(&c3, &d, &plus, &circuit).unwrap(), AngleValue::Rational(Rational::zero()));
        let flipped = SignVector(vec![1, 1, -1]);
        assert_eq!(phi(&c3, &d, &flipped, &circuit).unwrap(), AngleValue::Rational(Rational::from_integer(4.into())));
        let rot = phi(&c3, &quarter_turns(3), &plus, &empty).unwrap();
        assert_eq!(rot, AngleValue::Rotation(RationalRotation::identity()));
    }

    #[test]
    fn ed1_examples() {
        let c3 = Graph::cycle(3).unwrap();
        let opts = SearchOptions::default();
        let Outcome::Accept { witness: LineWitness::Exact(f), .. } = decide_ed1(&c3, &ints(&[1, 1, 2]), &opts).unwrap()
        else {
            panic!("expected exact accept");
        };
        assert_eq!(f, [0, 1, 2].map(|x| Rational::from_integer(x.into())));
        assert_eq!(decide_ed1(&c3, &ints(&[1, 1, 3]), &opts).unwrap(), Outcome::Reject);
        let k2 = Graph::complete(2);
        let Outcome::Accept { witness: LineWitness::Exact(f), .. } = decide_ed1(&k2, &ints(&[5]), &opts).unwrap()
        else {
            panic!()
        };
        assert_eq!(f, [0, 5].map(|x| Rational::from_integer(x.into())));
    }

    #[test]
    fn gd2_examples() {
        let opts = SearchOptions::default();
        let c4 = Graph::cycle(4).unwrap();
        assert!(decide_gd2(&c4, &quarter_turns(4), &opts).unwrap().is_accept());
        let c5 = Graph::cycle(5).unwrap();
        assert_eq!(decide_gd2(&c5, &quarter_turns(5), &opts).unwrap(), Outcome::Reject);
        let EdgeAngles::Rotation(mut x1) = quarter_turns(4) else { unreachable!() };
        x1[3] = RationalRotation::identity();
        assert_eq!(decide_gd2(&c4, &EdgeAngles::Rotation(x1), &opts).unwrap(), Outcome::Reject);
    }

    #[test]
    fn gd2_float_radians() {
        let opts = SearchOptions::default();
        let c4 = Graph::cycle(4).unwrap();
        let angles = vec![PI / 2.0, PI / 6.0, PI / 6.0, PI / 6.0];
        assert!(decide_gd2(&c4, &EdgeAngles::Float(angles), &opts).unwrap().is_accept());
        let angles = vec![PI / 2.0, PI / 2.0, PI / 2.0, PI / 3.0];
        assert_eq!(decide_gd2(&c4, &EdgeAngles::Float(angles), &opts).unwrap(), Outcome::Reject);
        let near = vec![PI / 2.0, PI / 6.0, PI / 6.0, PI / 6.0 + 1e-8];
        assert!(matches!(decide_gd2(&c4, &EdgeAngles::Float(near), &opts), Err(Error::ToleranceAmbiguous(_))));
    }

    #[test]
    fn branch_budget_enforced() {
        let c = Graph::cycle(12).unwrap();
        let opts = SearchOptions { max_branch: 50, ..Default::default() };
        let d = ints(&[1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 100]);
        assert!(matches!(decide_ed1(&c, &d, &opts), Err(Error::ResourceLimit { .. })));
    }

    #[test]
    fn small_total_examples() {
        let k2 = Graph::complete(2);
        assert!(check_small_total(&k2, &ints(&[1])).unwrap());
        assert!(!check_small_total(&k2, &ints(&[7])).unwrap());
        let alpha =
            RationalRotation::new(Rational::new(15.into(), 17.into()), Rational::new(8.into(), 17.into())).unwrap();
        let c3 = Graph::cycle(3).unwrap();
        let d = EdgeAngles::Rotation(vec![alpha.clone(), alpha.clone(), alpha.power(2)]);
        assert!(check_small_total(&c3, &d).unwrap());
        // Three near half turns exceed 2 pi.
        let almost_half = RationalRotation::new(-alpha.cos().clone(), alpha.sin().clone()).unwrap();
        let d = EdgeAngles::Rotation(vec![almost_half; 3]);
        assert!(!check_small_total(&c3, &d).unwrap());
    }

    fn verify_line(graph: &Graph, d: &[Rational], f: &[Rational]) -> bool {
        graph.edges().iter().enumerate().all(|(e, &(u, v))| (&f[u] - &f[v]).abs() == d[e])
    }

    fn verify_circle(graph: &Graph, d: &[RationalRotation], g: &[RationalRotation]) -> bool {
        graph.edges().iter().enumerate().all(|(e, &(u, v))| g[u].dot(&g[v]) == *d[e].cos())
    }

    fn graph_strategy(max_n: usize) -> impl Strategy<Value = Graph> {
        (1usize..=max_n).prop_flat_map(|n| {
            proptest::collection::vec(prop::bool::weighted(0.5), n * (n - 1) / 2).prop_map(move |mask| {
                let pairs = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
                Graph::new(n, pairs.zip(mask).filter(|(_, k)| *k).map(|(p, _)| p)).unwrap()
            })
        })
    }

    /// Lengths from random integer positions, with a few edges perturbed.
    fn planted_lengths(graph: &Graph, pos: &[i64], bumps: &[i64]) -> Vec<Rational> {
        graph
            .edges()
            .iter()
            .enumerate()
            .map(|(e, &(u, v))| Rational::from_integer(((pos[u] - pos[v]).abs() + bumps[e % bumps.len()]).abs().into()))
            .collect()
    }

    fn base_rotation() -> RationalRotation {
        RationalRotation::new(Rational::new(3.into(), 5.into()), Rational::new(4.into(), 5.into())).unwrap()
    }

    fn planted_rotations(graph: &Graph, turns: &[i64], bumps: &[i64]) -> Vec<RationalRotation> {
        let r = base_rotation();
        graph
            .edges()
            .iter()
            .enumerate()
            .map(|(e, &(u, v))| r.power((turns[v] - turns[u]) + bumps[e % bumps.len()]))
            .collect()
    }

    fn bumps() -> impl Strategy<Value = Vec<i64>> {
        proptest::collection::vec(prop_oneof![6 => Just(0i64), 1 => -2i64..=2], 1..=5)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn accepted_witnesses_are_exact(
            g in graph_strategy(7), pos in proptest::collection::vec(0i64..6, 7), b in bumps()
        ) {
            let d = planted_lengths(&g, &pos, &b);
            if let Outcome::Accept { witness: LineWitness::Exact(f), .. } =
                decide_ed1(&g, &EdgeAngles::Rational(d.clone()), &SearchOptions::default()).unwrap()
            {
                prop_assert!(verify_line(&g, &d, &f));
            }
            let rot = planted_rotations(&g, &pos, &b);
            if let Outcome::Accept { witness: CircleWitness::Exact(w), .. } =
                decide_gd2(&g, &EdgeAngles::Rotation(rot.clone()), &SearchOptions::default()).unwrap()
            {
                prop_assert!(verify_circle(&g, &rot, &w));
            }
        }

        #[test]
        fn basis_decision_matches_all_circuits(
            g in graph_strategy(7), pos in proptest::collection::vec(0i64..5, 7), b in bumps()
        ) {
            let circuits = enumerate_circuits(&g, 7, 1 << 16).unwrap();
            let opts = SearchOptions::default();
            let d = EdgeAngles::Rational(planted_lengths(&g, &pos, &b));
            prop_assert_eq!(
                decide_ed1(&g, &d, &opts).unwrap().is_accept(),
                decide_over_circuits(&g, &d, &circuits, false, &opts).unwrap().is_some()
            );
            let r = EdgeAngles::Rotation(planted_rotations(&g, &pos, &b));
            prop_assert_eq!(
                decide_gd2(&g, &r, &opts).unwrap().is_accept(),
                decide_over_circuits(&g, &r, &circuits, true, &opts).unwrap().is_some()
            );
        }

        #[test]
        fn circuit_verdicts_match_subset_sums(a in proptest::collection::vec(1i64..=12, 3..=12)) {
            let n = a.len();
            let g = Graph::cycle(n).unwrap();
            let zero_sum = (0u32..(1 << n)).any(|m| {
                a.iter().enumerate().map(|(i, &x)| if m & (1 << i) != 0 { x } else { -x }).sum::<i64>() == 0
            });
            prop_assert_eq!(decide_ed1(&g, &ints(&a), &SearchOptions::default()).unwrap().is_accept(), zero_sum);
            // Rotations by multiples of a fixed angle theta = atan(4/3): a signed
            // sum lies in 2 pi Z iff it is zero, theta / pi being irrational.
            let r = EdgeAngles::Rotation(a.iter().map(|&x| base_rotation().power(x)).collect());
            prop_assert_eq!(decide_gd2(&g, &r, &SearchOptions::default()).unwrap().is_accept(), zero_sum);
        }

        #[test]
        fn small_totals_make_line_and_circle_agree(
            g in graph_strategy(6), pos in proptest::collection::vec(0i64..4, 6), b in bumps()
        ) {
            let lengths = planted_lengths(&g, &pos, &b);
            let total: Rational = lengths.iter().sum();
            let scale = ((total + Rational::from_integer(1.into())) * Rational::from_integer(2.into())).recip();
            let scaled: Vec<f64> = lengths.iter().map(|l| to_f64(&(l * &scale))).collect();
            prop_assert!(check_small_total(&g, &EdgeAngles::Float(scaled.clone())).unwrap());
            let opts = SearchOptions::default();
            let line = decide_ed1(&g, &EdgeAngles::Float(scaled.clone()), &opts).unwrap().is_accept();
            let circle = decide_gd2(&g, &EdgeAngles::Float(scaled), &opts).unwrap().is_accept();
            prop_assert_eq!(line, circle);
        }

        #[test]
        fn verdicts_invariant_under_relabelling(
            g in graph_strategy(6), pos in proptest::collection::vec(0i64..5, 6), b in bumps(), seed in any::<u64>()
        ) {
            let n = g.node_count();
            let mut perm: Vec<usize> = (0..n).collect();
            let mut state = seed | 1;
            for i in (1..n).rev() {
                state ^= state << 13; state ^= state >> 7; state ^= state << 17;
                perm.swap(i, (state % (i as u64 + 1)) as usize);
            }
            let relabelled = Graph::new(n, g.edges().iter().map(|&(u, v)| (perm[u], perm[v]))).unwrap();
            let d = EdgeAngles::Rotation(planted_rotations(&g, &pos, &b));
            let opts = SearchOptions::default();
            prop_assert_eq!(
                decide_gd2(&g, &d, &opts).unwrap().is_accept(),
                decide_gd2(&relabelled, &d, &opts).unwrap().is_accept()
            );
            let l = EdgeAngles::Rational(planted_lengths(&g, &pos, &b));
            prop_assert_eq!(
                decide_ed1(&g, &l, &opts).unwrap().is_accept(),
                decide_ed1(&relabelled, &l, &opts).unwrap().is_accept()
            );
        }
    }
}
