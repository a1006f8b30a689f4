//! The JSON instance schema shared by every command. Graphs are
//! `{"n": .., "edges": [[u, v], ..]}` with `u < v`; edge data is a map keyed
//! `"u,v"` whose values are number strings (`"p/q"` or decimal), or
//! `["c", "s"]` pairs for rotations.

use num_traits::One;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::completion::{Coordinates, GramWitness};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::numerics::{format_rational, parse_rational, Rational, RationalRotation};
use crate::polytope::{PartialVector, VectorMode};
use crate::reduction::{
    build_coloring_instance, build_saxe_edk_instance, hat_lift, reduce_partition_to_ed1, reduce_partition_to_gd2,
    reduce_saxe_to_gd2, Certificate, Gadget, Produced, ReductionInstance, ReductionKind, Source,
};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphJson {
    n: usize,
    edges: Vec<[usize; 2]>,
}

fn bad(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

pub fn graph_to_json(graph: &Graph) -> Value {
    let g = GraphJson { n: graph.node_count(), edges: graph.edges().iter().map(|&(u, v)| [u, v]).collect() };
    serde_json::to_value(g).expect("graph serialises")
}

pub fn graph_from_json(value: &Value) -> Result<Graph> {
    let g: GraphJson = serde_json::from_value(value.clone()).map_err(|e| bad(format!("graph: {e}")))?;
    Graph::from_canonical(g.n, g.edges.into_iter().map(|[u, v]| (u, v)))
}

pub fn rational_json(r: &Rational) -> Value {
    Value::String(format_rational(r))
}

/// Shortest round-trip decimal.
pub fn float_json(x: f64) -> Value {
    Value::String(format!("{x:?}"))
}

fn rational_from(value: &Value) -> Result<Rational> {
    match value {
        Value::String(s) => parse_rational(s),
        other => Err(bad(format!("numbers must be strings, found {other}"))),
    }
}

fn rotation_from(value: &Value) -> Result<RationalRotation> {
    match value.as_array().map(Vec::as_slice) {
        Some([c, s]) => RationalRotation::new(rational_from(c)?, rational_from(s)?),
        _ => Err(bad("rotations are [\"c\", \"s\"] pairs")),
    }
}

pub fn rotation_json(r: &RationalRotation) -> Value {
    json!([format_rational(r.cos()), format_rational(r.sin())])
}

/// Edge data in one of the named modes.
#[derive(Debug, Clone, PartialEq)]
pub enum EdgeData {
    Cosine(Vec<Rational>),
    /// Squared distances.
    Distance(Vec<Rational>),
    /// Plain lengths, for line embeddings.
    Length(Vec<Rational>),
    Rotation(Vec<RationalRotation>),
    /// Radians.
    Angle(Vec<Rational>),
}

impl EdgeData {
    pub fn mode(&self) -> &'static str {
        match self {
            EdgeData::Cosine(_) => "cosine",
            EdgeData::Distance(_) => "distance",
            EdgeData::Length(_) => "length",
            EdgeData::Rotation(_) => "rotation",
            EdgeData::Angle(_) => "angle",
        }
    }

    pub fn to_json(&self, graph: &Graph) -> Value {
        let values: Vec<Value> = match self {
            EdgeData::Rotation(r) => r.iter().map(rotation_json).collect(),
            EdgeData::Cosine(v) | EdgeData::Distance(v) | EdgeData::Length(v) | EdgeData::Angle(v) => {
                v.iter().map(rational_json).collect()
            }
        };
        edge_map(graph, values)
    }

    pub fn from_json(graph: &Graph, mode: &str, map: &Value) -> Result<Self> {
        let entries = edge_entries(graph, map)?;
        let numbers = || entries.iter().map(|v| rational_from(v)).collect::<Result<Vec<_>>>();
        Ok(match mode {
            "cosine" => EdgeData::Cosine(PartialVector::cosines(numbers()?)?.values),
            "distance" => EdgeData::Distance(PartialVector::distances(numbers()?)?.values),
            "length" => EdgeData::Length(PartialVector::distances(numbers()?)?.values),
            "angle" => EdgeData::Angle(numbers()?),
            "rotation" => EdgeData::Rotation(entries.iter().map(|v| rotation_from(v)).collect::<Result<_>>()?),
            other => return Err(bad(format!("unknown mode {other:?}"))),
        })
    }
}

fn edge_map(graph: &Graph, values: Vec<Value>) -> Value {
    let mut map = Map::new();
    for (&(u, v), x) in graph.edges().iter().zip(values) {
        map.insert(format!("{u},{v}"), x);
    }
    Value::Object(map)
}

/// Values of an edge map in edge order; every edge exactly once.
fn edge_entries<'a>(graph: &Graph, map: &'a Value) -> Result<Vec<&'a Value>> {
    let obj = map.as_object().ok_or_else(|| bad("edge data must be an object keyed \"u,v\""))?;
    let mut slots: Vec<Option<&Value>> = vec![None; graph.edge_count()];
    for (key, value) in obj {
        let (u, v) = key
            .split_once(',')
            .and_then(|(a, b)| Some((a.trim().parse::<usize>().ok()?, b.trim().parse::<usize>().ok()?)))
            .ok_or_else(|| bad(format!("bad edge key {key:?}")))?;
        let e =
            (u < v).then(|| graph.edge_index(u, v)).flatten().ok_or_else(|| bad(format!("{key:?} is not an edge")))?;
        slots[e] = Some(value);
    }
    slots
        .into_iter()
        .enumerate()
        .map(|(e, s)| {
            let (u, v) = graph.edge(e);
            s.ok_or_else(|| bad(format!("edge \"{u},{v}\" has no value")))
        })
        .collect()
}

/// A parsed input document. A run report is unwrapped to its payload, so
/// generated instances feed straight back in.
#[derive(Debug, Clone)]
pub struct Document {
    pub raw: Value,
    pub graph: Option<Graph>,
    pub mode: Option<String>,
}

impl Document {
    pub fn graph(&self) -> Result<&Graph> {
        self.graph.as_ref().ok_or_else(|| bad("document has no \"graph\""))
    }

    /// Edge data under the document's mode, or `default` when it names none.
    pub fn data(&self, default: &str) -> Result<EdgeData> {
        let x = self.raw.get("x").ok_or_else(|| bad("document has no edge data \"x\""))?;
        EdgeData::from_json(self.graph()?, self.mode.as_deref().unwrap_or(default), x)
    }

    /// Cosines, read from cosine or squared-distance (`2 - 2x`) data.
    pub fn cosines(&self) -> Result<PartialVector> {
        let values = match self.data("cosine")? {
            EdgeData::Cosine(v) => v,
            EdgeData::Distance(d) => {
                let half = Rational::new(1.into(), 2.into());
                d.iter().map(|dij| Rational::one() - dij * &half).collect()
            }
            other => return Err(bad(format!("expected cosine or distance data, found {}", other.mode()))),
        };
        PartialVector::cosines(values)
    }
}

pub fn parse_document(text: &str) -> Result<Document> {
    let mut raw: Value = serde_json::from_str(text).map_err(|e| bad(format!("JSON: {e}")))?;
    if raw.get("verb").is_some() {
        if let Some(payload) = raw.get_mut("payload").filter(|p| p.is_object()) {
            raw = payload.take();
        }
    }
    let obj = raw.as_object().ok_or_else(|| bad("document must be a JSON object"))?;
    match obj.get("schema") {
        None => {}
        Some(Value::String(s)) if s == SCHEMA_VERSION => {}
        Some(other) => return Err(bad(format!("unsupported schema {other}"))),
    }
    let graph = obj.get("graph").map(graph_from_json).transpose()?;
    let mode = match obj.get("mode") {
        None => None,
        Some(Value::String(m)) => Some(m.clone()),
        Some(other) => return Err(bad(format!("mode must be a string, found {other}"))),
    };
    Ok(Document { raw, graph, mode })
}

pub fn witness_to_json(w: &GramWitness) -> Value {
    let (mode, vectors): (&str, Vec<Value>) = match w.coordinates() {
        Coordinates::Exact(v) => {
            ("exact", v.iter().map(|p| Value::Array(p.iter().map(rational_json).collect())).collect())
        }
        Coordinates::Float(v) => {
            ("float", v.iter().map(|p| Value::Array(p.iter().map(|&x| float_json(x)).collect())).collect())
        }
    };
    json!({ "mode": mode, "k": w.k(), "vectors": vectors })
}

fn produced_data(p: &Produced) -> EdgeData {
    match p {
        Produced::Lengths(v) => EdgeData::Length(v.clone()),
        Produced::Rotations(r) => EdgeData::Rotation(r.clone()),
        Produced::Vector(x) => match x.mode {
            VectorMode::Cosine => EdgeData::Cosine(x.values.clone()),
            VectorMode::Distance => EdgeData::Distance(x.values.clone()),
        },
    }
}

fn source_json(s: &Source) -> Value {
    match s {
        Source::Integers(a) => json!({ "a": a.iter().map(|x| x.to_string()).collect::<Vec<_>>() }),
        Source::Weighted { graph, d } => {
            json!({ "graph": graph_to_json(graph), "mode": "length", "x": EdgeData::Length(d.clone()).to_json(graph) })
        }
        Source::Coloring { graph, gadget, k } => json!({
            "graph": graph_to_json(graph),
            "gadget": gadget_json(gadget),
            "k": k,
        }),
        Source::Suspended { graph, k } => json!({ "graph": graph_to_json(graph), "k": k }),
        Source::Cosines { graph, x } => {
            json!({ "graph": graph_to_json(graph), "mode": "cosine", "x": EdgeData::Cosine(x.values.clone()).to_json(graph) })
        }
    }
}

pub fn gadget_json(g: &Gadget) -> Value {
    json!({ "graph": graph_to_json(&g.graph), "terminals": [g.terminals.0, g.terminals.1] })
}

pub fn gadget_from_json(value: &Value) -> Result<Gadget> {
    let graph = graph_from_json(value.get("graph").ok_or_else(|| bad("gadget needs a graph"))?)?;
    let t: [usize; 2] = value
        .get("terminals")
        .cloned()
        .map(serde_json::from_value)
        .transpose()
        .map_err(|e| bad(format!("gadget terminals: {e}")))?
        .ok_or_else(|| bad("gadget needs two terminals"))?;
    Gadget::new(graph, t[0], t[1])
}

pub fn instance_to_json(inst: &ReductionInstance) -> Value {
    let data = produced_data(&inst.data);
    let mut cert = Map::new();
    if let Some(a) = &inst.certificate.alpha {
        cert.insert("alpha".into(), rotation_json(a));
    }
    if let Some(t) = inst.certificate.total {
        cert.insert("total".into(), Value::String(t.to_string()));
    }
    if let Some(b) = inst.certificate.base_nodes {
        cert.insert("base_nodes".into(), json!(b));
    }
    json!({
        "schema": SCHEMA_VERSION,
        "kind": inst.kind.as_str(),
        "source": source_json(&inst.source),
        "graph": graph_to_json(&inst.graph),
        "mode": data.mode(),
        "x": data.to_json(&inst.graph),
        "certificate": Value::Object(cert),
    })
}

pub fn integers_from_json(value: &Value) -> Result<Vec<u64>> {
    let items = value.as_array().ok_or_else(|| bad("\"a\" must be an array of integer strings"))?;
    items
        .iter()
        .map(|v| {
            let s = v.as_str().ok_or_else(|| bad("integers must be strings"))?;
            s.trim().parse::<u64>().map_err(|_| bad(format!("not a positive integer: {s:?}")))
        })
        .collect()
}

pub fn usize_field(obj: &Value, key: &str) -> Result<usize> {
    match obj.get(key) {
        Some(Value::Number(n)) => n.as_u64().map(|k| k as usize).ok_or_else(|| bad(format!("{key:?} must be a count"))),
        Some(Value::String(s)) => s.trim().parse().map_err(|_| bad(format!("{key:?} must be a count"))),
        _ => Err(bad(format!("missing {key:?}"))),
    }
}

fn source_from_json(kind: ReductionKind, v: &Value) -> Result<Source> {
    let graph = || graph_from_json(v.get("graph").ok_or_else(|| bad("source needs a graph"))?);
    Ok(match kind {
        ReductionKind::PartitionEd1 | ReductionKind::PartitionGd2 => {
            Source::Integers(integers_from_json(v.get("a").ok_or_else(|| bad("source needs \"a\""))?)?)
        }
        ReductionKind::SaxeGd2 => {
            let g = graph()?;
            let d = match EdgeData::from_json(&g, "length", v.get("x").ok_or_else(|| bad("source needs \"x\""))?)? {
                EdgeData::Length(d) => d,
                _ => unreachable!("length mode"),
            };
            Source::Weighted { graph: g, d }
        }
        ReductionKind::ColoringGd3 => Source::Coloring {
            graph: graph()?,
            gadget: gadget_from_json(v.get("gadget").ok_or_else(|| bad("source needs a gadget"))?)?,
            k: usize_field(v, "k")?,
        },
        ReductionKind::SaxeEdk => Source::Suspended { graph: graph()?, k: usize_field(v, "k")? },
        ReductionKind::HatLift => {
            let g = graph()?;
            let x = match EdgeData::from_json(&g, "cosine", v.get("x").ok_or_else(|| bad("source needs \"x\""))?)? {
                EdgeData::Cosine(x) => x,
                _ => unreachable!("cosine mode"),
            };
            Source::Cosines { graph: g, x: PartialVector::cosines(x)? }
        }
    })
}

pub fn instance_from_json(value: &Value) -> Result<ReductionInstance> {
    let kind: ReductionKind =
        value.get("kind").and_then(Value::as_str).ok_or_else(|| bad("instance needs a \"kind\""))?.parse()?;
    let source = source_from_json(kind, value.get("source").ok_or_else(|| bad("instance needs a \"source\""))?)?;
    let graph = graph_from_json(value.get("graph").ok_or_else(|| bad("instance needs a \"graph\""))?)?;
    let mode = value.get("mode").and_then(Value::as_str).ok_or_else(|| bad("instance needs a \"mode\""))?;
    let data = EdgeData::from_json(&graph, mode, value.get("x").ok_or_else(|| bad("instance needs \"x\""))?)?;
    let data = match data {
        EdgeData::Length(v) => Produced::Lengths(v),
        EdgeData::Rotation(r) => Produced::Rotations(r),
        EdgeData::Cosine(v) => Produced::Vector(PartialVector::cosines(v)?),
        EdgeData::Distance(v) => Produced::Vector(PartialVector::distances(v)?),
        EdgeData::Angle(_) => return Err(bad("instances carry exact data, not angles")),
    };
    let cert = value.get("certificate").cloned().unwrap_or(Value::Null);
    let certificate = Certificate {
        alpha: cert.get("alpha").map(rotation_from).transpose()?,
        total: cert
            .get("total")
            .map(|t| t.as_str().and_then(|s| s.parse().ok()).ok_or_else(|| bad("total must be an integer string")))
            .transpose()?,
        base_nodes: cert.get("base_nodes").map(|_| usize_field(&cert, "base_nodes")).transpose()?,
    };
    Ok(ReductionInstance { kind, source, graph, data, certificate })
}

fn field<'a>(doc: &'a Document, key: &str) -> Result<&'a Value> {
    doc.raw.get(key).ok_or_else(|| bad(format!("missing {key:?}")))
}

/// Builds the instance of `kind` from its source document: `{"a": [..]}`
/// for partitions, a graph with lengths for `saxe-gd2`, a graph with an
/// optional `gadget` (default the path `0-1-2`) and `k` (default 3) for
/// colouring, a graph and `k` for `saxe-edk`, a graph with cosines for the
/// hat lift.
pub fn reduce_document(kind: ReductionKind, doc: &Document) -> Result<ReductionInstance> {
    let k_or_3 = || if doc.raw.get("k").is_some() { usize_field(&doc.raw, "k") } else { Ok(3) };
    match kind {
        ReductionKind::PartitionEd1 => reduce_partition_to_ed1(&integers_from_json(field(doc, "a")?)?),
        ReductionKind::PartitionGd2 => reduce_partition_to_gd2(&integers_from_json(field(doc, "a")?)?),
        ReductionKind::SaxeGd2 => match doc.data("length")? {
            EdgeData::Length(d) => reduce_saxe_to_gd2(doc.graph()?, &d),
            other => Err(bad(format!("saxe-gd2 reads lengths, found {}", other.mode()))),
        },
        ReductionKind::ColoringGd3 => {
            let gadget = match doc.raw.get("gadget") {
                Some(g) => gadget_from_json(g)?,
                None => Gadget::new(Graph::path(3), 0, 2)?,
            };
            build_coloring_instance(doc.graph()?, &gadget, k_or_3()?)
        }
        ReductionKind::SaxeEdk => build_saxe_edk_instance(doc.graph()?, k_or_3()?),
        ReductionKind::HatLift => hat_lift(doc.graph()?, &doc.cosines()?),
    }
}
