//! Command-line front end. Each verb reads one JSON document (a file or
//! standard input) and prints one run report.

use std::fmt;
use std::io::Read;
use std::str::FromStr;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use num_traits::Zero;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::completion::{
    chromatic_number, coloring_witness, complete_circuit, complete_k4free, covariance_map, GramWitness,
    DEFAULT_MAX_COLOR_NODES,
};
use crate::error::Error;
use crate::graph::Graph;
use crate::numerics::{parse_rational, Rational};
use crate::polytope::{
    check_circuit_elliptope, check_e1, check_elliptope_k4free, check_met, Angle, AngleVector, E1Outcome, Inequality,
    MetOptions, MetOutcome, PartialVector, Violation, DEFAULT_TOL,
};
use crate::reduction::{
    build_coloring_instance, build_saxe_edk_instance, corpus, hat_lift, reduce_partition_to_ed1,
    reduce_partition_to_gd2, reduce_saxe_to_gd2, verify_many, Evidence, Gadget, ReductionInstance, ReductionKind,
    Source, Verdict as Check, VerifyOptions, VerifyReport,
};
use crate::schema::{
    float_json, graph_to_json, instance_from_json, instance_to_json, parse_document, rational_json, reduce_document,
    rotation_json, witness_to_json, Document, EdgeData, SCHEMA_VERSION,
};
use crate::signing::{
    decide_ed1, decide_gd2, CircleWitness, EdgeAngles, LineWitness, Outcome, SearchOptions, DEFAULT_MAX_BRANCH,
};

pub const EXIT_USAGE: i32 = 64;
pub const EXIT_DATA: i32 = 65;
pub const EXIT_NO_INPUT: i32 = 66;
pub const EXIT_RESOURCE: i32 = 70;

#[derive(Parser, Debug)]
#[command(name = "elliptope", version, about = "Low-rank PSD completion and elliptope membership on graphs")]
struct Cli {
    #[command(flatten)]
    flags: Flags,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Args, Debug)]
struct Flags {
    /// Decide with exact rational arithmetic
    #[arg(long, global = true)]
    exact: bool,
    /// Decide with doubles
    #[arg(long, global = true)]
    float: bool,
    /// Float tolerance
    #[arg(long, global = true, value_parser = parse_tol)]
    tol: Option<f64>,
    /// Search node budget
    #[arg(long, global = true)]
    max_branch: Option<u64>,
    /// Worker threads
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    jobs: Option<u64>,
    /// Seed for a generated `verify` corpus
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Instances per kind in a generated corpus
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..=10_000))]
    count: Option<u64>,
    /// Add wall-clock time to the report
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Args, Debug)]
struct Input {
    /// JSON document; standard input when absent or `-`
    path: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Verb {
    /// Cycle inequalities of the metric polytope
    CheckMet(Input),
    /// Membership in E(G) for a graph without a K4 minor
    CheckElliptope(Input),
    /// Membership in E(C_n)
    CheckCircuit(Input),
    /// Membership in E_1(G)
    CheckE1(Input),
    /// ed(G, d) <= 1 for edge lengths
    CheckEd1(Input),
    /// gd(G, x) <= 2
    CheckGd2(Input),
    /// Rank-3 completion on a circuit
    CompleteCircuit(Input),
    /// Rank-3 completion on a graph without a K4 minor
    Complete(Input),
    /// Colouring witness for x = 0
    WitnessColor(Input),
    /// Covariance map onto the suspension
    Covariance(Input),
    /// Generate a reduction instance
    Reduce {
        #[arg(value_parser = ReductionKind::from_str)]
        kind: ReductionKind,
        #[command(flatten)]
        input: Input,
    },
    /// Check a reduction instance, or a seeded corpus, against its oracle
    Verify(Input),
}

impl Verb {
    fn name(&self) -> &'static str {
        match self {
            Verb::CheckMet(_) => "check-met",
            Verb::CheckElliptope(_) => "check-elliptope",
            Verb::CheckCircuit(_) => "check-circuit",
            Verb::CheckE1(_) => "check-e1",
            Verb::CheckEd1(_) => "check-ed1",
            Verb::CheckGd2(_) => "check-gd2",
            Verb::CompleteCircuit(_) => "complete-circuit",
            Verb::Complete(_) => "complete",
            Verb::WitnessColor(_) => "witness-color",
            Verb::Covariance(_) => "covariance",
            Verb::Reduce { .. } => "reduce",
            Verb::Verify(_) => "verify",
        }
    }

    fn input(&self) -> &Input {
        match self {
            Verb::CheckMet(i)
            | Verb::CheckElliptope(i)
            | Verb::CheckCircuit(i)
            | Verb::CheckE1(i)
            | Verb::CheckEd1(i)
            | Verb::CheckGd2(i)
            | Verb::CompleteCircuit(i)
            | Verb::Complete(i)
            | Verb::WitnessColor(i)
            | Verb::Covariance(i)
            | Verb::Verify(i) => i,
            Verb::Reduce { input, .. } => input,
        }
    }
}

fn parse_tol(s: &str) -> Result<f64, String> {
    let t = parse_rational(s).map_err(|e| e.to_string())?;
    let t = crate::numerics::to_f64(&t);
    if t.is_finite() && t >= 0.0 {
        Ok(t)
    } else {
        Err(format!("tolerance must be a finite non-negative number, got {s}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Member,
    NonMember,
    Ambiguous,
    Agree,
    Disagree,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Member | Verdict::Agree => 0,
            Verdict::NonMember | Verdict::Disagree => 1,
            Verdict::Ambiguous => 2,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Member => "MEMBER",
            Verdict::NonMember => "NON_MEMBER",
            Verdict::Ambiguous => "AMBIGUOUS",
            Verdict::Agree => "AGREE",
            Verdict::Disagree => "DISAGREE",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Float,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Exact => "EXACT",
            Mode::Float => "FLOAT",
        })
    }
}

/// What one command produced.
#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub verb: &'static str,
    /// SHA-256 of the input bytes, hex.
    pub input_digest: String,
    /// `None` for verbs that only transform their input.
    pub verdict: Option<Verdict>,
    pub payload: Value,
    pub mode: Mode,
    pub tol: f64,
    pub timing_ms: Option<f64>,
}

impl RunReport {
    pub fn to_json(&self) -> Value {
        let mut out = Map::new();
        out.insert("schema".into(), json!(SCHEMA_VERSION));
        out.insert("verb".into(), json!(self.verb));
        out.insert("input_sha256".into(), json!(self.input_digest));
        out.insert("mode".into(), json!(self.mode.to_string()));
        if self.mode == Mode::Float {
            out.insert("tol".into(), float_json(self.tol));
        }
        out.insert("verdict".into(), self.verdict.map_or(Value::Null, |v| json!(v.to_string())));
        out.insert("payload".into(), self.payload.clone());
        if let Some(t) = self.timing_ms {
            out.insert("timing_ms".into(), float_json(t));
        }
        Value::Object(out)
    }

    pub fn exit_code(&self) -> i32 {
        self.verdict.map_or(0, Verdict::exit_code)
    }
}

/// Exit code and the text for each stream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Output {
    fn failure(code: i32, message: impl fmt::Display) -> Self {
        Self { code, stdout: String::new(), stderr: format!("error: {message}\n") }
    }
}

enum Failure {
    Usage(String),
    NoInput(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Run<T> = std::result::Result<T, Failure>;

struct Decided {
    verdict: Option<Verdict>,
    mode: Mode,
    payload: Value,
}

impl Decided {
    fn new(verdict: Verdict, mode: Mode, payload: Value) -> Self {
        Self { verdict: Some(verdict), mode, payload }
    }

    fn transform(payload: Value) -> Self {
        Self { verdict: None, mode: Mode::Exact, payload }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Want {
    Auto,
    Exact,
    Float,
}

struct Settings {
    want: Want,
    tol: f64,
    max_branch: Option<u64>,
    seed: Option<u64>,
    count: usize,
}

impl Settings {
    fn search(&self) -> SearchOptions {
        SearchOptions { tol: self.tol, max_branch: self.max_branch.unwrap_or(DEFAULT_MAX_BRANCH) }
    }

    fn float_only(&self, verb: &str) -> Run<()> {
        if self.want == Want::Exact {
            return Err(Failure::Usage(format!("{verb} has no exact mode")));
        }
        Ok(())
    }

    fn exact_only(&self, verb: &str) -> Run<()> {
        if self.want == Want::Float {
            return Err(Failure::Usage(format!("{verb} has no float mode")));
        }
        Ok(())
    }
}

/// Parses `args` (program name first), runs the verb and renders the result.
/// Never panics on bad input.
pub fn run<I, S>(args: I, stdin: &mut dyn Read) -> Output
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    Output { code: 0, stdout: text, stderr: String::new() }
                }
                _ => Output { code: EXIT_USAGE, stdout: String::new(), stderr: text },
            };
        }
    };
    match std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| execute(cli, stdin))) {
        Ok(out) => out,
        Err(_) => Output::failure(EXIT_DATA, "internal failure while processing the input"),
    }
}

fn execute(cli: Cli, stdin: &mut dyn Read) -> Output {
    let f = &cli.flags;
    if f.exact && f.float {
        return Output::failure(EXIT_USAGE, "--exact and --float are exclusive");
    }
    let verb = cli.verb.name();
    let seeded = matches!(cli.verb, Verb::Verify(_)) && f.seed.is_some();
    if f.seed.is_some() && !seeded {
        return Output::failure(EXIT_USAGE, "--seed only applies to verify");
    }
    if f.count.is_some() && !seeded {
        return Output::failure(EXIT_USAGE, "--count needs verify --seed");
    }
    let settings = Settings {
        want: if f.exact {
            Want::Exact
        } else if f.float {
            Want::Float
        } else {
            Want::Auto
        },
        tol: f.tol.unwrap_or(DEFAULT_TOL),
        max_branch: f.max_branch,
        seed: f.seed,
        count: f.count.map_or(10, |c| c as usize),
    };
    let bytes = if seeded {
        if cli.verb.input().path.is_some() {
            return Output::failure(EXIT_USAGE, "verify takes either an instance or --seed, not both");
        }
        format!("seed={} count={}", settings.seed.unwrap_or(0), settings.count).into_bytes()
    } else {
        match read_input(cli.verb.input(), stdin) {
            Ok(b) => b,
            Err(Failure::NoInput(msg)) => return Output::failure(EXIT_NO_INPUT, msg),
            Err(_) => return Output::failure(EXIT_NO_INPUT, "unreadable input"),
        }
    };
    let digest: String = Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect();
    let start = Instant::now();
    let pool = match f.jobs {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n as usize).build() {
            Ok(p) => Some(p),
            Err(e) => return Output::failure(EXIT_USAGE, format!("cannot start {n} workers: {e}")),
        },
        None => None,
    };
    let work = || dispatch(&cli.verb, &bytes, &settings);
    let result = match &pool {
        Some(p) => p.install(work),
        None => work(),
    };
    let decided = match result {
        Ok(d) => d,
        Err(Failure::Lib(Error::ToleranceAmbiguous(msg))) => {
            Decided::new(Verdict::Ambiguous, Mode::Float, json!({ "reason": msg }))
        }
        Err(Failure::Lib(Error::NotInElliptope(msg))) => {
            Decided::new(Verdict::NonMember, Mode::Float, json!({ "reason": msg }))
        }
        Err(Failure::Lib(e @ Error::ResourceLimit { .. })) => return Output::failure(EXIT_RESOURCE, e),
        Err(Failure::Lib(e)) => return Output::failure(EXIT_DATA, e),
        Err(Failure::Usage(msg)) => return Output::failure(EXIT_USAGE, msg),
        Err(Failure::NoInput(msg)) => return Output::failure(EXIT_NO_INPUT, msg),
    };
    let report = RunReport {
        verb,
        input_digest: digest,
        verdict: decided.verdict,
        payload: decided.payload,
        mode: decided.mode,
        tol: settings.tol,
        timing_ms: f.timing.then(|| start.elapsed().as_secs_f64() * 1e3),
    };
    let mut stdout = serde_json::to_string_pretty(&report.to_json()).expect("report serialises");
    stdout.push('\n');
    Output { code: report.exit_code(), stdout, stderr: String::new() }
}

fn read_input(input: &Input, stdin: &mut dyn Read) -> Run<Vec<u8>> {
    let mut bytes = Vec::new();
    match input.path.as_deref() {
        None | Some("-") => {
            stdin.read_to_end(&mut bytes).map_err(|e| Failure::NoInput(format!("standard input: {e}")))?;
        }
        Some(path) => {
            bytes = std::fs::read(path).map_err(|e| Failure::NoInput(format!("{path}: {e}")))?;
        }
    }
    Ok(bytes)
}

fn dispatch(verb: &Verb, bytes: &[u8], s: &Settings) -> Run<Decided> {
    if let (Verb::Verify(_), Some(seed)) = (verb, s.seed) {
        return verify_corpus(seed, s);
    }
    let text = std::str::from_utf8(bytes).map_err(|_| Error::Parse("input is not UTF-8".into()))?;
    let doc = parse_document(text)?;
    match verb {
        Verb::CheckMet(_) => met_family(verb.name(), &doc, s, MetKind::Met),
        Verb::CheckElliptope(_) => met_family(verb.name(), &doc, s, MetKind::K4Free),
        Verb::CheckCircuit(_) => met_family(verb.name(), &doc, s, MetKind::Circuit),
        Verb::CheckE1(_) => run_e1(&doc, s),
        Verb::CheckEd1(_) => run_ed1(&doc, s),
        Verb::CheckGd2(_) => run_gd2(&doc, s),
        Verb::CompleteCircuit(_) => run_complete(verb.name(), &doc, s, true),
        Verb::Complete(_) => run_complete(verb.name(), &doc, s, false),
        Verb::WitnessColor(_) => run_witness_color(&doc, s),
        Verb::Covariance(_) => run_covariance(&doc, s),
        Verb::Reduce { kind, .. } => run_reduce(*kind, &doc, s),
        Verb::Verify(_) => run_verify(&doc, s),
    }
}

fn edge_json(graph: &Graph, e: usize) -> Value {
    let (u, v) = graph.edge(e);
    json!([u, v])
}

fn cosines(doc: &Document) -> Run<PartialVector> {
    Ok(doc.cosines()?)
}

fn violation_json(graph: &Graph, v: &Violation) -> Value {
    let inequality = match &v.inequality {
        Inequality::EdgeBound { edge, upper } => json!({
            "type": "edge_bound",
            "edge": edge_json(graph, *edge),
            "bound": if *upper { "upper" } else { "lower" },
        }),
        Inequality::Cycle { circuit, odd_set, .. } => json!({
            "type": "cycle",
            "circuit": circuit.nodes(),
            "odd_set": odd_set.iter().map(|&e| edge_json(graph, e)).collect::<Vec<_>>(),
        }),
    };
    let mut out = Map::new();
    out.insert("violated".into(), inequality);
    out.insert("amount".into(), float_json(v.amount));
    if let Some(a) = &v.exact_amount {
        out.insert("exact_amount".into(), rational_json(a));
    }
    Value::Object(out)
}

enum MetKind {
    Met,
    K4Free,
    Circuit,
}

/// Edge data of a cycle in [`Graph::cycle`] edge order.
fn as_cycle(graph: &Graph, x: &PartialVector) -> Run<(Graph, PartialVector)> {
    let n = graph.node_count();
    let cycle = Graph::cycle(n)?;
    let mut values = Vec::with_capacity(n);
    for &(u, v) in cycle.edges() {
        match graph.edge_index(u, v) {
            Some(e) if graph.edge_count() == n => values.push(x.values[e].clone()),
            _ => return Err(Error::InvalidGraph("expected the circuit 0-1-...-(n-1)-0".into()).into()),
        }
    }
    Ok((cycle, PartialVector::cosines(values)?))
}

fn met_family(verb: &str, doc: &Document, s: &Settings, kind: MetKind) -> Run<Decided> {
    let graph = doc.graph()?;
    let x = cosines(doc)?;
    x.check_len(graph)?;
    let exact = x.values.iter().all(|c| Angle::from_cosine(c).exact.is_some());
    if s.want == Want::Exact && !exact {
        return Err(Failure::Usage(format!("{verb} is exact only when every angle is a rational multiple of pi")));
    }
    let (outcome, graph) = match kind {
        MetKind::Met => {
            let a = AngleVector::from_cosines(&x)?;
            let options = MetOptions { tol: s.tol, ..MetOptions::default() };
            (check_met(graph, &a, &options)?, graph.clone())
        }
        MetKind::K4Free => (check_elliptope_k4free(graph, &x, s.tol)?, graph.clone()),
        MetKind::Circuit => {
            let (cycle, xc) = as_cycle(graph, &x)?;
            (check_circuit_elliptope(cycle.node_count(), &xc, s.tol)?, cycle)
        }
    };
    let mode = if exact { Mode::Exact } else { Mode::Float };
    Ok(match outcome {
        MetOutcome::Member => Decided::new(Verdict::Member, mode, json!({})),
        MetOutcome::NonMember(v) => Decided::new(Verdict::NonMember, mode, violation_json(&graph, &v)),
    })
}

fn run_e1(doc: &Document, s: &Settings) -> Run<Decided> {
    s.exact_only("check-e1")?;
    let graph = doc.graph()?;
    let x = cosines(doc)?;
    Ok(match check_e1(graph, &x)? {
        E1Outcome::Cut(u) => Decided::new(Verdict::Member, Mode::Exact, json!({ "node_signs": u })),
        E1Outcome::NotUnit { edge } => Decided::new(
            Verdict::NonMember,
            Mode::Exact,
            json!({ "reason": "entry is not +1 or -1", "edge": edge_json(graph, edge) }),
        ),
        E1Outcome::Inconsistent { edge } => Decided::new(
            Verdict::NonMember,
            Mode::Exact,
            json!({ "reason": "signs are not those of a cut", "edge": edge_json(graph, edge) }),
        ),
    })
}

fn signs_json(signs: &[i8]) -> Value {
    json!(signs)
}

fn run_ed1(doc: &Document, s: &Settings) -> Run<Decided> {
    let graph = doc.graph()?;
    let d = match doc.data("length")? {
        EdgeData::Length(d) => d,
        other => return Err(Error::Parse(format!("check-ed1 reads lengths, found {}", other.mode())).into()),
    };
    let (angles, mode) = if s.want == Want::Float {
        (EdgeAngles::Float(d.iter().map(crate::numerics::to_f64).collect()), Mode::Float)
    } else {
        (EdgeAngles::Rational(d), Mode::Exact)
    };
    Ok(match decide_ed1(graph, &angles, &s.search())? {
        Outcome::Accept { signs, witness } => {
            let positions: Vec<Value> = match witness {
                LineWitness::Exact(p) => p.iter().map(rational_json).collect(),
                LineWitness::Float(p) => p.iter().map(|&v| float_json(v)).collect(),
            };
            Decided::new(Verdict::Member, mode, json!({ "signs": signs_json(&signs.0), "positions": positions }))
        }
        Outcome::Reject => Decided::new(Verdict::NonMember, mode, json!({})),
    })
}

fn gd2_angles(doc: &Document, want: Want) -> Run<EdgeAngles> {
    let data = doc.data("rotation")?;
    let angles = match data {
        EdgeData::Rotation(r) => EdgeAngles::Rotation(r),
        EdgeData::Angle(a) => EdgeAngles::Rational(a),
        EdgeData::Cosine(_) | EdgeData::Distance(_) => EdgeAngles::from_cosines(&cosines(doc)?),
        EdgeData::Length(_) => {
            return Err(Error::Parse("check-gd2 reads rotations, angles or cosines, not lengths".into()).into())
        }
    };
    Ok(match (want, angles) {
        (Want::Float, EdgeAngles::Rotation(r)) => EdgeAngles::Float(r.iter().map(|x| x.angle()).collect()),
        (Want::Exact, EdgeAngles::Rotation(r)) => EdgeAngles::Rotation(r),
        (Want::Exact, _) => {
            return Err(Failure::Usage("exact gd2 needs rotations, or cosines whose sines are rational".into()))
        }
        (_, a) => a,
    })
}

fn circle_json(w: &CircleWitness) -> Value {
    match w {
        CircleWitness::Exact(r) => {
            json!({ "mode": "rotation", "points": r.iter().map(rotation_json).collect::<Vec<_>>() })
        }
        CircleWitness::Float(a) => {
            json!({ "mode": "angle", "points": a.iter().map(|&v| float_json(v)).collect::<Vec<_>>() })
        }
    }
}

fn run_gd2(doc: &Document, s: &Settings) -> Run<Decided> {
    let graph = doc.graph()?;
    let angles = gd2_angles(doc, s.want)?;
    let mode = if angles.is_exact() && !matches!(angles, EdgeAngles::Rational(_)) { Mode::Exact } else { Mode::Float };
    Ok(match decide_gd2(graph, &angles, &s.search())? {
        Outcome::Accept { signs, witness } => Decided::new(
            Verdict::Member,
            mode,
            json!({ "signs": signs_json(&signs.0), "witness": circle_json(&witness) }),
        ),
        Outcome::Reject => Decided::new(Verdict::NonMember, mode, json!({})),
    })
}

fn completion_payload(graph: &Graph, x: &PartialVector, w: &GramWitness) -> Run<Value> {
    Ok(json!({
        "graph": graph_to_json(graph),
        "witness": witness_to_json(w),
        "max_deviation": float_json(w.max_deviation(graph, x)?),
    }))
}

fn run_complete(verb: &str, doc: &Document, s: &Settings, circuit: bool) -> Run<Decided> {
    s.float_only(verb)?;
    let graph = doc.graph()?;
    let x = cosines(doc)?;
    x.check_len(graph)?;
    let (graph, x, w) = if circuit {
        let (cycle, xc) = as_cycle(graph, &x)?;
        let w = complete_circuit(cycle.node_count(), &xc, s.tol)?;
        (cycle, xc, w)
    } else {
        let w = complete_k4free(graph, &x, s.tol)?;
        (graph.clone(), x, w)
    };
    Ok(Decided::new(Verdict::Member, Mode::Float, completion_payload(&graph, &x, &w)?))
}

fn color_limit(s: &Settings) -> u64 {
    s.max_branch.unwrap_or(DEFAULT_MAX_COLOR_NODES)
}

fn run_witness_color(doc: &Document, s: &Settings) -> Run<Decided> {
    s.exact_only("witness-color")?;
    let graph = doc.graph()?;
    let (chi, colors) = chromatic_number(graph, color_limit(s))?;
    let w = coloring_witness(graph, color_limit(s))?;
    let zero = PartialVector::cosines(vec![Rational::zero(); graph.edge_count()])?;
    w.verify(graph, &zero, 0.0)?;
    Ok(Decided::new(
        Verdict::Member,
        Mode::Exact,
        json!({ "chi": chi, "colors": colors, "witness": witness_to_json(&w) }),
    ))
}

fn run_covariance(doc: &Document, s: &Settings) -> Run<Decided> {
    s.exact_only("covariance")?;
    let graph = doc.graph()?;
    let x = cosines(doc)?;
    let diag = match doc.raw.get("diag") {
        None => None,
        Some(Value::Array(items)) => Some(
            items
                .iter()
                .map(|v| match v {
                    Value::String(t) => parse_rational(t),
                    other => Err(Error::Parse(format!("numbers must be strings, found {other}"))),
                })
                .collect::<crate::Result<Vec<_>>>()?,
        ),
        Some(_) => return Err(Error::Parse("\"diag\" must be an array of number strings".into()).into()),
    };
    let (image, d) = covariance_map(graph, &x, diag.as_deref())?;
    Ok(Decided::transform(json!({
        "schema": SCHEMA_VERSION,
        "graph": graph_to_json(&image),
        "mode": "distance",
        "x": EdgeData::Distance(d.values).to_json(&image),
    })))
}

fn run_reduce(kind: ReductionKind, doc: &Document, s: &Settings) -> Run<Decided> {
    s.exact_only("reduce")?;
    Ok(Decided::transform(instance_to_json(&reduce_document(kind, doc)?)))
}

fn check_json(c: &Check) -> Value {
    let evidence = match &c.evidence {
        Evidence::Signs(s) => json!({ "signs": signs_json(&s.0) }),
        Evidence::Coloring { chi, colors } => json!({ "chi": chi, "colors": colors }),
        Evidence::None => Value::Null,
    };
    json!({ "method": c.method, "accept": c.accept, "evidence": evidence })
}

fn report_json(r: &VerifyReport) -> Value {
    json!({
        "kind": r.kind.as_str(),
        "agree": r.agree,
        "premise": r.premise,
        "decider": check_json(&r.decider),
        "oracle": check_json(&r.oracle),
    })
}

/// Whether the instance is decided without a tolerance.
fn instance_mode(inst: &ReductionInstance) -> Mode {
    let exact = |x: &PartialVector| EdgeAngles::from_cosines(x).is_exact();
    match (&inst.source, &inst.data) {
        (Source::Cosines { x, .. }, crate::reduction::Produced::Vector(xhat)) if !(exact(x) && exact(xhat)) => {
            Mode::Float
        }
        _ => Mode::Exact,
    }
}

fn verify_options(s: &Settings) -> VerifyOptions {
    VerifyOptions { budget: s.max_branch.unwrap_or(crate::reduction::DEFAULT_BUDGET), tol: s.tol }
}

fn run_verify(doc: &Document, s: &Settings) -> Run<Decided> {
    let inst = instance_from_json(&doc.raw)?;
    let report = crate::reduction::verify_reduction(&inst, &verify_options(s))?;
    let verdict = if report.agree { Verdict::Agree } else { Verdict::Disagree };
    Ok(Decided::new(verdict, instance_mode(&inst), report_json(&report)))
}

fn seeded_corpus(seed: u64, count: usize) -> Run<Vec<ReductionInstance>> {
    use rand::Rng;
    let mut rng = corpus::rng(seed);
    let mut out = Vec::with_capacity(6 * count);
    for _ in 0..count {
        let len = rng.gen_range(1..=8);
        let a: Vec<u64> = (0..len).map(|_| rng.gen_range(1..=6)).collect();
        out.push(reduce_partition_to_ed1(&a)?);
        out.push(reduce_partition_to_gd2(&a)?);
    }
    for _ in 0..count {
        let n = rng.gen_range(3..=6);
        let g = corpus::random_connected_graph(&mut rng, n, 0.4);
        let d = corpus::random_weights(&mut rng, &g);
        out.push(reduce_saxe_to_gd2(&g, &d)?);
    }
    let gadget = Gadget::new(Graph::path(3), 0, 2)?;
    for _ in 0..count {
        let n = rng.gen_range(2..=5);
        let g = corpus::random_graph(&mut rng, n, 0.6);
        let k = rng.gen_range(3..=4);
        out.push(build_coloring_instance(&g, &gadget, k)?);
    }
    for _ in 0..count {
        let n = rng.gen_range(2..=5);
        let g = corpus::random_graph(&mut rng, n, 0.5);
        out.push(build_saxe_edk_instance(&g, rng.gen_range(3..=4))?);
    }
    for _ in 0..count {
        let n = rng.gen_range(3..=6);
        let g = corpus::random_connected_graph(&mut rng, n, 0.4);
        let planted = rng.gen_bool(0.5);
        let x = corpus::random_rotation_cosines(&mut rng, &g, planted);
        out.push(hat_lift(&g, &x)?);
    }
    Ok(out)
}

fn verify_corpus(seed: u64, s: &Settings) -> Run<Decided> {
    let instances = seeded_corpus(seed, s.count)?;
    let results = verify_many(&instances, &verify_options(s));
    let mut items = Vec::with_capacity(results.len());
    let (mut agree, mut disagree, mut ambiguous) = (0usize, 0usize, 0usize);
    let mut mode = Mode::Exact;
    for (inst, r) in instances.iter().zip(results) {
        if instance_mode(inst) == Mode::Float {
            mode = Mode::Float;
        }
        match r {
            Ok(r) => {
                if r.agree {
                    agree += 1;
                } else {
                    disagree += 1;
                }
                let mut item = report_json(&r);
                item["instance"] = instance_to_json(inst);
                items.push(item);
            }
            Err(Error::ToleranceAmbiguous(msg)) => {
                ambiguous += 1;
                items.push(json!({ "kind": inst.kind.as_str(), "ambiguous": msg, "instance": instance_to_json(inst) }));
            }
            Err(e) => return Err(e.into()),
        }
    }
    let verdict = if disagree > 0 {
        Verdict::Disagree
    } else if ambiguous > 0 {
        Verdict::Ambiguous
    } else {
        Verdict::Agree
    };
    Ok(Decided::new(
        verdict,
        mode,
        json!({
            "seed": seed.to_string(),
            "instances": items.len(),
            "agree": agree,
            "disagree": disagree,
            "ambiguous": ambiguous,
            "reports": items,
        }),
    ))
}
