//! Command-line front end: JSON documents for complexes and maps, one
//! subcommand per operation, and the randomized `verify` suite.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Read;
use std::ops::RangeInclusive;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::abelian::FgAbGroup;
use crate::complexes::{tensor, ChainComplex, ChainMap};
use crate::error::Error;
use crate::factor::{factor_acf_fib, factor_cof_afb, gamma, SummandLayout};
use crate::intlinalg::{snf, IntMatrix};
use crate::lifting::{solve_lift, LiftProblem, LiftRoute};
use crate::modelcls::classify;
use crate::pushout::{check_proper, pushout_product, ProperSquare};
use crate::random::GenConfig;
use crate::verify::{run_all, VerifyConfig, SCHEMA_VERSION};

pub const DEFAULT_MAX_RANK: usize = 64;

// ---------------------------------------------------------------------------
// documents

/// Row-major matrix of decimal strings. Integers are accepted on input.
pub type MatrixDoc = Vec<Vec<Value>>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupDoc {
    pub generators: usize,
    #[serde(default)]
    pub relations: MatrixDoc,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexDocument {
    pub schema_version: String,
    /// `[lo, hi]`; `hi < lo` is the zero complex.
    pub support: [i32; 2],
    pub groups: BTreeMap<i32, GroupDoc>,
    /// `d_n: C_n → C_{n−1}`; missing degrees are zero.
    #[serde(default)]
    pub differentials: BTreeMap<i32, MatrixDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum ComplexRef {
    Inline(ComplexDocument),
    File { file: String },
}

// serde's untagged buffering cannot read the integer-keyed maps, so dispatch by hand
impl<'de> Deserialize<'de> for ComplexRef {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let v = Value::deserialize(d)?;
        match v.get("file") {
            Some(Value::String(f)) if v.as_object().is_some_and(|o| o.len() == 1) => Ok(ComplexRef::File { file: f.clone() }),
            _ => serde_json::from_value(v).map(ComplexRef::Inline).map_err(D::Error::custom),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MapDocument {
    pub schema_version: String,
    pub source: ComplexRef,
    pub target: ComplexRef,
    /// `f_n: A_n → B_n`; missing degrees are zero.
    #[serde(default)]
    pub components: BTreeMap<i32, MatrixDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SquareDocument {
    pub schema_version: String,
    pub i: MapDocument,
    pub q: MapDocument,
    pub f: MapDocument,
    pub g: MapDocument,
}

/// Failure of a command, carrying its exit code.
#[derive(Debug)]
pub enum CliError {
    /// Exit 2: malformed input or a violated precondition.
    Input(Value),
    /// Exit 1: a mathematical check failed; the value is the certificate.
    Math(Value),
}

impl CliError {
    fn input(kind: &str, message: impl Into<String>) -> Self {
        CliError::Input(json!({"error": kind, "message": message.into()}))
    }

    fn code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Math(_) => 1,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let degree = match &e {
            Error::NotAComplex { degree }
            | Error::NotAChainMap { degree }
            | Error::NotFree { degree }
            | Error::NotAcyclic { degree }
            | Error::NotContractible { degree } => Some(*degree),
            _ => None,
        };
        let kind = match &e {
            Error::DimensionMismatch(_) => "dimension_mismatch",
            Error::IllDefined(_) => "ill_defined_hom",
            Error::NotAComplex { .. } => "d_squared_nonzero",
            Error::NotAChainMap { .. } => "not_a_chain_map",
            Error::NotFree { .. } => "not_free",
            Error::NotAcyclic { .. } => "not_acyclic",
            Error::NotAcyclicFibration(_) => "not_acyclic_fibration",
            Error::NotContractible { .. } => "not_contractible",
            Error::InfiniteGroup { .. } => "infinite_group",
            Error::NotMonoNotEpi(_) => "not_mono_not_epi",
            Error::NotASplitting(_) => "not_a_splitting",
            Error::NotLiftable(_) => "not_liftable",
            Error::NotCofibration(_) => "not_cofibration",
            Error::PreconditionFailed(_) => "precondition_failed",
            Error::CertificateFailed(_) => "certificate_failed",
            Error::RankLimit { .. } => "rank_limit",
        };
        let mut v = json!({"error": kind, "message": e.to_string()});
        if let Some(d) = degree {
            v["degree"] = json!(d);
        }
        match e {
            Error::CertificateFailed(_) => CliError::Math(v),
            _ => CliError::Input(v),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn matrix_to_doc(m: &IntMatrix) -> MatrixDoc {
    (0..m.rows()).map(|r| m.row(r).iter().map(|x| Value::String(x.to_string())).collect()).collect()
}

fn entry(v: &Value) -> CliResult<BigInt> {
    match v {
        Value::String(s) => s.trim().parse().map_err(|_| CliError::input("bad_entry", format!("not an integer: {s:?}"))),
        Value::Number(n) if n.is_i64() || n.is_u64() => Ok(n.to_string().parse().expect("integer literal")),
        other => Err(CliError::input("bad_entry", format!("not an integer: {other}"))),
    }
}

/// Parses a matrix of the expected shape; an empty array stands for any matrix with no entries.
fn matrix_from_doc(doc: &MatrixDoc, rows: usize, cols: usize, what: &str) -> CliResult<IntMatrix> {
    if doc.is_empty() && (rows == 0 || cols == 0) {
        return Ok(IntMatrix::zeros(rows, cols));
    }
    if doc.len() != rows || doc.iter().any(|r| r.len() != cols) {
        return Err(CliError::input(
            "shape_mismatch",
            format!("{what}: expected a {rows}×{cols} matrix"),
        ));
    }
    let data = doc.iter().flatten().map(entry).collect::<CliResult<Vec<_>>>()?;
    Ok(IntMatrix::from_vec(rows, cols, data))
}

/// Parses a bare matrix (rows inferred from the array).
fn bare_matrix(doc: &MatrixDoc) -> CliResult<IntMatrix> {
    let cols = doc.first().map_or(0, Vec::len);
    matrix_from_doc(doc, doc.len(), cols, "matrix")
}

impl ComplexDocument {
    pub fn from_complex(c: &ChainComplex) -> Self {
        let (lo, hi) = c.support().unwrap_or((0, -1));
        let groups = (lo..=hi)
            .map(|n| {
                let g = c.group(n);
                (n, GroupDoc { generators: g.ngens(), relations: matrix_to_doc(g.relations()) })
            })
            .collect();
        let differentials = (lo + 1..=hi).map(|n| (n, matrix_to_doc(c.diff(n).matrix()))).collect();
        ComplexDocument { schema_version: SCHEMA_VERSION.into(), support: [lo, hi], groups, differentials }
    }

    pub fn to_complex(&self) -> CliResult<ChainComplex> {
        check_schema(&self.schema_version)?;
        let [lo, hi] = self.support;
        let window = lo..=hi;
        if let Some(n) = self.groups.keys().find(|n| !window.contains(n)) {
            return Err(support_mismatch(*n, "group outside the support"));
        }
        if let Some(n) = self.differentials.keys().find(|&&n| !(lo + 1..=hi).contains(&n)) {
            return Err(support_mismatch(*n, "differential outside the support"));
        }
        let mut groups = Vec::new();
        for n in window {
            let doc = self.groups.get(&n).ok_or_else(|| support_mismatch(n, "missing group"))?;
            let cols = doc.relations.first().map_or(0, Vec::len);
            let rel = matrix_from_doc(&doc.relations, doc.generators, cols, &format!("relations in degree {n}"))?;
            groups.push(FgAbGroup::new(doc.generators, rel).map_err(|e| with_degree(e.into(), n))?);
        }
        let mut diffs = Vec::new();
        for n in lo + 1..=hi {
            let (rows, cols) = (groups[(n - 1 - lo) as usize].ngens(), groups[(n - lo) as usize].ngens());
            let m = match self.differentials.get(&n) {
                Some(doc) => matrix_from_doc(doc, rows, cols, &format!("differential in degree {n}"))?,
                None => IntMatrix::zeros(rows, cols),
            };
            // well-definedness is a property of each d_n on its own
            crate::abelian::GroupHom::new(&groups[(n - lo) as usize], &groups[(n - 1 - lo) as usize], m.clone())
                .map_err(|e| with_degree(e.into(), n))?;
            diffs.push(m);
        }
        if groups.is_empty() {
            return Ok(ChainComplex::zero());
        }
        Ok(ChainComplex::new(lo, groups, diffs)?)
    }
}

fn check_schema(v: &str) -> CliResult<()> {
    if v == SCHEMA_VERSION {
        Ok(())
    } else {
        Err(CliError::input("schema_version", format!("expected {SCHEMA_VERSION:?}, found {v:?}")))
    }
}

fn support_mismatch(n: i32, what: &str) -> CliError {
    CliError::Input(json!({"error": "support_mismatch", "degree": n, "message": what}))
}

fn with_degree(mut e: CliError, n: i32) -> CliError {
    {
        let (CliError::Input(v) | CliError::Math(v)) = &mut e;
        v["degree"] = json!(n);
    }
    e
}

fn resolve_ref(r: &ComplexRef) -> CliResult<ChainComplex> {
    match r {
        ComplexRef::Inline(doc) => doc.to_complex(),
        ComplexRef::File { file } => parse_json::<ComplexDocument>(&read_input(file)?)?.to_complex(),
    }
}

impl MapDocument {
    pub fn from_map(f: &ChainMap) -> Self {
        let components = match f.window() {
            Some((lo, hi)) => (lo..=hi).map(|n| (n, matrix_to_doc(f.component(n).matrix()))).collect(),
            None => BTreeMap::new(),
        };
        MapDocument {
            schema_version: SCHEMA_VERSION.into(),
            source: ComplexRef::Inline(ComplexDocument::from_complex(f.src())),
            target: ComplexRef::Inline(ComplexDocument::from_complex(f.dst())),
            components,
        }
    }

    pub fn to_map(&self) -> CliResult<ChainMap> {
        check_schema(&self.schema_version)?;
        let (a, b) = (resolve_ref(&self.source)?, resolve_ref(&self.target)?);
        let window = crate::complexes::union_window(a.support(), b.support());
        let inside = |n: i32| window.is_some_and(|(lo, hi)| (lo..=hi).contains(&n));
        if let Some(n) = self.components.keys().find(|&&n| !inside(n)) {
            return Err(support_mismatch(*n, "component outside both supports"));
        }
        let mut comps = BTreeMap::new();
        for (&n, doc) in &self.components {
            let m = matrix_from_doc(doc, b.ngens(n), a.ngens(n), &format!("component in degree {n}"))?;
            crate::abelian::GroupHom::new(&a.group(n), &b.group(n), m.clone()).map_err(|e| with_degree(e.into(), n))?;
            comps.insert(n, m);
        }
        Ok(ChainMap::from_fn(&a, &b, |n| comps.get(&n).cloned().unwrap_or_else(|| IntMatrix::zeros(b.ngens(n), a.ngens(n))))?)
    }
}

fn layout_json(l: &SummandLayout) -> Value {
    let degrees: Vec<Value> = l
        .degrees
        .iter()
        .enumerate()
        .map(|(k, d)| {
            let blocks: Vec<Value> =
                d.blocks.iter().map(|(s, r)| json!({"summand": s.to_string(), "rank": r})).collect();
            json!({"degree": l.lo + k as i32, "blocks": blocks})
        })
        .collect();
    Value::Array(degrees)
}

// ---------------------------------------------------------------------------
// command line

#[derive(Parser, Debug)]
#[command(name = "zchain", version, about = "Exact homological algebra of chain complexes of abelian groups")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// cofibration followed by an acyclic fibration
    CofAcf,
    /// acyclic cofibration followed by a fibration
    AcfFib,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ProperKind {
    Pushout,
    Pullback,
}

/// Inputs are file paths; `-` reads standard input.
#[derive(Subcommand, Debug)]
pub enum Command {
    /// Homology groups of a complex
    Homology { complex: String },
    /// Model-structure classification of a chain map
    Classify { map: String },
    /// Functorial factorization of a chain map
    Factorize {
        #[arg(long, value_enum)]
        mode: Mode,
        map: String,
    },
    /// Free resolution Γ(B) → B
    Resolve { complex: String },
    /// Diagonal filler of a lifting square {i, q, f, g}
    Lift { square: String },
    /// Tensor product of two complexes
    Tensor { left: String, right: String },
    /// Pushout-product of two cofibrations
    PushoutProduct { i: String, j: String },
    /// Left properness (pushout of f along i) or right properness (pullback of g along q)
    ProperCheck {
        #[arg(long, value_enum)]
        kind: ProperKind,
        /// i (pushout) or q (pullback)
        along: String,
        /// the weak equivalence f (pushout) or g (pullback)
        weq: String,
    },
    /// Smith normal form of an integer matrix (bare JSON array of rows)
    Snf { matrix: String },
    /// Randomized verification of the model axioms
    Verify {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        cases: usize,
        #[arg(long, default_value_t = 16)]
        max_order: u64,
        #[arg(long, default_value = "-3..4", value_parser = parse_degrees)]
        degrees: RangeInclusive<i32>,
    },
}

fn parse_degrees(s: &str) -> std::result::Result<RangeInclusive<i32>, String> {
    let (a, b) = s.split_once("..").ok_or("expected LO..HI")?;
    let lo: i32 = a.trim().parse().map_err(|_| format!("bad lower degree {a:?}"))?;
    let hi: i32 = b.trim().parse().map_err(|_| format!("bad upper degree {b:?}"))?;
    if hi < lo {
        return Err("empty degree range".into());
    }
    Ok(lo..=hi)
}

fn read_input(path: &str) -> CliResult<String> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| CliError::input("io", format!("stdin: {e}")))?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| CliError::input("io", format!("{path}: {e}")))
    }
}

fn parse_json<T: for<'de> Deserialize<'de>>(s: &str) -> CliResult<T> {
    serde_json::from_str(s).map_err(|e| CliError::input("parse", e.to_string()))
}

fn load_complex(path: &str) -> CliResult<ChainComplex> {
    parse_json::<ComplexDocument>(&read_input(path)?)?.to_complex()
}

fn load_map(path: &str) -> CliResult<ChainMap> {
    parse_json::<MapDocument>(&read_input(path)?)?.to_map()
}

struct RankGuard {
    limit: usize,
}

impl RankGuard {
    fn from_env() -> CliResult<Self> {
        match std::env::var("ZCHAIN_MAX_RANK") {
            Err(_) => Ok(RankGuard { limit: DEFAULT_MAX_RANK }),
            Ok(s) => s
                .trim()
                .parse()
                .map(|limit| RankGuard { limit })
                .map_err(|_| CliError::input("bad_env", format!("ZCHAIN_MAX_RANK={s:?} is not a count"))),
        }
    }

    fn check(&self, rank: usize) -> CliResult<()> {
        if rank > self.limit {
            Err(Error::RankLimit { rank, limit: self.limit }.into())
        } else {
            Ok(())
        }
    }

    fn complex(&self, c: &ChainComplex) -> CliResult<()> {
        c.degrees().try_for_each(|n| self.check(c.ngens(n)))
    }

    fn tensor(&self, a: &ChainComplex, b: &ChainComplex) -> CliResult<()> {
        let (Some((alo, ahi)), Some((blo, bhi))) = (a.support(), b.support()) else { return Ok(()) };
        for n in alo + blo..=ahi + bhi {
            self.check((alo..=ahi).map(|p| a.ngens(p) * b.ngens(n - p)).sum())?;
        }
        Ok(())
    }

    /// Rank of `I(C_n)` is `|C_n| − 1`; refuse before materializing it.
    fn group_rings(&self, c: &ChainComplex) -> CliResult<()> {
        for n in c.degrees() {
            if let Some(order) = c.group(n).order() {
                let rank = usize::try_from(order - 1).unwrap_or(usize::MAX);
                self.check(rank)?;
            }
        }
        Ok(())
    }
}

fn labels_json(c: &crate::modelcls::MapClassification) -> Value {
    serde_json::to_value(c).expect("classification serializes")
}

fn execute(cli: &Cli, guard: &RankGuard) -> CliResult<Value> {
    match &cli.command {
        Command::Homology { complex } => {
            let c = load_complex(complex)?;
            guard.complex(&c)?;
            let degrees: Vec<Value> = c
                .degrees()
                .map(|n| {
                    let h = c.homology(n).group;
                    let tors: Vec<String> = h.invariant_factors().iter().map(|d| d.to_string()).collect();
                    json!({"degree": n, "group": h.to_string(), "free_rank": h.free_rank(), "torsion": tors})
                })
                .collect();
            Ok(json!({"schema_version": SCHEMA_VERSION, "homology": degrees}))
        }
        Command::Classify { map } => {
            let f = load_map(map)?;
            Ok(labels_json(&classify(&f)))
        }
        Command::Factorize { mode, map } => {
            let f = load_map(map)?;
            guard.group_rings(f.src())?;
            guard.group_rings(f.dst())?;
            let fac = match mode {
                Mode::CofAcf => factor_cof_afb(&f)?,
                Mode::AcfFib => factor_acf_fib(&f)?,
            };
            guard.complex(&fac.middle)?;
            let cert = fac.certificate.as_ref().expect("certified at construction");
            Ok(json!({
                "schema_version": SCHEMA_VERSION,
                "mode": match mode { Mode::CofAcf => "cof-acf", Mode::AcfFib => "acf-fib" },
                "middle": ComplexDocument::from_complex(&fac.middle),
                "layout": layout_json(&fac.layout),
                "left": MapDocument::from_map(&fac.left),
                "right": MapDocument::from_map(&fac.right),
                "certificate": {
                    "composite_equals": cert.composite_equals,
                    "left": labels_json(&cert.left),
                    "right": labels_json(&cert.right),
                },
            }))
        }
        Command::Resolve { complex } => {
            let b = load_complex(complex)?;
            guard.group_rings(&b)?;
            let g = gamma(&b)?;
            guard.complex(&g.complex)?;
            Ok(json!({
                "schema_version": SCHEMA_VERSION,
                "gamma": ComplexDocument::from_complex(&g.complex),
                "layout": layout_json(&g.layout),
                "p": MapDocument::from_map(&g.p),
            }))
        }
        Command::Lift { square } => {
            let doc: SquareDocument = parse_json(&read_input(square)?)?;
            check_schema(&doc.schema_version)?;
            let (i, q, f, g) = (doc.i.to_map()?, doc.q.to_map()?, doc.f.to_map()?, doc.g.to_map()?);
            for c in [i.dst(), q.src(), q.dst()] {
                guard.complex(c)?;
            }
            let problem = LiftProblem::new(i, q, f, g)?;
            let lift = solve_lift(&problem)?;
            if !problem.is_solution(&lift.h) {
                return Err(CliError::Math(json!({
                    "error": "lift_failed",
                    "h": MapDocument::from_map(&lift.h),
                })));
            }
            let route = match lift.route {
                LiftRoute::CofibrationVsAcyclicFibration => "cofibration_vs_acyclic_fibration",
                LiftRoute::AcyclicCofibrationVsFibration => "acyclic_cofibration_vs_fibration",
            };
            Ok(json!({"schema_version": SCHEMA_VERSION, "route": route, "h": MapDocument::from_map(&lift.h)}))
        }
        Command::Tensor { left, right } => {
            let (a, b) = (load_complex(left)?, load_complex(right)?);
            guard.tensor(&a, &b)?;
            Ok(serde_json::to_value(ComplexDocument::from_complex(&tensor(&a, &b))).expect("serializes"))
        }
        Command::PushoutProduct { i, j } => {
            let (i, j) = (load_map(i)?, load_map(j)?);
            guard.tensor(i.dst(), j.dst())?;
            let cert = pushout_product(&i, &j)?;
            let out = json!({
                "schema_version": SCHEMA_VERSION,
                "pushout": ComplexDocument::from_complex(&cert.pushout.complex),
                "k": MapDocument::from_map(&cert.k),
                "k_classification": labels_json(&cert.k_class),
                "coker_iso_tensor": cert.m_iso,
                "acyclic_factor": cert.acyclic_factor,
                "holds": cert.holds(),
            });
            if cert.holds() {
                Ok(out)
            } else {
                Err(CliError::Math(out))
            }
        }
        Command::ProperCheck { kind, along, weq } => {
            let (x, w) = (load_map(along)?, load_map(weq)?);
            let square = match kind {
                ProperKind::Pushout => ProperSquare::Pushout { i: x, f: w },
                ProperKind::Pullback => ProperSquare::Pullback { q: x, g: w },
            };
            let rep = check_proper(&square)?;
            let out = json!({
                "schema_version": SCHEMA_VERSION,
                "opposite": MapDocument::from_map(&rep.opposite),
                "opposite_quasi_iso": rep.opposite_quasi_iso,
                "ladder": rep.ladder,
            });
            if rep.opposite_quasi_iso {
                Ok(out)
            } else {
                Err(CliError::Math(out))
            }
        }
        Command::Snf { matrix } => {
            let m = bare_matrix(&parse_json::<MatrixDoc>(&read_input(matrix)?)?)?;
            guard.check(m.rows().max(m.cols()))?;
            let s = snf(&m);
            let diag: Vec<String> = s.diagonal().iter().map(|d| d.to_string()).collect();
            Ok(json!({
                "rank": s.rank,
                "invariant_factors": diag,
                "d": matrix_to_doc(&s.d),
                "u": matrix_to_doc(&s.u),
                "v": matrix_to_doc(&s.v),
            }))
        }
        Command::Verify { seed, cases, max_order, degrees } => {
            let cfg = VerifyConfig {
                seed: *seed,
                cases: *cases,
                gen: GenConfig { lo: *degrees.start(), hi: *degrees.end(), max_order: *max_order, ..GenConfig::default() },
            };
            guard.check(usize::try_from(max_order.saturating_sub(1)).unwrap_or(usize::MAX))?;
            let report = run_all(&cfg);
            let out = serde_json::to_value(&report).expect("report serializes");
            if report.all_passed {
                Ok(out)
            } else {
                Err(CliError::Math(out))
            }
        }
    }
}

/// Result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let result = RankGuard::from_env().and_then(|g| execute(&cli, &g));
    let render = |v: &Value| match cli.format {
        Format::Json => serde_json::to_string_pretty(v).expect("json") + "\n",
        Format::Text => to_text(&cli.command, v),
    };
    match result {
        Ok(v) => Outcome { code: 0, stdout: render(&v), stderr: String::new() },
        // a failed check still prints its certificate on stdout
        Err(CliError::Math(v)) => Outcome { code: 1, stdout: render(&v), stderr: String::new() },
        Err(e @ CliError::Input(_)) => {
            let CliError::Input(v) = &e else { unreachable!() };
            Outcome { code: e.code(), stdout: String::new(), stderr: serde_json::to_string(v).expect("json") + "\n" }
        }
    }
}

fn to_text(cmd: &Command, v: &Value) -> String {
    match cmd {
        Command::Verify { .. } => match serde_json::from_value::<TextReport>(v.clone()) {
            Ok(r) => r.render(),
            Err(_) => generic_text(v, 0),
        },
        Command::Homology { .. } => v["homology"]
            .as_array()
            .map(|rows| {
                rows.iter()
                    .map(|r| format!("H_{} = {}\n", r["degree"], r["group"].as_str().unwrap_or("?")))
                    .collect()
            })
            .unwrap_or_default(),
        _ => generic_text(v, 0),
    }
}

#[derive(Deserialize)]
struct TextReport {
    seed: u64,
    cases: usize,
    max_order: u64,
    degrees: [i32; 2],
    suites: Vec<TextSuite>,
}

#[derive(Deserialize)]
struct TextSuite {
    axiom: String,
    cases: usize,
    passed: usize,
    failures: Vec<TextFailure>,
}

#[derive(Deserialize)]
struct TextFailure {
    case: usize,
    detail: String,
}

impl TextReport {
    fn render(&self) -> String {
        let mut out = format!(
            "seed {}  cases {}  max-order {}  degrees {}..{}\n",
            self.seed, self.cases, self.max_order, self.degrees[0], self.degrees[1]
        );
        for s in &self.suites {
            let status = if s.passed == s.cases { "PASS" } else { "FAIL" };
            out += &format!("{:<24} {:>5}/{:<5} {}\n", s.axiom, s.passed, s.cases, status);
            for f in &s.failures {
                out += &format!("    case {}: {}\n", f.case, f.detail);
            }
        }
        out
    }
}

/// Indented `key: value` rendering; rows of matrices stay on one line.
fn generic_text(v: &Value, indent: usize) -> String {
    let pad = "  ".repeat(indent);
    let inline = |v: &Value| -> Option<String> {
        match v {
            Value::Array(a) if a.iter().all(|x| !x.is_object() && !x.is_array()) => Some(
                format!("[{}]", a.iter().map(scalar).collect::<Vec<_>>().join(", ")),
            ),
            Value::Object(_) | Value::Array(_) => None,
            other => Some(scalar(other)),
        }
    };
    let mut out = String::new();
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                match inline(x) {
                    Some(s) => out += &format!("{pad}{k}: {s}\n"),
                    None => out += &format!("{pad}{k}:\n{}", generic_text(x, indent + 1)),
                }
            }
        }
        Value::Array(a) => {
            for x in a {
                match inline(x) {
                    Some(s) => out += &format!("{pad}{s}\n"),
                    None => out += &format!("{pad}-\n{}", generic_text(x, indent + 1)),
                }
            }
        }
        other => out += &format!("{pad}{}\n", scalar(other)),
    }
    out
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
