//! Named verification suites: each runs a fixed list of independent checks
//! and collects them into a [`Report`].
//!
//! Invariance checks always certify the symbolic pencil, which covers every
//! member at once. `--lambda` only steers the checks that branch on the
//! parameter (singularity scans and Frobenius scans); its `g^j` form refers
//! to the generator of the suite's parameter field, listed in [`SuiteId::lambda_field`].

mod algebra;
mod common;
mod invariant;
mod pencils;
mod points;

pub use points::dgz_expected;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Mutex;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use crate::catalog::prime_power;
use crate::error::{Error, Result};
use crate::geometry::PointCount;
use crate::gf::{Elem, Field};
use crate::groups::{GeneratorSet, GroupId, Projectivity};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SuiteId {
    DgzPoints,
    Pgl3Invariance,
    AglPencil,
    DualAglPencil,
    PguPencil,
    SingerNet,
    Triangle,
    Pgl2Pencil,
    Hemisystem,
    FrobeniusNc,
    GroupOrders,
    QuotientIdentities,
    InvariantSpaces,
}

impl SuiteId {
    pub const ALL: [SuiteId; 13] = [
        SuiteId::DgzPoints,
        SuiteId::Pgl3Invariance,
        SuiteId::AglPencil,
        SuiteId::DualAglPencil,
        SuiteId::PguPencil,
        SuiteId::SingerNet,
        SuiteId::Triangle,
        SuiteId::Pgl2Pencil,
        SuiteId::Hemisystem,
        SuiteId::FrobeniusNc,
        SuiteId::GroupOrders,
        SuiteId::QuotientIdentities,
        SuiteId::InvariantSpaces,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SuiteId::DgzPoints => "dgz-points",
            SuiteId::Pgl3Invariance => "pgl3-invariance",
            SuiteId::AglPencil => "agl-pencil",
            SuiteId::DualAglPencil => "dual-agl-pencil",
            SuiteId::PguPencil => "pgu-pencil",
            SuiteId::SingerNet => "singer-net",
            SuiteId::Triangle => "triangle",
            SuiteId::Pgl2Pencil => "pgl2-pencil",
            SuiteId::Hemisystem => "hemisystem",
            SuiteId::FrobeniusNc => "frobenius-nc",
            SuiteId::GroupOrders => "group-orders",
            SuiteId::QuotientIdentities => "quotient-identities",
            SuiteId::InvariantSpaces => "invariant-spaces",
        }
    }

    pub fn requires_odd(self) -> bool {
        matches!(self, SuiteId::Pgl2Pencil | SuiteId::Hemisystem | SuiteId::QuotientIdentities)
    }

    /// Whether the suite is sized by `n` (the Hermitian parameter) rather than `q`.
    pub fn uses_n(self) -> bool {
        matches!(self, SuiteId::PguPencil | SuiteId::FrobeniusNc)
    }

    /// Description of the field in which `--lambda g^j` is read.
    pub fn lambda_field(self) -> &'static str {
        match self {
            SuiteId::PguPencil | SuiteId::FrobeniusNc => "GF(n^4)",
            SuiteId::Pgl2Pencil | SuiteId::Hemisystem => "GF(q^2)",
            _ => "unused",
        }
    }

    pub fn default_ext(self) -> u32 {
        match self {
            SuiteId::DgzPoints => 6,
            _ => 4,
        }
    }
}

impl fmt::Display for SuiteId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SuiteId {
    type Err = Error;

    fn from_str(s: &str) -> Result<SuiteId> {
        SuiteId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| Error::Unknown(format!("suite {s}")))
    }
}

/// A field element named independently of any particular field.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElemSpec {
    /// The image of an integer in the prime field.
    Int(i64),
    /// `g^j` for the generator `g` of the parameter field.
    GenPow(u64),
}

impl ElemSpec {
    /// Resolve inside `field`, reading `g` as the generator of GF(p^sub).
    pub fn resolve(self, field: &Field, sub: u32) -> Result<Elem> {
        match self {
            ElemSpec::Int(n) => Ok(field.from_int(n)),
            ElemSpec::GenPow(j) => Ok(field.pow(field.subfield_generator(sub)?, j)),
        }
    }
}

impl fmt::Display for ElemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ElemSpec::Int(n) => write!(f, "{n}"),
            ElemSpec::GenPow(j) => write!(f, "g^{j}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LambdaSpec {
    Symbolic,
    /// Every admissible value in the parameter field.
    Scan,
    Value(ElemSpec),
}

impl FromStr for LambdaSpec {
    type Err = Error;

    /// `symbolic`, `scan`, an integer such as `-1`, or `g^j`.
    fn from_str(s: &str) -> Result<LambdaSpec> {
        let bad = || Error::InvalidParameter(format!("cannot read lambda {s:?}; use symbolic, scan, an integer or g^j"));
        match s {
            "symbolic" | "L" => Ok(LambdaSpec::Symbolic),
            "scan" => Ok(LambdaSpec::Scan),
            _ => {
                if let Some(j) = s.strip_prefix("g^") {
                    return j.parse().map(|j| LambdaSpec::Value(ElemSpec::GenPow(j))).map_err(|_| bad());
                }
                s.parse().map(|n| LambdaSpec::Value(ElemSpec::Int(n))).map_err(|_| bad())
            }
        }
    }
}

impl fmt::Display for LambdaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LambdaSpec::Symbolic => f.write_str("symbolic"),
            LambdaSpec::Scan => f.write_str("scan"),
            LambdaSpec::Value(v) => write!(f, "{v}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SuiteParams {
    pub q: u64,
    pub n: Option<u64>,
    pub lambda: Option<LambdaSpec>,
    pub ext: Option<u32>,
    pub jobs: Option<usize>,
}

impl SuiteParams {
    pub fn new(q: u64) -> SuiteParams {
        SuiteParams { q, ..SuiteParams::default() }
    }
}

/// Parameters after defaults and validation, as echoed in the report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResolvedParams {
    pub q: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    pub lambda: String,
    pub ext: u32,
    pub jobs: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: Value,
    pub elapsed_ms: u128,
}

/// A field used by the suite; `table_line` is the modulus as `p k c_0 .. c_k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FieldRecord {
    pub p: u32,
    pub k: u32,
    pub modulus: String,
    pub table_line: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub schema: u32,
    pub suite: String,
    pub params: ResolvedParams,
    pub fields: Vec<FieldRecord>,
    pub generators: Vec<GeneratorSet>,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub point_counts: Vec<PointCount>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Shared state of one suite run: a field cache and the audit records.
#[derive(Default)]
pub struct Ctx {
    fields: Mutex<BTreeMap<(u32, u32), Field>>,
    generators: Mutex<Vec<GeneratorSet>>,
    points: Mutex<Vec<PointCount>>,
}

impl Ctx {
    pub fn field(&self, p: u32, k: u32) -> Result<Field> {
        let mut cache = self.fields.lock().expect("field cache poisoned");
        if let Some(f) = cache.get(&(p, k)) {
            return Ok(f.clone());
        }
        let f = Field::new(p, k)?;
        cache.insert((p, k), f.clone());
        Ok(f)
    }

    /// The field GF(q^m).
    pub fn field_of_order(&self, q: u64, m: u32) -> Result<Field> {
        let (p, h) = prime_power(q)?;
        self.field(p as u32, h * m)
    }

    pub fn record_generators(&self, id: GroupId, gens: &[Projectivity]) {
        let set = GeneratorSet::new(id, gens);
        let mut all = self.generators.lock().expect("generator log poisoned");
        if !all.contains(&set) {
            all.push(set);
        }
    }

    pub fn record_points(&self, row: PointCount) {
        self.points.lock().expect("point log poisoned").push(row);
    }
}

pub(crate) struct Outcome {
    pub passed: bool,
    pub detail: Value,
}

impl Outcome {
    pub fn new(passed: bool, detail: Value) -> Outcome {
        Outcome { passed, detail }
    }
}

type TaskFn = Box<dyn Fn(&Ctx) -> Result<Outcome> + Send + Sync>;

pub(crate) struct Task {
    pub name: String,
    pub run: TaskFn,
}

impl Task {
    pub fn new(name: impl Into<String>, run: impl Fn(&Ctx) -> Result<Outcome> + Send + Sync + 'static) -> Task {
        Task { name: name.into(), run: Box::new(run) }
    }
}

/// What the suite builders see: validated parameters plus the notes they add.
pub(crate) struct Plan {
    pub q: u64,
    pub p: u64,
    pub h: u32,
    pub n: Option<u64>,
    pub lambda: Option<LambdaSpec>,
    pub ext: u32,
    pub tasks: Vec<Task>,
    pub notes: Vec<String>,
}

impl Plan {
    pub fn add(&mut self, name: impl Into<String>, run: impl Fn(&Ctx) -> Result<Outcome> + Send + Sync + 'static) {
        self.tasks.push(Task::new(name, run));
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }
}

pub fn run_suite(id: SuiteId, params: &SuiteParams) -> Result<Report> {
    run_suite_filtered(id, params, |_| true)
}

/// Run only the checks whose name satisfies `keep`.
pub fn run_suite_filtered(id: SuiteId, params: &SuiteParams, keep: impl Fn(&str) -> bool) -> Result<Report> {
    let (p, h) = prime_power(params.q)?;
    if id.requires_odd() && p == 2 {
        return Err(Error::InvalidParameter(format!("suite {id} requires odd q")));
    }
    let n = if id.uses_n() {
        let n = params.n.unwrap_or(params.q);
        prime_power(n)?;
        if params.q != n && params.q != n * n {
            return Err(Error::InvalidParameter(format!("q={} must be n or n^2 for n={n}", params.q)));
        }
        Some(n)
    } else {
        params.n
    };
    let ext = params.ext.unwrap_or(id.default_ext());
    if ext == 0 {
        return Err(Error::InvalidParameter("--ext must be at least 1".into()));
    }
    let jobs = params.jobs.unwrap_or_else(rayon::current_num_threads).max(1);

    let mut plan = Plan { q: params.q, p, h, n, lambda: params.lambda, ext, tasks: Vec::new(), notes: Vec::new() };
    match id {
        SuiteId::DgzPoints => points::dgz_points(&mut plan)?,
        SuiteId::Pgl3Invariance => invariant::pgl3_invariance(&mut plan)?,
        SuiteId::AglPencil => invariant::agl_pencil(&mut plan)?,
        SuiteId::DualAglPencil => invariant::dual_agl_pencil(&mut plan)?,
        SuiteId::SingerNet => invariant::singer_net(&mut plan)?,
        SuiteId::Triangle => invariant::triangle(&mut plan)?,
        SuiteId::PguPencil => pencils::pgu_pencil(&mut plan)?,
        SuiteId::Pgl2Pencil => pencils::pgl2_pencil(&mut plan)?,
        SuiteId::Hemisystem => pencils::hemisystem(&mut plan)?,
        SuiteId::FrobeniusNc => pencils::frobenius_nc(&mut plan)?,
        SuiteId::GroupOrders => algebra::group_orders(&mut plan)?,
        SuiteId::QuotientIdentities => algebra::quotient_identities(&mut plan)?,
        SuiteId::InvariantSpaces => algebra::invariant_spaces(&mut plan)?,
    }
    if matches!(params.lambda, Some(LambdaSpec::Value(_)) | Some(LambdaSpec::Scan)) && id.lambda_field() == "unused" {
        plan.note(format!("suite {id} does not branch on lambda; --lambda was ignored"));
    }

    let ctx = Ctx::default();
    let tasks: Vec<Task> = plan.tasks.into_iter().filter(|t| keep(&t.name)).collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Unknown(format!("thread pool: {e}")))?;
    let checks: Vec<Check> = pool.install(|| {
        tasks
            .par_iter()
            .map(|t| {
                let start = Instant::now();
                let (passed, detail) = match (t.run)(&ctx) {
                    Ok(o) => (o.passed, o.detail),
                    Err(e) => (false, serde_json::json!({ "error": e.to_string() })),
                };
                Check { name: t.name.clone(), passed, detail, elapsed_ms: start.elapsed().as_millis() }
            })
            .collect()
    });

    let fields = ctx
        .fields
        .into_inner()
        .expect("field cache poisoned")
        .into_values()
        .map(|f| {
            let coeffs: Vec<String> = f.modulus().iter().map(|c| c.to_string()).collect();
            FieldRecord {
                p: f.characteristic(),
                k: f.degree(),
                modulus: f.modulus_string(),
                table_line: format!("{} {} {}", f.characteristic(), f.degree(), coeffs.join(" ")),
            }
        })
        .collect();
    let mut point_counts = ctx.points.into_inner().expect("point log poisoned");
    point_counts.sort_by_key(|r| (r.q, r.m));
    let lambda = params.lambda.map_or_else(|| "default".to_string(), |l| l.to_string());
    Ok(Report {
        schema: 1,
        suite: id.name().to_string(),
        params: ResolvedParams { q: params.q, n, lambda, ext, jobs },
        fields,
        generators: ctx.generators.into_inner().expect("generator log poisoned"),
        checks,
        notes: plan.notes,
        point_counts,
    })
}
