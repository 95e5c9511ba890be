use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::{Ctx, ElemSpec, LambdaSpec, Outcome};
use crate::catalog::{build, CurveId, CurveParams};
use crate::error::{Error, Result};
use crate::geometry::{singular_points, Line, Point, SingularityReport};
use crate::gf::{Elem, Field};
use crate::groups::{generators, GroupId};
use crate::invariance::{certify, cocycle_agreements};
use crate::mpoly::MultiPoly;

pub const COCYCLE_WORDS: usize = 100;
pub const MAX_WORD_LEN: usize = 6;

/// A stable seed derived from a check name, so reruns draw the same words.
pub fn seed_of(name: &str) -> u64 {
    name.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3))
}

pub fn random_words(seed: u64, ngens: usize, count: usize) -> Vec<Vec<usize>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let len = rng.gen_range(1..=MAX_WORD_LEN);
            (0..len).map(|_| rng.gen_range(0..ngens)).collect()
        })
        .collect()
}

pub fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn lcm(a: u32, b: u32) -> u32 {
    a / gcd(a, b) * b
}

pub fn fmt_point(field: &Field, p: &[Elem; 3]) -> String {
    let c: Vec<String> = p.iter().map(|&e| field.format_elem(e)).collect();
    format!("({}:{}:{})", c[0], c[1], c[2])
}

pub fn fmt_line(field: &Field, l: &Line) -> String {
    let c: Vec<String> = l.iter().map(|&e| field.format_elem(e)).collect();
    format!("[{},{},{}]", c[0], c[1], c[2])
}

/// The field holding the matrix entries of `id`.
pub fn group_field(ctx: &Ctx, id: GroupId) -> Result<Field> {
    ctx.field_of_order(id.entry_field_order(), 1)
}

/// Certify `f` against the generators of `id`, then spot-check the scalar
/// cocycle on random generator words when the verdict is positive.
pub fn invariance_outcome(ctx: &Ctx, label: &str, f: &MultiPoly, id: GroupId, expect: bool) -> Result<Outcome> {
    let field = f.field();
    let gens = generators(field, id)?;
    ctx.record_generators(id, &gens);
    let cert = certify(label, f, id, &gens)?;
    let mut detail = json!({ "expected": expect, "certificate": cert.to_json() });
    let mut passed = cert.verdict == expect;
    if cert.verdict {
        let scalars: Vec<Elem> = cert.per_generator.iter().map(|g| g.scalar.expect("verdict implies scalars")).collect();
        let words = random_words(seed_of(label), gens.len(), COCYCLE_WORDS);
        let agree = cocycle_agreements(f, &gens, &scalars, &words)?;
        detail["cocycle"] = json!({ "words": words.len(), "agreements": agree });
        passed &= agree == words.len();
    } else {
        detail["failing_generators"] = json!(cert.failing());
    }
    Ok(Outcome::new(passed, detail))
}

/// Build a catalog curve over the entry field of `id` and certify it.
pub fn catalog_invariance(
    ctx: &Ctx,
    curve: CurveId,
    params: CurveParams,
    id: GroupId,
    expect: bool,
) -> Result<Outcome> {
    let field = group_field(ctx, id)?;
    let spec = build(&field, curve, &params)?;
    let label = format!("{}/{}", spec.label(), id.kind.name());
    let mut out = invariance_outcome(ctx, &label, &spec.poly, id, expect)?;
    out.detail["degree"] = json!(spec.expected_degree);
    Ok(out)
}

/// The parameter values a branching check runs on: the defaults, every
/// admissible element under `scan`, or the single requested value.
pub fn lambda_values(
    spec: Option<LambdaSpec>,
    field: &Field,
    sub: u32,
    defaults: Vec<Elem>,
    admissible: impl Fn(Elem) -> bool,
) -> Result<Vec<Elem>> {
    match spec {
        None | Some(LambdaSpec::Symbolic) => Ok(defaults),
        Some(LambdaSpec::Scan) => Ok(field.subfield_elements(sub)?.into_iter().filter(|&l| admissible(l)).collect()),
        Some(LambdaSpec::Value(v)) => {
            let l = resolve_lambda(v, field, sub)?;
            if !admissible(l) {
                return Err(Error::InvalidParameter(format!("lambda {v} is excluded for this check")));
            }
            Ok(vec![l])
        }
    }
}

pub fn resolve_lambda(v: ElemSpec, field: &Field, sub: u32) -> Result<Elem> {
    v.resolve(field, sub)
}

pub struct ScanLevel {
    pub m: u32,
    pub field: Field,
    /// The member itself, moved into `field`.
    pub member: MultiPoly,
    pub reports: Vec<SingularityReport>,
}

/// Singular points of one member, over GF(q^m) for `m = 1..=ext`.
///
/// `poly` may contain `L`; for each `m` it is moved into the smallest field
/// containing both its own field and GF(q^m).
pub fn scan_singular(ctx: &Ctx, poly: &MultiPoly, lambda: Elem, q: u64, ext: u32) -> Result<Vec<ScanLevel>> {
    let base = poly.field();
    let p = base.characteristic();
    let h = base.subfield_degree_of_order(q)?;
    let mut out = Vec::new();
    for m in 1..=ext {
        let deg = lcm(base.degree(), h * m);
        if (p as f64).powi(deg as i32) > (1u64 << 30) as f64 {
            return Err(Error::FieldTooLarge { p, k: deg });
        }
        let target = ctx.field(p, deg)?;
        let img = base.embedding_into(&target)?;
        let g = poly.embed(&target, img);
        let lam = base.map_into(&target, img, lambda);
        let member = g.specialize_lambda(lam);
        let reports = singular_points(&member, h * m, None)?;
        out.push(ScanLevel { m, field: target, member, reports });
    }
    Ok(out)
}

pub fn report_json(field: &Field, r: &SingularityReport) -> Value {
    json!({
        "point": fmt_point(field, &r.point),
        "multiplicity": r.multiplicity,
        "tangents": r.tangents.iter().map(|(l, k)| json!({ "line": fmt_line(field, l), "mult": k })).collect::<Vec<_>>(),
        "unsplit": r.unsplit,
    })
}

pub fn point_in_subfield(field: &Field, p: &Point, sub: u32) -> Result<bool> {
    for &c in p {
        if !field.is_in_subfield(c, sub)? {
            return Ok(false);
        }
    }
    Ok(true)
}
