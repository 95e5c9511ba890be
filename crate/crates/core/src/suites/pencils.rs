use rayon::prelude::*;
use serde_json::{json, Value};

use super::common::{
    catalog_invariance, fmt_line, fmt_point, invariance_outcome, lambda_values, point_in_subfield, report_json,
    scan_singular, ScanLevel,
};
use super::{Ctx, Outcome, Plan};
use crate::catalog::{build, gradient, prime_power, CurveId, CurveParams};
use crate::error::Result;
use crate::geometry::{
    count_points, line_intersection_multiplicity, normalize_line, points, rational_points, verify_line_splitting, Line,
};
use crate::gf::{Elem, Field};
use crate::groups::{GroupId, GroupKind};
use crate::mpoly::{Monomial, MultiPoly, Var};
use crate::stohr::{extract_witness, frobenius_check, hefez_voloch_count};

/// Default number of parameter values probed by the nonsingularity checks.
const SAMPLES: u64 = 10;

fn levels_json(levels: &[ScanLevel]) -> Value {
    json!(levels
        .iter()
        .map(|l| json!({
            "m": l.m,
            "singular": l.reports.len(),
            "points": l.reports.iter().take(8).map(|r| report_json(&l.field, r)).collect::<Vec<_>>(),
        }))
        .collect::<Vec<_>>())
}

fn nonsingular_check(plan: &mut Plan, lambda_field: &Field, curve: CurveId, size: u64, q: u64, lambdas: Vec<Elem>) {
    let ext = plan.ext;
    let (p, k) = (lambda_field.characteristic(), lambda_field.degree());
    for lam in lambdas {
        let name = format!("nonsingular/L={}", lambda_field.format_elem(lam));
        plan.add(name, move |ctx| {
            let base = ctx.field(p, k)?;
            let spec = build(&base, curve, &CurveParams::new(size))?;
            let levels = scan_singular(ctx, &spec.poly, lam, q, ext)?;
            let ok = levels.iter().all(|l| l.reports.is_empty());
            Ok(Outcome::new(ok, json!({ "levels": levels_json(&levels) })))
        });
    }
}

/// The tangent lines of `f` at its points over GF(p^sub).
fn tangents_at_rational_points(f: &MultiPoly, sub: u32) -> Result<Vec<(Line, u32)>> {
    let field = f.field();
    rational_points(f, sub, None)?
        .into_iter()
        .map(|pt| Ok((normalize_line(field, gradient(f, pt)?), 1)))
        .collect()
}

pub(crate) fn pgu_pencil(plan: &mut Plan) -> Result<()> {
    let n = plan.n.expect("pgu suites have n");
    for curve in [CurveId::Hermitian, CurveId::PguPencil] {
        plan.add(format!("invariance/{curve}/pgu3"), move |ctx| {
            catalog_invariance(ctx, curve, CurveParams::new(n), GroupId::new(GroupKind::Pgu3, n), true)
        });
    }

    let big = Field::new(plan.p as u32, 4 * prime_power(n)?.1)?;
    let defaults = std::iter::once(Elem::ZERO).chain((1..=SAMPLES - 1).map(|j| big.gen_pow(j))).collect();
    let lambdas = lambda_values(plan.lambda, &big, big.degree(), defaults, |l| l != Elem::ONE)?;
    nonsingular_check(plan, &big, CurveId::PguPencil, n, n * n, lambdas);

    plan.add("split/L=1", move |ctx| {
        let field = ctx.field_of_order(n, 2)?;
        let member = build(&field, CurveId::PguPencil, &CurveParams::with_lambda(n, Elem::ONE))?.poly;
        let herm = build(&field, CurveId::Hermitian, &CurveParams::new(n))?.poly;
        let lines = tangents_at_rational_points(&herm, field.degree())?;
        let ok = verify_line_splitting(&member, &lines)?;
        Ok(Outcome::new(ok && lines.len() as u64 == n.pow(3) + 1, json!({ "tangent_lines": lines.len() })))
    });

    let scan = lambda_values(plan.lambda, &big, big.degree(), big.elements().skip(1).collect(), |l| !l.is_zero())?;
    plan.add("frobenius/scan", move |ctx| pgu_frobenius_scan(ctx, n, &scan));
    plan.add("count/L^(n+1)=1", move |ctx| pgu_counts(ctx, n));
    Ok(())
}

fn pgu_frobenius_scan(ctx: &Ctx, n: u64, lambdas: &[Elem]) -> Result<Outcome> {
    let field = ctx.field_of_order(n, 4)?;
    let spec = build(&field, CurveId::PguPencil, &CurveParams::new(n))?;
    let qprime = n.pow(4);
    let rows: Vec<(Elem, bool, bool)> = lambdas
        .par_iter()
        .map(|&l| {
            let member = spec.member(l);
            let verdict = match extract_witness(&member, n)? {
                Some(w) => frobenius_check(&w, qprime)?.verdict,
                None => false,
            };
            Ok((l, verdict, field.pow(l, n + 1) == Elem::ONE))
        })
        .collect::<Result<_>>()?;
    let mismatches: Vec<String> =
        rows.iter().filter(|r| r.1 != r.2).map(|r| field.format_elem(r.0)).collect();
    let nonclassical: Vec<String> = rows.iter().filter(|r| r.1).map(|r| field.format_elem(r.0)).collect();
    Ok(Outcome::new(
        mismatches.is_empty(),
        json!({
            "qprime": qprime,
            "scanned": rows.len(),
            "frobenius_nonclassical": nonclassical,
            "mismatches": mismatches,
        }),
    ))
}

fn pgu_counts(ctx: &Ctx, n: u64) -> Result<Outcome> {
    let field = ctx.field_of_order(n, 4)?;
    let spec = build(&field, CurveId::PguPencil, &CurveParams::new(n))?;
    let d = n.pow(3) + 1;
    let expected = hefez_voloch_count(d, n.pow(4));
    let mut rows = Vec::new();
    let mut ok = true;
    for l in field.elements().skip(1).filter(|&l| field.pow(l, n + 1) == Elem::ONE && l != Elem::ONE) {
        let c = count_points(&spec.member(l), field.degree(), None)?;
        ok &= c as i128 == expected;
        rows.push(json!({ "L": field.format_elem(l), "count": c }));
    }
    // the excluded member splits into lines, so the formula does not apply
    let at_one = count_points(&spec.member(Elem::ONE), field.degree(), None)?;
    Ok(Outcome::new(
        ok && !rows.is_empty(),
        json!({ "expected": expected as i64, "counts": rows, "count_at_L=1": at_one }),
    ))
}

pub(crate) fn frobenius_nc(plan: &mut Plan) -> Result<()> {
    let n = plan.n.expect("pgu suites have n");
    plan.add("frobenius/hermitian", move |ctx| {
        let field = ctx.field_of_order(n, 2)?;
        let spec = build(&field, CurveId::Hermitian, &CurveParams::new(n))?;
        let Some(w) = extract_witness(&spec.poly, n)? else {
            return Ok(Outcome::new(false, json!({ "witness": null })));
        };
        let cert = frobenius_check(&w, n * n)?;
        let count = count_points(&spec.poly, field.degree(), None)?;
        let hv = hefez_voloch_count(n + 1, n * n);
        Ok(Outcome::new(
            cert.verdict && count as i128 == hv && count == n.pow(3) + 1,
            json!({ "certificate": cert.to_json(&spec.label()), "count": count, "hefez_voloch": hv as i64 }),
        ))
    });
    plan.add("frobenius/pgu-pencil(L=0)", move |ctx| {
        let field = ctx.field_of_order(n, 2)?;
        let member = build(&field, CurveId::PguPencil, &CurveParams::with_lambda(n, Elem::ZERO))?.poly;
        let Some(w) = extract_witness(&member, n)? else {
            return Ok(Outcome::new(false, json!({ "witness": null })));
        };
        let at_six = frobenius_check(&w, n.pow(6))?.verdict;
        let at_four = frobenius_check(&w, n.pow(4))?.verdict;
        Ok(Outcome::new(at_six && !at_four, json!({ "qprime=n^6": at_six, "qprime=n^4": at_four })))
    });
    let big = Field::new(plan.p as u32, 4 * prime_power(n)?.1)?;
    let scan = lambda_values(plan.lambda, &big, big.degree(), big.elements().skip(1).collect(), |l| !l.is_zero())?;
    plan.add("frobenius/pgu-pencil-scan", move |ctx| pgu_frobenius_scan(ctx, n, &scan));
    plan.add("count/pgu-pencil", move |ctx| pgu_counts(ctx, n));
    Ok(())
}

pub(crate) fn pgl2_pencil(plan: &mut Plan) -> Result<()> {
    let q = plan.q;
    let ext = plan.ext;
    plan.add("invariance/pgl2-pencil/pgl2-conic", move |ctx| {
        catalog_invariance(ctx, CurveId::Pgl2Pencil, CurveParams::new(q), GroupId::new(GroupKind::Pgl2Conic, q), true)
    });
    for (label, two, expect) in [("Y^2-2XZ", 2, true), ("Y^2-XZ", 1, false)] {
        plan.add(format!("invariance/conic({label})/pgl2-conic"), move |ctx| {
            let id = GroupId::new(GroupKind::Pgl2Conic, q);
            let field = ctx.field_of_order(q, 1)?;
            let c = conic(&field, two);
            invariance_outcome(ctx, &format!("conic {label}(q={q})"), &c, id, expect)
        });
    }
    plan.add("split/L=1", move |ctx| {
        let field = ctx.field_of_order(q, 1)?;
        let member = build(&field, CurveId::Pgl2Pencil, &CurveParams::with_lambda(q, Elem::ONE))?.poly;
        let lines = tangents_at_rational_points(&conic(&field, 2), field.degree())?;
        let ok = verify_line_splitting(&member, &lines)?;
        Ok(Outcome::new(ok && lines.len() as u64 == q + 1, json!({ "tangent_lines": lines.len() })))
    });
    plan.add("singular/L=-1", move |ctx| {
        let base = ctx.field_of_order(q, 1)?;
        let spec = build(&base, CurveId::Pgl2Pencil, &CurveParams::new(q))?;
        let levels = scan_singular(ctx, &spec.poly, base.neg(Elem::ONE), q, ext)?;
        let mut ok = true;
        let mut summary = Vec::new();
        for l in &levels {
            let f = &l.field;
            let h = f.subfield_degree_of_order(q)?;
            let internal = internal_points(f, h)?;
            let mut found: Vec<_> = l.reports.iter().map(|r| r.point).collect();
            found.sort();
            let doubles = l.reports.iter().all(|r| r.multiplicity == 2);
            let level_ok = found == internal && doubles && internal.len() as u64 == q * (q - 1) / 2;
            ok &= level_ok;
            summary.push(json!({
                "m": l.m,
                "singular": found.len(),
                "internal": internal.len(),
                "all_double": doubles,
                "equal_to_internal_points": found == internal,
            }));
        }
        Ok(Outcome::new(ok, json!({ "expected": q * (q - 1) / 2, "levels": summary })))
    });

    let lam_field = Field::new(plan.p as u32, 2 * plan.h)?;
    let mut defaults = vec![Elem::ZERO, lam_field.generator()];
    if q >= 5 {
        defaults.push(lam_field.from_int(2));
    }
    let minus_one = lam_field.neg(Elem::ONE);
    let lambdas = lambda_values(plan.lambda, &lam_field, lam_field.degree(), defaults, |l| {
        l != Elem::ONE && l != minus_one
    })?;
    nonsingular_check(plan, &lam_field, CurveId::Pgl2Pencil, q, q, lambdas);
    Ok(())
}

/// `Y^2 - c XZ`.
fn conic(field: &Field, c: i64) -> MultiPoly {
    MultiPoly::from_terms(
        field,
        vec![(Monomial::new(0, 2, 0, 0), Elem::ONE), (Monomial::new(1, 0, 1, 0), field.from_int(-c))],
    )
}

/// Points of PG(2,q) off the conic `Y^2 - 2XZ` and off all its tangents at rational points, sorted.
fn internal_points(field: &Field, sub: u32) -> Result<Vec<[Elem; 3]>> {
    let c = conic(field, 2);
    let tangents = tangents_at_rational_points(&c, sub)?;
    let dot = |l: &Line, p: &[Elem; 3]| (0..3).fold(Elem::ZERO, |a, i| field.add(a, field.mul(l[i], p[i])));
    let mut out = Vec::new();
    for p in points(field, sub)? {
        if c.evaluate(p, None)?.is_zero() {
            continue;
        }
        if tangents.iter().all(|(l, _)| !dot(l, &p).is_zero()) {
            out.push(p);
        }
    }
    out.sort();
    Ok(out)
}

pub(crate) fn hemisystem(plan: &mut Plan) -> Result<()> {
    let q = plan.q;
    let ext = plan.ext;
    plan.add("invariance/hemisystem/hemisystem-linear", move |ctx| {
        catalog_invariance(
            ctx,
            CurveId::Hemisystem,
            CurveParams::new(q),
            GroupId::new(GroupKind::HemisystemLinear, q),
            true,
        )
    });
    plan.add("birational", move |ctx| {
        let field = ctx.field_of_order(q, 1)?;
        let v = build(&field, CurveId::Hemisystem, &CurveParams::new(q))?.poly;
        Ok(Outcome::new(birational_identity(&v, q)?, json!({ "identity": "V(YZ,XZ,XY) = (XY)^(q-1) Z^2 V" })))
    });
    plan.add("split/L=1", move |ctx| {
        let field = ctx.field_of_order(q, 1)?;
        let v1 = build(&field, CurveId::Hemisystem, &CurveParams::with_lambda(q, Elem::ONE))?.poly;
        let (a, b) = (binomial(&field, [q, 0, 0], [1, 0, q - 1])?, binomial(&field, [0, q, 0], [0, 1, q - 1])?);
        let prod = a.try_mul(&b)?;
        let c = v1.proportional(&prod);
        let mut lines = Vec::new();
        for xi in field.subfield_elements(field.subfield_degree_of_order(q)?)? {
            lines.push(([Elem::ONE, Elem::ZERO, field.neg(xi)], 1));
            lines.push(([Elem::ZERO, Elem::ONE, field.neg(xi)], 1));
        }
        let splits = verify_line_splitting(&v1, &lines)?;
        let exact = c == Some(field.from_int(-2));
        Ok(Outcome::new(
            exact && splits,
            json!({
                "scalar": c.map(|c| field.format_elem(c)),
                "scalar_is_-2": exact,
                "lines": lines.len(),
                "splits_into_lines": splits,
            }),
        ))
    });
    plan.add("split/L=-1", move |ctx| {
        let field = ctx.field_of_order(q, 1)?;
        let v = build(&field, CurveId::Hemisystem, &CurveParams::with_lambda(q, field.neg(Elem::ONE)))?.poly;
        let d = binomial(&field, [0, 1, q - 1], [q, 0, 0])?;
        let e = binomial(&field, [1, 0, q - 1], [0, q, 0])?;
        let c = v.proportional(&d.try_mul(&e)?);
        Ok(Outcome::new(
            c.is_some(),
            json!({
                "scalar": c.map(|c| field.format_elem(c)),
                "scalar_is_-2": c == Some(field.from_int(-2)),
                "components": ["YZ^(q-1) - X^q", "XZ^(q-1) - Y^q"],
            }),
        ))
    });

    let lam_field = Field::new(plan.p as u32, 2 * plan.h)?;
    let minus_one = lam_field.neg(Elem::ONE);
    let lambdas = lambda_values(plan.lambda, &lam_field, lam_field.degree(), vec![Elem::ZERO, lam_field.generator()], |l| {
        l != Elem::ONE && l != minus_one
    })?;
    let (p, k) = (lam_field.characteristic(), lam_field.degree());
    for lam in lambdas {
        plan.add(format!("singular/L={}", lam_field.format_elem(lam)), move |ctx| {
            let base = ctx.field(p, k)?;
            let spec = build(&base, CurveId::Hemisystem, &CurveParams::new(q))?;
            let levels = scan_singular(ctx, &spec.poly, lam, q, ext)?;
            let mut ok = true;
            let mut summary = Vec::new();
            for l in &levels {
                let (level_ok, bad) = hemisystem_structure(l, q)?;
                ok &= level_ok;
                summary.push(json!({ "m": l.m, "singular": l.reports.len(), "ok": level_ok, "unexpected": bad }));
            }
            Ok(Outcome::new(ok, json!({ "expected": q + 2, "levels": summary })))
        });
    }
    Ok(())
}

/// `X^a - X^b` for exponent triples `a`, `b`.
fn binomial(field: &Field, a: [u64; 3], b: [u64; 3]) -> Result<MultiPoly> {
    let m = |e: [u64; 3]| Monomial::new(e[0] as u32, e[1] as u32, e[2] as u32, 0);
    Ok(MultiPoly::from_terms(field, vec![(m(a), Elem::ONE), (m(b), field.neg(Elem::ONE))]))
}

pub(crate) fn birational_identity(v: &MultiPoly, q: u64) -> Result<bool> {
    let field = v.field();
    let var = |x| MultiPoly::var(field, x);
    let (x, y, z) = (var(Var::X), var(Var::Y), var(Var::Z));
    let lhs = v.compose(&[y.try_mul(&z)?, x.try_mul(&z)?, x.try_mul(&y)?, var(Var::L)])?;
    let factor = MultiPoly::monomial(field, Monomial::new(q as u32 - 1, q as u32 - 1, 2, 0), Elem::ONE);
    Ok(lhs == factor.try_mul(v)?)
}

/// Whether one scan level shows the expected `q + 2` singular points; also
/// returns descriptions of any that do not fit.
fn hemisystem_structure(l: &ScanLevel, q: u64) -> Result<(bool, Vec<String>)> {
    let f = &l.field;
    let h = f.subfield_degree_of_order(q)?;
    let (o, z) = (Elem::ONE, Elem::ZERO);
    let infinity_line: Line = [z, z, o];
    let mut bad = Vec::new();
    let mut nodes = 0;
    let mut cusps = 0;
    for r in &l.reports {
        let pt = r.point;
        let fits = if pt == [o, z, z] || pt == [z, o, z] {
            let meet = line_intersection_multiplicity(&l.member, infinity_line, pt)?;
            let ok = r.multiplicity as u64 == q - 1
                && r.tangents == vec![(infinity_line, q as u32 - 1)]
                && r.unsplit == 0
                && meet as u64 == q;
            cusps += ok as u32;
            ok
        } else {
            let x = pt[0];
            let mut tangents = r.tangents.clone();
            tangents.sort();
            let mut want = vec![([o, z, f.neg(x)], 1), ([z, o, f.neg(x)], 1)];
            want.sort();
            let ok = pt[2] == o && pt[1] == x && point_in_subfield(f, &pt, h)? && r.multiplicity == 2 && tangents == want;
            nodes += ok as u32;
            ok
        };
        if !fits {
            let t: Vec<String> = r.tangents.iter().map(|(t, k)| format!("{}^{k}", fmt_line(f, t))).collect();
            bad.push(format!("{} mult {} tangents {}", fmt_point(f, &pt), r.multiplicity, t.join(" ")));
        }
    }
    let ok = bad.is_empty() && nodes as u64 == q && cusps == 2 && l.reports.len() as u64 == q + 2;
    Ok((ok, bad))
}
