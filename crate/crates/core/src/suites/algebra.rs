use num_bigint::BigUint;
use serde_json::json;

use super::common::group_field;
use super::{Outcome, Plan};
use crate::catalog::{build, CurveId, CurveParams};
use crate::error::{Error, Result};
use crate::gf::{Elem, Field};
use crate::groups::{closure_order, generators, GroupId, GroupKind};
use crate::invariance::invariant_form_space;
use crate::mpoly::{Monomial, MultiPoly, Var};

/// Groups larger than this are not enumerated.
pub const CLOSURE_CAP: usize = 1_000_000;
/// Largest coefficient space searched for invariant forms.
const SPACE_CAP: usize = 120;

pub(crate) fn group_orders(plan: &mut Plan) -> Result<()> {
    let q = plan.q;
    let n = plan.n.unwrap_or(q);
    for kind in GroupKind::ALL {
        let param = if kind == GroupKind::Pgu3 { n } else { q };
        let id = GroupId::new(kind, param);
        if id.validate().is_err() {
            plan.note(format!("{} is not defined at q={q}", kind.name()));
            continue;
        }
        if id.order_formula() > BigUint::from(CLOSURE_CAP) {
            plan.note(format!(
                "{} at {param} has order {} above the closure cap {CLOSURE_CAP}; not enumerated",
                kind.name(),
                id.order_formula()
            ));
            continue;
        }
        plan.add(format!("order/{}", kind.name()), move |ctx| {
            let field = group_field(ctx, id)?;
            let gens = generators(&field, id)?;
            ctx.record_generators(id, &gens);
            let closure = closure_order(&gens, CLOSURE_CAP)?;
            let formula = id.order_formula();
            let ok = closure.map(BigUint::from) == Some(formula.clone());
            Ok(Outcome::new(
                ok,
                json!({ "param": param, "closure": closure, "formula": formula.to_string(), "generators": gens.len() }),
            ))
        });
    }
    let id = GroupId::new(GroupKind::Pgu3, n);
    if id.order_formula() <= BigUint::from(CLOSURE_CAP) {
        plan.add("pgu3/alternative-formula", move |ctx| {
            let field = group_field(ctx, id)?;
            let gens = generators(&field, id)?;
            let closure = closure_order(&gens, CLOSURE_CAP)?;
            let standard = id.order_formula();
            let n3 = BigUint::from(n).pow(3);
            let alternative = &n3 * (&n3 + 1u32) * BigUint::from(n - 1).pow(2);
            let closure_big = closure.map(BigUint::from);
            Ok(Outcome::new(
                closure_big == Some(standard.clone()),
                json!({
                    "n": n,
                    "closure": closure,
                    "standard": standard.to_string(),
                    "alternative": alternative.to_string(),
                    "alternative_agrees": closure_big == Some(alternative),
                }),
            ))
        });
    }
    Ok(())
}

fn var(field: &Field, v: Var) -> MultiPoly {
    MultiPoly::var(field, v)
}

fn c(field: &Field, n: i64) -> MultiPoly {
    MultiPoly::constant(field, field.from_int(n))
}

/// `D(cXY, (X+Y)Z, Z^2)` for the PGL(2,q) pencil `D`.
pub(crate) fn pgl2_quotient_substitution(field: &Field, q: u64, coeff: i64) -> Result<MultiPoly> {
    let d = build(field, CurveId::Pgl2Pencil, &CurveParams::new(q))?.poly;
    let (x, y, z) = (var(field, Var::X), var(field, Var::Y), var(field, Var::Z));
    let u = x.try_mul(&y)?.scale(field.from_int(coeff));
    let s = x.try_add(&y)?.try_mul(&z)?;
    d.compose(&[u, s, z.pow(2)?, var(field, Var::L)])
}

/// The affine polynomial `(2u - v^q + v)^2 - v^(2q) - v^2 + 2 sign L v^(q+1)` in `x, y`,
/// with `u = x^q - x` and `v = x - y`.
pub(crate) fn hyperelliptic_pullback(field: &Field, q: u64, sign: i64) -> Result<MultiPoly> {
    let (x, y, l) = (var(field, Var::X), var(field, Var::Y), var(field, Var::L));
    let u = x.pow(q)?.try_sub(&x)?;
    let v = x.try_sub(&y)?;
    let vq = v.pow(q)?;
    let w = u.scale(field.from_int(2)).try_sub(&vq)?.try_add(&v)?;
    w.pow(2)?
        .try_sub(&vq.pow(2)?)?
        .try_sub(&v.pow(2)?)?
        .try_add(&l.try_mul(&v.pow(q + 1)?)?.scale(field.from_int(2 * sign)))
}

/// `W^2 - V^(2q-2) + 2 sign L V^(q-1) - 1` with `W = X`, `V = Y`.
pub(crate) fn hyperelliptic_model(field: &Field, q: u64, sign: i64) -> Result<MultiPoly> {
    let (w, v, l) = (var(field, Var::X), var(field, Var::Y), var(field, Var::L));
    w.pow(2)?
        .try_sub(&v.pow(2 * q - 2)?)?
        .try_add(&l.try_mul(&v.pow(q - 1)?)?.scale(field.from_int(2 * sign)))?
        .try_sub(&c(field, 1))
}

pub(crate) fn quotient_identities(plan: &mut Plan) -> Result<()> {
    let q = plan.q;
    for (coeff, tag) in [(2, "v=2xy"), (-2, "v=-2xy")] {
        plan.add(format!("quotient/phi({tag})"), move |ctx| {
            let field = ctx.field_of_order(q, 1)?;
            let lhs = pgl2_quotient_substitution(&field, q, coeff)?;
            let v = build(&field, CurveId::Hemisystem, &CurveParams::new(q))?.poly;
            let rhs = MultiPoly::monomial(&field, Monomial::new(0, 0, 2, 0), Elem::ONE).try_mul(&v)?;
            let holds = lhs == rhs;
            // only v = 2xy is expected to balance
            Ok(Outcome::new(holds == (coeff == 2), json!({ "identity": "D(v, x+y) = V", "holds": holds })))
        });
    }
    plan.add("quotient/sylow-p", move |ctx| {
        let field = ctx.field_of_order(q, 1)?;
        let h = build(&field, CurveId::Hemisystem, &CurveParams::new(q))?.poly.dehomogenize();
        let corrected = hyperelliptic_pullback(&field, q, 1)?;
        let other = hyperelliptic_pullback(&field, q, -1)?;
        let quotient = corrected.divide_exact(&h)?;
        let constant = quotient.as_ref().and_then(|t| t.proportional(&MultiPoly::one(&field)));
        let other_divides = other.divide_exact(&h)?.is_some();
        let minus_two = field.from_int(-2);
        Ok(Outcome::new(
            constant == Some(minus_two) && !other_divides,
            json!({
                "model": "W^2 = V^(2q-2) - 2L V^(q-1) + 1",
                "constant": constant.map(|k| field.format_elem(k)),
                "other_sign_divides": other_divides,
            }),
        ))
    });
    plan.add("quotient/sylow-p-twist", move |ctx| {
        // V -> zeta V with zeta^(q-1) = -1 carries one sign of the model to the other
        let field = ctx.field_of_order(q, 2)?;
        let zeta = field
            .elements()
            .find(|&z| field.pow(z, q - 1) == field.neg(Elem::ONE))
            .ok_or_else(|| Error::InvalidParameter("no (q-1)-th root of -1".into()))?;
        let corrected = hyperelliptic_model(&field, q, 1)?;
        let other = hyperelliptic_model(&field, q, -1)?;
        let twisted = corrected.compose(&[
            var(&field, Var::X),
            var(&field, Var::Y).scale(zeta),
            var(&field, Var::Z),
            var(&field, Var::L),
        ])?;
        Ok(Outcome::new(
            twisted == other,
            json!({ "zeta": field.format_elem(zeta), "twist_matches_other_sign": twisted == other }),
        ))
    });
    Ok(())
}

pub(crate) fn invariant_spaces(plan: &mut Plan) -> Result<()> {
    let q = plan.q;
    let h = plan.h;
    plan.add("spaces/triangle", move |ctx| {
        let id = GroupId::new(GroupKind::Triangle, q);
        let field = group_field(ctx, id)?;
        let fermat = build(&field, CurveId::Fermat, &CurveParams::new(q))?.poly;
        let spaces = invariant_form_space(&field, id, (q - 1) as u32, h, SPACE_CAP)?;
        let dims: Vec<usize> = spaces.iter().map(|s| s.dim()).collect();
        // powers of XYZ, the fundamental triangle itself, are invariant too but reducible
        let k = (q as u32 - 1) / 3;
        let xyz = MultiPoly::monomial(&field, Monomial::new(k, k, k, 0), Elem::ONE);
        let fermat_spaces = spaces.iter().filter(|s| s.contains(&fermat)).count();
        let others_reducible =
            spaces.iter().filter(|s| !s.contains(&fermat)).all(|s| (q - 1) % 3 == 0 && s.dim() == 1 && s.contains(&xyz));
        let ok = fermat_spaces == 1 && others_reducible && spaces.iter().all(|s| s.dim() == 1);
        Ok(Outcome::new(
            ok,
            json!({
                "degree": q - 1,
                "space_dims": dims,
                "contains_fermat": fermat_spaces == 1,
                "other_spaces_are_xyz_powers": others_reducible,
            }),
        ))
    });
    if plan.p != 2 {
        plan.add("spaces/pgl2-conic", move |ctx| {
            let id = GroupId::new(GroupKind::Pgl2Conic, q);
            let field = group_field(ctx, id)?;
            let spaces = invariant_form_space(&field, id, 2, h, SPACE_CAP)?;
            let conic = |k: i64| {
                MultiPoly::from_terms(
                    &field,
                    vec![(Monomial::new(0, 2, 0, 0), Elem::ONE), (Monomial::new(1, 0, 1, 0), field.from_int(-k))],
                )
            };
            let has = |f: &MultiPoly| spaces.iter().any(|s| s.contains(f));
            let (two, one) = (has(&conic(2)), has(&conic(1)));
            Ok(Outcome::new(
                two,
                json!({
                    "space_dims": spaces.iter().map(|s| s.dim()).collect::<Vec<_>>(),
                    "contains_Y^2-2XZ": two,
                    "contains_Y^2-XZ": one,
                }),
            ))
        });
    } else {
        plan.note("pgl2-conic needs odd q; its invariant space is not searched");
    }
    plan.add("spaces/singer", move |ctx| {
        let id = GroupId::new(GroupKind::Singer, q);
        let field = group_field(ctx, id)?;
        let d = (q + 2) as u32;
        let spaces = invariant_form_space(&field, id, d, field.degree(), SPACE_CAP)?;
        let q1 = q as u32 + 1;
        let monos = [Monomial::new(q1, 1, 0, 0), Monomial::new(0, q1, 1, 0), Monomial::new(1, 0, q1, 0)];
        let found: Vec<bool> = monos
            .iter()
            .map(|m| {
                let f = MultiPoly::monomial(&field, *m, Elem::ONE);
                spaces.iter().any(|s| s.contains(&f))
            })
            .collect();
        Ok(Outcome::new(
            found.iter().all(|&b| b),
            json!({
                "degree": d,
                "space_dims": spaces.iter().map(|s| s.dim()).collect::<Vec<_>>(),
                "net_monomials_found": found,
            }),
        ))
    });
    Ok(())
}
