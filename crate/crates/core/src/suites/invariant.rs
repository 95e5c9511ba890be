use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::common::{catalog_invariance, group_field, invariance_outcome, seed_of};
use super::{Outcome, Plan};
use crate::catalog::{
    all_lines, build, cube_root_of_unity, pencil_coordinates, projective_equivalence_witness, CurveId, CurveParams,
};
use crate::error::{Error, Result};
use crate::gf::Elem;
use crate::groups::{GroupId, GroupKind};
use crate::invariance::check_invariance;
use crate::linalg::Matrix3;
use crate::mpoly::{moore_projective, Monomial, MultiPoly, Var};

fn pair(plan: &mut Plan, curve: CurveId, kind: GroupKind, expect: bool) {
    let q = plan.q;
    let name = format!("invariance/{curve}/{}", kind.name());
    plan.add(name, move |ctx| catalog_invariance(ctx, curve, CurveParams::new(q), GroupId::new(kind, q), expect));
}

pub(crate) fn pgl3_invariance(plan: &mut Plan) -> Result<()> {
    pair(plan, CurveId::Dgz, GroupKind::Pgl3, true);
    pair(plan, CurveId::Dgz, GroupKind::Psl3, true);
    pair(plan, CurveId::DualDgz, GroupKind::Pgl3, true);
    pair(plan, CurveId::Pgl3Pencil, GroupKind::Pgl3, true);
    // a control that must fail: some transvection moves the Fermat curve
    pair(plan, CurveId::Fermat, GroupKind::Pgl3, false);

    let q = plan.q;
    plan.add("moore/det-scalar", move |ctx| {
        let field = ctx.field_of_order(q, 1)?;
        let h = moore_projective(&field, q, 2, 1)?;
        let elems: Vec<Elem> = field.elements().collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed_of("moore/det-scalar"));
        let mut tried = 0;
        let mut agree = 0;
        while tried < 20 {
            let mut m = [[Elem::ZERO; 3]; 3];
            for row in m.iter_mut() {
                for e in row.iter_mut() {
                    *e = elems[rng.gen_range(0..elems.len())];
                }
            }
            let a = Matrix3::new(&field, m);
            if a.det().is_zero() {
                continue;
            }
            tried += 1;
            if check_invariance(&h, &a)? == Some(a.det()) {
                agree += 1;
            }
        }
        Ok(Outcome::new(agree == tried, json!({ "matrices": tried, "scalar_equals_det": agree })))
    });
    Ok(())
}

pub(crate) fn agl_pencil(plan: &mut Plan) -> Result<()> {
    pair(plan, CurveId::AglPencil, GroupKind::Agl2, true);
    let q = plan.q;
    plan.add("pencil-coordinates/dgz", move |ctx| {
        let field = ctx.field_of_order(q, 1)?;
        let spec = build(&field, CurveId::AglPencil, &CurveParams::new(q))?;
        let (g, h) = spec.pencil.clone().expect("pencil");
        let dgz = build(&field, CurveId::Dgz, &CurveParams::new(q))?.poly;
        let at_dgz = pencil_coordinates(&dgz, &g, &h)?;
        let at_one = pencil_coordinates(&spec.member(Elem::ONE), &g, &h)?;
        let ok = at_dgz == Some((Elem::ONE, Elem::ZERO)) && at_one == Some((Elem::ONE, field.neg(Elem::ONE)));
        let show = |c: Option<(Elem, Elem)>| c.map(|(a, b)| [field.format_elem(a), field.format_elem(b)]);
        Ok(Outcome::new(ok, json!({ "dgz": show(at_dgz), "member_L=1": show(at_one) })))
    });

    // the pencil spanned by the (q-1)-th power of the affine lines and Z^(q^3-q)
    plan.add("invariance/affine-lines-power/agl2", move |ctx| {
        let id = GroupId::new(GroupKind::Agl2, q);
        let field = group_field(ctx, id)?;
        let g = affine_lines_power(&field, q)?;
        invariance_outcome(ctx, &format!("affine-lines^(q-1)(q={q})"), &g, id, true)
    });
    plan.add("split/product-identity", move |ctx| {
        let field = ctx.field_of_order(q, 1)?;
        let m = moore_projective(&field, q, 2, 1)?.dehomogenize();
        let mu_m = MultiPoly::var(&field, Var::L).try_mul(&m)?;
        let mut lhs = MultiPoly::one(&field);
        for k in field.elements().skip(1) {
            lhs = lhs.try_mul(&mu_m.try_sub(&MultiPoly::constant(&field, k))?)?;
        }
        let rhs = mu_m.pow(q - 1)?.try_sub(&MultiPoly::one(&field))?;
        // the homogeneous pencil member L^(q-1) G - Z^(q^3-q), read in the affine chart
        let g = affine_lines_power(&field, q)?;
        let z = MultiPoly::monomial(&field, Monomial::new(0, 0, (q.pow(3) - q) as u32, 0), Elem::ONE);
        let member = MultiPoly::var(&field, Var::L).pow(q - 1)?.try_mul(&g)?.try_sub(&z)?.dehomogenize();
        let chart = member.proportional(&rhs);
        Ok(Outcome::new(
            lhs == rhs && chart.is_some(),
            json!({
                "product_equals_power_minus_one": lhs == rhs,
                "member_scalar": chart.map(|c| field.format_elem(c)),
                "factors": q - 1,
            }),
        ))
    });
    plan.add("split/rho-action", move |ctx| {
        // F_k(rho x, y) = rho F_(k/rho): the scalings permute the q-1 components
        let field = ctx.field_of_order(q, 1)?;
        let m = moore_projective(&field, q, 2, 1)?.dehomogenize();
        let mu_m = MultiPoly::var(&field, Var::L).try_mul(&m)?;
        let comp = |k: Elem| mu_m.try_sub(&MultiPoly::constant(&field, k));
        let mut ok = 0;
        let mut total = 0;
        for rho in field.elements().skip(1) {
            let a = Matrix3::diag(&field, [rho, Elem::ONE, Elem::ONE]);
            for k in field.elements().skip(1) {
                total += 1;
                let lhs = comp(k)?.linear_substitute(&a)?;
                let rhs = comp(field.div(k, rho)?)?.scale(rho);
                if lhs == rhs {
                    ok += 1;
                }
            }
        }
        Ok(Outcome::new(ok == total, json!({ "pairs": total, "agree": ok })))
    });
    Ok(())
}

/// `(product of the q^2+q lines of PG(2,q) other than Z = 0)^(q-1)`.
fn affine_lines_power(field: &crate::gf::Field, q: u64) -> Result<MultiPoly> {
    let z = MultiPoly::var(field, Var::Z);
    let rest = all_lines(field, q)?
        .divide_exact(&z)?
        .ok_or_else(|| Error::InvalidParameter("Z does not divide the line product".into()))?;
    rest.pow(q - 1)
}

pub(crate) fn dual_agl_pencil(plan: &mut Plan) -> Result<()> {
    pair(plan, CurveId::DualAglPencil, GroupKind::DualAgl2, true);
    pair(plan, CurveId::Dgz, GroupKind::DualAgl2, true);
    let q = plan.q;
    plan.add("pencil-coordinates/dgz", move |ctx| {
        let field = ctx.field_of_order(q, 1)?;
        let spec = build(&field, CurveId::DualAglPencil, &CurveParams::new(q))?;
        let (g, h) = spec.pencil.clone().expect("pencil");
        let dgz = build(&field, CurveId::Dgz, &CurveParams::new(q))?.poly;
        let c = pencil_coordinates(&dgz, &g, &h)?;
        let show = c.map(|(a, b)| [field.format_elem(a), field.format_elem(b)]);
        Ok(Outcome::new(c == Some((Elem::ONE, Elem::ZERO)), json!({ "dgz": show })))
    });
    Ok(())
}

pub(crate) fn singer_net(plan: &mut Plan) -> Result<()> {
    let q = plan.q;
    for (tag, twisted) in [("1:1:1", false), ("g:g^2:g^3", true)] {
        plan.add(format!("invariance/singer-net({tag})/singer"), move |ctx| {
            let id = GroupId::new(GroupKind::Singer, q);
            let field = group_field(ctx, id)?;
            let mut params = CurveParams::new(q);
            if twisted {
                let g = field.generator();
                params.net = Some([g, field.pow(g, 2), field.pow(g, 3)]);
            }
            let spec = build(&field, CurveId::SingerNet, &params)?;
            invariance_outcome(ctx, &format!("singer-net({tag})(q={q})/singer"), &spec.poly, id, true)
        });
    }
    pair(plan, CurveId::Pellikaan, GroupKind::Singer, true);
    pair(plan, CurveId::Pellikaan, GroupKind::SingerNormalizer, true);
    pair(plan, CurveId::SingerBig, GroupKind::SingerNormalizer, true);

    if q % 3 == 1 {
        plan.add("equivalence/singer-net(w:w^2:1)/pellikaan", move |ctx| {
            let field = ctx.field_of_order(q, 2)?;
            let (w, _) = cube_root_of_unity(&field, q)?;
            let mut params = CurveParams::new(q);
            params.net = Some([w, field.mul(w, w), Elem::ONE]);
            let net = build(&field, CurveId::SingerNet, &params)?.poly;
            let pell = build(&field, CurveId::Pellikaan, &CurveParams::new(q))?.poly;
            let found = projective_equivalence_witness(&net, &pell, field.degree(), 1 << 24)?;
            let detail = match &found {
                Some(pi) => {
                    let (c, d) = (pi.matrix.m[0][0], pi.matrix.m[1][1]);
                    json!({
                        "c": field.format_elem(c),
                        "d": field.format_elem(d),
                        "d^(q+1)=w": field.pow(d, q + 1) == w,
                        "c^q d^(q+2)=1": field.mul(field.pow(c, q), field.pow(d, q + 2)) == Elem::ONE,
                    })
                }
                None => json!({ "witness": null }),
            };
            Ok(Outcome::new(found.is_some(), detail))
        });
    } else {
        plan.note(format!("q={q} is not 1 mod 3, so the (w:w^2:1) net member is not compared with the Pellikaan curve"));
    }
    Ok(())
}

pub(crate) fn triangle(plan: &mut Plan) -> Result<()> {
    pair(plan, CurveId::TrianglePencil, GroupKind::Triangle, true);
    pair(plan, CurveId::Fermat, GroupKind::Triangle, true);
    Ok(())
}
