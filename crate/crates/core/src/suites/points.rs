use serde_json::json;

use super::{Outcome, Plan};
use crate::catalog::{build, CurveId, CurveParams};
use crate::error::{Error, Result};
use crate::geometry::timed_count;

/// Closed formulas for the number of GF(q^m)-points of the DGZ curve.
pub fn dgz_expected(q: u64, m: u32) -> Option<u64> {
    let (q3, q4, q5, q6) = (q.pow(3), q.pow(4), q.pow(5), q.pow(6));
    match m {
        1 | 5 => Some(0),
        2 | 4 => Some(q4 - q),
        3 => Some(q6 - q5 - q4 + q3),
        6 => Some(q6 - q5 + q3 - q),
        _ => None,
    }
}

pub(crate) fn dgz_points(plan: &mut Plan) -> Result<()> {
    if plan.ext > 6 {
        return Err(Error::InvalidParameter("dgz-points has closed formulas only for m <= 6".into()));
    }
    let q = plan.q;
    for m in 1..=plan.ext {
        plan.add(format!("points/m={m}"), move |ctx| {
            let field = ctx.field_of_order(q, m)?;
            let spec = build(&field, CurveId::Dgz, &CurveParams::new(q))?;
            let row = timed_count("dgz", &spec.poly, q, m, None)?;
            let expected = dgz_expected(q, m).expect("m <= 6");
            let count = row.count;
            ctx.record_points(row);
            Ok(Outcome::new(count == expected, json!({ "q": q, "m": m, "count": count, "expected": expected })))
        });
    }
    Ok(())
}
