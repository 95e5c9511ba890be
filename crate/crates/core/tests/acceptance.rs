//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Every criterion is exact, so the pinned tolerance on counts and identities
//! is zero. The runtime budgets are printed for reference and do not fail a
//! criterion.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use curvelab::suites::dgz_expected;
use curvelab::{run_suite_filtered, Check, Report, SuiteId, SuiteParams};
use serde_json::Value;

/// Allowed absolute difference between an enumerated count and its formula.
const COUNT_TOLERANCE: u64 = 0;

struct Verdict {
    passed: bool,
    detail: String,
}

fn params(q: u64, n: Option<u64>, ext: Option<u32>) -> SuiteParams {
    SuiteParams { q, n, ext, ..SuiteParams::new(q) }
}

fn suite(id: SuiteId, p: SuiteParams, prefixes: &[&str]) -> Result<Report, String> {
    run_suite_filtered(id, &p, |name| prefixes.is_empty() || prefixes.iter().any(|x| name.starts_with(x)))
        .map_err(|e| format!("{id} q={}: {e}", p.q))
}

fn failures(r: &Report) -> Vec<String> {
    r.failures().iter().map(|c| format!("{}@q={}:{}", r.suite, r.params.q, c.name)).collect()
}

fn get<'a>(r: &'a Report, name: &str) -> Result<&'a Check, String> {
    r.check(name).ok_or_else(|| format!("{} has no check {name}", r.suite))
}

fn u(v: &Value) -> u64 {
    v.as_u64().unwrap_or(u64::MAX)
}

fn dgz_counts() -> Result<Verdict, String> {
    let mut bad = Vec::new();
    let mut rows = 0;
    for q in [2, 3] {
        let r = suite(SuiteId::DgzPoints, params(q, None, Some(6)), &[])?;
        for row in &r.point_counts {
            rows += 1;
            let want = dgz_expected(row.q, row.m).ok_or("no formula")?;
            if row.count.abs_diff(want) > COUNT_TOLERANCE {
                bad.push(format!("q={} m={}: {} != {want}", row.q, row.m, row.count));
            }
        }
    }
    Ok(Verdict { passed: bad.is_empty() && rows == 12, detail: format!("{rows} counts; mismatches {bad:?}") })
}

fn pgu_pencil() -> Result<Verdict, String> {
    let r = suite(SuiteId::PguPencil, params(2, Some(2), Some(4)), &[])?;
    let nonsingular = r.checks.iter().filter(|c| c.name.starts_with("nonsingular/")).collect::<Vec<_>>();
    let a = nonsingular.len() == 10 && nonsingular.iter().all(|c| c.passed);
    let split = get(&r, "split/L=1")?;
    let b = split.passed && u(&split.detail["tangent_lines"]) == 9;
    let scan = get(&r, "frobenius/scan")?;
    let nc = scan.detail["frobenius_nonclassical"].as_array().map_or(0, |v| v.len());
    let c = scan.passed && u(&scan.detail["scanned"]) == 15 && nc == 3;
    let counts = get(&r, "count/L^(n+1)=1")?;
    let d = counts.passed
        && counts.detail["counts"]
            .as_array()
            .is_some_and(|v| v.iter().all(|x| u(&x["count"]).abs_diff(81) <= COUNT_TOLERANCE));
    Ok(Verdict {
        passed: a && b && c && d,
        detail: format!(
            "(a) {} nonsingular members {a}; (b) {} tangent lines {b}; (c) {nc} of 15 nonclassical {c}; (d) counts {} {d}",
            nonsingular.len(),
            split.detail["tangent_lines"],
            counts.detail["counts"]
        ),
    })
}

/// The pairs the invariance matrix must certify, as check names.
const PAIRS: [&str; 14] = [
    "invariance/dgz/pgl3",
    "invariance/dgz/psl3",
    "invariance/dual-dgz/pgl3",
    "invariance/agl-pencil/agl2",
    "invariance/dual-agl-pencil/dual-agl2",
    "invariance/pgl3-pencil/pgl3",
    "invariance/pgu-pencil/pgu3",
    "invariance/hermitian/pgu3",
    "invariance/singer-net(1:1:1)/singer",
    "invariance/pellikaan/singer-normalizer",
    "invariance/singer-big/singer-normalizer",
    "invariance/triangle-pencil/triangle",
    "invariance/pgl2-pencil/pgl2-conic",
    "invariance/hemisystem/hemisystem-linear",
];

fn invariance_matrix() -> Result<Verdict, String> {
    let mut reports = Vec::new();
    for q in [2, 3] {
        for id in [
            SuiteId::Pgl3Invariance,
            SuiteId::AglPencil,
            SuiteId::DualAglPencil,
            SuiteId::SingerNet,
            SuiteId::Triangle,
        ] {
            reports.push(suite(id, params(q, None, None), &["invariance/"])?);
        }
        reports.push(suite(SuiteId::PguPencil, params(q, Some(q), None), &["invariance/"])?);
    }
    for q in [3, 5] {
        for id in [SuiteId::Pgl2Pencil, SuiteId::Hemisystem] {
            reports.push(suite(id, params(q, None, None), &["invariance/"])?);
        }
    }
    let mut bad = Vec::new();
    let mut certified = 0;
    let mut words = 0;
    for r in &reports {
        bad.extend(failures(r));
        for c in r.checks.iter().filter(|c| PAIRS.contains(&c.name.as_str())) {
            certified += c.passed as usize;
            words += u(&c.detail["cocycle"]["agreements"]);
        }
    }
    let distinct = PAIRS.iter().filter(|p| reports.iter().any(|r| r.check(p).is_some())).count();
    Ok(Verdict {
        passed: bad.is_empty() && distinct == 14,
        detail: format!(
            "{distinct} pairs, {certified} certifications, {words} cocycle words agreeing; failures {bad:?}"
        ),
    })
}

fn identities() -> Result<Verdict, String> {
    let mut bad = Vec::new();
    let mut constants = Vec::new();
    for q in [3, 5] {
        let r = suite(SuiteId::Hemisystem, params(q, None, None), &["split/", "birational"])?;
        bad.extend(failures(&r));
        let minus = get(&r, "split/L=-1")?;
        constants.push(format!(
            "q={q}: L=-1 constant {} (is -2: {})",
            minus.detail["scalar"], minus.detail["scalar_is_-2"]
        ));
    }
    let agl = suite(SuiteId::AglPencil, params(3, None, None), &["split/product-identity"])?;
    bad.extend(failures(&agl));
    let present = agl.checks.len() == 1;
    Ok(Verdict { passed: bad.is_empty() && present, detail: format!("{}; failures {bad:?}", constants.join(", ")) })
}

fn singularities() -> Result<Verdict, String> {
    let hemi = suite(SuiteId::Hemisystem, params(3, None, Some(4)), &["singular/"])?;
    let pgl2 = suite(SuiteId::Pgl2Pencil, params(3, None, Some(4)), &["singular/", "nonsingular/"])?;
    let mut bad = failures(&hemi);
    bad.extend(failures(&pgl2));
    let hemi_members = hemi.checks.len();
    let nonsingular = pgl2.checks.iter().filter(|c| c.name.starts_with("nonsingular/")).count();
    let doubles = get(&pgl2, "singular/L=-1")?;
    Ok(Verdict {
        passed: bad.is_empty() && hemi_members >= 1 && nonsingular >= 1,
        detail: format!(
            "{hemi_members} hemisystem members with q+2 singular points, pgl2 L=-1 levels {}, {nonsingular} nonsingular pgl2 members; failures {bad:?}",
            doubles.detail["levels"]
        ),
    })
}

fn group_orders() -> Result<Verdict, String> {
    let q2 = suite(SuiteId::GroupOrders, params(2, Some(2), None), &[])?;
    let q3 = suite(SuiteId::GroupOrders, params(3, Some(2), None), &[])?;
    let mut bad = failures(&q2);
    bad.extend(failures(&q3));
    let required = [
        (&q2, "order/triangle"),
        (&q2, "order/singer"),
        (&q2, "order/singer-normalizer"),
        (&q2, "order/agl2"),
        (&q2, "order/pgu3"),
        (&q3, "order/pgl2-conic"),
        (&q3, "order/triangle"),
        (&q3, "order/agl2"),
    ];
    let missing: Vec<&str> = required.iter().filter(|(r, n)| r.check(n).is_none()).map(|(_, n)| *n).collect();
    let alt = get(&q2, "pgu3/alternative-formula")?;
    Ok(Verdict {
        passed: bad.is_empty() && missing.is_empty(),
        detail: format!(
            "PGU(3,2) closure {} standard {} alternative n^3(n^3+1)(n-1)^2 = {} (alternative agrees: {}); missing {missing:?}; failures {bad:?}",
            alt.detail["closure"],
            alt.detail["standard"],
            alt.detail["alternative"],
            alt.detail["alternative_agrees"]
        ),
    })
}

fn invariant_spaces() -> Result<Verdict, String> {
    let q3 = suite(SuiteId::InvariantSpaces, params(3, None, None), &["spaces/triangle", "spaces/pgl2-conic"])?;
    let q2 = suite(SuiteId::InvariantSpaces, params(2, None, None), &["spaces/singer"])?;
    let mut bad = failures(&q3);
    bad.extend(failures(&q2));
    let conic = get(&q3, "spaces/pgl2-conic")?;
    Ok(Verdict {
        passed: bad.is_empty() && q3.checks.len() == 2 && q2.checks.len() == 1,
        detail: format!(
            "triangle {}; conic Y^2-2XZ {} Y^2-XZ {}; singer monomials {}; failures {bad:?}",
            get(&q3, "spaces/triangle")?.detail["space_dims"],
            conic.detail["contains_Y^2-2XZ"],
            conic.detail["contains_Y^2-XZ"],
            get(&q2, "spaces/singer")?.detail["net_monomials_found"]
        ),
    })
}

fn quotients() -> Result<Verdict, String> {
    let mut bad = Vec::new();
    let mut notes = Vec::new();
    for q in [3, 5] {
        let r = suite(SuiteId::QuotientIdentities, params(q, None, None), &[])?;
        bad.extend(failures(&r));
        let s = get(&r, "quotient/sylow-p")?;
        notes.push(format!(
            "q={q}: constant {} other sign divides {}",
            s.detail["constant"], s.detail["other_sign_divides"]
        ));
    }
    Ok(Verdict { passed: bad.is_empty(), detail: format!("{}; failures {bad:?}", notes.join(", ")) })
}

type Criterion = (u32, &'static str, Duration, fn() -> Result<Verdict, String>);

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        (1, "DGZ point counts", Duration::from_secs(190), dgz_counts),
        (2, "PGU pencil at n=2", Duration::from_secs(60), pgu_pencil),
        (3, "invariance matrix", Duration::from_secs(120), invariance_matrix),
        (4, "factorization identities", Duration::from_secs(10), identities),
        (5, "singularity structure", Duration::from_secs(60), singularities),
        (6, "group orders", Duration::from_secs(120), group_orders),
        (7, "invariant spaces", Duration::from_secs(60), invariant_spaces),
        (8, "quotient identities", Duration::from_secs(10), quotients),
    ];
    let mut all = true;
    for (n, title, budget, run) in criteria {
        let start = Instant::now();
        let v = run().unwrap_or_else(|e| Verdict { passed: false, detail: format!("error: {e}") });
        let t = start.elapsed();
        all &= v.passed;
        println!(
            "{} criterion {n} ({title}) [{:.1}s, budget {}s]: {}",
            if v.passed { "PASS" } else { "FAIL" },
            t.as_secs_f64(),
            budget.as_secs(),
            v.detail
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
