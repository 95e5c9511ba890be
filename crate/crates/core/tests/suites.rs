use curvelab::suites::{ElemSpec, LambdaSpec};
use curvelab::{run_suite, run_suite_filtered, SuiteId, SuiteParams};

#[test]
fn suite_names_round_trip() {
    for id in SuiteId::ALL {
        assert_eq!(id.name().parse::<SuiteId>().unwrap(), id);
    }
    assert!("no-such-suite".parse::<SuiteId>().is_err());
}

#[test]
fn lambda_specs_parse() {
    assert_eq!("symbolic".parse::<LambdaSpec>().unwrap(), LambdaSpec::Symbolic);
    assert_eq!("scan".parse::<LambdaSpec>().unwrap(), LambdaSpec::Scan);
    assert_eq!("-1".parse::<LambdaSpec>().unwrap(), LambdaSpec::Value(ElemSpec::Int(-1)));
    assert_eq!("g^7".parse::<LambdaSpec>().unwrap(), LambdaSpec::Value(ElemSpec::GenPow(7)));
    assert!("g^x".parse::<LambdaSpec>().is_err());
}

#[test]
fn parameter_validation() {
    assert!(run_suite(SuiteId::Hemisystem, &SuiteParams::new(2)).is_err());
    assert!(run_suite(SuiteId::DgzPoints, &SuiteParams::new(6)).is_err());
    let wrong_n = SuiteParams { n: Some(2), ..SuiteParams::new(8) };
    assert!(run_suite(SuiteId::PguPencil, &wrong_n).is_err());
    let too_far = SuiteParams { ext: Some(7), ..SuiteParams::new(2) };
    assert!(run_suite(SuiteId::DgzPoints, &too_far).is_err());
    // lambda = 1 is a degenerate member of the hemisystem pencil
    let degenerate = SuiteParams { lambda: Some("1".parse().unwrap()), ..SuiteParams::new(3) };
    assert!(run_suite(SuiteId::Hemisystem, &degenerate).is_err());
}

#[test]
fn report_shape() {
    let r = run_suite(SuiteId::Triangle, &SuiteParams { jobs: Some(2), ..SuiteParams::new(3) }).unwrap();
    let v = serde_json::to_value(&r).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["suite"], "triangle");
    assert_eq!(v["params"]["q"], 3);
    assert_eq!(v["params"]["jobs"], 2);
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true));
    assert!(!r.generators.is_empty());
    assert!(r.fields.iter().any(|f| f.p == 3 && f.k == 1));
}

#[test]
fn control_pair_is_reported_as_expected_failure() {
    let r = run_suite_filtered(SuiteId::Pgl3Invariance, &SuiteParams::new(3), |n| n.contains("fermat")).unwrap();
    let c = r.check("invariance/fermat/pgl3").unwrap();
    assert!(c.passed);
    assert_eq!(c.detail["expected"], false);
    assert!(!c.detail["failing_generators"].as_array().unwrap().is_empty());
}

#[test]
fn explicit_lambda_selects_one_member() {
    let p = SuiteParams { lambda: Some("g^3".parse().unwrap()), ..SuiteParams::new(3) };
    let r = run_suite_filtered(SuiteId::Pgl2Pencil, &p, |n| n.starts_with("nonsingular/")).unwrap();
    assert_eq!(r.checks.len(), 1);
    assert!(r.passed());
}

#[test]
fn dgz_points_are_logged() {
    let r = run_suite(SuiteId::DgzPoints, &SuiteParams { ext: Some(3), ..SuiteParams::new(2) }).unwrap();
    let counts: Vec<u64> = r.point_counts.iter().map(|p| p.count).collect();
    assert_eq!(counts, vec![0, 14, 24]);
}
