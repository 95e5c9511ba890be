use curvelab::catalog::{build, CurveId, CurveParams};
use curvelab::geometry::count_points;
use curvelab::stohr::{extract_witness, frobenius_check, hefez_voloch_count};
use curvelab::Field;

#[test]
fn hermitian_meets_the_hefez_voloch_count() {
    for n in [2u64, 3] {
        let (p, k) = if n == 2 { (2, 2) } else { (3, 2) };
        let f = Field::new(p, k).unwrap();
        let herm = build(&f, CurveId::Hermitian, &CurveParams::new(n)).unwrap().poly;
        let w = extract_witness(&herm, n).unwrap().expect("hermitian is nonclassical");
        assert!(frobenius_check(&w, n * n).unwrap().verdict);
        let count = count_points(&herm, k, None).unwrap();
        assert_eq!(count as i128, hefez_voloch_count(n + 1, n * n));
    }
}

#[test]
fn fermat_has_no_witness_at_small_s() {
    let f = Field::new(5, 1).unwrap();
    let fermat = build(&f, CurveId::Fermat, &CurveParams::new(5)).unwrap().poly;
    assert!(extract_witness(&fermat, 5).unwrap().is_none());
}
