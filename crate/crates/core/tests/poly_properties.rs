use curvelab::invariance::check_invariance;
use curvelab::{Elem, Field, Matrix3, Monomial, MultiPoly};
use proptest::prelude::*;

fn field() -> Field {
    Field::new(3, 2).unwrap()
}

fn form(f: &Field, d: u32, coeffs: &[u32]) -> MultiPoly {
    let mut terms = Vec::new();
    let mut i = 0;
    for a in 0..=d {
        for b in 0..=d - a {
            let c = Elem::from_index(coeffs[i % coeffs.len()] % f.order());
            terms.push((Monomial::new(a, b, d - a - b, 0), c));
            i += 1;
        }
    }
    MultiPoly::from_terms(f, terms)
}

fn matrix(f: &Field, e: &[u32]) -> Matrix3 {
    let g = |i: usize| Elem::from_index(e[i] % f.order());
    Matrix3::new(f, [[g(0), g(1), g(2)], [g(3), g(4), g(5)], [g(6), g(7), g(8)]])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn text_round_trip(coeffs in prop::collection::vec(0u32..9, 1..20), d in 1u32..6) {
        let f = field();
        let p = form(&f, d, &coeffs);
        prop_assert_eq!(MultiPoly::parse(&f, &p.to_text()).unwrap(), p);
    }

    #[test]
    fn substitution_composes(
        coeffs in prop::collection::vec(0u32..9, 1..12),
        a in prop::collection::vec(0u32..9, 9),
        b in prop::collection::vec(0u32..9, 9),
    ) {
        let f = field();
        let p = form(&f, 3, &coeffs);
        let (a, b) = (matrix(&f, &a), matrix(&f, &b));
        prop_assume!(!a.det().is_zero() && !b.det().is_zero());
        let lhs = p.linear_substitute(&a).unwrap().linear_substitute(&b).unwrap();
        let rhs = p.linear_substitute(&a.mul(&b).unwrap()).unwrap();
        prop_assert_eq!(&lhs, &rhs);
        prop_assert_eq!(p.linear_substitute_direct(&a).unwrap(), p.linear_substitute(&a).unwrap());
    }

    #[test]
    fn exact_division_inverts_multiplication(
        x in prop::collection::vec(0u32..9, 1..10),
        y in prop::collection::vec(1u32..9, 1..10),
    ) {
        let f = field();
        let (p, q) = (form(&f, 2, &x), form(&f, 3, &y));
        prop_assume!(!q.is_zero());
        let prod = p.try_mul(&q).unwrap();
        prop_assert_eq!(prod.divide_exact(&q).unwrap(), Some(p));
    }
}

#[test]
fn singular_substitution_is_rejected() {
    let f = field();
    let p = MultiPoly::parse(&f, "0 X^2 + 0 Y Z").unwrap();
    let zero_row = Matrix3::new(&f, [[Elem::ONE, Elem::ZERO, Elem::ZERO], [Elem::ZERO; 3], [Elem::ZERO, Elem::ZERO, Elem::ONE]]);
    assert!(p.linear_substitute(&zero_row).is_err());
    // the direct expansion has no such restriction
    assert_eq!(p.linear_substitute_direct(&zero_row).unwrap(), MultiPoly::parse(&f, "0 X^2").unwrap());
}

#[test]
fn invariance_scalars_multiply_along_products() {
    let f = field();
    let herm = MultiPoly::parse(&f, "0 X^4 + 0 Y^4 + 0 Z^4").unwrap();
    let g = f.generator();
    let a = Matrix3::diag(&f, [f.mul(g, g), Elem::ONE, Elem::ONE]);
    let swap = Matrix3::permutation(&f, [1, 0, 2]);
    let ca = check_invariance(&herm, &a).unwrap().unwrap();
    let cs = check_invariance(&herm, &swap).unwrap().unwrap();
    let prod = a.mul(&swap).unwrap();
    assert_eq!(check_invariance(&herm, &prod).unwrap(), Some(f.mul(ca, cs)));
}
