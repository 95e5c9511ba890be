use curvelab::{Elem, Field};
use proptest::prelude::*;

fn fields() -> Vec<Field> {
    [(2, 1), (2, 4), (3, 2), (5, 3), (7, 2), (2, 12)].into_iter().map(|(p, k)| Field::new(p, k).unwrap()).collect()
}

fn elem(f: &Field, i: u64) -> Elem {
    Elem::from_index((i % f.order() as u64) as u32)
}

proptest! {
    #[test]
    fn ring_axioms(a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        for f in fields() {
            let (a, b, c) = (elem(&f, a), elem(&f, b), elem(&f, c));
            prop_assert_eq!(f.add(a, b), f.add(b, a));
            prop_assert_eq!(f.mul(a, b), f.mul(b, a));
            prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
            prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
            prop_assert_eq!(f.add(a, f.neg(a)), Elem::ZERO);
            prop_assert_eq!(f.sub(f.add(a, b), b), a);
        }
    }

    #[test]
    fn inverses_and_frobenius(a in any::<u64>(), b in any::<u64>()) {
        for f in fields() {
            let (a, b) = (elem(&f, a), elem(&f, b));
            if !a.is_zero() {
                prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), Elem::ONE);
                prop_assert_eq!(f.pow(a, f.order() as u64 - 1), Elem::ONE);
            }
            let p = f.characteristic() as u64;
            prop_assert_eq!(f.pow(f.add(a, b), p), f.add(f.pow(a, p), f.pow(b, p)));
            prop_assert_eq!(f.frobenius_inv(f.frobenius(a, 1), 1), a);
        }
    }
}

#[test]
fn generator_has_full_order() {
    for f in fields() {
        assert_eq!(f.multiplicative_order(f.generator()), Some(f.order() as u64 - 1));
    }
}

#[test]
fn subfields_are_closed() {
    let f = Field::new(3, 4).unwrap();
    let sub = f.subfield_elements(2).unwrap();
    assert_eq!(sub.len(), 9);
    for &a in &sub {
        for &b in &sub {
            assert!(f.is_in_subfield(f.mul(a, b), 2).unwrap());
            assert!(f.is_in_subfield(f.add(a, b), 2).unwrap());
        }
    }
}

#[test]
fn embedding_respects_arithmetic() {
    let small = Field::new(2, 4).unwrap();
    let big = Field::new(2, 12).unwrap();
    let img = small.embedding_into(&big).unwrap();
    for a in small.elements() {
        for b in small.elements().step_by(3) {
            let m = |x| small.map_into(&big, img, x);
            assert_eq!(m(small.mul(a, b)), big.mul(m(a), m(b)));
            assert_eq!(m(small.add(a, b)), big.add(m(a), m(b)));
        }
    }
}
