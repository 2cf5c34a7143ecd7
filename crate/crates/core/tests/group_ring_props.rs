mod common;

use common::*;
use proptest::prelude::*;
use rand::Rng;
use ttcover::cyclotomic::CyclotomicField;
use ttcover::group_ring::LaurentElement;
use ttcover::ring::Ring;

#[test]
fn special_lattice_identity() {
    assert_eq!(checks::special_lattice(100, 2024), 100);
}

#[test]
fn finite_parseval() {
    assert_eq!(checks::parseval(100, 7), 100);
}

fn element(seed: u64, d: usize) -> LaurentElement {
    let mut r = rng(seed);
    let support = r.gen_range(0..=5);
    random_laurent(&mut r, d, support, 3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(sa in any::<u64>(), sb in any::<u64>(), sc in any::<u64>(), d in 1usize..=3) {
        let (a, b, c) = (element(sa, d), element(sb, d), element(sc, d));
        let ab_c = a.try_mul(&b).unwrap().try_mul(&c).unwrap();
        let a_bc = a.try_mul(&b.try_mul(&c).unwrap()).unwrap();
        prop_assert_eq!(ab_c, a_bc);
        let left = a.try_mul(&b.try_add(&c).unwrap()).unwrap();
        let right = a.try_mul(&b).unwrap().try_add(&a.try_mul(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        prop_assert_eq!(a.try_mul(&b).unwrap(), b.try_mul(&a).unwrap());
        prop_assert!(a.try_sub(&a).unwrap().is_zero());
        prop_assert_eq!(a.try_mul(&LaurentElement::one(d)).unwrap(), a.clone());
        prop_assert_eq!(
            a.try_mul(&b).unwrap().augmentation(),
            a.augmentation() * b.augmentation()
        );
    }

    #[test]
    fn specialization_is_a_homomorphism(sa in any::<u64>(), sb in any::<u64>(), sx in any::<u64>(), d in 1usize..=3) {
        let (a, b) = (element(sa, d), element(sb, d));
        let xi = random_character(&mut rng(sx), d, 12);
        let field = CyclotomicField::new(xi.order);
        let prod = a.try_mul(&b).unwrap().specialize(&xi, &field).unwrap();
        let sum = a.try_add(&b).unwrap().specialize(&xi, &field).unwrap();
        let (fa, fb) = (a.specialize(&xi, &field).unwrap(), b.specialize(&xi, &field).unwrap());
        prop_assert_eq!(prod, field.mul(&fa, &fb));
        prop_assert_eq!(sum, field.add(&fa, &fb));
        let numeric = a.specialize_numeric(&xi.values()).unwrap();
        let exact = field.to_complex(&fa);
        prop_assert!((numeric - exact).norm() < 1e-9 * (1.0 + a.l2_norm()));
    }
}
