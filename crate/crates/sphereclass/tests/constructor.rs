use proptest::prelude::*;

use sphereclass::constructor::{blowup, family_type3, singular_family, FamilyParams};
use sphereclass::dmgroup::is_reduced;
use sphereclass::{BigInt, Class, RationalClass};

fn adjunction(a: &RationalClass) -> bool {
    RationalClass::canonical_std(a.k()).dot(a) == -a.square() - 2
}

proptest! {
    #[test]
    fn singular_family_satisfies_adjunction(a in 3i64..=100, ks in prop::collection::vec(0i64..=4, 9)) {
        let mut arr = [0i64; 9];
        for (slot, v) in arr.iter_mut().zip(&ks) {
            *slot = (*v).min(a - 2);
        }
        let f = singular_family(&FamilyParams::new(a, arr).unwrap());
        prop_assert!(adjunction(&f.class));
        prop_assert_eq!(f.class.k(), f.m);
        let expected: i64 = arr.iter().map(|&k| k * k - 2 * k * (a - 1)).sum::<i64>() - 4;
        prop_assert_eq!(f.square, BigInt::from(expected));
    }

    #[test]
    fn blowup_lowers_square(a in -10i64..=10, b in prop::collection::vec(-10i64..=10, 0..5), mults in prop::collection::vec(0i64..=4, 0..4)) {
        let c = Class::Rational(RationalClass::from_i64(a, &b));
        let up = blowup(&c, &mults);
        let drop: i64 = mults.iter().map(|m| m * m).sum();
        prop_assert_eq!(up.dot(&up), c.dot(&c) - drop);
        prop_assert_eq!(up.k(), c.k() + mults.len());
    }
}

#[test]
fn type3_family_is_reduced_with_adjunction() {
    for a in 2..=100 {
        let c = family_type3(a).unwrap();
        assert!(adjunction(&c));
        assert!(is_reduced(&c));
        assert_eq!(c.square(), BigInt::from(-4));
    }
}
