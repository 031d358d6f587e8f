use proptest::prelude::*;

use sphereclass::lattice::{basis, canonical_std, is_characteristic, pair, square};
use sphereclass::literal::{format_class, parse_class};
use sphereclass::{BigInt, Class, Manifold, RationalClass, RuledClass};

fn rational(k: usize) -> impl Strategy<Value = Class> {
    (-40i64..=40, prop::collection::vec(-40i64..=40, k))
        .prop_map(|(a, b)| Class::Rational(RationalClass::from_i64(a, &b)))
}

fn ruled(k: usize) -> impl Strategy<Value = Class> {
    (
        -40i64..=40,
        -40i64..=40,
        prop::collection::vec(-40i64..=40, k),
    )
        .prop_map(|(s, f, c)| Class::Ruled(RuledClass::from_i64(s, f, &c)))
}

/// A manifold and three classes on it.
fn triple() -> impl Strategy<Value = (Manifold, Class, Class, Class)> {
    (0usize..=9, any::<bool>(), 1u32..=4).prop_flat_map(|(k, is_ruled, h)| {
        if is_ruled {
            let m = Manifold::ruled(h, k).unwrap();
            (Just(m), ruled(k), ruled(k), ruled(k)).boxed()
        } else {
            (
                Just(Manifold::rational(k)),
                rational(k),
                rational(k),
                rational(k),
            )
                .boxed()
        }
    })
}

proptest! {
    #[test]
    fn pairing_is_symmetric_and_bilinear((m, a, b, c) in triple(), s in -20i64..=20, t in -20i64..=20) {
        prop_assert_eq!(pair(&a, &b, &m).unwrap(), pair(&b, &a, &m).unwrap());
        let (s, t) = (BigInt::from(s), BigInt::from(t));
        let combo = a.scaled(&s).add(&b.scaled(&t));
        let lhs = pair(&combo, &c, &m).unwrap();
        let rhs = s * pair(&a, &c, &m).unwrap() + t * pair(&b, &c, &m).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn characteristic_matches_basis_definition((m, a, _b, _c) in triple()) {
        let by_basis = basis(&m).iter().all(|x| {
            let d = pair(&a, x, &m).unwrap() - square(x, &m).unwrap();
            d % 2 == BigInt::from(0)
        });
        prop_assert_eq!(is_characteristic(&a, &m).unwrap(), by_basis);
    }

    #[test]
    fn one_positive_direction((m, a, _b, _c) in triple()) {
        // The positive direction is H resp. S + F; its orthogonal complement
        // is negative definite.
        let pos = match m {
            Manifold::Rational { .. } => parse_class("H", &m).unwrap(),
            Manifold::Ruled { .. } => parse_class("S +F", &m).unwrap(),
        };
        prop_assert!(square(&pos, &m).unwrap() > BigInt::from(0));
        let p = pair(&a, &pos, &m).unwrap();
        let pp = square(&pos, &m).unwrap();
        // pp * a - p * pos is orthogonal to pos.
        let perp = a.scaled(&pp).add(&pos.scaled(&(-p)));
        prop_assert_eq!(pair(&perp, &pos, &m).unwrap(), BigInt::from(0));
        let sq = square(&perp, &m).unwrap();
        prop_assert!(sq < BigInt::from(0) || perp.is_zero());
    }

    #[test]
    fn literal_round_trip((m, a, _b, _c) in triple()) {
        let text = format_class(&a);
        prop_assert_eq!(parse_class(&text, &m).unwrap(), a);
    }

    #[test]
    fn embedding_preserves_pairing((m, a, b, _c) in triple(), extra in 0usize..4) {
        let k2 = m.k() + extra;
        let m2 = match m {
            Manifold::Rational { .. } => Manifold::rational(k2),
            Manifold::Ruled { h, .. } => Manifold::ruled(h, k2).unwrap(),
        };
        let (a2, b2) = (a.embed(k2).unwrap(), b.embed(k2).unwrap());
        prop_assert_eq!(pair(&a2, &b2, &m2).unwrap(), pair(&a, &b, &m).unwrap());
    }
}

#[test]
fn canonical_classes_are_characteristic() {
    for k in 0..8 {
        let m = Manifold::rational(k);
        assert!(is_characteristic(&canonical_std(&m), &m).unwrap());
        for h in 1..4 {
            let m = Manifold::ruled(h, k).unwrap();
            assert!(is_characteristic(&canonical_std(&m), &m).unwrap());
        }
    }
}

#[test]
fn basis_gram_matrix() {
    let m = Manifold::ruled(2, 3).unwrap();
    let b = basis(&m);
    let gram: Vec<Vec<i64>> = b
        .iter()
        .map(|x| {
            b.iter()
                .map(|y| i64::try_from(pair(x, y, &m).unwrap()).unwrap())
                .collect()
        })
        .collect();
    assert_eq!(
        gram,
        vec![
            vec![0, 1, 0, 0, 0],
            vec![1, 0, 0, 0, 0],
            vec![0, 0, -1, 0, 0],
            vec![0, 0, 0, -1, 0],
            vec![0, 0, 0, 0, -1],
        ]
    );
    let r = Manifold::rational(2);
    let b = basis(&r);
    assert_eq!(square(&b[0], &r).unwrap(), BigInt::from(1));
    assert_eq!(pair(&b[1], &b[2], &r).unwrap(), BigInt::from(0));
    assert!(pair(
        &b[0],
        &parse_class("F", &Manifold::ruled(1, 0).unwrap()).unwrap(),
        &r
    )
    .is_err());
}
