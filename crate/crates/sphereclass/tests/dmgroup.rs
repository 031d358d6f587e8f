use proptest::prelude::*;

use sphereclass::dmgroup::{
    apply, equivalent, is_reduced, reduce, reduce_ruled, reflect, replay, Move, ReductionStatus,
};
use sphereclass::lattice::canonical_std;
use sphereclass::{BigInt, Class, Manifold, RationalClass, RuledClass};

fn moves(k: usize, ruled: bool) -> impl Strategy<Value = Vec<Move>> {
    let idx = move || 1..=k.max(1);
    let one = prop_oneof![
        idx().prop_map(|i| (0u8, i, 0, 0)),
        (idx(), idx()).prop_map(|(i, j)| (1u8, i, j, 0)),
        (idx(), idx(), idx()).prop_map(|(i, j, l)| (2u8, i, j, l)),
        Just((3u8, 0, 0, 0)),
    ]
    .prop_filter_map("distinct indices", move |(t, i, j, l)| {
        Some(match (t, ruled) {
            (0, false) => Move::FlipE(i),
            (0, true) => Move::RuledFlip(i),
            (1, _) if i != j => Move::SwapE(i, j),
            (2, false) if k >= 3 && i != j && j != l && i != l => Move::Cremona(i, j, l),
            (2, true) if i != j => Move::RuledCremona(i, j),
            (3, false) => Move::NegateAll,
            _ => return None,
        })
    });
    prop::collection::vec(one, 0..8)
}

fn rational_case() -> impl Strategy<Value = (RationalClass, Vec<Move>)> {
    (1usize..=10).prop_flat_map(|k| {
        (
            (-30i64..=30, prop::collection::vec(-30i64..=30, k))
                .prop_map(|(a, b)| RationalClass::from_i64(a, &b)),
            moves(k, false),
        )
    })
}

fn ruled_case() -> impl Strategy<Value = (u32, RuledClass, Vec<Move>)> {
    (1u32..=3, 1usize..=8).prop_flat_map(|(h, k)| {
        (
            Just(h),
            (
                -20i64..=20,
                -20i64..=20,
                prop::collection::vec(-20i64..=20, k),
            )
                .prop_map(|(s, f, c)| RuledClass::from_i64(s, f, &c)),
            moves(k, true),
        )
    })
}

fn preserves_k(mv: &Move) -> bool {
    matches!(
        mv,
        Move::SwapE(..) | Move::Cremona(..) | Move::RuledCremona(..)
    )
}

proptest! {
    #[test]
    fn move_roots_are_involutive_isometries((a, mvs) in rational_case(), b in prop::collection::vec(-30i64..=30, 11)) {
        let m = Manifold::rational(a.k());
        let a = Class::Rational(a);
        let b = Class::Rational(RationalClass::from_i64(b[0], &b[1..=m.k()]));
        let kst = canonical_std(&m);
        for mv in &mvs {
            let Some(c) = mv.root(&m) else { continue };
            let ra = reflect(&a, &c, &m).unwrap();
            prop_assert_eq!(&reflect(&ra, &c, &m).unwrap(), &a);
            prop_assert_eq!(&ra, &apply(&a, mv).unwrap());
            prop_assert_eq!(ra.dot(&reflect(&b, &c, &m).unwrap()), a.dot(&b));
            if preserves_k(mv) {
                prop_assert_eq!(kst.dot(&ra), kst.dot(&a));
            }
        }
    }

    #[test]
    fn ruled_moves_are_involutive_isometries((h, a, mvs) in ruled_case()) {
        let m = Manifold::ruled(h, a.k()).unwrap();
        let a = Class::Ruled(a);
        let kst = canonical_std(&m);
        for mv in &mvs {
            let b = apply(&a, mv).unwrap();
            prop_assert_eq!(&apply(&b, mv).unwrap(), &a);
            prop_assert_eq!(b.dot(&b), a.dot(&a));
            if preserves_k(mv) {
                prop_assert_eq!(kst.dot(&b), kst.dot(&a));
            }
        }
    }

    #[test]
    fn reduce_invariants((a, _m) in rational_case()) {
        let r = reduce(&a);
        prop_assert_eq!(r.result.square(), a.square());
        prop_assert_eq!(&sphereclass::dmgroup::replay_rational(&a, &r.moves).unwrap(), &r.result);
        prop_assert_eq!(&reduce(&r.result).result, &r.result);
        if r.status == ReductionStatus::Reduced {
            prop_assert!(is_reduced(&r.result));
        }
    }

    #[test]
    fn reduce_is_constant_on_orbits((a, mvs) in rational_case()) {
        let b = match replay(&Class::Rational(a.clone()), &mvs).unwrap() {
            Class::Rational(b) => b,
            Class::Ruled(_) => unreachable!(),
        };
        let (ra, rb) = (reduce(&a), reduce(&b));
        if ra.status == ReductionStatus::Reduced || rb.status == ReductionStatus::Reduced {
            prop_assert_eq!(ra.result, rb.result);
        }
    }
}

fn small_class(k: usize) -> impl Strategy<Value = RationalClass> {
    (-4i64..=4, prop::collection::vec(-4i64..=4, k))
        .prop_map(|(a, b)| RationalClass::from_i64(a, &b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn equivalent_is_an_equivalence((k, x, y, z) in (3usize..=5).prop_flat_map(|k| (Just(k), small_class(k), small_class(k), small_class(k))), mvs in moves(5, false)) {
        let _ = k;
        prop_assert!(equivalent(&x, &x).unwrap());
        let xy = equivalent(&x, &y).unwrap();
        prop_assert_eq!(xy, equivalent(&y, &x).unwrap());
        let yz = equivalent(&y, &z).unwrap();
        if xy && yz {
            prop_assert!(equivalent(&x, &z).unwrap());
        }
        let mvs: Vec<Move> = mvs.into_iter().filter(|m| m.indices().iter().all(|&i| i <= x.k())).collect();
        let moved = match replay(&Class::Rational(x.clone()), &mvs).unwrap() {
            Class::Rational(v) => v,
            Class::Ruled(_) => unreachable!(),
        };
        prop_assert!(equivalent(&x, &moved).unwrap());
    }
}

#[test]
fn window_example() {
    let a = RationalClass::from_i64(1, &[2, 1, 0]);
    let r = reduce(&a);
    assert_eq!(r.status, ReductionStatus::ExceptionalWindow);
    assert_eq!(r.result.square(), BigInt::from(-4));
}

#[test]
fn ruled_reduction_replays() {
    let m = Manifold::ruled(2, 4).unwrap();
    let a = sphereclass::literal::parse_class("-2F +E1 +E2 +E3 -E4", &m).unwrap();
    let r = reduce_ruled(a.as_ruled().unwrap()).unwrap();
    assert_eq!(
        replay(&a, &r.moves).unwrap(),
        Class::Ruled(r.result.clone())
    );
    assert_eq!(r.result.square(), a.as_ruled().unwrap().square());
}
