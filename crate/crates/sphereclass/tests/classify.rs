use proptest::prelude::*;

use sphereclass::classify::{
    classify, classify_smooth_sphere, classify_symplectic_sphere, Representable, TypeTag,
};
use sphereclass::configuration::enumerate_exceptional;
use sphereclass::constructor::family_type3;
use sphereclass::dmgroup::{replay, replay_rational, Move};
use sphereclass::genus::{eta_k, gt_dim};
use sphereclass::lattice::canonical_std;
use sphereclass::{BigInt, Class, Manifold, RationalClass};

fn any_class() -> impl Strategy<Value = (Manifold, Class)> {
    (0usize..=8, any::<bool>(), 1u32..=4).prop_flat_map(|(k, ruled, h)| {
        if ruled {
            (
                -50i64..=50,
                -50i64..=50,
                prop::collection::vec(-50i64..=50, k),
            )
                .prop_map(move |(s, f, c)| {
                    (
                        Manifold::ruled(h, k).unwrap(),
                        Class::Ruled(sphereclass::RuledClass::from_i64(s, f, &c)),
                    )
                })
                .boxed()
        } else {
            (-50i64..=50, prop::collection::vec(-50i64..=50, k))
                .prop_map(move |(a, b)| {
                    (
                        Manifold::rational(k),
                        Class::Rational(RationalClass::from_i64(a, &b)),
                    )
                })
                .boxed()
        }
    })
}

fn rational_moves(k: usize) -> impl Strategy<Value = Vec<Move>> {
    let i = 1..=k;
    prop::collection::vec((0u8..4, i.clone(), i.clone(), i), 0..10).prop_map(move |v| {
        v.into_iter()
            .filter_map(|(t, i, j, l)| match t {
                0 => Some(Move::FlipE(i)),
                1 if i != j => Some(Move::SwapE(i, j)),
                2 if i != j && j != l && i != l => Some(Move::Cremona(i, j, l)),
                3 => Some(Move::NegateAll),
                _ => None,
            })
            .collect()
    })
}

fn sphere_range_class() -> impl Strategy<Value = (RationalClass, Vec<Move>)> {
    (1usize..=7)
        .prop_flat_map(|k| {
            (
                (-4i64..=4, prop::collection::vec(-4i64..=4, k))
                    .prop_map(|(a, b)| RationalClass::from_i64(a, &b)),
                rational_moves(k),
            )
        })
        .prop_filter("square in -4..=-1", |(a, _)| {
            let s = a.square();
            s >= BigInt::from(-4) && s <= BigInt::from(-1)
        })
}

proptest! {
    #[test]
    fn genus_identity((m, a) in any_class()) {
        let k = canonical_std(&m);
        let lhs = eta_k(&a, &k, &m).unwrap() + gt_dim(&a, &k, &m).unwrap();
        prop_assert_eq!(lhs, a.dot(&a) + 1);
    }

    #[test]
    fn verdict_is_constant_on_orbits((a, mvs) in sphere_range_class()) {
        let b = replay_rational(&a, &mvs).unwrap();
        let (va, vb) = (classify_smooth_sphere(&a), classify_smooth_sphere(&b));
        prop_assert_eq!(va.representable, vb.representable);
        prop_assert_eq!(&va.type_tag, &vb.type_tag);
        prop_assert_eq!(&va.also_matches, &vb.also_matches);
    }

    #[test]
    fn yes_verdicts_replay_to_their_form((a, _m) in sphere_range_class()) {
        let v = classify_smooth_sphere(&a);
        if v.representable == Representable::Yes {
            let form = v.standard_form.clone().unwrap();
            prop_assert_eq!(&replay(&Class::Rational(a.clone()), &v.witness_moves).unwrap(), &form);
            let s = classify_symplectic_sphere(&a);
            if !s.never_symplectic {
                let f = form.as_rational().unwrap();
                let k = RationalClass::canonical_std(f.k());
                prop_assert_eq!(k.dot(f), -f.square() - 2);
            }
        }
    }

    #[test]
    fn never_symplectic_implies_smooth_yes((a, _m) in sphere_range_class()) {
        if classify_symplectic_sphere(&a).never_symplectic {
            prop_assert_eq!(classify_smooth_sphere(&a).representable, Representable::Yes);
        }
    }
}

#[test]
fn exceptional_classes_have_zero_genus_and_dimension() {
    for k in 1..=6 {
        let m = Manifold::rational(k);
        let kst = canonical_std(&m);
        let list = enumerate_exceptional(&kst, &m, 2).unwrap();
        assert!(list.complete);
        for e in &list.classes {
            assert_eq!(eta_k(e, &kst, &m).unwrap(), BigInt::from(0), "{e}");
            assert_eq!(gt_dim(e, &kst, &m).unwrap(), BigInt::from(0), "{e}");
        }
    }
}

#[test]
fn type3_round_trip() {
    for a in 2..=40 {
        let c = family_type3(a).unwrap();
        let v = classify_smooth_sphere(&c);
        assert_eq!(v.representable, Representable::Yes);
        assert_eq!(v.type_tag, TypeTag::T3(BigInt::from(a)));
        let m = Manifold::rational(10);
        let full = classify(&Class::Rational(c), &m, None).unwrap();
        assert!(full.symplectic.representable_for_some_form);
    }
}

#[test]
fn moved_type3_is_recognized() {
    let c = family_type3(3).unwrap();
    let moved = replay_rational(
        &c,
        &[Move::Cremona(1, 5, 10), Move::SwapE(2, 7), Move::FlipE(4)],
    )
    .unwrap();
    let v = classify_smooth_sphere(&moved);
    assert_eq!(v.type_tag, TypeTag::T3(BigInt::from(3)));
    assert_eq!(replay_rational(&moved, &v.witness_moves).unwrap(), c);
}
